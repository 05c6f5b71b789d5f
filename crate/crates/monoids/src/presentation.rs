//! Monoid presentations: a finite generator count and finitely many relation
//! pairs `u = v` between formal nonnegative combinations. Presentations are
//! the input format; everything structural happens after `integralize`.

use crate::monoid::IntegralMonoid;
use crate::{fmt_vec, MonoidError};
use lattice::{lattice_quotient, FinAbGroup, IntMatrix};
use num_bigint::BigInt;
use num_traits::Signed;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A commutative monoid presented by `num_gens` generators and relations
/// `u = v` with `u, v` nonnegative exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidPresentation {
    num_gens: usize,
    relations: Vec<(Vec<BigInt>, Vec<BigInt>)>,
}

impl MonoidPresentation {
    pub fn new(
        num_gens: usize,
        relations: Vec<(Vec<BigInt>, Vec<BigInt>)>,
    ) -> Result<Self, MonoidError> {
        for (u, v) in &relations {
            if u.len() != num_gens || v.len() != num_gens {
                return Err(MonoidError::Shape(format!(
                    "relation sides have lengths {} and {}, expected {num_gens}",
                    u.len(),
                    v.len()
                )));
            }
            for x in u.iter().chain(v) {
                if x.is_negative() {
                    return Err(MonoidError::Shape(format!(
                        "negative exponent in relation {} = {}",
                        fmt_vec(u),
                        fmt_vec(v)
                    )));
                }
            }
        }
        Ok(MonoidPresentation { num_gens, relations })
    }

    /// The free commutative monoid on `n` generators.
    pub fn free(n: usize) -> Self {
        MonoidPresentation { num_gens: n, relations: Vec::new() }
    }

    pub fn from_i64(num_gens: usize, relations: &[(&[i64], &[i64])]) -> Self {
        let rels = relations
            .iter()
            .map(|(u, v)| {
                (
                    u.iter().map(|&x| BigInt::from(x)).collect(),
                    v.iter().map(|&x| BigInt::from(x)).collect(),
                )
            })
            .collect();
        Self::new(num_gens, rels).expect("literal relations are well formed")
    }

    pub fn num_gens(&self) -> usize {
        self.num_gens
    }

    pub fn relations(&self) -> &[(Vec<BigInt>, Vec<BigInt>)] {
        &self.relations
    }

    /// Columns `u - v`, one per relation: the lattice the group completion
    /// quotients out.
    pub(crate) fn relation_differences(&self) -> IntMatrix {
        let mut m = IntMatrix::zero(self.num_gens, self.relations.len());
        for (j, (u, v)) in self.relations.iter().enumerate() {
            for i in 0..self.num_gens {
                m.set(i, j, &u[i] - &v[i]);
            }
        }
        m
    }
}

impl Serialize for MonoidPresentation {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        #[derive(Serialize)]
        struct Inner {
            num_gens: usize,
            relations: Vec<[Vec<String>; 2]>,
        }
        let relations = self
            .relations
            .iter()
            .map(|(u, v)| [lattice::decimal::encode_vec(u), lattice::decimal::encode_vec(v)])
            .collect();
        let mut s = ser.serialize_struct("MonoidPresentation", 1)?;
        s.serialize_field("presentation", &Inner { num_gens: self.num_gens, relations })?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for MonoidPresentation {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Inner {
            num_gens: usize,
            relations: Vec<[Vec<String>; 2]>,
        }
        #[derive(Deserialize)]
        struct Outer {
            presentation: Inner,
        }
        let outer = Outer::deserialize(de)?;
        let mut relations = Vec::new();
        for [u, v] in &outer.presentation.relations {
            let u = lattice::decimal::decode_vec(u).map_err(D::Error::custom)?;
            let v = lattice::decimal::decode_vec(v).map_err(D::Error::custom)?;
            relations.push((u, v));
        }
        MonoidPresentation::new(outer.presentation.num_gens, relations)
            .map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// Group completion of a presented monoid: the quotient of `Z^s` by the
/// relation differences, together with the image of each generator.
pub fn group_completion(p: &MonoidPresentation) -> (FinAbGroup, Vec<Vec<BigInt>>) {
    let q = lattice_quotient(p.num_gens(), &p.relation_differences());
    let images = (0..p.num_gens())
        .map(|j| q.group.reduce(&q.proj.column(j)))
        .collect();
    (q.group, images)
}

/// The universal integral quotient of a presented monoid: its image inside
/// the group completion, together with the image of each presentation
/// generator. Generators that map to zero are discarded from the integral
/// monoid's generating set (the returned image list still records them).
pub fn integralize(p: &MonoidPresentation) -> (IntegralMonoid, Vec<Vec<BigInt>>) {
    let (group, images) = group_completion(p);
    let monoid = IntegralMonoid::new(group, images.clone())
        .expect("generator images span their own group completion")
        .minimalized();
    (monoid, images)
}

//! The Kummer property for homomorphisms of saturated monoids — injective,
//! with finite group cokernel, and with a positive multiple of every target
//! element landing in the monoid image — decided exactly and reported with
//! witnesses.

use lattice::{cokernel, decimal, kernel_subgroup, solve_integer, FinAbGroup, GroupHom};
use monoids::MonoidHom;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::{fmt_vec, KummerError};

/// The unique preimage of `y` under the group completion of `u`, or `None`
/// when `y` is not in the image subgroup. Only meaningful for injective
/// group maps, where the preimage is well defined.
pub(crate) fn group_preimage(u: &MonoidHom, y: &[BigInt]) -> Option<Vec<BigInt>> {
    let g = u.gp_hom();
    let aug = g.matrix().hstack(&g.target().relation_matrix());
    let sol = solve_integer(&aug, y)?;
    Some(g.source().reduce(&sol[..g.source().coords()]))
}

/// Whether `y` lies in the monoid image `u(P)`, for injective `u`: it must
/// descend through the group completion, and the preimage must be a member
/// of the source.
pub(crate) fn in_monoid_image(u: &MonoidHom, y: &[BigInt]) -> Result<bool, KummerError> {
    match group_preimage(u, y) {
        None => Ok(false),
        Some(x) => Ok(u.source().member(&x)?),
    }
}

/// The clause of the Kummer definition that failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KummerClause {
    /// The group completion has a nonzero kernel; the witness is a nonzero
    /// source element mapping to zero.
    NotInjective,
    /// The group cokernel has positive free rank; the witness is the first
    /// target generator whose class has infinite order.
    InfiniteCokernel,
    /// The witness is the first target generator no positive multiple of
    /// which lies in the monoid image.
    NoMultipleInImage,
}

/// Outcome of the Kummer test. Failures carry the violated clause and the
/// first witness in the stored (ascending) generator order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KummerVerdict {
    pub is_kummer: bool,
    pub failure: Option<(KummerClause, Vec<BigInt>)>,
}

impl Serialize for KummerVerdict {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match &self.failure {
            None => {
                let mut s = ser.serialize_struct("KummerVerdict", 1)?;
                s.serialize_field("is_kummer", &self.is_kummer)?;
                s.end()
            }
            Some((clause, witness)) => {
                let mut s = ser.serialize_struct("KummerVerdict", 3)?;
                s.serialize_field("is_kummer", &self.is_kummer)?;
                s.serialize_field("clause", clause)?;
                s.serialize_field("witness", &decimal::encode_vec(witness))?;
                s.end()
            }
        }
    }
}

/// Decides whether `u` is a Kummer map. Testing the multiple clause on the
/// generators alone suffices, because multiples distribute over sums:
/// certificates for the generators combine into one for any element.
/// Saturation of the source is also what closes each generator's test: the
/// group-level multiples of `q` in the image are exactly the multiples of
/// its cokernel class order `d`, and if the preimage of `d·q` fails to be a
/// member, no larger multiple can repair it.
pub fn is_kummer(u: &MonoidHom) -> Result<KummerVerdict, KummerError> {
    if !u.source().predicates().is_saturated || !u.target().predicates().is_saturated {
        return Err(KummerError::Precondition(
            "the Kummer test expects saturated source and target".into(),
        ));
    }
    let fail = |clause, witness| {
        Ok(KummerVerdict {
            is_kummer: false,
            failure: Some((clause, witness)),
        })
    };
    let (ker, ker_incl) = kernel_subgroup(u.gp_hom());
    if !ker.is_trivial() {
        let mut e = ker.zero();
        e[0] = BigInt::one();
        return fail(KummerClause::NotInjective, ker_incl.apply(&e));
    }
    let (g, proj) = cokernel(u.gp_hom());
    if !g.is_finite() {
        let witness = u
            .target()
            .generators()
            .iter()
            .find(|q| {
                let class = proj.apply(q);
                class[..g.free_rank()].iter().any(|x| !x.is_zero())
            })
            .expect("generator classes generate the cokernel, so one has infinite order")
            .clone();
        return fail(KummerClause::InfiniteCokernel, witness);
    }
    for q in u.target().generators() {
        let d = g.elem_order(&proj.apply(q));
        let scaled: Vec<BigInt> = q.iter().map(|x| &d * x).collect();
        let x = group_preimage(u, &u.target().ambient().reduce(&scaled))
            .expect("the class-order multiple lies in the image subgroup");
        if !u.source().member(&x)? {
            return fail(KummerClause::NoMultipleInImage, q.clone());
        }
    }
    Ok(KummerVerdict {
        is_kummer: true,
        failure: None,
    })
}

/// The cokernel of the group completion of `u`, in invariant-factor form.
pub fn cokernel_group(u: &MonoidHom) -> FinAbGroup {
    cokernel(u.gp_hom()).0
}

/// A homomorphism certified Kummer, with its classification data: the
/// finite cokernel `G` of the group completion, the class map onto it, and
/// the exponent of `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KummerData {
    hom: MonoidHom,
    cokernel: FinAbGroup,
    class_map: GroupHom,
    exponent: BigInt,
}

impl KummerData {
    /// Runs the Kummer test and bundles the data; errors with the violated
    /// clause and witness when the test fails. The exponent multiple of
    /// every target generator is checked to lie in the monoid image — that
    /// is the fact the downstream constructions lean on.
    pub fn new(hom: MonoidHom) -> Result<Self, KummerError> {
        let verdict = is_kummer(&hom)?;
        if let Some((clause, witness)) = verdict.failure {
            return Err(KummerError::Precondition(format!(
                "not a Kummer map: {clause:?} witnessed by {}",
                fmt_vec(&witness)
            )));
        }
        let (g, class_map) = cokernel(hom.gp_hom());
        let exponent = g.exponent().expect("a certified cokernel is finite");
        for q in hom.target().generators() {
            let scaled: Vec<BigInt> = q.iter().map(|x| &exponent * x).collect();
            assert!(
                in_monoid_image(&hom, &hom.target().ambient().reduce(&scaled))?,
                "the exponent multiple of a target generator must pull back into the source"
            );
        }
        Ok(KummerData {
            hom,
            cokernel: g,
            class_map,
            exponent,
        })
    }

    pub fn hom(&self) -> &MonoidHom {
        &self.hom
    }

    /// `Q^gp / u^gp(P^gp)`.
    pub fn cokernel_group(&self) -> &FinAbGroup {
        &self.cokernel
    }

    /// The projection of the target's ambient group onto the cokernel.
    pub fn class_map(&self) -> &GroupHom {
        &self.class_map
    }

    /// The smallest `e ≥ 1` with `e·G = 0`.
    pub fn exponent(&self) -> &BigInt {
        &self.exponent
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use monoids::IntegralMonoid;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn biv(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| bi(x)).collect()
    }

    fn mult(n: u64) -> MonoidHom {
        MonoidHom::multiplication(&IntegralMonoid::nonneg(1), n)
    }

    #[test]
    fn multiplication_maps_are_kummer_with_cyclic_cokernel() {
        for n in [1u64, 2, 5] {
            let u = mult(n);
            let v = is_kummer(&u).unwrap();
            assert!(v.is_kummer && v.failure.is_none());
            assert_eq!(cokernel_group(&u), FinAbGroup::cyclic(n));
        }
        let d = KummerData::new(mult(4)).unwrap();
        assert_eq!(*d.exponent(), bi(4));
        assert_eq!(d.cokernel_group(), &FinAbGroup::cyclic(4));
        // The class map carries the generator to a generator of the
        // cokernel.
        let class = d.class_map().apply(&biv(&[1]));
        assert_eq!(d.cokernel_group().elem_order(&class), bi(4));
    }

    #[test]
    fn identity_is_kummer_with_trivial_cokernel() {
        let half = IntegralMonoid::new(
            FinAbGroup::new(1, vec![bi(2)]).unwrap(),
            vec![biv(&[1, 0]), biv(&[0, 1])],
        )
        .unwrap();
        let u = MonoidHom::identity(&half);
        let v = is_kummer(&u).unwrap();
        assert!(v.is_kummer);
        assert!(cokernel_group(&u).is_trivial());
        assert_eq!(*KummerData::new(u).unwrap().exponent(), bi(1));
    }

    #[test]
    fn axis_inclusion_fails_with_infinite_cokernel() {
        let u = MonoidHom::new(
            IntegralMonoid::nonneg(1),
            IntegralMonoid::nonneg(2),
            vec![biv(&[1, 0])],
        )
        .unwrap();
        let v = is_kummer(&u).unwrap();
        assert!(!v.is_kummer);
        assert_eq!(
            v.failure,
            Some((KummerClause::InfiniteCokernel, biv(&[0, 1])))
        );
        assert!(KummerData::new(u).is_err());
    }

    #[test]
    fn group_like_targets_fail_the_multiple_clause() {
        let u = MonoidHom::new(
            IntegralMonoid::nonneg(1),
            IntegralMonoid::full_group(FinAbGroup::free(1)),
            vec![biv(&[1])],
        )
        .unwrap();
        let v = is_kummer(&u).unwrap();
        assert_eq!(v.failure, Some((KummerClause::NoMultipleInImage, biv(&[-1]))));
    }

    #[test]
    fn collapsing_a_torsion_unit_fails_injectivity() {
        let u = MonoidHom::new(
            IntegralMonoid::full_group(FinAbGroup::cyclic(2)),
            IntegralMonoid::trivial(),
            vec![vec![]],
        )
        .unwrap();
        let v = is_kummer(&u).unwrap();
        assert_eq!(v.failure, Some((KummerClause::NotInjective, biv(&[1]))));
    }

    #[test]
    fn unsaturated_inputs_are_rejected() {
        let numerical =
            IntegralMonoid::new(FinAbGroup::free(1), vec![biv(&[2]), biv(&[3])]).unwrap();
        let u = MonoidHom::identity(&numerical);
        assert!(matches!(is_kummer(&u), Err(KummerError::Precondition(_))));
    }

    #[test]
    fn independent_axis_levels_merge_in_the_cokernel() {
        // Generators are stored sorted, so (0,1) comes first: send it to
        // (0,3) and (1,0) to (2,0).
        let p = IntegralMonoid::nonneg(2);
        let u = MonoidHom::new(p.clone(), p, vec![biv(&[0, 3]), biv(&[2, 0])]).unwrap();
        assert_eq!(cokernel_group(&u), FinAbGroup::cyclic(6));
        assert!(is_kummer(&u).unwrap().is_kummer);
    }

    #[test]
    fn multiples_extend_from_generators_to_sums() {
        // The test itself only looks at generators; check on a grid of sums
        // that the class-order multiple of an arbitrary element really does
        // land in the image, which is what additivity promises.
        let p = IntegralMonoid::nonneg(2);
        let u = MonoidHom::new(p.clone(), p, vec![biv(&[0, 3]), biv(&[2, 0])]).unwrap();
        let d = KummerData::new(u.clone()).unwrap();
        for a in 0..4i64 {
            for b in 0..4i64 {
                let x = biv(&[a, b]);
                let ord = d.cokernel_group().elem_order(&d.class_map().apply(&x));
                let scaled: Vec<BigInt> = x.iter().map(|v| v * &ord).collect();
                assert!(in_monoid_image(&u, &scaled).unwrap());
            }
        }
    }

    #[test]
    fn verdict_json_shapes() {
        let ok = is_kummer(&mult(6)).unwrap();
        assert_eq!(
            serde_json::to_value(&ok).unwrap(),
            serde_json::json!({"is_kummer": true})
        );
        let bad = is_kummer(
            &MonoidHom::new(
                IntegralMonoid::nonneg(1),
                IntegralMonoid::nonneg(2),
                vec![biv(&[1, 0])],
            )
            .unwrap(),
        )
        .unwrap();
        assert_eq!(
            serde_json::to_value(&bad).unwrap(),
            serde_json::json!({
                "is_kummer": false,
                "clause": "infinite_cokernel",
                "witness": ["0", "1"],
            })
        );
    }
}

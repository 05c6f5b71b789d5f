//! The monoids between a free monoid and a division of it: writing `P'` for
//! `⊕ (1/d_i)·Z≥0` in the fine coordinates (where the basis vector `e_i`
//! stands for `e_i/d_i`), the monoids `Q` with `P ⊆ Q ⊆ P'` satisfying
//! `Q = Q^gp ∩ P'` correspond one-to-one with the subgroups of `⊕ Z/d_i` by
//! taking preimages. Each subgroup yields the monoid generated by the
//! coarse axes `d_i·e_i` together with the componentwise-minimal box
//! representatives of its elements: any orthant point reduces to its box
//! representative minus a nonnegative combination of the coarse axes.

use std::collections::BTreeSet;

use lattice::{lattice_quotient, subgroup_enumerate, FinAbGroup, GroupHom, IntMatrix, Subgroup};
use monoids::IntegralMonoid;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::KummerError;

/// Caps on the classification input; past these the subgroup lattice and
/// the per-subgroup work grow out of proportion for an exact tool.
pub const MAX_CLASSIFY_RANK: usize = 4;
pub const MAX_CLASSIFY_LEVEL: u64 = 6;

/// One intermediate monoid: the subgroup of `⊕ Z/d_i` it is the preimage
/// of (elements in the canonical coordinates of the class group), its
/// minimal generators in the fine coordinates, and the monoid re-based onto
/// the lattice those generators span, with the inclusion back into the fine
/// one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbhyankarEntry {
    pub subgroup: Subgroup,
    pub fine_generators: Vec<Vec<BigInt>>,
    pub monoid: IntegralMonoid,
    pub inclusion: GroupHom,
}

/// All intermediate monoids for rank `r` and axis levels `d`, one per
/// subgroup of the class group, in the enumeration order of the subgroups.
/// The list is complete and duplicate-free: distinct subgroups have
/// distinct preimages, since the subgroup is recovered as the set of
/// classes of the monoid's elements.
pub fn abhyankar_classify(r: usize, d: &[u64]) -> Result<Vec<AbhyankarEntry>, KummerError> {
    if d.len() != r {
        return Err(KummerError::Shape(format!(
            "{} axis levels for rank {r}",
            d.len()
        )));
    }
    if r > MAX_CLASSIFY_RANK {
        return Err(KummerError::BoundExceeded(format!(
            "rank {r} exceeds the classification cap {MAX_CLASSIFY_RANK}"
        )));
    }
    for &level in d {
        if level == 0 {
            return Err(KummerError::Precondition(
                "axis levels must be positive".into(),
            ));
        }
        if level > MAX_CLASSIFY_LEVEL {
            return Err(KummerError::BoundExceeded(format!(
                "axis level {level} exceeds the classification cap {MAX_CLASSIFY_LEVEL}"
            )));
        }
    }
    // The class group ⊕ Z/d_i of the division, with the projection from
    // the fine lattice and a lift back into it.
    let mut rels = IntMatrix::zero(r, r);
    for (i, &level) in d.iter().enumerate() {
        rels.set(i, i, BigInt::from(level));
    }
    let classes = lattice_quotient(r, &rels);
    let order = classes
        .group
        .order()
        .expect("a diagonal quotient is finite")
        .to_u64()
        .expect("capped levels keep the class group small");
    let subgroups = subgroup_enumerate(&classes.group, order)?;

    let mut entries = Vec::with_capacity(subgroups.len());
    for subgroup in subgroups {
        let mut gens: BTreeSet<Vec<BigInt>> = BTreeSet::new();
        for (i, &level) in d.iter().enumerate() {
            let mut axis = vec![BigInt::zero(); r];
            axis[i] = BigInt::from(level);
            gens.insert(axis);
        }
        for class in &subgroup.elements {
            let lift = classes.lift.apply(class);
            let rep: Vec<BigInt> = lift
                .iter()
                .zip(d)
                .map(|(x, &level)| x.mod_floor(&BigInt::from(level)))
                .collect();
            if rep.iter().any(|x| !x.is_zero()) {
                gens.insert(rep);
            }
        }
        let fine: Vec<Vec<BigInt>> = gens.into_iter().collect();
        let (raw, inclusion) = IntegralMonoid::spanning(&FinAbGroup::free(r), &fine)?;
        let monoid = raw.minimalized();
        let mut fine_generators: Vec<Vec<BigInt>> = monoid
            .generators()
            .iter()
            .map(|g| inclusion.apply(g))
            .collect();
        fine_generators.sort();
        entries.push(AbhyankarEntry {
            subgroup,
            fine_generators,
            monoid,
            inclusion,
        });
    }
    Ok(entries)
}

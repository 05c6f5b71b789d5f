//! Numerical invariants of a certified Kummer map: the smallest level at
//! which every target generator's multiple enters the image, and the
//! minimal divided copy of the source through which the map factors.

use monoids::{divide, MonoidHom};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::check::{group_preimage, in_monoid_image, KummerData};
use crate::KummerError;

/// The smallest `n ≥ 1` with `n·q ∈ u(P)` for every target generator `q`
/// (equivalently, every target element). Per generator the group-level
/// multiples are exactly the multiples of its cokernel class order, and the
/// smallest one already pulls back into the saturated source, so the index
/// is the lcm of the class orders. It is re-checked against the cokernel
/// exponent, which computes the same number from the invariant factors.
pub fn ramification_index(d: &KummerData) -> Result<BigInt, KummerError> {
    let u = d.hom();
    for (m, side) in [(u.source(), "source"), (u.target(), "target")] {
        let pred = m.predicates();
        if !(pred.is_fine && pred.is_sharp && pred.is_saturated) {
            return Err(KummerError::Precondition(format!(
                "the ramification index expects sharp fine saturated monoids; the {side} is not"
            )));
        }
    }
    let g = d.cokernel_group();
    let mut n = BigInt::one();
    for q in u.target().generators() {
        n = n.lcm(&g.elem_order(&d.class_map().apply(q)));
    }
    for q in u.target().generators() {
        let scaled: Vec<BigInt> = q.iter().map(|x| &n * x).collect();
        assert!(
            in_monoid_image(u, &u.target().ambient().reduce(&scaled))?,
            "the lcm-level multiple of every generator lies in the image"
        );
    }
    assert_eq!(
        &n,
        d.exponent(),
        "class orders must compose to the cokernel exponent"
    );
    Ok(n)
}

/// The smallest `n` such that `u` factors as `P → Q ↪ (1/n)P`, with the
/// verified embedding of `Q` into the divided copy. For a torsion-free
/// target any such factorization forces `n·Q^gp ⊆ u^gp(P^gp)`, so the level
/// is the cokernel exponent; the embedding sends `q` to the preimage of its
/// exponent multiple, read in the divided coordinates (where a point `y`
/// stands for `y/n`).
pub fn minimal_divided_factorization(
    d: &KummerData,
) -> Result<(BigInt, MonoidHom), KummerError> {
    let u = d.hom();
    if !u.source().ambient().is_free() {
        return Err(KummerError::Precondition(
            "divided factorization expects a torsion-free source".into(),
        ));
    }
    if !u.target().ambient().is_free() {
        return Err(KummerError::Precondition(
            "a target with torsion cannot embed into a divided copy of a torsion-free monoid"
                .into(),
        ));
    }
    let n = d.exponent().clone();
    let level = n.to_u64().ok_or_else(|| {
        KummerError::BoundExceeded("the division level does not fit in a machine word".into())
    })?;
    let (divided, inclusion) = divide(u.source(), level)?;
    let images: Vec<Vec<BigInt>> = u
        .target()
        .generators()
        .iter()
        .map(|q| {
            let scaled: Vec<BigInt> = q.iter().map(|x| &n * x).collect();
            group_preimage(u, &scaled).expect("exponent multiples descend to the source")
        })
        .collect();
    let embedding = MonoidHom::new(u.target().clone(), divided, images)
        .expect("certified preimages are members of the divided copy");
    assert!(
        embedding.gp_hom().is_injective(),
        "a torsion-free target embeds into its divided hull"
    );
    assert_eq!(
        embedding.compose(u).expect("composable"),
        inclusion,
        "the embedding must complete the division triangle"
    );
    Ok((n, embedding))
}

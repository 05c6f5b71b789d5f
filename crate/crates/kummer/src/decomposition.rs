//! Splitting the self-product of a Kummer map: the saturated amalgamated
//! sum of `u: P → Q` with itself is isomorphic to `Q ⊕ G`, where the finite
//! cokernel `G` enters as a group of units. The isomorphism sends the first
//! leg to `(q, 0)` and the second to `(q, [q])`.

use lattice::{direct_sum, hom_from_images, solve_integer, GroupHom};
use monoids::{amalgamated_sum, AmalgamatedSum, IntegralMonoid, MonoidHom, SumMode};
use num_bigint::BigInt;
use num_traits::One;

use crate::check::KummerData;
use crate::KummerError;

/// The pieces of a self-product decomposition: the saturated sum with its
/// coprojections, the split model `Q ⊕ G`, the mutually inverse
/// homomorphisms between them (verified at construction), and the two
/// projections of the split ambient.
pub struct SelfProductDecomposition {
    pub sum: AmalgamatedSum,
    pub product: IntegralMonoid,
    pub forward: MonoidHom,
    pub backward: MonoidHom,
    /// Projection of the split ambient onto the target's ambient group.
    pub onto_target: GroupHom,
    /// Projection of the split ambient onto the cokernel.
    pub onto_classes: GroupHom,
}

/// Builds `(Q ⊕_P Q)^Sat ≅ Q ⊕ G` for a certified Kummer map. The only
/// failure mode is a certificate search giving up inside the amalgamated
/// sum; that the two composites are identities is asserted internally.
pub fn self_product_decomposition(
    d: &KummerData,
) -> Result<SelfProductDecomposition, KummerError> {
    let u = d.hom();
    let q = u.target();
    let g = d.cokernel_group();
    let sum = amalgamated_sum(u, u, SumMode::Saturated)?;

    let ds = direct_sum(q.ambient(), g);
    let mut product_gens: Vec<Vec<BigInt>> =
        q.generators().iter().map(|x| ds.incl1.apply(x)).collect();
    for t in 0..g.coords() {
        let mut e = g.zero();
        e[t] = BigInt::one();
        product_gens.push(ds.incl2.apply(&e));
    }
    let product = IntegralMonoid::new(ds.group.clone(), product_gens)
        .expect("the target generators and the class units span the split ambient");

    // Forward on group completions: the first leg goes to (q, 0), the
    // second to (q, [q]). The amalgamation graph is respected because
    // classes of image elements vanish, and `hom_from_images` checks that.
    let mut elements: Vec<Vec<BigInt>> = Vec::new();
    let mut images: Vec<Vec<BigInt>> = Vec::new();
    for (i, x) in q.generators().iter().enumerate() {
        elements.push(sum.coproj1.images()[i].clone());
        images.push(ds.incl1.apply(x));
    }
    for (i, x) in q.generators().iter().enumerate() {
        elements.push(sum.coproj2.images()[i].clone());
        images.push(ds.group.add(
            &ds.incl1.apply(x),
            &ds.incl2.apply(&d.class_map().apply(x)),
        ));
    }
    let phi = hom_from_images(sum.monoid.ambient(), &elements, &ds.group, &images)
        .expect("the leg images of the target generators span the sum and glue");

    // Backward: (q, 0) returns through the first leg; a class basis vector
    // returns as the difference of the two legs on any of its lifts — a
    // torsion element of the sum, hence a member of the saturation.
    let s_amb = sum.monoid.ambient();
    let mut back_elements: Vec<Vec<BigInt>> = Vec::new();
    let mut back_images: Vec<Vec<BigInt>> = Vec::new();
    for (i, x) in q.generators().iter().enumerate() {
        back_elements.push(ds.incl1.apply(x));
        back_images.push(sum.coproj1.images()[i].clone());
    }
    for t in 0..g.coords() {
        let mut e = g.zero();
        e[t] = BigInt::one();
        let lift = class_lift(d.class_map(), &e);
        let first = sum.coproj1.gp_hom().apply(&lift);
        let second = sum.coproj2.gp_hom().apply(&lift);
        back_elements.push(ds.incl2.apply(&e));
        back_images.push(s_amb.add(&second, &s_amb.neg(&first)));
    }
    let psi = hom_from_images(&ds.group, &back_elements, s_amb, &back_images)
        .expect("the split generators return coherently to the sum");

    let forward = MonoidHom::new(
        sum.monoid.clone(),
        product.clone(),
        sum.monoid.generators().iter().map(|x| phi.apply(x)).collect(),
    )
    .expect("the forward images are members of the split model");
    let backward = MonoidHom::new(
        product.clone(),
        sum.monoid.clone(),
        product.generators().iter().map(|x| psi.apply(x)).collect(),
    )
    .expect("the backward images are members of the saturated sum");
    assert!(
        forward.compose(&backward).expect("composable").is_identity()
            && backward.compose(&forward).expect("composable").is_identity(),
        "the split model must invert the saturated self-product"
    );
    Ok(SelfProductDecomposition {
        sum,
        product,
        forward,
        backward,
        onto_target: ds.proj1,
        onto_classes: ds.proj2,
    })
}

/// An ambient lift of a cokernel element through the (surjective) class
/// projection.
fn class_lift(class_map: &GroupHom, e: &[BigInt]) -> Vec<BigInt> {
    let aug = class_map
        .matrix()
        .hstack(&class_map.target().relation_matrix());
    let sol = solve_integer(&aug, e).expect("the class map is surjective");
    class_map.source().reduce(&sol[..class_map.source().coords()])
}

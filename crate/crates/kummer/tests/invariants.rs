//! Randomized classification checks: lattice refinements of toric monoids
//! are always accepted as Kummer maps, with exact homomorphisms and
//! cokernel order equal to the refinement index; the ramification level
//! found by definition-level brute force agrees with the cokernel exponent;
//! self-products split with the class map as the unit coordinate of the
//! second coprojection; and the intermediate monoids of a divided free
//! monoid are cut out, point by point, by their subgroups.

use std::collections::BTreeSet;

use cones::{hilbert_basis, RationalCone};
use kummer::{
    abhyankar_classify, is_kummer, ramification_index, self_product_decomposition,
    AbhyankarEntry, KummerData,
};
use lattice::{
    determinant, lattice_quotient, solve_integer, subgroup_enumerate, FinAbGroup, GroupHom,
    IntMatrix,
};
use monoids::{hom_properties, IntegralMonoid, MonoidHom};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bi(x: i64) -> BigInt {
    BigInt::from(x)
}

fn random_toric(rng: &mut ChaCha8Rng) -> IntegralMonoid {
    loop {
        let dim = rng.gen_range(1..=3);
        let nrays = rng.gen_range(1..=4);
        let rays: Vec<Vec<BigInt>> = (0..nrays)
            .map(|_| (0..dim).map(|_| bi(rng.gen_range(-3i64..=3))).collect())
            .collect();
        let c = RationalCone::new(dim, rays).unwrap();
        if !c.is_pointed() {
            continue;
        }
        let hb = hilbert_basis(&c).unwrap();
        if hb.is_empty() {
            continue;
        }
        return IntegralMonoid::from_lattice_points(dim, &hb).unwrap().0;
    }
}

/// A refinement map: push a toric monoid through an injective lattice map
/// and saturate the image in the finer lattice. Such maps are always
/// Kummer, and the cokernel order is the index of the lattice image, i.e.
/// the determinant.
fn random_refinement(rng: &mut ChaCha8Rng) -> (MonoidHom, BigInt) {
    loop {
        let p = random_toric(rng);
        let r = p.ambient().coords();
        let mut f = IntMatrix::zero(r, r);
        for i in 0..r {
            for j in 0..r {
                f.set(i, j, bi(rng.gen_range(-3i64..=3)));
            }
        }
        let det = determinant(&f);
        if det.is_zero() || det.abs() > bi(8) {
            continue;
        }
        let image: Vec<Vec<BigInt>> = p.generators().iter().map(|g| f.apply(g)).collect();
        let cone = RationalCone::new(r, image.clone()).unwrap();
        let q = IntegralMonoid::new(FinAbGroup::free(r), hilbert_basis(&cone).unwrap()).unwrap();
        let u = MonoidHom::new(p, q, image).unwrap();
        return (u, det.abs());
    }
}

#[test]
fn refinements_are_kummer_exact_and_counted_by_the_index() {
    let mut rng = ChaCha8Rng::seed_from_u64(401);
    for _ in 0..60 {
        let (u, index) = random_refinement(&mut rng);
        let v = is_kummer(&u).unwrap();
        assert!(v.is_kummer, "refinements always pass the Kummer test");
        assert!(hom_properties(&u).unwrap().exact, "accepted maps are exact");
        let d = KummerData::new(u).unwrap();
        assert_eq!(d.cokernel_group().order(), Some(index));
    }
    // Ambients with torsion behave the same way.
    let half = IntegralMonoid::new(
        FinAbGroup::new(1, vec![bi(2)]).unwrap(),
        vec![vec![bi(1), bi(0)], vec![bi(0), bi(1)]],
    )
    .unwrap();
    let embed = MonoidHom::new(
        IntegralMonoid::nonneg(1),
        half.clone(),
        vec![vec![bi(1), bi(0)]],
    )
    .unwrap();
    for u in [MonoidHom::identity(&half), embed] {
        assert!(is_kummer(&u).unwrap().is_kummer);
        assert!(hom_properties(&u).unwrap().exact);
    }
}

/// Membership of `y` in `u(P)` decided from scratch: solve the group
/// equation over the (free) ambients and test the preimage.
fn multiple_in_image(u: &MonoidHom, y: &[BigInt]) -> bool {
    match solve_integer(u.gp_hom().matrix(), y) {
        None => false,
        Some(x) => u.source().member(&x).unwrap(),
    }
}

#[test]
fn ramification_matches_definition_level_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(402);
    for _ in 0..40 {
        let (u, _) = random_refinement(&mut rng);
        let d = KummerData::new(u.clone()).unwrap();
        let lib = ramification_index(&d).unwrap();
        // Count up from 1, testing the definition directly per level.
        let mut n = BigInt::one();
        let brute = loop {
            let all_in = u.target().generators().iter().all(|q| {
                let scaled: Vec<BigInt> = q.iter().map(|x| x * &n).collect();
                multiple_in_image(&u, &scaled)
            });
            if all_in {
                break n;
            }
            n += 1u32;
            assert!(n <= bi(10_000), "the brute-force level ran away");
        };
        assert_eq!(brute, lib);
        assert_eq!(&brute, d.exponent());
    }
}

#[test]
fn self_products_split_with_the_class_coprojection() {
    let mut rng = ChaCha8Rng::seed_from_u64(403);
    for _ in 0..12 {
        let (u, _) = random_refinement(&mut rng);
        let d = KummerData::new(u).unwrap();
        let spd = self_product_decomposition(&d).unwrap();
        assert!(spd.forward.compose(&spd.backward).unwrap().is_identity());
        assert!(spd.backward.compose(&spd.forward).unwrap().is_identity());
        // Through the isomorphism, the second leg lands with its class and
        // the first leg with none.
        let to_classes = spd.onto_classes.compose(spd.forward.gp_hom()).unwrap();
        assert_eq!(
            &to_classes.compose(spd.sum.coproj2.gp_hom()).unwrap(),
            d.class_map()
        );
        assert_eq!(
            to_classes.compose(spd.sum.coproj1.gp_hom()).unwrap(),
            GroupHom::zero(d.hom().target().ambient(), d.cokernel_group())
        );
        // The split ambient is the direct sum: the free rank is unchanged
        // and the torsion grows by the cokernel order.
        let amb = spd.product.ambient();
        assert_eq!(amb.free_rank(), d.hom().target().ambient().free_rank());
        let torsion: BigInt = amb.torsion().iter().product();
        let base: BigInt = d.hom().target().ambient().torsion().iter().product();
        assert_eq!(torsion, base * d.cokernel_group().order().unwrap());
    }
}

/// All lattice points with `0 ≤ x_i ≤ d_i`.
fn box_points(d: &[u64]) -> Vec<Vec<BigInt>> {
    let mut out = vec![Vec::new()];
    for &level in d {
        let mut next = Vec::new();
        for prefix in &out {
            for v in 0..=level {
                let mut p = prefix.clone();
                p.push(BigInt::from(v));
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Membership of a fine-lattice point in an entry's monoid, through the
/// inclusion of its re-based ambient.
fn fine_member(entry: &AbhyankarEntry, x: &[BigInt]) -> bool {
    match solve_integer(entry.inclusion.matrix(), x) {
        None => false,
        Some(y) => entry.monoid.member(&y).unwrap(),
    }
}

#[test]
fn intermediate_monoids_are_cut_out_by_their_subgroups() {
    let cases: [(usize, Vec<u64>); 7] = [
        (1, vec![2]),
        (1, vec![4]),
        (1, vec![6]),
        (2, vec![2, 2]),
        (2, vec![2, 3]),
        (2, vec![3, 3]),
        (3, vec![2, 2, 2]),
    ];
    for (r, d) in cases {
        let entries = abhyankar_classify(r, &d).unwrap();
        // One entry per subgroup, in enumeration order.
        let mut rels = IntMatrix::zero(r, r);
        for (i, &level) in d.iter().enumerate() {
            rels.set(i, i, BigInt::from(level));
        }
        let classes = lattice_quotient(r, &rels);
        let order = classes.group.order().unwrap().to_u64().unwrap();
        let subs = subgroup_enumerate(&classes.group, order).unwrap();
        assert_eq!(entries.len(), subs.len());
        for (e, s) in entries.iter().zip(&subs) {
            assert_eq!(&e.subgroup, s);
        }
        // No two entries share a generator list.
        let distinct: BTreeSet<Vec<Vec<BigInt>>> =
            entries.iter().map(|e| e.fine_generators.clone()).collect();
        assert_eq!(distinct.len(), entries.len());
        // Point by point over the fundamental box (with its boundary),
        // membership in the monoid is membership of the class in the
        // subgroup.
        for entry in &entries {
            for x in box_points(&d) {
                let in_monoid = fine_member(entry, &x);
                let class = classes.group.reduce(&classes.proj.apply(&x));
                let in_subgroup = entry.subgroup.contains(&classes.group, &class);
                assert_eq!(
                    in_monoid, in_subgroup,
                    "monoid and subgroup disagree at {x:?}"
                );
            }
        }
    }
}

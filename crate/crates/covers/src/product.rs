use lattice::{hom_from_images, kernel_subgroup, solve_integer, Subgroup};
use monoids::{amalgamated_sum, AmalgamatedSum, SumMode};
use num_bigint::BigInt;
use num_integer::Integer;

use crate::cover::{cover_from_subgroup, lift_level, FketCover};
use crate::galois::{fiber_functor, sweep_coefficients, GammaSet};
use crate::CoversError;

/// A certified fiber product of two covers over one base: the saturated
/// amalgamated sum of the cover inclusions, its split into connected
/// covers, and the orbit decomposition of the product Galois set that
/// matches it.
#[derive(Clone, Debug)]
pub struct FiberProduct {
    /// The common level both factors were lifted to.
    pub level: u64,
    /// The saturated pushout of the two cover inclusions.
    pub sum: AmalgamatedSum,
    /// The connected pieces: equal copies of the join-subgroup cover, one
    /// per element of the subgroups' intersection.
    pub components: Vec<FketCover>,
    /// The product of the two fibers with the diagonal action.
    pub product_set: GammaSet,
    /// Orbit partition of `product_set`, one orbit per component.
    pub orbits: Vec<Vec<usize>>,
}

/// The product of two Galois sets at one level: pairs of elements written
/// as concatenated value rows, with the diagonal action.
fn product_set(a: &GammaSet, b: &GammaSet) -> GammaSet {
    assert_eq!(a.level, b.level);
    assert_eq!(a.rank, b.rank);
    let mut elements = Vec::with_capacity(a.size() * b.size());
    for r1 in &a.elements {
        for r2 in &b.elements {
            let mut row = r1.clone();
            row.extend(r2.iter().cloned());
            elements.push(row);
        }
    }
    let action = (0..a.rank)
        .map(|i| {
            let mut perm = Vec::with_capacity(a.size() * b.size());
            for j1 in 0..a.size() {
                for j2 in 0..b.size() {
                    perm.push(a.action[i][j1] * b.size() + b.action[i][j2]);
                }
            }
            perm
        })
        .collect();
    let set = GammaSet {
        level: a.level,
        rank: a.rank,
        elements,
        action,
    };
    debug_assert!(set.verify());
    set
}

/// The fiber product of two covers of one log point. Both sides are
/// computed independently and checked against each other: the saturated
/// pushout of the monoids must have unit group of the order of the
/// subgroups' meet and sharpen onto the join cover's monoid, while the
/// product Galois set must fall into matching orbits — as many as the
/// meet has elements, each isomorphic to the join cover's fiber, which
/// the equal-stabilizer sweep certifies.
pub fn cover_fiber_product(
    c1: &FketCover,
    c2: &FketCover,
) -> Result<FiberProduct, CoversError> {
    if c1.base() != c2.base() {
        return Err(CoversError::Shape(
            "fiber products need a common base point".into(),
        ));
    }
    let level = c1.level().lcm(&c2.level());
    let a = lift_level(c1, level)?;
    let b = lift_level(c2, level)?;
    let n = a.base().rank();
    let gamma = a.level_group();

    // Group side: join and meet of the classifying subgroups.
    let mut joined: Vec<Vec<BigInt>> = a.subgroup().elements.clone();
    joined.extend(b.subgroup().elements.iter().cloned());
    let join = Subgroup::generated_by(&gamma, &joined)?;
    let meet_elements: Vec<Vec<BigInt>> = a
        .subgroup()
        .elements
        .iter()
        .filter(|e| b.subgroup().elements.binary_search(e).is_ok())
        .cloned()
        .collect();
    let meet = Subgroup {
        elements: meet_elements,
    };
    let component = cover_from_subgroup(a.base(), level, &join.generators(&gamma))?;

    // Monoid side: the saturated pushout along the two cover inclusions.
    let sum = amalgamated_sum(a.cover_map(), b.cover_map(), SumMode::Saturated)?;
    let ambient = sum.monoid.ambient().clone();
    assert_eq!(
        ambient.free_rank(),
        n,
        "the pushout keeps the base's free rank"
    );
    let units = sum.monoid.units();
    assert_eq!(
        units.group.order(),
        Some(BigInt::from(meet.order())),
        "the pushout's units count the subgroups' intersection"
    );

    // Project the pushout onto the level lattice: the coprojections of the
    // two covers must land on their lattice embeddings. The kernel is the
    // unit torsion, the image is the join sublattice, and the generators
    // map onto the join cover's monoid — that is the sharpening.
    let mut span_elements: Vec<Vec<BigInt>> = Vec::with_capacity(2 * n);
    let mut span_images: Vec<Vec<BigInt>> = Vec::with_capacity(2 * n);
    for (cover, coproj) in [(&a, &sum.coproj1), (&b, &sum.coproj2)] {
        let gp = coproj.gp_hom();
        for j in 0..n {
            span_elements.push(gp.matrix().column(j));
            span_images.push(cover.inclusion().matrix().column(j));
        }
    }
    let flatten = hom_from_images(
        &ambient,
        &span_elements,
        &lattice::FinAbGroup::free(n),
        &span_images,
    )
    .expect("the pushout flattens onto the level lattice");
    let (kernel, _) = kernel_subgroup(&flatten);
    assert_eq!(
        kernel.order(),
        Some(BigInt::from(meet.order())),
        "the flattening kills exactly the unit torsion"
    );
    for g in sum.monoid.generators() {
        let image = flatten.apply(g);
        let coords = solve_integer(component.inclusion().matrix(), &image)
            .expect("flattened generators lie in the join sublattice");
        assert!(
            component.monoid().member(&coords).expect("coordinates are well-shaped"),
            "flattened generators lie in the join cover's monoid"
        );
    }
    for g in component.monoid().generators() {
        let image = component.inclusion().apply(g);
        assert!(
            preimage_is_member(&sum, &flatten, &image),
            "every join generator lifts into the pushout"
        );
    }

    // Galois side: the product set splits into meet-many orbits, each
    // carrying the join cover's fiber. Equal stabilizers under the full
    // coefficient sweep certify the isomorphism orbit by orbit.
    let set = product_set(&fiber_functor(&a), &fiber_functor(&b));
    let orbits = set.orbits();
    assert_eq!(orbits.len(), meet.order(), "one component per orbit");
    let join_fiber = fiber_functor(&component);
    for orbit in &orbits {
        assert_eq!(orbit.len(), join_fiber.size(), "orbits carry the join fiber");
        sweep_coefficients(n, level, |coeffs| {
            assert_eq!(
                set.act(coeffs, orbit[0]) == orbit[0],
                join_fiber.act(coeffs, 0) == 0,
                "orbit stabilizers match the join cover's"
            );
        });
    }

    let components = vec![component; meet.order()];
    Ok(FiberProduct {
        level,
        sum,
        components,
        product_set: set,
        orbits,
    })
}

/// Whether a level-lattice point has a preimage in the pushout monoid
/// under the flattening map.
fn preimage_is_member(
    sum: &AmalgamatedSum,
    flatten: &lattice::GroupHom,
    point: &[BigInt],
) -> bool {
    // The target is free, so the image is exactly the matrix's column span:
    // ambient relations of the source map to zero on the nose.
    match solve_integer(flatten.matrix(), point) {
        None => false,
        Some(coords) => sum
            .monoid
            .member(&coords)
            .expect("solution coordinates are well-shaped"),
    }
}

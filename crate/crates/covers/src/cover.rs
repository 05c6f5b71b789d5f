use cones::{hilbert_basis, RationalCone};
use kummer::KummerData;
use lattice::{
    column_hermite, lattice_quotient, solve_integer, subgroup_enumerate, FinAbGroup, GroupHom,
    IntMatrix, Subgroup,
};
use monoids::{IntegralMonoid, MonoidHom};
use num_bigint::BigInt;
use num_traits::Zero;

use crate::point::LogPoint;
use crate::CoversError;

/// The level group `(1/m)P^gp / P^gp ≅ (Z/m)^n` whose subgroups classify
/// the connected covers at level `m`, in canonical form. Level 1 gives the
/// trivial group.
pub fn fundamental_group_level(pt: &LogPoint, m: u64) -> FinAbGroup {
    assert!(m >= 1, "levels start at 1");
    if m == 1 {
        return FinAbGroup::trivial();
    }
    FinAbGroup::new(0, vec![BigInt::from(m); pt.rank()])
        .expect("equal invariant factors form a dividing chain")
}

/// A connected finite Kummer cover of a log point, classified at level `m`
/// by a subgroup of the level group. Lattice data lives in the level
/// lattice, whose coordinates are `m`-ths of the base coordinates: the
/// cover monoid `Q` sits between `m·P` and the base monoid's lattice cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FketCover {
    base: LogPoint,
    level: u64,
    subgroup: Subgroup,
    fine_generators: Vec<Vec<BigInt>>,
    monoid: IntegralMonoid,
    inclusion: GroupHom,
    cover_map: MonoidHom,
}

impl FketCover {
    pub fn base(&self) -> &LogPoint {
        &self.base
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    /// The classifying subgroup of the level group.
    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    /// Minimal generators of the cover monoid, in level-lattice coordinates.
    pub fn fine_generators(&self) -> &[Vec<BigInt>] {
        &self.fine_generators
    }

    /// The cover monoid over its own spanned lattice.
    pub fn monoid(&self) -> &IntegralMonoid {
        &self.monoid
    }

    /// The embedding of the cover monoid's lattice into the level lattice.
    pub fn inclusion(&self) -> &GroupHom {
        &self.inclusion
    }

    /// The inclusion of the base characteristic into the cover monoid; in
    /// level coordinates it rescales by `m`.
    pub fn cover_map(&self) -> &MonoidHom {
        &self.cover_map
    }

    /// The number of points in the fiber: the subgroup's order.
    pub fn degree(&self) -> usize {
        self.subgroup.order()
    }

    pub fn level_group(&self) -> FinAbGroup {
        fundamental_group_level(&self.base, self.level)
    }
}

/// The cover classified by a subgroup of the level group, given by any list
/// of generating classes. The monoid is cut from the base cone by the
/// sublattice the subgroup spans, and the construction certifies itself:
/// the inclusion of the base is a Kummer map whose cokernel presents the
/// chosen subgroup.
pub fn cover_from_subgroup(
    pt: &LogPoint,
    m: u64,
    subgroup_generators: &[Vec<BigInt>],
) -> Result<FketCover, CoversError> {
    if m < 1 {
        return Err(CoversError::Precondition("levels start at 1".into()));
    }
    let n = pt.rank();
    let mb = BigInt::from(m);
    let gamma = fundamental_group_level(pt, m);
    let subgroup = Subgroup::generated_by(&gamma, subgroup_generators)?;

    // The sublattice of the level lattice spanned by the subgroup's classes
    // together with m·Z^n.
    let lifts: Vec<Vec<BigInt>> = subgroup
        .elements
        .iter()
        .map(|e| {
            if e.len() == n {
                e.clone()
            } else {
                vec![BigInt::zero(); n] // level 1: classes carry no coordinates
            }
        })
        .collect();
    let mut span = IntMatrix::zero(n, lifts.len() + n);
    for (j, l) in lifts.iter().enumerate() {
        for (i, x) in l.iter().enumerate() {
            span.set(i, j, x.clone());
        }
    }
    for i in 0..n {
        span.set(i, lifts.len() + i, mb.clone());
    }
    let basis = column_hermite(&span);
    debug_assert_eq!(basis.cols(), n);

    // The base cone in sublattice coordinates; scaling by m keeps the rays
    // integral without changing their directions.
    let rays: Vec<Vec<BigInt>> = pt
        .characteristic()
        .generators()
        .iter()
        .map(|g| {
            let scaled: Vec<BigInt> = g.iter().map(|x| x * &mb).collect();
            solve_integer(&basis, &scaled).expect("m-multiples lie in every level sublattice")
        })
        .collect();
    let cone = RationalCone::new(n, rays).expect("generator images are well-shaped rays");
    let points = hilbert_basis(&cone).expect("the cone of a sharp monoid stays pointed");
    let mut fine_generators: Vec<Vec<BigInt>> =
        points.iter().map(|h| basis.apply(h)).collect();
    fine_generators.sort();

    let (monoid, inclusion) =
        IntegralMonoid::spanning(&FinAbGroup::free(n), &fine_generators)?;
    debug_assert!(inclusion.is_injective());

    let images: Vec<Vec<BigInt>> = pt
        .characteristic()
        .generators()
        .iter()
        .map(|g| {
            let scaled: Vec<BigInt> = g.iter().map(|x| x * &mb).collect();
            solve_integer(inclusion.matrix(), &scaled)
                .expect("m-multiples lie in the spanned sublattice")
        })
        .collect();
    let cover_map = MonoidHom::new(pt.characteristic().clone(), monoid.clone(), images)
        .expect("the rescaled base lands in the cover monoid");

    // Certify the classification: the cover map is Kummer, of degree the
    // subgroup's order, with cokernel presented by the sublattice.
    let data = KummerData::new(cover_map.clone()).expect("level covers are Kummer");
    assert_eq!(
        data.cokernel_group().order(),
        Some(BigInt::from(subgroup.order())),
        "the degree is the subgroup order"
    );
    let rel_cols: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut target = vec![BigInt::zero(); n];
            target[i] = mb.clone();
            solve_integer(inclusion.matrix(), &target)
                .expect("m·Z^n lies in the spanned sublattice")
        })
        .collect();
    let rels = IntMatrix::from_columns(n, &rel_cols);
    assert_eq!(
        &lattice_quotient(n, &rels).group,
        data.cokernel_group(),
        "the classifying subgroup presents the cover's cokernel"
    );

    Ok(FketCover {
        base: pt.clone(),
        level: m,
        subgroup,
        fine_generators,
        monoid,
        inclusion,
        cover_map,
    })
}

/// The same cover expressed at a multiple of its level: classes scale by
/// the level ratio, and so do the lattice coordinates.
pub fn lift_level(c: &FketCover, level: u64) -> Result<FketCover, CoversError> {
    if level == 0 || !level.is_multiple_of(c.level) {
        return Err(CoversError::Precondition(format!(
            "the cover's level {} must divide the requested level {level}",
            c.level
        )));
    }
    let k = level / c.level;
    let gamma = c.level_group();
    let gens: Vec<Vec<BigInt>> = c
        .subgroup
        .generators(&gamma)
        .iter()
        .map(|g| g.iter().map(|x| x * k).collect())
        .collect();
    let lifted = cover_from_subgroup(&c.base, level, &gens)?;
    let kb = BigInt::from(k);
    let mut scaled: Vec<Vec<BigInt>> = c
        .fine_generators
        .iter()
        .map(|g| g.iter().map(|x| x * &kb).collect())
        .collect();
    scaled.sort();
    assert_eq!(
        lifted.fine_generators, scaled,
        "lifting rescales the cover lattice"
    );
    assert_eq!(lifted.subgroup.order(), c.subgroup.order());
    Ok(lifted)
}

/// All connected covers at level `m`, one per subgroup of the level group,
/// in the canonical subgroup order. Errors if the level group's order
/// exceeds the bound.
pub fn enumerate_connected_covers(
    pt: &LogPoint,
    m: u64,
    bound: u64,
) -> Result<Vec<FketCover>, CoversError> {
    let gamma = fundamental_group_level(pt, m);
    let subs = subgroup_enumerate(&gamma, bound)?;
    subs.iter()
        .map(|s| cover_from_subgroup(pt, m, &s.generators(&gamma)))
        .collect()
}

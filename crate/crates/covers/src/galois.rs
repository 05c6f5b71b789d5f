use std::collections::BTreeSet;

use lattice::IntMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::cover::FketCover;
use crate::CoversError;

/// A finite set with commuting permutations attached to the canonical
/// generators of the level group `(Z/m)^n`. Elements are kept sorted, so
/// equal sets have equal representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaSet {
    pub level: u64,
    pub rank: usize,
    pub elements: Vec<Vec<BigInt>>,
    /// One permutation per canonical generator, as an index map.
    pub action: Vec<Vec<usize>>,
}

impl GammaSet {
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    /// Apply the group element with the given generator coefficients.
    pub fn act(&self, coefficients: &[u64], index: usize) -> usize {
        let mut j = index;
        for (i, &c) in coefficients.iter().enumerate() {
            for _ in 0..c {
                j = self.action[i][j];
            }
        }
        j
    }

    /// Structural soundness: sorted distinct elements, genuine permutations,
    /// pairwise commuting, with orders dividing the level.
    pub fn verify(&self) -> bool {
        let size = self.size();
        if self.action.len() != self.rank {
            return false;
        }
        if !self.elements.windows(2).all(|w| w[0] < w[1]) {
            return false;
        }
        for p in &self.action {
            if p.len() != size {
                return false;
            }
            let mut seen = vec![false; size];
            for &j in p {
                if j >= size || seen[j] {
                    return false;
                }
                seen[j] = true;
            }
            // Every cycle length divides the level.
            let mut visited = vec![false; size];
            for start in 0..size {
                if visited[start] {
                    continue;
                }
                let mut len = 0u64;
                let mut j = start;
                while !visited[j] {
                    visited[j] = true;
                    j = p[j];
                    len += 1;
                }
                if !self.level.is_multiple_of(len) {
                    return false;
                }
            }
        }
        for a in &self.action {
            for b in &self.action {
                if (0..size).any(|j| a[b[j]] != b[a[j]]) {
                    return false;
                }
            }
        }
        true
    }

    /// Whether the action reaches every element from the first one.
    pub fn is_transitive(&self) -> bool {
        self.size() <= 1 || self.orbits().len() == 1
    }

    /// The orbit partition: each orbit sorted, orbits ordered by their
    /// smallest member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let size = self.size();
        let mut seen = vec![false; size];
        let mut orbits = Vec::new();
        for start in 0..size {
            if seen[start] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(j) = stack.pop() {
                orbit.push(j);
                for p in &self.action {
                    if !seen[p[j]] {
                        seen[p[j]] = true;
                        stack.push(p[j]);
                    }
                }
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }
        orbits
    }
}

/// Run a closure over every coefficient vector in `[0, m)^n`.
pub(crate) fn sweep_coefficients(n: usize, m: u64, mut f: impl FnMut(&[u64])) {
    let mut coeffs = vec![0u64; n];
    loop {
        f(&coeffs);
        let mut i = 0;
        while i < n {
            coeffs[i] += 1;
            if coeffs[i] < m {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
}

/// The class of a subgroup element in coordinate `i`. At level 1 the level
/// group is trivial and its elements carry no coordinates.
fn class_coordinate(g: &[BigInt], i: usize) -> BigInt {
    g.get(i).cloned().unwrap_or_else(BigInt::zero)
}

/// The Galois set of a cover: the characters of its subgroup, tabulated by
/// their value rows on the subgroup's sorted elements. The `i`-th canonical
/// generator acts by adding each element's `i`-th class coordinate.
pub fn fiber_functor(c: &FketCover) -> GammaSet {
    let m = c.level();
    let n = c.base().rank();
    let mb = BigInt::from(m);
    let g_elems = &c.subgroup().elements;
    let mut rows: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    sweep_coefficients(n, m, |coeffs| {
        let row: Vec<BigInt> = g_elems
            .iter()
            .map(|g| {
                let mut v = BigInt::zero();
                for (i, &c) in coeffs.iter().enumerate() {
                    v += BigInt::from(c) * class_coordinate(g, i);
                }
                v.mod_floor(&mb)
            })
            .collect();
        rows.insert(row);
    });
    let elements: Vec<Vec<BigInt>> = rows.into_iter().collect();
    assert_eq!(
        elements.len(),
        g_elems.len(),
        "a subgroup has as many characters as elements"
    );
    let mut action = Vec::with_capacity(n);
    for i in 0..n {
        let perm: Vec<usize> = elements
            .iter()
            .map(|row| {
                let shifted: Vec<BigInt> = row
                    .iter()
                    .zip(g_elems)
                    .map(|(v, g)| (v + class_coordinate(g, i)).mod_floor(&mb))
                    .collect();
                elements
                    .binary_search(&shifted)
                    .expect("translates of characters are characters")
            })
            .collect();
        action.push(perm);
    }
    let set = GammaSet {
        level: m,
        rank: n,
        elements,
        action,
    };
    debug_assert!(set.verify());
    assert!(set.is_transitive(), "connected covers have transitive fibers");
    set
}

/// Permutation matrices for the canonical generators acting on the fiber:
/// column `j` of the `i`-th matrix is the basis vector of `γ_i · j`.
pub fn monodromy_rep(c: &FketCover) -> Vec<IntMatrix> {
    let f = fiber_functor(c);
    let size = f.size();
    f.action
        .iter()
        .map(|perm| {
            let mut mat = IntMatrix::zero(size, size);
            for (j, &img) in perm.iter().enumerate() {
                mat.set(img, j, BigInt::one());
            }
            mat
        })
        .collect()
}

/// For nested covers over one base and level — the second cover's subgroup
/// inside the first's — the induced map on fibers: each character restricts.
/// Returns the index map `F(first) → F(second)`; surjectivity and
/// equivariance hold by construction and are asserted.
pub fn fiber_restriction(
    fine: &FketCover,
    coarse: &FketCover,
) -> Result<Vec<usize>, CoversError> {
    if fine.base() != coarse.base() || fine.level() != coarse.level() {
        return Err(CoversError::Shape(
            "fiber restriction needs a common base and level".into(),
        ));
    }
    let gamma = fine.level_group();
    if !coarse
        .subgroup()
        .elements
        .iter()
        .all(|e| fine.subgroup().contains(&gamma, e))
    {
        return Err(CoversError::Precondition(
            "the second cover's subgroup must lie inside the first's".into(),
        ));
    }
    let ff = fiber_functor(fine);
    let fc = fiber_functor(coarse);
    let positions: Vec<usize> = coarse
        .subgroup()
        .elements
        .iter()
        .map(|e| {
            fine.subgroup()
                .elements
                .binary_search(e)
                .expect("containment was checked element by element")
        })
        .collect();
    let map: Vec<usize> = ff
        .elements
        .iter()
        .map(|row| {
            let sub: Vec<BigInt> = positions.iter().map(|&p| row[p].clone()).collect();
            fc.elements
                .binary_search(&sub)
                .expect("a character restricts to a character")
        })
        .collect();
    let mut hit = vec![false; fc.size()];
    for &j in &map {
        hit[j] = true;
    }
    assert!(hit.iter().all(|&h| h), "restriction of fibers is surjective");
    for i in 0..ff.rank {
        for j in 0..ff.size() {
            assert_eq!(
                map[ff.action[i][j]], fc.action[i][map[j]],
                "restriction of fibers is equivariant"
            );
        }
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::cover_from_subgroup;
    use crate::point::LogPoint;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn root_covers_have_translation_fibers() {
        let pt = LogPoint::standard(1);
        let c = cover_from_subgroup(&pt, 4, &[vec![bi(1)]]).unwrap();
        let f = fiber_functor(&c);
        assert_eq!(f.size(), 4);
        assert!(f.verify());
        assert!(f.is_transitive());
        // The single generator is a 4-cycle: its orbit of 0 has size 4.
        let p = &f.action[0];
        let mut j = 0;
        let mut len = 0;
        loop {
            j = p[j];
            len += 1;
            if j == 0 {
                break;
            }
        }
        assert_eq!(len, 4);
    }

    #[test]
    fn the_trivial_cover_has_a_still_singleton() {
        let pt = LogPoint::standard(2);
        let c = cover_from_subgroup(&pt, 2, &[]).unwrap();
        let f = fiber_functor(&c);
        assert_eq!(f.size(), 1);
        assert_eq!(f.action, vec![vec![0], vec![0]]);
    }

    #[test]
    fn the_halved_diagonal_cover_flips_under_both_generators() {
        let pt = LogPoint::standard(2);
        let c = cover_from_subgroup(&pt, 2, &[vec![bi(1), bi(1)]]).unwrap();
        let f = fiber_functor(&c);
        assert_eq!(f.size(), 2);
        assert_eq!(f.action, vec![vec![1, 0], vec![1, 0]]);
        let mats = monodromy_rep(&c);
        let flip = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(mats, vec![flip.clone(), flip]);
    }

    #[test]
    fn monodromy_matrices_permute_coordinates() {
        let pt = LogPoint::standard(1);
        let c = cover_from_subgroup(&pt, 2, &[vec![bi(1)]]).unwrap();
        assert_eq!(
            monodromy_rep(&c),
            vec![IntMatrix::from_i64(&[&[0, 1], &[1, 0]])]
        );
        let trivial = cover_from_subgroup(&pt, 2, &[]).unwrap();
        assert_eq!(monodromy_rep(&trivial), vec![IntMatrix::identity(1)]);
    }

    #[test]
    fn restriction_maps_are_two_to_one_on_nested_root_covers() {
        let pt = LogPoint::standard(1);
        let quarter = cover_from_subgroup(&pt, 4, &[vec![bi(1)]]).unwrap();
        let half = cover_from_subgroup(&pt, 4, &[vec![bi(2)]]).unwrap();
        let map = fiber_restriction(&quarter, &half).unwrap();
        assert_eq!(map.len(), 4);
        for target in 0..2 {
            assert_eq!(map.iter().filter(|&&j| j == target).count(), 2);
        }
        // Reversed nesting is rejected.
        assert!(matches!(
            fiber_restriction(&half, &quarter),
            Err(CoversError::Precondition(_))
        ));
        let other = cover_from_subgroup(&LogPoint::standard(2), 4, &[]).unwrap();
        assert!(matches!(
            fiber_restriction(&quarter, &other),
            Err(CoversError::Shape(_))
        ));
    }
}

//! Randomized cone checks: duality is an involution, dual generators are
//! sound, and Hilbert bases agree with an exhaustive irreducible-point search
//! whose membership test is an independent Carathéodory feasibility check.

use cones::{canonicalize, contains, dual_cone, hilbert_basis, lineality_space, RationalCone};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_cone(rng: &mut ChaCha8Rng, max_dim: usize, max_rays: usize, max_abs: i64) -> RationalCone {
    let dim = rng.gen_range(1..=max_dim);
    let nrays = rng.gen_range(0..=max_rays);
    let rays = (0..nrays)
        .map(|_| {
            (0..dim)
                .map(|_| BigInt::from(rng.gen_range(-max_abs..=max_abs)))
                .collect()
        })
        .collect();
    RationalCone::new(dim, rays).unwrap()
}

#[test]
fn duality_is_an_involution() {
    let mut rng = ChaCha8Rng::seed_from_u64(201);
    for _ in 0..60 {
        let c = random_cone(&mut rng, 4, 5, 4);
        let dd = dual_cone(&dual_cone(&c));
        assert_eq!(
            dd,
            canonicalize(&c),
            "double dual must canonicalize back, cone {:?}",
            c
        );
    }
}

#[test]
fn dual_generators_are_sound_and_complete() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for _ in 0..60 {
        let c = random_cone(&mut rng, 4, 5, 4);
        let d = dual_cone(&c);
        // Soundness: every dual generator is nonnegative against every ray.
        for a in d.rays() {
            for r in c.rays() {
                let dot: BigInt = a.iter().zip(r).map(|(x, y)| x * y).sum();
                assert!(dot >= BigInt::from(0));
            }
        }
        // Membership via the dual accepts sums of rays.
        if !c.rays().is_empty() {
            let mut v = vec![BigInt::from(0); c.dim()];
            for r in c.rays() {
                for (i, x) in r.iter().enumerate() {
                    v[i] += x;
                }
            }
            assert!(contains(&c, &v));
        }
    }
}

#[test]
fn lineality_vectors_run_both_ways() {
    let mut rng = ChaCha8Rng::seed_from_u64(203);
    for _ in 0..40 {
        let c = random_cone(&mut rng, 4, 5, 4);
        for b in lineality_space(&c) {
            let neg: Vec<BigInt> = b.iter().map(|x| -x).collect();
            assert!(contains(&c, &b));
            assert!(contains(&c, &neg));
        }
    }
}

// ---------------------------------------------------------------------------
// Independent membership: x ∈ cone(rays) iff some linearly independent
// subset of rays expresses x with nonnegative rational coefficients
// (Carathéodory). Solved exactly over i64 by Gaussian elimination on each
// subset, no dual machinery involved.
// ---------------------------------------------------------------------------

/// Solves R·λ = x for the subset of ray indices, exact rational elimination;
/// returns false on inconsistency or any negative coefficient.
#[allow(clippy::needless_range_loop)] // simultaneous a[i]/a[r] row access
fn subset_expresses(rays: &[Vec<i64>], subset: &[usize], x: &[i64]) -> bool {
    let d = x.len();
    let k = subset.len();
    // Augmented rational matrix as (numerator, denominator) pairs over i128.
    let mut a = vec![vec![(0i128, 1i128); k + 1]; d];
    for (row, entry) in a.iter_mut().enumerate() {
        for (col, &ri) in subset.iter().enumerate() {
            entry[col] = (rays[ri][row] as i128, 1);
        }
        entry[k] = (x[row] as i128, 1);
    }
    fn sub_mul(a: (i128, i128), b: (i128, i128), c: (i128, i128)) -> (i128, i128) {
        // a - b*c, normalized by gcd to keep numbers small.
        let num = a.0 * b.1 * c.1 - b.0 * c.0 * a.1;
        let den = a.1 * b.1 * c.1;
        normalize(num, den)
    }
    fn normalize(num: i128, den: i128) -> (i128, i128) {
        fn gcd(a: i128, b: i128) -> i128 {
            if b == 0 { a.abs() } else { gcd(b, a % b) }
        }
        if num == 0 {
            return (0, 1);
        }
        let g = gcd(num, den);
        let sign = if den < 0 { -1 } else { 1 };
        (sign * num / g, sign * den / g)
    }
    fn div(a: (i128, i128), b: (i128, i128)) -> (i128, i128) {
        normalize(a.0 * b.1, a.1 * b.0)
    }
    let mut pivot_rows = Vec::new();
    let mut r = 0;
    for col in 0..k {
        let Some(pr) = (r..d).find(|&i| a[i][col].0 != 0) else {
            return false; // dependent subset; a smaller subset will cover it
        };
        a.swap(r, pr);
        let piv = a[r][col];
        for i in 0..d {
            if i == r || a[i][col].0 == 0 {
                continue;
            }
            let factor = div(a[i][col], piv);
            for j in col..=k {
                a[i][j] = sub_mul(a[i][j], factor, a[r][j]);
            }
        }
        pivot_rows.push(r);
        r += 1;
    }
    // Consistency: zero rows must have zero right-hand side.
    for i in r..d {
        if a[i][k].0 != 0 {
            return false;
        }
    }
    // Nonnegativity of each solved coefficient.
    for (col, &pr) in pivot_rows.iter().enumerate() {
        let lambda = div(a[pr][k], a[pr][col]);
        if lambda.0 < 0 {
            return false;
        }
    }
    true
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn oracle_member(rays: &[Vec<i64>], x: &[i64]) -> bool {
    if x.iter().all(|&v| v == 0) {
        return true;
    }
    let n = rays.len();
    let d = x.len();
    for k in 1..=n.min(d) {
        for subset in k_subsets(n, k) {
            if subset_expresses(rays, &subset, x) {
                return true;
            }
        }
    }
    false
}

/// Random pointed cones whose rays all have first coordinate ≥ 1. Pointedness
/// is automatic, and any decomposition x = a + b inside the cone bounds the
/// parts: a_1 ≤ x_1 - 1 and |a_j| ≤ 4·x_1.
fn random_positive_cone(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Vec<i64>> {
    let nrays = rng.gen_range(1..=dim + 1);
    (0..nrays)
        .map(|_| {
            let mut r = vec![rng.gen_range(1..=4)];
            for _ in 1..dim {
                r.push(rng.gen_range(-4i64..=4));
            }
            r
        })
        .collect()
}

fn to_cone(dim: usize, rays: &[Vec<i64>]) -> RationalCone {
    RationalCone::new(
        dim,
        rays.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect(),
    )
    .unwrap()
}

/// Cone lattice points with first coordinate in [0, cap] (their other
/// coordinates are bounded by 4·cap inside such a cone).
fn cone_points_by_height(rays: &[Vec<i64>], dim: usize, cap: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let side = 4 * cap;
    let mut cursor = vec![-side; dim];
    cursor[0] = 0;
    loop {
        if oracle_member(rays, &cursor) {
            out.push(cursor.clone());
        }
        let mut carried = true;
        for i in (0..dim).rev() {
            let (lo, hi) = if i == 0 { (0, cap) } else { (-side, side) };
            cursor[i] += 1;
            if cursor[i] <= hi {
                carried = false;
                break;
            }
            cursor[i] = lo;
        }
        if carried {
            break;
        }
    }
    out
}

#[test]
fn hilbert_bases_match_irreducible_point_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(204);
    let mut done = 0;
    while done < 12 {
        let dim = rng.gen_range(2..=3);
        let rays = random_positive_cone(&mut rng, dim);
        let c = to_cone(dim, &rays);
        if c.rays().is_empty() {
            continue;
        }
        done += 1;
        // Height cap: Hilbert elements are rays or half-open parallelotope
        // points of subcones, so their height is below the total ray height.
        let cap: i64 = rays.iter().map(|r| r[0]).sum();
        let points = cone_points_by_height(&rays, dim, cap);
        let mut irreducible: Vec<Vec<i64>> = Vec::new();
        for x in &points {
            if x.iter().all(|&v| v == 0) {
                continue;
            }
            let mut reducible = false;
            for a in &points {
                if a.iter().all(|&v| v == 0) || a == x {
                    continue;
                }
                let b: Vec<i64> = x.iter().zip(a).map(|(xi, ai)| xi - ai).collect();
                if b.iter().all(|&v| v == 0) {
                    continue;
                }
                if b[0] >= 0 && oracle_member(&rays, &b) {
                    reducible = true;
                    break;
                }
            }
            if !reducible {
                irreducible.push(x.clone());
            }
        }
        irreducible.sort();
        let basis: Vec<Vec<i64>> = hilbert_basis(&c)
            .unwrap()
            .into_iter()
            .map(|v| v.iter().map(|x| i64::try_from(x.clone()).unwrap()).collect())
            .collect();
        assert_eq!(basis, irreducible, "cone rays {:?}", rays);
    }
}

#[test]
fn hilbert_basis_generates_low_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(205);
    for _ in 0..8 {
        let dim = rng.gen_range(2..=3);
        let rays = random_positive_cone(&mut rng, dim);
        let c = to_cone(dim, &rays);
        let basis = hilbert_basis(&c).unwrap();
        let cap = 7i64;
        let points = cone_points_by_height(&rays, dim, cap);
        // Saturate sums of basis elements below the height cap.
        let mut reachable: std::collections::BTreeSet<Vec<i64>> = std::collections::BTreeSet::new();
        reachable.insert(vec![0; dim]);
        let basis_i64: Vec<Vec<i64>> = basis
            .iter()
            .map(|v| v.iter().map(|x| i64::try_from(x.clone()).unwrap()).collect())
            .collect();
        let mut frontier: Vec<Vec<i64>> = vec![vec![0; dim]];
        while let Some(p) = frontier.pop() {
            for b in &basis_i64 {
                let q: Vec<i64> = p.iter().zip(b).map(|(x, y)| x + y).collect();
                if q[0] <= cap && reachable.insert(q.clone()) {
                    frontier.push(q);
                }
            }
        }
        for p in &points {
            assert!(
                reachable.contains(p),
                "point {:?} not generated for rays {:?}",
                p,
                rays
            );
        }
    }
}

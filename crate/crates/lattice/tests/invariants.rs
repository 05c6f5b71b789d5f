//! Randomized structural checks: Smith form identities, solver completeness,
//! cokernels against an independent coset-census oracle, subgroup counts
//! against closed-subset search, and sections of random surjections.

use lattice::{
    cokernel, determinant, kernel_basis, section_onto_free, smith_normal_form,
    solve_integer, subgroup_enumerate, FinAbGroup, GroupHom, IntMatrix,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(rng: &mut ChaCha8Rng, max_dim: usize, max_abs: i64) -> IntMatrix {
    let rows = rng.gen_range(1..=max_dim);
    let cols = rng.gen_range(1..=max_dim);
    let entries = (0..rows * cols)
        .map(|_| BigInt::from(rng.gen_range(-max_abs..=max_abs)))
        .collect();
    IntMatrix::new(rows, cols, entries)
}

#[test]
fn smith_form_identities_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..200 {
        let a = random_matrix(&mut rng, 5, 9);
        let s = smith_normal_form(&a);
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d, "U·A·V must equal D");
        let du = determinant(&s.u);
        let dv = determinant(&s.v);
        assert!(du.magnitude().is_one(), "U must be unimodular");
        assert!(dv.magnitude().is_one(), "V must be unimodular");
        let diag = s.diagonal();
        for i in 0..diag.len() {
            assert!(!diag[i].is_negative());
            if i + 1 < diag.len() && !diag[i].is_zero() {
                assert!(
                    diag[i + 1].mod_floor(&diag[i]).is_zero(),
                    "diagonal chain must divide: {:?}",
                    diag
                );
            }
            if diag[i].is_zero() && i + 1 < diag.len() {
                assert!(diag[i + 1].is_zero(), "zeros close the diagonal");
            }
        }
        // For square matrices the product of the diagonal is |det| up to sign.
        if a.is_square() {
            let prod: BigInt = diag.iter().product();
            assert_eq!(prod.magnitude(), determinant(&a).magnitude());
        }
        // Rank-nullity over Z.
        assert_eq!(s.rank() + kernel_basis(&a).len(), a.cols());
        for v in kernel_basis(&a) {
            assert!(a.apply(&v).iter().all(|x| x.is_zero()));
        }
    }
}

#[test]
fn solver_finds_constructed_solutions() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for _ in 0..200 {
        let a = random_matrix(&mut rng, 5, 9);
        let x0: Vec<BigInt> = (0..a.cols())
            .map(|_| BigInt::from(rng.gen_range(-9i64..=9)))
            .collect();
        let b = a.apply(&x0);
        let x = solve_integer(&a, &b).expect("a constructed system must be solvable");
        assert_eq!(a.apply(&x), b);
        // Arbitrary right-hand sides: any reported solution must verify.
        let b2: Vec<BigInt> = (0..a.rows())
            .map(|_| BigInt::from(rng.gen_range(-9i64..=9)))
            .collect();
        if let Some(x2) = solve_integer(&a, &b2) {
            assert_eq!(a.apply(&x2), b2);
        }
    }
}

// ---------------------------------------------------------------------------
// Independent cokernel oracle: schoolbook column triangularization over i64,
// coset enumeration, and an element-order census. No Smith machinery.
// ---------------------------------------------------------------------------

/// Lower-triangular basis (positive pivots) of the column span, or None if
/// the span has rank < m (infinite quotient).
fn school_triangular(mut cols: Vec<Vec<i64>>, m: usize) -> Option<Vec<Vec<i64>>> {
    let mut basis: Vec<Vec<i64>> = Vec::new();
    for r in 0..m {
        // Euclid across row r until at most one column keeps a nonzero entry.
        loop {
            let mut live: Vec<usize> = (0..cols.len()).filter(|&j| cols[j][r] != 0).collect();
            if live.len() <= 1 {
                break;
            }
            live.sort_by_key(|&j| cols[j][r].abs());
            let (small, big) = (live[0], live[1]);
            let q = cols[big][r] / cols[small][r];
            let scaled: Vec<i64> = cols[small].iter().map(|&x| q * x).collect();
            for (x, s) in cols[big].iter_mut().zip(&scaled) {
                *x -= s;
            }
        }
        let j = (0..cols.len()).find(|&j| cols[j][r] != 0)?;
        let mut piv = cols.swap_remove(j);
        if piv[r] < 0 {
            for x in piv.iter_mut() {
                *x = -*x;
            }
        }
        basis.push(piv);
    }
    Some(basis)
}

/// Canonical coset representative with respect to a triangular basis.
fn reduce_coset(basis: &[Vec<i64>], v: &mut [i64]) {
    for (r, col) in basis.iter().enumerate() {
        let q = v[r].div_euclid(col[r]);
        if q != 0 {
            for i in 0..v.len() {
                v[i] -= q * col[i];
            }
        }
    }
}

/// Number of coset representatives killed by multiplication by k.
fn census_count(basis: &[Vec<i64>], m: usize, order: i64, k: i64) -> i64 {
    let mut reps = vec![vec![0i64; m]];
    for (r, col) in basis.iter().enumerate() {
        let mut next = Vec::new();
        for rep in &reps {
            for x in 0..col[r] {
                let mut v = rep.clone();
                v[r] = x;
                next.push(v);
            }
        }
        reps = next;
    }
    assert_eq!(reps.len() as i64, order);
    // Grid vectors are already canonical: each coordinate sits below its
    // pivot, so the reduction quotients vanish.
    let mut count = 0;
    for rep in &reps {
        let mut scaled: Vec<i64> = rep.iter().map(|x| x * k).collect();
        reduce_coset(basis, &mut scaled);
        if scaled.iter().all(|&x| x == 0) {
            count += 1;
        }
    }
    count
}

#[test]
fn cokernel_matches_coset_census() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut finite_seen = 0;
    for _ in 0..150 {
        let a = random_matrix(&mut rng, 4, 9);
        let m = a.rows();
        let src = FinAbGroup::free(a.cols());
        let tgt = FinAbGroup::free(m);
        let f = GroupHom::new(src, tgt, a.clone()).unwrap();
        let (g, proj) = cokernel(&f);
        let cols_i64: Vec<Vec<i64>> = a
            .columns()
            .iter()
            .map(|c| c.iter().map(|x| i64::try_from(x.clone()).unwrap()).collect())
            .collect();
        match school_triangular(cols_i64, m) {
            None => assert!(
                g.free_rank() > 0,
                "oracle sees infinite quotient, cokernel must have free rank"
            ),
            Some(basis) => {
                assert_eq!(g.free_rank(), 0);
                let order: i64 = basis.iter().enumerate().map(|(r, c)| c[r]).product();
                assert_eq!(g.order(), Some(BigInt::from(order)));
                if order <= 200 {
                    finite_seen += 1;
                    for k in 1..=order {
                        let expected: BigInt = g
                            .torsion()
                            .iter()
                            .map(|d| BigInt::from(k).gcd(d))
                            .product();
                        let got = census_count(&basis, m, order, k);
                        assert_eq!(
                            BigInt::from(got),
                            expected,
                            "census mismatch at k={k} for order {order}"
                        );
                    }
                }
            }
        }
        // The projection must be surjective with kernel containing im(f).
        assert!(proj.is_surjective());
        for j in 0..a.cols() {
            let img = proj.apply(&a.column(j));
            assert!(g.is_zero_elem(&img));
        }
    }
    assert!(finite_seen >= 20, "need a healthy share of finite quotients");
}

// ---------------------------------------------------------------------------
// Subgroup counts against closed-subset search.
// ---------------------------------------------------------------------------

/// Counts subsets containing zero that are closed under addition. For finite
/// groups every such subset is a subgroup.
#[allow(clippy::needless_range_loop)] // pairwise table fill over one slice
fn closed_subset_count(g: &FinAbGroup) -> usize {
    let elems = g.elements(16).unwrap();
    let n = elems.len();
    let index_of = |v: &Vec<BigInt>| elems.iter().position(|e| e == v).unwrap();
    let mut add_table = vec![vec![0usize; n]; n];
    for i in 0..n {
        for j in 0..n {
            add_table[i][j] = index_of(&g.add(&elems[i], &elems[j]));
        }
    }
    let zero = index_of(&g.zero());
    let mut count = 0;
    for mask in 0u32..(1 << n) {
        if mask & (1 << zero) == 0 {
            continue;
        }
        let mut closed = true;
        'outer: for i in 0..n {
            if mask & (1 << i) == 0 {
                continue;
            }
            for j in i..n {
                if mask & (1 << j) == 0 {
                    continue;
                }
                if mask & (1 << add_table[i][j]) == 0 {
                    closed = false;
                    break 'outer;
                }
            }
        }
        if closed {
            count += 1;
        }
    }
    count
}

#[test]
fn subgroup_counts_match_closed_subset_search() {
    let groups = vec![
        FinAbGroup::trivial(),
        FinAbGroup::cyclic(2),
        FinAbGroup::cyclic(4),
        FinAbGroup::cyclic(6),
        FinAbGroup::cyclic(8),
        FinAbGroup::cyclic(12),
        FinAbGroup::cyclic(15),
        FinAbGroup::new(0, vec![BigInt::from(2), BigInt::from(2)]).unwrap(),
        FinAbGroup::new(0, vec![BigInt::from(2), BigInt::from(4)]).unwrap(),
        FinAbGroup::new(0, vec![BigInt::from(2), BigInt::from(2), BigInt::from(2)]).unwrap(),
        FinAbGroup::new(0, vec![BigInt::from(3), BigInt::from(3)]).unwrap(),
        FinAbGroup::new(0, vec![BigInt::from(4), BigInt::from(4)]).unwrap(),
    ];
    for g in groups {
        let fast = subgroup_enumerate(&g, 16).unwrap().len();
        let slow = closed_subset_count(&g);
        assert_eq!(fast, slow, "subgroup count for {:?}", g);
    }
}

// ---------------------------------------------------------------------------
// Sections of random surjections onto free groups.
// ---------------------------------------------------------------------------

#[test]
fn sections_split_random_surjections() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for _ in 0..100 {
        let k = rng.gen_range(1..=3);
        let extra = rng.gen_range(0..=2);
        let torsion_coords = rng.gen_range(0..=2);
        // Surjective by construction: the matrix contains a permuted identity
        // block; torsion coordinates of the source must map to zero.
        let n = k + extra;
        let mut cols: Vec<Vec<BigInt>> = Vec::new();
        for i in 0..k {
            let mut e = vec![BigInt::zero(); k];
            e[i] = BigInt::one();
            cols.push(e);
        }
        for _ in 0..extra {
            cols.push((0..k).map(|_| BigInt::from(rng.gen_range(-4i64..=4))).collect());
        }
        for i in (1..cols.len()).rev() {
            let j = rng.gen_range(0..=i);
            cols.swap(i, j);
        }
        for _ in 0..torsion_coords {
            cols.push(vec![BigInt::zero(); k]);
        }
        let torsion: Vec<BigInt> = std::iter::repeat_n(BigInt::from(2), torsion_coords).collect();
        let src = FinAbGroup::new(n, torsion).unwrap();
        let tgt = FinAbGroup::free(k);
        let f = GroupHom::new(src, tgt, IntMatrix::from_columns(k, &cols)).unwrap();
        let s = section_onto_free(&f).unwrap();
        assert!(f.compose(&s).unwrap().is_identity());
    }
}

#[test]
fn hom_json_roundtrip() {
    let src = FinAbGroup::new(1, vec![BigInt::from(2)]).unwrap();
    let tgt = FinAbGroup::free(1);
    let f = GroupHom::new(src, tgt, IntMatrix::from_i64(&[&[3, 0]])).unwrap();
    let text = serde_json::to_string(&f).unwrap();
    let back: GroupHom = serde_json::from_str(&text).unwrap();
    assert_eq!(back, f);
}

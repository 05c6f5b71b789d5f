//! Koszul complexes and the cohomology they compute.
//!
//! For a module with commuting operators `γ_1 … γ_n`, the complex has
//! `C^i = M ⊗ Λ^i(F^n)` of dimension `dim(M) · C(n, i)`, with differential
//! sending `m ⊗ e_S` to `Σ_{j ∉ S} ± (γ_j − 1) m ⊗ e_{S ∪ {j}}`.  This is
//! the standard complex computing continuous cohomology of a product of
//! `n` procyclic groups acting through the `γ_j`, and `d ∘ d = 0` is
//! checked as an exact matrix identity on every construction.

use num_integer::binomial;

use crate::field::Fq;
use crate::matrix::{independent_from, kernel_basis, rank, FqMatrix};
use crate::module::GammaModule;
use crate::GammaError;

/// The Koszul complex of a module: term dimensions `dim(M) · C(n, i)` for
/// `i = 0..n` and the differentials between them.
#[derive(Clone, Debug)]
pub struct KoszulComplex {
    field: Fq,
    n: usize,
    module_dim: usize,
    terms: Vec<usize>,
    /// `differentials[i]` maps `C^i → C^{i+1}`; the last entry has zero
    /// rows so every term has an outgoing map.
    differentials: Vec<FqMatrix>,
}

/// All subsets of `{0..n}` of size `k`, as bitmasks in increasing order.
fn subsets(n: usize, k: usize) -> Vec<u32> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == k {
            out.push(mask);
        }
    }
    out
}

impl KoszulComplex {
    pub fn new(module: &GammaModule) -> Self {
        let f = module.field().clone();
        let n = module.n();
        let d = module.dim();
        let id = FqMatrix::identity(d);
        let deltas: Vec<FqMatrix> = module.gammas().iter().map(|g| g.sub(&f, &id)).collect();

        let terms: Vec<usize> = (0..=n)
            .map(|i| d * binomial(n as u64, i as u64) as usize)
            .collect();

        let mut differentials = Vec::with_capacity(n + 1);
        for i in 0..n {
            let lower = subsets(n, i);
            let upper = subsets(n, i + 1);
            let mut matrix = FqMatrix::zero(terms[i + 1], terms[i]);
            for (s_idx, &s) in lower.iter().enumerate() {
                for j in 0..n {
                    let bit = 1u32 << j;
                    if s & bit != 0 {
                        continue;
                    }
                    let target = s | bit;
                    let t_idx = upper.binary_search(&target).expect("subset enumeration is complete");
                    let crossings = (s & (bit - 1)).count_ones();
                    let negate = crossings % 2 == 1;
                    let block = &deltas[j];
                    for r in 0..d {
                        for c in 0..d {
                            let mut value = block.at(r, c);
                            if negate {
                                value = f.neg(value);
                            }
                            let row = t_idx * d + r;
                            let col = s_idx * d + c;
                            matrix.set(row, col, f.add(matrix.at(row, col), value));
                        }
                    }
                }
            }
            differentials.push(matrix);
        }
        differentials.push(FqMatrix::zero(0, terms[n]));

        for i in 0..n {
            let square = differentials[i + 1].mul(&f, &differentials[i]);
            assert!(
                square.is_zero(),
                "Koszul differentials fail d∘d = 0 at degree {i}"
            );
        }

        KoszulComplex {
            field: f,
            n,
            module_dim: d,
            terms,
            differentials,
        }
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    /// The number of operators; cohomology lives in degrees `0..=n`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn module_dim(&self) -> usize {
        self.module_dim
    }

    /// Dimensions of the terms `C^0 … C^n`.
    pub fn terms(&self) -> &[usize] {
        &self.terms
    }

    /// The differential out of degree `i` (zero rows at the top degree).
    pub fn differential(&self, i: usize) -> &FqMatrix {
        &self.differentials[i]
    }

    /// A basis of the cocycles `ker(d_i)`.
    pub fn cocycle_basis(&self, i: usize) -> Vec<Vec<u64>> {
        kernel_basis(&self.field, &self.differentials[i])
    }

    /// A basis of the coboundaries `im(d_{i-1})`; empty in degree zero.
    pub fn coboundary_basis(&self, i: usize) -> Vec<Vec<u64>> {
        if i == 0 {
            return Vec::new();
        }
        let prev = &self.differentials[i - 1];
        let columns: Vec<Vec<u64>> = (0..prev.cols()).map(|j| prev.column(j)).collect();
        independent_from(&self.field, &[], &columns)
    }
}

/// Cohomology of a Koszul complex: dimensions `dim H^i` for `i = 0..n`
/// and, per degree, cocycle representatives whose classes form a basis.
#[derive(Clone, Debug)]
pub struct KoszulCohomology {
    pub dims: Vec<usize>,
    pub bases: Vec<Vec<Vec<u64>>>,
}

impl KoszulCohomology {
    /// `Σ (−1)^i dim H^i`; zero whenever at least one operator is present.
    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }
}

/// Computes `H^i` for `i = 0..n`.  `H^0` is the joint fixed space, the
/// complex is zero past degree `n`, and the Euler characteristic vanishes
/// as soon as `n ≥ 1`.
pub fn koszul_cohomology(module: &GammaModule) -> KoszulCohomology {
    let complex = KoszulComplex::new(module);
    let mut dims = Vec::with_capacity(complex.n() + 1);
    let mut bases = Vec::with_capacity(complex.n() + 1);
    for i in 0..=complex.n() {
        let cocycles = complex.cocycle_basis(i);
        let coboundaries = complex.coboundary_basis(i);
        let representatives = independent_from(&complex.field, &coboundaries, &cocycles);
        dims.push(representatives.len());
        bases.push(representatives);
    }
    KoszulCohomology { dims, bases }
}

/// Group cohomology of `Z/m` acting on `V` through a single operator, via
/// the 2-periodic resolution alternating `γ − 1` and the norm
/// `1 + γ + … + γ^{m-1}`.  Returns `dim H^i` for `i = 0, 1, 2`.
pub fn cyclic_cohomology(m: u64, v: &GammaModule) -> Result<Vec<usize>, GammaError> {
    if v.n() != 1 {
        return Err(GammaError::Shape(format!(
            "cyclic cohomology takes a single operator, found {}",
            v.n()
        )));
    }
    if m == 0 {
        return Err(GammaError::Precondition(
            "the cyclic group order must be positive".into(),
        ));
    }
    let f = v.field();
    let d = v.dim();
    let gamma = v.gamma(0);
    let id = FqMatrix::identity(d);
    if gamma.pow(f, m) != id {
        return Err(GammaError::Precondition(format!(
            "the operator does not have order dividing {m}"
        )));
    }
    let t = gamma.sub(f, &id);
    let mut norm = FqMatrix::zero(d, d);
    let mut power = id;
    for _ in 0..m {
        norm = norm.add(f, &power);
        power = power.mul(f, gamma);
    }
    let rank_t = rank(f, &t);
    let rank_norm = rank(f, &norm);
    // γ^m = 1 gives N∘T = T∘N = 0, so both images land in the kernels.
    let h0 = d - rank_t;
    assert!(d - rank_norm >= rank_t && d - rank_t >= rank_norm);
    let h1 = (d - rank_norm) - rank_t;
    let h2 = (d - rank_t) - rank_norm;
    Ok(vec![h0, h1, h2])
}

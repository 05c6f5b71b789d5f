//! Modules for a family of commuting automorphisms.
//!
//! A [`GammaModule`] is a finite-dimensional `F_q` vector space together
//! with an ordered family `γ_1, …, γ_n` of pairwise-commuting invertible
//! operators — the action of a profinite abelian group through its chosen
//! topological generators.  Because the field is finite, every operator has
//! finite order, so each γ is automatically quasi-unipotent; the
//! constructions here (Jordan towers, induced cycles, tensor and
//! restriction, unipotent parts) are the raw material the cohomology
//! routines consume.

use crate::field::Fq;
use crate::matrix::{
    coordinates_in_span, is_invertible, kernel_basis, FqMatrix,
};
use crate::GammaError;

/// A finite `F_q`-module with commuting invertible operators `γ_1 … γ_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaModule {
    field: Fq,
    dim: usize,
    gammas: Vec<FqMatrix>,
}

impl GammaModule {
    /// Validates shapes, entry ranges, invertibility, and commutativity.
    pub fn new(field: Fq, dim: usize, gammas: Vec<FqMatrix>) -> Result<Self, GammaError> {
        for (j, g) in gammas.iter().enumerate() {
            if g.rows() != dim || g.cols() != dim {
                return Err(GammaError::Shape(format!(
                    "operator {j} is {}×{}, the module has dimension {dim}",
                    g.rows(),
                    g.cols()
                )));
            }
            for r in 0..dim {
                for c in 0..dim {
                    if g.at(r, c) >= field.order() {
                        return Err(GammaError::Shape(format!(
                            "operator {j} carries the entry {} outside F_{}",
                            g.at(r, c),
                            field.order()
                        )));
                    }
                }
            }
            if !is_invertible(&field, g) {
                return Err(GammaError::Precondition(format!(
                    "operator {j} is not invertible"
                )));
            }
        }
        for i in 0..gammas.len() {
            for j in i + 1..gammas.len() {
                if gammas[i].mul(&field, &gammas[j]) != gammas[j].mul(&field, &gammas[i]) {
                    return Err(GammaError::Precondition(format!(
                        "operators {i} and {j} do not commute"
                    )));
                }
            }
        }
        Ok(GammaModule { field, dim, gammas })
    }

    /// The module with trivial action: `n` identity operators on `F_q^dim`.
    pub fn trivial(field: Fq, dim: usize, n: usize) -> Self {
        let gammas = vec![FqMatrix::identity(dim); n];
        GammaModule { field, dim, gammas }
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The number of operators.
    pub fn n(&self) -> usize {
        self.gammas.len()
    }

    pub fn gammas(&self) -> &[FqMatrix] {
        &self.gammas
    }

    pub fn gamma(&self, j: usize) -> &FqMatrix {
        &self.gammas[j]
    }

    pub fn is_trivial_action(&self) -> bool {
        let id = FqMatrix::identity(self.dim);
        self.gammas.iter().all(|g| *g == id)
    }
}

/// The `r × r` unipotent Jordan block `J_r = I + N` with ones on the
/// superdiagonal, so `J_r e_i = e_i + e_{i-1}`.
pub fn jordan_block(r: usize) -> FqMatrix {
    let mut m = FqMatrix::identity(r);
    for i in 0..r.saturating_sub(1) {
        m.set(i, i + 1, 1);
    }
    m
}

/// The `r`-dimensional module where `γ_j` acts by `J_r^{n_j}`: the degree
/// `< r` slice of a polynomial variable on which the `j`-th generator acts
/// by a shift of size `n_j` (in the binomial basis the shift-by-one matrix
/// is exactly `J_r`).
pub fn jr_module(r: usize, n_vec: &[u64], field: &Fq) -> GammaModule {
    assert!(r >= 1, "Jordan towers start at r = 1");
    let j = jordan_block(r);
    let gammas = n_vec.iter().map(|&k| j.pow(field, k)).collect();
    GammaModule {
        field: field.clone(),
        dim: r,
        gammas,
    }
}

/// The `m`-dimensional module induced from the trivial representation of
/// the index-`m` subgroup: a single generator acting by the `m`-cycle
/// permutation matrix.
pub fn km_module(m: usize, field: &Fq) -> GammaModule {
    assert!(m >= 1, "induced cycle modules need m ≥ 1");
    let mut perm = FqMatrix::zero(m, m);
    for i in 0..m {
        perm.set((i + 1) % m, i, 1);
    }
    GammaModule {
        field: field.clone(),
        dim: m,
        gammas: vec![perm],
    }
}

/// Tensor product over `F_q` with the diagonal action
/// `γ_j = γ_j^{(1)} ⊗ γ_j^{(2)}`.  Both factors must live over the same
/// field and carry the same number of operators.
pub fn tensor(a: &GammaModule, b: &GammaModule) -> Result<GammaModule, GammaError> {
    if a.field != b.field {
        return Err(GammaError::Shape(
            "tensor factors live over different fields".into(),
        ));
    }
    if a.n() != b.n() {
        return Err(GammaError::Shape(format!(
            "tensor factors carry {} and {} operators",
            a.n(),
            b.n()
        )));
    }
    let gammas = a
        .gammas
        .iter()
        .zip(&b.gammas)
        .map(|(x, y)| x.kronecker(&a.field, y))
        .collect();
    Ok(GammaModule {
        field: a.field.clone(),
        dim: a.dim * b.dim,
        gammas,
    })
}

/// Restriction to the index-`m` subgroup generated by the `m`-th powers:
/// the same space with operators `γ_j^m`.
pub fn restrict(module: &GammaModule, m: u64) -> Result<GammaModule, GammaError> {
    if m == 0 {
        return Err(GammaError::Precondition(
            "restriction is along a finite-index subgroup, so m ≥ 1".into(),
        ));
    }
    let gammas = module
        .gammas
        .iter()
        .map(|g| g.pow(&module.field, m))
        .collect();
    Ok(GammaModule {
        field: module.field.clone(),
        dim: module.dim,
        gammas,
    })
}

/// The largest submodule on which every operator acts unipotently.
#[derive(Clone, Debug)]
pub struct UnipotentPart {
    /// The subspace as a module in its own right, in the basis recorded by
    /// `inclusion`.
    pub module: GammaModule,
    /// `dim × k` matrix whose columns are the chosen basis vectors of the
    /// subspace inside the ambient module.
    pub inclusion: FqMatrix,
}

/// Computes the maximal subspace invariant under all `γ_j` on which each
/// `γ_j − 1` is nilpotent: the intersection of the generalized
/// 1-eigenspaces `ker (γ_j − 1)^dim`.  Commutativity makes the
/// intersection invariant, so the operators restrict.
pub fn unipotent_part(module: &GammaModule) -> UnipotentPart {
    let f = &module.field;
    let d = module.dim;
    let id = FqMatrix::identity(d);
    let mut stacked = FqMatrix::zero(0, d);
    for g in &module.gammas {
        let nil = g.sub(f, &id).pow(f, d as u64);
        stacked = stacked.vstack(&nil);
    }
    let basis = kernel_basis(f, &stacked);
    let k = basis.len();
    let mut inclusion = FqMatrix::zero(d, k);
    for (j, v) in basis.iter().enumerate() {
        for (i, &x) in v.iter().enumerate() {
            inclusion.set(i, j, x);
        }
    }
    let mut restricted = Vec::with_capacity(module.n());
    for g in &module.gammas {
        let mut op = FqMatrix::zero(k, k);
        for (j, v) in basis.iter().enumerate() {
            let image = g.apply(f, v);
            let coords = coordinates_in_span(f, &basis, &image)
                .expect("generalized 1-eigenspaces are stable under commuting operators");
            for (i, &c) in coords.iter().enumerate() {
                op.set(i, j, c);
            }
        }
        restricted.push(op);
    }
    UnipotentPart {
        module: GammaModule {
            field: f.clone(),
            dim: k,
            gammas: restricted,
        },
        inclusion,
    }
}

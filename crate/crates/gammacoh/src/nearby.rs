//! Stabilized cohomology of monodromy towers.
//!
//! The unipotent nearby-cycle module of `M` is the colimit of `M ⊗ J_r`
//! along the coordinate inclusions `J_r ⊂ J_{r+1}` (a polynomial variable
//! truncated in degree, with each generator shifting it at its own speed
//! `n_j`).  Cohomology commutes with the colimit, so the computation runs
//! up the tower and watches the images of `H^i(M ⊗ J_r) → H^i(M ⊗ J_{r'})`:
//! the answer is the eventual image rank, not the plateau of the raw
//! dimensions, which stay strictly larger in odd degrees.  Classes can
//! survive a few levels before dying — one per nilpotency degree of the
//! operators — so the ranks are taken over a window as wide as the module
//! and accepted only when widening the window and shifting it up both
//! leave them fixed.  Running past the configured ceiling is an error,
//! never a silent truncation.

use crate::koszul::KoszulComplex;
use crate::matrix::{span_dim, FqMatrix};
use crate::module::{jr_module, km_module, restrict, tensor, GammaModule};
use crate::GammaError;

/// Default ceiling for the tower parameter `r`.
pub const DEFAULT_R_MAX: u64 = 64;

/// Stable cohomology dimensions of a tower, together with the level at
/// which stabilization was detected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NearbyCycles {
    /// `dim H^i` of the colimit, for `i = 0..n`.
    pub dims: Vec<usize>,
    /// The first level whose windowed image ranks are confirmed stable.
    pub r_star: u64,
}

/// One level of the tower: the complex of `M ⊗ J_r` with cohomology
/// representatives and coboundary spans per degree.
struct TowerLevel {
    r: usize,
    complex: KoszulComplex,
    representatives: Vec<Vec<Vec<u64>>>,
    coboundaries: Vec<Vec<Vec<u64>>>,
}

impl TowerLevel {
    fn build(module: &GammaModule, n_vec: &[u64], r: usize) -> Result<Self, GammaError> {
        let twisted = tensor(module, &jr_module(r, n_vec, module.field()))?;
        let complex = KoszulComplex::new(&twisted);
        let f = module.field();
        let mut representatives = Vec::with_capacity(complex.n() + 1);
        let mut coboundaries = Vec::with_capacity(complex.n() + 1);
        for i in 0..=complex.n() {
            let cocycles = complex.cocycle_basis(i);
            let bounds = complex.coboundary_basis(i);
            let reps = crate::matrix::independent_from(f, &bounds, &cocycles);
            representatives.push(reps);
            coboundaries.push(bounds);
        }
        Ok(TowerLevel {
            r,
            complex,
            representatives,
            coboundaries,
        })
    }
}

/// Pushes a chain vector of the level-`ra` complex into the level-`rb`
/// complex along the coordinate inclusion `J_ra ⊂ J_rb`.
fn embed_chain(v: &[u64], blocks: usize, d: usize, ra: usize, rb: usize) -> Vec<u64> {
    debug_assert_eq!(v.len(), blocks * d * ra);
    let mut out = vec![0u64; blocks * d * rb];
    for b in 0..blocks {
        for a in 0..d {
            for w in 0..ra {
                out[(b * d + a) * rb + w] = v[(b * d + a) * ra + w];
            }
        }
    }
    out
}

/// Per-degree ranks of the maps `H^i(level a) → H^i(level b)`.
fn image_ranks(module: &GammaModule, a: &TowerLevel, b: &TowerLevel) -> Vec<usize> {
    let f = module.field();
    let d = module.dim();
    let n = module.n();
    let mut ranks = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let blocks = if d == 0 {
            0
        } else {
            a.complex.terms()[i] / (d * a.r)
        };
        let base = &b.coboundaries[i];
        let base_dim = span_dim(f, base);
        let mut pool: Vec<Vec<u64>> = base.clone();
        for z in &a.representatives[i] {
            let lifted = embed_chain(z, blocks, d, a.r, b.r);
            debug_assert!(
                b.complex
                    .differential(i)
                    .apply(f, &lifted)
                    .iter()
                    .all(|&x| x == 0),
                "the tower inclusion must send cocycles to cocycles"
            );
            pool.push(lifted);
        }
        ranks.push(span_dim(f, &pool) - base_dim);
    }
    ranks
}

fn stable_tower(
    module: &GammaModule,
    n_vec: &[u64],
    r_max: u64,
) -> Result<NearbyCycles, GammaError> {
    if n_vec.len() != module.n() {
        return Err(GammaError::Shape(format!(
            "{} shift multiplicities for {} operators",
            n_vec.len(),
            module.n()
        )));
    }
    if module.n() == 0 {
        // No operators: the tower is constant and H^0 is the whole module.
        return Ok(NearbyCycles {
            dims: vec![module.dim()],
            r_star: 1,
        });
    }
    // A class that dies in the colimit dies within a bounded number of
    // levels: each correction step peels one nilpotency degree of the
    // operators and costs one W-degree of headroom.  Ranks over a window
    // shorter than that depth can sit on a lying plateau (survive one
    // level, die after two), so the window spans the module dimension.
    let window = module.dim().clamp(2, 8);
    let mut levels: Vec<TowerLevel> = Vec::new();
    let mut level = |levels: &mut Vec<TowerLevel>, r: usize| -> Result<(), GammaError> {
        while levels.len() < r {
            levels.push(TowerLevel::build(module, n_vec, levels.len() + 1)?);
        }
        Ok(())
    };
    for r in 1.. {
        let top = r + window + 1;
        if top as u64 > r_max {
            return Err(GammaError::BoundExceeded(format!(
                "the tower did not stabilize by r = {r_max}"
            )));
        }
        level(&mut levels, top)?;
        let wide = image_ranks(module, &levels[r - 1], &levels[r - 1 + window]);
        let shifted = image_ranks(module, &levels[r], &levels[r + window]);
        let wider = image_ranks(module, &levels[r - 1], &levels[r + window]);
        if wide == shifted && wider == wide {
            return Ok(NearbyCycles {
                dims: wide,
                r_star: r as u64,
            });
        }
    }
    unreachable!("the loop exits by stabilizing or exceeding its bound");
}

/// Stable dimensions of `H^i` of the unipotent nearby-cycle module of `M`,
/// with the `j`-th generator shifting the tower variable by `n_vec[j]`.
/// Over a finite field every invertible operator is quasi-unipotent, so no
/// further hypothesis is needed for the tower to stabilize; the ceiling
/// [`DEFAULT_R_MAX`] is a defensive bound.
pub fn nearby_unipotent(
    module: &GammaModule,
    n_vec: &[u64],
) -> Result<NearbyCycles, GammaError> {
    nearby_unipotent_within(module, n_vec, DEFAULT_R_MAX)
}

/// [`nearby_unipotent`] with an explicit ceiling on the tower parameter.
pub fn nearby_unipotent_within(
    module: &GammaModule,
    n_vec: &[u64],
    r_max: u64,
) -> Result<NearbyCycles, GammaError> {
    stable_tower(module, n_vec, r_max)
}

/// Quasi-unipotent nearby cycles at level `m`: requires every `γ_j^m` to
/// be unipotent and computes the unipotent tower of the restriction to the
/// index-`m` subgroup.  For a single operator with `m` prime to the
/// characteristic, the answer is cross-checked against the induced-module
/// route `M ⊗ K_m`, which computes the same cohomology by Shapiro's lemma
/// without ever forming the restriction.
pub fn nearby_quasi_unipotent(
    module: &GammaModule,
    n_vec: &[u64],
    m: u64,
) -> Result<NearbyCycles, GammaError> {
    nearby_quasi_unipotent_within(module, n_vec, m, DEFAULT_R_MAX)
}

/// [`nearby_quasi_unipotent`] with an explicit tower ceiling.
pub fn nearby_quasi_unipotent_within(
    module: &GammaModule,
    n_vec: &[u64],
    m: u64,
    r_max: u64,
) -> Result<NearbyCycles, GammaError> {
    if m == 0 {
        return Err(GammaError::Precondition(
            "the quasi-unipotence level must be positive".into(),
        ));
    }
    let f = module.field();
    let d = module.dim();
    let id = FqMatrix::identity(d);
    for (j, g) in module.gammas().iter().enumerate() {
        let powered = g.pow(f, m);
        if !powered.sub(f, &id).pow(f, d as u64).is_zero() {
            return Err(GammaError::Precondition(format!(
                "generator {j} is not unipotent after taking {m}-th powers"
            )));
        }
    }
    let restricted = restrict(module, m)?;
    let result = stable_tower(&restricted, n_vec, r_max)?;

    let tame = !m.is_multiple_of(f.characteristic());
    if module.n() == 1 && tame && d * m as usize <= 12 {
        let induced = tensor(module, &km_module(m as usize, f))?;
        let shapiro = stable_tower(&induced, n_vec, r_max)?;
        assert_eq!(
            shapiro.dims, result.dims,
            "restriction and induction compute different stable dimensions"
        );
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;
    use crate::koszul::koszul_cohomology;
    use crate::module::GammaModule;

    #[test]
    fn unipotent_blocks_fill_their_whole_module_in_degree_zero() {
        let f = Fq::prime(3).unwrap();
        let j2 = jr_module(2, &[1], &f);
        let result = nearby_unipotent(&j2, &[1]).unwrap();
        assert_eq!(result.dims, vec![2, 0]);
        assert!(result.r_star <= 4);

        // At the detected level the degree-zero classes really are a
        // two-dimensional space of invariants.
        let twisted = tensor(&j2, &jr_module(result.r_star as usize, &[1], &f)).unwrap();
        assert_eq!(koszul_cohomology(&twisted).dims[0], 2);
    }

    #[test]
    fn trivial_and_twisted_lines_behave_at_the_ends() {
        let f = Fq::prime(3).unwrap();
        let trivial = GammaModule::trivial(f.clone(), 1, 1);
        assert_eq!(
            nearby_unipotent(&trivial, &[1]).unwrap().dims,
            vec![1, 0]
        );

        let minus = GammaModule::new(
            f.clone(),
            1,
            vec![FqMatrix::from_int_rows(&f, &[&[-1]])],
        )
        .unwrap();
        assert_eq!(nearby_unipotent(&minus, &[1]).unwrap().dims, vec![0, 0]);
    }

    #[test]
    fn towers_with_no_operators_are_constant() {
        let f = Fq::prime(5).unwrap();
        let bare = GammaModule::trivial(f, 3, 0);
        let result = nearby_unipotent(&bare, &[]).unwrap();
        assert_eq!(result.dims, vec![3]);
        assert_eq!(result.r_star, 1);
    }

    #[test]
    fn ceilings_and_shapes_are_enforced() {
        let f = Fq::prime(3).unwrap();
        let j2 = jr_module(2, &[1], &f);
        assert!(matches!(
            nearby_unipotent(&j2, &[1, 1]),
            Err(GammaError::Shape(_))
        ));
        assert!(matches!(
            nearby_unipotent_within(&j2, &[1], 1),
            Err(GammaError::BoundExceeded(_))
        ));
    }

    #[test]
    fn two_generator_towers_stabilize() {
        let f = Fq::prime(3).unwrap();
        let m = jr_module(2, &[1, 1], &f);
        let result = nearby_unipotent(&m, &[1, 1]).unwrap();
        assert_eq!(result.dims.len(), 3);
        assert_eq!(result.dims[0], 2);
        assert!(result.r_star <= 6);
    }

    #[test]
    fn quasi_unipotent_reduction_restricts_and_cross_checks() {
        let f3 = Fq::prime(3).unwrap();

        // ζ_2 becomes trivial after squaring: full module in degree zero.
        let minus = GammaModule::new(
            f3.clone(),
            1,
            vec![FqMatrix::from_int_rows(&f3, &[&[-1]])],
        )
        .unwrap();
        let q = nearby_quasi_unipotent(&minus, &[1], 2).unwrap();
        assert_eq!(q.dims, vec![1, 0]);

        // The induced 2-cycle module needs level 2 and keeps both sheets.
        let k2 = km_module(2, &f3);
        let q = nearby_quasi_unipotent(&k2, &[1], 2).unwrap();
        assert_eq!(q.dims, vec![2, 0]);

        // Level 1 on an already-unipotent module changes nothing.
        let j2 = jr_module(2, &[1], &f3);
        assert_eq!(
            nearby_quasi_unipotent(&j2, &[1], 1).unwrap(),
            nearby_unipotent(&j2, &[1]).unwrap()
        );

        // A wrong level is a hypothesis violation, not an answer.
        let f5 = Fq::prime(5).unwrap();
        let zeta2 = GammaModule::new(
            f5.clone(),
            1,
            vec![FqMatrix::from_int_rows(&f5, &[&[-1]])],
        )
        .unwrap();
        assert!(matches!(
            nearby_quasi_unipotent(&zeta2, &[1], 3),
            Err(GammaError::Precondition(_))
        ));
    }
}

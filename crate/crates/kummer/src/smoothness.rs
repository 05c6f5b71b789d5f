//! Chart-level smoothness: a map of monoids presents a smooth log structure
//! relative to a set of invertible primes when the kernel of its group
//! completion is finite and, together with the cokernel torsion, has order
//! supported on those primes. The cokernel itself is then the coefficient
//! module of the relative differentials, generated by the dlog classes of
//! the target generators.

use lattice::{cokernel, kernel_subgroup, FinAbGroup, GroupHom};
use monoids::MonoidHom;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::KummerError;

/// Whether the group kernel of `u` is finite and both its order and the
/// cokernel torsion order factor completely over `invertible_primes`. The
/// entries must be prime — a composite entry would silently change what
/// "supported" means.
pub fn log_smooth_chart_check(u: &MonoidHom, invertible_primes: &[u64]) -> bool {
    for &p in invertible_primes {
        assert!(is_prime(p), "invertible set contains the non-prime {p}");
    }
    let (ker, _) = kernel_subgroup(u.gp_hom());
    if !ker.is_finite() {
        return false;
    }
    let (coker, _) = cokernel(u.gp_hom());
    let ker_order = ker.order().expect("finiteness was just checked");
    let torsion_order: BigInt = coker.torsion().iter().product();
    supported_on(ker_order, invertible_primes) && supported_on(torsion_order, invertible_primes)
}

fn supported_on(mut n: BigInt, primes: &[u64]) -> bool {
    for &p in primes {
        let p = BigInt::from(p);
        while (&n % &p).is_zero() {
            n /= &p;
        }
    }
    n.is_one()
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The coefficient module of relative differentials for a chart passing the
/// smoothness check: the cokernel of the group completion, whose free rank
/// is the relative dimension, its projection, and the dlog classes of the
/// target generators.
pub struct LogDifferentials {
    pub group: FinAbGroup,
    pub projection: GroupHom,
    pub generator_classes: Vec<Vec<BigInt>>,
}

/// Computes the differentials module, first insisting that the chart passes
/// the smoothness check for the given primes.
pub fn log_differentials_module(
    u: &MonoidHom,
    invertible_primes: &[u64],
) -> Result<LogDifferentials, KummerError> {
    if !log_smooth_chart_check(u, invertible_primes) {
        return Err(KummerError::Precondition(
            "the chart fails the smoothness test for the given primes".into(),
        ));
    }
    let (group, projection) = cokernel(u.gp_hom());
    let generator_classes = u
        .target()
        .generators()
        .iter()
        .map(|q| projection.apply(q))
        .collect();
    Ok(LogDifferentials {
        group,
        projection,
        generator_classes,
    })
}

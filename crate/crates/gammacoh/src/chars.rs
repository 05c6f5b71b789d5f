//! Characters of the level-`m` covering group and their weight sets.
//!
//! A character `χ` of the fundamental group at level `m` is a tuple in
//! `(Z/m)^n`; it determines a one-dimensional module where the `j`-th
//! generator acts by `ζ_m^{χ_j}`.  Over a field a nontrivial character is
//! annihilated by the nonzero scalar `ζ_m − 1`, which forces the whole
//! cohomology to vanish — [`annihilation_check`] verifies that collapse.
//! [`s_chi`] computes the finite antichain that indexes the `χ`-isotypic
//! piece of the level-`m` monoid algebra: the minimal fractional monoid
//! elements mapping to `χ`.

use covers::LogPoint;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::field::Fq;
use crate::matrix::FqMatrix;
use crate::module::GammaModule;
use crate::GammaError;

/// Candidate cap for the antichain sweep in [`s_chi`].
const S_CHI_SWEEP_CAP: u64 = 2_000_000;

/// The one-dimensional module attached to a character `χ ∈ (Z/m)^n` of the
/// level-`m` covering group of `pt`: the `j`-th generator acts by the
/// scalar `ζ_m^{χ_j}` for the canonical `m`-th root of unity of `field`.
pub fn character_module(
    pt: &LogPoint,
    m: u64,
    chi: &[u64],
    field: &Fq,
) -> Result<GammaModule, GammaError> {
    if chi.len() != pt.rank() {
        return Err(GammaError::Shape(format!(
            "character has {} coordinates, the point has rank {}",
            chi.len(),
            pt.rank()
        )));
    }
    let zeta = field.root_of_unity(m)?;
    let gammas = chi
        .iter()
        .map(|&c| {
            let mut g = FqMatrix::zero(1, 1);
            g.set(0, 0, field.pow(zeta, c % m));
            g
        })
        .collect();
    GammaModule::new(field.clone(), 1, gammas)
}

/// Verifies the vanishing forced by a nontrivial character: for a
/// one-dimensional module with at least one generator acting by a scalar
/// `≠ 1`, every `H^i` is zero.  Trivially-acting modules are rejected as
/// inapplicable (their cohomology is binomial, not zero), as are modules
/// of dimension other than one.
pub fn annihilation_check(module: &GammaModule) -> Result<(), GammaError> {
    if module.dim() != 1 {
        return Err(GammaError::Precondition(format!(
            "the annihilation argument is about characters; dimension {} given",
            module.dim()
        )));
    }
    if module.is_trivial_action() {
        return Err(GammaError::Precondition(
            "the trivial character is not annihilated by anything nonzero".into(),
        ));
    }
    let h = crate::koszul::koszul_cohomology(module);
    assert!(
        h.dims.iter().all(|&d| d == 0),
        "a nonzero scalar annihilates the cohomology of a character module"
    );
    Ok(())
}

/// The weight antichain `S_χ`: minimal elements, under divisibility by the
/// characteristic monoid `P`, of the set of fractional elements `y/m` with
/// `y ∈ P` and `y ≡ χ (mod m)`.  Returned as sorted numerator vectors
/// (each `s` stands for `s/m`).
///
/// Every such fractional element differs from a minimal one by adding an
/// element of `P`, and the function verifies that module decomposition on
/// a bounded box before returning.  For the trivial character the answer
/// is `{0}`: the integral piece of the fractional monoid algebra is the
/// monoid algebra itself.
pub fn s_chi(pt: &LogPoint, m: u64, chi: &[u64]) -> Result<Vec<Vec<BigInt>>, GammaError> {
    if m == 0 {
        return Err(GammaError::Precondition(
            "fractional levels are positive integers".into(),
        ));
    }
    let n = pt.rank();
    if chi.len() != n {
        return Err(GammaError::Shape(format!(
            "character has {} coordinates, the point has rank {}",
            chi.len(),
            n
        )));
    }
    let monoid = pt.characteristic();
    let generators = monoid.generators();
    let target: Vec<u64> = chi.iter().map(|&c| c % m).collect();

    // If an expression of y uses some generator at least m times, removing
    // m copies stays congruent and inside P, so y is not minimal.  Every
    // minimal element therefore has an expression with all coefficients
    // below m, and the sweep over those expressions sees it.
    let combos = (m as u128).checked_pow(generators.len() as u32);
    match combos {
        Some(c) if c <= S_CHI_SWEEP_CAP as u128 => {}
        _ => {
            return Err(GammaError::BoundExceeded(format!(
                "sweeping {} generator coefficients at level {m} is past the cap",
                generators.len()
            )))
        }
    }

    let m_big = BigInt::from(m);
    let congruent = |y: &[BigInt]| -> bool {
        y.iter()
            .zip(&target)
            .all(|(c, &t)| ((c % &m_big) + &m_big) % &m_big == BigInt::from(t))
    };
    let minimal = |y: &[BigInt]| -> Result<bool, GammaError> {
        for h in generators {
            let shifted: Vec<BigInt> =
                y.iter().zip(h).map(|(a, b)| a - b * &m_big).collect();
            if monoid.member(&shifted)? {
                return Ok(false);
            }
        }
        Ok(true)
    };

    let mut candidates = std::collections::BTreeSet::new();
    let mut coeffs = vec![0u64; generators.len()];
    loop {
        let mut y = vec![BigInt::zero(); n];
        for (c, h) in coeffs.iter().zip(generators) {
            for (acc, g) in y.iter_mut().zip(h) {
                *acc += g * BigInt::from(*c);
            }
        }
        if congruent(&y) {
            candidates.insert(y);
        }
        // Odometer over [0, m)^{#generators}.
        let mut pos = 0;
        loop {
            if pos == coeffs.len() {
                break;
            }
            coeffs[pos] += 1;
            if coeffs[pos] < m {
                break;
            }
            coeffs[pos] = 0;
            pos += 1;
        }
        if pos == coeffs.len() {
            break;
        }
    }

    let mut antichain = Vec::new();
    for y in candidates {
        if minimal(&y)? {
            antichain.push(y);
        }
    }

    verify_shifted_decomposition(pt, m, &target, &antichain)?;
    Ok(antichain)
}

/// Checks, on a box around the origin, that the congruent monoid elements
/// are exactly the antichain translated by `m·P`.
fn verify_shifted_decomposition(
    pt: &LogPoint,
    m: u64,
    target: &[u64],
    antichain: &[Vec<BigInt>],
) -> Result<(), GammaError> {
    let monoid = pt.characteristic();
    let n = pt.rank();
    let m_big = BigInt::from(m);
    let spread = monoid
        .generators()
        .iter()
        .flatten()
        .map(|c| c.abs().to_i64().unwrap_or(i64::MAX))
        .max()
        .unwrap_or(1)
        .max(1);
    let radius = 2 * m as i64 * spread;

    let mut point = vec![-radius; n];
    loop {
        let y: Vec<BigInt> = point.iter().map(|&c| BigInt::from(c)).collect();
        let congruent = y
            .iter()
            .zip(target)
            .all(|(c, &t)| ((c % &m_big) + &m_big) % &m_big == BigInt::from(t));
        if congruent {
            let inside = monoid.member(&y)?;
            let covered = antichain.iter().any(|s| {
                let quotient: Vec<BigInt> = y
                    .iter()
                    .zip(s)
                    .map(|(a, b)| (a - b) / &m_big)
                    .collect();
                monoid.member(&quotient).unwrap_or(false)
            });
            assert_eq!(
                inside, covered,
                "the antichain misses or overshoots the congruent elements at {point:?}"
            );
        }
        let mut pos = 0;
        loop {
            if pos == n {
                break;
            }
            point[pos] += 1;
            if point[pos] <= radius {
                break;
            }
            point[pos] = -radius;
            pos += 1;
        }
        if pos == n {
            break;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::koszul::koszul_cohomology;

    fn to_bigint_vec(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// A sharp saturated point with a skew cone: the saturation of the
    /// span of (1,0) and (1,2).
    fn skew_point() -> LogPoint {
        let gens = vec![
            to_bigint_vec(&[1, 0]),
            to_bigint_vec(&[1, 1]),
            to_bigint_vec(&[1, 2]),
        ];
        let monoid = monoids::IntegralMonoid::new(lattice::FinAbGroup::free(2), gens)
            .expect("fine generators");
        LogPoint::new(monoid).expect("sharp saturated point")
    }

    #[test]
    fn character_modules_use_the_canonical_root() {
        let line = LogPoint::standard(1);
        let f3 = Fq::prime(3).unwrap();
        let m = character_module(&line, 2, &[1], &f3).unwrap();
        assert_eq!(m.gamma(0).at(0, 0), 2); // ζ_2 = −1 in F_3

        let plane = LogPoint::standard(2);
        let f5 = Fq::prime(5).unwrap();
        let m = character_module(&plane, 4, &[1, 0], &f5).unwrap();
        assert_eq!(m.gamma(0).at(0, 0), 2); // 2 has order 4 in F_5
        assert_eq!(m.gamma(1).at(0, 0), 1);

        let trivial = character_module(&plane, 4, &[0, 0], &f5).unwrap();
        assert!(trivial.is_trivial_action());
        // Exponents reduce modulo m.
        let wrapped = character_module(&plane, 4, &[5, 4], &f5).unwrap();
        let once = character_module(&plane, 4, &[1, 0], &f5).unwrap();
        assert_eq!(wrapped, once);

        assert!(matches!(
            character_module(&line, 4, &[1], &f3),
            Err(GammaError::Precondition(_))
        ));
        assert!(matches!(
            character_module(&plane, 2, &[1], &f3),
            Err(GammaError::Shape(_))
        ));
    }

    #[test]
    fn nontrivial_characters_kill_all_cohomology() {
        let plane = LogPoint::standard(2);
        let f3 = Fq::prime(3).unwrap();
        let m = character_module(&plane, 2, &[1, 1], &f3).unwrap();
        assert_eq!(koszul_cohomology(&m).dims, vec![0, 0, 0]);
        assert!(annihilation_check(&m).is_ok());

        let trivial = character_module(&plane, 2, &[0, 0], &f3).unwrap();
        assert_eq!(koszul_cohomology(&trivial).dims, vec![1, 2, 1]);
        assert!(matches!(
            annihilation_check(&trivial),
            Err(GammaError::Precondition(_))
        ));

        let too_big = GammaModule::trivial(f3, 2, 1);
        assert!(matches!(
            annihilation_check(&too_big),
            Err(GammaError::Precondition(_))
        ));
    }

    #[test]
    fn weight_sets_on_free_points_are_single_lifts() {
        let line = LogPoint::standard(1);
        assert_eq!(s_chi(&line, 2, &[1]).unwrap(), vec![to_bigint_vec(&[1])]);
        assert_eq!(s_chi(&line, 2, &[0]).unwrap(), vec![to_bigint_vec(&[0])]);
        assert_eq!(s_chi(&line, 2, &[3]).unwrap(), vec![to_bigint_vec(&[1])]);

        let plane = LogPoint::standard(2);
        assert_eq!(
            s_chi(&plane, 2, &[1, 0]).unwrap(),
            vec![to_bigint_vec(&[1, 0])]
        );
        assert_eq!(
            s_chi(&plane, 3, &[2, 1]).unwrap(),
            vec![to_bigint_vec(&[2, 1])]
        );
    }

    #[test]
    fn skew_cones_can_need_genuine_antichains() {
        let pt = skew_point();
        let s = s_chi(&pt, 2, &[1, 0]).unwrap();
        assert_eq!(s, vec![to_bigint_vec(&[1, 0]), to_bigint_vec(&[1, 2])]);

        // The two weights are incomparable: their difference over 2 is
        // (0, 1), which sits outside the cone.
        let zero = s_chi(&pt, 2, &[0, 0]).unwrap();
        assert_eq!(zero, vec![to_bigint_vec(&[0, 0])]);
    }

    #[test]
    fn weight_set_inputs_are_validated() {
        let line = LogPoint::standard(1);
        assert!(matches!(
            s_chi(&line, 0, &[0]),
            Err(GammaError::Precondition(_))
        ));
        assert!(matches!(s_chi(&line, 2, &[1, 0]), Err(GammaError::Shape(_))));
    }
}

use monoids::IntegralMonoid;

use crate::CoversError;

/// A logarithmic point, carried entirely by its characteristic monoid. The
/// monoid must be sharp, fine, and saturated; such a monoid spans a free
/// group, so its ambient is `Z^n` and `n` is the rank of the point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogPoint {
    characteristic: IntegralMonoid,
}

impl LogPoint {
    pub fn new(characteristic: IntegralMonoid) -> Result<Self, CoversError> {
        let p = characteristic.predicates();
        if !(p.is_sharp && p.is_fine && p.is_saturated) {
            return Err(CoversError::Precondition(
                "the characteristic monoid of a log point must be sharp, fine, and saturated"
                    .into(),
            ));
        }
        assert!(
            characteristic.ambient().is_free(),
            "sharp saturated monoids span a torsion-free group"
        );
        Ok(LogPoint { characteristic })
    }

    /// The point with characteristic `N^rank`.
    pub fn standard(rank: usize) -> Self {
        LogPoint::new(IntegralMonoid::nonneg(rank))
            .expect("the free nonnegative monoid is sharp, fine, and saturated")
    }

    pub fn characteristic(&self) -> &IntegralMonoid {
        &self.characteristic
    }

    /// The free rank of the characteristic's group completion.
    pub fn rank(&self) -> usize {
        self.characteristic.ambient().free_rank()
    }
}

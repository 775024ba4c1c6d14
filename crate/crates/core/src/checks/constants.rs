//! Sharp constants appearing in the reverse inequalities.
//!
//! Every reverse comparison in the catalog scales its right-hand side by a
//! factor built from the spectral bounds `0 < m <= M` of the input tuple and
//! (for power comparisons) the exponent `p`. All factors collapse to `1` when
//! `m == M`, except the two `alpha` factors, whose secondary branches keep a
//! residual `4^{1 - 2/p}` (resp. `4^{1 - 1/p}`) from the exponent bookkeeping.

use crate::error::{Error, Result};
use crate::scalar::{real, Real};

use super::CheckId;

/// The bundle of constants for one `(m, M, p)` configuration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constants<T: Real> {
    /// Lower spectral bound `m`.
    pub m: T,
    /// Upper spectral bound `M`.
    pub big_m: T,
    /// Outer exponent `p` used by the power-reverse factors.
    pub p: T,
    /// Kantorovich constant `K = (m + M)^2 / (4 m M)`.
    pub kantorovich: T,
    /// `max(K, (m + M)^2 / (4^{2/p} m M))`: the order-reverse factor base.
    pub alpha_order: T,
    /// `max(K, (m + M)^2 / (4^{1/p} m M))`: the anticommutator factor base.
    pub alpha_anticommutator: T,
    /// `((m + M)^2 / (4^{2/p} m M))^p = (m + M)^{2p} / (16 (m M)^p)`.
    pub reverse_power_factor: T,
    /// `(K (m^2 + M^2))^{2p} / (16 m^{2p} M^{2p})`: the squared-exponent
    /// refinement factor.
    pub refined_reverse_factor: T,
    /// `(m + M) / (2 sqrt(m M)) = sqrt(K)`: base of the geometric-mean
    /// reverse factor.
    pub geo_reverse_base: T,
}

impl<T: Real> Constants<T> {
    /// Computes the bundle, validating `0 < m <= M` and `p > 0`.
    pub fn new(m: T, big_m: T, p: T) -> Result<Self> {
        if !(m.is_finite() && big_m.is_finite() && m > T::zero() && m <= big_m) {
            return Err(Error::BadBounds(format!(
                "spectral bounds must satisfy 0 < m <= M, got m = {m}, M = {big_m}"
            )));
        }
        if !(p.is_finite() && p > T::zero()) {
            return Err(Error::BadParameter(format!(
                "exponent p must be positive and finite, got {p}"
            )));
        }
        let four: T = real(4.0);
        let two: T = real(2.0);
        let sum = m + big_m;
        let prod = m * big_m;
        let kantorovich = sum * sum / (four * prod);
        let alpha_order = kantorovich.max(sum * sum / (four.powf(two / p) * prod));
        let alpha_anticommutator = kantorovich.max(sum * sum / (four.powf(T::one() / p) * prod));
        let reverse_power_factor = (sum * sum / (four.powf(two / p) * prod)).powf(p);
        let refined_reverse_factor = (kantorovich * (m * m + big_m * big_m)).powf(two * p)
            / (real::<T>(16.0) * prod.powf(two * p));
        let geo_reverse_base = sum / (two * prod.sqrt());
        Ok(Constants {
            m,
            big_m,
            p,
            kantorovich,
            alpha_order,
            alpha_anticommutator,
            reverse_power_factor,
            refined_reverse_factor,
            geo_reverse_base,
        })
    }

    /// Factor multiplying the right-hand side of the named check.
    ///
    /// Checks whose comparison carries no constant report `1`.
    pub fn factor_for(&self, id: CheckId) -> T {
        let p = self.p;
        match id {
            CheckId::InterpPower
            | CheckId::InterpKarcher
            | CheckId::Amgm
            | CheckId::Choi
            | CheckId::AndoGeo
            | CheckId::PhiPower15
            | CheckId::NormUpper18
            | CheckId::NormLower18
            | CheckId::Lemma19Suite
            | CheckId::LedgerFactP30 => T::one(),
            CheckId::ReverseAndoP => self.geo_reverse_base.powf(p),
            CheckId::MarshallOlkin
            | CheckId::AmgmCounterpart
            | CheckId::ArithBelowPower
            | CheckId::ArithBelowKarcher
            | CheckId::Chain13
            | CheckId::Lemma6Suite => self.kantorovich,
            CheckId::DehghaniP => self.kantorovich.powf(p),
            CheckId::ThmP4 | CheckId::GeoReverseP | CheckId::KarcherReverseP => {
                self.reverse_power_factor
            }
            CheckId::Haj2Scalar => self.m + self.big_m,
            CheckId::Thm17 | CheckId::Thm17Karcher => self.alpha_order.powf(p),
            CheckId::AnticommPower | CheckId::AnticommKarcher => {
                real::<T>(2.0) * self.alpha_anticommutator.powf(p)
            }
            CheckId::Refine23 | CheckId::Refine34 => self.refined_reverse_factor,
        }
    }
}

/// Convenience wrapper: the factor for `id` at bounds `(m, M)` and exponent `p`.
pub fn constant_of<T: Real>(id: CheckId, m: T, big_m: T, p: T) -> Result<T> {
    Ok(Constants::new(m, big_m, p)?.factor_for(id))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kantorovich_spot_value() {
        let c = Constants::<f64>::new(1.0, 4.0, 1.0).unwrap();
        assert_eq!(c.kantorovich, 1.5625);
    }

    #[test]
    fn order_alpha_spot_value() {
        // At (m, M, p) = (1, 2, 4): K = 9/8, secondary branch = 9/(2 * 4^(1/2)) = 9/4.
        let c = Constants::<f64>::new(1.0, 2.0, 4.0).unwrap();
        assert!((c.alpha_order - 2.25).abs() < 1e-15);
        assert!((c.kantorovich - 1.125).abs() < 1e-15);
    }

    #[test]
    fn anticommutator_alpha_spot_value() {
        // At (1, 2, 1) both branches agree: max(9/8, 9/(4 * 2)) = 9/8.
        let c = Constants::<f64>::new(1.0, 2.0, 1.0).unwrap();
        assert!((c.alpha_anticommutator - 1.125).abs() < 1e-15);
    }

    #[test]
    fn degenerate_bounds_collapse_power_factors_to_one() {
        for scale in [0.5f64, 1.0, 3.0] {
            let c = Constants::<f64>::new(scale, scale, 2.0).unwrap();
            assert!((c.kantorovich - 1.0).abs() < 1e-14);
            assert!((c.reverse_power_factor - 1.0).abs() < 1e-13);
            assert!((c.refined_reverse_factor - 1.0).abs() < 1e-13);
            assert!((c.geo_reverse_base - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn degenerate_bounds_keep_residual_alpha_branches() {
        // At m = M the secondary order branch is 4^(1 - 2/p); for p = 4 that is 2.
        let c = Constants::<f64>::new(3.0, 3.0, 4.0).unwrap();
        assert!((c.alpha_order - 2.0).abs() < 1e-14);
        // Anticommutator branch: 4^(1 - 1/p) = 4^(3/4).
        assert!((c.alpha_anticommutator - 4.0f64.powf(0.75)).abs() < 1e-14);
    }

    #[test]
    fn geo_reverse_base_is_sqrt_of_kantorovich() {
        let c = Constants::<f64>::new(0.3, 5.0, 2.0).unwrap();
        assert!((c.geo_reverse_base * c.geo_reverse_base - c.kantorovich).abs() < 1e-14);
    }

    #[test]
    fn kantorovich_grows_with_spread() {
        let mut last = 0.0;
        for big_m in [1.0, 2.0, 4.0, 8.0, 32.0] {
            let c = Constants::<f64>::new(1.0, big_m, 1.0).unwrap();
            assert!(c.kantorovich > last);
            last = c.kantorovich;
        }
        // Shrinking m away from M also increases K.
        let wide = Constants::new(0.1, 4.0, 1.0).unwrap();
        let narrow = Constants::new(1.0, 4.0, 1.0).unwrap();
        assert!(wide.kantorovich > narrow.kantorovich);
    }

    #[test]
    fn factor_selection_matches_formulas() {
        let c = Constants::<f64>::new(1.0, 4.0, 2.0).unwrap();
        assert_eq!(c.factor_for(CheckId::InterpPower), 1.0);
        assert_eq!(c.factor_for(CheckId::MarshallOlkin), c.kantorovich);
        assert_eq!(c.factor_for(CheckId::DehghaniP), c.kantorovich * c.kantorovich);
        assert_eq!(c.factor_for(CheckId::ThmP4), c.reverse_power_factor);
        assert_eq!(c.factor_for(CheckId::Haj2Scalar), 5.0);
        assert_eq!(
            c.factor_for(CheckId::AnticommPower),
            2.0 * c.alpha_anticommutator * c.alpha_anticommutator
        );
        assert_eq!(c.factor_for(CheckId::Refine23), c.refined_reverse_factor);
        assert_eq!(
            c.factor_for(CheckId::ReverseAndoP),
            c.geo_reverse_base * c.geo_reverse_base
        );
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(Constants::new(0.0, 1.0, 1.0).is_err());
        assert!(Constants::new(2.0, 1.0, 1.0).is_err());
        assert!(Constants::new(-1.0, 1.0, 1.0).is_err());
        assert!(Constants::new(1.0, 2.0, 0.0).is_err());
        assert!(Constants::new(1.0, 2.0, -3.0).is_err());
        assert!(Constants::new(1.0, f64::INFINITY, 1.0).is_err());
    }
}

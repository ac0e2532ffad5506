//! Radioactive-decay primitives for lead-210 dating.
//!
//! Everything here is a pure function of the decay constant. Activities are
//! whatever unit the concentration-density product of the input data lives
//! in; the functions never convert units, they only require consistency.

use crate::{Error, Result};

/// Lead-210 decay constant, 1/yr (half-life 22.3 yr).
pub const LAMBDA: f64 = 0.03114;

/// (1 - e^{-lambda})/lambda for the lead-210 decay constant: the activity
/// accumulated over one year per unit supply, used by the chronology limit.
pub const ONE_YEAR_DECAY_FACTOR: f64 = 0.98459;

/// Decay constant plus its derived one-year factor.
///
/// `pb210()` is the default everywhere; a different lambda is an expert
/// setting (`with_lambda`) and recomputes the factor.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DecayConstants {
    pub lambda: f64,
    pub one_year_factor: f64,
}

impl Default for DecayConstants {
    fn default() -> Self {
        Self::pb210()
    }
}

impl DecayConstants {
    pub fn pb210() -> Self {
        DecayConstants {
            lambda: LAMBDA,
            one_year_factor: ONE_YEAR_DECAY_FACTOR,
        }
    }

    pub fn with_lambda(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::invalid("decay constant must be positive"));
        }
        Ok(DecayConstants {
            lambda,
            one_year_factor: (1.0 - (-lambda).exp()) / lambda,
        })
    }

    /// Consistency of the stored one-year factor with lambda.
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0) {
            return Err(Error::invalid("decay constant must be positive"));
        }
        let exact = (1.0 - (-self.lambda).exp()) / self.lambda;
        if (self.one_year_factor - exact).abs() > 1e-5 {
            return Err(Error::invalid(format!(
                "one-year decay factor {} inconsistent with lambda {} (expected {:.6})",
                self.one_year_factor, self.lambda, exact
            )));
        }
        Ok(())
    }

    /// Unsupported activity deposited between ages `t_top` and `t_bottom`
    /// under a constant supply `phi`:
    /// `(phi/lambda) (e^{-lambda t_top} - e^{-lambda t_bottom})`.
    pub fn unsupported_activity(&self, phi: f64, t_top: f64, t_bottom: f64) -> Result<f64> {
        if !(phi > 0.0) {
            return Err(Error::invalid("supply rate phi must be positive"));
        }
        if t_top < 0.0 || !t_top.is_finite() {
            return Err(Error::invalid("t_top must be finite and non-negative"));
        }
        if t_top > t_bottom {
            return Err(Error::invalid(format!(
                "age interval reversed: t_top {t_top} > t_bottom {t_bottom}"
            )));
        }
        Ok(phi / self.lambda * ((-self.lambda * t_top).exp() - (-self.lambda * t_bottom).exp()))
    }

    /// Supported activity of a slice with areal density `rho`: `p_s * rho`.
    pub fn supported_activity(&self, p_s: f64, rho: f64) -> Result<f64> {
        if p_s < 0.0 {
            return Err(Error::invalid("supported concentration must be non-negative"));
        }
        if !(rho > 0.0) {
            return Err(Error::invalid("density must be positive"));
        }
        Ok(p_s * rho)
    }

    /// Oldest inferable age given the supply `phi` and the smallest
    /// distinguishable one-year activity `a_l`.
    ///
    /// Solves `a_l = phi e^{-lambda t} (1-e^{-lambda})/lambda` for `t`,
    /// keeping the one-year factor rather than dropping it (the dropped-factor
    /// approximation differs by under half a year).
    pub fn chronology_limit(&self, phi: f64, a_l: f64) -> Result<f64> {
        if !(phi > 0.0) {
            return Err(Error::invalid("supply rate phi must be positive"));
        }
        if !(a_l > 0.0) {
            return Err(Error::invalid("detection threshold a_l must be positive"));
        }
        if a_l >= self.one_year_factor * phi {
            return Err(Error::infeasible(format!(
                "detection threshold a_l={a_l} at or above one-year supply \
                 {:.6}: no positive chronology limit (equipment too noisy for this supply)",
                self.one_year_factor * phi
            )));
        }
        Ok((self.one_year_factor * phi / a_l).ln() / self.lambda)
    }
}

/// `unsupported_activity` with the lead-210 constants.
pub fn unsupported_activity(phi: f64, t_top: f64, t_bottom: f64) -> Result<f64> {
    DecayConstants::pb210().unsupported_activity(phi, t_top, t_bottom)
}

/// `supported_activity` with the lead-210 constants.
pub fn supported_activity(p_s: f64, rho: f64) -> Result<f64> {
    DecayConstants::pb210().supported_activity(p_s, rho)
}

/// `chronology_limit` with the lead-210 constants.
pub fn chronology_limit(phi: f64, a_l: f64) -> Result<f64> {
    DecayConstants::pb210().chronology_limit(phi, a_l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constants_are_consistent() {
        DecayConstants::pb210().validate().unwrap();
        let exact = (1.0 - (-LAMBDA).exp()) / LAMBDA;
        assert!((exact - ONE_YEAR_DECAY_FACTOR).abs() < 1e-5);
    }

    #[test]
    fn unsupported_matches_closed_form_value() {
        // (150/0.03114)(1 - e^{-0.03114*0.8333}), hand-computed independently.
        let v = unsupported_activity(150.0, 0.0, 0.8333).unwrap();
        assert!((v - 123.3871917530).abs() < 1e-8, "got {v}");
    }

    #[test]
    fn unsupported_empty_interval_is_zero() {
        assert_eq!(unsupported_activity(150.0, 2.5, 2.5).unwrap(), 0.0);
    }

    #[test]
    fn unsupported_whole_history_is_phi_over_lambda() {
        let v = unsupported_activity(150.0, 0.0, 1e9).unwrap();
        assert!((v - 4816.955684).abs() < 1e-4, "got {v}");
    }

    #[test]
    fn unsupported_rejects_bad_inputs() {
        assert!(unsupported_activity(150.0, 2.0, 1.0).is_err());
        assert!(unsupported_activity(0.0, 0.0, 1.0).is_err());
        assert!(unsupported_activity(-5.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn supported_examples() {
        assert!((supported_activity(20.0, 0.145).unwrap() - 2.90).abs() < 1e-12);
        assert_eq!(supported_activity(0.0, 0.5).unwrap(), 0.0);
        assert!((supported_activity(8.8475, 0.045).unwrap() - 0.3981375).abs() < 1e-12);
        assert!(supported_activity(-1.0, 0.5).is_err());
    }

    #[test]
    fn chronology_limit_worked_values() {
        let t = chronology_limit(50.0, 0.1).unwrap();
        assert!((t - 199.0712309025).abs() < 1e-8, "got {t}");
        let t = chronology_limit(150.0, 0.1).unwrap();
        assert!((t - 234.3510089586).abs() < 1e-8, "got {t}");
    }

    #[test]
    fn chronology_limit_boundary_rejected() {
        assert!(chronology_limit(50.0, ONE_YEAR_DECAY_FACTOR * 50.0).is_err());
        assert!(chronology_limit(50.0, ONE_YEAR_DECAY_FACTOR * 50.0 * 1.01).is_err());
    }

    proptest! {
        #[test]
        fn interval_additivity(
            phi in 1e-3..1e4f64,
            a in 0.0..400.0f64,
            d1 in 0.0..200.0f64,
            d2 in 0.0..200.0f64,
        ) {
            let b = a + d1;
            let c = b + d2;
            let whole = unsupported_activity(phi, a, c).unwrap();
            let split = unsupported_activity(phi, a, b).unwrap()
                + unsupported_activity(phi, b, c).unwrap();
            let scale = whole.abs().max(1e-300);
            prop_assert!((whole - split).abs() / scale < 1e-10);
        }

        #[test]
        fn linear_in_phi(phi in 1e-3..1e4f64, k in 0.1..50.0f64, a in 0.0..300.0f64, d in 0.0..100.0f64) {
            let one = unsupported_activity(phi, a, a + d).unwrap();
            let scaled = unsupported_activity(k * phi, a, a + d).unwrap();
            prop_assert!((scaled - k * one).abs() <= 1e-9 * scaled.abs().max(1e-12));
        }

        #[test]
        fn limit_monotone(phi in 1.0..1e3f64, a_l in 1e-4..0.5f64) {
            let t = chronology_limit(phi, a_l).unwrap();
            let t_bigger_phi = chronology_limit(phi * 1.5, a_l).unwrap();
            let t_bigger_al = chronology_limit(phi, a_l * 1.5);
            prop_assert!(t_bigger_phi > t);
            if let Ok(t2) = t_bigger_al {
                prop_assert!(t2 < t);
            }
        }
    }
}

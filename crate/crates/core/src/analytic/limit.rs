use serde::{Deserialize, Serialize};

use super::series::alpha;
use crate::error::{Error, Result};

/// A limiting waiting-time distribution on its natural scale.
///
/// - `Theorem1 { lambda }`: law of `tau_2 N u_1 sqrt(u_2)` when
///   `N u_1 -> lambda`, with hazard `tanh(t / lambda)`.
/// - `Exponential { rate }`: `tau_m N r_{0,m}` in the tunneling regime
///   (rate 1).
/// - `Theorem3 { alpha }`: `u_1 tau_m` in the borderline regime, exponential
///   with rate `alpha(gamma)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LimitLaw {
    Theorem1 { lambda: f64 },
    Exponential { rate: f64 },
    Theorem3 { alpha: f64 },
}

/// The law with survival `exp(-t) ((1 + e^{-2t/λ}) / 2)^{-λ}`, i.e. hazard
/// `(1 - e^{-2s/λ}) / (1 + e^{-2s/λ})` integrated in closed form.
/// `lambda = 0` is the unit exponential.
pub fn theorem1_law(lambda: f64) -> Result<LimitLaw> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::invalid(
            "lambda",
            format!("{lambda} must be finite and >= 0"),
        ));
    }
    Ok(LimitLaw::Theorem1 { lambda })
}

impl LimitLaw {
    pub fn exponential(rate: f64) -> Result<Self> {
        if !(rate > 0.0) || !rate.is_finite() {
            return Err(Error::invalid("rate", format!("{rate} must be positive")));
        }
        Ok(LimitLaw::Exponential { rate })
    }

    /// Exponential with rate `alpha(gamma)`.
    pub fn theorem3(gamma: f64) -> Result<Self> {
        Ok(LimitLaw::Theorem3 {
            alpha: alpha(gamma)?,
        })
    }

    fn exp_rate(&self) -> Option<f64> {
        match *self {
            LimitLaw::Theorem1 { lambda: 0.0 } => Some(1.0),
            LimitLaw::Theorem1 { .. } => None,
            LimitLaw::Exponential { rate } => Some(rate),
            LimitLaw::Theorem3 { alpha } => Some(alpha),
        }
    }

    /// `ln P(X > t)`.
    pub fn log_survival(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match (self.exp_rate(), *self) {
            (Some(rate), _) => -rate * t,
            (None, LimitLaw::Theorem1 { lambda }) => {
                // -∫_0^t tanh(s/λ) ds = -t - λ ln((1 + e^{-2t/λ}) / 2)
                -t - lambda * ((-2.0 * t / lambda).exp().ln_1p() - std::f64::consts::LN_2)
            }
            _ => unreachable!(),
        }
    }

    pub fn survival(&self, t: f64) -> f64 {
        self.log_survival(t).exp()
    }

    pub fn cdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        -self.log_survival(t).exp_m1()
    }

    pub fn hazard(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        match (self.exp_rate(), *self) {
            (Some(rate), _) => rate,
            (None, LimitLaw::Theorem1 { lambda }) => (t / lambda).tanh(),
            _ => unreachable!(),
        }
    }

    pub fn pdf(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        self.hazard(t) * self.survival(t)
    }

    /// Inverse cdf for `0 <= p < 1`.
    pub fn quantile(&self, p: f64) -> f64 {
        assert!((0.0..1.0).contains(&p), "quantile level {p} outside [0, 1)");
        if p == 0.0 {
            return 0.0;
        }
        let target = (-p).ln_1p();
        if let Some(rate) = self.exp_rate() {
            return -target / rate;
        }
        let LimitLaw::Theorem1 { lambda } = *self else {
            unreachable!()
        };
        // survival <= 2^λ e^{-t}
        let mut lo = 0.0;
        let mut hi = lambda * std::f64::consts::LN_2 - target;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.log_survival(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    pub fn name(&self) -> &'static str {
        match self {
            LimitLaw::Theorem1 { .. } => "theorem1",
            LimitLaw::Exponential { .. } => "exponential",
            LimitLaw::Theorem3 { .. } => "theorem3",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::quad::adaptive_simpson;

    fn laws() -> Vec<LimitLaw> {
        vec![
            theorem1_law(0.0).unwrap(),
            theorem1_law(0.01).unwrap(),
            theorem1_law(0.1).unwrap(),
            theorem1_law(1.0).unwrap(),
            theorem1_law(3.0).unwrap(),
            LimitLaw::exponential(0.5).unwrap(),
            LimitLaw::theorem3(1.0).unwrap(),
        ]
    }

    #[test]
    fn lambda_zero_is_unit_exponential() {
        let law = theorem1_law(0.0).unwrap();
        for t in [0.0, 1.0, 3.0] {
            assert!((law.pdf(t) - (-t).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(theorem1_law(-0.1).is_err());
        assert!(theorem1_law(f64::NAN).is_err());
        assert!(LimitLaw::exponential(0.0).is_err());
        assert!(LimitLaw::theorem3(0.0).is_err());
    }

    #[test]
    fn hazard_limits() {
        for lambda in [0.1, 1.0, 10.0] {
            let law = theorem1_law(lambda).unwrap();
            assert_eq!(law.hazard(0.0), 0.0);
            assert!((law.hazard(1e3 * lambda) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn closed_form_survival_matches_integrated_hazard() {
        let law = theorem1_law(1.0).unwrap();
        for t in [0.5, 1.0, 2.0, 5.0] {
            let h = adaptive_simpson(|s| law.hazard(s), 0.0, t, 1e-13, 60).unwrap();
            assert!((law.survival(t) - (-h).exp()).abs() <= 1e-9, "t={t}");
        }
        // mpmath: exp(-∫ tanh)
        let frozen = [
            (1.0, 0.5, 0.88681888397007390866),
            (1.0, 2.0, 0.26580222883407969212),
            (0.1, 1.0, 0.39428342237896543175),
            (0.1, 5.0, 0.0072215527855958568205),
        ];
        for (lambda, t, s) in frozen {
            let v = theorem1_law(lambda).unwrap().survival(t);
            assert!(((v - s) / s).abs() < 1e-13, "lambda={lambda} t={t}");
        }
    }

    #[test]
    fn cdf_properties() {
        for law in laws() {
            assert_eq!(law.cdf(0.0), 0.0);
            assert!(law.cdf(0.0).is_sign_positive());
            assert_eq!(law.cdf(-1.0), 0.0);
            let mut prev = 0.0;
            for i in 1..400 {
                let t = i as f64 * 0.05;
                let c = law.cdf(t);
                assert!(c >= prev);
                assert!(law.pdf(t) >= 0.0);
                assert!((law.survival(t) + c - 1.0).abs() <= 1e-12);
                prev = c;
            }
            assert!(law.cdf(200.0) > 1.0 - 1e-12);
        }
    }

    #[test]
    fn densities_integrate_to_one() {
        for law in laws() {
            let mut upper = 1.0;
            while law.survival(upper) >= 1e-10 {
                upper *= 2.0;
            }
            let mass = adaptive_simpson(|t| law.pdf(t), 0.0, upper, 1e-12, 60).unwrap();
            assert!((mass - 1.0).abs() <= 1e-6, "{law:?} mass={mass}");
        }
        let law = theorem1_law(1.0).unwrap();
        let mass = adaptive_simpson(|t| law.pdf(t), 0.0, 60.0, 1e-12, 60).unwrap();
        assert!((mass - 1.0).abs() <= 1e-8);
    }

    #[test]
    fn converges_to_exponential_as_lambda_vanishes() {
        let sup_gap = |lambda: f64| {
            let law = theorem1_law(lambda).unwrap();
            (0..=10_000)
                .map(|i| {
                    let t = i as f64 * 1e-3;
                    (law.cdf(t) - (1.0 - (-t).exp())).abs()
                })
                .fold(0.0, f64::max)
        };
        let gaps: Vec<f64> = [1.0, 0.1, 0.01].iter().map(|&l| sup_gap(l)).collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
        assert!(gaps[2] < 0.01);
    }

    #[test]
    fn quantile_inverts_cdf() {
        for law in laws() {
            for p in [0.001, 0.1, 0.5, 0.9, 0.999] {
                let q = law.quantile(p);
                assert!((law.cdf(q) - p).abs() < 1e-12, "{law:?} p={p}");
            }
        }
    }
}

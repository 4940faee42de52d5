//! Closed forms, series and recursions for the limit laws.

mod limit;
mod m0;
mod progeny;
pub mod quad;
mod recursion;
mod riccati;
mod series;

pub use limit::{theorem1_law, LimitLaw};
pub use m0::{m0_expectations, m0_fixation_probability, M0Expectations};
pub use progeny::{ln_total_progeny_tail, total_progeny_tail};
pub use recursion::{p_recursion, MutationTiming};
pub use riccati::{g2, riccati_roots, tau2_cdf_immigration, RiccatiRoots};
pub use series::{alpha, u_series, u_series_derivatives, SeriesPoint};

use crate::error::{Error, Result};
use crate::model::{scaling_constants, PopulationParams};

/// Waiting-time scale `1 / (N r_{0,m}) = 1 / (N u_1 r_{1,m})`.
pub fn waiting_scale(params: &PopulationParams) -> Result<f64> {
    if let Some(j) = params.rates.as_slice().iter().position(|&u| u <= 0.0) {
        return Err(Error::invalid(format!("u{}", j + 1), "must be positive"));
    }
    let r0 = scaling_constants(&params.rates).r0();
    Ok(1.0 / (params.n as f64 * r0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::MutationRates;

    fn params(n: u64, u: &[f64]) -> PopulationParams {
        PopulationParams::new(n, MutationRates::new(u.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn figure_scales() {
        assert!((waiting_scale(&params(1000, &[1e-4, 1e-4])).unwrap() - 1e3).abs() < 1e-9);
        assert!((waiting_scale(&params(1000, &[1e-3, 1e-4])).unwrap() - 1e2).abs() < 1e-10);
        let a = waiting_scale(&params(1000, &[1e-5, 1e-3, 1e-2])).unwrap();
        let b = waiting_scale(&params(2000, &[1e-5, 1e-3, 1e-2])).unwrap();
        assert!((a / b - 2.0).abs() < 1e-14);
        assert!(waiting_scale(&params(1000, &[1e-3, 0.0])).is_err());
    }
}

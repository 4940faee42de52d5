use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::MutationRates;

/// Where type `j + 1` mutations come from in the branching approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MutationTiming {
    /// A type `j` individual turns into type `j + 1` at rate `u_{j+1}`.
    Lifetime,
    /// A type `j` individual gives birth to a type `j + 1` at rate
    /// `u_{j+1}` and lives on.
    Birth,
}

/// `p_{j,m}`, the probability that one type `j` individual in the
/// multi-type branching process has a type `m` descendant, for `j = 1..=m`
/// (returned at index `j - 1`).
///
/// Backward from `p_{m,m} = 1`, `p_{j,m}` is the positive root of
/// `p^2 + b p - u_{j+1} p_{j+1,m} = 0` with `b = u_{j+1}` (lifetime) or
/// `b = u_{j+1} p_{j+1,m}` (birth), evaluated as `2c / (b + sqrt(b^2 + 4c))`.
pub fn p_recursion(rates: &MutationRates, timing: MutationTiming) -> Result<Vec<f64>> {
    let m = rates.m();
    if m < 2 {
        return Err(Error::invalid("m", "the recursion needs m >= 2"));
    }
    let mut p = vec![0.0; m];
    p[m - 1] = 1.0;
    for j in (1..m).rev() {
        let u = rates.u(j + 1);
        let c = u * p[j];
        let b = match timing {
            MutationTiming::Lifetime => u,
            MutationTiming::Birth => c,
        };
        p[j - 1] = if c > 0.0 {
            2.0 * c / (b + (b * b + 4.0 * c).sqrt())
        } else {
            0.0
        };
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::riccati::riccati_roots;
    use crate::model::scaling_constants;

    fn rates(u: &[f64]) -> MutationRates {
        MutationRates::new(u.to_vec()).unwrap()
    }

    #[test]
    fn last_entry_is_one() {
        for u in [vec![1e-3, 1e-2], vec![1e-5, 1e-3, 1e-2, 1e-1]] {
            for timing in [MutationTiming::Lifetime, MutationTiming::Birth] {
                let p = p_recursion(&rates(&u), timing).unwrap();
                assert_eq!(*p.last().unwrap(), 1.0);
                assert!(p[..p.len() - 1].iter().all(|&x| x > 0.0 && x < 1.0));
            }
        }
    }

    #[test]
    fn two_stage_is_riccati_root() {
        let p = p_recursion(&rates(&[1e-3, 1e-4]), MutationTiming::Lifetime).unwrap();
        let r1 = riccati_roots(1e-4).unwrap().r1;
        assert!(((p[0] - r1) / r1).abs() < 1e-15);
        assert!((p[0] - 0.0099501).abs() < 1e-7);
    }

    #[test]
    fn frozen_values() {
        // mpmath, 40 digits
        let p = p_recursion(&rates(&[0.0, 1e-2]), MutationTiming::Lifetime).unwrap();
        assert!((p[0] - 0.095124921972503928638).abs() < 1e-16);
        let p = p_recursion(&rates(&[0.0, 1e-2, 1e-2]), MutationTiming::Lifetime).unwrap();
        assert!((p[0] - 0.026244987113536137389).abs() < 1e-16);
    }

    #[test]
    fn approaches_scaling_constants() {
        let mut prev = 0.0;
        for mu in [1e-2, 1e-3, 1e-4, 1e-8, 1e-12] {
            let r = rates(&[mu, mu, mu]);
            let ratio =
                p_recursion(&r, MutationTiming::Lifetime).unwrap()[0] / scaling_constants(&r).r1();
            assert!(ratio < 1.0 && ratio > prev, "mu={mu} ratio={ratio}");
            prev = ratio;
        }
        // the correction is of relative order sqrt(u_{j+1} / r_{j+1,m})
        assert!(1.0 - prev < 1e-3);
    }

    #[test]
    fn timing_variants_agree_to_first_order() {
        let mut prev = f64::INFINITY;
        for mu in [1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12] {
            let r = rates(&[mu; 4]);
            let life = p_recursion(&r, MutationTiming::Lifetime).unwrap()[0];
            let birth = p_recursion(&r, MutationTiming::Birth).unwrap()[0];
            let gap = (birth / life - 1.0).abs();
            assert!(gap < prev, "mu={mu}");
            prev = gap;
        }
        assert!(prev < 0.02);
    }

    #[test]
    fn zero_rate_blocks_path() {
        let p = p_recursion(&rates(&[1e-3, 0.0, 0.5]), MutationTiming::Lifetime).unwrap();
        assert_eq!(p[0], 0.0);
        assert!(p[1] > 0.0);
        assert!(p_recursion(&rates(&[1e-3]), MutationTiming::Birth).is_err());
    }
}

use moran_core::analytic::{p_recursion, tau2_cdf_immigration, total_progeny_tail, MutationTiming};
use moran_core::model::MutationRates;
use moran_core::sim::{
    run_replicates, simulate_branching, simulate_branching_immigration, Parallelism, SimConfig,
    Termination,
};
use moran_core::stats::proportion_se;

#[test]
fn total_progeny_tail_matches_closed_form() {
    let rates = MutationRates::new(vec![1e-3, 0.0]).unwrap();
    // A run cut off at 1000 events has at least 500 type 1 births, which
    // settles every tail event checked below.
    let cfg = SimConfig::unbounded_time(1000);
    let outs = run_replicates(100_000, 55, Parallelism::Global, |s| {
        simulate_branching(&rates, &cfg, s).unwrap()
    });
    for o in outs
        .iter()
        .filter(|o| o.termination == Termination::EventCutoff)
    {
        assert!(o.total_progeny >= 500);
    }
    for n in [1u64, 2, 5, 20, 100] {
        let hits = outs.iter().filter(|o| o.total_progeny > n).count() as u64;
        let (p, se) = proportion_se(hits, outs.len() as u64);
        let exact = total_progeny_tail(n);
        assert!(
            (p - exact).abs() <= 3.0 * se,
            "n={n} p={p} exact={exact} se={se}"
        );
    }
    assert!((total_progeny_tail(1) - 0.5).abs() < 1e-15);
    assert!((total_progeny_tail(100) - 0.0563).abs() < 1e-4);
}

#[test]
fn type_two_probability_matches_branching_recursion() {
    let rates = MutationRates::new(vec![1e-3, 1e-2]).unwrap();
    let p12 = p_recursion(&rates, MutationTiming::Lifetime).unwrap()[0];
    let cfg = SimConfig::unbounded_time(100_000_000);
    let outs = run_replicates(100_000, 56, Parallelism::Global, |s| {
        simulate_branching(&rates, &cfg, s).unwrap()
    });
    assert!(outs.iter().all(|o| o.termination == Termination::Completed));
    let hits = outs.iter().filter(|o| o.type_m_born).count() as u64;
    let (q, se) = proportion_se(hits, outs.len() as u64);
    assert!((q - p12).abs() <= 3.0 * se, "q={q} p12={p12} se={se}");
}

#[test]
fn immigration_cdf_matches_quadrature() {
    let (lambda, u2, t) = (0.1, 1e-4, 5000.0);
    let cfg = SimConfig::unbounded_time(u64::MAX);
    let outs = run_replicates(10_000, 57, Parallelism::Global, |s| {
        simulate_branching_immigration(lambda, u2, t, &cfg, s).unwrap()
    });
    let hits = outs.iter().filter(|o| !o.censored).count() as u64;
    let (p, se) = proportion_se(hits, outs.len() as u64);
    let exact = tau2_cdf_immigration(t, lambda, u2).unwrap();
    assert!((p - exact).abs() <= 3.0 * se, "p={p} exact={exact} se={se}");

    // an earlier time where the cdf is far from 0 and 1
    let t1 = 1000.0;
    let hits = outs.iter().filter(|o| !o.censored && o.tau2 <= t1).count() as u64;
    let (p, se) = proportion_se(hits, outs.len() as u64);
    let exact = tau2_cdf_immigration(t1, lambda, u2).unwrap();
    assert!((p - exact).abs() <= 3.0 * se, "p={p} exact={exact} se={se}");
}

#[test]
fn immigration_cdf_increases_with_immigration_rate() {
    let (u2, horizon, reps) = (1e-2, 200.0, 10_000u64);
    let cfg = SimConfig::unbounded_time(u64::MAX);
    let grid = [10.0, 25.0, 50.0, 100.0, 200.0];
    let curves: Vec<Vec<f64>> = [0.05, 0.2, 0.8]
        .iter()
        .map(|&lambda| {
            let outs = run_replicates(reps, 58, Parallelism::Global, |s| {
                simulate_branching_immigration(lambda, u2, horizon, &cfg, s).unwrap()
            });
            grid.iter()
                .map(|&t| {
                    outs.iter().filter(|o| !o.censored && o.tau2 <= t).count() as f64 / reps as f64
                })
                .collect()
        })
        .collect();
    for pair in curves.windows(2) {
        for (lo, hi) in pair[0].iter().zip(&pair[1]) {
            assert!(hi >= lo, "{curves:?}");
        }
    }
}

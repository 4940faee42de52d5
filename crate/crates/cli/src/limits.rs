//! `limits`: closed forms, series and recursions, as JSON or CSV grids.

use std::io::Write;

use moran_core::analytic::{
    alpha, g2, ln_total_progeny_tail, m0_expectations, m0_fixation_probability, p_recursion,
    riccati_roots, tau2_cdf_immigration, theorem1_law, total_progeny_tail, u_series_derivatives,
    MutationTiming,
};
use moran_core::model::{scaling_constants, MutationRates};
use serde_json::{json, Value};

use crate::args::{LimitsCommand, TableArgs};
use crate::error::{CliError, Result};
use crate::output::{fmt_f64, with_suffix, write_json, write_table, write_table_file, Table};

fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => vec![],
        1 => vec![lo],
        _ => (0..points)
            .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
            .collect(),
    }
}

fn logspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    linspace(lo.ln(), hi.ln(), points)
        .into_iter()
        .map(f64::exp)
        .collect()
}

fn range(args: &TableArgs, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let lo = args.min.unwrap_or(lo);
    let hi = args.max.unwrap_or(hi);
    if !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(CliError::Usage(format!("empty grid range [{lo}, {hi}]")));
    }
    Ok((lo, hi))
}

fn required<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| CliError::Usage(format!("{flag} is required unless --table is given")))
}

enum Output {
    Json(Value),
    Table(Table),
}

pub fn cmd_limits(which: &LimitsCommand, stdout: &mut dyn Write) -> Result<()> {
    let (output, out) = match which {
        LimitsCommand::Alpha { gamma, table } => (limits_alpha(*gamma, table)?, table.out.clone()),
        LimitsCommand::U { gamma, x, table } => (limits_u(*gamma, *x, table)?, table.out.clone()),
        LimitsCommand::G2 { u2, t, table } => (limits_g2(*u2, *t, table)?, table.out.clone()),
        LimitsCommand::F2 {
            lambda,
            t,
            u2,
            table,
        } => (limits_f2(*lambda, *t, *u2, table)?, table.out.clone()),
        LimitsCommand::R {
            u,
            m,
            u1,
            n,
            table,
            out,
        } => (limits_r(u, *m, *u1, *n, *table)?, out.clone()),
        LimitsCommand::Progeny { n, table } => (limits_progeny(*n, table)?, table.out.clone()),
        LimitsCommand::M0 { n, k, table } => (limits_m0(*n, *k, table)?, table.out.clone()),
    };
    match (output, out) {
        (Output::Json(v), _) => write_json(stdout, &v),
        (Output::Table(t), Some(prefix)) => write_table_file(&with_suffix(&prefix, "csv"), &t),
        (Output::Table(t), None) => write_table(stdout, &t),
    }
}

fn limits_alpha(gamma: Option<f64>, args: &TableArgs) -> Result<Output> {
    if args.table {
        let (lo, hi) = range(args, 0.01, 100.0)?;
        if lo <= 0.0 {
            return Err(CliError::Usage("gamma grid must be positive".into()));
        }
        let mut t = Table::new(["gamma", "alpha"]);
        for g in logspace(lo, hi, args.points) {
            t.push(vec![fmt_f64(g), fmt_f64(alpha(g)?)]);
        }
        return Ok(Output::Table(t));
    }
    let gamma = required(gamma, "--gamma")?;
    Ok(Output::Json(
        json!({ "gamma": gamma, "alpha": alpha(gamma)? }),
    ))
}

fn limits_u(gamma: f64, x: Option<f64>, args: &TableArgs) -> Result<Output> {
    if args.table {
        let (lo, hi) = range(args, 0.0, 1.0)?;
        let mut t = Table::new(["x", "u", "du", "d2u"]);
        for x in linspace(lo, hi, args.points) {
            let p = u_series_derivatives(x, gamma)?;
            t.push(vec![
                fmt_f64(x),
                fmt_f64(p.u),
                fmt_f64(p.du),
                fmt_f64(p.d2u),
            ]);
        }
        return Ok(Output::Table(t));
    }
    let x = required(x, "--x")?;
    let p = u_series_derivatives(x, gamma)?;
    Ok(Output::Json(json!({
        "gamma": gamma,
        "x": x,
        "u": p.u,
        "du": p.du,
        "d2u": p.d2u,
        "alpha": alpha(gamma)?,
    })))
}

fn limits_g2(u2: f64, t: Option<f64>, args: &TableArgs) -> Result<Output> {
    let roots = riccati_roots(u2)?;
    if args.table {
        let (lo, hi) = range(args, 0.0, 10.0 / u2.sqrt())?;
        let mut table = Table::new(["t", "g2"]);
        for t in linspace(lo, hi, args.points) {
            table.push(vec![fmt_f64(t), fmt_f64(g2(t, u2)?)]);
        }
        return Ok(Output::Table(table));
    }
    let t = required(t, "--t")?;
    Ok(Output::Json(json!({
        "u2": u2,
        "t": t,
        "g2": g2(t, u2)?,
        "r1": roots.r1,
        "r2": roots.r2,
    })))
}

/// Values at scaled time `t`. Before the limit, `tau = t / (lambda sqrt(u2))`
/// and the density is `g2(tau) / sqrt(u2) * P(tau_2 > tau)`.
fn f2_values(lambda: f64, t: f64, u2: Option<f64>) -> Result<Value> {
    let law = theorem1_law(lambda)?;
    let mut v = json!({
        "lambda": lambda,
        "t": t,
        "pdf": law.pdf(t),
        "cdf": law.cdf(t),
        "survival": law.survival(t),
        "hazard": law.hazard(t),
    });
    if let Some(u2) = u2 {
        if lambda <= 0.0 {
            return Err(CliError::Usage("--u2 needs --lambda > 0".into()));
        }
        let tau = t / (lambda * u2.sqrt());
        let cdf = tau2_cdf_immigration(tau, lambda, u2)?;
        v["u2"] = json!(u2);
        v["prelimit_cdf"] = json!(cdf);
        v["prelimit_pdf"] = json!(g2(tau, u2)? / u2.sqrt() * (1.0 - cdf));
    }
    Ok(v)
}

fn limits_f2(lambda: f64, t: Option<f64>, u2: Option<f64>, args: &TableArgs) -> Result<Output> {
    if args.table {
        let law = theorem1_law(lambda)?;
        let (lo, hi) = range(args, 0.0, law.quantile(0.999))?;
        let mut header = vec!["t", "pdf", "cdf", "survival", "hazard"];
        if u2.is_some() {
            header.extend(["prelimit_pdf", "prelimit_cdf"]);
        }
        let mut table = Table::new(header.clone());
        for t in linspace(lo, hi, args.points) {
            let v = f2_values(lambda, t, u2)?;
            table.push(
                header
                    .iter()
                    .map(|k| fmt_f64(v[*k].as_f64().unwrap_or(f64::NAN)))
                    .collect(),
            );
        }
        return Ok(Output::Table(table));
    }
    Ok(Output::Json(f2_values(lambda, required(t, "--t")?, u2)?))
}

/// `--u` lists `u_2..u_m`; `u_1` only enters `r_0`.
fn limits_r(
    u: &[f64],
    m: Option<usize>,
    u1: Option<f64>,
    n: Option<u64>,
    table: bool,
) -> Result<Output> {
    let stages = u.len() + 1;
    if let Some(m) = m {
        if m != stages {
            return Err(CliError::Usage(format!(
                "--m {m} needs {} rates u2..u{m} in --u, got {}",
                m - 1,
                u.len()
            )));
        }
    }
    if n.is_some() && u1.is_none() {
        return Err(CliError::Usage("--n needs --u1".into()));
    }
    let mut all = vec![u1.unwrap_or(0.0)];
    all.extend_from_slice(u);
    let rates = MutationRates::new(all)?;
    let r = scaling_constants(&rates);
    let p_life = p_recursion(&rates, MutationTiming::Lifetime)?;
    let p_birth = p_recursion(&rates, MutationTiming::Birth)?;
    if table {
        let mut t = Table::new(["j", "u_next", "r", "p_lifetime", "p_birth"]);
        for j in 1..=stages {
            let u_next = if j < stages {
                fmt_f64(rates.u(j + 1))
            } else {
                String::new()
            };
            t.push(vec![
                j.to_string(),
                u_next,
                fmt_f64(r.get(j)),
                fmt_f64(p_life[j - 1]),
                fmt_f64(p_birth[j - 1]),
            ]);
        }
        return Ok(Output::Table(t));
    }
    let mut v = json!({
        "m": stages,
        "u": u,
        "r1": r.r1(),
        "r": &r.as_slice()[1..],
        "p_lifetime": p_life,
        "p_birth": p_birth,
    });
    if let Some(u1) = u1 {
        v["u1"] = json!(u1);
        v["r0"] = json!(r.r0());
        if let Some(n) = n {
            v["n"] = json!(n);
            v["waiting_scale"] = json!(1.0 / (n as f64 * r.r0()));
        }
    }
    Ok(Output::Json(v))
}

fn limits_progeny(n: u64, args: &TableArgs) -> Result<Output> {
    if args.table {
        let (lo, hi) = range(args, 1.0, n.max(1) as f64)?;
        let mut grid: Vec<u64> = logspace(lo.max(1.0), hi.max(1.0), args.points)
            .into_iter()
            .map(|x| x.round() as u64)
            .collect();
        grid.dedup();
        let mut t = Table::new(["n", "tail", "ln_tail"]);
        for k in grid {
            t.push(vec![
                k.to_string(),
                fmt_f64(total_progeny_tail(k)),
                fmt_f64(ln_total_progeny_tail(k)),
            ]);
        }
        return Ok(Output::Table(t));
    }
    Ok(Output::Json(json!({
        "n": n,
        "tail": total_progeny_tail(n),
        "ln_tail": ln_total_progeny_tail(n),
    })))
}

fn limits_m0(n: u64, k: Option<u64>, args: &TableArgs) -> Result<Output> {
    if args.table {
        let mut t = Table::new([
            "k",
            "er_k",
            "er_k_given_loss",
            "er_k_given_fix",
            "el_k",
            "et",
        ]);
        for k in 1..n.max(1) {
            let e = m0_expectations(n, k)?;
            t.push(vec![
                k.to_string(),
                fmt_f64(e.er_k),
                fmt_f64(e.er_k_given_loss),
                fmt_f64(e.er_k_given_fix),
                fmt_f64(e.el_k),
                fmt_f64(e.et),
            ]);
        }
        return Ok(Output::Table(t));
    }
    let k = required(k, "--k")?;
    let e = m0_expectations(n, k)?;
    Ok(Output::Json(json!({
        "n": n,
        "k": k,
        "fixation_probability": m0_fixation_probability(n, 1),
        "er_k": e.er_k,
        "er_k_given_loss": e.er_k_given_loss,
        "er_k_given_fix": e.er_k_given_fix,
        "el_k": e.el_k,
        "et": e.et,
    })))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(linspace(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
        assert_eq!(linspace(2.0, 3.0, 1), vec![2.0]);
        assert!(linspace(0.0, 1.0, 0).is_empty());
        let g = logspace(0.01, 100.0, 5);
        assert!((g[2] - 1.0).abs() < 1e-12 && (g[4] - 100.0).abs() < 1e-9);
    }

    #[test]
    fn r_reads_rates_from_u2() {
        let Output::Json(v) = limits_r(&[1e-5, 1e-4], Some(3), None, None, false).unwrap() else {
            panic!()
        };
        assert!((v["r1"].as_f64().unwrap() - 3.1623e-4).abs() < 1e-8);
        assert_eq!(v["r"].as_array().unwrap().len(), 3);
        assert!(limits_r(&[1e-5], Some(3), None, None, false).is_err());
        assert!(limits_r(&[1e-5], None, None, Some(10), false).is_err());
    }

    #[test]
    fn prelimit_f2_approaches_the_limit() {
        let v = f2_values(1.0, 1.0, Some(1e-8)).unwrap();
        let gap = (v["prelimit_cdf"].as_f64().unwrap() - v["cdf"].as_f64().unwrap()).abs();
        assert!(gap < 1e-3, "{v}");
        assert!(f2_values(0.0, 1.0, Some(1e-4)).is_err());
    }
}

//! Subcommand implementations. Each returns the full CSV text.

use std::fmt::Write as _;

use rayon::prelude::*;

use nearquad::estimates::{all_converged, EstimateResult};
use nearquad::rules::rule;
use nearquad::targets::{generate, GeneratedTarget};
use nearquad::{HalfIntegerP, RuleKind};

use crate::config::{ConfigError, ExperimentConfig};
use crate::problem::Problem;

/// Measured errors at or below this are roundoff and left out of summaries.
pub const ERROR_FLOOR: f64 = 1e-12;

/// A validation row counts as a hit when estimate and error agree within this factor.
pub const AGREEMENT_FACTOR: f64 = 10.0;

#[derive(Debug)]
pub enum CommandError {
    Config(ConfigError),
    /// Output was produced, but some rows or steps failed numerically.
    Numerical { output: String, message: String },
}

impl From<ConfigError> for CommandError {
    fn from(e: ConfigError) -> Self {
        CommandError::Config(e)
    }
}

fn lib_error(key: &str, e: nearquad::Error) -> CommandError {
    CommandError::Config(ConfigError { line: None, key: Some(key.into()), message: e.to_string() })
}

fn finish(output: String, failures: usize, what: &str) -> Result<String, CommandError> {
    if failures == 0 {
        Ok(output)
    } else {
        Err(CommandError::Numerical { output, message: format!("{failures} {what} failed") })
    }
}

fn header(command: &str, cfg: &ExperimentConfig) -> String {
    let mut s = format!("# nearquad {} {command}\n# seed = {}\n", env!("CARGO_PKG_VERSION"), cfg.seed);
    for line in cfg.raw.echo() {
        if !line.starts_with("seed =") {
            let _ = writeln!(s, "# config: {line}");
        }
    }
    s
}

fn field(message: &str) -> String {
    message.replace([',', '\n'], ";")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |v| format!("{v:e}"))
}

fn targets(cfg: &ExperimentConfig, problem: &Problem) -> Result<Vec<GeneratedTarget>, CommandError> {
    generate(&cfg.targets, problem.source(), cfg.seed).map_err(|e| match e {
        nearquad::Error::InvalidArgument(_) => lib_error("targets.generator", e),
        other => CommandError::Numerical { output: String::new(), message: format!("target generation: {other}") },
    })
}

fn dominant_root(r: &EstimateResult) -> Option<nearquad::Complex64> {
    r.contributions
        .iter()
        .max_by(|a, b| a.value.total_cmp(&b.value))
        .map(|c| c.root.t0)
}

/// Columns: index, x, y, z, estimate, reliable, converged, t0_re, t0_im
/// (root of the largest contribution, panel-local), preimage_re,
/// preimage_im (generator pre-image, if any), status.
pub fn cmd_estimate(cfg: &ExperimentConfig) -> Result<String, CommandError> {
    let problem = cfg.problem(None)?;
    let pot = cfg.potential(&problem, None)?;
    let targets = targets(cfg, &problem)?;
    let results: Vec<_> =
        targets.par_iter().map(|t| problem.estimate(&pot, &t.point, &cfg.options)).collect();

    let mut out = header("estimate", cfg);
    out.push_str("index,x,y,z,estimate,reliable,converged,t0_re,t0_im,preimage_re,preimage_im,status\n");
    let mut failures = 0;
    for (i, (t, r)) in targets.iter().zip(&results).enumerate() {
        let [x, y, z] = t.point.coords;
        let pre = (fmt_opt(t.preimage.map(|c| c.re)), fmt_opt(t.preimage.map(|c| c.im)));
        match r {
            Ok(r) => {
                let t0 = dominant_root(r);
                let _ = writeln!(
                    out,
                    "{i},{x:e},{y:e},{z:e},{:e},{},{},{},{},{},{},ok",
                    r.value,
                    r.reliable,
                    all_converged(r),
                    fmt_opt(t0.map(|c| c.re)),
                    fmt_opt(t0.map(|c| c.im)),
                    pre.0,
                    pre.1
                );
            }
            Err(e) => {
                failures += 1;
                let _ = writeln!(out, "{i},{x:e},{y:e},{z:e},,,,,,{},{},{}", pre.0, pre.1, field(&e.to_string()));
            }
        }
    }
    finish(out, failures, "estimates")
}

/// One validated target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationRow {
    pub measured: f64,
    pub estimate: f64,
}

/// Summary of validation rows whose measured error exceeds [`ERROR_FLOOR`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationSummary {
    pub rows: usize,
    pub counted: usize,
    pub within: usize,
    /// max estimate/error.
    pub max_over: f64,
    /// max error/estimate.
    pub max_under: f64,
    /// Most valid rows sit at the roundoff floor.
    pub error_floor: bool,
}

impl ValidationSummary {
    pub fn from_rows(rows: &[ValidationRow]) -> Self {
        let counted: Vec<_> = rows.iter().filter(|r| r.measured > ERROR_FLOOR).collect();
        let ratio = |r: &ValidationRow| r.estimate / r.measured;
        ValidationSummary {
            rows: rows.len(),
            counted: counted.len(),
            within: counted
                .iter()
                .filter(|r| (1.0 / AGREEMENT_FACTOR..=AGREEMENT_FACTOR).contains(&ratio(r)))
                .count(),
            max_over: counted.iter().map(|r| ratio(r)).fold(0.0, f64::max),
            max_under: counted.iter().map(|r| 1.0 / ratio(r)).fold(0.0, f64::max),
            error_floor: 2 * counted.len() < rows.len(),
        }
    }

    pub fn fraction(&self) -> f64 {
        if self.counted == 0 {
            f64::NAN
        } else {
            self.within as f64 / self.counted as f64
        }
    }
}

/// Columns: index, x, y, z, measured_error, estimate, ratio (estimate/error),
/// reliable, status; followed by a `# summary:` footer.
pub fn cmd_validate(cfg: &ExperimentConfig) -> Result<String, CommandError> {
    let problem = cfg.problem(None)?;
    let pot = cfg.potential(&problem, None)?;
    let targets = targets(cfg, &problem)?;
    let oracle = problem.oracle(&pot, cfg.reference_tol).map_err(|e| CommandError::Numerical {
        output: String::new(),
        message: format!("reference: {e}"),
    })?;
    let results: Vec<_> = targets
        .par_iter()
        .map(|t| (oracle.measured_error(&t.point), problem.estimate(&pot, &t.point, &cfg.options)))
        .collect();

    let mut out = header("validate", cfg);
    out.push_str("index,x,y,z,measured_error,estimate,ratio,reliable,status\n");
    let mut rows = Vec::new();
    let mut failures = 0;
    for (i, (t, (m, e))) in targets.iter().zip(&results).enumerate() {
        let [x, y, z] = t.point.coords;
        let status = match (m, e) {
            (Ok(_), Ok(_)) => "ok".to_string(),
            (Err(me), _) => format!("oracle: {}", field(&me.to_string())),
            (_, Err(ee)) => format!("estimate: {}", field(&ee.to_string())),
        };
        if e.is_err() {
            failures += 1;
        }
        let m = m.as_ref().ok().copied();
        let est = e.as_ref().ok();
        let ratio = match (m, est) {
            (Some(m), Some(e)) if m > 0.0 => Some(e.value / m),
            _ => None,
        };
        let _ = writeln!(
            out,
            "{i},{x:e},{y:e},{z:e},{},{},{},{},{status}",
            fmt_opt(m),
            fmt_opt(est.map(|r| r.value)),
            fmt_opt(ratio),
            est.map_or_else(String::new, |r| r.reliable.to_string()),
        );
        if let (Some(measured), Some(r)) = (m, est) {
            rows.push(ValidationRow { measured, estimate: r.value });
        }
    }
    let s = ValidationSummary::from_rows(&rows);
    let _ = writeln!(
        out,
        "# summary: rows={} excluded={} counted={} within_10x={} within_10x_fraction={} max_overestimate={} max_underestimate={} error_floor={}",
        targets.len(),
        targets.len() - rows.len(),
        s.counted,
        s.within,
        s.fraction(),
        s.max_over,
        s.max_under,
        s.error_floor
    );
    finish(out, failures, "estimates")
}

/// Least-squares slope of ln(y) against x.
pub fn log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<_> = points.iter().filter(|(_, y)| *y > 0.0).map(|&(x, y)| (x, y.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Columns: n, p, max_error, argmax_index, estimate_at_argmax, ratio; followed
/// by one `# fit:` line per p with log-slopes per unit n.
pub fn cmd_sweep(cfg: &ExperimentConfig) -> Result<String, CommandError> {
    let ns: Vec<Option<usize>> =
        if cfg.sweep_n.is_empty() { vec![None] } else { cfg.sweep_n.iter().map(|&n| Some(n)).collect() };
    let first = cfg.problem(ns[0])?;
    let targets = targets(cfg, &first)?;
    let ps: Vec<Option<HalfIntegerP>> =
        if cfg.sweep_p.is_empty() { vec![None] } else { cfg.sweep_p.iter().map(|&p| Some(p)).collect() };

    let mut out = header("sweep", cfg);
    out.push_str("n,p,max_error,argmax_index,estimate_at_argmax,ratio\n");
    let mut failures = 0;
    let mut fits: Vec<(f64, Vec<(f64, f64)>, Vec<(f64, f64)>)> = Vec::new();
    for &n in &ns {
        let problem = cfg.problem(n)?;
        let n_value = n.unwrap_or(cfg.rules[0].n);
        for &p in &ps {
            let pot = cfg.potential(&problem, p)?;
            let p_value = pot.p.value();
            let oracle = problem.oracle(&pot, cfg.reference_tol);
            let errors: Vec<Option<f64>> = match &oracle {
                Ok(o) => targets.par_iter().map(|t| o.measured_error(&t.point).ok()).collect(),
                Err(_) => vec![None; targets.len()],
            };
            let argmax = errors
                .iter()
                .enumerate()
                .filter_map(|(i, e)| e.map(|e| (i, e)))
                .max_by(|a, b| a.1.total_cmp(&b.1));
            let Some((i, max_error)) = argmax else {
                failures += 1;
                let _ = writeln!(out, "{n_value},{p_value},,,,");
                continue;
            };
            let est = problem.estimate(&pot, &targets[i].point, &cfg.options).ok().map(|r| r.value);
            if est.is_none() {
                failures += 1;
            }
            let ratio = est.filter(|_| max_error > 0.0).map(|e| e / max_error);
            let _ = writeln!(out, "{n_value},{p_value},{max_error:e},{i},{},{}", fmt_opt(est), fmt_opt(ratio));
            let slot = match fits.iter().position(|f| f.0 == p_value) {
                Some(k) => k,
                None => {
                    fits.push((p_value, Vec::new(), Vec::new()));
                    fits.len() - 1
                }
            };
            if max_error > ERROR_FLOOR {
                fits[slot].1.push((n_value as f64, max_error));
                if let Some(e) = est {
                    fits[slot].2.push((n_value as f64, e));
                }
            }
        }
    }
    for (p, errs, ests) in &fits {
        let _ = writeln!(
            out,
            "# fit: p={p} points={} error_slope={} estimate_slope={}",
            errs.len(),
            fmt_opt(log_slope(errs)),
            fmt_opt(log_slope(ests))
        );
    }
    finish(out, failures, "sweep rows")
}

/// Columns: index, node, weight.
pub fn cmd_rules_dump(kind: RuleKind, n: usize) -> Result<String, CommandError> {
    let r = rule(kind, n).map_err(|e| lib_error("rule", e))?;
    let mut out = format!("# nearquad {} rules-dump\n# rule = {} n = {n}\n", env!("CARGO_PKG_VERSION"), kind.name());
    out.push_str("index,node,weight\n");
    for (i, (x, w)) in r.nodes.iter().zip(&r.weights).enumerate() {
        let _ = writeln!(out, "{i},{x:e},{w:e}");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_counts() {
        let rows = [
            ValidationRow { measured: 1e-5, estimate: 2e-5 },
            ValidationRow { measured: 1e-5, estimate: 2e-7 },
            ValidationRow { measured: 1e-14, estimate: 1.0 },
        ];
        let s = ValidationSummary::from_rows(&rows);
        assert_eq!((s.counted, s.within), (2, 1));
        assert!((s.max_over - 2.0).abs() < 1e-12);
        assert!((s.max_under - 50.0).abs() < 1e-9);
        assert!(!s.error_floor);
        assert!(ValidationSummary::from_rows(&rows[2..]).error_floor);
    }

    #[test]
    fn slope_fit() {
        let pts: Vec<_> = (8..=24).map(|n| (n as f64, 3.0 * (-0.1 * n as f64).exp())).collect();
        assert!((log_slope(&pts).unwrap() + 0.1).abs() < 1e-12);
        assert_eq!(log_slope(&pts[..1]), None);
    }
}

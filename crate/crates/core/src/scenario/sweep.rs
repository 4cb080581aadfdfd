use std::fmt;
use std::sync::Mutex;
use std::thread;

use crate::error::{Error, Result};
use crate::scenario::{simulate, ScenarioConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub dt: f64,
    /// `Err` at the final time, if the run completed.
    pub err: Option<f64>,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    /// Least-squares slope of `log |Err|` against `log dt`.
    pub order: Option<f64>,
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>12}  {:>14}", "dt", "|Err|")?;
        for r in &self.rows {
            match (r.err, &r.failure) {
                (Some(e), _) => writeln!(f, "{:>12.4e}  {:>14.6e}", r.dt, e.abs())?,
                (None, Some(msg)) => writeln!(f, "{:>12.4e}  failed: {msg}", r.dt)?,
                (None, None) => writeln!(f, "{:>12.4e}  -", r.dt)?,
            }
        }
        match self.order {
            Some(p) => write!(f, "fitted order: {p:.3}"),
            None => write!(f, "fitted order: n/a"),
        }
    }
}

/// Least-squares slope through `(log dt, log |err|)`; needs two usable points.
pub fn fit_order(dts: &[f64], errs: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = dts
        .iter()
        .zip(errs)
        .filter(|(d, e)| **d > 0.0 && e.abs() > 0.0 && e.is_finite())
        .map(|(d, e)| (d.ln(), e.abs().ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Worker count from `OFD_THREADS`, defaulting to the available parallelism.
pub fn worker_count() -> usize {
    std::env::var("OFD_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| thread::available_parallelism().map_or(1, |n| n.get()))
}

fn check_dt_list(dts: &[f64]) -> Result<()> {
    if dts.len() < 3 {
        return Err(Error::Argument(format!(
            "a sweep needs at least 3 time steps, got {}",
            dts.len()
        )));
    }
    if dts.iter().any(|d| !(*d > 0.0)) {
        return Err(Error::Argument("time steps must be positive".into()));
    }
    let ratio = dts[1] / dts[0];
    if dts
        .windows(2)
        .any(|w| ((w[1] / w[0]) / ratio - 1.0).abs() > 1e-6)
    {
        return Err(Error::Argument(
            "time steps must form a geometric sequence".into(),
        ));
    }
    Ok(())
}

/// Runs `cfg` once per time step (to `cfg.t_end`) and fits the order of `|Err|`.
pub fn convergence_sweep(cfg: &ScenarioConfig, dts: &[f64], workers: usize) -> Result<SweepReport> {
    check_dt_list(dts)?;
    let results: Mutex<Vec<Option<SweepRow>>> = Mutex::new(vec![None; dts.len()]);
    let next = Mutex::new(0usize);
    thread::scope(|scope| {
        for _ in 0..workers.clamp(1, dts.len()) {
            scope.spawn(|| loop {
                let i = {
                    let mut n = next.lock().unwrap();
                    let i = *n;
                    *n += 1;
                    i
                };
                let Some(&dt) = dts.get(i) else { break };
                let mut c = cfg.clone();
                c.dt = dt;
                c.output.dir = None;
                let row = match simulate(&c) {
                    Ok(out) => match (&out.error, out.last()) {
                        (None, Some(last)) => SweepRow {
                            dt,
                            err: Some(last.err),
                            failure: None,
                        },
                        (Some(e), _) => SweepRow {
                            dt,
                            err: None,
                            failure: Some(e.to_string()),
                        },
                        (None, None) => SweepRow {
                            dt,
                            err: None,
                            failure: Some("empty ledger".into()),
                        },
                    },
                    Err(e) => SweepRow {
                        dt,
                        err: None,
                        failure: Some(e.to_string()),
                    },
                };
                results.lock().unwrap()[i] = Some(row);
            });
        }
    });
    let rows: Vec<SweepRow> = results
        .into_inner()
        .unwrap()
        .into_iter()
        .flatten()
        .collect();
    let (d, e): (Vec<f64>, Vec<f64>) = rows.iter().filter_map(|r| r.err.map(|e| (r.dt, e))).unzip();
    Ok(SweepReport {
        order: fit_order(&d, &e),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_data_has_order_one() {
        let dts = [1e-2, 5e-3, 2.5e-3];
        let errs: Vec<f64> = dts.iter().map(|d| 3.0 * d).collect();
        assert!((fit_order(&dts, &errs).unwrap() - 1.0).abs() < 1e-12);
        let quad: Vec<f64> = dts.iter().map(|d| -0.5 * d * d).collect();
        assert!((fit_order(&dts, &quad).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn dt_list_checks() {
        assert!(check_dt_list(&[1e-2, 5e-3]).is_err());
        assert!(check_dt_list(&[1e-2, 5e-3, 1e-3]).is_err());
        assert!(check_dt_list(&[1e-2, 5e-3, 2.5e-3]).is_ok());
    }
}

//! Decoding thresholds by bisection over the channel error probability.

use serde::{Deserialize, Serialize};

use crate::channel::{shannon_limit, uniform_error};
use crate::de::{de_run_with, stepper_for, DeMode, DeSettings, Ensemble, VnStepper};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSettings {
    pub de: DeSettings,
    /// Bisection stops once the bracket is narrower than this.
    pub bisect_tol: f64,
}

impl Default for ThresholdSettings {
    fn default() -> Self {
        Self {
            de: DeSettings::default(),
            bisect_tol: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub ensemble: Ensemble,
    /// Mode actually used (`q = 2` always runs exact).
    pub mode: DeMode,
    /// Largest epsilon found at which the lower-bound DE converges.
    pub eps_star_lower: f64,
    /// Largest epsilon found at which the upper-bound DE converges.
    pub eps_star_upper: f64,
    /// Number of DE runs performed.
    pub evaluations: usize,
    pub settings: ThresholdSettings,
}

/// Bisects `[lo, hi)` for the boundary of `good`, assuming `good(lo)`.
/// Returns the largest point known to be good.
fn bisect(mut lo: f64, mut hi: f64, tol: f64, mut good: impl FnMut(f64) -> Result<bool>) -> Result<f64> {
    while hi - lo >= tol {
        let mid = 0.5 * (lo + hi);
        if good(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
        debug_assert!(lo < hi);
    }
    Ok(lo)
}

/// Computes the iterative decoding threshold of `ensemble`.
///
/// In bounded mode two bisections are run: one on convergence of the
/// lower-bound trajectory and one, starting from that result, on
/// convergence of the upper-bound trajectory.
pub fn find_threshold(ensemble: Ensemble, mode: DeMode, settings: ThresholdSettings) -> Result<ThresholdResult> {
    if !(settings.bisect_tol >= 1e-5) {
        return Err(Error::InvalidArgument(format!(
            "bisection tolerance {} is below 1e-5",
            settings.bisect_tol
        )));
    }
    let mode = if ensemble.q == 2 { DeMode::Exact } else { mode };
    let stepper: VnStepper = stepper_for(ensemble, mode)?;
    let top = uniform_error(ensemble.q);
    let mut evaluations = 0;
    let mut run = |eps: f64| {
        evaluations += 1;
        de_run_with(&stepper, ensemble, eps, mode, settings.de)
    };
    let eps_lower = bisect(0.0, top, settings.bisect_tol, |e| Ok(run(e)?.converged))?;
    let eps_upper = match mode {
        DeMode::Exact => eps_lower,
        DeMode::Bounded => bisect(eps_lower, top, settings.bisect_tol, |e| Ok(run(e)?.upper_converged))?,
    };
    Ok(ThresholdResult {
        ensemble,
        mode,
        eps_star_lower: eps_lower,
        eps_star_upper: eps_upper,
        evaluations,
        settings,
    })
}

/// One row of a threshold table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub dv: usize,
    pub dc: usize,
    pub q: usize,
    pub eps_star_lower: f64,
    pub eps_star_upper: f64,
    pub eps_shannon: f64,
}

impl TableRow {
    pub const CSV_HEADER: &'static str = "dv,dc,q,eps_star_lower,eps_star_upper,eps_shannon";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{:.6},{:.6},{:.6}",
            self.dv, self.dc, self.q, self.eps_star_lower, self.eps_star_upper, self.eps_shannon
        )
    }
}

/// Thresholds and Shannon limits for every `(dv, dc)` in `degrees` and
/// every field order in `qs`, in row-major order (degrees outer).
pub fn table_report(
    degrees: &[(usize, usize)],
    qs: &[usize],
    mode: DeMode,
    settings: ThresholdSettings,
) -> Result<Vec<TableRow>> {
    let cells: Vec<Ensemble> = degrees
        .iter()
        .flat_map(|&(dv, dc)| qs.iter().map(move |&q| Ensemble::new(dv, dc, q)))
        .collect::<Result<_>>()?;
    cells
        .iter()
        .map(|&ens| {
            let t = find_threshold(ens, mode, settings)?;
            Ok(TableRow {
                dv: ens.dv,
                dc: ens.dc,
                q: ens.q,
                eps_star_lower: t.eps_star_lower,
                eps_star_upper: t.eps_star_upper,
                eps_shannon: shannon_limit(ens.q, ens.design_rate())?,
            })
        })
        .collect()
}

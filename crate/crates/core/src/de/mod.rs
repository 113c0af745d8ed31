//! Density evolution (DE) of SMP decoding over the QSC.
//!
//! The all-zero codeword is assumed. `p0` is the probability that a
//! VN-to-CN message is correct, `xi` the error probability of a CN-to-VN
//! message. The check node step is closed form; the variable node step is
//! available exactly (moderate `q` and `dv`) or as a lower/upper bound pair
//! that is cheap for any `q`.
//!
//! Iteration `l` of a trace maps `p0^(l-1)` to `xi^(l)` through the check
//! node step and `xi^(l)` to `p0^(l)` through the variable node step, with
//! `p0^(0) = 1 - epsilon`. The `xi` values are exactly what the decoder
//! needs after its `l`-th check node update.

pub mod multinomial;
mod vn;

use serde::{Deserialize, Serialize};

use crate::channel::uniform_error;
use crate::error::{Error, Result};

pub use multinomial::{multinomial_max_cdf, multinomial_max_eq_count_dist, multinomial_max_pmf};
pub use vn::{
    composition_count, vn_step_bounded, vn_step_exact, BoundTerms, VnStepper, VoteVector,
    EXACT_COMPOSITION_LIMIT, INTEGRALITY_TOL,
};

/// A regular ensemble `C(dv, dc, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ensemble {
    pub dv: usize,
    pub dc: usize,
    pub q: usize,
}

impl Ensemble {
    pub fn new(dv: usize, dc: usize, q: usize) -> Result<Self> {
        if dv < 2 {
            return Err(Error::InvalidEnsemble(format!("dv = {dv} must be at least 2")));
        }
        if dc <= dv {
            return Err(Error::InvalidEnsemble(format!("dc = {dc} must exceed dv = {dv}")));
        }
        if !(2..=1 << 16).contains(&q) || !q.is_power_of_two() {
            return Err(Error::InvalidEnsemble(format!(
                "q = {q} must be a power of two in 2..=65536"
            )));
        }
        Ok(Self { dv, dc, q })
    }

    pub fn design_rate(&self) -> f64 {
        1.0 - self.dv as f64 / self.dc as f64
    }
}

/// A probability known to lie in `[lower, upper]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundedProb {
    pub lower: f64,
    pub upper: f64,
}

impl BoundedProb {
    pub fn new(lower: f64, upper: f64) -> Self {
        debug_assert!(lower <= upper + 1e-15, "lower {lower} > upper {upper}");
        Self { lower, upper }
    }

    pub fn exact(p: f64) -> Self {
        Self { lower: p, upper: p }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, p: f64, tol: f64) -> bool {
        p >= self.lower - tol && p <= self.upper + tol
    }
}

/// Probability that `j` i.i.d. uniform nonzero elements of GF(q) sum to
/// zero (`to_zero`) or to one particular nonzero value.
pub fn psi(j: usize, to_zero: bool, q: usize) -> f64 {
    let qf = q as f64;
    let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
    if to_zero {
        if j == 0 {
            return 1.0;
        }
        (1.0 + sign / (qf - 1.0).powi(j as i32 - 1)) / qf
    } else {
        (1.0 - sign / (qf - 1.0).powi(j as i32)) / qf
    }
}

/// Distribution of a CN-to-VN message.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CnDistribution {
    /// Probability the message is correct.
    pub omega0: f64,
    /// Probability of each particular wrong value.
    pub omega_other: f64,
}

impl CnDistribution {
    /// Error probability of the equivalent extrinsic QSC.
    pub fn xi(&self) -> f64 {
        1.0 - self.omega0
    }
}

/// Check node step: the law of a CN-to-VN message when each of the other
/// `dc - 1` incoming messages is correct with probability `p0`.
pub fn cn_step(p0: f64, dc: usize, q: usize) -> CnDistribution {
    let n = dc - 1;
    let err = 1.0 - p0;
    let omega0: f64 = (0..=n)
        .map(|j| multinomial::binomial_pmf(n, j, err) * psi(j, true, q))
        .sum::<f64>()
        .clamp(0.0, 1.0);
    CnDistribution {
        omega0,
        omega_other: (1.0 - omega0) / (q as f64 - 1.0),
    }
}

/// Whether the VN step is evaluated exactly or through the bound pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeMode {
    Exact,
    Bounded,
}

impl std::str::FromStr for DeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(DeMode::Exact),
            "bounded" => Ok(DeMode::Bounded),
            other => Err(Error::InvalidArgument(format!("unknown DE mode `{other}`"))),
        }
    }
}

impl std::fmt::Display for DeMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DeMode::Exact => "exact",
            DeMode::Bounded => "bounded",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeSettings {
    /// Maximum number of DE iterations.
    pub l_max: usize,
    /// Declared converged once `1 - p0 < delta_conv`.
    pub delta_conv: f64,
}

impl Default for DeSettings {
    fn default() -> Self {
        Self {
            l_max: 2000,
            delta_conv: 1e-9,
        }
    }
}

/// One DE iteration.
///
/// `p0_lower`/`xi_upper` come from the trajectory that uses the lower bound
/// at every VN step, `p0_upper`/`xi_lower` from the one using the upper
/// bound. In exact mode the two coincide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeRecord {
    pub iteration: usize,
    pub p0_lower: f64,
    pub p0_upper: f64,
    pub xi_lower: f64,
    pub xi_upper: f64,
}

impl DeRecord {
    pub fn p0(&self) -> BoundedProb {
        BoundedProb::new(self.p0_lower, self.p0_upper)
    }

    pub fn xi(&self) -> BoundedProb {
        BoundedProb::new(self.xi_lower, self.xi_upper)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeTrace {
    pub ensemble: Ensemble,
    pub epsilon: f64,
    pub mode: DeMode,
    pub settings: DeSettings,
    pub p0_initial: f64,
    pub records: Vec<DeRecord>,
    /// The lower-bound trajectory reached `1 - p0 < delta_conv`.
    pub converged: bool,
    /// The upper-bound trajectory reached `1 - p0 < delta_conv`.
    pub upper_converged: bool,
    pub iterations_run: usize,
}

impl DeTrace {
    /// `xi` values of the lower-bound trajectory, for use by the decoder.
    pub fn xi_schedule(&self) -> crate::smp::XiSchedule {
        crate::smp::XiSchedule::new(self.ensemble.q, self.records.iter().map(|r| r.xi_upper))
    }

    pub fn final_p0(&self) -> BoundedProb {
        self.records
            .last()
            .map(|r| r.p0())
            .unwrap_or(BoundedProb::exact(self.p0_initial))
    }
}

/// Builds the VN stepper for `mode`; bounded mode falls back to exact for `q = 2`.
pub fn stepper_for(ensemble: Ensemble, mode: DeMode) -> Result<VnStepper> {
    match mode {
        DeMode::Bounded if ensemble.q > 2 => VnStepper::bounded(ensemble.dv, ensemble.q),
        _ => VnStepper::exact(ensemble.dv, ensemble.q),
    }
}

/// Runs DE at channel error probability `epsilon`.
pub fn de_run(ensemble: Ensemble, epsilon: f64, mode: DeMode, settings: DeSettings) -> Result<DeTrace> {
    let stepper = stepper_for(ensemble, mode)?;
    de_run_with(&stepper, ensemble, epsilon, mode, settings)
}

/// As [`de_run`], reusing a stepper built by [`stepper_for`].
pub fn de_run_with(
    stepper: &VnStepper,
    ensemble: Ensemble,
    epsilon: f64,
    mode: DeMode,
    settings: DeSettings,
) -> Result<DeTrace> {
    let Ensemble { dc, q, .. } = ensemble;
    if !(0.0..uniform_error(q)).contains(&epsilon) {
        return Err(Error::InvalidArgument(format!(
            "epsilon = {epsilon} outside [0, {})",
            uniform_error(q)
        )));
    }
    if settings.l_max == 0 {
        return Err(Error::InvalidArgument("l_max must be positive".into()));
    }
    let exact = stepper.is_exact();
    let delta = settings.delta_conv;
    let p_init = 1.0 - epsilon;
    let (mut p_lo, mut p_hi) = (p_init, p_init);
    let mut records = Vec::new();
    let mut converged = false;
    let mut upper_converged = false;
    for l in 1..=settings.l_max {
        let xi_lo_traj = cn_step(p_lo, dc, q).xi();
        let (next_lo, next_hi, xi_hi_traj) = if exact {
            let p = stepper.exact_p0(xi_lo_traj, epsilon);
            (p, p, xi_lo_traj)
        } else {
            let xi_hi_traj = cn_step(p_hi, dc, q).xi();
            (
                stepper.lower_p0(xi_lo_traj, epsilon),
                stepper.upper_p0(xi_hi_traj, epsilon),
                xi_hi_traj,
            )
        };
        records.push(DeRecord {
            iteration: l,
            p0_lower: next_lo,
            p0_upper: next_hi.max(next_lo),
            xi_lower: xi_hi_traj.min(xi_lo_traj),
            xi_upper: xi_lo_traj,
        });
        let stalled = (next_lo - p_lo).abs() < 1e-15 && (next_hi - p_hi).abs() < 1e-15;
        p_lo = next_lo;
        p_hi = next_hi;
        upper_converged |= 1.0 - p_hi < delta;
        if 1.0 - p_lo < delta {
            converged = true;
            upper_converged = true;
            break;
        }
        if stalled && (upper_converged || 1.0 - p_hi >= delta) {
            break;
        }
    }
    Ok(DeTrace {
        ensemble,
        epsilon,
        mode,
        settings,
        p0_initial: p_init,
        iterations_run: records.len(),
        records,
        converged,
        upper_converged,
    })
}

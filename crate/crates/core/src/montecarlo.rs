//! Finite-length symbol error rate estimation.
//!
//! The all-zero codeword is sent through the QSC and decoded with SMP.
//! Frame `i` draws its channel noise and tie-breaks from a ChaCha stream
//! keyed by `(seed, i)`, and frames are accumulated in index order, so the
//! result does not depend on the number of workers.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelParams;
use crate::code::CodeGraph;
use crate::de::{de_run, DeMode, DeSettings, Ensemble};
use crate::error::{Error, Result};
use crate::galois::FieldElem;
use crate::smp::{SmpDecoder, XiSchedule};

/// When to stop simulating one channel parameter. Whichever limit is hit
/// first ends the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopRule {
    pub max_frames: usize,
    pub target_frame_errors: Option<usize>,
    pub target_symbol_errors: Option<usize>,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            max_frames: 10_000,
            target_frame_errors: Some(100),
            target_symbol_errors: None,
        }
    }
}

impl StopRule {
    pub fn frames(max_frames: usize) -> Self {
        Self {
            max_frames,
            target_frame_errors: None,
            target_symbol_errors: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.max_frames == 0
            || self.target_frame_errors == Some(0)
            || self.target_symbol_errors == Some(0)
        {
            return Err(Error::InvalidArgument("stop criteria must be positive".into()));
        }
        Ok(())
    }

    fn reached(&self, frames: usize, frame_errors: usize, symbol_errors: usize) -> bool {
        frames >= self.max_frames
            || self.target_frame_errors.is_some_and(|t| frame_errors >= t)
            || self.target_symbol_errors.is_some_and(|t| symbol_errors >= t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub epsilon: f64,
    pub n: usize,
    pub frames_run: usize,
    pub symbol_errors: usize,
    pub frame_errors: usize,
    pub ser: f64,
    pub fer: f64,
    pub l_max: usize,
    pub seed: u64,
    /// Seconds.
    pub wall_time: f64,
}

impl SimResult {
    pub const CSV_HEADER: &'static str = "epsilon,frames,symbol_errors,ser,fer";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{:e},{:e}",
            self.epsilon, self.frames_run, self.symbol_errors, self.ser, self.fer
        )
    }
}

/// The RNG used for frame `frame` of a run seeded with `seed`.
pub fn frame_rng(seed: u64, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(frame);
    rng
}

/// Decoder weights for `code` at `epsilon`: the lower-bound DE trajectory,
/// padded with its last value up to `l_max` entries.
pub fn de_schedule(code: &CodeGraph, epsilon: f64, l_max: usize) -> Result<XiSchedule> {
    let ens = Ensemble::new(code.dv(), code.dc(), code.field().q())?;
    let settings = DeSettings {
        l_max: l_max.max(1),
        ..DeSettings::default()
    };
    let trace = de_run(ens, epsilon, DeMode::Bounded, settings)?;
    Ok(trace.xi_schedule().extended_to(l_max))
}

/// Number of symbol errors in one frame.
fn run_frame(
    decoder: &mut SmpDecoder<'_>,
    channel: &ChannelParams,
    schedule: &XiSchedule,
    l_max: usize,
    seed: u64,
    frame: u64,
) -> Result<usize> {
    let mut rng = frame_rng(seed, frame);
    let n = decoder.code().n();
    let y: Vec<FieldElem> = (0..n)
        .map(|_| channel.transmit_symbol(FieldElem::ZERO, &mut rng))
        .collect();
    let out = decoder.decode(&y, channel.epsilon(), schedule, l_max, &mut rng, None)?;
    Ok(out.word.iter().filter(|s| !s.is_zero()).count())
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))
}

/// Simulates transmission of the all-zero codeword at `epsilon`.
pub fn simulate(
    code: &CodeGraph,
    epsilon: f64,
    l_max: usize,
    schedule: &XiSchedule,
    stop: StopRule,
    seed: u64,
    workers: usize,
) -> Result<SimResult> {
    stop.validate()?;
    if schedule.len() < l_max {
        return Err(Error::ScheduleTooShort {
            have: schedule.len(),
            need: l_max,
        });
    }
    let channel = ChannelParams::new(code.field().q(), epsilon)?;
    let start = Instant::now();
    let pool = pool(workers)?;
    let batch = 4 * workers.max(1);

    let (mut frames, mut frame_errors, mut symbol_errors) = (0usize, 0usize, 0usize);
    'outer: while !stop.reached(frames, frame_errors, symbol_errors) {
        let first = frames;
        let last = (first + batch).min(stop.max_frames);
        let results: Vec<Result<usize>> = pool.install(|| {
            (first..last)
                .into_par_iter()
                .map_init(
                    || SmpDecoder::new(code),
                    |dec, i| run_frame(dec, &channel, schedule, l_max, seed, i as u64),
                )
                .collect()
        });
        for r in results {
            let errs = r?;
            frames += 1;
            symbol_errors += errs;
            frame_errors += usize::from(errs > 0);
            if stop.reached(frames, frame_errors, symbol_errors) {
                break 'outer;
            }
        }
    }
    let n = code.n();
    Ok(SimResult {
        epsilon,
        n,
        frames_run: frames,
        symbol_errors,
        frame_errors,
        ser: symbol_errors as f64 / (frames * n) as f64,
        fer: frame_errors as f64 / frames as f64,
        l_max,
        seed,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Runs [`simulate`] over a grid of channel parameters, computing the DE
/// schedule for each point.
pub fn sweep(
    code: &CodeGraph,
    epsilons: &[f64],
    l_max: usize,
    stop: StopRule,
    seed: u64,
    workers: usize,
) -> Result<Vec<SimResult>> {
    epsilons
        .iter()
        .map(|&eps| {
            let schedule = de_schedule(code, eps, l_max)?;
            simulate(code, eps, l_max, &schedule, stop, seed, workers)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::FieldSpec;
    use std::sync::Arc;

    fn small_code() -> CodeGraph {
        let f = Arc::new(FieldSpec::with_order(4).unwrap());
        CodeGraph::sample(600, 3, 6, f, 2).unwrap()
    }

    #[test]
    fn noiseless_channel_has_no_errors() {
        let code = small_code();
        let sched = de_schedule(&code, 0.0, 20).unwrap();
        let r = simulate(&code, 0.0, 20, &sched, StopRule::frames(5), 1, 1).unwrap();
        assert_eq!(r.frames_run, 5);
        assert_eq!(r.ser, 0.0);
        assert_eq!(r.fer, 0.0);
    }

    #[test]
    fn result_is_independent_of_worker_count() {
        let code = small_code();
        let stop = StopRule {
            max_frames: 40,
            target_frame_errors: Some(7),
            target_symbol_errors: None,
        };
        let sched = de_schedule(&code, 0.1, 30).unwrap();
        let mut a = simulate(&code, 0.1, 30, &sched, stop, 99, 1).unwrap();
        let mut b = simulate(&code, 0.1, 30, &sched, stop, 99, 3).unwrap();
        a.wall_time = 0.0;
        b.wall_time = 0.0;
        assert_eq!(a, b);
        assert!(a.frame_errors <= 7);
        assert!((a.ser - a.symbol_errors as f64 / (a.frames_run * 600) as f64).abs() < 1e-15);
    }

    #[test]
    fn sweep_shapes() {
        let code = small_code();
        let stop = StopRule::frames(2);
        assert!(sweep(&code, &[], 10, stop, 0, 1).unwrap().is_empty());
        let rs = sweep(&code, &[0.02, 0.2], 10, stop, 0, 1).unwrap();
        assert_eq!(rs.len(), 2);
        assert!(rs[0].ser <= rs[1].ser);
    }

    #[test]
    fn short_schedule_and_bad_stop_are_errors() {
        let code = small_code();
        let sched = XiSchedule::constant(4, 0.1, 5);
        assert!(simulate(&code, 0.1, 6, &sched, StopRule::frames(1), 0, 1).is_err());
        assert!(simulate(&code, 0.1, 5, &sched, StopRule::frames(0), 0, 1).is_err());
    }
}

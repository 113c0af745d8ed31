//! Symbol message passing (SMP) decoding of nonbinary regular LDPC codes over
//! the q-ary symmetric channel, with density evolution for computing
//! iterative decoding thresholds and the per-iteration weights the decoder
//! needs.
//!
//! Modules, bottom up:
//!
//! * [`galois`]: GF(2^m) arithmetic.
//! * [`code`]: labeled regular Tanner graphs, sampling and the labeled-alist format.
//! * [`channel`]: the QSC, its capacity and log-likelihood weights.
//! * [`smp`]: the decoder.
//! * [`de`]: density evolution, exact and bounded.
//! * [`analysis`]: threshold bisection and tables.
//! * [`montecarlo`]: finite-length symbol error rate simulation.

pub mod analysis;
pub mod channel;
pub mod code;
pub mod de;
pub mod error;
pub mod galois;
pub mod montecarlo;
pub mod smp;

pub use analysis::{find_threshold, table_report, TableRow, ThresholdResult, ThresholdSettings};
pub use channel::{capacity, shannon_limit, weight_d, ChannelParams};
pub use code::CodeGraph;
pub use de::{de_run, BoundedProb, DeMode, DeSettings, DeTrace, Ensemble};
pub use error::{Error, Result};
pub use galois::{FieldElem, FieldSpec};
pub use montecarlo::{simulate, sweep, SimResult, StopRule};
pub use smp::{decode, SmpDecoder, XiSchedule};

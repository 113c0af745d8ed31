//! The q-ary symmetric channel: sampling, capacity and log-likelihood weights.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois::FieldElem;

/// QSC with error probability `epsilon` over an alphabet of size `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    q: usize,
    epsilon: f64,
}

impl ChannelParams {
    /// Requires `0 <= epsilon < (q-1)/q`, i.e. positive capacity.
    pub fn new(q: usize, epsilon: f64) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidArgument(format!("alphabet size {q} < 2")));
        }
        if !(0.0..uniform_error(q)).contains(&epsilon) {
            return Err(Error::InvalidArgument(format!(
                "epsilon = {epsilon} outside [0, {})",
                uniform_error(q)
            )));
        }
        Ok(Self { q, epsilon })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Passes each symbol through the channel independently. An error
    /// replaces the symbol by a uniformly chosen different one.
    pub fn transmit<R: Rng + ?Sized>(&self, x: &[FieldElem], rng: &mut R) -> Vec<FieldElem> {
        x.iter().map(|&s| self.transmit_symbol(s, rng)).collect()
    }

    #[inline]
    pub fn transmit_symbol<R: Rng + ?Sized>(&self, x: FieldElem, rng: &mut R) -> FieldElem {
        if self.epsilon > 0.0 && rng.gen::<f64>() < self.epsilon {
            // XOR with a uniform nonzero value is a uniform different symbol.
            FieldElem(x.0 ^ rng.gen_range(1..self.q) as u16)
        } else {
            x
        }
    }

    /// Sparse log-likelihood vector of a channel output.
    pub fn llv(&self, y: FieldElem) -> Result<Llv> {
        if y.value() as usize >= self.q {
            return Err(Error::InvalidArgument(format!("symbol {y} outside GF({})", self.q)));
        }
        let weight = if self.epsilon == 0.0 {
            f64::INFINITY
        } else {
            weight_d(self.q, self.epsilon)?
        };
        Ok(Llv { symbol: y, weight })
    }
}

/// Log-likelihood vector with a single nonzero entry `weight` at `symbol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Llv {
    pub symbol: FieldElem,
    pub weight: f64,
}

impl Llv {
    /// The dense entry for symbol `b`.
    pub fn get(&self, b: FieldElem) -> f64 {
        if b == self.symbol {
            self.weight
        } else {
            0.0
        }
    }
}

/// The error probability `(q-1)/q` at which the QSC output is uniform.
pub fn uniform_error(q: usize) -> f64 {
    (q as f64 - 1.0) / q as f64
}

fn xlogx_base(x: f64, y: f64, ln_q: f64) -> f64 {
    // x * log_q(y) with 0 * log 0 = 0
    if x == 0.0 {
        0.0
    } else {
        x * y.ln() / ln_q
    }
}

/// QSC capacity in q-ary symbols per channel use.
pub fn capacity(q: usize, epsilon: f64) -> f64 {
    let ln_q = (q as f64).ln();
    1.0 + xlogx_base(epsilon, epsilon / (q as f64 - 1.0), ln_q)
        + xlogx_base(1.0 - epsilon, 1.0 - epsilon, ln_q)
}

/// `D(p) = ln(1-p) - ln(p/(q-1))`, the weight of a QSC observation.
pub fn weight_d(q: usize, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!("D(p) needs 0 < p < 1, got {p}")));
    }
    Ok((1.0 - p).ln() - (p / (q as f64 - 1.0)).ln())
}

/// Error probability at which the QSC capacity equals `rate`.
pub fn shannon_limit(q: usize, rate: f64) -> Result<f64> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(Error::InvalidArgument(format!("rate {rate} outside (0, 1)")));
    }
    let (mut lo, mut hi) = (0.0, uniform_error(q));
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if capacity(q, mid) > rate {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

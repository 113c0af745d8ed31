//! Variable node step of density evolution.
//!
//! Under the all-zero codeword the `dv - 1` extrinsic check messages at a VN
//! are i.i.d.: correct with probability `1 - xi`, otherwise uniform over the
//! `q - 1` wrong symbols. The channel symbol is correct with probability
//! `1 - epsilon`; by symmetry any wrong channel symbol can be taken to be 1.
//!
//! Conditioning on the votes for the channel-favoured cells (symbol 0, and
//! symbol 1 when the channel is wrong) leaves the remaining votes spread
//! uniformly over the other cells, whose maximum is handled with
//! [`multinomial`](super::multinomial).

use crate::channel::uniform_error;
use crate::error::{Error, Result};
use crate::smp::{channel_weight, clamp_xi};

use super::multinomial::{binomial, binomial_pmf, multinomial_max_cdf, multinomial_max_eq_count_dist};
use super::BoundedProb;

/// Largest number of vote compositions for which the exact step is allowed.
pub const EXACT_COMPOSITION_LIMIT: f64 = 1e7;

/// Tolerance for deciding that an aggregated score `f + w` is an integer.
pub const INTEGRALITY_TOL: f64 = 1e-9;

fn integral(x: f64) -> Option<usize> {
    let r = x.round();
    ((x - r).abs() <= INTEGRALITY_TOL && r >= 0.0).then_some(r as usize)
}

/// Number of vote vectors `f` with `q` cells summing to `dv - 1`.
pub fn composition_count(dv: usize, q: usize) -> f64 {
    binomial(dv - 1 + q - 1, q - 1)
}

/// A realization of the vote counts at a VN.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoteVector {
    counts: Vec<u32>,
}

impl VoteVector {
    pub fn new(counts: Vec<u32>) -> Self {
        Self { counts }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn total(&self) -> u32 {
        self.counts.iter().sum()
    }

    /// Number of cells whose count equals `j`.
    pub fn n_j(&self, j: u32) -> usize {
        self.counts.iter().filter(|&&c| c == j).count()
    }

    /// Multinomial probability of this vote vector given that symbol 0 was
    /// sent and the extrinsic error probability is `xi`.
    pub fn probability(&self, xi: f64) -> f64 {
        let q = self.counts.len();
        let total = self.total() as usize;
        let mut coef = 1.0;
        let mut left = total;
        for &c in &self.counts {
            coef *= binomial(left, c as usize);
            left -= c as usize;
        }
        let f0 = self.counts[0] as i32;
        coef * (1.0 - xi).powi(f0) * (xi / (q as f64 - 1.0)).powi(total as i32 - f0)
    }

    /// The cells maximizing `f_b + w * 1{b = y}`.
    pub fn maximizers(&self, y: usize, w: f64) -> Vec<usize> {
        let score = |b: usize| self.counts[b] as f64 + if b == y { w } else { 0.0 };
        let max = (0..self.counts.len()).map(score).fold(f64::NEG_INFINITY, f64::max);
        (0..self.counts.len())
            .filter(|&b| (score(b) - max).abs() <= INTEGRALITY_TOL)
            .collect()
    }

    /// All vote vectors with `q` cells and `total` votes.
    pub fn all(q: usize, total: u32) -> Vec<VoteVector> {
        fn rec(cells: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<VoteVector>) {
            if cells == 1 {
                prefix.push(left);
                out.push(VoteVector::new(prefix.clone()));
                prefix.pop();
                return;
            }
            for c in 0..=left {
                prefix.push(c);
                rec(cells - 1, left - c, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(q, total, &mut Vec::with_capacity(q), &mut out);
        out
    }
}

/// Ceilings on the number of tied maxima used by the bounded VN step.
///
/// `a_tilde_0 = f_0 + w` is the score of symbol 0 when the channel says 0;
/// `a_tilde_1 = f_1 + w` the score of the wrong channel symbol otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundTerms {
    pub a_tilde_0: f64,
    pub a_tilde_1: f64,
    /// Most nonzero cells that can tie with `a_tilde_0`.
    pub r_max: usize,
    /// Most cells (symbol 0 included) that can share the count `f_0`.
    pub r_max_prime: usize,
    /// Most cells (symbol 0 included) that can share the count `a_tilde_1`.
    pub r_max_double_prime: usize,
}

impl BoundTerms {
    pub fn new(dv: usize, q: usize, f0: usize, f1: usize, w: f64) -> Self {
        let a0 = f0 as f64 + w;
        let a1 = f1 as f64 + w;
        let ceil_div = |num: usize, den: f64| {
            if den <= 0.0 {
                q - 1
            } else {
                ((num as f64 / den + INTEGRALITY_TOL).floor() as usize).min(q - 1)
            }
        };
        Self {
            a_tilde_0: a0,
            a_tilde_1: a1,
            r_max: ceil_div(dv - 1 - f0, a0),
            r_max_prime: ceil_div(dv - 1 - f1.min(dv - 1), f0 as f64),
            r_max_double_prime: ceil_div(dv - 1, a1),
        }
    }
}

/// Which tie-resolution factors to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ties {
    Exact,
    Upper,
    Lower,
}

/// Precomputed maximum-of-remaining-cells tables for one `(dv, q)`.
#[derive(Debug, Clone)]
pub struct VnStepper {
    dv: usize,
    q: usize,
    /// `cdf[slot][s][t]`: slot 0 has `q-1` cells (channel correct), slot 1
    /// has `q-2` cells (channel wrong).
    cdf: [Vec<Vec<f64>>; 2],
    /// `eq_dist[slot][s][t]`, only for the exact step.
    eq_dist: Option<[Vec<Vec<Vec<f64>>>; 2]>,
}

impl VnStepper {
    fn cells(q: usize, slot: usize) -> usize {
        q - 1 - slot
    }

    fn build_cdf(dv: usize, q: usize) -> [Vec<Vec<f64>>; 2] {
        let s_tot = dv - 1;
        let table = |slot: usize| {
            let k = Self::cells(q, slot);
            (0..=s_tot)
                .map(|s| (0..=s_tot).map(|t| multinomial_max_cdf(k, s, t)).collect())
                .collect()
        };
        [table(0), table(1)]
    }

    /// Stepper for the exact VN update. Fails when the number of vote
    /// compositions exceeds [`EXACT_COMPOSITION_LIMIT`].
    pub fn exact(dv: usize, q: usize) -> Result<Self> {
        check_args(dv, q)?;
        let compositions = composition_count(dv, q);
        if compositions > EXACT_COMPOSITION_LIMIT {
            return Err(Error::Infeasible {
                compositions,
                limit: EXACT_COMPOSITION_LIMIT,
            });
        }
        let s_tot = dv - 1;
        let table = |slot: usize| {
            let k = Self::cells(q, slot);
            (0..=s_tot)
                .map(|s| {
                    (0..=s_tot)
                        .map(|t| {
                            if t == 0 {
                                Vec::new()
                            } else {
                                multinomial_max_eq_count_dist(k, s, t)
                            }
                        })
                        .collect()
                })
                .collect()
        };
        Ok(Self {
            dv,
            q,
            cdf: Self::build_cdf(dv, q),
            eq_dist: Some([table(0), table(1)]),
        })
    }

    /// Stepper for the bounded VN update (`q > 2`).
    pub fn bounded(dv: usize, q: usize) -> Result<Self> {
        check_args(dv, q)?;
        if q <= 2 {
            return Err(Error::InvalidArgument(
                "bounded VN step needs q > 2; use the exact step for q = 2".into(),
            ));
        }
        Ok(Self {
            dv,
            q,
            cdf: Self::build_cdf(dv, q),
            eq_dist: None,
        })
    }

    pub fn dv(&self) -> usize {
        self.dv
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn is_exact(&self) -> bool {
        self.eq_dist.is_some()
    }

    /// `P(max <= t)` over the remaining cells; `t < 0` gives 0.
    fn cdf_at(&self, slot: usize, s: usize, t: isize) -> f64 {
        if t < 0 {
            return if s == 0 && Self::cells(self.q, slot) == 0 { 1.0 } else { 0.0 };
        }
        let t = t as usize;
        if t >= s {
            1.0
        } else {
            self.cdf[slot][s][t]
        }
    }

    fn pmf_at(&self, slot: usize, s: usize, t: usize) -> f64 {
        (self.cdf_at(slot, s, t as isize) - self.cdf_at(slot, s, t as isize - 1)).max(0.0)
    }

    /// Probability that symbol 0 wins against the `s` remaining votes when
    /// its score is the integer `t` and `base_ties` conditioned cells already
    /// tie with it. `factor` replaces the exact tie average in bounded mode.
    fn tie_term(&self, slot: usize, s: usize, t: usize, base_ties: usize, ties: Ties, factor: f64) -> f64 {
        if t > s {
            // the remaining cells cannot reach t
            return 1.0 / (base_ties + 1) as f64;
        }
        match ties {
            Ties::Exact => {
                let dist = &self.eq_dist.as_ref().expect("exact tables")[slot][s][t];
                dist.iter()
                    .enumerate()
                    .map(|(r, &p)| p / (r + base_ties + 1) as f64)
                    .sum()
            }
            _ => {
                let below = self.cdf_at(slot, s, t as isize - 1);
                below / (base_ties + 1) as f64 + self.pmf_at(slot, s, t) * factor
            }
        }
    }

    fn step(&self, xi: f64, epsilon: f64, ties: Ties) -> f64 {
        let (dv, q) = (self.dv, self.q);
        let xi = clamp_xi(q, xi);
        let w = channel_weight(q, epsilon, xi);
        let s_tot = dv - 1;
        let p_wrong = xi / (q as f64 - 1.0);

        // Channel output is the transmitted 0.
        let mut correct = 0.0;
        for f0 in 0..=s_tot {
            let pf = binomial_pmf(s_tot, f0, 1.0 - xi);
            if pf == 0.0 {
                continue;
            }
            let s = s_tot - f0;
            let terms = BoundTerms::new(dv, q, f0, 0, w);
            let win = match integral(terms.a_tilde_0) {
                Some(t) if t > 0 => {
                    let factor = match ties {
                        Ties::Upper => 0.5,
                        _ => 1.0 / (terms.r_max + 1) as f64,
                    };
                    self.tie_term(0, s, t, 0, ties, factor)
                }
                _ => self.cdf_at(0, s, terms.a_tilde_0.floor() as isize),
            };
            correct += pf * win;
        }

        // Channel output is a wrong symbol, taken to be 1.
        let mut wrong = 0.0;
        if epsilon > 0.0 {
            let p0_given_f1 = if q == 2 { 1.0 } else { (1.0 - xi) / (1.0 - p_wrong) };
            for f1 in 0..=s_tot {
                let pf1 = binomial_pmf(s_tot, f1, p_wrong);
                if pf1 == 0.0 {
                    continue;
                }
                let rem = s_tot - f1;
                let a1 = f1 as f64 + w;
                let mut acc = 0.0;
                for f0 in 0..=rem {
                    let pf0 = binomial_pmf(rem, f0, p0_given_f1);
                    if pf0 == 0.0 || f0 == 0 {
                        continue;
                    }
                    let s = rem - f0;
                    let terms = BoundTerms::new(dv, q, f0, f1, w);
                    let tied_with_channel = integral(a1) == Some(f0);
                    let win = if tied_with_channel {
                        let factor = match ties {
                            Ties::Upper => 1.0 / 3.0,
                            _ => 1.0 / (terms.r_max_double_prime + 1) as f64,
                        };
                        self.tie_term(1, s, f0, 1, ties, factor)
                    } else if f0 as f64 > a1 {
                        let factor = match ties {
                            Ties::Upper => 0.5,
                            _ => 1.0 / terms.r_max_prime.max(1) as f64,
                        };
                        self.tie_term(1, s, f0, 0, ties, factor)
                    } else {
                        0.0
                    };
                    acc += pf0 * win;
                }
                wrong += pf1 * acc;
            }
        }
        ((1.0 - epsilon) * correct + epsilon * wrong).clamp(0.0, 1.0)
    }

    /// Exact probability that the outgoing VN message is correct.
    pub fn exact_p0(&self, xi: f64, epsilon: f64) -> f64 {
        assert!(self.is_exact(), "stepper was built for bounded evaluation");
        self.step(xi, epsilon, Ties::Exact)
    }

    /// Lower and upper bounds on the probability that the outgoing VN
    /// message is correct.
    pub fn bounded_p0(&self, xi: f64, epsilon: f64) -> BoundedProb {
        BoundedProb::new(
            self.step(xi, epsilon, Ties::Lower),
            self.step(xi, epsilon, Ties::Upper),
        )
    }

    pub fn lower_p0(&self, xi: f64, epsilon: f64) -> f64 {
        self.step(xi, epsilon, Ties::Lower)
    }

    pub fn upper_p0(&self, xi: f64, epsilon: f64) -> f64 {
        self.step(xi, epsilon, Ties::Upper)
    }
}

fn check_args(dv: usize, q: usize) -> Result<()> {
    if dv < 2 {
        return Err(Error::InvalidArgument(format!("dv = {dv} must be at least 2")));
    }
    if q < 2 || !q.is_power_of_two() {
        return Err(Error::InvalidArgument(format!("q = {q} must be a power of two")));
    }
    Ok(())
}

fn check_probs(xi: f64, epsilon: f64, q: usize) -> Result<()> {
    let top = uniform_error(q);
    if !(0.0..top).contains(&epsilon) {
        return Err(Error::InvalidArgument(format!("epsilon = {epsilon} outside [0, {top})")));
    }
    if !(0.0..=1.0).contains(&xi) {
        return Err(Error::InvalidArgument(format!("xi = {xi} outside [0, 1]")));
    }
    Ok(())
}

/// Exact VN step: probability that a VN-to-CN message is correct given the
/// extrinsic error probability `xi` of the incoming check messages.
pub fn vn_step_exact(xi: f64, epsilon: f64, dv: usize, q: usize) -> Result<f64> {
    check_probs(xi, epsilon, q)?;
    Ok(VnStepper::exact(dv, q)?.exact_p0(xi, epsilon))
}

/// Bounded VN step (`q > 2`): ties with more than one competing maximum are
/// resolved optimistically for the upper bound and with the largest possible
/// number of maxima for the lower bound.
pub fn vn_step_bounded(xi: f64, epsilon: f64, dv: usize, q: usize) -> Result<BoundedProb> {
    check_probs(xi, epsilon, q)?;
    Ok(VnStepper::bounded(dv, q)?.bounded_p0(xi, epsilon))
}

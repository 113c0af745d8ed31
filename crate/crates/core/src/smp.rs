//! Symbol message passing (SMP) decoder.
//!
//! Every message is a single field symbol. Check nodes return the value that
//! satisfies their parity constraint given the other neighbours; variable
//! nodes vote, weighting each check message by `D(xi)` and the channel
//! observation by `D(epsilon)`, and send the highest scoring symbol.
//!
//! Only the ratio `w = D(epsilon)/D(xi)` matters for the argmax, so scores
//! are kept as integer vote counts plus `w` on the channel symbol.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{uniform_error, weight_d};
use crate::code::CodeGraph;
use crate::error::{Error, Result};
use crate::galois::{FieldElem, FieldSpec};

/// Lower clamp for `xi` (and `epsilon` when computing weights).
pub const XI_MIN: f64 = 1e-12;

/// Relative tolerance under which two scores are treated as tied.
pub const TIE_TOL: f64 = 1e-12;

/// Clamps an error probability into `[XI_MIN, (q-1)/q - XI_MIN]`.
pub fn clamp_xi(q: usize, xi: f64) -> f64 {
    xi.clamp(XI_MIN, uniform_error(q) - XI_MIN)
}

/// Ratio `D(epsilon)/D(xi)` after clamping both probabilities.
pub fn channel_weight(q: usize, epsilon: f64, xi: f64) -> f64 {
    let de = weight_d(q, clamp_xi(q, epsilon)).expect("clamped");
    let dx = weight_d(q, clamp_xi(q, xi)).expect("clamped");
    de / dx
}

#[inline]
fn ties(a: f64, max: f64) -> bool {
    (a - max).abs() <= TIE_TOL * max.abs().max(1.0)
}

/// Per-iteration extrinsic error probabilities `xi^(1), xi^(2), ...`.
///
/// Entry `l-1` weights the check messages produced by the `l`-th check
/// node update.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XiSchedule {
    xi_values: Vec<f64>,
}

impl XiSchedule {
    /// Clamps every value into the admissible range for field order `q`.
    pub fn new(q: usize, values: impl IntoIterator<Item = f64>) -> Self {
        Self {
            xi_values: values.into_iter().map(|x| clamp_xi(q, x)).collect(),
        }
    }

    /// A schedule that uses the same `xi` for `len` iterations.
    pub fn constant(q: usize, xi: f64, len: usize) -> Self {
        Self::new(q, std::iter::repeat_n(xi, len))
    }

    pub fn len(&self) -> usize {
        self.xi_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi_values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.xi_values
    }

    /// `xi` for iteration `l` (1-based).
    pub fn get(&self, l: usize) -> f64 {
        self.xi_values[l - 1]
    }

    /// Pads the schedule to `len` entries by repeating its last value.
    pub fn extended_to(mut self, len: usize) -> Self {
        if let Some(&last) = self.xi_values.last() {
            while self.xi_values.len() < len {
                self.xi_values.push(last);
            }
        }
        self
    }
}

/// Aggregated score vector at one variable node, stored sparsely.
///
/// Entry 0 is always the channel symbol; further entries follow the order in
/// which symbols first appear among the incoming messages. Symbols absent
/// from the board score zero.
#[derive(Debug, Clone, Default)]
pub struct ScoreBoard {
    counts: Vec<(FieldElem, u32)>,
    channel_weight: f64,
    xi: f64,
    total: u32,
}

impl ScoreBoard {
    pub fn new() -> Self {
        Self::default()
    }

    /// Resets the board to the channel observation `y` with weight `w`.
    pub fn reset(&mut self, y: FieldElem, w: f64, xi: f64) {
        debug_assert!(w > 0.0);
        self.counts.clear();
        self.counts.push((y, 0));
        self.channel_weight = w;
        self.xi = xi;
        self.total = 0;
    }

    pub fn vote(&mut self, b: FieldElem) {
        self.total += 1;
        match self.counts.iter_mut().find(|(s, _)| *s == b) {
            Some((_, c)) => *c += 1,
            None => self.counts.push((b, 1)),
        }
    }

    pub fn channel_symbol(&self) -> FieldElem {
        self.counts[0].0
    }

    pub fn channel_weight(&self) -> f64 {
        self.channel_weight
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// Number of votes received.
    pub fn total_votes(&self) -> u32 {
        self.total
    }

    pub fn count(&self, b: FieldElem) -> u32 {
        self.counts
            .iter()
            .find(|(s, _)| *s == b)
            .map_or(0, |&(_, c)| c)
    }

    /// Score of `b`, optionally removing one vote for `exclude`.
    pub fn score(&self, b: FieldElem, exclude: Option<FieldElem>) -> f64 {
        let mut f = self.count(b) as f64;
        if exclude == Some(b) {
            f -= 1.0;
        }
        if b == self.channel_symbol() {
            f += self.channel_weight;
        }
        f
    }

    /// The maximizers of the score, in board order.
    pub fn maximizers(&self, exclude: Option<FieldElem>) -> Vec<FieldElem> {
        let scores: Vec<f64> = self.entry_scores(exclude).collect();
        let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        self.counts
            .iter()
            .zip(&scores)
            .filter(|(_, &s)| ties(s, max))
            .map(|(&(b, _), _)| b)
            .collect()
    }

    fn entry_scores(&self, exclude: Option<FieldElem>) -> impl Iterator<Item = f64> + '_ {
        let w = self.channel_weight;
        self.counts.iter().enumerate().map(move |(i, &(b, c))| {
            let mut f = c as f64;
            if exclude == Some(b) {
                f -= 1.0;
            }
            if i == 0 {
                f += w;
            }
            f
        })
    }

    /// Highest-scoring symbol with ties broken uniformly at random.
    ///
    /// With `exclude = Some(b)` one vote for `b` is removed first, which is
    /// how the extrinsic message on the edge that carried `b` is formed.
    pub fn argmax<R: Rng + ?Sized>(&self, exclude: Option<FieldElem>, rng: &mut R) -> FieldElem {
        let mut max = f64::NEG_INFINITY;
        for s in self.entry_scores(exclude) {
            if s > max {
                max = s;
            }
        }
        assert!(max > 0.0, "at least one positive vote is always present");
        let mut n_ties = 0usize;
        let mut first = FieldElem::ZERO;
        for (s, &(b, _)) in self.entry_scores(exclude).zip(&self.counts) {
            if ties(s, max) {
                if n_ties == 0 {
                    first = b;
                }
                n_ties += 1;
            }
        }
        if n_ties == 1 {
            return first;
        }
        let pick = rng.gen_range(0..n_ties);
        self.entry_scores(exclude)
            .zip(&self.counts)
            .filter(|(s, _)| ties(*s, max))
            .nth(pick)
            .map(|(_, &(b, _))| b)
            .expect("pick < n_ties")
    }
}

/// Check node update for every CN of `code`.
///
/// Uses the total `T = sum h*mu` once per CN, so each outgoing message is
/// `h^-1 (T - h*mu)`.
pub fn cn_update(code: &CodeGraph, vn_to_cn: &[FieldElem], cn_to_vn: &mut [FieldElem]) {
    let f = code.field();
    let edges = code.edges();
    let mut weighted = vec![FieldElem::ZERO; code.dc()];
    for c in 0..code.m_checks() {
        let cn_edges = code.cn_edges(c);
        let mut total = FieldElem::ZERO;
        for (slot, &e) in weighted.iter_mut().zip(cn_edges) {
            *slot = f.mul(edges[e as usize].label, vn_to_cn[e as usize]);
            total = f.add(total, *slot);
        }
        for (&hm, &e) in weighted.iter().zip(cn_edges) {
            let h = edges[e as usize].label;
            cn_to_vn[e as usize] = f.mul(f.inv_nonzero(h), f.sub(total, hm));
        }
    }
}

/// Variable node update for one VN.
///
/// `incoming` holds the `dv` check messages, `w` the channel weight ratio.
/// `out[i]` receives the message for the edge that delivered `incoming[i]`.
pub fn vn_update<R: Rng + ?Sized>(
    board: &mut ScoreBoard,
    incoming: &[FieldElem],
    y: FieldElem,
    w: f64,
    xi: f64,
    rng: &mut R,
    out: &mut [FieldElem],
) {
    board.reset(y, w, xi);
    for &m in incoming {
        board.vote(m);
    }
    for (o, &m) in out.iter_mut().zip(incoming) {
        *o = board.argmax(Some(m), rng);
    }
}

/// Final (non-extrinsic) decision at one VN.
pub fn app_decision<R: Rng + ?Sized>(
    board: &mut ScoreBoard,
    incoming: &[FieldElem],
    y: FieldElem,
    w: f64,
    rng: &mut R,
) -> FieldElem {
    board.reset(y, w, f64::NAN);
    for &m in incoming {
        board.vote(m);
    }
    board.argmax(None, rng)
}

/// Residual symbol errors after one iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub symbol_errors: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutput {
    pub word: Vec<FieldElem>,
    /// Populated only when a reference word was supplied.
    pub diagnostics: Vec<IterationRecord>,
}

/// Message buffers for decoding words of one code. Reusable across frames.
#[derive(Debug, Clone)]
pub struct SmpDecoder<'a> {
    code: &'a CodeGraph,
    vn_to_cn: Vec<FieldElem>,
    cn_to_vn: Vec<FieldElem>,
    board: ScoreBoard,
}

impl<'a> SmpDecoder<'a> {
    pub fn new(code: &'a CodeGraph) -> Self {
        Self {
            code,
            vn_to_cn: vec![FieldElem::ZERO; code.num_edges()],
            cn_to_vn: vec![FieldElem::ZERO; code.num_edges()],
            board: ScoreBoard::new(),
        }
    }

    pub fn code(&self) -> &CodeGraph {
        self.code
    }

    /// Runs `l_max` iterations on the received word `y`.
    ///
    /// When `reference` is given, the tentative decision after every
    /// iteration is compared against it and reported in `diagnostics`.
    /// Tentative decisions draw their tie-breaks from a separate stream so
    /// the decoded word does not depend on whether diagnostics are on.
    pub fn decode<R: Rng + ?Sized>(
        &mut self,
        y: &[FieldElem],
        epsilon: f64,
        schedule: &XiSchedule,
        l_max: usize,
        rng: &mut R,
        reference: Option<&[FieldElem]>,
    ) -> Result<DecodeOutput> {
        let code = self.code;
        let (n, dv, q) = (code.n(), code.dv(), code.field().q());
        if y.len() != n {
            return Err(Error::InvalidArgument(format!(
                "received word has length {}, code has n = {n}",
                y.len()
            )));
        }
        if l_max == 0 {
            return Err(Error::InvalidArgument("l_max must be positive".into()));
        }
        if schedule.len() < l_max {
            return Err(Error::ScheduleTooShort {
                have: schedule.len(),
                need: l_max,
            });
        }
        if let Some(r) = reference {
            if r.len() != n {
                return Err(Error::InvalidArgument("reference length differs from n".into()));
            }
        }
        let diag_seed: u64 = rng.gen();
        let mut diag_rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(diag_seed);

        for v in 0..n {
            self.vn_to_cn[v * dv..(v + 1) * dv].fill(y[v]);
        }
        let mut diagnostics = Vec::new();
        let mut word = vec![FieldElem::ZERO; n];
        for l in 1..=l_max {
            cn_update(code, &self.vn_to_cn, &mut self.cn_to_vn);
            let xi = schedule.get(l);
            let w = channel_weight(q, epsilon, xi);
            if let Some(reference) = reference {
                let errors = (0..n)
                    .filter(|&v| {
                        let d = app_decision(
                            &mut self.board,
                            &self.cn_to_vn[v * dv..(v + 1) * dv],
                            y[v],
                            w,
                            &mut diag_rng,
                        );
                        d != reference[v]
                    })
                    .count();
                diagnostics.push(IterationRecord {
                    iteration: l,
                    symbol_errors: errors,
                });
            }
            if l < l_max {
                for v in 0..n {
                    let range = v * dv..(v + 1) * dv;
                    vn_update(
                        &mut self.board,
                        &self.cn_to_vn[range.clone()],
                        y[v],
                        w,
                        xi,
                        rng,
                        &mut self.vn_to_cn[range],
                    );
                }
            } else {
                for (v, out) in word.iter_mut().enumerate() {
                    *out = app_decision(
                        &mut self.board,
                        &self.cn_to_vn[v * dv..(v + 1) * dv],
                        y[v],
                        w,
                        rng,
                    );
                }
            }
        }
        Ok(DecodeOutput { word, diagnostics })
    }

    /// Messages currently on the VN-to-CN side, one per edge.
    pub fn vn_to_cn(&self) -> &[FieldElem] {
        &self.vn_to_cn
    }

    pub fn cn_to_vn(&self) -> &[FieldElem] {
        &self.cn_to_vn
    }
}

/// Convenience wrapper that allocates a decoder for a single word.
pub fn decode<R: Rng + ?Sized>(
    code: &CodeGraph,
    y: &[FieldElem],
    epsilon: f64,
    schedule: &XiSchedule,
    l_max: usize,
    rng: &mut R,
    reference: Option<&[FieldElem]>,
) -> Result<DecodeOutput> {
    SmpDecoder::new(code).decode(y, epsilon, schedule, l_max, rng, reference)
}

/// Naive check node rule for one edge, evaluated directly from the
/// definition. Used as a cross-check.
pub fn cn_message_naive(
    f: &FieldSpec,
    labels: &[FieldElem],
    msgs: &[FieldElem],
    target: usize,
) -> FieldElem {
    let mut acc = FieldElem::ZERO;
    for (i, (&h, &m)) in labels.iter().zip(msgs).enumerate() {
        if i != target {
            acc = f.add(acc, f.mul(h, m));
        }
    }
    f.mul(f.inv_nonzero(labels[target]), acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::Edge;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn gf(q: usize) -> Arc<FieldSpec> {
        Arc::new(FieldSpec::with_order(q).unwrap())
    }

    /// A single CN of degree `dc` attached to `dc` VNs of degree 1 cannot be
    /// built with `CodeGraph` (dv >= 2), so the CN rule is tested on a graph
    /// made of two copies of the same check.
    fn doubled_check(field: Arc<FieldSpec>, labels: &[u16]) -> CodeGraph {
        let dc = labels.len();
        let mut edges = Vec::new();
        for (v, &h) in labels.iter().enumerate() {
            for c in 0..2 {
                edges.push(Edge { vn: v as u32, cn: c, label: FieldElem(h) });
            }
        }
        CodeGraph::from_edges(dc, 2, dc, edges, field).unwrap()
    }

    #[test]
    fn cn_update_xor_example() {
        let code = doubled_check(gf(4), &[1, 1, 1]);
        // VN-major edges: (v0,c0),(v0,c1),(v1,c0),...
        let msgs: Vec<FieldElem> = [2, 2, 2, 2, 0, 0].map(FieldElem).to_vec();
        let mut out = vec![FieldElem::ZERO; 6];
        cn_update(&code, &msgs, &mut out);
        assert_eq!(out, [2, 2, 2, 2, 0, 0].map(FieldElem).to_vec());
    }

    #[test]
    fn cn_update_on_codeword_returns_inputs() {
        let field = gf(8);
        let code = CodeGraph::sample(12, 2, 4, field.clone(), 3).unwrap();
        // Find a nonzero codeword by brute force over GF(8)^12 restricted to a
        // small search: solve each CN greedily is not possible in general, so
        // just use the all-zero word and a scaled version of a found codeword.
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let cw = loop {
            let w: Vec<FieldElem> = (0..12).map(|_| FieldElem(rng.gen_range(0..8))).collect();
            if code.is_codeword(&w) && w.iter().any(|x| !x.is_zero()) {
                break w;
            }
        };
        let msgs: Vec<FieldElem> = code.edges().iter().map(|e| cw[e.vn as usize]).collect();
        let mut out = vec![FieldElem::ZERO; msgs.len()];
        cn_update(&code, &msgs, &mut out);
        assert_eq!(out, msgs);
    }

    #[test]
    fn cn_update_matches_naive_rule() {
        let field = gf(8);
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for trial in 0..1000 {
            let code = CodeGraph::sample(12, 3, 6, field.clone(), trial).unwrap();
            let msgs: Vec<FieldElem> =
                (0..code.num_edges()).map(|_| FieldElem(rng.gen_range(0..8))).collect();
            let mut out = vec![FieldElem::ZERO; msgs.len()];
            cn_update(&code, &msgs, &mut out);
            for c in 0..code.m_checks() {
                let es = code.cn_edges(c);
                let labels: Vec<FieldElem> =
                    es.iter().map(|&e| code.edges()[e as usize].label).collect();
                let m: Vec<FieldElem> = es.iter().map(|&e| msgs[e as usize]).collect();
                for (k, &e) in es.iter().enumerate() {
                    assert_eq!(out[e as usize], cn_message_naive(&field, &labels, &m, k));
                }
            }
        }
    }

    #[test]
    fn unanimous_votes_win() {
        let mut board = ScoreBoard::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let y = FieldElem(5);
        let mut out = [FieldElem::ZERO; 4];
        vn_update(&mut board, &[y; 4], y, 0.7, 0.1, &mut rng, &mut out);
        assert_eq!(out, [y; 4]);
    }

    #[test]
    fn channel_weight_breaks_even_vote() {
        // dv = 3; on the edge carrying alpha^2 the extrinsic votes are {0, alpha}.
        let mut board = ScoreBoard::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let incoming = [FieldElem(0), FieldElem(2), FieldElem(3)];
        board.reset(FieldElem(0), 0.5, 0.2);
        for &m in &incoming {
            board.vote(m);
        }
        assert_eq!(board.score(FieldElem(0), Some(FieldElem(3))), 1.5);
        assert_eq!(board.score(FieldElem(2), Some(FieldElem(3))), 1.0);
        assert_eq!(board.argmax(Some(FieldElem(3)), &mut rng), FieldElem(0));
        assert_eq!(board.total_votes(), 3);
    }

    /// Gallager B for dv = 3: flip the channel bit iff both extrinsic
    /// messages disagree with it.
    fn gallager_b(y: u16, others: [u16; 2]) -> u16 {
        if others[0] != y && others[1] != y {
            1 - y
        } else {
            y
        }
    }

    #[test]
    fn binary_dv3_is_gallager_b() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut board = ScoreBoard::new();
        for w in [1.01, 1.5, 1.99] {
            for pattern in 0..8u16 {
                let y = pattern & 1;
                let inc = [FieldElem((pattern >> 1) & 1), FieldElem((pattern >> 2) & 1), FieldElem(y)];
                let mut out = [FieldElem::ZERO; 3];
                vn_update(&mut board, &inc, FieldElem(y), w, 0.1, &mut rng, &mut out);
                for k in 0..3 {
                    let others: Vec<u16> =
                        (0..3).filter(|&j| j != k).map(|j| inc[j].value()).collect();
                    assert_eq!(out[k].value(), gallager_b(y, [others[0], others[1]]));
                }
            }
        }
    }

    #[test]
    fn ties_are_broken_uniformly() {
        // y = 0 with weight 1, extrinsic votes {1}: scores 1 vs 1.
        let mut board = ScoreBoard::new();
        board.reset(FieldElem(0), 1.0, 0.1);
        board.vote(FieldElem(1));
        board.vote(FieldElem(3));
        assert_eq!(board.maximizers(Some(FieldElem(3))), vec![FieldElem(0), FieldElem(1)]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let trials = 20_000;
        let zeros = (0..trials)
            .filter(|_| board.argmax(Some(FieldElem(3)), &mut rng) == FieldElem(0))
            .count();
        let frac = zeros as f64 / trials as f64;
        assert!((frac - 0.5).abs() < 0.02, "{frac}");
    }

    #[test]
    fn argmax_invariant_under_scaling() {
        // Scaling every score by c > 0 is the same as scaling counts and w;
        // integer counts cannot be scaled, so check the maximizer set against
        // dense scores multiplied by a constant.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let mut board = ScoreBoard::new();
            let y = FieldElem(rng.gen_range(0..4));
            let w = rng.gen_range(0.05..3.0);
            board.reset(y, w, 0.1);
            let inc: Vec<FieldElem> = (0..5).map(|_| FieldElem(rng.gen_range(0..4))).collect();
            for &m in &inc {
                board.vote(m);
            }
            let c = rng.gen_range(0.1..50.0);
            let dense: Vec<f64> = (0..4)
                .map(|b| c * board.score(FieldElem(b), Some(inc[0])))
                .collect();
            let max = dense.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mut expected: Vec<FieldElem> = (0..4u16)
                .filter(|&b| (dense[b as usize] - max).abs() <= 1e-9 * max)
                .map(FieldElem)
                .collect();
            let mut got = board.maximizers(Some(inc[0]));
            expected.sort();
            got.sort();
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn schedule_padding_and_clamping() {
        let s = XiSchedule::new(4, [0.3, 0.0, 0.9]);
        assert_eq!(s.get(1), 0.3);
        assert_eq!(s.get(2), XI_MIN);
        assert!(s.get(3) < 0.75);
        let s = s.extended_to(10);
        assert_eq!(s.len(), 10);
        assert_eq!(s.get(10), s.get(3));
    }

    #[test]
    fn noiseless_codeword_is_fixed_point() {
        let field = gf(4);
        let code = CodeGraph::sample(60, 3, 6, field.clone(), 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let cw = vec![FieldElem::ZERO; 60];
        let sched = XiSchedule::constant(4, 0.1, 10);
        let out = decode(&code, &cw, 0.0, &sched, 10, &mut rng, Some(&cw)).unwrap();
        assert_eq!(out.word, cw);
        assert_eq!(out.diagnostics.len(), 10);
        assert!(out.diagnostics.iter().all(|d| d.symbol_errors == 0));
    }

    #[test]
    fn decode_errors() {
        let code = CodeGraph::sample(60, 3, 6, gf(4), 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let y = vec![FieldElem::ZERO; 60];
        let sched = XiSchedule::constant(4, 0.1, 5);
        assert_eq!(
            decode(&code, &y, 0.1, &sched, 6, &mut rng, None),
            Err(Error::ScheduleTooShort { have: 5, need: 6 })
        );
        assert!(decode(&code, &y[..59], 0.1, &sched, 5, &mut rng, None).is_err());
    }

    #[test]
    fn decode_is_deterministic_and_independent_of_diagnostics() {
        let field = gf(8);
        let code = CodeGraph::sample(600, 3, 6, field, 9).unwrap();
        let ch = crate::channel::ChannelParams::new(8, 0.08).unwrap();
        let zero = vec![FieldElem::ZERO; 600];
        let y = ch.transmit(&zero, &mut ChaCha8Rng::seed_from_u64(4));
        let sched = XiSchedule::constant(8, 0.05, 30);
        let a = decode(&code, &y, 0.08, &sched, 30, &mut ChaCha8Rng::seed_from_u64(1), None).unwrap();
        let b = decode(&code, &y, 0.08, &sched, 30, &mut ChaCha8Rng::seed_from_u64(1), Some(&zero)).unwrap();
        assert_eq!(a.word, b.word);
        assert!(a.diagnostics.is_empty());
        assert_eq!(b.diagnostics.len(), 30);
    }

    #[test]
    fn extrinsic_outputs_ignore_own_edge() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut board = ScoreBoard::new();
        for _ in 0..5000 {
            let dv = rng.gen_range(2..6);
            let y = FieldElem(rng.gen_range(0..8));
            let w = rng.gen_range(0.1..2.5) + 1e-3;
            let inc: Vec<FieldElem> = (0..dv).map(|_| FieldElem(rng.gen_range(0..8))).collect();
            let k = rng.gen_range(0..dv);
            let mut changed = inc.clone();
            changed[k] = FieldElem(rng.gen_range(0..8));
            // Same tie-break stream for both runs; compare maximizer sets so the
            // check does not depend on how many draws earlier edges consumed.
            board.reset(y, w, 0.1);
            inc.iter().for_each(|&m| board.vote(m));
            let before = board.maximizers(Some(inc[k]));
            board.reset(y, w, 0.1);
            changed.iter().for_each(|&m| board.vote(m));
            let after = board.maximizers(Some(changed[k]));
            let mut a = before.clone();
            let mut b = after.clone();
            a.sort();
            b.sort();
            assert_eq!(a, b);
        }
    }
}

//! Labeled regular Tanner graphs drawn from the configuration-model ensemble.
//!
//! Edges are stored VN-major: the `dv` edges of VN `v` occupy indices
//! `v*dv .. (v+1)*dv`. Each CN keeps the list of its `dc` edge indices.

use std::collections::HashSet;
use std::io::{BufRead, Write};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::galois::{FieldElem, FieldSpec};

/// Number of fresh permutations tried before giving up on a simple graph.
const MAX_RESAMPLES: u64 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub vn: u32,
    pub cn: u32,
    pub label: FieldElem,
}

#[derive(Debug, Clone)]
pub struct CodeGraph {
    n: usize,
    m_checks: usize,
    dv: usize,
    dc: usize,
    edges: Vec<Edge>,
    /// `cn_edges[c*dc .. (c+1)*dc]` are the edge indices at CN `c`.
    cn_edges: Vec<u32>,
    field: Arc<FieldSpec>,
}

impl PartialEq for CodeGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.m_checks == other.m_checks
            && self.dv == other.dv
            && self.dc == other.dc
            && self.field.q() == other.field.q()
            && self.edges == other.edges
            && self.cn_edges == other.cn_edges
    }
}

/// Checks the degree constraints shared by sampling and the CLI.
pub fn validate_ensemble(n: usize, dv: usize, dc: usize) -> Result<()> {
    if dv < 2 {
        return Err(Error::InvalidEnsemble(format!("dv = {dv} must be at least 2")));
    }
    if dc <= dv {
        return Err(Error::InvalidEnsemble(format!(
            "dc = {dc} must exceed dv = {dv}"
        )));
    }
    if n == 0 || !(n * dv).is_multiple_of(dc) {
        return Err(Error::InvalidEnsemble(format!(
            "n*dv = {} is not a positive multiple of dc = {dc}",
            n * dv
        )));
    }
    Ok(())
}

impl CodeGraph {
    /// Samples a code from the `(dv, dc)` regular ensemble over `field`.
    ///
    /// The socket matching is a uniform permutation; parallel edges are then
    /// removed by random swaps of CN sockets. Labels are i.i.d. uniform over
    /// the nonzero field elements. The result depends only on the arguments.
    pub fn sample(n: usize, dv: usize, dc: usize, field: Arc<FieldSpec>, seed: u64) -> Result<Self> {
        validate_ensemble(n, dv, dc)?;
        for attempt in 0..MAX_RESAMPLES {
            let derived = seed ^ attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
            let mut rng = ChaCha8Rng::seed_from_u64(derived);
            if let Some(cn_of_edge) = sample_simple_matching(n, dv, dc, &mut rng) {
                let q = field.q();
                let edges = cn_of_edge
                    .iter()
                    .enumerate()
                    .map(|(e, &cn)| Edge {
                        vn: (e / dv) as u32,
                        cn,
                        label: FieldElem(rng.gen_range(1..q) as u16),
                    })
                    .collect();
                return Self::from_edges(n, dv, dc, edges, field);
            }
        }
        Err(Error::RepairFailed(MAX_RESAMPLES as usize))
    }

    /// Assembles a graph from a VN-major edge list and validates it.
    pub fn from_edges(
        n: usize,
        dv: usize,
        dc: usize,
        edges: Vec<Edge>,
        field: Arc<FieldSpec>,
    ) -> Result<Self> {
        if dc == 0 || !(n * dv).is_multiple_of(dc) {
            return Err(Error::InvalidEnsemble(format!(
                "n*dv = {} is not a multiple of dc = {dc}",
                n * dv
            )));
        }
        let m_checks = n * dv / dc;
        if edges.len() != n * dv {
            return Err(Error::InvalidEnsemble(format!(
                "expected {} edges, found {}",
                n * dv,
                edges.len()
            )));
        }
        let mut fill = vec![0usize; m_checks];
        let mut cn_edges = vec![0u32; m_checks * dc];
        for (e, edge) in edges.iter().enumerate() {
            if edge.vn as usize != e / dv {
                return Err(Error::InvalidEnsemble(format!(
                    "edge {e} is not in VN-major order"
                )));
            }
            let c = edge.cn as usize;
            if c >= m_checks {
                return Err(Error::InvalidEnsemble(format!("CN index {c} out of range")));
            }
            if edge.label.is_zero() || edge.label.value() as usize >= field.q() {
                return Err(Error::InvalidEnsemble(format!(
                    "edge {e} has invalid label {}",
                    edge.label
                )));
            }
            if fill[c] == dc {
                return Err(Error::InvalidEnsemble(format!("CN {c} exceeds degree {dc}")));
            }
            cn_edges[c * dc + fill[c]] = e as u32;
            fill[c] += 1;
        }
        if let Some(c) = fill.iter().position(|&d| d != dc) {
            return Err(Error::InvalidEnsemble(format!(
                "CN {c} has degree {} instead of {dc}",
                fill[c]
            )));
        }
        Ok(Self {
            n,
            m_checks,
            dv,
            dc,
            edges,
            cn_edges,
            field,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m_checks(&self) -> usize {
        self.m_checks
    }

    pub fn dv(&self) -> usize {
        self.dv
    }

    pub fn dc(&self) -> usize {
        self.dc
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn design_rate(&self) -> f64 {
        1.0 - self.dv as f64 / self.dc as f64
    }

    /// Edge indices incident to VN `v`.
    pub fn vn_edges(&self, v: usize) -> std::ops::Range<usize> {
        v * self.dv..(v + 1) * self.dv
    }

    /// Edge indices incident to CN `c`.
    pub fn cn_edges(&self, c: usize) -> &[u32] {
        &self.cn_edges[c * self.dc..(c + 1) * self.dc]
    }

    /// `true` when some VN connects to the same CN twice.
    pub fn has_parallel_edges(&self) -> bool {
        (0..self.n).any(|v| {
            let cns: Vec<u32> = self.vn_edges(v).map(|e| self.edges[e].cn).collect();
            let set: HashSet<u32> = cns.iter().copied().collect();
            set.len() != cns.len()
        })
    }

    /// Parity-check values `sum_v h_{v,c} x_v` for every CN.
    pub fn syndrome(&self, word: &[FieldElem]) -> Vec<FieldElem> {
        let f = &*self.field;
        (0..self.m_checks)
            .map(|c| {
                self.cn_edges(c).iter().fold(FieldElem::ZERO, |acc, &e| {
                    let edge = &self.edges[e as usize];
                    f.add(acc, f.mul(edge.label, word[edge.vn as usize]))
                })
            })
            .collect()
    }

    pub fn is_codeword(&self, word: &[FieldElem]) -> bool {
        word.len() == self.n && self.syndrome(word).iter().all(|s| s.is_zero())
    }

    /// Writes the labeled-alist text format.
    ///
    /// Header `n m_checks dv dc q`, then one line per VN listing
    /// `cn:label` pairs with 1-based CN indices.
    pub fn save<W: Write>(&self, mut sink: W) -> Result<()> {
        writeln!(
            sink,
            "{} {} {} {} {}",
            self.n,
            self.m_checks,
            self.dv,
            self.dc,
            self.field.q()
        )?;
        let mut line = String::new();
        for v in 0..self.n {
            line.clear();
            for (k, e) in self.vn_edges(v).enumerate() {
                let edge = &self.edges[e];
                if k > 0 {
                    line.push(' ');
                }
                line.push_str(&format!("{}:{}", edge.cn + 1, edge.label));
            }
            writeln!(sink, "{line}")?;
        }
        sink.flush()?;
        Ok(())
    }

    /// Parses the labeled-alist format, checking degrees, labels and that
    /// the header's field order matches `field`.
    pub fn load<R: BufRead>(source: R, field: Arc<FieldSpec>) -> Result<Self> {
        let mut lines = source.lines().enumerate().filter_map(|(i, l)| match l {
            Ok(l) if l.trim().is_empty() => None,
            other => Some((i + 1, other)),
        });
        let parse_err = |line: usize, msg: String| Error::Parse { line, msg };

        let (hline, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "missing header".into()))?;
        let header = header?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| parse_err(hline, format!("bad header: {e}")))?;
        let [n, m_checks, dv, dc, q] = nums[..] else {
            return Err(parse_err(hline, "header must be `n m_checks dv dc q`".into()));
        };
        if q != field.q() {
            return Err(parse_err(
                hline,
                format!("file is over GF({q}) but GF({}) was supplied", field.q()),
            ));
        }
        if dc == 0 || n * dv != m_checks * dc {
            return Err(parse_err(hline, "n*dv must equal m_checks*dc".into()));
        }

        let mut edges = Vec::with_capacity(n * dv);
        for v in 0..n {
            let (lno, line) = lines
                .next()
                .ok_or_else(|| parse_err(hline + v + 1, format!("missing line for VN {}", v + 1)))?;
            let line = line?;
            let mut degree = 0;
            for tok in line.split_whitespace() {
                let (c, h) = tok
                    .split_once(':')
                    .ok_or_else(|| parse_err(lno, format!("expected cn:label, got `{tok}`")))?;
                let c: usize = c
                    .parse()
                    .map_err(|e| parse_err(lno, format!("bad CN index `{c}`: {e}")))?;
                let h: usize = h
                    .parse()
                    .map_err(|e| parse_err(lno, format!("bad label `{h}`: {e}")))?;
                if c == 0 || c > m_checks {
                    return Err(parse_err(lno, format!("CN index {c} outside 1..={m_checks}")));
                }
                if h == 0 || h >= q {
                    return Err(parse_err(lno, format!("label {h} outside 1..{q}")));
                }
                edges.push(Edge {
                    vn: v as u32,
                    cn: (c - 1) as u32,
                    label: FieldElem(h as u16),
                });
                degree += 1;
            }
            if degree != dv {
                return Err(parse_err(
                    lno,
                    format!("VN {} has degree {degree}, expected {dv}", v + 1),
                ));
            }
        }
        if let Some((lno, _)) = lines.next() {
            return Err(parse_err(lno, "trailing data after last VN".into()));
        }
        Self::from_edges(n, dv, dc, edges, field)
    }
}

/// Draws a uniform socket permutation and swap-repairs parallel edges.
/// Returns the CN of every (VN-major) edge, or `None` when the swap budget
/// runs out.
fn sample_simple_matching(n: usize, dv: usize, dc: usize, rng: &mut ChaCha8Rng) -> Option<Vec<u32>> {
    let num_edges = n * dv;
    let mut sockets: Vec<u32> = (0..num_edges as u32).collect();
    sockets.shuffle(rng);
    let mut cn: Vec<u32> = sockets.iter().map(|&s| s / dc as u32).collect();

    let conflicts = |cn: &[u32], v: usize, c: u32, skip: usize| {
        (v * dv..(v + 1) * dv).any(|e| e != skip && cn[e] == c)
    };

    let budget = 100 * num_edges + 1000;
    let mut spent = 0;
    loop {
        let bad: Vec<usize> = (0..num_edges)
            .filter(|&e| conflicts(&cn, e / dv, cn[e], e))
            .collect();
        if bad.is_empty() {
            return Some(cn);
        }
        for e1 in bad {
            let v1 = e1 / dv;
            if !conflicts(&cn, v1, cn[e1], e1) {
                continue;
            }
            loop {
                if spent >= budget {
                    return None;
                }
                spent += 1;
                let e2 = rng.gen_range(0..num_edges);
                let v2 = e2 / dv;
                if v2 == v1 {
                    continue;
                }
                let (c1, c2) = (cn[e1], cn[e2]);
                if c1 == c2 || conflicts(&cn, v1, c2, e1) || conflicts(&cn, v2, c1, e2) {
                    continue;
                }
                cn.swap(e1, e2);
                break;
            }
        }
    }
}

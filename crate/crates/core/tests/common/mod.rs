//! Independent oracles shared by integration tests.

#![allow(dead_code)]

use smp_core::smp::channel_weight;

/// Probability that a VN output is correct, by enumerating every channel
/// output, every sequence of `dv - 1` check messages and averaging over the
/// tie set.
pub fn brute_force_vn(xi: f64, eps: f64, dv: usize, q: usize) -> f64 {
    let w = channel_weight(q, eps, xi);
    let s = dv - 1;
    let mut total = 0.0;
    for y in 0..q {
        let py = if y == 0 { 1.0 - eps } else { eps / (q as f64 - 1.0) };
        for code in 0..q.pow(s as u32) {
            let mut c = code;
            let mut counts = vec![0.0f64; q];
            let mut p = py;
            for _ in 0..s {
                let m = c % q;
                c /= q;
                counts[m] += 1.0;
                p *= if m == 0 { 1.0 - xi } else { xi / (q as f64 - 1.0) };
            }
            counts[y] += w;
            let max = counts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let ties: Vec<usize> = (0..q).filter(|&b| (counts[b] - max).abs() < 1e-9).collect();
            if ties.contains(&0) {
                total += p / ties.len() as f64;
            }
        }
    }
    total
}

/// Closed-form Gallager B density evolution on the BSC. Returns the
/// probability that a VN-to-CN message is correct after each iteration,
/// using the flip threshold implied by the weight ratio.
pub fn gallager_b_trace(dv: usize, dc: usize, eps: f64, iters: usize) -> Vec<f64> {
    let choose = |n: usize, k: usize| -> f64 { (0..k).fold(1.0, |a, i| a * (n - i) as f64 / (i + 1) as f64) };
    let ln_ratio = |p: f64| ((1.0 - p) / p).ln();
    let clamp = |p: f64| p.clamp(1e-12, 0.5 - 1e-12);
    let mut p_err = eps;
    let mut out = Vec::new();
    for _ in 0..iters {
        let xi = (1.0 - (1.0 - 2.0 * p_err).powi(dc as i32 - 1)) / 2.0;
        let w = ln_ratio(clamp(eps)) / ln_ratio(clamp(xi));
        // flip iff at least b of the dv-1 checks disagree with the channel
        let b = (0..dv).find(|&j| 2.0 * j as f64 - (dv - 1) as f64 > w).unwrap_or(dv);
        let tail = |p: f64| -> f64 {
            (b..dv).map(|j| choose(dv - 1, j) * p.powi(j as i32) * (1.0 - p).powi((dv - 1 - j) as i32)).sum()
        };
        let xi_c = xi.clamp(1e-12, 0.5 - 1e-12);
        p_err = eps * (1.0 - tail(1.0 - xi_c)) + (1.0 - eps) * tail(xi_c);
        out.push(1.0 - p_err);
    }
    out
}

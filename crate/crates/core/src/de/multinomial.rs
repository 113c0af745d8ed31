//! Distribution of the largest cell of a symmetric multinomial.
//!
//! `s` balls are thrown independently and uniformly into `k` cells. Both
//! functions work with truncated exponential generating functions: the
//! number of assignments in which every cell holds at most `t` balls is
//! `s! [x^s] (sum_{i<=t} x^i/i!)^k`. Powers are taken by repeated squaring
//! with the series truncated at degree `s`, and `x` is pre-scaled by `1/k`
//! so the coefficients are probabilities rather than counts.

/// `ln(n!)` for small `n` by direct summation, otherwise Stirling.
pub fn ln_factorial(n: usize) -> f64 {
    if n < 256 {
        (2..=n).map(|i| (i as f64).ln()).sum()
    } else {
        let x = n as f64 + 1.0;
        // Stirling series for ln Gamma(x)
        (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x)
            - 1.0 / (360.0 * x.powi(3))
            + 1.0 / (1260.0 * x.powi(5))
    }
}

/// Binomial coefficient as a float; exact for the small arguments used here.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    if n <= 1000 {
        let mut acc = 1.0f64;
        for i in 0..k {
            acc = acc * (n - i) as f64 / (i + 1) as f64;
        }
        // snap accumulated rounding noise while integers are exact
        if acc < 9.0e15 {
            acc.round()
        } else {
            acc
        }
    } else {
        (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)).exp()
    }
}

/// `P(X = j)` for `X ~ Binomial(n, p)`.
pub fn binomial_pmf(n: usize, j: usize, p: f64) -> f64 {
    if j > n {
        return 0.0;
    }
    binomial(n, j) * p.powi(j as i32) * (1.0 - p).powi((n - j) as i32)
}

fn mul_trunc(a: &[f64], b: &[f64], deg: usize) -> Vec<f64> {
    let mut out = vec![0.0; deg + 1];
    for (i, &ai) in a.iter().enumerate().take(deg + 1) {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(deg + 1 - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn pow_trunc(base: &[f64], mut exp: usize, deg: usize) -> Vec<f64> {
    let mut result = vec![0.0; deg + 1];
    result[0] = 1.0;
    let mut b: Vec<f64> = base.iter().copied().take(deg + 1).collect();
    b.resize(deg + 1, 0.0);
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_trunc(&result, &b, deg);
        }
        exp >>= 1;
        if exp > 0 {
            b = mul_trunc(&b, &b, deg);
        }
    }
    result
}

/// `sum_{i<=cap} (x/k)^i / i!`, truncated at degree `deg`.
fn scaled_exp_series(k: usize, cap: usize, deg: usize) -> Vec<f64> {
    let top = cap.min(deg);
    let mut v = vec![0.0; deg + 1];
    let mut term = 1.0;
    for (i, slot) in v.iter_mut().enumerate().take(top + 1) {
        if i > 0 {
            term /= k as f64 * i as f64;
        }
        *slot = term;
    }
    v
}

fn factorial(s: usize) -> f64 {
    (1..=s).fold(1.0, |acc, i| acc * i as f64)
}

/// `P(max cell count <= t)` for `s` balls in `k` uniform cells.
pub fn multinomial_max_cdf(k: usize, s: usize, t: usize) -> f64 {
    if s == 0 || t >= s {
        return 1.0;
    }
    if k == 0 || k * t < s {
        return 0.0;
    }
    let series = scaled_exp_series(k, t, s);
    let p = pow_trunc(&series, k, s);
    (factorial(s) * p[s]).clamp(0.0, 1.0)
}

/// `P(max cell count == t)`.
pub fn multinomial_max_pmf(k: usize, s: usize, t: usize) -> f64 {
    let below = if t == 0 {
        0.0
    } else {
        multinomial_max_cdf(k, s, t - 1)
    };
    (multinomial_max_cdf(k, s, t) - below).max(0.0)
}

/// Joint law of the maximum being `t` and the number of cells attaining it.
///
/// Entry `r` of the result is the probability that exactly `r` cells hold
/// `t` balls and every other cell holds fewer. Entry 0 is
/// `P(max < t)`; the entries sum to `P(max <= t)`.
///
/// With `k = 0` cells the only outcome is the empty one (`s` must be 0).
pub fn multinomial_max_eq_count_dist(k: usize, s: usize, t: usize) -> Vec<f64> {
    let r_cap = if t == 0 { k } else { k.min(s / t) };
    let mut dist = vec![0.0; r_cap + 1];
    if t == 0 {
        // Every cell is either 0 (== t) or impossible; only s = 0 works.
        if s == 0 {
            dist[k] = 1.0;
        }
        return dist;
    }
    let s_fact = factorial(s);
    // (1/(k^t t!))^r
    let cell_term = 1.0 / ((k as f64).powi(t as i32) * factorial(t));
    for (r, slot) in dist.iter_mut().enumerate() {
        let rest = s - r * t;
        let others = k - r;
        let coef = if others == 0 {
            if rest == 0 {
                1.0
            } else {
                0.0
            }
        } else {
            let series = scaled_exp_series(k, t - 1, rest);
            pow_trunc(&series, others, rest)[rest]
        };
        *slot = (binomial(k, r) * s_fact * cell_term.powi(r as i32) * coef).max(0.0);
    }
    dist
}

//! Probability utilities: tail bounds, the Poisson mode inequality,
//! hypergeometric moments, and the test statistics the experiment harness
//! and the acceptance suite rely on (chi-square p-values, Wilson
//! intervals, total-variation distance).

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StatsError {
    #[error("negative input")]
    NegativeInput,
    #[error("invalid argument: {0}")]
    Invalid(String),
}

/// Bernoulli-sum tail bounds for mean `mu` and deviation `t`:
/// upper tail `exp(-t^2 / (2(mu + t/3)))`, lower tail `exp(-t^2 / (2mu))`.
/// Conventions at `mu = 0`: the lower bound is 1 for `t = 0` and 0 for
/// `t > 0`.
pub fn chernoff_bounds(mu: f64, t: f64) -> Result<(f64, f64), StatsError> {
    if mu < 0.0 || t < 0.0 || mu.is_nan() || t.is_nan() {
        return Err(StatsError::NegativeInput);
    }
    if t == 0.0 {
        return Ok((1.0, 1.0));
    }
    let upper = (-t * t / (2.0 * (mu + t / 3.0))).exp();
    let lower = if mu == 0.0 { 0.0 } else { (-t * t / (2.0 * mu)).exp() };
    Ok((upper, lower))
}

/// P(Poisson(mu) = k).
pub fn poisson_pmf(mu: f64, k: u64) -> f64 {
    if mu == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    (k as f64 * mu.ln() - mu - ln_gamma(k as f64 + 1.0)).exp()
}

/// The mode lower bound: P(Poisson(mu) = floor(mu)) >= (1/2) / ceil(sqrt(8 mu)).
pub fn poisson_mode_lower_bound(mu: f64) -> f64 {
    0.5 / (8.0 * mu).sqrt().ceil()
}

/// Lanczos approximation of ln Γ(x), x > 0. Accurate to ~1e-13.
pub fn ln_gamma(x: f64) -> f64 {
    const G: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection
        return std::f64::consts::PI.ln()
            - (std::f64::consts::PI * x).sin().ln()
            - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = G[0];
    let t = x + 7.5;
    for (i, &g) in G.iter().enumerate().skip(1) {
        a += g / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Regularized lower incomplete gamma P(a, x).
pub fn gamma_p(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        gamma_p_series(a, x)
    } else {
        1.0 - gamma_q_cf(a, x)
    }
}

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
pub fn gamma_q(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - gamma_p_series(a, x)
    } else {
        gamma_q_cf(a, x)
    }
}

fn gamma_p_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut n = a;
    for _ in 0..500 {
        n += 1.0;
        term *= x / n;
        sum += term;
        if term.abs() < sum.abs() * 1e-16 {
            break;
        }
    }
    sum * (-x + a * x.ln() - ln_gamma(a)).exp()
}

fn gamma_q_cf(a: f64, x: f64) -> f64 {
    // modified Lentz continued fraction
    let tiny = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h * (-x + a * x.ln() - ln_gamma(a)).exp()
}

/// Survival function of the chi-square distribution with `dof` degrees of
/// freedom: P(X >= x).
pub fn chi_square_sf(x: f64, dof: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    gamma_q(dof / 2.0, x / 2.0)
}

/// Pearson statistic for observed counts against expected counts.
pub fn chi_square_statistic(observed: &[u64], expected: &[f64]) -> f64 {
    assert_eq!(observed.len(), expected.len());
    observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| {
            let d = o as f64 - e;
            d * d / e
        })
        .sum()
}

/// Goodness-of-fit test against given cell probabilities; returns
/// (statistic, p-value) with `cells - 1` degrees of freedom.
pub fn chi_square_gof(observed: &[u64], probs: &[f64]) -> (f64, f64) {
    let n: u64 = observed.iter().sum();
    let expected: Vec<f64> = probs.iter().map(|p| p * n as f64).collect();
    let stat = chi_square_statistic(observed, &expected);
    let p = chi_square_sf(stat, observed.len() as f64 - 1.0);
    (stat, p)
}

/// Two-sample chi-square over shared cells; returns (statistic, p-value).
pub fn chi_square_two_sample(a: &[u64], b: &[u64]) -> (f64, f64) {
    assert_eq!(a.len(), b.len());
    let na: u64 = a.iter().sum();
    let nb: u64 = b.iter().sum();
    let mut stat = 0.0;
    let mut cells = 0usize;
    let (ka, kb) = ((nb as f64 / na as f64).sqrt(), (na as f64 / nb as f64).sqrt());
    for (&x, &y) in a.iter().zip(b) {
        if x + y == 0 {
            continue;
        }
        cells += 1;
        let d = ka * x as f64 - kb * y as f64;
        stat += d * d / (x + y) as f64;
    }
    let p = chi_square_sf(stat, cells as f64 - 1.0);
    (stat, p)
}

/// Mean of Hyp(g, a, r): a*r/g.
pub fn hypergeometric_mean(g: u64, a: u64, r: u64) -> f64 {
    a as f64 * r as f64 / g as f64
}

/// Variance of Hyp(g, a, r).
pub fn hypergeometric_var(g: u64, a: u64, r: u64) -> f64 {
    if g <= 1 {
        return 0.0;
    }
    let (g, a, r) = (g as f64, a as f64, r as f64);
    r * (a / g) * (1.0 - a / g) * (g - r) / (g - 1.0)
}

/// P(Binomial(n, p) = k).
pub fn binomial_pmf(n: u64, p: f64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    if p == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p == 1.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    let ln_c = ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0);
    (ln_c + k as f64 * p.ln() + (n - k) as f64 * (1.0 - p).ln()).exp()
}

/// P(Binomial(n, p) > m).
pub fn binomial_tail_gt(n: u64, p: f64, m: u64) -> f64 {
    (m + 1..=n).map(|k| binomial_pmf(n, p, k)).sum()
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Total-variation distance between an empirical distribution (counts) and
/// reference probabilities over the same cells.
pub fn tv_distance(counts: &[u64], probs: &[f64]) -> f64 {
    assert_eq!(counts.len(), probs.len());
    let n: u64 = counts.iter().sum();
    0.5 * counts
        .iter()
        .zip(probs)
        .map(|(&c, &p)| (c as f64 / n as f64 - p).abs())
        .sum::<f64>()
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

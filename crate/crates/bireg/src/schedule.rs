//! The coupling schedule: balance indicator, `tau0`, `t0`, `gamma_t`,
//! `delta(t)`, `lambda(t)`, `theta`, `gamma`, `m`, the complement-side
//! counterparts, and the feasibility checks behind them.
//!
//! The theorem's constants make every feasibility assumption fail below
//! astronomically large `N`, so each literal constant in the `tau0`,
//! `gamma_t` and `delta(t)` definitions is a named, overridable field;
//! overriding them is how the coupling is exercised at desk scale.
//! Quantities that must be exact (`tau`, `t0`, `m`, `m_bar`, threshold
//! comparisons) are computed in exact rational arithmetic; floating point
//! enters only where the formulas involve logs and roots.

use crate::numeric::{cmp_with_ln, ln_u128, rational_from_f64, ratio_u128};
use crate::params::BiregularParams;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use thiserror::Error;

pub use crate::stats::chernoff_bounds;

#[derive(Debug, Error, PartialEq)]
pub enum ScheduleError {
    #[error("assumptions infeasible: {0:?} failed")]
    InfeasibleAssumptions(Vec<String>),
    #[error("invalid override: {0}")]
    InvalidOverride(String),
    #[error("t out of range: {0} > {1}")]
    OutOfRange(u128, u128),
    #[error("schedule undefined: {0}")]
    Undefined(String),
}

/// Every literal constant of the schedule formulas, overridable one by
/// one. Defaults are the paper values. The `*_indicator` fields multiply
/// the `p_hat^2 * I` terms; the `*_sparse`/`*_dense` fields multiply the
/// log terms on the two sides of the `p_split` case split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScheduleConstants {
    /// Coefficient of `(C+4) log N / (p n_hat)` in `tau0`, sparse side.
    pub tau0_sparse: f64,
    /// Coefficient of `(3(C+4))^{1/4} (q^{3/2} I + (log N / n_hat)^{1/4})`
    /// in `tau0`, dense side.
    pub tau0_dense: f64,
    /// Coefficient of `p_hat^2 I` in `gamma_t`.
    pub gamma_t_indicator: f64,
    /// Coefficient of `sqrt(2 (C+3) log N / (tau p n_hat))`, sparse side.
    pub gamma_t_sparse: f64,
    /// Coefficient of `sqrt((C+3) log N / (tau^2 q^2 n_hat))`, dense side.
    pub gamma_t_dense: f64,
    /// Coefficient of `p_hat^2 I` in `delta(t)`.
    pub delta_indicator: f64,
    /// Coefficient of `sqrt((C+3) lambda(t) / (6 tau p q n_hat))`.
    pub delta_sqrt: f64,
    /// The case split, by default 0.49 (any constant below 1/2 works).
    pub p_split: f64,
    /// Replacement for the balance-indicator smallness threshold
    /// `(49/51) / (340^2 (C+4)^{1/6})`; exposed independently of the other
    /// constants because it interacts with the override mode.
    pub indicator_bound: Option<f64>,
    /// Direct override of `gamma` (otherwise computed from `C*`).
    pub gamma: Option<f64>,
}

impl Default for ScheduleConstants {
    fn default() -> Self {
        ScheduleConstants {
            tau0_sparse: 3.0 * 3240.0 * 3240.0,
            tau0_dense: 700.0,
            gamma_t_indicator: 1080.0,
            gamma_t_sparse: 3240.0,
            gamma_t_dense: 25000.0,
            delta_indicator: 120.0,
            delta_sqrt: 360.0,
            p_split: 0.49,
            indicator_bound: None,
            gamma: None,
        }
    }
}

impl ScheduleConstants {
    /// The degenerate zero-constant schedule: `tau0 = 0` (so `t0 = M`) and
    /// only the indicator component of `gamma_t` survives.
    pub fn zeroed_log_terms() -> Self {
        ScheduleConstants {
            tau0_sparse: 0.0,
            tau0_dense: 0.0,
            gamma_t_sparse: 0.0,
            gamma_t_dense: 0.0,
            delta_sqrt: 0.0,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<(), ScheduleError> {
        let named = [
            ("tau0_sparse", self.tau0_sparse),
            ("tau0_dense", self.tau0_dense),
            ("gamma_t_indicator", self.gamma_t_indicator),
            ("gamma_t_sparse", self.gamma_t_sparse),
            ("gamma_t_dense", self.gamma_t_dense),
            ("delta_indicator", self.delta_indicator),
            ("delta_sqrt", self.delta_sqrt),
        ];
        for (name, v) in named {
            if !v.is_finite() || v < 0.0 {
                return Err(ScheduleError::InvalidOverride(format!("{name} = {v}")));
            }
        }
        if !(0.0 < self.p_split && self.p_split < 0.5) {
            return Err(ScheduleError::InvalidOverride(format!(
                "p_split = {} not in (0, 1/2)",
                self.p_split
            )));
        }
        if let Some(b) = self.indicator_bound {
            if !b.is_finite() || b < 0.0 {
                return Err(ScheduleError::InvalidOverride(format!("indicator_bound = {b}")));
            }
        }
        if let Some(g) = self.gamma {
            if !g.is_finite() || !(0.0..=1.0).contains(&g) {
                return Err(ScheduleError::InvalidOverride(format!("gamma = {g}")));
            }
        }
        Ok(())
    }
}

/// Pass/fail record of the three feasibility assumptions and the facts
/// derived from them. The derived entries are only evaluated when the
/// assumptions pass (they are theorems of the assumptions, so checking
/// them under overrides would be noise).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AssumptionReport {
    /// `p_hat n_hat >= 3*3240^2 (C+4) log N`.
    pub phat_lower: bool,
    /// `p_hat * I <= (49/51) / (340^2 (C+4)^{1/6})`.
    pub indicator_upper: bool,
    /// `q >= 680 (3 (C+4) log N / n_hat)^{1/4}`.
    pub q_lower: bool,
    pub tau0_le_1: bool,
    pub gamma_le_1: bool,
    pub gamma_t_le_1: bool,
    /// `delta(t) <= gamma_t / 9` on the grid `{0, t0/2, t0-1}`.
    pub delta_le_gamma_ninth: Option<bool>,
    /// `tau0 p_hat n_hat >= 3000^2 (C+4) log N`.
    pub tau0_phat_nhat: Option<bool>,
}

impl AssumptionReport {
    pub fn assumptions_pass(&self) -> bool {
        self.phat_lower && self.indicator_upper && self.q_lower
    }

    pub fn failed_names(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.phat_lower {
            out.push("phat_lower".to_string());
        }
        if !self.indicator_upper {
            out.push("indicator_upper".to_string());
        }
        if !self.q_lower {
            out.push("q_lower".to_string());
        }
        out
    }
}

/// The full schedule for one instance.
#[derive(Debug, Clone, Serialize)]
pub struct Schedule {
    pub params: BiregularParams,
    pub c: f64,
    pub c_star: f64,
    pub indicator: u8,
    pub tau0: f64,
    pub t0: u128,
    pub gamma: f64,
    pub m: u128,
    pub theta: f64,
    pub constants: ScheduleConstants,
    pub assumptions: AssumptionReport,
}

impl Schedule {
    /// `gamma_t`, clamped into `[0, 1]` so it is always a Bernoulli
    /// parameter (the clamp only matters under overrides; with passing
    /// assumptions the paper guarantees `gamma_t <= 1`).
    pub fn gamma_t(&self, t: u128) -> f64 {
        self.gamma_t_raw(t).clamp(0.0, 1.0)
    }

    pub fn gamma_t_raw(&self, t: u128) -> f64 {
        gamma_t_value(&self.params, &self.constants, self.c, self.indicator, t)
    }

    pub fn delta_t(&self, t: u128) -> f64 {
        delta_t_value(&self.params, &self.constants, self.c, self.indicator, t)
    }

    pub fn lambda_t(&self, t: u128) -> f64 {
        lambda_t_value(&self.params, &self.constants, t)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("schedule serializes")
    }
}

/// The balance indicator: 1 iff
/// `p_hat < 2 (n1/n2 + n2/n1) / log N`, decided exactly against a
/// high-precision enclosure of the log.
pub fn balance_indicator(params: &BiregularParams) -> u8 {
    let n = params.pair_count();
    if n <= 1 {
        // log N = 0: the threshold is +infinity
        return 1;
    }
    // p_hat < 2(n1/n2 + n2/n1)/ln N  <=>  p_hat * ln N < 2(n1/n2 + n2/n1)
    let ratio_sum = ratio_u128(params.n1() as u128) / ratio_u128(params.n2() as u128)
        + ratio_u128(params.n2() as u128) / ratio_u128(params.n1() as u128);
    let rhs = BigRational::from_integer(BigInt::from(2)) * ratio_sum;
    // compare rhs with p_hat * ln N
    match cmp_with_ln(&rhs, params.p_hat(), &ratio_u128(n)) {
        Ordering::Greater => 1,
        _ => 0,
    }
}

/// The revealed-fraction clock: `tau = 1 - t/M`, exact.
pub fn tau(t: u128, m: u128) -> Result<BigRational, ScheduleError> {
    if t > m {
        return Err(ScheduleError::OutOfRange(t, m));
    }
    Ok(BigRational::one() - BigRational::new(BigInt::from(t), BigInt::from(m.max(1))))
}

fn tau_f64(params: &BiregularParams, t: u128) -> f64 {
    let m = params.edge_count();
    assert!(t < m, "tau-dependent quantities are defined for t < M");
    tau(t, m).expect("t < M").to_f64().unwrap_or(f64::NAN)
}

fn gamma_t_value(
    params: &BiregularParams,
    consts: &ScheduleConstants,
    c: f64,
    indicator: u8,
    t: u128,
) -> f64 {
    let tau = tau_f64(params, t);
    let ln_n = ln_u128(params.pair_count());
    let p_hat = params.p_hat_f64();
    let n_hat = params.n_hat() as f64;
    let head = consts.gamma_t_indicator * p_hat * p_hat * indicator as f64;
    let tail = if params.p_f64() <= consts.p_split {
        consts.gamma_t_sparse * (2.0 * (c + 3.0) * ln_n / (tau * params.p_f64() * n_hat)).sqrt()
    } else {
        let q = params.q_f64();
        consts.gamma_t_dense * ((c + 3.0) * ln_n / (tau * tau * q * q * n_hat)).sqrt()
    };
    head + tail
}

fn lambda_t_value(params: &BiregularParams, consts: &ScheduleConstants, t: u128) -> f64 {
    let ln_n = ln_u128(params.pair_count());
    if params.p_f64() <= consts.p_split {
        6.0 * ln_n
    } else {
        let tau = tau_f64(params, t);
        6.0 * ln_n + 64.0 * ln_n / (tau * params.p_f64() * params.q_f64())
    }
}

fn delta_t_value(
    params: &BiregularParams,
    consts: &ScheduleConstants,
    c: f64,
    indicator: u8,
    t: u128,
) -> f64 {
    let tau = tau_f64(params, t);
    let p_hat = params.p_hat_f64();
    let head = consts.delta_indicator * p_hat * p_hat * indicator as f64;
    let lambda = lambda_t_value(params, consts, t);
    let tail = consts.delta_sqrt
        * ((c + 3.0) * lambda
            / (6.0 * tau * params.p_f64() * params.q_f64() * params.n_hat() as f64))
            .sqrt();
    head + tail
}

fn tau0_value(params: &BiregularParams, consts: &ScheduleConstants, c: f64, indicator: u8) -> f64 {
    let ln_n = ln_u128(params.pair_count());
    let n_hat = params.n_hat() as f64;
    if params.p_f64() <= consts.p_split {
        consts.tau0_sparse * (c + 4.0) * ln_n / (params.p_f64() * n_hat)
    } else {
        let q = params.q_f64();
        consts.tau0_dense
            * (3.0 * (c + 4.0)).powf(0.25)
            * (q.powf(1.5) * indicator as f64 + (ln_n / n_hat).powf(0.25))
    }
}

fn theta_value(params: &BiregularParams, consts: &ScheduleConstants, c: f64, indicator: u8) -> f64 {
    let ln_n = ln_u128(params.pair_count());
    let n_hat = params.n_hat() as f64;
    let p_hat = params.p_hat_f64();
    let head = 1080.0 * p_hat * p_hat * indicator as f64;
    if params.p_f64() <= consts.p_split {
        head + 6480.0 * (2.0 * (c + 3.0) * ln_n / (params.p_f64() * n_hat)).sqrt()
    } else {
        let q = params.q_f64();
        head + 6250.0 * ((c + 3.0) * ln_n / (q * q * n_hat)).sqrt() * (n_hat / ln_n).ln()
    }
}

/// `gamma` of the lower embedding, from `C*`.
pub fn gamma_value(params: &BiregularParams, consts: &ScheduleConstants, c_star: f64) -> f64 {
    let ln_n = ln_u128(params.pair_count());
    let n_hat = params.n_hat() as f64;
    let p = params.p_f64();
    let q = params.q_f64();
    let indicator = balance_indicator(params) as f64;
    if p <= consts.p_split {
        c_star * (p * p * indicator + (ln_n / (p * n_hat)).sqrt())
    } else {
        c_star
            * (q.powf(1.5) * indicator
                + (ln_n / n_hat).powf(0.25)
                + (ln_n / n_hat).sqrt() / q * (n_hat / ln_n).ln())
    }
}

/// `m = ceil((1 - gamma) M)`, computed exactly from the dyadic value of
/// `gamma` and clamped into `[0, M]`.
fn m_from_gamma(params: &BiregularParams, gamma: f64) -> u128 {
    let m = ratio_u128(params.edge_count());
    let g = rational_from_f64(gamma).unwrap_or_else(BigRational::one);
    let value = (BigRational::one() - g) * m;
    clamp_big(value.ceil().to_integer(), params.edge_count())
}

fn clamp_big(v: BigInt, hi: u128) -> u128 {
    if v.is_negative() {
        0
    } else {
        v.to_u128().map_or(hi, |x| x.min(hi))
    }
}

/// Exact evaluation of the three feasibility assumptions.
fn assumption_checks(
    params: &BiregularParams,
    consts: &ScheduleConstants,
    c: f64,
    indicator: u8,
) -> (bool, bool, bool) {
    let n = ratio_u128(params.pair_count());
    let c_rat = rational_from_f64(c).expect("finite C");
    let four = BigRational::from_integer(BigInt::from(4));
    let n_hat = ratio_u128(params.n_hat() as u128);

    // p_hat n_hat >= 3*3240^2 (C+4) ln N
    let coeff = BigRational::from_integer(BigInt::from(3u64 * 3240 * 3240)) * (&c_rat + &four);
    let lhs = params.p_hat() * &n_hat;
    let phat_lower = cmp_with_ln(&lhs, &coeff, &n) != Ordering::Less;

    // p_hat * I <= bound; at I = 0 trivially true
    let indicator_upper = if indicator == 0 {
        true
    } else {
        match consts.indicator_bound {
            Some(b) => {
                let bound = rational_from_f64(b).expect("finite bound");
                params.p_hat() <= &bound
            }
            None => {
                // p_hat <= (49/51) / (340^2 (C+4)^{1/6}); sixth powers make
                // the comparison rational
                let lhs6 = params.p_hat().pow(6)
                    * BigRational::from_integer(BigInt::from(340u64).pow(12))
                    * (&c_rat + &four);
                let rhs6 = BigRational::new(BigInt::from(49), BigInt::from(51)).pow(6);
                lhs6 <= rhs6
            }
        }
    };

    // q >= 680 (3 (C+4) ln N / n_hat)^{1/4}: fourth powers
    let q4 = params.q().pow(4) * &n_hat;
    let coeff = BigRational::from_integer(BigInt::from(680u64).pow(4))
        * BigRational::from_integer(BigInt::from(3))
        * (&c_rat + &four);
    let q_lower = cmp_with_ln(&q4, &coeff, &n) != Ordering::Less;

    (phat_lower, indicator_upper, q_lower)
}

/// Build the full schedule. Without overrides, failed assumptions are an
/// error (the normal outcome at desk scale); with overrides the schedule
/// is built regardless and the report records the failures.
pub fn build_schedule(
    params: &BiregularParams,
    c: f64,
    c_star: f64,
    overrides: Option<ScheduleConstants>,
) -> Result<Schedule, ScheduleError> {
    if !c.is_finite() || c <= 0.0 {
        return Err(ScheduleError::InvalidOverride(format!("C = {c} must be positive")));
    }
    if !c_star.is_finite() || c_star < 0.0 {
        return Err(ScheduleError::InvalidOverride(format!("C* = {c_star} must be nonnegative")));
    }
    let overridden = overrides.is_some();
    let consts = overrides.unwrap_or_default();
    consts.validate()?;
    let indicator = balance_indicator(params);
    let (phat_lower, indicator_upper, q_lower) = assumption_checks(params, &consts, c, indicator);
    let assumptions_pass = phat_lower && indicator_upper && q_lower;
    if !assumptions_pass && !overridden {
        let mut failed = Vec::new();
        if !phat_lower {
            failed.push("phat_lower (eq. p_hat n_hat >= 3*3240^2 (C+4) log N)".to_string());
        }
        if !indicator_upper {
            failed.push("indicator_upper (eq. p_hat I <= (49/51)/(340^2 (C+4)^{1/6}))".to_string());
        }
        if !q_lower {
            failed.push("q_lower (eq. q >= 680 (3(C+4) log N / n_hat)^{1/4})".to_string());
        }
        return Err(ScheduleError::InfeasibleAssumptions(failed));
    }

    let m_edges = params.edge_count();
    let tau0 = tau0_value(params, &consts, c, indicator);
    let t0 = {
        let t0_rat = rational_from_f64(tau0)
            .map(|t| (BigRational::one() - t) * ratio_u128(m_edges))
            .map(|v| v.floor().to_integer())
            .unwrap_or_else(|| BigInt::from(0));
        clamp_big(t0_rat, m_edges)
    };
    let gamma = consts.gamma.unwrap_or_else(|| gamma_value(params, &consts, c_star));
    let m = m_from_gamma(params, gamma);
    let theta = theta_value(params, &consts, c, indicator);

    let gamma_t_probe = if m_edges == 0 {
        0.0
    } else {
        gamma_t_value(params, &consts, c, indicator, t0.min(m_edges - 1))
    };
    let mut report = AssumptionReport {
        phat_lower,
        indicator_upper,
        q_lower,
        tau0_le_1: tau0 <= 1.0,
        gamma_le_1: gamma <= 1.0,
        gamma_t_le_1: gamma_t_probe <= 1.0,
        delta_le_gamma_ninth: None,
        tau0_phat_nhat: None,
    };
    if assumptions_pass && m_edges > 0 {
        // the derived facts the assumptions are supposed to imply
        let grid = [0u128, t0 / 2, t0.saturating_sub(1)];
        let ok = grid.iter().all(|&t| {
            if t >= m_edges {
                return true;
            }
            delta_t_value(params, &consts, c, indicator, t)
                <= gamma_t_value(params, &consts, c, indicator, t) / 9.0
        });
        report.delta_le_gamma_ninth = Some(ok);
        let lhs = tau0 * params.p_hat_f64() * params.n_hat() as f64;
        let rhs = 3000.0 * 3000.0 * (c + 4.0) * ln_u128(params.pair_count());
        report.tau0_phat_nhat = Some(lhs >= rhs);
    }

    Ok(Schedule {
        params: params.clone(),
        c,
        c_star,
        indicator,
        tau0,
        t0,
        gamma,
        m,
        theta,
        constants: consts,
        assumptions: report,
    })
}

/// The complement-side quantities of the upper embedding.
#[derive(Debug, Clone, Serialize)]
pub struct UpperParams {
    pub gamma_bar: f64,
    pub m_bar: u128,
    /// `p'' = p + 2 gamma_bar q`, exact given the dyadic `gamma_bar`.
    #[serde(serialize_with = "serialize_ratio")]
    pub p_doubleprime: BigRational,
}

fn serialize_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&crate::params::format_ratio(r))
}

/// `gamma_bar` of the upper embedding, from `C*`.
pub fn gamma_bar_value(params: &BiregularParams, consts: &ScheduleConstants, c_star: f64) -> f64 {
    let ln_n = ln_u128(params.pair_count());
    let n_hat = params.n_hat() as f64;
    let p = params.p_f64();
    let q = params.q_f64();
    let indicator = balance_indicator(params) as f64;
    let split = 1.0 - consts.p_split;
    if p < split {
        c_star
            * (p.powf(1.5) * indicator
                + (ln_n / n_hat).powf(0.25)
                + (ln_n / n_hat).sqrt() / p * (n_hat / ln_n).ln())
    } else {
        c_star * (q * q * indicator + (ln_n / (q * n_hat)).sqrt())
    }
}

/// `m_bar = floor((p + gamma_bar q) N)` and `p'' = p + 2 gamma_bar q`,
/// exactly. The identity `ceil((1-gamma_bar) q N) = N - m_bar` (the count
/// the complement run must use) holds by construction and is asserted.
pub fn upper_from_gamma(params: &BiregularParams, gamma_bar: &BigRational) -> (u128, BigRational) {
    let n = ratio_u128(params.pair_count());
    let value = (params.p() + gamma_bar * params.q()) * &n;
    let m_bar = clamp_big(value.floor().to_integer(), params.pair_count());
    let p_dd = params.p() + BigRational::from_integer(BigInt::from(2)) * gamma_bar * params.q();
    // complement-count identity
    let m_complement = ((BigRational::one() - gamma_bar) * params.q() * &n).ceil().to_integer();
    debug_assert_eq!(
        clamp_big(m_complement, params.pair_count()),
        params.pair_count() - m_bar,
        "ceil((1-gb) q N) must equal N - m_bar"
    );
    (m_bar, p_dd)
}

/// Corollary-side parameters. Errors when the `p`-lower-bound condition
/// fails (the complement of the `q`-condition of the lower embedding).
pub fn upper_params(
    params: &BiregularParams,
    c: f64,
    c_star: f64,
) -> Result<UpperParams, ScheduleError> {
    let consts = ScheduleConstants::default();
    // p >= 680 (3 (C+4) log N / n_hat)^{1/4}: fourth powers, exact
    let c_rat = rational_from_f64(c)
        .ok_or_else(|| ScheduleError::InvalidOverride(format!("C = {c}")))?;
    let p4 = params.p().pow(4) * ratio_u128(params.n_hat() as u128);
    let coeff = BigRational::from_integer(BigInt::from(680u64).pow(4))
        * BigRational::from_integer(BigInt::from(3))
        * (c_rat + BigRational::from_integer(BigInt::from(4)));
    if cmp_with_ln(&p4, &coeff, &ratio_u128(params.pair_count())) == Ordering::Less {
        return Err(ScheduleError::InfeasibleAssumptions(vec![
            "p_lower (eq. p >= 680 (3(C+4) log N / n_hat)^{1/4})".to_string(),
        ]));
    }
    let gamma_bar = gamma_bar_value(params, &consts, c_star);
    let gb = rational_from_f64(gamma_bar)
        .ok_or_else(|| ScheduleError::Undefined("gamma_bar not finite".to_string()))?;
    let (m_bar, p_dd) = upper_from_gamma(params, &gb);
    Ok(UpperParams { gamma_bar, m_bar, p_doubleprime: p_dd })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::Zero;

    fn params(n1: u64, n2: u64, num: u64, den: u64) -> BiregularParams {
        BiregularParams::new(n1, n2, BigRational::new(BigInt::from(num), BigInt::from(den)))
            .unwrap()
    }

    #[test]
    fn indicator_examples() {
        // n1 = n2 = 100: threshold 4/log(10^4) ~ 0.43429
        assert_eq!(balance_indicator(&params(100, 100, 3, 10)), 1);
        assert_eq!(balance_indicator(&params(100, 100, 1, 2)), 0);
    }

    #[test]
    fn indicator_balanced_iff_two_over_log_n() {
        // at n1 = n2 = n the threshold is exactly 2/log n; grid check
        for n in [10u64, 50, 100, 1000, 10_000] {
            let threshold = 2.0 / (n as f64).ln();
            for (num, den) in [(1u64, 100u64), (1, 10), (1, 5), (3, 10), (2, 5), (1, 2)] {
                let p = num as f64 / den as f64;
                if n % den != 0 {
                    continue;
                }
                let params = params(n, n, num, den);
                let expected = if p.min(1.0 - p) < threshold { 1 } else { 0 };
                // skip knife-edge cases where f64 cannot decide
                if (p.min(1.0 - p) - threshold).abs() < 1e-9 {
                    continue;
                }
                assert_eq!(balance_indicator(&params), expected, "n={n} p={num}/{den}");
            }
        }
    }

    #[test]
    fn tau_is_exact() {
        assert_eq!(tau(0, 8).unwrap(), BigRational::one());
        assert_eq!(tau(8, 8).unwrap(), BigRational::zero());
        assert_eq!(tau(2, 8).unwrap(), BigRational::new(BigInt::from(3), BigInt::from(4)));
        assert!(tau(9, 8).is_err());
    }

    #[test]
    fn desk_scale_is_infeasible_without_overrides() {
        // p_hat n_hat = 100 is far below 3*3240^2 (C+4) log N
        let err = build_schedule(&params(1000, 1000, 1, 10), 1.0, 1.0, None).unwrap_err();
        match err {
            ScheduleError::InfeasibleAssumptions(failed) => {
                assert!(failed.iter().any(|f| f.contains("phat_lower")), "{failed:?}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn zeroed_constants_give_degenerate_schedule() {
        let p = params(4, 4, 1, 2);
        let mut consts = ScheduleConstants::zeroed_log_terms();
        consts.gamma = Some(0.0);
        let s = build_schedule(&p, 1.0, 1.0, Some(consts)).unwrap();
        assert_eq!(s.tau0, 0.0);
        assert_eq!(s.t0, 8); // t0 = M
        assert_eq!(s.m, 8); // gamma = 0 keeps every edge
        // only the indicator component of gamma_t survives
        let expected = 1080.0 * 0.25 * s.indicator as f64;
        assert!((s.gamma_t_raw(0) - expected).abs() < 1e-12);
        assert!((s.gamma_t_raw(7) - expected).abs() < 1e-12);
    }

    #[test]
    fn negative_override_rejected() {
        let p = params(4, 4, 1, 2);
        let consts = ScheduleConstants { tau0_sparse: -1.0, ..Default::default() };
        assert!(matches!(
            build_schedule(&p, 1.0, 1.0, Some(consts)),
            Err(ScheduleError::InvalidOverride(_))
        ));
        let consts = ScheduleConstants { p_split: 0.6, ..Default::default() };
        assert!(matches!(
            build_schedule(&p, 1.0, 1.0, Some(consts)),
            Err(ScheduleError::InvalidOverride(_))
        ));
    }

    #[test]
    fn huge_instance_passes_assumptions() {
        // n = 2^55 at p = 1/2 satisfies all three assumptions for C = 1:
        // evaluated exactly via the log enclosure
        let p = params(1 << 55, 1 << 55, 1, 2);
        let s = build_schedule(&p, 1.0, 1.0, None).unwrap();
        assert!(s.assumptions.assumptions_pass());
        assert!(s.assumptions.tau0_le_1);
        assert_eq!(s.assumptions.delta_le_gamma_ninth, Some(true));
        assert_eq!(s.assumptions.tau0_phat_nhat, Some(true));
        assert!(s.assumptions.gamma_t_le_1);
        // gamma_t is nondecreasing in t: spot-check the ends
        assert!(s.gamma_t_raw(0) <= s.gamma_t_raw(s.t0.min(p.edge_count() - 1)));
    }

    #[test]
    fn schedule_json_round_trip_fields() {
        let p = params(4, 4, 1, 2);
        let s = build_schedule(&p, 1.0, 0.5, Some(ScheduleConstants::zeroed_log_terms())).unwrap();
        let json = s.to_json();
        assert_eq!(json["t0"], 8);
        assert_eq!(json["params"]["p"], "1/2");
        assert!(json["assumptions"]["phat_lower"].is_boolean());
    }

    #[test]
    fn upper_identity_on_grid() {
        // ceil((1-gb) q N) = N - floor((p + gb q) N) over a rational grid
        for (n1, n2, num, den) in [(10u64, 10u64, 1u64, 2u64), (10, 10, 3, 10), (8, 4, 1, 4), (6, 6, 2, 3)] {
            let p = params(n1, n2, num, den);
            for (gn, gd) in [(0u64, 1u64), (1, 10), (1, 4), (1, 2), (9, 10), (1, 1)] {
                let gb = BigRational::new(BigInt::from(gn), BigInt::from(gd));
                // the assert inside upper_from_gamma is the identity check
                let (m_bar, p_dd) = upper_from_gamma(&p, &gb);
                assert!(m_bar <= p.pair_count());
                assert!(p_dd >= *p.p());
            }
        }
    }

    #[test]
    fn upper_examples() {
        // gamma_bar = 0 gives m_bar = floor(p N) = M and p'' = p
        let p = params(10, 10, 1, 2);
        let (m_bar, p_dd) = upper_from_gamma(&p, &BigRational::zero());
        assert_eq!(m_bar, 50);
        assert_eq!(p_dd, *p.p());
        // p = 1/2, gamma_bar = 1/10, N = 100: m_bar = floor(0.55 * 100) = 55
        let (m_bar, _) = upper_from_gamma(&p, &BigRational::new(BigInt::from(1), BigInt::from(10)));
        assert_eq!(m_bar, 55);
    }

    #[test]
    fn upper_params_requires_large_p() {
        assert!(matches!(
            upper_params(&params(100, 100, 1, 2), 1.0, 1.0),
            Err(ScheduleError::InfeasibleAssumptions(_))
        ));
        // the complement of the huge feasible instance is feasible
        assert!(upper_params(&params(1 << 55, 1 << 55, 1, 2), 1.0, 1.0).is_ok());
    }

    #[test]
    fn gamma_t_monotone_under_default_constants() {
        let p = params(1 << 55, 1 << 55, 1, 2);
        let s = build_schedule(&p, 1.0, 1.0, None).unwrap();
        let m = p.edge_count();
        let mut last = 0.0;
        for frac in [0u128, 1, 2, 4, 6, 7] {
            let t = m * frac / 8;
            let g = s.gamma_t_raw(t.min(m - 1));
            assert!(g >= last, "gamma_t not monotone at t = {t}");
            last = g;
        }
    }

    #[test]
    fn poisson_mode_floor_holds_on_grid() {
        // the mode bound used by the schedule's tail machinery
        for &mu in &[0.5, 1.0, 2.0, 5.0, 10.0, 100.0] {
            let pmf = crate::stats::poisson_pmf(mu, mu.floor() as u64);
            assert!(pmf >= crate::stats::poisson_mode_lower_bound(mu));
        }
    }
}

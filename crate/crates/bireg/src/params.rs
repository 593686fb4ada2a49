//! Instance parameters of the biregular model.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParamsError {
    #[error("n1 and n2 must be positive")]
    EmptySide,
    #[error("p must lie in [0, 1], got {0}")]
    ProbabilityOutOfRange(String),
    #[error("{0} is not an integer (p*n2 and p*n1 must both be integers)")]
    NonIntegralDegree(String),
    #[error("cannot parse '{0}' as a rational 'a/b'")]
    BadRational(String),
}

/// Parameters `(n1, n2, p)` of the biregular model, with the derived
/// quantities the formulas constantly need: the degrees `d1 = p*n2` and
/// `d2 = p*n1`, the complete-graph edge count `N = n1*n2`, the biregular
/// edge count `M = p*N`, `q = 1 - p`, `p_hat = min(p, q)` and
/// `n_hat = min(n1, n2)`.
///
/// `p` is held as an exact rational; `p*n2` and `p*n1` must be integers or
/// construction is rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiregularParams {
    n1: u64,
    n2: u64,
    p: BigRational,
    q: BigRational,
    d1: u64,
    d2: u64,
}

impl BiregularParams {
    pub fn new(n1: u64, n2: u64, p: BigRational) -> Result<Self, ParamsError> {
        if n1 == 0 || n2 == 0 {
            return Err(ParamsError::EmptySide);
        }
        if p.is_negative() || p > BigRational::one() {
            return Err(ParamsError::ProbabilityOutOfRange(p.to_string()));
        }
        let d1 = integral_product(&p, n2)
            .ok_or_else(|| ParamsError::NonIntegralDegree(format!("p*n2 = {}*{}", p, n2)))?;
        let d2 = integral_product(&p, n1)
            .ok_or_else(|| ParamsError::NonIntegralDegree(format!("p*n1 = {}*{}", p, n1)))?;
        let q = BigRational::one() - &p;
        Ok(Self { n1, n2, p, q, d1, d2 })
    }

    /// Convenience constructor from the left degree: `p = d1/n2`.
    pub fn from_degree(n1: u64, n2: u64, d1: u64) -> Result<Self, ParamsError> {
        if n2 == 0 {
            return Err(ParamsError::EmptySide);
        }
        let p = BigRational::new(BigInt::from(d1), BigInt::from(n2));
        Self::new(n1, n2, p)
    }

    pub fn n1(&self) -> u64 {
        self.n1
    }

    pub fn n2(&self) -> u64 {
        self.n2
    }

    pub fn p(&self) -> &BigRational {
        &self.p
    }

    pub fn q(&self) -> &BigRational {
        &self.q
    }

    /// `min(p, 1-p)`.
    pub fn p_hat(&self) -> &BigRational {
        if self.p <= self.q {
            &self.p
        } else {
            &self.q
        }
    }

    /// Degree of every left (V1) vertex: `p * n2`.
    pub fn d1(&self) -> u64 {
        self.d1
    }

    /// Degree of every right (V2) vertex: `p * n1`.
    pub fn d2(&self) -> u64 {
        self.d2
    }

    /// `min(n1, n2)`.
    pub fn n_hat(&self) -> u64 {
        self.n1.min(self.n2)
    }

    /// Number of edges of the complete bipartite graph: `N = n1*n2`.
    pub fn pair_count(&self) -> u128 {
        self.n1 as u128 * self.n2 as u128
    }

    /// Number of edges of every biregular graph: `M = p*N = d1*n1 = d2*n2`.
    pub fn edge_count(&self) -> u128 {
        self.d1 as u128 * self.n1 as u128
    }

    /// Parameters of the complement model: same sides, `p -> q`.
    pub fn complement(&self) -> Self {
        Self {
            n1: self.n1,
            n2: self.n2,
            p: self.q.clone(),
            q: self.p.clone(),
            d1: self.n2 - self.d1,
            d2: self.n1 - self.d2,
        }
    }

    /// Side sizes as `usize`, available when they fit the address space
    /// (always at desk scale; the schedule also accepts huge sides).
    pub fn dims(&self) -> Option<(usize, usize)> {
        Some((self.n1.to_usize()?, self.n2.to_usize()?))
    }

    pub fn p_f64(&self) -> f64 {
        self.p.to_f64().unwrap_or(f64::NAN)
    }

    pub fn q_f64(&self) -> f64 {
        self.q.to_f64().unwrap_or(f64::NAN)
    }

    pub fn p_hat_f64(&self) -> f64 {
        self.p_hat().to_f64().unwrap_or(f64::NAN)
    }
}

impl Serialize for BiregularParams {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("BiregularParams", 7)?;
        s.serialize_field("n1", &self.n1)?;
        s.serialize_field("n2", &self.n2)?;
        s.serialize_field("p", &format_ratio(&self.p))?;
        s.serialize_field("d1", &self.d1)?;
        s.serialize_field("d2", &self.d2)?;
        s.serialize_field("N", &self.pair_count().to_string())?;
        s.serialize_field("M", &self.edge_count().to_string())?;
        s.end()
    }
}

/// Render a rational as `a/b` (or just `a` when the denominator is one).
pub fn format_ratio(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse a probability given as an exact rational `a/b` (or a bare integer
/// `0`/`1`). Decimal notation is rejected: the degrees `p*n2`, `p*n1` must
/// be exact integers and decimals invite silent rounding.
pub fn parse_ratio(s: &str) -> Result<BigRational, ParamsError> {
    let bad = || ParamsError::BadRational(s.to_string());
    let parse_int = |t: &str| -> Result<BigInt, ParamsError> {
        if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        t.parse::<BigInt>().map_err(|_| bad())
    };
    match s.split_once('/') {
        Some((a, b)) => {
            let num = parse_int(a)?;
            let den = parse_int(b)?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(num, den))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

fn integral_product(p: &BigRational, n: u64) -> Option<u64> {
    let prod = p * BigRational::from_integer(BigInt::from(n));
    if prod.denom().is_one() {
        prod.numer().to_u64()
    } else {
        None
    }
}

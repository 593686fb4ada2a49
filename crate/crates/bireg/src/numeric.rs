//! Guarded-precision evaluation of the logarithms that enter exact
//! comparisons.
//!
//! The schedule thresholds compare an exact rational against `c * ln(x)`
//! for rational `c` and `x`. `ln(x)` is irrational for rational `x != 1`,
//! so an interval enclosure of controllable width decides every such
//! comparison exactly: we narrow the enclosure until the rational side
//! falls strictly outside it.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use std::cmp::Ordering;

/// Exact dyadic rational equal to the given finite float.
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

pub fn ratio_u64(a: u64, b: u64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

pub fn ratio_int(a: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(a))
}

pub fn ratio_u128(a: u128) -> BigRational {
    BigRational::from_integer(BigInt::from(a))
}

/// atanh(z) = z + z^3/3 + z^5/5 + ... for 0 <= z < 1, as an interval.
/// The tail after `terms` summands is bounded by
/// z^(2*terms+1) / ((2*terms+1)(1-z^2)).
fn atanh_interval(z: &BigRational, terms: usize) -> (BigRational, BigRational) {
    debug_assert!(!z.is_negative() && z < &BigRational::one());
    let z2 = z * z;
    let mut power = z.clone();
    let mut sum = BigRational::zero();
    for k in 0..terms {
        sum += &power / BigRational::from_integer(BigInt::from(2 * k as u64 + 1));
        power *= &z2;
    }
    // power = z^(2*terms+1)
    let denom = BigRational::from_integer(BigInt::from(2 * terms as u64 + 1))
        * (BigRational::one() - &z2);
    let tail = power / denom;
    let hi = &sum + tail;
    (sum, hi)
}

/// Round a positive rational to dyadic with denominator `2^bits`,
/// returning floor and ceiling.
fn dyadic_bracket(x: &BigRational, bits: u32) -> (BigRational, BigRational) {
    let scale = BigInt::one() << bits;
    let scaled = x * BigRational::from_integer(scale.clone());
    let fl = scaled.floor();
    let lo = BigRational::new(fl.to_integer(), scale.clone());
    let hi = BigRational::new(fl.to_integer() + 1, scale);
    if &lo == x {
        (lo.clone(), lo)
    } else {
        (lo, hi)
    }
}

fn ln2_interval(terms: usize) -> (BigRational, BigRational) {
    // ln 2 = 2 atanh(1/3)
    let third = BigRational::new(BigInt::one(), BigInt::from(3));
    let (lo, hi) = atanh_interval(&third, terms);
    (lo * ratio_int(2), hi * ratio_int(2))
}

/// Enclosure of `ln x` for rational `x > 0`, with width below `2^-bits`
/// for practical inputs.
pub fn ln_interval(x: &BigRational, bits: u32) -> (BigRational, BigRational) {
    assert!(x.is_positive(), "ln requires a positive argument");
    if x.is_one() {
        return (BigRational::zero(), BigRational::zero());
    }
    // Normalize to m in [1, 2): x = 2^k * m.
    let mut k: i64 = x.numer().bits() as i64 - x.denom().bits() as i64;
    let two = ratio_int(2);
    let pow2 = |e: i64| -> BigRational {
        if e >= 0 {
            BigRational::from_integer(BigInt::one() << e as u32)
        } else {
            BigRational::new(BigInt::one(), BigInt::one() << (-e) as u32)
        }
    };
    let mut m = x / pow2(k);
    while m >= two {
        m /= &two;
        k += 1;
    }
    while m < BigRational::one() {
        m *= &two;
        k -= 1;
    }
    // Cap the mantissa's denominator so series terms stay small.
    let (m_lo, m_hi) = dyadic_bracket(&m, bits + 8);
    let terms = (bits as usize) / 3 + 4;
    let z_of = |m: &BigRational| (m - BigRational::one()) / (m + BigRational::one());
    let (ln_m_lo, _) = atanh_interval(&z_of(&m_lo), terms);
    let (_, ln_m_hi) = atanh_interval(&z_of(&m_hi), terms);
    let (ln2_lo, ln2_hi) = ln2_interval(terms);
    let (k_lo, k_hi) = if k >= 0 {
        (ratio_int(k) * ln2_lo, ratio_int(k) * ln2_hi)
    } else {
        (ratio_int(k) * ln2_hi, ratio_int(k) * ln2_lo)
    };
    (k_lo + ln_m_lo * ratio_int(2), k_hi + ln_m_hi * ratio_int(2))
}

/// `ln x` rounded to f64 through a 96-bit enclosure.
pub fn ln_f64(x: &BigRational) -> f64 {
    let (lo, hi) = ln_interval(x, 96);
    ((lo + hi) / ratio_int(2)).to_f64().unwrap_or(f64::NAN)
}

/// Natural log of an integer, as f64.
pub fn ln_u128(n: u128) -> f64 {
    ln_f64(&ratio_u128(n))
}

/// Exact comparison of `lhs` against `coeff * ln(x)` for rational inputs
/// (`x > 0`). Decides by narrowing the log enclosure; cannot stall because
/// `coeff * ln(x)` is irrational unless `coeff = 0` or `x = 1`.
pub fn cmp_with_ln(lhs: &BigRational, coeff: &BigRational, x: &BigRational) -> Ordering {
    if coeff.is_zero() || x.is_one() {
        return lhs.cmp(&BigRational::zero());
    }
    let mut bits = 64;
    loop {
        let (lo, hi) = ln_interval(x, bits);
        let (a, b) = match coeff.numer().sign() {
            Sign::Minus => (coeff * hi, coeff * lo),
            _ => (coeff * lo, coeff * hi),
        };
        if lhs < &a {
            return Ordering::Less;
        }
        if lhs > &b {
            return Ordering::Greater;
        }
        bits *= 2;
        assert!(bits <= 1 << 16, "log comparison failed to separate");
    }
}

/// Exactly uniform integer in `[0, n)` by rejection over `bits(n)` random
/// bits. Deterministic given the generator stream.
pub fn uniform_biguint_below<R: Rng>(rng: &mut R, n: &BigUint) -> BigUint {
    assert!(!n.is_zero(), "empty range");
    if n.is_one() {
        return BigUint::zero();
    }
    let bits = n.bits();
    let words = bits.div_ceil(64) as usize;
    let top_mask = if bits.is_multiple_of(64) { u64::MAX } else { (1u64 << (bits % 64)) - 1 };
    loop {
        let mut raw: Vec<u64> = (0..words).map(|_| rng.gen::<u64>()).collect();
        raw[words - 1] &= top_mask;
        let candidate = BigUint::from_slice(
            &raw.iter()
                .flat_map(|w| [*w as u32, (*w >> 32) as u32])
                .collect::<Vec<u32>>(),
        );
        if &candidate < n {
            return candidate;
        }
    }
}

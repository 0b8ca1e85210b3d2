//! Arbitrary-precision real arithmetic behind a facility-agnostic wrapper,
//! plus the integer-argument zeta engine and partial zeta values needed by
//! the Euler-product evaluator.
//!
//! [`BigReal`] wraps an MPFR float with an explicit binary precision. Every
//! operation rounds once, to nearest, at the result precision, so each
//! returns a value whose relative error is at most `2^{2-P}` (correctly
//! rounded operations achieve `2^{-P}`). Binary operations carry
//! `max(precision of operands)`.

use std::cmp::Ordering;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use thiserror::Error;

use crate::arith::{bernoulli, PrimeTable};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RealError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("range error: {0}")]
    Range(String),
}

/// Arbitrary-precision real value with an explicit binary precision.
#[derive(Debug, Clone)]
pub struct BigReal {
    value: Float,
}

impl BigReal {
    fn wrap(value: Float) -> Self {
        Self { value }
    }

    pub fn precision(&self) -> u32 {
        self.value.prec()
    }

    pub fn zero(prec: u32) -> Self {
        Self::wrap(Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::wrap(Float::with_val(prec, 1))
    }

    pub fn from_u64(v: u64, prec: u32) -> Self {
        Self::wrap(Float::with_val(prec, v))
    }

    pub fn from_integer(v: &Integer, prec: u32) -> Self {
        Self::wrap(Float::with_val(prec, v))
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        Self::wrap(Float::with_val(prec, q))
    }

    pub fn pi(prec: u32) -> Self {
        Self::wrap(Float::with_val(prec, Constant::Pi))
    }

    pub fn e(prec: u32) -> Self {
        Self::wrap(Float::with_val(prec, 1).exp())
    }

    /// The same value re-rounded to `prec` bits.
    pub fn rounded_to(&self, prec: u32) -> Self {
        Self::wrap(Float::with_val(prec, &self.value))
    }

    fn join_prec(&self, rhs: &Self) -> u32 {
        self.precision().max(rhs.precision())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::wrap(Float::with_val(
            self.join_prec(rhs),
            &self.value + &rhs.value,
        ))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self::wrap(Float::with_val(
            self.join_prec(rhs),
            &self.value - &rhs.value,
        ))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self::wrap(Float::with_val(
            self.join_prec(rhs),
            &self.value * &rhs.value,
        ))
    }

    pub fn div(&self, rhs: &Self) -> Self {
        Self::wrap(Float::with_val(
            self.join_prec(rhs),
            &self.value / &rhs.value,
        ))
    }

    pub fn neg(&self) -> Self {
        Self::wrap(Float::with_val(self.precision(), -&self.value))
    }

    pub fn abs(&self) -> Self {
        Self::wrap(Float::with_val(self.precision(), self.value.abs_ref()))
    }

    pub fn sqrt(&self) -> Result<Self, RealError> {
        if self.value.is_sign_negative() && !self.value.is_zero() {
            return Err(RealError::Domain("sqrt of a negative value".into()));
        }
        Ok(Self::wrap(Float::with_val(
            self.precision(),
            self.value.sqrt_ref(),
        )))
    }

    pub fn ln(&self) -> Result<Self, RealError> {
        if self.value.is_zero() || self.value.is_sign_negative() {
            return Err(RealError::Domain("ln requires a positive argument".into()));
        }
        Ok(Self::wrap(Float::with_val(
            self.precision(),
            self.value.ln_ref(),
        )))
    }

    pub fn exp(&self) -> Self {
        Self::wrap(Float::with_val(self.precision(), self.value.exp_ref()))
    }

    /// `self^(p/q)`: exactly 1 for exponent 0, repeated squaring for
    /// integer exponents (valid for any nonzero base), and
    /// `exp((p/q) · ln self)` otherwise (base must be positive).
    pub fn pow_rational(&self, r: &Rational) -> Result<Self, RealError> {
        let prec = self.precision();
        if *r == 0 {
            return Ok(Self::one(prec));
        }
        if self.value.is_zero() {
            return if *r > 0 {
                Ok(Self::zero(prec))
            } else {
                Err(RealError::Domain("zero to a negative power".into()))
            };
        }
        if r.is_integer() {
            if let Some(e) = r.numer().to_i64() {
                let mut result = Self::one(prec);
                let mut base = self.clone();
                let mut m = e.unsigned_abs();
                while m > 0 {
                    if m & 1 == 1 {
                        result = result.mul(&base);
                    }
                    m >>= 1;
                    if m > 0 {
                        base = base.mul(&base);
                    }
                }
                if e < 0 {
                    result = Self::one(prec).div(&result);
                }
                return Ok(result);
            }
        }
        if self.value.is_sign_negative() {
            return Err(RealError::Domain(
                "fractional power of a negative value".into(),
            ));
        }
        let ln = self.ln()?;
        Ok(ln.mul(&Self::from_rational(r, prec)).exp())
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        !self.value.is_zero() && self.value.is_sign_positive()
    }

    /// Exact comparison against a rational (no rounding involved).
    pub fn cmp_rational(&self, q: &Rational) -> Ordering {
        self.value.partial_cmp(q).expect("finite value")
    }

    /// The exact rational value of this float.
    pub fn to_rational(&self) -> Rational {
        self.value.to_rational().expect("finite value")
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    /// Plain decimal string with the given number of significant digits,
    /// correctly rounded. Falls back to exponent notation when the value
    /// is far from 1 in magnitude.
    pub fn to_decimal(&self, significant_digits: usize) -> String {
        assert!(significant_digits >= 1);
        if self.value.is_zero() {
            return "0".into();
        }
        let raw = self.value.to_string_radix(10, Some(significant_digits));
        let (sign, body) = match raw.strip_prefix('-') {
            Some(rest) => ("-", rest),
            None => ("", raw.as_str()),
        };
        let (mantissa, exp10) = match body.split_once('e') {
            Some((m, e)) => (m, e.parse::<i64>().expect("decimal exponent")),
            // already plain positional notation
            None => return raw,
        };
        let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
        if exp10 < -6 || exp10 > significant_digits as i64 + 6 {
            return raw;
        }
        let mut out = String::from(sign);
        if exp10 < 0 {
            out.push_str("0.");
            for _ in 0..(-exp10 - 1) {
                out.push('0');
            }
            out.push_str(&digits);
        } else {
            let int_len = exp10 as usize + 1;
            if int_len >= digits.len() {
                out.push_str(&digits);
                for _ in 0..(int_len - digits.len()) {
                    out.push('0');
                }
            } else {
                out.push_str(&digits[..int_len]);
                out.push('.');
                out.push_str(&digits[int_len..]);
            }
        }
        out
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.partial_cmp(&other.value)
    }
}

/// Binary working precision for a decimal-digit budget:
/// `ceil(digits · log2(10))`, at least 64 bits.
pub fn precision_for_digits(decimal_digits: u32) -> u32 {
    // 3321929/1000000 is a slight over-approximation of log2(10).
    let bits = (decimal_digits as u64 * 3_321_929).div_ceil(1_000_000);
    (bits as u32).max(64)
}

/// `ζ(n)` for integer `n >= 2` by Euler–Maclaurin summation, with total
/// error at most `2^{4-prec}`.
///
/// The head `Σ_{k=1}^{K-1} k^{-n}` is corrected at `K` by
/// `K^{1-n}/(n-1) + K^{-n}/2 + Σ_j B_{2j}/(2j)! · (n)_{2j-1} · K^{-n-2j+1}`;
/// for the completely monotone integrand `x^{-n}` the remainder after J
/// correction terms is bounded by the magnitude of the first omitted term,
/// so terms are added until that magnitude drops below `2^{-(prec+8)}`.
/// Since the correction series is asymptotic, `K` doubles and the sum
/// restarts if the terms stop decreasing before the target is met. All
/// terms are formed as exact rationals and rounded once into the
/// accumulator, which runs 32 guard bits above `prec`.
pub fn zeta_int(n: u32, prec: u32) -> Result<BigReal, RealError> {
    if n < 2 {
        return Err(RealError::Domain(format!(
            "zeta_int requires n >= 2, got {n}"
        )));
    }
    let wp = prec + 32;
    let target = Rational::from((
        Integer::from(1),
        Integer::from(Integer::i_pow_u(2, prec + 8)),
    ));
    let mut big_k: u64 = (wp as u64 / (3 * n as u64)).max(10);
    'retry: loop {
        let mut sum = Float::new(wp);
        for k in 1..big_k {
            let kn = Integer::from(k).pow(n);
            sum += Float::with_val(wp, Rational::from((Integer::from(1), kn)));
        }
        let k_int = Integer::from(big_k);
        let k_pow_n = k_int.clone().pow(n);
        // ∫_K^∞ x^{-n} dx = K^{1-n}/(n-1), plus the midpoint term K^{-n}/2.
        sum += Float::with_val(
            wp,
            Rational::from((&k_int, Integer::from(&k_pow_n * (n - 1)))),
        );
        sum += Float::with_val(
            wp,
            Rational::from((Integer::from(1), Integer::from(&k_pow_n * 2u32))),
        );

        let mut factorial = Integer::from(2); // (2j)! at j = 1
        let mut rising = Integer::from(n); // n(n+1)...(n+2j-2) at j = 1
        let mut k_pow = Integer::from(&k_pow_n * &k_int); // K^{n+2j-1} at j = 1
        let k_sq = Integer::from(&k_int * &k_int);
        let mut prev_mag: Option<Rational> = None;
        let mut j = 1u32;
        loop {
            let term = Rational::from((
                Integer::from(&rising * bernoulli(2 * j).numer()),
                Integer::from(&factorial * &k_pow) * bernoulli(2 * j).denom(),
            ));
            let mag = Rational::from(term.abs_ref());
            if mag <= target {
                // Remainder is bounded by this first omitted term.
                let total = BigReal::wrap(sum).rounded_to(prec);
                return Ok(total);
            }
            if let Some(prev) = &prev_mag {
                if mag >= *prev {
                    // Asymptotic divergence reached before the target.
                    big_k *= 2;
                    continue 'retry;
                }
            }
            sum += Float::with_val(wp, &term);
            prev_mag = Some(mag);
            j += 1;
            if j > 10_000 {
                big_k *= 2;
                continue 'retry;
            }
            // advance (2j)!, the rising product, and K^{n+2j-1}
            factorial *= (2 * j - 1) * 2 * j;
            rising *= Integer::from(n + 2 * j - 3) * Integer::from(n + 2 * j - 2);
            k_pow *= &k_sq;
        }
    }
}

/// Partial zeta `ζ_m(n) = ζ(n) · ∏_{k=1}^{m-1} (1 - p_k^{-n})`: the Euler
/// product of `ζ(n)` with the first `m - 1` prime factors removed.
pub fn partial_zeta(
    m: usize,
    n: u32,
    prec: u32,
    primes: &PrimeTable,
) -> Result<BigReal, RealError> {
    if m < 1 {
        return Err(RealError::Domain("partial_zeta requires m >= 1".into()));
    }
    let wp = prec + 16;
    let mut acc = zeta_int(n, wp)?;
    for k in 1..m {
        let p = primes
            .nth_prime(k)
            .map_err(|e| RealError::Range(e.to_string()))?;
        let pn = Integer::from(p).pow(n);
        let factor = Rational::from((Integer::from(&pn - 1u32), pn));
        acc = acc.mul(&BigReal::from_rational(&factor, wp));
    }
    Ok(acc.rounded_to(prec))
}

/// Table of `ζ_m(n)` for `n = 2..=max_exponent`, all at one precision.
///
/// Construction verifies `ζ_m(n) > 1` for every entry and the tail bound
/// `ζ_m(n) - 1 <= p_m^{1-n}` for `n >= 3`.
#[derive(Debug, Clone)]
pub struct ZetaTable {
    start_index: usize,
    start_prime: u64,
    precision: u32,
    values: Vec<BigReal>,
}

impl ZetaTable {
    /// Index `m` of the first prime kept in the tail product.
    pub fn start_index(&self) -> usize {
        self.start_index
    }

    pub fn start_prime(&self) -> u64 {
        self.start_prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Largest exponent `n` stored.
    pub fn max_exponent(&self) -> usize {
        self.values.len() + 1
    }

    /// `ζ_m(n)` for `2 <= n <= max_exponent`.
    pub fn value(&self, n: usize) -> &BigReal {
        assert!(
            (2..=self.max_exponent()).contains(&n),
            "zeta table index {n} out of range"
        );
        &self.values[n - 2]
    }
}

pub fn zeta_table(
    m: usize,
    max_exponent: usize,
    prec: u32,
    primes: &PrimeTable,
) -> Result<ZetaTable, RealError> {
    if m < 1 {
        return Err(RealError::Domain("zeta_table requires m >= 1".into()));
    }
    if max_exponent < 2 {
        return Err(RealError::Domain(
            "zeta_table requires max exponent >= 2".into(),
        ));
    }
    let start_prime = primes
        .nth_prime(m)
        .map_err(|e| RealError::Range(e.to_string()))?;
    let mut values = Vec::with_capacity(max_exponent - 1);
    for n in 2..=max_exponent {
        let v = partial_zeta(m, n as u32, prec, primes)?;
        assert!(
            v.cmp_rational(&Rational::from(1)) == Ordering::Greater,
            "zeta_{m}({n}) must exceed 1"
        );
        if n >= 3 {
            let tail_bound = Rational::from((
                Integer::from(1),
                Integer::from(start_prime).pow(n as u32 - 1),
            ));
            let limit = Rational::from(1) + tail_bound;
            assert!(
                v.cmp_rational(&limit) != Ordering::Greater,
                "zeta_{m}({n}) violates the tail bound"
            );
        }
        values.push(v);
    }
    Ok(ZetaTable {
        start_index: m,
        start_prime,
        precision: prec,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sieve;

    #[test]
    fn sqrt_of_pi() {
        let prec = 200;
        let root = BigReal::pi(prec).sqrt().unwrap();
        // classical value, prefix well inside any table
        assert!(root.to_decimal(20).starts_with("1.772453850905516027"));
        // and consistent with squaring back
        let diff = root.mul(&root).sub(&BigReal::pi(prec)).abs();
        let tol = Rational::from((
            Integer::from(1),
            Integer::from(Integer::i_pow_u(2, prec - 8)),
        ));
        assert!(diff.cmp_rational(&tol) == Ordering::Less);
    }

    #[test]
    fn ln_of_e_is_one() {
        let prec = 128;
        let one = BigReal::e(prec).ln().unwrap();
        let diff = one.sub(&BigReal::one(prec)).abs();
        let tol = Rational::from((
            Integer::from(1),
            Integer::from(Integer::i_pow_u(2, prec - 2)),
        ));
        assert!(diff.cmp_rational(&tol) == Ordering::Less);
    }

    #[test]
    fn pow_zero_is_exactly_one() {
        let x = BigReal::from_rational(&Rational::from((7, 3)), 96);
        let p = x.pow_rational(&Rational::new()).unwrap();
        assert_eq!(p, BigReal::one(96));
    }

    #[test]
    fn pow_integer_negative_base() {
        let x = BigReal::from_u64(2, 64).neg();
        let p = x.pow_rational(&Rational::from(3)).unwrap();
        assert_eq!(p, BigReal::from_u64(8, 64).neg());
        assert!(x.pow_rational(&Rational::from((1, 2))).is_err());
    }

    #[test]
    fn domain_errors() {
        let neg = BigReal::one(64).neg();
        assert!(neg.sqrt().is_err());
        assert!(neg.ln().is_err());
        assert!(BigReal::zero(64).ln().is_err());
    }

    #[test]
    fn decimal_formatting() {
        let x = BigReal::from_rational(&Rational::from((5468, 10000)), 128);
        assert_eq!(x.to_decimal(4), "0.5468");
        let y = BigReal::from_u64(1234, 64);
        assert_eq!(y.to_decimal(4), "1234");
        assert_eq!(y.to_decimal(6), "1234.00");
        let z = BigReal::from_rational(&Rational::from((-1, 8)), 64);
        assert_eq!(z.to_decimal(3), "-0.125");
        assert_eq!(BigReal::zero(64).to_decimal(5), "0");
    }

    #[test]
    fn zeta_two_matches_pi_squared_over_six() {
        for prec in [96u32, 200, 400] {
            let z = zeta_int(2, prec).unwrap();
            let pi = BigReal::pi(prec);
            let diff = z.mul(&BigReal::from_u64(6, prec)).sub(&pi.mul(&pi)).abs();
            let tol = Rational::from((
                Integer::from(1),
                Integer::from(Integer::i_pow_u(2, prec - 6)),
            ));
            assert!(diff.cmp_rational(&tol) == Ordering::Less, "prec {prec}");
        }
    }

    #[test]
    fn zeta_four_matches_pi_fourth_over_ninety() {
        let prec = 256;
        let z = zeta_int(4, prec).unwrap();
        let pi = BigReal::pi(prec);
        let pi4 = pi.mul(&pi).mul(&pi).mul(&pi);
        let diff = z.mul(&BigReal::from_u64(90, prec)).sub(&pi4).abs();
        let tol = Rational::from((
            Integer::from(1),
            Integer::from(Integer::i_pow_u(2, prec - 9)),
        ));
        assert!(diff.cmp_rational(&tol) == Ordering::Less);
    }

    #[test]
    fn zeta_large_n_tail_comparison() {
        // ζ(n) - 1 - 2^{-n} is positive and below 2·3^{-n}; the precision
        // must reach past 3^{-n} ≈ 2^{-1.585n} below the leading 1.
        let prec = 400;
        for n in [40u32, 80, 120] {
            let z = zeta_int(n, prec).unwrap();
            let base = Rational::from(1)
                + Rational::from((Integer::from(1), Integer::from(Integer::i_pow_u(2, n))));
            let slack = Rational::from((Integer::from(2), Integer::from(Integer::i_pow_u(3, n))));
            assert!(z.cmp_rational(&base) == Ordering::Greater, "n = {n}");
            let upper = base + slack;
            assert!(z.cmp_rational(&upper) == Ordering::Less, "n = {n}");
        }
    }

    #[test]
    fn zeta_against_independent_implementation() {
        // MPFR ships its own zeta; use it as an oracle for the
        // Euler–Maclaurin engine.
        for (n, prec) in [(2u32, 128u32), (3, 192), (7, 256), (19, 320), (48, 160)] {
            let ours = zeta_int(n, prec).unwrap();
            let theirs = Float::with_val(prec + 16, Float::zeta_u(n));
            let diff = (ours.value.clone() - &theirs).abs();
            let tol = Float::with_val(64, Float::i_exp(1, 3 - prec as i32));
            assert!(diff < tol, "zeta({n}) at {prec} bits");
        }
    }

    #[test]
    fn zeta_self_consistency_on_precision_doubling() {
        let n = 5;
        let prec = 128;
        let low = zeta_int(n, prec).unwrap();
        let high = zeta_int(n, 2 * prec).unwrap();
        let diff = low.sub(&high).abs();
        let tol = Rational::from((
            Integer::from(1),
            Integer::from(Integer::i_pow_u(2, prec - 4)),
        ));
        assert!(diff.cmp_rational(&tol) == Ordering::Less);
    }

    #[test]
    fn zeta_rejects_small_n() {
        assert!(zeta_int(0, 64).is_err());
        assert!(zeta_int(1, 64).is_err());
    }

    #[test]
    fn partial_zeta_m1_is_zeta() {
        let primes = sieve(100);
        let prec = 160;
        let a = partial_zeta(1, 3, prec, &primes).unwrap();
        let b = zeta_int(3, prec).unwrap();
        let diff = a.sub(&b).abs();
        let tol = Rational::from((
            Integer::from(1),
            Integer::from(Integer::i_pow_u(2, prec - 6)),
        ));
        assert!(diff.cmp_rational(&tol) == Ordering::Less);
    }

    #[test]
    fn partial_zeta_two_two_is_pi_squared_over_eight() {
        let primes = sieve(100);
        let prec = 200;
        let v = partial_zeta(2, 2, prec, &primes).unwrap();
        let pi = BigReal::pi(prec);
        let diff = v.mul(&BigReal::from_u64(8, prec)).sub(&pi.mul(&pi)).abs();
        let tol = Rational::from((
            Integer::from(1),
            Integer::from(Integer::i_pow_u(2, prec - 8)),
        ));
        assert!(diff.cmp_rational(&tol) == Ordering::Less);
    }

    #[test]
    fn partial_zeta_seven_three_tail_bound() {
        let primes = sieve(100);
        let v = partial_zeta(7, 3, 128, &primes).unwrap();
        assert!(v.cmp_rational(&Rational::from(1)) == Ordering::Greater);
        let limit = Rational::from(1) + Rational::from((1, 289));
        assert!(v.cmp_rational(&limit) != Ordering::Greater);
    }

    #[test]
    fn table_entries_monotone_and_bounded() {
        let primes = sieve(100);
        let prec = 128;
        let table = zeta_table(7, 30, prec, &primes).unwrap();
        assert_eq!(table.max_exponent(), 30);
        assert_eq!(table.start_prime(), 17);
        let zeta2 = zeta_int(2, prec).unwrap();
        for n in 2..=30 {
            let v = table.value(n);
            assert!(v.cmp_rational(&Rational::from(1)) == Ordering::Greater);
            assert!(v <= &zeta2, "entry {n} exceeds zeta(2)");
            if n > 2 {
                assert!(v < table.value(n - 1), "not decreasing at {n}");
            }
        }
    }

    #[test]
    fn table_decreases_in_start_index() {
        let primes = sieve(100);
        let prec = 96;
        let t7 = zeta_table(7, 10, prec, &primes).unwrap();
        let t8 = zeta_table(8, 10, prec, &primes).unwrap();
        for n in 2..=10 {
            assert!(t8.value(n) < t7.value(n), "n = {n}");
        }
    }

    #[test]
    fn table_single_entry() {
        let primes = sieve(100);
        let table = zeta_table(3, 2, 96, &primes).unwrap();
        assert_eq!(table.max_exponent(), 2);
    }

    #[test]
    fn precision_policy_floor() {
        assert_eq!(precision_for_digits(1), 64);
        assert!(precision_for_digits(63) >= 210);
        assert!(precision_for_digits(63) <= 212);
    }
}

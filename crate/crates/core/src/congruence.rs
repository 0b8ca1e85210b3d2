//! Exact power-sum machinery and trace congruences for integer matrices.
//!
//! Newton's identities link the coefficients of `f(z) = ∏ (1 - x_i z)`
//! to the power sums `q_n = Σ x_i^n`; the Girard–Waring partition
//! formulas express each side in closed form and serve as an independent
//! oracle. For power sums of algebraic integers the divisor sums
//! `Σ_{d|n} q_d μ(n/d)` are divisible by `n`, which for `n = p^m` and the
//! characteristic polynomial of an integer matrix `A` becomes
//! `tr A^{p^m} ≡ tr A^{p^{m-1}} (mod p^m)`.
//!
//! Everything here is exact arbitrary-size integer/rational arithmetic;
//! congruences are checked on full values, never through modular
//! shortcuts.

use rug::ops::Pow;
use rug::{Complete, Integer, Rational};
use thiserror::Error;

use crate::arith::{divisors, moebius, visit_partitions};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CongruenceError {
    #[error("bad matrix: {0}")]
    BadMatrix(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
}

/// Square matrix with exact integer entries, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<Integer>,
}

impl IntMatrix {
    pub fn new(dim: usize, entries: Vec<Integer>) -> Result<Self, CongruenceError> {
        if dim == 0 {
            return Err(CongruenceError::BadMatrix(
                "dimension must be positive".into(),
            ));
        }
        if entries.len() != dim * dim {
            return Err(CongruenceError::BadMatrix(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(Self { dim, entries })
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Integer::new(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Integer::from(1);
        }
        Self { dim, entries }
    }

    /// Parse the text format: the dimension `k` first, then `k` rows of
    /// `k` signed decimal integers, whitespace-separated.
    pub fn parse(text: &str) -> Result<Self, CongruenceError> {
        let mut tokens = text.split_whitespace();
        let dim_token = tokens
            .next()
            .ok_or_else(|| CongruenceError::BadMatrix("empty input".into()))?;
        let dim: usize = dim_token
            .parse()
            .map_err(|_| CongruenceError::BadMatrix(format!("bad dimension '{dim_token}'")))?;
        if dim == 0 || dim > 64 {
            return Err(CongruenceError::BadMatrix(format!(
                "dimension must lie in 1..=64, got {dim}"
            )));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for tok in tokens.by_ref().take(dim * dim) {
            let v: Integer = tok
                .parse()
                .map_err(|_| CongruenceError::BadMatrix(format!("bad entry '{tok}'")))?;
            entries.push(v);
        }
        if entries.len() != dim * dim {
            return Err(CongruenceError::BadMatrix(format!(
                "expected {} entries, found {}",
                dim * dim,
                entries.len()
            )));
        }
        if tokens.next().is_some() {
            return Err(CongruenceError::BadMatrix(
                "trailing data after matrix".into(),
            ));
        }
        Self::new(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> &Integer {
        &self.entries[row * self.dim + col]
    }

    fn mat_mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let k = self.dim;
        let mut entries = vec![Integer::new(); k * k];
        for i in 0..k {
            for l in 0..k {
                let a = &self.entries[i * k + l];
                if *a == 0 {
                    continue;
                }
                for j in 0..k {
                    entries[i * k + j] += Integer::from(a * &rhs.entries[l * k + j]);
                }
            }
        }
        Self { dim: k, entries }
    }

    /// `self^e` by binary exponentiation; `e = 0` gives the identity.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::identity(self.dim);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mat_mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mat_mul(&base);
            }
        }
        result
    }

    pub fn trace(&self) -> Integer {
        let mut t = Integer::new();
        for i in 0..self.dim {
            t += &self.entries[i * self.dim + i];
        }
        t
    }
}

/// `tr(A^n)` exactly.
pub fn trace_power(a: &IntMatrix, n: u64) -> Integer {
    assert!(n >= 1, "trace_power requires n >= 1");
    a.pow(n).trace()
}

/// Power sums `q_1..q_N` (rational in general; integral when derived from
/// an integer matrix or integer coefficients).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSums {
    values: Vec<Rational>,
}

impl PowerSums {
    pub fn new(values: Vec<Rational>) -> Self {
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `q_n`, 1-indexed.
    pub fn q(&self, n: usize) -> &Rational {
        assert!(
            n >= 1 && n <= self.len(),
            "power-sum index {n} out of range"
        );
        &self.values[n - 1]
    }
}

/// `q_n = tr(A^n)` for `n = 1..=count`, by iterated multiplication.
pub fn power_sums_of_matrix(a: &IntMatrix, count: usize) -> PowerSums {
    let mut values = Vec::with_capacity(count);
    let mut power = a.clone();
    for n in 1..=count {
        values.push(Rational::from(power.trace()));
        if n < count {
            power = power.mat_mul(a);
        }
    }
    PowerSums::new(values)
}

/// Newton's identities, coefficients to power sums:
/// `q_n = -(n b_n + Σ_{k=1}^{n-1} b_k q_{n-k})` where `coeffs` holds
/// `b_1..b_k` of `f(z) = 1 + b_1 z + ... + b_k z^k` (zero beyond `k`).
pub fn newton_power_sums(coeffs: &[Rational], count: usize) -> PowerSums {
    let b = |n: usize| -> Option<&Rational> { coeffs.get(n - 1).filter(|v| **v != 0) };
    let mut q: Vec<Rational> = Vec::with_capacity(count);
    for n in 1..=count {
        let mut acc = match b(n) {
            Some(bn) => bn * Rational::from(n as u64),
            None => Rational::new(),
        };
        for k in 1..n {
            if let Some(bk) = b(k) {
                acc += Rational::from(bk * &q[n - k - 1]);
            }
        }
        q.push(-acc);
    }
    PowerSums::new(q)
}

/// Newton's identities, power sums back to coefficients:
/// `b_n = -(q_n + Σ_{k=1}^{n-1} b_k q_{n-k}) / n`.
pub fn newton_coefficients(q: &PowerSums) -> Vec<Rational> {
    let n_max = q.len();
    let mut b: Vec<Rational> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut acc = q.q(n).clone();
        for k in 1..n {
            if b[k - 1] != 0 {
                acc += Rational::from(&b[k - 1] * q.q(n - k));
            }
        }
        b.push(-acc / Rational::from(n as u64));
    }
    b
}

/// Girard–Waring closed form for `q_n`:
/// `q_n = n Σ (-1)^{k_1+...+k_n} (k_1+...+k_n - 1)! / (k_1!...k_n!) ∏ b_i^{k_i}`
/// over all `k_1 + 2k_2 + ... + nk_n = n`. Exponential in `n`.
pub fn girard_waring_power_sum(coeffs: &[Rational], n: usize) -> Rational {
    assert!(n >= 1, "power-sum index must be positive");
    let b = |i: usize| coeffs.get(i - 1).cloned().unwrap_or_default();
    let mut total = Rational::new();
    visit_partitions(n, |counts| {
        let mut k_total = 0u32;
        let mut product = Rational::from(1);
        let mut denom = Integer::from(1);
        for i in 1..=n {
            let k = counts[i];
            if k == 0 {
                continue;
            }
            k_total += k;
            denom *= Integer::factorial(k).complete();
            product *= b(i).pow(k);
            if product == 0 {
                return;
            }
        }
        let mut term =
            product * Rational::from((Integer::factorial(k_total - 1).complete(), denom));
        if k_total % 2 == 1 {
            term = -term;
        }
        total += term;
    });
    total * Rational::from(n as u64)
}

/// Girard–Waring closed form for `b_n`:
/// `b_n = Σ (-1)^{k_1+...+k_n} / (k_1!...k_n!) ∏ (q_i/i)^{k_i}`.
pub fn girard_waring_coefficient(q: &PowerSums, n: usize) -> Rational {
    assert!(n >= 1 && n <= q.len(), "coefficient index {n} out of range");
    let mut total = Rational::new();
    visit_partitions(n, |counts| {
        let mut k_total = 0u32;
        let mut term = Rational::from(1);
        for i in 1..=n {
            let k = counts[i];
            if k == 0 {
                continue;
            }
            k_total += k;
            let base = q.q(i) / Rational::from(i as u64);
            term *= base.pow(k) / Rational::from(Integer::factorial(k).complete());
            if term == 0 {
                break;
            }
        }
        if k_total % 2 == 1 {
            term = -term;
        }
        total += term;
    });
    total
}

/// Coefficients `b_1..b_k` of `det(I - zA)` from the traces of matrix
/// powers through Newton's identities. Exact; the divisions by `n` always
/// come out integral for an integer matrix.
pub fn reciprocal_charpoly(a: &IntMatrix) -> Vec<Integer> {
    let q = power_sums_of_matrix(a, a.dim());
    newton_coefficients(&q)
        .into_iter()
        .map(|c| {
            debug_assert!(c.is_integer(), "characteristic coefficients are integers");
            c.numer().clone()
        })
        .collect()
}

/// The divisor sum `Σ_{d|n} q_d μ(n/d)`; for power sums of algebraic
/// integers it is divisible by `n`.
pub fn arnold_divisor_sum(q: &PowerSums, n: usize) -> Rational {
    assert!(n >= 1 && n <= q.len(), "divisor-sum index {n} out of range");
    let mut acc = Rational::new();
    for d in divisors(n as u64).expect("n >= 1") {
        let mu = moebius(n as u64 / d).expect("quotient >= 1");
        if mu != 0 {
            let term = q.q(d as usize);
            if mu == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
    }
    acc
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    true
}

/// One verified congruence `tr A^{p^m} ≡ tr A^{p^{m-1}} (mod p^m)`.
#[derive(Debug, Clone)]
pub struct CongruenceCheck {
    /// The exponent step `m` in `n = p^m`.
    pub exponent: u32,
    pub modulus: Integer,
    pub lhs: Integer,
    pub rhs: Integer,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct CongruenceReport {
    pub dim: usize,
    pub prime: u64,
    pub checks: Vec<CongruenceCheck>,
}

impl CongruenceReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Check `tr A^{p^m} ≡ tr A^{p^{m-1}} (mod p^m)` for `m = 1..=max_exponent`.
///
/// A failing entry would contradict the congruence theorem (or expose a
/// bug), so callers treat it as a reportable property violation rather
/// than an error.
pub fn verify_trace_congruence(
    a: &IntMatrix,
    p: u64,
    max_exponent: u32,
) -> Result<CongruenceReport, CongruenceError> {
    if !is_prime(p) {
        return Err(CongruenceError::NotPrime(p));
    }
    assert!(max_exponent >= 1, "need at least one exponent step");
    let mut checks = Vec::with_capacity(max_exponent as usize);
    let mut previous = a.clone(); // A^{p^0}
    let mut modulus = Integer::from(1);
    for m in 1..=max_exponent {
        let current = previous.pow(p); // A^{p^m}
        modulus *= p;
        let lhs = current.trace();
        let rhs = previous.trace();
        let pass = Integer::from(&lhs - &rhs).is_divisible(&modulus);
        checks.push(CongruenceCheck {
            exponent: m,
            modulus: modulus.clone(),
            lhs,
            rhs,
            pass,
        });
        previous = current;
    }
    Ok(CongruenceReport {
        dim: a.dim(),
        prime: p,
        checks,
    })
}

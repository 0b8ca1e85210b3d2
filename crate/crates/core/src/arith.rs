//! Integer number-theory kernel: prime sieve, Möbius and Euler-phi,
//! divisor enumeration, Dirichlet convolution, the divisor-sum recursion
//! sequence H, and exact Bernoulli numbers for the zeta engine.
//!
//! Dirichlet-style sequences in this module are 1-indexed: a slice of
//! length `N + 1` represents terms `1..=N` and index 0 is an unused zero
//! slot. This matches the divisor-sum notation in which these sequences
//! are consumed.

use std::sync::Mutex;

use rug::{Complete, Integer, Rational};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("range error: {0}")]
    Range(String),
}

/// Ascending table of all primes up to `limit`.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    primes: Vec<u64>,
    limit: u64,
}

impl PrimeTable {
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// The `k`-th prime, 1-indexed: `nth_prime(1) = 2`.
    pub fn nth_prime(&self, k: usize) -> Result<u64, ArithError> {
        if k == 0 || k > self.primes.len() {
            return Err(ArithError::Range(format!(
                "prime index {k} outside table of {} primes (limit {})",
                self.primes.len(),
                self.limit
            )));
        }
        Ok(self.primes[k - 1])
    }
}

/// Sieve of Eratosthenes up to `limit` inclusive.
pub fn sieve(limit: u64) -> PrimeTable {
    if limit < 2 {
        return PrimeTable {
            primes: Vec::new(),
            limit,
        };
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u64);
            let mut m = p * p;
            while m <= n {
                composite[m] = true;
                m += p;
            }
        }
    }
    PrimeTable { primes, limit }
}

/// A table guaranteed to contain at least `count` primes.
pub fn sieve_covering(count: usize) -> PrimeTable {
    // p_n < n (ln n + ln ln n) for n >= 6; small cases padded by the floor.
    let n = count.max(6) as f64;
    let bound = (n * (n.ln() + n.ln().ln())).ceil() as u64 + 16;
    let table = sieve(bound.max(100));
    debug_assert!(table.len() >= count);
    table
}

/// Prime factorization by trial division, as `(prime, multiplicity)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Möbius function: ±1 on squarefree n by parity of prime factors, else 0.
pub fn moebius(n: u64) -> Result<i32, ArithError> {
    if n < 1 {
        return Err(ArithError::Domain("moebius requires n >= 1".into()));
    }
    let mut mu = 1i32;
    for (_, e) in factorize(n) {
        if e > 1 {
            return Ok(0);
        }
        mu = -mu;
    }
    Ok(mu)
}

/// Euler totient.
pub fn euler_phi(n: u64) -> Result<u64, ArithError> {
    if n < 1 {
        return Err(ArithError::Domain("euler_phi requires n >= 1".into()));
    }
    let mut phi = n;
    for (p, _) in factorize(n) {
        phi = phi / p * (p - 1);
    }
    Ok(phi)
}

/// All divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Result<Vec<u64>, ArithError> {
    if n < 1 {
        return Err(ArithError::Domain("divisors requires n >= 1".into()));
    }
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let prev = out.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            out.extend(prev.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Dirichlet convolution `(a*b)_n = Σ_{d|n} a_d b_{n/d}` up to
/// `min(len(a), len(b)) - 1`. Inputs and output are 1-indexed slices.
pub fn dirichlet_convolve(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().min(b.len()).saturating_sub(1);
    let mut out = vec![Rational::new(); n + 1];
    for d in 1..=n {
        if a[d] == 0 {
            continue;
        }
        let mut m = d;
        while m <= n {
            out[m] += Rational::from(&a[d] * &b[m / d]);
            m += d;
        }
    }
    out
}

/// The identity for Dirichlet convolution: `E_1 = 1`, `E_n = 0` for n > 1.
pub fn dirichlet_identity(n: usize) -> Vec<Rational> {
    let mut e = vec![Rational::new(); n + 1];
    if n >= 1 {
        e[1] = Rational::from(1);
    }
    e
}

/// Inverse under Dirichlet convolution; requires `a_1 != 0`.
pub fn dirichlet_inverse(a: &[Rational]) -> Result<Vec<Rational>, ArithError> {
    let n = a.len().saturating_sub(1);
    if n < 1 || a[1] == 0 {
        return Err(ArithError::Domain(
            "dirichlet inverse requires a_1 != 0".into(),
        ));
    }
    let mut inv = vec![Rational::new(); n + 1];
    inv[1] = Rational::from(1) / &a[1];
    for m in 2..=n {
        // (a * inv)_m = 0  =>  inv_m = -(Σ_{d|m, d<m} inv_d a_{m/d}) / a_1
        let mut s = Rational::new();
        for d in divisors(m as u64).expect("m >= 1") {
            let d = d as usize;
            if d < m {
                s += Rational::from(&inv[d] * &a[m / d]);
            }
        }
        inv[m] = -s / &a[1];
    }
    Ok(inv)
}

/// The sequence `H_1 = 1`, `H_n = Σ_{d|n, d<n} H_d`, precomputed to `N`.
///
/// Construction checks the bound `0 < H_n <= n^2` for every entry.
#[derive(Debug, Clone)]
pub struct HSequence {
    values: Vec<Integer>,
}

impl HSequence {
    pub fn len(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, n: usize) -> &Integer {
        assert!(n >= 1 && n <= self.len(), "H index {n} out of range");
        &self.values[n]
    }

    pub fn values(&self) -> &[Integer] {
        &self.values[1..]
    }
}

/// Compute `H_1..H_n` by accumulating each final `H_d` into its multiples.
pub fn h_sequence(n: usize) -> HSequence {
    assert!(n >= 1, "h_sequence requires n >= 1");
    let mut values = vec![Integer::new(); n + 1];
    values[1] = Integer::from(1);
    for d in 1..=n {
        // All proper divisors of d are < d, so values[d] is final here.
        let h = values[d].clone();
        assert!(h > 0, "H_{d} must be positive");
        assert!(h <= d as u64 * d as u64, "H_{d} exceeds d^2");
        let mut m = 2 * d;
        while m <= n {
            values[m] += &h;
            m += d;
        }
    }
    HSequence { values }
}

static BERNOULLI_CACHE: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// Exact Bernoulli number `B_n` with the convention `B_1 = -1/2`.
///
/// Computed by the recursion `Σ_{k=0}^{n} C(n+1, k) B_k = 0` and cached.
pub fn bernoulli(n: u32) -> Rational {
    let mut cache = BERNOULLI_CACHE.lock().expect("bernoulli cache poisoned");
    if cache.is_empty() {
        cache.push(Rational::from(1));
    }
    while cache.len() <= n as usize {
        let m = cache.len() as u32;
        if m > 1 && m % 2 == 1 {
            cache.push(Rational::new());
            continue;
        }
        let mut s = Rational::new();
        for (k, b) in cache.iter().enumerate() {
            if *b != 0 {
                s += b * Rational::from(Integer::binomial_u(m + 1, k as u32).complete());
            }
        }
        cache.push(-s / Rational::from(m + 1));
    }
    cache[n as usize].clone()
}

/// Visit every tuple `(k_1, ..., k_n)` of non-negative multiplicities with
/// `k_1 + 2 k_2 + ... + n k_n = n`. The callback slice is 1-indexed
/// (`counts[i]` is the multiplicity of part `i`; index 0 is unused).
pub(crate) fn visit_partitions<F: FnMut(&[u32])>(n: usize, mut f: F) {
    fn rec<F: FnMut(&[u32])>(part: usize, remaining: usize, counts: &mut [u32], f: &mut F) {
        if remaining == 0 {
            f(counts);
            return;
        }
        if part == 0 {
            return;
        }
        for k in 0..=(remaining / part) as u32 {
            counts[part] = k;
            rec(part - 1, remaining - k as usize * part, counts, f);
        }
        counts[part] = 0;
    }
    let mut counts = vec![0u32; n + 1];
    rec(n, n, &mut counts, &mut f);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn sieve_small() {
        let t = sieve(30);
        assert_eq!(t.primes(), &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn nth_prime_values() {
        let t = sieve(100);
        assert_eq!(t.nth_prime(1).unwrap(), 2);
        assert_eq!(t.nth_prime(7).unwrap(), 17);
        assert!(t.nth_prime(0).is_err());
        assert!(t.nth_prime(100).is_err());
    }

    #[test]
    fn sieve_covering_has_enough() {
        for count in [1, 6, 25, 168, 1000] {
            let t = sieve_covering(count);
            assert!(t.len() >= count);
        }
    }

    #[test]
    fn moebius_values() {
        assert_eq!(moebius(1).unwrap(), 1);
        assert_eq!(moebius(2).unwrap(), -1);
        assert_eq!(moebius(4).unwrap(), 0);
        assert_eq!(moebius(6).unwrap(), 1);
        assert_eq!(moebius(30).unwrap(), -1);
        assert!(moebius(0).is_err());
    }

    #[test]
    fn euler_phi_values() {
        assert_eq!(euler_phi(1).unwrap(), 1);
        assert_eq!(euler_phi(6).unwrap(), 2);
        assert_eq!(euler_phi(17).unwrap(), 16);
        assert_eq!(euler_phi(36).unwrap(), 12);
    }

    #[test]
    fn divisors_of_twelve() {
        assert_eq!(divisors(12).unwrap(), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1).unwrap(), vec![1]);
    }

    #[test]
    fn convolution_identity() {
        let n = 40;
        let a: Vec<Rational> = (0..=n).map(|i| rat(i as i64 * 3 - 7, 2)).collect();
        let e = dirichlet_identity(n);
        assert_eq!(dirichlet_convolve(&a, &e)[1..], a[1..]);
    }

    #[test]
    fn moebius_inverts_ones() {
        let n = 200;
        let ones: Vec<Rational> = (0..=n).map(|_| rat(1, 1)).collect();
        let mu: Vec<Rational> = (0..=n)
            .map(|i| {
                if i == 0 {
                    Rational::new()
                } else {
                    rat(moebius(i as u64).unwrap() as i64, 1)
                }
            })
            .collect();
        assert_eq!(dirichlet_convolve(&mu, &ones), dirichlet_identity(n));
    }

    #[test]
    fn inverse_of_j_is_h() {
        let n = 300;
        let mut j = vec![rat(-1, 1); n + 1];
        j[0] = Rational::new();
        j[1] = rat(1, 1);
        let inv = dirichlet_inverse(&j).unwrap();
        let h = h_sequence(n);
        for i in 1..=n {
            assert_eq!(inv[i], Rational::from(h.get(i)));
        }
    }

    #[test]
    fn h_small_values() {
        let h = h_sequence(12);
        assert_eq!(*h.get(1), 1);
        assert_eq!(*h.get(2), 1);
        assert_eq!(*h.get(4), 2);
        assert_eq!(*h.get(6), 3);
        assert_eq!(*h.get(12), 8);
    }

    #[test]
    fn h_recovers_convolved_sequence() {
        // If a = b * H then b_n = a_n - Σ_{d|n, d<n} a_d.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let n = 200;
        let h = h_sequence(n);
        let b: Vec<Rational> = (0..=n)
            .map(|i| {
                if i == 0 {
                    Rational::new()
                } else {
                    rat(rng.gen_range(-50..=50), 1)
                }
            })
            .collect();
        let hr: Vec<Rational> = (0..=n)
            .map(|i| {
                if i == 0 {
                    Rational::new()
                } else {
                    Rational::from(h.get(i))
                }
            })
            .collect();
        let a = dirichlet_convolve(&b, &hr);
        for m in 1..=n {
            let mut s = Rational::new();
            for d in divisors(m as u64).unwrap() {
                let d = d as usize;
                if d < m {
                    s += &a[d];
                }
            }
            assert_eq!(b[m], Rational::from(&a[m] - &s));
        }
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), rat(1, 1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(3), rat(0, 1));
        assert_eq!(bernoulli(4), rat(-1, 30));
        assert_eq!(bernoulli(12), rat(-691, 2730));
    }

    #[test]
    fn partition_count_matches() {
        // p(1..10) = 1, 2, 3, 5, 7, 11, 15, 22, 30, 42
        let expected = [1usize, 2, 3, 5, 7, 11, 15, 22, 30, 42];
        for (n, want) in (1..=10).zip(expected) {
            let mut count = 0;
            visit_partitions(n, |_| count += 1);
            assert_eq!(count, want, "partition count of {n}");
        }
    }

    #[test]
    fn partition_weights_sum_to_n() {
        visit_partitions(9, |counts| {
            let total: usize = (1..counts.len()).map(|i| i * counts[i] as usize).sum();
            assert_eq!(total, 9);
        });
    }
}

//! Product exponents: for `f(z) = 1 + Σ b_n z^n` without zeros and a sign
//! sequence `ε_n = ±1`, there is a unique sequence `α_n` with
//! `f(z) = ∏ (1 + ε_n z^n)^{α_n}`. Expanding `z f'/f` term by term
//! (`ε n α z^n / (1 + ε z^n) = Σ_k ε (-ε)^{k-1} n α z^{nk}`) and comparing
//! coefficients yields the divisor-sum identity
//!
//! ```text
//! -g_n = Σ_{d|n} d · α_d · (-ε_d)^{n/d}
//! ```
//!
//! where `g_n` are the coefficients of `f'/f`. This module solves that
//! recursion for any sign choice, provides the Möbius-inversion fast path
//! for the all-minus case (`n α_n = -Σ_{d|n} g_d μ(n/d)`), the
//! term-by-term rewriting that makes every exponent non-negative, and two
//! independent reconstructions of the Taylor coefficients used to
//! cross-validate everything.

use rug::{Complete, Integer, Rational};

use crate::arith::{divisors, moebius, visit_partitions};
use crate::qseries::RationalSeries;

/// One factor sign in `(1 + ε z^n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// How to choose the sign sequence when solving for exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignChoice {
    AllMinus,
    AllPlus,
    /// Explicit signs for `ε_1..ε_M`; entry `i` is `ε_{i+1}`.
    Explicit(Vec<Sign>),
}

impl SignChoice {
    fn sign_at(&self, n: usize) -> Sign {
        match self {
            SignChoice::AllMinus => Sign::Minus,
            SignChoice::AllPlus => Sign::Plus,
            SignChoice::Explicit(signs) => {
                assert!(n >= 1 && n <= signs.len(), "sign index {n} out of range");
                signs[n - 1]
            }
        }
    }
}

/// Exponents `α_1..α_M` paired with their signs `ε_1..ε_M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentSequence {
    signs: Vec<Sign>,
    alphas: Vec<Rational>,
}

impl ExponentSequence {
    pub fn new(signs: Vec<Sign>, alphas: Vec<Rational>) -> Self {
        assert_eq!(signs.len(), alphas.len(), "signs and exponents must align");
        Self { signs, alphas }
    }

    pub fn order(&self) -> usize {
        self.alphas.len()
    }

    /// `α_n`, 1-indexed.
    pub fn alpha(&self, n: usize) -> &Rational {
        assert!(
            n >= 1 && n <= self.order(),
            "exponent index {n} out of range"
        );
        &self.alphas[n - 1]
    }

    /// `ε_n`, 1-indexed.
    pub fn sign(&self, n: usize) -> Sign {
        assert!(n >= 1 && n <= self.order(), "sign index {n} out of range");
        self.signs[n - 1]
    }

    pub fn is_all_minus(&self) -> bool {
        self.signs.iter().all(|s| *s == Sign::Minus)
    }

    /// Iterate `(n, ε_n, α_n)` for `n = 1..=M`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, Sign, &Rational)> {
        self.signs
            .iter()
            .zip(&self.alphas)
            .enumerate()
            .map(|(i, (s, a))| (i + 1, *s, a))
    }

    /// Re-check the defining identity against a logarithmic-derivative
    /// series: true iff `Σ_{d|n} d α_d (-ε_d)^{n/d} == -g_n` for every
    /// `n` up to the sequence order.
    pub fn satisfies_defining_identity(&self, g: &RationalSeries) -> bool {
        if g.order() + 1 < self.order() {
            return false;
        }
        for n in 1..=self.order() {
            let mut acc = Rational::new();
            for d in divisors(n as u64).expect("n >= 1") {
                let d = d as usize;
                let mut term = Rational::from(self.alpha(d) * Rational::from(d as u64));
                if self.sign(d) == Sign::Plus && (n / d) % 2 == 1 {
                    term = -term;
                }
                acc += term;
            }
            if acc != Rational::from(-g.log_deriv_coeff(n)) {
                return false;
            }
        }
        true
    }
}

/// Solve the divisor-sum recursion for `α_1..α_order` given the
/// logarithmic-derivative series of `f` (so `g.log_deriv_coeff(n)` must be
/// defined for `n <= order`).
///
/// Ascending in `n`, the identity isolates
/// `α_n = (-ε_n) · (-g_n - Σ_{d|n, d<n} d α_d (-ε_d)^{n/d}) / n`; the
/// recursion is always solvable and the result is the unique exponent
/// sequence for the chosen signs.
pub fn product_exponents(g: &RationalSeries, signs: &SignChoice, order: usize) -> ExponentSequence {
    assert!(order >= 1, "expansion order must be at least 1");
    assert!(
        g.order() + 1 >= order,
        "logarithmic derivative known to index {}, need {order}",
        g.order() + 1
    );
    let mut alphas: Vec<Rational> = Vec::with_capacity(order);
    let mut out_signs = Vec::with_capacity(order);
    for n in 1..=order {
        let mut acc = Rational::from(-g.log_deriv_coeff(n));
        for d in divisors(n as u64).expect("n >= 1") {
            let d = d as usize;
            if d == n {
                continue;
            }
            let alpha_d = &alphas[d - 1];
            if *alpha_d == 0 {
                continue;
            }
            // subtract d·α_d·(-ε_d)^{n/d}
            let negative_power = out_signs[d - 1] == Sign::Plus && (n / d) % 2 == 1;
            let term = alpha_d * Rational::from(d as u64);
            if negative_power {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let sign_n = signs.sign_at(n);
        if sign_n == Sign::Plus {
            acc = -acc;
        }
        alphas.push(acc / Rational::from(n as u64));
        out_signs.push(sign_n);
    }
    ExponentSequence::new(out_signs, alphas)
}

/// All-minus exponents by Möbius inversion: `n α_n = -Σ_{d|n} g_d μ(n/d)`.
///
/// Same defining equation as [`product_exponents`] with [`SignChoice::AllMinus`],
/// solved through an independent code path; the two are cross-checked in
/// the test suite.
pub fn product_exponents_moebius(g: &RationalSeries, order: usize) -> ExponentSequence {
    assert!(order >= 1, "expansion order must be at least 1");
    assert!(
        g.order() + 1 >= order,
        "logarithmic derivative known to index {}, need {order}",
        g.order() + 1
    );
    let mut alphas = Vec::with_capacity(order);
    for n in 1..=order {
        let mut acc = Rational::new();
        for d in divisors(n as u64).expect("n >= 1") {
            let mu = moebius(n as u64 / d).expect("divisor quotient >= 1");
            if mu != 0 {
                let g_d = g.log_deriv_coeff(d as usize);
                if *g_d != 0 {
                    acc += g_d * Rational::from(mu);
                }
            }
        }
        alphas.push(-acc / Rational::from(n as u64));
    }
    ExponentSequence::new(vec![Sign::Minus; order], alphas)
}

/// Rewrite an all-minus exponent sequence so that every exponent is
/// non-negative, flipping `ε_n` to `+1` where needed.
///
/// Processes `n = 1..M` ascending over a working copy `w` of the input:
/// if `w_n >= 0` keep `ε_n = -1` and `α_n = w_n`; otherwise set
/// `ε_n = +1`, `α_n = -w_n`, and fold `w_n` into `w_{2n}` (the identity
/// `n z^{n-1}/(1-z^n) = n z^{n-1}/(1+z^n) + 2n z^{2n-1}/(1-z^{2n})` moves
/// the flipped term's tail to index 2n). Ties at zero keep `ε_n = -1`.
/// The result represents the same function.
pub fn rewrite_nonnegative(hat: &ExponentSequence) -> ExponentSequence {
    assert!(
        hat.is_all_minus(),
        "rewriting starts from the all-minus exponent sequence"
    );
    let m = hat.order();
    let mut work: Vec<Rational> = hat.alphas.clone();
    let mut signs = Vec::with_capacity(m);
    let mut alphas = Vec::with_capacity(m);
    for n in 1..=m {
        let w = work[n - 1].clone();
        if w >= 0 {
            signs.push(Sign::Minus);
            alphas.push(w);
        } else {
            signs.push(Sign::Plus);
            alphas.push(Rational::from(-&w));
            if 2 * n <= m {
                work[2 * n - 1] += w;
            }
        }
    }
    ExponentSequence::new(signs, alphas)
}

/// Taylor coefficients of the finite product
/// `∏_{k=1}^{M} (1 + ε_k z^k)^{α_k}` to order `M`.
///
/// Truncating the product at `M` does not disturb coefficients `<= M`
/// because every omitted factor is `1 + O(z^{M+1})`.
pub fn reconstruct_taylor(seq: &ExponentSequence) -> RationalSeries {
    let m = seq.order();
    let mut acc = RationalSeries::one(m);
    for (k, sign, alpha) in seq.iter() {
        if *alpha == 0 {
            continue;
        }
        let base = RationalSeries::one(m).add(&RationalSeries::monomial(
            Rational::from(sign.value()),
            k,
            m,
        ));
        let factor = base.pow(alpha).expect("constant term is 1");
        acc = acc.mul(&factor);
    }
    acc
}

/// Generalized binomial coefficient `C(α, k) = ∏_{j<k} (α - j) / k!`.
pub fn binomial_rational(alpha: &Rational, k: u32) -> Rational {
    let mut num = Rational::from(1);
    for j in 0..k {
        num *= alpha - Rational::from(j);
    }
    num / Rational::from(Integer::factorial(k).complete())
}

/// Taylor coefficient `b_n` directly from the partition sum
/// `b_n = Σ ∏_i C(α_i, k_i) ε_i^{k_i}` over all `k_1 + 2k_2 + ... + nk_n = n`.
///
/// Exponential in `n`; callers keep `n` small (≤ ~15). Serves as an oracle
/// independent of [`reconstruct_taylor`].
pub fn taylor_coeff_partition_sum(seq: &ExponentSequence, n: usize) -> Rational {
    assert!(
        n >= 1 && n <= seq.order(),
        "coefficient index {n} out of range"
    );
    let mut total = Rational::new();
    visit_partitions(n, |counts| {
        let mut term = Rational::from(1);
        for i in 1..=n {
            let k = counts[i];
            if k == 0 {
                continue;
            }
            term *= binomial_rational(seq.alpha(i), k);
            if term == 0 {
                break;
            }
            if seq.sign(i) == Sign::Minus && k % 2 == 1 {
                term = -term;
            }
        }
        total += term;
    });
    total
}

/// Check `|α_n| <= n Σ_{k=1}^{n} |g_k|` for every `n` up to the sequence
/// order (exact rational comparison).
pub fn log_deriv_growth_bound(g: &RationalSeries, seq: &ExponentSequence) -> bool {
    let m = seq.order();
    assert!(
        g.order() + 1 >= m,
        "logarithmic derivative shorter than exponents"
    );
    let mut sum_abs = Rational::new();
    for n in 1..=m {
        sum_abs += Rational::from(g.log_deriv_coeff(n).abs_ref());
        let bound = &sum_abs * Rational::from(n as u64);
        if Rational::from(seq.alpha(n).abs_ref()) > bound {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::euler_phi;
    use crate::qseries::log_deriv_series;
    use rug::ops::Pow;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    /// g-series of `e^z`: g_1 = 1, rest 0.
    fn g_exp(order: usize) -> RationalSeries {
        RationalSeries::monomial(rat(1, 1), 0, order - 1)
    }

    /// g-series of `e^{z/(z-1)}`: g_n = -n.
    fn g_phi(order: usize) -> RationalSeries {
        RationalSeries::from_coeffs((1..=order).map(|n| rat(-(n as i64), 1)).collect())
    }

    #[test]
    fn exponents_for_exp_are_minus_moebius_over_n() {
        let seq = product_exponents(&g_exp(10), &SignChoice::AllMinus, 10);
        assert_eq!(*seq.alpha(1), rat(-1, 1));
        assert_eq!(*seq.alpha(2), rat(1, 2));
        assert_eq!(*seq.alpha(3), rat(1, 3));
        assert_eq!(*seq.alpha(4), rat(0, 1));
        for n in 1..=10 {
            let mu = moebius(n as u64).unwrap() as i64;
            assert_eq!(*seq.alpha(n), rat(-mu, n as i64), "alpha_{n}");
        }
    }

    #[test]
    fn exponents_for_phi_example() {
        let seq = product_exponents(&g_phi(12), &SignChoice::AllMinus, 12);
        assert_eq!(*seq.alpha(1), rat(1, 1));
        assert_eq!(*seq.alpha(2), rat(1, 2));
        assert_eq!(*seq.alpha(3), rat(2, 3));
        assert_eq!(*seq.alpha(4), rat(1, 2));
        for n in 1..=12 {
            let phi = euler_phi(n as u64).unwrap() as i64;
            assert_eq!(*seq.alpha(n), rat(phi, n as i64), "alpha_{n}");
        }
    }

    #[test]
    fn exponents_for_one_plus_z() {
        // f = 1 + z: g_n = (-1)^{n-1}; with all-minus signs
        // 1 + z = (1 - z^2)/(1 - z), so α_1 = -1, α_2 = 1, α_n = 0 after.
        let g = RationalSeries::from_coeffs(
            (1..=10)
                .map(|n| rat(if n % 2 == 1 { 1 } else { -1 }, 1))
                .collect(),
        );
        let seq = product_exponents(&g, &SignChoice::AllMinus, 10);
        assert_eq!(*seq.alpha(1), rat(-1, 1));
        assert_eq!(*seq.alpha(2), rat(1, 1));
        for n in 3..=10 {
            assert_eq!(*seq.alpha(n), rat(0, 1), "alpha_{n}");
        }
    }

    #[test]
    fn moebius_path_on_a1_data() {
        // A1 integrand: g_1 = 0, g_2 = -1/12 gives α_1 = 0, α_2 = 1/24.
        let g = RationalSeries::from_coeffs(vec![rat(0, 1), rat(-1, 12)]);
        let seq = product_exponents_moebius(&g, 2);
        assert_eq!(*seq.alpha(1), rat(0, 1));
        assert_eq!(*seq.alpha(2), rat(1, 24));
    }

    #[test]
    fn moebius_path_zero_g() {
        let g = RationalSeries::zero(9);
        let seq = product_exponents_moebius(&g, 10);
        for n in 1..=10 {
            assert_eq!(*seq.alpha(n), rat(0, 1));
        }
    }

    #[test]
    fn defining_identity_reproduces_g() {
        // Substituting α back into Σ_{d|n} d α_d (-ε_d)^{n/d} gives -g_n
        // for any sign choice.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let order = 40;
        let g = RationalSeries::from_coeffs(
            (0..order)
                .map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=9)))
                .collect(),
        );
        let signs: Vec<Sign> = (0..order)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    Sign::Plus
                } else {
                    Sign::Minus
                }
            })
            .collect();
        let seq = product_exponents(&g, &SignChoice::Explicit(signs), order);
        for n in 1..=order {
            let mut acc = Rational::new();
            for d in divisors(n as u64).unwrap() {
                let d = d as usize;
                let mut term = seq.alpha(d) * Rational::from(d as u64);
                if seq.sign(d) == Sign::Plus && (n / d) % 2 == 1 {
                    term = -term;
                }
                acc += term;
            }
            assert_eq!(acc, Rational::from(-g.log_deriv_coeff(n)), "n = {n}");
        }
        assert!(seq.satisfies_defining_identity(&g));
        // tampering with any exponent must break the identity
        let mut alphas: Vec<Rational> = (1..=order).map(|n| seq.alpha(n).clone()).collect();
        alphas[17] += 1;
        let tampered = ExponentSequence::new((1..=order).map(|n| seq.sign(n)).collect(), alphas);
        assert!(!tampered.satisfies_defining_identity(&g));
    }

    #[test]
    fn plus_signs_match_direct_expansion() {
        // f = (1+z)^a has f'/f = a/(1+z), so g_n = a·(-1)^{n-1}; the
        // all-plus expansion must recover α_1 = a and nothing else.
        let a = rat(5, 3);
        let order = 12;
        let g = RationalSeries::from_coeffs(
            (1..=order)
                .map(|n| if n % 2 == 1 { a.clone() } else { rat(-5, 3) })
                .collect(),
        );
        let seq = product_exponents(&g, &SignChoice::AllPlus, order);
        assert_eq!(*seq.alpha(1), a);
        for n in 2..=order {
            assert_eq!(*seq.alpha(n), rat(0, 1), "alpha_{n}");
        }
    }

    #[test]
    fn moebius_agrees_with_recursion() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let order = 100;
        let g = RationalSeries::from_coeffs(
            (0..order)
                .map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=9)))
                .collect(),
        );
        let a = product_exponents(&g, &SignChoice::AllMinus, order);
        let b = product_exponents_moebius(&g, order);
        assert_eq!(a, b);
    }

    #[test]
    fn reconstruct_exp_minus_z() {
        // α_n = μ(n)/n with all-minus signs multiplies out to e^{-z}.
        let order = 10;
        let alphas: Vec<Rational> = (1..=order)
            .map(|n| rat(moebius(n as u64).unwrap() as i64, n as i64))
            .collect();
        let seq = ExponentSequence::new(vec![Sign::Minus; order], alphas);
        let b = reconstruct_taylor(&seq);
        let mut fact = Rational::from(1);
        for n in 0..=order {
            if n > 0 {
                fact *= Rational::from(n as u64);
            }
            let want = Rational::from(if n % 2 == 0 { 1 } else { -1 }) / &fact;
            assert_eq!(*b.coeff(n), want, "coefficient {n}");
        }
    }

    #[test]
    fn reconstruct_phi_exponents() {
        // α_n = φ(n)/n with all-minus signs multiplies out to e^{z/(z-1)}.
        let order = 10;
        let alphas: Vec<Rational> = (1..=order)
            .map(|n| rat(euler_phi(n as u64).unwrap() as i64, n as i64))
            .collect();
        let seq = ExponentSequence::new(vec![Sign::Minus; order], alphas);
        let inner = RationalSeries::var(order)
            .div(&RationalSeries::var(order).sub(&RationalSeries::one(order)))
            .unwrap();
        assert_eq!(reconstruct_taylor(&seq), inner.exp().unwrap());
    }

    #[test]
    fn reconstruct_zero_exponents() {
        let seq = ExponentSequence::new(vec![Sign::Minus; 6], vec![Rational::new(); 6]);
        assert_eq!(reconstruct_taylor(&seq), RationalSeries::one(6));
    }

    #[test]
    fn rewrite_one_plus_z_case() {
        // α̂ = (-1, 1, 0, ...) for f = 1 + z rewrites to the single factor
        // (1 + z)^1.
        let mut alphas = vec![rat(-1, 1), rat(1, 1)];
        alphas.extend((3..=8).map(|_| rat(0, 1)));
        let hat = ExponentSequence::new(vec![Sign::Minus; 8], alphas);
        let out = rewrite_nonnegative(&hat);
        assert_eq!(out.sign(1), Sign::Plus);
        assert_eq!(*out.alpha(1), rat(1, 1));
        for n in 2..=8 {
            assert_eq!(*out.alpha(n), rat(0, 1), "alpha_{n}");
        }
        let expected = RationalSeries::one(8).add(&RationalSeries::var(8));
        assert_eq!(reconstruct_taylor(&out), expected);
        assert_eq!(reconstruct_taylor(&hat), expected);
    }

    #[test]
    fn rewrite_keeps_nonnegative_input() {
        let alphas: Vec<Rational> = (1..=10).map(|n| rat(n, 3)).collect();
        let hat = ExponentSequence::new(vec![Sign::Minus; 10], alphas);
        let out = rewrite_nonnegative(&hat);
        assert_eq!(out, hat);
    }

    #[test]
    fn rewrite_preserves_function() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let order = 20;
            let alphas: Vec<Rational> = (0..order)
                .map(|_| rat(rng.gen_range(-6..=6), rng.gen_range(1..=6)))
                .collect();
            let hat = ExponentSequence::new(vec![Sign::Minus; order], alphas);
            let out = rewrite_nonnegative(&hat);
            for n in 1..=order {
                assert!(*out.alpha(n) >= 0, "alpha_{n} negative after rewrite");
            }
            assert_eq!(reconstruct_taylor(&out), reconstruct_taylor(&hat));
        }
    }

    #[test]
    fn partition_sum_first_coefficient() {
        let seq = ExponentSequence::new(
            vec![Sign::Plus, Sign::Minus, Sign::Minus],
            vec![rat(5, 7), rat(1, 3), rat(-2, 9)],
        );
        // b_1 = ε_1 α_1
        assert_eq!(taylor_coeff_partition_sum(&seq, 1), rat(5, 7));
    }

    #[test]
    fn partition_sum_matches_exp_taylor() {
        let order = 8;
        let alphas: Vec<Rational> = (1..=order)
            .map(|n| rat(moebius(n as u64).unwrap() as i64, n as i64))
            .collect();
        let seq = ExponentSequence::new(vec![Sign::Minus; order], alphas);
        // b_3 of e^{-z} is -1/6
        assert_eq!(taylor_coeff_partition_sum(&seq, 3), rat(-1, 6));
        let b = reconstruct_taylor(&seq);
        for n in 1..=order {
            assert_eq!(taylor_coeff_partition_sum(&seq, n), *b.coeff(n), "b_{n}");
        }
    }

    #[test]
    fn partition_sum_zero_exponents() {
        let seq = ExponentSequence::new(vec![Sign::Minus; 9], vec![Rational::new(); 9]);
        for n in 1..=9 {
            assert_eq!(taylor_coeff_partition_sum(&seq, n), rat(0, 1));
        }
    }

    #[test]
    fn growth_bound_exp_data() {
        let g = g_exp(30);
        let seq = product_exponents(&g, &SignChoice::AllMinus, 30);
        assert!(log_deriv_growth_bound(&g, &seq));
    }

    #[test]
    fn growth_bound_zero_g() {
        let g = RationalSeries::zero(19);
        let seq = product_exponents(&g, &SignChoice::AllMinus, 20);
        assert!(log_deriv_growth_bound(&g, &seq));
    }

    #[test]
    fn growth_bound_random_g() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(10);
        for _ in 0..5 {
            let order = 100;
            let g = RationalSeries::from_coeffs(
                (0..order)
                    .map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=9)))
                    .collect(),
            );
            let seq = product_exponents(&g, &SignChoice::AllMinus, order);
            assert!(log_deriv_growth_bound(&g, &seq));
        }
    }

    #[test]
    fn cauchy_style_decay_transfers_to_exponents() {
        // If |g_n| <= B / R^n then |α_n| <= B / R^n (R <= 1), checked in
        // exact rationals on data saturating the bound pattern.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let order = 40;
        let r = rat(9, 10);
        let b_bound = rat(3, 1);
        let g = RationalSeries::from_coeffs(
            (1..=order)
                .map(|n| {
                    let envelope = &b_bound / r.clone().pow(n as u32);
                    let jitter = rat(rng.gen_range(-9..=9), 9);
                    envelope * jitter
                })
                .collect(),
        );
        let seq = product_exponents_moebius(&g, order);
        for n in 1..=order {
            let envelope = &b_bound / r.clone().pow(n as u32);
            assert!(
                Rational::from(seq.alpha(n).abs_ref()) <= envelope,
                "decay bound fails at n = {n}"
            );
        }
    }

    #[test]
    fn integrality_both_directions() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        // integer Taylor coefficients -> integer exponents
        for _ in 0..5 {
            let order = 24;
            let mut coeffs = vec![rat(1, 1)];
            coeffs.extend((1..=order).map(|_| rat(rng.gen_range(-4..=4), 1)));
            let b = RationalSeries::from_coeffs(coeffs);
            let g = log_deriv_series(&b).unwrap();
            let seq = product_exponents(&g, &SignChoice::AllMinus, order);
            for n in 1..=order {
                assert!(seq.alpha(n).is_integer(), "alpha_{n} not integral");
            }
        }
        // integer exponents -> integer Taylor coefficients
        for _ in 0..5 {
            let order = 20;
            let signs: Vec<Sign> = (0..order)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    }
                })
                .collect();
            let alphas: Vec<Rational> = (0..order).map(|_| rat(rng.gen_range(-3..=3), 1)).collect();
            let seq = ExponentSequence::new(signs, alphas);
            let b = reconstruct_taylor(&seq);
            for n in 0..=order {
                assert!(b.coeff(n).is_integer(), "b_{n} not integral");
            }
        }
    }
}

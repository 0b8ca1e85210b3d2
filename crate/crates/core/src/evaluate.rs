//! End-to-end certified evaluation of `prefactor · ∏_p f(1/p)`.
//!
//! The product over primes `p_m, p_{m+1}, ...` equals the rapidly
//! convergent `∏_{n>=2} ζ_m(n)^{-α_n}`, where `α_n` are the all-minus
//! product exponents of `f` and `ζ_m` is the partial zeta function.
//! Truncating the tail at exponent `M` leaves a relative error of at most
//!
//! ```text
//! C(R, B, m, M) = (e-1) · B · p_m / ((R·p_m - 1) · (R·p_m)^M)
//! ```
//!
//! valid whenever `f` is zero-free on `|z| <= R`, `|f'/f| <= B` on
//! `|z| = R`, `R·p_m > 1` and `C <= 1`. The planner picks the smallest `M`
//! that pushes `C` three decimal orders below the digit target, entirely
//! in exact rational arithmetic; the first `m - 1` primes are evaluated
//! directly as `f(1/p_k)`.

use rug::ops::Pow;
use rug::{Integer, Rational};
use thiserror::Error;

use crate::arith::{sieve_covering, PrimeTable};
use crate::expand::{product_exponents_moebius, ExponentSequence};
use crate::funcs::{eval_point, taylor, ConstantSpec, Expr, FuncError};
use crate::mpreal::{precision_for_digits, zeta_table, BigReal, RealError, ZetaTable};
use crate::qseries::log_deriv_series;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("plan error: {0}")]
    Plan(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error(transparent)]
    Func(#[from] FuncError),
    #[error(transparent)]
    Real(#[from] RealError),
}

/// Rational upper bound for `e - 1`, so every planner comparison is exact.
fn e_minus_one_upper() -> Rational {
    Rational::from((17_182_818_284_590_453u64, 10_000_000_000_000_000u64))
}

/// The certified tail-truncation bound `C(R, B, m, M)` (with `e - 1`
/// replaced by a rational upper bound, so this slightly over-estimates).
pub fn truncation_bound(
    radius: &Rational,
    log_deriv_bound: &Rational,
    start_prime: u64,
    truncation_order: usize,
) -> Rational {
    let rp = radius * Rational::from(start_prime);
    let base = e_minus_one_upper() * log_deriv_bound * Rational::from(start_prime)
        / (rp.clone() - Rational::from(1));
    base / rp.pow(truncation_order as u32)
}

/// Everything fixed before any floating-point work happens.
#[derive(Debug, Clone)]
pub struct EvaluationPlan {
    pub radius: Rational,
    pub log_deriv_bound: Rational,
    /// Index `m` of the first prime folded into the zeta tail.
    pub start_index: usize,
    pub start_prime: u64,
    /// Largest exponent `M` kept in the tail product.
    pub truncation_order: usize,
    /// The bound `C(R, B, m, M)` for the selected `M`.
    pub truncation_bound: Rational,
    pub target_digits: u32,
    pub working_precision: u32,
    pub guard_digits: u32,
}

pub const DEFAULT_GUARD_DIGITS: u32 = 10;

/// Select the smallest `M > m` with `C(R, B, m, M) <= 10^{-(target+3)}`
/// (which also forces `C <= 1`), and fix the working precision for the
/// digit target.
pub fn make_plan(
    radius: &Rational,
    log_deriv_bound: &Rational,
    start_index: usize,
    target_digits: u32,
    guard_digits: u32,
    primes: &PrimeTable,
) -> Result<EvaluationPlan, EvalError> {
    if *radius <= 0 || *radius > 1 {
        return Err(EvalError::Validation(format!(
            "radius must lie in (0, 1], got {radius}"
        )));
    }
    if *log_deriv_bound <= 0 {
        return Err(EvalError::Validation(
            "the bound on |f'/f| must be positive".into(),
        ));
    }
    if !(1..=100_000).contains(&target_digits) {
        return Err(EvalError::Validation(format!(
            "target digits must lie in 1..=100000, got {target_digits}"
        )));
    }
    if start_index < 1 {
        return Err(EvalError::Validation(
            "start index must be at least 1".into(),
        ));
    }
    let start_prime = primes
        .nth_prime(start_index)
        .map_err(|e| EvalError::Plan(e.to_string()))?;
    let rp = radius * Rational::from(start_prime);
    if rp <= 1 {
        return Err(EvalError::Plan(format!(
            "R·p_m = {rp} <= 1 at start index {start_index}; raise the start index"
        )));
    }
    let threshold = Rational::from((Integer::from(1), Integer::from(10).pow(target_digits + 3)));
    let mut order = start_index + 1;
    let mut bound = truncation_bound(radius, log_deriv_bound, start_prime, order);
    while bound > threshold {
        order += 1;
        bound /= &rp;
        if order > 10_000_000 {
            return Err(EvalError::Plan(
                "R·p_m is too close to 1 for a practical truncation order".into(),
            ));
        }
    }
    let factor_digits = (order * start_index).to_string().len() as u32;
    let working_precision = precision_for_digits(target_digits + guard_digits + factor_digits);
    Ok(EvaluationPlan {
        radius: radius.clone(),
        log_deriv_bound: log_deriv_bound.clone(),
        start_index,
        start_prime,
        truncation_order: order,
        truncation_bound: bound,
        target_digits,
        working_precision,
        guard_digits,
    })
}

/// The tail `∏_{n=2}^{M} ζ_m(n)^{-α_n}`, computed as
/// `exp(-Σ α_n ln ζ_m(n))` at the table's precision.
///
/// Requires all-minus exponents with `α_1 = 0` (automatic for admissible
/// `f` since `f'(0) = 0`) and an exponent order matching the table.
pub fn tail_product(alpha: &ExponentSequence, table: &ZetaTable) -> BigReal {
    assert!(
        alpha.is_all_minus(),
        "the zeta tail uses the all-minus expansion"
    );
    assert_eq!(
        alpha.order(),
        table.max_exponent(),
        "exponent order must match the zeta table"
    );
    assert_eq!(*alpha.alpha(1), 0, "alpha_1 must vanish (f'(0) = 0)");
    let prec = table.precision();
    let mut sum = BigReal::zero(prec);
    for n in 2..=table.max_exponent() {
        let a = alpha.alpha(n);
        if *a == 0 {
            continue;
        }
        let ln = table.value(n).ln().expect("zeta values exceed 1");
        sum = sum.add(&BigReal::from_rational(a, prec).mul(&ln));
    }
    sum.neg().exp()
}

/// The head `∏_{k=1}^{m-1} f(1/p_k)`, each factor evaluated directly.
pub fn head_product(
    f: &Expr,
    start_index: usize,
    prec: u32,
    primes: &PrimeTable,
) -> Result<BigReal, EvalError> {
    let mut acc = BigReal::one(prec);
    for k in 1..start_index {
        let p = primes
            .nth_prime(k)
            .map_err(|e| EvalError::Plan(e.to_string()))?;
        let x = BigReal::from_rational(&Rational::from((1, p)), prec);
        acc = acc.mul(&eval_point(f, &x, prec)?);
    }
    Ok(acc)
}

/// A computed constant together with a rigorous relative error bound.
#[derive(Debug, Clone)]
pub struct CertifiedValue {
    pub value: BigReal,
    /// Relative tail-truncation bound (the plan's `C`).
    pub truncation_bound: Rational,
    /// Budget for all floating-point rounding: the rounded-operation
    /// count of the pipeline (each zeta entry stays under twice the
    /// working precision in operations, plus the head and assembly),
    /// over-counted and multiplied by the `2^{2-P}` per-operation bound.
    pub rounding_budget: Rational,
    pub certified_digits: u32,
    pub plan: EvaluationPlan,
}

impl CertifiedValue {
    pub fn total_relative_bound(&self) -> Rational {
        Rational::from(&self.truncation_bound + &self.rounding_budget)
    }

    /// Decimal rendering with two digits beyond the certified prefix.
    pub fn decimal_string(&self) -> String {
        self.value.to_decimal(self.certified_digits as usize + 2)
    }
}

/// Largest `d >= 0` with `bound <= 10^{-(d+1)}`.
fn digits_from_bound(bound: &Rational) -> u32 {
    let mut d = 0u32;
    let mut limit = Rational::from((1, 100));
    while *bound <= limit && d < 1_000_000 {
        d += 1;
        limit /= 10;
    }
    d
}

/// Full pipeline: Taylor coefficients, logarithmic derivative, all-minus
/// exponents, zeta table, head and tail products, and the certificate.
pub fn evaluate_constant(
    spec: &ConstantSpec,
    target_digits: u32,
    start_override: Option<usize>,
    guard_digits: u32,
) -> Result<CertifiedValue, EvalError> {
    let start_index = start_override.unwrap_or(spec.start_index);
    let primes = sieve_covering(start_index + 1);
    let plan = make_plan(
        &spec.radius,
        &spec.log_deriv_bound,
        start_index,
        target_digits,
        guard_digits,
        &primes,
    )?;
    if spec.prefactor.contains_var() {
        return Err(EvalError::Validation(
            "the prefactor must be a constant expression".into(),
        ));
    }
    let b = taylor(&spec.f, plan.truncation_order)?;
    if *b.coeff(0) != 1 {
        return Err(EvalError::Validation(format!(
            "f(0) must be 1, got {}",
            b.coeff(0)
        )));
    }
    if *b.coeff(1) != 0 {
        return Err(EvalError::Validation(format!(
            "f'(0) must be 0, got {}",
            b.coeff(1)
        )));
    }
    let g = log_deriv_series(&b).map_err(|e| EvalError::Validation(e.to_string()))?;
    let alpha = product_exponents_moebius(&g, plan.truncation_order);
    let table = zeta_table(
        plan.start_index,
        plan.truncation_order,
        plan.working_precision,
        &primes,
    )?;
    let tail = tail_product(&alpha, &table);
    let head = head_product(&spec.f, plan.start_index, plan.working_precision, &primes)?;
    let prefactor = eval_point(
        &spec.prefactor,
        &BigReal::zero(plan.working_precision),
        plan.working_precision,
    )?;
    let value = prefactor.mul(&head).mul(&tail);
    let op_count = 2u64
        * plan.working_precision as u64
        * (plan.truncation_order as u64 + plan.start_index as u64 + 2)
        + 4096;
    let rounding_budget = Rational::from((
        Integer::from(4 * op_count),
        Integer::from(Integer::i_pow_u(2, plan.working_precision)),
    ));
    let total = Rational::from(&plan.truncation_bound + &rounding_budget);
    let certified_digits = digits_from_bound(&total);
    Ok(CertifiedValue {
        value,
        truncation_bound: plan.truncation_bound.clone(),
        rounding_budget,
        certified_digits,
        plan,
    })
}

//! Exact truncated power-series arithmetic over arbitrary-precision
//! rationals.
//!
//! A [`RationalSeries`] stores the coefficients of indices `0..=order`;
//! every binary operation truncates to the minimum order of its operands
//! and no operation ever extends precision or rounds a coefficient.
//!
//! Indexing convention for logarithmic derivatives: a function
//! `f(z) = 1 + Σ_{n>=1} b_n z^n` has `f'(z)/f(z) = Σ_{n>=1} g_n z^{n-1}`,
//! so the series returned by [`log_deriv_series`] stores `g_{j+1}` at
//! coefficient index `j`. This is the one place the off-by-one lives;
//! callers address it through [`RationalSeries::log_deriv_coeff`].

use rug::Rational;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("valuation mismatch in division: numerator has valuation {num}, denominator {den}")]
    Valuation { num: usize, den: usize },
    #[error("division by a series that is zero to its full order")]
    ZeroDivisor,
    #[error("domain error: {0}")]
    Domain(String),
}

/// Truncated power series with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    coeffs: Vec<Rational>,
}

impl RationalSeries {
    /// Series from explicit coefficients for indices `0..coeffs.len()`.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series stores at least the constant term"
        );
        Self { coeffs }
    }

    pub fn constant(value: Rational, order: usize) -> Self {
        let mut coeffs = vec![Rational::new(); order + 1];
        coeffs[0] = value;
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Rational::new(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::from(1), order)
    }

    /// The series of the variable itself, truncated to `order`.
    pub fn var(order: usize) -> Self {
        Self::monomial(Rational::from(1), 1, order)
    }

    /// `c * z^k` truncated to `order` (zero if `k > order`).
    pub fn monomial(c: Rational, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// Truncation order, inclusive: coefficients `0..=order()` are exact.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        assert!(
            k <= self.order(),
            "coefficient index {k} beyond order {}",
            self.order()
        );
        &self.coeffs[k]
    }

    /// Coefficient `g_n` of a logarithmic-derivative series (see module doc).
    pub fn log_deriv_coeff(&self, n: usize) -> &Rational {
        assert!(n >= 1, "logarithmic-derivative coefficients are 1-indexed");
        self.coeff(n - 1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn truncated(&self, order: usize) -> Self {
        assert!(
            order <= self.order(),
            "cannot extend a series by truncation"
        );
        Self {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// Index of the first nonzero coefficient, or `None` if the series is
    /// zero to its full order.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| *c != 0)
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n)
            .map(|k| Rational::from(&self.coeffs[k] + &rhs.coeffs[k]))
            .collect();
        Self { coeffs }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n)
            .map(|k| Rational::from(&self.coeffs[k] - &rhs.coeffs[k]))
            .collect();
        Self { coeffs }
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| Rational::from(-c)).collect(),
        }
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| Rational::from(c * factor))
                .collect(),
        }
    }

    /// Cauchy product truncated to the minimum operand order.
    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        let mut coeffs = vec![Rational::new(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if *a == 0 {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n + 1 - i) {
                if *b != 0 {
                    coeffs[i + j] += Rational::from(a * b);
                }
            }
        }
        Self { coeffs }
    }

    /// Valuation-aware division: factors `z^v` out of both operands before
    /// inverting the unit part, so removable singularities like
    /// `(z + z^2/2 + ...) / z` divide exactly.
    ///
    /// The quotient is exact to order `min(order(a), order(b)) - v` where
    /// `v` is the valuation of the denominator.
    pub fn div(&self, rhs: &Self) -> Result<Self, SeriesError> {
        let den_val = rhs.valuation().ok_or(SeriesError::ZeroDivisor)?;
        if self.is_zero() {
            // 0 / b is 0 to the full common shifted order.
            let n = self.order().min(rhs.order()) - den_val;
            return Ok(Self::zero(n));
        }
        let num_val = self.valuation().expect("nonzero series");
        if num_val < den_val {
            return Err(SeriesError::Valuation {
                num: num_val,
                den: den_val,
            });
        }
        let n = self.order().min(rhs.order()) - den_val;
        let a = &self.coeffs[den_val..];
        let b = &rhs.coeffs[den_val..];
        let mut q = vec![Rational::new(); n + 1];
        for k in 0..=n {
            let mut acc = a[k].clone();
            for j in 0..k {
                if q[j] != 0 && b[k - j] != 0 {
                    acc -= Rational::from(&q[j] * &b[k - j]);
                }
            }
            q[k] = acc / &b[0];
        }
        Ok(Self { coeffs: q })
    }

    /// Termwise derivative; the result is exact one order lower.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        let coeffs = (1..=self.order())
            .map(|k| &self.coeffs[k] * Rational::from(k as u64))
            .collect();
        Self { coeffs }
    }

    /// Termwise antiderivative with constant term 0; exact one order higher.
    pub fn integrate(&self) -> Self {
        let mut coeffs = vec![Rational::new(); self.order() + 2];
        for k in 0..=self.order() {
            coeffs[k + 1] = &self.coeffs[k] / Rational::from(k as u64 + 1);
        }
        Self { coeffs }
    }

    /// Formal logarithm of a series with constant term 1, via
    /// `log(a) = ∫ a'/a`.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if self.coeffs[0] != 1 {
            return Err(SeriesError::Domain("log requires constant term 1".into()));
        }
        if self.order() == 0 {
            return Ok(Self::zero(0));
        }
        Ok(self.derivative().div(self)?.integrate())
    }

    /// Formal exponential of a series with constant term 0, by the ODE
    /// recursion `n y_n = Σ_{k=1}^{n} k a_k y_{n-k}`.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if self.coeffs[0] != 0 {
            return Err(SeriesError::Domain("exp requires constant term 0".into()));
        }
        let n = self.order();
        let mut y = vec![Rational::new(); n + 1];
        y[0] = Rational::from(1);
        for m in 1..=n {
            let mut acc = Rational::new();
            for k in 1..=m {
                if self.coeffs[k] != 0 && y[m - k] != 0 {
                    acc += (&self.coeffs[k] * Rational::from(k as u64)) * &y[m - k];
                }
            }
            y[m] = acc / Rational::from(m as u64);
        }
        Ok(Self { coeffs: y })
    }

    /// `self^r` for an exact rational exponent.
    ///
    /// Integer exponents go through repeated squaring (and valuation-aware
    /// inversion when negative), so they work for any invertible series;
    /// fractional exponents require constant term 1 and use
    /// `exp(r · log(self))`.
    pub fn pow(&self, r: &Rational) -> Result<Self, SeriesError> {
        if *r == 0 {
            return Ok(Self::one(self.order()));
        }
        if r.is_integer() {
            let mag = Rational::from(r.abs_ref());
            if let Some(e) = mag.numer().to_u64() {
                let p = self.pow_u64(e);
                return if *r < 0 {
                    Self::one(self.order()).div(&p)
                } else {
                    Ok(p)
                };
            }
        }
        if self.coeffs[0] != 1 {
            return Err(SeriesError::Domain(
                "fractional powers require constant term 1".into(),
            ));
        }
        self.log()?.scale(r).exp()
    }

    fn pow_u64(&self, mut e: u64) -> Self {
        let mut result = Self::one(self.order());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }
}

/// Coefficients of `f'/f` from the Taylor coefficients of `f` with
/// `f(0) = 1`, by the recursion `g_n = n b_n - Σ_{k=1}^{n-1} b_k g_{n-k}`.
///
/// The result has order `N - 1` and stores `g_{j+1}` at index `j`.
pub fn log_deriv_series(b: &RationalSeries) -> Result<RationalSeries, SeriesError> {
    if *b.coeff(0) != 1 {
        return Err(SeriesError::Domain(
            "logarithmic derivative requires constant term 1".into(),
        ));
    }
    if b.order() == 0 {
        return Err(SeriesError::Domain(
            "logarithmic derivative needs at least order 1".into(),
        ));
    }
    let n = b.order();
    let mut g = vec![Rational::new(); n];
    for m in 1..=n {
        let mut acc = b.coeff(m) * Rational::from(m as u64);
        for k in 1..m {
            if *b.coeff(k) != 0 && g[m - k - 1] != 0 {
                acc -= Rational::from(b.coeff(k) * &g[m - k - 1]);
            }
        }
        g[m - 1] = acc;
    }
    Ok(RationalSeries::from_coeffs(g))
}

/// Inverse of [`log_deriv_series`]: Taylor coefficients of `f` with
/// `f(0) = 1` from the coefficients of `f'/f`, via
/// `n b_n = g_n + Σ_{k=1}^{n-1} b_k g_{n-k}`.
pub fn series_from_log_deriv(g: &RationalSeries) -> RationalSeries {
    let n = g.order() + 1;
    let mut b = vec![Rational::new(); n + 1];
    b[0] = Rational::from(1);
    for m in 1..=n {
        let mut acc = g.coeff(m - 1).clone();
        for k in 1..m {
            if b[k] != 0 && *g.coeff(m - k - 1) != 0 {
                acc += Rational::from(&b[k] * g.coeff(m - k - 1));
            }
        }
        b[m] = acc / Rational::from(m as u64);
    }
    RationalSeries::from_coeffs(b)
}

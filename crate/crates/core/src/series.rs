//! Dirichlet polynomials and their summation methods: evaluation,
//! translation, partial sums, and first/second Riesz means.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frequency::Frequency;
use crate::sum::ComplexSum;

/// Largest exponent argument before e^x overflows f64.
const EXP_OVERFLOW: f64 = 709.0;

/// A finite sum D = sum_n a_n e^{-lambda_n s}.
///
/// Immutable after construction; evaluation uses compensated accumulation
/// throughout. Terms with coefficient exactly zero are skipped by every
/// evaluator, so zeroing a coefficient is equivalent to deleting the term.
#[derive(Clone, Debug, PartialEq)]
pub struct DirichletPolynomial {
    frequency: Frequency,
    coefficients: Vec<Complex64>,
}

/// Summation-method descriptor: first or second Riesz mean of order `k` and
/// length `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RieszParams {
    pub kind: RieszKind,
    pub order: f64,
    pub length: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RieszKind {
    /// Weights (1 - lambda_n/x)^k.
    First,
    /// Weights (1 - e^{lambda_n - x})^k.
    Second,
}

impl RieszParams {
    pub fn new(kind: RieszKind, order: f64, length: f64) -> Result<Self> {
        if !(order >= 0.0 && order.is_finite()) {
            return Err(Error::Validation(format!("Riesz order k must be >= 0, got {order}")));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::Validation(format!("Riesz length x must be > 0, got {length}")));
        }
        Ok(Self { kind, order, length })
    }

    pub fn first(order: f64, length: f64) -> Result<Self> {
        Self::new(RieszKind::First, order, length)
    }

    pub fn second(order: f64, length: f64) -> Result<Self> {
        Self::new(RieszKind::Second, order, length)
    }
}

/// The Riesz weight applied to a term with frequency `lambda` by the mean of
/// length `x` and order `k`. Zero for lambda >= x (strict cutoff); k = 0
/// gives the sharp cutoff of a partial sum.
///
/// Both kinds are computed through log1p/expm1 so that weights stay accurate
/// when lambda is close to the cutoff.
pub fn riesz_weight(kind: RieszKind, k: f64, lambda: f64, x: f64) -> f64 {
    if lambda >= x {
        return 0.0;
    }
    if k == 0.0 {
        return 1.0;
    }
    match kind {
        RieszKind::First => (k * (-lambda / x).ln_1p()).exp(),
        RieszKind::Second => {
            // 1 - e^{lambda-x} = -expm1(lambda - x), exact near the cutoff
            let one_minus_r = -(lambda - x).exp_m1();
            (k * one_minus_r.ln()).exp()
        }
    }
}

impl DirichletPolynomial {
    /// Validated constructor: one finite coefficient per frequency value.
    pub fn new(frequency: Frequency, coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len() != frequency.len() {
            return Err(Error::Validation(format!(
                "{} coefficients for {} frequencies",
                coefficients.len(),
                frequency.len()
            )));
        }
        if let Some(bad) = coefficients.iter().find(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Validation(format!("non-finite coefficient {bad}")));
        }
        Ok(Self { frequency, coefficients })
    }

    pub fn frequency(&self) -> &Frequency {
        &self.frequency
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Sum of |a_n| over the prefix.
    pub fn coefficient_mass(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm()).sum()
    }

    /// Coefficientwise scaling c * D.
    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            frequency: self.frequency.clone(),
            coefficients: self.coefficients.iter().map(|a| a * c).collect(),
        }
    }

    /// Coefficientwise sum; frequencies must match exactly.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.frequency != other.frequency {
            return Err(Error::FrequencyMismatch(
                "cannot add polynomials over different frequencies".into(),
            ));
        }
        Ok(Self {
            frequency: self.frequency.clone(),
            coefficients: self
                .coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    fn check_exp_range(&self, sigma: f64, weights: Option<&[f64]>) -> Result<()> {
        if sigma >= 0.0 {
            return Ok(());
        }
        // with Re s < 0 the largest term magnitude carries e^{lambda |sigma|}
        let lam_max = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(n, a)| {
                let w = weights.map_or(1.0, |w| w[*n]);
                (*a * w) != Complex64::new(0.0, 0.0)
            })
            .map(|(n, _)| self.frequency.values()[n])
            .next_back()
            .unwrap_or(0.0);
        if -lam_max * sigma > EXP_OVERFLOW {
            return Err(Error::Range(format!(
                "e^({} * {}) overflows during evaluation",
                lam_max, -sigma
            )));
        }
        Ok(())
    }

    fn eval_terms(&self, s: Complex64, weights: Option<&[f64]>) -> Result<Complex64> {
        self.check_exp_range(s.re, weights)?;
        let lambda = self.frequency.values();
        let mut acc = ComplexSum::new();
        for (n, &a) in self.coefficients.iter().enumerate() {
            let aw = match weights {
                Some(w) => a * w[n],
                None => a,
            };
            if aw == Complex64::new(0.0, 0.0) {
                continue;
            }
            let l = lambda[n];
            // e^{-l s} = e^{-l sigma} (cos(l t) - i sin(l t))
            let modulus = (-l * s.re).exp();
            let (sin, cos) = (l * s.im).sin_cos();
            acc.add(aw * Complex64::new(modulus * cos, -modulus * sin));
        }
        Ok(acc.value())
    }

    /// Evaluate D(s) = sum a_n e^{-lambda_n s} with compensated accumulation
    /// in increasing frequency order.
    pub fn evaluate(&self, s: Complex64) -> Result<Complex64> {
        self.eval_terms(s, None)
    }

    /// The translation D_z with coefficients a_n e^{-lambda_n z}.
    pub fn translate(&self, z: Complex64) -> Result<Self> {
        self.check_exp_range(z.re, None)?;
        let lambda = self.frequency.values();
        let coefficients = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(n, &a)| {
                let l = lambda[n];
                let modulus = (-l * z.re).exp();
                let (sin, cos) = (l * z.im).sin_cos();
                a * Complex64::new(modulus * cos, -modulus * sin)
            })
            .collect();
        Self::new(self.frequency.clone(), coefficients)
    }

    /// Partial sum sum_{lambda_n < x} a_n e^{-lambda_n s}.
    ///
    /// The cutoff is strict: terms with lambda_n = x are excluded.
    pub fn partial_sum(&self, x: f64, s: Complex64) -> Result<Complex64> {
        if !(x > 0.0) {
            return Err(Error::Validation(format!("partial sum length must be > 0, got {x}")));
        }
        let cutoff = self.frequency.count_below(x);
        let lambda = self.frequency.values();
        if s.re < 0.0 && cutoff > 0 {
            let lam_max = lambda[..cutoff]
                .iter()
                .zip(&self.coefficients)
                .filter(|(_, a)| **a != Complex64::new(0.0, 0.0))
                .map(|(l, _)| *l)
                .next_back()
                .unwrap_or(0.0);
            if -lam_max * s.re > EXP_OVERFLOW {
                return Err(Error::Range(format!(
                    "e^({} * {}) overflows during evaluation",
                    lam_max, -s.re
                )));
            }
        }
        let mut acc = ComplexSum::new();
        for (n, &a) in self.coefficients[..cutoff].iter().enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            let l = lambda[n];
            let modulus = (-l * s.re).exp();
            let (sin, cos) = (l * s.im).sin_cos();
            acc.add(a * Complex64::new(modulus * cos, -modulus * sin));
        }
        Ok(acc.value())
    }

    /// Riesz weights of `p` against this polynomial's own frequency.
    pub fn riesz_weights(&self, p: &RieszParams) -> Vec<f64> {
        self.frequency
            .values()
            .iter()
            .map(|&l| riesz_weight(p.kind, p.order, l, p.length))
            .collect()
    }

    /// The first or second Riesz mean R_x / S_x of D at s.
    ///
    /// Equals `self.riesz_coefficients(p).evaluate(s)` bit for bit: both go
    /// through the same weighted accumulation.
    pub fn riesz_mean(&self, p: &RieszParams, s: Complex64) -> Result<Complex64> {
        let weights = self.riesz_weights(p);
        self.eval_terms(s, Some(&weights))
    }

    /// Coefficient form of the Riesz mean: a_n multiplied by the weight, zero
    /// at and beyond the cutoff.
    pub fn riesz_coefficients(&self, p: &RieszParams) -> Self {
        let weights = self.riesz_weights(p);
        Self {
            frequency: self.frequency.clone(),
            coefficients: self
                .coefficients
                .iter()
                .zip(&weights)
                .map(|(a, &w)| a * w)
                .collect(),
        }
    }

    /// Riesz mean whose weights are read off a different frequency (the
    /// summation is over c_n = a_n e^{-lambda_n s} with cutoff and weights
    /// taken from `weight_frequency`).
    ///
    /// With `weight_frequency = lambda.exp()`, first kind and length e^x this
    /// is R_{e^x}^{e^lambda,k}(D), the second (lambda,k)-Riesz mean S_x.
    pub fn riesz_mean_weighted(
        &self,
        weight_frequency: &Frequency,
        kind: RieszKind,
        k: f64,
        x: f64,
        s: Complex64,
    ) -> Result<Complex64> {
        let weights = self.riesz_weights_from(weight_frequency, kind, k, x)?;
        self.eval_terms(s, Some(&weights))
    }

    /// Weight vector against a foreign frequency (see
    /// [`Self::riesz_mean_weighted`]).
    pub fn riesz_weights_from(
        &self,
        weight_frequency: &Frequency,
        kind: RieszKind,
        k: f64,
        x: f64,
    ) -> Result<Vec<f64>> {
        if weight_frequency.len() != self.len() {
            return Err(Error::FrequencyMismatch(format!(
                "weight frequency has {} values, polynomial has {}",
                weight_frequency.len(),
                self.len()
            )));
        }
        RieszParams::new(kind, k, x)?;
        Ok(weight_frequency
            .values()
            .iter()
            .map(|&l| riesz_weight(kind, k, l, x))
            .collect())
    }

    /// Cesaro mean of an ordinary Dirichlet polynomial: the arithmetic
    /// average of the partial sums sum_{n <= j} a_n n^{-s} for j = 0..Nc-1.
    ///
    /// Defined only for the ordinary frequency (log n); coefficients must
    /// cover n <= Nc - 1.
    pub fn cesaro_mean(&self, n_cesaro: usize, s: Complex64) -> Result<Complex64> {
        if n_cesaro == 0 {
            return Err(Error::Validation("Cesaro length must be >= 1".into()));
        }
        if !self.frequency.is_log_naturals(1e-12) {
            return Err(Error::Validation(
                "Cesaro means are defined for the ordinary frequency (log n) only".into(),
            ));
        }
        if self.len() + 1 < n_cesaro {
            return Err(Error::InsufficientPrefix(format!(
                "Cesaro mean of length {} needs coefficients up to n = {}, prefix has {}",
                n_cesaro,
                n_cesaro - 1,
                self.len()
            )));
        }
        self.check_exp_range(s.re, None)?;
        let lambda = self.frequency.values();
        let mut running = ComplexSum::new();
        let mut average = ComplexSum::new();
        // j = 0 contributes the empty sum
        for j in 1..n_cesaro {
            let a = self.coefficients[j - 1];
            if a != Complex64::new(0.0, 0.0) {
                let l = lambda[j - 1];
                let modulus = (-l * s.re).exp();
                let (sin, cos) = (l * s.im).sin_cos();
                running.add(a * Complex64::new(modulus * cos, -modulus * sin));
            }
            average.add(running.value());
        }
        Ok(average.value() / n_cesaro as f64)
    }
}

// On the wire: {"frequency": [...], "coefficients": [[re, im], ...]}.
#[derive(Serialize, Deserialize)]
struct PolyRepr {
    frequency: Frequency,
    coefficients: Vec<(f64, f64)>,
}

impl Serialize for DirichletPolynomial {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            frequency: self.frequency.clone(),
            coefficients: self.coefficients.iter().map(|c| (c.re, c.im)).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DirichletPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(deserializer)?;
        DirichletPolynomial::new(
            repr.frequency,
            repr.coefficients
                .into_iter()
                .map(|(re, im)| Complex64::new(re, im))
                .collect(),
        )
        .map_err(serde::de::Error::custom)
    }
}

//! Frequency prefixes: the strictly increasing nonnegative sequences that
//! index every Dirichlet polynomial in this crate.
//!
//! All frequencies here are finite prefixes. Asymptotic properties of the
//! full sequence (unboundedness, gap conditions "in the limit") are probed
//! on the prefix with explicit windows, never certified.

use std::fmt;
use std::sync::Arc;

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite strictly increasing prefix lambda_1 < ... < lambda_N of
/// nonnegative reals.
///
/// Values are shared behind an `Arc`: clones are cheap and polynomials built
/// from the same construction compare equal bit for bit. Indexing is by
/// exact binary equality; construct a frequency once and share it.
#[derive(Clone, Debug)]
pub struct Frequency {
    values: Arc<Vec<f64>>,
    label: Option<String>,
}

impl PartialEq for Frequency {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.values, &other.values) || self.values == other.values
    }
}

impl Frequency {
    /// Validated constructor: strictly increasing, first value >= 0, finite.
    pub fn new(values: Vec<f64>, label: Option<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Validation("frequency prefix must be nonempty".into()));
        }
        if !values[0].is_finite() || values[0] < 0.0 {
            return Err(Error::Validation(format!(
                "first frequency value must be finite and nonnegative, got {}",
                values[0]
            )));
        }
        for w in values.windows(2) {
            if !w[1].is_finite() || w[1] <= w[0] {
                return Err(Error::Validation(format!(
                    "frequency values must be strictly increasing and finite, got {} after {}",
                    w[1], w[0]
                )));
            }
        }
        Ok(Self {
            values: Arc::new(values),
            label,
        })
    }

    /// lambda = (n) = (0, 1, ..., N-1).
    pub fn naturals(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation("prefix length must be >= 1".into()));
        }
        Self::new((0..n).map(|i| i as f64).collect(), Some("naturals".into()))
    }

    /// lambda = (log n) = (log 1, ..., log N), the ordinary case.
    pub fn log_naturals(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation("prefix length must be >= 1".into()));
        }
        Self::new(
            (1..=n).map(|i| (i as f64).ln()).collect(),
            Some("log_naturals".into()),
        )
    }

    /// lambda_j = 2^j = (2, 4, ..., 2^N), the lacunary counterexample scale.
    pub fn powers_of_two(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation("prefix length must be >= 1".into()));
        }
        if n > 1023 {
            return Err(Error::Range(format!("2^{n} overflows f64")));
        }
        Self::new(
            (1..=n as i32).map(|j| (2.0f64).powi(j)).collect(),
            Some("powers_of_two".into()),
        )
    }

    /// Pass-through for caller-supplied values.
    pub fn custom(values: Vec<f64>) -> Result<Self> {
        Self::new(values, Some("custom".into()))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Largest frequency in the prefix.
    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// Smallest strictly positive frequency, if any.
    pub fn min_positive(&self) -> Option<f64> {
        self.values.iter().copied().find(|&v| v > 0.0)
    }

    /// Number of terms with lambda_n < x (strict cutoff).
    pub fn count_below(&self, x: f64) -> usize {
        self.values.partition_point(|&v| v < x)
    }

    /// The transformed prefix (e^{lambda_1}, ..., e^{lambda_N}).
    ///
    /// Strict monotonicity is preserved; overflow of the top exponential is
    /// a range error.
    pub fn exp(&self) -> Result<Frequency> {
        let transformed: Vec<f64> = self.values.iter().map(|&v| v.exp()).collect();
        if !transformed.last().unwrap().is_finite() {
            return Err(Error::Range(format!(
                "exp({}) overflows f64",
                self.values.last().unwrap()
            )));
        }
        // exp is strictly increasing, but adjacent values could collapse in
        // floating point when gaps are below one ulp
        for w in transformed.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Range(
                    "exponential transform collapsed adjacent frequencies".into(),
                ));
            }
        }
        Frequency::new(
            transformed,
            self.label.as_ref().map(|l| format!("exp({l})")),
        )
    }

    /// Whether this is (log 1, ..., log N) within `tol * max(1, lambda_n)`.
    pub(crate) fn is_log_naturals(&self, tol: f64) -> bool {
        self.values
            .iter()
            .enumerate()
            .all(|(i, &v)| (v - ((i + 1) as f64).ln()).abs() <= tol * v.abs().max(1.0))
    }

    /// Evaluate one of the paper's gap conditions on the prefix.
    pub fn check_spacing_condition(
        &self,
        kind: SpacingKind,
        params: &SpacingParams,
    ) -> Result<SpacingReport> {
        if self.len() < 2 {
            return Err(Error::Validation(
                "spacing conditions need at least two frequencies".into(),
            ));
        }
        if !(params.delta > 0.0) {
            return Err(Error::Validation("delta must be > 0".into()));
        }
        if !(params.c > 0.0) {
            return Err(Error::Validation("C must be > 0".into()));
        }
        let mut min_ratio = f64::INFINITY;
        let mut witness_index = 0usize;
        for (i, w) in self.values.windows(2).enumerate() {
            let gap = w[1] - w[0];
            let bound = match kind {
                SpacingKind::Bohr => params.c * (-(params.l + params.delta) * w[0]).exp(),
                SpacingKind::Landau => params.c * (-((params.delta * w[0]).exp())).exp(),
            };
            let ratio = gap / bound;
            if ratio < min_ratio {
                min_ratio = ratio;
                witness_index = i + 1; // 1-based index of the left endpoint
            }
        }
        Ok(SpacingReport {
            min_ratio,
            pass: min_ratio >= 1.0,
            witness_index,
        })
    }
}

/// Which gap condition to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpacingKind {
    /// Bohr's condition: gaps >= C e^{-(l+delta) lambda_n}.
    Bohr,
    /// Landau's condition: gaps >= C e^{-e^{delta lambda_n}}.
    Landau,
}

/// Parameters (l, delta, C) of the gap conditions; `l` is ignored for
/// [`SpacingKind::Landau`].
#[derive(Clone, Copy, Debug)]
pub struct SpacingParams {
    pub l: f64,
    pub delta: f64,
    pub c: f64,
}

/// Outcome of a spacing-condition check on the prefix.
#[derive(Clone, Copy, Debug)]
pub struct SpacingReport {
    /// min over n of gap_n / bound_n; the condition holds iff >= 1.
    pub min_ratio: f64,
    pub pass: bool,
    /// 1-based index n attaining the minimum (the gap lambda_{n+1}-lambda_n).
    pub witness_index: usize,
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(l) => write!(f, "{l}[N={}]", self.len()),
            None => write!(f, "frequency[N={}]", self.len()),
        }
    }
}

// On the wire a frequency is a bare JSON array of numbers.
impl Serialize for Frequency {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for v in self.values.iter() {
            seq.serialize_element(v)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Frequency {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct FreqVisitor;
        impl<'de> Visitor<'de> for FreqVisitor {
            type Value = Frequency;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "an array of strictly increasing nonnegative numbers")
            }
            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<Frequency, A::Error> {
                let mut values = Vec::new();
                while let Some(v) = seq.next_element::<f64>()? {
                    values.push(v);
                }
                Frequency::new(values, None).map_err(de::Error::custom)
            }
        }
        deserializer.deserialize_seq(FreqVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn naturals_prefix() {
        let f = Frequency::naturals(3).unwrap();
        assert_eq!(f.values(), &[0.0, 1.0, 2.0]);
    }

    #[test]
    fn log_naturals_prefix_matches_platform_log() {
        let f = Frequency::log_naturals(4).unwrap();
        assert_eq!(f.values()[0], 0.0);
        for n in 1..=4usize {
            assert_eq!(f.values()[n - 1], (n as f64).ln());
        }
    }

    #[test]
    fn powers_of_two_prefix() {
        let f = Frequency::powers_of_two(4).unwrap();
        assert_eq!(f.values(), &[2.0, 4.0, 8.0, 16.0]);
    }

    #[test]
    fn non_monotone_custom_rejected() {
        assert!(Frequency::custom(vec![0.5, 0.4]).is_err());
        assert!(Frequency::custom(vec![-1.0, 0.0]).is_err());
        assert!(Frequency::custom(vec![]).is_err());
        assert!(Frequency::custom(vec![0.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn exp_of_naturals() {
        let f = Frequency::naturals(3).unwrap().exp().unwrap();
        assert_eq!(f.values()[0], 1.0);
        assert!((f.values()[1] - std::f64::consts::E).abs() < 1e-15);
        assert!((f.values()[2] - std::f64::consts::E * std::f64::consts::E).abs() < 4e-15);
    }

    #[test]
    fn exp_of_log_naturals_is_naturals() {
        let f = Frequency::log_naturals(3).unwrap().exp().unwrap();
        for (i, &v) in f.values().iter().enumerate() {
            let n = (i + 1) as f64;
            assert!((v - n).abs() <= n * 1e-15);
        }
    }

    #[test]
    fn exp_overflow_is_range_error() {
        let f = Frequency::custom(vec![0.0, 800.0]).unwrap();
        assert!(matches!(f.exp(), Err(Error::Range(_))));
    }

    #[test]
    fn count_below_is_strict() {
        let f = Frequency::naturals(5).unwrap();
        assert_eq!(f.count_below(2.0), 2); // 0, 1 only
        assert_eq!(f.count_below(2.0 + 1e-12), 3);
        assert_eq!(f.count_below(0.0), 0);
    }

    #[test]
    fn bohr_condition_on_unit_gaps() {
        // gaps are 1, bound e^{-lambda_n}: minimum ratio 1 at the first gap
        let f = Frequency::naturals(4).unwrap();
        let r = f
            .check_spacing_condition(
                SpacingKind::Bohr,
                &SpacingParams {
                    l: 0.0,
                    delta: 1.0,
                    c: 1.0,
                },
            )
            .unwrap();
        assert!((r.min_ratio - 1.0).abs() < 1e-14);
        assert!(r.pass);
        assert_eq!(r.witness_index, 1);
    }

    #[test]
    fn landau_condition_closed_form() {
        // gap 1 against bound e^{-e^0} = e^{-1}: ratio e > 1
        let f = Frequency::custom(vec![0.0, 1.0]).unwrap();
        let r = f
            .check_spacing_condition(
                SpacingKind::Landau,
                &SpacingParams {
                    l: 0.0,
                    delta: 1.0,
                    c: 1.0,
                },
            )
            .unwrap();
        assert!((r.min_ratio - std::f64::consts::E).abs() < 1e-14);
        assert!(r.pass);
    }

    #[test]
    fn tiny_gap_fails_bohr() {
        let f = Frequency::custom(vec![0.0, 1e-9]).unwrap();
        let r = f
            .check_spacing_condition(
                SpacingKind::Bohr,
                &SpacingParams {
                    l: 0.0,
                    delta: 0.1,
                    c: 1.0,
                },
            )
            .unwrap();
        assert!((r.min_ratio - 1e-9).abs() < 1e-22);
        assert!(!r.pass);
        assert_eq!(r.witness_index, 1);
    }

    #[test]
    fn json_round_trip_is_bare_array() {
        let f = Frequency::log_naturals(3).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.starts_with('['));
        let g: Frequency = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
    }
}

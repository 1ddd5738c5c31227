//! Torus realizations of truncated Dirichlet groups.
//!
//! A frequency prefix is realized through a real basis b_1..b_d and an
//! integer matrix M with lambda_n = sum_j M[n][j] b_j. Characters are the
//! monomials omega^{M[n]}, the Kronecker flow is t -> (e^{-i b_j t})_j, and
//! Haar measure is the product of uniform phases. Everything almost-sure in
//! the source theory becomes a statement about this truncated Haar measure.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frequency::Frequency;
use crate::series::DirichletPolynomial;

/// Relative tolerance for reconstructing lambda_n from the basis.
pub const RECONSTRUCTION_TOL: f64 = 1e-12;

/// Unimodularity tolerance for group points.
pub const UNIMODULAR_TOL: f64 = 1e-12;

/// A point omega of the truncated group: one unimodular coordinate per
/// basis element.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupPoint {
    coords: Vec<Complex64>,
}

impl GroupPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        for (j, w) in coords.iter().enumerate() {
            if (w.norm() - 1.0).abs() > UNIMODULAR_TOL {
                return Err(Error::Validation(format!(
                    "coordinate {j} has modulus {} (must be unimodular)",
                    w.norm()
                )));
            }
        }
        Ok(Self { coords })
    }

    /// The identity of the group: all coordinates 1.
    pub fn identity(dim: usize) -> Self {
        Self {
            coords: vec![Complex64::new(1.0, 0.0); dim],
        }
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Coordinatewise product (the group operation).
    pub fn mul(&self, other: &GroupPoint) -> Result<GroupPoint> {
        if self.dim() != other.dim() {
            return Err(Error::Validation("group points of different dimension".into()));
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| {
                let p = a * b;
                p / p.norm()
            })
            .collect();
        GroupPoint::new(coords)
    }
}

/// How to realize a frequency as a torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RealizationHint {
    /// Try integer multiples of a single basis element, then the prime
    /// decomposition of (log n), then fail.
    Auto,
    /// Basis (1): requires integer frequencies.
    Naturals,
    /// Basis (log p) over the primes up to N: requires lambda = (log n).
    PrimeFactorization,
    /// Caller-supplied basis and decomposition matrix.
    UserBasis,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum RealizationKind {
    IntegerMultiples,
    PrimePowers {
        // for n >= 2 (0-based n-2): index of the smallest prime factor of n
        // in the basis, and n divided by that prime
        factor_chain: Vec<(u32, u32)>,
    },
    UserBasis,
}

/// A truncated lambda-Dirichlet group realized as a finite-dimensional
/// torus. Immutable and shareable across threads.
#[derive(Clone, Debug)]
pub struct GroupRealization {
    frequency: Frequency,
    basis: Vec<f64>,
    // sparse rows: (basis index, integer exponent), exponent != 0
    rows: Vec<Vec<(u32, i64)>>,
    kind: RealizationKind,
}

impl GroupRealization {
    /// Realize a frequency with the given hint.
    pub fn realize(
        frequency: &Frequency,
        hint: RealizationHint,
        user_basis: Option<(Vec<f64>, Vec<Vec<i64>>)>,
    ) -> Result<Self> {
        match hint {
            RealizationHint::Naturals => Self::naturals(frequency),
            RealizationHint::PrimeFactorization => Self::prime_factorization(frequency),
            RealizationHint::UserBasis => {
                let (basis, matrix) = user_basis.ok_or_else(|| {
                    Error::Validation("user_basis hint requires basis and matrix".into())
                })?;
                Self::from_basis(frequency.clone(), basis, matrix)
            }
            RealizationHint::Auto => Self::naturals(frequency)
                .or_else(|_| Self::prime_factorization(frequency))
                .map_err(|_| {
                    Error::Realization(
                        "no integer decomposition found; supply a user basis".into(),
                    )
                }),
        }
    }

    /// Basis (1), M[n][0] = lambda_n. Requires integer frequencies; for
    /// lambda = (n) this is the circle group.
    pub fn naturals(frequency: &Frequency) -> Result<Self> {
        for &l in frequency.values() {
            if (l - l.round()).abs() > RECONSTRUCTION_TOL * l.abs().max(1.0) {
                return Err(Error::Validation(format!(
                    "frequency value {l} is not an integer"
                )));
            }
        }
        let rows: Vec<Vec<(u32, i64)>> = frequency
            .values()
            .iter()
            .map(|&l| {
                let e = l.round() as i64;
                if e == 0 {
                    vec![]
                } else {
                    vec![(0u32, e)]
                }
            })
            .collect();
        Ok(Self {
            frequency: frequency.clone(),
            basis: vec![1.0],
            rows,
            kind: RealizationKind::IntegerMultiples,
        })
    }

    /// Basis (log 2, log 3, log 5, ...), row n = exponent vector of n.
    /// Requires lambda = (log 1, ..., log N).
    pub fn prime_factorization(frequency: &Frequency) -> Result<Self> {
        if !frequency.is_log_naturals(RECONSTRUCTION_TOL) {
            return Err(Error::Validation(
                "prime factorization realization requires lambda = (log n)".into(),
            ));
        }
        let n_max = frequency.len();
        let spf = smallest_prime_factors(n_max);
        let primes: Vec<usize> = (2..=n_max).filter(|&n| spf[n] == n).collect();
        let mut prime_index = vec![u32::MAX; n_max + 1];
        for (j, &p) in primes.iter().enumerate() {
            prime_index[p] = j as u32;
        }
        let mut rows: Vec<Vec<(u32, i64)>> = Vec::with_capacity(n_max);
        let mut factor_chain: Vec<(u32, u32)> = Vec::with_capacity(n_max.saturating_sub(1));
        rows.push(vec![]); // n = 1
        #[allow(clippy::needless_range_loop)] // n couples spf[n] with rows[n/spf[n]]
        for n in 2..=n_max {
            let p = spf[n];
            let q = n / p;
            factor_chain.push((prime_index[p], q as u32));
            let mut row = rows[q - 1].clone();
            match row.iter_mut().find(|(j, _)| *j == prime_index[p]) {
                Some(entry) => entry.1 += 1,
                None => {
                    row.push((prime_index[p], 1));
                    row.sort_unstable_by_key(|e| e.0);
                }
            }
            rows.push(row);
        }
        Ok(Self {
            frequency: frequency.clone(),
            basis: primes.iter().map(|&p| (p as f64).ln()).collect(),
            rows,
            kind: RealizationKind::PrimePowers { factor_chain },
        })
    }

    /// Caller-supplied basis and dense decomposition matrix (N x d).
    pub fn from_basis(
        frequency: Frequency,
        basis: Vec<f64>,
        matrix: Vec<Vec<i64>>,
    ) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::Validation("basis must have d >= 1".into()));
        }
        if matrix.len() != frequency.len() {
            return Err(Error::Validation(format!(
                "matrix has {} rows for {} frequencies",
                matrix.len(),
                frequency.len()
            )));
        }
        let d = basis.len();
        let mut rows = Vec::with_capacity(matrix.len());
        for (n, dense) in matrix.iter().enumerate() {
            if dense.len() != d {
                return Err(Error::Validation(format!(
                    "row {n} has {} entries for basis of size {d}",
                    dense.len()
                )));
            }
            let row: Vec<(u32, i64)> = dense
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(j, &e)| (j as u32, e))
                .collect();
            rows.push(row);
        }
        let g = Self {
            frequency,
            basis,
            rows,
            kind: RealizationKind::UserBasis,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        // reconstruction of each lambda_n
        for (n, row) in self.rows.iter().enumerate() {
            let lambda = self.frequency.values()[n];
            let recon: f64 = row.iter().map(|&(j, e)| e as f64 * self.basis[j as usize]).sum();
            if (lambda - recon).abs() > RECONSTRUCTION_TOL * lambda.abs().max(1.0) {
                return Err(Error::Validation(format!(
                    "row {n} reconstructs {recon}, expected {lambda}"
                )));
            }
        }
        // pairwise distinct rows (distinct characters)
        let mut sorted: Vec<&Vec<(u32, i64)>> = self.rows.iter().collect();
        sorted.sort();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Validation(
                    "decomposition rows must be pairwise distinct".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn frequency(&self) -> &Frequency {
        &self.frequency
    }

    pub fn basis(&self) -> &[f64] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Dense N x d decomposition matrix (the serialized form).
    pub fn dense_matrix(&self) -> Vec<Vec<i64>> {
        self.rows
            .iter()
            .map(|row| {
                let mut dense = vec![0i64; self.dim()];
                for &(j, e) in row {
                    dense[j as usize] = e;
                }
                dense
            })
            .collect()
    }

    /// Haar-random point: independent uniform phases per coordinate.
    /// Deterministic for a fixed RNG state.
    pub fn haar_sample<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupPoint {
        let coords = (0..self.dim())
            .map(|_| {
                let theta = rng.random::<f64>() * std::f64::consts::TAU;
                let (sin, cos) = theta.sin_cos();
                Complex64::new(cos, sin)
            })
            .collect();
        GroupPoint { coords }
    }

    /// The Kronecker flow at time t: omega_j = e^{-i b_j t}, so that the
    /// n-th character evaluates to e^{-i lambda_n t}.
    pub fn flow_point(&self, t: f64) -> GroupPoint {
        let coords = self
            .basis
            .iter()
            .map(|&b| {
                let (sin, cos) = (b * t).sin_cos();
                Complex64::new(cos, -sin)
            })
            .collect();
        GroupPoint { coords }
    }

    /// Value of the character h_{lambda_n} at omega: the monomial
    /// prod_j omega_j^{M[n][j]} (0-based term index).
    pub fn character_value(&self, omega: &GroupPoint, term: usize) -> Result<Complex64> {
        if term >= self.frequency.len() {
            return Err(Error::IndexOutOfRange {
                index: term,
                len: self.frequency.len(),
            });
        }
        if omega.dim() != self.dim() {
            return Err(Error::Validation(format!(
                "point has dimension {}, group has {}",
                omega.dim(),
                self.dim()
            )));
        }
        let mut value = Complex64::new(1.0, 0.0);
        for &(j, e) in &self.rows[term] {
            value *= unit_power(omega.coords[j as usize], e);
        }
        Ok(value / value.norm())
    }

    /// All character values at omega in frequency order.
    ///
    /// For the prime-factorization realization this runs multiplicatively
    /// along smallest-prime-factor chains in O(N); other realizations fall
    /// back to per-row powers.
    pub fn character_values(&self, omega: &GroupPoint) -> Result<Vec<Complex64>> {
        if omega.dim() != self.dim() {
            return Err(Error::Validation(format!(
                "point has dimension {}, group has {}",
                omega.dim(),
                self.dim()
            )));
        }
        match &self.kind {
            RealizationKind::PrimePowers { factor_chain } => {
                let n_max = self.frequency.len();
                let mut values = Vec::with_capacity(n_max);
                values.push(Complex64::new(1.0, 0.0));
                for &(prime_idx, quotient) in factor_chain {
                    let v = values[quotient as usize - 1] * omega.coords[prime_idx as usize];
                    values.push(v);
                }
                Ok(values)
            }
            _ => (0..self.frequency.len())
                .map(|n| self.character_value(omega, n))
                .collect(),
        }
    }

    /// The vertical limit D^omega: coefficients a_n h_{lambda_n}(omega).
    pub fn vertical_limit(
        &self,
        d: &DirichletPolynomial,
        omega: &GroupPoint,
    ) -> Result<DirichletPolynomial> {
        if d.frequency() != &self.frequency {
            return Err(Error::FrequencyMismatch(
                "polynomial and group are over different frequencies".into(),
            ));
        }
        let chars = self.character_values(omega)?;
        let coefficients = d
            .coefficients()
            .iter()
            .zip(&chars)
            .map(|(a, h)| a * h)
            .collect();
        DirichletPolynomial::new(self.frequency.clone(), coefficients)
    }
}

/// Integer power of a unimodular complex number by repeated squaring,
/// renormalizing to unit modulus every 8 multiplications.
///
/// Each squaring doubles the accumulated modulus drift, so the renorm
/// cadence must stay well below the 2^cadence amplification; 8 keeps the
/// drift under 1e-13 for any i64 exponent.
pub fn unit_power(z: Complex64, exponent: i64) -> Complex64 {
    if exponent == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut base = if exponent < 0 { z.conj() } else { z };
    let mut e = exponent.unsigned_abs();
    let mut result = Complex64::new(1.0, 0.0);
    let mut muls = 0u32;
    while e > 0 {
        if e & 1 == 1 {
            result *= base;
            muls += 1;
        }
        e >>= 1;
        if e > 0 {
            base *= base;
            muls += 1;
        }
        if muls >= 8 {
            result /= result.norm();
            base /= base.norm();
            muls = 0;
        }
    }
    result
}

fn smallest_prime_factors(n_max: usize) -> Vec<usize> {
    let mut spf: Vec<usize> = (0..=n_max).collect();
    let mut p = 2;
    while p * p <= n_max {
        if spf[p] == p {
            let mut m = p * p;
            while m <= n_max {
                if spf[m] == m {
                    spf[m] = p;
                }
                m += p;
            }
        }
        p += 1;
    }
    spf
}

/// A multivariate analytic polynomial sum_alpha c_alpha z^alpha with
/// exponents over the primes (z_1 for 2, z_2 for 3, ...).
#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticPolynomial {
    /// (exponent vector, coefficient); trailing zero exponents trimmed.
    pub terms: Vec<(Vec<u32>, Complex64)>,
}

impl AnalyticPolynomial {
    /// Normalizes to a canonical form: trailing zero exponents trimmed,
    /// terms sorted by exponent vector.
    pub fn new(mut terms: Vec<(Vec<u32>, Complex64)>) -> Self {
        for (alpha, _) in &mut terms {
            while alpha.last() == Some(&0) {
                alpha.pop();
            }
        }
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        Self { terms }
    }
}

/// Bohr transform at the polynomial level: the monomial z^alpha becomes the
/// coefficient at n = prod p_j^{alpha_j} of an ordinary Dirichlet polynomial
/// over (log 1, ..., log n_max). Coefficients are moved verbatim.
pub fn bohr_transform(p: &AnalyticPolynomial, n_max: usize) -> Result<DirichletPolynomial> {
    let frequency = Frequency::log_naturals(n_max)?;
    let spf = smallest_prime_factors(n_max);
    let primes: Vec<usize> = (2..=n_max).filter(|&n| spf[n] == n).collect();
    let mut coefficients = vec![Complex64::new(0.0, 0.0); n_max];
    for (alpha, c) in &p.terms {
        let mut n: u128 = 1;
        for (j, &e) in alpha.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let prime = *primes.get(j).ok_or_else(|| {
                Error::Range(format!(
                    "monomial exponent at position {j} needs a prime beyond the prefix"
                ))
            })? as u128;
            for _ in 0..e {
                n = n.saturating_mul(prime);
                if n > n_max as u128 {
                    return Err(Error::Range(format!(
                        "monomial maps to n > {n_max} (prefix exceeded)"
                    )));
                }
            }
        }
        coefficients[n as usize - 1] += c;
    }
    DirichletPolynomial::new(frequency, coefficients)
}

/// Inverse Bohr transform: factorize each index with a nonzero coefficient.
/// Requires the ordinary frequency (log n).
pub fn bohr_inverse(d: &DirichletPolynomial) -> Result<AnalyticPolynomial> {
    if !d.frequency().is_log_naturals(RECONSTRUCTION_TOL) {
        return Err(Error::Validation(
            "inverse Bohr transform requires lambda = (log n)".into(),
        ));
    }
    let n_max = d.len();
    let spf = smallest_prime_factors(n_max);
    let primes: Vec<usize> = (2..=n_max).filter(|&n| spf[n] == n).collect();
    let mut prime_index = vec![usize::MAX; n_max + 1];
    for (j, &p) in primes.iter().enumerate() {
        prime_index[p] = j;
    }
    let mut terms = Vec::new();
    for (i, &c) in d.coefficients().iter().enumerate() {
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let mut n = i + 1;
        let mut alpha: Vec<u32> = Vec::new();
        while n > 1 {
            let j = prime_index[spf[n]];
            if alpha.len() <= j {
                alpha.resize(j + 1, 0);
            }
            alpha[j] += 1;
            n /= spf[n];
        }
        terms.push((alpha, c));
    }
    Ok(AnalyticPolynomial::new(terms))
}

/// Prime factorization as an exponent vector over 2, 3, 5, ... (test oracle
/// and CLI helper; independent of the sieve used by the transforms).
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
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

// On the wire: {"basis": [...], "matrix": [[...]]}.
#[derive(Serialize, Deserialize)]
struct GroupRepr {
    basis: Vec<f64>,
    matrix: Vec<Vec<i64>>,
}

impl Serialize for GroupRealization {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GroupRepr {
            basis: self.basis.clone(),
            matrix: self.dense_matrix(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GroupRealization {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let repr = GroupRepr::deserialize(deserializer)?;
        // the frequency is the reconstruction M b
        let values: Vec<f64> = repr
            .matrix
            .iter()
            .map(|row| row.iter().zip(&repr.basis).map(|(&e, &b)| e as f64 * b).sum())
            .collect();
        let frequency = Frequency::new(values, None).map_err(serde::de::Error::custom)?;
        GroupRealization::from_basis(frequency, repr.basis, repr.matrix)
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn prime_factorization_of_log_8() {
        let f = Frequency::log_naturals(8).unwrap();
        let g = GroupRealization::prime_factorization(&f).unwrap();
        let expected: Vec<f64> = [2.0f64, 3.0, 5.0, 7.0].iter().map(|p| p.ln()).collect();
        assert_eq!(g.basis(), expected.as_slice());
        // n = 6 = 2 * 3
        assert_eq!(g.dense_matrix()[5], vec![1, 1, 0, 0]);
        // n = 8 = 2^3
        assert_eq!(g.dense_matrix()[7], vec![3, 0, 0, 0]);
    }

    #[test]
    fn naturals_realization_is_the_circle() {
        let f = Frequency::naturals(3).unwrap();
        let g = GroupRealization::naturals(&f).unwrap();
        assert_eq!(g.basis(), &[1.0]);
        assert_eq!(g.dense_matrix(), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn auto_fails_on_irrational_non_log_frequency() {
        let f = Frequency::custom(vec![0.0, std::f64::consts::SQRT_2]).unwrap();
        assert!(matches!(
            GroupRealization::realize(&f, RealizationHint::Auto, None),
            Err(Error::Realization(_))
        ));
    }

    #[test]
    fn flow_at_zero_is_identity() {
        let f = Frequency::log_naturals(6).unwrap();
        let g = GroupRealization::prime_factorization(&f).unwrap();
        let w = g.flow_point(0.0);
        assert_eq!(w, GroupPoint::identity(g.dim()));
    }

    #[test]
    fn flow_coordinate_matches_prime_power() {
        // lambda = (log n), t = 1: the coordinate for the prime 2 is 2^{-i}
        let f = Frequency::log_naturals(4).unwrap();
        let g = GroupRealization::prime_factorization(&f).unwrap();
        let w = g.flow_point(1.0);
        let expected = c((2.0f64).ln().cos(), -(2.0f64).ln().sin());
        assert!((w.coords()[0] - expected).norm() < 1e-15);
    }

    #[test]
    fn flow_on_circle_at_pi() {
        let f = Frequency::naturals(2).unwrap();
        let g = GroupRealization::naturals(&f).unwrap();
        let w = g.flow_point(std::f64::consts::PI);
        assert!((w.coords()[0] - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn character_of_six_is_product_of_coordinates() {
        let f = Frequency::log_naturals(8).unwrap();
        let g = GroupRealization::prime_factorization(&f).unwrap();
        let mut coords = vec![c(1.0, 0.0); g.dim()];
        coords[0] = c(0.0, 1.0); // i at the prime 2
        coords[1] = c(-1.0, 0.0); // -1 at the prime 3
        let w = GroupPoint::new(coords).unwrap();
        // 6 = 2*3 is term index 5
        let v = g.character_value(&w, 5).unwrap();
        assert!((v - c(0.0, -1.0)).norm() < 1e-14);
    }

    #[test]
    fn trivial_character_at_lambda_zero() {
        let f = Frequency::log_naturals(5).unwrap();
        let g = GroupRealization::prime_factorization(&f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let w = g.haar_sample(&mut rng);
            assert_eq!(g.character_value(&w, 0).unwrap(), c(1.0, 0.0));
        }
    }

    #[test]
    fn character_index_out_of_range() {
        let f = Frequency::log_naturals(3).unwrap();
        let g = GroupRealization::prime_factorization(&f).unwrap();
        let w = GroupPoint::identity(g.dim());
        assert!(matches!(
            g.character_value(&w, 3),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn haar_sampling_is_deterministic() {
        let f = Frequency::log_naturals(10).unwrap();
        let g = GroupRealization::prime_factorization(&f).unwrap();
        let a = g.haar_sample(&mut ChaCha8Rng::seed_from_u64(123));
        let b = g.haar_sample(&mut ChaCha8Rng::seed_from_u64(123));
        assert_eq!(a, b);
    }

    #[test]
    fn sieve_and_row_paths_agree() {
        let f = Frequency::log_naturals(64).unwrap();
        let g = GroupRealization::prime_factorization(&f).unwrap();
        let w = g.haar_sample(&mut ChaCha8Rng::seed_from_u64(5));
        let fast = g.character_values(&w).unwrap();
        for (n, fast_value) in fast.iter().enumerate() {
            let slow = g.character_value(&w, n).unwrap();
            assert!((fast_value - slow).norm() < 1e-12);
        }
    }

    #[test]
    fn vertical_limit_of_single_monomial() {
        // D = 2^{-s}: omega with i at the prime 2 multiplies a_2 by i
        let f = Frequency::log_naturals(2).unwrap();
        let g = GroupRealization::prime_factorization(&f).unwrap();
        let d = DirichletPolynomial::new(f, vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let w = GroupPoint::new(vec![c(0.0, 1.0)]).unwrap();
        let v = g.vertical_limit(&d, &w).unwrap();
        assert!((v.coefficients()[1] - c(0.0, 1.0)).norm() < 1e-15);
        // identity leaves D unchanged
        let id = g.vertical_limit(&d, &GroupPoint::identity(1)).unwrap();
        assert_eq!(id.coefficients(), d.coefficients());
    }

    #[test]
    fn vertical_limit_at_flow_point_is_vertical_translation() {
        let f = Frequency::log_naturals(6).unwrap();
        let g = GroupRealization::prime_factorization(&f).unwrap();
        let coeffs: Vec<Complex64> = (0..6).map(|i| c(1.0 / (i + 1) as f64, 0.3)).collect();
        let d = DirichletPolynomial::new(f, coeffs).unwrap();
        let tau = 0.73;
        let v = g.vertical_limit(&d, &g.flow_point(tau)).unwrap();
        let t = d.translate(c(0.0, tau)).unwrap();
        for (a, b) in v.coefficients().iter().zip(t.coefficients()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn unit_power_large_exponent_stays_unimodular() {
        let z = Complex64::from_polar(1.0, 1.2345);
        let v = unit_power(z, 1_000_003);
        assert!((v.norm() - 1.0).abs() < 1e-13);
        let expected = Complex64::from_polar(1.0, (1.2345_f64 * 1_000_003.0).rem_euclid(std::f64::consts::TAU));
        // compare angles modulo 2 pi
        let diff = (v / expected).arg().abs();
        assert!(diff < 1e-6, "angle drift {diff}");
        // negative exponents are conjugate powers
        let w = unit_power(z, -3);
        assert!((w - unit_power(z.conj(), 3)).norm() < 1e-15);
    }

    #[test]
    fn bohr_transform_basic_monomials() {
        // z_1 <-> 2^{-s}
        let p = AnalyticPolynomial::new(vec![(vec![1], c(1.0, 0.0))]);
        let d = bohr_transform(&p, 4).unwrap();
        assert_eq!(d.coefficients()[1], c(1.0, 0.0));
        // constant 1 <-> n = 1
        let one = AnalyticPolynomial::new(vec![(vec![], c(2.5, -1.0))]);
        let d1 = bohr_transform(&one, 4).unwrap();
        assert_eq!(d1.coefficients()[0], c(2.5, -1.0));
        // z_1 z_2 <-> 6^{-s}
        let p12 = AnalyticPolynomial::new(vec![(vec![1, 1], c(1.0, 1.0))]);
        let d12 = bohr_transform(&p12, 6).unwrap();
        assert_eq!(d12.coefficients()[5], c(1.0, 1.0));
    }

    #[test]
    fn bohr_transform_out_of_prefix_is_range_error() {
        let p = AnalyticPolynomial::new(vec![(vec![3], c(1.0, 0.0))]); // 2^3 = 8
        assert!(matches!(bohr_transform(&p, 6), Err(Error::Range(_))));
    }

    #[test]
    fn bohr_round_trip_exact() {
        let p = AnalyticPolynomial::new(vec![
            (vec![], c(0.125, -3.0)),
            (vec![2, 1], c(0.7, 0.1)),  // 4*3 = 12
            (vec![0, 0, 1], c(-1.0, 0.0)), // 5
        ]);
        let d = bohr_transform(&p, 16).unwrap();
        let q = bohr_inverse(&d).unwrap();
        assert_eq!(p, q);
        let d2 = bohr_transform(&q, 16).unwrap();
        assert_eq!(d.coefficients(), d2.coefficients());
    }

    #[test]
    fn group_json_round_trip() {
        let f = Frequency::log_naturals(6).unwrap();
        let g = GroupRealization::prime_factorization(&f).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert!(s.contains("\"basis\""));
        let g2: GroupRealization = serde_json::from_str(&s).unwrap();
        assert_eq!(g.basis(), g2.basis());
        assert_eq!(g.dense_matrix(), g2.dense_matrix());
    }

    #[test]
    fn duplicate_rows_rejected() {
        let f = Frequency::custom(vec![1.0, 2.0]).unwrap();
        // both rows decompose over basis (1, 0.5): (1,0) and (0,4) are fine,
        // but (1,0) twice must be rejected even if tolerances matched
        let r = GroupRealization::from_basis(
            f,
            vec![1.0, 0.5],
            vec![vec![1, 0], vec![1, 0]],
        );
        assert!(r.is_err());
    }
}

//! Shared test oracles: double-double arithmetic for high-precision
//! reference sums, and small generators. Everything here is independent of
//! the library's evaluation paths.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use riesz_core::{DirichletPolynomial, Frequency};

/// Double-double number: value = hi + lo with |lo| <= ulp(hi)/2.
#[derive(Clone, Copy, Debug)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    pub fn sub(self, other: Dd) -> Dd {
        self.add(Dd {
            hi: -other.hi,
            lo: -other.lo,
        })
    }

    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn mul_f64(self, other: f64) -> Dd {
        self.mul(Dd::from_f64(other))
    }

    pub fn recip(self) -> Dd {
        // one Newton step on top of the double-precision reciprocal
        let y = Dd::from_f64(1.0 / self.hi);
        let two = Dd::from_f64(2.0);
        y.mul(two.sub(self.mul(y)))
    }

    pub fn div(self, other: Dd) -> Dd {
        self.mul(other.recip())
    }
}

/// exp(x) in double-double for |x| <= 0.7: plain Taylor series (the range
/// covers every oracle use here).
pub fn dd_exp_small(x: f64) -> Dd {
    assert!(x.abs() <= 0.7);
    let xd = Dd::from_f64(x);
    let mut term = Dd::from_f64(1.0);
    let mut sum = Dd::from_f64(1.0);
    for k in 1..40 {
        term = term.mul(xd).mul_f64(1.0 / k as f64);
        sum = sum.add(term);
        if term.hi.abs() < 1e-35 {
            break;
        }
    }
    sum
}

/// ln(x) in double-double: Newton iteration on exp around the f64 seed,
/// valid where |ln x - seed| is small (always, since the seed is ln(x)).
pub fn dd_ln(x: f64) -> Dd {
    assert!(x > 0.0);
    let seed = x.ln();
    // x * exp(-seed) = 1 + eps with |eps| ~ 1e-16; ln x = seed + ln(1+eps)
    let e = exp_f64_dd(-seed).mul_f64(x);
    let eps = e.sub(Dd::from_f64(1.0));
    // ln(1+eps) ~ eps - eps^2/2
    let corr = eps.sub(eps.mul(eps).mul_f64(0.5));
    Dd::from_f64(seed).add(corr)
}

/// exp(x) in double-double for any |x| < 700 via k*ln2 reduction.
pub fn exp_f64_dd(x: f64) -> Dd {
    // hi/lo split of ln 2 for double-double argument reduction
    #[allow(clippy::approx_constant)]
    const LN2_HI: f64 = 6.931471805599453e-1;
    const LN2_LO: f64 = 2.3190468138462996e-17;
    let k = (x / LN2_HI).round();
    let r = Dd::from_f64(x)
        .sub(Dd::from_f64(k * LN2_HI))
        .sub(Dd::from_f64(k * LN2_LO));
    assert!(r.hi.abs() <= 0.7);
    let base = dd_exp_small(r.hi).mul(dd_exp_small(r.lo));
    // scale by 2^k exactly
    let scale = (2.0f64).powi(k as i32);
    Dd {
        hi: base.hi * scale,
        lo: base.lo * scale,
    }
}

/// Sum of n^{-2} for n = 1..=limit, in double-double.
pub fn dd_partial_zeta2(limit: u64) -> Dd {
    let mut sum = Dd::from_f64(0.0);
    for n in 1..=limit {
        let n2 = Dd::from_f64(n as f64).mul_f64(n as f64);
        sum = sum.add(n2.recip());
    }
    sum
}

/// Trial-division factorization (oracle for the Bohr transform tests).
pub fn factorize_oracle(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Random polynomial with unit-disc coefficients over (log 1, ..., log n).
pub fn random_ordinary_poly<R: Rng>(n: usize, rng: &mut R) -> DirichletPolynomial {
    let freq = Frequency::log_naturals(n).unwrap();
    let coeffs: Vec<Complex64> = (0..n)
        .map(|_| loop {
            let re = rng.random::<f64>() * 2.0 - 1.0;
            let im = rng.random::<f64>() * 2.0 - 1.0;
            if re * re + im * im <= 1.0 {
                return c(re, im);
            }
        })
        .collect();
    DirichletPolynomial::new(freq, coeffs).unwrap()
}

#[test]
fn dd_oracle_self_checks() {
    // exp(0.5) against the known 30-digit value 1.64872127070012814684865078781
    let e_half = dd_exp_small(0.5);
    assert!((e_half.hi - 1.6487212707001282).abs() < 1e-16);
    assert!((e_half.to_f64() - 1.6487212707001282).abs() < 3e-17);
    // ln(2) round trip
    let l2 = dd_ln(2.0);
    assert!((l2.hi - std::f64::consts::LN_2).abs() < 1e-16);
    // zeta(2) partial sum bracketed by the tail integral:
    // 1/(N+1) < zeta(2) - S_N < 1/N
    let s = dd_partial_zeta2(100).to_f64();
    let z2 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
    assert!(z2 - s > 1.0 / 101.0 && z2 - s < 1.0 / 100.0);
}

//! Convergence detection and the classical facts about Riesz summability:
//! the two consistency theorems, tail decay of partial sums, reduction of
//! high-order means to low order, and abscissa estimation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::least_squares_slope;
use crate::quad::tanh_sinh;
use crate::series::{DirichletPolynomial, RieszKind, RieszParams};
use crate::special::gamma;
use crate::sum::ComplexSum;

/// Diagnostics of a Riesz-limit detection run over an x-grid.
///
/// `converged` means the values over the top quartile of the grid are
/// mutually within the requested tolerance (a Cauchy criterion, not a
/// certified limit); non-convergence is a report, not an error.
#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub limit: Option<Complex64>,
    pub converged: bool,
    pub x_grid: Vec<f64>,
    pub values: Vec<Complex64>,
    pub cauchy_residual: f64,
    pub tolerance: f64,
}

/// Evaluate the Riesz means of `d` at `s0` along `x_grid` and test the top
/// quartile for stabilization.
pub fn detect_riesz_limit(
    d: &DirichletPolynomial,
    kind: RieszKind,
    k: f64,
    s0: Complex64,
    x_grid: &[f64],
    tol: f64,
) -> Result<ConvergenceReport> {
    if x_grid.len() < 8 {
        return Err(Error::Validation(format!(
            "convergence grid needs >= 8 points, got {}",
            x_grid.len()
        )));
    }
    if !x_grid.windows(2).all(|w| w[1] > w[0]) {
        return Err(Error::Validation("convergence grid must be increasing".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Validation("tolerance must be > 0".into()));
    }
    let values: Vec<Complex64> = x_grid
        .iter()
        .map(|&x| d.riesz_mean(&RieszParams::new(kind, k, x)?, s0))
        .collect::<Result<_>>()?;
    let quartile_len = x_grid.len().div_ceil(4).max(2);
    let top = &values[values.len() - quartile_len..];
    let mut residual: f64 = 0.0;
    for i in 0..top.len() {
        for j in (i + 1)..top.len() {
            residual = residual.max((top[i] - top[j]).norm());
        }
    }
    let converged = residual <= tol;
    let limit = if converged {
        let mut acc = ComplexSum::new();
        for v in top {
            acc.add(*v);
        }
        Some(acc.value() / top.len() as f64)
    } else {
        None
    };
    Ok(ConvergenceReport {
        limit,
        converged,
        x_grid: x_grid.to_vec(),
        values,
        cauchy_residual: residual,
        tolerance: tol,
    })
}

/// Verdict of a consistency-theorem run. The theorems are one-directional
/// implications; when the hypothesis run fails to stabilize the outcome is
/// inconclusive, never a counterexample.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConsistencyVerdict {
    Agree,
    Disagree,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct ConsistencyOutcome {
    /// Report for the hypothesis run ((lambda,k) for the first theorem,
    /// (e^lambda,k) for the second).
    pub hypothesis: ConvergenceReport,
    /// Report for the conclusion run.
    pub conclusion: ConvergenceReport,
    pub verdict: ConsistencyVerdict,
}

fn compare_limits(
    hypothesis: ConvergenceReport,
    conclusion: ConvergenceReport,
    tol: f64,
) -> ConsistencyOutcome {
    // a verdict needs both limits: a run that fails to stabilize on the
    // grid yields no limit, and without limits there is no counterexample
    let verdict = match (&hypothesis.limit, &conclusion.limit) {
        (Some(a), Some(b)) => {
            // combined tolerance of the two detection runs
            if (a - b).norm() <= 2.0 * tol {
                ConsistencyVerdict::Agree
            } else {
                ConsistencyVerdict::Disagree
            }
        }
        _ => ConsistencyVerdict::Inconclusive,
    };
    ConsistencyOutcome {
        hypothesis,
        conclusion,
        verdict,
    }
}

/// First theorem of consistency: (lambda,k)-summable implies
/// (lambda,ell)-summable with the same limit, for any ell > k.
pub fn consistency_first(
    d: &DirichletPolynomial,
    k: f64,
    ell: f64,
    s0: Complex64,
    x_grid: &[f64],
    tol: f64,
) -> Result<ConsistencyOutcome> {
    if !(ell > k) {
        return Err(Error::Validation(format!("need ell > k, got k={k}, ell={ell}")));
    }
    let run_k = detect_riesz_limit(d, RieszKind::First, k, s0, x_grid, tol)?;
    let run_ell = detect_riesz_limit(d, RieszKind::First, ell, s0, x_grid, tol)?;
    Ok(compare_limits(run_k, run_ell, tol))
}

/// Second theorem of consistency: (e^lambda,k)-summable implies
/// (lambda,k)-summable with the same limit. The hypothesis run is the
/// second Riesz mean S_x (equal to R_{e^x} over e^lambda).
pub fn consistency_second(
    d: &DirichletPolynomial,
    k: f64,
    s0: Complex64,
    x_grid: &[f64],
    tol: f64,
) -> Result<ConsistencyOutcome> {
    let run_exp = detect_riesz_limit(d, RieszKind::Second, k, s0, x_grid, tol)?;
    let run_lambda = detect_riesz_limit(d, RieszKind::First, k, s0, x_grid, tol)?;
    Ok(compare_limits(run_exp, run_lambda, tol))
}

/// Tail-decay values ((lambda_{N+1}-lambda_N)/lambda_{N+1})^k |S_N - C| for
/// N ranging over `window` (number of leading coefficients summed; needs
/// N + 1 <= prefix length). Indices with lambda_{N+1} = 0 are skipped.
pub fn tail_decay_check(
    d: &DirichletPolynomial,
    k: f64,
    c_limit: Complex64,
    window: std::ops::Range<usize>,
) -> Result<Vec<f64>> {
    if window.start < 1 {
        return Err(Error::Validation("window must start at N >= 1".into()));
    }
    if window.end > d.len() {
        return Err(Error::Validation(format!(
            "window end {} needs lambda_(N+1); prefix has {} values",
            window.end,
            d.len()
        )));
    }
    let lambda = d.frequency().values();
    let mut running = ComplexSum::new();
    let mut out = Vec::new();
    for n in 0..window.end - 1 {
        running.add(d.coefficients()[n]);
        let n_terms = n + 1;
        if n_terms < window.start {
            continue;
        }
        let lam_next = lambda[n_terms];
        if lam_next == 0.0 {
            continue;
        }
        let gap_ratio = (lam_next - lambda[n_terms - 1]) / lam_next;
        out.push(gap_ratio.powf(k) * (running.value() - c_limit).norm());
    }
    Ok(out)
}

/// Outcome of checking the order-reduction identity
/// R_x^{lambda,k} = Gamma(k+1)/(Gamma(l) Gamma(k'+1)) x^{-k}
///                  int_0^x R_t^{lambda,k'} t^{k'} (x-t)^{l-1} dt
/// with k = l + k', l a positive integer and k' in (0, 1].
#[derive(Clone, Debug)]
pub struct OrderReduction {
    pub direct: Complex64,
    pub reduced: Complex64,
    pub error: f64,
    pub quadrature_converged: bool,
}

/// Split k > 1 as l + k' with k' in (0, 1] and l a positive integer.
pub fn order_split(k: f64) -> (u32, f64) {
    let k_prime = k - k.ceil() + 1.0;
    let l = (k - k_prime).round() as u32;
    (l, k_prime)
}

/// Evaluate both sides of the order-reduction identity at (x, s).
///
/// The integrand t^{k'} R_t^{lambda,k'} is piecewise smooth with kinks at
/// the frequencies; the quadrature is tanh-sinh per knot interval, which
/// absorbs the (t - lambda_j)^{k'} endpoint behavior.
pub fn order_reduction_eval(
    d: &DirichletPolynomial,
    k: f64,
    x: f64,
    s: Complex64,
    quadrature_tol: f64,
) -> Result<OrderReduction> {
    if !(k > 1.0) {
        return Err(Error::Validation(format!("order reduction needs k > 1, got {k}")));
    }
    if !(x > 0.0) {
        return Err(Error::Validation("length x must be > 0".into()));
    }
    let (l, k_prime) = order_split(k);
    let direct = d.riesz_mean(&RieszParams::first(k, x)?, s)?;

    // knots: 0, the frequencies below x, then x
    let mut knots = vec![0.0];
    for &lam in d.frequency().values() {
        if lam > 0.0 && lam < x {
            knots.push(lam);
        }
    }
    knots.push(x);
    knots.dedup();

    let integrand = |t: f64| -> Complex64 {
        if t <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let mean = d
            .riesz_mean(&RieszParams::first(k_prime, t).expect("valid params"), s)
            .expect("riesz mean on interior point");
        mean * t.powf(k_prime) * (x - t).max(0.0).powi(l as i32 - 1)
    };

    let mut acc = ComplexSum::new();
    let mut all_converged = true;
    for w in knots.windows(2) {
        let (value, _, converged) = tanh_sinh(integrand, w[0], w[1], quadrature_tol, 12);
        all_converged &= converged;
        acc.add(value);
    }
    let prefactor = gamma(k + 1.0) / (gamma(l as f64) * gamma(k_prime + 1.0)) * x.powf(-k);
    let reduced = acc.value() * prefactor;
    Ok(OrderReduction {
        direct,
        reduced,
        error: (direct - reduced).norm(),
        quadrature_converged: all_converged,
    })
}

/// Bohr-Cahen-type estimate of the abscissa of uniform Riesz summability:
/// least-squares slope of log sup_t |R_x(D)(it)| against x over the top
/// half of the grid. An estimator on finite data, not the true abscissa.
#[derive(Clone, Debug)]
pub struct AbscissaEstimate {
    pub slope: f64,
    pub per_x_norms: Vec<f64>,
}

pub fn abscissa_uniform_riesz(
    d: &DirichletPolynomial,
    k: f64,
    x_grid: &[f64],
    t_grid: &[f64],
) -> Result<AbscissaEstimate> {
    if x_grid.len() < 4 {
        return Err(Error::Validation("abscissa estimation needs >= 4 grid points".into()));
    }
    if t_grid.is_empty() {
        return Err(Error::Validation("t grid must be nonempty".into()));
    }
    let mut per_x_norms = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        let p = RieszParams::first(k, x)?;
        let weighted = d.riesz_coefficients(&p);
        let mut sup: f64 = 0.0;
        for &t in t_grid {
            sup = sup.max(weighted.evaluate(Complex64::new(0.0, t))?.norm());
        }
        per_x_norms.push(sup);
    }
    let half = x_grid.len() / 2;
    let xs = &x_grid[half..];
    let ys: Vec<f64> = per_x_norms[half..]
        .iter()
        .map(|&v| v.max(f64::MIN_POSITIVE).ln())
        .collect();
    Ok(AbscissaEstimate {
        slope: least_squares_slope(xs, &ys),
        per_x_norms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frequency::Frequency;
    use crate::grid::geometric_grid;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn grandi(n: usize) -> DirichletPolynomial {
        let coeffs = (0..n)
            .map(|i| c(if i % 2 == 0 { 1.0 } else { -1.0 }, 0.0))
            .collect();
        DirichletPolynomial::new(Frequency::naturals(n).unwrap(), coeffs).unwrap()
    }

    #[test]
    fn constant_series_detects_its_coefficient() {
        let d = DirichletPolynomial::new(
            Frequency::custom(vec![0.0]).unwrap(),
            vec![c(2.5, -1.0)],
        )
        .unwrap();
        let grid = geometric_grid(1.0, 100.0, 16).unwrap();
        let r = detect_riesz_limit(&d, RieszKind::First, 1.0, c(0.0, 0.0), &grid, 1e-12).unwrap();
        assert!(r.converged);
        assert_eq!(r.cauchy_residual, 0.0);
        assert_eq!(r.limit.unwrap(), c(2.5, -1.0));
    }

    #[test]
    fn grandi_first_means_reach_one_half() {
        let d = grandi(10_000);
        let grid = geometric_grid(10.0, 10_000.0, 32).unwrap();
        let r = detect_riesz_limit(&d, RieszKind::First, 1.0, c(0.0, 0.0), &grid, 1e-3).unwrap();
        assert!(r.converged);
        assert!((r.limit.unwrap() - c(0.5, 0.0)).norm() <= 1e-3);
    }

    #[test]
    fn grandi_partial_sums_do_not_converge() {
        let d = grandi(10_000);
        let grid = geometric_grid(10.0, 10_000.0, 32).unwrap();
        let r = detect_riesz_limit(&d, RieszKind::First, 0.0, c(0.0, 0.0), &grid, 1e-3).unwrap();
        assert!(!r.converged);
        assert!(r.limit.is_none());
    }

    #[test]
    fn detection_scales_linearly() {
        let d = grandi(2_000);
        let grid = geometric_grid(10.0, 2_000.0, 24).unwrap();
        let r1 = detect_riesz_limit(&d, RieszKind::First, 1.0, c(0.0, 0.0), &grid, 1e-2).unwrap();
        let d4 = d.scaled(c(4.0, 0.0));
        let r4 = detect_riesz_limit(&d4, RieszKind::First, 1.0, c(0.0, 0.0), &grid, 4e-2).unwrap();
        assert_eq!(r1.converged, r4.converged);
        assert!((r4.limit.unwrap() - r1.limit.unwrap() * 4.0).norm() < 1e-12);
    }

    #[test]
    fn consistency_first_on_geometric_series() {
        // a_n = 2^{-n} over lambda = (n): the series converges to 1 - 2^{-N}
        let n = 64;
        let coeffs: Vec<Complex64> = (1..=n).map(|i| c(0.5f64.powi(i), 0.0)).collect();
        let d =
            DirichletPolynomial::new(Frequency::naturals(n as usize).unwrap(), coeffs).unwrap();
        let grid = geometric_grid(1.0, 1e9, 64).unwrap();
        let out = consistency_first(&d, 0.0, 1.0, c(0.0, 0.0), &grid, 5e-7).unwrap();
        assert_eq!(out.verdict, ConsistencyVerdict::Agree);
        assert!((out.hypothesis.limit.unwrap().re - 1.0).abs() < 1e-6);
        assert!((out.conclusion.limit.unwrap().re - 1.0).abs() < 1e-6);
    }

    #[test]
    fn consistency_first_grandi_orders_one_and_two() {
        let d = grandi(10_000);
        let grid = geometric_grid(10.0, 10_000.0, 32).unwrap();
        let out = consistency_first(&d, 1.0, 2.0, c(0.0, 0.0), &grid, 1e-3).unwrap();
        assert_eq!(out.verdict, ConsistencyVerdict::Agree);
        assert!((out.hypothesis.limit.unwrap() - c(0.5, 0.0)).norm() <= 1e-3);
        assert!((out.conclusion.limit.unwrap() - c(0.5, 0.0)).norm() <= 1e-3);
    }

    #[test]
    fn consistency_first_inconclusive_when_hypothesis_diverges() {
        let d = grandi(10_000);
        let grid = geometric_grid(10.0, 10_000.0, 32).unwrap();
        // k = 0 partial sums oscillate: no verdict about ell = 1
        let out = consistency_first(&d, 0.0, 1.0, c(0.0, 0.0), &grid, 1e-3).unwrap();
        assert_eq!(out.verdict, ConsistencyVerdict::Inconclusive);
    }

    #[test]
    fn consistency_second_absolutely_convergent() {
        // a_n = n^{-2} over lambda = (log n)
        let n = 512;
        let coeffs: Vec<Complex64> = (1..=n).map(|i| c(1.0 / (i * i) as f64, 0.0)).collect();
        let d = DirichletPolynomial::new(Frequency::log_naturals(n).unwrap(), coeffs).unwrap();
        let full: f64 = (1..=n).map(|i| 1.0 / (i * i) as f64).sum();
        let grid = geometric_grid(1.0, 2000.0, 32).unwrap();
        let out = consistency_second(&d, 1.0, c(0.0, 0.0), &grid, 2e-2).unwrap();
        assert_eq!(out.verdict, ConsistencyVerdict::Agree);
        assert!((out.hypothesis.limit.unwrap().re - full).abs() < 2e-2);
        assert!((out.conclusion.limit.unwrap().re - full).abs() < 2e-2);
    }

    #[test]
    fn consistency_second_single_term() {
        let d = DirichletPolynomial::new(
            Frequency::log_naturals(1).unwrap(),
            vec![c(3.0, 1.0)],
        )
        .unwrap();
        let grid = geometric_grid(0.5, 500.0, 16).unwrap();
        let out = consistency_second(&d, 1.0, c(0.0, 0.0), &grid, 1e-3).unwrap();
        assert_eq!(out.verdict, ConsistencyVerdict::Agree);
        assert!((out.hypothesis.limit.unwrap() - c(3.0, 1.0)).norm() < 1e-3);
    }

    #[test]
    fn consistency_second_grandi_is_inconclusive() {
        // second-kind means of the Grandi series behave like partial sums
        let d = grandi(4_000);
        let grid = geometric_grid(10.0, 4_000.0, 32).unwrap();
        let out = consistency_second(&d, 1.0, c(0.0, 0.0), &grid, 1e-3).unwrap();
        assert_eq!(out.verdict, ConsistencyVerdict::Inconclusive);
    }

    #[test]
    fn tail_decay_on_grandi() {
        let d = grandi(10_001);
        let vals = tail_decay_check(&d, 1.0, c(0.5, 0.0), 1_000..10_001).unwrap();
        let max = vals.iter().cloned().fold(0.0f64, f64::max);
        assert!(max <= 1e-3, "max tail value {max}");
    }

    #[test]
    fn tail_decay_lacunary_gap_ratio_is_half() {
        // lambda = (2^j): the gap factor is exactly 1/2, so the values track
        // |S_N - C| itself
        let n = 12;
        let coeffs: Vec<Complex64> = vec![c(1.0, 0.0); n];
        let d = DirichletPolynomial::new(Frequency::powers_of_two(n).unwrap(), coeffs).unwrap();
        let c_lim = c(9.0, 0.0);
        let vals = tail_decay_check(&d, 1.0, c_lim, 1..n).unwrap();
        assert_eq!(vals.len(), n - 1);
        for (i, v) in vals.iter().enumerate() {
            let partial = (i + 1) as f64;
            assert!((v - 0.5 * (partial - 9.0).abs()).abs() < 1e-12);
        }
    }

    #[test]
    fn order_split_matches_convention() {
        assert_eq!(order_split(2.0), (1, 1.0));
        assert_eq!(order_split(1.5), (1, 0.5));
        let (l, kp) = order_split(2.7);
        assert_eq!(l, 2);
        assert!((kp - 0.7).abs() < 1e-12);
    }

    #[test]
    fn order_reduction_single_constant_term() {
        let d = DirichletPolynomial::new(
            Frequency::custom(vec![0.0]).unwrap(),
            vec![c(2.0, -1.0)],
        )
        .unwrap();
        let r = order_reduction_eval(&d, 2.0, 3.0, c(0.0, 0.0), 1e-10).unwrap();
        assert!(r.quadrature_converged);
        assert!((r.direct - c(2.0, -1.0)).norm() < 1e-14);
        assert!(r.error < 1e-9, "error {}", r.error);
    }

    #[test]
    fn order_reduction_normalization() {
        // with a single constant coefficient both sides equal it, which pins
        // the Gamma(l)Gamma(k'+1)/Gamma(k+1) prefactor; for l = 1, k' = 1
        // the underlying beta integral is x^2/2
        let d = DirichletPolynomial::new(Frequency::custom(vec![0.0]).unwrap(), vec![c(1.0, 0.0)])
            .unwrap();
        for &k in &[2.0, 1.5, 2.7] {
            let r = order_reduction_eval(&d, k, 5.0, c(0.0, 0.0), 1e-10).unwrap();
            assert!(r.error < 1e-9, "k={k}: error {}", r.error);
        }
    }

    #[test]
    fn abscissa_of_single_constant_term_is_flat() {
        let d = DirichletPolynomial::new(
            Frequency::custom(vec![0.0]).unwrap(),
            vec![c(1.0, 0.0)],
        )
        .unwrap();
        let x_grid = geometric_grid(1.0, 100.0, 16).unwrap();
        let t_grid = crate::grid::linear_grid(-5.0, 5.0, 11).unwrap();
        let est = abscissa_uniform_riesz(&d, 1.0, &x_grid, &t_grid).unwrap();
        assert!(est.slope.abs() < 1e-12);
        assert!(est.per_x_norms.iter().all(|&v| (v - 1.0).abs() < 1e-14));
    }
}

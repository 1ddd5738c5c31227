//! Poisson translation, norms (l2 / Besicovitch / Haar), flow time
//! averages, and the maximal-operator sampling suite.
//!
//! Every sup here is a grid maximum and every Haar integral a Monte-Carlo
//! estimate with a reported standard error; grids and seeds are part of the
//! result, and nothing claims a true supremum or an almost-everywhere
//! statement.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{GroupPoint, GroupRealization};
use crate::quad::{composite_gl, composite_gl_real, oscillatory_edges};
use crate::rng::task_rng;
use crate::series::DirichletPolynomial;
use crate::sum::{ComplexSum, CompensatedSum};

/// One draw of a grid-sup maximal operator at a Haar-random point.
#[derive(Clone, Copy, Debug)]
pub struct MaximalSample {
    /// Stream index of the RNG that produced omega.
    pub omega_seed: u64,
    /// Grid maximum of the sampled operator.
    pub max_value: f64,
    /// Grid point (length x, or u for the Poisson operator) attaining it.
    pub arg_x: f64,
}

/// Monte-Carlo estimate with its standard error.
#[derive(Clone, Copy, Debug)]
pub struct NormEstimate {
    pub value: f64,
    pub stderr: f64,
}

/// The horizontal translate f * p_u: coefficients a_n e^{-u lambda_n}.
/// Identical to `translate` by a real u since all frequencies are >= 0.
pub fn poisson_translate(d: &DirichletPolynomial, u: f64) -> Result<DirichletPolynomial> {
    if !(u >= 0.0) {
        return Err(Error::Validation(format!("Poisson parameter u must be >= 0, got {u}")));
    }
    d.translate(Complex64::new(u, 0.0))
}

/// The Poisson kernel P_u(t) = (1/pi) u / (u^2 + t^2), u > 0.
pub fn poisson_kernel(u: f64, t: f64) -> Result<f64> {
    if !(u > 0.0) {
        return Err(Error::Validation(format!("Poisson kernel needs u > 0, got {u}")));
    }
    Ok(u / (std::f64::consts::PI * (u * u + t * t)))
}

/// sqrt(sum |a_n|^2): the L2 norm over the group, exact by orthonormality
/// of distinct characters.
pub fn l2_norm(d: &DirichletPolynomial) -> f64 {
    let mut acc = CompensatedSum::new();
    for a in d.coefficients() {
        acc.add(a.norm_sqr());
    }
    acc.value().sqrt()
}

fn resolution_points(t_half: f64, lambda_max: f64) -> usize {
    (20.0 * t_half * lambda_max / std::f64::consts::TAU).ceil() as usize
}

fn flow_edges(a: f64, b: f64, lambda_max: f64, min_points: usize) -> Vec<f64> {
    // 16-node panels sized for >= 10 nodes per oscillation period
    let max_len = if lambda_max > 0.0 {
        std::f64::consts::TAU / lambda_max * 1.6
    } else {
        b - a
    };
    let mut edges = oscillatory_edges(a, b, 0.0, f64::INFINITY, max_len);
    while (edges.len() - 1) * 16 < min_points {
        let mut refined = Vec::with_capacity(edges.len() * 2);
        for w in edges.windows(2) {
            refined.push(w[0]);
            refined.push(0.5 * (w[0] + w[1]));
        }
        refined.push(*edges.last().unwrap());
        edges = refined;
    }
    edges
}

/// Besicovitch-type norm ((1/2T) int_{-T}^{T} |D(it)|^p dt)^{1/p} by
/// composite Gauss-Legendre panels.
///
/// `quad_points` must resolve the fastest oscillation:
/// quad_points >= 20 T lambda_N / (2 pi).
pub fn besicovitch_norm(
    d: &DirichletPolynomial,
    p: f64,
    t_half: f64,
    quad_points: usize,
) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::Validation(format!("norm exponent p must be >= 1, got {p}")));
    }
    if !(t_half > 0.0) {
        return Err(Error::Validation("averaging window T must be > 0".into()));
    }
    let lambda_max = d.frequency().max();
    let needed = resolution_points(t_half, lambda_max);
    if quad_points < needed {
        return Err(Error::Resolution(format!(
            "{quad_points} quadrature points under-resolve T={t_half}, lambda_N={lambda_max} (need >= {needed})"
        )));
    }
    let edges = flow_edges(-t_half, t_half, lambda_max, quad_points);
    let integral = composite_gl_real(
        |t| {
            let v = d
                .evaluate(Complex64::new(0.0, t))
                .expect("imaginary-axis evaluation cannot overflow");
            v.norm().powf(p)
        },
        &edges,
        16,
    );
    Ok((integral / (2.0 * t_half)).powf(1.0 / p))
}

/// Monte-Carlo estimate of the Haar L_p norm
/// (int_G |sum a_n h_n(omega)|^p d omega)^{1/p}.
///
/// Samples are drawn on deterministic per-index streams of `seed`; the
/// standard error of the p-th-power mean is propagated through the 1/p
/// power.
pub fn haar_norm(
    d: &DirichletPolynomial,
    g: &GroupRealization,
    p: f64,
    samples: usize,
    seed: u64,
) -> Result<NormEstimate> {
    if !(p >= 1.0) {
        return Err(Error::Validation(format!("norm exponent p must be >= 1, got {p}")));
    }
    if samples < 2 {
        return Err(Error::Validation("need at least 2 samples".into()));
    }
    if d.frequency() != g.frequency() {
        return Err(Error::FrequencyMismatch(
            "polynomial and group are over different frequencies".into(),
        ));
    }
    let powers: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = task_rng(seed, i);
            let omega = g.haar_sample(&mut rng);
            let chars = g.character_values(&omega).expect("dimension checked");
            let mut acc = ComplexSum::new();
            for (a, h) in d.coefficients().iter().zip(&chars) {
                acc.add(a * h);
            }
            acc.value().norm().powf(p)
        })
        .collect();
    let mut mean_acc = CompensatedSum::new();
    for &v in &powers {
        mean_acc.add(v);
    }
    let mean = mean_acc.value() / samples as f64;
    let mut var_acc = CompensatedSum::new();
    for &v in &powers {
        var_acc.add((v - mean) * (v - mean));
    }
    let se_mean = (var_acc.value() / (samples as f64 - 1.0)).sqrt() / (samples as f64).sqrt();
    let value = mean.powf(1.0 / p);
    // d(m^{1/p})/dm = (1/p) m^{1/p - 1}
    let stderr = if mean > 0.0 {
        se_mean * value / (p * mean)
    } else {
        0.0
    };
    Ok(NormEstimate { value, stderr })
}

/// Time average (1/2T) int_{-T}^{T} f_omega(t) dt of the flow restriction
/// f_omega(t) = sum a_n h_n(omega) e^{-i lambda_n t}.
pub fn time_average(
    d: &DirichletPolynomial,
    g: &GroupRealization,
    omega: &GroupPoint,
    t_half: f64,
    quad_points: usize,
) -> Result<Complex64> {
    if !(t_half > 0.0) {
        return Err(Error::Validation("averaging window T must be > 0".into()));
    }
    let lambda_max = d.frequency().max();
    let needed = resolution_points(t_half, lambda_max);
    if quad_points < needed {
        return Err(Error::Resolution(format!(
            "{quad_points} quadrature points under-resolve T={t_half}, lambda_N={lambda_max} (need >= {needed})"
        )));
    }
    let restricted = g.vertical_limit(d, omega)?;
    let edges = flow_edges(-t_half, t_half, lambda_max, quad_points);
    let integral = composite_gl(
        |t| {
            restricted
                .evaluate(Complex64::new(0.0, t))
                .expect("imaginary-axis evaluation cannot overflow")
        },
        &edges,
        16,
    );
    Ok(integral / (2.0 * t_half))
}

/// Geometric x-grid covering (lambda_1, 1.5 lambda_N] for the Riesz maximal
/// operator, `points` >= 64.
pub fn maximal_x_grid(d: &DirichletPolynomial, points: usize) -> Result<Vec<f64>> {
    let lambda = d.frequency().values();
    let lo = match d.frequency().min_positive() {
        Some(l) => 0.5 * l,
        None => 0.5,
    };
    let hi = (1.5 * d.frequency().max()).max(lo * 4.0).max(1.0);
    let grid = crate::grid::geometric_grid(lo, hi, points.max(64))?;
    debug_assert!(grid[0] > lambda[0] || lambda[0] == 0.0);
    Ok(grid)
}

fn validate_maximal_grid(d: &DirichletPolynomial, x_grid: &[f64]) -> Result<()> {
    if x_grid.len() < 64 {
        return Err(Error::Validation(format!(
            "maximal-operator grid needs >= 64 points, got {}",
            x_grid.len()
        )));
    }
    if !x_grid.windows(2).all(|w| w[1] > w[0]) {
        return Err(Error::Validation("maximal-operator grid must be increasing".into()));
    }
    let lambda_max = d.frequency().max();
    if x_grid[0] <= d.frequency().values()[0] {
        return Err(Error::Validation(
            "maximal-operator grid must start above lambda_1".into(),
        ));
    }
    if lambda_max > 0.0 && *x_grid.last().unwrap() < 1.5 * lambda_max * (1.0 - 1e-9) {
        return Err(Error::Validation(format!(
            "maximal-operator grid must reach 1.5 lambda_N = {}",
            1.5 * lambda_max
        )));
    }
    Ok(())
}

/// Grid approximant of the first-Riesz maximal operator at one point:
/// max over the x-grid of |R_x^{lambda,k}(D^omega)(0)|.
pub fn riesz_maximal_value(
    d: &DirichletPolynomial,
    g: &GroupRealization,
    k: f64,
    x_grid: &[f64],
    omega: &GroupPoint,
) -> Result<(f64, f64)> {
    validate_maximal_grid(d, x_grid)?;
    let restricted = g.vertical_limit(d, omega)?;
    let lambda = d.frequency().values();
    let mut best = (0.0f64, x_grid[0]);
    for &x in x_grid {
        let cutoff = d.frequency().count_below(x);
        let mut acc = ComplexSum::new();
        for (l, b) in lambda[..cutoff]
            .iter()
            .zip(&restricted.coefficients()[..cutoff])
        {
            let w = crate::series::riesz_weight(crate::series::RieszKind::First, k, *l, x);
            acc.add(b * w);
        }
        let v = acc.value().norm();
        if v > best.0 {
            best = (v, x);
        }
    }
    Ok(best)
}

/// Haar-sampled draws of the Riesz maximal operator, parallel over
/// deterministic per-index streams.
pub fn riesz_maximal_samples(
    d: &DirichletPolynomial,
    g: &GroupRealization,
    k: f64,
    x_grid: &[f64],
    seed: u64,
    count: usize,
) -> Result<Vec<MaximalSample>> {
    validate_maximal_grid(d, x_grid)?;
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = task_rng(seed, i);
            let omega = g.haar_sample(&mut rng);
            let (max_value, arg_x) = riesz_maximal_value(d, g, k, x_grid, &omega)?;
            Ok(MaximalSample {
                omega_seed: i,
                max_value,
                arg_x,
            })
        })
        .collect()
}

/// Grid approximant of the Hardy-Littlewood maximal operator along the
/// flow: max over (center, length) of (1/|I|) int_I |f_omega|.
pub fn hl_maximal_flow_sample(
    d: &DirichletPolynomial,
    g: &GroupRealization,
    omega: &GroupPoint,
    interval_lengths: &[f64],
    t_grid: &[f64],
) -> Result<f64> {
    if interval_lengths.is_empty() || t_grid.is_empty() {
        return Err(Error::Validation("need interval lengths and centers".into()));
    }
    if interval_lengths.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::Validation("interval lengths must be positive".into()));
    }
    let restricted = g.vertical_limit(d, omega)?;
    let lambda_max = d.frequency().max();
    let mut best: f64 = 0.0;
    for &len in interval_lengths {
        for &center in t_grid {
            let (a, b) = (center - 0.5 * len, center + 0.5 * len);
            let edges = flow_edges(a, b, lambda_max, 32);
            let integral = composite_gl_real(
                |t| {
                    restricted
                        .evaluate(Complex64::new(0.0, t))
                        .expect("imaginary-axis evaluation cannot overflow")
                        .norm()
                },
                &edges,
                16,
            );
            best = best.max(integral / len);
        }
    }
    Ok(best)
}

/// Empirical weak-type tail: the curve (alpha, mass(alpha)) with
/// mass(alpha) = fraction of samples exceeding alpha, and
/// sup_alpha alpha * mass(alpha) / norm1.
#[derive(Clone, Debug)]
pub struct WeakTypeReport {
    pub sup_alpha_mass: f64,
    pub curve: Vec<(f64, f64)>,
}

pub fn weak_type_tail(samples: &[f64], norm1: f64, alpha_grid: &[f64]) -> Result<WeakTypeReport> {
    if samples.is_empty() {
        return Err(Error::Validation("need at least one sample".into()));
    }
    if !(norm1 > 0.0) {
        return Err(Error::Validation("norm1 must be > 0".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut curve = Vec::with_capacity(alpha_grid.len());
    let mut sup = 0.0f64;
    for &alpha in alpha_grid {
        let above = sorted.len() - sorted.partition_point(|&v| v <= alpha);
        let mass = above as f64 / n;
        sup = sup.max(alpha * mass / norm1);
        curve.push((alpha, mass));
    }
    Ok(WeakTypeReport {
        sup_alpha_mass: sup,
        curve,
    })
}

/// Grid approximant of the Poisson maximal operator at one point:
/// max over the u-grid of |(f * p_u)(omega)| for the polynomial f.
pub fn poisson_maximal_sample(
    d: &DirichletPolynomial,
    g: &GroupRealization,
    omega: &GroupPoint,
    u_grid: &[f64],
) -> Result<(f64, f64)> {
    if u_grid.is_empty() || u_grid.iter().any(|&u| !(u > 0.0)) {
        return Err(Error::Validation("u grid must be positive and nonempty".into()));
    }
    let restricted = g.vertical_limit(d, omega)?;
    let lambda = d.frequency().values();
    let mut best = (0.0f64, u_grid[0]);
    for &u in u_grid {
        let mut acc = ComplexSum::new();
        for (n, b) in restricted.coefficients().iter().enumerate() {
            acc.add(b * (-u * lambda[n]).exp());
        }
        let v = acc.value().norm();
        if v > best.0 {
            best = (v, u);
        }
    }
    Ok(best)
}

//! Symmetric total integrals ∫_{−X}^{X} u and their limits as X → ∞.
//!
//! The finite-X value approaches the limit with an oscillating remainder of
//! size X^{−3/4}. Averaging over truncations whose leading phase (2/3)X^{3/2}
//! is spread evenly over one period cancels that term.

use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix2::Complex;
use crate::monodromy::predicted_total_integral;
use crate::pii_ode::{integrate, PIIProblem, SolverConfig, Trajectory};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    RawTruncation,
    PeriodAveraged,
    TailFit,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    /// Base truncation X.
    pub x: f64,
    /// ∫_{−X}^{X} u at the base truncation.
    pub raw: Complex,
    /// The accelerated estimate of the limit.
    pub averaged: Complex,
    pub predicted: Complex,
    /// |averaged − predicted|
    pub abs_error: f64,
    pub method: Method,
}

impl IntegralResult {
    fn new(x: f64, raw: Complex, averaged: Complex, predicted: Complex, method: Method) -> Self {
        IntegralResult { x, raw, averaged, predicted, abs_error: (averaged - predicted).norm(), method }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub alpha: Complex,
    pub k: Complex,
    pub predicted: Complex,
    pub averaged: Complex,
    pub abs_error: f64,
    pub x: f64,
    /// Seconds spent on this cell.
    pub wall_time: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn max_error(&self) -> f64 {
        self.rows.iter().map(|r| r.abs_error).fold(0.0, f64::max)
    }
}

/// ∫_{−X}^{X} u. The part beyond the trajectory's anchor uses the summed
/// asymptotic series, so only the left end needs to be covered.
pub fn symmetric_integral(traj: &Trajectory, x: f64) -> Result<Complex> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("truncation X must be positive, got {x}")));
    }
    traj.integral(-x, x)
}

/// Truncations X_j, j = 0..n, with (2/3)X_j^{3/2} = (2/3)X_base^{3/2} + 2πj/n.
pub fn averaging_points(x_base: f64, n: usize) -> Vec<f64> {
    let phase0 = 2.0 / 3.0 * x_base.powf(1.5);
    (0..n).map(|j| (1.5 * (phase0 + 2.0 * PI * j as f64 / n as f64)).powf(2.0 / 3.0)).collect()
}

fn solve_to(problem: &PIIProblem, x_far: f64, cfg: &SolverConfig) -> Result<Trajectory> {
    integrate(problem, -x_far, cfg)
}

fn predicted(problem: &PIIProblem) -> Result<Complex> {
    predicted_total_integral(problem.alpha(), problem.k())
}

/// The symmetric integral at `x` with no acceleration.
pub fn raw_total(problem: &PIIProblem, x: f64, cfg: &SolverConfig) -> Result<IntegralResult> {
    let traj = solve_to(problem, x, cfg)?;
    let raw = symmetric_integral(&traj, x)?;
    Ok(IntegralResult::new(x, raw, raw, predicted(problem)?, Method::RawTruncation))
}

/// Mean of the symmetric integral over `n_samples` truncations spanning one
/// period of the leading oscillation past `x_base`.
pub fn period_averaged_total(
    problem: &PIIProblem,
    x_base: f64,
    n_samples: usize,
    cfg: &SolverConfig,
) -> Result<IntegralResult> {
    if !(x_base >= 40.0) {
        return Err(Error::Domain(format!("X_base must be at least 40, got {x_base}")));
    }
    if n_samples < 4 {
        return Err(Error::Domain(format!("need at least 4 samples, got {n_samples}")));
    }
    let xs = averaging_points(x_base, n_samples);
    let traj = solve_to(problem, xs[n_samples - 1], cfg)?;
    let values = xs.iter().map(|&x| symmetric_integral(&traj, x)).collect::<Result<Vec<_>>>()?;
    let averaged = values.iter().sum::<Complex>() / n_samples as f64;
    Ok(IntegralResult::new(x_base, values[0], averaged, predicted(problem)?, Method::PeriodAveraged))
}

/// Least-squares fit of F(X) ≈ T + X^{−3/4}(c₁ sin φ + c₂ cos φ), φ = (2/3)X^{3/2},
/// over two periods past `x_base`; returns T.
pub fn tail_fit_total(
    problem: &PIIProblem,
    x_base: f64,
    n_samples: usize,
    cfg: &SolverConfig,
) -> Result<IntegralResult> {
    if !(x_base >= 40.0) || n_samples < 4 {
        return Err(Error::Domain(format!("tail fit needs X_base >= 40 and n >= 4, got {x_base}, {n_samples}")));
    }
    let phase0 = 2.0 / 3.0 * x_base.powf(1.5);
    let m = 2 * n_samples;
    let xs: Vec<f64> = (0..m).map(|j| (1.5 * (phase0 + 4.0 * PI * j as f64 / m as f64)).powf(2.0 / 3.0)).collect();
    let traj = solve_to(problem, xs[m - 1], cfg)?;
    let values = xs.iter().map(|&x| symmetric_integral(&traj, x)).collect::<Result<Vec<_>>>()?;
    let design = DMatrix::from_fn(m, 3, |i, j| {
        let x = xs[i];
        let phi = 2.0 / 3.0 * x.powf(1.5);
        match j {
            0 => 1.0,
            1 => x.powf(-0.75) * phi.sin(),
            _ => x.powf(-0.75) * phi.cos(),
        }
    });
    let svd = design.svd(true, true);
    let fit = |part: fn(&Complex) -> f64| -> Result<f64> {
        let rhs = DVector::from_iterator(m, values.iter().map(part));
        let sol = svd.solve(&rhs, 1e-14).map_err(|e| Error::Resolution(e.to_string()))?;
        Ok(sol[0])
    };
    let total = Complex::new(fit(|z| z.re)?, fit(|z| z.im)?);
    Ok(IntegralResult::new(x_base, values[0], total, predicted(problem)?, Method::TailFit))
}

/// Log-log slope of the envelope of |F(X) − predicted| against X.
///
/// The envelope at each X is the largest deviation over one oscillation
/// period [X, X + 2π/√X], sampled finely enough to resolve it.
pub fn remainder_slope(problem: &PIIProblem, xs: &[f64], cfg: &SolverConfig) -> Result<f64> {
    if xs.len() < 5 {
        return Err(Error::Domain(format!("need at least 5 truncations, got {}", xs.len())));
    }
    let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().cloned().fold(0.0, f64::max);
    if !(lo > 0.0) || hi < 10.0 * lo * (1.0 - 1e-12) {
        return Err(Error::Domain("truncations must be positive and span a decade".into()));
    }
    let target = predicted(problem)?;
    let far = hi + 2.0 * PI / hi.sqrt();
    let traj = solve_to(problem, far, cfg)?;
    let mut pts = Vec::with_capacity(xs.len());
    for &x in xs {
        let period = 2.0 * PI / x.sqrt();
        let n = 64;
        let mut env = 0.0f64;
        for i in 0..=n {
            let y = x + period * i as f64 / n as f64;
            env = env.max((symmetric_integral(&traj, y)? - target).norm());
        }
        pts.push((x.ln(), env));
    }
    let scale = pts.iter().map(|p| p.1).fold(0.0, f64::max);
    if scale < 1e-12 {
        return Err(Error::Resolution("no oscillation to fit; the remainder vanishes".into()));
    }
    let pts: Vec<(f64, f64)> = pts.into_iter().map(|(lx, e)| (lx, e.ln())).collect();
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Period-averaged totals for every cell, computed on at most `jobs` threads.
/// Cells are validated up front; any cell outside the two AS families fails
/// the whole sweep with a boundary or domain error.
pub fn sweep(
    cells: &[(Complex, Complex)],
    x_base: f64,
    n_samples: usize,
    cfg: &SolverConfig,
    jobs: usize,
) -> Result<SweepReport> {
    let problems = cells.iter().map(|&(a, k)| PIIProblem::new(a, k)).collect::<Result<Vec<_>>>()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
    let rows = pool.install(|| {
        problems
            .par_iter()
            .map(|p| {
                let t0 = Instant::now();
                let r = period_averaged_total(p, x_base, n_samples, cfg)?;
                Ok(SweepRow {
                    alpha: p.alpha(),
                    k: p.k(),
                    predicted: r.predicted,
                    averaged: r.averaged,
                    abs_error: r.abs_error,
                    x: x_base,
                    wall_time: t0.elapsed().as_secs_f64(),
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(SweepReport { rows })
}

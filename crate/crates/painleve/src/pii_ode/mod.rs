//! Ablowitz–Segur solutions u(x; α, k) of u'' = xu + 2u³ − α on the real line.
//!
//! The solution is pinned at +∞ by u ~ u_s(x) + k·A(x), where u_s is the slow
//! formal series (median-summed) and A ~ Ai is the decaying mode of the
//! linearisation about it. Building that data proceeds as follows.
//!
//! 1. Sum u_s by optimal truncation at p = L e^{iπ/3}, where the series is
//!    accurate to far below Ai size, and integrate the complex equation along
//!    the chord from p to the matching point x_m on the real axis.
//!    The result is the lateral sum u₊ = u_med − i sin(πα)·A.
//! 2. Project onto the median: Re u₊ for real α, i·Im u₊ for imaginary α.
//! 3. Add k·A and integrate backward from x_m in real arithmetic. The
//!    imaginary family uses u = i·w with w'' = xw − 2w³ − a.
//!
//! The chord also carries an error of about 1e−9 in the growing direction at
//! x_m. It is harmless going left but would swamp the solution going right.
//! [x_m, L] is therefore covered by a backward run v from proj(u_s(L)), whose
//! only sizeable error is a multiple of A. That multiple is fixed by matching
//! to the anchor in the Wronskian pairing with the growing mode B, which is
//! blind to B-type errors: the trajectory there is v + c·A. Beyond L it
//! continues as proj(u_s) + c·A.

mod decay;
pub(crate) mod dop853;
mod series;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix2::{c, Complex, I};
use crate::monodromy::{ASParameters, Family};
use crate::quadrature::gk15;
use crate::specfun::airy_pair;

pub use decay::{growth_log_derivative, DecayMode, DECAY_START};
use dop853::{Options, Solution};
pub use series::SlowSeries;

/// (u′, xu + 2u³ − α)
pub fn pii_rhs(x: f64, u: Complex, up: Complex, alpha: Complex) -> (Complex, Complex) {
    (up, u * x + u * u * u * 2.0 - alpha)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Where the summed series hands over to the real integration; also the
    /// right end of the sampled range. The complex chord starts at radius L + 6.
    pub anchor_l: f64,
    pub blowup_threshold: f64,
    pub max_steps: usize,
    /// Where the real backward integration starts.
    pub match_x: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            anchor_l: 12.0,
            blowup_threshold: 1e6,
            max_steps: 10_000_000,
            match_x: 7.0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::Domain("tolerances must be positive".into()));
        }
        if !(self.anchor_l >= 10.0 && self.anchor_l <= 24.0) {
            return Err(Error::Domain(format!("anchor_l must lie in [10, 24], got {}", self.anchor_l)));
        }
        if !(self.match_x >= 5.0 && self.match_x < self.anchor_l) {
            return Err(Error::Domain(format!("match_x must lie in [5, anchor_l), got {}", self.match_x)));
        }
        if !(self.blowup_threshold > 0.0) || self.max_steps == 0 {
            return Err(Error::Domain("blow-up threshold and step budget must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PIIProblem {
    pub params: ASParameters,
}

impl PIIProblem {
    pub fn new(alpha: Complex, k: Complex) -> Result<Self> {
        let params = ASParameters::new(alpha, k);
        match params.family {
            Family::RealAS | Family::ImaginaryAS => Ok(PIIProblem { params }),
            Family::HMBoundary => Err(Error::Boundary(format!("alpha = {alpha}, k = {k}"))),
            Family::Other => Err(Error::Domain(format!("alpha = {alpha}, k = {k} is not an AS parameter pair"))),
        }
    }

    pub fn alpha(&self) -> Complex {
        self.params.alpha
    }

    pub fn k(&self) -> Complex {
        self.params.k
    }
}

/// α/x + (2α − 2α³)/x⁴ and its first two derivatives.
pub fn slow_background(alpha: Complex, x: f64) -> (Complex, Complex, Complex) {
    let b = alpha * 2.0 - alpha.powi(3) * 2.0;
    let u = alpha / x + b * x.powi(-4);
    let up = -alpha / (x * x) - b * 4.0 * x.powi(-5);
    let upp = alpha * 2.0 / x.powi(3) + b * 20.0 * x.powi(-6);
    (u, up, upp)
}

/// Two-term background plus k·Ai at x = L.
///
/// This is the textbook boundary data. It is exact only at α = 0: for α ≠ 0
/// the neglected x^{−7} term exceeds Ai(L), so [`integrate`] does not use it.
pub fn as_boundary(alpha: Complex, k: Complex, l: f64) -> Result<(Complex, Complex)> {
    PIIProblem::new(alpha, k)?;
    if !(l >= 8.0) {
        return Err(Error::Domain(format!("boundary point must be >= 8, got {l}")));
    }
    let (ub, ubp, _) = slow_background(alpha, l);
    let (ai, aip) = airy_pair(l)?;
    Ok((ub + k * ai, ubp + k * aip))
}

/// (a, k₀) with α = i·a, k = i·k₀.
pub fn imaginary_reduction(alpha: Complex, k: Complex) -> Result<(f64, f64)> {
    let tol = 1e-14;
    if alpha.re.abs() > tol || k.re.abs() > tol {
        return Err(Error::Domain(format!("alpha = {alpha}, k = {k} are not purely imaginary")));
    }
    Ok((alpha.im, k.im))
}

/// Which real line inside ℂ the solution lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
enum Axis {
    Real,
    Imaginary,
}

impl Axis {
    fn project(self, z: Complex) -> Complex {
        match self {
            Axis::Real => c(z.re, 0.0),
            Axis::Imaginary => c(0.0, z.im),
        }
    }

    /// Embeds the real integration variable back into ℂ.
    fn embed(self, w: f64) -> Complex {
        match self {
            Axis::Real => c(w, 0.0),
            Axis::Imaginary => c(0.0, w),
        }
    }

    fn coordinate(self, z: Complex) -> f64 {
        match self {
            Axis::Real => z.re,
            Axis::Imaginary => z.im,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub x: f64,
    pub u: Complex,
    pub up: Complex,
}

/// Running integral over the steps of a dense solution, in increasing x.
#[derive(Clone, Debug)]
struct Primitive {
    /// (lo, hi, ∫ from the left end to lo, step index)
    cells: Vec<(f64, f64, f64, usize)>,
    comp: usize,
}

impl Primitive {
    fn new<const N: usize>(sol: &Solution<N>, comp: usize) -> Self {
        let mut order: Vec<usize> = (0..sol.steps.len()).collect();
        order.sort_by(|&a, &b| sol.steps[a].lo().total_cmp(&sol.steps[b].lo()));
        let mut cells = Vec::with_capacity(order.len());
        let mut acc = 0.0;
        for i in order {
            let s = &sol.steps[i];
            cells.push((s.lo(), s.hi(), acc, i));
            acc += gk15(&|x| s.eval(x)[comp], s.lo(), s.hi()).0;
        }
        Primitive { cells, comp }
    }

    /// ∫ from the left end of the solution to x.
    fn at<const N: usize>(&self, sol: &Solution<N>, x: f64) -> f64 {
        let i = self.cells.partition_point(|c| c.1 < x).min(self.cells.len().saturating_sub(1));
        let Some(&(lo, _, acc, step)) = self.cells.get(i) else {
            return 0.0;
        };
        let s = &sol.steps[step];
        acc + gk15(&|t| s.eval(t)[self.comp], lo, x).0
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    problem: PIIProblem,
    cfg: SolverConfig,
    axis: Axis,
    x_min: f64,
    series: SlowSeries,
    decay: DecayMode,
    /// Coefficient of A on [x_m, ∞), in axis coordinates. Equal to k up to
    /// the median correction for the truncated series at L.
    c_decay: f64,
    /// Real solution (u or w, and its derivative) from match_x down to x_min.
    left: Solution<2>,
    left_primitive: Primitive,
    /// Backward run from anchor_l to match_x that misses only a multiple of A.
    right: Solution<2>,
    right_primitive: Primitive,
    anchor_residual: f64,
}

/// Error for a state that left the safe region.
fn guard(threshold: f64) -> impl Fn(f64, f64) -> Result<()> {
    move |x, size| {
        if size > threshold || !size.is_finite() {
            Err(Error::BlowUp { x })
        } else {
            Ok(())
        }
    }
}

/// Extra radius for the start of the complex chord. At |p| = 10 the optimally
/// truncated series still errs by ~3e−11, which reaches u(0) as ~1e−8.
const CHORD_EXTRA: f64 = 6.0;

/// Lateral sum (u₊, u₊′) at x_m, from the series at p = (L + 6) e^{iπ/3} along
/// the straight chord p → x_m.
///
/// On this chord the Ai-type mode only decays toward x_m, so integration
/// errors never swamp the exponentially small Stokes content. Going down the
/// real axis from L instead would bury it under local errors of size
/// rtol·|u| ≫ Ai(L).
fn lateral_sum(alpha: Complex, series: &SlowSeries, cfg: &SolverConfig) -> Result<(Complex, Complex)> {
    let p = Complex::from_polar(cfg.anchor_l + CHORD_EXTRA, PI / 3.0);
    let (u0, up0) = series.eval(p);
    let dx = c(cfg.match_x, 0.0) - p;
    let blow = guard(cfg.blowup_threshold);
    let chord = |s: f64, y: &[f64; 4]| {
        let x = p + dx * s;
        let u = c(y[0], y[1]);
        let (du, dup) = (c(y[2], y[3]) * dx, (x * u + u * u * u * 2.0 - alpha) * dx);
        [du.re, du.im, dup.re, dup.im]
    };
    let opt = Options { rtol: cfg.rel_tol.min(1e-13), atol: 1e-16, max_steps: cfg.max_steps, dense: false };
    let y0 = [u0.re, u0.im, up0.re, up0.im];
    let y = dop853::integrate(chord, 0.0, y0, 1.0, &opt, |s, y| blow(s, y[0].hypot(y[1])))?.y_end;
    Ok((c(y[0], y[1]), c(y[2], y[3])))
}

/// Coefficient of A in the perturbation (e, e′), discarding any multiple of
/// the growing mode with log-derivative `t`.
fn decay_content<T>(e: T, ep: T, a: f64, ap: f64, t: f64) -> T
where
    T: std::ops::Mul<f64, Output = T> + std::ops::Sub<Output = T> + std::ops::Div<f64, Output = T>,
{
    (e * t - ep) / (a * t - ap)
}

/// Computes u(x; α, k) on [x_min, anchor_l].
pub fn integrate(problem: &PIIProblem, x_min: f64, cfg: &SolverConfig) -> Result<Trajectory> {
    cfg.validate()?;
    if !(x_min < cfg.anchor_l) || !x_min.is_finite() {
        return Err(Error::Domain(format!("x_min = {x_min} must be finite and below anchor_l = {}", cfg.anchor_l)));
    }
    let (alpha, k) = (problem.alpha(), problem.k());
    let axis = match problem.params.family {
        Family::ImaginaryAS => Axis::Imaginary,
        _ => Axis::Real,
    };
    let series = SlowSeries::new(alpha);
    let (xm, l) = (cfg.match_x, cfg.anchor_l);
    let tight =
        Options { rtol: cfg.rel_tol.min(1e-13), atol: cfg.abs_tol.min(1e-20), max_steps: cfg.max_steps, dense: true };
    let decay = DecayMode::new(&series, xm, tight.rtol, cfg.max_steps)?;
    let t = growth_log_derivative(&series, xm, tight.rtol, cfg.max_steps)?;
    let (u_plus, up_plus) = lateral_sum(alpha, &series, cfg)?;
    let (a, ap) = decay.eval(xm);
    let jump = I * (alpha * PI).sin();
    let anchor_residual =
        decay_content(u_plus - axis.project(u_plus) + jump * a, up_plus - axis.project(up_plus) + jump * ap, a, ap, t)
            .norm();

    // u = i·w turns 2u³ into −2w³ on the imaginary axis.
    let (cube, a_c) = match axis {
        Axis::Real => (2.0, alpha.re),
        Axis::Imaginary => (-2.0, alpha.im),
    };
    let f = move |x: f64, y: &[f64; 2]| [y[1], x * y[0] + cube * y[0].powi(3) - a_c];
    let blow = guard(cfg.blowup_threshold);
    let check = |x: f64, y: &[f64; 2]| blow(x, y[0].abs());

    // Second-order mode A₂ ≈ 2u_s A²/Q of the expansion m + κA + κ²A₂ + …, so
    // that u₊ is the case κ = σ = −i sin πα and the target is κ = k.
    let (us_m, _) = series.eval(c(xm, 0.0));
    let q = xm + 6.0 * (us_m * us_m).re;
    let a2 = us_m * (2.0 * a * a / q);
    let a2p = a2 * (2.0 * ap / a);
    let sigma = -jump;
    let m = axis.project(u_plus) - sigma * sigma * a2;
    let mp = axis.project(up_plus) - sigma * sigma * a2p;

    let (us, ups) = series.eval(c(l, 0.0));
    let right = dop853::integrate(f, l, [axis.coordinate(us), axis.coordinate(ups)], xm, &tight, check)?;
    let v = right.y_end;
    let c_decay = axis.coordinate(k) + decay_content(axis.coordinate(m) - v[0], axis.coordinate(mp) - v[1], a, ap, t);
    let (q2, q2p) = (k * k * a2, k * k * a2p);
    let y0 = [v[0] + c_decay * a + axis.coordinate(q2), v[1] + c_decay * ap + axis.coordinate(q2p)];

    // Between x_m and 0 the A part grows by ~1e6 relative to the rest, so
    // that stretch keeps the tight tolerances.
    let x_tight = x_min.max(0.0).min(xm);
    let mut left = dop853::integrate(f, xm, y0, x_tight, &tight, check)?;
    if x_min < x_tight {
        let opt = Options { rtol: cfg.rel_tol, atol: cfg.abs_tol, ..tight };
        let rest = dop853::integrate(f, x_tight, left.y_end, x_min, &opt, check)?;
        left.append(rest);
    }
    let left_primitive = Primitive::new(&left, 0);
    let right_primitive = Primitive::new(&right, 0);
    Ok(Trajectory {
        problem: *problem,
        cfg: *cfg,
        axis,
        x_min,
        series,
        decay,
        c_decay,
        left,
        left_primitive,
        right,
        right_primitive,
        anchor_residual,
    })
}

impl Trajectory {
    pub fn problem(&self) -> &PIIProblem {
        &self.problem
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.cfg.anchor_l
    }

    /// How far the lateral sum at the matching point is from proj(u₊) −
    /// i sin(πα)·A, measured as the coefficient of A in the difference (so in
    /// units of k).
    pub fn anchor_residual(&self) -> f64 {
        self.anchor_residual
    }

    /// Accepted integrator steps taken on [x_min, anchor_l].
    pub fn step_count(&self) -> usize {
        self.left.accepted + self.right.accepted
    }

    fn coverage(&self, x: f64) -> Result<()> {
        if x < self.x_min || x.is_nan() {
            return Err(Error::Coverage(format!("x = {x} is left of the trajectory start {}", self.x_min)));
        }
        Ok(())
    }

    /// (u, u′) at any x ≥ x_min. Beyond anchor_l this uses the asymptotic form.
    pub fn eval(&self, x: f64) -> Result<(Complex, Complex)> {
        self.coverage(x)?;
        let xm = self.cfg.match_x;
        if x < xm {
            let y = self.left.eval(x).ok_or_else(|| Error::Coverage(format!("x = {x}")))?;
            return Ok((self.axis.embed(y[0]), self.axis.embed(y[1])));
        }
        let (a, ap) = self.decay.eval(x);
        let (u, up) = if x <= self.cfg.anchor_l {
            let y = self.right.eval(x).ok_or_else(|| Error::Coverage(format!("x = {x}")))?;
            (self.axis.embed(y[0]), self.axis.embed(y[1]))
        } else {
            let (u, up) = self.series.eval(c(x, 0.0));
            (self.axis.project(u), self.axis.project(up))
        };
        let cd = self.axis.embed(self.c_decay);
        Ok((u + cd * a, up + cd * ap))
    }

    /// The integrator's step points on [x_min, anchor_l], increasing in x.
    pub fn samples(&self) -> Vec<Sample> {
        let mut xs: Vec<f64> = self.left.steps.iter().map(|s| s.x0 + s.h).collect();
        xs.reverse();
        xs.extend(self.right.steps.iter().map(|s| s.x0 + s.h));
        xs.retain(|&x| x >= self.x_min);
        xs.dedup();
        xs.into_iter().filter_map(|x| self.eval(x).ok().map(|(u, up)| Sample { x, u, up })).collect()
    }

    /// `n` evenly spaced samples over [x_min, anchor_l].
    pub fn uniform_samples(&self, n: usize) -> Result<Vec<Sample>> {
        if n < 2 {
            return Err(Error::Domain("need at least two samples".into()));
        }
        let (a, b) = (self.x_min, self.x_max());
        (0..n)
            .map(|i| {
                let x = if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 };
                self.eval(x).map(|(u, up)| Sample { x, u, up })
            })
            .collect()
    }

    /// ∫ u over [x_min, x] for x ≤ match_x.
    fn left_part(&self, x: f64) -> f64 {
        self.left_primitive.at(&self.left, x)
    }

    /// A primitive of u, defined for x ≥ x_min.
    fn primitive(&self, x: f64) -> Complex {
        let xm = self.cfg.match_x;
        let l = self.cfg.anchor_l;
        if x <= xm {
            return self.axis.embed(self.left_part(x));
        }
        let mut p = self.axis.embed(self.left_part(xm) + self.right_primitive.at(&self.right, x.min(l)));
        if x > l {
            p += self.axis.project(self.series.antiderivative(x) - self.series.antiderivative(l));
        }
        p + self.axis.embed(self.c_decay) * (self.decay.tail_integral(xm) - self.decay.tail_integral(x))
    }

    /// ∫_a^b u dy for x_min ≤ a, b.
    pub fn integral(&self, a: f64, b: f64) -> Result<Complex> {
        self.coverage(a.min(b))?;
        if !b.is_finite() || !a.is_finite() {
            return Err(Error::Domain("integration limits must be finite".into()));
        }
        Ok(self.primitive(b) - self.primitive(a))
    }
}

//! The decaying solution A of the linearisation δu'' = (x + 6u_s²) δu about
//! the slow series, normalised so that A(x)/Ai(x) → 1 as x → +∞.
//!
//! A is computed through its logarithmic derivative S = A′/A, which obeys the
//! Riccati equation S′ = Q − S² with Q = x + 6 Re(u_s²). Integrating toward
//! smaller x is stable for the decaying branch. The running integral of A is
//! carried along so that tails ∫ A need no separate quadrature.

use crate::error::Result;
use crate::specfun::ln_airy_ai;

use super::dop853::{self, Options, Solution};
use super::series::SlowSeries;
use crate::matrix2::c;

/// Start of the Riccati run. Ai(60) ≈ 1e−135, so A is treated as zero beyond.
pub const DECAY_START: f64 = 60.0;

#[derive(Clone, Debug)]
pub struct DecayMode {
    /// ln A is stored shifted by this constant to keep the state O(1) at x_lo.
    shift: f64,
    x_lo: f64,
    sol: Solution<3>,
}

fn q_and_slope(series: &SlowSeries, x: f64) -> (f64, f64) {
    let (u, up) = series.eval(c(x, 0.0));
    (x + 6.0 * (u * u).re, 1.0 + 12.0 * (u * up).re)
}

impl DecayMode {
    pub fn new(series: &SlowSeries, x_lo: f64, rtol: f64, max_steps: usize) -> Result<Self> {
        let x1 = DECAY_START;
        let alpha2 = (series.coeffs()[0] * series.coeffs()[0]).re;
        let (q1, dq1) = q_and_slope(series, x1);
        let (ln_ai, dln_ai) = ln_airy_ai(x1)?;
        // WKB corrections relative to Airy; both vanish at α = 0.
        let s1 = dln_ai - (q1.sqrt() - x1.sqrt()) - (dq1 / (4.0 * q1) - 0.25 / x1);
        let ln_a1 = ln_ai + 2.0 * alpha2 * x1.powf(-1.5) - 0.25 * (q1 / x1).ln();
        let shift = 2.0 / 3.0 * x_lo.powf(1.5);
        let rhs = |x: f64, y: &[f64; 3]| {
            let (q, _) = q_and_slope(series, x);
            [q - y[0] * y[0], y[0], y[1].exp()]
        };
        let opt = Options { rtol, atol: rtol * 1e-2, max_steps, dense: true };
        let sol = dop853::integrate(rhs, x1, [s1, ln_a1 + shift, 0.0], x_lo, &opt, |_, _| Ok(()))?;
        Ok(DecayMode { shift, x_lo, sol })
    }

    pub fn x_lo(&self) -> f64 {
        self.x_lo
    }

    /// (A, A′) at x ≥ x_lo.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        match self.sol.eval(x) {
            Some(y) => {
                let a = (y[1] - self.shift).exp();
                (a, y[0] * a)
            }
            None => (0.0, 0.0),
        }
    }

    /// ∫_x^∞ A for x ≥ x_lo.
    pub fn tail_integral(&self, x: f64) -> f64 {
        match self.sol.eval(x) {
            Some(y) => -y[2] * (-self.shift).exp(),
            None => 0.0,
        }
    }
}

/// B′/B at `x` for the growing solution B of the same linearisation.
///
/// T = B′/B obeys T′ = Q − T² and is attracted to the growing branch when
/// integrated toward larger x, so a WKB start four units earlier is forgotten
/// to about e^{−18} by the time x is reached.
pub fn growth_log_derivative(series: &SlowSeries, x: f64, rtol: f64, max_steps: usize) -> Result<f64> {
    let x0 = (x - 4.0).max(1.0);
    let (q0, dq0) = q_and_slope(series, x0);
    let t0 = q0.sqrt() - dq0 / (4.0 * q0);
    let rhs = |x: f64, y: &[f64; 1]| [q_and_slope(series, x).0 - y[0] * y[0]];
    let opt = Options { rtol, atol: rtol, max_steps, dense: false };
    Ok(dop853::integrate(rhs, x0, [t0], x, &opt, |_, _| Ok(()))?.y_end[0])
}

//! Cubic phase functions and the steepest-descent geometry around their
//! stationary points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix2::{c, Complex, I};

/// Stationary-point data for one value of x.
///
/// `r_free` is the inner radius `r < R` of the local disc; nothing here depends on
/// its value, so it is carried only when the caller fixes one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseContext {
    pub x: f64,
    /// `(−x)^{3/2}` for x < 0.
    pub t: Option<f64>,
    /// `±(i/2)√x` for x > 0.
    pub lambda_pm: Option<(Complex, Complex)>,
    pub z_pm: (f64, f64),
    /// `√x / 4` for x > 0.
    pub big_r: Option<f64>,
    pub r_free: Option<f64>,
}

impl PhaseContext {
    pub fn new(x: f64) -> Result<Self> {
        if x == 0.0 || !x.is_finite() {
            return Err(Error::Domain("phase context needs a finite x != 0".into()));
        }
        let (t, lambda_pm, big_r) = if x < 0.0 {
            (Some((-x).powf(1.5)), None, None)
        } else {
            let l = c(0.0, 0.5 * x.sqrt());
            (None, Some((l, -l)), Some(0.25 * x.sqrt()))
        };
        Ok(PhaseContext { x, t, lambda_pm, z_pm: (-0.5, 0.5), big_r, r_free: None })
    }
}

/// θ(λ, x) = i(4λ³/3 + xλ)
pub fn theta(lambda: Complex, x: f64) -> Complex {
    I * (lambda * lambda * lambda * (4.0 / 3.0) + lambda * x)
}

/// θ̃(z) = i(4z³/3 − z)
pub fn theta_tilde(z: Complex) -> Complex {
    I * (z * z * z * (4.0 / 3.0) - z)
}

/// z(λ) = −θ(λ, x)
pub fn z_map(lambda: Complex, x: f64) -> Result<Complex> {
    if x <= 0.0 {
        return Err(Error::Domain(format!("z_map needs x > 0, got {x}")));
    }
    Ok(-theta(lambda, x))
}

pub fn z_map_derivative(lambda: Complex, x: f64) -> Complex {
    -I * (lambda * lambda * 4.0 + x)
}

/// Local inverse of [`z_map`] on the disc |λ| < √x/4, by Newton iteration.
pub fn z_map_inverse(z: Complex, x: f64) -> Result<Complex> {
    if x <= 0.0 {
        return Err(Error::Domain(format!("z_map needs x > 0, got {x}")));
    }
    let big_r = 0.25 * x.sqrt();
    let mut lam = z / c(0.0, -x);
    for _ in 0..50 {
        let f = z_map(lam, x)? - z;
        let step = f / z_map_derivative(lam, x);
        lam -= step;
        if step.norm() <= 1e-16 * (1.0 + lam.norm()) {
            break;
        }
        if lam.norm() > 2.0 * big_r {
            break;
        }
    }
    let resid = (z_map(lam, x)? - z).norm();
    if lam.norm() >= big_r || resid > 1e-13 * (1.0 + z.norm()) {
        return Err(Error::Domain(format!("{z} is not in the image of the disc |lambda| < {big_r}")));
    }
    Ok(lam)
}

/// η(z) = z − 4z³/3
pub fn eta(z: Complex) -> Complex {
    z - z * z * z * (4.0 / 3.0)
}

/// ζ(z) = (4√3/3) e^{3πi/4} (z − 1/2)(z + 1)^{1/2}, principal square root.
pub fn zeta(z: Complex) -> Result<Complex> {
    let w = z + 1.0;
    if w.im == 0.0 && w.re <= 0.0 {
        return Err(Error::BranchCut {
            arg: std::f64::consts::PI,
            lo: -std::f64::consts::PI,
            hi: std::f64::consts::PI,
        });
    }
    let pre = c(0.0, 0.75 * std::f64::consts::PI).exp() * (4.0 * 3f64.sqrt() / 3.0);
    Ok(pre * (z - 0.5) * w.sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DescentPoints {
    pub gamma_plus: Complex,
    pub gamma_minus: Complex,
    pub h_plus: Complex,
    pub h_minus: Complex,
}

/// γ±(t) = t ± i(t²/3 + x/4)^{1/2} and h±(t) = it ± (t²/3 + 1/4)^{1/2}.
pub fn descent_curves(t: f64, x: f64) -> Result<DescentPoints> {
    if x <= 0.0 {
        return Err(Error::Domain(format!("descent curves need x > 0, got {x}")));
    }
    let g = (t * t / 3.0 + x / 4.0).sqrt();
    let h = (t * t / 3.0 + 0.25).sqrt();
    Ok(DescentPoints { gamma_plus: c(t, g), gamma_minus: c(t, -g), h_plus: c(h, t), h_minus: c(-h, t) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn theta_basics() {
        assert_eq!(theta(c(0.0, 0.0), 3.0), c(0.0, 0.0));
        let l = c(0.3, -1.2);
        assert!((theta(-l, 2.0) + theta(l, 2.0)).norm() < 1e-15);
        let ctx = PhaseContext::new(4.0).unwrap();
        let (lp, lm) = ctx.lambda_pm.unwrap();
        assert!(theta(lp, 4.0).im.abs() < 1e-15 && theta(lm, 4.0).im.abs() < 1e-15);
        assert!((theta(lp, 4.0).re + 8.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn theta_tilde_at_stationary_points() {
        assert!((theta_tilde(c(0.5, 0.0)) - c(0.0, -1.0 / 3.0)).norm() < 1e-16);
        assert!((theta_tilde(c(-0.5, 0.0)) - c(0.0, 1.0 / 3.0)).norm() < 1e-16);
    }

    #[test]
    fn scaling_between_phases() {
        let x: f64 = -4.0;
        let s = (-x).sqrt();
        for z in [c(0.3, 0.1), c(-1.2, 0.7), c(2.0, -0.4)] {
            let d = theta(z * s, x) - theta_tilde(z) * (-x).powf(1.5);
            assert!(d.norm() < 1e-13);
        }
        assert_eq!(PhaseContext::new(x).unwrap().t, Some(8.0));
        assert!(PhaseContext::new(0.0).is_err());
    }

    #[test]
    fn z_map_basics() {
        assert_eq!(z_map(c(0.0, 0.0), 9.0).unwrap(), c(0.0, 0.0));
        assert!((z_map_derivative(c(0.0, 0.0), 9.0) - c(0.0, -9.0)).norm() < 1e-16);
        let h = 1e-6;
        let l = c(0.2, 0.1);
        let fd = (z_map(l + h, 9.0).unwrap() - z_map(l - h, 9.0).unwrap()) / (2.0 * h);
        assert!((fd - z_map_derivative(l, 9.0)).norm() < 1e-8);
        assert!(z_map(l, -1.0).is_err());
    }

    #[test]
    fn z_map_round_trip() {
        let x = 9.0;
        let big_r = 0.25 * 3.0;
        for i in 0..24 {
            let l = Complex::from_polar(big_r / 2.0 * (i as f64 / 24.0), 0.7 * i as f64);
            let back = z_map_inverse(z_map(l, x).unwrap(), x).unwrap();
            assert!((back - l).norm() < 1e-12);
        }
        assert!(z_map_inverse(c(100.0, 0.0), x).is_err());
    }

    #[test]
    fn eta_and_zeta() {
        assert_eq!(eta(c(0.0, 0.0)), c(0.0, 0.0));
        let h = 1e-6;
        assert!(((eta(c(h, 0.0)) - eta(c(-h, 0.0))) / (2.0 * h) - c(1.0, 0.0)).norm() < 1e-10);
        assert_eq!(zeta(c(0.5, 0.0)).unwrap(), c(0.0, 0.0));
        for z in [c(0.3, 0.0), c(0.7, 0.0), c(0.5, 0.2)] {
            let r = zeta(z).unwrap().powi(2) + theta_tilde(z) * 4.0 - theta_tilde(c(0.5, 0.0)) * 4.0;
            assert!(r.norm() < 1e-14);
            assert!((eta(z) - I * theta_tilde(z)).norm() < 1e-15);
        }
        assert!(zeta(c(-2.0, 0.0)).is_err());
    }

    #[test]
    fn descent_curve_examples() {
        let x = 4.0;
        let p = descent_curves(0.0, x).unwrap();
        let (lp, lm) = PhaseContext::new(x).unwrap().lambda_pm.unwrap();
        assert!((p.gamma_plus - lp).norm() < 1e-16 && (p.gamma_minus - lm).norm() < 1e-16);
        for t in [1.0, -1.0, 5.0, -5.0] {
            let p = descent_curves(t, x).unwrap();
            assert!((theta(p.gamma_plus, x).im - theta(lp, x).im).abs() < 1e-12);
            assert!((theta(p.gamma_minus, x).im - theta(lm, x).im).abs() < 1e-12);
            assert!(p.gamma_plus.norm() >= 3f64.sqrt() * t.abs() / 3.0 + x.sqrt() / 4.0);
        }
        assert!(descent_curves(1.0, -1.0).is_err());
    }

    #[test]
    fn steepest_descent_along_gamma_plus() {
        let x = 4.0;
        let re = |t: f64| theta(descent_curves(t, x).unwrap().gamma_plus, x).re;
        let peak = re(0.0);
        let mut prev_right = peak;
        let mut prev_left = peak;
        for i in 1..=1000 {
            let t = 0.01 * i as f64;
            let (r, l) = (re(t), re(-t));
            assert!(r < prev_right && l < prev_left, "t = {t}");
            prev_right = r;
            prev_left = l;
        }
    }

    #[test]
    fn theta_tilde_vanishes_in_real_part_on_h_plus() {
        for i in 0..1000 {
            let t = -5.0 + 0.01 * i as f64;
            let h = descent_curves(t, 1.0).unwrap();
            assert!(theta_tilde(h.h_plus).re.abs() < 1e-12 * (1.0 + t.abs().powi(3)));
            assert!(theta_tilde(h.h_minus).re.abs() < 1e-12 * (1.0 + t.abs().powi(3)));
        }
    }

    proptest! {
        #[test]
        fn eta_is_odd(a in -3.0f64..3.0, b in -3.0f64..3.0) {
            let z = c(a, b);
            prop_assert!((eta(-z) + eta(z)).norm() < 1e-13);
        }

        #[test]
        fn gamma_minus_is_conjugate(t in -20.0f64..20.0, x in 0.01f64..50.0) {
            let p = descent_curves(t, x).unwrap();
            prop_assert_eq!(p.gamma_minus, p.gamma_plus.conj());
        }
    }
}

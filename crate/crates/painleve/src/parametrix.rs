//! The Bessel-type model solution near the origin.
//!
//! `phi0(z) = B(z)·[[v₁, v₂], [v₁′, v₂′]]` is right-multiplied by Ê, Ŝ₁, Ŝ₂ to
//! give the three sector solutions Φ̂¹, Φ̂², Φ̂³. A point on the universal cover
//! of the punctured plane is represented by `(z, arg)`; sector `k` accepts
//! arguments in `(π(k − 3/2), π(k + 1/2))`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix2::{c, sigma3_exp, sigma3_power, ArgWindow, Complex, Matrix2, I, ONE};
use crate::specfun::{gamma_complex, v_pair, SeriesPolicy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorIndex(u8);

impl SectorIndex {
    pub fn new(k: u8) -> Result<Self> {
        if (1..=3).contains(&k) {
            Ok(SectorIndex(k))
        } else {
            Err(Error::Domain(format!("sector index {k} not in 1..=3")))
        }
    }

    pub fn all() -> [SectorIndex; 3] {
        [SectorIndex(1), SectorIndex(2), SectorIndex(3)]
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn window(self) -> ArgWindow {
        ArgWindow::from_lo(PI * (self.0 as f64 - 1.5))
    }

    /// The argument in the middle of the sector, where e^{±z} have equal size.
    pub fn central_arg(self) -> f64 {
        PI * (self.0 as f64 - 0.5)
    }
}

/// Ê, Ŝ₁, Ŝ₂ for one α.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParametrixMatrices {
    pub e_hat: Matrix2,
    pub s1_hat: Matrix2,
    pub s2_hat: Matrix2,
}

impl ParametrixMatrices {
    pub fn new(alpha: Complex) -> Result<Self> {
        Ok(ParametrixMatrices { e_hat: e_hat(alpha)?, s1_hat: s1_hat(alpha), s2_hat: s2_hat(alpha) })
    }
}

pub(crate) fn check_cos(alpha: Complex) -> Result<Complex> {
    let cs = (alpha * PI).cos();
    if cs.norm() <= 1e-12 {
        return Err(Error::Singular(format!("cos(pi alpha) vanishes at alpha = {alpha}")));
    }
    Ok(cs)
}

pub fn e_hat(alpha: Complex) -> Result<Matrix2> {
    let cs = check_cos(alpha)?;
    let pre = c(PI.sqrt(), 0.0) / (cs * 2.0);
    let d1 = c(2.0, 0.0).powc(ONE - alpha) / gamma_complex(alpha + 0.5)?;
    let d2 = c(2.0, 0.0).powc(alpha) / gamma_complex(c(1.5, 0.0) - alpha)?;
    let rot = sigma3_exp(c(0.0, PI / 4.0))?;
    let m = Matrix2::new((-I * PI * alpha).exp(), I, I * (I * PI * alpha).exp(), ONE);
    Ok(Matrix2::diag(d1, d2).scale(pre) * rot * m)
}

pub fn s1_hat(alpha: Complex) -> Matrix2 {
    Matrix2::upper((alpha * PI).sin() * 2.0)
}

pub fn s2_hat(alpha: Complex) -> Matrix2 {
    Matrix2::lower(-(alpha * PI).sin() * 2.0)
}

/// `½ e^{−iπσ₃/4} [[1, 1], [−1, 1]]`
fn half_rotation() -> Matrix2 {
    let e = c(0.0, -PI / 4.0).exp();
    Matrix2::diag(e, e.conj()) * Matrix2::from_real(1.0, 1.0, -1.0, 1.0) * 0.5
}

pub fn b_matrix(z: Complex, alpha: Complex) -> Result<Matrix2> {
    if z.norm() == 0.0 {
        return Err(Error::Singular("B(z) at z = 0".into()));
    }
    Ok(half_rotation() * Matrix2::lower(-alpha / z))
}

pub fn phi0_with(z: Complex, alpha: Complex, w: ArgWindow, pol: &SeriesPolicy) -> Result<Matrix2> {
    let v = v_pair(z, alpha, w, pol)?;
    Ok(b_matrix(z, alpha)? * Matrix2::new(v.v1, v.v2, v.v1p, v.v2p))
}

pub fn phi0(z: Complex, alpha: Complex, w: ArgWindow) -> Result<Matrix2> {
    phi0_with(z, alpha, w, &SeriesPolicy::default())
}

/// The limit of Φ̂⁰(z) z^{−ασ₃} as z → 0.
pub fn phi0_regularized_limit(alpha: Complex) -> Result<Matrix2> {
    if alpha.re.abs() >= 0.5 {
        return Err(Error::Domain(format!("alpha = {alpha} outside |Re alpha| < 1/2")));
    }
    Ok(half_rotation() * Matrix2::diag(ONE, ONE - alpha * 2.0))
}

/// Φ̂⁰(z) z^{−ασ₃} on the principal branch.
pub fn phi0_regularized(z: Complex, alpha: Complex) -> Result<Matrix2> {
    let w = ArgWindow::principal();
    Ok(phi0(z, alpha, w)? * sigma3_power(z, -alpha, w)?)
}

/// First-order Richardson extrapolation of Φ̂⁰(z) z^{−ασ₃} along z = 10^{−m}, m = 2..=5.
///
/// Returns the extrapolated matrix and its distance from the closed form.
pub fn phi0_limit_extrapolation(alpha: Complex) -> Result<(Matrix2, f64)> {
    let vals: Vec<Matrix2> = (2..=5).map(|m| phi0_regularized(c(10f64.powi(-m), 0.0), alpha)).collect::<Result<_>>()?;
    let rich: Vec<Matrix2> = vals.windows(2).map(|p| (p[1] * 10.0 - p[0]) * (1.0 / 9.0)).collect();
    let est = *rich.last().expect("three Richardson values");
    let resid = (est - phi0_regularized_limit(alpha)?).norm_fro();
    Ok((est, resid))
}

/// Φ̂ᵏ at the point of the universal cover with modulus `r` and argument `theta`.
pub fn phi_sector_on_cover(k: SectorIndex, r: f64, theta: f64, alpha: Complex) -> Result<Matrix2> {
    let w = k.window();
    if !w.contains(theta) {
        return Err(Error::Sector { sector: k.get(), z: format!("{r}·e^(i·{theta})") });
    }
    let z = Complex::from_polar(r, theta);
    let pm = ParametrixMatrices::new(alpha)?;
    let mut p = phi0(z, alpha, w)? * pm.e_hat;
    if k.get() >= 2 {
        p = p * pm.s1_hat;
    }
    if k.get() >= 3 {
        p = p * pm.s2_hat;
    }
    Ok(p)
}

/// Φ̂ᵏ(z) with arg z read inside the sector window.
pub fn phi_sector(k: SectorIndex, z: Complex, alpha: Complex) -> Result<Matrix2> {
    let theta = k.window().arg(z).map_err(|_| Error::Sector { sector: k.get(), z: z.to_string() })?;
    phi_sector_on_cover(k, z.norm(), theta, alpha)
}

/// ‖σ₂ Φ̂^{k+1}(e^{iπ}z) σ₂ − Φ̂ᵏ(z)‖ for k ∈ {1, 2}.
pub fn rotation_identity_residual(k: SectorIndex, z: Complex, alpha: Complex) -> Result<f64> {
    if k.get() == 3 {
        return Err(Error::Domain("rotation identity is stated for k = 1, 2".into()));
    }
    let theta = k.window().arg(z).map_err(|_| Error::Sector { sector: k.get(), z: z.to_string() })?;
    let next = SectorIndex(k.get() + 1);
    let lhs = Matrix2::SIGMA2 * phi_sector_on_cover(next, z.norm(), theta + PI, alpha)? * Matrix2::SIGMA2;
    Ok((lhs - phi_sector_on_cover(k, z.norm(), theta, alpha)?).norm_fro())
}

fn normalized_at_infinity(k: SectorIndex, z: Complex, alpha: Complex) -> Result<Matrix2> {
    let r = z.norm();
    if !(10.0..=40.0).contains(&r) {
        return Err(Error::Range(format!("|z| = {r} outside [10, 40]")));
    }
    Ok(phi_sector(k, z, alpha)? * sigma3_exp(-z)?)
}

/// ‖Φ̂ᵏ(z) e^{−zσ₃} − I + (iα/2z) σ₁‖ for 10 ≤ |z| ≤ 40.
pub fn large_z_expansion_residual(k: SectorIndex, z: Complex, alpha: Complex) -> Result<f64> {
    let p = normalized_at_infinity(k, z, alpha)?;
    Ok((p - Matrix2::IDENTITY + Matrix2::SIGMA1.scale(I * alpha / (z * 2.0))).norm_fro())
}

/// As [`large_z_expansion_residual`] but with the full 1/z term,
/// `−(α²/2z)σ₃ − (iα/2z)σ₁`, subtracted.
pub fn large_z_expansion_residual_corrected(k: SectorIndex, z: Complex, alpha: Complex) -> Result<f64> {
    let p = normalized_at_infinity(k, z, alpha)?;
    let first = Matrix2::SIGMA3.scale(alpha * alpha) + Matrix2::SIGMA1.scale(I * alpha);
    Ok((p - Matrix2::IDENTITY + first.scale((z * 2.0).inv())).norm_fro())
}

/// z·(Φ̂ᵏ(z) e^{−zσ₃} − I), which tends to the 1/z coefficient of the expansion.
pub fn large_z_first_coefficient(k: SectorIndex, z: Complex, alpha: Complex) -> Result<Matrix2> {
    Ok((normalized_at_infinity(k, z, alpha)? - Matrix2::IDENTITY).scale(z))
}

/// Least-squares slope of ln f(r) against ln r.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(r, f) in points {
        let (x, y) = (r.ln(), f.ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Slope of `residual` along the central ray of sector `k` over |z| ∈ [10, 40].
pub fn expansion_slope<F>(k: SectorIndex, alpha: Complex, residual: F) -> Result<f64>
where
    F: Fn(SectorIndex, Complex, Complex) -> Result<f64>,
{
    let theta = k.central_arg();
    let pts = [10.0, 14.0, 20.0, 28.0, 40.0]
        .iter()
        .map(|&r| residual(k, Complex::from_polar(r, theta), alpha).map(|f| (r, f)))
        .collect::<Result<Vec<_>>>()?;
    Ok(loglog_slope(&pts))
}

//! The algebraic identity suite: each identity is evaluated over a parameter
//! grid and reduced to its largest residual.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix2::{c, ArgWindow, Complex, Matrix2, ONE};
use crate::monodromy::{
    connection_e, matrix_d, matrix_h_and_limit, matrix_k_closed, matrix_k_definition, matrix_m, model_data, model_n,
    predicted_exp_total, stokes_from_ak, w_identity_sides,
};
use crate::parametrix::{
    e_hat, phi0_limit_extrapolation, phi_sector, rotation_identity_residual, s1_hat, s2_hat, SectorIndex,
};
use crate::specfun::{v_pair, SeriesPolicy};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grid {
    Minimal,
    Default,
    Dense,
}

impl FromStr for Grid {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minimal" => Ok(Grid::Minimal),
            "default" => Ok(Grid::Default),
            "dense" => Ok(Grid::Dense),
            _ => Err(Error::Domain(format!("unknown grid '{s}' (expected minimal, default or dense)"))),
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Grid::Minimal => "minimal",
            Grid::Default => "default",
            Grid::Dense => "dense",
        })
    }
}

impl Grid {
    /// Values of α: real ones inside (−1/2, 1/2) and purely imaginary ones.
    pub fn alphas(self) -> Vec<Complex> {
        match self {
            Grid::Minimal => vec![c(0.0, 0.0)],
            Grid::Default => {
                vec![c(0.0, 0.0), c(0.25, 0.0), c(-0.25, 0.0), c(0.4, 0.0), c(-0.3, 0.0), c(0.0, 0.2), c(0.0, 0.5)]
            }
            Grid::Dense => {
                let mut v: Vec<Complex> = (-9..=9).map(|i| c(0.05 * i as f64, 0.0)).collect();
                v.extend((1..=8).map(|i| c(0.0, 0.1 * i as f64)));
                v
            }
        }
    }

    /// (α, k) pairs: k = f·cos πα with |f| < 1 for real α, k ∈ iℝ for imaginary α.
    pub fn parameters(self) -> Vec<(Complex, Complex)> {
        let fractions: &[f64] = match self {
            Grid::Minimal => &[0.5],
            Grid::Default => &[-0.6, 0.3, 0.9],
            Grid::Dense => &[-0.95, -0.6, -0.2, 0.1, 0.5, 0.8, 0.95],
        };
        let mut out = Vec::new();
        for a in self.alphas() {
            for &f in fractions {
                let k = if a.im == 0.0 { c(f * (PI * a.re).cos(), 0.0) } else { c(0.0, f) };
                out.push((a, k));
            }
        }
        out
    }
}

fn report(name: &str, residuals: impl IntoIterator<Item = Result<f64>>, tolerance: f64) -> Result<IdentityReport> {
    let mut max_residual = 0.0f64;
    for r in residuals {
        let r = r?;
        // NaN must fail rather than vanish in the maximum.
        max_residual = if r.is_nan() || max_residual.is_nan() { f64::NAN } else { max_residual.max(r) };
    }
    Ok(IdentityReport { name: name.into(), max_residual, tolerance, pass: max_residual <= tolerance })
}

/// ‖E S₁S₂S₃ − σ₂M⁻¹Eσ₂‖
pub fn connection_residual(alpha: Complex, k: Complex) -> Result<f64> {
    let [m1, m2, m3] = stokes_from_ak(alpha, k).matrices();
    let e = connection_e(alpha)?;
    let rhs = Matrix2::SIGMA2 * matrix_m(alpha).inverse()? * e * Matrix2::SIGMA2;
    Ok((e * m1 * m2 * m3 - rhs).norm_fro())
}

/// ‖Ê Ŝ₁ − D E‖
pub fn de_residual(alpha: Complex) -> Result<f64> {
    Ok((e_hat(alpha)? * s1_hat(alpha) - matrix_d(alpha)? * connection_e(alpha)?).norm_fro())
}

/// Largest rotation-identity residual, relative to max(1, ‖Φ̂ᵏ‖), over twelve
/// points spread across sectors 1 and 2.
pub fn rotation_residual(alpha: Complex) -> Result<f64> {
    let mut worst = 0.0f64;
    for k in [SectorIndex::new(1)?, SectorIndex::new(2)?] {
        let w = k.window();
        for i in 0..12 {
            let theta = w.lo + 0.1 + (w.hi - w.lo - 0.2) * i as f64 / 11.0;
            let z = Complex::from_polar(0.3 + 0.5 * i as f64, theta);
            let scale = phi_sector(k, z, alpha)?.norm_fro().max(1.0);
            worst = worst.max(rotation_identity_residual(k, z, alpha)? / scale);
        }
    }
    Ok(worst)
}

/// Largest |v₁v₂′ − v₂v₁′ − (1 − 2α)| at z ∈ {0.3, 1, 2 + i}.
pub fn wronskian_residual(alpha: Complex) -> Result<f64> {
    let mut worst = 0.0f64;
    for z in [c(0.3, 0.0), c(1.0, 0.0), c(2.0, 1.0)] {
        let v = v_pair(z, alpha, ArgWindow::principal(), &SeriesPolicy::default())?;
        worst = worst.max((v.v1 * v.v2p - v.v2 * v.v1p - (ONE - alpha * 2.0)).norm());
    }
    Ok(worst)
}

/// Both factorisations S₊ = Ŝ₂ and S₋⁻¹ = Ŝ₁ implied by s₁ + s₃ = −2 sin πα.
pub fn factorization_residual(alpha: Complex, k: Complex) -> f64 {
    let s = stokes_from_ak(alpha, k);
    let sp = Matrix2::lower(s.s1) * Matrix2::lower(s.s3);
    let sm = Matrix2::upper(-s.s1) * Matrix2::upper(-s.s3);
    (sp - s2_hat(alpha)).norm_fro().max((sm - s1_hat(alpha)).norm_fro())
}

pub fn w_residual(alpha: Complex, k: Complex) -> Result<f64> {
    let (l, r) = w_identity_sides(alpha, k)?;
    Ok((l - r).norm_fro())
}

pub fn k_forms_residual(alpha: Complex, k: Complex) -> Result<f64> {
    let def = matrix_k_definition(alpha, k)?;
    let closed = matrix_k_closed(alpha, k)?;
    Ok((def - closed).norm_fro().max(def.max_offdiag()))
}

/// |2h₋ − (cos πα + k)/(cos²πα − k²)^{1/2}|
pub fn h_minus_residual(alpha: Complex, k: Complex) -> Result<f64> {
    Ok((matrix_h_and_limit(alpha, k)?.h_minus * 2.0 - predicted_exp_total(alpha, k)?).norm())
}

/// Jump N(z₀ + iε) N(z₀ − iε)⁻¹ over ε ∈ {1e−3, 1e−4, 1e−5}, extrapolated
/// to ε = 0 by two Richardson levels (the exponential adds an ε² term) and
/// compared with S_D relative to ‖S_D‖. Also fails unless the raw error falls
/// by about a decade per decade of ε.
pub fn n_jump_residual(alpha: Complex, k: Complex) -> Result<f64> {
    let sd = model_data(alpha, k)?.s_d;
    let mut worst = 0.0f64;
    for z0 in [-0.3, 0.0, 0.2] {
        let jumps = [1e-3, 1e-4, 1e-5]
            .iter()
            .map(|&eps| Ok(model_n(c(z0, eps), alpha, k)? * model_n(c(z0, -eps), alpha, k)?.inverse()?))
            .collect::<Result<Vec<Matrix2>>>()?;
        let errs: Vec<f64> = jumps.iter().map(|j| (*j - sd).norm_fro()).collect();
        let first_order = errs.windows(2).all(|p| p[1] <= 0.2 * p[0] || p[1] < 1e-12);
        if !first_order {
            return Ok(f64::INFINITY);
        }
        let r1 = |a: Matrix2, b: Matrix2| (b * 10.0 - a) * (1.0 / 9.0);
        let (ra, rb) = (r1(jumps[0], jumps[1]), r1(jumps[1], jumps[2]));
        let rich = (rb * 100.0 - ra) * (1.0 / 99.0);
        worst = worst.max((rich - sd).norm_fro() / sd.norm_fro());
    }
    Ok(worst)
}

/// The parametrix identities alone.
pub fn parametrix_suite(grid: Grid) -> Result<Vec<IdentityReport>> {
    let alphas = grid.alphas();
    Ok(vec![
        report(
            "rotation sigma2 Phi^{k+1}(e^{i pi} z) sigma2 = Phi^k(z)",
            alphas.iter().map(|&a| rotation_residual(a)),
            1e-10,
        )?,
        report("E_hat S1_hat = D E", alphas.iter().map(|&a| de_residual(a)), 1e-12)?,
        report(
            "limit of Phi0(z) z^{-alpha sigma3} as z -> 0",
            alphas.iter().map(|&a| phi0_limit_extrapolation(a).map(|r| r.1)),
            1e-8,
        )?,
        report("Wronskian v1 v2' - v2 v1' = 1 - 2 alpha", alphas.iter().map(|&a| wronskian_residual(a)), 1e-10)?,
    ])
}

/// Every identity over `grid`.
pub fn full_suite(grid: Grid) -> Result<Vec<IdentityReport>> {
    let params = grid.parameters();
    let mut out = vec![report(
        "E S1 S2 S3 = sigma2 M^{-1} E sigma2",
        params.iter().map(|&(a, k)| connection_residual(a, k)),
        1e-12,
    )?];
    out.extend(parametrix_suite(grid)?);
    out.push(report(
        "K definition = closed diagonal form",
        params.iter().map(|&(a, k)| k_forms_residual(a, k)),
        1e-12,
    )?);
    out.push(report(
        "S+ and S-^{-1} factorizations",
        params.iter().map(|&(a, k)| Ok(factorization_residual(a, k))),
        1e-13,
    )?);
    out.push(report("W identity", params.iter().map(|&(a, k)| w_residual(a, k)), 1e-13)?);
    out.push(report("2 h_minus = predicted exp(total)", params.iter().map(|&(a, k)| h_minus_residual(a, k)), 1e-13)?);
    out.push(report("jump of N across (-1/2, 1/2) = S_D", params.iter().map(|&(a, k)| n_jump_residual(a, k)), 1e-8)?);
    Ok(out)
}

/// Replaces every tolerance with `tol` and recomputes pass flags.
pub fn with_tolerance(reports: Vec<IdentityReport>, tol: f64) -> Vec<IdentityReport> {
    reports.into_iter().map(|r| IdentityReport { pass: r.max_residual <= tol, tolerance: tol, ..r }).collect()
}

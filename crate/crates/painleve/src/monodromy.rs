//! Stokes data of the Ablowitz–Segur family and the explicit connection
//! matrices built from it, together with the closed-form total-integral values
//! they predict.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix2::{c, sigma3_exp, Complex, Matrix2, I, ONE, ZERO};
use crate::parametrix::{check_cos, s2_hat};

/// Tolerance on ||k| − cos πα| for the Hastings–McLeod boundary.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Imaginary (or real) parts below this count as zero when classifying parameters.
const AXIS_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    RealAS,
    ImaginaryAS,
    HMBoundary,
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ASParameters {
    pub alpha: Complex,
    pub k: Complex,
    pub family: Family,
}

impl ASParameters {
    pub fn new(alpha: Complex, k: Complex) -> Self {
        ASParameters { alpha, k, family: classify_family(alpha, k) }
    }

    pub fn is_solvable(&self) -> bool {
        matches!(self.family, Family::RealAS | Family::ImaginaryAS)
    }
}

fn is_real(z: Complex) -> bool {
    z.im.abs() <= AXIS_TOL
}

fn is_imaginary(z: Complex) -> bool {
    z.re.abs() <= AXIS_TOL
}

pub fn classify_family(alpha: Complex, k: Complex) -> Family {
    if is_real(alpha) && is_real(k) && alpha.re.abs() < 0.5 {
        let cs = (PI * alpha.re).cos();
        let gap = k.re.abs() - cs;
        if gap.abs() <= BOUNDARY_TOL {
            return Family::HMBoundary;
        }
        if gap < 0.0 {
            return Family::RealAS;
        }
    }
    if is_imaginary(alpha) && is_imaginary(k) {
        return Family::ImaginaryAS;
    }
    Family::Other
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StokesTriple {
    pub s1: Complex,
    pub s2: Complex,
    pub s3: Complex,
}

impl StokesTriple {
    /// `1 − s₁s₃`
    pub fn one_minus_s1s3(&self) -> Complex {
        ONE - self.s1 * self.s3
    }

    /// The unipotent factors `[[1,0],[s₁,1]]`, `[[1,s₂],[0,1]]`, `[[1,0],[s₃,1]]`.
    pub fn matrices(&self) -> [Matrix2; 3] {
        [Matrix2::lower(self.s1), Matrix2::upper(self.s2), Matrix2::lower(self.s3)]
    }
}

pub fn stokes_from_ak(alpha: Complex, k: Complex) -> StokesTriple {
    let s = (alpha * PI).sin();
    StokesTriple { s1: -s - I * k, s2: ZERO, s3: -s + I * k }
}

pub fn constraint_residual(s: &StokesTriple, alpha: Complex) -> f64 {
    (s.s1 - s.s2 + s.s3 + s.s1 * s.s2 * s.s3 + (alpha * PI).sin() * 2.0).norm()
}

/// E = diag(1, −(2i cos πα)⁻¹) · [[1, i e^{−iπα}], [1, −i e^{iπα}]].
pub fn connection_e(alpha: Complex) -> Result<Matrix2> {
    let cs = check_cos(alpha)?;
    let q = -(I * cs * 2.0).inv();
    let m = Matrix2::new(ONE, I * (-I * PI * alpha).exp(), ONE, -I * (I * PI * alpha).exp());
    Ok(Matrix2::diag(ONE, q) * m)
}

/// M = −i e^{iπ(α − 1/2)σ₃} σ₂.
pub fn matrix_m(alpha: Complex) -> Matrix2 {
    let e = I * PI * (alpha - 0.5);
    Matrix2::diag(e.exp(), (-e).exp()).scale(-I) * Matrix2::SIGMA2
}

pub fn matrix_d(alpha: Complex) -> Result<Matrix2> {
    let cs = check_cos(alpha)?;
    let g1 = crate::specfun::gamma_complex(alpha + 0.5)?;
    let g2 = crate::specfun::gamma_complex(c(1.5, 0.0) - alpha)?;
    let two = c(2.0, 0.0);
    let pre = c(0.0, PI / 4.0).exp() * PI.sqrt() / cs;
    let d1 = two.powc(-alpha) * (-I * PI * alpha).exp() / g1;
    let d2 = -I * two.powc(alpha) * cs * (I * PI * alpha).exp() / g2;
    Ok(Matrix2::diag(d1 * pre, d2 * pre))
}

/// Principal (1 − s₁s₃)^{p}, refusing the cut (−∞, 0].
fn principal_power(d: Complex, p: f64) -> Result<Complex> {
    if d.im.abs() <= AXIS_TOL * (1.0 + d.re.abs()) && d.re <= 0.0 {
        return Err(Error::BranchCut { arg: d.arg(), lo: -PI, hi: PI });
    }
    Ok(d.powf(p))
}

/// (1 − s₁s₃)^{−1/2} E Ŝ₂ [[1, −s₃], [−s₁, 1]] E⁻¹
pub fn matrix_k_definition(alpha: Complex, k: Complex) -> Result<Matrix2> {
    let s = stokes_from_ak(alpha, k);
    let n = principal_power(s.one_minus_s1s3(), -0.5)?;
    let e = connection_e(alpha)?;
    let core = Matrix2::new(ONE, -s.s3, -s.s1, ONE);
    Ok((e * s2_hat(alpha) * core * e.inverse()?).scale(n))
}

/// (1 − s₁s₃)^{−1/2} diag(cos πα − k, cos πα + k) e^{−iπασ₃}
pub fn matrix_k_closed(alpha: Complex, k: Complex) -> Result<Matrix2> {
    let cs = (alpha * PI).cos();
    let d = cs * cs - k * k;
    if classify_family(alpha, k) == Family::HMBoundary || d.norm() <= BOUNDARY_TOL {
        return Err(Error::Boundary(format!("cos^2(pi alpha) - k^2 = {d}")));
    }
    let n = principal_power(d, -0.5)?;
    Ok((Matrix2::diag(cs - k, cs + k) * sigma3_exp(-I * PI * alpha)?).scale(n))
}

/// (1 − s₁s₃)^{σ₃/2} [[1, −s₃/(1 − s₁s₃)], [0, 1]] [[1, 0], [−s₁, 1]] and the closed form it equals.
pub fn w_identity_sides(alpha: Complex, k: Complex) -> Result<(Matrix2, Matrix2)> {
    let s = stokes_from_ak(alpha, k);
    let d = s.one_minus_s1s3();
    let h = principal_power(d, 0.5)?;
    let lhs = Matrix2::diag(h, h.inv()) * Matrix2::upper(-s.s3 / d) * Matrix2::lower(-s.s1);
    let rhs = Matrix2::new(ONE, -s.s3, -s.s1, ONE).scale(h.inv());
    Ok((lhs, rhs))
}

/// ν = −(2πi)⁻¹ ln(1 − s₁s₃) on the principal branch.
pub fn nu_constant(alpha: Complex, k: Complex) -> Result<Complex> {
    let d = stokes_from_ak(alpha, k).one_minus_s1s3();
    principal_power(d, 1.0)?;
    Ok(-d.ln() / (I * 2.0 * PI))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelData {
    pub nu: Complex,
    pub z_minus: f64,
    pub z_plus: f64,
    pub s_d: Matrix2,
    /// Set when (α, k) is outside both AS families, so the principal branch is a choice rather than forced.
    pub advisory: bool,
}

pub fn model_data(alpha: Complex, k: Complex) -> Result<ModelData> {
    let d = stokes_from_ak(alpha, k).one_minus_s1s3();
    Ok(ModelData {
        nu: nu_constant(alpha, k)?,
        z_minus: -0.5,
        z_plus: 0.5,
        s_d: Matrix2::diag(d, d.inv()),
        advisory: !ASParameters::new(alpha, k).is_solvable(),
    })
}

/// N(z) = ((z + 1/2)/(z − 1/2))^{νσ₃}, each factor on the principal branch.
pub fn model_n(z: Complex, alpha: Complex, k: Complex) -> Result<Matrix2> {
    if z.im == 0.0 && z.re.abs() <= 0.5 {
        return Err(Error::Domain(format!("z = {z} lies on the jump segment [-1/2, 1/2]")));
    }
    let nu = nu_constant(alpha, k)?;
    let l = (z + 0.5).ln() - (z - 0.5).ln();
    sigma3_exp(nu * l)
}

fn check_predictable(alpha: Complex, k: Complex) -> Result<()> {
    match classify_family(alpha, k) {
        Family::RealAS | Family::ImaginaryAS => Ok(()),
        Family::HMBoundary => Err(Error::Boundary(format!("alpha = {alpha}, k = {k}"))),
        Family::Other => Err(Error::Domain(format!("alpha = {alpha}, k = {k} is not an AS parameter pair"))),
    }
}

/// ½ ln((cos πα + k)/(cos πα − k)), principal branch.
///
/// For the imaginary family the ratio has unit modulus and an argument inside
/// (−π, π), so this is the logarithm of [`predicted_exp_total`] that is
/// continuous from k = 0.
pub fn predicted_total_integral(alpha: Complex, k: Complex) -> Result<Complex> {
    check_predictable(alpha, k)?;
    let cs = (alpha * PI).cos();
    Ok(((cs + k) / (cs - k)).ln() * 0.5)
}

/// (cos πα + k)/(cos²πα − k²)^{1/2}
pub fn predicted_exp_total(alpha: Complex, k: Complex) -> Result<Complex> {
    check_predictable(alpha, k)?;
    let cs = (alpha * PI).cos();
    Ok((cs + k) / principal_power(cs * cs - k * k, 0.5)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HLimit {
    pub h: Matrix2,
    pub h_inverse: Matrix2,
    pub h_plus: Complex,
    pub h_minus: Complex,
}

/// H and h± = (1 − s₁s₃)^{−1/2}(cos πα ∓ k)/2, with the closed-form H⁻¹.
pub fn matrix_h_and_limit(alpha: Complex, k: Complex) -> Result<HLimit> {
    matrix_k_closed(alpha, k)?;
    let cs = (alpha * PI).cos();
    let n = principal_power(stokes_from_ak(alpha, k).one_minus_s1s3(), -0.5)?;
    let hp = n * (cs - k) * 0.5;
    let hm = n * (cs + k) * 0.5;
    let s = hp + hm;
    let h = Matrix2::new(s, I * (hp - hm), I * (hm - hp), s);
    let h_inverse = Matrix2::new(s, I * (hm - hp), I * (hp - hm), s);
    Ok(HLimit { h, h_inverse, h_plus: hp, h_minus: hm })
}

/// H assembled from its definition ½ e^{−iπσ₃/4}[[1,1],[−1,1]] K e^{iπασ₃} [[1,−1],[1,1]] e^{iπσ₃/4},
/// with K taken from [`matrix_k_definition`].
pub fn matrix_h_from_k(alpha: Complex, k: Complex) -> Result<Matrix2> {
    let kk = matrix_k_definition(alpha, k)?;
    let l = sigma3_exp(c(0.0, -PI / 4.0))? * Matrix2::from_real(1.0, 1.0, -1.0, 1.0);
    let r = Matrix2::from_real(1.0, -1.0, 1.0, 1.0) * sigma3_exp(c(0.0, PI / 4.0))?;
    Ok((l * kk * sigma3_exp(I * PI * alpha)? * r).scale(c(0.5, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn real_grid() -> Vec<(Complex, Complex)> {
        let mut v = Vec::new();
        for a in [-0.4, -0.25, 0.0, 0.1, 0.25, 0.4] {
            let cs = (PI * a).cos();
            for f in [-0.9, -0.5, 0.0, 0.35, 0.8] {
                v.push((c(a, 0.0), c(f * cs, 0.0)));
            }
        }
        v
    }

    fn imaginary_grid() -> Vec<(Complex, Complex)> {
        let mut v = Vec::new();
        for a in [0.0, 0.1, 0.3, -0.5] {
            for k in [-0.7, 0.0, 0.4, 1.5] {
                v.push((c(0.0, a), c(0.0, k)));
            }
        }
        v
    }

    #[test]
    fn stokes_examples() {
        assert_eq!(stokes_from_ak(ZERO, ZERO), StokesTriple { s1: ZERO, s2: ZERO, s3: ZERO });
        let s = stokes_from_ak(ZERO, c(0.3, 0.0));
        assert!((s.s1 - c(0.0, -0.3)).norm() < 1e-16 && (s.s3 - c(0.0, 0.3)).norm() < 1e-16);
        let s = stokes_from_ak(c(0.25, 0.0), ZERO);
        let h = -(0.5f64).sqrt();
        assert!((s.s1 - c(h, 0.0)).norm() < 1e-15 && (s.s3 - c(h, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn constraint_examples() {
        for (a, k) in real_grid().into_iter().chain(imaginary_grid()) {
            assert!(constraint_residual(&stokes_from_ak(a, k), a) <= 1e-14);
        }
        for a in [0.1, -0.3] {
            let a = c(a, 0.0);
            let t = StokesTriple { s1: (-I * PI * (a + 0.5)).exp(), s2: c(0.7, -2.0), s3: (I * PI * (a + 0.5)).exp() };
            assert!(constraint_residual(&t, a) <= 1e-14);
        }
        let t = StokesTriple { s1: ONE, s2: ZERO, s3: ZERO };
        assert!((constraint_residual(&t, ZERO) - 1.0).abs() < 1e-16);
    }

    #[test]
    fn classification() {
        assert_eq!(classify_family(c(0.25, 0.0), c(0.5, 0.0)), Family::RealAS);
        assert_eq!(classify_family(c(0.0, 0.3), c(0.0, 0.4)), Family::ImaginaryAS);
        assert_eq!(classify_family(ZERO, ONE), Family::HMBoundary);
        assert_eq!(classify_family(ZERO, ZERO), Family::RealAS);
        assert_eq!(classify_family(ZERO, c(0.0, 0.5)), Family::ImaginaryAS);
        assert_eq!(classify_family(c(0.25, 0.0), c((PI / 4.0).cos(), 0.0)), Family::HMBoundary);
        assert_eq!(classify_family(c(0.25, 0.0), c(0.9, 0.0)), Family::Other);
        assert_eq!(classify_family(c(0.6, 0.0), ZERO), Family::Other);
        assert_eq!(classify_family(c(0.1, 0.1), ZERO), Family::Other);
    }

    #[test]
    fn e_at_alpha_zero() {
        let e = connection_e(ZERO).unwrap();
        let want = Matrix2::new(ONE, I, c(0.0, 0.5), c(0.5, 0.0));
        assert!((e - want).norm_fro() < 1e-15);
        assert!(connection_e(c(0.5, 0.0)).is_err());
    }

    #[test]
    fn e_and_m_are_unimodular() {
        for a in [ZERO, c(0.25, 0.0), c(-0.25, 0.0), c(0.0, 0.3)] {
            assert!((connection_e(a).unwrap().det() - ONE).norm() < 1e-13);
            assert!((matrix_m(a).det() - ONE).norm() < 1e-15);
        }
    }

    #[test]
    fn m_examples() {
        assert!((matrix_m(c(0.5, 0.0)) - Matrix2::SIGMA2.scale(-I)).norm_fro() < 1e-16);
        let want = Matrix2::diag(-I, I).scale(-I) * Matrix2::SIGMA2;
        assert!((matrix_m(ZERO) - want).norm_fro() < 1e-15);
    }

    #[test]
    fn connection_equation() {
        for a in [0.0, 0.25, -0.25, 0.4, -0.4] {
            check_connection(c(a, 0.0), c(0.3 * (PI * a).cos(), 0.0));
        }
        for a in [0.2, 0.5] {
            check_connection(c(0.0, a), c(0.0, 0.4));
        }
    }

    fn check_connection(a: Complex, k: Complex) {
        let s = stokes_from_ak(a, k);
        let [m1, m2, m3] = s.matrices();
        let e = connection_e(a).unwrap();
        let lhs = e * m1 * m2 * m3;
        let rhs = Matrix2::SIGMA2 * matrix_m(a).inverse().unwrap() * e * Matrix2::SIGMA2;
        assert!((lhs - rhs).norm_fro() <= 1e-12, "alpha = {a}");
    }

    #[test]
    fn d_examples() {
        let d = matrix_d(ZERO).unwrap();
        assert!((d.a11 - c(0.0, PI / 4.0).exp()).norm() < 1e-14);
        for a in [ZERO, c(0.25, 0.0), c(-0.3, 0.0), c(0.0, 0.2)] {
            let d = matrix_d(a).unwrap();
            assert_eq!(d.a12, ZERO);
            assert_eq!(d.a21, ZERO);
            let pm = crate::parametrix::ParametrixMatrices::new(a).unwrap();
            let r = (pm.e_hat * pm.s1_hat - d * connection_e(a).unwrap()).norm_fro();
            assert!(r <= 1e-12, "alpha = {a}: {r}");
        }
    }

    #[test]
    fn k_examples() {
        assert!((matrix_k_definition(ZERO, ZERO).unwrap() - Matrix2::IDENTITY).norm_fro() < 1e-15);
        assert!((matrix_k_closed(ZERO, ZERO).unwrap() - Matrix2::IDENTITY).norm_fro() < 1e-15);
        let n = 0.75f64.powf(-0.5);
        let want = Matrix2::diag(c(0.5 * n, 0.0), c(1.5 * n, 0.0));
        assert!((matrix_k_closed(ZERO, c(0.5, 0.0)).unwrap() - want).norm_fro() < 1e-15);
        assert!(matches!(matrix_k_closed(ZERO, ONE), Err(Error::Boundary(_))));
    }

    #[test]
    fn k_definition_equals_closed_form() {
        for a in [c(0.25, 0.0), c(-0.25, 0.0), c(0.4, 0.0), c(0.0, 0.3)] {
            let cs = (a * PI).cos();
            for f in [-0.6, 0.0, 0.5] {
                let k = if a.im != 0.0 { c(0.0, f) } else { cs * f };
                let kd = matrix_k_definition(a, k).unwrap();
                let kc = matrix_k_closed(a, k).unwrap();
                assert!((kd - kc).norm_fro() <= 1e-12, "a={a} k={k}");
                assert!(kd.max_offdiag() <= 1e-12);
                assert!((kc.det() - ONE).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn nu_examples() {
        assert_eq!(nu_constant(ZERO, ZERO).unwrap(), ZERO);
        let k = 0.6;
        let nu = nu_constant(ZERO, c(k, 0.0)).unwrap();
        let want = -c((1.0 - k * k).ln(), 0.0) / (I * 2.0 * PI);
        assert!((nu - want).norm() < 1e-16 && nu.re.abs() < 1e-17);
        let d = stokes_from_ak(c(0.0, 0.3), c(0.0, 0.4)).one_minus_s1s3();
        assert!((d - c((0.3 * PI).cosh().powi(2) + 0.16, 0.0)).norm() < 1e-14);
        assert!(nu_constant(c(0.0, 0.3), c(0.0, 0.4)).unwrap().re.abs() < 1e-17);
        assert!(nu_constant(ZERO, c(2.0, 0.0)).is_err());
    }

    #[test]
    fn nu_is_imaginary_on_both_families() {
        for (a, k) in real_grid().into_iter().chain(imaginary_grid()) {
            assert!(nu_constant(a, k).unwrap().re.abs() <= 1e-15);
            assert!(!model_data(a, k).unwrap().advisory);
        }
        assert!(model_data(c(0.1, 0.1), c(0.2, 0.0)).unwrap().advisory);
    }

    #[test]
    fn n_examples() {
        assert!((model_n(c(2.0, 0.0), ZERO, ZERO).unwrap() - Matrix2::IDENTITY).norm_fro() < 1e-16);
        assert!(model_n(c(0.2, 0.0), ZERO, c(0.5, 0.0)).is_err());
        let (a, k) = (ZERO, c(0.5, 0.0));
        let nu = nu_constant(a, k).unwrap();
        for t in [0.0, 1.0, 2.5, -2.0] {
            let z = Complex::from_polar(1e3, t);
            let dev = (model_n(z, a, k).unwrap() - Matrix2::IDENTITY).norm_fro();
            assert!(dev <= 4.0 * nu.norm() / 1e3);
        }
    }

    #[test]
    fn n_jump_is_s_d() {
        for (a, k) in [(ZERO, c(0.5, 0.0)), (c(0.25, 0.0), c(0.3, 0.0)), (c(0.0, 0.3), c(0.0, 0.4))] {
            let sd = model_data(a, k).unwrap().s_d;
            for z0 in [-0.3, 0.0, 0.2] {
                let errs: Vec<f64> = [1e-3, 1e-4, 1e-5]
                    .iter()
                    .map(|&eps| {
                        let up = model_n(c(z0, eps), a, k).unwrap();
                        let dn = model_n(c(z0, -eps), a, k).unwrap();
                        (up * dn.inverse().unwrap() - sd).norm_fro()
                    })
                    .collect();
                assert!(errs[2] < 1e-4, "{errs:?}");
                for p in errs.windows(2) {
                    // O(ε): each decade of ε gains about a decade of accuracy.
                    assert!(p[1] <= p[0] * 0.2 || p[1] < 1e-12, "{errs:?}");
                }
            }
        }
    }

    #[test]
    fn factorizations() {
        for (a, k) in real_grid().into_iter().chain(imaginary_grid()) {
            let s = stokes_from_ak(a, k);
            let sp = Matrix2::lower(s.s1) * Matrix2::lower(s.s3);
            assert!((sp - s2_hat(a)).norm_fro() <= 1e-14);
            let sm = Matrix2::upper(-s.s1) * Matrix2::upper(-s.s3);
            assert!((sm - crate::parametrix::s1_hat(a)).norm_fro() <= 1e-14);
        }
    }

    #[test]
    fn w_identity() {
        for (a, k) in real_grid().into_iter().chain(imaginary_grid()) {
            let (l, r) = w_identity_sides(a, k).unwrap();
            assert!((l - r).norm_fro() <= 1e-13);
        }
    }

    #[test]
    fn predicted_values() {
        let t = predicted_total_integral(ZERO, c(0.5, 0.0)).unwrap();
        assert!((t.re - 0.5 * 3f64.ln()).abs() < 1e-15 && t.re > 0.549306 && t.re < 0.5493062);
        assert_eq!(predicted_total_integral(c(0.3, 0.0), ZERO).unwrap(), ZERO);
        let cs = (PI / 4.0).cos();
        let t = predicted_total_integral(c(0.25, 0.0), c(0.5 * cs, 0.0)).unwrap();
        assert!((t.re - 0.5 * 3f64.ln()).abs() < 1e-15);
        assert!(matches!(predicted_total_integral(ZERO, ONE), Err(Error::Boundary(_))));
        assert!(matches!(predicted_exp_total(ZERO, c(-1.0, 0.0)), Err(Error::Boundary(_))));
        assert_eq!(predicted_exp_total(ZERO, ZERO).unwrap(), ONE);
        assert!((predicted_exp_total(ZERO, c(0.5, 0.0)).unwrap() - c(3f64.sqrt(), 0.0)).norm() < 1e-15);
        for (a, k) in imaginary_grid() {
            assert!((predicted_exp_total(a, k).unwrap().norm() - 1.0).abs() < 1e-14);
            let l = predicted_total_integral(a, k).unwrap();
            assert!((l.exp() - predicted_exp_total(a, k).unwrap()).norm() < 1e-14);
        }
    }

    #[test]
    fn h_and_its_limit() {
        let hl = matrix_h_and_limit(ZERO, ZERO).unwrap();
        assert_eq!(hl.h_plus, c(0.5, 0.0));
        assert_eq!(hl.h_minus, c(0.5, 0.0));
        assert!((hl.h - Matrix2::IDENTITY).norm_fro() < 1e-16);
        for (a, k) in real_grid().into_iter().chain(imaginary_grid()) {
            let hl = matrix_h_and_limit(a, k).unwrap();
            let p = predicted_exp_total(a, k).unwrap();
            assert!((hl.h_minus * 2.0 - p).norm() <= 1e-13);
            assert!((hl.h * hl.h_inverse - Matrix2::IDENTITY).norm_fro() <= 1e-13);
            assert!((matrix_h_from_k(a, k).unwrap() - hl.h).norm_fro() <= 1e-12);
            let t = crate::matrix2::transport_matrix(predicted_total_integral(a, k).unwrap()).unwrap();
            // H⁻¹ is the limit of exp(−vσ₂) with v the total integral.
            assert!((t - hl.h_inverse).norm_fro() <= 1e-12, "a={a} k={k}");
        }
    }

    proptest! {
        #[test]
        fn constraint_holds_on_the_real_region(a in -0.49f64..0.49, f in -0.999f64..0.999) {
            let al = c(a, 0.0);
            let k = c(f * (PI * a).cos(), 0.0);
            prop_assert!(constraint_residual(&stokes_from_ak(al, k), al) <= 1e-14);
            prop_assert!(nu_constant(al, k).unwrap().re.abs() <= 1e-15);
        }

        #[test]
        fn k_forms_agree(a in -0.45f64..0.45, f in -0.95f64..0.95, imag in proptest::bool::ANY) {
            let (al, k) = if imag { (c(0.0, a), c(0.0, 2.0 * f)) } else { (c(a, 0.0), c(f * (PI * a).cos(), 0.0)) };
            let kd = matrix_k_definition(al, k).unwrap();
            let kc = matrix_k_closed(al, k).unwrap();
            prop_assert!((kd - kc).norm_fro() <= 1e-12 * kc.norm_fro().max(1.0));
        }
    }
}

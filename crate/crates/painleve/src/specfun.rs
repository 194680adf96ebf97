//! Scalar special functions: complex Gamma, real Airy Ai/Ai′, and the
//! Bessel-type series pair v₁, v₂ that builds the parametrix.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dd::CDd;
use crate::error::{Error, Result};
use crate::matrix2::{branched_power, c, ArgWindow, Complex, ONE};

const LANCZOS_G: f64 = 671.0 / 128.0;
const LANCZOS_C0: f64 = 0.999999999999997092;
const LANCZOS: [f64; 14] = [
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
];
const SQRT_2PI: f64 = 2.5066282746310005;

/// ln Γ(z) for Re z ≥ 1/2.
fn ln_gamma_right(z: Complex) -> Complex {
    let t = z + LANCZOS_G;
    let mut ser = c(LANCZOS_C0, 0.0);
    let mut y = z;
    for &cf in &LANCZOS {
        y += 1.0;
        ser += cf / y;
    }
    (z + 0.5) * t.ln() - t + (ser * SQRT_2PI / z).ln()
}

/// Γ(z) by a Lanczos approximation, with reflection for Re z < 1/2.
pub fn gamma_complex(z: Complex) -> Result<Complex> {
    if z.re <= 0.5 {
        let n = z.re.round();
        if n <= 0.0 && (z - n).norm() <= 1e-10 {
            return Err(Error::Pole(n));
        }
    }
    if z.re < 0.5 {
        let s = (z * PI).sin();
        let g = ln_gamma_right(ONE - z).exp();
        return Ok(c(PI, 0.0) / (s * g));
    }
    Ok(ln_gamma_right(z).exp())
}

const AI0: f64 = 0.355_028_053_887_817_2;
const AIP0: f64 = -0.258_819_403_792_806_8;

fn airy_maclaurin(x: f64) -> (f64, f64) {
    let x3 = x * x * x;
    let (mut f, mut fp, mut g, mut gp) = (0.0, 0.0, 0.0, 0.0);
    let mut a = 1.0;
    let mut b = x;
    for k in 0..80 {
        let kf = k as f64;
        f += a;
        g += b;
        if k > 0 {
            fp += 3.0 * kf * a / x;
        }
        gp += (3.0 * kf + 1.0) * b / if x == 0.0 { 1.0 } else { x };
        a *= x3 / ((3.0 * kf + 2.0) * (3.0 * kf + 3.0));
        b *= x3 / ((3.0 * kf + 3.0) * (3.0 * kf + 4.0));
        if a.abs() < 1e-18 * f.abs().max(1e-300) && b.abs() < 1e-18 * g.abs().max(1e-300) {
            break;
        }
    }
    if x == 0.0 {
        gp = 1.0;
    }
    (AI0 * f + AIP0 * g, AI0 * fp + AIP0 * gp)
}

/// e^ζ K_ν(ζ) by the trapezoidal rule on ∫₀^∞ e^{−ζ(cosh t − 1)} cosh(νt) dt.
fn scaled_bessel_k(nu: f64, zeta: f64) -> f64 {
    let h: f64 = 0.1;
    let mut sum = 0.5;
    let mut t = h;
    loop {
        let e = (-zeta * (t.cosh() - 1.0)).exp() * (nu * t).cosh();
        sum += e;
        if e < 1e-18 * sum {
            break;
        }
        t += h;
    }
    h * sum
}

/// Terms of the large-x expansion of Ai and Ai′ without the factor e^{−ζ}.
fn airy_asymptotic_scaled(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let (mut su, mut sv) = (1.0, 1.0);
    let mut u = 1.0;
    let mut zpow = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        zpow *= -1.0 / zeta;
        let tu = u * zpow;
        if tu.abs() >= last {
            break;
        }
        last = tu.abs();
        su += tu;
        sv += v * zpow;
        if tu.abs() < 1e-17 {
            break;
        }
    }
    let pre = 1.0 / (2.0 * PI.sqrt());
    (pre * su / x.powf(0.25), -pre * x.powf(0.25) * sv)
}

fn check_airy_domain(x: f64) -> Result<()> {
    if !(-2.0..=60.0).contains(&x) {
        return Err(Error::Domain(format!("Airy argument {x} outside [-2, 60]")));
    }
    Ok(())
}

/// (Ai(x), Ai′(x)) for x ∈ [−2, 60].
pub fn airy_pair(x: f64) -> Result<(f64, f64)> {
    check_airy_domain(x)?;
    if x <= 2.0 {
        return Ok(airy_maclaurin(x));
    }
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let e = (-zeta).exp();
    if x < 10.0 {
        let k13 = scaled_bessel_k(1.0 / 3.0, zeta);
        let k23 = scaled_bessel_k(2.0 / 3.0, zeta);
        let ai = (x / 3.0).sqrt() / PI * k13 * e;
        let aip = -x / (PI * 3f64.sqrt()) * k23 * e;
        return Ok((ai, aip));
    }
    let (a, ap) = airy_asymptotic_scaled(x);
    Ok((a * e, ap * e))
}

pub fn airy_ai(x: f64) -> Result<f64> {
    airy_pair(x).map(|p| p.0)
}

pub fn airy_ai_prime(x: f64) -> Result<f64> {
    airy_pair(x).map(|p| p.1)
}

/// ln Ai(x) and Ai′(x)/Ai(x) for x ≥ 2, valid far beyond the range where Ai underflows.
pub fn ln_airy_ai(x: f64) -> Result<(f64, f64)> {
    if x < 2.0 {
        return Err(Error::Domain(format!("ln Ai needs x >= 2, got {x}")));
    }
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let (a, ap) = if x < 10.0 {
        (
            (x / 3.0).sqrt() / PI * scaled_bessel_k(1.0 / 3.0, zeta),
            -x / (PI * 3f64.sqrt()) * scaled_bessel_k(2.0 / 3.0, zeta),
        )
    } else {
        airy_asymptotic_scaled(x)
    };
    Ok((a.ln() - zeta, ap / a))
}

/// Truncation control for the v₁/v₂ series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesPolicy {
    pub target_rel_error: f64,
    pub max_terms: usize,
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        SeriesPolicy { target_rel_error: 1e-13, max_terms: 200 }
    }
}

/// v₁, v₁′, v₂, v₂′ at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VPair {
    pub v1: Complex,
    pub v1p: Complex,
    pub v2: Complex,
    pub v2p: Complex,
}

/// Σ z^{2k}/(4^k k! (b)_k) and its derivative, summed in double-double.
fn even_series(z: Complex, b: Complex, pol: &SeriesPolicy) -> Result<(Complex, Complex)> {
    let z2 = CDd::from_c(z) * CDd::from_c(z);
    let zd = CDd::from_c(z);
    let mut term = CDd::from_c(ONE);
    let mut sum = term;
    let mut dsum = CDd::default();
    let mut small = 0;
    for k in 0..pol.max_terms {
        let kf = k as f64;
        // b + k must not be rounded in f64: the terms are far larger than the sum.
        let den = CDd::from_c(c(4.0 * (kf + 1.0), 0.0)) * (CDd::from_c(b) + CDd::from_c(c(kf, 0.0)));
        term = term * z2 / den;
        sum = sum + term;
        // d/dz z^{2(k+1)} = 2(k+1) z^{2k+1}
        dsum = dsum + term * CDd::from_c(c(2.0 * (kf + 1.0), 0.0)) / zd;
        let scale = sum.norm().max(1e-300);
        if term.norm() <= pol.target_rel_error * scale {
            small += 1;
            if small >= 2 {
                return Ok((sum.to_c(), if z.norm() == 0.0 { Complex::new(0.0, 0.0) } else { dsum.to_c() }));
            }
        } else {
            small = 0;
        }
    }
    Err(Error::Truncation(pol.max_terms))
}

fn check_alpha(alpha: Complex) -> Result<()> {
    let real_strip = alpha.re.abs() < 0.5;
    let imaginary = alpha.re == 0.0;
    if !(real_strip || imaginary) {
        return Err(Error::Domain(format!("alpha = {alpha} outside |Re alpha| < 1/2")));
    }
    Ok(())
}

/// v₁, v₂ and their derivatives, with the branched powers z^α, z^{1−α} taken in `w`.
pub fn v_pair(z: Complex, alpha: Complex, w: ArgWindow, pol: &SeriesPolicy) -> Result<VPair> {
    check_alpha(alpha)?;
    if z.norm() == 0.0 {
        return Err(Error::Singular("v1/v2 evaluated at z = 0".into()));
    }
    let (e1, e1p) = even_series(z, alpha + 0.5, pol)?;
    let (e2, e2p) = even_series(z, 1.5 - alpha, pol)?;
    let za = branched_power(z, alpha, w)?;
    let z1a = branched_power(z, ONE - alpha, w)?;
    let zi = z.inv();
    Ok(VPair {
        v1: za * e1,
        v1p: za * (alpha * zi * e1 + e1p),
        v2: z1a * e2,
        v2p: z1a * ((ONE - alpha) * zi * e2 + e2p),
    })
}

pub fn v1(z: Complex, alpha: Complex, w: ArgWindow, pol: &SeriesPolicy) -> Result<Complex> {
    v_pair(z, alpha, w, pol).map(|v| v.v1)
}

pub fn v1_prime(z: Complex, alpha: Complex, w: ArgWindow, pol: &SeriesPolicy) -> Result<Complex> {
    v_pair(z, alpha, w, pol).map(|v| v.v1p)
}

pub fn v2(z: Complex, alpha: Complex, w: ArgWindow, pol: &SeriesPolicy) -> Result<Complex> {
    v_pair(z, alpha, w, pol).map(|v| v.v2)
}

pub fn v2_prime(z: Complex, alpha: Complex, w: ArgWindow, pol: &SeriesPolicy) -> Result<Complex> {
    v_pair(z, alpha, w, pol).map(|v| v.v2p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: Complex, b: Complex) -> f64 {
        (a - b).norm() / b.norm()
    }

    /// ln Γ by upward recurrence to |z| > 40 and the Stirling series.
    fn ln_gamma_stirling(z: Complex) -> Complex {
        let mut shift = c(0.0, 0.0);
        let mut w = z;
        while w.norm() < 40.0 || w.re < 10.0 {
            shift += w.ln();
            w += 1.0;
        }
        let b = [1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0, 1.0 / 1188.0, -691.0 / 360360.0, 1.0 / 156.0];
        let mut s = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln();
        let w2 = w * w;
        let mut p = w;
        for bk in b {
            s += bk / p;
            p *= w2;
        }
        s - shift
    }

    #[test]
    fn gamma_classical_values() {
        assert!(rel(gamma_complex(c(1.0, 0.0)).unwrap(), c(1.0, 0.0)) < 1e-14);
        assert!(rel(gamma_complex(c(0.5, 0.0)).unwrap(), c(PI.sqrt(), 0.0)) < 1e-14);
        assert!(rel(gamma_complex(c(6.0, 0.0)).unwrap(), c(120.0, 0.0)) < 1e-13);
        assert!(rel(gamma_complex(c(-0.5, 0.0)).unwrap(), c(-2.0 * PI.sqrt(), 0.0)) < 1e-14);
        assert!(matches!(gamma_complex(c(-3.0, 0.0)), Err(Error::Pole(_))));
        assert!(matches!(gamma_complex(c(0.0, 0.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn gamma_matches_stirling_oracle() {
        for &(x, y) in &[(0.7, 0.0), (2.5, 3.0), (10.0, -15.0), (-3.3, 4.0), (0.1, 19.0), (19.0, 19.0), (-7.6, -0.4)] {
            let z = c(x, y);
            let g = gamma_complex(z).unwrap();
            let o = ln_gamma_stirling(z).exp();
            assert!(rel(g, o) < 1e-12, "z = {z}: {g} vs {o}");
        }
    }

    #[test]
    fn airy_at_zero() {
        let want = 3f64.powf(-2.0 / 3.0) / gamma_complex(c(2.0 / 3.0, 0.0)).unwrap().re;
        assert!((airy_ai(0.0).unwrap() - want).abs() < 1e-15);
        assert!((airy_ai(0.0).unwrap() - 0.355028054).abs() < 1e-9);
    }

    #[test]
    fn airy_satisfies_its_ode() {
        for &x in &[1.0, 5.0, 12.0] {
            let h = 1e-2;
            let f = |t: f64| airy_ai(t).unwrap();
            let d2 =
                (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h)) / (12.0 * h * h);
            assert!((d2 - x * f(x)).abs() < 1e-10, "x = {x}");
        }
    }

    #[test]
    fn airy_ode_relative_residual() {
        for &x in &[-1.5f64, 1.0, 3.0, 5.0, 9.5, 12.0, 30.0] {
            let h = 2e-4;
            let f = |t: f64| airy_ai(t).unwrap();
            let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
            assert!(((d2 - x * f(x)) / (x * f(x))).abs() < 1e-5, "x = {x}");
            let fp = (f(x + h) - f(x - h)) / (2.0 * h);
            assert!(((fp - airy_ai_prime(x).unwrap()) / fp).abs() < 1e-5, "x = {x}");
        }
    }

    #[test]
    fn airy_leading_asymptotics_at_ten() {
        let lead = (-(2.0 / 3.0) * 10f64.powf(1.5)).exp() / (2.0 * PI.sqrt() * 10f64.powf(0.25));
        assert!((airy_ai(10.0).unwrap() / lead - 1.0).abs() < 1e-2);
    }

    #[test]
    fn airy_methods_agree_on_overlap() {
        for i in 0..=40 {
            let x = 6.0 + 0.1 * i as f64;
            let zeta = 2.0 / 3.0 * x.powf(1.5);
            let (a, ap) = airy_asymptotic_scaled(x);
            let k = (x / 3.0).sqrt() / PI * scaled_bessel_k(1.0 / 3.0, zeta);
            let kp = -x / (PI * 3f64.sqrt()) * scaled_bessel_k(2.0 / 3.0, zeta);
            let tol = if x >= 8.0 { 1e-12 } else { 1e-8 };
            assert!((a / k - 1.0).abs() < tol && (ap / kp - 1.0).abs() < tol, "x = {x}");
        }
        for i in 0..=20 {
            let x = 1.0 + 0.1 * i as f64;
            let zeta = 2.0 / 3.0 * x.powf(1.5);
            let (m, mp) = airy_maclaurin(x);
            let k = (x / 3.0).sqrt() / PI * scaled_bessel_k(1.0 / 3.0, zeta) * (-zeta).exp();
            let kp = -x / (PI * 3f64.sqrt()) * scaled_bessel_k(2.0 / 3.0, zeta) * (-zeta).exp();
            assert!((m / k - 1.0).abs() < 1e-12 && (mp / kp - 1.0).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn airy_domain() {
        assert!(airy_ai(-2.5).is_err());
        assert!(airy_ai(61.0).is_err());
    }

    #[test]
    fn ln_airy_matches_direct() {
        for &x in &[3.0, 9.0, 15.0, 40.0] {
            let (l, d) = ln_airy_ai(x).unwrap();
            let (a, ap) = airy_pair(x).unwrap();
            assert!((l - a.ln()).abs() < 1e-12 * a.ln().abs());
            assert!((d - ap / a).abs() < 1e-12 * d.abs());
        }
    }

    #[test]
    fn airy_positive_and_decreasing() {
        let mut prev = f64::INFINITY;
        for i in 0..=600 {
            let a = airy_ai(0.1 * i as f64).unwrap();
            assert!(a > 0.0 && a < prev);
            prev = a;
        }
    }

    #[test]
    fn v_series_reduce_to_hyperbolic_functions() {
        let pol = SeriesPolicy::default();
        let w = ArgWindow::principal();
        for z in [c(0.5, 0.0), c(1.0, 1.0), c(0.0, 2.0)] {
            let v = v_pair(z, c(0.0, 0.0), w, &pol).unwrap();
            // Partial sums of the Taylor series of cosh and sinh.
            let (mut ch, mut sh, mut t) = (c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
            for n in 0..60 {
                if n % 2 == 0 {
                    ch += t
                } else {
                    sh += t
                }
                t = t * z / (n as f64 + 1.0);
            }
            assert!(rel(v.v1, ch) < 1e-14 && rel(v.v2, sh) < 1e-14);
            assert!(rel(v.v1p, sh) < 1e-14 && rel(v.v2p, ch) < 1e-14);
        }
    }

    #[test]
    fn v_leading_terms_at_small_z() {
        let pol = SeriesPolicy::default();
        let w = ArgWindow::principal();
        let z = c(0.1, 0.0);
        let a = c(0.25, 0.0);
        let lead1 = 0.1f64.powf(0.25);
        let lead2 = 0.1f64.powf(0.75);
        assert!((v1(z, a, w, &pol).unwrap().re / lead1 - 1.0).abs() < 0.01);
        assert!((v2(z, a, w, &pol).unwrap().re / lead2 - 1.0).abs() < 0.01);
    }

    #[test]
    fn v1_matches_independent_bessel_j_series() {
        // v1(z) = 2^{α−1/2} Γ(α+1/2) e^{iπ(α−1/2)/2} z^{1/2} J_{α−1/2}(e^{−iπ/2} z) at z = 1, α = 0.3.
        let alpha = 0.3;
        let nu = alpha - 0.5;
        let wz = c(0.0, -1.0);
        let half = wz / 2.0;
        let mut j = c(0.0, 0.0);
        let mut fact = 1.0;
        for m in 0..40 {
            if m > 0 {
                fact *= m as f64;
            }
            let g = gamma_complex(c(m as f64 + nu + 1.0, 0.0)).unwrap();
            let p = (c(2.0 * m as f64 + nu, 0.0) * c(half.norm().ln(), -PI / 2.0)).exp();
            j += p * f64::powi(-1.0, m) / (g * fact);
        }
        let pre = 2f64.powf(alpha - 0.5) * gamma_complex(c(alpha + 0.5, 0.0)).unwrap().re;
        let want = j * pre * (c(0.0, PI / 2.0 * (alpha - 0.5))).exp();
        let got = v1(c(1.0, 0.0), c(alpha, 0.0), ArgWindow::principal(), &SeriesPolicy::default()).unwrap();
        assert!(rel(got, want) < 1e-13, "{got} vs {want}");
    }

    #[test]
    fn wronskian_is_one_minus_two_alpha() {
        let pol = SeriesPolicy::default();
        let w = ArgWindow::principal();
        for a in [c(0.0, 0.0), c(0.25, 0.0), c(-0.3, 0.0), c(0.0, 0.2)] {
            for z in [c(0.3, 0.0), c(1.0, 0.0), c(2.0, 1.0), c(0.0, 30.0)] {
                let v = v_pair(z, a, w, &pol).unwrap();
                let wr = v.v1 * v.v2p - v.v2 * v.v1p;
                let target = ONE - a * 2.0;
                assert!((wr - target).norm() <= 1e-10 * (1.0 + target.norm()), "a={a} z={z}: {wr}");
            }
        }
    }

    #[test]
    fn series_budget_is_enforced() {
        let pol = SeriesPolicy { target_rel_error: 1e-13, max_terms: 10 };
        assert!(matches!(v1(c(30.0, 0.0), c(0.1, 0.0), ArgWindow::principal(), &pol), Err(Error::Truncation(10))));
    }

    proptest! {
        #[test]
        fn gamma_recurrence(x in -9.5f64..15.0, y in -15.0f64..15.0) {
            let z = c(x, y);
            prop_assume!((z - z.re.round()).norm() > 1e-3 || z.re > 0.5);
            let g0 = gamma_complex(z).unwrap();
            let g1 = gamma_complex(z + 1.0).unwrap();
            prop_assert!(rel(g1, z * g0) < 1e-12);
        }

        #[test]
        fn gamma_reflection(x in -4.0f64..4.0, y in -3.0f64..3.0) {
            let z = c(x, y);
            prop_assume!(y.abs() > 1e-3 || (x - x.round()).abs() > 1e-3);
            let p = gamma_complex(z).unwrap() * gamma_complex(ONE - z).unwrap() * (z * PI).sin() / PI;
            prop_assert!((p - ONE).norm() < 1e-12);
        }

        #[test]
        fn v_derivatives_match_finite_differences(r in 0.3f64..3.0, t in -2.5f64..2.5, a in -0.45f64..0.45) {
            let pol = SeriesPolicy::default();
            let w = ArgWindow::principal();
            let z = Complex::from_polar(r, t);
            let al = c(a, 0.0);
            let h = 1e-5;
            let v = v_pair(z, al, w, &pol).unwrap();
            let p = v_pair(z + h, al, w, &pol).unwrap();
            let m = v_pair(z - h, al, w, &pol).unwrap();
            let d1 = (p.v1 - m.v1) / (2.0 * h);
            let d2 = (p.v2 - m.v2) / (2.0 * h);
            prop_assert!((d1 - v.v1p).norm() < 1e-8 * (1.0 + v.v1p.norm()));
            prop_assert!((d2 - v.v2p).norm() < 1e-8 * (1.0 + v.v2p.norm()));
        }

        #[test]
        fn wronskian_invariance(r in 0.2f64..8.0, t in -3.0f64..3.0, a in -0.45f64..0.45, b in -0.5f64..0.5) {
            let pol = SeriesPolicy::default();
            let al = if b.abs() < 0.25 { c(a, 0.0) } else { c(0.0, b) };
            let v = v_pair(Complex::from_polar(r, t), al, ArgWindow::principal(), &pol).unwrap();
            let target = ONE - al * 2.0;
            let wr = v.v1 * v.v2p - v.v2 * v.v1p;
            let scale = (v.v1 * v.v2p).norm().max(1.0);
            prop_assert!((wr - target).norm() <= 1e-10 * (1.0 + target.norm()) * scale);
        }
    }
}

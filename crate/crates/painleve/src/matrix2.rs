//! Fixed-size 2×2 complex linear algebra.
//!
//! Besides the usual products and determinants this module owns the branch
//! bookkeeping for scalar powers `z^a`: every power takes an explicit
//! [`ArgWindow`], and arguments that land on the window boundary are refused
//! instead of being rounded to one side.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Complex = Complex64;

/// Largest |Re c| for which `exp(c)` stays finite.
const EXP_LIMIT: f64 = 709.0;

/// Distance from a window edge below which an argument is considered on the cut.
pub const BRANCH_MARGIN: f64 = 1e-12;

pub const fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub const ZERO: Complex = c(0.0, 0.0);
pub const ONE: Complex = c(1.0, 0.0);
pub const I: Complex = c(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Matrix2 {
    pub a11: Complex,
    pub a12: Complex,
    pub a21: Complex,
    pub a22: Complex,
}

impl Matrix2 {
    pub const IDENTITY: Matrix2 = Matrix2::new(ONE, ZERO, ZERO, ONE);
    pub const ZERO: Matrix2 = Matrix2::new(ZERO, ZERO, ZERO, ZERO);
    pub const SIGMA1: Matrix2 = Matrix2::new(ZERO, ONE, ONE, ZERO);
    pub const SIGMA2: Matrix2 = Matrix2::new(ZERO, c(0.0, -1.0), I, ZERO);
    pub const SIGMA3: Matrix2 = Matrix2::new(ONE, ZERO, ZERO, c(-1.0, 0.0));

    pub const fn new(a11: Complex, a12: Complex, a21: Complex, a22: Complex) -> Self {
        Matrix2 { a11, a12, a21, a22 }
    }

    pub fn from_real(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Matrix2::new(c(a11, 0.0), c(a12, 0.0), c(a21, 0.0), c(a22, 0.0))
    }

    pub const fn diag(d1: Complex, d2: Complex) -> Self {
        Matrix2::new(d1, ZERO, ZERO, d2)
    }

    /// `[[1, s], [0, 1]]`
    pub const fn upper(s: Complex) -> Self {
        Matrix2::new(ONE, s, ZERO, ONE)
    }

    /// `[[1, 0], [s, 1]]`
    pub const fn lower(s: Complex) -> Self {
        Matrix2::new(ONE, ZERO, s, ONE)
    }

    pub fn det(&self) -> Complex {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn trace(&self) -> Complex {
        self.a11 + self.a22
    }

    pub fn scale(&self, s: Complex) -> Self {
        Matrix2::new(self.a11 * s, self.a12 * s, self.a21 * s, self.a22 * s)
    }

    pub fn norm_fro(&self) -> f64 {
        (self.a11.norm_sqr() + self.a12.norm_sqr() + self.a21.norm_sqr() + self.a22.norm_sqr()).sqrt()
    }

    pub fn max_offdiag(&self) -> f64 {
        self.a12.norm().max(self.a21.norm())
    }

    pub fn inverse(&self) -> Result<Self> {
        let d = self.det();
        if d.norm() == 0.0 || !d.is_finite() {
            return Err(Error::Singular("matrix determinant vanishes".into()));
        }
        let r = d.inv();
        Ok(Matrix2::new(self.a22 * r, -self.a12 * r, -self.a21 * r, self.a11 * r))
    }

    pub fn is_finite(&self) -> bool {
        self.a11.is_finite() && self.a12.is_finite() && self.a21.is_finite() && self.a22.is_finite()
    }

    pub fn entries(&self) -> [Complex; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }
}

pub fn mat_mul(a: Matrix2, b: Matrix2) -> Matrix2 {
    Matrix2::new(
        a.a11 * b.a11 + a.a12 * b.a21,
        a.a11 * b.a12 + a.a12 * b.a22,
        a.a21 * b.a11 + a.a22 * b.a21,
        a.a21 * b.a12 + a.a22 * b.a22,
    )
}

impl Mul for Matrix2 {
    type Output = Matrix2;
    fn mul(self, rhs: Matrix2) -> Matrix2 {
        mat_mul(self, rhs)
    }
}

impl Mul<Complex> for Matrix2 {
    type Output = Matrix2;
    fn mul(self, rhs: Complex) -> Matrix2 {
        self.scale(rhs)
    }
}

impl Mul<f64> for Matrix2 {
    type Output = Matrix2;
    fn mul(self, rhs: f64) -> Matrix2 {
        self.scale(c(rhs, 0.0))
    }
}

impl Add for Matrix2 {
    type Output = Matrix2;
    fn add(self, o: Matrix2) -> Matrix2 {
        Matrix2::new(self.a11 + o.a11, self.a12 + o.a12, self.a21 + o.a21, self.a22 + o.a22)
    }
}

impl Sub for Matrix2 {
    type Output = Matrix2;
    fn sub(self, o: Matrix2) -> Matrix2 {
        Matrix2::new(self.a11 - o.a11, self.a12 - o.a12, self.a21 - o.a21, self.a22 - o.a22)
    }
}

impl Neg for Matrix2 {
    type Output = Matrix2;
    fn neg(self) -> Matrix2 {
        self.scale(c(-1.0, 0.0))
    }
}

impl fmt::Display for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a11, self.a12, self.a21, self.a22)
    }
}

/// A half-open range of arguments of width 2π used to pick one branch of `arg z`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArgWindow {
    pub lo: f64,
    pub hi: f64,
}

impl ArgWindow {
    /// `(lo, lo + 2π)`
    pub fn from_lo(lo: f64) -> Self {
        ArgWindow { lo, hi: lo + 2.0 * PI }
    }

    /// The window of width 2π centred at `center`.
    pub fn centered(center: f64) -> Self {
        ArgWindow::from_lo(center - PI)
    }

    /// `(−π, π)`
    pub fn principal() -> Self {
        ArgWindow::from_lo(-PI)
    }

    /// `(−π/2, 3π/2)`
    pub fn upper() -> Self {
        ArgWindow::from_lo(-PI / 2.0)
    }

    /// `(−3π/2, π/2)`
    pub fn lower() -> Self {
        ArgWindow::from_lo(-1.5 * PI)
    }

    pub fn shifted(&self, delta: f64) -> Self {
        ArgWindow { lo: self.lo + delta, hi: self.hi + delta }
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, theta: f64) -> bool {
        theta > self.lo + BRANCH_MARGIN && theta < self.hi - BRANCH_MARGIN
    }

    /// The representative of `arg z` inside the window.
    pub fn arg(&self, z: Complex) -> Result<f64> {
        if z.norm() == 0.0 {
            return Err(Error::Singular("arg of 0".into()));
        }
        let a = z.arg();
        let turns = ((self.center() - a) / (2.0 * PI)).round();
        let theta = a + 2.0 * PI * turns;
        if !self.contains(theta) {
            return Err(Error::BranchCut { arg: theta, lo: self.lo, hi: self.hi });
        }
        Ok(theta)
    }

    /// `ln|z| + i·arg_w(z)`
    pub fn ln(&self, z: Complex) -> Result<Complex> {
        Ok(c(z.norm().ln(), self.arg(z)?))
    }
}

pub fn branched_power(z: Complex, a: Complex, w: ArgWindow) -> Result<Complex> {
    if z.norm() == 0.0 {
        return if a.re > 0.0 {
            Ok(ZERO)
        } else {
            Err(Error::Singular("zero raised to a power with Re a <= 0".into()))
        };
    }
    let e = a * w.ln(z)?;
    if e.re > EXP_LIMIT {
        return Err(Error::Range(format!("|z^a| overflows (log modulus {})", e.re)));
    }
    Ok(e.exp())
}

pub fn sigma3_exp(c0: Complex) -> Result<Matrix2> {
    if c0.re.abs() > EXP_LIMIT || !c0.is_finite() {
        return Err(Error::Range(format!("exp({c0}) overflows")));
    }
    Ok(Matrix2::diag(c0.exp(), (-c0).exp()))
}

/// `diag(z^a, z^{-a})` on the branch selected by `w`.
pub fn sigma3_power(z: Complex, a: Complex, w: ArgWindow) -> Result<Matrix2> {
    if z.norm() == 0.0 {
        return Err(Error::Singular("sigma3 power of 0".into()));
    }
    sigma3_exp(a * w.ln(z)?)
}

/// `exp(−vσ₂) = [[cosh v, i sinh v], [−i sinh v, cosh v]]`.
pub fn transport_matrix(v: Complex) -> Result<Matrix2> {
    if v.re.abs() > EXP_LIMIT || !v.is_finite() {
        return Err(Error::Range(format!("cosh({v}) overflows")));
    }
    let ch = v.cosh();
    let sh = v.sinh();
    Ok(Matrix2::new(ch, I * sh, -I * sh, ch))
}

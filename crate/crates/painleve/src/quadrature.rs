//! Gauss–Kronrod 7/15 quadrature.

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One 15-point Kronrod panel; returns the Kronrod value and |K15 − G7|.
pub(crate) fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let s = f(c - r * XGK[j]) + f(c + r * XGK[j]);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * r, ((k - g) * r).abs())
}

#[cfg(test)]
/// Adaptive bisection on GK15 panels until each panel's error estimate is
/// below its share of `tol`.
pub(crate) fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> crate::error::Result<f64> {
    use crate::error::{Error, Result};
    fn go<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> Result<f64> {
        let (v, e) = gk15(f, a, b);
        if e <= tol || (b - a).abs() < 1e-12 {
            return Ok(v);
        }
        if depth == 0 {
            return Err(Error::Resolution(format!("quadrature did not converge on [{a}, {b}]")));
        }
        let m = 0.5 * (a + b);
        Ok(go(f, a, m, 0.5 * tol, depth - 1)? + go(f, m, b, 0.5 * tol, depth - 1)?)
    }
    go(f, a, b, tol, 40)
}

//! The slowly decaying formal solution u_s(x) = Σ aₙ x^{−(3n+1)} of
//! u'' = xu + 2u³ − α, summed by optimal truncation.

use crate::matrix2::{Complex, ZERO};

/// Enough terms for optimal truncation at |x| up to about 24; past that the
/// terms fall below rounding well before the series starts to diverge.
const N_COEFFS: usize = 40;

#[derive(Clone, Debug)]
pub struct SlowSeries {
    coeffs: Vec<Complex>,
}

impl SlowSeries {
    /// a₀ = α, a_m = (3m−2)(3m−1) a_{m−1} − 2 Σ_{i+j+l=m−1} aᵢ aⱼ a_l.
    pub fn new(alpha: Complex) -> Self {
        let mut a: Vec<Complex> = vec![alpha];
        for m in 1..N_COEFFS {
            let mut cube = ZERO;
            for i in 0..m {
                for j in 0..m - i {
                    cube += a[i] * a[j] * a[m - 1 - i - j];
                }
            }
            let lin = a[m - 1] * ((3 * m - 2) * (3 * m - 1)) as f64;
            a.push(lin - cube * 2.0);
        }
        SlowSeries { coeffs: a }
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    /// Number of terms kept at `x`: stop before the first term (past n = 2)
    /// that is larger than its predecessor, or once terms drop below rounding.
    fn cutoff(&self, x: Complex) -> usize {
        let x3 = x.powi(-3);
        let mut p = x.inv();
        let mut sum = 0.0f64;
        let mut prev = f64::INFINITY;
        for (n, a) in self.coeffs.iter().enumerate() {
            let t = (a * p).norm();
            if n > 2 && t > prev {
                return n;
            }
            sum += t;
            if n > 2 && t <= 1e-18 * sum {
                return n + 1;
            }
            prev = t;
            p *= x3;
        }
        self.coeffs.len()
    }

    /// (u_s, u_s′) at complex x.
    pub fn eval(&self, x: Complex) -> (Complex, Complex) {
        let n = self.cutoff(x);
        let x3 = x.powi(-3);
        let xi = x.inv();
        let mut p = xi;
        let (mut u, mut up) = (ZERO, ZERO);
        for (j, a) in self.coeffs[..n].iter().enumerate() {
            let t = a * p;
            u += t;
            up -= t * xi * (3 * j + 1) as f64;
            p *= x3;
        }
        (u, up)
    }

    /// Antiderivative α ln x − Σ_{m≥1} a_m x^{−3m}/(3m) for real x > 0.
    pub fn antiderivative(&self, x: f64) -> Complex {
        let n = self.cutoff(Complex::new(x, 0.0));
        let x3 = x.powi(-3);
        let mut p = x3;
        let mut g = self.coeffs[0] * x.ln();
        for (m, a) in self.coeffs[..n].iter().enumerate().skip(1) {
            g -= a * p / (3 * m) as f64;
            p *= x3;
        }
        g
    }
}

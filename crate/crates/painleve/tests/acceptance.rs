//! End-to-end acceptance run. Each criterion prints one PASS/FAIL line with
//! its measured figure and runtime; run with `--nocapture` to see them.
//!
//! The test asserts every criterion except those in `KNOWN_FAILURES`, which
//! must still fail. If one starts passing the list is stale and the test
//! says so.

use std::f64::consts::PI;
use std::time::Instant;

use painleve::identities::full_suite;
use painleve::monodromy::{classify_family, predicted_exp_total, predicted_total_integral};
use painleve::parametrix::{
    expansion_slope, large_z_expansion_residual, large_z_expansion_residual_corrected, SectorIndex,
};
use painleve::pii_ode::{integrate, pii_rhs};
use painleve::totals::{period_averaged_total, remainder_slope};
use painleve::{Complex, Family, Grid, PIIProblem, SolverConfig, Trajectory};

/// The 1/z coefficient of the normalised sector solution has a σ₃ part,
/// −α²/2, that the checked expansion omits; the residual then decays like
/// |z|⁻¹ rather than |z|⁻². At α = 0 the residual is rounding noise.
const KNOWN_FAILURES: &[u8] = &[7];

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

type Criterion = (u8, &'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn averaged(alpha: Complex, k: Complex) -> Complex {
    let p = PIIProblem::new(alpha, k).unwrap();
    period_averaged_total(&p, 150.0, 8, &SolverConfig::default()).unwrap().averaged
}

fn homogeneous() -> Outcome {
    let mut worst = 0.0f64;
    for k in [-0.9f64, -0.5, 0.25, 0.5, 0.9] {
        let exact = 0.5 * ((1.0 + k) / (1.0 - k)).ln();
        worst = worst.max((averaged(c(0.0, 0.0), c(k, 0.0)) - exact).norm());
    }
    Outcome { pass: worst <= 2e-3, detail: format!("max error {worst:.3e} (tol 2e-3)") }
}

fn real_theorem() -> Outcome {
    let cells = [(0.25, 0.35), (-0.25, 0.35), (0.4, 0.5 * (0.4 * PI).cos()), (0.1, -0.6)];
    let mut worst = 0.0f64;
    for (a, k) in cells {
        let cp = (PI * a).cos();
        let exact = 0.5 * ((cp + k) / (cp - k)).ln();
        let got = averaged(c(a, 0.0), c(k, 0.0));
        assert!((predicted_total_integral(c(a, 0.0), c(k, 0.0)).unwrap().re - exact).abs() < 1e-14);
        worst = worst.max((got - exact).norm());
    }
    Outcome { pass: worst <= 2e-3, detail: format!("max error {worst:.3e} (tol 2e-3)") }
}

fn imaginary_theorem() -> Outcome {
    let cells = [(c(0.0, 0.3), c(0.0, 0.4)), (c(0.0, 0.1), c(0.0, -0.7)), (c(0.0, 0.0), c(0.0, 0.5))];
    let (mut worst, mut modulus) = (0.0f64, 0.0f64);
    for (a, k) in cells {
        let cp = (a * PI).cos();
        let exact = (cp + k) / (cp * cp - k * k).sqrt();
        assert!((predicted_exp_total(a, k).unwrap() - exact).norm() < 1e-13);
        let e = averaged(a, k).exp();
        worst = worst.max((e - exact).norm());
        modulus = modulus.max((e.norm() - 1.0).abs());
    }
    Outcome {
        pass: worst <= 2e-3 && modulus <= 1e-3,
        detail: format!("max error {worst:.3e} (tol 2e-3), max ||e|-1| {modulus:.3e} (tol 1e-3)"),
    }
}

fn remainder_scaling() -> Outcome {
    let p = PIIProblem::new(c(0.0, 0.0), c(0.5, 0.0)).unwrap();
    let xs: Vec<f64> = (0..10).map(|i| 40.0 * 10f64.powf(i as f64 / 9.0)).collect();
    let slope = remainder_slope(&p, &xs, &SolverConfig::default()).unwrap();
    Outcome { pass: (-0.90..=-0.60).contains(&slope), detail: format!("slope {slope:.4} (want [-0.90, -0.60])") }
}

fn identity_suite() -> Outcome {
    let reports = full_suite(Grid::Default).unwrap();
    let failed: Vec<String> =
        reports.iter().filter(|r| !r.pass).map(|r| format!("{} {:.2e}", r.name, r.max_residual)).collect();
    Outcome {
        pass: failed.is_empty(),
        detail: if failed.is_empty() {
            format!("{} identities within tolerance", reports.len())
        } else {
            failed.join(", ")
        },
    }
}

/// Five-point stencil on u'. At x = -200 the solution oscillates with
/// frequency ~14, so the step must be small enough that the stencil's own
/// h^4 error stays below the solver's.
fn ode_residual(t: &Trajectory, x: f64) -> f64 {
    let h = 1e-3;
    let up = |y: f64| t.eval(y).unwrap().1;
    let upp = (up(x - 2.0 * h) - up(x - h) * 8.0 + up(x + h) * 8.0 - up(x + 2.0 * h)) / (12.0 * h);
    (upp - pii_rhs(x, t.eval(x).unwrap().0, c(0.0, 0.0), t.problem().alpha()).1).norm()
}

fn solver_consistency() -> Outcome {
    let p = PIIProblem::new(c(0.25, 0.0), c(0.3, 0.0)).unwrap();
    let u0 = |l: f64| {
        let cfg = SolverConfig { anchor_l: l, ..Default::default() };
        integrate(&p, -1.0, &cfg).unwrap().eval(0.0).unwrap().0
    };
    let base = u0(12.0);
    let drift = [10.0, 14.0].iter().map(|&l| (u0(l) - base).norm()).fold(0.0, f64::max);

    let cfg = SolverConfig::default();
    let (mut imag, mut resid, mut peak, mut blew_up) = (0.0f64, 0.0f64, 0.0f64, 0usize);
    let real_cells = Grid::Default.parameters().into_iter().filter(|&(a, k)| classify_family(a, k) == Family::RealAS);
    for (a, k) in real_cells {
        let p = PIIProblem::new(a, k).unwrap();
        match integrate(&p, -200.0, &cfg) {
            Ok(t) => {
                for s in t.samples() {
                    imag = imag.max(s.u.im.abs());
                    peak = peak.max(s.u.norm());
                }
                for i in 0..60 {
                    resid = resid.max(ode_residual(&t, -199.0 + 3.5 * i as f64));
                }
            }
            Err(_) => blew_up += 1,
        }
    }
    Outcome {
        pass: drift <= 1e-8 && imag <= 1e-9 && resid <= 1e-6 && blew_up == 0,
        detail: format!(
            "L drift {drift:.2e} (1e-8), max |Im u| {imag:.2e} (1e-9), ODE residual {resid:.2e} (1e-6), \
             failed runs {blew_up}, max |u| {peak:.3}"
        ),
    }
}

fn parametrix_asymptotics() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for a in [c(0.0, 0.0), c(0.25, 0.0), c(0.0, 0.2)] {
        for k in SectorIndex::all() {
            let s = expansion_slope(k, a, large_z_expansion_residual).unwrap();
            let fixed = expansion_slope(k, a, large_z_expansion_residual_corrected).unwrap();
            pass &= (s + 2.0).abs() <= 0.3;
            parts.push(format!("a={a} k={}: {s:.2} [with sigma3 term {fixed:.2}]", k.get()));
        }
    }
    Outcome { pass, detail: format!("slopes (want -2 +/- 0.3): {}", parts.join("; ")) }
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 7] = [
        (1, "homogeneous total integral", homogeneous),
        (2, "real-family total integral", real_theorem),
        (3, "imaginary-family exponentiated total", imaginary_theorem),
        (4, "remainder envelope scaling", remainder_scaling),
        (5, "identity suite", identity_suite),
        (6, "solver self-consistency", solver_consistency),
        (7, "parametrix large-z expansion", parametrix_asymptotics),
    ];
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        let start = Instant::now();
        let out = run();
        let secs = start.elapsed().as_secs_f64();
        let known = KNOWN_FAILURES.contains(&id);
        let tag = match (out.pass, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        println!("[{tag}] {id}. {name}: {} [{secs:.2} s]", out.detail);
        if out.pass == known {
            unexpected.push(id);
        }
    }
    assert!(unexpected.is_empty(), "criteria with unexpected outcome: {unexpected:?}");
}

//! Report assembly and the CSV/JSON writers.
//!
//! CSV floats use 17 significant digits in scientific notation, '.' as the
//! decimal separator and '\n' line endings, so identical runs give identical
//! bytes. JSON output follows `schema/report.schema.json`.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use clap::ValueEnum;
use painleve::pii_ode::Sample;
use painleve::{Complex, Grid, IdentityReport, IntegralResult, Method, SolverConfig, SweepReport};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub enum Report {
    Identities { command: &'static str, grid: Grid, reports: Vec<IdentityReport> },
    Solve { alpha: Complex, k: Complex, cfg: SolverConfig, samples: Vec<Sample> },
    Integral { alpha: Complex, k: Complex, cfg: SolverConfig, n_samples: usize, tol: f64, result: IntegralResult },
    Sweep { grid: Grid, cfg: SolverConfig, n_samples: usize, tol: f64, report: SweepReport, timings: bool },
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn cj(z: Complex) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::RawTruncation => "raw",
        Method::PeriodAveraged => "averaged",
        Method::TailFit => "tail-fit",
    }
}

impl Report {
    pub fn identities(command: &'static str, grid: Grid, reports: Vec<IdentityReport>) -> Self {
        Report::Identities { command, grid, reports }
    }

    pub fn solve(alpha: Complex, k: Complex, cfg: SolverConfig, samples: Vec<Sample>) -> Self {
        Report::Solve { alpha, k, cfg, samples }
    }

    pub fn integral(
        alpha: Complex,
        k: Complex,
        cfg: SolverConfig,
        n_samples: usize,
        tol: f64,
        result: IntegralResult,
    ) -> Self {
        Report::Integral { alpha, k, cfg, n_samples, tol, result }
    }

    pub fn sweep(
        grid: Grid,
        cfg: SolverConfig,
        n_samples: usize,
        tol: f64,
        report: SweepReport,
        timings: bool,
    ) -> Self {
        Report::Sweep { grid, cfg, n_samples, tol, report, timings }
    }

    fn command(&self) -> &'static str {
        match self {
            Report::Identities { command, .. } => command,
            Report::Solve { .. } => "solve",
            Report::Integral { .. } => "integral",
            Report::Sweep { .. } => "sweep",
        }
    }

    fn header(&self) -> Vec<&'static str> {
        match self {
            Report::Identities { .. } => vec!["name", "max_residual", "tolerance", "pass"],
            Report::Solve { .. } => vec!["x", "re_u", "im_u", "re_up", "im_up"],
            Report::Integral { .. } => vec![
                "alpha_re",
                "alpha_im",
                "k_re",
                "k_im",
                "method",
                "x_base",
                "n_samples",
                "raw_re",
                "raw_im",
                "averaged_re",
                "averaged_im",
                "predicted_re",
                "predicted_im",
                "abs_error",
                "tolerance",
                "pass",
            ],
            Report::Sweep { timings, .. } => {
                let mut h = vec![
                    "alpha_re",
                    "alpha_im",
                    "k_re",
                    "k_im",
                    "x_base",
                    "predicted_re",
                    "predicted_im",
                    "averaged_re",
                    "averaged_im",
                    "abs_error",
                    "tolerance",
                    "pass",
                ];
                if *timings {
                    h.push("wall_time");
                }
                h
            }
        }
    }

    fn rows(&self) -> Vec<Vec<String>> {
        match self {
            Report::Identities { reports, .. } => reports
                .iter()
                .map(|r| vec![r.name.clone(), num(r.max_residual), num(r.tolerance), r.pass.to_string()])
                .collect(),
            Report::Solve { samples, .. } => {
                samples.iter().map(|s| vec![num(s.x), num(s.u.re), num(s.u.im), num(s.up.re), num(s.up.im)]).collect()
            }
            Report::Integral { alpha, k, n_samples, tol, result: r, .. } => vec![vec![
                num(alpha.re),
                num(alpha.im),
                num(k.re),
                num(k.im),
                method_name(r.method).into(),
                num(r.x),
                n_samples.to_string(),
                num(r.raw.re),
                num(r.raw.im),
                num(r.averaged.re),
                num(r.averaged.im),
                num(r.predicted.re),
                num(r.predicted.im),
                num(r.abs_error),
                num(*tol),
                (r.abs_error <= *tol).to_string(),
            ]],
            Report::Sweep { tol, report, timings, .. } => report
                .rows
                .iter()
                .map(|r| {
                    let mut row = vec![
                        num(r.alpha.re),
                        num(r.alpha.im),
                        num(r.k.re),
                        num(r.k.im),
                        num(r.x),
                        num(r.predicted.re),
                        num(r.predicted.im),
                        num(r.averaged.re),
                        num(r.averaged.im),
                        num(r.abs_error),
                        num(*tol),
                        (r.abs_error <= *tol).to_string(),
                    ];
                    if *timings {
                        row.push(num(r.wall_time));
                    }
                    row
                })
                .collect(),
        }
    }

    fn to_json(&self, seed_report: bool) -> Value {
        let mut v = match self {
            Report::Identities { command, grid, reports } => json!({
                "command": command,
                "grid": grid.to_string(),
                "pass": reports.iter().all(|r| r.pass),
                "identities": reports.iter().map(|r| json!({
                    "name": r.name,
                    "max_residual": r.max_residual,
                    "tolerance": r.tolerance,
                    "pass": r.pass,
                })).collect::<Vec<_>>(),
            }),
            Report::Solve { alpha, k, samples, .. } => json!({
                "command": "solve",
                "alpha": cj(*alpha),
                "k": cj(*k),
                "samples": samples.iter().map(|s| json!({
                    "x": s.x, "u": cj(s.u), "up": cj(s.up),
                })).collect::<Vec<_>>(),
            }),
            Report::Integral { alpha, k, n_samples, tol, result: r, .. } => json!({
                "command": "integral",
                "alpha": cj(*alpha),
                "k": cj(*k),
                "method": method_name(r.method),
                "x_base": r.x,
                "n_samples": n_samples,
                "raw": cj(r.raw),
                "averaged": cj(r.averaged),
                "predicted": cj(r.predicted),
                "abs_error": r.abs_error,
                "tolerance": tol,
                "pass": r.abs_error <= *tol,
            }),
            Report::Sweep { tol, report, timings, .. } => json!({
                "command": "sweep",
                "tolerance": tol,
                "pass": report.rows.iter().all(|r| r.abs_error <= *tol),
                "rows": report.rows.iter().map(|r| {
                    let mut row = json!({
                        "alpha": cj(r.alpha),
                        "k": cj(r.k),
                        "x_base": r.x,
                        "predicted": cj(r.predicted),
                        "averaged": cj(r.averaged),
                        "abs_error": r.abs_error,
                        "pass": r.abs_error <= *tol,
                    });
                    if *timings {
                        row["wall_time"] = json!(r.wall_time);
                    }
                    row
                }).collect::<Vec<_>>(),
            }),
        };
        if seed_report {
            v["provenance"] = self.provenance();
        }
        v
    }

    fn provenance(&self) -> Value {
        let mut p = json!({
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command(),
        });
        match self {
            Report::Identities { grid, reports, .. } => {
                p["grid"] = json!(grid.to_string());
                p["tolerances"] = reports.iter().map(|r| (r.name.clone(), json!(r.tolerance))).collect();
            }
            Report::Solve { cfg, .. } => p["solver"] = json!(cfg),
            Report::Integral { cfg, n_samples, tol, .. } => {
                p["solver"] = json!(cfg);
                p["n_samples"] = json!(n_samples);
                p["tolerance"] = json!(tol);
            }
            Report::Sweep { grid, cfg, n_samples, tol, .. } => {
                p["grid"] = json!(grid.to_string());
                p["solver"] = json!(cfg);
                p["n_samples"] = json!(n_samples);
                p["tolerance"] = json!(tol);
            }
        }
        p
    }

    fn render(&self, format: Format, seed_report: bool) -> io::Result<Vec<u8>> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_vec_pretty(&self.to_json(seed_report))?;
                s.push(b'\n');
                Ok(s)
            }
            Format::Csv => {
                let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
                w.write_record(self.header())?;
                for row in self.rows() {
                    w.write_record(&row)?;
                }
                w.into_inner().map_err(|e| io::Error::other(e.to_string()))
            }
        }
    }

    pub fn write(&self, format: Format, path: Option<&Path>, seed_report: bool) -> io::Result<()> {
        let bytes = self.render(format, seed_report)?;
        match path {
            Some(p) => File::create(p)?.write_all(&bytes),
            None => io::stdout().lock().write_all(&bytes),
        }
    }
}

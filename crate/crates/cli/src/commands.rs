//! One function per subcommand, each returning rendered output.

use std::path::Path;

use hyperinfo::bound::verify_bound_chain;
use hyperinfo::highnoise::{
    capacity_expansion_check, concentration_report, named_density, scaling_fit, scan_density,
    threshold_curves, FitSummary, ScanSeries,
};
use hyperinfo::io::{format_truth_table, read_truth_table, spectrum_csv};
use hyperinfo::search::{run_sharded, RunConfig, SearchTask};
use hyperinfo::{
    capacity, monotonize, sum_coordinate_mi, wht, BooleanFunction, CompressionStep, Error,
    MIReport, NoiseParams, Result,
};
use serde::Serialize;

use crate::output::{json, Field, Format, Table};
use crate::{Command, SearchArgs};

pub struct Output {
    pub text: String,
    /// A checked inequality failed somewhere.
    pub violation: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, violation: false }
    }
}

pub fn run(command: &Command, format: Format) -> Result<Output> {
    match command {
        Command::Spectrum { file } => spectrum(file, format),
        Command::Mi { file, alpha } => mi(file, *alpha, format),
        Command::Compress { file, alpha } => compress(file, *alpha, format),
        Command::Oq1Curves { alpha_grid, k_grid } => oq1_curves(&alpha_grid.0, &k_grid.0, format),
        Command::VerifyCk(args) => search(SearchTask::TotalMi, args, format),
        Command::VerifyThm2(args) => search(SearchTask::CoordinateSum, args, format),
        Command::HighnoiseScan { family, n, seed, lambda_grid } => {
            highnoise_scan(family, *n, *seed, &lambda_grid.0, format)
        }
        Command::Thresholds { lambda_grid } => thresholds(&lambda_grid.0, format),
        Command::Concentration { n, alpha, tau } => concentration(*n, *alpha, *tau, format),
    }
}

fn load(file: &Path) -> Result<BooleanFunction> {
    read_truth_table(file).map_err(|e| match e {
        Error::Io(io) => Error::Parse(format!("{}: {io}", file.display())),
        other => other,
    })
}

#[derive(Serialize)]
struct SpectrumJson {
    n: usize,
    coeffs: Vec<f64>,
    level_weights: Vec<f64>,
}

fn spectrum(file: &Path, format: Format) -> Result<Output> {
    let b = load(file)?;
    let s = wht(&b.to_real());
    Ok(Output::ok(match format {
        Format::Csv => spectrum_csv(&s),
        Format::Json => json(&SpectrumJson {
            n: s.n(),
            level_weights: s.level_weights(),
            coeffs: s.into_coeffs(),
        }),
    }))
}

#[derive(Serialize)]
struct MiJson {
    #[serde(flatten)]
    report: MIReport,
    capacity: f64,
}

fn mi(file: &Path, alpha: f64, format: Format) -> Result<Output> {
    let b = load(file)?;
    let p = NoiseParams::new(alpha)?;
    let report = sum_coordinate_mi(&b, &p);
    let cap = capacity(&p);
    Ok(Output::ok(match format {
        Format::Json => json(&MiJson { report, capacity: cap }),
        Format::Csv => {
            let mut t = Table::new(&["coord", "z", "coord_mi", "total_mi", "sum_coord_mi", "capacity"]);
            for (i, (z, c)) in report.z.iter().zip(&report.coord_mi).enumerate() {
                t.row(&[
                    Field::Int(i as u64 + 1),
                    Field::Num(*z),
                    Field::Num(*c),
                    Field::Num(report.total_mi),
                    Field::Num(report.sum_coord_mi),
                    Field::Num(cap),
                ]);
            }
            t.finish()
        }
    }))
}

#[derive(Serialize)]
struct CompressJson<'a> {
    alpha: f64,
    steps: &'a [CompressionStep],
    effective_steps: usize,
    nondecreasing: bool,
    final_table: String,
}

fn compress(file: &Path, alpha: f64, format: Format) -> Result<Output> {
    let b = load(file)?;
    let p = NoiseParams::new(alpha)?;
    let trace = monotonize(&b, &p);
    let nondecreasing = trace.objective_nondecreasing();
    let text = match format {
        Format::Json => json(&CompressJson {
            alpha,
            steps: &trace.steps,
            effective_steps: trace.effective_steps(),
            nondecreasing,
            final_table: format_truth_table(&trace.final_function).trim_end().to_string(),
        }),
        Format::Csv => {
            let mut t = Table::new(&["step", "coord", "L_before", "L_after"]);
            for (i, s) in trace.steps.iter().enumerate() {
                t.row(&[
                    Field::Int(i as u64),
                    Field::Int(s.coord as u64),
                    Field::Num(s.l_before),
                    Field::Num(s.l_after),
                ]);
            }
            t.finish()
        }
    };
    Ok(Output { text, violation: !nondecreasing })
}

fn oq1_curves(alpha_grid: &[f64], k_grid: &[f64], format: Format) -> Result<Output> {
    let rho_grid = alpha_grid
        .iter()
        .map(|&a| NoiseParams::new(a).map(|p| p.rho()))
        .collect::<Result<Vec<_>>>()?;
    let report = verify_bound_chain(k_grid, &rho_grid)?;
    let text = match format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut t = Table::new(&[
                "K", "rho", "M_K", "M_K_prime", "margin_vs_M1", "prime_margin", "fd_error",
            ]);
            for r in &report.rows {
                t.row(&[
                    Field::Num(r.k),
                    Field::Num(r.rho),
                    Field::Num(r.m_k),
                    Field::Num(r.m_k_prime),
                    Field::Num(r.margin_vs_m1),
                    Field::Num(r.prime_margin),
                    Field::Num(r.fd_error),
                ]);
            }
            t.finish()
        }
    };
    Ok(Output { text, violation: !report.holds })
}

fn search(task: SearchTask, args: &SearchArgs, format: Format) -> Result<Output> {
    let mut config = RunConfig::new(args.n, task, args.grid());
    config.shards = args.shards as usize;
    config.allow_long_run = args.allow_long_run;
    config.checkpoint = args.checkpoint.clone();
    config.checkpoint_every = args.checkpoint_every;
    let report = run_sharded(&config)?
        .into_report()
        .expect("runs without a stop request complete");
    let text = match format {
        Format::Json => json(&report),
        Format::Csv => report.to_csv(),
    };
    Ok(Output { text, violation: report.violation_count > 0 })
}

#[derive(Serialize)]
struct ScanJson {
    family: String,
    n: usize,
    seed: u64,
    series: Vec<ScanSeries>,
    fits: Vec<FitSummary>,
    /// Fit of `1 − H(α) − λ/(2 ln 2) − λ²/(12 ln 2)`, present when the grid lies in `(0, 0.2]`.
    capacity_residual_fit: Option<FitSummary>,
}

fn highnoise_scan(family: &str, n: usize, seed: u64, grid: &[f64], format: Format) -> Result<Output> {
    let f = named_density(family, n, seed)?;
    let series = scan_density(&f, grid)?;
    let text = match format {
        Format::Json => {
            // Quantities that vanish identically for this density have no fit.
            let fits = series
                .iter()
                .filter_map(|s| {
                    let magnitudes: Vec<f64> = s.values.iter().map(|v| v.abs()).collect();
                    scaling_fit(&s.lambda_grid, &magnitudes)
                        .ok()
                        .map(|fit| FitSummary::new(&s.quantity, &fit))
                })
                .collect();
            let capacity_residual_fit = capacity_expansion_check(grid)
                .ok()
                .map(|fit| FitSummary::new("capacity_residual", &fit));
            json(&ScanJson {
                family: family.to_string(),
                n: f.n(),
                seed,
                series,
                fits,
                capacity_residual_fit,
            })
        }
        Format::Csv => {
            let mut t = Table::new(&["quantity", "lambda", "value"]);
            for s in &series {
                for (l, v) in s.lambda_grid.iter().zip(&s.values) {
                    t.row(&[Field::Text(&s.quantity), Field::Num(*l), Field::Num(*v)]);
                }
            }
            t.finish()
        }
    };
    Ok(Output::ok(text))
}

fn thresholds(grid: &[f64], format: Format) -> Result<Output> {
    let report = threshold_curves(grid)?;
    let text = match format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut t = Table::new(&["lambda", "t_new", "t_old", "ratio", "leading_ratio"]);
            for r in &report.rows {
                t.row(&[
                    Field::Num(r.lambda),
                    Field::Num(r.t_new),
                    Field::Num(r.t_old),
                    Field::Num(r.ratio),
                    Field::Num(r.leading_ratio),
                ]);
            }
            t.finish()
        }
    };
    Ok(Output { text, violation: !(report.ratio_increasing && report.ratio_below_one) })
}

fn concentration(n: usize, alpha: f64, tau: f64, format: Format) -> Result<Output> {
    let rows = concentration_report(n, &NoiseParams::new(alpha)?, tau)?;
    Ok(Output::ok(match format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut t = Table::new(&["class", "orbit_size", "mu", "mi", "xi", "xi_over_lambda"]);
            for r in &rows {
                t.row(&[
                    Field::Text(&r.class),
                    Field::Int(r.orbit_size),
                    Field::Num(r.mu),
                    Field::Num(r.mi),
                    Field::Num(r.xi),
                    r.xi_over_lambda.map_or(Field::Missing, Field::Num),
                ]);
            }
            t.finish()
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use hyperinfo::io::table_string;

    #[test]
    fn concentration_csv_has_dictator_row() {
        let out = concentration(3, 0.25, 1.0, Format::Csv).unwrap();
        let d = BooleanFunction::dictator(3, 1).unwrap();
        let class = table_string(&hyperinfo::canonicalize(&d).unwrap());
        assert!(out.text.lines().nth(1).unwrap().starts_with(&format!("{class},6,0,")));
    }

    #[test]
    fn thresholds_flag_grids_past_the_crossing() {
        assert!(!thresholds(&[1e-3, 1e-2, 0.1], Format::Json).unwrap().violation);
        assert!(thresholds(&[0.1, 0.2, 0.3, 0.4], Format::Json).unwrap().violation);
    }
}

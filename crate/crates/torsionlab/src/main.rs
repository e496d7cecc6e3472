//! Command-line front end: reports, tables, and plot-ready CSV.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use torsionlab::fmt::{sig17, sig7};
use torsionlab::geometry::Region;
use torsionlab::heat::{
    heat_curve, heat_difference_curve, heat_truncation_diagnostic, write_curve_csv,
    write_difference_csv,
};
use torsionlab::oracle::{poisson_solve, torsion_oracle_region};
use torsionlab::rational::{format_rational, parse_rational, Rational};
use torsionlab::spectrum::{enumerate_spectrum, isospectral_check, CoeffSource};
use torsionlab::torsion::{torsion_region_closed, torsion_spectral};
use torsionlab::{chapman, Error};

#[derive(Parser)]
#[command(
    name = "torsionlab",
    version,
    about = "Torsional rigidity, Dirichlet spectra, and heat content for rectangles, \
             right isosceles triangles, and their disjoint unions",
    after_help = "Region literals: square:1, rect:2x1, tri:2, tri:sqrt2; join disjoint \
                  components with `+` (e.g. rect:2x1+tri:sqrt2).\n\
                  TORSIONLAB_THREADS caps internal parallelism (0 = auto)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output to a file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Closed,
    Spectral,
    Oracle,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Coeff {
    Paper,
    Exact,
}

impl From<Coeff> for CoeffSource {
    fn from(c: Coeff) -> Self {
        match c {
            Coeff::Paper => CoeffSource::Paper,
            Coeff::Exact => CoeffSource::Exact,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Torsional rigidity of a region
    Torsion {
        /// Region literal, e.g. `square:1+tri:2`
        region: String,
        #[arg(long, value_enum, default_value_t = Method::Closed)]
        method: Method,
        /// Triangle coefficient source for the spectral method
        #[arg(long, value_enum, default_value_t = Coeff::Exact)]
        coeff: Coeff,
        /// Spectral cutoff in units of pi^2 (rational)
        #[arg(long, default_value = "2000")]
        cutoff: String,
        /// Oracle tolerance
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
    },
    /// Exact Dirichlet spectrum of a region up to a bound
    Spectrum {
        region: String,
        /// Bound in units of pi^2 (rational)
        #[arg(long)]
        bound: String,
    },
    /// Exact multiset comparison of two spectra
    Isospectral {
        region_a: String,
        region_b: String,
        #[arg(long, default_value = "1000")]
        bound: String,
    },
    /// Full verification report for the Chapman pair
    Chapman {
        #[arg(long, default_value = "2000")]
        cutoff: String,
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
    },
    /// Heat content of one region, or of two with their difference
    Heat {
        region_a: String,
        region_b: Option<String>,
        /// Comma-separated ascending times, e.g. `0.05,0.1,0.2`
        #[arg(long)]
        times: String,
        #[arg(long, default_value = "2000")]
        cutoff: String,
        #[arg(long, value_enum, default_value_t = Coeff::Exact)]
        coeff: Coeff,
    },
    /// Evaluate the published expressions and report where they disagree
    /// with independent evaluation
    Audit,
    /// Solve the Poisson problem on one shape and dump the grid field
    Field {
        /// A single-shape region literal
        shape: String,
        /// Subdivisions per unit length
        #[arg(long, default_value_t = 256)]
        grid_n: u32,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version through the error path with status 0
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let format = cli.format;
    let out: Box<dyn Write> = match &cli.output {
        Some(path) => match std::fs::File::create(path) {
            Ok(f) => Box::new(f),
            Err(e) => {
                eprintln!("error: cannot open {}: {e}", path.display());
                return ExitCode::from(1);
            }
        },
        None => Box::new(std::io::stdout().lock()),
    };
    match run(cli.command, format, out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command, format: Format, mut out: Box<dyn Write>) -> Result<(), Error> {
    match command {
        Command::Torsion {
            region,
            method,
            coeff,
            cutoff,
            tol,
        } => {
            let region = Region::parse(&region)?;
            let cutoff = parse_rational(&cutoff)?;
            run_torsion(&region, method, coeff.into(), &cutoff, tol, format, &mut out)
        }
        Command::Spectrum { region, bound } => {
            let region = Region::parse(&region)?;
            let bound = parse_rational(&bound)?;
            run_spectrum(&region, &bound, format, &mut out)
        }
        Command::Isospectral {
            region_a,
            region_b,
            bound,
        } => {
            let a = Region::parse(&region_a)?;
            let b = Region::parse(&region_b)?;
            let bound = parse_rational(&bound)?;
            run_isospectral(&a, &b, &bound, format, &mut out)
        }
        Command::Chapman { cutoff, tol } => {
            let cutoff = parse_rational(&cutoff)?;
            run_chapman(&cutoff, tol, format, &mut out)
        }
        Command::Heat {
            region_a,
            region_b,
            times,
            cutoff,
            coeff,
        } => {
            let a = Region::parse(&region_a)?;
            let b = region_b.map(|s| Region::parse(&s)).transpose()?;
            let times = parse_times(&times)?;
            let cutoff = parse_rational(&cutoff)?;
            run_heat(&a, b.as_ref(), &times, &cutoff, coeff.into(), format, &mut out)
        }
        Command::Audit => run_audit(format, &mut out),
        Command::Field { shape, grid_n } => run_field(&shape, grid_n, format, &mut out),
    }
}

fn parse_times(s: &str) -> Result<Vec<f64>, Error> {
    let times: Result<Vec<f64>, _> = s
        .split(',')
        .map(|tok| tok.trim().parse::<f64>().map_err(|_| Error::BadTimeList(s.to_string())))
        .collect();
    let times = times?;
    if times.is_empty() {
        return Err(Error::BadTimeList(s.to_string()));
    }
    Ok(times)
}

fn run_torsion(
    region: &Region,
    method: Method,
    coeff: CoeffSource,
    cutoff: &Rational,
    tol: f64,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), Error> {
    let (value, method_name, tail, cutoff_str, error): (f64, &str, f64, Option<String>, Option<f64>) =
        match method {
            Method::Closed => {
                let t = torsion_region_closed(region)?;
                (t.value, "closed", t.tail_bound, None, None)
            }
            Method::Spectral => {
                let t = torsion_spectral(region, cutoff, coeff)?;
                (
                    t.value,
                    "spectral",
                    t.tail_bound,
                    Some(format_rational(cutoff)),
                    None,
                )
            }
            Method::Oracle => {
                let est = torsion_oracle_region(region, tol)?;
                if !est.converged {
                    return Err(Error::GridBudgetExhausted {
                        n: est.n_final,
                        value: est.value,
                        error: est.estimated_error,
                    });
                }
                (est.value, "oracle", est.estimated_error, None, None)
            }
        };
    match format {
        Format::Text => {
            writeln!(out, "region: {region}")?;
            writeln!(out, "method: {method_name}")?;
            if let Some(c) = &cutoff_str {
                writeln!(out, "cutoff: {c} (coeff: {})", coeff.as_str())?;
            }
            writeln!(out, "T = {}", sig7(value))?;
            writeln!(out, "tail <= {}", sig7(tail))?;
        }
        Format::Json => {
            let v = json!({
                "region": region.literal(),
                "value": value,
                "method": method_name,
                "tail": tail,
                "cutoff": cutoff_str,
                "coeff": if method == Method::Spectral { Some(coeff.as_str()) } else { None },
                "error": error,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
        }
        Format::Csv => {
            writeln!(out, "region,method,value,tail,cutoff")?;
            writeln!(
                out,
                "{},{},{},{},{}",
                region.literal(),
                method_name,
                sig17(value),
                sig17(tail),
                cutoff_str.unwrap_or_default()
            )?;
        }
    }
    Ok(())
}

fn run_spectrum(
    region: &Region,
    bound: &Rational,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), Error> {
    let slice = enumerate_spectrum(region, bound)?;
    match format {
        Format::Text => {
            writeln!(out, "region: {region}")?;
            writeln!(out, "bound: {}·π²", format_rational(bound))?;
            writeln!(out, "eigenvalues (units of π²): {}", slice.counting_function())?;
            for line in &slice.lines {
                let modes = line
                    .modes
                    .iter()
                    .map(|o| format!("[{} {},{}]", o.shape, o.j, o.k))
                    .collect::<Vec<_>>()
                    .join(" ");
                writeln!(
                    out,
                    "  {:>12}  x{}  {}",
                    format_rational(line.lambda.ratio()),
                    line.multiplicity,
                    modes
                )?;
            }
        }
        Format::Json => {
            writeln!(out, "{}", serde_json::to_string_pretty(&slice.to_json()).expect("json"))?;
        }
        Format::Csv => {
            writeln!(out, "lambda,mult")?;
            for line in &slice.lines {
                writeln!(out, "{},{}", format_rational(line.lambda.ratio()), line.multiplicity)?;
            }
        }
    }
    Ok(())
}

fn run_isospectral(
    a: &Region,
    b: &Region,
    bound: &Rational,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), Error> {
    let report = isospectral_check(a, b, bound)?;
    match format {
        Format::Text | Format::Csv => {
            writeln!(out, "isospectral: {}", report.equal)?;
            if let Some(mm) = &report.first_mismatch {
                writeln!(
                    out,
                    "first mismatch: {}·π² (multiplicity {} vs {})",
                    format_rational(mm.lambda.ratio()),
                    mm.multiplicity_a,
                    mm.multiplicity_b
                )?;
            }
        }
        Format::Json => {
            let v = json!({
                "bound": format_rational(bound),
                "equal": report.equal,
                "first_mismatch": report.first_mismatch.as_ref().map(|mm| json!({
                    "lambda": format_rational(mm.lambda.ratio()),
                    "mult_a": mm.multiplicity_a,
                    "mult_b": mm.multiplicity_b,
                })),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
        }
    }
    Ok(())
}

fn run_chapman(
    cutoff: &Rational,
    tol: f64,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), Error> {
    let report = chapman::chapman_report(cutoff, tol)?;
    match format {
        Format::Text => {
            writeln!(out, "isospectral up to {}·π²: {}", format_rational(cutoff), report.isospectral)?;
            writeln!(out, "torsion by method:")?;
            writeln!(out, "  {:<16} {:>12} {:>12} {:>13}", "method", "C1", "C2", "C1-C2")?;
            for (name, row) in &report.torsion_by_method {
                let mut line = format!(
                    "  {:<16} {:>12} {:>12} {:>13}",
                    name,
                    sig7(row.c1),
                    sig7(row.c2),
                    sig7(row.difference)
                );
                if let Some(e) = row.error {
                    line.push_str(&format!("  (est. error {})", sig7(e)));
                }
                writeln!(out, "{line}")?;
            }
            writeln!(out, "published expressions:")?;
            writeln!(out, "  triangle difference (printed): {}", sig7(report.paper_eq8))?;
            writeln!(out, "  rectangle difference (printed): {}", sig7(report.paper_eq9_printed))?;
            writeln!(out, "  rectangle difference (direct):  {}", sig7(report.paper_eq9_direct))?;
            writeln!(out, "  D: {}   1/60 - D: {}", sig7(report.paper_d), sig7(1.0 / 60.0 - report.paper_d))?;
            writeln!(out, "  bound 1/60 - (24/pi^5)(31/32): {}", sig7(report.paper_bound))?;
            writeln!(out, "verdict: {}", report.verdict.as_str())?;
            writeln!(out, "audit:")?;
            for note in &report.audit_notes {
                writeln!(out, "  - {note}")?;
            }
        }
        Format::Json => {
            writeln!(out, "{}", serde_json::to_string_pretty(&report.to_json()).expect("json"))?;
        }
        Format::Csv => {
            writeln!(out, "method,C1,C2,diff,error")?;
            for (name, row) in &report.torsion_by_method {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    name,
                    sig17(row.c1),
                    sig17(row.c2),
                    sig17(row.difference),
                    row.error.map(sig17).unwrap_or_default()
                )?;
            }
        }
    }
    Ok(())
}

fn run_heat(
    a: &Region,
    b: Option<&Region>,
    times: &[f64],
    cutoff: &Rational,
    coeff: CoeffSource,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), Error> {
    match b {
        Some(b) => {
            let diff = heat_difference_curve(a, b, times, cutoff, coeff)?;
            match format {
                Format::Csv => write_difference_csv(&diff, out)?,
                Format::Text => {
                    writeln!(out, "regions: {a}  vs  {b}")?;
                    writeln!(out, "cutoff: {} (coeff: {})", format_rational(cutoff), coeff.as_str())?;
                    let diag = heat_truncation_diagnostic(a, times[0], cutoff)
                        .max(heat_truncation_diagnostic(b, times[0], cutoff));
                    writeln!(out, "truncation diagnostic at t={}: {}", times[0], sig7(diag))?;
                    writeln!(out, "{:>10} {:>14} {:>14} {:>14}", "t", "Q_a", "Q_b", "diff")?;
                    for i in 0..times.len() {
                        writeln!(
                            out,
                            "{:>10} {:>14} {:>14} {:>14}",
                            sig7(times[i]),
                            sig7(diff.curve_a.values[i]),
                            sig7(diff.curve_b.values[i]),
                            sig7(diff.difference[i])
                        )?;
                    }
                }
                Format::Json => {
                    let v = json!({
                        "region_a": a.literal(),
                        "region_b": b.literal(),
                        "cutoff": format_rational(cutoff),
                        "coeff": coeff.as_str(),
                        "times": times,
                        "q_a": diff.curve_a.values,
                        "q_b": diff.curve_b.values,
                        "diff": diff.difference,
                    });
                    writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
                }
            }
        }
        None => {
            let curve = heat_curve(a, times, cutoff, coeff)?;
            match format {
                Format::Csv => write_curve_csv(&curve, out)?,
                Format::Text => {
                    writeln!(out, "region: {a}")?;
                    writeln!(out, "cutoff: {} (coeff: {})", format_rational(cutoff), coeff.as_str())?;
                    writeln!(out, "{:>10} {:>14}", "t", "Q")?;
                    for (t, q) in curve.times.iter().zip(&curve.values) {
                        writeln!(out, "{:>10} {:>14}", sig7(*t), sig7(*q))?;
                    }
                }
                Format::Json => {
                    let v = json!({
                        "region": a.literal(),
                        "cutoff": format_rational(cutoff),
                        "coeff": coeff.as_str(),
                        "times": curve.times,
                        "q": curve.values,
                    });
                    writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
                }
            }
        }
    }
    Ok(())
}

fn run_audit(format: Format, out: &mut dyn Write) -> Result<(), Error> {
    let eq8 = chapman::eval_paper_eq8();
    let eq9 = chapman::eval_paper_eq9();
    let d = chapman::paper_d();
    let chain = chapman::proof_bound_chain();
    let tri_paper = torsionlab::torsion::torsion_tri_closed_paper(1.0)?.value;
    let tri_exact = torsion_spectral(
        &Region::parse("tri:1")?,
        &torsionlab::rational::from_int(2000),
        CoeffSource::Exact,
    )?
    .value;
    match format {
        Format::Text | Format::Csv => {
            writeln!(out, "triangle difference (printed rhs): {}", sig7(eq8))?;
            writeln!(out, "  equals 12x the published unit-triangle closed form: {}", sig7(12.0 * tri_paper))?;
            writeln!(out, "rectangle difference printed: {}  direct: {}  gap: {}", sig7(eq9.printed), sig7(eq9.direct), sig7(eq9.discrepancy))?;
            writeln!(out, "  note: tanh(k*pi) in place of tanh(k*pi/4) reproduces the direct value")?;
            writeln!(out, "published D: {}   1/60 - D: {}", sig7(d), sig7(1.0 / 60.0 - d))?;
            writeln!(out, "bound chain: coth sum {} > (31/32)*zeta(5) {} > 31/32; final bound {} < 0: {}", sig7(chain.coth_sum), sig7(chain.zeta5_bound), sig7(chain.final_bound), chain.holds)?;
            writeln!(out, "unit-triangle torsion: published closed form {}  exact-coefficient spectral {}", sig7(tri_paper), sig7(tri_exact))?;
            writeln!(out, "  the published coefficient formula conflicts with the defining integral; the oracle sides with the integral")?;
        }
        Format::Json => {
            let v = json!({
                "eq8": eq8,
                "eq9_printed": eq9.printed,
                "eq9_direct": eq9.direct,
                "eq9_gap": eq9.discrepancy,
                "D": d,
                "bound": chain.final_bound,
                "chain_holds": chain.holds,
                "tri_closed_paper": tri_paper,
                "tri_spectral_exact": tri_exact,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
        }
    }
    Ok(())
}

fn run_field(shape: &str, grid_n: u32, format: Format, out: &mut dyn Write) -> Result<(), Error> {
    let region = Region::parse(shape)?;
    if region.components().len() != 1 {
        return Err(Error::BadRegionToken(format!(
            "{shape} (field dump takes a single shape)"
        )));
    }
    let field = poisson_solve(&region.components()[0], grid_n)?;
    match format {
        Format::Json => {
            let v = json!({
                "shape": region.literal(),
                "n": field.n_per_unit,
                "h": field.h,
                "residual": field.residual_norm,
                "iterations": field.iterations,
                "torsion": field.integral(),
                "min": field.min_value(),
                "max": field.max_value(),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
        }
        _ => field.write_text(out)?,
    }
    Ok(())
}

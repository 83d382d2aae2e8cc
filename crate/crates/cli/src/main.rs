use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cbm_core::certify::{analyze_f_on_domain, analyze_g_on_q, BoundReport};
use cbm_core::estimate::{estimate_cen, estimate_extended, pentagon_triangle_witness, Budget, EstimatorConfig, Mode};
use cbm_core::hexagon::{check_centroid_lemma, HexagonResiduals, LemmaCheck, DEFAULT_INSCRIBE_TOL};
use cbm_core::normalize::FundamentalDomains;
use cbm_core::witness::{construct_with, WitnessOptions, DEFAULT_VERIFY_TOL};
use cbm_core::{io, render, AffineRegularHexagon, Error, BOUND};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "cbm", version, about = "Centroid Banach-Mazur distance of planar convex polygons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inscribe an affine-regular hexagon and check the 4/21 centroid lemma.
    Inscribe {
        polygon: PathBuf,
        #[arg(long, default_value_t = DEFAULT_INSCRIBE_TOL)]
        tol: f64,
    },
    /// Construct a witness with ratio at most 69/17 for a pair of polygons.
    Witness {
        c: PathBuf,
        d: PathBuf,
        /// Also report the smallest ratio the constructed maps admit.
        #[arg(long)]
        tighten: bool,
        /// Write the construction trace to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_VERIFY_TOL)]
        tol: f64,
    },
    /// Certify max g over Q and max f over T × T⁺.
    Certify {
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 200)]
        refine_iters: usize,
        #[arg(long, default_value_t = 0x6917)]
        seed: u64,
    },
    /// Upper-bound estimate of the distance between two polygons.
    Estimate {
        c: PathBuf,
        d: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Cen)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = BudgetArg::Default)]
        budget: BudgetArg,
    },
    /// Draw a construction trace or the pentagon–triangle configuration as SVG.
    Render {
        #[arg(long, conflicts_with = "pentagon_triangle", required_unless_present = "pentagon_triangle")]
        trace: Option<PathBuf>,
        #[arg(long)]
        pentagon_triangle: bool,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random convex polygon: hull of `n` seeded points in the unit disk.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Cen,
    Extended,
}

#[derive(Clone, Copy, ValueEnum)]
enum BudgetArg {
    Low,
    Default,
    High,
}

/// Exit status besides success: 1 for input problems, 2 for failed verification.
enum Failure {
    Input(Error),
    Verification(Error),
    /// Output was written, but the result did not verify.
    Unverified(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_verification_failure() {
            Failure::Verification(e)
        } else {
            Failure::Input(e)
        }
    }
}

#[derive(Serialize)]
struct InscribeOutput {
    hexagon: AffineRegularHexagon,
    residuals: HexagonResiduals,
    lemma: LemmaCheck,
}

#[derive(Serialize)]
struct CertifyOutput {
    rectangle: BoundReport,
    domain: BoundReport,
    certified: bool,
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => io::write_text(path, text).map_err(Failure::Input),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Input(Error::InvalidInput(format!("cannot write output: {e}"))))
        }
    }
}

fn emit_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    emit(&io::to_json(value)?, None)
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Inscribe { polygon, tol } => {
            let poly = io::read_polygon(&polygon)?;
            let hexagon = cbm_core::inscribe_hexagon(&poly, tol)?;
            let residuals = HexagonResiduals::measure(&poly, &hexagon);
            let lemma = check_centroid_lemma(&poly, &hexagon);
            emit_json(&InscribeOutput { hexagon, residuals, lemma })?;
            if !lemma.holds {
                return Err(Failure::Unverified("centroid lies outside the 4/21 hexagon".into()));
            }
        }
        Command::Witness { c, d, tighten, trace, tol } => {
            let (c, d) = (io::read_polygon(&c)?, io::read_polygon(&d)?);
            match construct_with(&c, &d, &WitnessOptions { tol, tighten }) {
                Ok((witness, t)) => {
                    if let Some(path) = &trace {
                        io::write_json(path, &t)?;
                    }
                    emit_json(&witness)?;
                    if witness.lambda > BOUND + 1e-9 {
                        return Err(Failure::Unverified(format!("ratio {} exceeds 69/17", witness.lambda)));
                    }
                }
                Err(Error::ProofViolation { detail, trace: t }) => {
                    if let Some(path) = &trace {
                        io::write_json(path, &t)?;
                    }
                    return Err(Failure::Verification(Error::ProofViolation { detail, trace: t }));
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Certify { grid, samples, refine_iters, seed } => {
            let rectangle = analyze_g_on_q(grid)?;
            let domain = analyze_f_on_domain(samples, refine_iters, seed)?;
            let certified = rectangle.certified && domain.certified;
            emit_json(&CertifyOutput { rectangle, domain, certified })?;
            if !certified {
                return Err(Failure::Unverified("the maximum 69/17 was not certified".into()));
            }
        }
        Command::Estimate { c, d, mode, budget } => {
            let (c, d) = (io::read_polygon(&c)?, io::read_polygon(&d)?);
            let budget = match budget {
                BudgetArg::Low => Budget::Low,
                BudgetArg::Default => Budget::Default,
                BudgetArg::High => Budget::High,
            };
            let result = match mode {
                ModeArg::Cen => estimate_cen(&c, &d, &EstimatorConfig::new(budget, Mode::Cen))?,
                ModeArg::Extended => estimate_extended(&c, &d, &EstimatorConfig::new(budget, Mode::Extended))?,
            };
            emit_json(&result)?;
            if !result.verified {
                return Err(Failure::Unverified("estimate did not pass verification".into()));
            }
        }
        Command::Render { trace, pentagon_triangle, out } => {
            let svg = if pentagon_triangle {
                render::render_pentagon_triangle(&pentagon_triangle_witness()?)
            } else {
                let path = trace.expect("clap requires --trace without --pentagon-triangle");
                render::render_trace(&io::read_json(&path)?)
            };
            emit(&svg, out.as_deref())?;
        }
        Command::Gen { n, seed } => emit_json(&cbm_core::random_convex_polygon(n, seed)?)?,
    }
    Ok(())
}

fn report_error(kind: &str, message: &str) {
    let body = serde_json::json!({ "error": kind, "message": message });
    eprintln!("{body}");
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var("CBM_THREADS") else { return Ok(()) };
    let n: usize = value.trim().parse().map_err(|_| format!("CBM_THREADS must be a positive integer, got {value:?}"))?;
    if n == 0 {
        return Err("CBM_THREADS must be positive".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            report_error("usage", e.to_string().trim());
            return ExitCode::from(1);
        }
    };
    if let Err(msg) = configure_threads() {
        report_error("invalid_input", &msg);
        return ExitCode::from(1);
    }
    if let Err(e) = FundamentalDomains::validate() {
        report_error(e.kind(), &e.to_string());
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            report_error(e.kind(), &e.to_string());
            ExitCode::from(1)
        }
        Err(Failure::Verification(e)) => {
            report_error(e.kind(), &e.to_string());
            ExitCode::from(2)
        }
        Err(Failure::Unverified(msg)) => {
            report_error("verification", &msg);
            ExitCode::from(2)
        }
    }
}

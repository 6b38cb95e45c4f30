use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gsic_core::constructions::{fiducial_operator_from_vector, is_prime};
use gsic_core::io::analyze_file;
use gsic_core::random::{random_density_matrix, random_pure_state};
use gsic_core::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

mod exit;

use exit::{CliError, CliResult};

#[derive(Parser)]
#[command(
    name = "gsic",
    version,
    about = "Complete orthogonal bases and general SIC POVMs"
)]
struct Cli {
    /// Numerical tolerance for validation
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    C1,
    C2,
    C3,
    Covariant,
}

#[derive(Clone, Copy, ValueEnum)]
enum StateChoice {
    PureRandom,
    MixedRandom,
    MaximallyMixed,
    File,
}

#[derive(Subcommand)]
enum Command {
    /// Build a COB and write it as a cob file
    Generate {
        #[arg(long, value_enum)]
        construction: Construction,
        #[arg(long)]
        dim: usize,
        /// Seed for the random orthogonal matrix of construction c1
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Map a COB to its GSIC POVM
    Gsic {
        #[arg(long = "in")]
        input: PathBuf,
        /// Mixing parameter, or "canonical" for lambda*
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover the COB and mixing parameter of a GSIC POVM
    CobFromGsic {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the analysis record of a cob, gsic, or povm file
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Simulate linear tomography with the POVM in a file
    Tomo {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "pure-random")]
        state: StateChoice,
        /// File holding the state as its first operator, for --state file
        #[arg(long)]
        state_file: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        copies: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// CSV of lambda* for construction 2 against 1/sqrt(d+1)
    Figure1 {
        #[arg(long, default_value_t = 2)]
        d_min: usize,
        #[arg(long, default_value_t = 10)]
        d_max: usize,
    },
    /// Check a file against the requirements of its kind
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

fn read_file(path: &Path) -> CliResult<OperatorSetFile> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))?;
    OperatorSetFile::from_json(&text).map_err(|e| match e {
        Error::Parse { .. } => CliError::parse(format!("{}: {e}", path.display())),
        other => CliError::parse(format!("{}: malformed file: {other}", path.display())),
    })
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n"))
            .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display()))),
        None => print_line(text),
    }
}

fn print_line(text: &str) -> CliResult<()> {
    let mut stdout = io::stdout().lock();
    writeln!(stdout, "{text}").map_err(|e| CliError::io(format!("stdout: {e}")))
}

fn json_line<T: Serialize>(value: &T) -> CliResult<String> {
    serde_json::to_string(value).map_err(|e| CliError::semantic(e.to_string()))
}

fn file_json(file: &OperatorSetFile) -> CliResult<String> {
    file.to_json().map_err(CliError::from)
}

/// `x` with 17 significant digits in positional notation.
fn sig17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (16 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

fn generate(
    construction: Construction,
    d: usize,
    seed: Option<u64>,
    tol: f64,
) -> CliResult<(Cob, &'static str)> {
    if d < 2 {
        return Err(CliError::usage(format!("dimension must be >= 2, got {d}")));
    }
    let cob = match construction {
        Construction::C1 => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(0));
            let o = OrthogonalMatrix::random_fixed_row(d * d, &mut rng)?;
            (construction1(&gell_mann_basis(d)?, &o)?, "c1")
        }
        Construction::C2 => (construction2(&gell_mann_basis(d)?)?, "c2"),
        Construction::C3 => {
            if !is_prime(d) {
                return Err(CliError::usage(format!(
                    "construction c3 needs a prime dimension, got {d}"
                )));
            }
            (construction3(&mub_prime(d)?, &mus_prime(d)?)?, "c3")
        }
        Construction::Covariant => {
            let phi = known_sic_fiducial(d).ok_or_else(|| {
                CliError::usage(format!(
                    "no built-in SIC fiducial for d = {d} (available: 2, 3)"
                ))
            })?;
            let wh = weyl_heisenberg(d)?;
            (
                covariant_cob(&fiducial_operator_from_vector(&phi), &wh, tol)?,
                "covariant",
            )
        }
    };
    Ok(cob)
}

fn tomo_state(
    choice: StateChoice,
    state_file: Option<&Path>,
    d: usize,
    seed: u64,
) -> CliResult<HermitianOperator> {
    // state draws use their own stream so they never overlap the trial streams
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::MAX);
    Ok(match choice {
        StateChoice::PureRandom => random_pure_state(d, &mut rng),
        StateChoice::MixedRandom => random_density_matrix(d, &mut rng),
        StateChoice::MaximallyMixed => HermitianOperator::identity(d).scale(1.0 / d as f64),
        StateChoice::File => {
            let path = state_file
                .ok_or_else(|| CliError::usage("--state file needs --state-file <path>"))?;
            let file = read_file(path)?;
            let ops = file.hermitian_operators()?;
            let rho = ops.into_iter().next().expect("validated file is nonempty");
            if rho.dim() != d {
                return Err(CliError::usage(format!(
                    "state has dimension {}, POVM has dimension {d}",
                    rho.dim()
                )));
            }
            rho
        }
    })
}

#[derive(Serialize)]
struct ValidationOutput {
    kind: SetKind,
    dim: usize,
    valid: bool,
    detail: String,
}

fn validate(file: &OperatorSetFile, tol: f64) -> ValidationOutput {
    let verdict: Result<String> = match file.kind {
        SetKind::Cob => file.to_cob(tol).map(|_| "complete orthogonal basis".into()),
        SetKind::Gsic | SetKind::Povm => file.hermitian_operators().and_then(|ops| {
            let r = validate_povm(&ops, tol)?;
            let ok = r.is_povm && (file.kind == SetKind::Povm || r.is_gsic);
            if ok {
                Ok(r.summary())
            } else {
                Err(Error::ValidationFailure(r.summary()))
            }
        }),
        SetKind::Basis => file
            .hermitian_operators()
            .and_then(OperatorBasis::orthonormal)
            .map(|_| "orthonormal operator basis".into()),
        SetKind::Mub => file
            .to_mub()
            .map(|_| "complete set of mutually unbiased bases".into()),
        SetKind::UnitarySet => {
            let d = file.dim;
            let worst = file
                .matrices()
                .iter()
                .map(|u| (u.adjoint() * u - CMatrix::identity(d, d)).camax())
                .fold(0.0, f64::max);
            if worst <= tol {
                Ok(format!("all unitary (residual {worst:e})"))
            } else {
                Err(Error::ValidationFailure(format!(
                    "unitarity residual {worst:e}"
                )))
            }
        }
    };
    let (valid, detail) = match verdict {
        Ok(s) => (true, s),
        Err(e) => (false, e.to_string()),
    };
    ValidationOutput {
        kind: file.kind,
        dim: file.dim,
        valid,
        detail,
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let tol = cli.tol;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::usage(format!(
            "--tol must be positive, got {tol}"
        )));
    }
    match cli.command {
        Command::Generate {
            construction,
            dim,
            seed,
            out,
        } => {
            let (cob, name) = generate(construction, dim, seed, tol)?;
            let mut file = OperatorSetFile::from_cob(&cob)?
                .with_metadata("construction", name)
                .with_metadata("basis", "gell_mann")
                .with_metadata("tol", tol);
            if let (Construction::C1, Some(s)) = (construction, seed) {
                file = file.with_metadata("seed", s);
            }
            if matches!(construction, Construction::C3) {
                file.metadata.insert("basis".into(), "mub".into());
            }
            if matches!(construction, Construction::Covariant) {
                file.metadata
                    .insert("basis".into(), "weyl_heisenberg".into());
            }
            let record = gsic_core::io::analyze_cob(&cob)?;
            emit(out.as_deref(), &file_json(&file)?)?;
            let line = json_line(&record)?;
            if out.is_some() {
                print_line(&line)
            } else {
                eprintln!("{line}");
                Ok(())
            }
        }
        Command::Gsic { input, lambda, out } => {
            let file = read_file(&input)?;
            if file.kind != SetKind::Cob {
                return Err(CliError::usage(format!(
                    "expected a cob file, got {:?}",
                    file.kind
                )));
            }
            let cob = file.to_cob(tol)?;
            let lambda_star = spectral_profile(&cob).lambda_star;
            let lambda = if lambda == "canonical" {
                lambda_star
            } else {
                lambda.parse::<f64>().map_err(|_| {
                    CliError::usage(format!(
                        "--lambda must be a number or \"canonical\", got {lambda:?}"
                    ))
                })?
            };
            let povm = cob_to_gsic(&cob, lambda)?;
            let mut outfile =
                OperatorSetFile::from_gsic(&povm)?.with_metadata("lambda_star", lambda_star);
            if let Some(name) = file.metadata.get("construction") {
                outfile.metadata.insert("construction".into(), name.clone());
            }
            emit(out.as_deref(), &file_json(&outfile)?)
        }
        Command::CobFromGsic { input, out } => {
            let file = read_file(&input)?;
            let povm = file.to_gsic(tol)?;
            let (cob, lambda) = gsic_to_cob(&povm)?;
            let outfile =
                OperatorSetFile::from_cob(&cob)?.with_metadata("recovered_lambda", lambda);
            emit(out.as_deref(), &file_json(&outfile)?)
        }
        Command::Analyze { input } => {
            let file = read_file(&input)?;
            let record = analyze_file(&file, tol)?;
            let residual = record.consistency_residual();
            if residual > 1e-8 {
                log::warn!("analysis record fields disagree by {residual:e}");
            }
            print_line(&json_line(&record)?)
        }
        Command::Tomo {
            input,
            state,
            state_file,
            copies,
            trials,
            seed,
        } => {
            if copies == 0 || trials == 0 {
                return Err(CliError::usage("--copies and --trials must be >= 1"));
            }
            let file = read_file(&input)?;
            if !matches!(file.kind, SetKind::Gsic | SetKind::Povm) {
                return Err(CliError::usage(format!(
                    "expected a gsic or povm file, got {:?}",
                    file.kind
                )));
            }
            let povm = file.hermitian_operators()?;
            let rho = tomo_state(state, state_file.as_deref(), file.dim, seed)?;
            let dual = canonical_dual(&povm)?;
            let report = simulate_tomography(&povm, &dual, &rho, copies, trials, seed)?;
            print_line(&json_line(&report)?)
        }
        Command::Figure1 { d_min, d_max } => {
            if !(2 <= d_min && d_min <= d_max && d_max <= 12) {
                return Err(CliError::usage(format!(
                    "need 2 <= d-min <= d-max <= 12, got {d_min}..{d_max}"
                )));
            }
            let mut text = String::from("d,lambda_star_c2,optimal");
            for d in d_min..=d_max {
                let ls = spectral_profile(&construction2(&gell_mann_basis(d)?)?).lambda_star;
                text.push_str(&format!("\n{d},{},{}", sig17(ls), sig17(optimal_lambda(d))));
            }
            print_line(&text)
        }
        Command::Validate { input } => {
            let file = read_file(&input)?;
            let v = validate(&file, tol);
            print_line(&json_line(&v)?)?;
            if v.valid {
                Ok(())
            } else {
                Err(CliError::semantic(format!(
                    "invalid {:?} file: {}",
                    v.kind, v.detail
                )))
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

//! `bellscope` command-line interface.
//!
//! Every subcommand prints one JSON run report to stdout. Exit codes:
//! 0 success, 1 usage/validation error, 2 scientific falsification (a regime
//! ceiling or the classical bound was exceeded).

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use bellscope::bounds::CEILING_SLACK;
use bellscope::lhv::{DEFAULT_NODES, DEFAULT_SAMPLES};
use bellscope::report::{
    AuditPayload, BoolePayload, BoundsPayload, LhvPayload, OraclePayload, QuantumPayload,
    RunReport, ScanPayload, WitnessPayload,
};
use bellscope::{
    angle_scan, bell_difference_decomposition, boole, canonical_photon_settings,
    canonical_singlet_settings, coincidence_table, interchange_gap, lhv_chsh_value, optimize_bound,
    quantum_chsh_value, regime_ceiling, verify_ceiling, zero_expression_audit, BoundTarget,
    CommutationRegime, EstimationMethod, HiddenVariableModel, MeasurementSettings, OptimizerConfig,
    ResponseTable, ScanDescriptor, SpectrumClass, StateKind, TwoParticleState,
};

const EXIT_OK: i32 = 0;
const EXIT_USAGE: i32 = 1;
const EXIT_FALSIFIED: i32 = 2;

#[derive(Parser)]
#[command(
    name = "bellscope",
    version,
    about = "Bell/CHSH numerical laboratory: regime bounds, hidden-variable simulation, quantum pairs, Boole bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Master seed for every stochastic component (echoed in the report).
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Report format (JSON only).
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,

    /// Directory for CSV side files (scan tables, witness exports).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    /// Interpret --angles values as degrees instead of radians.
    #[arg(long, global = true)]
    degrees: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RegimeArg {
    Classical,
    Tensor,
    Global,
}

impl From<RegimeArg> for CommutationRegime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::Classical => CommutationRegime::Classical,
            RegimeArg::Tensor => CommutationRegime::LocalTensor,
            RegimeArg::Global => CommutationRegime::Global,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClassArg {
    Dichotomic,
    Contraction,
}

impl From<ClassArg> for SpectrumClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Dichotomic => SpectrumClass::Dichotomic,
            ClassArg::Contraction => SpectrumClass::Contraction,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Quadrature,
    Montecarlo,
}

#[derive(Subcommand)]
enum Command {
    /// Maximize the Bell value within a commutation regime.
    Bounds(BoundsArgs),
    /// Evaluate a local-hidden-variable model against the Bell combination.
    Lhv(LhvArgs),
    /// Exact quantum side: CHSH values, coincidence tables, angle scans.
    Quantum(QuantumArgs),
    /// Boole bounds for union/intersection probabilities, with witnesses.
    Boole(BooleArgs),
    /// Derivation audits of a hidden-variable model (zero expression,
    /// interchange gap, difference decomposition).
    Audit(AuditArgs),
}

#[derive(Args)]
struct BoundsArgs {
    /// Commutation regime to optimize in.
    #[arg(long, value_enum)]
    regime: RegimeArg,
    /// Per-factor dimension (tensor regime) or total dimension (otherwise).
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 64)]
    restarts: usize,
    /// Ascent iterations per restart.
    #[arg(long = "iters", default_value_t = 2000)]
    max_iters: usize,
    #[arg(long, default_value_t = 0.1)]
    initial_step: f64,
    #[arg(long, default_value_t = 0.7)]
    step_decay: f64,
    #[arg(long, default_value_t = 1e-5)]
    fd_epsilon: f64,
    #[arg(long = "observable-class", value_enum, default_value_t = ClassArg::Dichotomic)]
    observable_class: ClassArg,
}

#[derive(Args)]
struct LhvArgs {
    /// Built-in model name (sign-cos, constant, smooth-cos).
    #[arg(long, conflicts_with = "model_file")]
    model: Option<String>,
    /// CSV response table(s): one path for both arms, or `a.csv,b.csv`.
    #[arg(long)]
    model_file: Option<String>,
    /// Four comma-separated orientations alpha1,alpha2,beta1,beta2.
    #[arg(long, allow_hyphen_values = true)]
    angles: String,
    #[arg(long, value_enum, default_value_t = MethodArg::Quadrature)]
    method: MethodArg,
    /// Quadrature node count.
    #[arg(long, default_value_t = DEFAULT_NODES)]
    nodes: usize,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Include the derivation-audit block in the report.
    #[arg(long)]
    audit: bool,
}

#[derive(Args)]
struct QuantumArgs {
    /// Two-particle state (singlet, photon).
    #[arg(long)]
    state: String,
    /// Four comma-separated orientations alpha1,alpha2,beta1,beta2; defaults
    /// to the canonical maximal-violation pattern of the chosen state.
    #[arg(long, allow_hyphen_values = true)]
    angles: Option<String>,
    /// Offset scan start:stop:step applied to the b-side orientations.
    #[arg(long, allow_hyphen_values = true)]
    scan: Option<String>,
    /// Include coincidence probability tables.
    #[arg(long)]
    table: bool,
}

#[derive(Args)]
struct BooleArgs {
    /// Comma-separated event probabilities in [0, 1].
    #[arg(long)]
    probs: String,
    /// Corroborate the bounds by exhaustive grid search (n <= 3).
    #[arg(long)]
    oracle: bool,
    /// Atom-weight grid resolution for the oracle.
    #[arg(long, default_value_t = 10)]
    grid_resolution: usize,
}

#[derive(Args)]
struct AuditArgs {
    /// Built-in model name (sign-cos, constant, smooth-cos).
    #[arg(long, conflicts_with = "model_file")]
    model: Option<String>,
    /// CSV response table(s): one path for both arms, or `a.csv,b.csv`.
    #[arg(long)]
    model_file: Option<String>,
    /// Four comma-separated orientations alpha1,alpha2,beta1,beta2.
    #[arg(long, allow_hyphen_values = true)]
    angles: String,
    #[arg(long, default_value_t = DEFAULT_NODES)]
    nodes: usize,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> bellscope::Result<i32> {
    let started = Instant::now();
    match &cli.command {
        Command::Bounds(args) => cmd_bounds(&cli, args, started),
        Command::Lhv(args) => cmd_lhv(&cli, args, started),
        Command::Quantum(args) => cmd_quantum(&cli, args, started),
        Command::Boole(args) => cmd_boole(&cli, args, started),
        Command::Audit(args) => cmd_audit(&cli, args, started),
    }
}

fn parse_comma_floats(text: &str, what: &str) -> bellscope::Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim().parse::<f64>().map_err(|_| {
                bellscope::Error::InvalidConfig(format!("cannot parse {what} value '{s}'"))
            })
        })
        .collect()
}

fn parse_settings(cli: &Cli, text: &str) -> bellscope::Result<MeasurementSettings> {
    let vals = parse_comma_floats(text, "angle")?;
    if vals.len() != 4 {
        return Err(bellscope::Error::InvalidConfig(format!(
            "--angles needs exactly four values, got {}",
            vals.len()
        )));
    }
    let f = if cli.degrees {
        std::f64::consts::PI / 180.0
    } else {
        1.0
    };
    MeasurementSettings::new(vals[0] * f, vals[1] * f, vals[2] * f, vals[3] * f)
}

fn parse_scan(text: &str) -> bellscope::Result<ScanDescriptor> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(bellscope::Error::InvalidConfig(
            "--scan expects start:stop:step".into(),
        ));
    }
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| bellscope::Error::InvalidConfig(format!("cannot parse scan value '{s}'")))
    };
    Ok(ScanDescriptor {
        start: parse(parts[0])?,
        stop: parse(parts[1])?,
        step: parse(parts[2])?,
    })
}

fn load_model(
    model: &Option<String>,
    model_file: &Option<String>,
) -> bellscope::Result<HiddenVariableModel> {
    match (model, model_file) {
        (Some(name), None) => HiddenVariableModel::by_name(name),
        (None, Some(files)) => {
            let paths: Vec<&str> = files.split(',').collect();
            match paths.as_slice() {
                [one] => {
                    let table = ResponseTable::from_csv(Path::new(one.trim()))?;
                    let name = Path::new(one.trim())
                        .file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_else(|| "table".into());
                    HiddenVariableModel::from_tables(name, table.clone(), table)
                }
                [a, b] => {
                    let ta = ResponseTable::from_csv(Path::new(a.trim()))?;
                    let tb = ResponseTable::from_csv(Path::new(b.trim()))?;
                    HiddenVariableModel::from_tables("table-pair", ta, tb)
                }
                _ => Err(bellscope::Error::InvalidConfig(
                    "--model-file takes one or two comma-separated paths".into(),
                )),
            }
        }
        (None, None) => Err(bellscope::Error::InvalidConfig(
            "one of --model or --model-file is required".into(),
        )),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    }
}

fn ensure_out_dir(dir: &Path) -> bellscope::Result<()> {
    std::fs::create_dir_all(dir)?;
    Ok(())
}

fn emit<T: serde::Serialize>(report: &RunReport<T>) {
    println!("{}", report.to_json());
}

fn cmd_bounds(cli: &Cli, args: &BoundsArgs, started: Instant) -> bellscope::Result<i32> {
    let regime: CommutationRegime = args.regime.into();
    let cfg = OptimizerConfig {
        dim: args.dim,
        restarts: args.restarts,
        max_iters: args.max_iters,
        initial_step: args.initial_step,
        step_decay: args.step_decay,
        seed: cli.seed,
        spectrum_class: args.observable_class.into(),
        fd_epsilon: args.fd_epsilon,
    };
    let result = optimize_bound(regime, &cfg)?;
    let respected = verify_ceiling(&result);
    let payload = BoundsPayload {
        regime,
        spectrum_class: cfg.spectrum_class,
        dim: cfg.dim,
        best_value: result.best_value,
        ceiling: regime_ceiling(regime),
        ceiling_respected: respected,
        per_restart_values: result.per_restart_values.clone(),
        iterations: result.iterations,
        max_bstarb: result.max_bstarb,
    };
    let config_echo = serde_json::to_value(&cfg).expect("config serializes");
    let report = RunReport::new(
        "bounds",
        config_echo,
        cli.seed,
        payload,
        started.elapsed().as_millis(),
    );
    emit(&report);
    if respected {
        Ok(EXIT_OK)
    } else {
        eprintln!(
            "falsification: best value {} exceeds the {} ceiling {} + {CEILING_SLACK:.0e}",
            result.best_value,
            regime.name(),
            regime_ceiling(regime)
        );
        Ok(EXIT_FALSIFIED)
    }
}

fn audit_block(
    model: &HiddenVariableModel,
    settings: &MeasurementSettings,
    nodes: usize,
) -> bellscope::Result<AuditPayload> {
    let residue = zero_expression_audit(model, settings, nodes)?;
    let gap = interchange_gap(
        model,
        settings.alpha1,
        settings.beta1,
        settings.beta2,
        nodes,
    )?;
    let (lhs, rhs) = bell_difference_decomposition(
        model,
        settings.alpha1,
        settings.beta1,
        settings.beta2,
        nodes,
    )?;
    Ok(AuditPayload {
        zero_expression_residue: residue,
        interchange_gap: gap,
        difference_lhs: lhs,
        difference_rhs: rhs,
        difference_mismatch: (lhs - rhs).abs(),
    })
}

fn cmd_lhv(cli: &Cli, args: &LhvArgs, started: Instant) -> bellscope::Result<i32> {
    let model = load_model(&args.model, &args.model_file)?;
    let settings = parse_settings(cli, &args.angles)?;
    let (method, budget) = match args.method {
        MethodArg::Quadrature => (EstimationMethod::Quadrature, args.nodes),
        MethodArg::Montecarlo => (
            EstimationMethod::MonteCarlo { seed: cli.seed },
            args.samples,
        ),
    };
    let estimate = lhv_chsh_value(&model, &settings, method, budget)?;
    let audit = if args.audit {
        Some(audit_block(&model, &settings, args.nodes)?)
    } else {
        None
    };

    // The classical bound with method-appropriate slack; exceeding it is a
    // scientific falsification of the model/estimator pair.
    let margin = match method {
        EstimationMethod::Quadrature => 1e-6,
        EstimationMethod::MonteCarlo { .. } => 5.0 * estimate.aggregate_stderr + 1e-6,
    };
    let within_bound = estimate.value <= 2.0 + margin;

    let chsh = estimate.value;
    let payload = LhvPayload::from_estimate(model.name(), settings, estimate, audit);
    let config_echo = serde_json::json!({
        "model": model.name(),
        "settings": settings,
        "method": match args.method {
            MethodArg::Quadrature => "quadrature",
            MethodArg::Montecarlo => "montecarlo",
        },
        "budget": budget,
        "audit": args.audit,
        "degrees": cli.degrees,
    });
    let report = RunReport::new(
        "lhv",
        config_echo,
        cli.seed,
        payload,
        started.elapsed().as_millis(),
    );
    emit(&report);
    if within_bound {
        Ok(EXIT_OK)
    } else {
        eprintln!("falsification: hidden-variable CHSH value {chsh} exceeds the classical bound 2");
        Ok(EXIT_FALSIFIED)
    }
}

fn cmd_quantum(cli: &Cli, args: &QuantumArgs, started: Instant) -> bellscope::Result<i32> {
    let kind = StateKind::by_name(&args.state)?;
    let state = TwoParticleState::new(kind);
    let settings = match &args.angles {
        Some(text) => parse_settings(cli, text)?,
        None => match kind {
            StateKind::SpinSinglet => canonical_singlet_settings(),
            StateKind::PhotonCascade => canonical_photon_settings(),
        },
    };

    let chsh = quantum_chsh_value(&state, &settings)?;
    let coincidences = if args.table {
        Some(coincidence_table(&state, &settings)?)
    } else {
        None
    };

    let scan = match &args.scan {
        Some(text) => {
            let descriptor = parse_scan(text)?;
            let points = angle_scan(&state, &settings, &descriptor)?;
            let (best_idx, max_chsh) = points
                .iter()
                .enumerate()
                .map(|(i, p)| (i, p.chsh_value))
                .fold((0, f64::NEG_INFINITY), |acc, cur| {
                    if cur.1 > acc.1 {
                        cur
                    } else {
                        acc
                    }
                });
            let csv_path = match &cli.out_dir {
                Some(dir) => {
                    ensure_out_dir(dir)?;
                    let path = dir.join(format!("scan_{}.csv", kind.name()));
                    let mut csv = String::from("offset_radians,chsh_value\n");
                    for p in &points {
                        csv.push_str(&format!("{},{}\n", p.offset_radians, p.chsh_value));
                    }
                    std::fs::write(&path, csv)?;
                    Some(path.display().to_string())
                }
                None => None,
            };
            Some(ScanPayload {
                offset_at_max: points[best_idx].offset_radians,
                max_chsh,
                points,
                csv_path,
            })
        }
        None => None,
    };

    let payload = QuantumPayload {
        state: kind,
        settings,
        chsh: Some(chsh),
        coincidences,
        scan,
    };
    let config_echo = serde_json::json!({
        "state": kind.name(),
        "settings": settings,
        "scan": args.scan,
        "table": args.table,
        "degrees": cli.degrees,
    });
    let report = RunReport::new(
        "quantum",
        config_echo,
        cli.seed,
        payload,
        started.elapsed().as_millis(),
    );
    emit(&report);
    Ok(EXIT_OK)
}

fn cmd_boole(cli: &Cli, args: &BooleArgs, started: Instant) -> bellscope::Result<i32> {
    let probs = parse_comma_floats(&args.probs, "probability")?;
    let union = boole::union_bounds(&probs)?;
    let intersection = boole::intersection_bounds(&probs)?;

    let mut witnesses = Vec::new();
    if probs.len() <= boole::JOINT_EVENT_CAP {
        for target in BoundTarget::ALL {
            let atoms = boole::witness(&probs, target)?;
            let value = match target {
                BoundTarget::UnionLo | BoundTarget::UnionHi => boole::union_probability(&atoms),
                BoundTarget::InterLo | BoundTarget::InterHi => {
                    boole::intersection_probability(&atoms)
                }
            };
            let csv_path = match &cli.out_dir {
                Some(dir) => {
                    ensure_out_dir(dir)?;
                    let path = dir.join(format!("witness_{}.csv", target.name()));
                    std::fs::write(&path, boole::joint_to_csv(&atoms))?;
                    Some(path.display().to_string())
                }
                None => None,
            };
            witnesses.push(WitnessPayload {
                target: target.name().to_string(),
                value,
                atoms: if probs.len() <= 8 { Some(atoms) } else { None },
                csv_path,
            });
        }
    }

    let oracle = if args.oracle {
        let extremes = boole::oracle_extremes(&probs, args.grid_resolution)?;
        Some(OraclePayload {
            grid_resolution: args.grid_resolution,
            union: extremes.union,
            intersection: extremes.intersection,
        })
    } else {
        None
    };

    let payload = BoolePayload {
        probs: probs.clone(),
        union,
        intersection,
        witnesses,
        oracle,
    };
    let config_echo = serde_json::json!({
        "probs": probs,
        "oracle": args.oracle,
        "gridResolution": args.grid_resolution,
    });
    let report = RunReport::new(
        "boole",
        config_echo,
        cli.seed,
        payload,
        started.elapsed().as_millis(),
    );
    emit(&report);
    Ok(EXIT_OK)
}

fn cmd_audit(cli: &Cli, args: &AuditArgs, started: Instant) -> bellscope::Result<i32> {
    let model = load_model(&args.model, &args.model_file)?;
    let settings = parse_settings(cli, &args.angles)?;
    let payload = audit_block(&model, &settings, args.nodes)?;
    let config_echo = serde_json::json!({
        "model": model.name(),
        "settings": settings,
        "nodes": args.nodes,
        "degrees": cli.degrees,
    });
    let report = RunReport::new(
        "audit",
        config_echo,
        cli.seed,
        payload,
        started.elapsed().as_millis(),
    );
    emit(&report);
    Ok(EXIT_OK)
}

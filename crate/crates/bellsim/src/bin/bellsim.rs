//! Thin command-line surface over the library. Every subcommand is a few
//! calls into the public API — the examples/ directory shows the same calls
//! as library code. All output is deterministic given the flags; seeds are
//! always explicit (config file or `BELLSIM_SEED`) and echoed back.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bellsim::analysis::{
    estimate_correlations, evaluate_report, AnalysisError, ReportMetadata,
};
use bellsim::born::{chsh_theory, correlation_theory, AngleSettings};
use bellsim::experiment::{read_trials, run_experiment, write_trials, ExperimentConfig};
use bellsim::groups::{are_related, classify_pairs, is_permissible, parse_model, Model};
use bellsim::lhv::{chsh_of_strategy, enumerate_strategy_bound, DeterministicStrategy};
use bellsim::linalg::{frobenius_distance, hermitian_eigen};
use bellsim::spin::{
    operator_from_coherent, pauli_z, resolution_of_identity_defect, singlet_state,
    spin_dot_operator,
};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "bellsim", version, about = "CHSH laboratory: simulate, analyze, and inspect")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Kv,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a trials CSV from a config file.
    Simulate {
        /// Config file (key = value lines; see the README for keys).
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Analyze a trials CSV: conditioned correlations, S, no-signalling.
    Analyze {
        /// Trials CSV produced by `simulate` (or by hand, same header).
        #[arg(long)]
        trials: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Closed-form CHSH value at four angles, in degrees.
    Theory {
        a: f64,
        a_prime: f64,
        b: f64,
        b_prime: f64,
    },
    /// Enumerate all 16 deterministic strategies and the classical bound.
    LhvBound,
    /// Spectrum of the two-particle spin-dot operator and singlet overlap.
    Spectrum,
    /// Sphere-grid coherent-state checks at a given grid size.
    Coherent {
        /// Number of grid directions (>= 100; >= 10000 unlocks the
        /// operator reconstruction).
        #[arg(long)]
        grid: usize,
    },
    /// Classify the variables of a model file as related or essentially
    /// different.
    Relate {
        /// Model file (points / gen / var lines; see the README).
        #[arg(long)]
        model: PathBuf,
        /// Search witnesses only among the model's group elements instead
        /// of all bijections.
        #[arg(long)]
        within_group: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<(), String> {
    match command {
        Command::Simulate { config, out } => cmd_simulate(&config, &out),
        Command::Analyze { trials, format } => cmd_analyze(&trials, format),
        Command::Theory {
            a,
            a_prime,
            b,
            b_prime,
        } => cmd_theory(a, a_prime, b, b_prime),
        Command::LhvBound => cmd_lhv_bound(),
        Command::Spectrum => cmd_spectrum(),
        Command::Coherent { grid } => cmd_coherent(grid),
        Command::Relate { model, within_group } => cmd_relate(&model, within_group),
    }
}

fn cmd_simulate(config_path: &Path, out_path: &Path) -> Result<(), String> {
    let text = fs::read_to_string(config_path)
        .map_err(|e| format!("{}: {e}", config_path.display()))?;
    let mut cfg = ExperimentConfig::parse(&text)
        .map_err(|e| format!("{}: {e}", config_path.display()))?;

    let mut seed_origin = "config";
    if let Ok(raw) = std::env::var("BELLSIM_SEED") {
        let seed: u64 = raw
            .parse()
            .map_err(|_| format!("BELLSIM_SEED must be an unsigned integer, got `{raw}`"))?;
        cfg.seed = seed;
        seed_origin = "BELLSIM_SEED";
    }

    println!("bellsim {VERSION} simulate");
    println!(
        "resolved config (hash {:#018x}, seed {} from {seed_origin}):",
        cfg.config_hash(),
        cfg.seed
    );
    for line in cfg.render().lines() {
        println!("  {line}");
    }

    let records = run_experiment(&cfg).map_err(|e| e.to_string())?;
    let bytes = write_trials(&records, out_path).map_err(|e| e.to_string())?;
    let estimates = estimate_correlations(&records);
    let cells: Vec<String> = estimates
        .iter()
        .enumerate()
        .map(|(i, est)| {
            format!(
                "l{} ({},{}) = {}",
                i + 1,
                est.cell.0.label(),
                est.cell.1.label(),
                est.count
            )
        })
        .collect();
    println!("wrote {} trials ({} bytes) to {}", records.len(), bytes, out_path.display());
    println!("cells: {}", cells.join(", "));
    Ok(())
}

fn cmd_analyze(trials_path: &Path, format: Format) -> Result<(), String> {
    let records =
        read_trials(trials_path).map_err(|e| format!("{}: {e}", trials_path.display()))?;
    let metadata = ReportMetadata::from_trial_count(records.len() as u64);

    match evaluate_report(&records, metadata) {
        Ok(report) => match format {
            Format::Text => {
                println!("bellsim {VERSION} analyze");
                print!("{}", report.to_text());
            }
            Format::Kv => {
                println!("tool = bellsim {VERSION}");
                print!("{}", report.to_kv());
            }
        },
        // A dataset can be parseable yet leave a setting cell empty; report
        // everything that is defined and say plainly why S is not.
        Err(AnalysisError::UndefinedCell { alice, bob }) => {
            let estimates = estimate_correlations(&records);
            match format {
                Format::Text => {
                    println!("bellsim {VERSION} analyze");
                    println!("  trials: {}", records.len());
                    println!();
                    println!("  cell       count        mean");
                    for (i, est) in estimates.iter().enumerate() {
                        let label = format!(
                            "l{} ({:<2},{:<2})",
                            i + 1,
                            est.cell.0.label(),
                            est.cell.1.label()
                        );
                        match est.mean() {
                            Some(mean) => {
                                println!("  {label}  {:>8}  {:>+10.6}", est.count, mean)
                            }
                            None => println!("  {label}  {:>8}   (no trials: undefined)", est.count),
                        }
                    }
                    println!();
                    println!(
                        "  S is undefined: cell ({alice}, {bob}) holds no trials, so the \
                         four-cell combination cannot be formed."
                    );
                }
                Format::Kv => {
                    println!("tool = bellsim {VERSION}");
                    for (i, est) in estimates.iter().enumerate() {
                        let k = i + 1;
                        println!("l{k}.count = {}", est.count);
                        if let Some(mean) = est.mean() {
                            println!("l{k}.mean = {mean}");
                        }
                        if let Some(se) = est.standard_error() {
                            println!("l{k}.se = {se}");
                        }
                    }
                    println!("S.undefined_cell = {alice},{bob}");
                    println!("meta.trials = {}", records.len());
                }
            }
        }
    }
    Ok(())
}

fn cmd_theory(a: f64, a_prime: f64, b: f64, b_prime: f64) -> Result<(), String> {
    for v in [a, a_prime, b, b_prime] {
        if !v.is_finite() {
            return Err("angles must be finite degrees".to_string());
        }
    }
    let settings = AngleSettings::from_degrees(a, a_prime, b, b_prime);
    println!("bellsim {VERSION} theory");
    println!("settings [deg]: a={a} a'={a_prime} b={b} b'={b_prime}");
    println!("convention: E(x, y) = -cos(x - y); equal settings give E = -1");
    let cells = [
        ("E(a , b )", settings.a() - settings.b()),
        ("E(a', b )", settings.a_prime() - settings.b()),
        ("E(a , b')", settings.a() - settings.b_prime()),
        ("E(a', b')", settings.a_prime() - settings.b_prime()),
    ];
    for (name, delta) in cells {
        println!("{name} = {:+.9}", correlation_theory(delta));
    }
    println!(
        "S = E(a,b) + E(a',b) + E(a,b') - E(a',b') = {:.15}",
        chsh_theory(&settings)
    );
    Ok(())
}

fn cmd_lhv_bound() -> Result<(), String> {
    println!("bellsim {VERSION} lhv-bound");
    println!("S(strategy) = a*b + a'*b + a*b' - a'*b' over fixed outcomes");
    println!("  a   a'  b   b'   S");
    let (bound, achievers) = enumerate_strategy_bound();
    for strategy in DeterministicStrategy::all() {
        let s = chsh_of_strategy(&strategy);
        let mark = if s == bound { "  <- attains the bound" } else { "" };
        println!(
            " {:+}  {:+}  {:+}  {:+}  {:+}{mark}",
            strategy.a, strategy.a_prime, strategy.b, strategy.b_prime, s
        );
    }
    println!(
        "bound: max S = {bound}, attained by {} of 16 strategies",
        achievers.len()
    );
    Ok(())
}

fn cmd_spectrum() -> Result<(), String> {
    println!("bellsim {VERSION} spectrum");
    println!("operator: sx(1)sx(2) + sy(1)sy(2) + sz(1)sz(2) on the two-particle space");
    let op = spin_dot_operator();
    let system = hermitian_eigen(&op).map_err(|e| e.to_string())?;
    let formatted: Vec<String> = system
        .eigenvalues
        .iter()
        .map(|v| format!("{v:+.12}"))
        .collect();
    println!("eigenvalues: {}", formatted.join(", "));
    let trace = op.trace();
    println!("trace: {:+.12} (the eigenvalues sum to it)", trace.re);
    let singlet = singlet_state();
    let overlap = singlet.inner(&system.eigenvectors[0]).norm();
    println!("singlet overlap with the lowest eigenvector: {overlap:.6}");
    Ok(())
}

fn cmd_coherent(grid: usize) -> Result<(), String> {
    println!("bellsim {VERSION} coherent");
    println!("grid: {grid} directions (area-balanced spiral)");
    let defect = resolution_of_identity_defect(grid).map_err(|e| e.to_string())?;
    println!("resolution-of-identity defect |2*avg(proj) - I|_F = {defect:.3e}");
    if grid >= 10_000 {
        let op = operator_from_coherent(|n| n.z(), grid).map_err(|e| e.to_string())?;
        let system = hermitian_eigen(&op).map_err(|e| e.to_string())?;
        println!(
            "operator rebuilt from theta(n) = n_z: eigenvalues {:+.6}, {:+.6}",
            system.eigenvalues[0], system.eigenvalues[1]
        );
        let distance = frobenius_distance(&op, &pauli_z()).map_err(|e| e.to_string())?;
        println!("Frobenius distance to the exact z operator: {distance:.3e}");
    } else {
        println!("operator reconstruction needs --grid >= 10000; skipped");
    }
    Ok(())
}

fn cmd_relate(model_path: &Path, within_group: bool) -> Result<(), String> {
    let text =
        fs::read_to_string(model_path).map_err(|e| format!("{}: {e}", model_path.display()))?;
    let model = parse_model(&text).map_err(|e| format!("{}: {e}", model_path.display()))?;
    let Model {
        action,
        generator_names,
        variables,
        ..
    } = &model;

    println!("bellsim {VERSION} relate");
    println!(
        "model: {} points, {} generators ({}), group order {}, {} variables",
        action.n_points(),
        generator_names.len(),
        generator_names.join(", "),
        action.order(),
        variables.len()
    );
    println!(
        "mode: {}",
        if within_group {
            "witnesses restricted to the group"
        } else {
            "unrestricted bijections"
        }
    );

    for variable in variables {
        let fibers: Vec<String> = variable
            .fiber_counts()
            .into_iter()
            .map(|(label, count)| format!("{}:{count}", model.label_name(label)))
            .collect();
        let (permissible, witness) = is_permissible(action, variable);
        let verdict = if permissible {
            "permissible under the group".to_string()
        } else {
            let w = witness.expect("failure carries a witness");
            format!(
                "not permissible: points {}, {} share a label but element #{} splits them",
                action.point_name(w.phi1),
                action.point_name(w.phi2),
                w.element
            )
        };
        println!(
            "variable {}: fibers {{{}}}; {verdict}",
            variable.name(),
            fibers.join(", ")
        );
    }

    if variables.len() < 2 {
        println!("only one variable: nothing to classify");
        return Ok(());
    }

    let within = within_group.then_some(action);
    let matrix = classify_pairs(variables, within);
    let names: Vec<&str> = variables.iter().map(|v| v.name()).collect();
    println!("relation matrix (x = related, . = essentially different):");
    println!("      {}", names.join(" "));
    for (i, row) in matrix.iter().enumerate() {
        let marks: Vec<&str> = row.iter().map(|&r| if r { "x" } else { "." }).collect();
        println!("  {:<3} {}", names[i], marks.join(" "));
    }

    println!("witnesses:");
    let mut any = false;
    for i in 0..variables.len() {
        for j in (i + 1)..variables.len() {
            if !matrix[i][j] {
                continue;
            }
            any = true;
            let (_, witness) = are_related(&variables[i], &variables[j], within);
            let k = witness.expect("related pairs carry a witness");
            let images: Vec<&str> = k
                .images()
                .iter()
                .map(|&p| action.point_name(p))
                .collect();
            println!(
                "  {} ~ {} via point map [{}]",
                names[i],
                names[j],
                images.join(" ")
            );
        }
    }
    if !any {
        println!("  (none: every pair is essentially different)");
    }
    Ok(())
}

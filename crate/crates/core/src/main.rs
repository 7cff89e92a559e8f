use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use waterfill::allocation::{system_utility, ReferenceKind, Strategy, WeightMatrix};
use waterfill::experiment::{
    evaluate_matrix, run_experiment, summarize, write_records_csv, write_summary,
    ExperimentConfig, ExperimentRecord,
};
use waterfill::profiles::{generate, replay_from_csv, ProfileKind, ProfileSpec, RNG_ALGORITHM};
use waterfill::submodular::{
    check_monotone, check_setpair_submodular, check_submodular_pairwise, write_violations_csv,
    WaterfillOracle, SETPAIR_CAP,
};
use waterfill::{waterfill, ChannelId, Error, NoiseProfile};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_TOO_LARGE: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(name = "waterfill", version, about = "Waterfilling and online basestation allocation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one waterfilling problem.
    Waterfill(ProfileArgs),
    /// Exhaustively check submodularity and monotonicity of the rate function.
    CheckSubmodular {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        /// Write pairwise violations as CSV.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Allocate one instance with each strategy and print the result.
    Simulate {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long = "strategy", value_enum)]
        strategies: Vec<StrategyArg>,
        #[arg(long, value_enum, default_value_t = ReferenceArg::AnalyticUpper)]
        reference: ReferenceArg,
        /// Save the generated weight matrix as CSV.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Batch competitive-ratio runs, emitted as CSV.
    RatioExperiment {
        /// User counts to sweep.
        #[arg(long = "users", value_delimiter = ',', default_values_t = [10, 20, 50, 100])]
        users: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        basestations: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Profiles to run; all five when omitted.
        #[arg(long = "profile", value_enum)]
        profiles: Vec<ProfileArg>,
        #[arg(long = "strategy", value_enum)]
        strategies: Vec<StrategyArg>,
        #[arg(long, value_enum, default_value_t = ReferenceArg::AnalyticUpper)]
        reference: ReferenceArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Records CSV destination; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Replay one weight matrix from CSV instead of generating trials.
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ProfileArgs {
    /// Comma-separated noise variances.
    #[arg(long, value_delimiter = ',', required_unless_present = "input")]
    noises: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    budget: f64,
    /// CSV with header `channel,noise`.
    #[arg(long, conflicts_with = "noises")]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long, default_value_t = 10)]
    users: usize,
    #[arg(long, default_value_t = 3)]
    basestations: usize,
    #[arg(long, value_enum, default_value_t = ProfileArg::IidTen)]
    profile: ProfileArg,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Weight matrix CSV to replay instead of generating one.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    IidUnit,
    IidTen,
    MixedHalf,
    SparseStrong,
    Correlated,
}

impl From<ProfileArg> for ProfileKind {
    fn from(p: ProfileArg) -> Self {
        match p {
            ProfileArg::IidUnit => ProfileKind::IidUnit,
            ProfileArg::IidTen => ProfileKind::IidTen,
            ProfileArg::MixedHalf => ProfileKind::MixedHalf,
            ProfileArg::SparseStrong => ProfileKind::SparseStrong,
            ProfileArg::Correlated => ProfileKind::Correlated,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Greedy,
    GreedyAbsolute,
    MaxWeight,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Greedy => Strategy::Greedy,
            StrategyArg::GreedyAbsolute => Strategy::GreedyAbsolute,
            StrategyArg::MaxWeight => Strategy::MaxWeight,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ReferenceArg {
    BruteForce,
    AnalyticUpper,
}

impl From<ReferenceArg> for ReferenceKind {
    fn from(r: ReferenceArg) -> Self {
        match r {
            ReferenceArg::BruteForce => ReferenceKind::BruteForceOptimum,
            ReferenceArg::AnalyticUpper => ReferenceKind::AnalyticUpperBound,
        }
    }
}

fn strategies_or_default(args: &[StrategyArg]) -> Vec<Strategy> {
    if args.is_empty() {
        vec![Strategy::Greedy, Strategy::MaxWeight]
    } else {
        args.iter().map(|&s| s.into()).collect()
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InstanceTooLarge(_) | Error::GroundSetTooLarge { .. } => EXIT_TOO_LARGE,
        Error::Io { .. } | Error::Csv(_) | Error::Parse { .. } => EXIT_IO,
        _ => EXIT_INVALID,
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, Error> {
    File::create(path).map(BufWriter::new).map_err(io_err(path))
}

fn read_noise_csv(path: &Path, budget: f64) -> Result<NoiseProfile<f64>, Error> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut rdr = csv::Reader::from_reader(file);
    if rdr.headers()?.iter().collect::<Vec<_>>() != ["channel", "noise"] {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            msg: "header must be channel,noise".into(),
        });
    }
    let mut channels = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let bad = |msg: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            msg,
        };
        let id: usize = record[0].trim().parse().map_err(|_| bad(format!("bad channel id {:?}", &record[0])))?;
        let noise: f64 = record[1].trim().parse().map_err(|_| bad(format!("bad noise {:?}", &record[1])))?;
        channels.push((ChannelId(id), noise));
    }
    NoiseProfile::from_channels(channels, budget)
}

fn load_profile(args: &ProfileArgs) -> Result<NoiseProfile<f64>, Error> {
    match &args.input {
        Some(path) => read_noise_csv(path, args.budget),
        None => NoiseProfile::new(args.noises.clone(), args.budget),
    }
}

fn load_instance(args: &InstanceArgs) -> Result<(WeightMatrix<f64>, String), Error> {
    match &args.input {
        Some(path) => Ok((replay_from_csv(path)?, "replay".to_string())),
        None => {
            let kind: ProfileKind = args.profile.into();
            let spec = ProfileSpec {
                kind,
                users: args.users,
                basestations: args.basestations,
                seed: args.seed,
            };
            Ok((generate(&spec)?, kind.name().to_string()))
        }
    }
}

fn cmd_waterfill(args: &ProfileArgs) -> Result<u8, Error> {
    let profile = load_profile(args)?;
    let sol = waterfill(&profile);
    match sol.water_level {
        Some(level) => println!("water_level: {level}"),
        None => println!("water_level: none"),
    }
    println!("channel,noise,power,active");
    for (&(id, noise), &(_, power)) in profile.channels().iter().zip(&sol.powers) {
        println!("{},{noise},{power},{}", id.0, sol.is_active(id));
    }
    println!("rate_nats: {}", sol.rate);
    Ok(0)
}

fn cmd_check(args: &ProfileArgs, tolerance: f64, output: Option<&Path>) -> Result<u8, Error> {
    let oracle = WaterfillOracle::new(load_profile(args)?);
    let pairwise = check_submodular_pairwise(&oracle, tolerance)?;
    println!("pairwise submodularity violations: {}", pairwise.len());
    for v in pairwise.iter().take(10) {
        println!(
            "  S={} i={} j={} lhs={} rhs={} gap={}",
            v.base_set, v.elem_i, v.elem_j, v.lhs, v.rhs, v.gap
        );
    }
    let mut failed = !pairwise.is_empty();
    if oracle.profile().len() <= SETPAIR_CAP {
        let setpair = check_setpair_submodular(&oracle, tolerance)?;
        let monotone = check_monotone(&oracle, tolerance)?;
        println!("set-pair submodularity violations: {}", setpair.len());
        println!("monotonicity violations: {}", monotone.len());
        failed |= !setpair.is_empty() || !monotone.is_empty();
    } else {
        println!("set-pair and monotonicity checks skipped above {SETPAIR_CAP} channels");
    }
    if let Some(path) = output {
        let mut out = create(path)?;
        write_violations_csv(&pairwise, &mut out)?;
        out.flush().map_err(io_err(path))?;
    }
    Ok(if failed { EXIT_CHECK_FAILED } else { 0 })
}

fn cmd_simulate(
    instance: &InstanceArgs,
    strategies: &[StrategyArg],
    reference: ReferenceArg,
    output: Option<&Path>,
) -> Result<u8, Error> {
    let (w, label) = load_instance(instance)?;
    if let Some(path) = output {
        let mut out = create(path)?;
        waterfill::profiles::write_weight_csv(&w, &mut out)?;
        out.flush().map_err(io_err(path))?;
    }
    let reference: ReferenceKind = reference.into();
    let offline = reference.reference(&w)?;
    println!(
        "profile {label}: {} users, {} basestations, rng {RNG_ALGORITHM}",
        w.users(),
        w.basestations()
    );
    println!("{}: {offline:.6}", reference.name());
    for strategy in strategies_or_default(strategies) {
        let alloc = strategy.allocate(&w)?;
        let utility = system_utility(&alloc, &w)?;
        println!(
            "{strategy}: utility {utility:.6}, ratio {:.6}",
            waterfill::allocation::ratio_of(utility, offline)
        );
        for (bs, part) in alloc.parts().iter().enumerate() {
            let users: Vec<String> = part.iter().map(|u| (u + 1).to_string()).collect();
            println!("  bs_{}: [{}]", bs + 1, users.join(", "));
        }
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_ratio(
    users: &[usize],
    basestations: usize,
    trials: usize,
    profiles: &[ProfileArg],
    strategies: &[StrategyArg],
    reference: ReferenceArg,
    seed: u64,
    output: Option<&Path>,
    input: Option<&Path>,
) -> Result<u8, Error> {
    let strategies = strategies_or_default(strategies);
    let reference: ReferenceKind = reference.into();
    let records: Vec<ExperimentRecord> = match input {
        Some(path) => {
            let w = replay_from_csv(path)?;
            evaluate_matrix(&w, "replay", &strategies, reference, 0, seed)?
        }
        None => {
            let kinds: Vec<ProfileKind> = if profiles.is_empty() {
                ProfileKind::ALL.to_vec()
            } else {
                profiles.iter().map(|&p| p.into()).collect()
            };
            let mut all = Vec::new();
            for kind in kinds {
                for &n in users {
                    all.extend(run_experiment(&ExperimentConfig {
                        profile: kind,
                        users: n,
                        basestations,
                        trials,
                        strategies: strategies.clone(),
                        reference,
                        seed,
                    })?);
                }
            }
            all
        }
    };

    match output {
        Some(path) => {
            let mut out = create(path)?;
            write_records_csv(&records, &mut out)?;
            out.flush().map_err(io_err(path))?;
        }
        None => write_records_csv(&records, io::stdout().lock())?,
    }
    eprintln!("rng: {RNG_ALGORITHM}");
    if !records.is_empty() {
        write_summary(&summarize(&records)?, io::stderr().lock()).map_err(io_err(Path::new("<stderr>")))?;
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Waterfill(args) => cmd_waterfill(&args),
        Command::CheckSubmodular {
            profile,
            tolerance,
            output,
        } => cmd_check(&profile, tolerance, output.as_deref()),
        Command::Simulate {
            instance,
            strategies,
            reference,
            output,
        } => cmd_simulate(&instance, &strategies, reference, output.as_deref()),
        Command::RatioExperiment {
            users,
            basestations,
            trials,
            profiles,
            strategies,
            reference,
            seed,
            output,
            input,
        } => cmd_ratio(
            &users,
            basestations,
            trials,
            &profiles,
            &strategies,
            reference,
            seed,
            output.as_deref(),
            input.as_deref(),
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

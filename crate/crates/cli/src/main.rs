use std::error::Error;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use exmatch::em_solvers::{algebraic_em_decide, bcpm_via_em, cpm_via_em, Answer, BruteEm, DEFAULT_TRIALS};
use exmatch::format::{parse_em, parse_tkpm, write_em, write_tkpm};
use exmatch::harness::{
    exhaustive_sweep_with, gen_bipartite_instance, gen_instance, randomized_campaign, CampaignReport, CampaignSpec,
    Comparison, GenSpec, SweepConfig,
};
use exmatch::oracles::{brute_bcpm, brute_cpm, brute_em, brute_tkpm};
use exmatch::reduction::{decide_em_via_tkpm, gadgetize, BruteTkpm};
use exmatch::{EmInstance, EnumerationBudget, Matching};

const EXIT_YES: u8 = 0;
const EXIT_NO: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_DISAGREEMENT: u8 = 3;

type CliResult = Result<u8, Box<dyn Error>>;

/// Exact Matching, Top-k Perfect Matching and parity matching toolkit.
#[derive(Debug, Parser)]
#[command(name = "exmatch", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a random EM instance with a planted perfect matching.
    Gen(GenArgs),
    /// Reduce an EM instance to a TkPM instance plus a gadget map.
    Reduce {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        map: PathBuf,
    },
    /// Solve an instance.
    #[command(subcommand)]
    Solve(Solve),
    /// Run a differential campaign.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    extra: usize,
    #[arg(long, default_value_t = 0.5)]
    red_prob: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Only add edges across a random balanced bipartition.
    #[arg(long)]
    bipartite: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EmEngine {
    Brute,
    Algebraic,
    ViaTkpm,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ParityEngine {
    Brute,
    ViaEm,
}

#[derive(Debug, Subcommand)]
enum Solve {
    /// Exact Matching: a perfect matching with exactly k red edges.
    Em {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "brute")]
        engine: EmEngine,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Top-k Perfect Matching: maximize the weight of the k heaviest matched edges.
    Tkpm {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Correct Parity Matching: red count with the parity of k.
    Cpm {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "brute")]
        engine: ParityEngine,
    },
    /// Bounded CPM: parity of k and at most k red edges.
    Bcpm {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "brute")]
        engine: ParityEngine,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CheckKind {
    ViaTkpm,
    Algebraic,
    Cpm,
    Bcpm,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["exhaustive", "random"])))]
struct VerifyArgs {
    /// Sweep all small graphs up to isomorphism.
    #[arg(long, requires = "max_n")]
    exhaustive: bool,
    #[arg(long)]
    max_n: Option<usize>,
    /// Seeded random instances.
    #[arg(long, requires = "count")]
    random: bool,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comparisons to run.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "via-tkpm")]
    check: Vec<CheckKind>,
    /// Trials for the algebraic decider.
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: u32,
    /// Write the report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String, Box<dyn Error>> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn write(path: &Path, text: &str) -> Result<(), Box<dyn Error>> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn load_em(path: &Path) -> Result<EmInstance, Box<dyn Error>> {
    parse_em(&read(path)?).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn report_answer(answer: Answer, witness: Option<&Matching>) -> u8 {
    match answer {
        Answer::Yes => {
            println!("yes");
            if let Some(m) = witness {
                println!("{m}");
            }
            EXIT_YES
        }
        Answer::No => {
            println!("no");
            EXIT_NO
        }
        Answer::ProbablyNo { error_bound } => {
            println!("probably-no (error <= {error_bound:e})");
            EXIT_NO
        }
    }
}

fn witness_answer(w: Option<Matching>) -> u8 {
    match w {
        Some(m) => report_answer(Answer::Yes, Some(&m)),
        None => report_answer(Answer::No, None),
    }
}

fn gen(args: &GenArgs) -> CliResult {
    let spec = GenSpec::new(args.n, args.extra, args.red_prob, args.seed);
    let inst = if args.bipartite {
        gen_bipartite_instance(&spec)?
    } else {
        gen_instance(&spec)?
    };
    let text = write_em(&inst);
    match &args.out {
        Some(p) => write(p, &text)?,
        None => print!("{text}"),
    }
    Ok(EXIT_YES)
}

fn reduce(input: &Path, out: &Path, map_path: &Path) -> CliResult {
    let inst = load_em(input)?;
    let (tkpm, map) = gadgetize(&inst);
    write(out, &write_tkpm(&tkpm))?;
    write(map_path, &map.to_text())?;
    println!(
        "kprime {} threshold {} ({} vertices, {} edges)",
        map.kprime(),
        map.threshold(),
        tkpm.graph.vertex_count(),
        tkpm.graph.edge_count()
    );
    Ok(EXIT_YES)
}

fn solve(cmd: &Solve) -> CliResult {
    let budget = EnumerationBudget::unlimited();
    match cmd {
        Solve::Em {
            input,
            engine,
            trials,
            seed,
        } => {
            let inst = load_em(input)?;
            Ok(match engine {
                EmEngine::Brute => witness_answer(brute_em(&inst, budget)?),
                EmEngine::Algebraic => report_answer(algebraic_em_decide(&inst, *trials, *seed)?.answer, None),
                EmEngine::ViaTkpm => {
                    let d = decide_em_via_tkpm(&inst, &BruteTkpm { budget })?;
                    match d.optimum {
                        Some(v) => eprintln!("optimum {v}, threshold {}", d.threshold),
                        None => eprintln!("gadget graph has no perfect matching"),
                    }
                    report_answer(d.answer(), None)
                }
            })
        }
        Solve::Tkpm { input } => {
            let text = read(input)?;
            let inst = parse_tkpm(&text).map_err(|e| format!("{}: {e}", input.display()))?;
            Ok(match brute_tkpm(&inst, budget)? {
                Some((m, value)) => {
                    println!("value {value}");
                    println!("{m}");
                    EXIT_YES
                }
                None => {
                    println!("no perfect matching");
                    EXIT_NO
                }
            })
        }
        Solve::Cpm { input, engine } => {
            let inst = load_em(input)?;
            Ok(match engine {
                ParityEngine::Brute => witness_answer(brute_cpm(&inst, budget)?),
                ParityEngine::ViaEm => report_answer(cpm_via_em(&inst, &BruteEm { budget })?, None),
            })
        }
        Solve::Bcpm { input, engine } => {
            let inst = load_em(input)?;
            Ok(match engine {
                ParityEngine::Brute => witness_answer(brute_bcpm(&inst, budget)?),
                ParityEngine::ViaEm => report_answer(bcpm_via_em(&inst, &BruteEm { budget })?, None),
            })
        }
    }
}

fn verify(args: &VerifyArgs) -> CliResult {
    let comparisons: Vec<Comparison> = args
        .check
        .iter()
        .map(|c| match c {
            CheckKind::ViaTkpm => Comparison::EmViaTkpm,
            CheckKind::Algebraic => Comparison::EmAlgebraic { trials: args.trials },
            CheckKind::Cpm => Comparison::Cpm,
            CheckKind::Bcpm => Comparison::Bcpm,
        })
        .collect();
    let report: CampaignReport = if args.exhaustive {
        let mut cfg = SweepConfig::new(args.max_n.unwrap_or_default());
        cfg.seed = args.seed;
        if comparisons.iter().any(|c| matches!(c, Comparison::EmAlgebraic { .. })) {
            return Err("the algebraic check needs bipartite instances; use --random".into());
        }
        exhaustive_sweep_with(&cfg, &comparisons)?
    } else {
        let spec = CampaignSpec::new(args.count.unwrap_or_default(), args.seed);
        randomized_campaign(&spec, &comparisons)?
    };
    print!("{report}");
    if let Some(path) = &args.json {
        write(path, &report.to_json())?;
    }
    Ok(if report.is_clean() {
        EXIT_YES
    } else {
        EXIT_DISAGREEMENT
    })
}

fn run(cli: Cli) -> CliResult {
    match &cli.command {
        Command::Gen(args) => gen(args),
        Command::Reduce { input, out, map } => reduce(input, out, map),
        Command::Solve(cmd) => solve(cmd),
        Command::Verify(args) => verify(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write as _};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crg_core::fixpoint::{decide_nbvass_zero, FixpointParams};
use crg_core::harness::{default_params, verify_reduction};
use crg_core::io::{generate, parse, serialize, serialize_with_notes, GenParams, ObjectiveKind};
use crg_core::oracle::{
    certain_region, extract_strategy, region_dump, simulate, Mover, PlayStatus, Verdict, Window,
};
use crg_core::reductions::{GadgetVariant, Reduction};
use crg_core::{GameInstance, Player, Semantics};

const EXIT_UNKNOWN: u8 = 2;
const EXIT_DISAGREEMENT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "crg",
    version,
    about = "Counter reachability games: solve, transform and verify"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance with the bounded oracle
    Solve {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<Window>,
    },
    /// Decide zero-reachability on a one-dimensional non-blocking VASS game
    DecideNb0 {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        cap: Option<u64>,
        #[arg(long)]
        max_rounds: Option<u64>,
        /// Number of cap doublings after a saturated run
        #[arg(long, default_value_t = 3)]
        escalation: u32,
    },
    /// Apply a reduction and print the resulting instance
    Transform {
        reduction: Reduction,
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "figure")]
        variant: GadgetVariant,
    },
    /// Check a reduction against the oracle on random instances
    Verify {
        reduction: Reduction,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "figure")]
        variant: GadgetVariant,
        /// Source window; defaults to one derived from each instance
        #[arg(long, allow_hyphen_values = true)]
        window: Option<Window>,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        /// Largest number of locations per instance
        #[arg(long, default_value_t = 4)]
        max_locations: usize,
    },
    /// Print a random instance
    Gen(GenArgs),
    /// Play the extracted Reacher strategy against a random Opponent
    Simulate {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<Window>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        max_steps: usize,
    },
    /// Print the verdict of every configuration in the window
    RegionDump {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<Window>,
    },
}

#[derive(Args)]
struct Input {
    /// Instance file in crg-v1 format, `-` for standard input
    #[arg(long = "in", value_name = "FILE")]
    path: String,
}

impl Input {
    fn load(&self) -> Result<GameInstance> {
        let text = if self.path == "-" {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        } else {
            fs::read_to_string(&self.path).with_context(|| format!("cannot read {}", self.path))?
        };
        parse(&text).with_context(|| format!("in {}", self.path))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SemanticsArg {
    Z,
    Vass,
    Nbvass,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Single,
    SingleReacher,
    Zeroset,
    Axiszero,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[arg(long, value_enum, default_value = "vass")]
    semantics: SemanticsArg,
    #[arg(long, value_enum, default_value = "single")]
    objective: ObjectiveArg,
    #[arg(long, default_value_t = 1)]
    min_locations: usize,
    #[arg(long, default_value_t = 4)]
    max_locations: usize,
    #[arg(long, default_value_t = 1)]
    label_bound: i64,
    #[arg(long, default_value_t = 4)]
    value_bound: i64,
    #[arg(long, default_value_t = 0.5)]
    reacher_fraction: f64,
}

impl GenArgs {
    fn params(&self) -> GenParams {
        let semantics = match self.semantics {
            SemanticsArg::Z => Semantics::Z,
            SemanticsArg::Vass => Semantics::Vass,
            SemanticsArg::Nbvass => Semantics::NonBlockingVass,
        };
        let mut p = GenParams::new(self.dim, semantics);
        p.objective_kind = match self.objective {
            ObjectiveArg::Single => ObjectiveKind::Single,
            ObjectiveArg::SingleReacher => ObjectiveKind::SingleReacher,
            ObjectiveArg::Zeroset => ObjectiveKind::ZeroSet,
            ObjectiveArg::Axiszero => ObjectiveKind::AxisZero,
        };
        p.num_locations = self.min_locations..=self.max_locations;
        p.label_bound = self.label_bound;
        p.value_bound = self.value_bound;
        p.reacher_fraction = self.reacher_fraction;
        p
    }
}

fn window_for(game: &GameInstance, window: Option<Window>) -> Result<Window> {
    let w = window.unwrap_or_else(|| Window::default_for(game));
    if w.dimension() != game.dimension() {
        bail!(
            "window has {} ranges, instance has dimension {}",
            w.dimension(),
            game.dimension()
        );
    }
    Ok(w.forced_for(game.semantics)?)
}

fn verdict_exit(v: Verdict) -> ExitCode {
    if v.is_certain() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_UNKNOWN)
    }
}

fn winner(v: Verdict) -> &'static str {
    match v {
        Verdict::Win => "reacher",
        Verdict::Lose => "opponent",
        Verdict::Unknown => "unknown",
    }
}

fn run(cli: Cli, out: &mut String) -> Result<ExitCode> {
    match cli.command {
        Command::Solve { input, window } => {
            let game = input.load()?;
            let w = window_for(&game, window)?;
            let region = certain_region(&game, &w)?;
            let v = region.verdict(&game.initial).unwrap_or(Verdict::Unknown);
            writeln!(out, "winner: {}", winner(v))?;
            writeln!(
                out,
                "window {w}: {} win, {} lose, {} unknown",
                region.count(Verdict::Win),
                region.count(Verdict::Lose),
                region.count(Verdict::Unknown)
            )?;
            writeln!(out, ":: verdict {}", v.keyword())?;
            writeln!(out, ":: window {w}")?;
            Ok(verdict_exit(v))
        }
        Command::DecideNb0 {
            input,
            cap,
            max_rounds,
            escalation,
        } => {
            let game = input.load()?;
            let x0 = game.initial.counters.first().copied().unwrap_or(0).max(0) as u64;
            let mut params = FixpointParams::default_for(&game.system, x0);
            if let Some(c) = cap {
                params.cap = c;
            }
            if let Some(r) = max_rounds {
                params.max_rounds = r;
            }
            params.escalation = escalation;
            let d = decide_nbvass_zero(&game, params)?;
            let names = |set: &std::collections::BTreeSet<usize>| {
                set.iter()
                    .map(|&q| game.system.name(q))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            writeln!(out, "winner: {}", winner(d.verdict))?;
            writeln!(out, "Q_Z: {{{}}}", names(&d.qz.members))?;
            if !d.qz.undetermined.is_empty() {
                writeln!(out, "Q_Z undetermined: {{{}}}", names(&d.qz.undetermined))?;
            }
            writeln!(
                out,
                "status: {:?} after {} rounds",
                d.stage.status, d.rounds
            )?;
            write!(out, "{}", d.stage.table.dump(&game.system))?;
            writeln!(out, ":: verdict {}", d.verdict.keyword())?;
            writeln!(out, ":: rounds {}", d.rounds)?;
            Ok(verdict_exit(d.verdict))
        }
        Command::Transform {
            reduction,
            input,
            variant,
        } => {
            let game = input.load()?;
            let reduced = reduction.apply(&game, variant)?;
            let mut notes = vec![format!("{reduction} (variant {variant})")];
            notes.extend(reduced.notes.iter().cloned());
            write!(out, "{}", serialize_with_notes(&reduced.game, &notes))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            reduction,
            trials,
            seed,
            variant,
            window,
            dim,
            max_locations,
        } => {
            let mut params = default_params(reduction, dim);
            params.num_locations = 1..=max_locations;
            let report =
                verify_reduction(reduction, variant, &params, trials, window.as_ref(), seed)?;
            write!(out, "{}", report.render())?;
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_DISAGREEMENT)
            })
        }
        Command::Gen(args) => {
            let game = generate(&args.params(), args.seed)?;
            write!(out, "{}", serialize(&game))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate {
            input,
            window,
            seed,
            max_steps,
        } => {
            let game = input.load()?;
            let w = window_for(&game, window)?;
            let region = certain_region(&game, &w)?;
            let strategy = extract_strategy(&game, &region, Player::Reacher);
            let play = simulate(
                &game,
                Mover::Strategy(&strategy),
                Mover::Random,
                &game.initial,
                max_steps,
                seed,
            );
            for c in &play.configs {
                let xs: Vec<String> = c.counters.iter().map(|x| x.to_string()).collect();
                writeln!(out, "{} {}", game.system.name(c.location), xs.join(" "))?;
            }
            let status = match play.status {
                PlayStatus::ReachedObjective => "objective reached".to_string(),
                PlayStatus::Deadlock(p) => format!("{p} is stuck"),
                PlayStatus::StepLimit => format!("no objective within {max_steps} steps"),
            };
            writeln!(out, "result: {status}")?;
            writeln!(out, ":: steps {}", play.configs.len() - 1)?;
            writeln!(out, ":: reacher_wins {}", play.reacher_wins())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::RegionDump { input, window } => {
            let game = input.load()?;
            let w = window_for(&game, window)?;
            write!(out, "{}", region_dump(&game, &certain_region(&game, &w)?))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let mut out = String::new();
    let result = run(cli, &mut out);
    let _ = io::stdout().write_all(out.as_bytes());
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use omega_borel::automata::parse_automaton;
use omega_borel::classify::classify;
use omega_borel::expansion::{hierarchy_table, jump_report, predict_jump, ClassRef, Level, Side};
use omega_borel::games::{
    lift_objective, parse_any_game, solve, verify_strategy, GameFile, LiftConvention, Objective,
    VertexSet,
};
use omega_borel::report;
use omega_borel::selftest;
use omega_borel::words::{Alphabet, UpWord};
use omega_borel::{Error, Limits};

#[derive(Parser)]
#[command(
    name = "omega-borel",
    version,
    about = "Classify ω-regular languages in the low Borel hierarchy, \
             report class jumps under alphabet expansion, and solve the games behind them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    /// Lifted family is exactly {V(base)}
    Paper,
    /// Lifted family is every old-vertex set meeting the reach set
    MeetsR,
}

impl From<Convention> for LiftConvention {
    fn from(c: Convention) -> LiftConvention {
        match c {
            Convention::Paper => LiftConvention::PaperExact,
            Convention::MeetsR => LiftConvention::MeetsR,
        }
    }
}

#[derive(Args)]
struct Common {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Maximum automaton size accepted before derived constructions
    #[arg(long, global = true)]
    max_states: Option<usize>,
}

impl Common {
    fn limits(&self) -> Result<Limits, Error> {
        match self.max_states {
            None => Ok(Limits::DEFAULT),
            Some(0) => Err(Error::Invalid("the state guard must be at least 1".into())),
            Some(n) => Ok(Limits::with_max_states(n)),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify automata into the seven low Borel classes
    Classify {
        /// Automaton files, reported in input order
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Embed an automaton into a larger alphabet, re-classify, and compare
    /// against the predicted jump
    Jump {
        path: PathBuf,
        /// Expanded alphabet as comma-separated symbols, e.g. a,b,c
        #[arg(long)]
        alphabet: String,
        #[command(flatten)]
        common: Common,
    },
    /// Predicted classes after expansion for one hierarchy class
    Predict {
        /// Sigma, Pi, or Delta
        side: String,
        /// 1, 2, ..., omega, omega+1, ..., or omega1
        level: String,
        #[command(flatten)]
        common: Common,
    },
    /// The expansion table over both pillars up to a finite level
    Table {
        max: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Decide membership of an ultimately periodic word, written u(v)^w
    Member {
        path: PathBuf,
        word: String,
        #[command(flatten)]
        common: Common,
    },
    /// Solve a game file and verify the returned strategies
    Solve {
        path: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Put a Muller objective from a base game onto an expanded arena,
    /// then solve and verify
    Lift {
        base: PathBuf,
        expanded: PathBuf,
        /// Reach set of the base game as comma-separated vertex ids
        #[arg(long, default_value = "")]
        reach: String,
        #[arg(long, value_enum)]
        convention: Convention,
        #[command(flatten)]
        common: Common,
    },
    /// Run the built-in cross-check suites
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Classify { paths, common } => cmd_classify(&paths, &common),
        Command::Jump {
            path,
            alphabet,
            common,
        } => cmd_jump(&path, &alphabet, &common),
        Command::Predict {
            side,
            level,
            common,
        } => cmd_predict(&side, &level, &common),
        Command::Table { max, common } => cmd_table(max, &common),
        Command::Member { path, word, common } => cmd_member(&path, &word, &common),
        Command::Solve { path, common } => cmd_solve(&path, &common),
        Command::Lift {
            base,
            expanded,
            reach,
            convention,
            common,
        } => cmd_lift(&base, &expanded, &reach, convention, &common),
        Command::Selftest { seed, common } => cmd_selftest(seed, &common),
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn parse_alphabet(csv: &str) -> Result<Alphabet, Error> {
    let mut symbols = Vec::new();
    for part in csv.split(',') {
        let part = part.trim();
        let mut chars = part.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => symbols.push(c),
            _ => {
                return Err(Error::Invalid(format!(
                    "alphabet entries are single symbols, got '{part}'"
                )))
            }
        }
    }
    Alphabet::new(symbols)
}

fn parse_vertex_csv(csv: &str) -> Result<VertexSet, Error> {
    let mut set = VertexSet::new();
    for part in csv.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let v: usize = part
            .parse()
            .map_err(|_| Error::Invalid(format!("'{part}' is not a vertex id")))?;
        set.insert(v);
    }
    Ok(set)
}

fn cmd_classify(paths: &[PathBuf], common: &Common) -> Result<ExitCode, Error> {
    let limits = common.limits()?;
    let many = paths.len() > 1;
    for path in paths {
        let automaton = parse_automaton(&read(path)?)?;
        let classification = classify(&automaton, &limits)?;
        match common.format {
            Format::Text => {
                if many {
                    println!("== {}", path.display());
                }
                print!("{}", report::classification_text(&classification));
            }
            Format::Json => println!("{}", report::classification_json(&classification)),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_jump(path: &Path, alphabet: &str, common: &Common) -> Result<ExitCode, Error> {
    let limits = common.limits()?;
    let automaton = parse_automaton(&read(path)?)?;
    let bigger = parse_alphabet(alphabet)?;
    let jump = jump_report(&automaton, &bigger, &limits)?;
    match common.format {
        Format::Text => print!("{}", report::jump_text(&jump)),
        Format::Json => println!("{}", report::jump_json(&jump)),
    }
    Ok(if jump.consistent {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn cmd_predict(side: &str, level: &str, common: &Common) -> Result<ExitCode, Error> {
    let from = ClassRef::new(Side::parse(side)?, Level::parse(level)?);
    let to = predict_jump(from);
    match common.format {
        Format::Text => print!("{}", report::predict_text(&from, &to)),
        Format::Json => println!("{}", report::predict_json(&from, &to)),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_table(max: u32, common: &Common) -> Result<ExitCode, Error> {
    let table = hierarchy_table(max)?;
    match common.format {
        Format::Text => print!("{}", report::table_text(&table)),
        Format::Json => println!("{}", report::table_json(&table)),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_member(path: &Path, word: &str, common: &Common) -> Result<ExitCode, Error> {
    let automaton = parse_automaton(&read(path)?)?;
    let word = UpWord::parse(word)?;
    let accepted = automaton.accepts(&word)?;
    match common.format {
        Format::Text => print!("{}", report::member_text(&word, accepted)),
        Format::Json => println!("{}", report::member_json(&word, accepted)),
    }
    Ok(ExitCode::SUCCESS)
}

fn solve_and_verify(
    file: &GameFile,
    objective: &Objective,
    convention: Option<LiftConvention>,
    common: &Common,
) -> Result<ExitCode, Error> {
    let limits = common.limits()?;
    let result = solve(&file.graph, objective, &limits)?;
    let verified = verify_strategy(&file.graph, objective, &result).unwrap_or(false);
    if !verified {
        eprintln!("solver returned strategies that fail verification; not reporting them");
        return Ok(ExitCode::FAILURE);
    }
    match common.format {
        Format::Text => print!("{}", report::solve_text(&result, convention)),
        Format::Json => println!("{}", report::solve_json(&result, convention)),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(path: &Path, common: &Common) -> Result<ExitCode, Error> {
    let file = parse_any_game(&read(path)?)?;
    let objective = file
        .objective
        .clone()
        .ok_or_else(|| Error::Invalid(format!("{} has no objective line", path.display())))?;
    solve_and_verify(&file, &objective, None, common)
}

fn cmd_lift(
    base: &Path,
    expanded: &Path,
    reach: &str,
    convention: Convention,
    common: &Common,
) -> Result<ExitCode, Error> {
    let limits = common.limits()?;
    let base_file = parse_any_game(&read(base)?)?;
    let expanded_file = parse_any_game(&read(expanded)?)?;
    let reach = parse_vertex_csv(reach)?;
    let convention = LiftConvention::from(convention);
    let objective = lift_objective(
        &base_file.graph,
        &expanded_file.graph,
        &reach,
        convention,
        &limits,
    )?;
    solve_and_verify(&expanded_file, &objective, Some(convention), common)
}

fn cmd_selftest(seed: u64, common: &Common) -> Result<ExitCode, Error> {
    let limits = common.limits()?;
    let outcomes = selftest::run(seed, &limits);
    match common.format {
        Format::Text => {
            for outcome in &outcomes {
                println!("{}", outcome.line());
            }
        }
        Format::Json => {
            let suites: Vec<serde_json::Value> = outcomes
                .iter()
                .map(|o| match &o.result {
                    Ok(n) => json!({"name": o.name, "ok": true, "instances": n}),
                    Err(e) => json!({"name": o.name, "ok": false, "error": e.to_string()}),
                })
                .collect();
            println!("{}", json!({ "suites": suites }));
        }
    }
    if outcomes.iter().all(|o| o.passed()) {
        return Ok(ExitCode::SUCCESS);
    }
    let only_guard_trips = outcomes.iter().all(|o| {
        matches!(
            o.result,
            Ok(_)
                | Err(Error::StateLimitExceeded(_, _))
                | Err(Error::MemoryLimitExceeded(_, _))
        )
    });
    Ok(if only_guard_trips {
        ExitCode::from(2)
    } else {
        ExitCode::FAILURE
    })
}

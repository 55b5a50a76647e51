//! Command-line front end. [`run`] takes the arguments and output streams so
//! tests can drive it without spawning a process.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use room25_core::adversary::{
    self, Certificate, SearchConfig, SearchError, SearchReport, Verdict, DEFAULT_BUDGET,
};
use room25_core::engine::{
    replay_from, DeathCause, Event, GameState, LoggedEvent, MoveCause, Outcome, Regime, Replay,
    RuleVariant,
};
use room25_core::openings::{canned_programs, canned_script, LuckWitness, Opening};
use room25_core::prob::{self, CategoryCounts, LuckEvent, ProbError, Rational};
use room25_core::{parse_programs, parse_script, parse_steps, Frame, ParseError, Roster, TileKind};

use crate::io::{read_board, read_programs, read_roster, read_script, InputError};
use crate::par;

/// Seed used when neither `--seed` nor the environment variable is given.
pub const DEFAULT_SEED: u64 = 25;
pub const SEED_ENV: &str = "ROOM25_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "room25",
    version,
    about = "Rules engine, probabilities and exhaustive search for the Room 25 solo puzzle"
)]
pub struct Cli {
    /// Output style: prose or tab-separated records.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Lines,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a script (or programs) and print it in canonical notation.
    Parse {
        /// File to read, `-` for standard input.
        file: Option<PathBuf>,
        /// Notation given inline instead of a file.
        #[arg(short = 'e', long = "expr", conflicts_with = "file")]
        expr: Option<String>,
        /// Read programmings (`1: 1DC | ...`) rather than executions.
        #[arg(long)]
        program: bool,
    },
    /// Replay a script on a board and print the event log and outcome.
    Replay {
        #[arg(long)]
        board: PathBuf,
        #[arg(long)]
        script: PathBuf,
        #[arg(long = "characters", short = 'n')]
        characters: usize,
        /// Programs to check the script against; inferred from the script otherwise.
        #[arg(long)]
        programs: Option<PathBuf>,
        #[command(flatten)]
        rules: Rules,
    },
    /// Exact probabilities and Monte Carlo estimates.
    Prob {
        #[command(subcommand)]
        command: ProbCommand,
    },
    /// Bounded searches that confirm or refute a claim.
    Verify {
        #[command(subcommand)]
        claim: Claim,
    },
    /// The two scripted openings.
    Openings {
        #[command(subcommand)]
        command: OpeningsCommand,
    },
}

#[derive(Args, Debug, Clone, Default)]
pub struct Rules {
    /// Rule changes, repeatable.
    #[arg(long = "variant", value_enum)]
    pub variant: Vec<VariantFlag>,
    /// Let up to this many characters die without losing.
    #[arg(long)]
    pub max_deaths: Option<u8>,
}

impl Rules {
    fn variant(&self) -> RuleVariant {
        let mut v = RuleVariant::DEFAULT;
        for f in &self.variant {
            match f {
                VariantFlag::PushFromStart => v.push_from_start_allowed = true,
                VariantFlag::PushFromControl => v.push_from_control_allowed = true,
                VariantFlag::FreeKill => v.free_kill = true,
            }
        }
        v
    }

    fn regime(&self) -> Regime {
        self.max_deaths
            .map_or(Regime::AllSurvive, |max_deaths| Regime::Partial {
                max_deaths,
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantFlag {
    PushFromStart,
    PushFromControl,
    /// Mortal rooms also grant a shift.
    FreeKill,
}

#[derive(Subcommand, Debug)]
pub enum ProbCommand {
    /// Exact probability of an event as a fraction.
    Exact {
        #[arg(long, value_enum)]
        event: ExactEvent,
        /// Roster file; the solo roster otherwise.
        #[arg(long)]
        roster: Option<PathBuf>,
        /// Also compute the value by brute-force enumeration and compare.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 6)]
        digits: u32,
    },
    /// Seeded Monte Carlo over random boards.
    Mc {
        #[arg(long, value_enum, default_value_t = OpeningName::Veloce)]
        opening: OpeningName,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        /// Falls back to $ROOM25_SEED, then to 25.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        roster: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExactEvent {
    VNoPivot,
    VLucky,
    VLuckyNoDark,
    VLoss,
    TLucky,
    TSurvival,
    TLoss,
}

impl ExactEvent {
    fn closed_form(self, c: &CategoryCounts) -> Result<Rational, ProbError> {
        match self {
            ExactEvent::VNoPivot => prob::p_v_no_pivot(c),
            ExactEvent::VLucky => prob::p_v_lucky(c),
            ExactEvent::VLuckyNoDark => prob::p_v_lucky_no_dark(c),
            ExactEvent::VLoss => prob::p_v_loss_bound(c),
            ExactEvent::TLucky => prob::p_t_lucky(c),
            ExactEvent::TSurvival => prob::p_t_survival(c),
            ExactEvent::TLoss => prob::p_t_loss_bound(c),
        }
    }

    fn oracle(self, c: &CategoryCounts) -> Option<Result<Rational, ProbError>> {
        let e = match self {
            ExactEvent::VLucky => LuckEvent::VLucky,
            ExactEvent::VLuckyNoDark => LuckEvent::VLuckyNoDark,
            ExactEvent::VLoss => LuckEvent::VLoss,
            ExactEvent::TLucky => LuckEvent::TLucky,
            ExactEvent::TLoss => LuckEvent::TLossCore,
            ExactEvent::TSurvival => {
                return Some(
                    prob::enumerate_oracle(c, LuckEvent::TLossCore)
                        .map(|p| Rational::from_integer(1.into()) - p),
                )
            }
            ExactEvent::VNoPivot => return None,
        };
        Some(prob::enumerate_oracle(c, e))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OpeningName {
    Veloce,
    Temeraire,
}

impl From<OpeningName> for Opening {
    fn from(o: OpeningName) -> Opening {
        match o {
            OpeningName::Veloce => Opening::Veloce,
            OpeningName::Temeraire => Opening::Temeraire,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    /// Node budget shared by all workers.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Claim {
    /// No board and no play wins within the first turn.
    OneTurn {
        #[arg(long, short = 'n')]
        n: usize,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long = "variant", value_enum)]
        variant: Vec<VariantFlag>,
    },
    /// Not even a win losing one character exists within the first turn.
    Partial {
        #[arg(long, short = 'n')]
        n: usize,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long = "variant", value_enum)]
        variant: Vec<VariantFlag>,
    },
    /// A hostile room assignment kills or confines the party within the horizon.
    Antagonistic {
        #[arg(long, default_value_t = 3)]
        horizon: u8,
        #[arg(long, short = 'n', default_value_t = 1)]
        n: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// With the second Mortal room placed at random, every line loses at least
    /// one placement in five.
    Randomized {
        #[arg(long, default_value_t = 3)]
        horizon: u8,
        #[arg(long, short = 'n', default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum OpeningsCommand {
    /// Print an opening's programs and its script for a given frame.
    Emit {
        #[arg(long, value_enum)]
        opening: OpeningName,
        #[arg(long, short = 'n', default_value_t = 1)]
        n: usize,
        /// Frame name: id, r90, r180, r270, h, r90h, r180h, r270h.
        #[arg(long, default_value = "id")]
        frame: String,
        /// Room code of the pivot tile (the opening's default otherwise).
        #[arg(long)]
        pivot: Option<char>,
    },
}

/// Runs the CLI; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut ctx = Ctx {
        format: cli.format,
        out,
        err,
    };
    match ctx.dispatch(cli.command) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(ctx.err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(ctx.err, "error: {e}");
            EXIT_USAGE
        }
    }
}

enum Failure {
    Usage(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<ProbError> for Failure {
    fn from(e: ProbError) -> Self {
        Failure::Usage(e.to_string())
    }
}

struct Ctx<'a> {
    format: Format,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

type Res = Result<i32, Failure>;

fn seed_from_env() -> Result<u64, Failure> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{SEED_ENV} is not an integer: {s:?}"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn roster(path: &Option<PathBuf>) -> Result<Roster, Failure> {
    Ok(match path {
        Some(p) => read_roster(p)?,
        None => Roster::solo(),
    })
}

impl Ctx<'_> {
    fn dispatch(&mut self, c: Command) -> Res {
        match c {
            Command::Parse {
                file,
                expr,
                program,
            } => self.parse(file, expr, program),
            Command::Replay {
                board,
                script,
                characters,
                programs,
                rules,
            } => self.replay(board, script, characters, programs, rules),
            Command::Prob {
                command:
                    ProbCommand::Exact {
                        event,
                        roster: r,
                        oracle,
                        digits,
                    },
            } => self.exact(event, &roster(&r)?, oracle, digits),
            Command::Prob {
                command:
                    ProbCommand::Mc {
                        opening,
                        trials,
                        seed,
                        jobs,
                        roster: r,
                    },
            } => {
                let seed = match seed {
                    Some(s) => s,
                    None => seed_from_env()?,
                };
                self.mc(opening.into(), &roster(&r)?, trials, seed, jobs)
            }
            Command::Verify { claim } => self.verify(claim),
            Command::Openings {
                command:
                    OpeningsCommand::Emit {
                        opening,
                        n,
                        frame,
                        pivot,
                    },
            } => self.emit(opening.into(), n, &frame, pivot),
        }
    }

    fn parse_error(&mut self, source: &str, e: &ParseError) -> Res {
        writeln!(self.err, "{source}:{}:{}: {}", e.line, e.column, e.kind)?;
        Ok(EXIT_USAGE)
    }

    fn parse(&mut self, file: Option<PathBuf>, expr: Option<String>, program: bool) -> Res {
        let (source, text) = match (expr, file) {
            (Some(e), _) => ("<expr>".to_string(), e),
            (None, Some(p)) if p.as_os_str() == "-" => {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s)?;
                ("<stdin>".to_string(), s)
            }
            (None, Some(p)) => {
                let s = std::fs::read_to_string(&p)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
                (p.display().to_string(), s)
            }
            (None, None) => return Err(Failure::Usage("give a file or --expr".into())),
        };
        if program {
            match parse_programs(&text) {
                Ok(ps) => {
                    for p in ps {
                        writeln!(self.out, "{p}")?;
                    }
                    Ok(EXIT_OK)
                }
                Err(e) => self.parse_error(&source, &e),
            }
        } else if !text.contains(':') {
            // A bare step list without turn headers.
            match parse_steps(&text) {
                Ok(steps) => {
                    let parts: Vec<String> = steps.iter().map(ToString::to_string).collect();
                    match self.format {
                        Format::Text => writeln!(self.out, "{}", parts.join(" | "))?,
                        Format::Lines => {
                            for (i, p) in parts.iter().enumerate() {
                                writeln!(self.out, "step\t-\t{}\t{p}", i + 1)?;
                            }
                        }
                    }
                    Ok(EXIT_OK)
                }
                Err(e) => self.parse_error(&source, &e),
            }
        } else {
            match parse_script(&text) {
                Ok(s) => {
                    match self.format {
                        Format::Text => write!(self.out, "{s}")?,
                        Format::Lines => {
                            for t in &s.turns {
                                for (i, step) in t.steps.iter().enumerate() {
                                    writeln!(self.out, "step\t{}\t{}\t{step}", t.number, i + 1)?;
                                }
                            }
                        }
                    }
                    Ok(EXIT_OK)
                }
                Err(e) => self.parse_error(&source, &e),
            }
        }
    }

    fn replay(
        &mut self,
        board: PathBuf,
        script: PathBuf,
        n: usize,
        programs: Option<PathBuf>,
        rules: Rules,
    ) -> Res {
        let b = read_board(&board)?;
        let s = read_script(&script)?;
        let progs = programs.as_deref().map(read_programs).transpose()?;
        if !(1..=room25_core::engine::MAX_CHARACTERS).contains(&n) {
            return Err(Failure::Usage(format!(
                "--characters must be between 1 and 6, got {n}"
            )));
        }
        let g = GameState::new(b, n, rules.variant()).with_regime(rules.regime());
        match replay_from(g, &s, progs.as_deref()) {
            Ok(r) => {
                self.print_replay(&r)?;
                Ok(EXIT_OK)
            }
            Err(e) => {
                match self.format {
                    Format::Text => writeln!(self.out, "rejected: {e}")?,
                    Format::Lines => {
                        writeln!(self.out, "rejected\t{}\t{}\t{}", e.turn, e.step, e.kind)?
                    }
                }
                Ok(EXIT_REFUTED)
            }
        }
    }

    fn print_replay(&mut self, r: &Replay) -> std::io::Result<()> {
        for e in &r.events {
            match self.format {
                Format::Text => writeln!(self.out, "{}", describe(e))?,
                Format::Lines => {
                    let step = e.step.map_or("-".to_string(), |s| s.to_string());
                    writeln!(self.out, "event\t{}\t{step}\t{}", e.turn, record(&e.event))?
                }
            }
        }
        match self.format {
            Format::Text => writeln!(self.out, "{}", outcome_text(&r.outcome)),
            Format::Lines => writeln!(self.out, "outcome\t{}", outcome_record(&r.outcome)),
        }
    }

    fn exact(&mut self, event: ExactEvent, roster: &Roster, oracle: bool, digits: u32) -> Res {
        let c = CategoryCounts::from_roster(roster);
        let p = event.closed_form(&c)?;
        let dec = prob::to_decimal(&p, digits);
        let mut code = EXIT_OK;
        match self.format {
            Format::Text => writeln!(self.out, "{p} ≈ {dec}")?,
            Format::Lines => writeln!(
                self.out,
                "exact\t{}\t{p}\t{dec}",
                event.to_possible_value().expect("named").get_name()
            )?,
        }
        if oracle {
            let Some(o) = event.oracle(&c) else {
                return Err(Failure::Usage(
                    "no brute-force oracle for this event".into(),
                ));
            };
            let o = o?;
            let agree = o == p;
            if !agree {
                code = EXIT_REFUTED;
            }
            match self.format {
                Format::Text => writeln!(
                    self.out,
                    "oracle {o} ({})",
                    if agree { "agrees" } else { "DISAGREES" }
                )?,
                Format::Lines => writeln!(self.out, "oracle\t{o}\t{agree}")?,
            }
        }
        Ok(code)
    }

    fn mc(
        &mut self,
        opening: Opening,
        roster: &Roster,
        trials: u64,
        seed: u64,
        jobs: Option<usize>,
    ) -> Res {
        if trials == 0 {
            return Err(Failure::Usage("--trials must be positive".into()));
        }
        let r = par::monte_carlo(opening, roster, trials, seed, jobs);
        let t = r.tally;
        match self.format {
            Format::Text => {
                writeln!(
                    self.out,
                    "opening {} seed {seed} trials {}",
                    opening.name(),
                    t.trials
                )?;
                writeln!(self.out, "optimal win       {:>9}", t.optimal_win)?;
                writeln!(self.out, "instant loss      {:>9}", t.instant_loss)?;
                writeln!(self.out, "second-turn loss  {:>9}", t.second_turn_loss)?;
                writeln!(self.out, "other             {:>9}", t.other)?;
                writeln!(
                    self.out,
                    "win rate          {:.6} ± {:.6}",
                    r.win_rate,
                    par::sigma(r.win_variance)
                )?;
                writeln!(
                    self.out,
                    "instant-loss rate {:.6} ± {:.6}",
                    r.instant_loss_rate,
                    par::sigma(r.instant_loss_variance)
                )?;
            }
            Format::Lines => {
                writeln!(self.out, "mc\t{}\t{seed}\t{}", opening.name(), t.trials)?;
                writeln!(self.out, "tally\toptimal_win\t{}", t.optimal_win)?;
                writeln!(self.out, "tally\tinstant_loss\t{}", t.instant_loss)?;
                writeln!(self.out, "tally\tsecond_turn_loss\t{}", t.second_turn_loss)?;
                writeln!(self.out, "tally\tother\t{}", t.other)?;
            }
        }
        Ok(EXIT_OK)
    }

    fn verify(&mut self, claim: Claim) -> Res {
        let variant_of = |v: &[VariantFlag]| {
            Rules {
                variant: v.to_vec(),
                max_deaths: None,
            }
            .variant()
        };
        let (name, cfg, args, want) = match claim {
            Claim::OneTurn { n, search, variant } => (
                "one-turn",
                SearchConfig {
                    variant: variant_of(&variant),
                    ..SearchConfig::one_turn(n)
                },
                search,
                Want::NoWin,
            ),
            Claim::Partial { n, search, variant } => (
                "partial",
                SearchConfig {
                    variant: variant_of(&variant),
                    ..SearchConfig::partial(n)
                },
                search,
                Want::NoWin,
            ),
            Claim::Antagonistic { horizon, n, search } => (
                "antagonistic",
                SearchConfig::antagonistic(horizon, n),
                search,
                Want::ForcedLoss,
            ),
            Claim::Randomized { horizon, n, budget } => return self.randomized(horizon, n, budget),
        };
        if !(1..=room25_core::engine::MAX_CHARACTERS).contains(&cfg.n) {
            return Err(Failure::Usage(format!(
                "-n must be between 1 and 6, got {}",
                cfg.n
            )));
        }
        let cfg = SearchConfig {
            budget: args.budget,
            ..cfg
        };
        let r = match par::search(&cfg, args.jobs) {
            Ok(r) => r,
            Err(SearchError::HorizonTooLarge { nodes }) => {
                writeln!(
                    self.err,
                    "search stopped after {nodes} nodes; raise --budget"
                )?;
                return Ok(EXIT_USAGE);
            }
        };
        let confirmed = match want {
            Want::NoWin => r.verdict == Verdict::NoWin,
            Want::ForcedLoss => r.verdict == Verdict::ForcedLoss,
        };
        self.print_search(name, &r, confirmed)?;
        Ok(if confirmed { EXIT_OK } else { EXIT_REFUTED })
    }

    fn print_search(
        &mut self,
        name: &str,
        r: &SearchReport,
        confirmed: bool,
    ) -> std::io::Result<()> {
        let (verdict, cert): (&str, Option<&Certificate>) = match &r.verdict {
            Verdict::NoWin => ("NoWin", None),
            Verdict::ForcedLoss => ("ForcedLoss", None),
            Verdict::WinFound(c) => ("WinFound", Some(c)),
            Verdict::Escaped(c) => ("Escaped", Some(c)),
        };
        match self.format {
            Format::Text => {
                writeln!(
                    self.out,
                    "{name} n={} horizon={}: {verdict} ({})",
                    r.n,
                    r.horizon,
                    if confirmed {
                        "claim confirmed"
                    } else {
                        "claim refuted"
                    }
                )?;
                writeln!(
                    self.out,
                    "nodes {} memo hits {} pruned {} leaves {}",
                    r.nodes, r.memo_hits, r.pruned, r.leaves
                )?;
                if let Some(c) = cert {
                    writeln!(self.out, "board:\n{}script:\n{}", c.board, c.script)?;
                }
            }
            Format::Lines => {
                writeln!(
                    self.out,
                    "verify\t{name}\t{}\t{}\t{verdict}\t{confirmed}",
                    r.n, r.horizon
                )?;
                writeln!(
                    self.out,
                    "stats\t{}\t{}\t{}\t{}",
                    r.nodes, r.memo_hits, r.pruned, r.leaves
                )?;
                if let Some(c) = cert {
                    for t in &c.script.turns {
                        writeln!(self.out, "script\t{t}")?;
                    }
                }
            }
        }
        Ok(())
    }

    fn randomized(&mut self, horizon: u8, n: usize, budget: u64) -> Res {
        let r = match adversary::randomized_defense(horizon, n, budget) {
            Ok(r) => r,
            Err(SearchError::HorizonTooLarge { nodes }) => {
                writeln!(
                    self.err,
                    "search stopped after {nodes} nodes; raise --budget"
                )?;
                return Ok(EXIT_USAGE);
            }
        };
        // Every surviving line must lose to at least one of the five placements.
        let confirmed = r.min_losses.is_none_or(|m| m >= 1);
        match self.format {
            Format::Text => {
                writeln!(
                    self.out,
                    "randomized n={n} horizon={horizon}: {} escaping lines, fewest losing placements {}/5 ({})",
                    r.escaping_lines,
                    r.min_losses.map_or("-".into(), |m| m.to_string()),
                    if confirmed { "claim confirmed" } else { "claim refuted" }
                )?;
                writeln!(
                    self.out,
                    "placements indistinguishable before the mortal is met: {}",
                    r.indistinguishable
                )?;
            }
            Format::Lines => writeln!(
                self.out,
                "randomized\t{n}\t{horizon}\t{}\t{}\t{}\t{confirmed}",
                r.escaping_lines,
                r.min_losses.map_or("-".into(), |m| m.to_string()),
                r.indistinguishable
            )?,
        }
        Ok(if confirmed { EXIT_OK } else { EXIT_REFUTED })
    }

    fn emit(&mut self, opening: Opening, n: usize, frame: &str, pivot: Option<char>) -> Res {
        let frame = Frame::from_name(frame)
            .ok_or_else(|| Failure::Usage(format!("unknown frame {frame:?}")))?;
        let pivot = match pivot {
            Some(c) => TileKind::from_code(c)
                .ok_or_else(|| Failure::Usage(format!("unknown room code {c:?}")))?,
            None if opening == Opening::Temeraire => TileKind::Control,
            None => TileKind::Empty,
        };
        let w = LuckWitness { frame, pivot };
        let err = |e: room25_core::openings::OpeningError| Failure::Usage(e.to_string());
        let programs = canned_programs(opening, n).map_err(err)?;
        let script = canned_script(opening, w, n).map_err(err)?;
        match self.format {
            Format::Text => {
                writeln!(self.out, "programs:")?;
                for p in &programs {
                    writeln!(self.out, "{p}")?;
                }
                write!(self.out, "script:\n{script}")?;
            }
            Format::Lines => {
                for p in &programs {
                    writeln!(self.out, "program\t{p}")?;
                }
                for t in &script.turns {
                    writeln!(self.out, "script\t{t}")?;
                }
            }
        }
        Ok(EXIT_OK)
    }
}

enum Want {
    NoWin,
    ForcedLoss,
}

fn cause(c: MoveCause) -> String {
    match c {
        MoveCause::Walk => "walk".into(),
        MoveCause::Pushed { by } => format!("pushed by {by}"),
        MoveCause::Vortex => "vortex".into(),
        MoveCause::Carried => "carried".into(),
    }
}

fn death(c: DeathCause) -> &'static str {
    match c {
        DeathCause::Mortal => "mortal room",
        DeathCause::RedRoom => "red room",
        DeathCause::Trap => "trap",
        DeathCause::Acid => "acid",
        DeathCause::Flood => "flood",
    }
}

fn describe(e: &LoggedEvent) -> String {
    let at = match e.step {
        Some(s) => format!("{}.{s}", e.turn),
        None => format!("{}.end", e.turn),
    };
    let what = match e.event {
        Event::TileRevealed { at, kind, flipped } => {
            let k = kind.map_or('?', TileKind::code);
            if flipped {
                format!("{at} flipped: {k}")
            } else {
                format!("{at} looked at: {k}")
            }
        }
        Event::CharacterMoved {
            who,
            from,
            to,
            cause: c,
        } => format!("{who} {from} -> {to} ({})", cause(c)),
        Event::LineShifted { shift, by } => format!("{by} shifts {shift}"),
        Event::Death { who, at, cause } => format!("{who} dies at {at} ({})", death(cause)),
        Event::VictorySlide { shift } => format!("exit slides out with {shift}"),
        Event::TurnEnded { turn } => format!("turn {turn} ends"),
    };
    format!("{at:>6}  {what}")
}

fn record(e: &Event) -> String {
    match *e {
        Event::TileRevealed { at, kind, flipped } => {
            format!(
                "reveal\t{at}\t{}\t{}",
                kind.map_or('?', TileKind::code),
                if flipped { "flip" } else { "look" }
            )
        }
        Event::CharacterMoved {
            who,
            from,
            to,
            cause: c,
        } => format!("move\t{who}\t{from}\t{to}\t{}", cause(c)),
        Event::LineShifted { shift, by } => format!("shift\t{by}\t{shift}"),
        Event::Death { who, at, cause } => format!("death\t{who}\t{at}\t{}", death(cause)),
        Event::VictorySlide { shift } => format!("victory\t{shift}"),
        Event::TurnEnded { turn } => format!("end\t{turn}"),
    }
}

fn outcome_text(o: &Outcome) -> String {
    match *o {
        Outcome::Won { turn, deaths } => format!("Won at turn {turn} with {deaths} death(s)"),
        Outcome::Lost { turn, who, cause } => {
            format!("Lost at turn {turn}: {who} died ({})", death(cause))
        }
        Outcome::InProgress => "InProgress".into(),
    }
}

fn outcome_record(o: &Outcome) -> String {
    match *o {
        Outcome::Won { turn, deaths } => format!("won\t{turn}\t{deaths}"),
        Outcome::Lost { turn, who, cause } => format!("lost\t{turn}\t{who}\t{}", death(cause)),
        Outcome::InProgress => "in_progress".into(),
    }
}

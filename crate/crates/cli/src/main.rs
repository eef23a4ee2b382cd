//! `paritylab`: solve parity games, expand transduction games, and work
//! with parity tree automata from the command line.

mod report;

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use paritylab::corpus::{self, GenSpec, Parity};
use paritylab::even::check_solution;
use paritylab::format::{parse_game, write_game};
use paritylab::guidance::{check_preservation, guide_tree, pump_check, pump_tree, GuidingFunction};
use paritylab::reg::lehtinen::{default_registers, solve_lehtinen};
use paritylab::reg::{expand_reg, RegSpec, ResetReading};
use paritylab::solve::{solve, solve_checked, Solver};
use paritylab::synthesis::{compose, probe_bound, ComposeMode, ProbeConfig};
use paritylab::tree::{acceptance_game, is_empty, membership_with, RegularTree, TreeAutomaton};
use paritylab::{Error, ParityGame, Player, PriorityIndex, DEFAULT_STATE_CAP};
use report::RunReport;
use serde_json::json;
use sha2::{Digest, Sha256};

#[derive(Parser)]
#[command(name = "paritylab", version, about)]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (default: logical cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Bound on materialized configurations.
    #[arg(long, global = true, env = "PARITYLAB_STATE_CAP", default_value_t = DEFAULT_STATE_CAP)]
    state_cap: usize,
    /// Add a rejecting sink to incomplete automata instead of failing.
    #[arg(long, global = true)]
    complete: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverChoice {
    Zielonka,
    Spm,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Reading {
    Pre,
    Post,
}

impl From<Reading> for ResetReading {
    fn from(r: Reading) -> Self {
        match r {
            Reading::Pre => ResetReading::Pre,
            Reading::Post => ResetReading::Post,
        }
    }
}

#[derive(Args)]
struct RegArgs {
    /// Output index, e.g. `2..3`.
    #[arg(long = "J", value_name = "LO..HI")]
    j: PriorityIndex,
    /// Counter bound.
    #[arg(long = "N", value_name = "N")]
    n: u32,
    #[arg(long, value_enum, default_value = "pre")]
    reset_reading: Reading,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a parity game.
    Solve {
        game: PathBuf,
        #[arg(long, value_enum, default_value = "zielonka")]
        solver: SolverChoice,
    },
    /// Solve the transduction game Reg{J}{N} over a game.
    Reg {
        game: PathBuf,
        #[command(flatten)]
        reg: RegArgs,
        /// Write the expanded game here (and its labels next to it).
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Solve the classic register game and compare with the plain winner.
    Lehtinen {
        game: PathBuf,
        /// Register count (default: ceil(log2 |V|) + 1).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Decide whether an automaton accepts a regular tree.
    Membership { automaton: PathBuf, tree: PathBuf },
    /// Decide emptiness, printing a witness tree when non-empty.
    Empty {
        automaton: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the acceptance game of an automaton and a tree.
    Agame {
        automaton: PathBuf,
        tree: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Compose an automaton with the configuration automaton of Reg{J}{N}.
    Compose {
        automaton: PathBuf,
        #[command(flatten)]
        reg: RegArgs,
        #[arg(long, default_value = "acceptance-game")]
        mode: ComposeMode,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Compare membership with the transduction game for N = 0..=n-max.
    Probe {
        automaton: PathBuf,
        #[arg(long = "J", value_name = "LO..HI")]
        j: PriorityIndex,
        /// Directory of tree files (`*.json`, read in name order).
        #[arg(long)]
        trees: PathBuf,
        #[arg(long, default_value_t = 3)]
        n_max: u32,
        #[arg(long, value_enum, default_value = "pre")]
        reset_reading: Reading,
    },
    /// Guided runs and checks on a pair of automata.
    Guide {
        a: PathBuf,
        b: PathBuf,
        guide: PathBuf,
        #[command(subcommand)]
        action: GuideAction,
    },
    /// Generate seeded instances.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
}

#[derive(Subcommand)]
enum GuideAction {
    /// Guide A with B's accepting run over a tree and write A's run.
    Apply {
        tree: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check that guided runs accept on every tree of a directory.
    Preserve { trees: PathBuf },
    /// Search the guided product over a tree for a pumpable violation.
    Pump {
        tree: PathBuf,
        /// Write the pumped tree of the first violation here.
        #[arg(long)]
        pumped: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    size: usize,
    #[arg(long, default_value = "0..6")]
    index: PriorityIndex,
    #[arg(long, default_value_t = 3)]
    branching: usize,
    #[arg(long, default_value_t = 2)]
    letters: usize,
    /// Output file (a directory for `pair`); stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

impl GenArgs {
    fn spec(&self) -> GenSpec {
        GenSpec::new(self.seed, self.size)
            .with_index(self.index)
            .with_branching(self.branching)
            .with_letters(self.letters)
    }
}

#[derive(Subcommand)]
enum GenKind {
    Game(GenArgs),
    Lasso {
        #[command(flatten)]
        args: GenArgs,
        #[arg(long, default_value = "odd")]
        parity: Parity,
    },
    Automaton(GenArgs),
    Tree(GenArgs),
    Pair(GenArgs),
}

/// Reads a file, or stdin for `-`, recording its hash.
fn read(report: &mut RunReport, name: &str, path: &Path) -> Result<String> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    report.input(name, hex::encode(Sha256::digest(text.as_bytes())));
    Ok(text)
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

struct Ctx {
    cap: usize,
    complete: bool,
}

impl Ctx {
    fn game(&self, r: &mut RunReport, path: &Path) -> Result<ParityGame> {
        Ok(parse_game(&read(r, "game", path)?)?)
    }

    fn automaton(&self, r: &mut RunReport, name: &str, path: &Path) -> Result<TreeAutomaton> {
        let text = read(r, name, path)?;
        Ok(if self.complete {
            TreeAutomaton::from_json_completed(&text)?
        } else {
            TreeAutomaton::from_json(&text)?
        })
    }

    fn tree(&self, r: &mut RunReport, name: &str, path: &Path) -> Result<RegularTree> {
        Ok(RegularTree::from_json(&read(r, name, path)?)?)
    }

    fn trees(&self, r: &mut RunReport, dir: &Path) -> Result<Vec<RegularTree>> {
        let mut paths: Vec<PathBuf> = fs::read_dir(dir)
            .with_context(|| format!("reading {}", dir.display()))?
            .map(|e| e.map(|e| e.path()))
            .collect::<std::io::Result<_>>()?;
        paths.retain(|p| p.extension().is_some_and(|e| e == "json"));
        paths.sort();
        if paths.is_empty() {
            return Err(Error::EmptyCorpus.into());
        }
        paths
            .iter()
            .map(|p| {
                let name = p.file_name().expect("file").to_string_lossy().into_owned();
                self.tree(r, &name, p)
            })
            .collect()
    }
}

fn winner_name(p: Player) -> &'static str {
    match p {
        Player::Eve => "eve",
        Player::Adam => "adam",
    }
}

fn run(cli: Cli, r: &mut RunReport) -> Result<()> {
    let ctx = Ctx { cap: cli.state_cap, complete: cli.complete };
    r.config("state_cap", ctx.cap);
    match cli.command {
        Command::Solve { game, solver } => {
            r.phase("parse");
            let g = ctx.game(r, &game)?;
            r.phase("solve");
            let (name, result) = match solver {
                SolverChoice::Zielonka => ("zielonka", solve(&g, Solver::Zielonka)),
                SolverChoice::Spm => ("spm", solve(&g, Solver::ProgressMeasures)),
                SolverChoice::Both => ("both", solve_checked(&g)?),
            };
            r.config("solver", name);
            r.phase("check");
            check_solution(&g, &result)?;
            r.verdict("winner", winner_name(result.winner(g.initial())));
            r.verdict("eve_region", result.eve_region());
            r.verdict("adam_region", result.adam_region());
            let strategy = |p: Player| -> Vec<(usize, usize)> {
                result
                    .region(p)
                    .into_iter()
                    .filter(|&v| g.owner(v) == p)
                    .filter_map(|v| result.strategy(p).get(v).map(|e| (v, g.edge(e).dst)))
                    .collect()
            };
            r.verdict("eve_strategy", json!(strategy(Player::Eve)));
            r.verdict("adam_strategy", json!(strategy(Player::Adam)));
            if matches!(solver, SolverChoice::Both) {
                r.verdict("diff", json!(Vec::<usize>::new()));
            }
        }
        Command::Reg { game, reg, emit } => {
            r.phase("parse");
            let g = ctx.game(r, &game)?;
            let spec = RegSpec::new(g.index(), reg.j, reg.n)?.with_reset(reg.reset_reading.into());
            r.config("reset_reading", spec.reset().to_string());
            r.config("solver", Solver::default().to_string());
            r.phase("expand");
            let exp = expand_reg(&g, &spec, ctx.cap)?;
            r.phase("solve");
            let result = solve(&exp.game, Solver::default());
            r.verdict("J", reg.j.to_string());
            r.verdict("N", reg.n);
            r.verdict("winner", winner_name(result.winner(exp.game.initial())));
            r.verdict("configurations", exp.game.vertex_count());
            if let Some(path) = emit {
                r.phase("emit");
                write(&path, &write_game(&exp.game))?;
                let mut labels = path.clone().into_os_string();
                labels.push(".labels");
                write(Path::new(&labels), &exp.sidecar())?;
            }
        }
        Command::Lehtinen { game, k } => {
            r.phase("parse");
            let g = ctx.game(r, &game)?;
            let k = k.unwrap_or_else(|| default_registers(g.vertex_count()));
            r.config("solver", Solver::default().to_string());
            r.phase("expand+solve");
            let (w, size) = solve_lehtinen(&g, k, Solver::default(), ctx.cap)?;
            r.phase("plain");
            let plain = solve(&g, Solver::default()).winner(g.initial());
            r.verdict("registers", k);
            r.verdict("winner", winner_name(w));
            r.verdict("plain_winner", winner_name(plain));
            r.verdict("agrees", w == plain);
            r.verdict("configurations", size);
        }
        Command::Membership { automaton, tree } => {
            let a = ctx.automaton(r, "automaton", &automaton)?;
            let t = ctx.tree(r, "tree", &tree)?;
            r.phase("solve");
            let z = membership_with(&a, &t, Solver::Zielonka)?;
            let s = membership_with(&a, &t, Solver::ProgressMeasures)?;
            if z != s {
                return Err(Error::Consistency("solvers disagree on membership".into()).into());
            }
            r.config("solver", "both");
            r.verdict("member", z);
        }
        Command::Empty { automaton, output } => {
            let a = ctx.automaton(r, "automaton", &automaton)?;
            r.phase("solve");
            let e = is_empty(&a);
            r.verdict("empty", e.empty);
            if let Some(w) = e.witness {
                r.verdict("witness_nodes", w.len());
                match output {
                    Some(path) => write(&path, &w.to_json())?,
                    None => r.verdict("witness", serde_json::from_str::<serde_json::Value>(&w.to_json())?),
                }
            }
        }
        Command::Agame { automaton, tree, output } => {
            let a = ctx.automaton(r, "automaton", &automaton)?;
            let t = ctx.tree(r, "tree", &tree)?;
            r.phase("build");
            let ag = acceptance_game(&a, &t)?;
            write(&output, &write_game(&ag.game))?;
            let mut labels = output.clone().into_os_string();
            labels.push(".labels");
            write(Path::new(&labels), &ag.sidecar(&a))?;
            r.verdict("vertices", ag.game.vertex_count());
            r.verdict("edges", ag.game.edge_count());
        }
        Command::Compose { automaton, reg, mode, output } => {
            let a = ctx.automaton(r, "automaton", &automaton)?;
            let spec = RegSpec::new(a.index(), reg.j, reg.n)?.with_reset(reg.reset_reading.into());
            r.config("reset_reading", spec.reset().to_string());
            r.phase("compose");
            let b = compose(&a, &spec, mode, ctx.cap)?;
            write(&output, &b.automaton.to_json_with_provenance(b.provenance))?;
            r.verdict("states", b.automaton.states().len());
            r.verdict("transitions", b.automaton.transitions().len());
            r.verdict("index", b.automaton.index().to_string());
        }
        Command::Probe { automaton, j, trees, n_max, reset_reading } => {
            let a = ctx.automaton(r, "automaton", &automaton)?;
            let corpus = ctx.trees(r, &trees)?;
            let config = ProbeConfig { reset: reset_reading.into(), solver: Solver::default(), cap: ctx.cap };
            r.config("reset_reading", config.reset.to_string());
            r.config("solver", config.solver.to_string());
            r.phase("probe");
            let report = probe_bound(&a, j, &corpus, n_max, config)?;
            r.verdict("least_n", json!(report.least_n));
            r.verdict("probe", serde_json::to_value(&report)?);
            if let Some(&(t, n)) = report.fatal.first() {
                return Err(Error::Consistency(format!("rejected tree {t} is won by Eve at N = {n}")).into());
            }
        }
        Command::Guide { a, b, guide, action } => {
            let a = ctx.automaton(r, "a", &a)?;
            let b = ctx.automaton(r, "b", &b)?;
            let g = GuidingFunction::from_json(&a, &b, &read(r, "guide", &guide)?)?;
            match action {
                GuideAction::Apply { tree, output } => {
                    let t = ctx.tree(r, "tree", &tree)?;
                    r.phase("guide");
                    let inst = guide_tree(&a, &b, &g, &t)?.ok_or(Error::NotAccepted(0))?;
                    let run = serde_json::to_value(&inst.guided.run)?;
                    r.verdict("run_nodes", inst.guided.run.len());
                    r.verdict("pairing", json!(inst.guided.pairing));
                    match output {
                        Some(path) => write(&path, &(serde_json::to_string_pretty(&run)? + "\n"))?,
                        None => r.verdict("run", run),
                    }
                }
                GuideAction::Preserve { trees } => {
                    let corpus = ctx.trees(r, &trees)?;
                    r.phase("check");
                    let report = check_preservation(&a, &b, &g, &corpus)?;
                    r.verdict("holds", report.holds);
                    r.verdict("cases", serde_json::to_value(&report.cases)?);
                }
                GuideAction::Pump { tree, pumped } => {
                    let t = ctx.tree(r, "tree", &tree)?;
                    r.phase("pump");
                    let inst = guide_tree(&a, &b, &g, &t)?.ok_or(Error::NotAccepted(0))?;
                    let gr = &inst.guided;
                    let report = pump_check(&a, &b, &g, &gr.run, &inst.rho_b, &gr.pairing)?;
                    r.verdict("segments", report.segments);
                    r.verdict("violations", serde_json::to_value(&report.violations)?);
                    if let (Some(path), Some(v)) = (pumped, report.violations.first()) {
                        write(&path, &pump_tree(&t, &v.u, &v.v)?.to_json())?;
                    }
                }
            }
        }
        Command::Gen { kind } => generate(kind, r)?,
    }
    Ok(())
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(path) => write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn generate(kind: GenKind, r: &mut RunReport) -> Result<()> {
    let (args, text) = match kind {
        GenKind::Game(args) => {
            let text = write_game(&corpus::gen_game(&args.spec())?);
            (args, text)
        }
        GenKind::Lasso { args, parity } => {
            let text = write_game(&corpus::gen_lasso(&args.spec(), parity)?);
            (args, text)
        }
        GenKind::Automaton(args) => {
            let text = corpus::gen_automaton(&args.spec())?.to_json();
            (args, text)
        }
        GenKind::Tree(args) => {
            let text = corpus::gen_tree(&args.spec())?.to_json();
            (args, text)
        }
        GenKind::Pair(args) => {
            let dir = args.output.clone().ok_or_else(|| anyhow!("`gen pair` needs an output directory"))?;
            let p = corpus::gen_guided_pair(&args.spec())?;
            fs::create_dir_all(dir.join("trees"))?;
            write(&dir.join("a.json"), &p.a.to_json())?;
            write(&dir.join("b.json"), &p.b.to_json())?;
            write(&dir.join("guide.json"), &p.g.to_json(&p.a, &p.b))?;
            for (k, t) in p.corpus.iter().enumerate() {
                write(&dir.join(format!("trees/t{k}.json")), &t.to_json())?;
            }
            r.verdict("trees", p.corpus.len());
            return Ok(());
        }
    };
    if args.output.is_none() {
        print!("{text}");
        return Ok(());
    }
    emit(&args.output, &text)?;
    r.verdict("sha256", hex::encode(Sha256::digest(text.as_bytes())));
    Ok(())
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::StateCap { .. }) => 4,
        Some(Error::Consistency(_)) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        paritylab::par::configure_threads(n);
    }
    let json = cli.json;
    let quiet = matches!(&cli.command, Command::Gen { kind } if !matches!(kind, GenKind::Pair(_)) && gen_to_stdout(kind));
    let name = command_name(&cli.command);
    let mut report = RunReport::new(name);
    match run(cli, &mut report) {
        Ok(()) => {
            if !quiet {
                report.print(json);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let code = exit_code(&e);
            if json {
                let body = json!({"command": name, "error": format!("{e:#}"), "exit_code": code});
                println!("{}", serde_json::to_string_pretty(&body).expect("serializable"));
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(code)
        }
    }
}

fn gen_to_stdout(kind: &GenKind) -> bool {
    let args = match kind {
        GenKind::Game(a) | GenKind::Automaton(a) | GenKind::Tree(a) | GenKind::Pair(a) => a,
        GenKind::Lasso { args, .. } => args,
    };
    args.output.is_none()
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Solve { .. } => "solve",
        Command::Reg { .. } => "reg",
        Command::Lehtinen { .. } => "lehtinen",
        Command::Membership { .. } => "membership",
        Command::Empty { .. } => "empty",
        Command::Agame { .. } => "agame",
        Command::Compose { .. } => "compose",
        Command::Probe { .. } => "probe",
        Command::Guide { action, .. } => match action {
            GuideAction::Apply { .. } => "guide apply",
            GuideAction::Preserve { .. } => "guide preserve",
            GuideAction::Pump { .. } => "guide pump",
        },
        Command::Gen { kind } => match kind {
            GenKind::Game(_) => "gen game",
            GenKind::Lasso { .. } => "gen lasso",
            GenKind::Automaton(_) => "gen automaton",
            GenKind::Tree(_) => "gen tree",
            GenKind::Pair(_) => "gen pair",
        },
    }
}


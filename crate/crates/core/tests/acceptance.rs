//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any fails.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use paritylab::corpus::{gen_adam_graph, gen_automaton, gen_game, gen_guided_pair, gen_lasso, gen_tree, violating_pair, GenSpec, GuidedPair, Parity};
use paritylab::even::{check_solution, is_even_graph};
use paritylab::format::{parse_game, write_game};
use paritylab::guidance::{check_preservation, guide_tree, guided_reg_strategy, pump_check, pump_tree, GuidingFunction};
use paritylab::reg::lehtinen::{default_registers, solve_lehtinen};
use paritylab::reg::{solve_reg, RegSpec, ResetReading};
use paritylab::solve::{solve, solve_progress_measures, solve_zielonka, Solver};
use paritylab::synthesis::{compose, probe_bound, ComposeMode, ProbeConfig};
use paritylab::tree::{acceptance_game, examples, membership, membership_with, RegularTree, TreeAutomaton};
use paritylab::{par, Player, PriorityIndex, DEFAULT_STATE_CAP};

const SOLVER_GAMES: u64 = 1000;
const SOLVER_BUDGET: Duration = Duration::from_secs(60);
const ODD_LASSOS: u64 = 200;
const NON_EVEN_GRAPHS: usize = 50;
const BASELINE_GAMES: u64 = 300;
const GUIDED_PAIRS: u64 = 50;
const COMPOSE_INSTANCES: u64 = 100;
const PRODUCT_LIMIT: usize = 200;
const VIOLATING_PAIRS: u64 = 10;

fn idx(lo: u32, hi: u32) -> PriorityIndex {
    PriorityIndex::new(lo, hi).unwrap()
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn solver_cross_validation() -> Outcome {
    let start = Instant::now();
    let seeds: Vec<u64> = (0..SOLVER_GAMES).collect();
    let failures: Vec<String> = par::map(&seeds, |&seed| {
        let spec = GenSpec::new(seed, 50).with_index(idx(0, 6)).with_branching(4);
        let g = gen_game(&spec).unwrap();
        let (z, s) = (solve_zielonka(&g), solve_progress_measures(&g));
        if z.winners != s.winners {
            return Some(format!("seed {seed}: partitions differ"));
        }
        for r in [&z, &s] {
            if let Err(e) = check_solution(&g, r) {
                return Some(format!("seed {seed}: {e}"));
            }
        }
        None
    })
    .into_iter()
    .flatten()
    .collect();
    let took = start.elapsed();
    outcome(
        failures.is_empty() && took < SOLVER_BUDGET,
        format!("{SOLVER_GAMES} games, {} failures, {:.1}s (budget {}s) {}", failures.len(), took.as_secs_f64(), SOLVER_BUDGET.as_secs(), failures.first().cloned().unwrap_or_default()),
    )
}

fn rejecting_stays_rejecting() -> Outcome {
    let mut graphs = Vec::new();
    for seed in 0..ODD_LASSOS {
        let spec = GenSpec::new(seed, 8).with_index(idx(0, 3));
        graphs.push((format!("lasso {seed}"), gen_lasso(&spec, Parity::Odd).unwrap()));
    }
    let mut seed = 10_000;
    let mut found = 0;
    while found < NON_EVEN_GRAPHS {
        let spec = GenSpec::new(seed, 6).with_index(idx(0, 3)).with_branching(2);
        let g = gen_adam_graph(&spec).unwrap();
        if !is_even_graph(g.graph()).even {
            graphs.push((format!("graph {seed}"), g));
            found += 1;
        }
        seed += 1;
    }
    let mut tasks = Vec::new();
    for k in 0..graphs.len() {
        for j in [idx(1, 2), idx(2, 3), idx(1, 4), idx(2, 5)] {
            for n in 0..=3 {
                for reset in [ResetReading::Pre, ResetReading::Post] {
                    tasks.push((k, j, n, reset));
                }
            }
        }
    }
    let failures: Vec<String> = par::map(&tasks, |&(k, j, n, reset)| {
        let (name, g) = &graphs[k];
        let spec = RegSpec::new(g.index(), j, n).unwrap().with_reset(reset);
        match solve_reg(g, &spec, Solver::default(), DEFAULT_STATE_CAP) {
            Ok(s) if s.winner == Player::Adam => None,
            Ok(_) => Some(format!("{name} J={j} N={n} {reset}: Eve wins")),
            Err(e) => Some(format!("{name} J={j} N={n} {reset}: {e}")),
        }
    })
    .into_iter()
    .flatten()
    .collect();
    outcome(
        failures.is_empty(),
        format!("{} graphs x {} settings, {} exceptions {}", graphs.len(), tasks.len() / graphs.len(), failures.len(), failures.first().cloned().unwrap_or_default()),
    )
}

fn classic_register_baseline() -> Outcome {
    let seeds: Vec<u64> = (0..BASELINE_GAMES).collect();
    let failures: Vec<String> = par::map(&seeds, |&seed| {
        let spec = GenSpec::new(seed, 32).with_index(idx(0, 4)).with_branching(3);
        let g = gen_game(&spec).unwrap();
        let plain = solve(&g, Solver::default()).winner(g.initial());
        let k = default_registers(g.vertex_count());
        match solve_lehtinen(&g, k, Solver::default(), DEFAULT_STATE_CAP) {
            Ok((w, _)) if w == plain => None,
            Ok((w, _)) => Some(format!("seed {seed}: register game {w}, plain {plain}")),
            Err(e) => Some(format!("seed {seed}: {e}")),
        }
    })
    .into_iter()
    .flatten()
    .collect();
    outcome(
        failures.is_empty(),
        format!("{BASELINE_GAMES} games, {} exceptions {}", failures.len(), failures.first().cloned().unwrap_or_default()),
    )
}

struct PairOutcome {
    seed: u64,
    pair: GuidedPair,
    preserved: bool,
}

fn guided_pairs() -> Vec<PairOutcome> {
    let seeds: Vec<u64> = (0..GUIDED_PAIRS).collect();
    par::map(&seeds, |&seed| {
        let pair = gen_guided_pair(&GenSpec::new(seed, 3)).unwrap();
        let preserved = check_preservation(&pair.a, &pair.b, &pair.g, &pair.corpus).unwrap().holds;
        PairOutcome { seed, pair, preserved }
    })
}

fn guided_strategy(pairs: &[PairOutcome]) -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for p in pairs.iter().filter(|p| p.preserved) {
        let (a, b) = (&p.pair.a, &p.pair.b);
        let n = (a.states().len() * b.states().len() + 1) as u32;
        let spec = RegSpec::new(a.index(), b.index(), n).unwrap();
        for (k, t) in p.pair.corpus.iter().enumerate() {
            let inst = guide_tree(a, b, &p.pair.g, t).unwrap().expect("corpus trees are accepted");
            let g = &inst.guided;
            match guided_reg_strategy(a, b, &g.run, &inst.rho_b, &g.pairing, &spec, DEFAULT_STATE_CAP) {
                Ok(v) if v.verdict => {}
                Ok(_) => failures.push(format!("pair {} tree {k}: verdict false", p.seed)),
                Err(e) => failures.push(format!("pair {} tree {k}: {e}", p.seed)),
            }
            checked += 1;
        }
    }
    let passing = pairs.iter().filter(|p| p.preserved).count();
    outcome(
        failures.is_empty() && passing > 0,
        format!("{passing}/{} pairs preserve acceptance, {checked} runs, {} exceptions {}", pairs.len(), failures.len(), failures.first().cloned().unwrap_or_default()),
    )
}

fn backward_equivalence() -> Outcome {
    let seeds: Vec<u64> = (0..COMPOSE_INSTANCES).collect();
    let results: Vec<(bool, Option<String>)> = par::map(&seeds, |&seed| {
        let lo = (seed % 3) as u32 + 1;
        let hi = lo + ((seed / 3) % (4 - lo as u64)) as u32;
        let aspec = GenSpec::new(seed, 4).with_index(idx(lo, hi)).with_branching(2);
        let a = gen_automaton(&aspec).unwrap();
        let t = gen_tree(&GenSpec::new(seed + 7_000, 6)).unwrap();
        let j = if seed % 2 == 0 { idx(2, 3) } else { idx(1, 2) };
        let n = (seed % 3) as u32;
        let reset = if seed % 4 < 2 { ResetReading::Pre } else { ResetReading::Post };
        let spec = RegSpec::new(a.index(), j, n).unwrap().with_reset(reset);
        let composed = match compose(&a, &spec, ComposeMode::AcceptanceGame, DEFAULT_STATE_CAP) {
            Ok(c) => c.automaton,
            Err(e) => return (false, Some(format!("seed {seed}: {e}"))),
        };
        let in_j = composed.transitions().iter().all(|tr| tr.priorities.iter().all(|&p| j.contains(p)));
        if !in_j {
            return (false, Some(format!("seed {seed}: priority outside {j}")));
        }
        let ag = acceptance_game(&a, &t).unwrap();
        for solver in [Solver::Zielonka, Solver::ProgressMeasures] {
            let game = solve_reg(&ag.game, &spec, solver, DEFAULT_STATE_CAP).unwrap().winner == Player::Eve;
            let member = membership_with(&composed, &t, solver).unwrap();
            if game != member {
                return (false, Some(format!("seed {seed} ({solver}): membership {member}, game {game}")));
            }
        }
        (membership(&a, &t).unwrap(), None)
    });
    let failures: Vec<&String> = results.iter().filter_map(|r| r.1.as_ref()).collect();
    let accepted = results.iter().filter(|r| r.0).count();
    outcome(
        failures.is_empty(),
        format!("{COMPOSE_INSTANCES} instances ({accepted} accepted by A), {} exceptions {}", failures.len(), failures.first().map(|s| s.as_str()).unwrap_or_default()),
    )
}

fn pumping(pairs: &[PairOutcome]) -> Outcome {
    let mut failures = Vec::new();
    let mut products = 0;
    for p in pairs.iter().filter(|p| p.preserved) {
        let (a, b, g) = (&p.pair.a, &p.pair.b, &p.pair.g);
        for t in &p.pair.corpus {
            let inst = guide_tree(a, b, g, t).unwrap().expect("accepted");
            if inst.guided.run.len() > PRODUCT_LIMIT {
                continue;
            }
            products += 1;
            let r = pump_check(a, b, g, &inst.guided.run, &inst.rho_b, &inst.guided.pairing).unwrap();
            if let Some(v) = r.violations.first() {
                failures.push(format!("pair {}: violation at u={:?} v={:?}", p.seed, v.u, v.v));
            }
        }
    }
    let mut refuted = 0;
    for seed in 0..VIOLATING_PAIRS {
        let p = violating_pair(seed).unwrap();
        match refute(&p.a, &p.b, &p.g, &p.corpus[0]) {
            Ok(()) => refuted += 1,
            Err(e) => failures.push(format!("violating pair {seed}: {e}")),
        }
    }
    outcome(
        failures.is_empty() && refuted == VIOLATING_PAIRS,
        format!("{products} preserving products clean, {refuted}/{VIOLATING_PAIRS} violating pairs refuted {}", failures.first().cloned().unwrap_or_default()),
    )
}

fn refute(a: &TreeAutomaton, b: &TreeAutomaton, g: &GuidingFunction, t: &RegularTree) -> Result<(), String> {
    let inst = guide_tree(a, b, g, t).map_err(|e| e.to_string())?.ok_or("corpus tree rejected by B")?;
    let r = pump_check(a, b, g, &inst.guided.run, &inst.rho_b, &inst.guided.pairing).map_err(|e| e.to_string())?;
    let v = r.violations.first().ok_or("no violation reported")?;
    let pumped = pump_tree(t, &v.u, &v.v).map_err(|e| e.to_string())?;
    if !membership(b, &pumped).map_err(|e| e.to_string())? {
        return Err("pumped tree rejected by B".into());
    }
    if membership(a, &pumped).map_err(|e| e.to_string())? {
        return Err("pumped tree accepted by A".into());
    }
    let report = check_preservation(a, b, g, &[pumped]).map_err(|e| e.to_string())?;
    if report.holds {
        return Err("preservation holds on the pumped tree".into());
    }
    Ok(())
}

fn probe_sanity() -> Outcome {
    let mut failures = Vec::new();
    let corpus: Vec<RegularTree> = (0..5).map(|s| gen_tree(&GenSpec::new(s, 5)).unwrap()).collect();
    let universal = examples::universal(&["a", "b"]);
    let r = probe_bound(&universal, idx(2, 3), &corpus, 2, ProbeConfig::default()).unwrap();
    if r.least_n != Some(0) {
        failures.push(format!("universal automaton: least N {:?}", r.least_n));
    }
    let seeds: Vec<u64> = (0..30).collect();
    let reports = par::map(&seeds, |&seed| {
        let index = if seed % 2 == 0 { idx(1, 2) } else { idx(2, 3) };
        let a = gen_automaton(&GenSpec::new(seed, 3).with_index(index).with_branching(2)).unwrap();
        let trees: Vec<RegularTree> = (0..4).map(|k| gen_tree(&GenSpec::new(100 * seed + k, 4)).unwrap()).collect();
        let j = if seed % 3 == 0 { idx(2, 3) } else { index };
        (seed, probe_bound(&a, j, &trees, 2, ProbeConfig::default()).unwrap())
    });
    let mut rejected = 0;
    let mut anomalies = 0;
    let mut agreeing = 0;
    for (seed, r) in &reports {
        rejected += r.rows.iter().filter(|row| !row.member).count();
        anomalies += r.anomalies.len();
        agreeing += usize::from(r.least_n.is_some());
        if let Some((t, n)) = r.fatal.first() {
            failures.push(format!("automaton {seed}: rejected tree {t} won by Eve at N={n}"));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} automata, {rejected} rejected trees all won by Adam, {agreeing} with full agreement, {anomalies} monotonicity anomalies {}",
            reports.len(),
            failures.first().cloned().unwrap_or_default()
        ),
    )
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Serialized artifacts for a fixed seed.
fn artifacts() -> Vec<(&'static str, String)> {
    let game = gen_game(&GenSpec::new(8, 12)).unwrap();
    let automaton = gen_automaton(&GenSpec::new(8, 3).with_index(idx(1, 3))).unwrap();
    let tree = gen_tree(&GenSpec::new(8, 5)).unwrap();
    let pair = gen_guided_pair(&GenSpec::new(8, 2)).unwrap();
    vec![
        ("game.pg", write_game(&game)),
        ("automaton.json", automaton.to_json()),
        ("tree.json", tree.to_json()),
        ("guide_a.json", pair.a.to_json()),
        ("guide_b.json", pair.b.to_json()),
        ("guide.json", pair.g.to_json(&pair.a, &pair.b)),
    ]
}

fn reparse(name: &str, text: &str, a: &TreeAutomaton, b: &TreeAutomaton) -> String {
    match name {
        "game.pg" => write_game(&parse_game(text).unwrap()),
        "tree.json" => RegularTree::from_json(text).unwrap().to_json(),
        "guide.json" => GuidingFunction::from_json(a, b, text).unwrap().to_json(a, b),
        _ => TreeAutomaton::from_json(text).unwrap().to_json(),
    }
}

fn format_stability() -> Outcome {
    let first = artifacts();
    let second = artifacts();
    let mut failures = Vec::new();
    if std::env::var_os("PARITYLAB_UPDATE_GOLDEN").is_some() {
        for (name, text) in &first {
            std::fs::write(golden_dir().join(name), text).unwrap();
        }
    }
    let a = TreeAutomaton::from_json(&first[3].1).unwrap();
    let b = TreeAutomaton::from_json(&first[4].1).unwrap();
    for ((name, x), (_, y)) in first.iter().zip(&second) {
        if x != y {
            failures.push(format!("{name}: differs between runs"));
        }
        match std::fs::read_to_string(golden_dir().join(name)) {
            Ok(golden) if golden == *x => {}
            Ok(_) => failures.push(format!("{name}: differs from golden")),
            Err(e) => failures.push(format!("{name}: {e}")),
        }
        if reparse(name, x, &a, &b) != *x {
            failures.push(format!("{name}: round trip is not byte-stable"));
        }
    }
    outcome(
        failures.is_empty(),
        format!("{} formats, {} failures {}", first.len(), failures.len(), failures.first().cloned().unwrap_or_default()),
    )
}

fn main() -> ExitCode {
    let mut all = true;
    let mut run = |n: usize, name: &str, f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let o = f();
        all &= o.pass;
        println!(
            "criterion {n} [{}] {name}: {} ({:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail.trim_end(),
            start.elapsed().as_secs_f64()
        );
    };
    run(1, "solver cross-validation", &solver_cross_validation);
    run(2, "rejecting graphs stay rejecting", &rejecting_stays_rejecting);
    run(3, "classic register baseline", &classic_register_baseline);
    let pairs = guided_pairs();
    run(4, "guided strategy wins", &|| guided_strategy(&pairs));
    run(5, "composition matches the game", &backward_equivalence);
    run(6, "pumping", &|| pumping(&pairs));
    run(7, "probe sanity", &probe_sanity);
    run(8, "format stability", &format_stability);
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nsdcp::campaign::{run_campaign, to_json, CampaignKind, CampaignPlan, MatchStatus};
use nsdcp::domination::{build_np_gadget, domination_number, nonsplit_domination_number};
use nsdcp::expr::parse_graph;
use nsdcp::formulas::KnownFamily;
use nsdcp::graph::Graph;
use nsdcp::numbers::{
    random_configuration, NumberEngine, NumberKind, NumberOptions, NumberResult, Semantics,
};
use nsdcp::pebbling::{apply_move, weight, Configuration, Outcome};

const GAMMA_INSTANCE_LIMIT: Duration = Duration::from_secs(1);
const COVER_PATH_LIMIT: Duration = Duration::from_secs(120);
const WHEEL_COMPLETE_LIMIT: Duration = Duration::from_secs(300);
const SANDWICH_LIMIT: Duration = Duration::from_secs(600);
const CAMPAIGN_LIMIT: Duration = Duration::from_secs(1800);
const RANDOM_MOVES: usize = 10_000;
const SAMPLES: usize = 100;
const SEED: u64 = 0x5eed;

fn graph(expr: &str) -> Graph {
    parse_graph(expr).unwrap_or_else(|e| panic!("{expr}: {e}"))
}

/// Witness checks shared by every computed number.
#[derive(Default)]
struct Ledger {
    results: usize,
    witnesses_replayed: u64,
    worst_failures: Vec<String>,
    sample_failures: Vec<String>,
    monotone_failures: Vec<String>,
    monotone_checked: usize,
}

impl Ledger {
    /// Computes the number and runs the self-consistency checks on it.
    fn number(&mut self, expr: &str, kind: NumberKind, semantics: Semantics) -> NumberResult {
        let g = graph(expr);
        let engine = NumberEngine::new(&g, kind, semantics, NumberOptions::default()).unwrap();
        let result = engine.compute().unwrap_or_else(|e| panic!("{expr} {kind}: {e}"));
        self.results += 1;
        self.witnesses_replayed += result.stats.witnesses_replayed;
        let tag = format!("{expr} {kind}/{semantics}");

        let worst = engine.solve(&result.worst_witness).unwrap();
        if result.worst_witness.size() + 1 != result.value || worst.outcome != Outcome::Unsolvable {
            self.worst_failures.push(format!("{tag}: {}", result.worst_witness));
        }

        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ result.value);
        let (replayed, bad) = samples(&g, &engine, &mut rng, result.value, &tag);
        self.witnesses_replayed += replayed;
        self.sample_failures.extend(bad);
        if engine.goal().mode().is_monotone() {
            let (replayed, bad) = samples(&g, &engine, &mut rng, result.value + 1, &tag);
            self.witnesses_replayed += replayed;
            self.monotone_checked += SAMPLES;
            self.monotone_failures.extend(bad);
        }
        result
    }
}

/// Random configurations of `size` that fail to reach the goal, with the
/// number of witnesses replayed along the way.
fn samples(
    g: &Graph,
    engine: &NumberEngine,
    rng: &mut ChaCha8Rng,
    size: u64,
    tag: &str,
) -> (u64, Vec<String>) {
    let mut replayed = 0;
    let mut bad = Vec::new();
    for _ in 0..SAMPLES {
        let c = random_configuration(rng, g.vertex_count(), size as u32);
        let verdict = engine.solve(&c).unwrap();
        let reaches = verdict.witness.as_ref().is_some_and(|w| {
            replayed += 1;
            w.replay(g, &c)
                .is_ok_and(|end| engine.goal().is_satisfied_by(&end))
        });
        if !reaches {
            bad.push(format!("{tag}: {c}"));
        }
    }
    (replayed, bad)
}

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, id: &str, title: &str, pass: bool, detail: String) {
        if !pass {
            self.failures += 1;
        }
        println!("[{}] {id} {title}: {detail}", if pass { "PASS" } else { "FAIL" });
    }
}

fn gamma_ns_reproduction(report: &mut Report) {
    let mut cases: Vec<(String, usize)> = Vec::new();
    cases.extend((2..=7).map(|n| (format!("complete({n})"), 1)));
    cases.extend((4..=7).map(|n| (format!("wheel({n})"), 1)));
    cases.extend((4..=8).map(|n| (format!("path({n})"), n - 2)));
    cases.extend((5..=8).map(|n| (format!("cycle({n})"), n - 2)));
    let mut bad = Vec::new();
    let mut slowest = Duration::ZERO;
    for (expr, expected) in &cases {
        let started = Instant::now();
        let got = nonsplit_domination_number(&graph(expr)).unwrap();
        let took = started.elapsed();
        slowest = slowest.max(took);
        if got != *expected || took >= GAMMA_INSTANCE_LIMIT {
            bad.push(format!("{expr}: {got} (expected {expected}, {took:?})"));
        }
    }
    report.line(
        "1",
        "non-split domination numbers",
        bad.is_empty(),
        format!("{} instances, slowest {slowest:?}; {}", cases.len(), describe(&bad)),
    );
}

fn describe(bad: &[String]) -> String {
    if bad.is_empty() {
        "no discrepancies".into()
    } else {
        bad.join("; ")
    }
}

fn cover_of_paths(report: &mut Report, ledger: &mut Ledger) {
    let started = Instant::now();
    let mut bad = Vec::new();
    for n in 2..=5u32 {
        let r = ledger.number(&format!("path({n})"), NumberKind::Cover, Semantics::Contains);
        if r.value != (1 << n) - 1 {
            bad.push(format!("path({n}): {} (expected {})", r.value, (1 << n) - 1));
        }
    }
    let took = started.elapsed();
    report.line(
        "2",
        "cover pebbling number of paths",
        bad.is_empty() && took < COVER_PATH_LIMIT,
        format!("n=2..5 in {took:?}; {}", describe(&bad)),
    );
}

fn wheels_and_complete_graphs(report: &mut Report, ledger: &mut Ledger) {
    let started = Instant::now();
    let mut bad = Vec::new();
    for n in 5..=6 {
        let expr = format!("wheel({n})");
        let dcp = ledger.number(&expr, NumberKind::Dcp, Semantics::Contains);
        let nsdcp = ledger.number(&expr, NumberKind::Nsdcp, Semantics::Contains);
        if dcp.value != n - 2 {
            bad.push(format!("dcp({expr}) = {} (expected {})", dcp.value, n - 2));
        }
        if nsdcp.value != dcp.value {
            bad.push(format!("nsdcp({expr}) = {} != dcp {}", nsdcp.value, dcp.value));
        }
    }
    for n in 2..=6 {
        let expr = format!("complete({n})");
        let r = ledger.number(&expr, NumberKind::Nsdcp, Semantics::Contains);
        if r.value != 1 {
            bad.push(format!("nsdcp({expr}) = {}", r.value));
        }
    }
    let took = started.elapsed();
    report.line(
        "3",
        "wheel and complete graph numbers",
        bad.is_empty() && took < WHEEL_COMPLETE_LIMIT,
        format!("{took:?}; {}", describe(&bad)),
    );
    // same identity with n counting rim vertices only
    let shifted: Vec<String> = (5..=6)
        .map(|n| {
            let r = ledger.number(&format!("wheel({})", n + 1), NumberKind::Dcp, Semantics::Contains);
            format!("rim {n}: dcp(wheel({})) = {}, n - 2 = {}", n + 1, r.value, n - 2)
        })
        .collect();
    println!("       note: counting rim vertices only: {}", shifted.join("; "));
}

fn sandwich(report: &mut Report, ledger: &mut Ledger) {
    let mut corpus: Vec<String> = Vec::new();
    corpus.extend((2..=6).map(|n| format!("path({n})")));
    corpus.extend((3..=6).map(|n| format!("cycle({n})")));
    corpus.extend((4..=6).map(|n| format!("wheel({n})")));
    corpus.extend((2..=5).map(|n| format!("complete({n})")));
    corpus.extend((2..=4).map(|n| format!("middle(path({n}))")));
    corpus.extend((3..=4).map(|n| format!("middle(cycle({n}))")));
    corpus.push("middle(fan(3))".into());
    let started = Instant::now();
    let mut bad = Vec::new();
    for expr in &corpus {
        let dcp = ledger.number(expr, NumberKind::Dcp, Semantics::Contains).value;
        let nsdcp = ledger.number(expr, NumberKind::Nsdcp, Semantics::Contains).value;
        let cover = ledger.number(expr, NumberKind::Cover, Semantics::Contains).value;
        if !(dcp <= nsdcp && nsdcp <= cover) {
            bad.push(format!("{expr}: {dcp} / {nsdcp} / {cover}"));
        }
    }
    let took = started.elapsed();
    report.line(
        "4",
        "dcp <= nsdcp <= cover",
        bad.is_empty() && corpus.len() >= 15 && took < SANDWICH_LIMIT,
        format!("{} graphs in {took:?}; {}", corpus.len(), describe(&bad)),
    );
}

fn gadget_law(report: &mut Report) {
    let mut corpus: Vec<String> = Vec::new();
    corpus.extend((3..=6).map(|n| format!("path({n})")));
    corpus.extend((3..=6).map(|n| format!("cycle({n})")));
    corpus.extend((3..=5).map(|n| format!("complete({n})")));
    corpus.extend(["wheel(5)", "fan(5)", "middle(path(3))"].map(String::from));
    let mut bad = Vec::new();
    for expr in &corpus {
        let g = graph(expr);
        assert!(g.is_connected() && g.vertex_count() <= 7);
        let gamma = domination_number(&g).unwrap();
        let gamma_ns = nonsplit_domination_number(&build_np_gadget(&g).unwrap()).unwrap();
        if gamma_ns != gamma + 1 {
            bad.push(format!("{expr}: gamma_ns(G*) = {gamma_ns}, gamma(G) + 1 = {}", gamma + 1));
        }
    }
    report.line(
        "5",
        "gadget: gamma_ns(G*) = gamma(G) + 1",
        bad.is_empty(),
        format!("{} graphs; {}", corpus.len(), describe(&bad)),
    );
}

fn desk_plan() -> Vec<CampaignPlan> {
    let plan = |family, n_min, n_max| CampaignPlan {
        families: vec![family],
        n_min,
        n_max,
        kinds: vec![CampaignKind::Nsdcp],
        modes: vec![Semantics::Contains, Semantics::ExactSupport],
        ..CampaignPlan::default()
    };
    vec![
        plan(KnownFamily::MiddlePath, 2, 4),
        plan(KnownFamily::MiddleCycle, 3, 4),
    ]
}

fn large_plan() -> CampaignPlan {
    CampaignPlan {
        families: vec![
            KnownFamily::MiddlePath,
            KnownFamily::MiddleCycle,
            KnownFamily::MiddleWheel,
            KnownFamily::MiddleFan,
        ],
        n_min: 5,
        n_max: 8,
        ..CampaignPlan::default()
    }
}

/// Runs the desk-scale plans and the large-n plan; returns the JSON of
/// every report for the determinism check.
fn campaign(report: &mut Report) -> Vec<String> {
    let started = Instant::now();
    let mut bad = Vec::new();
    let mut jsons = Vec::new();
    let (mut rows, mut mismatches) = (0, 0);
    for plan in desk_plan() {
        let r = run_campaign(&plan, None).unwrap();
        jsons.push(to_json(&r).unwrap());
        for row in &r.rows {
            rows += 1;
            let tag = format!("{} n={} {}", row.family, row.n, row.mode);
            let detail = row.detail.as_ref();
            match (row.formula_value, row.oracle_value, row.status) {
                (Some(f), Some(o), MatchStatus::Yes) if f == o => {}
                (Some(f), Some(o), MatchStatus::No) if f != o => {
                    mismatches += 1;
                    let reverified = detail.is_some_and(|d| {
                        d.witnesses_reverified
                            && d.worst_witness.as_ref().is_some_and(|w| w.size() + 1 == o)
                            && (f > o || d.refutation.as_ref().is_some_and(|c| c.size() == f))
                    });
                    if !reverified {
                        bad.push(format!("{tag}: mismatch without a verified witness"));
                    }
                }
                _ => bad.push(format!("{tag}: row not populated ({:?})", row.status)),
            }
        }
    }
    let large = run_campaign(&large_plan(), None).unwrap();
    jsons.push(to_json(&large).unwrap());
    let mut formula_only = 0;
    for row in &large.rows {
        let tag = format!("{} n={} {}", row.family, row.n, row.mode);
        match row.status {
            MatchStatus::OracleSkipped if row.skipped_because.is_some() => formula_only += 1,
            MatchStatus::OracleSkipped => bad.push(format!("{tag}: skipped without naming a cap")),
            _ if row.oracle_value.is_none() => bad.push(format!("{tag}: row not populated")),
            _ => {}
        }
        if row.formula_value.is_none() {
            bad.push(format!("{tag}: formula missing"));
        }
    }
    let took = started.elapsed();
    report.line(
        "6",
        "formula versus oracle campaign",
        bad.is_empty() && took < CAMPAIGN_LIMIT,
        format!(
            "{rows} certified rows ({mismatches} mismatches, all with verified witnesses), \
             {formula_only} formula-only rows, {took:?}; {}",
            describe(&bad)
        ),
    );
    jsons
}

fn random_moves() -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let graphs: Vec<Graph> = ["path(5)", "cycle(6)", "wheel(6)", "middle(path(4))", "fan(5)"]
        .into_iter()
        .map(graph)
        .collect();
    let mut violations = 0;
    let mut moves = 0;
    while moves < RANDOM_MOVES {
        let g = &graphs[rng.gen_range(0..graphs.len())];
        let n = g.vertex_count();
        let c = Configuration::new((0..n).map(|_| rng.gen_range(0..12)).collect());
        let legal: Vec<(usize, usize)> = g
            .edges()
            .flat_map(|(a, b)| [(a, b), (b, a)])
            .filter(|&(u, _)| c.get(u) >= 2)
            .collect();
        if legal.is_empty() {
            continue;
        }
        let (u, v) = legal[rng.gen_range(0..legal.len())];
        let next = apply_move(g, &c, u, v).unwrap();
        let dt = g.distances();
        if (0..n).any(|t| weight(&next, t, &dt) > weight(&c, t, &dt)) {
            violations += 1;
        }
        moves += 1;
    }
    violations
}

fn properties(report: &mut Report, ledger: &Ledger, first_run: &[String]) {
    let violations = random_moves();
    let second_run: Vec<String> = {
        let mut jsons: Vec<String> = desk_plan()
            .iter()
            .map(|p| to_json(&run_campaign(p, None).unwrap()).unwrap())
            .collect();
        jsons.push(to_json(&run_campaign(&large_plan(), None).unwrap()).unwrap());
        jsons
    };
    let identical = first_run == second_run.as_slice();
    let pass = violations == 0
        && ledger.sample_failures.is_empty()
        && ledger.monotone_failures.is_empty()
        && identical;
    report.line(
        "7",
        "property suites",
        pass,
        format!(
            "{violations} weight violations in {RANDOM_MOVES} moves; {} witnesses replayed, {} bad; \
             {} of {} monotonicity samples unsolvable; campaign reports {}",
            ledger.witnesses_replayed,
            ledger.sample_failures.len(),
            ledger.monotone_failures.len(),
            ledger.monotone_checked,
            if identical { "byte-identical" } else { "differ" }
        ),
    );
}

fn self_consistency(report: &mut Report, ledger: &Ledger) {
    let pass = ledger.worst_failures.is_empty() && ledger.sample_failures.is_empty();
    let mut bad = ledger.worst_failures.clone();
    bad.extend(ledger.sample_failures.iter().cloned());
    report.line(
        "8",
        "oracle self-consistency",
        pass,
        format!(
            "{} results, worst witnesses unsolvable and {SAMPLES} samples at each value solvable; {}",
            ledger.results,
            describe(&bad)
        ),
    );
}

fn campaign_witness_numbers(ledger: &mut Ledger) {
    // the numbers behind the campaign rows also go through the witness checks
    for n in 2..=4 {
        for semantics in Semantics::ALL {
            ledger.number(&format!("middle(path({n}))"), NumberKind::Nsdcp, semantics);
        }
    }
    for n in 3..=4 {
        for semantics in Semantics::ALL {
            ledger.number(&format!("middle(cycle({n}))"), NumberKind::Nsdcp, semantics);
        }
    }
}

fn main() -> ExitCode {
    let started = Instant::now();
    let mut report = Report { failures: 0 };
    let mut ledger = Ledger::default();
    gamma_ns_reproduction(&mut report);
    cover_of_paths(&mut report, &mut ledger);
    wheels_and_complete_graphs(&mut report, &mut ledger);
    sandwich(&mut report, &mut ledger);
    gadget_law(&mut report);
    let jsons = campaign(&mut report);
    campaign_witness_numbers(&mut ledger);
    properties(&mut report, &ledger, &jsons);
    self_consistency(&mut report, &ledger);
    println!(
        "acceptance: {} of 8 criteria failed ({:?})",
        report.failures,
        started.elapsed()
    );
    if report.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

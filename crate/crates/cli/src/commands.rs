//! One function per subcommand; each fills in the report.

use crate::report::Report;
use crate::{
    input, AgsCmd, AtomsCmd, BaoCmd, CliError, Command, DualCmd, GameCmd, GraphCmd, ModeArg,
    MovesArg, NetCmd, StrategyArg, SuiteCmd, SuiteName, SymmetryArg,
};
use gralg::ags::{self, AgsModel, SuiteOptions};
use gralg::atoms::{AtomError, AtomStructure};
use gralg::bao::{
    ca_schemas, canonical_extension, check_axioms, check_ca_axioms, check_canonical_extension,
    check_discriminator, check_pea_axioms, parse_schemas, pea_schemas, AxiomCheckOptions,
    CheckError, FiniteBao, Signature,
};
use gralg::duality::{
    check_chain, check_step, lift, validate_atom_pmorphism, DualityError, EmbeddingCheckOptions,
    GraphChain,
};
use gralg::graph::{
    chromatic_number, girth, named, search_high_girth_chromatic, Graph, SearchError, SearchParams,
    VertexMap,
};
use gralg::networks::{
    boundary, exists_survives, first_incoherent, validate_network, GameOptions, GameStrategy,
    GameVerdict, Mode, MoveKind, SymmetryChoice, UfNetwork,
};
use gralg::report::CheckOutcome;
use serde_json::{json, Value};
use std::sync::Arc;
use std::time::Instant;

pub fn run(command: &Command, report: &mut Report) -> Result<(), CliError> {
    match command {
        Command::Graph(c) => graph(c, report),
        Command::Atoms(c) => atoms(c, report),
        Command::Bao(c) => bao(c, report),
        Command::Ags(c) => ags_cmd(c, report),
        Command::Net(c) => net(c, report),
        Command::Game(c) => game(c, report),
        Command::Dual(c) => dual(c, report),
        Command::Suite(c) => suite(c, report),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("result serializes")
}

fn graph(cmd: &GraphCmd, report: &mut Report) -> Result<(), CliError> {
    let n = report.config.n;
    report.result = Some(match cmd {
        GraphCmd::List => to_value(&named::names()),
        GraphCmd::Show { graph, dot } => {
            let g = input::graph(graph)?;
            if *dot {
                Value::String(g.to_dot(graph))
            } else {
                to_value(&g)
            }
        }
        GraphCmd::Chi { graph } => {
            let g = input::graph(graph)?;
            let (chi, coloring) = chromatic_number(&g);
            report.run("graph", || {
                vec![CheckOutcome::from_search(
                    "coloring-proper",
                    (!coloring.is_proper(&g)).then(|| json!({"colors": coloring.colors()})),
                    format!("the witness colouring is proper with {chi} colours"),
                )]
            });
            json!({"chi": chi, "coloring": coloring.colors()})
        }
        GraphCmd::Girth { graph } => json!({"girth": girth(&input::graph(graph)?)}),
        GraphCmd::Inflate { graph } => to_value(&input::graph(graph)?.inflate(n)),
        GraphCmd::Mycielski { graph } => to_value(&input::graph(graph)?.mycielskian()),
        GraphCmd::Search {
            girth: g,
            chi,
            budget,
        } => {
            let params = SearchParams {
                budget: *budget,
                ..SearchParams::new(*g, *chi, report.config.seed)
            };
            let hit = search_high_girth_chromatic(&params).map_err(|e| match e {
                SearchError::InvalidParams(..) => CliError::input("search", e),
                SearchError::NotFound(_) => CliError::resource("budget", e),
            })?;
            report.run("graph", || {
                let chi_now = chromatic_number(&hit.graph).0;
                let girth_now = girth(&hit.graph);
                vec![
                    CheckOutcome::from_search(
                        "certified-chi",
                        (chi_now != hit.chi || chi_now < *chi)
                            .then(|| json!({"claimed": hit.chi, "recomputed": chi_now})),
                        format!("χ = {chi_now} ≥ {chi}"),
                    ),
                    CheckOutcome::from_search(
                        "certified-girth",
                        (girth_now != hit.girth || girth_now.is_some_and(|x| x < *g))
                            .then(|| json!({"claimed": hit.girth, "recomputed": girth_now})),
                        format!("girth ≥ {g}"),
                    ),
                ]
            });
            to_value(&hit)
        }
    });
    Ok(())
}

fn atoms(cmd: &AtomsCmd, report: &mut Report) -> Result<(), CliError> {
    let AtomsCmd::Enumerate { graph, count_only } = cmd;
    let g = input::graph(graph)?;
    let s = input::atom_structure(&g, report.config.n, report.config.atom_bound)?;
    let mut result = json!({
        "n": s.n(),
        "count": s.len(),
        "digest": format!("{:016x}", s.digest()),
    });
    if !count_only {
        result["atoms"] = to_value(&s.atoms());
    }
    report.result = Some(result);
    Ok(())
}

fn algebra(graph: &str, report: &Report) -> Result<(AtomStructure, FiniteBao), CliError> {
    let g = input::graph(graph)?;
    let s = input::atom_structure(&g, report.config.n, report.config.atom_bound)?;
    let alg = FiniteBao::complex_algebra(&s, Signature::Pea);
    Ok((s, alg))
}

fn axiom_options(report: &Report) -> AxiomCheckOptions {
    AxiomCheckOptions {
        samples: report.config.sample_count,
        seed: report.config.seed,
        ..AxiomCheckOptions::default()
    }
}

fn canext_outcomes(alg: &FiniteBao, samples: usize, seed: u64) -> Vec<CheckOutcome> {
    match canonical_extension(alg) {
        Ok(ext) => check_canonical_extension(alg, &ext, samples, seed),
        Err(e) => vec![CheckOutcome::fail(
            "canext-construct",
            json!({"error": e}),
            "the ultrafilter structure exists",
        )],
    }
}

fn timed_axioms<F>(report: &mut Report, group: &str, f: F) -> Result<(), CliError>
where
    F: FnOnce() -> Result<Vec<CheckOutcome>, CheckError>,
{
    let start = Instant::now();
    let outcomes = f().map_err(|e| CliError::input("axioms", e))?;
    report.extend(group, outcomes, start.elapsed().as_secs_f64() * 1e3);
    Ok(())
}

fn bao(cmd: &BaoCmd, report: &mut Report) -> Result<(), CliError> {
    let (samples, seed) = (report.config.sample_count, report.config.seed);
    match cmd {
        BaoCmd::Build { graph } => {
            let (s, alg) = algebra(graph, report)?;
            report.result = Some(json!({
                "n": s.n(),
                "atoms": alg.size(),
                "signature": Signature::Pea,
                "digest": format!("{:016x}", s.digest()),
            }));
        }
        BaoCmd::Check {
            graph,
            axioms,
            inject_fault,
        } => {
            let (_, mut alg) = algebra(graph, report)?;
            if *inject_fault {
                let mut frame = (**alg.frame()).clone();
                frame.set_cyl_neighbours(0, 0, vec![]);
                alg = FiniteBao::new(Arc::new(frame), Signature::Pea);
            }
            let opts = axiom_options(report);
            let schemas = match axioms.as_str() {
                "ca" => ca_schemas(),
                "pea" => pea_schemas(),
                path => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| CliError::input(path, format!("cannot read: {e}")))?;
                    parse_schemas(&text).map_err(|e| CliError::input(path, e))?
                }
            };
            // the CA set is checked on the cylindric reduct, as in check_ca_axioms
            let alg = if axioms == "ca" {
                alg.reduct(Signature::Ca)
            } else {
                alg
            };
            timed_axioms(report, "axioms", || check_axioms(&alg, &schemas, &opts))?;
        }
        BaoCmd::Discriminator { graph } => {
            let (_, alg) = algebra(graph, report)?;
            report.run("discriminator", || check_discriminator(&alg, samples, seed));
        }
        BaoCmd::Canext { graph } => {
            let (_, alg) = algebra(graph, report)?;
            report.run("canext", || canext_outcomes(&alg, samples, seed));
        }
    }
    Ok(())
}

fn suite_options(report: &Report) -> SuiteOptions {
    SuiteOptions {
        samples: report.config.sample_count,
        seed: report.config.seed,
        ..SuiteOptions::default()
    }
}

fn run_ags_suite(m: &AgsModel, which: SuiteName, opts: &SuiteOptions, report: &mut Report) {
    match which {
        SuiteName::Rs => report.run("rs", || ags::check_rs_properties(m, opts)),
        SuiteName::Proj => report.run("proj", || ags::check_projection_properties(m)),
        SuiteName::Subst => report.run("subst", || ags::check_substitution_properties(m, opts)),
        SuiteName::Model => report.run("model", || ags::check_model_properties(m)),
        SuiteName::All => report.run("ags", || ags::check_all(m, opts)),
    }
}

fn ags_cmd(cmd: &AgsCmd, report: &mut Report) -> Result<(), CliError> {
    let (n, bound) = (report.config.n, report.config.atom_bound);
    match cmd {
        AgsCmd::Build { graph } => {
            let m = input::model(&input::graph(graph)?, n, bound)?;
            report.result = Some(json!({
                "n": m.n(),
                "atoms": m.algebra().size(),
                "vertices": m.vertex_count(),
                "h_classes": m.h_classes().len(),
                "chromatic_number": m.chromatic_number(),
            }));
        }
        AgsCmd::Theta { graph, k } => {
            let m = input::model(&input::graph(graph)?, n, bound)?;
            let (by_chi, by_covers) = (m.theta(*k), m.theta_by_covers(*k));
            report.run("theta", || {
                vec![CheckOutcome::from_search(
                    "theta-agrees",
                    (by_chi != by_covers)
                        .then(|| json!({"k": k, "by_chi": by_chi, "by_covers": by_covers})),
                    "θ_k via χ(Γ×n) equals θ_k via independent covers",
                )]
            });
            report.result = Some(json!({
                "k": k,
                "theta": by_chi,
                "chromatic_number": m.chromatic_number(),
            }));
        }
        AgsCmd::Suite {
            graph,
            which,
            inject_fault,
        } => {
            let mut m = input::model(&input::graph(graph)?, n, bound)?;
            if *inject_fault {
                m.inject_lift_fault(0, 0);
            }
            run_ags_suite(&m, *which, &suite_options(report), report);
        }
    }
    Ok(())
}

fn mode(m: ModeArg) -> Mode {
    match m {
        ModeArg::Cylindric => Mode::Cylindric,
        ModeArg::Polyadic => Mode::Polyadic,
    }
}

fn net(cmd: &NetCmd, report: &mut Report) -> Result<(), CliError> {
    let (n, bound) = (report.config.n, report.config.atom_bound);
    match cmd {
        NetCmd::Initial { graph } => {
            let m = input::model(&input::graph(graph)?, n, bound)?;
            report.result = Some(to_value(&UfNetwork::initial(&m)));
        }
        NetCmd::Validate {
            graph,
            network,
            mode: md,
        } => {
            let m = input::model(&input::graph(graph)?, n, bound)?;
            let net = input::network(network, &m)?;
            report.run("network", || {
                vec![CheckOutcome::from_search(
                    "network-conditions",
                    validate_network(&m, &net, mode(*md))
                        .err()
                        .map(|v| to_value(&v)),
                    format!(
                        "{} labels satisfy the {:?} conditions",
                        net.tuple_count(),
                        md
                    ),
                )]
            });
        }
        NetCmd::Boundary { graph, network } => {
            let m = input::model(&input::graph(graph)?, n, bound)?;
            let net = input::network(network, &m)?;
            let start = Instant::now();
            let outcome = match boundary(&m, &net) {
                Err(e) => {
                    CheckOutcome::fail("boundary", e.to_json(), "the boundary is well defined")
                }
                Ok(p) => {
                    report.result = Some(to_value(&p));
                    match first_incoherent(&m, &p) {
                        Ok(None) => CheckOutcome::pass(
                            "boundary-coherent",
                            "no (n+1)-set of nodes has an independent patch set",
                        ),
                        Ok(Some(set)) => CheckOutcome::fail(
                            "boundary-coherent",
                            json!({"set": set}),
                            "the patches on this set are independent",
                        ),
                        Err(e) => {
                            CheckOutcome::fail("boundary-coherent", e.to_json(), "coherence check")
                        }
                    }
                }
            };
            report.extend(
                "network",
                vec![outcome],
                start.elapsed().as_secs_f64() * 1e3,
            );
        }
    }
    Ok(())
}

/// Survives passes; a loss or a strategy breakdown is a counterexample; an
/// exhausted budget leaves the report incomplete.
fn game_outcome(verdict: &GameVerdict, depth: usize) -> (CheckOutcome, Option<String>) {
    let name = "exists-survives";
    match verdict {
        GameVerdict::Survives => (
            CheckOutcome::pass(name, format!("∃ answers every ∀ play of {depth} rounds")),
            None,
        ),
        GameVerdict::Unknown { reason } => (
            CheckOutcome::skipped(name, reason.clone()),
            Some(reason.clone()),
        ),
        GameVerdict::Loses { .. } => (
            CheckOutcome::fail(name, to_value(verdict), "∀ wins within the depth"),
            None,
        ),
        GameVerdict::PreconditionFailed { reason, .. }
        | GameVerdict::StrategyFailed { reason, .. } => (
            CheckOutcome::fail(name, to_value(verdict), reason.clone()),
            None,
        ),
    }
}

fn game_options(report: &Report) -> GameOptions {
    GameOptions {
        depth: report.config.depth,
        ..GameOptions::default()
    }
}

fn play(m: &AgsModel, opts: &GameOptions, report: &mut Report) {
    let start = Instant::now();
    let result = exists_survives(m, opts, None);
    let (outcome, incomplete) = game_outcome(&result.verdict, opts.depth);
    report.extend("game", vec![outcome], start.elapsed().as_secs_f64() * 1e3);
    if incomplete.is_some() {
        report.incomplete = incomplete;
    }
    report.result = Some(to_value(&result));
}

fn game(cmd: &GameCmd, report: &mut Report) -> Result<(), CliError> {
    let GameCmd::Run {
        graph,
        strategy,
        moves,
        mode: md,
        symmetry,
        budget,
    } = cmd;
    let m = input::model(
        &input::graph(graph)?,
        report.config.n,
        report.config.atom_bound,
    )?;
    let opts = GameOptions {
        strategy: match strategy {
            StrategyArg::Exhaustive => GameStrategy::Exhaustive,
            StrategyArg::Constructed => GameStrategy::Constructed,
        },
        moves: match moves {
            MovesArg::Atoms => MoveKind::Atoms,
            MovesArg::Elements => MoveKind::Elements,
        },
        mode: mode(*md),
        symmetry: match symmetry {
            SymmetryArg::Lex => SymmetryChoice::Lexicographic,
            SymmetryArg::Seeded => SymmetryChoice::Seeded(report.config.seed),
        },
        step_budget: *budget,
        ..game_options(report)
    };
    play(&m, &opts, report);
    Ok(())
}

fn embedding_options(report: &Report) -> EmbeddingCheckOptions {
    EmbeddingCheckOptions {
        samples: report.config.sample_count,
        seed: report.config.seed,
        ..EmbeddingCheckOptions::default()
    }
}

fn duality_error(e: DualityError) -> CliError {
    match e {
        DualityError::Atoms(e @ AtomError::TooManyAtoms { .. }) => {
            CliError::resource("atom_bound", e)
        }
        e => CliError::input("chain", e),
    }
}

fn dual(cmd: &DualCmd, report: &mut Report) -> Result<(), CliError> {
    let (n, bound) = (report.config.n, report.config.atom_bound);
    let opts = embedding_options(report);
    match cmd {
        DualCmd::Lift {
            source,
            target,
            map,
            inject_fault,
        } => {
            let f = VertexMap::new(input::graph(source)?, input::graph(target)?, map.clone())
                .map_err(|e| CliError::input("map", e))?;
            let s = input::atom_structure(f.source(), n, bound)?;
            let t = input::atom_structure(f.target(), n, bound)?;
            if *inject_fault {
                let mut g = lift(&f, &s, &t).map_err(|e| CliError::input("map", e))?;
                g.redirect(0, (g.apply(0) + 1) % t.len());
                report.run("lift", || validate_atom_pmorphism(&g));
            } else {
                report.run("lift", || check_step(&f, &s, &t, &opts));
            }
            report.result = Some(json!({"source_atoms": s.len(), "target_atoms": t.len()}));
        }
        DualCmd::CheckChain { chain, wraps } => {
            let chain = match (chain, wraps.as_deref()) {
                (Some(path), _) => input::chain(path)?,
                (None, Some(&[base, steps])) => {
                    if base < 3 {
                        return Err(CliError::input(
                            "wraps",
                            "base cycle needs at least 3 vertices",
                        ));
                    }
                    GraphChain::cycle_wraps(base, steps)
                }
                _ => {
                    return Err(CliError::input(
                        "chain",
                        "give a chain file or --wraps BASE,STEPS",
                    ))
                }
            };
            check_chain_report(&chain, n, bound, &opts, report)?;
        }
    }
    Ok(())
}

fn check_chain_report(
    chain: &GraphChain,
    n: usize,
    bound: usize,
    opts: &EmbeddingCheckOptions,
    report: &mut Report,
) -> Result<(), CliError> {
    let start = Instant::now();
    let r = check_chain(chain, n, bound, opts).map_err(duality_error)?;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    report.result = Some(Value::Array(
        r.stages
            .iter()
            .map(|s| {
                json!({
                    "stage": s.stage,
                    "vertices": s.vertices,
                    "edges": s.edges,
                    "chromatic_number": s.chromatic_number,
                    "atoms": s.atoms,
                })
            })
            .collect(),
    ));
    for s in r.stages {
        report.extend(&format!("stage-{}", s.stage), s.outcomes, ms);
    }
    for s in r.steps {
        report.extend(&format!("step-{}", s.from), s.outcomes, ms);
    }
    report.extend("coherence", r.coherence, ms);
    Ok(())
}

fn suite(cmd: &SuiteCmd, report: &mut Report) -> Result<(), CliError> {
    let SuiteCmd::All { graph } = cmd;
    let g: Graph = input::graph(graph)?;
    let (samples, seed) = (report.config.sample_count, report.config.seed);
    let s = input::atom_structure(&g, report.config.n, report.config.atom_bound)?;
    let atom_count = s.len();
    report.run("atoms", || {
        vec![CheckOutcome::pass(
            "enumerate",
            format!("{atom_count} atoms within the bound"),
        )]
    });
    let m = AgsModel::from_structure(s);
    let alg = m.algebra();
    let opts = axiom_options(report);
    timed_axioms(report, "ca", || check_ca_axioms(alg, &opts))?;
    timed_axioms(report, "pea", || check_pea_axioms(alg, &opts))?;
    report.run("discriminator", || check_discriminator(alg, samples, seed));
    report.run("canext", || canext_outcomes(alg, samples, seed));
    run_ags_suite(&m, SuiteName::All, &suite_options(report), report);
    let game = game_options(report);
    play(&m, &game, report);
    report.result = Some(json!({"graph": g, "atoms": atom_count}));
    Ok(())
}

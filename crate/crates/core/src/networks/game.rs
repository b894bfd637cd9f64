//! The bounded-depth representation game.
//!
//! In each round ∀ picks a tuple v of the current network, an index i and a
//! demand a with c_i a ∈ N(v); ∃ must answer with a network N' ⊇ N containing
//! some w ≡_i v with a ∈ N'(w). ∃ answers with the unchanged network (when a
//! witness already exists) or by adding a single fresh node.

use super::patch::{boundary, first_incoherent, label_from_patch, subsets, PatchSystem};
use super::{kernel, tuple_at, tuple_index, validate_network, Mode, UfNetwork};
use crate::ags::{AgsModel, Projection};
use crate::atoms::Transform;
use crate::networks::SymmetryChoice;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

/// Default bound on search steps (label assignments plus networks visited).
pub const DEFAULT_STEP_BUDGET: u64 = 50_000_000;

/// A move of ∀: tuple, index and demand (a set of atoms).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub tuple: Vec<usize>,
    pub i: usize,
    pub demand: Vec<usize>,
}

/// Which demands ∀ may make.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoveKind {
    /// Single atoms; sufficient because c_i is completely additive.
    Atoms,
    /// Every nonempty set of atoms in the relevant ≡_i class.
    Elements,
}

/// How ∃ plays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GameStrategy {
    /// Backtracking over every response; a ground-truth verdict.
    Exhaustive,
    /// The two-step construction through patch systems.
    Constructed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameOptions {
    pub depth: usize,
    pub strategy: GameStrategy,
    pub moves: MoveKind,
    pub mode: Mode,
    pub step_budget: u64,
    /// Representative choice for the constructed strategy.
    pub symmetry: SymmetryChoice,
    /// Largest ≡_i class expanded into all its subsets for element moves.
    pub element_class_cap: usize,
}

impl Default for GameOptions {
    fn default() -> Self {
        GameOptions {
            depth: 1,
            strategy: GameStrategy::Exhaustive,
            moves: MoveKind::Atoms,
            mode: Mode::Polyadic,
            step_budget: DEFAULT_STEP_BUDGET,
            symmetry: SymmetryChoice::Lexicographic,
            element_class_cap: 12,
        }
    }
}

/// One round of a play: ∀'s move and ∃'s answer (absent if she had none).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub round: usize,
    pub forall: Move,
    pub response: Option<UfNetwork>,
    pub responses_tried: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum GameVerdict {
    /// ∃ answers every sequence of ∀ moves up to the depth.
    Survives,
    /// ∀ wins within the depth; the trace follows ∃'s first answers.
    Loses { trace: Vec<TraceStep> },
    /// The search was cut short.
    Unknown { reason: String },
    /// The constructed strategy needed an object that does not exist.
    PreconditionFailed {
        round: usize,
        reason: String,
        trace: Vec<TraceStep>,
    },
    /// The constructed strategy produced no legal answer.
    StrategyFailed {
        round: usize,
        reason: String,
        trace: Vec<TraceStep>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GameReport {
    pub verdict: GameVerdict,
    pub depth: usize,
    pub strategy: GameStrategy,
    pub root_moves: usize,
    pub networks_explored: u64,
    pub steps: u64,
}

/// ∀'s moves on a network, in lexicographic order of tuple, index and demand.
///
/// Errors when element moves are requested on a class larger than `class_cap`.
pub fn forall_moves(
    m: &AgsModel,
    net: &UfNetwork,
    kind: MoveKind,
    class_cap: usize,
) -> Result<Vec<Move>, String> {
    let frame = m.algebra().frame();
    let mut out = Vec::new();
    for idx in 0..net.tuple_count() {
        let tuple = net.tuple(idx);
        let label = net.labels()[idx] as usize;
        for i in 0..net.n() {
            let class = frame.cyl_neighbours(i, label);
            match kind {
                MoveKind::Atoms => out.extend(class.iter().map(|&a| Move {
                    tuple: tuple.clone(),
                    i,
                    demand: vec![a as usize],
                })),
                MoveKind::Elements => {
                    if class.len() > class_cap {
                        return Err(format!(
                            "≡_{i} class of atom {label} has {} atoms, above the cap of {class_cap}",
                            class.len()
                        ));
                    }
                    for mask in 1u64..1 << class.len() {
                        let demand = (0..class.len())
                            .filter(|&k| mask >> k & 1 == 1)
                            .map(|k| class[k] as usize)
                            .collect();
                        out.push(Move {
                            tuple: tuple.clone(),
                            i,
                            demand,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Whether the network already has some w ≡_i v labelled inside the demand.
pub(crate) fn has_witness(net: &UfNetwork, mv: &Move) -> bool {
    let mut w = mv.tuple.clone();
    (0..net.nodes()).any(|x| {
        w[mv.i] = x;
        mv.demand.contains(&net.label(&w))
    })
}

struct Exhausted;

/// Enumerates the one-node extensions of a network by assigning labels to the
/// new tuples one at a time, checking every condition as soon as both of its
/// tuples are labelled.
struct Extender<'a> {
    m: &'a AgsModel,
    n: usize,
    nodes: usize,
    labels: Vec<Option<u32>>,
    order: Vec<usize>,
    domains: Vec<Vec<u32>>,
    /// (i, other) for every other = u[i ↦ x], x ≠ u_i.
    cylinder: HashMap<usize, Vec<(usize, usize)>>,
    /// (σ, u∘σ).
    forward: HashMap<usize, Vec<(usize, usize)>>,
    /// (σ, t) with t∘σ = u and t new.
    backward: HashMap<usize, Vec<(usize, usize)>>,
}

impl<'a> Extender<'a> {
    /// `required`: the new tuple and the labels it is restricted to.
    fn new(
        m: &'a AgsModel,
        net: &UfNetwork,
        mode: Mode,
        required: Option<(usize, &[usize])>,
    ) -> Self {
        let n = net.n();
        let nodes = net.nodes() + 1;
        let labels = net.embed_labels(nodes);
        let alg = m.algebra();
        let mut by_kernel = HashMap::new();
        let fresh: Vec<usize> = (0..labels.len()).filter(|&t| labels[t].is_none()).collect();
        let mut order = Vec::with_capacity(fresh.len());
        if let Some((w, _)) = required {
            order.push(w);
        }
        // tuples with the same image are tied together by the polyadic
        // condition, so keep them adjacent, smallest images first
        let mut rest: Vec<usize> = fresh
            .iter()
            .copied()
            .filter(|&t| Some(t) != required.map(|r| r.0))
            .collect();
        rest.sort_by_cached_key(|&t| {
            let mut image = tuple_at(n, nodes, t);
            image.sort_unstable();
            image.dedup();
            (image.len(), image, t)
        });
        order.extend(rest);
        let domains = order
            .iter()
            .map(|&t| {
                let allowed: &Vec<u32> = by_kernel
                    .entry(kernel(&tuple_at(n, nodes, t)))
                    .or_insert_with_key(|e| alg.d_partition(e).iter().map(|p| p as u32).collect());
                match required {
                    Some((w, demand)) if w == t => allowed
                        .iter()
                        .copied()
                        .filter(|&p| demand.contains(&(p as usize)))
                        .collect(),
                    _ => allowed.clone(),
                }
            })
            .collect();
        let transforms: Vec<Transform> = match mode {
            Mode::Polyadic => Transform::all(n).collect(),
            Mode::Cylindric => Vec::new(),
        };
        let mut cylinder = HashMap::new();
        let mut forward = HashMap::new();
        let mut backward: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
        for &u in &fresh {
            let v = tuple_at(n, nodes, u);
            let mut cyl = Vec::new();
            for i in 0..n {
                let mut w = v.clone();
                for x in (0..nodes).filter(|&x| x != v[i]) {
                    w[i] = x;
                    cyl.push((i, tuple_index(nodes, &w)));
                }
            }
            cylinder.insert(u, cyl);
            let fw: Vec<(usize, usize)> = transforms
                .iter()
                .map(|s| {
                    let vs: Vec<usize> = (0..n).map(|k| v[s.apply(k)]).collect();
                    (s.index(), tuple_index(nodes, &vs))
                })
                .collect();
            for &(s, t) in &fw {
                if labels[t].is_none() && t != u {
                    backward.entry(t).or_default().push((s, u));
                }
            }
            forward.insert(u, fw);
        }
        Extender {
            m,
            n,
            nodes,
            labels,
            order,
            domains,
            cylinder,
            forward,
            backward,
        }
    }

    fn consistent(&self, u: usize, l: usize) -> bool {
        let frame = self.m.algebra().frame();
        let get = |t: usize| {
            if t == u {
                Some(l)
            } else {
                self.labels[t].map(|x| x as usize)
            }
        };
        self.cylinder[&u]
            .iter()
            .all(|&(i, t)| get(t).is_none_or(|lt| frame.cyl_related(i, l, lt)))
            && self.forward[&u]
                .iter()
                .all(|&(s, t)| get(t).is_none_or(|lt| frame.subst_point(s, l) == lt))
            && self.backward.get(&u).is_none_or(|b| {
                b.iter()
                    .all(|&(s, t)| get(t).is_none_or(|lt| frame.subst_point(s, lt) == l))
            })
    }

    /// Calls `visit` on each complete extension until it returns true.
    fn run(
        &mut self,
        budget: &Budget,
        visit: &mut dyn FnMut(UfNetwork) -> Result<bool, Exhausted>,
    ) -> Result<bool, Exhausted> {
        self.extend(0, budget, visit)
    }

    fn extend(
        &mut self,
        pos: usize,
        budget: &Budget,
        visit: &mut dyn FnMut(UfNetwork) -> Result<bool, Exhausted>,
    ) -> Result<bool, Exhausted> {
        if pos == self.order.len() {
            let labels = self
                .labels
                .iter()
                .map(|l| l.expect("all tuples labelled"))
                .collect();
            let net = UfNetwork::new(self.n, self.nodes, labels).expect("label count");
            return visit(net);
        }
        let u = self.order[pos];
        for k in 0..self.domains[pos].len() {
            budget.step()?;
            let l = self.domains[pos][k];
            if self.consistent(u, l as usize) {
                self.labels[u] = Some(l);
                let stop = self.extend(pos + 1, budget, visit);
                self.labels[u] = None;
                if stop? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

struct Budget {
    used: AtomicU64,
    limit: u64,
    networks: AtomicU64,
    exceeded: AtomicBool,
}

impl Budget {
    fn new(limit: u64) -> Self {
        Budget {
            used: AtomicU64::new(0),
            limit,
            networks: AtomicU64::new(0),
            exceeded: AtomicBool::new(false),
        }
    }

    fn step(&self) -> Result<(), Exhausted> {
        if self.used.fetch_add(1, Ordering::Relaxed) >= self.limit {
            self.exceeded.store(true, Ordering::Relaxed);
            return Err(Exhausted);
        }
        Ok(())
    }
}

type Observer<'o> = Option<&'o (dyn Fn(&UfNetwork) + Sync)>;

struct Engine<'a> {
    m: &'a AgsModel,
    opts: &'a GameOptions,
    budget: Budget,
    observer: Observer<'a>,
}

enum Outcome {
    Survives,
    Loses(Vec<TraceStep>),
    Unknown(String),
    Precondition(usize, String, Vec<TraceStep>),
    Strategy(usize, String, Vec<TraceStep>),
}

impl Outcome {
    /// Prepend the step that led here to any trace.
    fn after(self, step: TraceStep) -> Outcome {
        let push = |mut t: Vec<TraceStep>| {
            t.insert(0, step.clone());
            t
        };
        match self {
            Outcome::Loses(t) => Outcome::Loses(push(t)),
            Outcome::Precondition(r, s, t) => Outcome::Precondition(r, s, push(t)),
            Outcome::Strategy(r, s, t) => Outcome::Strategy(r, s, push(t)),
            o => o,
        }
    }
}

/// Combine ∀'s alternatives in move order: a failure for ∃ wins, then unknown.
fn for_all(outcomes: impl IntoIterator<Item = Outcome>) -> Outcome {
    let mut unknown = None;
    for o in outcomes {
        match o {
            Outcome::Survives => {}
            Outcome::Unknown(r) => {
                unknown.get_or_insert(r);
            }
            failure => return failure,
        }
    }
    unknown.map_or(Outcome::Survives, Outcome::Unknown)
}

impl<'a> Engine<'a> {
    fn observe(&self, net: &UfNetwork) {
        self.budget.networks.fetch_add(1, Ordering::Relaxed);
        if let Some(f) = self.observer {
            f(net);
        }
    }

    fn moves(&self, net: &UfNetwork) -> Result<Vec<Move>, String> {
        forall_moves(self.m, net, self.opts.moves, self.opts.element_class_cap)
    }

    fn play(&self, net: &UfNetwork, depth: usize, round: usize) -> Outcome {
        if depth == 0 {
            return Outcome::Survives;
        }
        match self.moves(net) {
            Ok(moves) => for_all(moves.iter().map(|mv| self.answer(net, mv, depth, round))),
            Err(reason) => Outcome::Unknown(reason),
        }
    }

    fn answer(&self, net: &UfNetwork, mv: &Move, depth: usize, round: usize) -> Outcome {
        match self.opts.strategy {
            GameStrategy::Exhaustive => self.answer_exhaustive(net, mv, depth, round),
            GameStrategy::Constructed => self.answer_constructed(net, mv, depth, round),
        }
    }

    fn answer_exhaustive(&self, net: &UfNetwork, mv: &Move, depth: usize, round: usize) -> Outcome {
        let mut tried = 0;
        let mut first_loss: Option<(UfNetwork, Vec<TraceStep>)> = None;
        let mut unknown: Option<String> = None;
        let mut judge = |response: UfNetwork| -> bool {
            match self.play(&response, depth - 1, round + 1) {
                Outcome::Survives => true,
                Outcome::Unknown(r) => {
                    unknown.get_or_insert(r);
                    false
                }
                Outcome::Loses(t) => {
                    if first_loss.is_none() {
                        first_loss = Some((response, t));
                    }
                    false
                }
                _ => unreachable!("exhaustive play has no strategy failures"),
            }
        };
        let old_witness = has_witness(net, mv);
        if old_witness {
            tried += 1;
            self.observe(net);
            if judge(net.clone()) {
                return Outcome::Survives;
            }
        }
        let w = {
            let mut w = mv.tuple.clone();
            w[mv.i] = net.nodes();
            tuple_index(net.nodes() + 1, &w)
        };
        let required = (!old_witness).then_some((w, mv.demand.as_slice()));
        let mut ext = Extender::new(self.m, net, self.opts.mode, required);
        let found = ext.run(&self.budget, &mut |response| {
            tried += 1;
            self.observe(&response);
            if self.budget.exceeded.load(Ordering::Relaxed) {
                return Err(Exhausted);
            }
            Ok(judge(response))
        });
        match found {
            Err(Exhausted) => Outcome::Unknown(self.budget_reason()),
            Ok(true) => Outcome::Survives,
            Ok(false) => {
                if let Some(r) = unknown {
                    return Outcome::Unknown(r);
                }
                let (response, trace) = match first_loss {
                    Some((r, t)) => (Some(r), t),
                    None => (None, Vec::new()),
                };
                Outcome::Loses(trace).after(TraceStep {
                    round,
                    forall: mv.clone(),
                    response,
                    responses_tried: tried,
                })
            }
        }
    }

    fn budget_reason(&self) -> String {
        format!("step budget of {} exceeded", self.budget.limit)
    }

    fn answer_constructed(
        &self,
        net: &UfNetwork,
        mv: &Move,
        depth: usize,
        round: usize,
    ) -> Outcome {
        let step = |response: Option<UfNetwork>| TraceStep {
            round,
            forall: mv.clone(),
            response,
            responses_tried: 1,
        };
        let response = match self.constructed_response(net, mv) {
            Ok(r) => r,
            Err(Failure::Precondition(reason)) => {
                return Outcome::Precondition(round, reason, vec![step(None)])
            }
            Err(Failure::Strategy(reason)) => {
                return Outcome::Strategy(round, reason, vec![step(None)])
            }
        };
        self.observe(&response);
        if self.budget.step().is_err() {
            return Outcome::Unknown(self.budget_reason());
        }
        self.play(&response, depth - 1, round + 1)
            .after(step(Some(response)))
    }

    /// ∃'s constructed answer: keep the network if a witness exists, otherwise
    /// pick an atom μ for a fresh node (step 1), extend the boundary patch
    /// system around it (step 2) and relabel through representatives.
    fn constructed_response(&self, net: &UfNetwork, mv: &Move) -> Result<UfNetwork, Failure> {
        if has_witness(net, mv) {
            return Ok(net.clone());
        }
        let m = self.m;
        let n = net.n();
        let i = mv.i;
        let frame = m.algebra().frame();
        let s = m.structure();
        let label = net.label(&mv.tuple);
        // step 1: μ ≡_i N(v), inside the demand, with −d_ij for every j ≠ i
        let mu = mv
            .demand
            .iter()
            .copied()
            .find(|&a| {
                frame.cyl_related(i, label, a)
                    && (0..n).all(|j| j == i || !s.atom(a).in_diagonal(i, j))
            })
            .ok_or_else(|| {
                Failure::Strategy(format!(
                    "no atom of the demand {:?} separates coordinate {i} from the others",
                    mv.demand
                ))
            })?;
        // step 2: the patch system of N ∪ {z}
        let z = net.nodes();
        let old = boundary(m, net).map_err(|e| Failure::Strategy(e.to_string()))?;
        let mut patch = PatchSystem::new(n, z + 1);
        for (set, point) in old.patches() {
            patch
                .set(set, point)
                .map_err(|e| Failure::Strategy(e.to_string()))?;
        }
        let mut w = mv.tuple.clone();
        w[i] = z;
        let mut mu_points = Vec::new();
        for j in (0..n).filter(|&j| j != i) {
            let face: Vec<usize> = (0..n).filter(|&k| k != j).map(|k| w[k]).collect();
            if kernel(&face).block_count() != n - 1 {
                continue;
            }
            let Projection::Ultra(x) = m.projection(j, mu) else {
                return Err(Failure::Strategy(format!(
                    "projection {j} of atom {mu} is not an ultrafilter"
                )));
            };
            if patch.get(&face).is_some_and(|y| y != x) {
                return Err(Failure::Strategy(format!(
                    "projections of atom {mu} disagree on {face:?}"
                )));
            }
            patch
                .set(&face, x)
                .map_err(|e| Failure::Strategy(e.to_string()))?;
            mu_points.push(x as usize);
        }
        let remaining: Vec<Vec<usize>> = subsets(z + 1, n - 1)
            .into_iter()
            .filter(|set| patch.get(set).is_none())
            .collect();
        if !remaining.is_empty() {
            let point = self.nu_point(&mu_points).map_err(Failure::Precondition)?;
            for set in &remaining {
                patch
                    .set(set, point)
                    .map_err(|e| Failure::Strategy(e.to_string()))?;
            }
        }
        match first_incoherent(m, &patch) {
            Ok(None) => {}
            Ok(Some(set)) => {
                return Err(Failure::Strategy(format!(
                    "node set {set:?} is not coherent"
                )))
            }
            Err(e) => return Err(Failure::Strategy(e.to_string())),
        }
        let mut fixed = net.embed_labels(z + 1);
        fixed[tuple_index(z + 1, &w)] = Some(mu as u32);
        let next = label_from_patch(m, &patch, fixed, self.opts.symmetry)
            .map_err(|e| Failure::Strategy(e.to_string()))?;
        validate_network(m, &next, self.opts.mode)
            .map_err(|v| Failure::Strategy(format!("constructed network is invalid: {v:?}")))?;
        Ok(next)
    }

    /// The point generating an ultrafilter ν of the boolean sort that contains
    /// a copy G_ℓ avoiding the points already used and no independent set.
    fn nu_point(&self, used: &[usize]) -> Result<u32, String> {
        let m = self.m;
        let copy = m
            .h_classes()
            .into_iter()
            .find(|g| used.iter().all(|&x| !g.contains(x)))
            .ok_or("every copy of the base graph meets the points of μ")?;
        // ν is principal at some x ∈ G_ℓ; it contains no independent set iff {x} is not one
        copy.iter()
            .find(|&x| !m.graph().is_independent_slice(&[x]))
            .map(|x| x as u32)
            .ok_or_else(|| {
                "no ultrafilter of the boolean sort contains a copy of the base graph and \
                 no independent set: every ultrafilter is principal and its generating \
                 singleton is independent"
                    .to_string()
            })
    }
}

enum Failure {
    Precondition(String),
    Strategy(String),
}

/// Decide whether ∃ survives `opts.depth` rounds from the one-point network.
///
/// ∀'s first moves are explored in parallel; the verdict is the first failure
/// in move order. `observer` sees every network ∃ plays.
pub fn exists_survives(
    m: &AgsModel,
    opts: &GameOptions,
    observer: Option<&(dyn Fn(&UfNetwork) + Sync)>,
) -> GameReport {
    let engine = Engine {
        m,
        opts,
        budget: Budget::new(opts.step_budget),
        observer,
    };
    let start = UfNetwork::initial(m);
    engine.observe(&start);
    let (root_moves, outcome) = if opts.depth == 0 {
        (0, Outcome::Survives)
    } else {
        match engine.moves(&start) {
            Ok(moves) => {
                let outcomes: Vec<Outcome> = moves
                    .par_iter()
                    .map(|mv| engine.answer(&start, mv, opts.depth, 0))
                    .collect();
                (moves.len(), for_all(outcomes))
            }
            Err(reason) => (0, Outcome::Unknown(reason)),
        }
    };
    let verdict = match outcome {
        Outcome::Survives => GameVerdict::Survives,
        Outcome::Loses(trace) => GameVerdict::Loses { trace },
        Outcome::Unknown(reason) => GameVerdict::Unknown { reason },
        Outcome::Precondition(round, reason, trace) => GameVerdict::PreconditionFailed {
            round,
            reason,
            trace,
        },
        Outcome::Strategy(round, reason, trace) => GameVerdict::StrategyFailed {
            round,
            reason,
            trace,
        },
    };
    GameReport {
        verdict,
        depth: opts.depth,
        strategy: opts.strategy,
        root_moves,
        networks_explored: engine.budget.networks.load(Ordering::Relaxed),
        steps: engine
            .budget
            .used
            .load(Ordering::Relaxed)
            .min(opts.step_budget),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn k1() -> AgsModel {
        AgsModel::build(&Graph::complete(1), 3, 5000).unwrap()
    }

    #[test]
    fn initial_moves_include_the_label_itself() {
        let m = k1();
        let net = UfNetwork::initial(&m);
        let moves = forall_moves(&m, &net, MoveKind::Atoms, 12).unwrap();
        assert!(!moves.is_empty());
        let bottom = m.structure().bottom_atom();
        for i in 0..3 {
            assert!(moves
                .iter()
                .any(|mv| mv.i == i && mv.demand == vec![bottom]));
        }
        assert_eq!(moves, forall_moves(&m, &net, MoveKind::Atoms, 12).unwrap());
    }

    #[test]
    fn depth_zero_survives_vacuously() {
        let m = k1();
        let opts = GameOptions {
            depth: 0,
            ..GameOptions::default()
        };
        assert_eq!(
            exists_survives(&m, &opts, None).verdict,
            GameVerdict::Survives
        );
    }

    #[test]
    fn tiny_budget_gives_unknown() {
        let m = k1();
        let opts = GameOptions {
            depth: 2,
            step_budget: 10,
            ..GameOptions::default()
        };
        assert!(matches!(
            exists_survives(&m, &opts, None).verdict,
            GameVerdict::Unknown { .. }
        ));
    }
}

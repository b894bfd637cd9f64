//! Equation checking: exhaustive, sampled, and exhaustive over generated subalgebras.

use super::subalgebra::{Subalgebra, SubalgebraError, MAX_SUBALGEBRA_BLOCKS};
use super::term::{parse_schemas, Equation, InstantiateError, Schema};
use super::{Bao, EvalError, FiniteBao, Signature};
use crate::bits::BitSet;
use crate::report::CheckOutcome;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use thiserror::Error;

/// Exhaustive checks enumerate at most 2^24 assignments.
pub const EXHAUSTIVE_LIMIT_LOG2: usize = 24;

const SAMPLE_CHUNK: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Every assignment of elements to variables.
    Exhaustive,
    /// Seeded random assignments; a counterexample is ground truth, a pass is not.
    Sampled { samples: usize, seed: u64 },
    /// Every assignment within the subalgebra generated by the given elements.
    Subalgebra { generators: Vec<BitSet> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds { assignments: u64 },
    Counterexample(Vec<BitSet>),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("exhaustive check needs 2^{needed} assignments, above the limit 2^{limit}")]
    InfeasibleExhaustive { needed: usize, limit: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Subalgebra(#[from] SubalgebraError),
    #[error(transparent)]
    Instantiate(#[from] InstantiateError),
}

/// 64-bit FNV-1a, used to derive per-equation random streams.
pub(crate) fn mix_seed(seed: u64, label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

pub(crate) fn rng_for(seed: u64, label: &str, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, label));
    rng.set_stream(stream);
    rng
}

/// Assignments tried, and the first failing one.
type Searched<E> = (u64, Option<Vec<E>>);

/// Try every assignment from `elems`; returns the count and the first
/// counterexample in lexicographic order.
fn search_all<B: Bao>(
    alg: &B,
    eq: &Equation,
    elems: &[B::Elem],
) -> Result<Searched<B::Elem>, EvalError> {
    let arity = eq.arity();
    if arity == 0 {
        let ok = alg.satisfies(eq, &[])?;
        return Ok((1, (!ok).then(Vec::new)));
    }
    let m = elems.len();
    let total = (m as u64).pow(arity as u32);
    let found = (0..m).into_par_iter().find_map_first(|first| {
        let mut idx = vec![0usize; arity];
        idx[0] = first;
        let mut env: Vec<B::Elem> = idx.iter().map(|&k| elems[k].clone()).collect();
        loop {
            match alg.satisfies(eq, &env) {
                Err(e) => return Some(Err(e)),
                Ok(false) => return Some(Ok(env)),
                Ok(true) => {}
            }
            let mut pos = arity - 1;
            loop {
                if pos == 0 {
                    return None;
                }
                idx[pos] += 1;
                if idx[pos] < m {
                    env[pos] = elems[idx[pos]].clone();
                    break;
                }
                idx[pos] = 0;
                env[pos] = elems[0].clone();
                pos -= 1;
            }
        }
    });
    match found {
        None => Ok((total, None)),
        Some(Ok(env)) => Ok((total, Some(env))),
        Some(Err(e)) => Err(e),
    }
}

/// A random element: uniform half the time, otherwise drawn from a bias
/// pool of constants, atoms, co-atoms, sparse sets and cylinder classes.
pub(crate) fn random_element(alg: &FiniteBao, rng: &mut ChaCha8Rng) -> BitSet {
    let size = alg.size();
    let n = alg.dim();
    match rng.gen_range(0..8) {
        0..=3 => BitSet::from_indices(size, (0..size).filter(|_| rng.gen_bool(0.5))),
        4 => match rng.gen_range(0..3) {
            0 => alg.zero(),
            1 => alg.one(),
            _ if alg.signature().has_diagonals() => {
                alg.diag(rng.gen_range(0..n), rng.gen_range(0..n))
            }
            _ => alg.one(),
        },
        5 => alg.atom(rng.gen_range(0..size)),
        6 => alg.atom(rng.gen_range(0..size)).complement(),
        _ => {
            let k = rng.gen_range(1..=3);
            let s = BitSet::from_indices(size, (0..k).map(|_| rng.gen_range(0..size)));
            if rng.gen_bool(0.5) {
                alg.cyl(rng.gen_range(0..n), &s)
            } else {
                s
            }
        }
    }
}

fn sampled(
    alg: &FiniteBao,
    eq: &Equation,
    samples: usize,
    seed: u64,
) -> Result<Verdict, EvalError> {
    let arity = eq.arity();
    if arity == 0 {
        let ok = alg.satisfies(eq, &[])?;
        return Ok(if ok {
            Verdict::Holds { assignments: 1 }
        } else {
            Verdict::Counterexample(Vec::new())
        });
    }
    let chunks = samples.div_ceil(SAMPLE_CHUNK);
    let found = (0..chunks).into_par_iter().find_map_first(|c| {
        let mut rng = rng_for(seed, &eq.name, c as u64);
        let here = SAMPLE_CHUNK.min(samples - c * SAMPLE_CHUNK);
        for _ in 0..here {
            let env: Vec<BitSet> = (0..arity).map(|_| random_element(alg, &mut rng)).collect();
            match alg.satisfies(eq, &env) {
                Err(e) => return Some(Err(e)),
                Ok(false) => return Some(Ok(env)),
                Ok(true) => {}
            }
        }
        None
    });
    match found {
        None => Ok(Verdict::Holds {
            assignments: samples as u64,
        }),
        Some(Ok(env)) => Ok(Verdict::Counterexample(env)),
        Some(Err(e)) => Err(e),
    }
}

fn check_signature(alg: &FiniteBao, eq: &Equation) -> Result<(), EvalError> {
    if alg.signature().admits(&eq.lhs) && alg.signature().admits(&eq.rhs) {
        Ok(())
    } else {
        Err(EvalError::Signature(alg.signature()))
    }
}

fn exhaustive_in_subalgebra(
    sub: &Subalgebra<'_>,
    eq: &Equation,
    limit_log2: usize,
) -> Result<Verdict, CheckError> {
    let needed = sub.block_count() * eq.arity();
    if needed > limit_log2 {
        return Err(CheckError::InfeasibleExhaustive {
            needed,
            limit: limit_log2,
        });
    }
    let elems: Vec<u64> = if eq.arity() == 0 {
        Vec::new()
    } else {
        (0..1u64 << sub.block_count()).collect()
    };
    let (count, cex) = search_all(sub, eq, &elems)?;
    Ok(match cex {
        None => Verdict::Holds { assignments: count },
        Some(env) => Verdict::Counterexample(env.iter().map(|&m| sub.embed(m)).collect()),
    })
}

/// Check one equation in `alg` with the given strategy.
pub fn check_equation(
    eq: &Equation,
    alg: &FiniteBao,
    strategy: &Strategy,
) -> Result<Verdict, CheckError> {
    check_signature(alg, eq)?;
    match strategy {
        Strategy::Exhaustive => {
            let needed = alg.size() * eq.arity();
            if needed > EXHAUSTIVE_LIMIT_LOG2 {
                return Err(CheckError::InfeasibleExhaustive {
                    needed,
                    limit: EXHAUSTIVE_LIMIT_LOG2,
                });
            }
            let elems: Vec<BitSet> = if eq.arity() == 0 {
                Vec::new()
            } else {
                (0..1u64 << alg.size())
                    .map(|m| {
                        BitSet::from_indices(
                            alg.size(),
                            (0..alg.size()).filter(|k| m >> k & 1 == 1),
                        )
                    })
                    .collect()
            };
            let (count, cex) = search_all(alg, eq, &elems)?;
            Ok(match cex {
                None => Verdict::Holds { assignments: count },
                Some(env) => Verdict::Counterexample(env),
            })
        }
        Strategy::Sampled { samples, seed } => Ok(sampled(alg, eq, *samples, *seed)?),
        Strategy::Subalgebra { generators } => {
            let sub = Subalgebra::generate(alg, generators, MAX_SUBALGEBRA_BLOCKS)?;
            exhaustive_in_subalgebra(&sub, eq, EXHAUSTIVE_LIMIT_LOG2)
        }
    }
}

/// JSON for an assignment: variable name ↦ sorted atom indices.
pub(crate) fn assignment_json(eq: &Equation, env: &[BitSet]) -> Value {
    let mut m = Map::new();
    for (name, x) in eq.variables.iter().zip(env) {
        m.insert(name.clone(), json!(x.to_vec()));
    }
    Value::Object(m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheckOptions {
    /// Random assignments per instance on the whole algebra.
    pub samples: usize,
    pub seed: u64,
    /// Number of random generator sets tried for the subalgebra tier; distinct
    /// closures with at most 64 cells are kept.
    pub subalgebra_rounds: usize,
    /// Each random generator set has 1..=max_generators atoms.
    pub max_generators: usize,
    /// Per-instance exhaustive budget (log2 of the assignment count) in the subalgebra tier.
    pub subalgebra_limit_log2: usize,
}

impl Default for AxiomCheckOptions {
    fn default() -> Self {
        AxiomCheckOptions {
            samples: 10_000,
            seed: 1,
            subalgebra_rounds: 64,
            max_generators: 3,
            subalgebra_limit_log2: 20,
        }
    }
}

fn push_distinct<'a>(subs: &mut Vec<Subalgebra<'a>>, s: Subalgebra<'a>) {
    if !subs.iter().any(|t| t.blocks() == s.blocks()) {
        subs.push(s);
    }
}

/// Run every instance of every schema, one outcome per schema.
///
/// Each instance is sampled on the whole algebra, then checked exhaustively
/// on the subalgebra generated by the constants and on subalgebras generated
/// by random sets of at most `max_generators` atoms, whenever the subalgebra
/// is small enough for the instance's arity. Half of the generator sets are
/// drawn from atoms lying on some diagonal d_ij (i ≠ j).
pub fn check_axioms(
    alg: &FiniteBao,
    schemas: &[Schema],
    opts: &AxiomCheckOptions,
) -> Result<Vec<CheckOutcome>, CheckError> {
    let n = alg.dim();
    let mut subs: Vec<Subalgebra<'_>> = Vec::new();
    let mut oversized = 0usize;
    let all_atoms: Vec<usize> = (0..alg.size()).collect();
    let mut diagonal_atoms: Vec<usize> = Vec::new();
    if alg.signature().has_diagonals() {
        let mut on_diag = alg.zero();
        for i in 0..n {
            for j in i + 1..n {
                on_diag.union_with(&alg.diag(i, j));
            }
        }
        diagonal_atoms = on_diag.to_vec();
    }
    if let Ok(s) = Subalgebra::generate(alg, &[], MAX_SUBALGEBRA_BLOCKS) {
        push_distinct(&mut subs, s);
    }
    for round in 0..opts.subalgebra_rounds {
        let mut rng = rng_for(opts.seed, "subalgebra-generators", round as u64);
        let k = rng.gen_range(1..=opts.max_generators.max(1));
        // alternate between uniform atoms and atoms on some diagonal, whose
        // closures are much smaller
        let pool = if round % 2 == 0 && !diagonal_atoms.is_empty() {
            &diagonal_atoms
        } else {
            &all_atoms
        };
        let gens: Vec<BitSet> = (0..k)
            .map(|_| alg.atom(pool[rng.gen_range(0..pool.len())]))
            .collect();
        match Subalgebra::generate(alg, &gens, MAX_SUBALGEBRA_BLOCKS) {
            Ok(s) => push_distinct(&mut subs, s),
            Err(SubalgebraError::TooLarge { .. }) => oversized += 1,
        }
    }
    let cells: Vec<usize> = subs.iter().map(Subalgebra::block_count).collect();
    let mut out = Vec::new();
    for schema in schemas {
        let instances = schema.instantiate(n)?;
        if let Some(eq) = instances
            .iter()
            .find(|e| !(alg.signature().admits(&e.lhs) && alg.signature().admits(&e.rhs)))
        {
            out.push(CheckOutcome::skipped(
                &schema.name,
                format!("{} is outside the {:?} signature", eq.name, alg.signature()),
            ));
            continue;
        }
        let mut failure: Option<(Value, String)> = None;
        let mut exhaustive_runs = 0usize;
        let mut exhaustive_assignments = 0u64;
        'instances: for eq in &instances {
            if let Verdict::Counterexample(env) = sampled(alg, eq, opts.samples, opts.seed)? {
                failure = Some((
                    json!({"instance": eq.name, "tier": "sampled", "assignment": assignment_json(eq, &env)}),
                    eq.to_string(),
                ));
                break;
            }
            for (k, sub) in subs.iter().enumerate() {
                match exhaustive_in_subalgebra(sub, eq, opts.subalgebra_limit_log2) {
                    Ok(Verdict::Holds { assignments }) => {
                        exhaustive_runs += 1;
                        exhaustive_assignments += assignments;
                    }
                    Ok(Verdict::Counterexample(env)) => {
                        failure = Some((
                            json!({
                                "instance": eq.name,
                                "tier": "subalgebra",
                                "subalgebra": k,
                                "assignment": assignment_json(eq, &env),
                            }),
                            eq.to_string(),
                        ));
                        break 'instances;
                    }
                    Err(CheckError::InfeasibleExhaustive { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        let detail = format!(
            "{} instance(s); {} samples each; {} exhaustive subalgebra run(s) totalling {} assignments; distinct subalgebra cell counts {:?}; {} generator set(s) closed beyond 64 cells",
            instances.len(),
            opts.samples,
            exhaustive_runs,
            exhaustive_assignments,
            cells,
            oversized
        );
        out.push(match failure {
            None => CheckOutcome::pass(&schema.name, detail),
            Some((cex, eq)) => {
                CheckOutcome::fail(&schema.name, cex, format!("{eq} fails; {detail}"))
            }
        });
    }
    Ok(out)
}

const CA_AXIOMS: &str = include_str!("ca.eqs");
const PEA_AXIOMS: &str = include_str!("pea.eqs");

/// The cylindric axiom schemas C1–C7.
pub fn ca_schemas() -> Vec<Schema> {
    parse_schemas(CA_AXIOMS).expect("bundled cylindric axioms parse")
}

/// The cylindric schemas followed by the substitution schemas P1–P8.
pub fn pea_schemas() -> Vec<Schema> {
    let mut out = ca_schemas();
    out.extend(parse_schemas(PEA_AXIOMS).expect("bundled substitution axioms parse"));
    out
}

/// The cylindric axioms on the cylindric reduct.
pub fn check_ca_axioms(
    alg: &FiniteBao,
    opts: &AxiomCheckOptions,
) -> Result<Vec<CheckOutcome>, CheckError> {
    check_axioms(&alg.reduct(Signature::Ca), &ca_schemas(), opts)
}

/// The cylindric and substitution axioms in the full signature.
pub fn check_pea_axioms(
    alg: &FiniteBao,
    opts: &AxiomCheckOptions,
) -> Result<Vec<CheckOutcome>, CheckError> {
    check_axioms(&alg.reduct(Signature::Pea), &pea_schemas(), opts)
}

/// d(0) = 0, d(a) = 1 for every atom, and d(x) = 1 on sampled nonzero x.
pub fn check_discriminator(alg: &FiniteBao, samples: usize, seed: u64) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let d0 = alg.discriminator(&alg.zero());
    out.push(CheckOutcome::from_search(
        "discriminator-zero",
        (!d0.is_empty()).then(|| json!({"d(0)": d0.to_vec()})),
        "d(0) = 0",
    ));
    let bad = (0..alg.size())
        .into_par_iter()
        .find_first(|&k| !alg.discriminator(&alg.atom(k)).is_full());
    out.push(CheckOutcome::from_search(
        "discriminator-atoms",
        bad.map(|k| json!({"atom": k})),
        format!("d(a) = 1 for all {} atoms", alg.size()),
    ));
    let chunks = samples.div_ceil(SAMPLE_CHUNK);
    let bad = (0..chunks).into_par_iter().find_map_first(|c| {
        let mut rng = rng_for(seed, "discriminator", c as u64);
        for _ in 0..SAMPLE_CHUNK.min(samples - c * SAMPLE_CHUNK) {
            let x = random_element(alg, &mut rng);
            if !x.is_empty() && !alg.discriminator(&x).is_full() {
                return Some(x);
            }
        }
        None
    });
    out.push(CheckOutcome::from_search(
        "discriminator-sampled",
        bad.map(|x| json!({"x": x.to_vec()})),
        format!("d(x) = 1 on {samples} sampled nonzero elements"),
    ));
    out
}

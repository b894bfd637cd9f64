//! Graph p-morphisms lifted to atom structures, their algebraic duals, and
//! finite-stage checks of chains of graphs.
//!
//! A surjective p-morphism f : Γ → Δ induces f̂ : At(Γ) → At(Δ) by pushing the
//! points of an atom along f× (f on each copy). Dually, f̂⁺ : 𝒜(Δ) → 𝒜(Γ)
//! takes preimages, and an embedding e of finite algebras induces e₊ on the
//! ultrafilter structures, which are identified with the atom structures.

use crate::atoms::{Atom, AtomError, AtomStructure, Transform};
use crate::bao::{random_element, rng_for, ultrafilter_structure, Bao, FiniteBao, Signature};
use crate::bits::BitSet;
use crate::frame::Frame;
use crate::graph::{chromatic_number, Graph, GraphError, VertexMap};
use crate::report::{all_ok, CheckOutcome};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DualityError {
    #[error("vertex map is not a p-morphism")]
    NotPMorphism,
    #[error("vertex map is not surjective")]
    NotSurjective,
    #[error("image of atom {index} ({atom}) is not an atom of the target")]
    InvalidImage { index: usize, atom: String },
    #[error("point map has {got} entries, the source has {expected} points")]
    MapLength { expected: usize, got: usize },
    #[error("point map sends {point} outside the target")]
    MapImage { point: usize },
    #[error("maps do not compose: {0}")]
    NotComposable(String),
    #[error("ultrafilter computation failed: {0}")]
    Ultrafilter(String),
    #[error(transparent)]
    Atoms(#[from] AtomError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A total map between the points of two frames.
#[derive(Debug, Clone)]
pub struct AtomPMorphism {
    source: Arc<Frame>,
    target: Arc<Frame>,
    map: Vec<usize>,
}

impl AtomPMorphism {
    pub fn new(
        source: Arc<Frame>,
        target: Arc<Frame>,
        map: Vec<usize>,
    ) -> Result<Self, DualityError> {
        if map.len() != source.size() {
            return Err(DualityError::MapLength {
                expected: source.size(),
                got: map.len(),
            });
        }
        if let Some(point) = map.iter().position(|&q| q >= target.size()) {
            return Err(DualityError::MapImage { point });
        }
        Ok(AtomPMorphism {
            source,
            target,
            map,
        })
    }

    pub fn identity(frame: Arc<Frame>) -> Self {
        let map = (0..frame.size()).collect();
        AtomPMorphism {
            source: frame.clone(),
            target: frame,
            map,
        }
    }

    pub fn source(&self) -> &Arc<Frame> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Frame> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, p: usize) -> usize {
        self.map[p]
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AtomPMorphism) -> Result<AtomPMorphism, DualityError> {
        if !Arc::ptr_eq(&inner.target, &self.source) && *inner.target != *self.source {
            return Err(DualityError::NotComposable(
                "the inner target is not the outer source".into(),
            ));
        }
        Ok(AtomPMorphism {
            source: inner.source.clone(),
            target: self.target.clone(),
            map: inner.map.iter().map(|&p| self.map[p]).collect(),
        })
    }

    /// Test fixture: send point `p` to `q` instead.
    pub fn redirect(&mut self, p: usize, q: usize) {
        self.map[p] = q;
    }
}

/// f×: vertex (x, i) of the source inflation goes to (f(x), i).
fn inflated_map(f: &VertexMap, v: u32) -> u32 {
    let base = f.source().len();
    let copy = Graph::copy_of(v as usize, base);
    (copy * f.target().len() + f.apply(v as usize % base)) as u32
}

/// f̂ : (K, ∼) ↦ (f× ∘ K, ∼) between the given atom structures.
pub fn lift(
    f: &VertexMap,
    source: &AtomStructure,
    target: &AtomStructure,
) -> Result<AtomPMorphism, DualityError> {
    if !f.is_p_morphism() {
        return Err(DualityError::NotPMorphism);
    }
    if !f.is_surjective() {
        return Err(DualityError::NotSurjective);
    }
    if *source.base_graph() != *f.source() || *target.base_graph() != *f.target() {
        return Err(DualityError::NotComposable(
            "atom structures are not built on the map's graphs".into(),
        ));
    }
    let map = source
        .atoms()
        .par_iter()
        .enumerate()
        .map(|(index, a)| {
            let image = Atom {
                partition: a.partition.clone(),
                points: a
                    .points
                    .iter()
                    .map(|k| k.map(|v| inflated_map(f, v)))
                    .collect(),
            };
            target
                .index_of(&image)
                .ok_or_else(|| DualityError::InvalidImage {
                    index,
                    atom: format!("{image:?}"),
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    AtomPMorphism::new(source.frame().clone(), target.frame().clone(), map)
}

/// Exhaustive forth and back conditions for every relation of the frames,
/// plus surjectivity.
pub fn validate_atom_pmorphism(g: &AtomPMorphism) -> Vec<CheckOutcome> {
    let (s, t) = (&g.source, &g.target);
    let n = s.n();
    let size = s.size();
    let mut out = Vec::new();
    if t.n() != n {
        out.push(CheckOutcome::fail(
            "pm-dimension",
            json!({"source": n, "target": t.n()}),
            "frames of different dimensions",
        ));
        return out;
    }
    let diag = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find_map(|(i, j)| {
            (0..size)
                .find(|&p| s.diag(i, j).contains(p) != t.diag(i, j).contains(g.map[p]))
                .map(|p| json!({"i": i, "j": j, "point": p, "image": g.map[p]}))
        });
    out.push(CheckOutcome::from_search(
        "pm-diagonal",
        diag,
        "D_ij(x) iff D_ij(g(x)), all points and pairs",
    ));
    let cyl_forth = (0..n).find_map(|i| {
        (0..size).find_map(|p| {
            s.cyl_neighbours(i, p)
                .iter()
                .find(|&&q| !t.cyl_related(i, g.map[p], g.map[q as usize]))
                .map(|&q| json!({"i": i, "x": p, "y": q}))
        })
    });
    out.push(CheckOutcome::from_search(
        "pm-cylinder-forth",
        cyl_forth,
        "x ≡_i y implies g(x) ≡_i g(y)",
    ));
    let cyl_back = (0..n).find_map(|i| {
        (0..size).find_map(|p| {
            let reached = BitSet::from_indices(
                t.size(),
                s.cyl_neighbours(i, p).iter().map(|&q| g.map[q as usize]),
            );
            t.cyl_neighbours(i, g.map[p])
                .iter()
                .find(|&&y| !reached.contains(y as usize))
                .map(|&y| json!({"i": i, "x": p, "target": y}))
        })
    });
    out.push(CheckOutcome::from_search(
        "pm-cylinder-back",
        cyl_back,
        "g(x) ≡_i y' implies some y ≡_i x with g(y) = y'",
    ));
    let maps = Transform::count(n);
    let subst_forth = (0..maps).find_map(|sigma| {
        (0..size)
            .find(|&p| g.map[s.subst_point(sigma, p)] != t.subst_point(sigma, g.map[p]))
            .map(|p| json!({"sigma": Transform::from_index(n, sigma).as_slice(), "x": p}))
    });
    out.push(CheckOutcome::from_search(
        "pm-substitution-forth",
        subst_forth,
        "g(x^σ) = g(x)^σ for every σ",
    ));
    // back for the σ-action: every σ-successor of g(x) has a σ-successor of x above it
    let subst_back = (0..maps).find_map(|sigma| {
        (0..size)
            .find(|&p| {
                let wanted = t.subst_point(sigma, g.map[p]);
                ![s.subst_point(sigma, p)]
                    .iter()
                    .any(|&q| g.map[q] == wanted)
            })
            .map(|p| json!({"sigma": Transform::from_index(n, sigma).as_slice(), "x": p}))
    });
    out.push(CheckOutcome::from_search(
        "pm-substitution-back",
        subst_back,
        "the σ-successor of g(x) is the image of a σ-successor of x",
    ));
    let image = BitSet::from_indices(t.size(), g.map.iter().copied());
    out.push(CheckOutcome::from_search(
        "pm-surjective",
        (!image.is_full()).then(|| json!({"missed": image.complement().first()})),
        format!("{} source points onto {} target points", size, t.size()),
    ));
    out
}

/// A complete boolean homomorphism between finite algebras, given by the
/// images of the domain's atoms.
#[derive(Debug, Clone)]
pub struct AlgebraEmbedding {
    domain: FiniteBao,
    codomain: FiniteBao,
    atom_images: Vec<BitSet>,
}

impl AlgebraEmbedding {
    pub fn domain(&self) -> &FiniteBao {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteBao {
        &self.codomain
    }

    pub fn atom_image(&self, a: usize) -> &BitSet {
        &self.atom_images[a]
    }

    pub fn apply(&self, x: &BitSet) -> BitSet {
        let mut out = self.codomain.zero();
        for a in x.iter() {
            out.union_with(&self.atom_images[a]);
        }
        out
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AlgebraEmbedding) -> AlgebraEmbedding {
        AlgebraEmbedding {
            domain: inner.domain.clone(),
            codomain: self.codomain.clone(),
            atom_images: inner.atom_images.iter().map(|y| self.apply(y)).collect(),
        }
    }
}

/// g⁺ : Y ↦ { x : g(x) ∈ Y }, from the target's complex algebra to the source's.
pub fn dual_embedding(g: &AtomPMorphism) -> AlgebraEmbedding {
    let mut atom_images = vec![BitSet::new(g.source.size()); g.target.size()];
    for (x, &y) in g.map.iter().enumerate() {
        atom_images[y].insert(x);
    }
    AlgebraEmbedding {
        domain: FiniteBao::new(g.target.clone(), Signature::Pea),
        codomain: FiniteBao::new(g.source.clone(), Signature::Pea),
        atom_images,
    }
}

/// How thoroughly an embedding is checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingCheckOptions {
    pub samples: usize,
    pub seed: u64,
    /// Operator images are compared on every atom when the codomain has at
    /// most this many atoms, otherwise on `samples` random atoms.
    pub exhaustive_atom_limit: usize,
}

impl Default for EmbeddingCheckOptions {
    fn default() -> Self {
        EmbeddingCheckOptions {
            samples: 1000,
            seed: 1,
            exhaustive_atom_limit: 10_000,
        }
    }
}

/// Injectivity (exhaustive on atoms), unit and constants (exact), operator
/// images of atoms, and the homomorphism laws on sampled elements.
pub fn check_embedding(e: &AlgebraEmbedding, opts: &EmbeddingCheckOptions) -> Vec<CheckOutcome> {
    let (d, c) = (&e.domain, &e.codomain);
    let n = d.dim();
    let mut out = Vec::new();
    let mut seen = c.zero();
    let mut injective = None;
    for (a, img) in e.atom_images.iter().enumerate() {
        if img.is_empty() || img.intersects(&seen) {
            injective = Some(json!({"atom": a, "empty": img.is_empty()}));
            break;
        }
        seen.union_with(img);
    }
    out.push(CheckOutcome::from_search(
        "emb-injective",
        injective,
        "atoms have nonempty, pairwise disjoint images",
    ));
    out.push(CheckOutcome::from_search(
        "emb-unit",
        (e.apply(&d.one()) != c.one()).then(|| json!({"unit": "not preserved"})),
        "the unit maps to the unit",
    ));
    let diag = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| e.apply(&d.diag(i, j)) != c.diag(i, j))
        .map(|(i, j)| json!({"i": i, "j": j}));
    out.push(CheckOutcome::from_search(
        "emb-diagonals",
        diag,
        "every d_ij maps to d_ij",
    ));

    let maps: Vec<Transform> = Transform::all(n).collect();
    let exhaustive = c.size() <= opts.exhaustive_atom_limit;
    let atoms: Vec<usize> = if exhaustive {
        (0..d.size()).collect()
    } else {
        let mut rng = rng_for(opts.seed, "embedding-atoms", 0);
        (0..opts.samples)
            .map(|_| rand::Rng::gen_range(&mut rng, 0..d.size()))
            .collect()
    };
    let operators = atoms.par_iter().find_map_first(|&a| {
        let x = d.atom(a);
        let ex = e.apply(&x);
        for i in 0..n {
            if e.apply(&d.cyl(i, &x)) != c.cyl(i, &ex) {
                return Some(json!({"atom": a, "operation": format!("c{i}")}));
            }
        }
        maps.iter()
            .find(|s| e.apply(&d.subst(s, &x)) != c.subst(s, &ex))
            .map(|s| json!({"atom": a, "operation": format!("s{:?}", s.as_slice())}))
    });
    out.push(CheckOutcome::from_search(
        "emb-operators",
        operators,
        if exhaustive {
            format!("c_i and s_σ commute with the map on all {} atoms", d.size())
        } else {
            format!(
                "c_i and s_σ commute with the map on {} sampled atoms",
                atoms.len()
            )
        },
    ));

    let laws = (0..opts.samples).into_par_iter().find_map_first(|k| {
        let mut rng = rng_for(opts.seed, "embedding-elements", k as u64);
        let x = random_element(d, &mut rng);
        let y = random_element(d, &mut rng);
        let (ex, ey) = (e.apply(&x), e.apply(&y));
        let mut fails = Vec::new();
        if e.apply(&d.join(&x, &y)) != c.join(&ex, &ey) {
            fails.push("join".to_string());
        }
        if e.apply(&d.meet(&x, &y)) != c.meet(&ex, &ey) {
            fails.push("meet".to_string());
        }
        if e.apply(&d.complement(&x)) != c.complement(&ex) {
            fails.push("complement".to_string());
        }
        for i in 0..n {
            if e.apply(&d.cyl(i, &x)) != c.cyl(i, &ex) {
                fails.push(format!("c{i}"));
            }
        }
        for s in &maps {
            if e.apply(&d.subst(s, &x)) != c.subst(s, &ex) {
                fails.push(format!("s{:?}", s.as_slice()));
            }
        }
        (!fails.is_empty()).then(|| json!({"x": x.to_vec(), "y": y.to_vec(), "operations": fails}))
    });
    out.push(CheckOutcome::from_search(
        "emb-homomorphism",
        laws,
        format!(
            "all operations commute with the map on {} sampled pairs",
            opts.samples
        ),
    ));
    out
}

/// e₊ : μ ↦ { a : e(a) ∈ μ } between the ultrafilter structures of the
/// codomain and the domain. Ultrafilters are read off through bit probes of
/// the domain, so the result does not presuppose that e is atom-wise.
pub fn dual_surjection(e: &AlgebraEmbedding) -> Result<AtomPMorphism, DualityError> {
    let (d, c) = (&e.domain, &e.codomain);
    let source = ultrafilter_structure(c).map_err(DualityError::Ultrafilter)?;
    let target = ultrafilter_structure(d).map_err(DualityError::Ultrafilter)?;
    let size = d.size();
    let bits = usize::BITS as usize - size.max(1).leading_zeros() as usize;
    let probes: Vec<(BitSet, BitSet)> = (0..bits)
        .map(|b| {
            let x = BitSet::from_indices(size, (0..size).filter(|p| p >> b & 1 == 1));
            (e.apply(&x), e.apply(&x.complement()))
        })
        .collect();
    // the domain atom generating each target point
    let mut point_of = vec![0usize; size];
    for (k, &a) in target.generator.iter().enumerate() {
        point_of[a] = k;
    }
    let mut map = Vec::with_capacity(c.size());
    for &x in &source.generator {
        let mut a = 0usize;
        for (b, (inside, outside)) in probes.iter().enumerate() {
            if inside.contains(x) == outside.contains(x) {
                return Err(DualityError::Ultrafilter(format!(
                    "the preimage of the ultrafilter at atom {x} is not an ultrafilter"
                )));
            }
            if inside.contains(x) {
                a |= 1 << b;
            }
        }
        if a >= size {
            return Err(DualityError::Ultrafilter(format!(
                "the preimage of the ultrafilter at atom {x} lies outside the domain"
            )));
        }
        map.push(point_of[a]);
    }
    AtomPMorphism::new(Arc::new(source.frame), Arc::new(target.frame), map)
}

/// 𝒜_+ ≅ At: the ultrafilter structure of the complex algebra of a frame is
/// isomorphic to the frame, witnessed by principal ultrafilter ↦ generator.
pub fn check_ultrafilter_isomorphism(frame: &Arc<Frame>) -> CheckOutcome {
    let alg = FiniteBao::new(frame.clone(), Signature::Pea);
    let result =
        ultrafilter_structure(&alg).and_then(|uf| uf.frame.check_isomorphism(frame, &uf.generator));
    CheckOutcome::from_search(
        "ultrafilter-isomorphism",
        result.err().map(|reason| json!({"reason": reason})),
        format!(
            "ultrafilter structure of the complex algebra ≅ the frame ({} points)",
            frame.size()
        ),
    )
}

/// The round trip (g⁺)₊ = g, comparing points under ultrafilter ↔ atom.
pub fn check_round_trip(g: &AtomPMorphism) -> CheckOutcome {
    let back = dual_surjection(&dual_embedding(g));
    let cex = match back {
        Err(e) => Some(json!({"error": e.to_string()})),
        Ok(h) => (0..g.map.len())
            .find(|&p| h.map[p] != g.map[p])
            .map(|p| json!({"point": p, "g": g.map[p], "round_trip": h.map[p]})),
    };
    CheckOutcome::from_search("dual-round-trip", cex, "(g⁺)₊ = g at every point")
}

/// Finite stages Γ_0 ↞ Γ_1 ↞ …; `steps[s]` maps stage s + 1 onto stage s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphChain {
    stages: Vec<Graph>,
    steps: Vec<VertexMap>,
}

#[derive(Serialize, Deserialize)]
struct GraphChainJson {
    stages: Vec<Graph>,
    steps: Vec<Vec<usize>>,
}

impl GraphChain {
    pub fn new(stages: Vec<Graph>, steps: Vec<Vec<usize>>) -> Result<Self, DualityError> {
        if stages.is_empty() || steps.len() + 1 != stages.len() {
            return Err(DualityError::NotComposable(format!(
                "{} stages need {} steps, got {}",
                stages.len(),
                stages.len().saturating_sub(1),
                steps.len()
            )));
        }
        let steps = steps
            .into_iter()
            .enumerate()
            .map(|(s, map)| VertexMap::new(stages[s + 1].clone(), stages[s].clone(), map))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GraphChain { stages, steps })
    }

    /// C_{base·2^k} → … → C_base, each step wrapping a cycle twice around the next.
    pub fn cycle_wraps(base: usize, steps: usize) -> Self {
        let stages: Vec<Graph> = (0..=steps).map(|s| Graph::cycle(base << s)).collect();
        let maps = (0..steps)
            .map(|s| (0..base << (s + 1)).map(|x| x % (base << s)).collect())
            .collect();
        GraphChain::new(stages, maps).expect("wrap chains are well formed")
    }

    pub fn stages(&self) -> &[Graph] {
        &self.stages
    }

    pub fn steps(&self) -> &[VertexMap] {
        &self.steps
    }
}

impl Serialize for GraphChain {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphChainJson {
            stages: self.stages.clone(),
            steps: self.steps.iter().map(|f| f.map().to_vec()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GraphChain {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = GraphChainJson::deserialize(d)?;
        GraphChain::new(j.stages, j.steps).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StageReport {
    pub stage: usize,
    pub vertices: usize,
    pub edges: usize,
    pub chromatic_number: usize,
    pub atoms: usize,
    pub outcomes: Vec<CheckOutcome>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepReport {
    /// Maps stage `from` onto stage `from − 1`.
    pub from: usize,
    pub outcomes: Vec<CheckOutcome>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainReport {
    pub stages: Vec<StageReport>,
    pub steps: Vec<StepReport>,
    /// Functoriality of lifting and contravariance of duals over composites.
    pub coherence: Vec<CheckOutcome>,
}

impl ChainReport {
    pub fn outcomes(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.stages
            .iter()
            .flat_map(|s| &s.outcomes)
            .chain(self.steps.iter().flat_map(|s| &s.outcomes))
            .chain(&self.coherence)
    }

    pub fn all_ok(&self) -> bool {
        self.outcomes().all(|o| !o.failed())
    }
}

/// Every check of a single step f : Γ → Δ: the graph map, the lift, its dual
/// embedding and the round trip.
pub fn check_step(
    f: &VertexMap,
    source: &AtomStructure,
    target: &AtomStructure,
    opts: &EmbeddingCheckOptions,
) -> Vec<CheckOutcome> {
    let mut out = vec![
        CheckOutcome::from_search(
            "graph-p-morphism",
            (!f.is_p_morphism()).then(|| json!({"map": f.map()})),
            "f[N(x)] = N(f(x)) for every vertex",
        ),
        CheckOutcome::from_search(
            "graph-surjective",
            (!f.is_surjective()).then(|| json!({"map": f.map()})),
            "f is onto",
        ),
    ];
    if !all_ok(&out) {
        return out;
    }
    match lift(f, source, target) {
        Err(e) => out.push(CheckOutcome::fail(
            "lift",
            json!({"error": e.to_string()}),
            "f̂ is defined",
        )),
        Ok(g) => {
            out.push(CheckOutcome::pass(
                "lift",
                format!("every image of {} atoms is an atom", source.len()),
            ));
            out.extend(validate_atom_pmorphism(&g));
            out.extend(check_embedding(&dual_embedding(&g), opts));
            out.push(check_round_trip(&g));
        }
    }
    out
}

/// Check a chain: each stage (χ, 𝒜_+ ≅ At), each step, and for every pair of
/// consecutive steps the composite f̂ and its dual against the composites of
/// the individual maps.
pub fn check_chain(
    chain: &GraphChain,
    n: usize,
    atom_bound: usize,
    opts: &EmbeddingCheckOptions,
) -> Result<ChainReport, DualityError> {
    let structures = chain
        .stages
        .par_iter()
        .map(|g| AtomStructure::enumerate(g, n, atom_bound))
        .collect::<Result<Vec<_>, _>>()?;
    let stages = chain
        .stages
        .par_iter()
        .zip(&structures)
        .enumerate()
        .map(|(stage, (g, s))| StageReport {
            stage,
            vertices: g.len(),
            edges: g.edge_count(),
            chromatic_number: chromatic_number(g).0,
            atoms: s.len(),
            outcomes: vec![check_ultrafilter_isomorphism(s.frame())],
        })
        .collect();
    let steps = chain
        .steps
        .par_iter()
        .enumerate()
        .map(|(k, f)| StepReport {
            from: k + 1,
            outcomes: check_step(f, &structures[k + 1], &structures[k], opts),
        })
        .collect();
    let mut coherence = Vec::new();
    for k in 0..chain.steps.len().saturating_sub(1) {
        // outer : Γ_{k+1} → Γ_k, inner : Γ_{k+2} → Γ_{k+1}
        let (outer, inner) = (&chain.steps[k], &chain.steps[k + 1]);
        let lifted = (
            lift(outer, &structures[k + 1], &structures[k]),
            lift(inner, &structures[k + 2], &structures[k + 1]),
        );
        let (Ok(lo), Ok(li)) = lifted else {
            coherence.push(CheckOutcome::skipped(
                format!("functoriality-{k}"),
                "a step does not lift",
            ));
            continue;
        };
        let composite = outer.compose(inner)?;
        let direct = lift(&composite, &structures[k + 2], &structures[k])?;
        let via = lo.compose(&li)?;
        coherence.push(CheckOutcome::from_search(
            format!("functoriality-{k}"),
            (0..direct.map.len())
                .find(|&p| direct.map[p] != via.map[p])
                .map(|p| json!({"atom": p, "composite": direct.map[p], "composed": via.map[p]})),
            format!(
                "lift of the composite {}→{} equals the composed lifts on every atom",
                k + 2,
                k
            ),
        ));
        coherence.push(check_contravariance(&lo, &li, &direct, opts));
    }
    Ok(ChainReport {
        stages,
        steps,
        coherence,
    })
}

/// (f ∘ g)⁺ = g⁺ ∘ f⁺ on every atom and on sampled elements.
fn check_contravariance(
    outer: &AtomPMorphism,
    inner: &AtomPMorphism,
    composite: &AtomPMorphism,
    opts: &EmbeddingCheckOptions,
) -> CheckOutcome {
    let whole = dual_embedding(composite);
    let parts = dual_embedding(inner).compose(&dual_embedding(outer));
    let d = whole.domain();
    let on_atoms = (0..d.size()).find(|&a| whole.atom_image(a) != parts.atom_image(a));
    let sampled = on_atoms.map(|a| json!({"atom": a})).or_else(|| {
        (0..opts.samples).find_map(|k| {
            let mut rng = rng_for(opts.seed, "contravariance", k as u64);
            let x = random_element(d, &mut rng);
            (whole.apply(&x) != parts.apply(&x)).then(|| json!({"x": x.to_vec()}))
        })
    });
    CheckOutcome::from_search(
        "contravariance",
        sampled,
        format!(
            "(f∘g)⁺ = g⁺∘f⁺ on all atoms and {} sampled elements",
            opts.samples
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn structure(g: &Graph) -> AtomStructure {
        AtomStructure::enumerate(g, 3, 100_000).unwrap()
    }

    #[test]
    fn identity_lifts_to_identity() {
        let g = Graph::complete(2);
        let s = structure(&g);
        let f = lift(&VertexMap::identity(&g), &s, &s).unwrap();
        assert!(f.map().iter().enumerate().all(|(p, &q)| p == q));
        assert!(all_ok(&validate_atom_pmorphism(&f)));
        let e = dual_embedding(&f);
        assert!(e
            .atom_images
            .iter()
            .enumerate()
            .all(|(a, img)| img.to_vec() == vec![a]));
        assert!(check_round_trip(&f).passed());
    }

    #[test]
    fn non_p_morphisms_are_rejected() {
        let p3 = Graph::path(3);
        let k2 = Graph::complete(2);
        // the middle vertex has two neighbours, both sent to one vertex: fine;
        // an end vertex sent next to nothing is not
        let bad = VertexMap::new(p3.clone(), k2.clone(), vec![0, 0, 1]).unwrap();
        assert!(!bad.is_p_morphism());
        let (s, t) = (structure(&p3), structure(&k2));
        assert!(matches!(
            lift(&bad, &s, &t),
            Err(DualityError::NotPMorphism)
        ));
        let fold = VertexMap::new(p3, k2, vec![0, 1, 0]).unwrap();
        let g = lift(&fold, &s, &t).unwrap();
        assert!(all_ok(&validate_atom_pmorphism(&g)));
    }

    #[test]
    fn redirected_atom_fails_validation() {
        let c6 = Graph::cycle(6);
        let c3 = Graph::cycle(3);
        let f = VertexMap::new(c6.clone(), c3.clone(), (0..6).map(|x| x % 3).collect()).unwrap();
        let (s, t) = (structure(&c6), structure(&c3));
        let mut g = lift(&f, &s, &t).unwrap();
        let p = s.len() - 1;
        g.redirect(p, t.bottom_atom());
        let failed: Vec<String> = validate_atom_pmorphism(&g)
            .into_iter()
            .filter(|o| o.failed())
            .map(|o| o.name)
            .collect();
        assert!(!failed.is_empty());
    }

    #[test]
    fn chain_json_roundtrip() {
        let chain = GraphChain::cycle_wraps(3, 1);
        let j = serde_json::to_value(&chain).unwrap();
        assert_eq!(j["steps"], json!([[0, 1, 2, 0, 1, 2]]));
        let back: GraphChain = serde_json::from_value(j).unwrap();
        assert_eq!(back, chain);
        assert!(serde_json::from_value::<GraphChain>(json!({"stages": [], "steps": []})).is_err());
    }
}

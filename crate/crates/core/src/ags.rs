//! Algebra-graph systems M(Γ) = (𝒜(Γ), Γ×n, ℘(Γ×n)).
//!
//! The algebra sort is the complex algebra of the atom structure, the graph
//! sort is the inflated graph, and the boolean sort is the full power set of
//! its vertices. `R_i` projects algebra elements to vertex sets and `S_i`
//! lifts vertex sets back into the algebra below `F_i`.

use crate::atoms::{AtomError, AtomStructure, EqRel, Transform};
use crate::bao::{random_element, rng_for, Bao, FiniteBao, Signature};
use crate::bits::BitSet;
use crate::graph::{chromatic_number, independent_cover, Graph};
use crate::report::CheckOutcome;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use std::sync::OnceLock;

/// The i-th projection of a principal ultrafilter of the algebra sort.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Projection {
    /// The principal ultrafilter of the boolean sort at a vertex.
    Ultra(u32),
    /// The whole boolean sort.
    Improper,
    /// Anything else (never produced by a correct model).
    Other,
}

/// The algebra-graph system of a graph in a fixed dimension.
pub struct AgsModel {
    structure: AtomStructure,
    algebra: FiniteBao,
    f: Vec<BitSet>,
    // lift[i][v] = S_i({v})
    lift: Vec<Vec<BitSet>>,
    chi: OnceLock<usize>,
}

impl std::fmt::Debug for AgsModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AgsModel")
            .field("n", &self.n())
            .field("atoms", &self.algebra.size())
            .field("vertices", &self.vertex_count())
            .finish()
    }
}

impl AgsModel {
    pub fn build(g: &Graph, n: usize, atom_bound: usize) -> Result<Self, AtomError> {
        Ok(Self::from_structure(AtomStructure::enumerate(
            g, n, atom_bound,
        )?))
    }

    pub fn from_structure(structure: AtomStructure) -> Self {
        let algebra = FiniteBao::complex_algebra(&structure, Signature::Pea);
        let n = structure.n();
        let f: Vec<BitSet> = (0..n).map(|i| algebra.f_element(i)).collect();
        let vertices = structure.inflated_graph().len();
        let lift = (0..n)
            .map(|i| {
                let mut rows = vec![BitSet::new(algebra.size()); vertices];
                for p in f[i].iter() {
                    let v = structure
                        .atom(p)
                        .point(i)
                        .expect("atoms below F_i are i-distinguishing");
                    rows[v as usize].insert(p);
                }
                rows
            })
            .collect();
        AgsModel {
            structure,
            algebra,
            f,
            lift,
            chi: OnceLock::new(),
        }
    }

    pub fn structure(&self) -> &AtomStructure {
        &self.structure
    }

    pub fn algebra(&self) -> &FiniteBao {
        &self.algebra
    }

    /// The graph sort Γ×n.
    pub fn graph(&self) -> &Graph {
        self.structure.inflated_graph()
    }

    pub fn n(&self) -> usize {
        self.structure.n()
    }

    pub fn vertex_count(&self) -> usize {
        self.graph().len()
    }

    pub fn f(&self, i: usize) -> &BitSet {
        &self.f[i]
    }

    /// H(x, y): both vertices lie in the same copy of the base graph.
    pub fn h(&self, x: usize, y: usize) -> bool {
        let base = self.structure.base_graph().len();
        Graph::copy_of(x, base) == Graph::copy_of(y, base)
    }

    /// The copies of the base graph, as vertex sets.
    pub fn h_classes(&self) -> Vec<BitSet> {
        let base = self.structure.base_graph().len();
        (0..self.n())
            .map(|l| BitSet::from_indices(self.vertex_count(), l * base..(l + 1) * base))
            .collect()
    }

    /// R_i(a) = { K(i) : (K, ∼) ∈ F_i · a }.
    pub fn r(&self, i: usize, a: &BitSet) -> BitSet {
        let mut out = BitSet::new(self.vertex_count());
        for p in a.intersection(&self.f[i]).iter() {
            if let Some(v) = self.structure.atom(p).point(i) {
                out.insert(v as usize);
            }
        }
        out
    }

    /// S_i(B) = { (K, ∼) ∈ F_i : K(i) ∈ B }.
    pub fn s(&self, i: usize, b: &BitSet) -> BitSet {
        let mut out = self.algebra.zero();
        for v in b.iter() {
            out.union_with(&self.lift[i][v]);
        }
        out
    }

    /// Test fixture: make S_i forget the atoms above vertex `v`.
    pub fn inject_lift_fault(&mut self, i: usize, v: usize) {
        self.lift[i][v] = self.algebra.zero();
    }

    /// The i-th projection of the principal ultrafilter at atom `p`, computed
    /// literally as { R_i(a) : p ∈ a }. By additivity that family is
    /// { R_i{p} ∪ C : C ⊆ R_i(−{p}) }.
    pub fn projection(&self, i: usize, p: usize) -> Projection {
        let base = self.r(i, &self.algebra.atom(p));
        let span = self.r(i, &self.algebra.atom(p).complement());
        if !base.union(&span).is_full() {
            return Projection::Other;
        }
        match base.count() {
            0 => Projection::Improper,
            1 => Projection::Ultra(base.first().unwrap() as u32),
            _ => Projection::Other,
        }
    }

    /// χ(Γ×n), computed once.
    pub fn chromatic_number(&self) -> usize {
        *self.chi.get_or_init(|| chromatic_number(self.graph()).0)
    }

    /// θ_k: the graph sort cannot be covered by k independent sets of the
    /// boolean sort. Since the boolean sort is the full power set this is χ > k.
    pub fn theta(&self, k: usize) -> bool {
        self.chromatic_number() > k
    }

    /// θ_k by its literal reading: no k independent vertex sets sum to 1.
    pub fn theta_by_covers(&self, k: usize) -> bool {
        independent_cover(self.graph(), k).is_none()
    }
}

/// Quantification parameters for the lemma suites.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteOptions {
    /// Random elements per index combination for element-quantified items.
    pub samples: usize,
    pub seed: u64,
    /// Vertex-set items run over every subset when the graph sort has at most
    /// this many vertices, and are sampled otherwise.
    pub exhaustive_vertex_limit: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            samples: 10_000,
            seed: 1,
            exhaustive_vertex_limit: 8,
        }
    }
}

type Item<'a> = Box<dyn Fn() -> CheckOutcome + Send + Sync + 'a>;

/// Run items in parallel, keeping their order.
fn run_items(items: Vec<Item<'_>>) -> Vec<CheckOutcome> {
    items.par_iter().map(|f| f()).collect()
}

fn set_json(x: &BitSet) -> Value {
    json!(x.to_vec())
}

fn random_vertex_set(len: usize, rng: &mut ChaCha8Rng) -> BitSet {
    match rng.gen_range(0..8) {
        0 => BitSet::new(len),
        1 => BitSet::full(len),
        2 if len > 0 => BitSet::singleton(len, rng.gen_range(0..len)),
        _ => BitSet::from_indices(len, (0..len).filter(|_| rng.gen_bool(0.5))),
    }
}

/// The vertex sets an item quantifies over, and a description of the regime.
fn vertex_sets(m: &AgsModel, opts: &SuiteOptions, label: &str) -> (Vec<BitSet>, String) {
    let v = m.vertex_count();
    if v <= opts.exhaustive_vertex_limit {
        let sets = (0u64..1 << v)
            .map(|mask| BitSet::from_indices(v, (0..v).filter(|&x| mask >> x & 1 == 1)))
            .collect();
        (
            sets,
            format!("exhaustive over all {} vertex sets", 1u64 << v),
        )
    } else {
        let mut rng = rng_for(opts.seed, label, 0);
        let sets = (0..opts.samples)
            .map(|_| random_vertex_set(v, &mut rng))
            .collect();
        (sets, format!("{} sampled vertex sets", opts.samples))
    }
}

/// Sample `opts.samples` elements per stream, returning the first failure.
fn sample_each<F>(
    m: &AgsModel,
    opts: &SuiteOptions,
    label: &str,
    stream: u64,
    mut f: F,
) -> Option<Value>
where
    F: FnMut(&mut ChaCha8Rng) -> Option<Value>,
{
    let _ = m;
    let mut rng = rng_for(opts.seed, label, stream);
    (0..opts.samples).find_map(|_| f(&mut rng))
}

fn distinct_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
}

/// The R/S lemma items (i)–(vi).
pub fn check_rs_properties(m: &AgsModel, opts: &SuiteOptions) -> Vec<CheckOutcome> {
    let n = m.n();
    let alg = m.algebra();
    let sampled = format!("{} sampled elements per index", opts.samples);
    let items: Vec<Item> = vec![
        Box::new(|| {
            let cex = (0..n).find_map(|i| {
                sample_each(m, opts, "rs-monotone", i as u64, |rng| {
                    let a = random_element(alg, rng);
                    let b = a.union(&random_element(alg, rng));
                    (!m.r(i, &a).is_subset(&m.r(i, &b)))
                        .then(|| json!({"i": i, "a": set_json(&a), "b": set_json(&b)}))
                })
            });
            CheckOutcome::from_search(
                "rs-monotone",
                cex,
                format!("a ≤ b ⟹ R_i a ≤ R_i b; {sampled}"),
            )
        }),
        Box::new(|| {
            let cex = distinct_pairs(n).find_map(|(i, j)| {
                let d = alg.diag(i, j);
                let atom_cex = d.iter().find_map(|p| {
                    let a = alg.atom(p);
                    (m.r(i, &a) != m.r(j, &a)).then(|| json!({"i": i, "j": j, "a": [p]}))
                });
                atom_cex.or_else(|| {
                    sample_each(m, opts, "rs-diagonal", (i * n + j) as u64, |rng| {
                        let a = random_element(alg, rng).intersection(&d);
                        (m.r(i, &a) != m.r(j, &a))
                            .then(|| json!({"i": i, "j": j, "a": set_json(&a)}))
                    })
                })
            });
            CheckOutcome::from_search(
                "rs-diagonal",
                cex,
                format!("a ≤ d_ij ⟹ R_i a = R_j a; every atom below d_ij plus {sampled}"),
            )
        }),
        Box::new(|| {
            let cex = (0..n).find_map(|i| {
                sample_each(m, opts, "rs-lift-project", i as u64, |rng| {
                    let a = random_element(alg, rng).intersection(m.f(i));
                    (!a.is_subset(&m.s(i, &m.r(i, &a)))).then(|| json!({"i": i, "a": set_json(&a)}))
                })
            });
            CheckOutcome::from_search(
                "rs-lift-project",
                cex,
                format!("a ≤ F_i ⟹ S_i R_i a ≥ a; {sampled}"),
            )
        }),
        Box::new(|| {
            let all = BitSet::full(m.vertex_count());
            let cex = distinct_pairs(n).find_map(|(i, j)| {
                let d = alg.diag(i, j);
                let f = |a: &BitSet| m.r(i, &a.intersection(&d));
                let fd = m.f(i).intersection(&d);
                if f(&fd) != all {
                    return Some(json!({"i": i, "j": j, "item": "f(F_i·d_ij) = 1"}));
                }
                if !f(&alg.zero()).is_empty() {
                    return Some(json!({"i": i, "j": j, "item": "f(0) = 0"}));
                }
                sample_each(m, opts, "rs-homomorphism", (i * n + j) as u64, |rng| {
                    let a = random_element(alg, rng);
                    let b = random_element(alg, rng);
                    let (fa, fb) = (f(&a), f(&b));
                    let broken = if f(&a.union(&b)) != fa.union(&fb) {
                        Some("join")
                    } else if f(&a.intersection(&b)) != fa.intersection(&fb) {
                        Some("meet")
                    } else if f(&a.complement()) != fa.complement() {
                        Some("complement")
                    } else {
                        None
                    };
                    broken.map(|op| {
                        json!({"i": i, "j": j, "item": op, "a": set_json(&a), "b": set_json(&b)})
                    })
                })
            });
            CheckOutcome::from_search(
                "rs-homomorphism",
                cex,
                format!("a ↦ R_i(a·d_ij) preserves +, ·, − and sends F_i·d_ij to 1; {sampled}"),
            )
        }),
        Box::new(|| {
            let (sets, regime) = vertex_sets(m, opts, "rs-retraction");
            let cex = (0..n).find_map(|i| {
                sets.iter().find_map(|b| {
                    (m.r(i, &m.s(i, b)) != *b).then(|| json!({"i": i, "B": set_json(b)}))
                })
            });
            CheckOutcome::from_search("rs-retraction", cex, format!("R_i S_i B = B; {regime}"))
        }),
        Box::new(|| {
            let (sets, regime) = vertex_sets(m, opts, "rs-cylinder");
            let cex = (0..n).find_map(|i| {
                sets.iter().find_map(|b| {
                    let sb = m.s(i, b);
                    (alg.cyl(i, &sb) != sb).then(|| json!({"i": i, "B": set_json(b)}))
                })
            });
            CheckOutcome::from_search(
                "rs-cylinder",
                cex,
                format!("c_i S_i B = S_i B, i.e. i ∉ Δ S_i B; {regime}"),
            )
        }),
    ];
    run_items(items)
}

/// The projection lemma items, exhaustive over atoms, indices and maps.
pub fn check_projection_properties(m: &AgsModel) -> Vec<CheckOutcome> {
    let n = m.n();
    let alg = m.algebra();
    let size = alg.size();
    let s = m.structure();
    let proj: Vec<Vec<Projection>> = (0..n)
        .map(|i| {
            (0..size)
                .into_par_iter()
                .map(|p| m.projection(i, p))
                .collect()
        })
        .collect();
    let classes: Vec<Vec<BitSet>> = (0..n)
        .map(|i| (0..size).map(|p| alg.cyl(i, &alg.atom(p))).collect())
        .collect();
    let proj = &proj;
    let classes = &classes;
    let items: Vec<Item> = vec![
        Box::new(|| {
            let cex = (0..n).find_map(|i| {
                (0..size).find_map(|p| {
                    let in_f = m.f(i).contains(p);
                    let expected = if in_f {
                        Projection::Ultra(s.atom(p).point(i).expect("i-distinguishing"))
                    } else {
                        Projection::Improper
                    };
                    (in_f != s.atom(p).is_distinguishing(i) || proj[i][p] != expected).then(
                        || json!({"i": i, "atom": p, "got": proj[i][p], "expected": expected}),
                    )
                })
            });
            CheckOutcome::from_search(
                "proj-ultrafilter",
                cex,
                "μ(i) is principal at K(i) when μ is i-distinguishing, improper otherwise; all atoms",
            )
        }),
        Box::new(|| {
            let cex = distinct_pairs(n).find_map(|(i, j)| {
                alg.diag(i, j).iter().find_map(|p| {
                    (proj[i][p] != proj[j][p]).then(|| json!({"i": i, "j": j, "atom": p}))
                })
            });
            CheckOutcome::from_search("proj-diagonal", cex, "d_ij ∈ μ ⟹ μ(i) = μ(j); all atoms")
        }),
        Box::new(|| {
            let cex = distinct_pairs(n).find_map(|(i, j)| {
                let d = alg.diag(i, j);
                (0..m.vertex_count()).find_map(|v| {
                    // α = { a : v ∈ R_i(a·d_ij) } is principal at the atoms r with v ∈ R_i({r}·d_ij)
                    let gens: Vec<usize> = (0..size)
                        .filter(|&r| m.r(i, &alg.atom(r).intersection(&d)).contains(v))
                        .collect();
                    let matching: Vec<usize> = (0..size)
                        .filter(|&r| {
                            m.f(i).contains(r)
                                && d.contains(r)
                                && proj[i][r] == Projection::Ultra(v as u32)
                        })
                        .collect();
                    let ok = gens.len() == 1 && matching == gens;
                    (!ok).then(|| {
                        json!({"i": i, "j": j, "vertex": v, "alpha": gens, "matching": matching})
                    })
                })
            });
            CheckOutcome::from_search(
                "proj-unique",
                cex,
                "{ a : R_i(a·d_ij) ∈ β } is the unique ultrafilter with F_i, d_ij and projection β; all i ≠ j and vertices",
            )
        }),
        Box::new(|| {
            let cex = (0..n).find_map(|i| {
                (0..size).into_par_iter().find_map_first(|p| {
                    (0..size).find_map(|q| {
                        let lhs = classes[i][p].contains(q);
                        let diag_agree = (0..n).filter(|&j| j != i).all(|j| {
                            (0..n)
                                .filter(|&k| k != i)
                                .all(|k| alg.diag(j, k).contains(p) == alg.diag(j, k).contains(q))
                        });
                        let rhs = diag_agree && proj[i][p] == proj[i][q];
                        (lhs != rhs).then(|| {
                            json!({"i": i, "mu": p, "nu": q, "related": lhs, "characterised": rhs})
                        })
                    })
                })
            });
            CheckOutcome::from_search(
                "proj-cylinder",
                cex,
                "μ ≡_i ν ⟺ same d_jk for j, k ≠ i and μ(i) = ν(i); all atom pairs",
            )
        }),
        Box::new(|| {
            let cex = (0..n).find_map(|i| {
                (0..size).find_map(|p| {
                    let cls = &classes[i][p];
                    if !cls.contains(p) {
                        return Some(json!({"i": i, "atom": p, "broken": "reflexive"}));
                    }
                    cls.iter().find_map(|q| {
                        (classes[i][q] != *cls)
                            .then(|| json!({"i": i, "atom": p, "other": q, "broken": "symmetric/transitive"}))
                    })
                })
            });
            CheckOutcome::from_search(
                "proj-equivalence",
                cex,
                "≡_i is an equivalence relation; all atoms",
            )
        }),
        Box::new(|| {
            let frame = alg.frame();
            let cex = Transform::all(n).find_map(|sigma| {
                let idx = sigma.index();
                (0..n).find_map(|i| {
                    let j = sigma.missed_outside(i)?;
                    (0..size).find_map(|p| {
                        let q = frame.subst_point(idx, p);
                        (proj[i][q] != proj[j][p])
                            .then(|| json!({"sigma": sigma.as_slice(), "i": i, "j": j, "atom": p}))
                    })
                })
            });
            CheckOutcome::from_search(
                "proj-substitution",
                cex,
                "σ[n∖{i}] = n∖{j} ⟹ μ^σ(i) = μ(j); all maps and atoms",
            )
        }),
    ];
    run_items(items)
}

/// The substitution lemma items plus the facts about F_i and s_σ used later.
pub fn check_substitution_properties(m: &AgsModel, opts: &SuiteOptions) -> Vec<CheckOutcome> {
    let n = m.n();
    let alg = m.algebra();
    let size = alg.size();
    let maps: Vec<Transform> = Transform::all(n).collect();
    let per_map = opts.samples.div_ceil(maps.len()).max(8);
    let per_pair = opts.samples.div_ceil(maps.len() * maps.len()).max(2);
    let maps = &maps;
    let items: Vec<Item> = vec![
        Box::new(move || {
            let cex = maps.par_iter().find_map_first(|sigma| {
                maps.iter().find_map(|tau| {
                    let st = sigma.compose(tau);
                    let fail = |a: &BitSet| {
                        (alg.subst(&st, a) != alg.subst(sigma, &alg.subst(tau, a))).then(|| {
                            json!({"sigma": sigma.as_slice(), "tau": tau.as_slice(), "a": set_json(a)})
                        })
                    };
                    (0..size).find_map(|p| fail(&alg.atom(p))).or_else(|| {
                        let mut rng = rng_for(
                            opts.seed,
                            "subst-composition",
                            (sigma.index() * maps.len() + tau.index()) as u64,
                        );
                        (0..per_pair).find_map(|_| fail(&random_element(alg, &mut rng)))
                    })
                })
            });
            CheckOutcome::from_search(
                "subst-composition",
                cex,
                format!("s_(σ∘τ) = s_σ s_τ; all map pairs on every atom plus {per_pair} sampled elements per pair"),
            )
        }),
        Box::new(move || {
            let cex = maps.iter().find_map(|sigma| {
                let mut rng = rng_for(opts.seed, "subst-homomorphism", sigma.index() as u64);
                let s = |a: &BitSet| alg.subst(sigma, a);
                if !s(&alg.zero()).is_empty() || !s(&alg.one()).is_full() {
                    return Some(json!({"sigma": sigma.as_slice(), "item": "constants"}));
                }
                (0..per_map).find_map(|_| {
                    let a = random_element(alg, &mut rng);
                    let b = random_element(alg, &mut rng);
                    let ok = s(&a.union(&b)) == s(&a).union(&s(&b))
                        && s(&a.complement()) == s(&a).complement();
                    (!ok).then(
                        || json!({"sigma": sigma.as_slice(), "a": set_json(&a), "b": set_json(&b)}),
                    )
                })
            });
            CheckOutcome::from_search(
                "subst-boolean",
                cex,
                format!("s_σ is a boolean homomorphism; all maps, {per_map} sampled pairs each"),
            )
        }),
        Box::new(move || {
            let cex = maps.iter().find_map(|sigma| {
                (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .find_map(|(i, j)| {
                        (alg.subst(sigma, &alg.diag(i, j))
                            != alg.diag(sigma.apply(i), sigma.apply(j)))
                        .then(|| json!({"sigma": sigma.as_slice(), "i": i, "j": j}))
                    })
            });
            CheckOutcome::from_search(
                "subst-diagonal",
                cex,
                "s_σ d_ij = d_σ(i)σ(j); all maps and indices",
            )
        }),
        Box::new(move || {
            let cex = maps.iter().find_map(|sigma| {
                EqRel::all(n).into_iter().find_map(|e| {
                    let pulled = e.pullback(sigma.as_slice());
                    let lhs = alg.subst(sigma, &alg.d_partition(&pulled));
                    (!alg.d_partition(&e).is_subset(&lhs))
                        .then(|| json!({"sigma": sigma.as_slice(), "partition": e.blocks()}))
                })
            });
            CheckOutcome::from_search(
                "subst-partition",
                cex,
                "s_σ d_(∼^σ) ≥ d_∼; all maps and partitions",
            )
        }),
        Box::new(move || {
            let cex = maps.iter().find_map(|sigma| {
                (0..n).find_map(|i| {
                    let j = sigma.missed_outside(i)?;
                    let mut rng = rng_for(opts.seed, "subst-projection", (sigma.index() * n + i) as u64);
                    (0..size)
                        .map(|p| alg.atom(p))
                        .chain((0..per_map).map(|_| random_element(alg, &mut rng)))
                        .find_map(|a| {
                            (!m.r(j, &alg.subst(sigma, &a)).is_subset(&m.r(i, &a))).then(|| {
                                json!({"sigma": sigma.as_slice(), "i": i, "j": j, "a": set_json(&a)})
                            })
                        })
                })
            });
            CheckOutcome::from_search(
                "subst-projection",
                cex,
                format!("σ[n∖{{i}}] = n∖{{j}} ⟹ R_j(s_σ a) ≤ R_i(a); every atom plus {per_map} sampled elements per (σ, i)"),
            )
        }),
        Box::new(move || {
            let cex = maps.iter().find_map(|sigma| {
                let image = sigma.image_mask(None);
                let mut rng = rng_for(opts.seed, "subst-cylinder", sigma.index() as u64);
                (0..per_map).find_map(|_| {
                    let a = random_element(alg, &mut rng);
                    let sa = alg.subst(sigma, &a);
                    (0..n).find_map(|i| {
                        let broken = if image >> i & 1 == 0 && alg.cyl(i, &sa) != sa {
                            Some("c_i s_σ a = s_σ a for i ∉ im σ")
                        } else if sigma.is_injective()
                            && alg.cyl(sigma.apply(i), &sa) != alg.subst(sigma, &alg.cyl(i, &a))
                        {
                            Some("c_σ(i) s_σ a = s_σ c_i a for one-one σ")
                        } else {
                            None
                        };
                        broken.map(|item| {
                            json!({"sigma": sigma.as_slice(), "i": i, "item": item, "a": set_json(&a)})
                        })
                    })
                })
            });
            CheckOutcome::from_search(
                "subst-cylinder",
                cex,
                format!("c_i s_σ a = s_σ a (i ∉ im σ) and c_σ(i) s_σ a = s_σ c_i a (σ one-one); all maps, {per_map} sampled elements each"),
            )
        }),
        Box::new(move || {
            let cex = maps.iter().find_map(|sigma| {
                (0..n).find_map(|i| {
                    let j = sigma.missed_outside(i)?;
                    (alg.subst(sigma, m.f(i)) != *m.f(j))
                        .then(|| json!({"sigma": sigma.as_slice(), "i": i, "j": j}))
                })
            });
            CheckOutcome::from_search("subst-f", cex, "σ[n∖{i}] = n∖{j} ⟹ s_σ F_i = F_j; all maps")
        }),
    ];
    run_items(items)
}

/// Facts about the concrete elements and the graph sort of the model.
pub fn check_model_properties(m: &AgsModel) -> Vec<CheckOutcome> {
    let n = m.n();
    let alg = m.algebra();
    let v = m.vertex_count();
    let items: Vec<Item> = vec![
        Box::new(|| {
            let cex = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .find_map(|(i, j)| {
                    (!m.f(i).intersection(&alg.diag(i, j)).is_subset(m.f(j)))
                        .then(|| json!({"i": i, "j": j}))
                });
            CheckOutcome::from_search("model-f-diagonal", cex, "F_i · d_ij ≤ F_j; all indices")
        }),
        Box::new(|| {
            let cex = EqRel::all(n)
                .into_iter()
                .filter(|e| e.block_count() + 1 < n)
                .find_map(|e| {
                    let d = alg.d_partition(&e);
                    (d.count() != 1)
                        .then(|| json!({"partition": e.blocks(), "atoms": set_json(&d)}))
                });
            CheckOutcome::from_search(
                "model-d-atom",
                cex,
                "d_∼ is an atom when ∼ has fewer than n − 1 classes; all partitions",
            )
        }),
        Box::new(|| {
            let classes = m.h_classes();
            let mut covered = BitSet::new(v);
            let mut cex = None;
            for c in &classes {
                if covered.intersects(c) {
                    cex = Some(json!({"item": "classes overlap", "class": set_json(c)}));
                }
                covered.union_with(c);
            }
            if cex.is_none() && !covered.is_full() {
                cex = Some(json!({"item": "classes miss vertices", "covered": set_json(&covered)}));
            }
            let cex = cex.or_else(|| {
                (0..v)
                    .flat_map(|x| (0..v).map(move |y| (x, y)))
                    .find_map(|(x, y)| {
                        let same_class = classes.iter().any(|c| c.contains(x) && c.contains(y));
                        let broken = if m.h(x, y) != same_class {
                            Some("H is the copy relation")
                        } else if !m.h(x, y) && !m.graph().has_edge(x, y) {
                            Some("¬H(x, y) ⟹ E(x, y)")
                        } else {
                            None
                        };
                        broken.map(|item| json!({"x": x, "y": y, "item": item}))
                    })
            });
            CheckOutcome::from_search(
                "model-copies",
                cex,
                "H classes partition the vertices and ¬H(x, y) ⟹ E(x, y); all vertex pairs",
            )
        }),
    ];
    run_items(items)
}

/// Every suite in order: model, R/S, projection, substitution.
pub fn check_all(m: &AgsModel, opts: &SuiteOptions) -> Vec<CheckOutcome> {
    let mut out = check_model_properties(m);
    out.extend(check_rs_properties(m, opts));
    out.extend(check_projection_properties(m));
    out.extend(check_substitution_properties(m, opts));
    out
}

//! Atom structures built from graphs.
//!
//! An atom is a pair of a partition of `0..n` and a partial map from `0..n`
//! into the vertices of the inflated graph `Γ×n`. The structure carries the
//! diagonal sets, the cylindric equivalences `≡_i` and the substitution action
//! of every map `σ : n → n`.

mod eqrel;
mod transform;

pub use eqrel::EqRel;
pub use transform::Transform;

use crate::frame::Frame;
use crate::graph::Graph;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

/// Supported dimensions.
pub const MIN_DIMENSION: usize = 3;
pub const MAX_DIMENSION: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AtomError {
    #[error("dimension {0} outside the supported range {MIN_DIMENSION}..={MAX_DIMENSION}")]
    Dimension(usize),
    #[error("the base graph has no vertices")]
    EmptyGraph,
    #[error("atom count exceeds the configured bound of {bound}")]
    TooManyAtoms { bound: usize },
}

/// A point of the atom structure.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Atom {
    #[serde(rename = "sim")]
    pub partition: EqRel,
    /// Vertex of the inflated graph assigned to each coordinate, if any.
    #[serde(rename = "K")]
    pub points: Vec<Option<u32>>,
}

impl std::fmt::Debug for Atom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({:?}, {:?})", self.points, self.partition)
    }
}

impl Atom {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn point(&self, i: usize) -> Option<u32> {
        self.points[i]
    }

    /// Membership in the diagonal set D_ij.
    pub fn in_diagonal(&self, i: usize, j: usize) -> bool {
        self.partition.related(i, j)
    }

    pub fn is_distinguishing(&self, i: usize) -> bool {
        self.partition.is_distinguishing(i)
    }

    /// The relation ≡_i: same point at i and same partition away from i.
    pub fn cyl_equiv(&self, other: &Atom, i: usize) -> bool {
        self.points[i] == other.points[i]
            && self.partition.restrict_without(i) == other.partition.restrict_without(i)
    }

    /// The key identifying the ≡_i class of this atom.
    pub fn cyl_key(&self, i: usize) -> (Option<u32>, EqRel) {
        (self.points[i], self.partition.restrict_without(i))
    }

    /// The substitution action: the partition is pulled back along σ, and the
    /// point at i is the point at the unique coordinate missed by σ on n \ {i},
    /// defined exactly when the pulled-back partition is i-distinguishing.
    pub fn substitute(&self, sigma: &Transform) -> Atom {
        let partition = self.partition.pullback(sigma.as_slice());
        let points = (0..self.n())
            .map(|i| {
                if partition.is_distinguishing(i) {
                    let j = sigma
                        .missed_outside(i)
                        .expect("an i-distinguishing pullback makes σ injective off i");
                    self.points[j]
                } else {
                    None
                }
            })
            .collect();
        Atom { partition, points }
    }

    /// The three defining clauses of the atom set, checked against `Γ×n`.
    pub fn is_valid(&self, inflated: &Graph) -> bool {
        let n = self.n();
        if self.partition.len() != n
            || self
                .points
                .iter()
                .flatten()
                .any(|&v| v as usize >= inflated.len())
        {
            return false;
        }
        let blocks = self.partition.block_count();
        if blocks == n {
            let Some(pts) = self
                .points
                .iter()
                .map(|p| p.map(|v| v as usize))
                .collect::<Option<Vec<_>>>()
            else {
                return false;
            };
            !inflated.is_independent_slice(&pts)
        } else if blocks + 1 == n {
            let (i, j) = self.partition.pair_block().expect("n - 1 blocks");
            self.points
                .iter()
                .enumerate()
                .all(|(k, p)| p.is_some() == (k == i || k == j))
                && self.points[i] == self.points[j]
        } else {
            self.points.iter().all(Option::is_none)
        }
    }
}

/// The finite atom structure of a graph in a fixed dimension.
pub struct AtomStructure {
    base: Graph,
    inflated: Graph,
    n: usize,
    atoms: Vec<Atom>,
    index: HashMap<Atom, u32>,
    frame: Arc<Frame>,
}

impl std::fmt::Debug for AtomStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AtomStructure")
            .field("n", &self.n)
            .field("base_vertices", &self.base.len())
            .field("atoms", &self.atoms.len())
            .finish()
    }
}

/// Every valid atom, sorted, or an error once more than `bound` have been produced.
fn list_atoms(inflated: &Graph, n: usize, bound: usize) -> Result<Vec<Atom>, AtomError> {
    let m = inflated.len();
    let mut out = Vec::new();
    let push = |a: Atom, out: &mut Vec<Atom>| {
        out.push(a);
        if out.len() > bound {
            Err(AtomError::TooManyAtoms { bound })
        } else {
            Ok(())
        }
    };
    for partition in EqRel::all(n) {
        let blocks = partition.block_count();
        if blocks == n {
            let mut tuple = vec![0usize; n];
            'odometer: loop {
                if !inflated.is_independent_slice(&tuple) {
                    let points = tuple.iter().map(|&v| Some(v as u32)).collect();
                    push(
                        Atom {
                            partition: partition.clone(),
                            points,
                        },
                        &mut out,
                    )?;
                }
                for slot in tuple.iter_mut().rev() {
                    *slot += 1;
                    if *slot < m {
                        continue 'odometer;
                    }
                    *slot = 0;
                }
                break;
            }
        } else if blocks + 1 == n {
            let (i, j) = partition.pair_block().expect("n - 1 blocks");
            for v in 0..m as u32 {
                let mut points = vec![None; n];
                points[i] = Some(v);
                points[j] = Some(v);
                push(
                    Atom {
                        partition: partition.clone(),
                        points,
                    },
                    &mut out,
                )?;
            }
        } else {
            push(
                Atom {
                    partition,
                    points: vec![None; n],
                },
                &mut out,
            )?;
        }
    }
    out.sort();
    Ok(out)
}

impl AtomStructure {
    /// Enumerate the atom structure of `g` in dimension `n`, refusing to build
    /// more than `bound` atoms.
    pub fn enumerate(g: &Graph, n: usize, bound: usize) -> Result<Self, AtomError> {
        if !(MIN_DIMENSION..=MAX_DIMENSION).contains(&n) {
            return Err(AtomError::Dimension(n));
        }
        if g.is_empty() {
            return Err(AtomError::EmptyGraph);
        }
        let inflated = g.inflate(n);
        let atoms = list_atoms(&inflated, n, bound)?;
        let index: HashMap<Atom, u32> = atoms
            .iter()
            .enumerate()
            .map(|(k, a)| (a.clone(), k as u32))
            .collect();
        let frame = Arc::new(Frame::from_atoms(n, &atoms, &index));
        Ok(AtomStructure {
            base: g.clone(),
            inflated,
            n,
            atoms,
            index,
            frame,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn base_graph(&self) -> &Graph {
        &self.base
    }

    pub fn inflated_graph(&self) -> &Graph {
        &self.inflated
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom(&self, k: usize) -> &Atom {
        &self.atoms[k]
    }

    pub fn index_of(&self, a: &Atom) -> Option<usize> {
        self.index.get(a).map(|&k| k as usize)
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    /// Index of the unique atom whose partition has a single block.
    pub fn bottom_atom(&self) -> usize {
        self.index_of(&Atom {
            partition: EqRel::total(self.n),
            points: vec![None; self.n],
        })
        .expect("the nowhere-defined atom always exists")
    }

    /// A stable 64-bit FNV-1a digest of the ordered atom list.
    pub fn digest(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |b: u8| {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        };
        for a in &self.atoms {
            for &b in a.partition.blocks() {
                eat(b);
            }
            for p in &a.points {
                match p {
                    None => eat(0xff),
                    Some(v) => v.to_le_bytes().into_iter().for_each(&mut eat),
                }
            }
        }
        h
    }
}

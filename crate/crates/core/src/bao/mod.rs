//! Finite boolean algebras with operators: complex algebras of frames.
//!
//! Elements of a [`FiniteBao`] are bit vectors over the points of its frame.
//! Cylindrifications are unions of neighbour lists and substitutions are
//! preimages under the point action.

mod check;
mod subalgebra;
pub mod term;
mod ultrafilter;

pub use check::{
    ca_schemas, check_axioms, check_ca_axioms, check_discriminator, check_equation,
    check_pea_axioms, pea_schemas, AxiomCheckOptions, CheckError, Strategy, Verdict,
    EXHAUSTIVE_LIMIT_LOG2,
};
pub(crate) use check::{random_element, rng_for};
pub use subalgebra::{Subalgebra, SubalgebraError, MAX_SUBALGEBRA_BLOCKS};
pub use term::{parse_schemas, Equation, ParseError, Relation, Schema, Term};
pub use ultrafilter::{
    canonical_extension, check_canonical_extension, ultrafilter_structure, CanonicalExtension,
    UltrafilterStructure,
};

use crate::atoms::{AtomStructure, EqRel, Transform};
use crate::bits::BitSet;
use crate::frame::Frame;
use serde::{Deserialize, Serialize};
use std::fmt::Debug;
use std::sync::Arc;
use thiserror::Error;

/// Operator signatures, each a reduct of the next richer one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Signature {
    /// Boolean operations and cylindrifications.
    Df,
    /// Adds diagonal constants.
    Ca,
    /// Cylindrifications and substitutions.
    Pa,
    /// Everything.
    Pea,
}

impl Signature {
    pub fn has_diagonals(self) -> bool {
        matches!(self, Signature::Ca | Signature::Pea)
    }

    pub fn has_substitutions(self) -> bool {
        matches!(self, Signature::Pa | Signature::Pea)
    }

    pub fn admits(self, t: &Term) -> bool {
        (self.has_diagonals() || !t.uses_diagonals())
            && (self.has_substitutions() || !t.uses_substitutions())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable x{0} is unbound")]
    Unbound(usize),
    #[error("index {0} out of range for dimension {1}")]
    Index(usize, usize),
    #[error("operator outside the {0:?} signature")]
    Signature(Signature),
}

/// The operations of an n-dimensional boolean algebra with operators.
pub trait Bao: Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn dim(&self) -> usize;
    fn signature(&self) -> Signature;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn complement(&self, a: &Self::Elem) -> Self::Elem;
    fn cyl(&self, i: usize, a: &Self::Elem) -> Self::Elem;
    fn diag(&self, i: usize, j: usize) -> Self::Elem;
    fn subst(&self, sigma: &Transform, a: &Self::Elem) -> Self::Elem;

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.join(a, b) == *b
    }

    /// Evaluate a term under an assignment of its variables.
    fn eval(&self, t: &Term, env: &[Self::Elem]) -> Result<Self::Elem, EvalError> {
        let n = self.dim();
        let idx = |i: usize| {
            if i < n {
                Ok(i)
            } else {
                Err(EvalError::Index(i, n))
            }
        };
        Ok(match t {
            Term::Var(k) => env.get(*k).cloned().ok_or(EvalError::Unbound(*k))?,
            Term::Zero => self.zero(),
            Term::One => self.one(),
            Term::Join(a, b) => self.join(&self.eval(a, env)?, &self.eval(b, env)?),
            Term::Meet(a, b) => self.meet(&self.eval(a, env)?, &self.eval(b, env)?),
            Term::Neg(a) => self.complement(&self.eval(a, env)?),
            Term::Cyl(i, a) => self.cyl(idx(*i)?, &self.eval(a, env)?),
            Term::Diag(i, j) => {
                if !self.signature().has_diagonals() {
                    return Err(EvalError::Signature(self.signature()));
                }
                self.diag(idx(*i)?, idx(*j)?)
            }
            Term::Subst(s, a) => {
                if !self.signature().has_substitutions() {
                    return Err(EvalError::Signature(self.signature()));
                }
                if s.n() != n {
                    return Err(EvalError::Index(s.n(), n));
                }
                self.subst(s, &self.eval(a, env)?)
            }
        })
    }

    /// Whether both sides stand in the equation's relation under `env`.
    fn satisfies(&self, eq: &Equation, env: &[Self::Elem]) -> Result<bool, EvalError> {
        let l = self.eval(&eq.lhs, env)?;
        let r = self.eval(&eq.rhs, env)?;
        Ok(match eq.relation {
            Relation::Eq => l == r,
            Relation::Le => self.leq(&l, &r),
        })
    }

    /// The term c_1 … c_{n−1} c_{n−1} … c_1 x (c_1 applied first).
    fn discriminator(&self, a: &Self::Elem) -> Self::Elem {
        let n = self.dim();
        let mut x = a.clone();
        for i in 1..n {
            x = self.cyl(i, &x);
        }
        for i in (1..n).rev() {
            x = self.cyl(i, &x);
        }
        x
    }
}

/// The complex algebra of a frame.
#[derive(Clone, Debug)]
pub struct FiniteBao {
    frame: Arc<Frame>,
    signature: Signature,
}

impl FiniteBao {
    pub fn new(frame: Arc<Frame>, signature: Signature) -> Self {
        FiniteBao { frame, signature }
    }

    /// The complex algebra of an atom structure.
    pub fn complex_algebra(s: &AtomStructure, signature: Signature) -> Self {
        Self::new(s.frame().clone(), signature)
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    /// Number of atoms.
    pub fn size(&self) -> usize {
        self.frame.size()
    }

    /// The same frame in another signature.
    pub fn reduct(&self, signature: Signature) -> FiniteBao {
        FiniteBao::new(self.frame.clone(), signature)
    }

    pub fn atom(&self, k: usize) -> BitSet {
        BitSet::singleton(self.size(), k)
    }

    /// s_σ by transform index.
    pub fn subst_by_index(&self, sigma: usize, a: &BitSet) -> BitSet {
        let table = self.frame.subst_table(sigma);
        BitSet::from_indices(
            self.size(),
            (0..self.size()).filter(|&p| a.contains(table[p] as usize)),
        )
    }

    /// F_i = ∏ { −d_jk : j < k < n, j, k ≠ i }.
    pub fn f_element(&self, i: usize) -> BitSet {
        let n = self.dim();
        let mut acc = self.one();
        for j in 0..n {
            for k in j + 1..n {
                if j != i && k != i {
                    acc = self.meet(&acc, &self.complement(&self.diag(j, k)));
                }
            }
        }
        acc
    }

    /// d_∼ = ∏_{i∼j} d_ij · ∏_{i≁j} −d_ij.
    pub fn d_partition(&self, e: &EqRel) -> BitSet {
        let n = self.dim();
        let mut acc = self.one();
        for i in 0..n {
            for j in 0..n {
                let d = self.diag(i, j);
                let f = if e.related(i, j) {
                    d
                } else {
                    self.complement(&d)
                };
                acc = self.meet(&acc, &f);
            }
        }
        acc
    }

    /// Δa = { i < n : c_i a ≠ a }, as a bit mask.
    pub fn dimension_set(&self, a: &BitSet) -> u64 {
        (0..self.dim())
            .filter(|&i| self.cyl(i, a) != *a)
            .fold(0, |m, i| m | 1 << i)
    }
}

impl Bao for FiniteBao {
    type Elem = BitSet;

    fn dim(&self) -> usize {
        self.frame.n()
    }

    fn signature(&self) -> Signature {
        self.signature
    }

    fn zero(&self) -> BitSet {
        BitSet::new(self.size())
    }

    fn one(&self) -> BitSet {
        BitSet::full(self.size())
    }

    fn join(&self, a: &BitSet, b: &BitSet) -> BitSet {
        a.union(b)
    }

    fn meet(&self, a: &BitSet, b: &BitSet) -> BitSet {
        a.intersection(b)
    }

    fn complement(&self, a: &BitSet) -> BitSet {
        a.complement()
    }

    fn leq(&self, a: &BitSet, b: &BitSet) -> bool {
        a.is_subset(b)
    }

    fn cyl(&self, i: usize, a: &BitSet) -> BitSet {
        let mut out = BitSet::new(self.size());
        let mut seen = BitSet::new(self.frame.cyl_list_count(i));
        for p in a.iter() {
            let id = self.frame.cyl_list_id(i, p);
            if !seen.contains(id) {
                seen.insert(id);
                for &q in self.frame.cyl_list(i, id) {
                    out.insert(q as usize);
                }
            }
        }
        out
    }

    fn diag(&self, i: usize, j: usize) -> BitSet {
        self.frame.diag(i, j).clone()
    }

    fn subst(&self, sigma: &Transform, a: &BitSet) -> BitSet {
        self.subst_by_index(sigma.index(), a)
    }
}

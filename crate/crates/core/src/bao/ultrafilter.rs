//! Ultrafilter structures and canonical extensions of finite algebras.
//!
//! Every ultrafilter of a finite boolean algebra is principal, generated by an
//! atom. The relations of the ultrafilter structure are computed through the
//! algebra's operations on those generators: μ ≡_i ν iff c_i[μ] ⊆ ν, D_ij
//! holds at ν iff d_ij ∈ ν, and ν^σ = { a : s_σ a ∈ ν }.

use super::check::{random_element, rng_for};
use super::{Bao, FiniteBao};
use crate::atoms::Transform;
use crate::bits::BitSet;
use crate::frame::Frame;
use crate::report::CheckOutcome;
use serde_json::json;
use std::sync::Arc;

/// The ultrafilter structure of a finite algebra. Point k is the principal
/// ultrafilter generated by the atom `generator[k]`.
#[derive(Clone, Debug)]
pub struct UltrafilterStructure {
    pub frame: Frame,
    pub generator: Vec<usize>,
}

/// Compute the ultrafilter structure. Fails only if the algebra's
/// substitutions are not boolean homomorphisms (then some ν^σ is not an ultrafilter).
pub fn ultrafilter_structure(alg: &FiniteBao) -> Result<UltrafilterStructure, String> {
    let size = alg.size();
    let n = alg.dim();
    // the atoms of the boolean reduct are exactly the singletons
    let generator: Vec<usize> = (0..size).collect();
    let point_of = |atom: usize| atom;
    let mut diag = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let d = alg.diag(i, j);
            diag.push(BitSet::from_indices(
                size,
                (0..size).filter(|&k| d.contains(generator[k])),
            ));
        }
    }
    // R_ci(μ_p, ν_q) iff q ∈ c_i{p}
    let cyl: Vec<Vec<Vec<u32>>> = (0..n)
        .map(|i| {
            (0..size)
                .map(|k| {
                    alg.cyl(i, &alg.atom(generator[k]))
                        .iter()
                        .map(|q| point_of(q) as u32)
                        .collect()
                })
                .collect()
        })
        .collect();
    // ν_q^σ is the principal ultrafilter at r where r is read off bit by bit:
    // bit b of r is set iff the set X_b of atoms with bit b set lies in ν^σ.
    let bits = usize::BITS as usize - size.max(1).leading_zeros() as usize;
    let probes: Vec<BitSet> = (0..bits)
        .map(|b| BitSet::from_indices(size, (0..size).filter(|p| p >> b & 1 == 1)))
        .collect();
    let mut subst = Vec::with_capacity(Transform::count(n));
    for sigma in Transform::all(n) {
        let pre: Vec<BitSet> = probes.iter().map(|x| alg.subst(&sigma, x)).collect();
        let pre_neg: Vec<BitSet> = probes
            .iter()
            .map(|x| alg.subst(&sigma, &x.complement()))
            .collect();
        let mut row = Vec::with_capacity(size);
        for &q in &generator {
            let mut r = 0usize;
            for b in 0..bits {
                let inside = pre[b].contains(q);
                if inside == pre_neg[b].contains(q) {
                    return Err(format!(
                        "preimage of the ultrafilter at atom {q} under s_{sigma:?} is not an ultrafilter"
                    ));
                }
                if inside {
                    r |= 1 << b;
                }
            }
            if r >= size {
                return Err(format!("s_{sigma:?} sends atom {q} outside the algebra"));
            }
            row.push(point_of(r) as u32);
        }
        subst.push(row);
    }
    Ok(UltrafilterStructure {
        frame: Frame::from_tables(n, size, diag, cyl, subst),
        generator,
    })
}

/// The canonical extension (A_+)^+ with the canonical embedding.
#[derive(Clone, Debug)]
pub struct CanonicalExtension {
    pub algebra: FiniteBao,
    /// `embedding[p]` is the ultrafilter point generated by atom p.
    pub embedding: Vec<usize>,
}

impl CanonicalExtension {
    /// The canonical embedding b ↦ { ν : b ∈ ν }.
    pub fn embed(&self, b: &BitSet) -> BitSet {
        BitSet::from_indices(self.algebra.size(), b.iter().map(|p| self.embedding[p]))
    }
}

pub fn canonical_extension(alg: &FiniteBao) -> Result<CanonicalExtension, String> {
    let uf = ultrafilter_structure(alg)?;
    let mut embedding = vec![0usize; alg.size()];
    for (k, &p) in uf.generator.iter().enumerate() {
        embedding[p] = k;
    }
    Ok(CanonicalExtension {
        algebra: FiniteBao::new(Arc::new(uf.frame), alg.signature()),
        embedding,
    })
}

/// Verify that the canonical embedding is an isomorphism onto the extension:
/// a frame isomorphism on atoms, plus a homomorphism on sampled elements.
pub fn check_canonical_extension(
    alg: &FiniteBao,
    ext: &CanonicalExtension,
    samples: usize,
    seed: u64,
) -> Vec<CheckOutcome> {
    let mut out = vec![CheckOutcome::from_search(
        "canext-atom-count",
        (alg.size() != ext.algebra.size())
            .then(|| json!({"algebra": alg.size(), "extension": ext.algebra.size()})),
        format!("{} atoms on both sides", alg.size()),
    )];
    let iso = alg
        .frame()
        .check_isomorphism(ext.algebra.frame(), &ext.embedding);
    out.push(CheckOutcome::from_search(
        "canext-isomorphism",
        iso.err().map(|e| json!({"reason": e})),
        "canonical embedding is an isomorphism of atom structures",
    ));
    let n = alg.dim();
    let sig = alg.signature();
    let maps: Vec<Transform> = if sig.has_substitutions() {
        Transform::all(n).collect()
    } else {
        Vec::new()
    };
    let mut rng = rng_for(seed, "canonical-extension", 0);
    let mut bad = None;
    'outer: for _ in 0..samples {
        let x = random_element(alg, &mut rng);
        let y = random_element(alg, &mut rng);
        let (ex, ey) = (ext.embed(&x), ext.embed(&y));
        let e = &ext.algebra;
        let mut fails: Vec<String> = Vec::new();
        if ext.embed(&alg.join(&x, &y)) != e.join(&ex, &ey) {
            fails.push("join".into());
        }
        if ext.embed(&alg.complement(&x)) != e.complement(&ex) {
            fails.push("complement".into());
        }
        for i in 0..n {
            if ext.embed(&alg.cyl(i, &x)) != e.cyl(i, &ex) {
                fails.push(format!("c{i}"));
            }
        }
        for s in &maps {
            if ext.embed(&alg.subst(s, &x)) != e.subst(s, &ex) {
                fails.push(format!("s{s:?}"));
            }
        }
        if !fails.is_empty() {
            bad = Some(json!({"x": x.to_vec(), "y": y.to_vec(), "operations": fails}));
            break 'outer;
        }
    }
    if bad.is_none() && sig.has_diagonals() {
        for i in 0..n {
            for j in 0..n {
                if ext.embed(&alg.diag(i, j)) != ext.algebra.diag(i, j) {
                    bad = Some(json!({"diagonal": [i, j]}));
                }
            }
        }
    }
    out.push(CheckOutcome::from_search(
        "canext-homomorphism",
        bad,
        format!(
            "embedding commutes with all operations on {samples} sampled pairs and all constants"
        ),
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::AtomStructure;
    use crate::bao::Signature;
    use crate::graph::Graph;

    #[test]
    fn ultrafilter_structure_matches_atoms() {
        for g in [Graph::complete(1), Graph::complete(2)] {
            let s = AtomStructure::enumerate(&g, 3, 5000).unwrap();
            let a = FiniteBao::complex_algebra(&s, Signature::Pea);
            let uf = ultrafilter_structure(&a).unwrap();
            let id: Vec<usize> = (0..s.len()).collect();
            assert_eq!(s.frame().check_isomorphism(&uf.frame, &id), Ok(()));
        }
    }

    #[test]
    fn canonical_extension_is_isomorphic() {
        let s = AtomStructure::enumerate(&Graph::complete(1), 3, 5000).unwrap();
        let a = FiniteBao::complex_algebra(&s, Signature::Pea);
        let ext = canonical_extension(&a).unwrap();
        let out = check_canonical_extension(&a, &ext, 200, 5);
        assert!(out.iter().all(CheckOutcome::passed), "{out:?}");
    }

    #[test]
    fn corrupted_frame_breaks_isomorphism() {
        let s = AtomStructure::enumerate(&Graph::complete(1), 3, 5000).unwrap();
        let a = FiniteBao::complex_algebra(&s, Signature::Pea);
        let ext = canonical_extension(&a).unwrap();
        let mut f = (**s.frame()).clone();
        f.set_cyl_neighbours(0, 3, vec![3]);
        assert!(f
            .check_isomorphism(ext.algebra.frame(), &ext.embedding)
            .is_err());
    }
}

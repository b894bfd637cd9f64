//! A direct recursive evaluation of the game, used to cross-check the engine.
//!
//! Every move and every response is evaluated (no short-circuiting); moves come
//! straight from the cylindrifications of atoms and responses from a plain
//! enumeration of labellings checked by the network validator.

use super::{kernel, tuple_at, validate_labels, Mode, UfNetwork};
use crate::ags::AgsModel;
use crate::bao::Bao;

/// Every valid network over one more node that restricts to `net`.
fn all_extensions(m: &AgsModel, net: &UfNetwork, mode: Mode) -> Vec<UfNetwork> {
    let n = net.n();
    let nodes = net.nodes() + 1;
    let mut labels = net.embed_labels(nodes);
    let fresh: Vec<usize> = (0..labels.len()).filter(|&t| labels[t].is_none()).collect();
    let alg = m.algebra();
    let domains: Vec<Vec<u32>> = fresh
        .iter()
        .map(|&t| {
            alg.d_partition(&kernel(&tuple_at(n, nodes, t)))
                .iter()
                .map(|p| p as u32)
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    fill(
        m,
        n,
        nodes,
        mode,
        &fresh,
        &domains,
        0,
        &mut labels,
        &mut out,
    );
    out
}

#[allow(clippy::too_many_arguments)]
fn fill(
    m: &AgsModel,
    n: usize,
    nodes: usize,
    mode: Mode,
    fresh: &[usize],
    domains: &[Vec<u32>],
    pos: usize,
    labels: &mut Vec<Option<u32>>,
    out: &mut Vec<UfNetwork>,
) {
    if pos == fresh.len() {
        let full = labels.iter().map(|l| l.unwrap()).collect();
        out.push(UfNetwork::new(n, nodes, full).unwrap());
        return;
    }
    for &l in &domains[pos] {
        labels[fresh[pos]] = Some(l);
        if validate_labels(m, n, nodes, labels, mode).is_ok() {
            fill(m, n, nodes, mode, fresh, domains, pos + 1, labels, out);
        }
    }
    labels[fresh[pos]] = None;
}

fn witnessed(net: &UfNetwork, v: &[usize], i: usize, a: usize) -> bool {
    let mut w = v.to_vec();
    (0..net.nodes()).any(|x| {
        w[i] = x;
        net.label(&w) == a
    })
}

/// Whether ∃ survives `depth` rounds from `net` against atom moves.
pub fn naive_survives(m: &AgsModel, net: &UfNetwork, depth: usize, mode: Mode) -> bool {
    if depth == 0 {
        return true;
    }
    let alg = m.algebra();
    let size = alg.size();
    let extensions = all_extensions(m, net, mode);
    let extension_survives: Vec<bool> = extensions
        .iter()
        .map(|e| naive_survives(m, e, depth - 1, mode))
        .collect();
    let stays = naive_survives(m, net, depth - 1, mode);
    let mut all = true;
    for idx in 0..net.tuple_count() {
        let v = net.tuple(idx);
        let label = net.labels()[idx] as usize;
        for i in 0..net.n() {
            for a in 0..size {
                // c_i a ∈ N(v)
                if !alg.cyl(i, &alg.atom(a)).contains(label) {
                    continue;
                }
                let mut answered = witnessed(net, &v, i, a) && stays;
                for (e, &ok) in extensions.iter().zip(&extension_survives) {
                    answered |= ok && witnessed(e, &v, i, a);
                }
                all &= answered;
            }
        }
    }
    all
}

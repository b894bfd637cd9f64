//! Built-in graphs with fixed vertex numbering.

use super::{Graph, GraphError};

/// Every accepted name, in listing order.
pub fn names() -> Vec<String> {
    let mut out = Vec::new();
    out.extend((1..=6).map(|k| format!("K{k}")));
    out.extend((3..=12).map(|k| format!("C{k}")));
    out.extend((2..=6).map(|k| format!("P{k}")));
    out.push("petersen".into());
    out.push("grotzsch".into());
    out
}

/// Look up a built-in graph. `Pk` is the path on k vertices, and
/// `single-vertex` is an alias for `K1`.
pub fn by_name(name: &str) -> Result<Graph, GraphError> {
    let unknown = || GraphError::UnknownName(name.to_string());
    match name {
        "single-vertex" => return Ok(Graph::complete(1)),
        "petersen" => return Ok(petersen()),
        "grotzsch" => return Ok(grotzsch()),
        _ => {}
    }
    let (kind, rest) = name.split_at(name.chars().next().map_or(0, char::len_utf8));
    let k: usize = rest.parse().map_err(|_| unknown())?;
    if rest.starts_with('0') || rest.starts_with('+') {
        return Err(unknown());
    }
    match kind {
        "K" if (1..=6).contains(&k) => Ok(Graph::complete(k)),
        "C" if (3..=12).contains(&k) => Ok(Graph::cycle(k)),
        "P" if (2..=6).contains(&k) => Ok(Graph::path(k)),
        _ => Err(unknown()),
    }
}

/// Outer 5-cycle 0..5, inner pentagram 5..10, spokes i -- i+5.
pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
        edges.push((i, i + 5));
    }
    Graph::from_edges(10, edges).expect("valid edges")
}

/// The Grötzsch graph, built as the Mycielskian of the 5-cycle.
pub fn grotzsch() -> Graph {
    Graph::cycle(5).mycielskian()
}

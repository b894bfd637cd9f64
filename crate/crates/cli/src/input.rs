//! Loading graphs, networks and chains from builtin names or JSON files.

use crate::CliError;
use gralg::ags::AgsModel;
use gralg::atoms::AtomStructure;
use gralg::duality::GraphChain;
use gralg::graph::{named, Graph, GraphJson};
use gralg::networks::UfNetwork;
use serde::de::DeserializeOwned;
use std::path::Path;

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(path.display(), format!("cannot read: {e}")))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(path.display(), e.to_string()))
}

/// A builtin graph name, or the path of a graph JSON file.
pub fn graph(spec: &str) -> Result<Graph, CliError> {
    let path = Path::new(spec);
    if path.is_file() {
        let json: GraphJson = read_json(path)?;
        return Graph::from_json(&json).map_err(|e| CliError::input(spec, e.to_string()));
    }
    named::by_name(spec).map_err(|_| {
        CliError::input(
            spec,
            format!(
                "neither a readable file nor a builtin graph ({})",
                named::names().join(", ")
            ),
        )
    })
}

pub fn atom_structure(g: &Graph, n: usize, bound: usize) -> Result<AtomStructure, CliError> {
    AtomStructure::enumerate(g, n, bound).map_err(|e| CliError::resource("atom_bound", e))
}

pub fn model(g: &Graph, n: usize, bound: usize) -> Result<AgsModel, CliError> {
    Ok(AgsModel::from_structure(atom_structure(g, n, bound)?))
}

/// A network file `{"n": .., "nodes": .., "labels": [..]}`, checked for shape.
pub fn network(path: &Path, m: &AgsModel) -> Result<UfNetwork, CliError> {
    let raw: UfNetwork = read_json(path)?;
    let net = UfNetwork::new(raw.n(), raw.nodes(), raw.labels().to_vec())
        .map_err(|e| CliError::input(path.display(), e.to_string()))?;
    if net.n() != m.n() {
        return Err(CliError::input(
            path.display(),
            format!("network has dimension {}, model has {}", net.n(), m.n()),
        ));
    }
    Ok(net)
}

pub fn chain(path: &Path) -> Result<GraphChain, CliError> {
    read_json(path)
}

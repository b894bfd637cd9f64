pub mod ags;
pub mod atoms;
pub mod bao;
pub mod bits;
pub mod duality;
pub mod frame;
pub mod graph;
pub mod networks;
pub mod report;

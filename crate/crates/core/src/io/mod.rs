//! Text formats: `.ring` presentations, `.cx` complexes, `.graph` bipartite
//! graphs, and JSON reports.

pub(crate) mod expr;
pub mod complex;
pub mod graph;
pub mod report;
pub mod ring;
pub(crate) mod sections;

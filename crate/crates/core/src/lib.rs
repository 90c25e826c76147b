//! Wordnets as typed directed graphs: censuses, cluster sizes, supremacy
//! (in-component size) with heavy-tail fits, and null-model analysis of
//! inter-lingual links between two wordnets.

pub mod bilayer;
pub mod cli;
pub mod graph;
pub mod ingest;
pub mod model;
pub mod stats;

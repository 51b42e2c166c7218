//! Structural analysis of semantic networks.
//!
//! The crate is organized around an undirected simple [`graph::Graph`] with
//! contiguous node ids and sorted adjacency. On top of it sit:
//!
//! * [`ingest`]: ConceptNet assertion-dump parsing into per-relation graphs,
//!   relation unions, and inflection merge maps.
//! * [`degree`]: degree densities, logarithmic binning, mixing (ANND and the
//!   degree assortativity coefficient), and local clustering.
//! * [`tail`]: tail-index estimation (Hill, moments, biweight kernel, and a
//!   log-log regression slope) with a three-estimator power-law verdict.
//! * [`rewire`]: degree-preserving link rewiring and null-model ensembles.
//! * [`motifs`]: triangle- and quadrangle-based similarity/complementarity
//!   coefficients.
//! * [`ubcm`]: the undirected binary configuration model, sampling, and
//!   motif-coefficient calibration against it.
//! * [`inflection`]: degree-density peak detection and the grammar-inflection
//!   analysis built on part-of-speech tags and Form-Of merges.
//! * [`tables`]: deterministic TSV emitters for the result tables.

pub mod degree;
pub mod inflection;
pub mod ingest;
pub mod graph;
pub mod motifs;
pub mod rewire;
pub mod tables;
pub mod tail;
pub mod ubcm;

pub use graph::{build_graph, ComponentReport, Graph, NodeId};

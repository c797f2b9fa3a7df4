//! Clustering-based time aggregation for LP-relaxed capacity expansion
//! models of sector-coupled energy systems.
//!
//! The pipeline: an [`instance::Instance`] describes an energy system over a
//! full horizon; [`features`] turns its fluctuating timeseries into per-day
//! clustering elements; [`cluster`] partitions the days; [`select`] picks
//! representative days with weights and stitches an aggregated instance;
//! [`cep`] builds the capacity-expansion LP; [`solve`] solves it; and
//! [`bench`] compares aggregated investment decisions against the
//! full-horizon optimum.
//!
//! With the default `parallel` feature, pairwise distance matrices, k-means
//! assignment and benchmark rows run on rayon. Disabling the feature gives a
//! fully sequential build with identical results.

pub mod bench;
pub mod cep;
pub mod cluster;
pub mod features;
pub mod instance;
pub(crate) mod par;
pub mod select;
pub mod solve;

//! Sampling laboratory for Boltzmann-distributed bipartite planar maps with
//! heavy-tailed face degrees.
//!
//! The pipeline: calibrate a critical weight sequence ([`weights`]), sample
//! labeled mobiles as two-type Galton-Watson trees with discrete-bridge labels
//! ([`mobile`], [`bridge`]), convert them to rooted pointed maps and back
//! ([`bdg`]), measure graph observables ([`pmap`]), and simulate the continuum
//! reference objects: spectrally positive stable paths and the distance
//! process built from Brownian bridges over their jumps ([`stable`]).

pub mod bdg;
pub mod bridge;
pub mod io;
pub mod kemperman;
pub mod mobile;
pub mod pmap;
pub mod registry;
pub mod rmq;
pub mod rng;
pub mod stable;
pub mod stats;
pub mod weights;

pub use rng::{stream_rng, SampleId};

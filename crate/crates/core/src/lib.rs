//! Exact intersection theory on rational surfaces with cyclic quotient
//! singularities, and the K-stability invariants built on it.
//!
//! Models are assembled from recipes ([`builder`]), decomposed along rays
//! `-K - tE` ([`zariski`]) and evaluated into `delta` lower bounds
//! ([`kstab`]). [`catalog`] holds the named surfaces and the classification
//! table; [`cli`] is the command-line front end.

pub mod builder;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod kstab;
pub mod lattice;
pub mod rational;
pub mod zariski;

pub use builder::{apply_recipe, PointSpec, QuotientSingularity, RecipeFile, RecipeStep};
pub use catalog::{build_config, build_config_named, Config, ConfigName};
pub use error::{Error, Result};
pub use kstab::{
    delta_lower_bound, s_invariant, s_w, DeltaReport, FlagPointSpec, LocalMultiplicity, Verdict,
};
pub use lattice::{ClassVector, Curve, IntersectionForm, SurfaceModel};
pub use rational::Rational;
pub use zariski::{
    volume_function, zariski_decompose, zariski_path, PiecewiseQuadratic, ZariskiPath,
};

//! Sofic approximations of locally compact groups by partial actions.
//!
//! A local `G`-space is a measure space with a partially defined right action
//! that is locally a free action. This crate builds such spaces, checks their
//! axioms, and measures how much of a space looks like a window `U ⊂ G`.
//!
//! Everything is generic over the scalar through [`Scalar`]; the aliases
//! below fix `f64` (and `f32` with an `F32` suffix).

pub mod config;
pub mod constructions;
pub mod error;
pub mod experiments;
pub mod group;
pub mod linalg;
pub mod rng;
pub mod scalar;
pub mod space;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type GroupModel = group::GroupModel<f64>;
pub type GroupElement = group::GroupElement<f64>;
pub type SpacePoint = space::SpacePoint<f64>;
pub type WindowSet = space::WindowSet<f64>;
pub type SoficWindow = space::SoficWindow<f64>;
pub type CosetSpace = constructions::CosetSpace<f64>;
pub type OpenSubsetSpace = constructions::OpenSubsetSpace<f64>;
pub type BranchedCover = constructions::BranchedCover<f64>;
pub type InducedSpace = constructions::InducedSpace<f64>;
pub type DiscreteLocalSpace = constructions::DiscreteLocalSpace<f64>;
pub type DynSpace = std::sync::Arc<dyn space::LocalSpace<f64>>;

pub type GroupModelF32 = group::GroupModel<f32>;
pub type GroupElementF32 = group::GroupElement<f32>;
pub type SpacePointF32 = space::SpacePoint<f32>;
pub type WindowSetF32 = space::WindowSet<f32>;
pub type SoficWindowF32 = space::SoficWindow<f32>;
pub type CosetSpaceF32 = constructions::CosetSpace<f32>;
pub type OpenSubsetSpaceF32 = constructions::OpenSubsetSpace<f32>;
pub type DynSpaceF32 = std::sync::Arc<dyn space::LocalSpace<f32>>;

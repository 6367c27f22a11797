//! Lattice energies of the hexagonal lattice A₂ and of its periodic
//! perturbations, together with the numerical checks behind its local
//! optimality among perturbed configurations.

pub mod design;
pub mod energy;
pub mod error;
pub mod lattice;
pub mod minimality;
pub mod perturbation;
pub mod quad;
pub mod special;
pub mod sum;
pub mod vec2;

pub use error::{Error, Result};
pub use lattice::{LatticeIndex, PlaneLattice, TorusIndex, R_STAR};
pub use perturbation::PeriodicPerturbation;
pub use vec2::{Sym2, Vec2};

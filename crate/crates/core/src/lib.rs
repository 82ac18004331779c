//! Coherent states on von Neumann lattices.
//!
//! Numerical tools for the completeness of lattice subsystems of coherent
//! states: lattice arithmetic, Weierstrass σ/ζ and the periodic density ρ,
//! Jacobi theta constants, the Bargmann–Fock correspondence, displacement
//! operators and the Gram/integral diagnostics built on top of them.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the `*64` aliases
//! below name the double-precision instantiations used by the CLI.

pub mod analysis;
pub mod elliptic;
pub mod error;
pub mod fock;
pub mod group;
pub mod lattice;
pub mod scalar;
pub mod theta;

pub use error::{Error, Result};
pub use lattice::{Lattice, LatticeIndex, LatticeWindow};
pub use num_complex::Complex;
pub use scalar::{HermitianEigen, Real};

pub type Complex64 = Complex<f64>;
pub type Lattice64 = Lattice<f64>;
pub type ThetaPoint64 = theta::ThetaPoint<f64>;
pub type SigmaProduct64 = elliptic::SigmaProduct<f64>;
pub type SigmaTilde64 = elliptic::SigmaTilde<f64>;
pub type PeriodicDensity64 = elliptic::PeriodicDensity<f64>;
pub type FockVector64 = fock::FockVector<f64>;
pub type BargmannFunction64 = fock::BargmannFunction<f64>;
pub type QuadratureGrid64 = fock::QuadratureGrid<f64>;
pub type DisplacementMatrix64 = group::DisplacementMatrix<f64>;
pub type GroupElement64 = group::GroupElement<f64>;
pub type GramMatrix64 = analysis::GramMatrix<f64>;
pub type DependenceFunction64 = analysis::DependenceFunction<f64>;
pub type DualSystem64 = analysis::DualSystem<f64>;
pub type IntegralTrace64 = analysis::IntegralTrace<f64>;

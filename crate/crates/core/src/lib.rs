//! Supersymmetric biorthogonal systems for second-order operators of the form
//! `(z d/dz + ν)² + V_±(z)` with `V_± = −U² ± z U'`, built exactly over the
//! rationals or in multi-precision floating point.
//!
//! * [`series`]: truncated Laurent series, Euler derivative, constant-term pairing.
//! * [`builder`]: dual polynomials, inhomogeneities, eigenfunctions, oracles.
//! * [`verify`]: biorthonormality, completeness, residual checks.
//! * [`examples`]: Morse, singular and Bessel models with closed forms.
//! * [`partition`]: partition function of the spectrum `(n+ν)²`.

pub mod builder;
pub mod coefficient;
pub mod error;
pub mod examples;
pub mod par;
pub mod partition;
pub mod series;
pub mod verify;

pub use builder::{
    build_dual_polynomials, build_eigenfunction, build_inhomogeneity, build_system,
    build_system_with, determinant_oracles, hamiltonian_apply, psi_from_duals_triangular,
    BiorthogonalSystem, DualPolynomial, Eigenfunction, Inhomogeneity, Level, OracleInput,
    SectorPair, Superpotential,
};
pub use coefficient::{Coefficient, Ring};
pub use error::{Error, Result};
pub use par::Execution;
pub use series::{LaurentSeries, SectorSign};

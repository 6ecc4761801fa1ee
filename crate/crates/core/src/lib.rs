//! Equilibrium statistical model of economic systems.
//!
//! Economic individuals occupy wealth levels described by a density of
//! states `g(eps)`. An open system in contact with a reservoir at reciprocal
//! temperature `beta = 1/T` and reciprocal potential `alpha = 1/mu` has grand
//! partition function `ln Z = ∫ g(eps) exp(-alpha - beta eps) d eps`, from
//! which wealth, population and economic pressure follow.
//!
//! Modules:
//! - [`dos`]: densities of states and [`EnsembleParams`].
//! - [`ensemble`]: `ln Z`, `U`, `N`, `p`, temperature sweeps.
//! - [`microstate`]: exact enumeration of occupation vectors for small level systems.
//! - [`equilibria`]: two-system equilibrium, flow and invasion predicates.
//! - [`variational`]: maximum-pressure profiles, Euler–Lagrange and stationarity checks.

pub mod dos;
pub mod ensemble;
pub mod equilibria;
pub mod error;
pub mod microstate;
pub mod numdiff;
pub mod quadrature;
pub mod scaled;
pub mod variational;

pub use dos::{DensityOfStates, DosIssue, DosKind, EnsembleParams, ValidationReport, VolumeCoupling};
pub use ensemble::{Observables, SweepRow, SweepTable};
pub use error::{Error, Result};
pub use microstate::{CountingMode, Level, LevelSystem, OccupationVector};
pub use variational::{MaxPressureDos, VolumeProfile};

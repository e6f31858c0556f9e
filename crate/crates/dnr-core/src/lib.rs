//! Core library for distribution network reconfiguration (DNR) studies.
//!
//! The pipeline implemented here takes an electrical distribution network,
//! decomposes it into the biconnected components that actually admit a
//! switching choice, formulates loss-minimal reconfiguration of each
//! component as a higher-order unconstrained binary optimisation (HUBO),
//! maps the HUBO onto a Pauli-Z cost Hamiltonian, counts the logical
//! resources of one cost-plus-mixer optimisation layer, and translates
//! those counts into fault-tolerant physical-qubit and runtime estimates.
//!
//! Modules, in pipeline order:
//!
//! - [`network`]: graph model of the grid, file formats, the built-in
//!   33-bus benchmark case.
//! - [`reduce`]: pendant-tree collapse, biconnected decomposition,
//!   topological-minor reduction with chain bookkeeping, cycle sets.
//! - [`hubo`]: sparse multilinear polynomial algebra over binary
//!   variables and the three penalty-constructor primitives.
//! - [`formulate`]: the reconfiguration HUBO itself — variables,
//!   constraint families, the ohmic loss objective, assembly and decoding.
//! - [`ising`]: binary-to-spin transform, Pauli term aggregation and
//!   logical resource counting.
//! - [`qre`]: parametric surface-code resource estimation per hardware
//!   profile.
//! - [`oracle`]: classical ground truth — exhaustive enumeration of
//!   radial configurations, exact losses, exhaustive HUBO minimisation.

pub mod formulate;
pub mod hubo;
pub mod ising;
pub mod network;
pub mod oracle;
pub mod qre;
pub mod reduce;

pub use formulate::{AssembledHubo, Configuration, VariableRegistry, Weights};
pub use hubo::{BinaryPolynomial, VarId, VarPool};
pub use network::Network;
pub use reduce::{CycleStrategy, ReducedComponent};

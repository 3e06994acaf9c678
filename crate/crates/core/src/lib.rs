//! Exact computation of Kazhdan-Lusztig cells of finite Coxeter groups for
//! unequal parameter weight functions, together with the rational geometry
//! of the parameter space (positive parts of a lattice, hyperplane
//! arrangements and their facets) and semi-continuity checkers that compare
//! cell partitions across facets.
//!
//! All arithmetic is exact: integers, integer Laurent polynomials over
//! lexicographically ordered exponent groups `Z^r`, and rational linear
//! feasibility with integer certificates. No floating point anywhere.
//!
//! ```
//! use klcells::{coxeter, hecke, weight::WeightFunction};
//!
//! let w = coxeter::builtin("I2(4)", 100)?;
//! // Left cells in the regime 0 < phi(s) < phi(t): six of them.
//! let weight = WeightFunction::rank_one(vec![1, 2]);
//! let cells = hecke::cells_for_weight(&w, &weight, hecke::Side::L)?;
//! assert_eq!(cells.cells.len(), 6);
//! # Ok::<(), klcells::Error>(())
//! ```

pub mod arrangement;
pub mod hecke;
pub mod coxeter;
pub mod error;
pub mod dihedral;
pub mod feas;
pub mod io;
pub mod lattice;
pub mod semicontinuity;
pub mod linalg;
pub mod weight;

pub use error::{Error, Result};

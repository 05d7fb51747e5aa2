//! Minimization over Ameso(C) pairs on the integer lattice.
//!
//! A pair `(D, f)` is Ameso(C) when `D` is closed under floor and ceiling
//! midpoints and, for all `x, y` in `D`,
//! `f(x) + f(y) + C >= f(ceil((x+y)/2)) + f(floor((x+y)/2))`.
//! For such pairs a bidirectional sweep that stops once the objective has
//! risen `C` above the incumbent finds a global minimum, usually without
//! visiting the whole domain.
//!
//! - [`lattice`]: points, intervals, boxes, explicit sets and midpoints.
//! - [`oracle`]: exhaustive checks: Ameso sets, minimal `C`, brute-force minima.
//! - [`solver1d`]: the instrumented one-dimensional sweep.
//! - [`arp`]: the recursive procedure for product boxes.
//! - [`models`]: built-in objectives and the shipping knapsack.
//! - [`format`]: domain literals and table/instance files.

pub mod arp;
pub mod error;
pub mod format;
pub mod lattice;
pub mod models;
pub mod objective;
pub mod oracle;
pub mod solver1d;

pub use arp::{solve_arp, ArpConfig, ArpReport};
pub use error::{Error, Result};
pub use lattice::{BoxDomain, Domain, ExplicitSet, IntPoint, IntervalDomain};
pub use models::{KnapsackInstance, TabulatedObjective};
pub use objective::Objective;
pub use oracle::{minimal_c, AmesoCertificate};
pub use solver1d::{solve_1d, Solve1DConfig, SolveReport};

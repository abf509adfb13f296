//! Complete nondominated-set enumeration for multi-objective integer
//! programs (MOIPs): minimize `k` integer-coefficient linear objectives over
//! the integer points of a bounded polyhedron and return every nondominated
//! objective vector.
//!
//! Two enumeration strategies are provided:
//!
//! * [`engine::solve_basic`] — a recursive scheme that sweeps an upper bound
//!   on each trailing objective downward, solving one lexicographic IP per
//!   step at the innermost level.
//! * [`engine::solve_improved`] — the same recursion, plus a cache of every
//!   solved subproblem. Before solving, the engine looks for a previously
//!   solved relaxation of the subproblem at hand; a relaxation that was
//!   infeasible, or whose answer already satisfies the tighter bounds,
//!   settles the subproblem without any IP work.
//!
//! Both return the same nondominated set; the improved variant typically
//! needs far fewer IP solves, which [`engine::SolveStats`] makes auditable.
//!
//! # Modules
//!
//! * [`model`] — problems, objective vectors, dominance, nondominated sets.
//! * [`ipsolver`] — single-objective backends: exhaustive enumeration and
//!   branch-and-bound over an exact rational LP relaxation.
//! * [`lexsolver`] — the lexicographic solver the recursion counts as one IP.
//! * [`engine`] — the two enumeration algorithms, the subproblem cache, and
//!   solve statistics.
//! * [`instances`] — instance file I/O, random instance generation, point-set
//!   instances with a prescribed objective image, and a brute-force oracle.
//! * [`cli`] — the `moipnd` command-line front end.
//!
//! # Example
//!
//! ```
//! use moipnd::engine::{solve_basic, solve_improved};
//! use moipnd::instances::build_point_instance;
//! use moipnd::ipsolver::Backend;
//! use moipnd::model::ObjectiveVector;
//!
//! // Three feasible objective vectors, one of which is dominated.
//! let image = vec![
//!     ObjectiveVector::new(vec![0, 1]),
//!     ObjectiveVector::new(vec![1, 0]),
//!     ObjectiveVector::new(vec![1, 1]),
//! ];
//! let problem = build_point_instance(&image).unwrap();
//! let (nd, stats) = solve_basic(&problem, Backend::Enum).unwrap();
//! assert_eq!(nd.len(), 2);
//! let (nd2, stats2) = solve_improved(&problem, Backend::Enum).unwrap();
//! assert_eq!(nd, nd2);
//! assert!(stats2.ip_count <= stats.ip_count);
//! ```

#![warn(missing_docs)]
#![warn(missing_debug_implementations)]

pub mod cli;
pub mod engine;
pub mod instances;
pub mod ipsolver;
pub mod lexsolver;
pub mod model;

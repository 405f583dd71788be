//! Exact word metrics and horofunction boundaries for nilpotent groups.
//!
//! The crate covers the discrete Heisenberg group (closed-form word length,
//! Busemann points and the action on them), `Z^d`, and a class-3 example
//! group, together with a BFS oracle that serves as ground truth for all of
//! them.
//!
//! ```
//! use nilhoro::{h3_norm, H3Element};
//!
//! assert_eq!(h3_norm(&H3Element::c()), 4.into());
//! ```

pub mod bigint_serde;
pub mod boundary;
pub mod error;
pub mod example1;
pub mod facet;
pub mod group;
pub mod metric;
pub mod oracle;
pub mod verify;

pub use boundary::{act, eval_point, limit_of_standard_path, BusemannPoint, Sign, StandardPath};
pub use error::{Error, Result};
pub use example1::{Ex1Element, Example1};
pub use facet::{convex_hull, group_polytope, Abelianized, Facet, LatticePolytope};
pub use group::{evaluate_word, Group, H3Element, Heisenberg, Letter, Word, ZdElement, ZdGroup};
pub use metric::{h3_dist, h3_norm, CaseTag};
pub use oracle::{bfs_ball, Budget, CayleyOracle, DistanceBall, H3FormulaMetric, WordMetric};
pub use verify::{run_suite, Suite, SuiteConfig, SuiteReport};

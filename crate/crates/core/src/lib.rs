//! School choice matching with priorities that need not be total orders.
//!
//! Priorities are asymmetric relations over students. The crate classifies
//! them (acyclic, partial, weak, total), builds their total-order extensions
//! with the sequential maximal ordering family, runs deferred acceptance and
//! EADAM, and checks structural claims about stable and student-optimal
//! matchings against brute-force oracles on small instances.

pub mod error;
pub mod fixtures;
pub mod io;
pub mod mechanisms;
pub mod model;
pub mod random;
pub mod relations;
pub mod theory;
pub mod violations;

pub use error::{Error, Result};
pub use model::{Assignment, Matching, PreferenceOrder, Problem, SchoolId};
pub use relations::{PriorityRelation, StudentId, TotalOrder};

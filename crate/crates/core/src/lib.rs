//! Three-qubit amplitude damping, filter-based recovery circuits and genuine
//! multipartite negativity computed with an in-crate semidefinite solver.

pub mod channels;
pub mod matcore;
pub mod qstate;
pub mod recovery;
pub mod tolerance;
pub mod sdpcore;
pub mod gmn;
pub mod experiment;

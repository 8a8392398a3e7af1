//! Exact invariants of space curve branches, their generic plane
//! projections, and matrix factorizations of the projected plane curves.

pub mod branch;
pub mod cone5;
pub mod exactalg;
pub mod matfact;
pub mod par;
pub mod projection;
pub mod sweep;

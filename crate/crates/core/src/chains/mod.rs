//! Real polyhedral chains and the current representations built from them.

mod chain;
mod current;
mod simplex;

pub use chain::{random_chain, PolyChain, Pushforward, SupportSet, CANCEL_REL_TOL};
pub use current::{pair_with_cycle, CurrentRep, TestForm, WedgeFactor, TRIG_EXPANSION_REL_TOL};
pub use simplex::{Simplex, DEGENERACY_TOL};

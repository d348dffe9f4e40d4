//! Exact synthesis and classification of generalized Mermin non-locality
//! scenarios over finite abelian groups.
//!
//! The pipeline: an integer-coefficient equation valued in a finite abelian
//! group `K` that is consistent yet unsolvable in `K` is solved exactly in the
//! phase torus instead ([`zsolve`]), turned into a measurement scenario of one
//! control and `N` cyclic variations ([`mermin`]), and its empirical model is
//! classified in the contextuality hierarchy ([`sheaf`]) including
//! All-vs-Nothing checks ([`avn`]). Every abstract prediction can be
//! cross-validated against a dense complex-vector simulation of GHZ states
//! with torus phase gates ([`qrealize`]).
//!
//! All combinatorial data is exact: group residues, rational turns, and
//! rational probabilities. Floating point appears only in the quantum
//! simulation layer, which checks against the exact models at a fixed
//! tolerance.

pub mod abgroup;
pub mod avn;
pub mod cli;
pub mod mermin;
pub mod qrealize;
pub mod sheaf;
pub mod zsolve;

pub use abgroup::{FiniteAbelianGroup, GroupElement, RationalTurn, TorusPoint};
// re-exports filled in as modules land
// pub use mermin::MerminScenario;

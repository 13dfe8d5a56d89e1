//! Desk-scale numerics for hyperbolic surfaces with ideal boundary.
//!
//! The crate covers Hill potentials and their transformation under circle
//! diffeomorphisms, Drinfeld–Sokolov normal forms of boundary connections,
//! Cartan coframes of hyperbolic 0-metrics on `(x, y)` grids, the trumpet
//! symplectic form with its moment maps and Darboux coordinates, the
//! Fenchel–Nielsen form, and the groupoid 2-form in both trivializations.

pub mod cli;
pub mod coframe;
pub mod diffeo;
pub mod error;
pub mod groupoid;
pub mod hill;
pub mod random;
pub mod spectral;
pub mod teich;
pub mod trumpet;
pub mod verify;

pub use error::{Error, Result};

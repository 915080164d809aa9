//! Exact tools for the maximum p-biased measure of t-intersecting families,
//! their shifting and surgery moves, and the circular Hamming analogue.

pub mod circle;
pub mod closed_form;
pub mod error;
pub mod family;
pub mod generating;
pub mod hamming;
pub mod io;
pub mod lifting;
pub mod oracle;
pub mod rat;
pub mod shifting;
pub mod symmetrization;
pub mod table;
pub mod verify;

pub use error::{Error, Result, Violation};
pub use family::{frankl, FranklParams, SetFamily, Subset};
pub use rat::{parse_rat, rat, Rat};

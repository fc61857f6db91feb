//! Covering theory for quivers with relations.
//!
//! Everything works over exact rationals. Infinite objects (universal covers,
//! infinite group actions) only ever appear truncated, and every check that
//! depends on a truncation reports whether its answer is complete.

pub mod covering;
pub mod error;
pub mod group_action;
pub mod homotopy;
pub mod linalg;
pub mod pi1;
pub mod quiver;
pub mod relations;
pub mod rep_type;
pub mod reps;
pub mod scalar;
pub mod strings_bands;
pub mod universal_cover;

pub use error::{Error, Result};

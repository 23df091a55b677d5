//! Exact tools for increasing events on the Boolean cube `{0,1}^n`.
//!
//! * [`cube`]: up-sets as bit-vectors, minimal elements, affecting coordinates.
//! * [`measures`]: exact rational laws, the positive lattice condition and
//!   the fixed-point law of a uniform permutation.
//! * [`monotone`]: canonical enumeration of all increasing events.
//! * [`analysis`]: independence criterion for product measures, exhaustive
//!   positive-association and three-event independence scans, and the
//!   three-event correlation expression with its grid scan.
//! * [`fui`]: realizations as increasing functions of independent Bernoullis.
//! * [`cli`]: the `posassoc` command line.

pub mod cube;
pub mod error;
pub mod measures;
pub mod monotone;
pub mod analysis;
pub mod fui;
pub mod cli;
pub mod rational;

pub use cube::{Antichain, CoordSet, Event, EventJson, IncreasingEvent, Point};
pub use error::{Error, Result};
pub use measures::{fixed_point_measure, AnyMeasure, Measure, ProductMeasure, TableMeasure};
pub use rational::Rational;

//! Ideal functions: piecewise valuations of an ideal over the spectrum.
//!
//! Products of ideals become pointwise sums, sums of ideals pointwise minima
//! and intersections pointwise maxima.

mod fractional;
mod function;
mod rule;

pub use fractional::FractionalFunction;
pub use function::{IdealFunction, Segment};
pub use rule::{Bound, Rule};

#[cfg(test)]
mod tests;

//! Domains presented by valuation data: a spectrum and generator families
//! for the finitely generated ideal functions.

mod builtin;
mod model;
mod template;

pub use builtin::{
    builtin, builtin_names, dedekind_finite, example_growing, example_r, isolated_indicators,
    ladder, rank_family,
};
pub use model::{DomainModel, GeneratorSpec, Member, ProfileClass, Violation, SCHEMA_VERSION};
pub use template::{Anchors, ChainTemplate, CutExpr, TRange, TemplateSegment, T_BIG};

#[cfg(test)]
mod tests;

//! 3-colouring of triangle-free plane graphs by reducible configurations.
//!
//! Graphs carry their embedding as a rotation system ([`planar`]). A valid
//! pair ([`validity`]) is a graph whose outer face is an induced cycle of
//! length at most 6 with a suitably coloured boundary; [`solver::extend`]
//! extends such a boundary to the whole graph by repeatedly applying the
//! reductions in [`reductions`], and [`solver::three_color`] colours
//! arbitrary triangle-free plane graphs on top of it. [`discharging`]
//! computes the charge bookkeeping behind the claim that some reduction
//! always applies, [`oracle`] is a brute-force cross-check, [`generate`]
//! builds test graphs and [`format`] reads and writes the text formats.

pub mod discharging;
pub mod format;
pub mod generate;
pub mod oracle;
pub mod planar;
pub mod reductions;
pub mod solver;
pub mod validity;

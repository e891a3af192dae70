//! Output formats and argument parsing shared by the `fracwave` binary and
//! its tests.

pub mod output;
pub mod range;

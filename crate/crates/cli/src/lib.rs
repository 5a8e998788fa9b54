//! Command-line surface of the toolkit and the JSON design-file format.

pub mod commands;
pub mod design_file;

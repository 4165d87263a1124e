//! Expression grammar, fact files, certificate records and the command line
//! front end for `selfsmall-core`.

pub mod cli;
pub mod expr;
pub mod facts;
pub mod random;
pub mod records;
pub mod render;

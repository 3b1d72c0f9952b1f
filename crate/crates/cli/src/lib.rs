//! Library side of the `chern` command: expression parsing and evaluation,
//! the check registry, and tabular output.

pub mod checks;
pub mod eval;
pub mod output;
pub mod parser;

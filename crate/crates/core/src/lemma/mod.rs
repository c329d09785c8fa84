//! The DDML side: domain model types, the parser and a source emitter.

mod lexer;
pub mod model;
mod parser;
mod source;

pub use model::*;
pub use parser::{parse, parse_file};
pub use source::render_source;

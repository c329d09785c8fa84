//! The Jolie side: API document AST, printer and subset reader.

pub mod ast;
mod render;
mod reparse;

pub use ast::*;
pub use render::{render, render_with_layout, ItemLayout, Layout};
pub use reparse::reparse_subset;

//! Translates LEMMA domain models (`.data`) into annotated Jolie API
//! documents (`.ol`) and checks the result for DDD consistency.
//!
//! ```
//! use lemma2jolie::{encoder::encode_model, jolie::render, lemma::parse};
//!
//! let (model, diags) = parse("context C { structure S<entity> { long id<identifier> } }", None);
//! assert!(diags.is_empty());
//! let outcome = encode_model(&model.unwrap()).unwrap();
//! assert!(render(&outcome.document).contains("///@identifier\n    id: long"));
//! ```

pub mod checker;
pub mod cli;
pub mod diagnostic;
pub mod encoder;
pub mod jolie;
pub mod lemma;

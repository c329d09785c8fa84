use std::fs;
use std::path::{Path, PathBuf};

use lemma2jolie::encoder::encode_model;
use lemma2jolie::jolie::render;
use lemma2jolie::lemma::parse_file;

pub const GOLDEN_NAMES: &[&str] = &[
    "full_example",
    "aggregate_part",
    "entity_identifier_field",
    "entity_identifier_function",
    "factory",
    "specification_validator",
    "value_object_context",
];

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn read_golden(name: &str, ext: &str) -> String {
    fs::read_to_string(golden_dir().join(format!("{name}.{ext}"))).unwrap()
}

pub fn encode(name: &str) -> String {
    let path = golden_dir().join(format!("{name}.data"));
    let (model, diags) = parse_file(&path);
    assert!(diags.is_empty(), "{name}: {diags:?}");
    render(&encode_model(&model.unwrap()).expect(name).document)
}

pub fn squash(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

/// True when `text` contains the pieces of `listing` between `...` in order.
pub fn matches_listing(text: &str, listing: &str) -> bool {
    let text = squash(text);
    let mut rest = text.as_str();
    for piece in squash(listing).split("...").filter(|p| !p.is_empty()) {
        match rest.find(piece) {
            Some(at) => rest = &rest[at + piece.len()..],
            None => return false,
        }
    }
    true
}

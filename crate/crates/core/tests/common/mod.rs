// Shared corpus loading for integration tests and benches.

use nleibniz_core::{json, LieTripleData, NLeibnizAlgebra};
use std::path::PathBuf;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn corpus_path(name: &str) -> PathBuf {
    corpus_dir().join(name)
}

pub fn read_corpus(name: &str) -> Vec<u8> {
    std::fs::read(corpus_path(name)).unwrap_or_else(|e| panic!("reading corpus file {name}: {e}"))
}

pub fn load_algebra(name: &str) -> NLeibnizAlgebra {
    json::parse_algebra(&read_corpus(name)).unwrap_or_else(|e| panic!("parsing {name}: {e}"))
}

pub fn load_triple(name: &str) -> LieTripleData {
    json::parse_triple(&read_corpus(name)).unwrap_or_else(|e| panic!("parsing {name}: {e}"))
}

/// Every valid algebra file in the bundled corpus.
pub const VALID_ALGEBRAS: &[&str] = &[
    "a4_euclidean.json",
    "abelian_n3_d2.json",
    "abelian_n3_d3.json",
    "abelian_n3_d4.json",
    "abelian_n4_d2.json",
    "n4_d2.json",
];

/// Every valid triple-data file in the bundled corpus.
pub const VALID_TRIPLES: &[&str] = &["a4_triple.json", "n4_d2_triple.json"];

/// Deliberately broken algebra files and the check each one targets.
pub const BROKEN_ALGEBRAS: &[(&str, &str)] = &[
    ("broken_fundamental.json", "fundamental_identity"),
    ("broken_unitarity.json", "unitarity"),
    ("broken_symmetry.json", "symmetry"),
    ("broken_nondegenerate.json", "s_nondegenerate"),
];

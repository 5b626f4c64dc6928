//! A small built-in table of braid representatives, in the same text format
//! as user catalogs.

use crate::braid::{parse_braids, BraidWord, NamedBraid};

const BUILTIN: &str = include_str!("../data/knots.braids");

pub fn entries() -> Vec<NamedBraid> {
    parse_braids(BUILTIN).expect("built-in catalog parses")
}

pub fn lookup(name: &str) -> Option<BraidWord> {
    entries().into_iter().find(|e| e.name == name).map(|e| e.word)
}

//! The bundled spreadsheet-help knowledge base and its smoke suite.

use crate::harness::{parse_smoke_suite, SmokeSuite};
use crate::kbmodel::{load_kb, KnowledgeBase};

pub const DEMO_KB_JSON: &str = include_str!("../data/demo_kb.json");
pub const DEMO_SMOKE_SUITE: &str = include_str!("../data/demo_smoke.tsv");

pub fn demo_kb() -> KnowledgeBase {
    load_kb(DEMO_KB_JSON).expect("bundled knowledge base is valid")
}

pub fn demo_suite() -> SmokeSuite {
    parse_smoke_suite(DEMO_SMOKE_SUITE, "demo").expect("bundled smoke suite parses")
}

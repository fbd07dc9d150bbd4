#![allow(dead_code)]

use goalspot_core::KnowledgeBase;

/// Two goals, two terms, ε = 0.001.
pub fn print_chart_kb() -> KnowledgeBase {
    KnowledgeBase::from_json(
        r#"{
        "meta": {"name": "print-chart", "version": "1", "language": "en"},
        "leak": 0.001,
        "scale": {"pMin": 0.002, "pMax": 0.9},
        "goals": [{"id": "g1", "title": "Printing"}, {"id": "g2", "title": "Charts"}],
        "nodes": [
            {"id": "chart", "kind": "term", "surfaces": [{"tokens": ["chart"]}]},
            {"id": "print", "kind": "term", "surfaces": [{"tokens": ["print"]}]}
        ],
        "links": [
            {"goal": "g1", "node": "print", "p": 0.3},
            {"goal": "g2", "node": "chart", "p": 0.2}
        ]
    }"#,
    )
    .unwrap()
}

/// Creation vs modification of charts, with split links.
pub fn chart_kb() -> KnowledgeBase {
    KnowledgeBase::from_json(
        r#"{
        "meta": {"name": "charts", "version": "1", "language": "en"},
        "goals": [
            {"id": "create-chart", "title": "Create a chart"},
            {"id": "modify-chart", "title": "Change a chart"}
        ],
        "nodes": [
            {"id": "chart", "kind": "term", "surfaces": [{"tokens": ["chart"]}]},
            {"id": "creat", "kind": "term", "surfaces": [{"tokens": ["creat"]}]},
            {"id": "chang", "kind": "term", "surfaces": [{"tokens": ["chang"]}]}
        ],
        "links": [
            {"goal": "create-chart", "node": "chart", "pIndef": 0.4, "pDef": 0.05},
            {"goal": "modify-chart", "node": "chart", "pIndef": 0.05, "pDef": 0.4},
            {"goal": "create-chart", "node": "creat", "p": 0.3},
            {"goal": "modify-chart", "node": "chang", "p": 0.3}
        ]
    }"#,
    )
    .unwrap()
}

/// Small lexicon exercising metonyms, phrases, capitalization and zero
/// derivation.
pub fn lexicon_kb() -> KnowledgeBase {
    KnowledgeBase::from_json(
        r#"{
        "meta": {"name": "lexicon", "version": "1", "language": "en"},
        "goals": [
            {"id": "delete-text", "title": "Delete text"},
            {"id": "print-doc", "title": "Print a document"},
            {"id": "page-breaks", "title": "Insert a page break"},
            {"id": "word-app", "title": "Work with Word files"}
        ],
        "nodes": [
            {"id": "deletion", "kind": "metonym", "surfaces": [
                {"tokens": ["delet"]}, {"tokens": ["era"]}, {"tokens": ["remov"]}, {"tokens": ["get", "rid", "of"]}
            ]},
            {"id": "page-break", "kind": "phrase", "surfaces": [{"tokens": ["page", "break"]}]},
            {"id": "page", "kind": "term", "surfaces": [{"tokens": ["page"]}]},
            {"id": "insert", "kind": "term", "surfaces": [{"tokens": ["insert"]}]},
            {"id": "print", "kind": "term", "zeroDerivation": true, "surfaces": [{"tokens": ["print"]}]},
            {"id": "Word", "kind": "term", "caseSensitive": true, "surfaces": [{"tokens": ["Word"], "exactCase": true}]},
            {"id": "word", "kind": "term", "surfaces": [{"tokens": ["word"]}]},
            {"id": "dark", "kind": "term", "surfaces": [{"tokens": ["darker"]}]},
            {"id": "file", "kind": "term", "surfaces": [{"tokens": ["file"]}]}
        ],
        "links": [
            {"goal": "delete-text", "node": "deletion", "p": 0.6},
            {"goal": "delete-text", "node": "word", "p": 0.2},
            {"goal": "print-doc", "node": "print", "pNounIndef": 0.3, "pNounDef": 0.5, "pVerb": 0.7},
            {"goal": "print-doc", "node": "dark", "p": 0.1},
            {"goal": "page-breaks", "node": "page-break", "pIndef": 0.6, "pDef": 0.2},
            {"goal": "page-breaks", "node": "insert", "p": 0.4},
            {"goal": "page-breaks", "node": "page", "p": 0.2},
            {"goal": "word-app", "node": "Word", "p": 0.7},
            {"goal": "word-app", "node": "file", "p": 0.3}
        ]
    }"#,
    )
    .unwrap()
}

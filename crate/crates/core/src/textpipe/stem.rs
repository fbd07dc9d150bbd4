//! Suffix-stripping stemmer.
//!
//! Backed by the Snowball English (Porter2) algorithm. A single Porter2 pass
//! is not idempotent on every input (`agreed -> agre -> agr`), so `stem`
//! re-applies the pass until the word stops changing. Lexicon lemmas are
//! stored already stemmed, which keeps the algorithm swappable.

use std::sync::LazyLock;

use rust_stemmers::{Algorithm, Stemmer};

static ENGLISH: LazyLock<Stemmer> = LazyLock::new(|| Stemmer::create(Algorithm::English));

// Every observed chain settles within two passes; the bound only guards
// against a hypothetical cycle.
const MAX_PASSES: usize = 8;

/// Reduces a lower-cased word to its lemma.
///
/// The result is a fixed point: `stem(&stem(w)) == stem(w)`.
pub fn stem(word: &str) -> String {
    let mut current = word.to_string();
    for _ in 0..MAX_PASSES {
        let next = ENGLISH.stem(&current);
        if next == current {
            break;
        }
        current = next.into_owned();
    }
    current
}

/// True when `lemma` is already in stemmed form.
pub fn is_lemma(lemma: &str) -> bool {
    stem(lemma) == lemma
}

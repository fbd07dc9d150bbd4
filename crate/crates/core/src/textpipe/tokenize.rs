use serde::{Deserialize, Serialize};

use super::stem::stem;

/// One word of a query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Token {
    pub raw: String,
    pub lower: String,
    pub lemma: String,
    pub index: usize,
    /// Set by spotting, against the knowledge base's function-word lexicon.
    pub is_function_word: bool,
    pub sentence_initial: bool,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '\''
}

/// Splits query text into word tokens.
///
/// Anything other than letters, digits and inner apostrophes is a boundary.
/// The first token, and every token following a `.`, `?` or `!`, is marked
/// sentence-initial.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut at_sentence_start = true;
    let mut word = String::new();

    let flush = |word: &mut String, at_start: &mut bool, tokens: &mut Vec<Token>| {
        let trimmed = word.trim_matches('\'');
        if !trimmed.is_empty() {
            let lower = trimmed.to_lowercase();
            tokens.push(Token {
                raw: trimmed.to_string(),
                lemma: stem(&lower),
                lower,
                index: tokens.len(),
                is_function_word: false,
                sentence_initial: *at_start,
            });
            *at_start = false;
        }
        word.clear();
    };

    for c in text.chars() {
        if is_word_char(c) {
            word.push(c);
        } else {
            flush(&mut word, &mut at_sentence_start, &mut tokens);
            if matches!(c, '.' | '?' | '!') {
                at_sentence_start = true;
            }
        }
    }
    flush(&mut word, &mut at_sentence_start, &mut tokens);
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raws(text: &str) -> Vec<String> {
        tokenize(text).into_iter().map(|t| t.raw).collect()
    }

    #[test]
    fn splits_on_whitespace_and_punctuation() {
        assert_eq!(
            raws("How do I print this?"),
            ["How", "do", "I", "print", "this"]
        );
    }

    #[test]
    fn empty_input() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("  ?! ,").is_empty());
    }

    #[test]
    fn period_starts_new_sentence() {
        let toks = tokenize("chart.Chart");
        assert_eq!(toks.len(), 2);
        assert_eq!(toks[0].raw, "chart");
        assert!(toks[0].sentence_initial);
        assert_eq!(toks[1].raw, "Chart");
        assert!(toks[1].sentence_initial);
    }

    #[test]
    fn fills_lower_lemma_and_dense_indices() {
        let toks = tokenize("Printing my Charts, please");
        assert_eq!(toks[0].lower, "printing");
        assert_eq!(toks[0].lemma, "print");
        assert_eq!(toks[2].lemma, "chart");
        assert!(!toks[2].sentence_initial);
        for (i, t) in toks.iter().enumerate() {
            assert_eq!(t.index, i);
        }
    }

    #[test]
    fn keeps_inner_apostrophes() {
        assert_eq!(
            raws("I'd like 'quoted' words"),
            ["I'd", "like", "quoted", "words"]
        );
    }
}

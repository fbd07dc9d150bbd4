use thiserror::Error;

use crate::kbmodel::IndefinitenessModel;

use super::ClauseContext;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TextError {
    #[error("'{0}' is not in the function-word lexicon")]
    UnknownFunctionWord(String),
}

// Keeps long runs of one-sided function words strictly inside (0, 1).
const EDGE: f64 = f64::EPSILON;

/// Probability that the noun after `context` is used in the indefinite sense.
///
/// Function words are treated as independent given definiteness, so this is
/// naive Bayes over the run; an empty run yields the prior.
pub fn indefiniteness(
    context: &ClauseContext,
    model: &IndefinitenessModel,
) -> Result<f64, TextError> {
    indefiniteness_of(context.function_words.iter().map(String::as_str), model)
}

pub(crate) fn indefiniteness_of<'a>(
    words: impl IntoIterator<Item = &'a str>,
    model: &IndefinitenessModel,
) -> Result<f64, TextError> {
    let mut log_indef = model.prior_indef.ln();
    let mut log_def = (1.0 - model.prior_indef).ln();
    for w in words {
        let fw = model
            .get(w)
            .ok_or_else(|| TextError::UnknownFunctionWord(w.to_string()))?;
        log_indef += fw.p_given_indef.ln();
        log_def += fw.p_given_def.ln();
    }
    let p = 1.0 / (1.0 + (log_def - log_indef).exp());
    Ok(p.clamp(EDGE, 1.0 - EDGE))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn ctx(words: &[&str]) -> ClauseContext {
        ClauseContext {
            function_words: words.iter().map(|w| w.to_string()).collect(),
            window_start: 0,
            window_end: words.len(),
        }
    }

    fn model() -> IndefinitenessModel {
        IndefinitenessModel::default()
    }

    #[test]
    fn empty_context_returns_prior() {
        assert_eq!(indefiniteness(&ctx(&[]), &model()).unwrap(), 0.5);
        let mut m = model();
        m.prior_indef = 0.3;
        assert_relative_eq!(
            indefiniteness(&ctx(&[]), &m).unwrap(),
            0.3,
            max_relative = 1e-15
        );
    }

    #[test]
    fn indefinite_article() {
        // 0.5*0.9 / (0.5*0.9 + 0.5*0.05)
        let p = indefiniteness(&ctx(&["a"]), &model()).unwrap();
        assert_relative_eq!(p, 0.9 / 0.95, max_relative = 1e-12);
        assert_relative_eq!(p, 0.9474, max_relative = 1e-4);
    }

    #[test]
    fn possessive_points_to_existing_object() {
        let p = indefiniteness(&ctx(&["my"]), &model()).unwrap();
        assert_relative_eq!(p, 0.02 / 0.72, max_relative = 1e-12);
        assert_relative_eq!(p, 0.0278, max_relative = 1e-3);
    }

    #[test]
    fn preposition_and_possessive_combine() {
        // "under my chart": 0.5*0.1*0.02 vs 0.5*0.6*0.7
        let p = indefiniteness(&ctx(&["under", "my"]), &model()).unwrap();
        assert_relative_eq!(p, 0.002 / (0.002 + 0.42), max_relative = 1e-12);
    }

    #[test]
    fn unknown_word_is_an_error() {
        assert_eq!(
            indefiniteness(&ctx(&["qwerty"]), &model()),
            Err(TextError::UnknownFunctionWord("qwerty".into()))
        );
    }

    #[test]
    fn saturated_runs_stay_inside_unit_interval() {
        let many = vec!["a"; 60];
        let p = indefiniteness(&ctx(&many), &model()).unwrap();
        assert!(p < 1.0 && p > 0.0);
        let many = vec!["my"; 60];
        let p = indefiniteness(&ctx(&many), &model()).unwrap();
        assert!(p < 1.0 && p > 0.0);
    }

    fn words() -> impl Strategy<Value = Vec<&'static str>> {
        let all: Vec<&'static str> = vec![
            "a", "an", "the", "this", "that", "my", "your", "our", "its", "under", "on", "in",
        ];
        prop::collection::vec(prop::sample::select(all), 0..6)
    }

    proptest! {
        #[test]
        fn result_strictly_inside_unit_interval(ws in words()) {
            let p = indefiniteness(&ctx(&ws), &model()).unwrap();
            prop_assert!(p > 0.0 && p < 1.0);
        }

        #[test]
        fn indefinite_leaning_word_raises_probability(ws in words(), extra in prop::sample::select(vec!["a", "an"]), at in 0usize..6) {
            let m = model();
            let before = indefiniteness(&ctx(&ws), &m).unwrap();
            let mut longer = ws.clone();
            longer.insert(at.min(ws.len()), extra);
            let after = indefiniteness(&ctx(&longer), &m).unwrap();
            prop_assert!(after > before, "{before} -> {after}");
        }

        #[test]
        fn definite_leaning_word_lowers_probability(ws in words(), extra in prop::sample::select(vec!["the", "my", "under"])) {
            let m = model();
            let before = indefiniteness(&ctx(&ws), &m).unwrap();
            let mut longer = ws.clone();
            longer.push(extra);
            prop_assert!(indefiniteness(&ctx(&longer), &m).unwrap() < before);
        }
    }
}

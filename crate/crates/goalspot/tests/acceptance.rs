//! Acceptance criteria 1 to 8. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::collections::HashMap;
use std::process::Command;
use std::time::{Duration, Instant};

use goalspot_core::engine::effective_term_prob;
use goalspot_core::harness::random::{
    random_queries, random_query, random_small_kb, UNKNOWN_WORDS,
};
use goalspot_core::harness::{
    generative_recovery, oracle_posterior, sample_query, synth_kb, SynthParams,
};
use goalspot_core::kbmodel::{bucket_to_probability, BucketScale, Goal, Link, LinkProbs};
use goalspot_core::textpipe::UsageResolution;
use goalspot_core::{analyze, rank, score_goals, AnalysisOptions, KnowledgeBase, RankOptions};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

fn posteriors(kb: &KnowledgeBase, q: &str, options: RankOptions) -> HashMap<String, f64> {
    let options = RankOptions {
        top_k: kb.goals().len(),
        ..options
    };
    rank(kb, q, &options)
        .unwrap()
        .into_iter()
        .map(|p| (p.goal_id, p.posterior))
        .collect()
}

fn ranking(kb: &KnowledgeBase, q: &str, options: RankOptions) -> Vec<(String, f64)> {
    let options = RankOptions {
        top_k: kb.goals().len(),
        ..options
    };
    rank(kb, q, &options)
        .unwrap()
        .into_iter()
        .map(|p| (p.goal_id, p.posterior))
        .collect()
}

fn oracle_equivalence() -> Verdict {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    let mut cases = 0;
    for _ in 0..100 {
        let kb = random_small_kb(&mut rng, 4, 6);
        for _ in 0..20 {
            let q = random_query(&kb, &mut rng, 8);
            let a = analyze(&q, &kb, AnalysisOptions::default());
            let engine = score_goals(&kb, &a, false).unwrap();
            let oracle: HashMap<String, f64> = oracle_posterior(&kb, &a.activations)
                .unwrap()
                .into_iter()
                .collect();
            for p in &engine {
                worst = worst.max((p.posterior - oracle[&p.goal_id]).abs());
            }
            cases += 1;
        }
    }
    let elapsed = started.elapsed();
    verdict(
        worst <= 1e-9 && elapsed < Duration::from_secs(10),
        format!(
            "{cases} cases, max |engine - oracle| = {worst:.2e} (limit 1e-9), {:.2}s (limit 10s)",
            elapsed.as_secs_f64()
        ),
    )
}

fn print_chart_kb() -> KnowledgeBase {
    KnowledgeBase::from_json(
        r#"{
        "meta": {"name": "print-chart", "version": "1", "language": "en"},
        "leak": 0.001,
        "scale": {"pMin": 0.002, "pMax": 0.9},
        "goals": [{"id": "g1", "title": "Printing"}, {"id": "g2", "title": "Charts"}],
        "nodes": [
            {"id": "print", "kind": "term", "surfaces": [{"tokens": ["print"]}]},
            {"id": "chart", "kind": "term", "surfaces": [{"tokens": ["chart"]}]}
        ],
        "links": [
            {"goal": "g1", "node": "print", "p": 0.3},
            {"goal": "g2", "node": "chart", "p": 0.2}
        ]
    }"#,
    )
    .unwrap()
}

fn hand_fixture() -> Verdict {
    let kb = print_chart_kb();
    let print = posteriors(&kb, "print", RankOptions::default());
    let empty = posteriors(&kb, "", RankOptions::default());
    let got = [print["g1"], print["g2"], empty["g1"], empty["g2"]];
    let want = [0.99734, 0.00266, 0.46667, 0.53333];
    let worst = got
        .iter()
        .zip(&want)
        .map(|(g, w)| (g - w).abs())
        .fold(0.0, f64::max);
    verdict(
        worst <= 1e-5,
        format!(
            "print: {:.5}/{:.5}, empty: {:.5}/{:.5}, max deviation {worst:.1e} (limit 1e-5)",
            got[0], got[1], got[2], got[3]
        ),
    )
}

/// Single-token words of `kb` that cannot combine into a longer surface.
fn order_free_words(kb: &KnowledgeBase) -> Vec<String> {
    let in_phrases: Vec<&String> = kb
        .nodes()
        .iter()
        .flat_map(|n| &n.surfaces)
        .filter(|s| s.tokens.len() > 1)
        .flat_map(|s| &s.tokens)
        .collect();
    kb.nodes()
        .iter()
        .flat_map(|n| &n.surfaces)
        .filter(|s| s.tokens.len() == 1 && !s.exact_case && !in_phrases.contains(&&s.tokens[0]))
        .map(|s| s.tokens[0].clone())
        .chain(UNKNOWN_WORDS.iter().map(|w| w.to_string()))
        .collect()
}

fn invariants() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut failures: Vec<String> = Vec::new();
    let mut fail = |what: &str, detail: String| {
        if failures.len() < 5 {
            failures.push(format!("{what}: {detail}"));
        }
    };
    let off = RankOptions {
        enable_definiteness: false,
        enable_noun_verb: false,
        ..RankOptions::default()
    };

    for _ in 0..300 {
        let kb = random_small_kb(&mut rng, 4, 6);
        let q = random_query(&kb, &mut rng, 8);

        let sum: f64 = ranking(&kb, &q, RankOptions::default())
            .iter()
            .map(|p| p.1)
            .sum();
        if (sum - 1.0).abs() > 1e-9 {
            fail("normalization", format!("'{q}' sums to {sum}"));
        }

        let words = order_free_words(&kb);
        if let Some(w) = words.choose(&mut rng).map(String::as_str) {
            for options in [RankOptions::default(), off] {
                let n = rng.random_range(2..5);
                if ranking(&kb, w, options) != ranking(&kb, &vec![w; n].join(" "), options) {
                    fail("duplicate invariance", format!("'{w}' x{n}"));
                }
            }
        }

        let mut bag: Vec<&String> = (0..rng.random_range(0..7))
            .filter_map(|_| words.choose(&mut rng))
            .collect();
        let a = ranking(
            &kb,
            &bag.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(" "),
            off,
        );
        bag.shuffle(&mut rng);
        let b = ranking(
            &kb,
            &bag.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(" "),
            off,
        );
        let same = a.len() == b.len()
            && a.iter()
                .zip(&b)
                .all(|(x, y)| x.0 == y.0 && (x.1 - y.1).abs() <= 1e-12 * x.1.abs().max(y.1.abs()));
        if !same {
            fail("permutation invariance", format!("{bag:?}"));
        }

        let unknown = UNKNOWN_WORDS.choose(&mut rng).unwrap();
        let before = analyze(&q, &kb, AnalysisOptions::default());
        let after = analyze(&format!("{q} {unknown}"), &kb, AnalysisOptions::default());
        if before.activations != after.activations {
            fail("unknown-word append", format!("'{q}' + '{unknown}'"));
        }

        let mut m = kb.clone().into_model();
        m.goals.push(Goal {
            id: "zz-linkless".into(),
            title: "No links".into(),
            prior: 0.2,
        });
        let with_bare = KnowledgeBase::new(m).unwrap();
        let a = analyze(&q, &with_bare, AnalysisOptions::default());
        let l = a.activations.len();
        let n = with_bare.nodes().len();
        let eps = with_bare.leak();
        let prior = with_bare.goal("zz-linkless").unwrap().prior;
        let expected = prior * eps.powi(l as i32) * (1.0 - eps).powi((n - l) as i32);
        let got = score_goals(&with_bare, &a, false)
            .unwrap()
            .into_iter()
            .find(|p| p.goal_id == "zz-linkless")
            .unwrap()
            .log_score
            .exp();
        if (got - expected).abs() > 1e-12 * expected {
            fail("leak semantics", format!("{got} vs {expected}"));
        }
    }

    for i in 0..300 {
        let base = random_small_kb(&mut rng, 1, 4).into_model();
        let p = if i % 2 == 0 {
            rng.random_range(1e-6..0.95)
        } else {
            rng.random_range(1e-6..2e-4)
        };
        let extra = base.nodes[0].id.clone();
        let mut m = base.clone();
        m.goals = ["g1", "g2"]
            .iter()
            .map(|g| Goal {
                id: g.to_string(),
                title: g.to_string(),
                prior: 1.0,
            })
            .collect();
        m.links = base
            .links
            .iter()
            .filter(|l| l.node != extra)
            .flat_map(|l| {
                ["g1", "g2"].map(|g| Link {
                    goal: g.into(),
                    node: l.node.clone(),
                    probs: l.probs,
                })
            })
            .collect();
        m.links.push(Link {
            goal: "g1".into(),
            node: extra.clone(),
            probs: LinkProbs::plain(p),
        });
        let kb = KnowledgeBase::new(m).unwrap();
        let surface = kb.node(&extra).unwrap().surfaces[0].text();
        let post = posteriors(&kb, &surface, RankOptions::default());
        if (post["g1"] > post["g2"]) != (p > kb.leak()) {
            fail(
                "discrimination monotonicity",
                format!("p = {p}, eps = {}", kb.leak()),
            );
        }
    }

    for _ in 0..10_000 {
        let (pi, pd) = (rng.random_range(1e-6..0.999), rng.random_range(1e-6..0.999));
        let u = rng.random_range(0.0..=1.0);
        let link = Link {
            goal: "g".into(),
            node: "n".into(),
            probs: LinkProbs::definiteness(pi, pd),
        };
        let e = effective_term_prob(
            &link,
            &UsageResolution {
                p_indefinite: u,
                p_noun: 1.0,
            },
        );
        if e < pi.min(pd) || e > pi.max(pd) {
            fail("convexity", format!("{e} outside [{pi}, {pd}]"));
        }
    }

    if failures.is_empty() {
        verdict(
            true,
            "normalization, duplicate, permutation, unknown-word append, leak, monotonicity, convexity",
        )
    } else {
        verdict(false, failures.join("; "))
    }
}

fn chart_kb() -> KnowledgeBase {
    KnowledgeBase::from_json(
        r#"{
        "meta": {"name": "charts", "version": "1", "language": "en"},
        "goals": [{"id": "create-chart", "title": "Create a chart"}, {"id": "modify-chart", "title": "Change a chart"}],
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

fn definiteness_direction() -> Verdict {
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, kb, create, modify) in [
        ("fixture", chart_kb(), "create-chart", "modify-chart"),
        (
            "demo",
            goalspot_core::demo::demo_kb(),
            "create-chart",
            "format-chart",
        ),
    ] {
        for (indef, def) in [
            ("create a chart", "change this chart"),
            ("a chart", "this chart"),
        ] {
            let a = posteriors(&kb, indef, RankOptions::default());
            let b = posteriors(&kb, def, RankOptions::default());
            ok &= a[create] > b[create] && b[modify] > a[modify];
            lines.push(format!(
                "{name} '{indef}' vs '{def}': {create} {:.3e} > {:.3e}, {modify} {:.3e} > {:.3e}",
                a[create], b[create], b[modify], a[modify]
            ));
        }
    }
    verdict(ok, lines.join("; "))
}

fn smoke_gate() -> Verdict {
    let started = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_goalspot"))
        .args(["smoke", "--top", "5", "--min-rate", "0.99"])
        .output()
        .expect("goalspot binary runs");
    let elapsed = started.elapsed();
    let summary = String::from_utf8_lossy(&out.stdout)
        .lines()
        .next()
        .unwrap_or_default()
        .to_string();
    let code = out.status.code();
    verdict(
        code == Some(0) && elapsed < Duration::from_secs(5),
        format!(
            "exit {code:?}, {:.2}s (limit 5s): {summary}",
            elapsed.as_secs_f64()
        ),
    )
}

fn large_scale() -> Verdict {
    let kb = synth_kb(&SynthParams::word_processor_scale(7)).unwrap();
    let json = kb.to_json();
    let started = Instant::now();
    let kb = KnowledgeBase::from_json(&json).unwrap();
    let load = started.elapsed();
    let counts = (kb.goals().len(), kb.nodes().len(), kb.links().len());
    let queries = random_queries(&kb, 1000, 8, 7);
    let mut times: Vec<Duration> = queries
        .iter()
        .map(|q| {
            let t = Instant::now();
            rank(&kb, q, &RankOptions::default()).unwrap();
            t.elapsed()
        })
        .collect();
    times.sort();
    let median = times[times.len() / 2];
    verdict(
        counts == (1000, 5000, 145_000) && load < Duration::from_secs(5) && median < Duration::from_millis(50),
        format!(
            "{counts:?}, load {:.2}s (limit 5s), median rank {:.2}ms over 1000 queries (limit 50ms)",
            load.as_secs_f64(),
            median.as_secs_f64() * 1e3
        ),
    )
}

fn recovery() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut trials = 0;
    let mut agree = 0.0;
    let mut gap = 0.0f64;
    for i in 0..25 {
        let kb = random_small_kb(&mut rng, 4, 6);
        let r = generative_recovery(&kb, 20, i).unwrap();
        trials += r.trials;
        agree += r.ranking_agreement_rate * r.trials as f64;
        gap = gap.max(r.max_posterior_gap);
    }
    let agreement = agree / trials as f64;

    // Marginals of sampled presence against link probabilities.
    let mut worst_z = 0.0f64;
    let n = 2000u64;
    for _ in 0..5 {
        let kb = random_small_kb(&mut rng, 3, 6);
        let (pi, pn) = (kb.indefiniteness().prior_indef, kb.noun_verb_prior());
        for (gi, goal) in kb.goals().iter().enumerate() {
            let mut counts: HashMap<String, u64> = HashMap::new();
            for seed in 0..n {
                for id in sample_query(&kb, &goal.id, seed).unwrap().activations {
                    *counts.entry(id).or_default() += 1;
                }
            }
            for node in kb.nodes() {
                let p = kb
                    .links_of_goal(gi)
                    .iter()
                    .map(|&li| &kb.links()[li])
                    .find(|l| l.node == node.id)
                    .map_or(kb.leak(), |l| l.probs.mixed(pi, pn));
                let sd = (n as f64 * p * (1.0 - p)).sqrt().max(0.5);
                let z =
                    (counts.get(&node.id).copied().unwrap_or(0) as f64 - n as f64 * p).abs() / sd;
                worst_z = worst_z.max(z);
            }
        }
    }
    verdict(
        agreement == 1.0 && gap <= 1e-9 && worst_z <= 4.0,
        format!(
            "{trials} trials, ranking agreement {:.1}%, max posterior gap {gap:.1e}, worst marginal {worst_z:.2} sigma (limit 4)",
            agreement * 100.0
        ),
    )
}

fn bucket_scale() -> Verdict {
    let mut worst = 0.0f64;
    let mut endpoints = true;
    let scales = [
        BucketScale::default(),
        BucketScale::new(1e-4, 0.95).unwrap(),
        BucketScale::new(0.01, 0.5).unwrap(),
        BucketScale::from_max_and_ratio(0.8, 1.5),
    ];
    for scale in &scales {
        let r = scale.ratio();
        for b in 1..13 {
            let q = bucket_to_probability(b + 1, scale).unwrap()
                / bucket_to_probability(b, scale).unwrap();
            worst = worst.max(((q - r) / r).abs());
        }
        endpoints &= bucket_to_probability(1, scale).unwrap() == scale.p_min
            && bucket_to_probability(13, scale).unwrap() == scale.p_max;
    }
    verdict(
        worst <= 1e-12 && endpoints,
        format!("{} scales, max relative ratio deviation {worst:.1e} (limit 1e-12), endpoints exact: {endpoints}", scales.len()),
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("oracle equivalence", oracle_equivalence),
        ("hand-derived fixture", hand_fixture),
        ("invariant suite", invariants),
        ("definiteness direction", definiteness_direction),
        ("smoke gate", smoke_gate),
        ("large-scale performance", large_scale),
        ("generative recovery", recovery),
        ("bucket scale", bucket_scale),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        println!(
            "criterion {} {}: {} ({})",
            i + 1,
            if v.passed { "PASS" } else { "FAIL" },
            name,
            v.detail
        );
        failed += usize::from(!v.passed);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

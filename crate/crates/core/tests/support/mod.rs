//! Test-only oracles and fixtures shared by the integration suites.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use lexaug::corpus::{ParallelCorpus, TokenizedSentence};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const NULL: &str = "<null>";

// ---------------------------------------------------------------------------
// Worked examples (Maltese)

pub const MONO_EN: &str =
    "Anarchism calls for the abolition of the state , which it holds to be undesirable , unnecessary , and harmful .";
pub const MONO_MT: &str =
    "Anarchism calls għal il abolition ta’ il stat , lima hi holds għal tkun undesirable , bla bzonn , u harmful .";
pub const MONO_LEXICON: &[(&str, &str)] = &[
    ("for", "għal"),
    ("the", "il"),
    ("of", "ta’"),
    ("state", "stat"),
    ("which", "lima"),
    ("it", "hi"),
    ("to", "għal"),
    ("be", "tkun"),
    ("unnecessary", "bla bzonn"),
    ("and", "u"),
];

pub const POS_EN: &str = "I suspect the streets of Baghdad will look as if a war is looming this week .";
pub const POS_MT: &str =
    "jien iddubita il streets ta’ Bagdad xewqa hares kif jekk a gwerra is looming dan ġimgħa .";
pub const POS_TAGS: &str =
    "PRON VERB DET NOUN ADP PROPN AUX VERB SCONJ SCONJ DET NOUN AUX VERB DET NOUN PUNCT";
pub const POS_DISTILLED: &str =
    "PRON VERB DET NOUN ADP PROPN NOUN NOUN SCONJ SCONJ DET NOUN AUX VERB DET NOUN PUNCT";
pub const POS_LEXICON: &[(&str, &str)] = &[
    ("I", "jien"),
    ("suspect", "iddubita"),
    ("the", "il"),
    ("of", "ta’"),
    ("Baghdad", "Bagdad"),
    ("will", "xewqa"),
    ("look", "hares"),
    ("as", "kif"),
    ("if", "jekk"),
    ("war", "gwerra"),
    ("this", "dan"),
    ("week", "ġimgħa"),
];

pub fn lexicon_tsv(pairs: &[(&str, &str)]) -> String {
    pairs.iter().map(|(s, t)| format!("{s}\t{t}\n")).collect()
}

/// Two-column file for one sentence.
pub fn two_column(tokens: &str, tags: &str) -> String {
    let mut out: String = tokens
        .split(' ')
        .zip(tags.split(' '))
        .map(|(t, l)| format!("{t}\t{l}\n"))
        .collect();
    out.push('\n');
    out
}

// ---------------------------------------------------------------------------
// Dense IBM Model 1 reference

/// Plain dense EM straight from the update formulas. Returns `t[(e, f)]`
/// over all source types (plus NULL) and target types, and the
/// log-likelihood before each iteration.
pub fn dense_model1(
    pairs: &[(Vec<String>, Vec<String>)],
    iterations: usize,
) -> (BTreeMap<(String, String), f64>, Vec<f64>) {
    let sents: Vec<(Vec<String>, Vec<String>)> = pairs
        .iter()
        .map(|(s, t)| {
            let mut src = vec![NULL.to_string()];
            src.extend(s.iter().cloned());
            (src, t.clone())
        })
        .collect();
    let src_types: BTreeSet<String> = sents.iter().flat_map(|(s, _)| s.iter().cloned()).collect();
    let tgt_types: BTreeSet<String> = sents.iter().flat_map(|(_, t)| t.iter().cloned()).collect();
    let mut cooc: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for (s, t) in &sents {
        for e in s {
            cooc.entry(e.clone()).or_default().extend(t.iter().cloned());
        }
    }
    let mut t = BTreeMap::new();
    for e in &src_types {
        for f in &tgt_types {
            let p = if cooc[e].contains(f) {
                1.0 / cooc[e].len() as f64
            } else {
                0.0
            };
            t.insert((e.clone(), f.clone()), p);
        }
    }
    let mut lls = Vec::new();
    for _ in 0..iterations {
        let mut counts: BTreeMap<(String, String), f64> = t.keys().map(|k| (k.clone(), 0.0)).collect();
        let mut ll = 0.0;
        for (s, tg) in &sents {
            for f in tg {
                let denom: f64 = s.iter().map(|e| t[&(e.clone(), f.clone())]).sum();
                ll += (denom / s.len() as f64).ln();
                for e in s {
                    *counts.get_mut(&(e.clone(), f.clone())).unwrap() +=
                        t[&(e.clone(), f.clone())] / denom;
                }
            }
        }
        for e in &src_types {
            let total: f64 = tgt_types.iter().map(|f| counts[&(e.clone(), f.clone())]).sum();
            for f in &tgt_types {
                let key = (e.clone(), f.clone());
                t.insert(key.clone(), counts[&key] / total);
            }
        }
        lls.push(ll);
    }
    (t, lls)
}

/// Random corpus with at most `max_pairs` pairs and `vocab` types per side.
pub fn random_corpus(rng: &mut ChaCha8Rng, max_pairs: usize, vocab: usize) -> ParallelCorpus {
    let n = rng.gen_range(1..=max_pairs);
    let side = |rng: &mut ChaCha8Rng, prefix: char| -> TokenizedSentence {
        let len = rng.gen_range(1..=6);
        (0..len)
            .map(|_| format!("{prefix}{}", rng.gen_range(0..vocab)))
            .collect()
    };
    ParallelCorpus::new((0..n).map(|_| (side(rng, 's'), side(rng, 't'))).collect())
}

pub fn as_string_pairs(corpus: &ParallelCorpus) -> Vec<(Vec<String>, Vec<String>)> {
    corpus
        .pairs
        .iter()
        .map(|(s, t)| (s.tokens.clone(), t.tokens.clone()))
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// Synthetic verse-aligned corpus

/// Verse-aligned parallel corpus: Zipf-distributed source words
/// with a hidden word-for-word dictionary, dropped and inserted words, and
/// local reordering on the target side.
pub fn synthetic_verses(seed: u64, pairs: usize, vocab: usize) -> ParallelCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = (1..=vocab).map(|r| 1.0 / r as f64).collect();
    let total: f64 = weights.iter().sum();
    let cdf: Vec<f64> = weights
        .iter()
        .scan(0.0, |acc, w| {
            *acc += w / total;
            Some(*acc)
        })
        .collect();
    let syllables = ["ka", "lo", "mi", "ne", "ru", "sa", "ti", "vo", "ze", "pu", "ga", "he"];
    let word = |rng: &mut ChaCha8Rng, n: usize| -> String {
        (0..n).map(|_| *syllables.choose(rng).unwrap()).collect()
    };
    let src_words: Vec<String> = (0..vocab).map(|i| format!("w{i}")).collect();
    // Some source words have two renderings.
    let dict: Vec<Vec<String>> = (0..vocab)
        .map(|i| {
            let first = format!("{}{i}", word(&mut rng, 2));
            if rng.gen_bool(0.15) {
                vec![first, format!("{}{i}", word(&mut rng, 3))]
            } else {
                vec![first]
            }
        })
        .collect();
    let fillers = ["u", "li", "ta", "il", "."];
    let mut out = Vec::with_capacity(pairs);
    for _ in 0..pairs {
        let len = rng.gen_range(8..=28);
        let src: Vec<usize> = (0..len)
            .map(|_| {
                let x: f64 = rng.gen();
                cdf.partition_point(|&c| c < x).min(vocab - 1)
            })
            .collect();
        let mut tgt: Vec<String> = Vec::with_capacity(len + 3);
        for &w in &src {
            if rng.gen_bool(0.1) {
                continue;
            }
            tgt.push(dict[w].choose(&mut rng).unwrap().clone());
            if rng.gen_bool(0.08) {
                tgt.push(fillers.choose(&mut rng).unwrap().to_string());
            }
        }
        for i in 1..tgt.len() {
            if rng.gen_bool(0.15) {
                tgt.swap(i - 1, i);
            }
        }
        if tgt.is_empty() {
            tgt.push(fillers[0].to_string());
        }
        let src_sent: TokenizedSentence = src.iter().map(|&w| src_words[w].clone()).collect();
        out.push((src_sent, TokenizedSentence::new(tgt)));
    }
    ParallelCorpus::new(out)
}

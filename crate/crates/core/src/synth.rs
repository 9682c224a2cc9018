//! Word-to-word synthesis of pseudo target-language corpora.
//!
//! Each token is looked up case-folded in the lexicon. Known tokens are
//! replaced by one candidate drawn uniformly; unknown tokens pass through.
//! Draws come from a ChaCha stream keyed by `(seed, sentence_index,
//! token_index)`, so the output does not depend on scheduling.

use std::collections::HashSet;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corpus::{LabeledCorpus, LabeledSentence, TokenizedCorpus, TokenizedSentence};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::lexicon::{fold, Candidate, Lexicon};

/// 32-bit words reserved in the sentence stream for each token position.
const WORDS_PER_TOKEN: u128 = 256;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum CasePolicy {
    /// Emit lexicon targets verbatim.
    #[default]
    LexiconForm,
    /// Capitalize the target when the source token is title-cased.
    RestoreCase,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Sampling {
    /// Every occurrence draws independently and uniformly.
    #[default]
    PerOccurrenceUniform,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SynthesisConfig {
    pub seed: u64,
    pub case_policy: CasePolicy,
    pub sampling: Sampling,
    pub execution: Execution,
}

impl SynthesisConfig {
    pub fn with_seed(seed: u64) -> Self {
        SynthesisConfig {
            seed,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct CoverageReport {
    pub total_tokens: usize,
    pub replaced_tokens: usize,
    pub replacement_rate: f64,
    pub distinct_types: usize,
    pub covered_types: usize,
    pub sentences: usize,
}

impl CoverageReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Per-sentence candidate chooser with a lazily created RNG.
struct Chooser<'a> {
    cfg: &'a SynthesisConfig,
    sentence_index: u64,
    rng: Option<ChaCha8Rng>,
}

impl<'a> Chooser<'a> {
    fn new(cfg: &'a SynthesisConfig, sentence_index: usize) -> Self {
        Chooser {
            cfg,
            sentence_index: sentence_index as u64,
            rng: None,
        }
    }

    fn choose<'c>(&mut self, candidates: &'c [Candidate], token_index: usize) -> &'c Candidate {
        if candidates.len() == 1 {
            return &candidates[0];
        }
        let (seed, stream) = (self.cfg.seed, self.sentence_index);
        let rng = self.rng.get_or_insert_with(|| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            rng
        });
        rng.set_word_pos(token_index as u128 * WORDS_PER_TOKEN);
        match self.cfg.sampling {
            Sampling::PerOccurrenceUniform => &candidates[rng.gen_range(0..candidates.len())],
        }
    }
}

fn is_title_case(token: &str) -> bool {
    let mut chars = token.chars();
    chars.next().is_some_and(char::is_uppercase) && !chars.any(char::is_uppercase)
}

fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Translates one sentence into `out`; returns the number of replaced positions.
fn translate_into(
    tokens: &[String],
    lex: &Lexicon,
    cfg: &SynthesisConfig,
    sentence_index: usize,
    out: &mut Vec<String>,
) -> usize {
    let mut chooser = Chooser::new(cfg, sentence_index);
    let mut replaced = 0;
    for (token_index, token) in tokens.iter().enumerate() {
        let Some(candidates) = lex.lookup(token) else {
            out.push(token.clone());
            continue;
        };
        replaced += 1;
        let chosen = chooser.choose(candidates, token_index);
        let restore = cfg.case_policy == CasePolicy::RestoreCase && is_title_case(token);
        for (k, piece) in chosen.tokens().enumerate() {
            if restore && k == 0 {
                out.push(capitalize(piece));
            } else {
                out.push(piece.to_string());
            }
        }
    }
    replaced
}

pub fn translate_tokens(
    sentence: &TokenizedSentence,
    lex: &Lexicon,
    cfg: &SynthesisConfig,
    sentence_index: usize,
) -> TokenizedSentence {
    let mut out = Vec::with_capacity(sentence.len());
    translate_into(&sentence.tokens, lex, cfg, sentence_index, &mut out);
    TokenizedSentence::new(out)
}

fn type_coverage<'a>(
    sentences: impl Iterator<Item = &'a [String]>,
    lex: &Lexicon,
) -> (usize, usize) {
    let raw: HashSet<&str> = sentences.flatten().map(String::as_str).collect();
    let folded: HashSet<String> = raw.into_iter().map(fold).collect();
    let covered = folded.iter().filter(|t| lex.lookup_folded(t).is_some()).count();
    (folded.len(), covered)
}

fn build_report<'a, I>(sentences: I, replaced: usize, lex: &Lexicon) -> CoverageReport
where
    I: Iterator<Item = &'a [String]> + Clone,
{
    let total: usize = sentences.clone().map(<[String]>::len).sum();
    let (distinct_types, covered_types) = type_coverage(sentences.clone(), lex);
    CoverageReport {
        total_tokens: total,
        replaced_tokens: replaced,
        replacement_rate: if total == 0 {
            0.0
        } else {
            replaced as f64 / total as f64
        },
        distinct_types,
        covered_types,
        sentences: sentences.count(),
    }
}

/// Pseudo monolingual text. Multi-token targets expand in place.
pub fn synth_mono(
    corpus: &TokenizedCorpus,
    lex: &Lexicon,
    cfg: &SynthesisConfig,
) -> (TokenizedCorpus, CoverageReport) {
    let translated = map_indexed(cfg.execution, &corpus.sentences, |i, s| {
        let mut out = Vec::with_capacity(s.len() + 4);
        let replaced = translate_into(&s.tokens, lex, cfg, i, &mut out);
        (TokenizedSentence::new(out), replaced)
    });
    let replaced = translated.iter().map(|(_, r)| r).sum();
    let report = build_report(
        corpus.sentences.iter().map(|s| s.tokens.as_slice()),
        replaced,
        lex,
    );
    let output = translated.into_iter().map(|(s, _)| s).collect();
    (output, report)
}

/// Pseudo labeled data: tokens are replaced 1:1 and every annotation is kept.
///
/// Fails before producing output if any lexicon target spans several tokens.
pub fn synth_labeled(
    corpus: &LabeledCorpus,
    lex: &Lexicon,
    cfg: &SynthesisConfig,
) -> Result<(LabeledCorpus, CoverageReport)> {
    if let Some(entry) = lex.entries().find(|e| e.target.contains(' ')) {
        return Err(Error::validation(format!(
            "labeled synthesis needs single-token targets, found {:?} -> {:?}",
            entry.source, entry.target
        )));
    }
    let translated = map_indexed(cfg.execution, &corpus.sentences, |i, s| {
        let mut tokens = Vec::with_capacity(s.len());
        let replaced = translate_into(&s.tokens, lex, cfg, i, &mut tokens);
        debug_assert_eq!(tokens.len(), s.tokens.len());
        let sentence = LabeledSentence {
            tokens,
            labels: s.labels.clone(),
            rows: s.rows.clone(),
            extra_lines: s.extra_lines.clone(),
        };
        (sentence, replaced)
    });
    let replaced = translated.iter().map(|(_, r)| r).sum();
    let report = build_report(
        corpus.sentences.iter().map(|s| s.tokens.as_slice()),
        replaced,
        lex,
    );
    let output = LabeledCorpus {
        schema: corpus.schema,
        layout: corpus.layout,
        sentences: translated.into_iter().map(|(s, _)| s).collect(),
    };
    Ok((output, report))
}

/// Lookup-only coverage over any sequence of token slices.
pub fn coverage<'a, I>(sentences: I, lex: &Lexicon) -> CoverageReport
where
    I: IntoIterator<Item = &'a [String]>,
    I::IntoIter: Clone,
{
    let iter = sentences.into_iter();
    let replaced = iter
        .clone()
        .flatten()
        .filter(|t| lex.contains(t))
        .count();
    build_report(iter, replaced, lex)
}

pub fn coverage_mono(corpus: &TokenizedCorpus, lex: &Lexicon) -> CoverageReport {
    coverage(corpus.sentences.iter().map(|s| s.tokens.as_slice()), lex)
}

pub fn coverage_labeled(corpus: &LabeledCorpus, lex: &Lexicon) -> CoverageReport {
    coverage(corpus.sentences.iter().map(|s| s.tokens.as_slice()), lex)
}

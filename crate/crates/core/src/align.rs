//! IBM Model 1 word alignment and lexicon induction.
//!
//! The translation table is sparse: `t(f|e)` is stored only for target types
//! `f` that co-occur with source type `e` in some sentence pair, which is
//! exactly the support EM can ever give mass to. Source index 0 is the NULL
//! word, which co-occurs with every target type.
//!
//! The E-step computes posteriors per sentence pair (in parallel when
//! enabled) and folds them into the expected counts in corpus order, so the
//! trained table is bit-identical for any thread count.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::corpus::{is_punctuation_token, ParallelCorpus, TokenizedSentence};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::lexicon::{fold, Lexicon, Provenance};

/// Printable name of the empty source word.
pub const NULL_WORD: &str = "<NULL>";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetrization {
    #[default]
    Intersection,
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlignerConfig {
    pub iterations: usize,
    /// Minimum number of symmetrized links for an induced pair.
    pub min_count: usize,
    pub symmetrization: Symmetrization,
    pub case_fold: bool,
    /// Keep induced pairs where either side is a single punctuation mark.
    pub keep_punct: bool,
    pub execution: Execution,
}

impl Default for AlignerConfig {
    fn default() -> Self {
        AlignerConfig {
            iterations: 5,
            min_count: 2,
            symmetrization: Symmetrization::Intersection,
            case_fold: true,
            keep_punct: false,
            execution: Execution::Parallel,
        }
    }
}

impl AlignerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::validation("iterations must be at least 1"));
        }
        if self.min_count == 0 {
            return Err(Error::validation("min_count must be at least 1"));
        }
        Ok(())
    }
}

/// Interned vocabulary with first-seen ids.
#[derive(Debug, Clone, Default)]
struct Vocab {
    words: Vec<String>,
    ids: HashMap<String, u32>,
}

impl Vocab {
    fn intern(&mut self, word: &str) -> u32 {
        if let Some(&id) = self.ids.get(word) {
            return id;
        }
        let id = self.words.len() as u32;
        self.words.push(word.to_string());
        self.ids.insert(word.to_string(), id);
        id
    }

    fn get(&self, word: &str) -> Option<u32> {
        self.ids.get(word).copied()
    }
}

fn normalize_token(token: &str, case_fold: bool) -> String {
    if case_fold {
        fold(token)
    } else {
        token.to_string()
    }
}

/// Sparse conditional table `t(target | source)` from Model 1 training.
#[derive(Debug, Clone)]
pub struct TranslationTable {
    case_fold: bool,
    /// Index 0 is NULL.
    src_vocab: Vocab,
    tgt_vocab: Vocab,
    /// Row `e` spans `offsets[e]..offsets[e + 1]` of `targets`/`probs`.
    offsets: Vec<usize>,
    /// Target ids, ascending within each row.
    targets: Vec<u32>,
    probs: Vec<f64>,
    /// Corpus log-likelihood under the parameters entering each iteration.
    pub log_likelihoods: Vec<f64>,
    /// Corpus log-likelihood under the final parameters.
    pub final_log_likelihood: f64,
}

impl TranslationTable {
    pub fn case_fold(&self) -> bool {
        self.case_fold
    }

    /// Number of real source types (NULL excluded).
    pub fn src_vocab_size(&self) -> usize {
        self.src_vocab.words.len() - 1
    }

    pub fn tgt_vocab_size(&self) -> usize {
        self.tgt_vocab.words.len()
    }

    /// Number of stored (source, target) parameters.
    pub fn support_size(&self) -> usize {
        self.probs.len()
    }

    fn flat_index(&self, e: u32, f: u32) -> Option<usize> {
        let (lo, hi) = (self.offsets[e as usize], self.offsets[e as usize + 1]);
        self.targets[lo..hi].binary_search(&f).ok().map(|k| lo + k)
    }

    fn prob_ids(&self, e: u32, f: u32) -> f64 {
        self.flat_index(e, f).map_or(0.0, |k| self.probs[k])
    }

    /// `t(target | source)`; 0 for unseen pairs. Inputs are normalized
    /// the same way as during training.
    pub fn prob(&self, source: &str, target: &str) -> f64 {
        let e = self.src_vocab.get(&normalize_token(source, self.case_fold));
        let f = self.tgt_vocab.get(&normalize_token(target, self.case_fold));
        match (e, f) {
            (Some(e), Some(f)) if e != 0 => self.prob_ids(e, f),
            _ => 0.0,
        }
    }

    /// `t(target | NULL)`.
    pub fn null_prob(&self, target: &str) -> f64 {
        self.tgt_vocab
            .get(&normalize_token(target, self.case_fold))
            .map_or(0.0, |f| self.prob_ids(0, f))
    }

    /// Nonzero-support row of a source word (`None` selects NULL).
    pub fn row(&self, source: Option<&str>) -> Vec<(&str, f64)> {
        let e = match source {
            None => Some(0),
            Some(s) => self
                .src_vocab
                .get(&normalize_token(s, self.case_fold))
                .filter(|&e| e != 0),
        };
        let Some(e) = e else { return Vec::new() };
        let (lo, hi) = (self.offsets[e as usize], self.offsets[e as usize + 1]);
        (lo..hi)
            .map(|k| (self.tgt_vocab.words[self.targets[k] as usize].as_str(), self.probs[k]))
            .collect()
    }

    /// Largest `|Σ_f t(f|e) - 1|` over all source rows with support.
    pub fn max_normalization_error(&self) -> f64 {
        (0..self.offsets.len() - 1)
            .filter(|&e| self.offsets[e + 1] > self.offsets[e])
            .map(|e| {
                let sum: f64 = self.probs[self.offsets[e]..self.offsets[e + 1]].iter().sum();
                (sum - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }
}

/// One sentence pair with token ids; `src` starts with NULL.
struct EncodedPair {
    src: Vec<u32>,
    tgt: Vec<u32>,
    /// `cells[i * tgt.len() + j]` is the flat parameter index of `(src[i], tgt[j])`.
    cells: Vec<u32>,
}

/// Incremental Model 1 EM.
pub struct Model1Trainer {
    table: TranslationTable,
    pairs: Vec<EncodedPair>,
    execution: Execution,
}

impl Model1Trainer {
    /// Encodes the corpus and sets `t(f|e)` uniform over the target types
    /// co-occurring with `e`.
    pub fn new(corpus: &ParallelCorpus, case_fold: bool, execution: Execution) -> Result<Self> {
        if corpus.is_empty() {
            return Err(Error::validation("cannot train an aligner on an empty corpus"));
        }
        // NULL occupies id 0 but is not interned, so a literal token with the
        // same spelling still gets its own id.
        let mut src_vocab = Vocab::default();
        src_vocab.words.push(NULL_WORD.to_string());
        let mut tgt_vocab = Vocab::default();
        let mut encoded = Vec::with_capacity(corpus.len());
        for (n, (s, t)) in corpus.pairs.iter().enumerate() {
            if s.is_empty() || t.is_empty() {
                return Err(Error::validation(format!("sentence pair {} has an empty side", n + 1)));
            }
            let mut src = vec![0];
            src.extend(s.iter().map(|w| src_vocab.intern(&normalize_token(w, case_fold))));
            let tgt: Vec<u32> = t
                .iter()
                .map(|w| tgt_vocab.intern(&normalize_token(w, case_fold)))
                .collect();
            encoded.push((src, tgt));
        }

        let mut cooc: Vec<(u32, u32)> = encoded
            .iter()
            .flat_map(|(src, tgt)| src.iter().flat_map(move |&e| tgt.iter().map(move |&f| (e, f))))
            .collect();
        cooc.sort_unstable();
        cooc.dedup();

        let n_src = src_vocab.words.len();
        let mut offsets = vec![0usize; n_src + 1];
        for &(e, _) in &cooc {
            offsets[e as usize + 1] += 1;
        }
        for e in 0..n_src {
            offsets[e + 1] += offsets[e];
        }
        let targets: Vec<u32> = cooc.iter().map(|&(_, f)| f).collect();
        let mut probs = vec![0.0; targets.len()];
        for e in 0..n_src {
            let (lo, hi) = (offsets[e], offsets[e + 1]);
            if hi > lo {
                let uniform = 1.0 / (hi - lo) as f64;
                probs[lo..hi].iter_mut().for_each(|p| *p = uniform);
            }
        }

        let table = TranslationTable {
            case_fold,
            src_vocab,
            tgt_vocab,
            offsets,
            targets,
            probs,
            log_likelihoods: Vec::new(),
            final_log_likelihood: f64::NAN,
        };
        let pairs = encoded
            .into_iter()
            .map(|(src, tgt)| {
                let cells = src
                    .iter()
                    .flat_map(|&e| tgt.iter().map(move |&f| (e, f)))
                    .map(|(e, f)| table.flat_index(e, f).expect("co-occurring pair") as u32)
                    .collect();
                EncodedPair { src, tgt, cells }
            })
            .collect();
        Ok(Model1Trainer {
            table,
            pairs,
            execution,
        })
    }

    pub fn table(&self) -> &TranslationTable {
        &self.table
    }

    /// Posteriors for one pair (same layout as `cells`) and its log-likelihood.
    fn e_step_pair(probs: &[f64], pair: &EncodedPair) -> (Vec<f64>, f64) {
        let m = pair.tgt.len();
        let mut post: Vec<f64> = pair.cells.iter().map(|&k| probs[k as usize]).collect();
        let mut ll = 0.0;
        let src_positions = pair.src.len();
        for j in 0..m {
            let denom: f64 = (0..src_positions).map(|i| post[i * m + j]).sum();
            ll += (denom / src_positions as f64).ln();
            if denom > 0.0 {
                for i in 0..src_positions {
                    post[i * m + j] /= denom;
                }
            }
        }
        (post, ll)
    }

    fn corpus_log_likelihood(&self) -> f64 {
        let lls = map_indexed(self.execution, &self.pairs, |_, p| {
            Self::e_step_pair(&self.table.probs, p).1
        });
        lls.into_iter().sum()
    }

    /// Runs one EM iteration; returns the log-likelihood under the
    /// parameters before the update.
    pub fn step(&mut self) -> f64 {
        let probs = &self.table.probs;
        let posteriors = map_indexed(self.execution, &self.pairs, |_, p| Self::e_step_pair(probs, p));
        let mut counts = vec![0.0; probs.len()];
        let mut ll = 0.0;
        for (pair, (post, pair_ll)) in self.pairs.iter().zip(&posteriors) {
            for (&k, &c) in pair.cells.iter().zip(post) {
                counts[k as usize] += c;
            }
            ll += pair_ll;
        }
        let offsets = &self.table.offsets;
        for e in 0..offsets.len() - 1 {
            let (lo, hi) = (offsets[e], offsets[e + 1]);
            let total: f64 = counts[lo..hi].iter().sum();
            if total > 0.0 {
                for (p, c) in self.table.probs[lo..hi].iter_mut().zip(&counts[lo..hi]) {
                    *p = c / total;
                }
            }
        }
        self.table.log_likelihoods.push(ll);
        ll
    }

    pub fn finish(mut self) -> TranslationTable {
        self.table.final_log_likelihood = self.corpus_log_likelihood();
        self.table
    }
}

/// Trains Model 1 for `cfg.iterations` EM iterations.
pub fn train_model1(corpus: &ParallelCorpus, cfg: &AlignerConfig) -> Result<TranslationTable> {
    cfg.validate()?;
    let mut trainer = Model1Trainer::new(corpus, cfg.case_fold, cfg.execution)?;
    for _ in 0..cfg.iterations {
        trainer.step();
    }
    Ok(trainer.finish())
}

/// Links of one sentence pair as sorted, distinct `(src_index, tgt_index)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SentenceAlignment {
    pub src_len: usize,
    pub tgt_len: usize,
    pub links: Vec<(usize, usize)>,
}

impl SentenceAlignment {
    pub fn new(src_len: usize, tgt_len: usize, mut links: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(i, j)) = links.iter().find(|&&(i, j)| i >= src_len || j >= tgt_len) {
            return Err(Error::validation(format!(
                "link {i}-{j} outside a {src_len}x{tgt_len} sentence pair"
            )));
        }
        links.sort_unstable();
        links.dedup();
        Ok(SentenceAlignment {
            src_len,
            tgt_len,
            links,
        })
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.links.binary_search(&(i, j)).is_ok()
    }

    pub fn transposed(&self) -> SentenceAlignment {
        let mut links: Vec<(usize, usize)> = self.links.iter().map(|&(i, j)| (j, i)).collect();
        links.sort_unstable();
        SentenceAlignment {
            src_len: self.tgt_len,
            tgt_len: self.src_len,
            links,
        }
    }

    /// `i-j` pairs separated by spaces.
    pub fn to_pharaoh(&self) -> String {
        let mut out = String::new();
        for (n, (i, j)) in self.links.iter().enumerate() {
            if n > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{i}-{j}");
        }
        out
    }
}

/// One line per sentence in `i-j` format.
pub fn alignments_to_string(alignments: &[SentenceAlignment]) -> String {
    let mut out = String::new();
    for a in alignments {
        out.push_str(&a.to_pharaoh());
        out.push('\n');
    }
    out
}

/// Parses `i-j` lines against the sentence lengths of `corpus`.
pub fn parse_alignments(text: &str, corpus: &ParallelCorpus) -> Result<Vec<SentenceAlignment>> {
    let lines: Vec<&str> = text.lines().collect();
    if lines.len() != corpus.len() {
        return Err(Error::validation(format!(
            "{} alignment lines for {} sentence pairs",
            lines.len(),
            corpus.len()
        )));
    }
    lines
        .iter()
        .zip(&corpus.pairs)
        .map(|(line, (s, t))| {
            let links = line
                .split_whitespace()
                .map(|link| {
                    link.split_once('-')
                        .and_then(|(i, j)| Some((i.parse().ok()?, j.parse().ok()?)))
                        .ok_or_else(|| Error::validation(format!("malformed link {link:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            SentenceAlignment::new(s.len(), t.len(), links)
        })
        .collect()
}

fn viterbi_pair(table: &TranslationTable, src: &TokenizedSentence, tgt: &TokenizedSentence) -> SentenceAlignment {
    let src_ids: Vec<Option<u32>> = src
        .iter()
        .map(|w| table.src_vocab.get(&normalize_token(w, table.case_fold)).filter(|&e| e != 0))
        .collect();
    let mut links = Vec::new();
    for (j, word) in tgt.iter().enumerate() {
        let Some(f) = table.tgt_vocab.get(&normalize_token(word, table.case_fold)) else {
            continue;
        };
        let mut best: Option<(usize, f64)> = None;
        for (i, e) in src_ids.iter().enumerate() {
            let p = e.map_or(0.0, |e| table.prob_ids(e, f));
            if best.is_none_or(|(_, b)| p > b) {
                best = Some((i, p));
            }
        }
        if let Some((i, p)) = best {
            if p > 0.0 && p >= table.prob_ids(0, f) {
                links.push((i, j));
            }
        }
    }
    links.sort_unstable();
    SentenceAlignment {
        src_len: src.len(),
        tgt_len: tgt.len(),
        links,
    }
}

/// Links every target token to its most probable source token. NULL wins
/// only when strictly more probable than every real token; ties between
/// real tokens go to the lowest index.
pub fn viterbi_align(
    corpus: &ParallelCorpus,
    table: &TranslationTable,
    execution: Execution,
) -> Vec<SentenceAlignment> {
    map_indexed(execution, &corpus.pairs, |_, (s, t)| viterbi_pair(table, s, t))
}

/// Combines source-to-target alignments with target-to-source ones.
pub fn symmetrize(
    forward: &[SentenceAlignment],
    backward: &[SentenceAlignment],
    method: Symmetrization,
) -> Result<Vec<SentenceAlignment>> {
    if forward.len() != backward.len() {
        return Err(Error::validation(format!(
            "{} forward alignments but {} backward alignments",
            forward.len(),
            backward.len()
        )));
    }
    forward
        .iter()
        .zip(backward)
        .enumerate()
        .map(|(n, (f, b))| {
            if f.src_len != b.tgt_len || f.tgt_len != b.src_len {
                return Err(Error::validation(format!(
                    "sentence {}: forward is {}x{} but backward is {}x{}",
                    n + 1,
                    f.src_len,
                    f.tgt_len,
                    b.src_len,
                    b.tgt_len
                )));
            }
            Ok(match method {
                Symmetrization::Forward => f.clone(),
                Symmetrization::Backward => b.transposed(),
                Symmetrization::Intersection => SentenceAlignment {
                    src_len: f.src_len,
                    tgt_len: f.tgt_len,
                    links: f
                        .links
                        .iter()
                        .copied()
                        .filter(|&(i, j)| b.contains(j, i))
                        .collect(),
                },
            })
        })
        .collect()
}

/// Link counts per (source type, target type) over a corpus.
pub fn count_links(
    corpus: &ParallelCorpus,
    alignments: &[SentenceAlignment],
    case_fold: bool,
) -> Result<HashMap<(String, String), usize>> {
    if corpus.len() != alignments.len() {
        return Err(Error::validation(format!(
            "{} alignments for {} sentence pairs",
            alignments.len(),
            corpus.len()
        )));
    }
    let mut counts = HashMap::new();
    for (n, ((s, t), a)) in corpus.pairs.iter().zip(alignments).enumerate() {
        for &(i, j) in &a.links {
            if i >= s.len() || j >= t.len() {
                return Err(Error::validation(format!(
                    "sentence {}: link {i}-{j} outside a {}x{} pair",
                    n + 1,
                    s.len(),
                    t.len()
                )));
            }
            let key = (
                normalize_token(&s.tokens[i], case_fold),
                normalize_token(&t.tokens[j], case_fold),
            );
            *counts.entry(key).or_insert(0) += 1;
        }
    }
    Ok(counts)
}

/// Induced entries: pairs linked at least `cfg.min_count` times, ordered by
/// descending count, then source, then target.
pub fn induce_lexicon(
    corpus: &ParallelCorpus,
    alignments: &[SentenceAlignment],
    cfg: &AlignerConfig,
) -> Result<Lexicon> {
    cfg.validate()?;
    let counts = count_links(corpus, alignments, cfg.case_fold)?;
    let mut kept: Vec<((String, String), usize)> = counts
        .into_iter()
        .filter(|&(_, c)| c >= cfg.min_count)
        .filter(|((s, t), _)| {
            cfg.keep_punct || !(is_punctuation_token(s) || is_punctuation_token(t))
        })
        .collect();
    kept.sort_unstable_by(|(a, ca), (b, cb)| cb.cmp(ca).then_with(|| a.cmp(b)));
    let mut lex = Lexicon::default();
    for ((s, t), _) in kept {
        lex.insert(&s, &t, Provenance::Induced)?;
    }
    Ok(lex)
}

/// Everything produced by [`induce_from_parallel`].
#[derive(Debug, Clone)]
pub struct Induction {
    pub forward: TranslationTable,
    pub backward: TranslationTable,
    pub alignments: Vec<SentenceAlignment>,
    pub lexicon: Lexicon,
}

/// Trains both directions, aligns, symmetrizes and induces a lexicon.
pub fn induce_from_parallel(corpus: &ParallelCorpus, cfg: &AlignerConfig) -> Result<Induction> {
    cfg.validate()?;
    let reversed = corpus.reversed();
    let forward = train_model1(corpus, cfg)?;
    let backward = train_model1(&reversed, cfg)?;
    let fwd_links = viterbi_align(corpus, &forward, cfg.execution);
    let bwd_links = viterbi_align(&reversed, &backward, cfg.execution);
    let alignments = symmetrize(&fwd_links, &bwd_links, cfg.symmetrization)?;
    let lexicon = induce_lexicon(corpus, &alignments, cfg)?;
    Ok(Induction {
        forward,
        backward,
        alignments,
        lexicon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_parallel;

    fn corpus(pairs: &[(&str, &str)]) -> ParallelCorpus {
        ParallelCorpus::new(
            pairs
                .iter()
                .map(|(s, t)| (TokenizedSentence::from_line(s), TokenizedSentence::from_line(t)))
                .collect(),
        )
    }

    fn toy() -> ParallelCorpus {
        corpus(&[("the house", "das haus"), ("the book", "das buch"), ("a house", "ein haus")])
    }

    fn cfg(iterations: usize) -> AlignerConfig {
        AlignerConfig {
            iterations,
            ..Default::default()
        }
    }

    #[test]
    fn toy_corpus_concentrates_mass() {
        let t = train_model1(&toy(), &cfg(10)).unwrap();
        assert!(t.prob("house", "haus") >= 0.9, "{}", t.prob("house", "haus"));
        assert!(t.prob("the", "das") >= 0.9, "{}", t.prob("the", "das"));
        assert!(t.max_normalization_error() < 1e-9);
    }

    #[test]
    fn single_pair_is_deterministic() {
        for iterations in 1..4 {
            let t = train_model1(&corpus(&[("a", "b")]), &cfg(iterations)).unwrap();
            assert_eq!(t.prob("a", "b"), 1.0);
            assert_eq!(t.null_prob("b"), 1.0);
        }
    }

    #[test]
    fn empty_corpus_rejected() {
        let err = train_model1(&ParallelCorpus::default(), &cfg(1)).unwrap_err();
        assert!(err.is_validation());
        let bad = AlignerConfig {
            iterations: 0,
            ..Default::default()
        };
        assert!(train_model1(&toy(), &bad).is_err());
    }

    #[test]
    fn log_likelihood_recorded_per_iteration() {
        let t = train_model1(&toy(), &cfg(6)).unwrap();
        assert_eq!(t.log_likelihoods.len(), 6);
        for w in t.log_likelihoods.windows(2) {
            assert!(w[1] >= w[0] - 1e-10);
        }
        assert!(t.final_log_likelihood >= *t.log_likelihoods.last().unwrap() - 1e-10);
    }

    #[test]
    fn case_folding_merges_types() {
        let c = corpus(&[("The house", "Das Haus"), ("the house", "das haus")]);
        let folded = train_model1(&c, &cfg(3)).unwrap();
        assert_eq!(folded.src_vocab_size(), 2);
        let raw = train_model1(
            &c,
            &AlignerConfig {
                case_fold: false,
                iterations: 3,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(raw.src_vocab_size(), 3);
    }

    #[test]
    fn literal_null_spelling_is_an_ordinary_word() {
        let c = corpus(&[("<NULL> a", "x y"), ("<NULL>", "x")]);
        let t = train_model1(&c, &cfg(3)).unwrap();
        assert_eq!(t.src_vocab_size(), 2);
        assert!(t.prob("<NULL>", "x") > 0.0);
        assert!(t.max_normalization_error() < 1e-12);
    }

    #[test]
    fn viterbi_on_toy_links_house_to_haus() {
        let c = toy();
        let t = train_model1(&c, &cfg(10)).unwrap();
        let a = viterbi_align(&c, &t, Execution::Sequential);
        assert!(a[0].contains(1, 1));
        assert!(a[2].contains(1, 1));
        assert!(a[0].contains(0, 0));
    }

    #[test]
    fn viterbi_unique_source_and_null() {
        // One target type per source: t(f|e) = 1 for the only e seen with f.
        let c = corpus(&[("a", "x"), ("b", "y")]);
        let t = train_model1(&c, &cfg(5)).unwrap();
        let a = viterbi_align(&c, &t, Execution::Sequential);
        assert_eq!(a[0].links, vec![(0, 0)]);
        assert_eq!(a[1].links, vec![(0, 0)]);

        // A target word NULL explains better than any source word stays unlinked.
        let mut t = t;
        let f = t.tgt_vocab.get("x").unwrap();
        let e = t.src_vocab.get("a").unwrap();
        let k = t.flat_index(e, f).unwrap();
        t.probs[k] = 0.1;
        let null_k = t.flat_index(0, f).unwrap();
        t.probs[null_k] = 0.9;
        let a = viterbi_align(&c, &t, Execution::Sequential);
        assert!(a[0].links.is_empty());
    }

    #[test]
    fn viterbi_tie_goes_to_lowest_index_and_beats_null() {
        let c = corpus(&[("a a", "x")]);
        let t = train_model1(&c, &cfg(1)).unwrap();
        // t(x|a) = t(x|NULL) = 1.
        let a = viterbi_align(&c, &t, Execution::Sequential);
        assert_eq!(a[0].links, vec![(0, 0)]);
    }

    fn al(src_len: usize, tgt_len: usize, links: &[(usize, usize)]) -> SentenceAlignment {
        SentenceAlignment::new(src_len, tgt_len, links.to_vec()).unwrap()
    }

    #[test]
    fn intersection_examples() {
        let f = vec![al(2, 2, &[(0, 0), (1, 1)])];
        let b = vec![al(2, 2, &[(0, 0)])];
        let out = symmetrize(&f, &b, Symmetrization::Intersection).unwrap();
        assert_eq!(out[0].links, vec![(0, 0)]);

        let same = vec![al(2, 3, &[(0, 1), (1, 2)])];
        let back = vec![same[0].transposed()];
        assert_eq!(symmetrize(&same, &back, Symmetrization::Intersection).unwrap(), same);

        let disjoint_b = vec![al(3, 2, &[(0, 0)])];
        let out = symmetrize(&same, &disjoint_b, Symmetrization::Intersection).unwrap();
        assert!(out[0].links.is_empty());
    }

    #[test]
    fn forward_and_backward_pass_through() {
        let f = vec![al(2, 3, &[(0, 1)])];
        let b = vec![al(3, 2, &[(2, 1)])];
        assert_eq!(symmetrize(&f, &b, Symmetrization::Forward).unwrap(), f);
        assert_eq!(
            symmetrize(&f, &b, Symmetrization::Backward).unwrap()[0].links,
            vec![(1, 2)]
        );
    }

    #[test]
    fn symmetrize_length_mismatch() {
        let f = vec![al(2, 3, &[])];
        assert!(symmetrize(&f, &[], Symmetrization::Intersection).unwrap_err().is_validation());
        let b = vec![al(2, 3, &[])];
        assert!(symmetrize(&f, &b, Symmetrization::Intersection).is_err());
    }

    #[test]
    fn induction_threshold() {
        let c = corpus(&[
            ("house", "haus"),
            ("the house", "das haus"),
            ("a house", "ein haus"),
            ("book", "buch"),
        ]);
        let a = vec![
            al(1, 1, &[(0, 0)]),
            al(2, 2, &[(1, 1)]),
            al(2, 2, &[(1, 1)]),
            al(1, 1, &[(0, 0)]),
        ];
        let l = induce_lexicon(&c, &a, &AlignerConfig::default()).unwrap();
        assert_eq!(l.entry_count(), 1);
        assert_eq!(l.lookup("house").unwrap()[0].target, "haus");
        assert_eq!(l.lookup("house").unwrap()[0].provenance, Provenance::Induced);

        let relaxed = AlignerConfig {
            min_count: 1,
            ..Default::default()
        };
        let l = induce_lexicon(&c, &a, &relaxed).unwrap();
        assert_eq!(l.entry_count(), 2);
        let order: Vec<&str> = l.entries().map(|e| e.source).collect();
        assert_eq!(order, vec!["house", "book"]);
    }

    #[test]
    fn induction_rejects_out_of_range_links() {
        let c = corpus(&[("a", "b")]);
        let bad = vec![SentenceAlignment {
            src_len: 1,
            tgt_len: 1,
            links: vec![(3, 0)],
        }];
        assert!(induce_lexicon(&c, &bad, &AlignerConfig::default()).unwrap_err().is_validation());
    }

    #[test]
    fn punctuation_filter() {
        let c = corpus(&[("a .", "x ."), ("a .", "x .")]);
        let a = vec![al(2, 2, &[(0, 0), (1, 1)]), al(2, 2, &[(0, 0), (1, 1)])];
        let l = induce_lexicon(&c, &a, &AlignerConfig::default()).unwrap();
        assert_eq!(l.entry_count(), 1);
        let keep = AlignerConfig {
            keep_punct: true,
            ..Default::default()
        };
        assert_eq!(induce_lexicon(&c, &a, &keep).unwrap().entry_count(), 2);
    }

    #[test]
    fn pharaoh_round_trip() {
        let (c, _) = parse_parallel("a b c\nd\n", "x y\nz w\n").unwrap();
        let a = vec![al(3, 2, &[(0, 1), (2, 0)]), al(1, 2, &[])];
        let text = alignments_to_string(&a);
        assert_eq!(text, "0-1 2-0\n\n");
        assert_eq!(parse_alignments(&text, &c).unwrap(), a);
        assert!(parse_alignments("0-5\n\n", &c).is_err());
    }

    #[test]
    fn end_to_end_induction_on_repeated_pairs() {
        let c = toy();
        let out = induce_from_parallel(&c, &cfg(10)).unwrap();
        assert_eq!(out.alignments.len(), 3);
        let l = &out.lexicon;
        assert_eq!(l.lookup("house").unwrap()[0].target, "haus");
        // "the"/"das" is linked once per direction-agreeing sentence: twice.
        assert_eq!(l.lookup("the").unwrap()[0].target, "das");
    }
}

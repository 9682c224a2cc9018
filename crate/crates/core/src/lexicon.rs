//! Bilingual lexicon model and its two-column TSV format.
//!
//! Lookup keys are Unicode case-folded source word types. Each key maps to an
//! ordered list of distinct candidate translations; a candidate may span
//! several whitespace-separated target tokens.
//!
//! The TSV format is `source<TAB>target` per line. Lines starting with `#` are
//! comments, except for an optional language header of the form
//! `# src_lang=eng tgt_lang=mlt` which sets the lexicon's language codes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use indexmap::IndexMap;
use serde::Serialize;

use crate::error::{Error, Result};

/// Language code used when a lexicon file carries no language header.
pub const UNDETERMINED_LANG: &str = "und";

/// Unicode default case folding, with an ASCII fast path.
pub fn fold(word: &str) -> String {
    if word.is_ascii() {
        word.to_ascii_lowercase()
    } else {
        caseless::default_case_fold_str(word)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Provenance {
    Base,
    Induced,
}

/// One translation candidate of a source word type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub target: String,
    pub provenance: Provenance,
}

impl Candidate {
    pub fn tokens(&self) -> std::str::Split<'_, char> {
        self.target.split(' ')
    }

    pub fn is_multi_token(&self) -> bool {
        self.target.contains(' ')
    }
}

/// A flattened `(source, target)` pair, as yielded by [`Lexicon::entries`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconEntry<'a> {
    pub source: &'a str,
    pub target: &'a str,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoadMode {
    AllowMultiToken,
    /// Drop entries whose target has more than one token.
    SingleTokenOnly,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LexiconStats {
    pub entry_pairs: usize,
    pub distinct_sources: usize,
    pub multi_candidate_sources: usize,
    pub multi_token_targets: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    src_lang: String,
    tgt_lang: String,
    entries: IndexMap<String, Vec<Candidate>>,
}

impl Default for Lexicon {
    fn default() -> Self {
        Lexicon::new(UNDETERMINED_LANG, UNDETERMINED_LANG)
    }
}

impl Lexicon {
    pub fn new(src_lang: impl Into<String>, tgt_lang: impl Into<String>) -> Self {
        Lexicon {
            src_lang: src_lang.into(),
            tgt_lang: tgt_lang.into(),
            entries: IndexMap::new(),
        }
    }

    pub fn src_lang(&self) -> &str {
        &self.src_lang
    }

    pub fn tgt_lang(&self) -> &str {
        &self.tgt_lang
    }

    /// Adds a pair. Returns `Ok(false)` when the (folded source, target) pair
    /// is already present; an existing `Induced` candidate is upgraded to
    /// `Base` if the new pair is `Base`.
    pub fn insert(&mut self, source: &str, target: &str, provenance: Provenance) -> Result<bool> {
        if source.is_empty() || source.chars().any(char::is_whitespace) {
            return Err(Error::validation(format!(
                "lexicon source must be a single non-empty token, got {source:?}"
            )));
        }
        let target = normalize_target(target).ok_or_else(|| {
            Error::validation(format!("lexicon target for {source:?} is empty"))
        })?;
        let candidates = self.entries.entry(fold(source)).or_default();
        if let Some(existing) = candidates.iter_mut().find(|c| c.target == target) {
            if provenance == Provenance::Base {
                existing.provenance = Provenance::Base;
            }
            return Ok(false);
        }
        candidates.push(Candidate { target, provenance });
        Ok(true)
    }

    /// Candidates for a surface token; the token is case-folded first.
    pub fn lookup(&self, token: &str) -> Option<&[Candidate]> {
        if token.is_ascii() && !token.bytes().any(|b| b.is_ascii_uppercase()) {
            return self.lookup_folded(token);
        }
        self.lookup_folded(&fold(token))
    }

    /// Candidates for an already case-folded key.
    pub fn lookup_folded(&self, key: &str) -> Option<&[Candidate]> {
        self.entries.get(key).map(Vec::as_slice)
    }

    pub fn contains(&self, token: &str) -> bool {
        self.lookup(token).is_some()
    }

    /// Number of distinct (source, target) pairs.
    pub fn entry_count(&self) -> usize {
        self.entries.values().map(Vec::len).sum()
    }

    pub fn source_count(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Source keys with their candidates, in first-seen order.
    pub fn sources(&self) -> impl Iterator<Item = (&str, &[Candidate])> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn entries(&self) -> impl Iterator<Item = LexiconEntry<'_>> {
        self.entries.iter().flat_map(|(source, candidates)| {
            candidates.iter().map(move |c| LexiconEntry {
                source,
                target: &c.target,
                provenance: c.provenance,
            })
        })
    }

    /// Copy with every candidate marked as `provenance`.
    pub fn with_provenance(&self, provenance: Provenance) -> Lexicon {
        let mut out = self.clone();
        out.entries
            .values_mut()
            .flatten()
            .for_each(|c| c.provenance = provenance);
        out
    }

    pub fn set_languages(&mut self, src_lang: impl Into<String>, tgt_lang: impl Into<String>) {
        self.src_lang = src_lang.into();
        self.tgt_lang = tgt_lang.into();
    }

    pub fn has_multi_token_targets(&self) -> bool {
        self.entries.values().flatten().any(Candidate::is_multi_token)
    }

    /// Copy without multi-token targets, and the number of pairs removed.
    pub fn single_token_only(&self) -> (Lexicon, usize) {
        let mut out = Lexicon::new(&self.src_lang, &self.tgt_lang);
        let mut dropped = 0;
        for (source, candidates) in &self.entries {
            let kept: Vec<Candidate> = candidates
                .iter()
                .filter(|c| !c.is_multi_token())
                .cloned()
                .collect();
            dropped += candidates.len() - kept.len();
            if !kept.is_empty() {
                out.entries.insert(source.clone(), kept);
            }
        }
        (out, dropped)
    }

    pub fn stats(&self) -> LexiconStats {
        lexicon_stats(self)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        if self.src_lang != UNDETERMINED_LANG || self.tgt_lang != UNDETERMINED_LANG {
            let _ = writeln!(out, "# src_lang={} tgt_lang={}", self.src_lang, self.tgt_lang);
        }
        for entry in self.entries() {
            out.push_str(entry.source);
            out.push('\t');
            out.push_str(entry.target);
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_tsv()).map_err(|e| Error::io(path, e))
    }
}

/// Collapses whitespace runs to single spaces; `None` if nothing remains.
fn normalize_target(target: &str) -> Option<String> {
    let mut tokens = target.split_whitespace();
    let first = tokens.next()?;
    let mut out = first.to_string();
    for t in tokens {
        out.push(' ');
        out.push_str(t);
    }
    Some(out)
}

fn parse_lang_header(comment: &str) -> Option<(String, String)> {
    let mut src = None;
    let mut tgt = None;
    for field in comment.split_whitespace() {
        match field.split_once('=') {
            Some(("src_lang", v)) if !v.is_empty() => src = Some(v.to_string()),
            Some(("tgt_lang", v)) if !v.is_empty() => tgt = Some(v.to_string()),
            _ => return None,
        }
    }
    Some((src?, tgt?))
}

/// Parses lexicon TSV text. `origin` is used only in error messages.
pub fn parse_lexicon(text: &str, origin: &Path, mode: LoadMode) -> Result<(Lexicon, usize)> {
    let mut lex = Lexicon::default();
    let mut dropped = 0;
    let mut seen_entry = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if !seen_entry {
                if let Some((src, tgt)) = parse_lang_header(comment) {
                    lex.src_lang = src;
                    lex.tgt_lang = tgt;
                }
            }
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 2 {
            return Err(Error::format(
                origin,
                line_no,
                format!("expected 2 tab-separated fields, found {}", fields.len()),
            ));
        }
        let source = fields[0].trim();
        let target = fields[1].trim();
        if source.is_empty() || target.is_empty() {
            return Err(Error::format(origin, line_no, "empty lexicon field"));
        }
        if source.chars().any(char::is_whitespace) {
            return Err(Error::format(
                origin,
                line_no,
                format!("source {source:?} contains whitespace"),
            ));
        }
        seen_entry = true;
        if mode == LoadMode::SingleTokenOnly && target.split_whitespace().nth(1).is_some() {
            dropped += 1;
            continue;
        }
        lex.insert(source, target, Provenance::Base)
            .map_err(|e| Error::format(origin, line_no, e.to_string()))?;
    }
    Ok((lex, dropped))
}

pub fn load_lexicon(path: impl AsRef<Path>, mode: LoadMode) -> Result<(Lexicon, usize)> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_lexicon(&text, path, mode)
}

/// Equal codes merge; [`UNDETERMINED_LANG`] yields to the other side.
fn merge_lang<'a>(a: &'a str, b: &'a str) -> Option<&'a str> {
    match (a, b) {
        _ if a == b => Some(a),
        (UNDETERMINED_LANG, _) => Some(b),
        (_, UNDETERMINED_LANG) => Some(a),
        _ => None,
    }
}

/// Union of two lexicons over the same language pair. Base candidates keep
/// their position ahead of candidates contributed by `extra`.
pub fn merge(base: &Lexicon, extra: &Lexicon) -> Result<Lexicon> {
    let src_lang = merge_lang(&base.src_lang, &extra.src_lang);
    let tgt_lang = merge_lang(&base.tgt_lang, &extra.tgt_lang);
    let (Some(src_lang), Some(tgt_lang)) = (src_lang, tgt_lang) else {
        return Err(Error::validation(format!(
            "cannot merge lexicons for {}-{} and {}-{}",
            base.src_lang, base.tgt_lang, extra.src_lang, extra.tgt_lang
        )));
    };
    let mut out = base.clone();
    out.src_lang = src_lang.to_string();
    out.tgt_lang = tgt_lang.to_string();
    for (source, candidates) in &extra.entries {
        let slot = out.entries.entry(source.clone()).or_default();
        for c in candidates {
            match slot.iter_mut().find(|x| x.target == c.target) {
                Some(existing) => {
                    if c.provenance == Provenance::Base {
                        existing.provenance = Provenance::Base;
                    }
                }
                None => slot.push(c.clone()),
            }
        }
    }
    Ok(out)
}

pub fn lexicon_stats(lex: &Lexicon) -> LexiconStats {
    let mut stats = LexiconStats::default();
    for candidates in lex.entries.values() {
        stats.distinct_sources += 1;
        stats.entry_pairs += candidates.len();
        if candidates.len() > 1 {
            stats.multi_candidate_sources += 1;
        }
        stats.multi_token_targets += candidates.iter().filter(|c| c.is_multi_token()).count();
    }
    stats
}

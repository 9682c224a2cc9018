//! Corpus formats: tokenized monolingual text, token/label column files,
//! CoNLL-U, and line-aligned parallel text.
//!
//! Every writer emits UTF-8 with LF line endings and a trailing newline.
//! Labeled formats terminate each sentence with a blank line.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::Serialize;
use unicode_properties::{GeneralCategoryGroup, UnicodeGeneralCategory};

use crate::error::{Error, Result};

/// A sequence of whitespace-free tokens.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TokenizedSentence {
    pub tokens: Vec<String>,
}

impl TokenizedSentence {
    pub fn new(tokens: Vec<String>) -> Self {
        TokenizedSentence { tokens }
    }

    /// Splits a line on whitespace.
    pub fn from_line(line: &str) -> Self {
        TokenizedSentence {
            tokens: line.split_whitespace().map(str::to_string).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, String> {
        self.tokens.iter()
    }
}

impl fmt::Display for TokenizedSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tokens.join(" "))
    }
}

impl<S: Into<String>> FromIterator<S> for TokenizedSentence {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        TokenizedSentence::new(iter.into_iter().map(Into::into).collect())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenizedCorpus {
    pub sentences: Vec<TokenizedSentence>,
}

impl TokenizedCorpus {
    pub fn new(sentences: Vec<TokenizedSentence>) -> Self {
        TokenizedCorpus { sentences }
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(TokenizedSentence::len).sum()
    }
}

impl FromIterator<TokenizedSentence> for TokenizedCorpus {
    fn from_iter<I: IntoIterator<Item = TokenizedSentence>>(iter: I) -> Self {
        TokenizedCorpus::new(iter.into_iter().collect())
    }
}

// ---------------------------------------------------------------------------
// Monolingual text

/// Parses one sentence per line. Blank lines are skipped; `limit` caps the
/// number of sentences kept.
pub fn parse_mono(text: &str, limit: Option<usize>) -> TokenizedCorpus {
    let limit = limit.unwrap_or(usize::MAX);
    text.lines()
        .map(TokenizedSentence::from_line)
        .filter(|s| !s.is_empty())
        .take(limit)
        .collect()
}

pub fn read_mono(path: impl AsRef<Path>, limit: Option<usize>) -> Result<TokenizedCorpus> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(parse_mono(&text, limit))
}

pub fn mono_to_string(corpus: &TokenizedCorpus) -> String {
    let mut out = String::with_capacity(corpus.token_count() * 8);
    for s in &corpus.sentences {
        push_joined(&mut out, &s.tokens);
        out.push('\n');
    }
    out
}

pub fn write_mono(corpus: &TokenizedCorpus, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, mono_to_string(corpus)).map_err(|e| Error::io(path, e))
}

fn push_joined(out: &mut String, tokens: &[String]) {
    for (i, t) in tokens.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(t);
    }
}

// ---------------------------------------------------------------------------
// Parallel text

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParallelCorpus {
    pub pairs: Vec<(TokenizedSentence, TokenizedSentence)>,
}

impl ParallelCorpus {
    pub fn new(pairs: Vec<(TokenizedSentence, TokenizedSentence)>) -> Self {
        ParallelCorpus { pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Same corpus with source and target sides swapped.
    pub fn reversed(&self) -> ParallelCorpus {
        ParallelCorpus {
            pairs: self
                .pairs
                .iter()
                .map(|(s, t)| (t.clone(), s.clone()))
                .collect(),
        }
    }
}

/// Pairs line `i` of `src` with line `i` of `tgt`. Pairs with a blank side
/// are dropped; the second value is the number dropped.
pub fn parse_parallel(src: &str, tgt: &str) -> Result<(ParallelCorpus, usize)> {
    let src_lines: Vec<&str> = src.lines().collect();
    let tgt_lines: Vec<&str> = tgt.lines().collect();
    if src_lines.len() != tgt_lines.len() {
        return Err(Error::validation(format!(
            "parallel files differ in length: source has {} lines, target has {} lines",
            src_lines.len(),
            tgt_lines.len()
        )));
    }
    let mut pairs = Vec::with_capacity(src_lines.len());
    let mut dropped = 0;
    for (s, t) in src_lines.into_iter().zip(tgt_lines) {
        let s = TokenizedSentence::from_line(s);
        let t = TokenizedSentence::from_line(t);
        if s.is_empty() || t.is_empty() {
            dropped += 1;
        } else {
            pairs.push((s, t));
        }
    }
    Ok((ParallelCorpus { pairs }, dropped))
}

pub fn read_parallel(
    src_path: impl AsRef<Path>,
    tgt_path: impl AsRef<Path>,
) -> Result<(ParallelCorpus, usize)> {
    let (src_path, tgt_path) = (src_path.as_ref(), tgt_path.as_ref());
    let src = fs::read_to_string(src_path).map_err(|e| Error::io(src_path, e))?;
    let tgt = fs::read_to_string(tgt_path).map_err(|e| Error::io(tgt_path, e))?;
    parse_parallel(&src, &tgt)
}

pub fn parallel_to_strings(corpus: &ParallelCorpus) -> (String, String) {
    let mut src = String::new();
    let mut tgt = String::new();
    for (s, t) in &corpus.pairs {
        push_joined(&mut src, &s.tokens);
        src.push('\n');
        push_joined(&mut tgt, &t.tokens);
        tgt.push('\n');
    }
    (src, tgt)
}

pub fn write_parallel(
    corpus: &ParallelCorpus,
    src_path: impl AsRef<Path>,
    tgt_path: impl AsRef<Path>,
) -> Result<()> {
    let (src_path, tgt_path) = (src_path.as_ref(), tgt_path.as_ref());
    let (src, tgt) = parallel_to_strings(corpus);
    fs::write(src_path, src).map_err(|e| Error::io(src_path, e))?;
    fs::write(tgt_path, tgt).map_err(|e| Error::io(tgt_path, e))
}

// ---------------------------------------------------------------------------
// Labeled text

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Schema {
    Ner,
    Pos,
    Dep,
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Schema::Ner => "NER",
            Schema::Pos => "POS",
            Schema::Dep => "DEP",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LabeledFormat {
    /// `token<TAB>label` lines, blank line after each sentence.
    TwoColumn,
    Conllu,
}

const CONLLU_COLUMNS: usize = 10;

/// Where tokens and labels live in each row.
///
/// For [`Schema::Dep`] the head is read from `label_col` and the relation
/// from `label_col + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColumnLayout {
    pub format: LabeledFormat,
    pub token_col: usize,
    pub label_col: usize,
}

impl ColumnLayout {
    /// CoNLL-U: FORM, then UPOS for POS, HEAD/DEPREL for DEP and MISC for NER.
    pub fn default_for(format: LabeledFormat, schema: Schema) -> Self {
        let (token_col, label_col) = match (format, schema) {
            (LabeledFormat::TwoColumn, _) => (0, 1),
            (LabeledFormat::Conllu, Schema::Pos) => (1, 3),
            (LabeledFormat::Conllu, Schema::Dep) => (1, 6),
            (LabeledFormat::Conllu, Schema::Ner) => (1, 9),
        };
        ColumnLayout {
            format,
            token_col,
            label_col,
        }
    }

    fn required_width(&self, schema: Schema) -> usize {
        let last_label = match schema {
            Schema::Dep => self.label_col + 1,
            _ => self.label_col,
        };
        match self.format {
            LabeledFormat::Conllu => CONLLU_COLUMNS,
            LabeledFormat::TwoColumn => self.token_col.max(last_label) + 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Labels {
    /// One BIO or UPOS tag per token.
    Tags(Vec<String>),
    /// Head index (0 = root, otherwise 1-based) and relation per token.
    Dep {
        heads: Vec<usize>,
        deprels: Vec<String>,
    },
}

impl Labels {
    pub fn len(&self) -> usize {
        match self {
            Labels::Tags(t) => t.len(),
            Labels::Dep { heads, .. } => heads.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Printable label at a token position; DEP labels render as `head:rel`.
    pub fn label_at(&self, i: usize) -> String {
        match self {
            Labels::Tags(t) => t[i].clone(),
            Labels::Dep { heads, deprels } => format!("{}:{}", heads[i], deprels[i]),
        }
    }

    fn fits(&self, schema: Schema) -> bool {
        matches!(
            (self, schema),
            (Labels::Tags(_), Schema::Ner | Schema::Pos) | (Labels::Dep { .. }, Schema::Dep)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledSentence {
    pub tokens: Vec<String>,
    pub labels: Labels,
    /// Original field rows, one per token. Token and label fields are
    /// overwritten from `tokens`/`labels` on write; other fields pass through.
    /// Empty for sentences built in memory.
    pub rows: Vec<Vec<String>>,
    /// Non-token lines (comments, multiword ranges, empty nodes) keyed by
    /// the number of tokens that precede them.
    pub extra_lines: Vec<(usize, String)>,
}

impl LabeledSentence {
    pub fn new(tokens: Vec<String>, labels: Labels) -> Self {
        LabeledSentence {
            tokens,
            labels,
            rows: Vec::new(),
            extra_lines: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn validate(&self, schema: Schema) -> Result<()> {
        let n = self.tokens.len();
        if n == 0 {
            return Err(Error::validation("labeled sentence has no tokens"));
        }
        if let Some(t) = self
            .tokens
            .iter()
            .find(|t| t.is_empty() || t.chars().any(char::is_whitespace))
        {
            return Err(Error::validation(format!("invalid token {t:?}")));
        }
        if !self.labels.fits(schema) {
            return Err(Error::validation(format!("labels do not match schema {schema}")));
        }
        if self.labels.len() != n {
            return Err(Error::validation(format!(
                "{} labels for {n} tokens",
                self.labels.len()
            )));
        }
        if let Labels::Dep { heads, deprels } = &self.labels {
            if deprels.len() != n {
                return Err(Error::validation(format!(
                    "{} relations for {n} tokens",
                    deprels.len()
                )));
            }
            if let Some(h) = heads.iter().find(|&&h| h > n) {
                return Err(Error::validation(format!("head {h} out of range 0..={n}")));
            }
        }
        if !self.rows.is_empty() && self.rows.len() != n {
            return Err(Error::validation(format!(
                "{} passthrough rows for {n} tokens",
                self.rows.len()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledCorpus {
    pub schema: Schema,
    pub layout: ColumnLayout,
    pub sentences: Vec<LabeledSentence>,
}

impl LabeledCorpus {
    pub fn new(schema: Schema, layout: ColumnLayout) -> Self {
        LabeledCorpus {
            schema,
            layout,
            sentences: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        for (i, s) in self.sentences.iter().enumerate() {
            s.validate(self.schema)
                .map_err(|e| Error::validation(format!("sentence {}: {e}", i + 1)))?;
        }
        Ok(())
    }
}

/// Accumulates one sentence while parsing.
struct SentenceBuilder {
    start_line: usize,
    tokens: Vec<String>,
    tags: Vec<String>,
    heads: Vec<usize>,
    deprels: Vec<String>,
    rows: Vec<Vec<String>>,
    extra_lines: Vec<(usize, String)>,
}

impl SentenceBuilder {
    fn new(start_line: usize) -> Self {
        SentenceBuilder {
            start_line,
            tokens: Vec::new(),
            tags: Vec::new(),
            heads: Vec::new(),
            deprels: Vec::new(),
            rows: Vec::new(),
            extra_lines: Vec::new(),
        }
    }

    fn finish(self, schema: Schema, origin: &Path) -> Result<LabeledSentence> {
        if self.tokens.is_empty() {
            return Err(Error::format(origin, self.start_line, "sentence has no tokens"));
        }
        let labels = match schema {
            Schema::Dep => Labels::Dep {
                heads: self.heads,
                deprels: self.deprels,
            },
            _ => Labels::Tags(self.tags),
        };
        let sentence = LabeledSentence {
            tokens: self.tokens,
            labels,
            rows: self.rows,
            extra_lines: self.extra_lines,
        };
        sentence
            .validate(schema)
            .map_err(|e| Error::format(origin, self.start_line, e.to_string()))?;
        Ok(sentence)
    }
}

fn is_conllu_word_id(id: &str) -> bool {
    !id.is_empty() && id.bytes().all(|b| b.is_ascii_digit())
}

/// Parses labeled text. `origin` is used only in error messages.
pub fn parse_labeled(
    text: &str,
    origin: &Path,
    schema: Schema,
    layout: ColumnLayout,
) -> Result<LabeledCorpus> {
    let width = layout.required_width(schema);
    let mut corpus = LabeledCorpus::new(schema, layout);
    let mut current: Option<SentenceBuilder> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            if let Some(b) = current.take() {
                corpus.sentences.push(b.finish(schema, origin)?);
            }
            continue;
        }
        let builder = current.get_or_insert_with(|| SentenceBuilder::new(line_no));

        if layout.format == LabeledFormat::Conllu {
            if line.starts_with('#') {
                builder.extra_lines.push((builder.tokens.len(), line.to_string()));
                continue;
            }
            let id = line.split('\t').next().unwrap_or_default();
            if !is_conllu_word_id(id) {
                if id.contains('-') || id.contains('.') {
                    builder.extra_lines.push((builder.tokens.len(), line.to_string()));
                    continue;
                }
                return Err(Error::format(origin, line_no, format!("invalid token ID {id:?}")));
            }
        }

        let fields: Vec<String> = line.split('\t').map(str::to_string).collect();
        let column_ok = match layout.format {
            LabeledFormat::Conllu => fields.len() == CONLLU_COLUMNS,
            LabeledFormat::TwoColumn => fields.len() >= width,
        };
        if !column_ok {
            return Err(Error::format(
                origin,
                line_no,
                format!("expected {width} columns, found {}", fields.len()),
            ));
        }
        let token = &fields[layout.token_col];
        if token.is_empty() || token.chars().any(char::is_whitespace) {
            return Err(Error::format(origin, line_no, format!("invalid token {token:?}")));
        }
        match schema {
            Schema::Dep => {
                let head = fields[layout.label_col].parse::<usize>().map_err(|_| {
                    Error::format(
                        origin,
                        line_no,
                        format!("non-integer head {:?}", fields[layout.label_col]),
                    )
                })?;
                builder.heads.push(head);
                builder.deprels.push(fields[layout.label_col + 1].clone());
            }
            _ => {
                let tag = &fields[layout.label_col];
                if tag.is_empty() {
                    return Err(Error::format(origin, line_no, "empty label"));
                }
                builder.tags.push(tag.clone());
            }
        }
        builder.tokens.push(token.clone());
        builder.rows.push(fields);
    }
    if let Some(b) = current.take() {
        corpus.sentences.push(b.finish(schema, origin)?);
    }
    Ok(corpus)
}

pub fn read_labeled(
    path: impl AsRef<Path>,
    schema: Schema,
    layout: ColumnLayout,
) -> Result<LabeledCorpus> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_labeled(&text, path, schema, layout)
}

fn render_row(
    sentence: &LabeledSentence,
    i: usize,
    schema: Schema,
    layout: &ColumnLayout,
) -> Vec<String> {
    let width = layout.required_width(schema);
    let mut row = match sentence.rows.get(i) {
        Some(r) => r.clone(),
        None => match layout.format {
            LabeledFormat::Conllu => {
                let mut r = vec!["_".to_string(); CONLLU_COLUMNS];
                r[0] = (i + 1).to_string();
                r
            }
            LabeledFormat::TwoColumn => vec![String::new(); width],
        },
    };
    if row.len() < width {
        row.resize(width, String::new());
    }
    row[layout.token_col] = sentence.tokens[i].clone();
    match &sentence.labels {
        Labels::Tags(tags) => row[layout.label_col] = tags[i].clone(),
        Labels::Dep { heads, deprels } => {
            row[layout.label_col] = heads[i].to_string();
            row[layout.label_col + 1] = deprels[i].clone();
        }
    }
    row
}

pub fn labeled_to_string(corpus: &LabeledCorpus) -> String {
    let mut out = String::new();
    for sentence in &corpus.sentences {
        let mut extras = sentence.extra_lines.iter().peekable();
        for i in 0..sentence.tokens.len() {
            while let Some((_, line)) = extras.next_if(|(pos, _)| *pos <= i) {
                out.push_str(line);
                out.push('\n');
            }
            out.push_str(&render_row(sentence, i, corpus.schema, &corpus.layout).join("\t"));
            out.push('\n');
        }
        for (_, line) in extras {
            out.push_str(line);
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

pub fn write_labeled(corpus: &LabeledCorpus, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, labeled_to_string(corpus)).map_err(|e| Error::io(path, e))
}

// ---------------------------------------------------------------------------
// Tokenization

const APOSTROPHES: [char; 3] = ['\'', '\u{2019}', '\u{02BC}'];

pub fn is_punctuation(c: char) -> bool {
    c.general_category_group() == GeneralCategoryGroup::Punctuation
}

/// True for a token made of exactly one punctuation character.
pub fn is_punctuation_token(token: &str) -> bool {
    let mut chars = token.chars();
    matches!((chars.next(), chars.next()), (Some(c), None) if is_punctuation(c))
}

/// Whitespace tokenizer that also detaches leading and trailing punctuation.
///
/// Word-internal characters are never split, and a word-final apostrophe
/// stays attached (`ta’`). Runs of one repeated punctuation mark (`...`)
/// stay together.
pub fn tokenize_basic(text: &str) -> TokenizedSentence {
    let mut tokens = Vec::new();
    for chunk in text.split_whitespace() {
        let chars: Vec<(usize, char)> = chunk.char_indices().collect();
        let mut start = 0;
        while start < chars.len() && is_punctuation(chars[start].1) {
            start += 1;
        }
        let mut end = chars.len();
        while end > start && is_punctuation(chars[end - 1].1) && !APOSTROPHES.contains(&chars[end - 1].1)
        {
            end -= 1;
        }
        let byte_at = |i: usize| chars.get(i).map_or(chunk.len(), |&(b, _)| b);
        push_punct_runs(&mut tokens, &chunk[..byte_at(start)]);
        if start < end {
            tokens.push(chunk[byte_at(start)..byte_at(end)].to_string());
        }
        push_punct_runs(&mut tokens, &chunk[byte_at(end)..]);
    }
    TokenizedSentence::new(tokens)
}

fn push_punct_runs(tokens: &mut Vec<String>, s: &str) {
    let mut run = String::new();
    for c in s.chars() {
        if run.chars().next().is_some_and(|r| r != c) {
            tokens.push(std::mem::take(&mut run));
        }
        run.push(c);
    }
    if !run.is_empty() {
        tokens.push(run);
    }
}

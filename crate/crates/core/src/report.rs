//! Lexicon POS analysis and machine-readable pipeline summaries.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;
use serde_json::Value;

use crate::corpus::{LabeledCorpus, Labels, Schema};
use crate::error::{Error, Result};
use crate::lexicon::{fold, Lexicon};

/// Ties between equally frequent tags go to the lexicographically smallest.
pub const TAG_TIE_RULE: &str = "majority UPOS per case-folded reference type; ties to smallest tag";

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PosDistribution {
    /// Share of found lexicon sources per UPOS tag.
    pub fractions: BTreeMap<String, f64>,
    pub counts: BTreeMap<String, usize>,
    /// Lexicon sources present in the reference.
    pub found: usize,
    pub out_of_reference: usize,
    pub tagging: &'static str,
}

/// Tags each distinct lexicon source with its majority tag in a POS-tagged
/// reference corpus and returns the tag histogram.
pub fn lexicon_pos_distribution(lex: &Lexicon, reference: &LabeledCorpus) -> Result<PosDistribution> {
    if reference.schema != Schema::Pos {
        return Err(Error::validation(format!(
            "reference corpus must be POS tagged, found {}",
            reference.schema
        )));
    }
    let mut tag_counts: HashMap<String, BTreeMap<&str, usize>> = HashMap::new();
    for s in &reference.sentences {
        let Labels::Tags(tags) = &s.labels else {
            continue;
        };
        for (token, tag) in s.tokens.iter().zip(tags) {
            *tag_counts.entry(fold(token)).or_default().entry(tag).or_default() += 1;
        }
    }

    let mut dist = PosDistribution {
        tagging: TAG_TIE_RULE,
        ..Default::default()
    };
    for (source, _) in lex.sources() {
        match tag_counts.get(source) {
            Some(tags) => {
                // BTreeMap iterates tags in ascending order; keep the first maximum.
                let (tag, _) = tags
                    .iter()
                    .fold(None, |best: Option<(&str, usize)>, (&t, &c)| match best {
                        Some((_, bc)) if bc >= c => best,
                        _ => Some((t, c)),
                    })
                    .expect("non-empty tag counts");
                *dist.counts.entry(tag.to_string()).or_default() += 1;
                dist.found += 1;
            }
            None => dist.out_of_reference += 1,
        }
    }
    for (tag, &count) in &dist.counts {
        dist.fractions
            .insert(tag.clone(), count as f64 / dist.found as f64);
    }
    Ok(dist)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageEntry {
    pub stage: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<Value>,
}

/// JSON summary of a pipeline run. Keys are emitted in a fixed order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineSummary {
    pub tool: String,
    pub version: String,
    pub seeds: Vec<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub stages: Vec<StageEntry>,
}

impl Default for PipelineSummary {
    fn default() -> Self {
        PipelineSummary {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seeds: Vec::new(),
            stages: Vec::new(),
        }
    }
}

impl PipelineSummary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_seed(&mut self, seed: u64) -> &mut Self {
        if !self.seeds.contains(&seed) {
            self.seeds.push(seed);
        }
        self
    }

    /// Appends a stage with an optional report, embedded as serialized.
    pub fn add_stage<R: Serialize>(&mut self, name: impl Into<String>, report: Option<&R>) -> &mut Self {
        let report = report.map(|r| serde_json::to_value(r).expect("report serializes"));
        self.stages.push(StageEntry {
            stage: name.into(),
            report,
        });
        self
    }

    pub fn add_stage_value(&mut self, name: impl Into<String>, report: Option<Value>) -> &mut Self {
        self.stages.push(StageEntry {
            stage: name.into(),
            report,
        });
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serializes");
        s.push('\n');
        s
    }
}

/// Builds a summary from named reports, in input order.
pub fn pipeline_summary<R: Serialize>(seeds: &[u64], reports: &[(&str, &R)]) -> PipelineSummary {
    let mut summary = PipelineSummary::new();
    for &seed in seeds {
        summary.add_seed(seed);
    }
    for (name, report) in reports {
        summary.add_stage(*name, Some(*report));
    }
    summary
}

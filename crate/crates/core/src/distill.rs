//! Label distillation: replace the labels of pseudo labeled data with a
//! teacher model's predictions on the same tokens.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::corpus::{LabeledCorpus, LabeledSentence, Labels};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DistillReport {
    pub positions: usize,
    pub changed: usize,
    pub change_rate: f64,
    /// Original label -> teacher label -> count, changed positions only.
    /// DEP labels are rendered as `head:deprel`.
    pub per_label_confusion: BTreeMap<String, BTreeMap<String, usize>>,
}

fn check_shape(a: &LabeledCorpus, b: &LabeledCorpus, what: &str) -> Result<()> {
    if a.schema != b.schema {
        return Err(Error::validation(format!(
            "{what} schema {} does not match {}",
            b.schema, a.schema
        )));
    }
    if a.len() != b.len() {
        return Err(Error::validation(format!(
            "{what} has {} sentences, expected {}",
            b.len(),
            a.len()
        )));
    }
    for (n, (x, y)) in a.sentences.iter().zip(&b.sentences).enumerate() {
        if x.tokens.len() != y.tokens.len() {
            return Err(Error::validation(format!(
                "{what} sentence {} has {} tokens, expected {}",
                n + 1,
                y.tokens.len(),
                x.tokens.len()
            )));
        }
        if let Some(pos) = x.tokens.iter().zip(&y.tokens).position(|(p, q)| p != q) {
            return Err(Error::validation(format!(
                "{what} sentence {} token {}: {:?} differs from {:?}",
                n + 1,
                pos + 1,
                y.tokens[pos],
                x.tokens[pos]
            )));
        }
        if y.labels.len() != y.tokens.len() {
            return Err(Error::validation(format!(
                "{what} sentence {} has {} labels for {} tokens",
                n + 1,
                y.labels.len(),
                y.tokens.len()
            )));
        }
    }
    Ok(())
}

/// Compares labels position by position.
pub fn distill_report(pseudo: &LabeledCorpus, distilled: &LabeledCorpus) -> Result<DistillReport> {
    check_shape(pseudo, distilled, "distilled corpus")?;
    let mut report = DistillReport::default();
    for (p, d) in pseudo.sentences.iter().zip(&distilled.sentences) {
        for i in 0..p.tokens.len() {
            report.positions += 1;
            let before = p.labels.label_at(i);
            let after = d.labels.label_at(i);
            if before != after {
                report.changed += 1;
                *report
                    .per_label_confusion
                    .entry(before)
                    .or_default()
                    .entry(after)
                    .or_default() += 1;
            }
        }
    }
    if report.positions > 0 {
        report.change_rate = report.changed as f64 / report.positions as f64;
    }
    Ok(report)
}

/// Takes tokens and passthrough columns from `pseudo` and every label from
/// `teacher`. Tokens must match exactly; for DEP both heads and relations
/// are replaced.
pub fn apply_teacher_labels(
    pseudo: &LabeledCorpus,
    teacher: &LabeledCorpus,
) -> Result<(LabeledCorpus, DistillReport)> {
    check_shape(pseudo, teacher, "teacher predictions")?;
    let sentences = pseudo
        .sentences
        .iter()
        .zip(&teacher.sentences)
        .map(|(p, t)| LabeledSentence {
            tokens: p.tokens.clone(),
            labels: t.labels.clone(),
            rows: p.rows.clone(),
            extra_lines: p.extra_lines.clone(),
        })
        .collect();
    let out = LabeledCorpus {
        schema: pseudo.schema,
        layout: pseudo.layout,
        sentences,
    };
    out.validate()?;
    let report = distill_report(pseudo, &out)?;
    Ok((out, report))
}

/// Count of positions whose label differs, for quick checks.
pub fn changed_positions(a: &Labels, b: &Labels) -> usize {
    (0..a.len().min(b.len()))
        .filter(|&i| a.label_at(i) != b.label_at(i))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{ColumnLayout, LabeledFormat, Schema};

    fn pos_corpus(rows: &[(&str, &str)]) -> LabeledCorpus {
        let layout = ColumnLayout::default_for(LabeledFormat::TwoColumn, Schema::Pos);
        let mut c = LabeledCorpus::new(Schema::Pos, layout);
        c.sentences.push(LabeledSentence::new(
            rows.iter().map(|(t, _)| t.to_string()).collect(),
            Labels::Tags(rows.iter().map(|(_, l)| l.to_string()).collect()),
        ));
        c
    }

    #[test]
    fn identical_teacher_is_identity() {
        let p = pos_corpus(&[("xewqa", "AUX"), ("hares", "VERB")]);
        let (out, report) = apply_teacher_labels(&p, &p).unwrap();
        assert_eq!(out, p);
        assert_eq!(report.changed, 0);
        assert_eq!(report.change_rate, 0.0);
    }

    #[test]
    fn relabels_and_counts_confusions() {
        let p = pos_corpus(&[("Bagdad", "PROPN"), ("xewqa", "AUX"), ("hares", "VERB")]);
        let t = pos_corpus(&[("Bagdad", "PROPN"), ("xewqa", "NOUN"), ("hares", "NOUN")]);
        let (out, report) = apply_teacher_labels(&p, &t).unwrap();
        assert_eq!(out.sentences[0].labels, t.sentences[0].labels);
        assert_eq!(report.changed, 2);
        assert_eq!(report.per_label_confusion["AUX"]["NOUN"], 1);
        assert_eq!(report.per_label_confusion["VERB"]["NOUN"], 1);

        let all = pos_corpus(&[("Bagdad", "X"), ("xewqa", "X"), ("hares", "X")]);
        assert_eq!(distill_report(&p, &all).unwrap().change_rate, 1.0);
    }

    #[test]
    fn token_mismatch_is_rejected() {
        let p = pos_corpus(&[("xewqa", "AUX"), ("hares", "VERB")]);
        let t = pos_corpus(&[("xewqa", "AUX"), ("Hares", "VERB")]);
        let err = apply_teacher_labels(&p, &t).unwrap_err();
        assert!(err.is_validation());
        assert!(err.to_string().contains("token 2"), "{err}");
    }

    #[test]
    fn sentence_count_mismatch_is_rejected() {
        let p = pos_corpus(&[("a", "X")]);
        let mut t = p.clone();
        t.sentences.push(t.sentences[0].clone());
        assert!(apply_teacher_labels(&p, &t).is_err());
    }

    #[test]
    fn reapplying_own_output_is_idempotent() {
        let p = pos_corpus(&[("xewqa", "AUX"), ("hares", "VERB")]);
        let t = pos_corpus(&[("xewqa", "NOUN"), ("hares", "NOUN")]);
        let (once, _) = apply_teacher_labels(&p, &t).unwrap();
        let (twice, report) = apply_teacher_labels(&once, &once).unwrap();
        assert_eq!(once, twice);
        assert_eq!(report.changed, 0);
    }

    #[test]
    fn dep_replaces_heads_and_relations() {
        let layout = ColumnLayout::default_for(LabeledFormat::Conllu, Schema::Dep);
        let mk = |heads: Vec<usize>, rels: [&str; 2]| {
            let mut c = LabeledCorpus::new(Schema::Dep, layout);
            c.sentences.push(LabeledSentence::new(
                vec!["a".into(), "b".into()],
                Labels::Dep {
                    heads,
                    deprels: rels.iter().map(|s| s.to_string()).collect(),
                },
            ));
            c
        };
        let p = mk(vec![2, 0], ["nsubj", "root"]);
        let t = mk(vec![0, 1], ["root", "obj"]);
        let (out, report) = apply_teacher_labels(&p, &t).unwrap();
        assert_eq!(out.sentences[0].labels, t.sentences[0].labels);
        assert_eq!(report.changed, 2);
        assert_eq!(report.per_label_confusion["2:nsubj"]["0:root"], 1);
    }
}

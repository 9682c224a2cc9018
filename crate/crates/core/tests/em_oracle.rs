mod support;

use lexaug::align::{train_model1, AlignerConfig, Model1Trainer};
use lexaug::corpus::{ParallelCorpus, TokenizedSentence};
use lexaug::Execution;
use support::{as_string_pairs, dense_model1, random_corpus, rng, NULL};

fn toy() -> ParallelCorpus {
    let pair = |s: &str, t: &str| (TokenizedSentence::from_line(s), TokenizedSentence::from_line(t));
    ParallelCorpus::new(vec![
        pair("the house", "das haus"),
        pair("the book", "das buch"),
        pair("a house", "ein haus"),
    ])
}

fn cfg(iterations: usize, execution: Execution) -> AlignerConfig {
    AlignerConfig {
        iterations,
        execution,
        ..Default::default()
    }
}

// Values produced by an independent dense EM run over the toy corpus.
#[test]
fn toy_corpus_frozen_values() {
    let t = train_model1(&toy(), &cfg(10, Execution::Sequential)).unwrap();
    let close = |a: f64, b: f64| (a - b).abs() < 1e-12;
    assert!(close(t.prob("house", "haus"), 0.976907730908029));
    assert!(close(t.prob("the", "das"), 0.976907730908029));
    assert!(close(t.null_prob("haus"), 0.4892180633901577));
    assert!(close(t.prob("book", "buch"), 0.9745147249372088));
    assert!(close(t.log_likelihoods[0], -6.445525655293771));
    assert!(close(t.log_likelihoods[9], -5.0288736162793795));
}

#[test]
fn matches_dense_reference_on_random_corpora() {
    let mut r = rng(2024);
    for case in 0..40 {
        let corpus = random_corpus(&mut r, 5, 10);
        let iterations = 1 + case % 5;
        let table = train_model1(&corpus, &cfg(iterations, Execution::Parallel)).unwrap();
        let (dense, lls) = dense_model1(&as_string_pairs(&corpus), iterations);
        for ((e, f), p) in &dense {
            let got = if e == NULL { table.null_prob(f) } else { table.prob(e, f) };
            assert!((got - p).abs() <= 1e-8, "case {case}: t({f}|{e}) = {got}, reference {p}");
        }
        for (a, b) in table.log_likelihoods.iter().zip(&lls) {
            assert!((a - b).abs() <= 1e-8);
        }
    }
}

#[test]
fn normalization_and_monotonicity_every_iteration() {
    let mut r = rng(99);
    for _ in 0..50 {
        let corpus = random_corpus(&mut r, 8, 12);
        let mut trainer = Model1Trainer::new(&corpus, true, Execution::Sequential).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for _ in 0..8 {
            let ll = trainer.step();
            assert!(ll >= prev - 1e-10, "{ll} < {prev}");
            assert!(trainer.table().max_normalization_error() <= 1e-9);
            assert!(trainer.table().probabilities().iter().all(|p| (0.0..=1.0).contains(p)));
            prev = ll;
        }
        let table = trainer.finish();
        assert!(table.final_log_likelihood >= prev - 1e-10);
    }
}

#[test]
fn thread_count_does_not_change_the_table() {
    let corpus = support::synthetic_verses(5, 800, 400);
    let seq = train_model1(&corpus, &cfg(4, Execution::Sequential)).unwrap();
    let par = train_model1(&corpus, &cfg(4, Execution::Parallel)).unwrap();
    assert_eq!(seq.probabilities(), par.probabilities());
    assert_eq!(seq.log_likelihoods, par.log_likelihoods);
}

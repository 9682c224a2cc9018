//! Corpus assembly: upsampling, concatenation with optional shuffling, and
//! joint gold + pseudo labeled sets.

use rand::seq::{index, SliceRandom};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{LabeledCorpus, TokenizedCorpus};
use crate::error::{Error, Result};

/// Repeats `items` to exactly `target_size` elements: as many full copies
/// as fit, then a seeded sample without replacement of the remainder,
/// kept in original relative order.
pub fn upsample<T: Clone>(items: &[T], target_size: usize, seed: u64) -> Result<Vec<T>> {
    if items.is_empty() {
        return Err(Error::validation("cannot upsample an empty corpus"));
    }
    if target_size == 0 {
        return Err(Error::validation("target size must be at least 1"));
    }
    let copies = target_size / items.len();
    let remainder = target_size - copies * items.len();
    let mut out = Vec::with_capacity(target_size);
    for _ in 0..copies {
        out.extend_from_slice(items);
    }
    if remainder > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut picked = index::sample(&mut rng, items.len(), remainder).into_vec();
        picked.sort_unstable();
        out.extend(picked.into_iter().map(|i| items[i].clone()));
    }
    Ok(out)
}

pub fn upsample_to_match(
    gold: &TokenizedCorpus,
    target_size: usize,
    seed: u64,
) -> Result<TokenizedCorpus> {
    upsample(&gold.sentences, target_size, seed).map(TokenizedCorpus::new)
}

/// Concatenates in argument order, then applies a seeded uniform
/// permutation when `shuffle` is set.
pub fn concat_shuffle(corpora: &[TokenizedCorpus], seed: u64, shuffle: bool) -> TokenizedCorpus {
    let mut sentences: Vec<_> = corpora
        .iter()
        .flat_map(|c| c.sentences.iter().cloned())
        .collect();
    if shuffle {
        sentences.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    TokenizedCorpus::new(sentences)
}

/// Gold sentences followed by pseudo sentences, unshuffled.
pub fn build_joint_labeled(gold: &LabeledCorpus, pseudo: &LabeledCorpus) -> Result<LabeledCorpus> {
    if gold.schema != pseudo.schema {
        return Err(Error::validation(format!(
            "cannot join {} gold data with {} pseudo data",
            gold.schema, pseudo.schema
        )));
    }
    if gold.layout != pseudo.layout && !pseudo.is_empty() {
        return Err(Error::validation(
            "gold and pseudo labeled files use different column layouts",
        ));
    }
    gold.validate()?;
    pseudo.validate()?;
    let mut out = gold.clone();
    out.sentences.extend(pseudo.sentences.iter().cloned());
    Ok(out)
}

//! Deterministic stratified train/test splitting.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{LearnError, SplitSpec};

/// Split row indices into (train, test). The total train size is
/// round(ratio * n); per-class counts follow the largest-remainder rule so
/// class proportions are preserved to rounding. Membership is decided by a
/// seeded shuffle; the returned index lists are ascending.
pub fn stratified_split_indices(
    labels: &[String],
    spec: &SplitSpec,
) -> Result<(Vec<usize>, Vec<usize>), LearnError> {
    assert!(
        spec.train_ratio > 0.0 && spec.train_ratio < 1.0,
        "train_ratio must be in (0, 1)"
    );
    let n = labels.len();
    let total_train = ((spec.train_ratio * n as f64).round() as usize).clamp(1, n.saturating_sub(1));
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    if !spec.stratified {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut rng);
        let mut train: Vec<usize> = idx[..total_train].to_vec();
        let mut test: Vec<usize> = idx[total_train..].to_vec();
        train.sort_unstable();
        test.sort_unstable();
        return Ok((train, test));
    }

    // Class -> member indices, in sorted label order for determinism.
    let mut classes: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, label) in labels.iter().enumerate() {
        classes.entry(label.as_str()).or_default().push(i);
    }
    for (label, members) in &classes {
        if members.len() < 2 {
            return Err(LearnError::ClassTooSmall(label.to_string()));
        }
    }

    // Largest-remainder allocation of train slots.
    struct Alloc<'a> {
        label: &'a str,
        size: usize,
        base: usize,
        remainder: f64,
        extra: usize,
    }
    let mut allocs: Vec<Alloc> = classes
        .iter()
        .map(|(label, members)| {
            let exact = spec.train_ratio * members.len() as f64;
            Alloc {
                label,
                size: members.len(),
                base: exact.floor() as usize,
                remainder: exact - exact.floor(),
                extra: 0,
            }
        })
        .collect();
    let mut remaining = total_train - allocs.iter().map(|a| a.base).sum::<usize>();

    // Hand out extras by remainder (descending), ties by class order; prefer
    // classes that still keep at least one test sample.
    let mut order: Vec<usize> = (0..allocs.len()).collect();
    order.sort_by(|&a, &b| {
        allocs[b]
            .remainder
            .partial_cmp(&allocs[a].remainder)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    while remaining > 0 {
        let mut gave = false;
        for &i in &order {
            if remaining == 0 {
                break;
            }
            let a = &mut allocs[i];
            if a.base + a.extra < a.size.saturating_sub(1) {
                a.extra += 1;
                remaining -= 1;
                gave = true;
            }
        }
        if !gave {
            // All classes are at size-1 train; spill into full classes.
            for &i in &order {
                if remaining == 0 {
                    break;
                }
                let a = &mut allocs[i];
                if a.base + a.extra < a.size {
                    a.extra += 1;
                    remaining -= 1;
                }
            }
            break;
        }
    }

    let mut train = Vec::with_capacity(total_train);
    let mut test = Vec::with_capacity(n - total_train);
    for alloc in &allocs {
        let mut members = classes[alloc.label].clone();
        members.shuffle(&mut rng);
        let take = (alloc.base + alloc.extra).min(members.len());
        train.extend_from_slice(&members[..take]);
        test.extend_from_slice(&members[take..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

/// Split document ids into (train ids, test ids); disjoint and covering.
pub fn stratified_split(
    ids: &[String],
    labels: &[String],
    spec: &SplitSpec,
) -> Result<(Vec<String>, Vec<String>), LearnError> {
    if ids.len() != labels.len() {
        return Err(LearnError::InputMismatch(ids.len(), labels.len()));
    }
    let (train, test) = stratified_split_indices(labels, spec)?;
    Ok((
        train.into_iter().map(|i| ids[i].clone()).collect(),
        test.into_iter().map(|i| ids[i].clone()).collect(),
    ))
}

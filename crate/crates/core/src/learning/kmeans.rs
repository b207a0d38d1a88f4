//! Seeded k-means with k-means++ initialization and Lloyd iterations.

use ndarray::Array2;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ClusterResult, LearnError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KMeansConfig {
    pub restarts: usize,
    pub max_iter: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        KMeansConfig {
            restarts: 10,
            max_iter: 300,
            tol: 1e-6,
            seed: 0,
        }
    }
}

fn derive_seed(seed: u64, idx: u64) -> u64 {
    let mut z = seed ^ idx.wrapping_mul(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn sq_dist<S: Scalar>(a: &[S], b: &[S]) -> S {
    let mut acc = S::zero();
    for (&x, &y) in a.iter().zip(b) {
        let d = x - y;
        acc += d * d;
    }
    acc
}

struct Run<S> {
    assignments: Vec<usize>,
    inertia: S,
}

fn lloyd<S: Scalar>(
    rows: &[&[S]],
    k: usize,
    max_iter: usize,
    tol: S,
    rng: &mut ChaCha8Rng,
) -> Run<S> {
    let n = rows.len();
    let dim = rows[0].len();

    // k-means++ seeding
    let mut centroids: Vec<Vec<S>> = Vec::with_capacity(k);
    centroids.push(rows[rng.gen_range(0..n)].to_vec());
    let mut dists: Vec<S> = rows
        .iter()
        .map(|r| sq_dist(r, &centroids[0]))
        .collect();
    while centroids.len() < k {
        let total: S = dists.iter().copied().sum();
        let next = if total > S::zero() {
            let target = S::from_f64_lossy(rng.gen::<f64>()) * total;
            let mut acc = S::zero();
            let mut chosen = n - 1;
            for (i, &d) in dists.iter().enumerate() {
                acc += d;
                if acc > target {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            rng.gen_range(0..n)
        };
        centroids.push(rows[next].to_vec());
        for (i, row) in rows.iter().enumerate() {
            let d = sq_dist(row, centroids.last().unwrap());
            if d < dists[i] {
                dists[i] = d;
            }
        }
    }

    let mut assignments = vec![0usize; n];
    for _iter in 0..max_iter {
        // assignment step: nearest centroid, ties to the lowest index
        for (i, row) in rows.iter().enumerate() {
            let mut best = 0usize;
            let mut best_d = sq_dist(row, &centroids[0]);
            for (c, centroid) in centroids.iter().enumerate().skip(1) {
                let d = sq_dist(row, centroid);
                if d < best_d {
                    best_d = d;
                    best = c;
                }
            }
            assignments[i] = best;
        }

        // update step
        let mut sums = vec![vec![S::zero(); dim]; k];
        let mut counts = vec![0usize; k];
        for (i, row) in rows.iter().enumerate() {
            counts[assignments[i]] += 1;
            for (s, &v) in sums[assignments[i]].iter_mut().zip(*row) {
                *s += v;
            }
        }
        // empty cluster: steal the point farthest from its centroid
        for c in 0..k {
            if counts[c] == 0 {
                let far = (0..n)
                    .max_by(|&a, &b| {
                        let da = sq_dist(rows[a], &centroids[assignments[a]]);
                        let db = sq_dist(rows[b], &centroids[assignments[b]]);
                        da.partial_cmp(&db)
                            .unwrap_or(std::cmp::Ordering::Equal)
                            .then(b.cmp(&a)) // prefer the lower index on ties
                    })
                    .expect("n >= 1");
                sums[c] = rows[far].to_vec();
                counts[c] = 1;
            }
        }

        let mut shift = S::zero();
        for c in 0..k {
            let count = S::from_usize_lossy(counts[c]);
            let new_c: Vec<S> = sums[c].iter().map(|&s| s / count).collect();
            shift = shift.max(sq_dist(&new_c, &centroids[c]));
            centroids[c] = new_c;
        }
        if shift.sqrt() < tol {
            break;
        }
    }

    // Final assignment pass so the result is a fixed point of the centroids.
    let mut inertia = S::zero();
    for (i, row) in rows.iter().enumerate() {
        let mut best = 0usize;
        let mut best_d = sq_dist(row, &centroids[0]);
        for (c, centroid) in centroids.iter().enumerate().skip(1) {
            let d = sq_dist(row, centroid);
            if d < best_d {
                best_d = d;
                best = c;
            }
        }
        assignments[i] = best;
        inertia += best_d;
    }
    Run {
        assignments,
        inertia,
    }
}

/// k-means clustering: best inertia over `restarts` seeded runs (ties keep
/// the lowest restart index).
pub fn kmeans<S: Scalar>(
    x: &Array2<S>,
    k: usize,
    config: &KMeansConfig,
) -> Result<ClusterResult<S>, LearnError> {
    let n = x.nrows();
    if k == 0 || k > n {
        return Err(LearnError::TooFewSamples { k, n });
    }
    let rows: Vec<&[S]> = x
        .rows()
        .into_iter()
        .map(|r| r.to_slice().expect("contiguous rows"))
        .collect();
    let tol = S::from_f64_lossy(config.tol);

    let mut best: Option<Run<S>> = None;
    for restart in 0..config.restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, restart as u64));
        let run = lloyd(&rows, k, config.max_iter, tol, &mut rng);
        let better = match &best {
            None => true,
            Some(b) => run.inertia < b.inertia,
        };
        if better {
            best = Some(run);
        }
    }
    let best = best.expect("at least one restart");
    Ok(ClusterResult {
        assignments: best.assignments,
        k,
        inertia: Some(best.inertia),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::arr2;

    #[test]
    fn two_distant_clouds_are_split_exactly() {
        let x = arr2(&[
            [0.0, 0.1],
            [0.2, -0.1],
            [0.1, 0.0],
            [100.0, 99.9],
            [100.2, 100.1],
            [99.9, 100.0],
        ]);
        let r = kmeans(&x, 2, &KMeansConfig::default()).unwrap();
        assert_eq!(r.assignments[0], r.assignments[1]);
        assert_eq!(r.assignments[1], r.assignments[2]);
        assert_eq!(r.assignments[3], r.assignments[4]);
        assert_eq!(r.assignments[4], r.assignments[5]);
        assert_ne!(r.assignments[0], r.assignments[3]);
    }

    #[test]
    fn k1_gives_mean_and_total_deviation() {
        let x = arr2(&[[0.0f64, 0.0], [2.0, 0.0], [0.0, 2.0], [2.0, 2.0]]);
        let r = kmeans(&x, 1, &KMeansConfig::default()).unwrap();
        assert!(r.assignments.iter().all(|&a| a == 0));
        // centroid (1,1); every point at squared distance 2
        assert!((r.inertia.unwrap() - 8.0).abs() < 1e-12);
    }

    /// Inertia of a fixed 2-partition with centroid means.
    fn partition_inertia(points: &[[f64; 2]], in_first: &[bool]) -> f64 {
        let mut total = 0.0;
        for side in [true, false] {
            let members: Vec<&[f64; 2]> = points
                .iter()
                .zip(in_first)
                .filter(|&(_, &f)| f == side)
                .map(|(p, _)| p)
                .collect();
            if members.is_empty() {
                continue;
            }
            let mut c = [0.0f64; 2];
            for p in &members {
                c[0] += p[0];
                c[1] += p[1];
            }
            c[0] /= members.len() as f64;
            c[1] /= members.len() as f64;
            for p in &members {
                total += (p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2);
            }
        }
        total
    }

    #[test]
    fn rectangle_pairs_match_brute_force() {
        let points = [[0.0f64, 0.0], [0.0, 2.0], [10.0, 0.0], [10.0, 2.0]];
        // brute force over all non-trivial 2-partitions of the 4 points
        let mut best = f64::INFINITY;
        let mut best_mask = 0usize;
        for mask in 1..(1 << 4) - 1 {
            let in_first: Vec<bool> = (0..4).map(|i| mask & (1 << i) != 0).collect();
            let inertia = partition_inertia(&points, &in_first);
            if inertia < best {
                best = inertia;
                best_mask = mask;
            }
        }
        assert!((best - 4.0).abs() < 1e-12);
        assert!(best_mask == 0b0011 || best_mask == 0b1100, "left/right split");

        let x = arr2(&points);
        let r = kmeans(&x, 2, &KMeansConfig::default()).unwrap();
        assert_eq!(r.assignments[0], r.assignments[1]);
        assert_eq!(r.assignments[2], r.assignments[3]);
        assert_ne!(r.assignments[0], r.assignments[2]);
        assert!((r.inertia.unwrap() - best).abs() < 1e-12);
    }

    #[test]
    fn inertia_non_increasing_in_iteration_budget() {
        // same seed and single restart: a larger max_iter only extends the
        // same deterministic Lloyd trajectory
        let x = arr2(&[
            [0.1f64, 0.4],
            [1.3, 2.0],
            [0.9, 0.2],
            [7.5, 8.1],
            [8.2, 7.7],
            [3.9, 4.4],
            [4.1, 3.6],
            [7.9, 8.6],
        ]);
        let mut previous = f64::INFINITY;
        for max_iter in 1..=12 {
            let cfg = KMeansConfig {
                restarts: 1,
                max_iter,
                tol: 0.0,
                seed: 9,
            };
            let inertia = kmeans(&x, 3, &cfg).unwrap().inertia.unwrap();
            assert!(
                inertia <= previous + 1e-12,
                "inertia rose from {previous} to {inertia} at max_iter={max_iter}"
            );
            previous = inertia;
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let x = arr2(&[
            [1.0, 2.0],
            [1.5, 1.8],
            [5.0, 8.0],
            [8.0, 8.0],
            [1.0, 0.6],
            [9.0, 11.0],
        ]);
        let cfg = KMeansConfig {
            seed: 31,
            ..KMeansConfig::default()
        };
        let a = kmeans(&x, 2, &cfg).unwrap();
        let b = kmeans(&x, 2, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn k_larger_than_n_is_rejected() {
        let x = arr2(&[[0.0], [1.0]]);
        assert!(matches!(
            kmeans(&x, 3, &KMeansConfig::default()),
            Err(LearnError::TooFewSamples { k: 3, n: 2 })
        ));
    }

    #[test]
    fn result_is_a_fixed_point() {
        let x = arr2(&[
            [0.0, 0.0],
            [1.0, 1.0],
            [0.5, 0.0],
            [10.0, 10.0],
            [11.0, 10.5],
            [10.5, 9.5],
        ]);
        let r = kmeans(&x, 2, &KMeansConfig::default()).unwrap();
        // recompute centroids and check each point sits with its nearest
        let mut cents = vec![vec![0.0f64; 2]; 2];
        let mut counts = vec![0usize; 2];
        for (i, row) in x.rows().into_iter().enumerate() {
            counts[r.assignments[i]] += 1;
            for (j, &v) in row.iter().enumerate() {
                cents[r.assignments[i]][j] += v;
            }
        }
        for c in 0..2 {
            for v in &mut cents[c] {
                *v /= counts[c] as f64;
            }
        }
        for (i, row) in x.rows().into_iter().enumerate() {
            let d0 = sq_dist(row.to_slice().unwrap(), &cents[0]);
            let d1 = sq_dist(row.to_slice().unwrap(), &cents[1]);
            let nearest = if d0 <= d1 { 0 } else { 1 };
            assert_eq!(r.assignments[i], nearest);
        }
    }
}

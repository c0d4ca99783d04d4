//! Lloyd's k-means with k-means++ seeding.
//!
//! Small, deterministic, and tuned for the many tiny per-hyperedge
//! clustering problems the coarsening pipeline produces (a few dozen
//! points, a handful of clusters) — not for bulk vector quantization.

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const MAX_ITERS: usize = 100;
const REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct KmeansResult {
    /// Cluster id in `0..c` per point.
    pub labels: Vec<u32>,
    pub centroids: Vec<Vec<f64>>,
    /// Final sum of squared distances to assigned centroids.
    pub inertia: f64,
    /// Inertia after each Lloyd iteration (non-increasing).
    pub inertia_trace: Vec<f64>,
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// k-means++: first center uniform, the rest sampled proportional to the
/// squared distance from the nearest chosen center. Falls back to uniform
/// sampling when every candidate distance is zero (duplicate points).
fn seed_centers(points: &[Vec<f64>], c: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut centers = Vec::with_capacity(c);
    centers.push(points[rng.gen_range(0..points.len())].clone());
    let mut d2: Vec<f64> = points.iter().map(|p| dist2(p, &centers[0])).collect();
    while centers.len() < c {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            WeightedIndex::new(&d2)
                .expect("positive total weight")
                .sample(rng)
        } else {
            rng.gen_range(0..points.len())
        };
        centers.push(points[next].clone());
        for (dist, p) in d2.iter_mut().zip(points) {
            *dist = dist.min(dist2(p, centers.last().unwrap()));
        }
    }
    centers
}

fn nearest(point: &[f64], centers: &[Vec<f64>]) -> u32 {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, center) in centers.iter().enumerate() {
        let d = dist2(point, center);
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    best as u32
}

/// Move one point into each empty cluster: the point farthest from its
/// centroid inside the currently largest cluster (ties toward lower ids).
fn repair_empty(labels: &mut [u32], points: &[Vec<f64>], centers: &[Vec<f64>], c: usize) {
    let mut sizes = vec![0usize; c];
    for &l in labels.iter() {
        sizes[l as usize] += 1;
    }
    for empty in 0..c {
        if sizes[empty] > 0 {
            continue;
        }
        let donor = (0..c)
            .max_by(|&a, &b| sizes[a].cmp(&sizes[b]).then(b.cmp(&a)))
            .unwrap();
        let victim = labels
            .iter()
            .enumerate()
            .filter(|&(_, &l)| l as usize == donor)
            .max_by(|&(i, _), &(j, _)| {
                dist2(&points[i], &centers[donor])
                    .partial_cmp(&dist2(&points[j], &centers[donor]))
                    .unwrap()
                    .then(j.cmp(&i))
            })
            .map(|(i, _)| i)
            .expect("donor cluster is non-empty");
        labels[victim] = empty as u32;
        sizes[donor] -= 1;
        sizes[empty] += 1;
    }
}

/// Cluster `points` into `c` groups; deterministic for a given seed.
pub fn kmeans(points: &[Vec<f64>], c: usize, seed: u64) -> Result<KmeansResult> {
    if c == 0 {
        return Err(Error::param("c", "cluster count must be at least 1"));
    }
    if c > points.len() {
        return Err(Error::param(
            "c",
            format!("cluster count {c} exceeds point count {}", points.len()),
        ));
    }
    let dim = points[0].len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers = seed_centers(points, c, &mut rng);
    let mut labels = vec![0u32; points.len()];
    let mut inertia_trace = Vec::new();
    let mut prev_inertia = f64::INFINITY;

    for _ in 0..MAX_ITERS {
        for (label, point) in labels.iter_mut().zip(points) {
            *label = nearest(point, &centers);
        }
        repair_empty(&mut labels, points, &centers, c);

        let mut sums = vec![vec![0.0; dim]; c];
        let mut counts = vec![0usize; c];
        for (&label, point) in labels.iter().zip(points) {
            counts[label as usize] += 1;
            for (s, &x) in sums[label as usize].iter_mut().zip(point) {
                *s += x;
            }
        }
        for (center, (sum, count)) in centers.iter_mut().zip(sums.iter().zip(&counts)) {
            for (c_coord, &s) in center.iter_mut().zip(sum) {
                *c_coord = s / *count as f64;
            }
        }

        let inertia: f64 = labels
            .iter()
            .zip(points)
            .map(|(&l, p)| dist2(p, &centers[l as usize]))
            .sum();
        inertia_trace.push(inertia);
        if prev_inertia.is_finite() {
            let scale = prev_inertia.abs().max(f64::MIN_POSITIVE);
            if (prev_inertia - inertia).abs() <= REL_TOL * scale {
                break;
            }
        }
        prev_inertia = inertia;
    }

    let inertia = *inertia_trace.last().unwrap();
    Ok(KmeansResult {
        labels,
        centroids: centers,
        inertia,
        inertia_trace,
    })
}

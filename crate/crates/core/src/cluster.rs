//! Lloyd's k-means over `(length, sentiment)` points and the centroid
//! summary table.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::SplitMix64;
use crate::scoring::ScoredTweet;

pub const DEFAULT_K: usize = 2;
pub const DEFAULT_SEED: u64 = 10;
pub const DEFAULT_MAX_ITER: usize = 500;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClusterError {
    #[error("at least one centroid is required")]
    NoCentroids,
    #[error("k must be at least 1")]
    ZeroK,
    #[error("k = {k} exceeds the number of points ({n})")]
    TooFewPoints { k: usize, n: usize },
    #[error("point {0} has a non-finite coordinate")]
    NonFinite(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub length: f64,
    pub sentiment: f64,
}

impl Point2 {
    pub fn new(length: f64, sentiment: f64) -> Self {
        Self { length, sentiment }
    }

    pub fn dist2(&self, other: &Point2) -> f64 {
        let dl = self.length - other.length;
        let ds = self.sentiment - other.sentiment;
        dl * dl + ds * ds
    }
}

impl From<&ScoredTweet> for Point2 {
    fn from(r: &ScoredTweet) -> Self {
        Point2::new(r.length as f64, r.sentiment)
    }
}

/// Attribute-wise mean, summed in input order.
pub fn mean_point(points: &[Point2]) -> Point2 {
    let n = points.len() as f64;
    let (l, s) = points.iter().fold((0.0, 0.0), |(l, s), p| (l + p.length, s + p.sentiment));
    Point2::new(l / n, s / n)
}

/// Index of the nearest centroid; ties go to the lowest index.
pub fn assign(p: &Point2, centroids: &[Point2]) -> Result<usize, ClusterError> {
    if centroids.is_empty() {
        return Err(ClusterError::NoCentroids);
    }
    Ok(nearest(p, centroids).0)
}

fn nearest(p: &Point2, centroids: &[Point2]) -> (usize, f64) {
    let mut best = (0, p.dist2(&centroids[0]));
    for (i, c) in centroids.iter().enumerate().skip(1) {
        let d = p.dist2(c);
        if d < best.1 {
            best = (i, d);
        }
    }
    best
}

pub fn sse(points: &[Point2], assignments: &[usize], centroids: &[Point2]) -> f64 {
    points
        .iter()
        .zip(assignments)
        .fold(0.0, |acc, (p, &a)| acc + p.dist2(&centroids[a]))
}

/// Per-attribute min-max scaling onto [0, 1]. A constant attribute maps to 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinMaxScaling {
    pub min: Point2,
    pub max: Point2,
}

impl MinMaxScaling {
    pub fn fit(points: &[Point2]) -> Self {
        let mut min = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            min.length = min.length.min(p.length);
            min.sentiment = min.sentiment.min(p.sentiment);
            max.length = max.length.max(p.length);
            max.sentiment = max.sentiment.max(p.sentiment);
        }
        Self { min, max }
    }

    fn scale1(v: f64, lo: f64, hi: f64) -> f64 {
        if hi > lo {
            (v - lo) / (hi - lo)
        } else {
            0.0
        }
    }

    pub fn scale(&self, p: &Point2) -> Point2 {
        Point2::new(
            Self::scale1(p.length, self.min.length, self.max.length),
            Self::scale1(p.sentiment, self.min.sentiment, self.max.sentiment),
        )
    }

    pub fn unscale(&self, p: &Point2) -> Point2 {
        Point2::new(
            self.min.length + p.length * (self.max.length - self.min.length),
            self.min.sentiment + p.sentiment * (self.max.sentiment - self.min.sentiment),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KMeansConfig {
    pub k: usize,
    pub seed: u64,
    pub max_iter: usize,
    pub normalize: bool,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        Self { k: DEFAULT_K, seed: DEFAULT_SEED, max_iter: DEFAULT_MAX_ITER, normalize: false }
    }
}

/// A fitted clustering. Only the summary fields are written to model files;
/// per-point assignments and the SSE trace live in memory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterModel {
    pub k: usize,
    pub centroids: Vec<Point2>,
    pub sizes: Vec<usize>,
    pub sse: f64,
    pub iterations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub full_data_mean: Option<Point2>,
    /// Present when the model was fitted on min-max scaled features.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaling: Option<MinMaxScaling>,
    #[serde(skip)]
    pub assignments: Vec<usize>,
    /// SSE after every assignment step, in the space the fit ran in.
    #[serde(skip)]
    pub sse_trace: Vec<f64>,
    #[serde(skip)]
    pub converged: bool,
}

impl ClusterModel {
    /// Nearest-centroid assignment in the space the model was fitted in.
    pub fn assign_points(&self, points: &[Point2]) -> Vec<usize> {
        match &self.scaling {
            None => points.iter().map(|p| nearest(p, &self.centroids).0).collect(),
            Some(s) => {
                let centroids: Vec<Point2> = self.centroids.iter().map(|c| s.scale(c)).collect();
                points.iter().map(|p| nearest(&s.scale(p), &centroids).0).collect()
            }
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        let model: ClusterModel = serde_json::from_str(text)?;
        if model.centroids.len() != model.k || model.sizes.len() != model.k || model.k == 0 {
            return Err(serde::de::Error::custom("k, centroids and sizes disagree"));
        }
        Ok(model)
    }
}

struct LloydRun {
    centroids: Vec<Point2>,
    assignments: Vec<usize>,
    iterations: usize,
    sse_trace: Vec<f64>,
    converged: bool,
}

fn assign_all(points: &[Point2], centroids: &[Point2]) -> Vec<usize> {
    points.iter().map(|p| nearest(p, centroids).0).collect()
}

fn recompute_means(points: &[Point2], assignments: &[usize], centroids: &mut [Point2]) {
    let k = centroids.len();
    let mut sums = vec![(0.0, 0.0, 0usize); k];
    for (p, &a) in points.iter().zip(assignments) {
        let slot = &mut sums[a];
        slot.0 += p.length;
        slot.1 += p.sentiment;
        slot.2 += 1;
    }
    for (c, (l, s, n)) in centroids.iter_mut().zip(sums) {
        if n > 0 {
            *c = Point2::new(l / n as f64, s / n as f64);
        }
    }
}

// Every empty cluster takes over the point farthest from its current
// centroid, drawn from clusters that can spare one.
fn repair_empty_clusters(points: &[Point2], assignments: &mut [usize], centroids: &mut [Point2]) {
    let mut counts = vec![0usize; centroids.len()];
    for &a in assignments.iter() {
        counts[a] += 1;
    }
    for empty in 0..centroids.len() {
        if counts[empty] > 0 {
            continue;
        }
        let mut best: Option<(usize, f64)> = None;
        for (i, p) in points.iter().enumerate() {
            let a = assignments[i];
            if counts[a] < 2 {
                continue;
            }
            let d = p.dist2(&centroids[a]);
            if best.is_none_or(|(_, bd)| d > bd) {
                best = Some((i, d));
            }
        }
        let (i, _) = best.expect("k <= n leaves a cluster with two or more points");
        counts[assignments[i]] -= 1;
        counts[empty] += 1;
        assignments[i] = empty;
        centroids[empty] = points[i];
    }
}

fn lloyd(points: &[Point2], mut centroids: Vec<Point2>, max_iter: usize) -> LloydRun {
    let mut assignments = assign_all(points, &centroids);
    let mut sse_trace = vec![sse(points, &assignments, &centroids)];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        repair_empty_clusters(points, &mut assignments, &mut centroids);
        recompute_means(points, &assignments, &mut centroids);
        let next = assign_all(points, &centroids);
        sse_trace.push(sse(points, &next, &centroids));
        if next == assignments {
            converged = true;
            break;
        }
        assignments = next;
    }
    LloydRun { centroids, assignments, iterations, sse_trace, converged }
}

fn validate(points: &[Point2], k: usize) -> Result<(), ClusterError> {
    if k == 0 {
        return Err(ClusterError::ZeroK);
    }
    if k > points.len() {
        return Err(ClusterError::TooFewPoints { k, n: points.len() });
    }
    if let Some(i) = points.iter().position(|p| !p.length.is_finite() || !p.sentiment.is_finite()) {
        return Err(ClusterError::NonFinite(i));
    }
    Ok(())
}

/// `k` distinct point indices drawn with the seeded generator, rejecting repeats.
pub fn initial_indices(n: usize, k: usize, seed: u64) -> Vec<usize> {
    let mut rng = SplitMix64::new(seed);
    let mut chosen = Vec::with_capacity(k);
    let mut taken = vec![false; n];
    while chosen.len() < k {
        let i = rng.below(n);
        if !taken[i] {
            taken[i] = true;
            chosen.push(i);
        }
    }
    chosen
}

fn finish(points: &[Point2], run: LloydRun, scaling: Option<MinMaxScaling>) -> ClusterModel {
    let centroids: Vec<Point2> = match &scaling {
        Some(s) => run.centroids.iter().map(|c| s.unscale(c)).collect(),
        None => run.centroids,
    };
    let mut sizes = vec![0; centroids.len()];
    for &a in &run.assignments {
        sizes[a] += 1;
    }
    ClusterModel {
        k: centroids.len(),
        sse: sse(points, &run.assignments, &centroids),
        centroids,
        sizes,
        iterations: run.iterations,
        full_data_mean: Some(mean_point(points)),
        scaling,
        assignments: run.assignments,
        sse_trace: run.sse_trace,
        converged: run.converged,
    }
}

pub fn kmeans(points: &[Point2], cfg: &KMeansConfig) -> Result<ClusterModel, ClusterError> {
    validate(points, cfg.k)?;
    let scaling = cfg.normalize.then(|| MinMaxScaling::fit(points));
    let working: Vec<Point2> = match &scaling {
        Some(s) => points.iter().map(|p| s.scale(p)).collect(),
        None => points.to_vec(),
    };
    let init = initial_indices(points.len(), cfg.k, cfg.seed)
        .into_iter()
        .map(|i| working[i])
        .collect();
    let run = lloyd(&working, init, cfg.max_iter);
    Ok(finish(points, run, scaling))
}

/// Lloyd iterations from caller-supplied starting centroids, on raw features.
pub fn kmeans_from_centroids(
    points: &[Point2],
    init: Vec<Point2>,
    max_iter: usize,
) -> Result<ClusterModel, ClusterError> {
    if init.is_empty() {
        return Err(ClusterError::NoCentroids);
    }
    validate(points, init.len())?;
    Ok(finish(points, lloyd(points, init, max_iter), None))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterSummary {
    pub centroid: Point2,
    pub size: usize,
    pub percentage: f64,
}

/// The full-data mean next to each cluster's centroid, size and share.
#[derive(Debug, Clone, PartialEq)]
pub struct CentroidSummary {
    pub instances: usize,
    pub full_data_mean: Point2,
    pub clusters: Vec<ClusterSummary>,
}

fn cluster_rows(model: &ClusterModel) -> (usize, Vec<ClusterSummary>) {
    let total: usize = model.sizes.iter().sum();
    let rows = model
        .centroids
        .iter()
        .zip(&model.sizes)
        .map(|(&centroid, &size)| ClusterSummary {
            centroid,
            size,
            percentage: if total == 0 { 0.0 } else { 100.0 * size as f64 / total as f64 },
        })
        .collect();
    (total, rows)
}

pub fn centroid_summary(model: &ClusterModel, points: &[Point2]) -> CentroidSummary {
    let (instances, clusters) = cluster_rows(model);
    CentroidSummary { instances, full_data_mean: mean_point(points), clusters }
}

impl CentroidSummary {
    /// Summary from a model file alone. Falls back to the size-weighted mean of
    /// the centroids when the file carries no full-data mean.
    pub fn from_model(model: &ClusterModel) -> Self {
        let (instances, clusters) = cluster_rows(model);
        let full_data_mean = model.full_data_mean.unwrap_or_else(|| {
            let n = instances as f64;
            let (l, s) = clusters.iter().fold((0.0, 0.0), |(l, s), c| {
                (l + c.centroid.length * c.size as f64, s + c.centroid.sentiment * c.size as f64)
            });
            Point2::new(l / n, s / n)
        });
        Self { instances, full_data_mean, clusters }
    }

    /// Tab-separated table:
    ///
    /// ```text
    /// Attribute   Full Data   Cluster #0  Cluster #1
    ///             (162)       (92)        (70)
    /// length      73.3148     45.7717     109.5143
    /// sentiment   6.2465      4.7413      8.2247
    ///
    /// Clustered Instances
    /// 0   92 (57%)
    /// 1   70 (43%)
    /// ```
    pub fn render(&self) -> String {
        let mut out = String::from("Attribute\tFull Data");
        for i in 0..self.clusters.len() {
            let _ = write!(out, "\tCluster #{i}");
        }
        let _ = write!(out, "\n\t({})", self.instances);
        for c in &self.clusters {
            let _ = write!(out, "\t({})", c.size);
        }
        type Getter = fn(&Point2) -> f64;
        let attributes: [(&str, Getter); 2] = [("length", |p| p.length), ("sentiment", |p| p.sentiment)];
        for (name, get) in attributes {
            let _ = write!(out, "\n{name}\t{:.4}", get(&self.full_data_mean));
            for c in &self.clusters {
                let _ = write!(out, "\t{:.4}", get(&c.centroid));
            }
        }
        out.push_str("\n\nClustered Instances\n");
        for (i, c) in self.clusters.iter().enumerate() {
            let _ = writeln!(out, "{i}\t{} ({:.0}%)", c.size, c.percentage);
        }
        out
    }
}

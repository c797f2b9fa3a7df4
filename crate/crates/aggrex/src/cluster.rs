//! Clustering pipelines over day elements: k-means (`k`), cluster
//! clustering (`cc`, k-means then DTW/complete-linkage HAC per outer
//! cluster), level correlation clustering (`lc`, fuzzy c-means then
//! correlation HAC) and double k-means (`kk`).
//!
//! All tie-breaks (nearest centroid, merge pair, argmax membership) resolve
//! to the lowest index so every pipeline is deterministic.

use crate::features::{sq_euclidean, FeatureSet, Metric};
use crate::par;

/// A partition of the day indices into clusters. Final clusters from the
/// double pipelines carry the outer cluster id they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    pub n_days: usize,
    pub clusters: Vec<Vec<usize>>,
    pub lineage: Option<Vec<usize>>,
    pub method_tag: String,
}

impl Clustering {
    pub fn k(&self) -> usize {
        self.clusters.len()
    }

    /// Panics unless the clusters are disjoint, complete and nonempty.
    pub fn assert_partition(&self) {
        let mut seen = vec![false; self.n_days];
        for c in &self.clusters {
            assert!(!c.is_empty(), "empty cluster");
            for &d in c {
                assert!(d < self.n_days, "day index {d} out of range");
                assert!(!seen[d], "day {d} in two clusters");
                seen[d] = true;
            }
        }
        assert!(seen.iter().all(|&s| s), "partition incomplete");
        if let Some(lineage) = &self.lineage {
            assert_eq!(lineage.len(), self.clusters.len());
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct KmeansOpts {
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for KmeansOpts {
    fn default() -> Self {
        KmeansOpts {
            max_iter: 100,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FuzzyOpts {
    pub fuzzifier: f64,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for FuzzyOpts {
    fn default() -> Self {
        FuzzyOpts {
            fuzzifier: 2.0,
            max_iter: 100,
            tol: 1e-6,
        }
    }
}

/// Membership degrees, one row per day; rows sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyMembership {
    pub memberships: Vec<Vec<f64>>,
}

impl FuzzyMembership {
    /// Crisp assignment by maximal membership, ties to the lower cluster
    /// index. Empty clusters are dropped.
    pub fn to_crisp(&self, n_clusters: usize) -> Vec<Vec<usize>> {
        let mut clusters: Vec<Vec<usize>> = vec![Vec::new(); n_clusters];
        for (d, row) in self.memberships.iter().enumerate() {
            let mut best = 0;
            for (j, &u) in row.iter().enumerate() {
                if u > row[best] {
                    best = j;
                }
            }
            clusters[best].push(d);
        }
        clusters
    }
}

/// Contiguous initial partition: the simulation period is divided evenly
/// into `k` blocks, the first `n_days mod k` blocks one day longer.
pub fn initial_partition(n_days: usize, k: usize) -> Clustering {
    assert!(k >= 1 && k <= n_days, "k={k} out of range for {n_days} days");
    let base = n_days / k;
    let longer = n_days % k;
    let mut clusters = Vec::with_capacity(k);
    let mut next = 0;
    for c in 0..k {
        let size = base + usize::from(c < longer);
        clusters.push((next..next + size).collect());
        next += size;
    }
    let clustering = Clustering {
        n_days,
        clusters,
        lineage: None,
        method_tag: "init".into(),
    };
    clustering.assert_partition();
    clustering
}

/// Lloyd iterations with squared Euclidean distance from the given initial
/// partition. Empty clusters are repaired by moving in the element farthest
/// from its centroid.
pub fn kmeans(fs: &FeatureSet, k: usize, init: &Clustering, opts: KmeansOpts) -> Clustering {
    let (clustering, _) = kmeans_trace(fs, k, init, opts);
    clustering
}

/// As [`kmeans`], also returning the per-iteration objective (within-cluster
/// sum of squared distances to the centroid).
pub fn kmeans_trace(
    fs: &FeatureSet,
    k: usize,
    init: &Clustering,
    opts: KmeansOpts,
) -> (Clustering, Vec<f64>) {
    init.assert_partition();
    assert_eq!(init.k(), k, "init must have k clusters");
    let days: Vec<usize> = (0..fs.n_days).collect();
    let (clusters, trace) = lloyd(fs, &days, init.clusters.clone(), opts);
    let clustering = Clustering {
        n_days: fs.n_days,
        clusters,
        lineage: None,
        method_tag: "k".into(),
    };
    clustering.assert_partition();
    (clustering, trace)
}

/// Lloyd iterations over an arbitrary subset of days. `init` holds day
/// indices (members of `days`).
fn lloyd(
    fs: &FeatureSet,
    days: &[usize],
    init: Vec<Vec<usize>>,
    opts: KmeansOpts,
) -> (Vec<Vec<usize>>, Vec<f64>) {
    let k = init.len();
    let pos: std::collections::HashMap<usize, usize> =
        days.iter().enumerate().map(|(p, &d)| (d, p)).collect();
    let mut assign = vec![usize::MAX; days.len()];
    for (c, members) in init.iter().enumerate() {
        for &d in members {
            assign[pos[&d]] = c;
        }
    }
    assert!(assign.iter().all(|&c| c < k), "init does not cover the day set");

    let mut trace = Vec::new();
    for _ in 0..opts.max_iter {
        let centroids = centroids_of(fs, days, &assign, k);
        let obj: f64 = days
            .iter()
            .enumerate()
            .map(|(p, &d)| sq_euclidean(fs.element(d), &centroids[assign[p]]))
            .sum();
        trace.push(obj);

        let mut new_assign: Vec<usize> = par::map_indexed(days.len(), |p| {
            nearest_centroid(fs.element(days[p]), &centroids)
        });
        repair_empty_clusters(fs, days, &mut new_assign, &centroids, k);

        let stable = new_assign == assign;
        assign = new_assign;
        if stable {
            break;
        }
        if trace.len() >= 2 {
            let prev = trace[trace.len() - 2];
            let cur = trace[trace.len() - 1];
            if (prev - cur).abs() < opts.tol * prev.abs().max(1.0) {
                break;
            }
        }
    }

    let mut clusters: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (p, &c) in assign.iter().enumerate() {
        clusters[c].push(days[p]);
    }
    (clusters, trace)
}

fn centroids_of(fs: &FeatureSet, days: &[usize], assign: &[usize], k: usize) -> Vec<Vec<f64>> {
    let len = fs.element(days[0]).len();
    let mut sums = vec![vec![0.0; len]; k];
    let mut counts = vec![0usize; k];
    for (p, &d) in days.iter().enumerate() {
        counts[assign[p]] += 1;
        for (s, v) in sums[assign[p]].iter_mut().zip(fs.element(d)) {
            *s += v;
        }
    }
    for (c, sum) in sums.iter_mut().enumerate() {
        if counts[c] > 0 {
            let n = counts[c] as f64;
            sum.iter_mut().for_each(|s| *s /= n);
        }
    }
    sums
}

fn nearest_centroid(element: &[f64], centroids: &[Vec<f64>]) -> usize {
    let mut best = 0;
    let mut best_d = sq_euclidean(element, &centroids[0]);
    for (c, centroid) in centroids.iter().enumerate().skip(1) {
        let d = sq_euclidean(element, centroid);
        if d < best_d {
            best = c;
            best_d = d;
        }
    }
    best
}

fn repair_empty_clusters(
    fs: &FeatureSet,
    days: &[usize],
    assign: &mut [usize],
    centroids: &[Vec<f64>],
    k: usize,
) {
    loop {
        let mut counts = vec![0usize; k];
        for &c in assign.iter() {
            counts[c] += 1;
        }
        let Some(empty) = counts.iter().position(|&n| n == 0) else {
            return;
        };
        // move the element farthest from its centroid, from a cluster that
        // can spare one
        let mut worst: Option<(usize, f64)> = None;
        for (p, &d) in days.iter().enumerate() {
            if counts[assign[p]] < 2 {
                continue;
            }
            let dist = sq_euclidean(fs.element(d), &centroids[assign[p]]);
            if worst.map_or(true, |(_, w)| dist > w) {
                worst = Some((p, dist));
            }
        }
        let (p, _) = worst.expect("no donor for empty cluster");
        assign[p] = empty;
    }
}

/// Standard fuzzy c-means alternation seeded from the crisp memberships of
/// `init`. Stops when the largest membership change drops below `tol`.
pub fn fuzzy_cmeans(
    fs: &FeatureSet,
    k: usize,
    init: &Clustering,
    opts: FuzzyOpts,
) -> FuzzyMembership {
    init.assert_partition();
    assert_eq!(init.k(), k);
    assert!(opts.fuzzifier > 1.0, "fuzzifier must exceed 1");
    let n = fs.n_days;
    let mut u = vec![vec![0.0; k]; n];
    for (c, members) in init.clusters.iter().enumerate() {
        for &d in members {
            u[d][c] = 1.0;
        }
    }
    if k == 1 {
        return FuzzyMembership { memberships: u };
    }

    let exponent = 1.0 / (opts.fuzzifier - 1.0);
    let len = fs.element(0).len();
    for _ in 0..opts.max_iter {
        // weighted centroids
        let mut centers = vec![vec![0.0; len]; k];
        let mut weights = vec![0.0; k];
        for d in 0..n {
            for c in 0..k {
                let w = u[d][c].powf(opts.fuzzifier);
                weights[c] += w;
                for (s, v) in centers[c].iter_mut().zip(fs.element(d)) {
                    *s += w * v;
                }
            }
        }
        for c in 0..k {
            if weights[c] > 0.0 {
                centers[c].iter_mut().for_each(|s| *s /= weights[c]);
            }
        }

        let new_u: Vec<Vec<f64>> = par::map_indexed(n, |d| {
            let dist: Vec<f64> = (0..k)
                .map(|c| sq_euclidean(fs.element(d), &centers[c]))
                .collect();
            let zeros: Vec<usize> = (0..k).filter(|&c| dist[c] == 0.0).collect();
            let mut row = vec![0.0; k];
            if !zeros.is_empty() {
                let share = 1.0 / zeros.len() as f64;
                for c in zeros {
                    row[c] = share;
                }
            } else {
                for c in 0..k {
                    let denom: f64 = (0..k).map(|j| (dist[c] / dist[j]).powf(exponent)).sum();
                    row[c] = 1.0 / denom;
                }
            }
            row
        });

        let delta = u
            .iter()
            .zip(&new_u)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0_f64, f64::max);
        u = new_u;
        if delta < opts.tol {
            break;
        }
    }
    FuzzyMembership { memberships: u }
}

/// Agglomerative clustering with complete linkage: starts from singletons
/// and merges the pair of clusters with minimal maximum pairwise element
/// distance until `k` clusters remain. Ties go to the lowest index pair.
pub fn hac(fs: &FeatureSet, k: usize, metric: Metric) -> Clustering {
    let days: Vec<usize> = (0..fs.n_days).collect();
    let clusters = hac_subset(fs, &days, k, metric);
    let clustering = Clustering {
        n_days: fs.n_days,
        clusters,
        lineage: None,
        method_tag: "hac".into(),
    };
    clustering.assert_partition();
    clustering
}

pub(crate) fn hac_subset(
    fs: &FeatureSet,
    days: &[usize],
    k: usize,
    metric: Metric,
) -> Vec<Vec<usize>> {
    let n = days.len();
    assert!(k >= 1 && k <= n, "k={k} out of range for {n} elements");
    let dist = crate::features::pairwise_matrix(fs, days, metric);

    let mut clusters: Vec<Option<Vec<usize>>> = (0..n).map(|i| Some(vec![i])).collect();
    // complete-linkage distances between active clusters
    let mut linkage = dist.clone();
    let mut active = n;
    while active > k {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..n {
            if clusters[i].is_none() {
                continue;
            }
            for j in (i + 1)..n {
                if clusters[j].is_none() {
                    continue;
                }
                let d = linkage[i * n + j];
                if best.map_or(true, |(_, _, b)| d < b) {
                    best = Some((i, j, d));
                }
            }
        }
        let (i, j, _) = best.expect("no mergeable pair");
        let merged_j = clusters[j].take().expect("cluster j active");
        clusters[i].as_mut().expect("cluster i active").extend(merged_j);
        for o in 0..n {
            if o == i || clusters[o].is_none() {
                continue;
            }
            let d = linkage[i * n + o].max(linkage[j * n + o]);
            linkage[i * n + o] = d;
            linkage[o * n + i] = d;
        }
        active -= 1;
    }

    clusters
        .into_iter()
        .flatten()
        .map(|members| {
            let mut out: Vec<usize> = members.into_iter().map(|p| days[p]).collect();
            out.sort_unstable();
            out
        })
        .collect()
}

/// `cc`: outer k-means, each outer cluster re-clustered by DTW HAC with
/// complete linkage into at most `inner_k` parts.
pub fn cluster_clustering(
    fs: &FeatureSet,
    outer_k: usize,
    inner_k: usize,
    opts: KmeansOpts,
) -> Clustering {
    let outer = kmeans(fs, outer_k, &initial_partition(fs.n_days, outer_k), opts);
    double_inner(fs, &outer, inner_k, "cc", |fs, days, k| {
        hac_subset(fs, days, k, Metric::Dtw)
    })
}

/// `lc`: outer fuzzy c-means made crisp by argmax, each outer cluster
/// re-clustered by correlation-distance HAC.
pub fn level_correlation(
    fs: &FeatureSet,
    outer_k: usize,
    inner_k: usize,
    opts: FuzzyOpts,
) -> Clustering {
    let memberships = fuzzy_cmeans(fs, outer_k, &initial_partition(fs.n_days, outer_k), opts);
    let crisp: Vec<Vec<usize>> = memberships
        .to_crisp(outer_k)
        .into_iter()
        .filter(|c| !c.is_empty())
        .collect();
    let outer = Clustering {
        n_days: fs.n_days,
        clusters: crisp,
        lineage: None,
        method_tag: "lc-outer".into(),
    };
    outer.assert_partition();
    double_inner(fs, &outer, inner_k, "lc", |fs, days, k| {
        hac_subset(fs, days, k, Metric::Correlation)
    })
}

/// `kk`: outer k-means, inner k-means seeded around the median-sum,
/// maximum-sum, minimum-sum and closest-to-mean elements of each outer
/// cluster.
pub fn kk_means(fs: &FeatureSet, outer_k: usize, inner_k: usize, opts: KmeansOpts) -> Clustering {
    let outer = kmeans(fs, outer_k, &initial_partition(fs.n_days, outer_k), opts);
    double_inner(fs, &outer, inner_k, "kk", move |fs, days, k| {
        let seeds = seed_days(fs, days, k);
        let init: Vec<Vec<usize>> = {
            let mut groups: Vec<Vec<usize>> = vec![Vec::new(); seeds.len()];
            for &d in days {
                let mut best = 0;
                let mut best_d = sq_euclidean(fs.element(d), fs.element(seeds[0]));
                for (s, &seed) in seeds.iter().enumerate().skip(1) {
                    let dd = sq_euclidean(fs.element(d), fs.element(seed));
                    if dd < best_d {
                        best = s;
                        best_d = dd;
                    }
                }
                groups[best].push(d);
            }
            groups.retain(|g| !g.is_empty());
            groups
        };
        let (clusters, _) = lloyd(fs, days, init, opts);
        clusters.into_iter().filter(|c| !c.is_empty()).collect()
    })
}

/// Seed elements for the inner kk clustering: median, max and min day-sum
/// plus closest-to-cluster-mean, deduplicated, at most `k`.
fn seed_days(fs: &FeatureSet, days: &[usize], k: usize) -> Vec<usize> {
    let by_sum = sorted_by_sum(fs, days);
    let median = by_sum[(by_sum.len() - 1) / 2];
    let max = *by_sum.last().expect("nonempty cluster");
    let min = by_sum[0];
    let mean = fs.mean_element(days);
    let cmean = *days
        .iter()
        .min_by(|&&a, &&b| {
            let da = sq_euclidean(fs.element(a), &mean);
            let db = sq_euclidean(fs.element(b), &mean);
            da.partial_cmp(&db).unwrap().then(a.cmp(&b))
        })
        .expect("nonempty cluster");
    let mut seeds = Vec::new();
    for s in [median, max, min, cmean] {
        if !seeds.contains(&s) {
            seeds.push(s);
        }
        if seeds.len() == k {
            break;
        }
    }
    seeds
}

/// Days sorted ascending by (day sum, day index).
pub(crate) fn sorted_by_sum(fs: &FeatureSet, days: &[usize]) -> Vec<usize> {
    let mut sorted = days.to_vec();
    sorted.sort_by(|&a, &b| {
        fs.day_sums[a]
            .partial_cmp(&fs.day_sums[b])
            .unwrap()
            .then(a.cmp(&b))
    });
    sorted
}

fn double_inner<F>(
    fs: &FeatureSet,
    outer: &Clustering,
    inner_k: usize,
    tag: &str,
    recluster: F,
) -> Clustering
where
    F: Fn(&FeatureSet, &[usize], usize) -> Vec<Vec<usize>> + Sync + Send,
{
    let per_outer: Vec<Vec<Vec<usize>>> = par::map_indexed(outer.k(), |o| {
        let members = &outer.clusters[o];
        let k = inner_k.min(members.len());
        recluster(fs, members, k)
    });
    let mut clusters = Vec::new();
    let mut lineage = Vec::new();
    for (o, inner) in per_outer.into_iter().enumerate() {
        for c in inner {
            clusters.push(c);
            lineage.push(o);
        }
    }
    let clustering = Clustering {
        n_days: fs.n_days,
        clusters,
        lineage: Some(lineage),
        method_tag: tag.into(),
    };
    clustering.assert_partition();
    clustering
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::{build_day_elements, tests::demand_only_instance};
    use crate::instance::Series;
    use tests_support::fs_from_sums;

    #[test]
    fn initial_partition_places_longer_blocks_first() {
        let c = initial_partition(365, 28);
        // 365 = 13*28 + 1: one block of 14, then 27 blocks of 13
        assert_eq!(c.clusters[0], (0..14).collect::<Vec<_>>());
        assert_eq!(c.clusters[0].len(), 14);
        assert!(c.clusters[1..].iter().all(|b| b.len() == 13));
        assert_eq!(c.clusters[1][0], 14);

        let c = initial_partition(4, 2);
        assert_eq!(c.clusters, vec![vec![0, 1], vec![2, 3]]);

        let c = initial_partition(3, 3);
        assert_eq!(c.clusters, vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn kmeans_k1_is_single_cluster() {
        let fs = fs_from_sums(&[0.0, 1.0, 10.0, 11.0]);
        let (c, trace) = kmeans_trace(&fs, 1, &initial_partition(4, 1), KmeansOpts::default());
        assert_eq!(c.clusters, vec![vec![0, 1, 2, 3]]);
        assert!(trace.len() <= 2);
    }

    #[test]
    fn kmeans_separated_groups_reach_brute_force_optimum() {
        let fs = fs_from_sums(&[0.0, 1.0, 10.0, 11.0]);
        let c = kmeans(&fs, 2, &initial_partition(4, 2), KmeansOpts::default());
        assert_eq!(c.clusters, vec![vec![0, 1], vec![2, 3]]);
        // brute force over all 7 bipartitions
        let obj = |groups: &[Vec<usize>]| -> f64 {
            groups
                .iter()
                .map(|g| {
                    let mean = fs.mean_element(g);
                    g.iter()
                        .map(|&d| sq_euclidean(fs.element(d), &mean))
                        .sum::<f64>()
                })
                .sum()
        };
        let mut best = f64::INFINITY;
        for mask in 1u32..7 {
            let a: Vec<usize> = (0..4).filter(|d| mask & (1 << d) != 0).collect();
            let b: Vec<usize> = (0..4).filter(|d| mask & (1 << d) == 0).collect();
            if !a.is_empty() && !b.is_empty() {
                best = best.min(obj(&[a, b]));
            }
        }
        assert!((obj(&c.clusters) - best).abs() < 1e-12);
    }

    #[test]
    fn kmeans_k_equals_n_gives_singletons() {
        let fs = fs_from_sums(&[3.0, 1.0, 2.0]);
        let (c, trace) = kmeans_trace(&fs, 3, &initial_partition(3, 3), KmeansOpts::default());
        c.assert_partition();
        assert!(c.clusters.iter().all(|cl| cl.len() == 1));
        assert_eq!(*trace.last().unwrap(), 0.0);
    }

    #[test]
    fn kmeans_objective_is_monotone() {
        let sums: Vec<f64> = (0..40).map(|i| ((i * 83) % 17) as f64).collect();
        let fs = fs_from_sums(&sums);
        let (_, trace) = kmeans_trace(&fs, 5, &initial_partition(40, 5), KmeansOpts::default());
        for w in trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-9, "objective increased: {:?}", w);
        }
    }

    #[test]
    fn fuzzy_k1_memberships_are_one() {
        let fs = fs_from_sums(&[1.0, 2.0, 3.0]);
        let fm = fuzzy_cmeans(&fs, 1, &initial_partition(3, 1), FuzzyOpts::default());
        assert!(fm.memberships.iter().all(|row| row == &[1.0]));
    }

    #[test]
    fn fuzzy_separated_points_converge_to_crisp() {
        let fs = fs_from_sums(&[0.0, 0.1, 100.0, 100.1]);
        let fm = fuzzy_cmeans(&fs, 2, &initial_partition(4, 2), FuzzyOpts::default());
        assert!(fm.memberships[0][0] >= 0.99);
        assert!(fm.memberships[1][0] >= 0.99);
        assert!(fm.memberships[2][1] >= 0.99);
        assert!(fm.memberships[3][1] >= 0.99);
    }

    #[test]
    fn fuzzy_rows_sum_to_one() {
        let sums: Vec<f64> = (0..30).map(|i| ((i * 31) % 13) as f64).collect();
        let fs = fs_from_sums(&sums);
        let fm = fuzzy_cmeans(&fs, 4, &initial_partition(30, 4), FuzzyOpts::default());
        for row in &fm.memberships {
            let sum: f64 = row.iter().sum();
            assert!((sum - 1.0).abs() < 1e-9);
            assert!(row.iter().all(|&u| (0.0..=1.0).contains(&u)));
        }
    }

    #[test]
    fn hac_examples() {
        let fs = fs_from_sums(&[0.0, 1.0, 10.0, 11.0]);
        let c = hac(&fs, 4, Metric::SqEuclidean);
        assert_eq!(c.k(), 4);
        // merge trace: d(0,1)=1 first, d(2,3)=1 next, cross linkage 121
        let c = hac(&fs, 2, Metric::SqEuclidean);
        assert_eq!(c.clusters, vec![vec![0, 1], vec![2, 3]]);
        let c = hac(&fs, 1, Metric::Dtw);
        assert_eq!(c.clusters, vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn cc_degenerate_and_separated_groups() {
        let fs = fs_from_sums(&[0.0, 1.0, 2.0, 3.0]);
        let c = cluster_clustering(&fs, 1, 1, KmeansOpts::default());
        assert_eq!(c.clusters, vec![vec![0, 1, 2, 3]]);

        // two separated groups of 4: every outer cluster of size 4 splits
        // into 4 singletons
        let fs = fs_from_sums(&[0.0, 1.0, 2.0, 3.0, 100.0, 101.0, 102.0, 103.0]);
        let c = cluster_clustering(&fs, 2, 4, KmeansOpts::default());
        assert_eq!(c.k(), 8);
        assert!(c.clusters.iter().all(|cl| cl.len() == 1));
        let lineage = c.lineage.unwrap();
        assert_eq!(lineage[0..4], [0, 0, 0, 0]);
        assert_eq!(lineage[4..8], [1, 1, 1, 1]);
    }

    #[test]
    fn cc_small_outer_cluster_yields_fewer_inner_clusters() {
        // 2 outliers against 6 grouped days: one outer cluster of size 2
        // can only produce 2 inner clusters
        let fs = fs_from_sums(&[0.0, 0.5, 100.0, 100.5, 101.0, 101.5, 102.0, 102.5]);
        let c = cluster_clustering(&fs, 2, 4, KmeansOpts::default());
        assert!(c.k() < 2 * 4);
        c.assert_partition();
    }

    #[test]
    fn lc_outer_one_reduces_to_correlation_hac() {
        let inst = demand_only_instance(
            Series::Hourly((0..24).map(|t| ((t * 7) % 5) as f64).collect()),
            24,
            4,
        );
        let fs = build_day_elements(&inst);
        let c = level_correlation(&fs, 1, 3, FuzzyOpts::default());
        let reference = hac(&fs, 3, Metric::Correlation);
        assert_eq!(c.clusters, reference.clusters);
    }

    #[test]
    fn crisp_argmax_tie_breaks_to_lower_index() {
        let fm = FuzzyMembership {
            memberships: vec![vec![0.5, 0.5]],
        };
        let crisp = fm.to_crisp(2);
        assert_eq!(crisp[0], vec![0]);
        assert!(crisp[1].is_empty());
    }

    #[test]
    fn kk_seed_elements_by_rank() {
        let fs = fs_from_sums(&[1.0, 4.0, 7.0, 10.0, 12.0]);
        let days: Vec<usize> = (0..5).collect();
        let seeds = seed_days(&fs, &days, 4);
        // median sum 7 (day 2), max 12 (day 4), min 1 (day 0), then
        // closest-to-mean (mean 6.8 -> day 2, already taken)
        assert_eq!(&seeds[0..3], &[2, 4, 0]);
    }

    #[test]
    fn kk_small_cluster_collapses_to_singletons() {
        let fs = fs_from_sums(&[0.0, 50.0, 100.0]);
        let c = kk_means(&fs, 1, 4, KmeansOpts::default());
        assert_eq!(c.k(), 3);
        assert!(c.clusters.iter().all(|cl| cl.len() == 1));
    }

    #[test]
    fn kk_degenerate_single_cluster() {
        let fs = fs_from_sums(&[0.0, 1.0, 2.0]);
        let c = kk_means(&fs, 1, 1, KmeansOpts::default());
        assert_eq!(c.clusters, vec![vec![0, 1, 2]]);
    }
}

//! Turns a clustering into a selection plan: which days are kept, with what
//! per-cluster weight, and how the aggregated instance is stitched back
//! together in chronological order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cluster::{sorted_by_sum, Clustering};
use crate::features::{sq_euclidean, FeatureSet};
use crate::instance::Instance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Min,
    Max,
    Median,
    Cmean,
    Random,
    MedianMaxMin,
}

impl Strategy {
    pub fn tag(self) -> &'static str {
        match self {
            Strategy::Min => "min",
            Strategy::Max => "max",
            Strategy::Median => "median",
            Strategy::Cmean => "cmean",
            Strategy::Random => "random",
            Strategy::MedianMaxMin => "medianmaxmin",
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "min" => Ok(Strategy::Min),
            "max" => Ok(Strategy::Max),
            "median" => Ok(Strategy::Median),
            "cmean" => Ok(Strategy::Cmean),
            "random" => Ok(Strategy::Random),
            "medianmaxmin" => Ok(Strategy::MedianMaxMin),
            other => Err(format!("unknown strategy {other}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterSelection {
    pub weight: usize,
    /// Chosen day indices, in selection order.
    pub chosen: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionPlan {
    /// Selected day indices, strictly increasing.
    pub selected: Vec<usize>,
    pub per_cluster: Vec<ClusterSelection>,
    pub strategy_tag: String,
    pub weighted: bool,
}

impl SelectionPlan {
    pub fn n_selected(&self) -> usize {
        self.selected.len()
    }

    fn assert_valid(&self) {
        assert!(
            self.selected.windows(2).all(|w| w[0] < w[1]),
            "selected days must be strictly increasing"
        );
        for cs in &self.per_cluster {
            assert!(cs.weight >= 1, "cluster weight must be positive");
        }
    }
}

/// Per-cluster weights: `frequency = n_days / n_clusters`,
/// `weight = max(1, round(size / frequency))` with round-half-away-from-zero.
pub fn cluster_weights(clustering: &Clustering, n_days: usize, n_clusters: usize) -> Vec<usize> {
    assert!(n_clusters > 0, "n_clusters must be positive");
    let frequency = n_days as f64 / n_clusters as f64;
    clustering
        .clusters
        .iter()
        .map(|c| ((c.len() as f64 / frequency).round() as usize).max(1))
        .collect()
}

/// Picks `w` distinct days from a cluster by the given strategy; if `w`
/// exceeds the cluster size the whole cluster is returned. The result is in
/// selection order.
pub fn select_from_cluster(
    fs: &FeatureSet,
    cluster: &[usize],
    w: usize,
    strategy: Strategy,
    seed: u64,
) -> Vec<usize> {
    assert!(!cluster.is_empty(), "empty cluster");
    assert!(w >= 1, "must select at least one day");
    if w >= cluster.len() {
        let mut all = cluster.to_vec();
        all.sort_unstable();
        return all;
    }

    let by_sum = sorted_by_sum(fs, cluster);
    match strategy {
        Strategy::Min => by_sum[..w].to_vec(),
        Strategy::Max => by_sum.iter().rev().take(w).copied().collect(),
        Strategy::Median => median_order(&by_sum)[..w].to_vec(),
        Strategy::Cmean => {
            let mean = fs.mean_element(cluster);
            let mut by_dist = cluster.to_vec();
            by_dist.sort_by(|&a, &b| {
                let da = sq_euclidean(fs.element(a), &mean);
                let db = sq_euclidean(fs.element(b), &mean);
                da.partial_cmp(&db).unwrap().then(a.cmp(&b))
            });
            by_dist[..w].to_vec()
        }
        Strategy::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let picks = rand::seq::index::sample(&mut rng, cluster.len(), w);
            let mut sorted = cluster.to_vec();
            sorted.sort_unstable();
            picks.iter().map(|i| sorted[i]).collect()
        }
        Strategy::MedianMaxMin => {
            let median: Vec<usize> = median_order(&by_sum);
            let max: Vec<usize> = by_sum.iter().rev().copied().collect();
            let min: Vec<usize> = by_sum.clone();
            let orders = [median, max, min];
            let mut chosen: Vec<usize> = Vec::with_capacity(w);
            let mut round = 0;
            while chosen.len() < w {
                let order = &orders[round % 3];
                if let Some(&d) = order.iter().find(|d| !chosen.contains(d)) {
                    chosen.push(d);
                }
                round += 1;
            }
            chosen
        }
    }
}

/// Days in order of proximity to the median rank: the median first, then
/// expanding alternately below/above, below first on rank-distance ties.
fn median_order(by_sum: &[usize]) -> Vec<usize> {
    let n = by_sum.len();
    let m = (n - 1) / 2;
    let mut order = Vec::with_capacity(n);
    order.push(by_sum[m]);
    let (mut lo, mut hi) = (m, m);
    while order.len() < n {
        if lo > 0 {
            lo -= 1;
            order.push(by_sum[lo]);
        }
        if hi + 1 < n {
            hi += 1;
            order.push(by_sum[hi]);
        }
    }
    order
}

/// Builds the full plan: weighted plans draw `weight` days per cluster per
/// the weighting formula, non-weighted plans draw exactly one.
pub fn build_plan(
    fs: &FeatureSet,
    clustering: &Clustering,
    weighted: bool,
    strategy: Strategy,
    seed: u64,
) -> SelectionPlan {
    clustering.assert_partition();
    let weights = if weighted {
        cluster_weights(clustering, clustering.n_days, clustering.k())
    } else {
        vec![1; clustering.k()]
    };
    let mut per_cluster = Vec::with_capacity(clustering.k());
    let mut selected = Vec::new();
    for (i, (cluster, &w)) in clustering.clusters.iter().zip(&weights).enumerate() {
        let chosen = select_from_cluster(fs, cluster, w, strategy, seed.wrapping_add(i as u64));
        selected.extend_from_slice(&chosen);
        per_cluster.push(ClusterSelection { weight: w, chosen });
    }
    selected.sort_unstable();
    let plan = SelectionPlan {
        selected,
        per_cluster,
        strategy_tag: strategy.tag().into(),
        weighted,
    };
    plan.assert_valid();
    plan
}

/// Dummy selection: every `stride`-th day (indices `stride-1, 2*stride-1,
/// ...`); falls back to the last day when the horizon is shorter than one
/// stride.
pub fn dummy_selection(n_days: usize, stride: usize) -> SelectionPlan {
    assert!(n_days >= 1 && stride >= 1);
    let mut selected: Vec<usize> = (1..)
        .map(|k| k * stride - 1)
        .take_while(|&d| d < n_days)
        .collect();
    if selected.is_empty() {
        selected.push(n_days - 1);
    }
    let per_cluster = selected
        .iter()
        .map(|&d| ClusterSelection {
            weight: 1,
            chosen: vec![d],
        })
        .collect();
    let plan = SelectionPlan {
        selected,
        per_cluster,
        strategy_tag: "dummy".into(),
        weighted: false,
    };
    plan.assert_valid();
    plan
}

/// Builds the aggregated instance: every timeseries is the concatenation of
/// the selected days' slices in ascending day order. Day values are copied
/// bit-exactly. EV driving events are remapped to stitched hours; events on
/// unselected days are dropped. Investment costs are prorated by the
/// selected fraction of the horizon so investment economics stay comparable
/// with the full run.
pub fn apply_plan(instance: &Instance, plan: &SelectionPlan) -> Instance {
    plan.assert_valid();
    let dl = instance.meta.day_length;
    let n_days = instance.n_days();
    assert!(
        plan.selected.iter().all(|&d| d < n_days),
        "plan selects a day outside the instance"
    );
    let days = &plan.selected;
    let fraction = days.len() as f64 / n_days as f64;

    let mut out = instance.clone();
    out.meta.horizon = days.len() * dl;

    for a in &mut out.external_areas {
        a.price = a.price.slice_days(days, dl);
    }
    for u in &mut out.units {
        u.fuel_price = u.fuel_price.slice_days(days, dl);
        if let Some(av) = &mut u.availability {
            *av = av.slice_days(days, dl);
        }
    }
    for r in &mut out.res {
        r.profile = r.profile.slice_days(days, dl);
    }
    for l in &mut out.lines {
        if let Some(av) = &mut l.availability {
            *av = av.slice_days(days, dl);
        }
    }
    for d in &mut out.demands {
        d.series = d.series.slice_days(days, dl);
    }
    for ev in &mut out.evs {
        ev.driving_events = ev
            .driving_events
            .iter()
            .filter_map(|e| {
                let day = e.deadline / dl;
                days.binary_search(&day).ok().map(|pos| crate::instance::DrivingEvent {
                    deadline: pos * dl + e.deadline % dl,
                    energy: e.energy,
                })
            })
            .collect();
    }
    for c in &mut out.investments {
        c.investment_cost *= fraction;
    }
    out
}

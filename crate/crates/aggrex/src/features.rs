//! Per-day clustering elements and the distance measures used by the
//! clustering pipelines.
//!
//! A day element is the flattened (series x hour) matrix of all fluctuating
//! timeseries for that day: demands (negated), RES profiles scaled by
//! capacity, external prices, fuel prices and availability series for units
//! and lines. Constant series appear as constant rows so every element has
//! the same shape. No normalization is applied across series.

use crate::instance::{Instance, Series};
use crate::par;

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSet {
    pub n_days: usize,
    pub day_length: usize,
    pub series_ids: Vec<String>,
    /// One flattened (series-major) element per day.
    elements: Vec<Vec<f64>>,
    pub day_sums: Vec<f64>,
}

impl FeatureSet {
    pub fn n_series(&self) -> usize {
        self.series_ids.len()
    }

    pub fn element(&self, day: usize) -> &[f64] {
        &self.elements[day]
    }

    /// Elementwise mean of the given days.
    pub fn mean_element(&self, days: &[usize]) -> Vec<f64> {
        assert!(!days.is_empty(), "mean of an empty day set");
        let len = self.elements[days[0]].len();
        let mut mean = vec![0.0; len];
        for &d in days {
            for (m, v) in mean.iter_mut().zip(&self.elements[d]) {
                *m += v;
            }
        }
        let n = days.len() as f64;
        mean.iter_mut().for_each(|m| *m /= n);
        mean
    }

    /// Day-sum vector as CSV (`day,sum`).
    pub fn dump_sums_csv(&self) -> String {
        let mut out = String::from("day,sum\n");
        for (d, s) in self.day_sums.iter().enumerate() {
            out.push_str(&format!("{d},{s}\n"));
        }
        out
    }
}

/// Assembles the per-day elements of an instance. The element row order is
/// fixed: demands, RES, external prices, fuel prices, unit availabilities,
/// line availabilities, each in declaration order.
pub fn build_day_elements(instance: &Instance) -> FeatureSet {
    let dl = instance.meta.day_length;
    let n_days = instance.n_days();

    // (id, per-hour closure input) collected as resolved full-horizon rows
    let mut series_ids: Vec<String> = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let horizon = instance.meta.horizon;
    let mut push = |id: String, f: &dyn Fn(usize) -> f64| {
        series_ids.push(id);
        rows.push((0..horizon).map(f).collect());
    };

    for d in &instance.demands {
        let s = d.series.clone();
        push(format!("demand:{}", d.id), &move |t| -s.value(t));
    }
    for r in &instance.res {
        let (s, cap) = (r.profile.clone(), r.capacity);
        push(format!("res:{}", r.id), &move |t| s.value(t) * cap);
    }
    for a in &instance.external_areas {
        let s = a.price.clone();
        push(format!("price:{}", a.id), &move |t| s.value(t));
    }
    for u in &instance.units {
        let s = u.fuel_price.clone();
        push(format!("fuel:{}", u.id), &move |t| s.value(t));
    }
    for u in &instance.units {
        let s = u.availability.clone().unwrap_or(Series::Scalar(1.0));
        push(format!("avail:unit:{}", u.id), &move |t| s.value(t));
    }
    for l in &instance.lines {
        let s = l.availability.clone().unwrap_or(Series::Scalar(1.0));
        push(format!("avail:line:{}", l.id), &move |t| s.value(t));
    }

    let n_series = rows.len();
    let elements: Vec<Vec<f64>> = par::map_indexed(n_days, |d| {
        let mut el = Vec::with_capacity(n_series * dl);
        for row in &rows {
            el.extend_from_slice(&row[d * dl..(d + 1) * dl]);
        }
        el
    });
    let day_sums = elements.iter().map(|el| el.iter().sum()).collect();

    FeatureSet {
        n_days,
        day_length: dl,
        series_ids,
        elements,
        day_sums,
    }
}

/// Squared Euclidean distance, summed across all series and hours.
pub fn sq_euclidean(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "element shape mismatch");
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum()
}

/// Classic dynamic time warping with absolute-difference local cost,
/// computed per series over the day-long sequences and summed across
/// series. `day_length` gives the per-series sequence length.
pub fn dtw_distance(a: &[f64], b: &[f64], day_length: usize) -> f64 {
    assert_eq!(a.len(), b.len(), "element shape mismatch");
    assert!(day_length > 0 && a.len() % day_length == 0, "bad day length");
    let n_series = a.len() / day_length;
    let mut total = 0.0;
    for s in 0..n_series {
        let sa = &a[s * day_length..(s + 1) * day_length];
        let sb = &b[s * day_length..(s + 1) * day_length];
        total += dtw_1d(sa, sb);
    }
    total
}

fn dtw_1d(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len();
    let m = b.len();
    // rolling DP over the full band
    let mut prev = vec![f64::INFINITY; m + 1];
    let mut cur = vec![f64::INFINITY; m + 1];
    prev[0] = 0.0;
    for i in 1..=n {
        cur[0] = f64::INFINITY;
        for j in 1..=m {
            let cost = (a[i - 1] - b[j - 1]).abs();
            cur[j] = cost + prev[j].min(cur[j - 1]).min(prev[j - 1]);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[m]
}

/// 1 - Pearson correlation of the flattened elements, in [0, 2]. A
/// zero-variance element is treated as distance 1 to anything other than
/// itself.
pub fn correlation_distance(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "element shape mismatch");
    if a == b {
        return 0.0;
    }
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (x, y) in a.iter().zip(b) {
        let dx = x - ma;
        let dy = y - mb;
        cov += dx * dy;
        va += dx * dx;
        vb += dy * dy;
    }
    if va == 0.0 || vb == 0.0 {
        return 1.0;
    }
    (1.0 - cov / (va.sqrt() * vb.sqrt())).clamp(0.0, 2.0)
}

/// Distance measure selector for the hierarchical clustering step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    SqEuclidean,
    Dtw,
    Correlation,
}

impl Metric {
    pub fn eval(self, a: &[f64], b: &[f64], day_length: usize) -> f64 {
        match self {
            Metric::SqEuclidean => sq_euclidean(a, b),
            Metric::Dtw => dtw_distance(a, b, day_length),
            Metric::Correlation => correlation_distance(a, b),
        }
    }
}

/// Condensed pairwise distance matrix over the given days (row-major upper
/// triangle flattened to a full symmetric matrix for simple indexing).
pub fn pairwise_matrix(fs: &FeatureSet, days: &[usize], metric: Metric) -> Vec<f64> {
    let n = days.len();
    let rows: Vec<Vec<f64>> = par::map_indexed(n, |i| {
        (0..n)
            .map(|j| {
                if j <= i {
                    0.0
                } else {
                    metric.eval(fs.element(days[i]), fs.element(days[j]), fs.day_length)
                }
            })
            .collect()
    });
    flatten_symmetric(rows, n)
}

/// Sequential reference implementation of [`pairwise_matrix`].
pub fn pairwise_matrix_seq(fs: &FeatureSet, days: &[usize], metric: Metric) -> Vec<f64> {
    let n = days.len();
    let rows: Vec<Vec<f64>> = par::map_indexed_seq(n, |i| {
        (0..n)
            .map(|j| {
                if j <= i {
                    0.0
                } else {
                    metric.eval(fs.element(days[i]), fs.element(days[j]), fs.day_length)
                }
            })
            .collect()
    });
    flatten_symmetric(rows, n)
}

fn flatten_symmetric(rows: Vec<Vec<f64>>, n: usize) -> Vec<f64> {
    let mut mat = vec![0.0; n * n];
    for (i, row) in rows.into_iter().enumerate() {
        for (j, v) in row.into_iter().enumerate() {
            if j > i {
                mat[i * n + j] = v;
                mat[j * n + i] = v;
            }
        }
    }
    mat
}

//! Clustering quality measures: accuracy under optimal label alignment,
//! purity, adjusted Rand index, Newman modularity on the learned bipartite
//! graph, and the Calinski-Harabasz index.

use nalgebra::DVector;
use pathfinding::matrix::Matrix as AssignmentMatrix;
use pathfinding::prelude::kuhn_munkres;

use crate::error::{Error, Result};
use crate::model::{BipartiteWeights, MemberData};
use crate::scalar::Real;

/// Cluster labels for the member nodes, values in `[0, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledPartition {
    labels: Vec<usize>,
    k: usize,
}

impl LabeledPartition {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("partition needs at least one cluster".into()));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= k) {
            return Err(Error::InvalidInput(format!(
                "label {bad} out of range for {k} clusters"
            )));
        }
        Ok(Self { labels, k })
    }

    /// Infers the cluster count from the largest label present.
    pub fn from_labels(labels: Vec<usize>) -> Self {
        let k = labels.iter().max().map_or(1, |m| m + 1);
        Self { labels, k }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Row-argmax labels; ties resolve to the lowest cluster index.
pub fn labels_from_b<T: Real>(b: &BipartiteWeights<T>) -> LabeledPartition {
    let m = b.matrix();
    let labels = (0..b.r())
        .map(|i| {
            let mut best = 0;
            for j in 1..b.k() {
                if m[(i, j)] > m[(i, best)] {
                    best = j;
                }
            }
            best
        })
        .collect();
    LabeledPartition { labels, k: b.k() }
}

fn check_lengths(truth: &LabeledPartition, pred: &LabeledPartition) -> Result<usize> {
    if truth.len() != pred.len() {
        return Err(Error::DimensionMismatch(format!(
            "truth has {} labels, prediction has {}",
            truth.len(),
            pred.len()
        )));
    }
    if truth.is_empty() {
        return Err(Error::UndefinedMetric("no labels to compare".into()));
    }
    Ok(truth.len())
}

fn contingency(truth: &LabeledPartition, pred: &LabeledPartition) -> Vec<Vec<i64>> {
    let mut table = vec![vec![0i64; pred.k()]; truth.k()];
    for (&t, &p) in truth.labels().iter().zip(pred.labels()) {
        table[t][p] += 1;
    }
    table
}

/// Fraction of agreements under the best alignment of predicted to true
/// labels, found by maximum-weight assignment on the confusion matrix
/// (exactly equivalent to searching all `k!` permutations).
pub fn accuracy(truth: &LabeledPartition, pred: &LabeledPartition) -> Result<f64> {
    let n = check_lengths(truth, pred)?;
    let side = truth.k().max(pred.k());
    let mut rows = vec![vec![0i64; side]; side];
    for (t, row) in contingency(truth, pred).into_iter().enumerate() {
        for (p, count) in row.into_iter().enumerate() {
            rows[t][p] = count;
        }
    }
    let weights = AssignmentMatrix::from_rows(rows)
        .map_err(|e| Error::Numerical(format!("assignment matrix: {e}")))?;
    let (matched, _) = kuhn_munkres(&weights);
    Ok(matched as f64 / n as f64)
}

/// Majority-class fraction: each predicted cluster is credited with its most
/// common true label.
pub fn purity(truth: &LabeledPartition, pred: &LabeledPartition) -> Result<f64> {
    let n = check_lengths(truth, pred)?;
    let table = contingency(truth, pred);
    let hits: i64 = (0..pred.k())
        .map(|p| (0..truth.k()).map(|t| table[t][p]).max().unwrap_or(0))
        .sum();
    Ok(hits as f64 / n as f64)
}

fn choose2(x: i64) -> i128 {
    (x as i128) * (x as i128 - 1) / 2
}

/// Adjusted Rand index from the contingency table, evaluated as an exact
/// integer ratio (one final division). Returns 1 for two identical trivial
/// partitions (0/0 convention).
pub fn ari(truth: &LabeledPartition, pred: &LabeledPartition) -> Result<f64> {
    let n = check_lengths(truth, pred)?;
    if n < 2 {
        return Err(Error::UndefinedMetric(
            "adjusted Rand index needs at least two points".into(),
        ));
    }
    let table = contingency(truth, pred);
    let row_sums: Vec<i64> = table.iter().map(|row| row.iter().sum()).collect();
    let col_sums: Vec<i64> =
        (0..pred.k()).map(|p| table.iter().map(|row| row[p]).sum()).collect();

    let sum_cells: i128 = table.iter().flatten().map(|&c| choose2(c)).sum();
    let sum_rows: i128 = row_sums.iter().map(|&a| choose2(a)).sum();
    let sum_cols: i128 = col_sums.iter().map(|&b| choose2(b)).sum();
    let pairs = choose2(n as i64);

    // clear the 1/pairs expectation and the 1/2 mean: both sides stay integral
    let numerator = 2 * (pairs * sum_cells - sum_rows * sum_cols);
    let denominator = pairs * (sum_rows + sum_cols) - 2 * sum_rows * sum_cols;
    if denominator == 0 {
        return Ok(1.0);
    }
    Ok(numerator as f64 / denominator as f64)
}

/// Newman modularity of the weighted bipartite graph defined by `B`, with
/// member `i` carrying `labels_i` and center `j` carrying its own index `j`.
pub fn modularity<T: Real>(b: &BipartiteWeights<T>, labels: &LabeledPartition) -> Result<T> {
    modularity_weighted(b.matrix(), labels)
}

/// Modularity of an arbitrary nonnegative member-to-center weight matrix
/// (invariant under uniform scaling of the weights).
pub fn modularity_weighted<T: Real>(
    m: &nalgebra::DMatrix<T>,
    labels: &LabeledPartition,
) -> Result<T> {
    let (r, k) = m.shape();
    if labels.len() != r {
        return Err(Error::DimensionMismatch(format!(
            "{} labels for {r} members",
            labels.len()
        )));
    }
    let total = m.iter().fold(T::zero(), |acc, v| acc + *v); // total edge weight
    if total <= T::zero() {
        return Err(Error::UndefinedMetric("graph has no edge weight".into()));
    }
    let two_m = T::c(2.0) * total;
    let groups = labels.k().max(k);

    let mut within = vec![T::zero(); groups]; // ordered within-group weight
    let mut degree = vec![T::zero(); groups]; // total degree per group
    for i in 0..r {
        let c = labels.labels()[i];
        let row_deg = m.row(i).iter().fold(T::zero(), |acc, v| acc + *v);
        degree[c] += row_deg;
        if c < k {
            within[c] += T::c(2.0) * m[(i, c)];
        }
    }
    for (j, slot) in degree.iter_mut().enumerate().take(k) {
        let col_deg = m.column(j).iter().fold(T::zero(), |acc, v| acc + *v);
        *slot += col_deg;
    }

    let mut q = T::zero();
    for c in 0..groups {
        let frac_deg = degree[c] / two_m;
        q += within[c] / two_m - frac_deg * frac_deg;
    }
    Ok(q)
}

/// Calinski-Harabasz index, treating each member's row of the data matrix as
/// its feature vector: between-cluster over within-cluster dispersion,
/// normalized by their degrees of freedom.
pub fn chi<T: Real>(data: &MemberData<T>, labels: &LabeledPartition) -> Result<T> {
    let (r, n) = (data.r(), data.n());
    if labels.len() != r {
        return Err(Error::DimensionMismatch(format!(
            "{} labels for {r} members",
            labels.len()
        )));
    }
    let x = data.matrix();
    let k = labels.k();

    let mut counts = vec![0usize; k];
    for &c in labels.labels() {
        counts[c] += 1;
    }
    let k_eff = counts.iter().filter(|&&c| c > 0).count();
    if k_eff < 2 {
        return Err(Error::UndefinedMetric(
            "Calinski-Harabasz needs at least two non-empty clusters".into(),
        ));
    }
    if r == k_eff {
        return Err(Error::UndefinedMetric(
            "Calinski-Harabasz undefined when every cluster is a singleton".into(),
        ));
    }

    let r_t = T::from_usize(r).unwrap();
    let mut overall = DVector::<T>::zeros(n);
    for i in 0..r {
        overall += x.row(i).transpose();
    }
    overall /= r_t;

    let mut cluster_means = vec![DVector::<T>::zeros(n); k];
    for i in 0..r {
        cluster_means[labels.labels()[i]] += x.row(i).transpose();
    }
    for (c, mean) in cluster_means.iter_mut().enumerate() {
        if counts[c] > 0 {
            *mean /= T::from_usize(counts[c]).unwrap();
        }
    }

    let mut between = T::zero();
    for c in 0..k {
        if counts[c] > 0 {
            let diff = &cluster_means[c] - &overall;
            between += T::from_usize(counts[c]).unwrap() * diff.norm_squared();
        }
    }
    let mut within = T::zero();
    for i in 0..r {
        let diff = x.row(i).transpose() - &cluster_means[labels.labels()[i]];
        within += diff.norm_squared();
    }
    if within == T::zero() {
        return Err(Error::UndefinedMetric(
            "within-cluster scatter is zero".into(),
        ));
    }
    let k_eff_t = T::from_usize(k_eff).unwrap();
    Ok((between / (k_eff_t - T::one())) / (within / (r_t - k_eff_t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn part(labels: &[usize]) -> LabeledPartition {
        LabeledPartition::from_labels(labels.to_vec())
    }

    #[test]
    fn argmax_labels() {
        let b = BipartiteWeights::new(DMatrix::<f64>::from_row_slice(
            3,
            2,
            &[0.2, 0.8, 0.7, 0.3, 0.1, 0.9],
        ))
        .unwrap();
        assert_eq!(labels_from_b(&b).labels(), &[1, 0, 1]);
    }

    #[test]
    fn argmax_indicator_rows_and_ties() {
        let b = BipartiteWeights::new(DMatrix::<f64>::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]))
            .unwrap();
        assert_eq!(labels_from_b(&b).labels(), &[0, 1]);
        let tie =
            BipartiteWeights::new(DMatrix::<f64>::from_row_slice(1, 2, &[0.5, 0.5])).unwrap();
        assert_eq!(labels_from_b(&tie).labels(), &[0]);
    }

    #[test]
    fn accuracy_permutation_invariant() {
        let t = part(&[0, 0, 1, 1]);
        let p = part(&[1, 1, 0, 0]);
        assert_eq!(accuracy(&t, &p).unwrap(), 1.0);
        assert_eq!(accuracy(&t, &t).unwrap(), 1.0);
    }

    #[test]
    fn accuracy_half_agreement() {
        let t = part(&[0, 0, 1, 1]);
        let p = part(&[0, 1, 0, 1]);
        assert_eq!(accuracy(&t, &p).unwrap(), 0.5);
    }

    #[test]
    fn accuracy_length_mismatch() {
        let t = part(&[0, 1]);
        let p = part(&[0, 1, 0]);
        assert!(accuracy(&t, &p).is_err());
    }

    #[test]
    fn purity_examples() {
        let t = part(&[0, 0, 1]);
        assert_eq!(purity(&t, &t).unwrap(), 1.0);
        let all_one = part(&[0, 0, 0]);
        assert!((purity(&t, &all_one).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        let distinct = part(&[0, 1, 2]);
        assert!((purity(&distinct, &all_one).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn ari_examples() {
        let t = part(&[0, 0, 1, 1]);
        assert_eq!(ari(&t, &t).unwrap(), 1.0);
        let p = part(&[0, 1, 0, 1]);
        assert!((ari(&t, &p).unwrap() - (-0.5)).abs() < 1e-15);
        let single = part(&[0, 0, 0, 0]);
        assert_eq!(ari(&t, &single).unwrap(), 0.0);
        assert!(ari(&part(&[0]), &part(&[0])).is_err());
    }

    #[test]
    fn modularity_two_disjoint_edges() {
        let b = BipartiteWeights::new(DMatrix::<f64>::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]))
            .unwrap();
        let q: f64 = modularity(&b, &part(&[0, 1])).unwrap();
        assert!((q - 0.5).abs() < 1e-15);
    }

    #[test]
    fn modularity_single_cluster_is_zero() {
        let b =
            BipartiteWeights::new(DMatrix::<f64>::from_row_slice(3, 1, &[1.0, 1.0, 1.0])).unwrap();
        let q: f64 = modularity(&b, &part(&[0, 0, 0])).unwrap();
        assert!(q.abs() < 1e-15);
    }

    #[test]
    fn modularity_two_stars() {
        let b = BipartiteWeights::new(DMatrix::<f64>::from_row_slice(
            4,
            2,
            &[1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0],
        ))
        .unwrap();
        let q: f64 = modularity(&b, &part(&[0, 0, 1, 1])).unwrap();
        assert!((q - 0.5).abs() < 1e-15);
    }

    #[test]
    fn chi_hand_example() {
        // 1-D points {0,1,10,11}: between-SS 100, within-SS 1
        let data =
            MemberData::new(DMatrix::<f64>::from_column_slice(4, 1, &[0.0, 1.0, 10.0, 11.0])).unwrap();
        let v = chi(&data, &part(&[0, 0, 1, 1])).unwrap();
        assert!((v - 200.0).abs() < 1e-10);
    }

    #[test]
    fn chi_degenerate_cases() {
        let data =
            MemberData::new(DMatrix::<f64>::from_column_slice(4, 1, &[0.0, 1.0, 10.0, 11.0])).unwrap();
        assert!(chi(&data, &part(&[0, 0, 0, 0])).is_err());
        // singleton clusters everywhere
        assert!(chi(&data, &part(&[0, 1, 2, 3])).is_err());
    }

    #[test]
    fn chi_label_permutation_invariant() {
        let data = MemberData::new(DMatrix::<f64>::from_column_slice(
            4,
            2,
            &[0.0, 1.0, 10.0, 11.0, 5.0, 4.0, -1.0, 0.0],
        ))
        .unwrap();
        let a = chi(&data, &part(&[0, 0, 1, 1])).unwrap();
        let b = chi(&data, &part(&[1, 1, 0, 0])).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn partition_validation() {
        assert!(LabeledPartition::new(vec![0, 2], 2).is_err());
        assert!(LabeledPartition::new(vec![0, 1], 2).is_ok());
        assert_eq!(part(&[3, 1]).k(), 4);
    }
}

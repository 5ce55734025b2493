//! Data ingestion (prices to demeaned log-returns), tail-index estimation,
//! and a ground-truth synthetic generator for validation.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::metrics::LabeledPartition;
use crate::model::{build_block_laplacian, BipartiteWeights, MemberData};
use crate::scalar::Real;

/// A table of strictly positive prices: rows are time points, columns are
/// assets.
#[derive(Debug, Clone)]
pub struct PriceTable<T: Real> {
    values: DMatrix<T>,
    names: Vec<String>,
}

impl<T: Real> PriceTable<T> {
    pub fn read_csv(path: &Path) -> Result<Self> {
        let (values, names) = read_numeric_csv(path)?;
        if values.nrows() < 2 {
            return Err(Error::Parse(format!(
                "need at least 2 time points to form returns, got {}",
                values.nrows()
            )));
        }
        if values.iter().any(|v| *v <= T::zero()) {
            return Err(Error::Parse("prices must be strictly positive".into()));
        }
        Ok(Self { values, names })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Log-returns `ln(P_{t+1}/P_t)` per asset; one fewer row than prices.
    pub fn log_returns(&self) -> DMatrix<T> {
        let (t, r) = self.values.shape();
        DMatrix::from_fn(t - 1, r, |ti, a| {
            (self.values[(ti + 1, a)] / self.values[(ti, a)]).ln()
        })
    }
}

/// Loads a CSV of prices (or, with `already_returns`, of returns), producing
/// the per-asset demeaned `r x n` member-data matrix.
pub fn load_returns<T: Real>(path: &Path, already_returns: bool) -> Result<MemberData<T>> {
    load_returns_named(path, already_returns).map(|(data, _)| data)
}

/// Same as [`load_returns`], also yielding the asset names from the header.
pub fn load_returns_named<T: Real>(
    path: &Path,
    already_returns: bool,
) -> Result<(MemberData<T>, Vec<String>)> {
    let (returns, names) = if already_returns {
        let (values, names) = read_numeric_csv(path)?;
        (values, names)
    } else {
        let table = PriceTable::<T>::read_csv(path)?;
        (table.log_returns(), table.names.clone())
    };
    // transpose to r x n and demean each asset over time
    let (n, r) = returns.shape();
    let mut x = DMatrix::zeros(r, n);
    for a in 0..r {
        let mut mean = T::zero();
        for t in 0..n {
            mean += returns[(t, a)];
        }
        mean /= T::from_usize(n).unwrap();
        for t in 0..n {
            x[(a, t)] = returns[(t, a)] - mean;
        }
    }
    let data = MemberData::new(x).map_err(|e| Error::Parse(e.to_string()))?;
    Ok((data, names))
}

/// Strict CSV reader: header row of names, rectangular numeric body, no
/// missing cells, no imputation.
fn read_numeric_csv<T: Real>(path: &Path) -> Result<(DMatrix<T>, Vec<String>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let names: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Parse(e.to_string()))?
        .iter()
        .map(String::from)
        .collect();
    if names.is_empty() {
        return Err(Error::Parse("CSV has no columns".into()));
    }
    let mut rows: Vec<T> = Vec::new();
    let mut t = 0usize;
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        for (j, field) in record.iter().enumerate() {
            let value: f64 = field.parse().map_err(|_| {
                Error::Parse(format!("row {}, column {j}: cannot parse {field:?}", t + 2))
            })?;
            if !value.is_finite() {
                return Err(Error::Parse(format!(
                    "row {}, column {j}: non-finite value",
                    t + 2
                )));
            }
            rows.push(T::c(value));
        }
        t += 1;
    }
    if t == 0 {
        return Err(Error::Parse("CSV has a header but no data rows".into()));
    }
    Ok((DMatrix::from_row_iterator(t, names.len(), rows), names))
}

/// Method-of-moments estimate of the Student-t degrees of freedom from the
/// median per-asset excess kurtosis: `ν̂ = 4 + 6/κ̄`, clamped into
/// `[2.5, 100]`; near-Gaussian data (`κ̄ ≤ 0`) maps to 100.
pub fn estimate_nu<T: Real>(data: &MemberData<T>) -> Result<T> {
    let n = data.n();
    if n < 4 {
        return Err(Error::Estimation(format!(
            "kurtosis estimation needs at least 4 samples, got {n}"
        )));
    }
    let x = data.matrix();
    let n_t = T::from_usize(n).unwrap();
    let mut kurtoses: Vec<T> = Vec::with_capacity(data.r());
    for a in 0..data.r() {
        let row = x.row(a);
        let mean = row.iter().fold(T::zero(), |acc, v| acc + *v) / n_t;
        let mut m2 = T::zero();
        let mut m4 = T::zero();
        for v in row.iter() {
            let d = *v - mean;
            let d2 = d * d;
            m2 += d2;
            m4 += d2 * d2;
        }
        m2 /= n_t;
        m4 /= n_t;
        if m2 > T::zero() {
            kurtoses.push(m4 / (m2 * m2) - T::c(3.0));
        }
    }
    if kurtoses.is_empty() {
        return Err(Error::Estimation("every asset is constant".into()));
    }
    let median = median_in_place(&mut kurtoses);
    let nu = if median > T::zero() {
        (T::c(4.0) + T::c(6.0) / median).clamp(T::c(2.5), T::c(100.0))
    } else {
        T::c(100.0)
    };
    Ok(nu)
}

fn median_in_place<T: Real>(values: &mut [T]) -> T {
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite kurtosis"));
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) * T::c(0.5)
    }
}

/// Ground-truth generator parameters.
#[derive(Debug, Clone)]
pub struct SynthSpec<T: Real> {
    pub r: usize,
    pub k: usize,
    pub n: usize,
    pub nu: T,
    /// In-cluster weight fraction of each membership row, in `(1/k, 1]`.
    pub separation: T,
    pub seed: u64,
}

/// Generator output: samples, ground-truth labels, and the generating
/// membership matrix.
#[derive(Debug, Clone)]
pub struct SynthOutput<T: Real> {
    pub data: MemberData<T>,
    pub labels: LabeledPartition,
    pub b_true: BipartiteWeights<T>,
}

impl<T: Real> SynthSpec<T> {
    pub fn validate(&self) -> Result<()> {
        if self.k < 2 || self.r < self.k {
            return Err(Error::InvalidInput(format!(
                "need r >= k >= 2, got r = {}, k = {}",
                self.r, self.k
            )));
        }
        if self.n < 1 {
            return Err(Error::InvalidInput("need at least one sample".into()));
        }
        if !(self.nu.is_finite() && self.nu > T::c(2.0)) {
            return Err(Error::InvalidInput("degrees of freedom must exceed 2".into()));
        }
        let uniform = T::one() / T::from_usize(self.k).unwrap();
        if !self.separation.is_finite() || self.separation <= uniform {
            return Err(Error::DegenerateSpec(format!(
                "separation must exceed 1/k = {uniform:?} to carry any cluster signal"
            )));
        }
        if self.separation > T::one() {
            return Err(Error::InvalidInput("separation cannot exceed 1".into()));
        }
        Ok(())
    }
}

/// Ground-truth membership matrix: contiguous, as-equal-as-possible clusters;
/// each row puts `separation` on its own center and spreads the rest evenly.
pub fn synth_ground_truth<T: Real>(
    spec: &SynthSpec<T>,
) -> Result<(BipartiteWeights<T>, LabeledPartition)> {
    spec.validate()?;
    let (r, k) = (spec.r, spec.k);
    let base = r / k;
    let rem = r % k;
    let mut labels = Vec::with_capacity(r);
    for c in 0..k {
        let size = base + usize::from(c < rem);
        labels.extend(std::iter::repeat_n(c, size));
    }
    let off = (T::one() - spec.separation) / T::from_usize(k - 1).unwrap();
    let b = DMatrix::from_fn(r, k, |i, j| if labels[i] == j { spec.separation } else { off });
    Ok((BipartiteWeights::new(b)?, LabeledPartition::new(labels, k)?))
}

/// Draws `n` member-signal samples from the zero-mean heavy-tailed model
/// whose precision is the rank-`(p-k)` spectral truncation of the
/// ground-truth Laplacian.
///
/// Each sample uses its own counter-derived RNG stream, so generation is
/// deterministic for a given seed regardless of evaluation order.
pub fn synth<T: Real>(spec: &SynthSpec<T>) -> Result<SynthOutput<T>> {
    let (b_true, labels) = synth_ground_truth(spec)?;
    let (r, k, n) = (spec.r, spec.k, spec.n);
    let p = r + k;
    let q = p - k;

    let laplacian = build_block_laplacian(&b_true);
    let eig = crate::eigen::sym_eigen_desc(&laplacian)?;
    let cutoff = eig.values[0].max(T::zero()) * T::from_usize(p).unwrap() * T::default_epsilon();
    let positives = eig.values.iter().filter(|v| **v > cutoff).count();
    if positives < q {
        return Err(Error::Numerical(
            "ground-truth Laplacian has fewer than p-k positive eigenvalues".into(),
        ));
    }
    // Keep the p-k smallest positive eigenpairs: these carry the dominant
    // pseudo-inverse mass (the cluster-level variance), so the sample
    // covariance approximates the full pseudo-inverse of the ground-truth
    // Laplacian. At separation 1 the graph has exactly p-k positive
    // eigenvalues and this is the whole spectrum.
    let first_kept = positives - q;
    let mut factor = eig.vectors.columns(first_kept, q).clone_owned();
    for j in 0..q {
        let scale = T::one() / eig.values[first_kept + j].sqrt();
        factor.column_mut(j).scale_mut(scale);
    }

    let nu_f = spec
        .nu
        .to_f64()
        .ok_or_else(|| Error::Numerical("degrees of freedom not representable".into()))?;
    let chi2 = ChiSquared::new(nu_f)
        .map_err(|e| Error::InvalidInput(format!("chi-squared mixing: {e}")))?;

    let mut x = DMatrix::zeros(r, n);
    let mut w = DVector::zeros(q);
    for s in 0..n {
        let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
        rng.set_stream(s as u64);
        for j in 0..q {
            let z: f64 = StandardNormal.sample(&mut rng);
            w[j] = T::c(z);
        }
        let gamma: f64 = chi2.sample(&mut rng);
        let scale = T::c((nu_f / gamma).sqrt());
        let z = &factor * &w;
        for i in 0..r {
            x[(i, s)] = z[i] * scale;
        }
    }

    Ok(SynthOutput { data: MemberData::new(x)?, labels, b_true })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_returns_and_demeaning() {
        let dir = std::env::temp_dir().join(format!("bigclust-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("prices.csv");
        let e = std::f64::consts::E;
        std::fs::write(&path, format!("a\n1.0\n{}\n{}\n", e, e * e)).unwrap();
        let data = load_returns::<f64>(&path, false).unwrap();
        assert_eq!(data.r(), 1);
        assert_eq!(data.n(), 2);
        // raw returns are [1, 1]; demeaning leaves zeros
        assert!(data.matrix().amax() < 1e-12);
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn rejects_non_positive_prices() {
        let dir = std::env::temp_dir().join(format!("bigclust-neg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.csv");
        std::fs::write(&path, "a,b\n1.0,2.0\n-1.0,3.0\n").unwrap();
        assert!(matches!(load_returns::<f64>(&path, false), Err(Error::Parse(_))));
        // same file is fine as returns
        assert!(load_returns::<f64>(&path, true).is_ok());
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn rejects_ragged_and_missing() {
        let dir = std::env::temp_dir().join(format!("bigclust-ragged-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let ragged = dir.join("ragged.csv");
        std::fs::write(&ragged, "a,b\n1.0,2.0\n3.0\n").unwrap();
        assert!(matches!(load_returns::<f64>(&ragged, true), Err(Error::Parse(_))));
        let missing = dir.join("missing.csv");
        std::fs::write(&missing, "a,b\n1.0,\n2.0,3.0\n").unwrap();
        assert!(matches!(load_returns::<f64>(&missing, true), Err(Error::Parse(_))));
    }

    #[test]
    fn nu_from_kurtosis() {
        // κ̄ = 6 → ν = 5 (marginal excess kurtosis of t is 6/(ν-4))
        // build one asset whose sample kurtosis is forced by construction:
        // instead, check the pure inversion rule on synthetic kurtosis values
        let mut k6 = vec![6.0f64];
        assert_eq!(median_in_place(&mut k6), 6.0);
        // full path: near-Gaussian data clamps to 100
        let x = DMatrix::from_fn(2, 64, |i, t| ((t + 1) as f64 * 0.37 + i as f64).sin());
        let data = MemberData::new(x).unwrap();
        let nu = estimate_nu(&data).unwrap();
        assert!(nu > 2.0 && nu <= 100.0);
    }

    #[test]
    fn nu_needs_samples() {
        let data = MemberData::new(DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0])).unwrap();
        assert!(matches!(estimate_nu(&data), Err(Error::Estimation(_))));
    }

    #[test]
    fn ground_truth_shapes() {
        let spec = SynthSpec { r: 7, k: 3, n: 1, nu: 5.0f64, separation: 0.8, seed: 0 };
        let (b, labels) = synth_ground_truth(&spec).unwrap();
        assert_eq!(b.r(), 7);
        // sizes as equal as possible: 3, 2, 2
        let counts = [0, 1, 2].map(|c| labels.labels().iter().filter(|&&l| l == c).count());
        assert_eq!(counts, [3, 2, 2]);
        assert_eq!(b.matrix()[(0, 0)], 0.8);
        assert!((b.matrix()[(0, 1)] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn full_separation_gives_indicator_rows() {
        let spec = SynthSpec { r: 4, k: 2, n: 1, nu: 5.0, separation: 1.0, seed: 0 };
        let (b, labels) = synth_ground_truth(&spec).unwrap();
        for i in 0..4 {
            assert_eq!(b.matrix()[(i, labels.labels()[i])], 1.0);
        }
    }

    #[test]
    fn separation_at_uniform_is_degenerate() {
        let spec = SynthSpec { r: 6, k: 3, n: 1, nu: 5.0, separation: 1.0 / 3.0, seed: 0 };
        assert!(matches!(synth(&spec), Err(Error::DegenerateSpec(_))));
    }

    #[test]
    fn generator_is_deterministic() {
        let spec = SynthSpec { r: 6, k: 2, n: 40, nu: 5.0, separation: 0.9, seed: 17 };
        let a = synth(&spec).unwrap();
        let b = synth(&spec).unwrap();
        assert_eq!(a.data.matrix(), b.data.matrix());
        let other = SynthSpec { seed: 18, ..spec };
        assert_ne!(synth(&other).unwrap().data.matrix(), a.data.matrix());
    }
}

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::fe::{densify, n_groups};
use super::EconError;

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterCovariance {
    pub cov: DMatrix<f64>,
    /// `V_A + V_B − V_AB` before any PSD repair.
    pub raw: DMatrix<f64>,
    pub clusters_a: usize,
    pub clusters_b: usize,
    pub clusters_ab: usize,
    /// Negative eigenvalues were truncated to zero.
    pub psd_repaired: bool,
}

impl ClusterCovariance {
    pub fn std_errors(&self) -> Vec<f64> {
        (0..self.cov.nrows())
            .map(|i| self.cov[(i, i)].max(0.0).sqrt())
            .collect()
    }
}

/// Σ_g s_g s_gᵀ with s_g the within-cluster sum of x_i e_i.
fn score_outer(x: &DMatrix<f64>, e: &DVector<f64>, ids: &[u32]) -> DMatrix<f64> {
    let k = x.ncols();
    let g = n_groups(ids);
    let mut scores = DMatrix::<f64>::zeros(g, k);
    for j in 0..k {
        let col = x.column(j);
        for (i, &c) in ids.iter().enumerate() {
            scores[(c as usize, j)] += col[i] * e[i];
        }
    }
    scores.transpose() * scores
}

/// Two-way cluster-robust covariance `V_A + V_B − V_AB`. Each component is
/// the sandwich `(X'X)⁻¹ M (X'X)⁻¹` scaled by `G/(G−1) · (N−1)/(N−K)` with
/// `K = k_adjust`. A non-PSD sum is repaired by eigenvalue truncation.
pub fn cluster_se(
    x: &DMatrix<f64>,
    residuals: &DVector<f64>,
    cluster_a: &[u32],
    cluster_b: &[u32],
    k_adjust: usize,
) -> Result<ClusterCovariance, EconError> {
    let n = x.nrows();
    for (name, ids) in [("cluster_a", cluster_a), ("cluster_b", cluster_b)] {
        if ids.len() != n {
            return Err(EconError::LengthMismatch {
                column: name.into(),
                expected: n,
                got: ids.len(),
            });
        }
    }
    if n <= k_adjust {
        return Err(EconError::TooFewRows { n, k: k_adjust });
    }
    let a = densify(cluster_a);
    let b = densify(cluster_b);
    let mut pairs: HashMap<(u32, u32), u32> = HashMap::new();
    let ab: Vec<u32> = a
        .iter()
        .zip(&b)
        .map(|(&p, &q)| {
            let next = pairs.len() as u32;
            *pairs.entry((p, q)).or_insert(next)
        })
        .collect();
    let (ga, gb, gab) = (n_groups(&a), n_groups(&b), n_groups(&ab));
    for (dim, g) in [("first", ga), ("second", gb)] {
        if g < 2 {
            return Err(EconError::SingleCluster {
                dimension: dim.into(),
            });
        }
    }
    let bread = (x.transpose() * x)
        .try_inverse()
        .ok_or_else(|| EconError::RankDeficient {
            columns: vec!["(cluster bread)".into()],
        })?;
    let dof = (n as f64 - 1.0) / (n - k_adjust) as f64;
    let part = |ids: &[u32], g: usize| {
        let c = g as f64 / (g as f64 - 1.0) * dof;
        &bread * score_outer(x, residuals, ids) * &bread * c
    };
    let mut cov = part(&a, ga) + part(&b, gb) - part(&ab, gab);
    cov = (&cov + cov.transpose()) * 0.5;
    let raw = cov.clone();

    let eig = SymmetricEigen::new(cov.clone());
    let top = eig.eigenvalues.amax();
    let psd_repaired = eig.eigenvalues.iter().any(|&l| l < -1e-12 * top);
    if psd_repaired {
        let clipped = eig.eigenvalues.map(|l| l.max(0.0));
        cov = &eig.eigenvectors * DMatrix::from_diagonal(&clipped) * eig.eigenvectors.transpose();
        log::info!("two-way cluster covariance not PSD; negative eigenvalues truncated");
    }
    Ok(ClusterCovariance {
        cov,
        raw,
        clusters_a: ga,
        clusters_b: gb,
        clusters_ab: gab,
        psd_repaired,
    })
}

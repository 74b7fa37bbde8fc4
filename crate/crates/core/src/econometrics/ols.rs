use nalgebra::{DMatrix, DVector};

use super::EconError;

/// Relative residual norm below which a column counts as a linear
/// combination of the columns before it.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct OlsFit {
    pub coefficients: DVector<f64>,
    pub residuals: DVector<f64>,
    /// N − K.
    pub df: usize,
    pub rss: f64,
}

/// Indices of columns that are (numerically) spanned by earlier columns,
/// found by Gram-Schmidt with re-orthogonalization.
pub fn dependent_columns(x: &DMatrix<f64>) -> Vec<usize> {
    let mut basis: Vec<DVector<f64>> = Vec::new();
    let mut dependent = Vec::new();
    for j in 0..x.ncols() {
        let orig = x.column(j).into_owned();
        let norm0 = orig.norm();
        let mut v = orig;
        for _ in 0..2 {
            for q in &basis {
                let c = q.dot(&v);
                v.axpy(-c, q, 1.0);
            }
        }
        let norm = v.norm();
        if norm0 == 0.0 || norm <= RANK_TOL * norm0 {
            dependent.push(j);
        } else {
            basis.push(v / norm);
        }
    }
    dependent
}

/// Least squares by Householder QR. `names` label the columns of `x` for
/// rank-deficiency errors.
pub fn ols(x: &DMatrix<f64>, y: &DVector<f64>, names: &[String]) -> Result<OlsFit, EconError> {
    let (n, k) = x.shape();
    if y.len() != n {
        return Err(EconError::LengthMismatch {
            column: "outcome".into(),
            expected: n,
            got: y.len(),
        });
    }
    if n <= k {
        return Err(EconError::TooFewRows { n, k });
    }
    if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
        return Err(EconError::Domain(
            "non-finite value in regression data".into(),
        ));
    }
    let dependent = dependent_columns(x);
    if !dependent.is_empty() {
        return Err(EconError::RankDeficient {
            columns: dependent
                .iter()
                .map(|&j| names.get(j).cloned().unwrap_or_else(|| format!("x{j}")))
                .collect(),
        });
    }
    let qr = x.clone().qr();
    let mut qty = y.clone();
    qr.q_tr_mul(&mut qty);
    let r = qr.r();
    let rhs = qty.rows(0, k).into_owned();
    let coefficients = r
        .solve_upper_triangular(&rhs)
        .ok_or_else(|| EconError::RankDeficient {
            columns: names.to_vec(),
        })?;
    let residuals = y - x * &coefficients;
    let rss = residuals.norm_squared();
    Ok(OlsFit {
        coefficients,
        residuals,
        df: n - k,
        rss,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(k: usize) -> Vec<String> {
        (0..k).map(|j| format!("c{j}")).collect()
    }

    #[test]
    fn exact_fit() {
        let x = DMatrix::from_column_slice(4, 1, &[1.0, 2.0, 3.0, 4.0]);
        let y = DVector::from_column_slice(&[2.0, 4.0, 6.0, 8.0]);
        let fit = ols(&x, &y, &names(1)).unwrap();
        assert!((fit.coefficients[0] - 2.0).abs() < 1e-14);
        assert!(fit.residuals.amax() < 1e-13);
        assert_eq!(fit.df, 3);
    }

    #[test]
    fn orthogonal_outcome() {
        let x = DMatrix::from_column_slice(4, 1, &[1.0, 1.0, 0.0, 0.0]);
        let y = DVector::from_column_slice(&[1.0, -1.0, 5.0, 5.0]);
        let fit = ols(&x, &y, &names(1)).unwrap();
        assert!(fit.coefficients[0].abs() < 1e-15);
    }

    #[test]
    fn rank_deficiency_names_columns() {
        let x = DMatrix::from_column_slice(
            4,
            3,
            &[1.0, 2.0, 3.0, 4.0, 0.0, 1.0, 0.0, 1.0, 2.0, 5.0, 6.0, 9.0],
        );
        let y = DVector::from_column_slice(&[1.0, 2.0, 3.0, 5.0]);
        match ols(&x, &y, &names(3)) {
            Err(EconError::RankDeficient { columns }) => assert_eq!(columns, vec!["c2"]),
            other => panic!("unexpected {other:?}"),
        }
        let zero = DMatrix::from_column_slice(3, 2, &[1.0, 2.0, 3.0, 0.0, 0.0, 0.0]);
        assert_eq!(dependent_columns(&zero), vec![1]);
    }

    #[test]
    fn too_few_rows() {
        let x = DMatrix::from_element(2, 2, 1.0);
        let y = DVector::from_element(2, 1.0);
        assert!(matches!(
            ols(&x, &y, &names(2)),
            Err(EconError::TooFewRows { n: 2, k: 2 })
        ));
    }
}

//! Least squares with HC1 sandwich standard errors.
//!
//! Columns are equilibrated to unit Euclidean norm before a Householder QR
//! factorization. Coefficients come from back-substitution on `R`; the
//! sandwich uses `H = X (X'X)^-1 = A R^-1 R^-T`, so the HC1 variance of
//! coefficient `j` is `n/(n-k) * sum_i e_i^2 H_ij^2`.

use serde::{Deserialize, Serialize};

use super::tdist::student_t_pvalue;
use crate::error::{Error, Result};

/// Reciprocal condition estimate of `X'X` below which a design is rejected.
pub const RCOND_THRESHOLD: f64 = 1e-12;

pub const INTERCEPT: &str = "Constant";

/// Regressor matrix stored by column, with names.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
    n: usize,
}

impl DesignMatrix {
    /// Raw constructor; no intercept is added.
    pub fn from_columns(names: Vec<String>, columns: Vec<Vec<f64>>) -> Result<Self> {
        if names.len() != columns.len() {
            return Err(Error::LengthMismatch { left: names.len(), right: columns.len() });
        }
        let n = columns.first().map_or(0, Vec::len);
        for (name, col) in names.iter().zip(&columns) {
            if col.len() != n {
                return Err(Error::LengthMismatch { left: n, right: col.len() });
            }
            if col.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFiniteDesign(name.clone()));
            }
        }
        Ok(Self { names, columns, n })
    }

    /// Leading column of ones named `Constant`, then `regressors` in order.
    pub fn with_intercept<S: Into<String>>(n: usize, regressors: Vec<(S, Vec<f64>)>) -> Result<Self> {
        let mut names = vec![INTERCEPT.to_owned()];
        let mut columns = vec![vec![1.0; n]];
        for (name, col) in regressors {
            names.push(name.into());
            columns.push(col);
        }
        Self::from_columns(names, columns)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.columns.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.columns[col][row]
    }

    /// `X b`.
    pub fn mul_vec(&self, b: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (col, bj) in self.columns.iter().zip(b) {
            for (o, x) in out.iter_mut().zip(col) {
                *o += x * bj;
            }
        }
        out
    }
}

/// Householder QR of the equilibrated design.
#[derive(Debug, Clone)]
struct QrFactor {
    n: usize,
    k: usize,
    /// Column norms used for equilibration.
    scale: Vec<f64>,
    /// Column-major `A = X / scale`, overwritten by Householder vectors below
    /// the diagonal and `R` on and above it.
    qr: Vec<Vec<f64>>,
    rdiag: Vec<f64>,
    /// Upper-triangular `R^-1`, column-major.
    r_inv: Vec<Vec<f64>>,
}

impl QrFactor {
    fn new(x: &DesignMatrix) -> Result<Self> {
        let (n, k) = (x.n(), x.k());
        if n <= k {
            return Err(Error::TooFewObservations { n, k });
        }
        let mut scale = Vec::with_capacity(k);
        let mut qr = Vec::with_capacity(k);
        for (j, col) in x.columns().iter().enumerate() {
            let norm = col.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(rank_error(x, j));
            }
            scale.push(norm);
            qr.push(col.iter().map(|v| v / norm).collect::<Vec<_>>());
        }

        let mut rdiag = vec![0.0; k];
        for j in 0..k {
            let norm = qr[j][j..].iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(rank_error(x, j));
            }
            let alpha = if qr[j][j] > 0.0 { -norm } else { norm };
            // v = a_j[j..] - alpha e_1, stored in place; the Householder
            // reflector is I - 2 v v' / (v' v).
            qr[j][j] -= alpha;
            let vtv: f64 = qr[j][j..].iter().map(|v| v * v).sum();
            let (head, tail) = qr.split_at_mut(j + 1);
            let v = &head[j][j..];
            for col in tail.iter_mut() {
                let dot: f64 = v.iter().zip(&col[j..]).map(|(a, b)| a * b).sum();
                let f = 2.0 * dot / vtv;
                for (c, vi) in col[j..].iter_mut().zip(v) {
                    *c -= f * vi;
                }
            }
            rdiag[j] = alpha;
        }

        let r = |i: usize, j: usize| if i == j { rdiag[j] } else { qr[j][i] };
        let mut r_inv = vec![vec![0.0; k]; k];
        for j in 0..k {
            r_inv[j][j] = 1.0 / rdiag[j];
            for i in (0..j).rev() {
                let s: f64 = (i + 1..=j).map(|l| r(i, l) * r_inv[j][l]).sum();
                r_inv[j][i] = -s / rdiag[i];
            }
        }

        // rcond(X'X) ~ 1 / (||R||_1 ||R^-1||_1)^2 on the equilibrated scale.
        let norm1 = |m: &dyn Fn(usize, usize) -> f64| {
            (0..k).map(|j| (0..=j).map(|i| m(i, j).abs()).sum::<f64>()).fold(0.0, f64::max)
        };
        let r_norm = norm1(&|i, j| r(i, j));
        let r_inv_norm = norm1(&|i, j| r_inv[j][i]);
        let rcond = 1.0 / (r_norm * r_inv_norm).powi(2);
        if !(rcond >= RCOND_THRESHOLD) {
            let worst = (0..k)
                .min_by(|a, b| rdiag[*a].abs().total_cmp(&rdiag[*b].abs()))
                .unwrap_or(0);
            return Err(rank_error(x, worst));
        }

        Ok(Self { n, k, scale, qr, rdiag, r_inv })
    }

    /// `Q' y` restricted to its first `k` entries.
    fn qty(&self, y: &[f64]) -> Vec<f64> {
        let mut y = y.to_vec();
        for j in 0..self.k {
            let v = &self.qr[j][j..];
            let vtv: f64 = v.iter().map(|a| a * a).sum();
            let dot: f64 = v.iter().zip(&y[j..]).map(|(a, b)| a * b).sum();
            let f = 2.0 * dot / vtv;
            for (yi, vi) in y[j..].iter_mut().zip(v) {
                *yi -= f * vi;
            }
        }
        y.truncate(self.k);
        y
    }

    fn solve(&self, y: &[f64]) -> Vec<f64> {
        let qty = self.qty(y);
        let k = self.k;
        let mut b = vec![0.0; k];
        for i in (0..k).rev() {
            let s: f64 = (i + 1..k).map(|l| self.qr[l][i] * b[l]).sum();
            b[i] = (qty[i] - s) / self.rdiag[i];
        }
        b.iter().zip(&self.scale).map(|(bi, s)| bi / s).collect()
    }

    /// HC1 standard errors of the unscaled coefficients.
    fn hc1(&self, x: &DesignMatrix, residuals: &[f64]) -> Vec<f64> {
        let (n, k) = (self.n, self.k);
        // G = R^-1 R^-T, the inverse of A'A.
        let mut g = vec![vec![0.0; k]; k];
        for a in 0..k {
            for b in 0..k {
                g[a][b] = (a.max(b)..k).map(|l| self.r_inv[l][a] * self.r_inv[l][b]).sum();
            }
        }
        let mut var = vec![0.0; k];
        let mut arow = vec![0.0; k];
        for i in 0..n {
            let e2 = residuals[i] * residuals[i];
            if e2 == 0.0 {
                continue;
            }
            for (j, a) in arow.iter_mut().enumerate() {
                *a = x.get(i, j) / self.scale[j];
            }
            for j in 0..k {
                let h: f64 = (0..k).map(|l| arow[l] * g[l][j]).sum();
                var[j] += e2 * h * h;
            }
        }
        let c = n as f64 / (n - k) as f64;
        var.iter().zip(&self.scale).map(|(v, s)| (c * v).sqrt() / s).collect()
    }
}

fn rank_error(x: &DesignMatrix, j: usize) -> Error {
    let others = if j == 0 {
        "nothing (the column is zero)".to_owned()
    } else {
        x.names()[..j].iter().map(|s| format!("'{s}'")).collect::<Vec<_>>().join(", ")
    };
    Error::RankDeficient { column: x.names()[j].clone(), others }
}

/// One row of a regression: estimate, robust SE, t and two-sided p.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coefficient: f64,
    pub robust_se: f64,
    pub t_stat: f64,
    pub p_value: f64,
}

/// Fitted OLS model with HC1 inference.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionResult {
    pub names: Vec<String>,
    pub coefficients: Vec<f64>,
    pub robust_se: Vec<f64>,
    pub t_stats: Vec<f64>,
    pub p_values: Vec<f64>,
    pub r2: f64,
    pub adj_r2: f64,
    pub n: usize,
    pub k: usize,
    pub residuals: Vec<f64>,
}

impl RegressionResult {
    pub fn dof(&self) -> usize {
        self.n - self.k
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn coefficient(&self, name: &str) -> Option<f64> {
        self.index_of(name).map(|i| self.coefficients[i])
    }

    pub fn term(&self, name: &str) -> Option<Term> {
        self.index_of(name).map(|i| Term {
            coefficient: self.coefficients[i],
            robust_se: self.robust_se[i],
            t_stat: self.t_stats[i],
            p_value: self.p_values[i],
        })
    }
}

fn t_stat(coef: f64, se: f64) -> f64 {
    if se > 0.0 {
        coef / se
    } else if coef == 0.0 {
        0.0
    } else {
        coef.signum() * f64::INFINITY
    }
}

/// Ordinary least squares of `y` on `x` with HC1 standard errors and
/// two-sided Student-t p-values on `n - k` degrees of freedom.
pub fn ols_fit(x: &DesignMatrix, y: &[f64]) -> Result<RegressionResult> {
    if y.len() != x.n() {
        return Err(Error::LengthMismatch { left: x.n(), right: y.len() });
    }
    if let Some(i) = y.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteDesign(format!("response row {i}")));
    }
    let qr = QrFactor::new(x)?;
    let coefficients = qr.solve(y);
    let fitted = x.mul_vec(&coefficients);
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(a, b)| a - b).collect();
    let robust_se = qr.hc1(x, &residuals);

    let (n, k) = (x.n(), x.k());
    let dof = (n - k) as u64;
    let t_stats: Vec<f64> = coefficients.iter().zip(&robust_se).map(|(c, s)| t_stat(*c, *s)).collect();
    let p_values = t_stats
        .iter()
        .map(|t| student_t_pvalue(*t, dof))
        .collect::<Result<Vec<_>>>()?;

    let ybar = y.iter().sum::<f64>() / n as f64;
    let sst: f64 = y.iter().map(|v| (v - ybar) * (v - ybar)).sum();
    let ssr: f64 = residuals.iter().map(|e| e * e).sum();
    let r2 = if sst > 0.0 {
        (1.0 - ssr / sst).clamp(0.0, 1.0)
    } else if ssr == 0.0 {
        1.0
    } else {
        0.0
    };
    let adj_r2 = 1.0 - (1.0 - r2) * (n - 1) as f64 / (n - k) as f64;

    Ok(RegressionResult {
        names: x.names().to_vec(),
        coefficients,
        robust_se,
        t_stats,
        p_values,
        r2,
        adj_r2,
        n,
        k,
        residuals,
    })
}

/// HC1 sandwich standard errors for a design and its residuals:
/// square roots of the diagonal of `n/(n-k) (X'X)^-1 X' diag(e^2) X (X'X)^-1`.
pub fn hc_standard_errors(x: &DesignMatrix, residuals: &[f64]) -> Result<Vec<f64>> {
    if residuals.len() != x.n() {
        return Err(Error::LengthMismatch { left: x.n(), right: residuals.len() });
    }
    let qr = QrFactor::new(x).map_err(|e| match e {
        Error::RankDeficient { .. } => Error::Singular,
        other => other,
    })?;
    Ok(qr.hc1(x, residuals))
}

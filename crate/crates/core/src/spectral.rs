//! Binary64 mirror of convolution matrices: full spectra, the second-largest
//! eigenvalue modulus, and a numerical check of the Perron limit
//! `lim A^m = x yᵀ = J/n`.

use faer::{c64, Mat};
use serde::Serialize;

use crate::cayley::StochasticMatrix;
use crate::error::{Error, Result};

/// Eigenvalue 1 counts as simple when every other eigenvalue has modulus at
/// most `1 - SIMPLICITY_GAP`.
pub const SIMPLICITY_GAP: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct FloatMatrix {
    inner: Mat<f64>,
}

impl PartialEq for FloatMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

impl FloatMatrix {
    pub fn from_stochastic(a: &StochasticMatrix) -> Self {
        Self::from_rows(&a.to_f64_rows())
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        Self {
            inner: Mat::from_fn(n, n, |i, j| rows[i][j]),
        }
    }

    pub fn order(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.inner[(i, j)]
    }

    /// Largest deviation of a row or column sum from one.
    pub fn stochastic_residual(&self) -> f64 {
        let n = self.order();
        let row = |i: usize| (0..n).map(|j| self.get(i, j)).sum::<f64>();
        let col = |j: usize| (0..n).map(|i| self.get(i, j)).sum::<f64>();
        (0..n)
            .map(|i| (row(i) - 1.0).abs().max((col(i) - 1.0).abs()))
            .fold(0.0, f64::max)
    }

    /// `A^m` by repeated squaring.
    pub fn power(&self, mut m: u64) -> FloatMatrix {
        let n = self.order();
        let mut result = Mat::<f64>::identity(n, n);
        let mut base = self.inner.clone();
        while m > 0 {
            if m & 1 == 1 {
                result = &result * &base;
            }
            m >>= 1;
            if m > 0 {
                base = &base * &base;
            }
        }
        FloatMatrix { inner: result }
    }

    /// Full spectrum from a dense real Schur decomposition, sorted by
    /// modulus, largest first.
    pub fn eigenvalues(&self) -> Result<Vec<c64>> {
        let mut values = self
            .inner
            .eigenvalues()
            .map_err(|e| Error::Numeric(format!("eigenvalue solver failed on order {}: {e:?}", self.order())))?;
        values.sort_by(|a, b| modulus(b).total_cmp(&modulus(a)));
        Ok(values)
    }
}

fn modulus(z: &c64) -> f64 {
    z.re.hypot(z.im)
}

/// Second-largest eigenvalue modulus of the float mirror of `a`, clamped to
/// `[0, 1]`. Zero for order one.
pub fn slem(a: &StochasticMatrix) -> Result<f64> {
    let values = FloatMatrix::from_stochastic(a).eigenvalues()?;
    Ok(values.get(1).map_or(0.0, |v| modulus(v).clamp(0.0, 1.0)))
}

/// Largest singular value of `A - J/n`: the factor by which one step of the
/// walk shrinks the Euclidean norm of a mean-zero vector. Bounds the SLEM
/// from above and equals it when `A` is normal (abelian groups).
pub fn contraction_norm(a: &StochasticMatrix) -> Result<f64> {
    let n = a.order();
    let fm = FloatMatrix::from_stochastic(a);
    let centered = Mat::<f64>::from_fn(n, n, |i, j| fm.get(i, j) - 1.0 / n as f64);
    let values = centered
        .singular_values()
        .map_err(|e| Error::Numeric(format!("SVD failed: {e:?}")))?;
    Ok(values.into_iter().fold(0.0, f64::max))
}

/// Residuals from [`perron_limit_check`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerronDiagnostics {
    pub passed: bool,
    pub tolerance: f64,
    /// Largest eigenvalue modulus.
    pub spectral_radius: f64,
    /// Second-largest eigenvalue modulus.
    pub second_modulus: f64,
    pub eigenvalue_one_simple: bool,
    /// `max_i |x_i - 1/n|` for the right eigenvector normalized to sum 1.
    pub right_vector_residual: f64,
    /// `max_i |y_i - 1|` for the left eigenvector normalized by `xᵀy = 1`.
    pub left_vector_residual: f64,
    /// `max_ij |(x yᵀ)_ij - 1/n|`.
    pub outer_product_residual: f64,
}

/// Numerically confirms the Perron picture for a positive doubly stochastic
/// matrix: spectral radius one, eigenvalue one simple, right and left
/// Perron vectors `x = (1/n)·1` and `y = 1`, and `x yᵀ = J/n`.
///
/// A matrix with a zero entry fails with [`Error::HypothesisNotMet`], which
/// is distinct from a failed check (`passed = false`).
pub fn perron_limit_check(a: &StochasticMatrix, tol: f64) -> Result<PerronDiagnostics> {
    if !a.is_positive() {
        return Err(Error::HypothesisNotMet(
            "Perron check needs a matrix with all entries positive".into(),
        ));
    }
    let n = a.order();
    let fm = FloatMatrix::from_stochastic(a);
    let values = fm.eigenvalues()?;
    let spectral_radius = modulus(&values[0]);
    let second_modulus = values.get(1).map_or(0.0, modulus);
    let eigenvalue_one_simple = second_modulus <= 1.0 - SIMPLICITY_GAP;

    let identity = Mat::<f64>::identity(n, n);
    let x = null_vector(&(&fm.inner - &identity))?;
    let y = null_vector(&(fm.inner.transpose().to_owned() - &identity))?;
    let x_sum: f64 = x.iter().sum();
    let x: Vec<f64> = x.iter().map(|v| v / x_sum).collect();
    let xy: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
    let y: Vec<f64> = y.iter().map(|v| v / xy).collect();

    let uniform = 1.0 / n as f64;
    let right_vector_residual = x.iter().map(|v| (v - uniform).abs()).fold(0.0, f64::max);
    let left_vector_residual = y.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    let outer_product_residual = x
        .iter()
        .flat_map(|xi| y.iter().map(move |yj| (xi * yj - uniform).abs()))
        .fold(0.0, f64::max);

    let passed = (spectral_radius - 1.0).abs() <= tol
        && eigenvalue_one_simple
        && right_vector_residual <= tol
        && left_vector_residual <= tol
        && outer_product_residual <= tol;

    Ok(PerronDiagnostics {
        passed,
        tolerance: tol,
        spectral_radius,
        second_modulus,
        eigenvalue_one_simple,
        right_vector_residual,
        left_vector_residual,
        outer_product_residual,
    })
}

/// Right singular vector for the smallest singular value.
fn null_vector(m: &Mat<f64>) -> Result<Vec<f64>> {
    let svd = m
        .svd()
        .map_err(|e| Error::Numeric(format!("SVD failed: {e:?}")))?;
    let s = svd.S().column_vector();
    let idx = (0..s.nrows())
        .min_by(|&a, &b| s[a].total_cmp(&s[b]))
        .ok_or_else(|| Error::Numeric("empty matrix".into()))?;
    let v = svd.V();
    Ok((0..v.nrows()).map(|i| v[(i, idx)]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Permutation;
    use crate::rational::ratio;

    fn z2_lazy() -> StochasticMatrix {
        StochasticMatrix::from_rows(vec![
            vec![ratio(3, 4), ratio(1, 4)],
            vec![ratio(1, 4), ratio(3, 4)],
        ])
        .unwrap()
    }

    #[test]
    fn slem_examples() {
        for n in [1, 2, 5, 12] {
            assert!(slem(&StochasticMatrix::uniform(n)).unwrap() < 1e-12);
        }
        assert!((slem(&z2_lazy()).unwrap() - 0.5).abs() < 1e-12);
        for n in [2, 3, 7, 12] {
            let cycle = Permutation::new((0..n).map(|j| (j + 1) % n).collect()).unwrap();
            let s = slem(&StochasticMatrix::from_permutation(&cycle)).unwrap();
            assert!((s - 1.0).abs() < 1e-12, "n={n}: {s}");
        }
    }

    #[test]
    fn z2_eigenvalues() {
        let values = FloatMatrix::from_stochastic(&z2_lazy()).eigenvalues().unwrap();
        assert!((values[0].re - 1.0).abs() < 1e-12);
        assert!(values[1].im.abs() < 1e-12);
        assert!((values[1].re - 0.5).abs() < 1e-12);
    }

    #[test]
    fn perron_examples() {
        let d = perron_limit_check(&StochasticMatrix::uniform(6), 1e-10).unwrap();
        assert!(d.passed, "{d:?}");
        assert!(d.outer_product_residual < 1e-14);

        let d = perron_limit_check(&z2_lazy(), 1e-10).unwrap();
        assert!(d.passed);
        assert!((d.second_modulus - 0.5).abs() < 1e-12);

        assert!(matches!(
            perron_limit_check(&StochasticMatrix::identity(3), 1e-10),
            Err(Error::HypothesisNotMet(_))
        ));
    }

    #[test]
    fn power_converges_to_uniform() {
        let p = FloatMatrix::from_stochastic(&z2_lazy()).power(60);
        assert!((p.get(0, 0) - 0.5).abs() < 1e-15);
        assert_eq!(FloatMatrix::from_stochastic(&z2_lazy()).power(1), FloatMatrix::from_stochastic(&z2_lazy()));
    }
}

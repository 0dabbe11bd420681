use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::TraceError;

/// Largest tolerated `|M − Mᵀ|` entry, relative to `max(1, |M|_max)`.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;
/// Slack on the unit-spectrum condition.
pub const SPECTRUM_TOLERANCE: f64 = 1e-10;

/// A real symmetric matrix with its eigendecomposition, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct SpectralOperator {
    matrix: DMatrix<f64>,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
}

impl SpectralOperator {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self, TraceError> {
        if !matrix.is_square() {
            return Err(TraceError::DimensionMismatch(matrix.nrows(), matrix.ncols()));
        }
        let scale = matrix.amax().max(1.0);
        let defect = (&matrix - matrix.transpose()).amax();
        if defect > SYMMETRY_TOLERANCE * scale {
            return Err(TraceError::NotSymmetric(defect));
        }
        let sym = (&matrix + matrix.transpose()) * 0.5;
        let eig = SymmetricEigen::new(sym.clone());
        let mut order: Vec<usize> = (0..sym.nrows()).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let eigenvalues = DVector::from_iterator(order.len(), order.iter().map(|&i| eig.eigenvalues[i]));
        let eigenvectors = DMatrix::from_columns(&order.iter().map(|&i| eig.eigenvectors.column(i)).collect::<Vec<_>>());
        Ok(SpectralOperator { matrix: sym, eigenvalues, eigenvectors })
    }

    /// Builds `V diag(λ) Vᵀ` from known eigenpairs.
    fn from_eigen(eigenvalues: Vec<f64>, eigenvectors: &DMatrix<f64>) -> Self {
        let mut order: Vec<usize> = (0..eigenvalues.len()).collect();
        order.sort_by(|&i, &j| eigenvalues[i].total_cmp(&eigenvalues[j]));
        let vals = DVector::from_iterator(order.len(), order.iter().map(|&i| eigenvalues[i]));
        let vecs = DMatrix::from_columns(&order.iter().map(|&i| eigenvectors.column(i)).collect::<Vec<_>>());
        let m = &vecs * DMatrix::from_diagonal(&vals) * vecs.transpose();
        let matrix = (&m + m.transpose()) * 0.5;
        SpectralOperator { matrix, eigenvalues: vals, eigenvectors: vecs }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_eigen(values.to_vec(), &DMatrix::identity(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn has_unit_spectrum(&self) -> bool {
        self.min_eigenvalue() >= -SPECTRUM_TOLERANCE && self.max_eigenvalue() <= 1.0 + SPECTRUM_TOLERANCE
    }

    pub fn require_unit_spectrum(&self) -> Result<(), TraceError> {
        if self.has_unit_spectrum() {
            Ok(())
        } else {
            Err(TraceError::SpectrumOutside { min: self.min_eigenvalue(), max: self.max_eigenvalue() })
        }
    }

    /// `h(M)` for any real function, no spectrum condition.
    pub fn map_spectrum(&self, h: impl Fn(f64) -> f64) -> SpectralOperator {
        Self::from_eigen(self.eigenvalues.iter().map(|&l| h(l)).collect(), &self.eigenvectors)
    }

    /// `h(M)` for `M` with spectrum in `[0, 1]`. Eigenvalues within the
    /// tolerance outside the interval are clamped before `h` is applied.
    pub fn spectral_apply(&self, h: impl Fn(f64) -> f64) -> Result<SpectralOperator, TraceError> {
        self.require_unit_spectrum()?;
        Ok(self.map_spectrum(|l| h(l.clamp(0.0, 1.0))))
    }

    /// `τ(h(M))`, the mean of `h` over the spectrum, without forming `h(M)`.
    pub fn trace_of(&self, h: impl Fn(f64) -> f64) -> Result<f64, TraceError> {
        self.require_unit_spectrum()?;
        Ok(self.eigenvalues.iter().map(|&l| h(l.clamp(0.0, 1.0))).sum::<f64>() / self.dim() as f64)
    }

    /// Normalized trace `tr(M)/dim`.
    pub fn normalized_trace(&self) -> f64 {
        self.matrix.trace() / self.dim() as f64
    }

    pub fn add(&self, other: &SpectralOperator) -> Result<SpectralOperator, TraceError> {
        self.same_dim(other)?;
        SpectralOperator::new(&self.matrix + &other.matrix)
    }

    pub fn sub(&self, other: &SpectralOperator) -> Result<SpectralOperator, TraceError> {
        self.same_dim(other)?;
        SpectralOperator::new(&self.matrix - &other.matrix)
    }

    pub fn scale(&self, c: f64) -> SpectralOperator {
        Self::from_eigen(self.eigenvalues.iter().map(|l| c * l).collect(), &self.eigenvectors)
    }

    /// `aI + bM`.
    pub fn affine(&self, a: f64, b: f64) -> SpectralOperator {
        self.map_spectrum(|l| a + b * l)
    }

    fn same_dim(&self, other: &SpectralOperator) -> Result<(), TraceError> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(TraceError::DimensionMismatch(self.dim(), other.dim()))
        }
    }
}

/// `A ≤ B` in the positive-semidefinite order: `λ_min(B − A) ≥ −tol`.
pub fn psd_leq(a: &SpectralOperator, b: &SpectralOperator, tol: f64) -> Result<bool, TraceError> {
    a.same_dim(b)?;
    Ok(b.sub(a)?.min_eigenvalue() >= -tol)
}

//! Technical-noise covariance models and sample-path generation.
//!
//! Each normalized difference count carries quantum noise of variance 1/|α|²
//! plus a zero-mean technical contribution η_i with
//! ⟨η_iη_j⟩ = η̃²·e^{−|i−j|/(Γτ)}. The two limits of that law get dedicated
//! kinds: white (Γ⁻¹ ≫ τ, delta-correlated) and colored (Γ⁻¹ ≪ τ, exactly
//! constant covariance); `PurelyQuantum` drops the technical term entirely,
//! and `Exponential` keeps the finite correlation with per-step factor
//! ρ = e^{−1/(Γτ)}.

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::ExperimentConfig;
use crate::scalar::{cast, Scalar};

/// Correlation structure of the technical noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoiseKind {
    /// Delta-correlated technical noise.
    White,
    /// Fully correlated technical noise: one shared offset per experiment.
    Colored,
    /// No technical noise at all; only the quantum 1/|α|² variance remains.
    PurelyQuantum,
    /// Finite correlation time: AR(1) decay ρ^{|i−j|}.
    Exponential,
}

impl NoiseKind {
    pub fn label(&self) -> &'static str {
        match self {
            NoiseKind::White => "white",
            NoiseKind::Colored => "colored",
            NoiseKind::PurelyQuantum => "quantum",
            NoiseKind::Exponential => "exponential",
        }
    }
}

/// Covariance specification of the technical noise overlaid on the data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel<T> {
    pub kind: NoiseKind,
    /// Technical-noise strength η̃².
    pub eta_sq: T,
    /// Per-step correlation ρ = e^{−1/(Γτ)} ∈ [0, 1); used by the
    /// exponential kind only.
    pub rho: T,
    /// Mean photon number |α|² setting the quantum variance 1/|α|².
    pub alpha_sq: T,
}

impl<T: Scalar> NoiseModel<T> {
    pub fn new(kind: NoiseKind, eta_sq: T, rho: T, alpha_sq: T) -> Result<Self> {
        if !eta_sq.is_finite() || eta_sq < T::zero() {
            return Err(Error::domain(
                "eta_sq",
                eta_sq.to_f64().unwrap_or(f64::NAN),
                "nonnegative",
            ));
        }
        if !alpha_sq.is_finite() || alpha_sq <= T::zero() {
            return Err(Error::domain(
                "alpha_sq",
                alpha_sq.to_f64().unwrap_or(f64::NAN),
                "strictly positive",
            ));
        }
        if !rho.is_finite() || rho < T::zero() || rho >= T::one() {
            return Err(Error::domain(
                "rho",
                rho.to_f64().unwrap_or(f64::NAN),
                "0 <= rho < 1",
            ));
        }
        Ok(NoiseModel {
            kind,
            eta_sq,
            rho,
            alpha_sq,
        })
    }

    pub fn white(eta_sq: T, alpha_sq: T) -> Result<Self> {
        Self::new(NoiseKind::White, eta_sq, T::zero(), alpha_sq)
    }

    pub fn colored(eta_sq: T, alpha_sq: T) -> Result<Self> {
        Self::new(NoiseKind::Colored, eta_sq, T::zero(), alpha_sq)
    }

    pub fn purely_quantum(alpha_sq: T) -> Result<Self> {
        Self::new(NoiseKind::PurelyQuantum, T::zero(), T::zero(), alpha_sq)
    }

    pub fn exponential(eta_sq: T, alpha_sq: T, rho: T) -> Result<Self> {
        Self::new(NoiseKind::Exponential, eta_sq, rho, alpha_sq)
    }

    /// Model matching an experiment configuration; the exponential per-step
    /// correlation is derived from the injection rate and correlation time as
    /// ρ = e^{−1/(Γτ)}.
    pub fn from_config(config: &ExperimentConfig<T>) -> Result<Self> {
        config.validate()?;
        let rho = match config.noise_regime {
            NoiseKind::Exponential => {
                let gamma_tau = config.gamma_rate * config.tau_corr;
                if gamma_tau > T::zero() {
                    (-gamma_tau.recip()).exp()
                } else {
                    T::zero()
                }
            }
            _ => T::zero(),
        };
        Self::new(
            config.noise_regime,
            config.effective_eta_sq(),
            rho,
            config.alpha_sq,
        )
    }

    /// η̃² with the purely-quantum override applied.
    pub fn effective_eta_sq(&self) -> T {
        match self.kind {
            NoiseKind::PurelyQuantum => T::zero(),
            _ => self.eta_sq,
        }
    }

    /// Quantum variance 1/|α|² on the diagonal.
    pub fn quantum_var(&self) -> T {
        self.alpha_sq.recip()
    }
}

/// Dense symmetric matrix of data covariances (or their inverse).
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix<T> {
    n: usize,
    entries: Vec<T>,
}

impl<T: Scalar> CovarianceMatrix<T> {
    pub(crate) fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        CovarianceMatrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.n + j]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    /// Sum over all entries, compensated: for the colored inverse the
    /// diagonal and off-diagonal parts cancel to a few parts in 10⁴.
    pub fn total(&self) -> T {
        crate::scalar::neumaier_sum(self.entries.iter().copied())
    }

    /// Matrix product, used by the inverse-identity checks.
    pub fn matmul(&self, other: &CovarianceMatrix<T>) -> CovarianceMatrix<T> {
        assert_eq!(self.n, other.n);
        CovarianceMatrix::from_fn(self.n, |i, j| {
            (0..self.n)
                .map(|k| self.get(i, k) * other.get(k, j))
                .sum()
        })
    }
}

/// Data covariance C_ij for `n` postselected events:
/// diagonal quantum term 1/|α|² plus the kind-specific technical term.
pub fn covariance<T: Scalar>(n: usize, model: &NoiseModel<T>) -> CovarianceMatrix<T> {
    let qv = model.quantum_var();
    let eta_sq = model.effective_eta_sq();
    match model.kind {
        NoiseKind::White => CovarianceMatrix::from_fn(n, |i, j| {
            if i == j {
                qv + eta_sq
            } else {
                T::zero()
            }
        }),
        NoiseKind::Colored => CovarianceMatrix::from_fn(n, |i, j| {
            if i == j {
                qv + eta_sq
            } else {
                eta_sq
            }
        }),
        NoiseKind::PurelyQuantum => {
            CovarianceMatrix::from_fn(n, |i, j| if i == j { qv } else { T::zero() })
        }
        NoiseKind::Exponential => CovarianceMatrix::from_fn(n, |i, j| {
            let lag = i.abs_diff(j);
            let corr = if lag == 0 {
                eta_sq
            } else {
                eta_sq * model.rho.powi(lag as i32)
            };
            if i == j {
                qv + corr
            } else {
                corr
            }
        }),
    }
}

/// Inverse covariance.
///
/// White and purely quantum kinds invert entrywise; the colored kind uses the
/// rank-one downdate C⁻¹_ij = δ_ij|α|² − η̃²|α|⁴/(1 + Nη̃²|α|²); the
/// exponential kind has no closed form here and is inverted through a
/// symmetric positive-definite factorization.
pub fn inverse_covariance<T: Scalar>(n: usize, model: &NoiseModel<T>) -> Result<CovarianceMatrix<T>> {
    let alpha_sq = model.alpha_sq;
    let eta_sq = model.effective_eta_sq();
    match model.kind {
        NoiseKind::White | NoiseKind::PurelyQuantum => {
            let w = alpha_sq / (T::one() + alpha_sq * eta_sq);
            Ok(CovarianceMatrix::from_fn(n, |i, j| {
                if i == j {
                    w
                } else {
                    T::zero()
                }
            }))
        }
        NoiseKind::Colored => {
            let n_t = cast::<T>(n as f64);
            let downdate =
                eta_sq * alpha_sq * alpha_sq / (T::one() + n_t * eta_sq * alpha_sq);
            Ok(CovarianceMatrix::from_fn(n, |i, j| {
                if i == j {
                    alpha_sq - downdate
                } else {
                    -downdate
                }
            }))
        }
        NoiseKind::Exponential => Cholesky::new(&covariance(n, model)).map(|c| c.inverse()),
    }
}

/// ln det C, through the matching closed forms (determinant lemma for the
/// colored rank-one structure) or the factorization.
pub fn log_determinant<T: Scalar>(n: usize, model: &NoiseModel<T>) -> Result<T> {
    let alpha_sq = model.alpha_sq;
    let eta_sq = model.effective_eta_sq();
    let n_t = cast::<T>(n as f64);
    match model.kind {
        NoiseKind::White | NoiseKind::PurelyQuantum => {
            Ok(n_t * (alpha_sq.recip() + eta_sq).ln())
        }
        NoiseKind::Colored => {
            Ok(-n_t * alpha_sq.ln() + (n_t * eta_sq * alpha_sq).ln_1p())
        }
        NoiseKind::Exponential => Cholesky::new(&covariance(n, model)).map(|c| c.log_det()),
    }
}

/// One technical-noise path of length `n`.
///
/// * purely quantum: all zeros;
/// * white: i.i.d. N(0, η̃²);
/// * colored: a single shared draw η ~ N(0, η̃²);
/// * exponential: stationary AR(1), η₀ ~ N(0, η̃²),
///   η_{i+1} = ρ·η_i + η̃·√(1−ρ²)·ξ_i.
pub fn sample_noise<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    model: &NoiseModel<T>,
) -> Vec<T> {
    let eta = model.effective_eta_sq().sqrt();
    match model.kind {
        NoiseKind::PurelyQuantum => vec![T::zero(); n],
        NoiseKind::White => (0..n).map(|_| eta * T::standard_normal(rng)).collect(),
        NoiseKind::Colored => {
            let shared = eta * T::standard_normal(rng);
            vec![shared; n]
        }
        NoiseKind::Exponential => {
            let innovation = eta * (T::one() - model.rho * model.rho).sqrt();
            let mut path = Vec::with_capacity(n);
            let mut current = eta * T::standard_normal(rng);
            path.push(current);
            for _ in 1..n {
                current = model.rho * current + innovation * T::standard_normal(rng);
                path.push(current);
            }
            path
        }
    }
}

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
#[derive(Debug, Clone)]
pub struct Cholesky<T> {
    n: usize,
    factor: Vec<T>,
}

impl<T: Scalar> Cholesky<T> {
    pub fn new(matrix: &CovarianceMatrix<T>) -> Result<Self> {
        let n = matrix.n();
        let mut factor = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut sum = matrix.get(i, j);
                for k in 0..j {
                    sum -= factor[i * n + k] * factor[j * n + k];
                }
                if i == j {
                    if sum <= T::zero() {
                        return Err(Error::SingularCovariance);
                    }
                    factor[i * n + j] = sum.sqrt();
                } else {
                    factor[i * n + j] = sum / factor[j * n + j];
                }
            }
        }
        Ok(Cholesky { n, factor })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Solves C·x = rhs.
    pub fn solve(&self, rhs: &[T]) -> Vec<T> {
        assert_eq!(rhs.len(), self.n);
        let n = self.n;
        let mut x = rhs.to_vec();
        // Forward: L y = rhs.
        for i in 0..n {
            let mut sum = x[i];
            for k in 0..i {
                sum -= self.factor[i * n + k] * x[k];
            }
            x[i] = sum / self.factor[i * n + i];
        }
        // Backward: Lᵀ x = y.
        for i in (0..n).rev() {
            let mut sum = x[i];
            for k in i + 1..n {
                sum -= self.factor[k * n + i] * x[k];
            }
            x[i] = sum / self.factor[i * n + i];
        }
        x
    }

    /// Full inverse, column by column.
    pub fn inverse(&self) -> CovarianceMatrix<T> {
        let n = self.n;
        let mut inv = vec![T::zero(); n * n];
        let mut unit = vec![T::zero(); n];
        for j in 0..n {
            unit[j] = T::one();
            let column = self.solve(&unit);
            unit[j] = T::zero();
            for i in 0..n {
                inv[i * n + j] = column[i];
            }
        }
        CovarianceMatrix { n, entries: inv }
    }

    /// ln det C = 2·Σ ln L_ii.
    pub fn log_det(&self) -> T {
        let n = self.n;
        let mut acc = T::zero();
        for i in 0..n {
            acc += self.factor[i * n + i].ln();
        }
        acc + acc
    }
}

/// Inverse-covariance operator in factored form, for the likelihood-side
/// quadratic forms. Produces the same values as [`inverse_covariance`]
/// without materializing N×N matrices for the closed-form kinds.
#[derive(Debug, Clone)]
pub struct Precision<T> {
    n: usize,
    log_det_cov: T,
    op: PrecisionOp<T>,
}

#[derive(Debug, Clone)]
enum PrecisionOp<T> {
    /// C⁻¹ = w·I.
    Diagonal { w: T },
    /// C⁻¹ = a·I − c·𝟙𝟙ᵀ.
    RankOneDowndate { a: T, c: T },
    /// General SPD factorization.
    Dense(Cholesky<T>),
}

impl<T: Scalar> Precision<T> {
    pub fn new(n: usize, model: &NoiseModel<T>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyRange { what: "data" });
        }
        let alpha_sq = model.alpha_sq;
        let eta_sq = model.effective_eta_sq();
        let log_det_cov = log_determinant(n, model)?;
        let op = match model.kind {
            NoiseKind::White | NoiseKind::PurelyQuantum => PrecisionOp::Diagonal {
                w: alpha_sq / (T::one() + alpha_sq * eta_sq),
            },
            NoiseKind::Colored => {
                let n_t = cast::<T>(n as f64);
                PrecisionOp::RankOneDowndate {
                    a: alpha_sq,
                    c: eta_sq * alpha_sq * alpha_sq
                        / (T::one() + n_t * eta_sq * alpha_sq),
                }
            }
            NoiseKind::Exponential => PrecisionOp::Dense(Cholesky::new(&covariance(n, model))?),
        };
        Ok(Precision {
            n,
            log_det_cov,
            op,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// ln det C of the underlying covariance.
    pub fn log_det_cov(&self) -> T {
        self.log_det_cov
    }

    fn check(&self, v: &[T]) -> Result<()> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: v.len(),
            });
        }
        Ok(())
    }

    /// 𝟙ᵀC⁻¹v.
    pub fn weighted_sum(&self, v: &[T]) -> Result<T> {
        self.check(v)?;
        let sum: T = v.iter().copied().sum();
        Ok(match &self.op {
            PrecisionOp::Diagonal { w } => *w * sum,
            PrecisionOp::RankOneDowndate { a, c } => {
                (*a - *c * cast::<T>(self.n as f64)) * sum
            }
            PrecisionOp::Dense(chol) => chol.solve(v).iter().copied().sum(),
        })
    }

    /// vᵀC⁻¹v.
    pub fn quadratic(&self, v: &[T]) -> Result<T> {
        self.check(v)?;
        Ok(match &self.op {
            PrecisionOp::Diagonal { w } => {
                *w * v.iter().map(|&x| x * x).sum::<T>()
            }
            PrecisionOp::RankOneDowndate { a, c } => {
                let sum: T = v.iter().copied().sum();
                *a * v.iter().map(|&x| x * x).sum::<T>() - *c * sum * sum
            }
            PrecisionOp::Dense(chol) => chol
                .solve(v)
                .iter()
                .zip(v)
                .map(|(&x, &y)| x * y)
                .sum(),
        })
    }

    /// Σ_ij C⁻¹_ij = 𝟙ᵀC⁻¹𝟙.
    pub fn total(&self) -> T {
        let n_t = cast::<T>(self.n as f64);
        match &self.op {
            PrecisionOp::Diagonal { w } => *w * n_t,
            PrecisionOp::RankOneDowndate { a, c } => n_t * (*a - *c * n_t),
            PrecisionOp::Dense(chol) => {
                let ones = vec![T::one(); self.n];
                chol.solve(&ones).iter().copied().sum()
            }
        }
    }
}

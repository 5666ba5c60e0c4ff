//! Haar-distributed sampling on `O_p`/`SO_p` and averaging over the group.
//!
//! Sampling is the standard Gaussian-QR construction with the R-diagonal
//! sign fix, which makes the distribution exactly Haar; the `SO_p` sampler
//! negates the first column of determinant `-1` draws (a measure-preserving
//! bijection between the two cosets). Averages come in three flavors:
//! Monte Carlo with a caller-supplied RNG, an equispaced deterministic rule
//! for `p = 2` (spectrally exact for analytic integrands), and averaging
//! over a fixed caller-provided sample list so that two integrands can be
//! compared on the *same* samples.

use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{real, real_usize, Real};

/// Which compact group acts: full orthogonal or special orthogonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    O,
    SO,
}

impl std::fmt::Display for GroupKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroupKind::O => write!(f, "O"),
            GroupKind::SO => write!(f, "SO"),
        }
    }
}

/// A Monte-Carlo (or deterministic) integration result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate<T> {
    pub value: Complex<T>,
    pub std_error: T,
    pub n_samples: usize,
}

impl<T: Real> MCEstimate<T> {
    /// Wrap a deterministically computed value (standard error zero).
    pub fn exact(value: Complex<T>) -> Self {
        Self {
            value,
            std_error: T::zero(),
            n_samples: 0,
        }
    }
}

/// Draw one Haar-distributed matrix from `O_p` or `SO_p`.
pub fn sample_haar<T: Real, R: Rng + ?Sized>(
    kind: GroupKind,
    p: usize,
    rng: &mut R,
) -> Array2<T> {
    assert!(p >= 1, "sample_haar requires p >= 1");
    let mut g = Array2::<T>::zeros((p, p));
    for v in g.iter_mut() {
        let x: f64 = rng.sample(StandardNormal);
        *v = real(x);
    }
    let (mut q, r) = linalg::householder_qr(&g);
    for i in 0..p {
        if r[[i, i]] < T::zero() {
            for row in 0..p {
                q[[row, i]] = -q[[row, i]];
            }
        }
    }
    if kind == GroupKind::SO && linalg::determinant(&q) < T::zero() {
        for row in 0..p {
            q[[row, 0]] = -q[[row, 0]];
        }
    }
    q
}

/// 2x2 rotation by `theta`.
pub fn rotation2<T: Real>(theta: T) -> Array2<T> {
    let (s, c) = theta.sin_cos();
    let mut m = Array2::zeros((2, 2));
    m[[0, 0]] = c;
    m[[0, 1]] = -s;
    m[[1, 0]] = s;
    m[[1, 1]] = c;
    m
}

/// 2x2 reflection: rotation by `theta` composed with `diag(1, -1)`.
pub fn reflection2<T: Real>(theta: T) -> Array2<T> {
    let (s, c) = theta.sin_cos();
    let mut m = Array2::zeros((2, 2));
    m[[0, 0]] = c;
    m[[0, 1]] = s;
    m[[1, 0]] = s;
    m[[1, 1]] = -c;
    m
}

/// Integration strategy for averages over `K`.
#[derive(Debug, Clone)]
enum Mode<T> {
    MonteCarlo { n_samples: usize },
    /// Equispaced rotations (plus the reflection coset for `O_2`); exact to
    /// quadrature error for `p = 2`, standard error reported as zero.
    Equispaced2 { points: usize },
    Fixed(Arc<Vec<Array2<T>>>),
}

/// An averaging operator over `K = O_p` or `SO_p`.
#[derive(Debug, Clone)]
pub struct KAverager<T> {
    kind: GroupKind,
    mode: Mode<T>,
}

/// Default number of rotation points for the deterministic `p = 2` rule.
pub const DEFAULT_P2_POINTS: usize = 256;

impl<T: Real> KAverager<T> {
    pub fn monte_carlo(kind: GroupKind, n_samples: usize) -> Self {
        Self {
            kind,
            mode: Mode::MonteCarlo { n_samples },
        }
    }

    /// Deterministic integrator for `p = 2`: `points` equispaced rotations,
    /// doubled by the reflection coset when `kind` is `O`.
    pub fn deterministic_p2(kind: GroupKind, points: usize) -> Self {
        Self {
            kind,
            mode: Mode::Equispaced2 {
                points: points.max(1),
            },
        }
    }

    /// Average over a fixed, shared sample list (paired-sample mode).
    pub fn fixed(kind: GroupKind, samples: Arc<Vec<Array2<T>>>) -> Self {
        Self {
            kind,
            mode: Mode::Fixed(samples),
        }
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn is_deterministic(&self) -> bool {
        matches!(self.mode, Mode::Equispaced2 { .. })
    }

    /// Materialize the sample list this averager would use. For the
    /// deterministic rule the list is the fixed quadrature points; for
    /// Monte Carlo it consumes `n_samples` fresh draws from `rng`.
    pub fn samples<R: Rng + ?Sized>(&self, p: usize, rng: &mut R) -> Result<Vec<Array2<T>>> {
        match &self.mode {
            Mode::MonteCarlo { n_samples } => Ok((0..*n_samples)
                .map(|_| sample_haar(self.kind, p, rng))
                .collect()),
            Mode::Equispaced2 { points } => {
                if p != 2 {
                    return Err(Error::InvalidParameter(format!(
                        "deterministic equispaced rule requires p = 2, got p = {p}"
                    )));
                }
                let mut out = Vec::with_capacity(2 * points);
                for j in 0..*points {
                    let theta = T::TAU() * real_usize::<T>(j) / real_usize::<T>(*points);
                    out.push(rotation2(theta));
                    if self.kind == GroupKind::O {
                        out.push(reflection2(theta));
                    }
                }
                Ok(out)
            }
            Mode::Fixed(samples) => Ok(samples.as_ref().clone()),
        }
    }

    /// Average `f` over `K`. For Monte Carlo the standard error is the
    /// sample standard deviation of the complex values over `√N`; the
    /// deterministic rule reports zero.
    pub fn average<R: Rng + ?Sized>(
        &self,
        p: usize,
        rng: &mut R,
        f: impl Fn(&Array2<T>) -> Complex<T>,
    ) -> Result<MCEstimate<T>> {
        match &self.mode {
            Mode::MonteCarlo { n_samples } => {
                if *n_samples < 2 {
                    return Err(Error::InvalidParameter(
                        "Monte-Carlo averaging needs at least 2 samples".into(),
                    ));
                }
                let mut sum = Complex::new(T::zero(), T::zero());
                let mut sum_sq = T::zero();
                for _ in 0..*n_samples {
                    let k = sample_haar(self.kind, p, rng);
                    let v = f(&k);
                    sum = sum + v;
                    sum_sq += v.norm_sqr();
                }
                let nf = real_usize::<T>(*n_samples);
                let mean = sum / nf;
                let var = ((sum_sq - mean.norm_sqr() * nf) / (nf - T::one())).max(T::zero());
                Ok(MCEstimate {
                    value: mean,
                    std_error: (var / nf).sqrt(),
                    n_samples: *n_samples,
                })
            }
            Mode::Equispaced2 { .. } => {
                let pts = self.samples(p, rng)?;
                let mut sum = Complex::new(T::zero(), T::zero());
                for k in &pts {
                    sum = sum + f(k);
                }
                Ok(MCEstimate {
                    value: sum / real_usize::<T>(pts.len()),
                    std_error: T::zero(),
                    n_samples: pts.len(),
                })
            }
            Mode::Fixed(samples) => {
                let n = samples.len();
                if n == 0 {
                    return Err(Error::InvalidParameter(
                        "fixed-sample averaging needs a nonempty sample list".into(),
                    ));
                }
                let mut sum = Complex::new(T::zero(), T::zero());
                let mut sum_sq = T::zero();
                for k in samples.iter() {
                    let v = f(k);
                    sum = sum + v;
                    sum_sq += v.norm_sqr();
                }
                let nf = real_usize::<T>(n);
                let mean = sum / nf;
                let std_error = if n >= 2 {
                    let var = ((sum_sq - mean.norm_sqr() * nf) / (nf - T::one())).max(T::zero());
                    (var / nf).sqrt()
                } else {
                    T::zero()
                };
                Ok(MCEstimate {
                    value: mean,
                    std_error,
                    n_samples: n,
                })
            }
        }
    }
}

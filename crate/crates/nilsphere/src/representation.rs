//! The explicit irreducible representation `Π_{r,Λ}` of `N_p` on
//! `L²(ℝ^{p0})`, Hermite basis vectors, and the matrix-element route to the
//! spherical functions.
//!
//! The action is a phase times an argument shift:
//!
//! `(Π(n)f)(y) = exp(i[<D₂(Λ),A> + r x_p - Σ_j ((λ_j/2) x_{2j} x_{2j-1}
//!     + √λ_j x_{2j} y_j)]) · f(y_1 + √λ_1 x_1, …, y_{p0} + √λ_{p0} x_{2p0-1})`
//!
//! The signs of the quadratic and coupling terms are fixed by two
//! requirements under this crate's bracket convention
//! (`[X_1,X_2]` has matrix entry `(2,1) = +1`): `Π` must be a group
//! homomorphism for the product `(X,A)(X',A') = (X+X', A+A'+½[X,X'])`, and
//! the diagonal matrix elements `<Π(n)ζ_α, ζ_α>` must reproduce the
//! `Θ` integrand exactly on multiplicity-one blocks. Both are enforced by
//! tests; with the opposite signs the homomorphism fails.
//!
//! Matrix elements factor across coordinates, so each one costs `p0`
//! one-dimensional Gauss-Hermite sums. Integrands are evaluated with the
//! Gaussian part folded into one exponent (`hermite_scaled` times
//! `e^{-s y - s²/2}`), which keeps edge nodes harmless.

use num_complex::Complex;
use rand::Rng;

use crate::canonical::{LambdaSpec, OrbitProfile, SphericalIndex};
use crate::error::{Error, Result};
use crate::haar::{GroupKind, KAverager, MCEstimate};
use crate::lie::{k_action, z_inner, GroupPoint};
use crate::quad::GaussRule;
use crate::scalar::{real, real_usize, Real};
use crate::special::{hermite_multi, hermite_scaled};

/// Quadrature cost gate for matrix elements.
pub const MAX_P0_QUAD: usize = 3;

/// Default Gauss-Hermite node count; with shifts `|√λ x| ≤ 4` this gives
/// matrix elements accurate to better than 1e-10 (checked by node doubling).
pub const DEFAULT_HERMITE_NODES: usize = 64;

/// A Hermite multi-index `α ∈ E_l`: one degree per oscillator coordinate,
/// grouped into blocks by the orbit profile with block sums `Σ α^j = l_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiIndex {
    pub alpha: Vec<usize>,
}

/// Enumerate `E_l`: all compositions of each `l_j` into `m_j` parts,
/// combined across blocks, in deterministic lexicographic order
/// (first coordinate decreasing). Size is `Π_j C(l_j + m_j - 1, m_j - 1)`.
pub fn enumerate_el<T: Real>(l: &[usize], profile: &OrbitProfile<T>) -> Result<Vec<MultiIndex>> {
    if l.len() != profile.p1 {
        return Err(Error::InvalidParameter(format!(
            "enumerate_el: l has {} entries but the profile has p1 = {}",
            l.len(),
            profile.p1
        )));
    }
    let mut result = vec![MultiIndex { alpha: Vec::new() }];
    for (j, &lj) in l.iter().enumerate() {
        let parts = compositions(lj, profile.m[j]);
        let mut next = Vec::with_capacity(result.len() * parts.len());
        for head in &result {
            for tail in &parts {
                let mut alpha = head.alpha.clone();
                alpha.extend_from_slice(tail);
                next.push(MultiIndex { alpha });
            }
        }
        result = next;
    }
    Ok(result)
}

/// Compositions of `total` into `parts` nonnegative summands, first part
/// decreasing.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    assert!(parts >= 1);
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for rest in compositions(total - first, parts - 1) {
            let mut c = Vec::with_capacity(parts);
            c.push(first);
            c.extend_from_slice(&rest);
            out.push(c);
        }
    }
    out
}

/// The Hermite basis vector `ζ_α` evaluated at a point of `ℝ^{p0}`.
pub fn zeta_eval<T: Real>(alpha: &MultiIndex, y: &[T]) -> T {
    hermite_multi(&alpha.alpha, y)
}

/// Phase and shift data of `Π_{r,Λ}(n)`.
struct PiAction<T> {
    p0: usize,
    base_phase: T,
    coupling: Vec<T>,
    shift: Vec<T>,
}

fn pi_action<T: Real>(r: T, lambda: &LambdaSpec<T>, n: &GroupPoint<T>) -> Result<PiAction<T>> {
    if lambda.is_zero() {
        return Err(Error::InvalidParameter(
            "Π_{r,Λ} requires Λ ≠ 0 (Λ = 0 representations are one-dimensional)".into(),
        ));
    }
    if n.p() != lambda.p() {
        return Err(Error::DimensionMismatch(format!(
            "pi action: point has p = {}, Λ has p = {}",
            n.p(),
            lambda.p()
        )));
    }
    let p0 = lambda.lambdas().iter().filter(|&&v| v > T::zero()).count();
    let coords = n.x().coords();
    let d2 = crate::canonical::d2_matrix(lambda, None);
    let mut base_phase = z_inner(&d2, n.a())? + r * coords[n.p() - 1];
    let mut coupling = Vec::with_capacity(p0);
    let mut shift = Vec::with_capacity(p0);
    for j in 0..p0 {
        let lam = lambda.lambdas()[j];
        let odd = coords[2 * j];
        let even = coords[2 * j + 1];
        base_phase -= lam * real(0.5) * even * odd;
        coupling.push(lam.sqrt() * even);
        shift.push(lam.sqrt() * odd);
    }
    Ok(PiAction {
        p0,
        base_phase,
        coupling,
        shift,
    })
}

/// Apply `Π_{r,Λ}(n)` to a function on `ℝ^{p0}`, returning the transformed
/// function. Unitary on `L²(ℝ^{p0})`.
pub fn pi_apply<T: Real>(
    r: T,
    lambda: &LambdaSpec<T>,
    n: &GroupPoint<T>,
    f: impl Fn(&[T]) -> Complex<T> + 'static,
) -> Result<Box<dyn Fn(&[T]) -> Complex<T>>> {
    let act = pi_action(r, lambda, n)?;
    Ok(Box::new(move |y: &[T]| {
        assert_eq!(y.len(), act.p0, "argument dimension must equal p0");
        let mut phase = act.base_phase;
        let mut shifted = Vec::with_capacity(act.p0);
        for j in 0..act.p0 {
            phase -= act.coupling[j] * y[j];
            shifted.push(y[j] + act.shift[j]);
        }
        Complex::from_polar(T::one(), phase) * f(&shifted)
    }))
}

/// Diagonal matrix element `<Π_{r,Λ}(n) ζ_α, ζ_α>` by Gauss-Hermite
/// quadrature. The integral factors across the `p0` coordinates.
pub fn matrix_element<T: Real>(
    r: T,
    lambda: &LambdaSpec<T>,
    alpha: &MultiIndex,
    n: &GroupPoint<T>,
    rule: &GaussRule<T>,
) -> Result<Complex<T>> {
    let act = pi_action(r, lambda, n)?;
    if act.p0 > MAX_P0_QUAD {
        return Err(Error::Budget(format!(
            "matrix_element: p0 = {} exceeds the quadrature gate {MAX_P0_QUAD}",
            act.p0
        )));
    }
    if alpha.alpha.len() != act.p0 {
        return Err(Error::DimensionMismatch(format!(
            "matrix_element: α has {} entries but p0 = {}",
            alpha.alpha.len(),
            act.p0
        )));
    }
    let mut value = Complex::from_polar(T::one(), act.base_phase);
    for j in 0..act.p0 {
        let s = act.shift[j];
        let c = act.coupling[j];
        let deg = alpha.alpha[j];
        let mut acc = Complex::new(T::zero(), T::zero());
        for (&x, &w) in rule.nodes.iter().zip(rule.weights.iter()) {
            // h_a(x+s) h_a(x) e^{-icx} with the Gaussian folded into one
            // exponent: scaled-Hermite product times e^{-sx - s²/2}.
            let magnitude = hermite_scaled(deg, x + s)
                * hermite_scaled(deg, x)
                * (-s * x - s * s * real(0.5)).exp();
            acc = acc + Complex::from_polar(w * magnitude, -c * x);
        }
        value = value * acc;
    }
    Ok(value)
}

/// The spherical function by the representation route: the `K`-average of
/// `<Π(k·n) ζ_α, ζ_α>` for a fixed `α ∈ E_l` (the average is independent of
/// the choice). Serves as the independent oracle for the `Θ`-route `phi`.
pub fn phi_via_rep<T: Real, R: Rng + ?Sized>(
    idx: &SphericalIndex<T>,
    n: &GroupPoint<T>,
    averager: &KAverager<T>,
    rule: &GaussRule<T>,
    rng: &mut R,
) -> Result<MCEstimate<T>> {
    if idx.group() != GroupKind::O {
        return Err(Error::InvalidIndex(
            "the representation route is implemented for the O_p pair".into(),
        ));
    }
    if idx.lambda().is_zero() {
        return Err(Error::InvalidIndex(
            "phi_via_rep requires Λ ≠ 0; use phi_bessel for Λ = 0".into(),
        ));
    }
    if n.p() != idx.p() {
        return Err(Error::DimensionMismatch(format!(
            "phi_via_rep: index has p = {}, point has p = {}",
            idx.p(),
            n.p()
        )));
    }
    let alpha = enumerate_el(idx.l(), idx.profile())?
        .into_iter()
        .next()
        .expect("E_l is never empty");
    averager.average(idx.p(), rng, |k| {
        let moved = k_action(k, n).expect("Haar samples are orthogonal");
        matrix_element(idx.r(), idx.lambda(), &alpha, &moved, rule).expect("validated parameters")
    })
}

/// Sub-Laplacian eigenvalue of the spherical function:
/// `Σ_j μ_j (2 l_j + m_j) + r²` over the distinct values `μ_j` with
/// multiplicities `m_j`; reduces to `r²` for `Λ = 0`.
pub fn sublap_eigenvalue<T: Real>(idx: &SphericalIndex<T>) -> T {
    let profile = idx.profile();
    let mut acc = idx.r() * idx.r();
    for j in 0..profile.p1 {
        acc += profile.mu[j] * real_usize::<T>(2 * idx.l()[j] + profile.m[j]);
    }
    acc
}

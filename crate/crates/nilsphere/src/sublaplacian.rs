//! Finite-difference application of left-invariant second derivatives and
//! the Kohn sub-Laplacian `L = -Σ X_i²` to scalar functions on `N_p`.
//!
//! `X_i² f(n)` is the second `t`-derivative of `f` along the one-parameter
//! curve `n · exp(t X_i)`, taken with a 5-point central stencil (`O(h⁴)`
//! truncation). Only deterministically evaluable functions should be fed
//! here: differencing amplifies Monte-Carlo noise by `1/h²`, so spectral
//! checks of MC-only spherical functions go through the representation
//! route instead.

use num_complex::Complex;

use crate::error::Result;
use crate::lie::{one_param_curve, GroupPoint, VVector, ZSkew};
use crate::scalar::{real, Real};

/// Default step for the 5-point stencil; balances `h⁴` truncation against
/// rounding for O(1)-scaled functions.
pub const DEFAULT_FD_STEP: f64 = 1e-2;

/// Second derivative of `f` along the left-invariant direction `X_{i+1}`
/// (zero-based `i`) at `n`, by the 5-point central stencil.
pub fn second_derivative<T, F>(f: &F, n: &GroupPoint<T>, i: usize, h: T) -> Result<Complex<T>>
where
    T: Real,
    F: Fn(&GroupPoint<T>) -> Complex<T>,
{
    let p = n.p();
    assert!(i < p, "direction index {i} out of range for p = {p}");
    let e_i = VVector::basis(p, i);
    let za = ZSkew::zero(p);
    let at = |t: T| -> Result<Complex<T>> { Ok(f(&one_param_curve(n, &e_i, &za, t)?)) };
    let two = real::<T>(2.0);
    let c16 = real::<T>(16.0);
    let c30 = real::<T>(30.0);
    let c12 = real::<T>(12.0);
    let num = -at(-two * h)? + at(-h)? * c16 - at(T::zero())? * c30 + at(h)? * c16 - at(two * h)?;
    Ok(num / (c12 * h * h))
}

/// The Kohn sub-Laplacian: `(L f)(n) = -Σ_{i=1}^p X_i² f(n)`.
pub fn sublap_apply<T, F>(f: &F, n: &GroupPoint<T>, h: T) -> Result<Complex<T>>
where
    T: Real,
    F: Fn(&GroupPoint<T>) -> Complex<T>,
{
    let mut acc = Complex::new(T::zero(), T::zero());
    for i in 0..n.p() {
        acc = acc + second_derivative(f, n, i, h)?;
    }
    Ok(-acc)
}

/// Richardson extrapolation of [`sublap_apply`] from steps `h` and `h/2`
/// (`O(h⁶)` truncation).
pub fn sublap_apply_richardson<T, F>(f: &F, n: &GroupPoint<T>, h: T) -> Result<Complex<T>>
where
    T: Real,
    F: Fn(&GroupPoint<T>) -> Complex<T>,
{
    let coarse = sublap_apply(f, n, h)?;
    let fine = sublap_apply(f, n, h * real(0.5))?;
    Ok((fine * real::<T>(16.0) - coarse) / real::<T>(15.0))
}

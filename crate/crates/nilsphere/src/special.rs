//! Scalar special functions: normalized Laguerre, reduced Bessel, Hermite.
//!
//! Normalizations are chosen so that every function equals 1 at the origin
//! (Laguerre, Bessel) or is orthonormal in `L²(ℝ)` (Hermite), which is what
//! the spherical-function formulas consume.

use crate::error::{Error, Result};
use crate::scalar::{real, real_usize, Real};

/// Power-series term cap; exceeding it flags an accuracy error.
pub const MAX_SERIES_TERMS: usize = 400;

/// Largest argument handled by the single global Bessel power series.
/// Beyond this the alternating series loses digits to cancellation
/// (the term of largest modulus grows like `e^z`), so evaluation switches
/// to Taylor stepping of the defining ODE.
const BESSEL_SERIES_Z_MAX: f64 = 6.0;

/// Step size for the Taylor continuation of the Bessel ODE.
const BESSEL_STEP: f64 = 1.5;

/// Terms per Taylor step of the Bessel ODE continuation.
const BESSEL_STEP_TERMS: usize = 40;

/// Natural log of the Gamma function for positive arguments.
///
/// Integer and half-integer arguments (the only orders produced by the
/// orbit profiles: `m_j - 1` and `(p-2)/2`) take an exact product path;
/// everything else goes through a shifted Stirling series.
pub fn ln_gamma<T: Real>(x: T) -> T {
    assert!(x > T::zero(), "ln_gamma requires a positive argument");
    let two_x = x + x;
    let rounded = two_x.round();
    if (two_x - rounded).abs() <= T::zero() {
        let k = rounded.to_u64();
        if let Some(k) = k {
            if k % 2 == 0 {
                // x = n, an integer >= 1: ln (n-1)!
                let n = k / 2;
                if (1..=170).contains(&n) {
                    let mut acc = T::zero();
                    for j in 2..n {
                        acc += real_usize::<T>(j as usize).ln();
                    }
                    return acc;
                }
            } else if k <= 341 {
                // x = m + 1/2: Γ(x) = (m-1/2)(m-3/2)...(1/2)·√π
                let m = (k - 1) / 2;
                let mut acc = T::PI().sqrt().ln();
                for j in 0..m {
                    acc += (real_usize::<T>(j as usize) + real(0.5)).ln();
                }
                return acc;
            }
        }
    }
    ln_gamma_stirling(x)
}

fn ln_gamma_stirling<T: Real>(mut x: T) -> T {
    let mut shift = T::zero();
    while x < real(10.0) {
        shift -= x.ln();
        x += T::one();
    }
    let inv = T::one() / x;
    let inv2 = inv * inv;
    // Bernoulli-number asymptotic series, accurate to ~1e-16 for x >= 10.
    let series = inv
        * (real::<T>(1.0 / 12.0)
            + inv2
                * (real::<T>(-1.0 / 360.0)
                    + inv2
                        * (real::<T>(1.0 / 1260.0)
                            + inv2
                                * (real::<T>(-1.0 / 1680.0)
                                    + inv2
                                        * (real::<T>(1.0 / 1188.0)
                                            + inv2 * real::<T>(-691.0 / 360360.0))))));
    let half = real::<T>(0.5);
    shift + (x - half) * x.ln() - x + half * (T::TAU()).ln() + series
}

/// Generalized Laguerre polynomial `L_n^α(x)` by the three-term recurrence.
pub fn laguerre_poly<T: Real>(n: usize, alpha: T, x: T) -> T {
    if n == 0 {
        return T::one();
    }
    let mut prev = T::one();
    let mut cur = T::one() + alpha - x;
    for k in 1..n {
        let kf = real_usize::<T>(k);
        let next = ((kf + kf + T::one() + alpha - x) * cur - (kf + alpha) * prev)
            / (kf + T::one());
        prev = cur;
        cur = next;
    }
    cur
}

/// Normalized Laguerre function `L_n^α(x) e^{-x/2} / C(n+α, n)`,
/// valued exactly 1 at `x = 0`.
pub fn laguerre_norm<T: Real>(n: usize, alpha: T, x: T) -> Result<T> {
    if alpha <= -T::one() {
        return Err(Error::InvalidParameter(format!(
            "laguerre_norm requires alpha > -1, got {alpha}"
        )));
    }
    if x == T::zero() {
        // L_n^α(0) = C(n+α, n), so normalization forces exactly 1.
        return Ok(T::one());
    }
    // C(n+α, n) = Γ(n+α+1)/(n! Γ(α+1)) = Π_{k=1..n} (α+k)/k.
    let mut c = T::one();
    for k in 1..=n {
        let kf = real_usize::<T>(k);
        c = c * (alpha + kf) / kf;
    }
    let l = laguerre_poly(n, alpha, x);
    Ok(l * (-x * real(0.5)).exp() / c)
}

/// Reduced Bessel function `Γ(α+1) (z/2)^{-α} J_α(z)`, valued 1 at `z = 0`.
///
/// For small `z` the defining power series is summed with compensated
/// accumulation; for larger `z` the value is carried forward by Taylor
/// steps of the ODE `z u'' + (2α+1) u' + z u = 0`, which keeps full
/// precision where the global series would cancel catastrophically.
pub fn bessel_reduced<T: Real>(alpha: T, z: T) -> Result<T> {
    if alpha <= -T::one() {
        return Err(Error::InvalidParameter(format!(
            "bessel_reduced requires alpha > -1, got {alpha}"
        )));
    }
    let z = z.abs();
    if z == T::zero() {
        return Ok(T::one());
    }
    let series_max = real(BESSEL_SERIES_Z_MAX);
    if z <= series_max {
        return Ok(bessel_series(alpha, z)?.0);
    }
    let (mut u, mut du) = bessel_series(alpha, series_max)?;
    let mut z0: T = series_max;
    let step = real(BESSEL_STEP);
    while z0 < z {
        let h = (z - z0).min(step);
        let (nu, ndu) = bessel_ode_step(alpha, z0, u, du, h);
        u = nu;
        du = ndu;
        z0 += h;
    }
    Ok(u)
}

/// Power series value and derivative of the reduced Bessel function.
fn bessel_series<T: Real>(alpha: T, z: T) -> Result<(T, T)> {
    let q = z * z * real(0.25);
    let mut term = T::one();
    let mut sum = T::one();
    let mut dsum = T::zero();
    let mut comp = T::zero();
    let mut dcomp = T::zero();
    for k in 0..MAX_SERIES_TERMS {
        let kf = real_usize::<T>(k);
        term = -term * q / ((kf + T::one()) * (kf + T::one() + alpha));
        // Kahan update for the value and the z-derivative.
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        let dterm = term * (kf + kf + real(2.0)) / z;
        let dy = dterm - dcomp;
        let dt = dsum + dy;
        dcomp = (dt - dsum) - dy;
        dsum = dt;
        if term.abs() <= T::epsilon() * sum.abs().max(T::one()) {
            return Ok((sum, dsum));
        }
    }
    Err(Error::Budget(format!(
        "Bessel series did not converge within {MAX_SERIES_TERMS} terms at z = {z}"
    )))
}

/// One Taylor step of `z u'' + (2α+1) u' + z u = 0` from `z0` to `z0 + h`.
fn bessel_ode_step<T: Real>(alpha: T, z0: T, u: T, du: T, h: T) -> (T, T) {
    let mut c = [T::zero(); BESSEL_STEP_TERMS + 2];
    c[0] = u;
    c[1] = du;
    let two_alpha_p1 = alpha + alpha + T::one();
    for m in 0..BESSEL_STEP_TERMS {
        let mf = real_usize::<T>(m);
        let prev = if m == 0 { T::zero() } else { c[m - 1] };
        c[m + 2] = -((mf + T::one()) * (mf + two_alpha_p1) * c[m + 1] + z0 * c[m] + prev)
            / (z0 * (mf + real(2.0)) * (mf + T::one()));
    }
    let mut value = T::zero();
    let mut deriv = T::zero();
    for m in (0..c.len()).rev() {
        value = value * h + c[m];
        if m > 0 {
            deriv = deriv * h + real_usize::<T>(m) * c[m];
        }
    }
    (value, deriv)
}

/// `L²(ℝ)`-orthonormal Hermite function `h_k(x)`.
pub fn hermite_fn<T: Real>(k: usize, x: T) -> T {
    hermite_scaled(k, x) * (-x * x * real(0.5)).exp()
}

/// Gaussian-free Hermite factor `h_k(x) e^{x²/2}` (a polynomial), used by
/// quadrature code that keeps the Gaussian part in a combined exponent.
pub fn hermite_scaled<T: Real>(k: usize, x: T) -> T {
    let h0 = T::PI().powf(real(-0.25));
    if k == 0 {
        return h0;
    }
    let mut prev = h0;
    let mut cur = x * real::<T>(2.0).sqrt() * h0;
    for j in 1..k {
        let jf = real_usize::<T>(j);
        let next = x * (real::<T>(2.0) / (jf + T::one())).sqrt() * cur
            - (jf / (jf + T::one())).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Multi-dimensional Hermite function: product of `h_{α_i}(y_i)`.
pub fn hermite_multi<T: Real>(alpha: &[usize], y: &[T]) -> T {
    assert_eq!(alpha.len(), y.len(), "hermite_multi: length mismatch");
    alpha
        .iter()
        .zip(y.iter())
        .map(|(&k, &x)| hermite_fn(k, x))
        .fold(T::one(), |acc, v| acc * v)
}

//! Gaussian quadrature rules (Hermite, Legendre, generalized Laguerre).
//!
//! Nodes are the eigenvalues of the symmetric Jacobi matrix of the
//! orthonormal polynomial family, polished by two Newton steps on the
//! degree-`n` polynomial. Weights use the Christoffel identity
//! `w_i = μ₀ / Σ_k p_k(x_i)²`, which stays *relatively* accurate even for
//! the `e^{-x_i²}`-sized edge weights of wide Hermite rules — this matters
//! because integrands are often supplied with the Gaussian factor folded
//! into a combined exponent.

use ndarray::Array2;

use crate::linalg::jacobi_symmetric_eigen;
use crate::scalar::{real, real_usize, Real};

/// A fixed quadrature rule: `∫ w(x) f(x) dx ≈ Σ weights[i] · f(nodes[i])`.
#[derive(Debug, Clone)]
pub struct GaussRule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

/// Recurrence data of an orthonormal polynomial family:
/// `x p_k = b_{k+1} p_{k+1} + a_k p_k + b_k p_{k-1}`.
/// `diag` holds `a_0..a_{n-1}`; `offdiag` holds `b_0..b_n` (one extra entry
/// so the degree-`n` polynomial can be evaluated for Newton polishing).
struct Recurrence<T> {
    diag: Vec<T>,
    offdiag: Vec<T>,
    mu0: T,
}

impl<T: Real> GaussRule<T> {
    /// Gauss-Hermite rule for the weight `e^{-x²}` on ℝ.
    pub fn hermite(n: usize) -> Self {
        let rec = Recurrence {
            diag: vec![T::zero(); n],
            offdiag: (0..=n)
                .map(|k| (real_usize::<T>(k) * real(0.5)).sqrt())
                .collect(),
            mu0: T::PI().sqrt(),
        };
        Self::from_recurrence(n, &rec)
    }

    /// Gauss-Legendre rule for the weight 1 on `[-1, 1]`.
    pub fn legendre(n: usize) -> Self {
        let rec = Recurrence {
            diag: vec![T::zero(); n],
            offdiag: (0..=n)
                .map(|k| {
                    if k == 0 {
                        T::zero()
                    } else {
                        let kf = real_usize::<T>(k);
                        kf / (real::<T>(4.0) * kf * kf - T::one()).sqrt()
                    }
                })
                .collect(),
            mu0: real(2.0),
        };
        Self::from_recurrence(n, &rec)
    }

    /// Gauss-Legendre rule mapped to the interval `[a, b]`.
    pub fn legendre_on(n: usize, a: T, b: T) -> Self {
        let base = Self::legendre(n);
        let half = (b - a) * real(0.5);
        let mid = (b + a) * real(0.5);
        GaussRule {
            nodes: base.nodes.iter().map(|&t| mid + half * t).collect(),
            weights: base.weights.iter().map(|&w| w * half).collect(),
        }
    }

    /// Generalized Gauss-Laguerre rule for the weight `x^α e^{-x}` on `[0, ∞)`.
    pub fn laguerre(n: usize, alpha: T) -> Self {
        let rec = Recurrence {
            diag: (0..n)
                .map(|k| real_usize::<T>(2 * k) + alpha + T::one())
                .collect(),
            offdiag: (0..=n)
                .map(|k| {
                    let kf = real_usize::<T>(k);
                    (kf * (kf + alpha)).sqrt()
                })
                .collect(),
            mu0: crate::special::ln_gamma(alpha + T::one()).exp(),
        };
        Self::from_recurrence(n, &rec)
    }

    fn from_recurrence(n: usize, rec: &Recurrence<T>) -> Self {
        assert!(n >= 1, "quadrature rule needs at least one node");
        let mut jac = Array2::<T>::zeros((n, n));
        for k in 0..n {
            jac[[k, k]] = rec.diag[k];
            if k > 0 {
                jac[[k, k - 1]] = rec.offdiag[k];
                jac[[k - 1, k]] = rec.offdiag[k];
            }
        }
        let (evals, _) = jacobi_symmetric_eigen(&jac);
        let mut nodes: Vec<T> = evals.to_vec();
        nodes.reverse(); // ascending

        let mut weights = Vec::with_capacity(n);
        for x in nodes.iter_mut() {
            // Two Newton polishes on p_n, then the Christoffel weight.
            for _ in 0..2 {
                let (pn, dpn, _) = eval_orthonormal(rec, n, *x);
                if dpn != T::zero() {
                    *x = *x - pn / dpn;
                }
            }
            let (_, _, sum_sq) = eval_orthonormal(rec, n, *x);
            // Christoffel: w_i = 1/Σ p_k(x_i)² for *orthonormal* p_k (the
            // total mass μ₀ is already inside p_0 = μ₀^{-1/2}).
            weights.push(T::one() / sum_sq);
        }
        GaussRule { nodes, weights }
    }

    /// Apply the rule: the integrand `f` must exclude the weight function.
    pub fn integrate(&self, f: impl Fn(T) -> T) -> T {
        self.nodes
            .iter()
            .zip(self.weights.iter())
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Hermite-only: weights multiplied by `e^{x_i²}`, computed through
    /// logarithms so the product keeps relative accuracy at edge nodes.
    /// With these, `∫ g(x) dx ≈ Σ W_i g(x_i)` for integrands with
    /// (at least) `e^{-x²}` decay.
    pub fn compensated_weights(&self) -> Vec<T> {
        self.nodes
            .iter()
            .zip(self.weights.iter())
            .map(|(&x, &w)| (w.ln() + x * x).exp())
            .collect()
    }
}

/// Evaluate `(p_n(x), p_n'(x), Σ_{k<n} p_k(x)²)` for an orthonormal family.
fn eval_orthonormal<T: Real>(rec: &Recurrence<T>, n: usize, x: T) -> (T, T, T) {
    let mut p_prev = T::zero();
    let mut p = T::one() / rec.mu0.sqrt();
    let mut dp_prev = T::zero();
    let mut dp = T::zero();
    let mut sum_sq = p * p;
    for k in 0..n {
        let b_next = rec.offdiag[k + 1];
        let p_next = ((x - rec.diag[k]) * p - rec.offdiag[k] * p_prev) / b_next;
        let dp_next = ((x - rec.diag[k]) * dp + p - rec.offdiag[k] * dp_prev) / b_next;
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
        if k + 1 < n {
            sum_sq += p * p;
        }
    }
    (p, dp, sum_sq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{hermite_fn, laguerre_poly, ln_gamma};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn hermite_rule_moments() {
        let rule = GaussRule::<f64>::hermite(20);
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert_abs_diff_eq!(rule.integrate(|_| 1.0), sqrt_pi, epsilon = 1e-13);
        assert_abs_diff_eq!(rule.integrate(|x| x * x), sqrt_pi / 2.0, epsilon = 1e-13);
        assert_abs_diff_eq!(rule.integrate(|x| x), 0.0, epsilon = 1e-13);
        // Degree 38 is still exact with 20 nodes: ∫ e^{-x²} x^38 dx = 37!!·√π/2^19.
        let m38: f64 = (1..=18).fold(37.0, |acc, k| acc * (37.0 - 2.0 * k as f64));
        let expect = m38 * sqrt_pi / 2f64.powi(19);
        assert_relative_eq!(rule.integrate(|x| x.powi(38)), expect, max_relative = 1e-11);
    }

    #[test]
    fn hermite_orthonormality_oracle() {
        // ∫ h_j h_k = δ_jk to 1e-10 for j,k <= 12 with an 80-node rule.
        let rule = GaussRule::<f64>::hermite(80);
        let w = rule.compensated_weights();
        for j in 0..=12usize {
            for k in j..=12usize {
                let mut acc = 0.0;
                for (i, &x) in rule.nodes.iter().enumerate() {
                    acc += w[i] * hermite_fn(j, x) * hermite_fn(k, x);
                }
                let expect = if j == k { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(acc, expect, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn legendre_rule_polynomials() {
        let rule = GaussRule::<f64>::legendre_on(12, 0.0, 1.0);
        assert_abs_diff_eq!(rule.integrate(|x| x * x * x), 0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(rule.integrate(|_| 1.0), 1.0, epsilon = 1e-14);
        let rule2 = GaussRule::<f64>::legendre_on(40, 0.0, 10.0);
        // ∫_0^10 e^{-x} dx
        assert_abs_diff_eq!(
            rule2.integrate(|x: f64| (-x).exp()),
            1.0 - (-10.0_f64).exp(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn laguerre_orthogonality_oracle() {
        // ∫ L_n^α L_m^α x^α e^{-x} dx = δ_nm Γ(n+α+1)/n! to 1e-8 relative.
        for &alpha in &[0.0_f64, 1.0, 2.0] {
            let rule = GaussRule::<f64>::laguerre(24, alpha);
            for n in 0..=10usize {
                for m in n..=10usize {
                    let val = rule.integrate(|x| {
                        laguerre_poly(n, alpha, x) * laguerre_poly(m, alpha, x)
                    });
                    let norm =
                        (ln_gamma(n as f64 + alpha + 1.0) - ln_gamma(n as f64 + 1.0)).exp();
                    if n == m {
                        assert_relative_eq!(val, norm, max_relative = 1e-8);
                    } else {
                        assert!(
                            val.abs() <= 1e-8 * norm,
                            "n={n} m={m} alpha={alpha} val={val}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn nodes_ascend_and_weights_positive() {
        for rule in [
            GaussRule::<f64>::hermite(33),
            GaussRule::<f64>::legendre(17),
            GaussRule::<f64>::laguerre(21, 0.5),
        ] {
            for w in &rule.weights {
                assert!(*w > 0.0);
            }
            for pair in rule.nodes.windows(2) {
                assert!(pair[0] < pair[1]);
            }
        }
    }
}

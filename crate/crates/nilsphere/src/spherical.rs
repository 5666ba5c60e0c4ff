//! The bounded spherical functions of `(N_p, K)`.
//!
//! For `Λ ≠ 0` the spherical function is the `K`-average of the explicit
//! integrand `Θ^{r,Λ,l,ε}` (central phase times a product of normalized
//! Laguerre factors over the multiplicity blocks); for `Λ = 0` it reduces
//! to a Bessel function of `r‖X‖` and needs no integration. The Heisenberg
//! spherical functions that appear in the block reduction are also provided.
//!
//! The sign of the central phase follows this crate's bracket convention;
//! averages over the full orthogonal group are independent of that choice.

use num_complex::Complex;
use rand::Rng;

use crate::canonical::SphericalIndex;
use crate::error::{Error, Result};
use crate::haar::{KAverager, MCEstimate};
use crate::lie::{group_mul, k_action, z_inner, GroupPoint};
use crate::scalar::{real, real_usize, Real};
use crate::special::{bessel_reduced, laguerre_norm};

/// The integrand `Θ^{r,Λ,l,ε}` at a group point:
/// `e^{i r x_p} e^{i <D₂^ε(Λ), A>} Π_j 𝓛_{l_j}^{m_j-1}((μ_j/2) ‖pr_j X‖²)`.
pub fn theta<T: Real>(idx: &SphericalIndex<T>, n: &GroupPoint<T>) -> Result<Complex<T>> {
    if idx.lambda().is_zero() {
        return Err(Error::InvalidIndex(
            "theta requires Λ ≠ 0 (the Λ = 0 family is Bessel-type)".into(),
        ));
    }
    if n.p() != idx.p() {
        return Err(Error::DimensionMismatch(format!(
            "theta: index has p = {}, point has p = {}",
            idx.p(),
            n.p()
        )));
    }
    let profile = idx.profile();
    let coords = n.x().coords();
    let mut laguerre = T::one();
    for j in 0..profile.p1 {
        let mut block_sq = T::zero();
        for i in profile.m_cum[j]..profile.m_cum[j + 1] {
            block_sq += coords[2 * i] * coords[2 * i] + coords[2 * i + 1] * coords[2 * i + 1];
        }
        let arg = profile.mu[j] * real(0.5) * block_sq;
        let alpha = real_usize::<T>(profile.m[j] - 1);
        laguerre = laguerre * laguerre_norm(idx.l()[j], alpha, arg)?;
    }
    let phase = idx.r() * coords[idx.p() - 1] + z_inner(idx.d2_eps(), n.a())?;
    Ok(Complex::from_polar(T::one(), phase) * laguerre)
}

/// The Bessel-type spherical function `φ^{r,0}(exp(X+A)) = J̃_{(p-2)/2}(r‖X‖)`.
/// Independent of the central part, equals 1 at the identity.
pub fn phi_bessel<T: Real>(r: T, n: &GroupPoint<T>) -> Result<T> {
    let p = n.p();
    let alpha = (real_usize::<T>(p) - real(2.0)) * real(0.5);
    bessel_reduced(alpha, r * n.x().norm())
}

/// The bounded spherical function `φ^{r,Λ,l,ε}(n) = ∫_K Θ(k·n) dk`.
///
/// Routes to [`phi_bessel`] (exact, zero standard error) when `Λ = 0`.
pub fn phi<T: Real, R: Rng + ?Sized>(
    idx: &SphericalIndex<T>,
    n: &GroupPoint<T>,
    averager: &KAverager<T>,
    rng: &mut R,
) -> Result<MCEstimate<T>> {
    if n.p() != idx.p() {
        return Err(Error::DimensionMismatch(format!(
            "phi: index has p = {}, point has p = {}",
            idx.p(),
            n.p()
        )));
    }
    if averager.kind() != idx.group() {
        return Err(Error::InvalidParameter(format!(
            "phi: index is for {} but the averager integrates over {}",
            idx.group(),
            averager.kind()
        )));
    }
    if idx.lambda().is_zero() {
        let v = phi_bessel(idx.r(), n)?;
        return Ok(MCEstimate::exact(Complex::new(v, T::zero())));
    }
    averager.average(idx.p(), rng, |k| {
        let moved = k_action(k, n).expect("Haar samples are orthogonal");
        theta(idx, &moved).expect("validated index and matching dimensions")
    })
}

/// Heisenberg spherical function of Laguerre type for the pair
/// `(H^{p0}, U_{m_1} × … × U_{m_{p_1}})`:
/// `ω_{λ,l}(z, t) = e^{iλt} Π_j 𝓛_{l_j}^{m_j-1}((|λ|/2) Σ_{block j} |z_i|²)`.
pub fn heis_spherical_laguerre<T: Real>(
    lambda: T,
    l: &[usize],
    m: &[usize],
    z: &[Complex<T>],
    t: T,
) -> Result<Complex<T>> {
    if lambda == T::zero() {
        return Err(Error::InvalidParameter(
            "the Laguerre family needs λ ≠ 0".into(),
        ));
    }
    if l.len() != m.len() {
        return Err(Error::DimensionMismatch(format!(
            "heis_spherical_laguerre: {} block degrees vs {} multiplicities",
            l.len(),
            m.len()
        )));
    }
    check_block_total(z, m)?;
    let mut product = T::one();
    for (j, (&lj, &mj)) in l.iter().zip(m.iter()).enumerate() {
        let block_sq = block_norm_sq(z, m, j);
        let arg = lambda.abs() * real(0.5) * block_sq;
        product = product * laguerre_norm(lj, real_usize::<T>(mj - 1), arg)?;
    }
    Ok(Complex::from_polar(T::one(), lambda * t) * product)
}

/// Heisenberg spherical function of Bessel type:
/// `ω_μ(z, t) = Π_j J̃_{m_j-1}(μ_j √(Σ_{block j} |z_i|²))`.
pub fn heis_spherical_bessel<T: Real>(mu: &[T], m: &[usize], z: &[Complex<T>], t: T) -> Result<T> {
    let _ = t; // independent of the central coordinate
    if mu.len() != m.len() {
        return Err(Error::DimensionMismatch(format!(
            "heis_spherical_bessel: {} values vs {} multiplicities",
            mu.len(),
            m.len()
        )));
    }
    check_block_total(z, m)?;
    let mut product = T::one();
    for (j, (&muj, &mj)) in mu.iter().zip(m.iter()).enumerate() {
        if muj <= T::zero() {
            return Err(Error::InvalidParameter(
                "the Bessel family needs μ_j > 0".into(),
            ));
        }
        let block_sq = block_norm_sq(z, m, j);
        product = product * bessel_reduced(real_usize::<T>(mj - 1), muj * block_sq.sqrt())?;
    }
    Ok(product)
}

fn block_norm_sq<T: Real>(z: &[Complex<T>], m: &[usize], j: usize) -> T {
    let start: usize = m[..j].iter().sum();
    let end = start + m[j];
    z[start..end].iter().map(|v| v.norm_sqr()).sum()
}

fn check_block_total<T: Real>(z: &[Complex<T>], m: &[usize]) -> Result<()> {
    let total: usize = m.iter().sum();
    if total != z.len() {
        return Err(Error::DimensionMismatch(format!(
            "Σ m_j = {total} but z has {} coordinates",
            z.len()
        )));
    }
    Ok(())
}

/// Residual of the Gelfand functional equation
/// `∫_K φ(n₁ · k·n₂) dk = φ(n₁) φ(n₂)`, with the outer average taken over
/// samples independent of the inner ones.
pub fn functional_equation_residual<T: Real, R: Rng + ?Sized>(
    idx: &SphericalIndex<T>,
    n1: &GroupPoint<T>,
    n2: &GroupPoint<T>,
    averager: &KAverager<T>,
    rng: &mut R,
) -> Result<T> {
    let p = idx.p();
    let phi1 = phi(idx, n1, averager, rng)?.value;
    let phi2 = phi(idx, n2, averager, rng)?.value;
    let outer = averager.samples(p, rng)?;
    let mut acc = Complex::new(T::zero(), T::zero());
    for k in &outer {
        let moved = group_mul(n1, &k_action(k, n2)?)?;
        acc = acc + phi(idx, &moved, averager, rng)?.value;
    }
    let mean = acc / real_usize::<T>(outer.len());
    Ok((mean - phi1 * phi2).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{LambdaSpec, Sign};
    use crate::haar::{sample_haar, GroupKind};
    use crate::lie::{VVector, ZSkew};
    use approx::assert_abs_diff_eq;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn o_index_p2(lambda: f64, l: usize) -> SphericalIndex<f64> {
        SphericalIndex::new(
            GroupKind::O,
            0.0,
            LambdaSpec::new(2, vec![lambda]).unwrap(),
            vec![l],
            None,
        )
        .unwrap()
    }

    fn point_p2(x1: f64, x2: f64, a: f64) -> GroupPoint<f64> {
        GroupPoint::new(
            VVector::new(vec![x1, x2]).unwrap(),
            ZSkew::basis(2, 0, 1).scale(a),
        )
        .unwrap()
    }

    /// Independent closed form for the O_2 spherical function at r = 0:
    /// cos(λa) · 𝓛_l((λ/2)‖X‖²).
    fn p2_closed_form(lambda: f64, l: usize, x1: f64, x2: f64, a: f64) -> f64 {
        (lambda * a).cos() * laguerre_norm(l, 0.0, lambda * (x1 * x1 + x2 * x2) / 2.0).unwrap()
    }

    #[test]
    fn theta_is_one_at_identity() {
        let idx = o_index_p2(1.5, 3);
        let v = theta(&idx, &GroupPoint::identity(2)).unwrap();
        assert_eq!(v, Complex::new(1.0, 0.0));
    }

    #[test]
    fn theta_rejects_zero_lambda() {
        let idx =
            SphericalIndex::new(GroupKind::O, 1.0, LambdaSpec::<f64>::zero(2), vec![], None)
                .unwrap();
        assert!(theta(&idx, &GroupPoint::identity(2)).is_err());
    }

    #[test]
    fn theta_p2_closed_form() {
        // Θ(exp(X + a·X_{12})) = e^{iλ'a} 𝓛_l(λ‖X‖²/2) with λ' = -λ under
        // this crate's convention (z_inner(D₂(λ), X_{12}) = -λ).
        let lambda = 1.3;
        let idx = o_index_p2(lambda, 2);
        let x12 = ZSkew::<f64>::basis(2, 0, 1);
        let lam_prime = z_inner(idx.d2_eps(), &x12).unwrap();
        assert_abs_diff_eq!(lam_prime, -lambda, epsilon = 1e-15);

        let (x1, x2, a) = (0.7, -0.4, 1.9);
        let got = theta(&idx, &point_p2(x1, x2, a)).unwrap();
        let magnitude = laguerre_norm(2, 0.0, lambda * (x1 * x1 + x2 * x2) / 2.0).unwrap();
        let expect = Complex::from_polar(1.0, lam_prime * a) * magnitude;
        assert_abs_diff_eq!(got.re, expect.re, epsilon = 1e-14);
        assert_abs_diff_eq!(got.im, expect.im, epsilon = 1e-14);
        assert!(got.norm() <= 1.0 + 1e-14);
    }

    #[test]
    fn theta_so_epsilon_conjugates_last_block_phase() {
        // Flipping ε negates only the central phase of the last block; the
        // X-part factors are unchanged.
        let lambda = LambdaSpec::new(4, vec![2.0, 1.0]).unwrap();
        let plus = SphericalIndex::new(
            GroupKind::SO,
            0.0,
            lambda.clone(),
            vec![1, 2],
            Some(Sign::Plus),
        )
        .unwrap();
        let minus =
            SphericalIndex::new(GroupKind::SO, 0.0, lambda, vec![1, 2], Some(Sign::Minus))
                .unwrap();

        // Central element in the last block: A = a·[X_3, X_4].
        let mut rng = StdRng::seed_from_u64(30);
        for _ in 0..10 {
            let a = rng.gen_range(-2.0..2.0f64);
            let x: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let n =
                GroupPoint::new(VVector::new(x).unwrap(), ZSkew::basis(4, 2, 3).scale(a)).unwrap();
            let vp = theta(&plus, &n).unwrap();
            let vm = theta(&minus, &n).unwrap();
            assert_abs_diff_eq!(vp.re, vm.re, epsilon = 1e-13);
            assert_abs_diff_eq!(vp.im, -vm.im, epsilon = 1e-13);
            assert_abs_diff_eq!(vp.norm(), vm.norm(), epsilon = 1e-13);
        }
    }

    #[test]
    fn phi_bessel_examples() {
        let id = GroupPoint::<f64>::identity(3);
        assert_eq!(phi_bessel(1.7, &id).unwrap(), 1.0);

        let mut rng = StdRng::seed_from_u64(31);
        let n = GroupPoint::new(
            VVector::new((0..3).map(|_| rng.gen_range(-2.0..2.0)).collect()).unwrap(),
            ZSkew::zero(3),
        )
        .unwrap();
        assert_eq!(phi_bessel(0.0, &n).unwrap(), 1.0);

        // p = 1: φ^{r,0}(exp x) = cos(r x).
        let n1 = GroupPoint::new(VVector::new(vec![0.8]).unwrap(), ZSkew::zero(1)).unwrap();
        assert_abs_diff_eq!(
            phi_bessel(2.5, &n1).unwrap(),
            (2.5 * 0.8f64).cos(),
            epsilon = 1e-13
        );
    }

    #[test]
    fn phi_routes_lambda_zero_to_bessel_exactly() {
        let mut rng = StdRng::seed_from_u64(32);
        let idx =
            SphericalIndex::new(GroupKind::O, 1.2, LambdaSpec::<f64>::zero(3), vec![], None)
                .unwrap();
        let n = GroupPoint::new(
            VVector::new(vec![0.3, -0.8, 1.1]).unwrap(),
            ZSkew::basis(3, 0, 2).scale(0.6),
        )
        .unwrap();
        let avg = KAverager::monte_carlo(GroupKind::O, 100);
        let est = phi(&idx, &n, &avg, &mut rng).unwrap();
        assert_eq!(est.std_error, 0.0);
        assert_eq!(est.value.im, 0.0);
        assert_abs_diff_eq!(est.value.re, phi_bessel(1.2, &n).unwrap(), epsilon = 0.0);
    }

    #[test]
    fn phi_is_one_at_identity() {
        let mut rng = StdRng::seed_from_u64(33);
        let idx = o_index_p2(2.0, 1);
        let avg = KAverager::monte_carlo(GroupKind::O, 50);
        let est = phi(&idx, &GroupPoint::identity(2), &avg, &mut rng).unwrap();
        assert_eq!(est.value, Complex::new(1.0, 0.0));
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn phi_p2_deterministic_matches_closed_form() {
        let mut rng = StdRng::seed_from_u64(34);
        let avg = KAverager::deterministic_p2(GroupKind::O, 32);
        for &lambda in &[0.5, 1.0, 3.0] {
            for l in 0..=5 {
                let idx = o_index_p2(lambda, l);
                for _ in 0..10 {
                    let (x1, x2, a) = (
                        rng.gen_range(-1.5..1.5),
                        rng.gen_range(-1.5..1.5),
                        rng.gen_range(-2.0..2.0),
                    );
                    let est = phi(&idx, &point_p2(x1, x2, a), &avg, &mut rng).unwrap();
                    assert_eq!(est.std_error, 0.0);
                    assert_abs_diff_eq!(
                        est.value.re,
                        p2_closed_form(lambda, l, x1, x2, a),
                        epsilon = 1e-10
                    );
                    assert_abs_diff_eq!(est.value.im, 0.0, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn phi_p3_independent_seed_oracle() {
        // Two Monte-Carlo runs with independent seeds agree within joint SE.
        let idx = SphericalIndex::new(
            GroupKind::O,
            0.0,
            LambdaSpec::new(3, vec![1.0f64]).unwrap(),
            vec![0],
            None,
        )
        .unwrap();
        let n =
            GroupPoint::new(VVector::new(vec![1.0, 0.0, 0.0]).unwrap(), ZSkew::zero(3)).unwrap();
        let avg = KAverager::monte_carlo(GroupKind::O, 30_000);
        let mut rng_a = StdRng::seed_from_u64(35);
        let mut rng_b = StdRng::seed_from_u64(99_035);
        let a = phi(&idx, &n, &avg, &mut rng_a).unwrap();
        let b = phi(&idx, &n, &avg, &mut rng_b).unwrap();
        let joint = (a.std_error.powi(2) + b.std_error.powi(2)).sqrt();
        assert!((a.value - b.value).norm() <= 5.0 * joint);
        // The integrand is 𝓛_0((1/2)‖pr₁(k e₁)‖²) = e^{-‖pr₁(k e₁)‖²/4} ≤ 1.
        assert!(a.value.re > 0.0 && a.value.re < 1.0);
    }

    #[test]
    fn phi_p2_k_invariance_exact() {
        let mut rng = StdRng::seed_from_u64(36);
        let idx = o_index_p2(1.7, 2);
        let avg = KAverager::deterministic_p2(GroupKind::O, 64);
        let n = point_p2(0.9, -0.2, 1.1);
        let base = phi(&idx, &n, &avg, &mut rng).unwrap().value;
        for _ in 0..5 {
            let q = sample_haar(GroupKind::O, 2, &mut rng);
            let moved = k_action(&q, &n).unwrap();
            let v = phi(&idx, &moved, &avg, &mut rng).unwrap().value;
            assert_abs_diff_eq!(v.re, base.re, epsilon = 1e-10);
            assert_abs_diff_eq!(v.im, base.im, epsilon = 1e-10);
        }
    }

    #[test]
    fn p2_bridge_to_heisenberg() {
        // φ^{0,(λ),l} equals Re ω_{λ,l} under (x₁, x₂, a) ↦ (x₁+ix₂, a).
        let mut rng = StdRng::seed_from_u64(37);
        let avg = KAverager::deterministic_p2(GroupKind::O, 64);
        for &lambda in &[0.6, 2.2] {
            for l in 0..=3 {
                let idx = o_index_p2(lambda, l);
                for _ in 0..10 {
                    let (x1, x2, a) = (
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.5..1.5),
                    );
                    let sph = phi(&idx, &point_p2(x1, x2, a), &avg, &mut rng)
                        .unwrap()
                        .value
                        .re;
                    let omega =
                        heis_spherical_laguerre(lambda, &[l], &[1], &[Complex::new(x1, x2)], a)
                            .unwrap();
                    assert_abs_diff_eq!(sph, omega.re, epsilon = 1e-10);
                }
            }
        }
    }

    #[test]
    fn heis_central_values() {
        // ω_{λ,l}(0, t) = e^{iλt} and ω_μ(0, t) = 1, exact to rounding.
        let z0 = [Complex::new(0.0, 0.0); 3];
        let got = heis_spherical_laguerre(1.7, &[2, 0], &[2, 1], &z0, 0.9).unwrap();
        let expect = Complex::from_polar(1.0, 1.7 * 0.9);
        assert_eq!(got, expect);

        let bes = heis_spherical_bessel(&[2.0, 0.5], &[2, 1], &z0, -0.4).unwrap();
        assert_eq!(bes, 1.0);
    }

    #[test]
    fn heis_laguerre_real_at_t_zero() {
        let z = [Complex::new(0.3, -0.7), Complex::new(1.1, 0.2)];
        let got = heis_spherical_laguerre(-1.2, &[1], &[2], &z, 0.0).unwrap();
        assert_eq!(got.im, 0.0);
    }

    #[test]
    fn heis_rejects_bad_parameters() {
        let z = [Complex::new(0.1, 0.0)];
        assert!(heis_spherical_laguerre(0.0, &[1], &[1], &z, 0.0).is_err());
        assert!(heis_spherical_laguerre(1.0, &[1], &[2], &z, 0.0).is_err());
        assert!(heis_spherical_bessel(&[0.0], &[1], &z, 0.0).is_err());
    }

    #[test]
    fn functional_equation_identity_case() {
        let mut rng = StdRng::seed_from_u64(38);
        let idx = o_index_p2(1.0, 1);
        let avg = KAverager::deterministic_p2(GroupKind::O, 64);
        let n1 = point_p2(0.5, 0.3, -0.7);
        let res =
            functional_equation_residual(&idx, &n1, &GroupPoint::identity(2), &avg, &mut rng)
                .unwrap();
        assert!(res <= 1e-12, "residual {res}");
    }

    #[test]
    fn functional_equation_p2_random_pairs() {
        let mut rng = StdRng::seed_from_u64(39);
        let idx = o_index_p2(1.4, 2);
        let avg = KAverager::deterministic_p2(GroupKind::O, 96);
        for _ in 0..5 {
            let n1 = point_p2(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let n2 = point_p2(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let res = functional_equation_residual(&idx, &n1, &n2, &avg, &mut rng).unwrap();
            assert!(res <= 1e-8, "residual {res}");
        }
    }

    #[test]
    fn functional_equation_bessel_family() {
        // Λ = 0 reduces to the classical Bessel product formula.
        let mut rng = StdRng::seed_from_u64(40);
        let idx =
            SphericalIndex::new(GroupKind::O, 1.1, LambdaSpec::<f64>::zero(3), vec![], None)
                .unwrap();
        let n1 =
            GroupPoint::new(VVector::new(vec![0.8, 0.1, -0.4]).unwrap(), ZSkew::zero(3)).unwrap();
        let n2 =
            GroupPoint::new(VVector::new(vec![-0.2, 0.9, 0.5]).unwrap(), ZSkew::zero(3)).unwrap();
        let avg = KAverager::monte_carlo(GroupKind::O, 40_000);
        let res = functional_equation_residual(&idx, &n1, &n2, &avg, &mut rng).unwrap();
        // Only the outer average is stochastic here (φ^{r,0} is exact);
        // 5 SE of the outer integrand at N = 40000 is well under 2e-2.
        assert!(res <= 2e-2, "residual {res}");
    }
}

//! The free two-step nilpotent Lie group `N_p` in exponential coordinates.
//!
//! Elements are pairs `exp(X + A)` with `X` in the generating Euclidean
//! space `V ≅ ℝ^p` and `A` in the center `Z`, realized as skew-symmetric
//! `p×p` matrices acting on `V`. The bracket of generators is
//! `[X, Y].V = <X,V> Y - <Y,V> X`, i.e. the matrix `Y Xᵀ - X Yᵀ`, and the
//! scalar product on `Z` is `<a, b> = ½ tr(aᵀ b)` — the unique scaling for
//! which `<[X,Y],[X',Y']> = <X,X'><Y,Y'> - <X,Y'><X',Y>` and the basis
//! brackets `[X_i, X_j]`, `i < j`, come out orthonormal. The ½ is easy to
//! get wrong; everything downstream depends on it.
//!
//! Under this realization the matrix of `[X_1, X_2]` has entry `(2,1) = +1`.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{real, Real};

fn skew_tol<T: Real>() -> T {
    real::<T>(1e-12).max(T::epsilon() * real(100.0))
}

fn orth_tol<T: Real>() -> T {
    real::<T>(1e-10).max(T::epsilon() * real(1000.0))
}

/// Element of the generating space `V ≅ ℝ^p`.
#[derive(Debug, Clone, PartialEq)]
pub struct VVector<T> {
    coords: Array1<T>,
}

impl<T: Real> VVector<T> {
    pub fn new(coords: Vec<T>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter(
                "VVector needs at least one coordinate (p >= 1)".into(),
            ));
        }
        Ok(Self {
            coords: Array1::from(coords),
        })
    }

    pub fn zeros(p: usize) -> Self {
        Self {
            coords: Array1::zeros(p),
        }
    }

    /// The basis vector `X_{i+1}` (zero-based index).
    pub fn basis(p: usize, i: usize) -> Self {
        let mut coords = Array1::zeros(p);
        coords[i] = T::one();
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &Array1<T> {
        &self.coords
    }

    pub fn norm(&self) -> T {
        linalg::norm2(&self.coords)
    }

    pub fn dot(&self, other: &Self) -> T {
        self.coords
            .iter()
            .zip(other.coords.iter())
            .map(|(&a, &b)| a * b)
            .sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            coords: &self.coords + &other.coords,
        }
    }

    pub fn scale(&self, t: T) -> Self {
        Self {
            coords: self.coords.mapv(|v| v * t),
        }
    }
}

/// Element of the center `Z`, stored as a skew-symmetric `p×p` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ZSkew<T> {
    mat: Array2<T>,
}

impl<T: Real> ZSkew<T> {
    /// Construct from a matrix, symmetrizing away rounding-level asymmetry
    /// (`mat <- (mat - matᵀ)/2`) and rejecting anything genuinely non-skew.
    pub fn new(mat: Array2<T>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "ZSkew needs a square matrix, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let scale = T::one() + linalg::frobenius(&mat);
        let tol = skew_tol::<T>() * scale;
        let mut worst = T::zero();
        for i in 0..mat.nrows() {
            for j in 0..mat.ncols() {
                worst = worst.max((mat[[i, j]] + mat[[j, i]]).abs());
            }
        }
        if worst > tol {
            return Err(Error::NotSkew {
                asymmetry: worst.to_f64().unwrap_or(f64::NAN),
                tol: tol.to_f64().unwrap_or(f64::NAN),
            });
        }
        let skew = (&mat - &mat.t()).mapv(|v| v * real(0.5));
        Ok(Self { mat: skew })
    }

    pub fn zero(p: usize) -> Self {
        Self {
            mat: Array2::zeros((p, p)),
        }
    }

    /// Basis element `[X_{i+1}, X_{j+1}]` (zero-based `i < j`): the matrix
    /// with entry `(j, i) = +1`, `(i, j) = -1`.
    pub fn basis(p: usize, i: usize, j: usize) -> Self {
        assert!(i < j && j < p, "ZSkew::basis requires i < j < p");
        let mut mat = Array2::zeros((p, p));
        mat[[j, i]] = T::one();
        mat[[i, j]] = -T::one();
        Self { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn mat(&self) -> &Array2<T> {
        &self.mat
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            mat: &self.mat + &other.mat,
        }
    }

    pub fn scale(&self, t: T) -> Self {
        Self {
            mat: self.mat.mapv(|v| v * t),
        }
    }

    /// Norm induced by the `Z` scalar product.
    pub fn norm(&self) -> T {
        z_inner(self, self).expect("same dimension").sqrt()
    }

    /// Apply as an antisymmetric transformation of `V`.
    pub fn apply(&self, x: &VVector<T>) -> VVector<T> {
        VVector {
            coords: self.mat.dot(x.coords()),
        }
    }
}

/// A group element `exp(X + A)` in exponential coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupPoint<T> {
    x: VVector<T>,
    a: ZSkew<T>,
}

impl<T: Real> GroupPoint<T> {
    pub fn new(x: VVector<T>, a: ZSkew<T>) -> Result<Self> {
        if x.dim() != a.dim() {
            return Err(Error::DimensionMismatch(format!(
                "V-part has p = {}, Z-part has p = {}",
                x.dim(),
                a.dim()
            )));
        }
        Ok(Self { x, a })
    }

    pub fn identity(p: usize) -> Self {
        Self {
            x: VVector::zeros(p),
            a: ZSkew::zero(p),
        }
    }

    pub fn p(&self) -> usize {
        self.x.dim()
    }

    pub fn x(&self) -> &VVector<T> {
        &self.x
    }

    pub fn a(&self) -> &ZSkew<T> {
        &self.a
    }

    pub fn inverse(&self) -> Self {
        Self {
            x: self.x.scale(-T::one()),
            a: self.a.scale(-T::one()),
        }
    }
}

/// Lie bracket of two generators, as a skew matrix: `[x, y] = y xᵀ - x yᵀ`,
/// which acts on `V` by `V ↦ <x,V> y - <y,V> x`.
pub fn bracket<T: Real>(x: &VVector<T>, y: &VVector<T>) -> Result<ZSkew<T>> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch(format!(
            "bracket: {} vs {}",
            x.dim(),
            y.dim()
        )));
    }
    let p = x.dim();
    let mut mat = Array2::zeros((p, p));
    for i in 0..p {
        for j in 0..p {
            mat[[i, j]] = y.coords()[i] * x.coords()[j] - x.coords()[i] * y.coords()[j];
        }
    }
    Ok(ZSkew { mat })
}

/// Scalar product on the center: `½ tr(aᵀ b)`.
pub fn z_inner<T: Real>(a: &ZSkew<T>, b: &ZSkew<T>) -> Result<T> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "z_inner: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    let mut acc = T::zero();
    for (u, v) in a.mat.iter().zip(b.mat.iter()) {
        acc += *u * *v;
    }
    Ok(acc * real(0.5))
}

/// Group product in exponential coordinates:
/// `(X, A)(X', A') = (X + X', A + A' + ½ [X, X'])`.
pub fn group_mul<T: Real>(n1: &GroupPoint<T>, n2: &GroupPoint<T>) -> Result<GroupPoint<T>> {
    if n1.p() != n2.p() {
        return Err(Error::DimensionMismatch(format!(
            "group_mul: {} vs {}",
            n1.p(),
            n2.p()
        )));
    }
    let comm = bracket(&n1.x, &n2.x)?;
    let a = n1.a.add(&n2.a).add(&comm.scale(real(0.5)));
    Ok(GroupPoint {
        x: n1.x.add(&n2.x),
        a,
    })
}

/// Check that a matrix is orthogonal within tolerance.
pub fn check_orthogonal<T: Real>(k: &Array2<T>) -> Result<()> {
    if k.nrows() != k.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "orthogonal matrix must be square, got {}x{}",
            k.nrows(),
            k.ncols()
        )));
    }
    let defect = linalg::orthogonality_defect(k);
    if defect > orth_tol::<T>() {
        return Err(Error::NotOrthogonal {
            deviation: defect.to_f64().unwrap_or(f64::NAN),
            tol: orth_tol::<T>().to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// Action of `k ∈ O_p` on a group element: `(k·X, k·A·kᵀ)`.
pub fn k_action<T: Real>(k: &Array2<T>, n: &GroupPoint<T>) -> Result<GroupPoint<T>> {
    check_orthogonal(k)?;
    if k.nrows() != n.p() {
        return Err(Error::DimensionMismatch(format!(
            "k_action: matrix is {}x{} but p = {}",
            k.nrows(),
            k.ncols(),
            n.p()
        )));
    }
    Ok(GroupPoint {
        x: VVector {
            coords: k.dot(n.x.coords()),
        },
        a: ZSkew {
            mat: k.dot(&n.a.mat).dot(&k.t()),
        },
    })
}

/// Conjugation action on the center alone: `k·A·kᵀ` (no orthogonality check;
/// callers validate `k` once).
pub fn k_action_z<T: Real>(k: &Array2<T>, a: &ZSkew<T>) -> ZSkew<T> {
    ZSkew {
        mat: k.dot(&a.mat).dot(&k.t()),
    }
}

/// One-parameter subgroup curve `t ↦ n · exp(t(V_X + V_A))`.
/// For a step-2 group this is `(X + tV_X, A + tV_A + (t/2)[X, V_X])`.
pub fn one_param_curve<T: Real>(
    n: &GroupPoint<T>,
    vx: &VVector<T>,
    va: &ZSkew<T>,
    t: T,
) -> Result<GroupPoint<T>> {
    let step = GroupPoint::new(vx.scale(t), va.scale(t))?;
    group_mul(n, &step)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn rand_vec(p: usize, rng: &mut StdRng) -> VVector<f64> {
        VVector::new((0..p).map(|_| rng.gen_range(-2.0..2.0)).collect()).unwrap()
    }

    fn rand_skew(p: usize, rng: &mut StdRng) -> ZSkew<f64> {
        let mut m = Array2::zeros((p, p));
        for i in 0..p {
            for j in (i + 1)..p {
                let v = rng.gen_range(-2.0..2.0);
                m[[i, j]] = v;
                m[[j, i]] = -v;
            }
        }
        ZSkew::new(m).unwrap()
    }

    fn rand_point(p: usize, rng: &mut StdRng) -> GroupPoint<f64> {
        GroupPoint::new(rand_vec(p, rng), rand_skew(p, rng)).unwrap()
    }

    #[test]
    fn bracket_of_first_two_basis_vectors() {
        let e1 = VVector::<f64>::basis(3, 0);
        let e2 = VVector::<f64>::basis(3, 1);
        let b = bracket(&e1, &e2).unwrap();
        assert_eq!(b.mat()[[1, 0]], 1.0);
        assert_eq!(b.mat()[[0, 1]], -1.0);
        assert_eq!(b.mat()[[2, 2]], 0.0);
        assert_eq!(b.mat()[[2, 0]], 0.0);
    }

    #[test]
    fn bracket_is_alternating_and_bilinear() {
        let mut rng = StdRng::seed_from_u64(1);
        let x = rand_vec(4, &mut rng);
        let zero = bracket(&x, &x).unwrap();
        assert!(zero.norm() < 1e-14);

        let e1 = VVector::<f64>::basis(2, 0);
        let e2 = VVector::<f64>::basis(2, 1);
        let sum = e1.add(&e2);
        assert_eq!(bracket(&e1, &sum).unwrap(), bracket(&e1, &e2).unwrap());
    }

    #[test]
    fn bracket_rejects_dimension_mismatch() {
        let x = VVector::<f64>::basis(2, 0);
        let y = VVector::<f64>::basis(3, 0);
        assert!(bracket(&x, &y).is_err());
    }

    #[test]
    fn z_inner_makes_basis_brackets_orthonormal() {
        let p = 4;
        let e = |i| VVector::<f64>::basis(p, i);
        let b12 = bracket(&e(0), &e(1)).unwrap();
        let b13 = bracket(&e(0), &e(2)).unwrap();
        assert_abs_diff_eq!(z_inner(&b12, &b12).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(z_inner(&b12, &b13).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn z_inner_reproduces_bracket_product_formula() {
        // <[X,Y],[X',Y']> = <X,X'><Y,Y'> - <X,Y'><X',Y>
        let mut rng = StdRng::seed_from_u64(2);
        for _ in 0..50 {
            let (x, y) = (rand_vec(5, &mut rng), rand_vec(5, &mut rng));
            let (xp, yp) = (rand_vec(5, &mut rng), rand_vec(5, &mut rng));
            let lhs = z_inner(&bracket(&x, &y).unwrap(), &bracket(&xp, &yp).unwrap()).unwrap();
            let rhs = x.dot(&xp) * y.dot(&yp) - x.dot(&yp) * xp.dot(&y);
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
        }
    }

    #[test]
    fn pairing_identity() {
        // <A, [X,Y]> = <A.X, Y>
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..200 {
            let p = rng.gen_range(1..=8);
            let a = rand_skew(p, &mut rng);
            let x = rand_vec(p, &mut rng);
            let y = rand_vec(p, &mut rng);
            let lhs = z_inner(&a, &bracket(&x, &y).unwrap()).unwrap();
            let rhs = a.apply(&x).dot(&y);
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-10);
        }
    }

    #[test]
    fn group_identity_and_inverse() {
        let mut rng = StdRng::seed_from_u64(4);
        let n = rand_point(3, &mut rng);
        let id = GroupPoint::identity(3);
        assert_eq!(group_mul(&n, &id).unwrap(), n);
        assert_eq!(group_mul(&id, &n).unwrap(), n);

        let x = rand_vec(3, &mut rng);
        let ex = GroupPoint::new(x.clone(), ZSkew::zero(3)).unwrap();
        let prod = group_mul(&ex, &ex.inverse()).unwrap();
        assert!(prod.x().norm() < 1e-14 && prod.a().norm() < 1e-14);
    }

    #[test]
    fn group_mul_is_associative() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..50 {
            let p = rng.gen_range(2..=6);
            let (a, b, c) = (
                rand_point(p, &mut rng),
                rand_point(p, &mut rng),
                rand_point(p, &mut rng),
            );
            let lhs = group_mul(&group_mul(&a, &b).unwrap(), &c).unwrap();
            let rhs = group_mul(&a, &group_mul(&b, &c).unwrap()).unwrap();
            let dx = lhs.x().add(&rhs.x().scale(-1.0)).norm();
            let da = lhs.a().add(&rhs.a().scale(-1.0)).norm();
            assert!(dx < 1e-12 && da < 1e-12);
        }
    }

    #[test]
    fn commutator_equals_exp_bracket() {
        // exp(X) exp(Y) exp(X)⁻¹ exp(Y)⁻¹ = exp([X, Y]) in a step-2 group.
        let mut rng = StdRng::seed_from_u64(6);
        for _ in 0..20 {
            let p = rng.gen_range(2..=5);
            let x = rand_vec(p, &mut rng);
            let y = rand_vec(p, &mut rng);
            let ex = GroupPoint::new(x.clone(), ZSkew::zero(p)).unwrap();
            let ey = GroupPoint::new(y.clone(), ZSkew::zero(p)).unwrap();
            let comm = group_mul(
                &group_mul(&group_mul(&ex, &ey).unwrap(), &ex.inverse()).unwrap(),
                &ey.inverse(),
            )
            .unwrap();
            let expect = bracket(&x, &y).unwrap();
            assert!(comm.x().norm() < 1e-13);
            assert!(comm.a().add(&expect.scale(-1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn k_action_identity_and_isometry() {
        let mut rng = StdRng::seed_from_u64(7);
        let n = rand_point(2, &mut rng);
        let id = Array2::<f64>::eye(2);
        assert_eq!(k_action(&id, &n).unwrap(), n);

        // p = 2 rotation leaves the Z-part fixed; a reflection negates it.
        let th = 0.83f64;
        let rot = array![[th.cos(), -th.sin()], [th.sin(), th.cos()]];
        let rotated = k_action(&rot, &n).unwrap();
        assert!(rotated.a().add(&n.a().scale(-1.0)).norm() < 1e-13);
        assert_abs_diff_eq!(rotated.x().norm(), n.x().norm(), epsilon = 1e-13);

        let refl = array![[1.0, 0.0], [0.0, -1.0]];
        let reflected = k_action(&refl, &n).unwrap();
        assert!(reflected.a().add(n.a()).norm() < 1e-13);
        assert_abs_diff_eq!(
            z_inner(reflected.a(), reflected.a()).unwrap(),
            z_inner(n.a(), n.a()).unwrap(),
            epsilon = 1e-13
        );
    }

    #[test]
    fn k_action_rejects_non_orthogonal() {
        let n = GroupPoint::<f64>::identity(2);
        let bad = array![[1.0, 0.5], [0.0, 1.0]];
        assert!(k_action(&bad, &n).is_err());
    }

    #[test]
    fn one_param_curve_examples() {
        let mut rng = StdRng::seed_from_u64(8);
        let n = rand_point(3, &mut rng);
        let vx = rand_vec(3, &mut rng);
        let va = rand_skew(3, &mut rng);
        assert_eq!(one_param_curve(&n, &vx, &va, 0.0).unwrap(), n);

        let id = GroupPoint::identity(3);
        let c = one_param_curve(&id, &vx, &va, 0.7).unwrap();
        assert!(c.x().add(&vx.scale(-0.7)).norm() < 1e-15);
        assert!(c.a().add(&va.scale(-0.7)).norm() < 1e-15);

        // At n = exp(e2), direction e1: lands on (e1 + e2, -½[e1, e2]).
        let e1 = VVector::<f64>::basis(2, 0);
        let e2 = VVector::<f64>::basis(2, 1);
        let base = GroupPoint::new(e2.clone(), ZSkew::zero(2)).unwrap();
        let got = one_param_curve(&base, &e1, &ZSkew::zero(2), 1.0).unwrap();
        let expect_a = bracket(&e1, &e2).unwrap().scale(-0.5);
        assert!(got.x().add(&e1.add(&e2).scale(-1.0)).norm() < 1e-15);
        assert!(got.a().add(&expect_a.scale(-1.0)).norm() < 1e-15);
    }

    #[test]
    fn curve_is_homomorphism_in_t() {
        let mut rng = StdRng::seed_from_u64(9);
        let n = rand_point(4, &mut rng);
        let vx = rand_vec(4, &mut rng);
        let va = rand_skew(4, &mut rng);
        let (t, s) = (0.4, -1.1);
        let lhs = one_param_curve(&n, &vx, &va, t + s).unwrap();
        let mid = one_param_curve(&n, &vx, &va, t).unwrap();
        let rhs = one_param_curve(&mid, &vx, &va, s).unwrap();
        assert!(lhs.x().add(&rhs.x().scale(-1.0)).norm() < 1e-13);
        assert!(lhs.a().add(&rhs.a().scale(-1.0)).norm() < 1e-13);
    }

    #[test]
    fn zskew_symmetrizes_and_rejects() {
        let nearly = array![[0.0, 1.0 + 1e-14], [-1.0, 0.0]];
        let z = ZSkew::new(nearly).unwrap();
        assert_abs_diff_eq!(z.mat()[[0, 1]], 1.0 + 0.5e-14, epsilon = 1e-15);
        assert_abs_diff_eq!(z.mat()[[0, 1]] + z.mat()[[1, 0]], 0.0, epsilon = 0.0);

        let bad = array![[0.0, 1.0], [-0.9, 0.0]];
        assert!(ZSkew::new(bad).is_err());
    }
}

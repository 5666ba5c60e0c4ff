//! Canonical forms of skew-symmetric matrices under orthogonal conjugation,
//! orbit profiles, and the `(r, Λ)` orbit invariants.
//!
//! Any skew `a` is `O_p`-conjugate to the block normal form `D₂(Λ)` with
//! 2x2 blocks `λ_i J`, `J = [[0, 1], [-1, 0]]`, `λ_1 ≥ … ≥ λ_{p'} ≥ 0`
//! (trailing zero row/column for odd `p`). The reduction diagonalizes the
//! symmetric PSD matrix `-a²`, whose eigenvalues are the `λ_i²` with even
//! multiplicity, and assembles orthonormal pairs `(a·u/λ, u)` per block.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::haar::GroupKind;
use crate::lie::{k_action_z, VVector, ZSkew};
use crate::linalg;
use crate::scalar::{real, Real};

/// Singular values below this fraction of the largest one count as zero
/// when splitting image from kernel.
pub const KERNEL_REL_TOL: f64 = 1e-10;

/// Relative tolerance for clustering floating-point `Λ` entries into
/// multiplicity groups. Only `orbit_profile_clustered` applies it; profiles
/// of user-supplied `Λ` use exact equality.
pub const LAMBDA_CLUSTER_REL_TOL: f64 = 1e-8;

/// Sign of the last `D₂` block for the `SO_p` normal forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value<T: Real>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }
}

/// A point of the closed parameter cone: `λ_1 ≥ … ≥ λ_{p'} ≥ 0` with
/// `p' = floor(p/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSpec<T> {
    p: usize,
    lambdas: Vec<T>,
}

impl<T: Real> LambdaSpec<T> {
    pub fn new(p: usize, lambdas: Vec<T>) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidParameter("LambdaSpec requires p >= 1".into()));
        }
        if lambdas.len() != p / 2 {
            return Err(Error::InvalidParameter(format!(
                "LambdaSpec for p = {p} needs {} entries, got {}",
                p / 2,
                lambdas.len()
            )));
        }
        for pair in lambdas.windows(2) {
            if pair[0] < pair[1] {
                return Err(Error::InvalidParameter(
                    "lambda entries must be nonincreasing".into(),
                ));
            }
        }
        if let Some(last) = lambdas.last() {
            if *last < T::zero() {
                return Err(Error::InvalidParameter(
                    "lambda entries must be nonnegative".into(),
                ));
            }
        }
        Ok(Self { p, lambdas })
    }

    pub fn zero(p: usize) -> Self {
        Self {
            p,
            lambdas: vec![T::zero(); p / 2],
        }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn p_prime(&self) -> usize {
        self.p / 2
    }

    pub fn lambdas(&self) -> &[T] {
        &self.lambdas
    }

    pub fn is_zero(&self) -> bool {
        self.lambdas.iter().all(|&l| l == T::zero())
    }

    /// Euclidean norm `(Σ λ_i²)^{1/2}`, which equals `‖D₂(Λ)‖` in the
    /// center's scalar product.
    pub fn norm(&self) -> T {
        self.lambdas.iter().map(|&l| l * l).sum::<T>().sqrt()
    }
}

/// Multiplicity data of a `Λ`: counts of nonzero and distinct values, the
/// distinct values `μ_j` in decreasing order, their multiplicities `m_j`,
/// and the cumulative sums `m'_j` (with `m'_0 = 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitProfile<T> {
    pub p0: usize,
    pub p1: usize,
    pub mu: Vec<T>,
    pub m: Vec<usize>,
    pub m_cum: Vec<usize>,
}

/// Profile of a user-supplied `Λ`, with multiplicities decided by exact
/// equality. Floating canonical-form output must go through
/// [`orbit_profile_clustered`] instead.
pub fn orbit_profile<T: Real>(lambda: &LambdaSpec<T>) -> OrbitProfile<T> {
    profile_with(lambda, |a, b| a == b)
}

/// Profile with relative-tolerance clustering of nearly equal values.
pub fn orbit_profile_clustered<T: Real>(lambda: &LambdaSpec<T>, rel_tol: T) -> OrbitProfile<T> {
    let scale = lambda
        .lambdas()
        .first()
        .copied()
        .unwrap_or_else(T::zero)
        .max(T::min_positive_value());
    profile_with(lambda, move |a, b| (a - b).abs() <= rel_tol * scale)
}

fn profile_with<T: Real>(lambda: &LambdaSpec<T>, same: impl Fn(T, T) -> bool) -> OrbitProfile<T> {
    let mut mu: Vec<T> = Vec::new();
    let mut m: Vec<usize> = Vec::new();
    let mut p0 = 0usize;
    for &l in lambda.lambdas() {
        if l <= T::zero() {
            continue;
        }
        p0 += 1;
        match mu.last() {
            Some(&last) if same(last, l) => *m.last_mut().expect("mu and m in sync") += 1,
            _ => {
                mu.push(l);
                m.push(1);
            }
        }
    }
    let p1 = mu.len();
    let mut m_cum = Vec::with_capacity(p1 + 1);
    m_cum.push(0);
    for &mj in &m {
        m_cum.push(m_cum.last().unwrap() + mj);
    }
    OrbitProfile { p0, p1, mu, m, m_cum }
}

/// The block-diagonal normal form `D₂(Λ)` (last block scaled by `ε` when
/// present): entry `(2i, 2i+1) = +λ_i`, `(2i+1, 2i) = -λ_i`.
pub fn d2_matrix<T: Real>(lambda: &LambdaSpec<T>, epsilon: Option<Sign>) -> ZSkew<T> {
    let p = lambda.p();
    let pp = lambda.p_prime();
    let mut mat = Array2::<T>::zeros((p, p));
    for (i, &l) in lambda.lambdas().iter().enumerate() {
        let mut v = l;
        if i + 1 == pp {
            if let Some(sign) = epsilon {
                v = v * sign.value::<T>();
            }
        }
        mat[[2 * i, 2 * i + 1]] = v;
        mat[[2 * i + 1, 2 * i]] = -v;
    }
    ZSkew::new(mat).expect("D2 construction is skew by construction")
}

/// Orthogonal reduction to the normal form: returns `(k, Λ)` with
/// `k · a · kᵀ = D₂(Λ)` and `Λ` nonincreasing and nonnegative.
pub fn canonical_form<T: Real>(a: &ZSkew<T>) -> (Array2<T>, LambdaSpec<T>) {
    let (k, lambda, _p0) = canonical_form_full(a);
    (k, lambda)
}

/// As [`canonical_form`], additionally reporting the numerically detected
/// count `p0` of nonzero blocks (kernel threshold [`KERNEL_REL_TOL`]).
pub fn canonical_form_full<T: Real>(a: &ZSkew<T>) -> (Array2<T>, LambdaSpec<T>, usize) {
    let p = a.dim();
    let am = a.mat();
    // s = -a² is symmetric PSD with eigenvalues λ² in pairs, plus the kernel.
    let s = -am.dot(am);
    let (evals, evecs) = linalg::jacobi_symmetric_eigen(&s);

    let sigma_max = evals[0].max(T::zero()).sqrt();
    let threshold = real::<T>(KERNEL_REL_TOL) * sigma_max;

    let mut above = (0..p)
        .filter(|&i| evals[i].max(T::zero()).sqrt() > threshold)
        .count();
    if above % 2 == 1 {
        // Eigenvalues of -a² pair up exactly in theory; a lone straggler can
        // only come from thresholding noise, so demote it to the kernel.
        above -= 1;
    }
    let p0 = above / 2;

    let mut k = Array2::<T>::zeros((p, p));
    let mut rows_built = 0usize;
    let mut lambdas = Vec::with_capacity(p / 2);
    let mut used = vec![false; p];

    for _block in 0..p0 {
        // Next eigenvector column that survives orthogonalization against
        // the rows already assembled (degenerate clusters may overlap).
        let mut u: Option<(Array1<T>, T)> = None;
        for col in 0..p {
            if used[col] {
                continue;
            }
            let mut cand = evecs.column(col).to_owned();
            if linalg::orthonormalize_against_rows(&mut cand, &k, rows_built) {
                used[col] = true;
                u = Some((cand, evals[col].max(T::zero()).sqrt()));
                break;
            }
            used[col] = true;
        }
        let (u, lam) = u.expect("eigenvector pool exhausted before all blocks built");
        let mut v = Array1::<T>::zeros(p);
        for r in 0..p {
            let mut acc = T::zero();
            for c in 0..p {
                acc += am[[r, c]] * u[c];
            }
            v[r] = acc / lam;
        }
        // v = a·u/λ is unit and orthogonal to everything built so far in
        // exact arithmetic; one Gram-Schmidt pass cleans rounding.
        let ok = linalg::orthonormalize_against_rows(&mut v, &k, rows_built);
        assert!(ok, "block partner vector collapsed");
        for (dst, src) in k.row_mut(rows_built).iter_mut().zip(v.iter()) {
            *dst = *src;
        }
        rows_built += 1;
        for (dst, src) in k.row_mut(rows_built).iter_mut().zip(u.iter()) {
            *dst = *src;
        }
        rows_built += 1;
        lambdas.push(lam);
    }

    // Kernel rows from the remaining eigenvectors.
    for col in 0..p {
        if rows_built == p {
            break;
        }
        let mut cand = evecs.column(col).to_owned();
        if linalg::orthonormalize_against_rows(&mut cand, &k, rows_built) {
            for (dst, src) in k.row_mut(rows_built).iter_mut().zip(cand.iter()) {
                *dst = *src;
            }
            rows_built += 1;
        }
    }
    assert_eq!(rows_built, p, "canonical basis incomplete");

    lambdas.resize(p / 2, T::zero());
    let lambda = LambdaSpec::new(p, lambdas).expect("sorted nonnegative by construction");
    (k, lambda, p0)
}

/// The complete `G`-orbit invariant of a coadjoint representative
/// `(X*, A*)`: `Λ` from the canonical form of `A*`, and `r` the norm of the
/// orthogonal projection of `X*` onto `ker A*`.
pub fn orbit_invariants<T: Real>(xstar: &VVector<T>, astar: &ZSkew<T>) -> Result<(T, LambdaSpec<T>)> {
    if xstar.dim() != astar.dim() {
        return Err(Error::DimensionMismatch(format!(
            "orbit_invariants: {} vs {}",
            xstar.dim(),
            astar.dim()
        )));
    }
    let p = astar.dim();
    let (k, lambda, p0) = canonical_form_full(astar);
    // Rows 2p0.. of k form an orthonormal basis of ker A*.
    let mut r_sq = T::zero();
    for row in 2 * p0..p {
        let mut dot = T::zero();
        for c in 0..p {
            dot += k[[row, c]] * xstar.coords()[c];
        }
        r_sq += dot * dot;
    }
    Ok((r_sq.sqrt(), lambda))
}

/// Squared block projections `‖pr_j X‖²` for `j = 1..p1`: block `j` spans
/// the coordinate pairs `(x_{2i-1}, x_{2i})` for `i` in
/// `(m'_{j-1}, m'_j]`.
pub fn pr_norms<T: Real>(x: &VVector<T>, profile: &OrbitProfile<T>) -> Vec<T> {
    let coords = x.coords();
    (0..profile.p1)
        .map(|j| {
            let mut acc = T::zero();
            for i in profile.m_cum[j]..profile.m_cum[j + 1] {
                acc += coords[2 * i] * coords[2 * i] + coords[2 * i + 1] * coords[2 * i + 1];
            }
            acc
        })
        .collect()
}

/// The coadjoint action of `g = (k, exp(X0 + A))` on a linear form
/// `X* + A*`: returns `(k·X* - (k·A*·kᵀ)·X0, k·A*·kᵀ)`.
pub fn coadjoint<T: Real>(
    k: &Array2<T>,
    x0: &VVector<T>,
    xstar: &VVector<T>,
    astar: &ZSkew<T>,
) -> Result<(VVector<T>, ZSkew<T>)> {
    crate::lie::check_orthogonal(k)?;
    let ka = k_action_z(k, astar);
    let kx = VVector::new(k.dot(xstar.coords()).to_vec())?;
    let moved = kx.add(&ka.apply(x0).scale(-T::one()));
    Ok((moved, ka))
}

/// Full parameter tuple of one bounded spherical function.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalIndex<T> {
    r: T,
    lambda: LambdaSpec<T>,
    l: Vec<usize>,
    epsilon: Option<Sign>,
    group: GroupKind,
    profile: OrbitProfile<T>,
    d2_eps: ZSkew<T>,
}

impl<T: Real> SphericalIndex<T> {
    /// Validate and build an index. The parameter grammar:
    /// `r ≥ 0` and `r = 0` whenever `2 p0 = p`; `l` has one entry per
    /// distinct nonzero `λ` (and is empty for `Λ = 0`); `ε` is present
    /// exactly for the `SO` pair.
    pub fn new(
        group: GroupKind,
        r: T,
        lambda: LambdaSpec<T>,
        l: Vec<usize>,
        epsilon: Option<Sign>,
    ) -> Result<Self> {
        if r < T::zero() {
            return Err(Error::InvalidIndex(format!("r must be >= 0, got {r}")));
        }
        let profile = orbit_profile(&lambda);
        if 2 * profile.p0 == lambda.p() && r != T::zero() {
            return Err(Error::InvalidIndex(format!(
                "r must be 0 when 2·p0 = p (got r = {r} with p0 = {}, p = {})",
                profile.p0,
                lambda.p()
            )));
        }
        if lambda.is_zero() {
            if !l.is_empty() {
                return Err(Error::InvalidIndex(
                    "l must be absent when Λ = 0".into(),
                ));
            }
        } else if l.len() != profile.p1 {
            return Err(Error::InvalidIndex(format!(
                "l needs one entry per distinct nonzero λ: expected {}, got {}",
                profile.p1,
                l.len()
            )));
        }
        match group {
            GroupKind::O => {
                if epsilon.is_some() {
                    return Err(Error::InvalidIndex(
                        "ε is only a parameter for the SO pair".into(),
                    ));
                }
            }
            GroupKind::SO => {
                if epsilon.is_none() {
                    return Err(Error::InvalidIndex(
                        "the SO pair requires ε = ±1".into(),
                    ));
                }
            }
        }
        let d2_eps = d2_matrix(&lambda, epsilon);
        Ok(Self {
            r,
            lambda,
            l,
            epsilon,
            group,
            profile,
            d2_eps,
        })
    }

    pub fn p(&self) -> usize {
        self.lambda.p()
    }

    pub fn r(&self) -> T {
        self.r
    }

    pub fn lambda(&self) -> &LambdaSpec<T> {
        &self.lambda
    }

    pub fn l(&self) -> &[usize] {
        &self.l
    }

    pub fn epsilon(&self) -> Option<Sign> {
        self.epsilon
    }

    pub fn group(&self) -> GroupKind {
        self.group
    }

    pub fn profile(&self) -> &OrbitProfile<T> {
        &self.profile
    }

    /// `D₂^ε(Λ)` with this index's sign convention.
    pub fn d2_eps(&self) -> &ZSkew<T> {
        &self.d2_eps
    }
}

//! Compatible complex structures `J = [[A, Δ], [D, −Aᵗ]]` on a `2d`-dimensional phase space.

use crate::error::{Error, Result};
use crate::gaussian::Covariance;
use nalgebra::{DMatrix, Matrix2, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;

const TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct ComplexStructureBlocks {
    pub a: DMatrix<f64>,
    pub delta: DMatrix<f64>,
    pub d: DMatrix<f64>,
    pub k: DMatrix<f64>,
}

/// Residuals of the defining relations; all should vanish.
#[derive(Clone, Debug, Default)]
pub struct ConstraintReport {
    pub delta_symmetry: f64,
    pub d_symmetry: f64,
    pub a_delta: f64,
    pub a_d: f64,
    pub j_squared: f64,
    pub delta_min_eigenvalue: f64,
    pub d_max_eigenvalue: f64,
}

impl ConstraintReport {
    pub fn max_residual(&self) -> f64 {
        [self.delta_symmetry, self.d_symmetry, self.a_delta, self.a_d, self.j_squared]
            .into_iter()
            .fold(0.0, f64::max)
    }

    pub fn ok(&self, tol: f64) -> bool {
        self.max_residual() <= tol && self.delta_min_eigenvalue > 0.0 && self.d_max_eigenvalue < 0.0
    }
}

/// Residuals of the four transform identities relating `(K, A)` and `(D⁻¹, A)`.
#[derive(Clone, Debug)]
pub struct TransformIdentities {
    pub residuals: [f64; 4],
}

impl TransformIdentities {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

fn sym_eig_fn(m: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let eig = SymmetricEigen::new((m + m.transpose()) * 0.5);
    let q = &eig.eigenvectors;
    q * DMatrix::from_diagonal(&eig.eigenvalues.map(f)) * q.transpose()
}

fn spd_check(m: &DMatrix<f64>, what: &str) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::Shape(format!("{what} must be square")));
    }
    if (m - m.transpose()).amax() > TOL * m.amax().max(1.0) {
        return Err(Error::Shape(format!("{what} is not symmetric")));
    }
    let min = SymmetricEigen::new(m.clone()).eigenvalues.min();
    if min <= 0.0 {
        return Err(Error::NotPositiveDefinite(format!("{what} has eigenvalue {min:e}")));
    }
    Ok(())
}

impl ComplexStructureBlocks {
    /// Completes `(A, Δ)` with `D = (iAᵗ + 1)K(iA − 1) = −K − AᵗKA`.
    pub fn complete(a: DMatrix<f64>, delta: DMatrix<f64>) -> Result<Self> {
        let cov = Covariance::real(delta.clone())?;
        let n = delta.nrows();
        if a.shape() != (n, n) {
            return Err(Error::Shape("A and Δ must have the same shape".into()));
        }
        let ad = &a * &delta;
        let resid = (&ad - ad.transpose()).amax();
        if resid > TOL * ad.amax().max(1.0) {
            return Err(Error::Constraint(format!("AΔ ≠ ΔAᵗ (residual {resid:e})")));
        }
        let k = cov.inverse().clone();
        let d = -(&k + a.transpose() * &k * &a);
        let d = (&d + d.transpose()) * 0.5;
        Ok(ComplexStructureBlocks { a, delta: cov.matrix().clone(), d, k })
    }

    /// The `A = 0` structure with the given covariance.
    pub fn diagonal(delta: DMatrix<f64>) -> Result<Self> {
        let n = delta.nrows();
        Self::complete(DMatrix::zeros(n, n), delta)
    }

    /// Random compatible blocks: `Δ = BBᵗ + c·1`, `A = S·K` with `S` symmetric.
    pub fn random<R: Rng>(dim: usize, rng: &mut R, a_scale: f64) -> Self {
        let b = DMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..1.0));
        let delta = &b * b.transpose() + DMatrix::identity(dim, dim) * 0.5;
        let s = DMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..1.0) * a_scale);
        let s = (&s + s.transpose()) * 0.5;
        let k = delta.clone().try_inverse().expect("SPD");
        Self::complete(s * k, delta).expect("compatible by construction")
    }

    pub fn dim(&self) -> usize {
        self.delta.nrows()
    }

    /// `J = [[A, Δ], [D, −Aᵗ]]`.
    pub fn j(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut j = DMatrix::zeros(2 * n, 2 * n);
        j.view_mut((0, 0), (n, n)).copy_from(&self.a);
        j.view_mut((0, n), (n, n)).copy_from(&self.delta);
        j.view_mut((n, 0), (n, n)).copy_from(&self.d);
        j.view_mut((n, n), (n, n)).copy_from(&(-self.a.transpose()));
        j
    }

    /// `μ = ω(·, −J·) = [[−D, Aᵗ], [A, Δ]]`.
    pub fn metric(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(&(-&self.d));
        m.view_mut((0, n), (n, n)).copy_from(&self.a.transpose());
        m.view_mut((n, 0), (n, n)).copy_from(&self.a);
        m.view_mut((n, n), (n, n)).copy_from(&self.delta);
        m
    }

    pub fn metric_min_eigenvalue(&self) -> f64 {
        SymmetricEigen::new(self.metric()).eigenvalues.min()
    }

    pub fn constraints(&self) -> ConstraintReport {
        let n = self.dim();
        let j = self.j();
        let ad = &self.a * &self.delta;
        let da = &self.d * &self.a;
        ConstraintReport {
            delta_symmetry: (&self.delta - self.delta.transpose()).amax(),
            d_symmetry: (&self.d - self.d.transpose()).amax(),
            a_delta: (&ad - ad.transpose()).amax(),
            a_d: (self.a.transpose() * &self.d - da).amax(),
            j_squared: (&j * &j + DMatrix::identity(2 * n, 2 * n)).amax(),
            delta_min_eigenvalue: SymmetricEigen::new(self.delta.clone()).eigenvalues.min(),
            d_max_eigenvalue: SymmetricEigen::new(self.d.clone()).eigenvalues.max(),
        }
    }

    /// The four identities
    /// `Δ = −(D⁻¹+iAD⁻¹) D (D⁻¹−iAD⁻¹)ᵗ`, `D = −(K+iKA) Δ (K−iKA)ᵗ`,
    /// `1 = −(K−iKA)(D⁻¹+iAD⁻¹)`, `1 = −(D⁻¹−iAD⁻¹)(K+iKA)`.
    pub fn transform_identities(&self) -> TransformIdentities {
        let c = |m: &DMatrix<f64>| m.map(|v| Complex64::new(v, 0.0));
        let i = Complex64::i();
        let n = self.dim();
        let Some(dinv) = self.d.clone().try_inverse() else {
            return TransformIdentities { residuals: [f64::INFINITY; 4] };
        };
        let (a, k, d, delta, dinv) = (c(&self.a), c(&self.k), c(&self.d), c(&self.delta), c(&dinv));
        let one = DMatrix::<Complex64>::identity(n, n);
        let dp = &dinv + &a * &dinv * i;
        let dm = &dinv - &a * &dinv * i;
        let kp = &k + &k * &a * i;
        let km = &k - &k * &a * i;
        let r = |m: DMatrix<Complex64>| m.iter().map(|v| v.norm()).fold(0.0, f64::max);
        TransformIdentities {
            residuals: [
                r(&delta + &dp * &d * dm.transpose()),
                r(&d + &kp * &delta * km.transpose()),
                r(&one + &km * &dp),
                r(&one + &dm * &kp),
            ],
        }
    }
}

/// `A = 0`, `Δ = Θ^{−1/2}N^{1/2}`, `D = −N^{−1/2}Θ^{1/2}` for commuting SPD `Θ`, `N`.
pub fn null_shift_structure(theta: &DMatrix<f64>, lapse: &DMatrix<f64>) -> Result<ComplexStructureBlocks> {
    spd_check(theta, "Θ")?;
    spd_check(lapse, "N")?;
    let comm = (theta * lapse - lapse * theta).amax();
    if comm > TOL * (theta.amax() * lapse.amax()).max(1.0) {
        return Err(Error::Constraint(format!("Θ and N do not commute (residual {comm:e})")));
    }
    let delta = sym_eig_fn(theta, |v| v.powf(-0.5)) * sym_eig_fn(lapse, f64::sqrt);
    let d = -(sym_eig_fn(lapse, |v| v.powf(-0.5)) * sym_eig_fn(theta, f64::sqrt));
    let n = theta.nrows();
    let delta = (&delta + delta.transpose()) * 0.5;
    let k = sym_eig_fn(&delta, |v| 1.0 / v);
    Ok(ComplexStructureBlocks { a: DMatrix::zeros(n, n), delta, d: (&d + d.transpose()) * 0.5, k })
}

pub type Mat2 = Matrix2<Complex64>;

/// Principal square root of a 2×2 matrix whose eigenvalues are real and positive.
pub fn sqrt2(m: &Mat2) -> Result<Mat2> {
    let tr = m.trace();
    let det = m.determinant();
    let disc = (tr * tr / 4.0 - det).sqrt();
    let scale = m.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
    for lam in [tr / 2.0 + disc, tr / 2.0 - disc] {
        if lam.im.abs() > 1e-9 * scale || lam.re <= 1e-12 * scale {
            return Err(Error::NotAdmissible(format!("eigenvalue {lam} of −F² is not positive")));
        }
    }
    let s = det.sqrt();
    let denom = (tr + s * 2.0).sqrt();
    Ok((m + Mat2::identity() * s) / denom)
}

fn inverse2(m: &Mat2, what: &str) -> Result<Mat2> {
    let det = m.determinant();
    if det.norm() < 1e-14 * m.iter().map(|v| v.norm_sqr()).sum::<f64>().max(1e-300) {
        return Err(Error::Degenerate(format!("{what} is singular")));
    }
    m.try_inverse().ok_or_else(|| Error::Degenerate(format!("{what} is singular")))
}

/// `|F| = (−F²)^{1/2}`.
pub fn magnitude(f: &Mat2) -> Result<Mat2> {
    sqrt2(&-(f * f))
}

/// `J = |F|⁻¹F` for a per-mode generator.
pub fn dynamical_j(f: &Mat2) -> Result<Mat2> {
    let mag = magnitude(f)?;
    Ok(inverse2(&mag, "|F|")? * f)
}

/// Per-mode data with lapse `N`, supermagnitude `Θ` and shift frequency `ν = k·N⃗`.
#[derive(Clone, Copy, Debug)]
pub struct ModeGenerator {
    pub lapse: f64,
    pub theta: f64,
    pub shift: f64,
}

impl ModeGenerator {
    /// `F₀ = [[0, N], [−Θ, 0]]`.
    pub fn f0(&self) -> Mat2 {
        Mat2::new(0.0.into(), self.lapse.into(), (-self.theta).into(), 0.0.into())
    }

    /// Shift part `iν·1`; the derivative `Nⁱ∂ᵢ` acts as `iν` on a Fourier mode.
    pub fn f_inf(&self) -> Mat2 {
        Mat2::identity() * Complex64::new(0.0, self.shift)
    }

    pub fn f(&self) -> Mat2 {
        self.f0() + self.f_inf()
    }

    /// `|F₀| = √(NΘ)·1`.
    pub fn f0_magnitude(&self) -> Mat2 {
        Mat2::identity() * Complex64::from((self.lapse * self.theta).sqrt())
    }

    pub fn f_inf_magnitude(&self) -> Mat2 {
        Mat2::identity() * Complex64::from(self.shift.abs())
    }

    /// `J₀ = [[0, Θ^{−1/2}N^{1/2}], [−N^{−1/2}Θ^{1/2}, 0]]`.
    pub fn j0(&self) -> Mat2 {
        let r = (self.lapse / self.theta).sqrt();
        Mat2::new(0.0.into(), r.into(), (-1.0 / r).into(), 0.0.into())
    }

    /// `J_∞ = i·sign(ν)·1`.
    pub fn j_inf(&self) -> Mat2 {
        Mat2::identity() * Complex64::new(0.0, self.shift.signum())
    }
}

/// `J = A₀J₀ + A_∞J_∞` with `A₀ = |F|⁻¹|F₀|`, `A_∞ = |F|⁻¹|F_∞|`, where
/// `|F|² = |F₀|² + |F_∞|² − (|F₀|J₀J_∞|F_∞| + |F_∞|J_∞J₀|F₀|)`.
pub fn interpolate_j(g: &ModeGenerator) -> Result<Mat2> {
    if g.lapse <= 0.0 || g.theta <= 0.0 {
        return Err(Error::NotAdmissible("lapse and Θ must be positive".into()));
    }
    let (m0, mi) = (g.f0_magnitude(), g.f_inf_magnitude());
    let (j0, ji) = (g.j0(), g.j_inf());
    let sq = m0 * m0 + mi * mi - (m0 * j0 * ji * mi + mi * ji * j0 * m0);
    let mag = sqrt2(&sq).map_err(|_| Error::Degenerate("|F| is singular".into()))?;
    let inv = inverse2(&mag, "|F|")?;
    let mut j = inv * m0 * j0;
    if g.shift != 0.0 {
        j += inv * mi * ji;
    }
    Ok(j)
}

/// Reads `(A, Δ, D)` back from a real per-mode `J`; a vanishing `Δ` is reported
/// as a degenerate structure.
pub fn blocks_from_mode_j(j: &Mat2) -> Result<ComplexStructureBlocks> {
    let scale = j.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if j.iter().any(|v| v.im.abs() > 1e-9 * scale.max(1.0)) {
        if j[(0, 1)].norm() < 1e-9 * scale.max(1.0) {
            return Err(Error::Degenerate("Δ→0, K singular".into()));
        }
        return Err(Error::NotAdmissible("J is not real on this mode".into()));
    }
    let delta = j[(0, 1)].re;
    if delta.abs() < 1e-12 * scale.max(1.0) {
        return Err(Error::Degenerate("Δ→0, K singular".into()));
    }
    let one = |v: f64| DMatrix::from_element(1, 1, v);
    let b = ComplexStructureBlocks { a: one(j[(0, 0)].re), delta: one(delta), d: one(j[(1, 0)].re), k: one(1.0 / delta) };
    if delta < 0.0 {
        return Err(Error::NotPositiveDefinite(format!("Δ = {delta}")));
    }
    Ok(b)
}

/// `‖J² + 1‖_max` and `‖[F, J]‖_max`.
pub fn j_residuals(f: &Mat2, j: &Mat2) -> (f64, f64) {
    let r = |m: Mat2| m.iter().map(|v| v.norm()).fold(0.0, f64::max);
    (r(j * j + Mat2::identity()), r(f * j - j * f))
}

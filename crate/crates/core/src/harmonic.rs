//! Skew endomorphisms as 2-forms, `α = g(A·, ·)`, and the pointwise algebra
//! built on that duality: the cubic operation `A₂A₁A₃ + A₃A₁A₂`, spectral
//! decomposition of `A²`, moment recovery and the splitting operator
//! `Qψ = Σ_{e_i ∈ H} (e_i ⌟ ψ) ∧ e^i`.

use nalgebra::{DMatrix, DVector};

use crate::blade::Blade;
use crate::error::{Error, Result};
use crate::form::{Form, Vector};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Relative tolerance for spectral clustering and reconstruction.
pub const SPECTRAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct SkewEndo<S> {
    matrix: Matrix<S>,
}

impl<S: Scalar> SkewEndo<S> {
    pub fn new(matrix: Matrix<S>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::SpaceMismatch {
                left: matrix.rows(),
                right: matrix.cols(),
            });
        }
        if !(&matrix + &matrix.transpose()).is_negligible(matrix.max_abs()) {
            return Err(Error::InvariantViolation("matrix is not skew".into()));
        }
        Ok(SkewEndo { matrix })
    }

    pub fn zero(n: usize) -> Self {
        SkewEndo {
            matrix: Matrix::zeros(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<S> {
        self.matrix
    }
}

/// `α ↦ A` with `α(X, Y) = ⟨AX, Y⟩`, so `A_{ji} = α_{ij}`.
pub fn form_endo<S: Scalar>(alpha: &Form<S>) -> Result<SkewEndo<S>> {
    if alpha.degree() != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            found: alpha.degree(),
        });
    }
    let n = alpha.dim();
    let mut m = Matrix::zeros(n, n);
    for (b, c) in alpha.terms() {
        let idx: Vec<usize> = b.indices().collect();
        let (i, j) = (idx[0], idx[1]);
        m[(j, i)] = c.clone();
        m[(i, j)] = -c.clone();
    }
    Ok(SkewEndo { matrix: m })
}

pub fn endo_form<S: Scalar>(a: &SkewEndo<S>) -> Form<S> {
    let n = a.dim();
    let mut f = Form::zero(n, 2);
    for i in 0..n {
        for j in i + 1..n {
            let c = a.matrix[(j, i)].clone();
            if !c.is_zero() {
                f.add_term(Blade::single(i).with(j), c);
            }
        }
    }
    f
}

/// `A₂A₁A₃ + A₃A₁A₂`.
pub fn triple<S: Scalar>(a1: &SkewEndo<S>, a2: &SkewEndo<S>, a3: &SkewEndo<S>) -> Result<SkewEndo<S>> {
    let n = a1.dim();
    for a in [a2, a3] {
        if a.dim() != n {
            return Err(Error::SpaceMismatch { left: n, right: a.dim() });
        }
    }
    let (m1, m2, m3) = (&a1.matrix, &a2.matrix, &a3.matrix);
    let m = &(&(m2 * m1) * m3) + &(&(m3 * m1) * m2);
    Ok(SkewEndo { matrix: m })
}

/// `⟨α₁, α₂⟩α₃ + ⟨α₁, α₃⟩α₂ + g((A₂A₁A₃ + A₃A₁A₂)·, ·)`, the expansion of
/// `L*_{α₁} L_{α₂} α₃`.
pub fn stab_expand<S: Scalar>(a1: &Form<S>, a2: &Form<S>, a3: &Form<S>) -> Result<Form<S>> {
    let t = triple(&form_endo(a1)?, &form_endo(a2)?, &form_endo(a3)?)?;
    let mut out = a3.scale(&a1.inner(a2)?);
    out += &a2.scale(&a1.inner(a3)?);
    out += &endo_form(&t);
    Ok(out)
}

/// One eigenvalue cluster of `A²`.
#[derive(Debug, Clone)]
pub struct Cluster {
    pub mu: f64,
    pub mult: usize,
    /// Orthogonal projector onto the eigenspace.
    pub projector: Matrix<f64>,
    /// `A P / √(-μ)`; absent for the kernel.
    pub complex_structure: Option<Matrix<f64>>,
    /// `g(J_i ·, ·)` extended by zero; absent for the kernel.
    pub omega: Option<Form<f64>>,
}

#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    dim: usize,
    /// Ascending in `μ`, the kernel cluster last.
    pub clusters: Vec<Cluster>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nonzero(&self) -> impl Iterator<Item = &Cluster> {
        self.clusters.iter().filter(|c| c.complex_structure.is_some())
    }

    pub fn kernel_rank(&self) -> usize {
        self.clusters
            .iter()
            .filter(|c| c.complex_structure.is_none())
            .map(|c| c.mult)
            .sum()
    }

    /// `Σ √(-μ_i) J_i`.
    pub fn reconstruct(&self) -> Matrix<f64> {
        let mut out = Matrix::zeros(self.dim, self.dim);
        for c in self.nonzero() {
            let j = c.complex_structure.as_ref().expect("nonzero cluster");
            out = &out + &j.scale(&(-c.mu).sqrt());
        }
        out
    }

    /// Largest deviation from the decomposition invariants, relative to `|A|`.
    pub fn residual(&self, a: &SkewEndo<f64>) -> f64 {
        let scale = a.matrix.max_abs().max(1.0);
        let n = self.dim;
        let mut worst = (&self.reconstruct() - &a.matrix).max_abs() / scale;
        let mut sum = Matrix::zeros(n, n);
        for (i, c) in self.clusters.iter().enumerate() {
            sum = &sum + &c.projector;
            for d in &self.clusters[i + 1..] {
                worst = worst.max((&c.projector * &d.projector).max_abs());
            }
            if let Some(j) = &c.complex_structure {
                let sq = &(j * j) + &c.projector;
                worst = worst.max(sq.max_abs());
            }
        }
        worst.max((&sum - &Matrix::identity(n)).max_abs())
    }
}

fn to_dmatrix(m: &Matrix<f64>) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.row_major())
}

fn from_dmatrix(m: &DMatrix<f64>) -> Matrix<f64> {
    Matrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Eigen-decomposition of `A²` grouped into clusters of relative width
/// `SPECTRAL_TOL`.
pub fn spectral(a: &SkewEndo<f64>) -> Result<SpectralDecomposition> {
    let n = a.dim();
    let am = to_dmatrix(&a.matrix);
    let sq = &am * &am;
    let sym = (&sq + sq.transpose()) * 0.5;
    if sym.iter().any(|v| !v.is_finite()) {
        return Err(Error::IllConditionedSpectrum("A² overflows".into()));
    }
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let scale = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let thr = SPECTRAL_TOL * scale;

    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut kernel: Vec<usize> = Vec::new();
    for &i in &order {
        let v = eig.eigenvalues[i];
        if v.abs() <= thr {
            kernel.push(i);
            continue;
        }
        if v > 0.0 {
            return Err(Error::IllConditionedSpectrum(format!(
                "A² has positive eigenvalue {v:e}"
            )));
        }
        match groups.last_mut() {
            Some(g) if (eig.eigenvalues[*g.last().unwrap()] - v).abs() <= thr => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    if !kernel.is_empty() {
        groups.push(kernel);
    }

    let mut clusters = Vec::with_capacity(groups.len());
    for g in groups {
        let mu = g.iter().map(|&i| eig.eigenvalues[i]).sum::<f64>() / g.len() as f64;
        let mut p = DMatrix::<f64>::zeros(n, n);
        for &i in &g {
            let v = eig.eigenvectors.column(i);
            p += &v * v.transpose();
        }
        let p = (&p + p.transpose()) * 0.5;
        let projector = from_dmatrix(&p);
        let zero = mu.abs() <= thr;
        if zero {
            clusters.push(Cluster {
                mu: 0.0,
                mult: g.len(),
                projector,
                complex_structure: None,
                omega: None,
            });
            continue;
        }
        if g.len() % 2 != 0 {
            return Err(Error::IllConditionedSpectrum(format!(
                "eigenvalue {mu:e} of A² has odd multiplicity {}",
                g.len()
            )));
        }
        let j = from_dmatrix(&((&am * &p) / (-mu).sqrt()));
        let defect = (&(&j * &j) + &projector).max_abs();
        if defect > SPECTRAL_TOL.sqrt() {
            return Err(Error::IllConditionedSpectrum(format!(
                "cluster at {mu:e} gives J² + P of size {defect:e}"
            )));
        }
        let omega = endo_form(&SkewEndo { matrix: j.clone() });
        clusters.push(Cluster {
            mu,
            mult: g.len(),
            projector,
            complex_structure: Some(j),
            omega: Some(omega),
        });
    }
    Ok(SpectralDecomposition { dim: n, clusters })
}

/// `Tr(A^{2k})` for `k = 1..=count`.
pub fn moment_traces(a: &SkewEndo<f64>, count: usize) -> Vec<f64> {
    let am = to_dmatrix(&a.matrix);
    let sq = &am * &am;
    let mut pow = DMatrix::<f64>::identity(a.dim(), a.dim());
    (0..count)
        .map(|_| {
            pow = &pow * &sq;
            pow.trace()
        })
        .collect()
}

/// Solves `Σ m_i μ_i^k = c_k`, `k = 1..=2p`, for `p` distinct negative `μ_i`
/// and even positive `m_i`. Results are ascending in `μ`.
pub fn moment_recover(c: &[f64], p: usize) -> Result<Vec<(usize, f64)>> {
    let bad = |why: String| Error::MomentInconsistency(why);
    if c.len() < 2 * p {
        return Err(bad(format!("{} moments cannot fix {p} eigenvalues", c.len())));
    }
    let cscale = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if p == 0 || cscale == 0.0 {
        return if cscale <= SPECTRAL_TOL {
            Ok(Vec::new())
        } else {
            Err(bad("nonzero moments with no eigenvalues".into()))
        };
    }
    // rescale so the eigenvalues are of order one
    let s = (c[1] / c[0]).abs().max(f64::MIN_POSITIVE);
    let m: Vec<f64> = c.iter().enumerate().map(|(k, v)| v / s.powi(k as i32 + 1)).collect();

    let hankel = DMatrix::from_fn(p, p, |k, j| m[k + j]);
    let rhs = DVector::from_fn(p, |k, _| -m[k + p]);
    let coeffs = hankel
        .lu()
        .solve(&rhs)
        .ok_or_else(|| bad("singular Hankel system".into()))?;
    let mut companion = DMatrix::<f64>::zeros(p, p);
    for i in 1..p {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..p {
        companion[(i, p - 1)] = -coeffs[i];
    }
    let roots = companion.complex_eigenvalues();
    let mut mu: Vec<f64> = Vec::with_capacity(p);
    for r in roots.iter() {
        // roots are of order one after rescaling; tiny eigenvalues may come
        // out on the wrong side of zero and are left to the refinement below
        if r.im.abs() > 1e-6 || r.re > 1e-3 {
            return Err(bad(format!("root {r} is not a negative real number")));
        }
        mu.push(-r.re.abs().max(1e-12));
    }
    mu.sort_by(f64::total_cmp);

    let vander = DMatrix::from_fn(p, p, |k, i| mu[i].powi(k as i32 + 1));
    let mut weights: Vec<f64> = vander
        .lu()
        .solve(&DVector::from_column_slice(&m[..p]))
        .ok_or_else(|| bad("coincident eigenvalues".into()))?
        .iter()
        .copied()
        .collect();

    // Multiplicities are even integers. They are fixed one cluster at a time,
    // largest |μ| first, refitting the remaining unknowns against all 2p
    // moments after each step, so that small eigenvalues are not swamped by
    // errors in the weights of large ones.
    let mut fixed = vec![false; p];
    for i in 0..p {
        fit_moments(&m[..2 * p], &mut weights, &mut mu, &fixed);
        let w = weights[i];
        let r = w.round();
        if (w - r).abs() > 0.25 || r < 2.0 || r as i64 % 2 != 0 {
            return Err(bad(format!("multiplicity {w} is not a positive even integer")));
        }
        weights[i] = r;
        fixed[i] = true;
    }
    fit_moments(&m[..2 * p], &mut weights, &mut mu, &fixed);
    let mult = weights;

    if let Some(u) = mu.iter().find(|u| **u >= 0.0) {
        return Err(bad(format!("recovered eigenvalue {u} is not negative")));
    }
    let mscale = m.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1.0);
    for (k, target) in m.iter().enumerate().take(2 * p) {
        let got: f64 = (0..p).map(|i| mult[i] * mu[i].powi(k as i32 + 1)).sum();
        if (got - target).abs() > 1e-6 * mscale {
            return Err(bad(format!("moment {} disagrees by {:e}", k + 1, got - target)));
        }
    }
    Ok(mult
        .into_iter()
        .zip(mu)
        .map(|(m, u)| (m as usize, u * s))
        .collect())
}

/// Gauss-Newton on `Σ w_i μ_i^k = m_k` with each equation scaled by `1/|m_k|`
/// and each unknown by its size; weights marked `fixed` do not move.
fn fit_moments(m: &[f64], weights: &mut [f64], mu: &mut [f64], fixed: &[bool]) {
    let p = mu.len();
    let free: Vec<usize> = (0..p).filter(|&i| !fixed[i]).collect();
    let cols = p + free.len();
    let row_scale: Vec<f64> = m.iter().map(|v| 1.0 / v.abs().max(1e-300)).collect();
    for _ in 0..40 {
        let f = DVector::from_fn(m.len(), |k, _| {
            row_scale[k] * ((0..p).map(|i| weights[i] * mu[i].powi(k as i32 + 1)).sum::<f64>() - m[k])
        });
        if f.amax() <= 1e-15 {
            return;
        }
        let mut jac = DMatrix::from_fn(m.len(), cols, |k, c| {
            let d = if c < p {
                (k as f64 + 1.0) * weights[c] * mu[c].powi(k as i32)
            } else {
                mu[free[c - p]].powi(k as i32 + 1)
            };
            row_scale[k] * d
        });
        let col_scale: Vec<f64> = (0..cols)
            .map(|c| {
                let n = jac.column(c).norm();
                if n > 0.0 { 1.0 / n } else { 1.0 }
            })
            .collect();
        for (c, sc) in col_scale.iter().enumerate() {
            jac.column_mut(c).scale_mut(*sc);
        }
        let Ok(step) = jac.svd(true, true).solve(&f, 1e-300) else {
            return;
        };
        for i in 0..p {
            mu[i] -= col_scale[i] * step[i];
        }
        for (c, &i) in free.iter().enumerate() {
            weights[i] -= col_scale[p + c] * step[p + c];
        }
    }
}

/// Largest discrepancy between the spectral decomposition of `A` and the
/// eigenvalues and multiplicities recovered from `Tr(A^{2k})`, relative to
/// the largest `|μ|`.
pub fn moment_agreement(a: &SkewEndo<f64>) -> Result<f64> {
    let d = spectral(a)?;
    let clusters: Vec<(usize, f64)> = d.nonzero().map(|c| (c.mult, c.mu)).collect();
    let p = clusters.len();
    let got = moment_recover(&moment_traces(a, 2 * p), p)?;
    if got.len() != p {
        return Err(Error::MomentInconsistency(format!(
            "{} eigenvalues recovered, {p} expected",
            got.len()
        )));
    }
    let scale = clusters.iter().fold(1.0f64, |m, (_, u)| m.max(u.abs()));
    let mut worst: f64 = 0.0;
    for ((m1, u1), (m2, u2)) in clusters.iter().zip(&got) {
        if m1 != m2 {
            return Err(Error::MomentInconsistency(format!(
                "multiplicity {m2} recovered, {m1} expected"
            )));
        }
        worst = worst.max((u1 - u2).abs() / scale);
    }
    Ok(worst)
}

#[derive(Debug, Clone)]
pub struct SymplecticCandidate {
    /// `Σ ω_i` over the nonzero clusters.
    pub form: Form<f64>,
    /// True iff the kernel cluster is absent.
    pub compatible: bool,
    pub kernel_rank: usize,
    /// `|C² + I|` for the endomorphism `C` of the form.
    pub square_residual: f64,
}

pub fn symplectic_candidate(d: &SpectralDecomposition) -> SymplecticCandidate {
    let mut form = Form::zero(d.dim(), 2);
    for c in d.nonzero() {
        form += c.omega.as_ref().expect("nonzero cluster");
    }
    let kernel_rank = d.kernel_rank();
    SymplecticCandidate {
        square_residual: square_residual(&form),
        form,
        compatible: kernel_rank == 0,
        kernel_rank,
    }
}

/// `|C² + I|` where `C` is the endomorphism of the 2-form `α`.
pub fn square_residual(alpha: &Form<f64>) -> f64 {
    let c = form_endo(alpha).expect("2-form").into_matrix();
    (&(&c * &c) + &Matrix::identity(alpha.dim())).max_abs()
}

/// `α' + ½ ⋆(α' ∧ α')` for a 2-form on a 6-dimensional space. When `α'` is
/// a compatible form of rank 4, this adds the unit form of its kernel.
pub fn symplectic_patch<S: Scalar>(alpha: &Form<S>) -> Result<Form<S>> {
    if alpha.dim() != 6 {
        return Err(Error::UnsupportedDimension(alpha.dim()));
    }
    if alpha.degree() != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            found: alpha.degree(),
        });
    }
    let sq = alpha.wedge(alpha)?;
    Ok(alpha + &sq.hodge_star().scale(&S::from_ratio(1, 2)))
}

/// `Qψ = Σ_h (h ⌟ ψ) ∧ h♭` over an orthonormal frame of `H`.
pub fn splitting_q<S: Scalar>(frame: &[Vector<S>], psi: &Form<S>) -> Result<Form<S>> {
    let n = psi.dim();
    for (a, u) in frame.iter().enumerate() {
        if u.dim() != n {
            return Err(Error::SpaceMismatch { left: n, right: u.dim() });
        }
        for (b, v) in frame.iter().enumerate().skip(a) {
            let target = if a == b { S::one() } else { S::zero() };
            if !(u.dot(v) - target).is_negligible(1.0) {
                return Err(Error::InvalidOrthonormalFrame(format!(
                    "⟨h_{}, h_{}⟩ is off by {:e}",
                    a + 1,
                    b + 1,
                    (u.dot(v) - if a == b { S::one() } else { S::zero() }).magnitude()
                )));
            }
        }
    }
    let mut out = Form::zero(n, psi.degree());
    if psi.degree() == 0 {
        return Ok(out);
    }
    for h in frame {
        out += &psi.contract(h)?.wedge(&h.flat())?;
    }
    Ok(out)
}

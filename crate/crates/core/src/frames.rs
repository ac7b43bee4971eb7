//! Complex coframes `γ_k = α_k + iβ_k` of an oriented 3-dimensional inner
//! product space `E`.
//!
//! A triple is stored as the complex matrix `G` whose rows are the
//! coefficients of `γ_k` in an oriented orthonormal coframe `e¹, e², e³`.
//! The orthonormality constraints on `(α_k, β_k)` say exactly that `G` is
//! unitary. Then `γ = Pγ̄` with `P = G Gᵀ`, and `k = det G`.

use nalgebra::{DMatrix, Matrix3, Vector3};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::form::Form;
use crate::sample::{self, SampleRng};

pub type C = Complex64;

/// Tolerance on the frame constraints and identities.
pub const FRAME_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexOneForm {
    pub alpha: Form<f64>,
    pub beta: Form<f64>,
}

impl ComplexOneForm {
    pub fn new(alpha: Form<f64>, beta: Form<f64>) -> Result<Self> {
        for f in [&alpha, &beta] {
            if f.dim() != 3 {
                return Err(Error::UnsupportedDimension(f.dim()));
            }
            if f.degree() != 1 {
                return Err(Error::DegreeMismatch {
                    expected: 1,
                    found: f.degree(),
                });
            }
        }
        Ok(ComplexOneForm { alpha, beta })
    }

    pub fn from_coeffs(c: &Vector3<C>) -> Self {
        let re: Vec<f64> = c.iter().map(|z| z.re).collect();
        let im: Vec<f64> = c.iter().map(|z| z.im).collect();
        ComplexOneForm {
            alpha: Form::from_dense(3, 1, &re),
            beta: Form::from_dense(3, 1, &im),
        }
    }

    pub fn coeffs(&self) -> Vector3<C> {
        let (a, b) = (self.alpha.to_dense(), self.beta.to_dense());
        Vector3::from_fn(|i, _| C::new(a[i], b[i]))
    }

    pub fn to_form(&self) -> Form<C> {
        let c = self.coeffs();
        Form::from_dense(3, 1, c.as_slice())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameTriple {
    g: Matrix3<C>,
    /// `ν_E = orientation · e¹∧e²∧e³`.
    orientation: f64,
}

fn unitary_defect(g: &Matrix3<C>) -> f64 {
    (g * g.adjoint() - Matrix3::identity()).camax()
}

impl FrameTriple {
    /// Rejects triples violating `|α_k|² + |β_k|² = 1`,
    /// `⟨α_i, α_j⟩ + ⟨β_i, β_j⟩ = 0` or `⟨α_i, β_j⟩ = ⟨α_j, β_i⟩`.
    pub fn new(gamma: [ComplexOneForm; 3], nu: &Form<f64>) -> Result<Self> {
        let g = Matrix3::from_rows(&[
            gamma[0].coeffs().transpose(),
            gamma[1].coeffs().transpose(),
            gamma[2].coeffs().transpose(),
        ]);
        if nu.dim() != 3 || nu.degree() != 3 {
            return Err(Error::InvalidFrame("ν_E must be a 3-form on E".into()));
        }
        let v = nu.coeff(&[1, 2, 3])?;
        if (v.abs() - 1.0).abs() > FRAME_TOL {
            return Err(Error::InvalidFrame(format!("ν_E has norm {}", v.abs())));
        }
        Self::from_matrix(g, v.signum())
    }

    pub fn from_matrix(g: Matrix3<C>, orientation: f64) -> Result<Self> {
        let d = unitary_defect(&g);
        if !(d <= FRAME_TOL) {
            return Err(Error::InvalidFrame(format!(
                "orthonormality constraints violated by {d:e}"
            )));
        }
        Ok(FrameTriple { g, orientation })
    }

    /// The real frame `(e¹, e², e³)`.
    pub fn real() -> Self {
        FrameTriple {
            g: Matrix3::identity(),
            orientation: 1.0,
        }
    }

    pub fn matrix(&self) -> &Matrix3<C> {
        &self.g
    }

    pub fn gamma(&self) -> [ComplexOneForm; 3] {
        std::array::from_fn(|k| ComplexOneForm::from_coeffs(&self.g.row(k).transpose()))
    }

    pub fn nu(&self) -> Form<f64> {
        Form::volume(3).scale(&self.orientation)
    }

    fn forms(&self) -> [Form<C>; 3] {
        std::array::from_fn(|k| Form::from_dense(3, 1, self.g.row(k).transpose().as_slice()))
    }

    fn conj_forms(&self) -> [Form<C>; 3] {
        std::array::from_fn(|k| {
            Form::from_dense(3, 1, self.g.row(k).map(|z| z.conj()).transpose().as_slice())
        })
    }

    /// `⋆_E` for the orientation `ν_E`.
    fn star(&self, f: &Form<C>) -> Form<C> {
        f.hodge_star().scale(&C::new(self.orientation, 0.0))
    }
}

/// `γ×γ = (γ₂∧γ₃, γ₃∧γ₁, γ₁∧γ₂)`.
pub fn cross(gamma: &[Form<C>; 3]) -> Result<[Form<C>; 3]> {
    Ok([
        gamma[1].wedge(&gamma[2])?,
        gamma[2].wedge(&gamma[0])?,
        gamma[0].wedge(&gamma[1])?,
    ])
}

pub fn cross_frame(frame: &FrameTriple) -> [Form<C>; 3] {
    cross(&frame.forms()).expect("1-forms on E")
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// `r_a` with `(r_a)_{il} = Σ_k a_k ε_{kil}`, so that `Σ a_k γ_k ∧ γ = r_a (γ×γ)`.
pub fn r_from_coeffs(a: &Vector3<C>) -> Matrix3<C> {
    Matrix3::from_fn(|i, l| (0..3).map(|k| a[k] * levi_civita(k, i, l)).sum())
}

/// The skew matrix with `α ∧ γ = r_α (γ×γ)` componentwise.
pub fn r_matrix(alpha: &Form<C>, gamma: &[ComplexOneForm; 3]) -> Result<Matrix3<C>> {
    if alpha.dim() != 3 || alpha.degree() != 1 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            found: alpha.degree(),
        });
    }
    let g = Matrix3::from_rows(&[
        gamma[0].coeffs().transpose(),
        gamma[1].coeffs().transpose(),
        gamma[2].coeffs().transpose(),
    ]);
    let coeffs = Vector3::from_column_slice(&alpha.to_dense());
    let gt = g.transpose();
    let a = gt
        .lu()
        .solve(&coeffs)
        .filter(|_| g.determinant().norm() > FRAME_TOL)
        .ok_or_else(|| Error::FrameRank("γ does not span the complexified dual".into()))?;
    Ok(r_from_coeffs(&a))
}

/// Largest componentwise `|α ∧ γ_i - (r_α(γ×γ))_i|`.
pub fn cross_identity_residual(alpha: &Form<C>, frame: &FrameTriple) -> Result<f64> {
    let r = r_matrix(alpha, &frame.gamma())?;
    let gamma = frame.forms();
    let cr = cross_frame(frame);
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        let lhs = alpha.wedge(&gamma[i])?;
        let mut rhs = Form::zero(3, 2);
        for (l, c) in cr.iter().enumerate() {
            rhs += &c.scale(&r[(i, l)]);
        }
        worst = worst.max((&lhs - &rhs).max_abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionData {
    p: Matrix3<C>,
    k: C,
}

impl TransitionData {
    pub fn new(p: Matrix3<C>, k: C) -> Result<Self> {
        let t = TransitionData { p, k };
        let d = t.defect();
        if !(d <= FRAME_TOL) {
            return Err(Error::InvalidTransition(format!(
                "transition invariants violated by {d:e}"
            )));
        }
        Ok(t)
    }

    pub fn p(&self) -> &Matrix3<C> {
        &self.p
    }

    pub fn k(&self) -> C {
        self.k
    }

    /// Largest violation of `P = Pᵀ`, `PP̄ = I`, `k² = det P`, `|k| = 1`.
    pub fn defect(&self) -> f64 {
        let sym = (self.p - self.p.transpose()).camax();
        let unit = (self.p * self.p.map(|z| z.conj()) - Matrix3::identity()).camax();
        let det = (self.k * self.k - self.p.determinant()).norm();
        let modulus = (self.k.norm() - 1.0).abs();
        sym.max(unit).max(det).max(modulus)
    }
}

/// Residuals of the star identities for a candidate `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarResiduals {
    /// The three identities `⋆γ₁ = kγ̄₂∧γ̄₃`, `⋆γ₂ = -kγ̄₁∧γ̄₃`, `⋆γ₃ = kγ̄₁∧γ̄₂`.
    pub star: f64,
    /// `kγ̄₁∧γ̄₂∧γ̄₃ = ν_E`.
    pub volume: f64,
    /// `⋆γ_j ∧ γ̄_j = ν_E` for each `j`.
    pub pairing: f64,
}

impl StarResiduals {
    pub fn max(&self) -> f64 {
        self.star.max(self.volume).max(self.pairing)
    }
}

pub fn star_residuals(frame: &FrameTriple, k: C) -> StarResiduals {
    let g = frame.forms();
    let gb = frame.conj_forms();
    let w = |a: &Form<C>, b: &Form<C>| a.wedge(b).expect("forms on E");
    let rhs = [
        w(&gb[1], &gb[2]).scale(&k),
        w(&gb[0], &gb[2]).scale(&-k),
        w(&gb[0], &gb[1]).scale(&k),
    ];
    let mut star: f64 = 0.0;
    let mut pairing: f64 = 0.0;
    let nu = frame.nu().map_coeffs(|v| C::new(*v, 0.0));
    for j in 0..3 {
        let s = frame.star(&g[j]);
        star = star.max((&s - &rhs[j]).max_abs());
        pairing = pairing.max((&w(&s, &gb[j]) - &nu).max_abs());
    }
    let vol = w(&w(&gb[0], &gb[1]), &gb[2]).scale(&k);
    StarResiduals {
        star,
        volume: (&vol - &nu).max_abs(),
        pairing,
    }
}

/// The `k` of `⋆γ₁ = kγ̄₂∧γ̄₃`, cross-checked on the other identities.
pub fn star_triple(frame: &FrameTriple) -> Result<C> {
    let g = frame.forms();
    let gb = frame.conj_forms();
    let s1 = frame.star(&g[0]);
    let b23 = gb[1].wedge(&gb[2])?;
    let (blade, denom) = b23
        .terms()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .map(|(b, c)| (b, *c))
        .ok_or_else(|| Error::FrameInconsistency("γ̄₂∧γ̄₃ vanishes".into()))?;
    let k = s1.get(blade) / denom;
    let r = star_residuals(frame, k);
    if !(r.max() <= FRAME_TOL) {
        return Err(Error::FrameInconsistency(format!(
            "no consistent k, star identities off by {:e}",
            r.max()
        )));
    }
    Ok(k)
}

/// `P` with `γ = Pγ̄`, and `k` from the star identities.
pub fn transition_p(frame: &FrameTriple) -> Result<TransitionData> {
    let g = frame.matrix();
    let gbar = g.map(|z| z.conj());
    let inv = gbar
        .try_inverse()
        .ok_or_else(|| Error::InvalidFrame("γ̄ does not span".into()))?;
    let p = g * inv;
    let k = star_triple(frame)?;
    TransitionData::new(p, k).map_err(|e| match e {
        Error::InvalidTransition(m) => Error::InvalidFrame(m),
        other => other,
    })
}

/// Real dimension of `{α : P r̄_α P + k² r_α = 0}`; with `restrict_real`
/// only real 1-forms of `E` count. A 1-form is described by its coefficients
/// `a` in the frame, and it is real iff `ā = P a`.
pub fn obstruction_kernel(t: &TransitionData, restrict_real: bool) -> Result<usize> {
    let d = t.defect();
    if !(d <= FRAME_TOL) {
        return Err(Error::InvalidTransition(format!(
            "transition invariants violated by {d:e}"
        )));
    }
    let (p, k2) = (t.p, t.k * t.k);
    let rows = if restrict_real { 24 } else { 18 };
    let mut m = DMatrix::<f64>::zeros(rows, 6);
    for col in 0..6 {
        let mut a = Vector3::<C>::zeros();
        a[col % 3] = if col < 3 { C::new(1.0, 0.0) } else { C::new(0.0, 1.0) };
        let abar = a.map(|z| z.conj());
        let e = p * r_from_coeffs(&abar) * p + r_from_coeffs(&a) * k2;
        for (i, z) in e.iter().enumerate() {
            m[(2 * i, col)] = z.re;
            m[(2 * i + 1, col)] = z.im;
        }
        if restrict_real {
            let reality = abar - p * a;
            for (i, z) in reality.iter().enumerate() {
                m[(18 + 2 * i, col)] = z.re;
                m[(18 + 2 * i + 1, col)] = z.im;
            }
        }
    }
    let sv = m.singular_values();
    let top = sv.iter().fold(0.0f64, |a, b| a.max(*b)).max(1.0);
    let rank = sv.iter().filter(|s| **s > FRAME_TOL * top).count();
    Ok(6 - rank)
}

/// `M = S + r` with `S` symmetric and `r` skew.
pub fn split_symmetric_skew(m: &Matrix3<C>) -> (Matrix3<C>, Matrix3<C>) {
    let t = m.transpose();
    ((m + t) * C::new(0.5, 0.0), (m - t) * C::new(0.5, 0.0))
}

fn gaussian_ish(rng: &mut SampleRng) -> C {
    C::new(sample::uniform(rng), sample::uniform(rng))
}

/// A uniformly seeded unitary matrix, the `Q` factor of a random complex matrix.
pub fn random_unitary(rng: &mut SampleRng) -> Matrix3<C> {
    loop {
        let m = Matrix3::from_fn(|_, _| gaussian_ish(rng));
        if m.determinant().norm() > 1e-3 {
            return m.qr().q();
        }
    }
}

/// The real frame moved by a random unitary matrix.
pub fn random_frame(rng: &mut SampleRng) -> FrameTriple {
    let orientation = if rng.random::<bool>() { 1.0 } else { -1.0 };
    FrameTriple::from_matrix(random_unitary(rng), orientation).expect("unitary by construction")
}

pub fn random_transition(rng: &mut SampleRng) -> TransitionData {
    let f = random_frame(rng);
    transition_p(&f).expect("valid frame")
}

pub fn random_complex_one_form(rng: &mut SampleRng) -> Form<C> {
    let c: Vec<C> = (0..3).map(|_| gaussian_ish(rng)).collect();
    Form::from_dense(3, 1, &c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn e1(i: usize) -> Form<C> {
        Form::basis(3, &[i]).unwrap()
    }

    #[test]
    fn cross_examples() {
        let g = [e1(1), e1(2), e1(3)];
        let cr = cross(&g).unwrap();
        assert_eq!(cr[0], Form::basis(3, &[2, 3]).unwrap());
        assert_eq!(cr[1], -Form::basis(3, &[1, 3]).unwrap());
        assert_eq!(cr[2], Form::basis(3, &[1, 2]).unwrap());
        let cr = cross(&[e1(1), e1(1), e1(3)]).unwrap();
        assert!(cr[2].is_zero());
        assert_eq!(cr[0], -cr[1].clone());
    }

    #[test]
    fn r_matrix_examples() {
        let f = FrameTriple::real();
        let r = r_matrix(&e1(2), &f.gamma()).unwrap();
        // e² ∧ e³ = (γ×γ)₁ and e² ∧ e¹ = -(γ×γ)₃
        let mut want = Matrix3::<C>::zeros();
        want[(2, 0)] = c(1.0, 0.0);
        want[(0, 2)] = c(-1.0, 0.0);
        assert_eq!(r, want);
        assert_eq!(r.transpose(), -r);
        assert!(r_matrix(&Form::zero(3, 1), &f.gamma()).unwrap().iter().all(|z| z.norm() == 0.0));
        let deg = [f.gamma()[0].clone(), f.gamma()[0].clone(), f.gamma()[2].clone()];
        assert!(matches!(r_matrix(&e1(1), &deg), Err(Error::FrameRank(_))));
        let mut rng = sample::rng(4);
        let fr = random_frame(&mut rng);
        let g1 = fr.gamma()[0].to_form();
        assert!(cross_identity_residual(&g1, &fr).unwrap() < FRAME_TOL);
    }

    #[test]
    fn transition_examples() {
        let t = transition_p(&FrameTriple::real()).unwrap();
        assert!((t.p() - Matrix3::identity()).camax() < 1e-15);
        assert!((t.k() - c(1.0, 0.0)).norm() < 1e-15);

        let g = Matrix3::from_diagonal(&Vector3::new(c(0.0, 1.0), c(1.0, 0.0), c(1.0, 0.0)));
        let f = FrameTriple::from_matrix(g, 1.0).unwrap();
        let t = transition_p(&f).unwrap();
        let want = Matrix3::from_diagonal(&Vector3::new(c(-1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)));
        assert!((t.p() - want).camax() < 1e-15);
        assert!((t.k() * t.k() + c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn phase_rotated_frame() {
        let th = [0.3, -1.1, 2.0];
        let g = Matrix3::from_diagonal(&Vector3::from_fn(|i, _| C::from_polar(1.0, th[i])));
        let f = FrameTriple::from_matrix(g, 1.0).unwrap();
        let k = star_triple(&f).unwrap();
        assert!((k - C::from_polar(1.0, th.iter().sum())).norm() < 1e-12);
    }

    #[test]
    fn rejects_invalid_frame() {
        let g = Matrix3::from_diagonal(&Vector3::new(c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)));
        assert!(matches!(FrameTriple::from_matrix(g, 1.0), Err(Error::InvalidFrame(_))));
        let bad = TransitionData::new(Matrix3::identity() * c(2.0, 0.0), c(1.0, 0.0));
        assert!(matches!(bad, Err(Error::InvalidTransition(_))));
    }

    #[test]
    fn obstruction_examples() {
        let t = TransitionData::new(Matrix3::identity(), c(1.0, 0.0)).unwrap();
        assert_eq!(obstruction_kernel(&t, true).unwrap(), 0);
        assert_eq!(obstruction_kernel(&t, false).unwrap(), 3);
    }

    #[test]
    fn splitter_recovers_parts() {
        let mut rng = sample::rng(2);
        let m = Matrix3::from_fn(|_, _| gaussian_ish(&mut rng));
        let (s, r) = split_symmetric_skew(&m);
        assert_eq!(s, s.transpose());
        assert_eq!(r, -r.transpose());
        assert!((s + r - m).camax() < 1e-15);
    }
}

//! One verification unit per campaign: a single (dim, seed) draw, or a
//! seed-free exhaustive computation.

use hodgelab::blade;
use hodgelab::frames::{
    cross_identity_residual, obstruction_kernel, r_matrix, random_complex_one_form, random_frame,
    random_transition, split_symmetric_skew, star_residuals, star_triple, transition_p, C, FRAME_TOL,
};
use hodgelab::harmonic::{
    moment_agreement, spectral, splitting_q, square_residual, stab_expand,
    symplectic_candidate, symplectic_patch, SkewEndo, SPECTRAL_TOL,
};
use hodgelab::hermitian::ComplexStructure;
use hodgelab::lefschetz::{alpha_from_holomorphic, lefschetz_lstar, lefschetz_lstar_power, p_k, primitive_basis};
use hodgelab::sample::{self, SampleRng};
use hodgelab::scalar::{factorial, sign_power};
use hodgelab::tensor_maps::{
    a_kernel, a_restricted_rank, antisymmetrize, contraction_identity_sides, holomorphic_q, holomorphize,
    s_vector, split_type, FormValuedMap,
};
use hodgelab::torsion::{polarization_report, van_kernel_dimension};
use hodgelab::{Error, Form, Result, Scalar, Vector};

/// Running verdict of a unit.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub pass: bool,
    pub residual: f64,
    pub value: Option<i64>,
}

impl Default for Outcome {
    fn default() -> Self {
        Outcome {
            pass: true,
            residual: 0.0,
            value: None,
        }
    }
}

impl Outcome {
    fn forms<S: Scalar>(&mut self, lhs: &Form<S>, rhs: &Form<S>) -> Result<()> {
        let d = lhs.checked_sub(rhs)?;
        let scale = 1f64.max(lhs.max_abs()).max(rhs.max_abs());
        self.residual = self.residual.max(d.max_abs());
        self.pass &= d.is_negligible(scale);
        Ok(())
    }

    fn zero_map<S: Scalar>(&mut self, q: &FormValuedMap<S>, scale: f64) {
        self.residual = self.residual.max(q.max_abs());
        self.pass &= q.is_negligible(scale.max(1.0));
    }

    fn within(&mut self, residual: f64, tol: f64) {
        self.residual = self.residual.max(residual);
        self.pass &= residual <= tol;
    }

    fn holds(&mut self, ok: bool) {
        self.pass &= ok;
    }
}

fn structure<S: Scalar>(n: usize) -> Result<ComplexStructure<S>> {
    ComplexStructure::standard(n)
}

fn random_map<S: Scalar>(rng: &mut SampleRng, j: &ComplexStructure<S>, p: usize, q: usize) -> Result<FormValuedMap<S>> {
    let n = j.dim();
    let mut acc = FormValuedMap::zero(j, p, q);
    for u in &j.lambda_p_basis(p)? {
        let raw: Form<S> = sample::form(rng, n, q);
        let w = j.lambda_p_project(&raw)?;
        acc = acc.add(&FormValuedMap::outer(j, &w, u)?)?;
    }
    Ok(acc)
}

fn holomorphic<S: Scalar>(rng: &mut SampleRng, j: &ComplexStructure<S>, p: usize) -> Result<Form<S>> {
    let raw: Form<S> = sample::form(rng, j.dim(), p);
    j.lambda_p_project(&raw)
}

/// Bidegree types: a(Q₁) ∈ λ^{p,q} and a(Q₂) ∈ λ^{p+q} on a random map.
pub fn lemma_2_1<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let j = structure::<S>(n)?;
    let mut out = Outcome::default();
    let top = 3.min(n / 2);
    for p in 1..=top {
        for q in 1..=top {
            let mut rng = sample::sub_rng(seed, (10 * p + q) as u64);
            let m = random_map(&mut rng, &j, p, q)?;
            let (q1, q2) = split_type(&m)?;
            let a1 = antisymmetrize(&q1)?;
            let a2 = antisymmetrize(&q2)?;
            out.forms(&j.bidegree_project(&a1, p, q)?, &a1)?;
            out.forms(&j.lambda_p_project(&a2)?, &a2)?;
            let d = (p as i64 - q as i64).pow(2);
            out.forms(&j.curly_j_squared(&a1)?, &a1.scale(&S::from_i64(-d)))?;
        }
    }
    Ok(out)
}

/// Full column rank of a on ⊗₁, and Q₁ = 0 on its nullspace, for p ≠ q.
pub fn prop_2_2_rank<S: Scalar>(n: usize, p: usize, q: usize) -> Result<Outcome> {
    let j = structure::<S>(n)?;
    let mut out = Outcome::default();
    let (rank, dim) = a_restricted_rank(&j, p, q)?;
    out.holds(rank == dim);
    out.value = Some(rank as i64);
    for k in a_kernel(&j, p, q)? {
        let (q1, _) = split_type(&k)?;
        out.zero_map(&q1, k.max_abs());
    }
    Ok(out)
}

/// p·a(Q_X) + (−1)^p a(Q^X) = X ⌟ a(Q) on random ⊗₁ maps.
pub fn prop_2_2_contraction<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let j = structure::<S>(n)?;
    let mut out = Outcome::default();
    let top = 3.min(n / 2);
    let mut rng = sample::rng(seed);
    for p in 1..=top {
        for q in 1..=top {
            let (q1, _) = split_type(&random_map(&mut rng, &j, p, q)?)?;
            let x: Vector<S> = sample::vector(&mut rng, n);
            let (lhs, rhs) = contraction_identity_sides(&q1, &x)?;
            out.forms(&lhs, &rhs)?;
        }
    }
    Ok(out)
}

/// The L* recursion for P_k and the evaluation (L*)^p(α∧β) on primitive forms.
pub fn prop_2_3<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let j = structure::<S>(n)?;
    let mut out = Outcome::default();
    let mut rng = sample::rng(seed);
    for r in 0..=3usize.min(n) {
        for s in 0..=3usize.min(n) {
            let a: Form<S> = sample::form(&mut rng, n, r);
            let b: Form<S> = sample::form(&mut rng, n, s);
            for k in 0..=r.min(s) {
                if r + s - 2 * k < 2 || r + s - 2 * k > n {
                    continue;
                }
                let lhs = lefschetz_lstar(&j, &p_k(&j, &a, &b, k)?)?;
                let mut rhs = Form::zero(n, r + s - 2 * k - 2);
                if r >= k + 2 {
                    rhs += &p_k(&j, &lefschetz_lstar(&j, &a)?, &b, k)?;
                }
                if s >= k + 2 {
                    rhs += &p_k(&j, &a, &lefschetz_lstar(&j, &b)?, k)?;
                }
                if k < r.min(s) {
                    rhs += &p_k(&j, &a, &b, k + 1)?.scale(&sign_power(r + 1 - k));
                }
                out.forms(&lhs, &rhs)?;
            }
        }
    }
    for p in 1..=3usize.min(n / 2) {
        let basis = primitive_basis(&j, p)?;
        let a = sample::combination(&mut rng, &basis, n, p);
        let b = sample::combination(&mut rng, &basis, n, p);
        let lhs = lefschetz_lstar_power(&j, &a.wedge(&b)?, p)?;
        let c = sign_power::<S>(p * (p - 1) / 2) * factorial::<S>(p) * a.inner(&j.pullback(&b)?)?;
        out.forms(&lhs, &Form::scalar(n, c))?;
    }
    Ok(out)
}

fn holomorphic_degrees(n: usize) -> impl Iterator<Item = usize> {
    2..=3usize.min(n / 2)
}

/// holomorphic_q lies in ⊗₁, and (S(JX,…))♯ = −J(S(X,…))♯.
pub fn lemma_3_1<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let j = structure::<S>(n)?;
    let mut out = Outcome::default();
    for p in holomorphic_degrees(n) {
        let mut rng = sample::sub_rng(seed, p as u64);
        let omega = holomorphic(&mut rng, &j, p)?;
        let raw = (0..n).map(|_| holomorphic(&mut rng, &j, p)).collect::<Result<Vec<_>>>()?;
        let q = holomorphic_q(&j, &omega, &holomorphize(&j, &raw)?)?;
        let (_, q2) = split_type(&q)?;
        out.zero_map(&q2, q.max_abs());
        let xs: Vec<Vector<S>> = (0..p - 1).map(|_| sample::vector(&mut rng, n)).collect();
        let mut turned = xs.clone();
        turned[0] = j.apply(&xs[0]);
        let lhs = s_vector(&omega, &turned)?;
        let rhs = -&j.apply(&s_vector(&omega, &xs)?);
        out.forms(&lhs.flat(), &rhs.flat())?;
    }
    Ok(out)
}

/// P_{p−1}(Ω, JΩ) = 2(−1)^p (p−1)! α_Ω for Ω ∈ λ^p.
pub fn alpha_omega<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let j = structure::<S>(n)?;
    let mut out = Outcome::default();
    for p in holomorphic_degrees(n) {
        let mut rng = sample::sub_rng(seed, p as u64);
        let omega = holomorphic(&mut rng, &j, p)?;
        let j_omega = j.pullback(&omega)?;
        let lhs = p_k(&j, &omega, &j_omega, p - 1)?;
        let c = sign_power::<S>(p) * factorial::<S>(p - 1) * S::from_i64(2);
        out.forms(&lhs, &alpha_from_holomorphic(&j, &omega)?.scale(&c))?;
        let l = lefschetz_lstar_power(&j, &omega.wedge(&j_omega)?, p - 1)?;
        out.forms(&l, &lhs.scale(&sign_power(p * (p - 1) / 2)))?;
    }
    Ok(out)
}

/// adjoint_wedge(α₁, α₂∧α₃) against its explicit expansion.
pub fn prop_4_1<S: Scalar>(n: usize, seed: u64) -> Result<Outcome> {
    let mut rng = sample::sub_rng(seed, n as u64);
    let a: Vec<Form<S>> = (0..3).map(|_| sample::form(&mut rng, n, 2)).collect();
    let lhs = Form::adjoint_wedge(&a[0], &a[1].wedge(&a[2])?)?;
    let mut out = Outcome::default();
    out.forms(&stab_expand(&a[0], &a[1], &a[2])?, &lhs)?;
    Ok(out)
}

/// Spectral reconstruction, moment recovery and the symplectic candidate.
pub fn prop_4_2(n: usize, seed: u64) -> Result<Outcome> {
    let mut rng = sample::sub_rng(seed, n as u64);
    let a = SkewEndo::new(sample::float_skew_matrix(&mut rng, n))?;
    let d = spectral(&a)?;
    let mut out = Outcome::default();
    out.within(d.residual(&a), SPECTRAL_TOL);
    out.within(moment_agreement(&a)?, 1e-6);
    out.holds(d.nonzero().all(|c| c.mult % 2 == 0));
    let c = symplectic_candidate(&d);
    if c.compatible {
        out.within(c.square_residual, SPECTRAL_TOL);
    }
    out.value = Some(d.nonzero().count() as i64);
    Ok(out)
}

/// Exhaustive check of Qψ = (−1)^{p−1} j ψ over coordinate subspaces H of
/// the given rank and all basis forms ψ.
pub fn lemma_4_3<S: Scalar>(n: usize, rank: usize) -> Result<Outcome> {
    let mut out = Outcome::default();
    let mut checked = 0i64;
    for h in blade::blades(n, rank) {
        let frame: Vec<Vector<S>> = h.indices().map(|i| Vector::basis(n, i + 1)).collect();
        for p in 0..=n {
            for b in blade::blades(n, p) {
                let mut psi = Form::zero(n, p);
                psi.add_term(b, S::one());
                let jcount = b.indices().filter(|i| h.contains(*i)).count();
                let eig = if p == 0 {
                    S::zero()
                } else {
                    sign_power::<S>(p - 1) * S::from_i64(jcount as i64)
                };
                out.forms(&splitting_q(&frame, &psi)?, &psi.scale(&eig))?;
                checked += 1;
            }
        }
    }
    out.value = Some(checked);
    Ok(out)
}

fn rank_four_candidate(seed: u64) -> Result<Form<f64>> {
    let mut rng = sample::sub_rng(seed, 6);
    let a = SkewEndo::new(sample::float_skew_of_rank(&mut rng, 6, 4, false))?;
    let c = symplectic_candidate(&spectral(&a)?);
    if c.kernel_rank != 2 {
        return Err(Error::IllConditionedSpectrum(format!(
            "expected a 2-dimensional kernel, found {}",
            c.kernel_rank
        )));
    }
    Ok(c.form)
}

/// α′ + ⋆(α′∧α′) as printed, on a rank-4 compatible α′ in dimension 6.
pub fn lemma_4_4_literal(seed: u64) -> Result<Outcome> {
    let alpha = rank_four_candidate(seed)?;
    let patched = &alpha + &alpha.wedge(&alpha)?.hodge_star();
    let mut out = Outcome::default();
    out.within(square_residual(&patched), SPECTRAL_TOL);
    Ok(out)
}

/// α′ + ½⋆(α′∧α′), which completes α′ by the unit form of its kernel.
pub fn lemma_4_4_normalized(seed: u64) -> Result<Outcome> {
    let alpha = rank_four_candidate(seed)?;
    let mut out = Outcome::default();
    out.within(square_residual(&symplectic_patch(&alpha)?), SPECTRAL_TOL);
    Ok(out)
}

/// Star-triple identities, transition invariants and the cross identity on
/// a constructively generated frame.
pub fn lemma_4_8(seed: u64) -> Result<Outcome> {
    let mut rng = sample::rng(seed);
    let f = random_frame(&mut rng);
    let mut out = Outcome::default();
    let k = star_triple(&f)?;
    out.within((k.norm() - 1.0).abs(), FRAME_TOL);
    out.within(star_residuals(&f, k).max(), FRAME_TOL);
    out.within(transition_p(&f)?.defect(), FRAME_TOL);
    let a = random_complex_one_form(&mut rng);
    out.within(cross_identity_residual(&a, &f)?, FRAME_TOL);
    Ok(out)
}

/// The linear system P r̄ P + k² r = 0 over complex 1-forms, and the
/// symmetric/skew identification step.
pub fn prop_4_11(seed: u64) -> Result<Outcome> {
    let mut rng = sample::rng(seed);
    let t = random_transition(&mut rng);
    let mut out = Outcome::default();
    let dim = obstruction_kernel(&t, false)?;
    out.value = Some(dim as i64);
    out.holds(dim == 3);
    let f = random_frame(&mut rng);
    let r = r_matrix(&random_complex_one_form(&mut rng), &f.gamma())?;
    let mut s = r.map(|_| C::default());
    for i in 0..3 {
        for j in i..3 {
            let z = C::new(sample::uniform(&mut rng), sample::uniform(&mut rng));
            s[(i, j)] = z;
            s[(j, i)] = z;
        }
    }
    let (s2, r2) = split_symmetric_skew(&(s + r));
    out.within((s2 - s).camax().max((r2 - r).camax()), FRAME_TOL);
    Ok(out)
}

/// Only the zero real 1-form solves the obstruction system.
pub fn cor_4_12(seed: u64) -> Result<Outcome> {
    let t = random_transition(&mut sample::rng(seed));
    let dim = obstruction_kernel(&t, true)?;
    let mut out = Outcome::default();
    out.value = Some(dim as i64);
    out.holds(dim == 0);
    Ok(out)
}

/// [F,G]•η = 0 on the kernel of the polarized F²•η = 0 system.
pub fn eq_7<S: Scalar>(n: usize) -> Result<Outcome> {
    let r = polarization_report(&structure::<S>(n)?);
    let mut out = Outcome::default();
    out.within(r.bracket_residual, 0.0);
    out.value = Some(r.polarized_dim as i64);
    Ok(out)
}

/// Kernel dimension of the constrained-torsion system. Dimension 4 is
/// reported only.
pub fn lemma_5_5<S: Scalar>(n: usize) -> Result<Outcome> {
    let dim = van_kernel_dimension(&structure::<S>(n)?);
    let mut out = Outcome::default();
    out.value = Some(dim as i64);
    if n >= 6 {
        out.holds(dim == 0);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use hodgelab::Rational;

    #[test]
    fn literal_patch_is_not_compatible() {
        let out = lemma_4_4_literal(1).unwrap();
        assert!(!out.pass);
        // C² = −4 on the kernel of α′, so C² + I = −3 times a rank-2 projector
        assert!(out.residual > 1.0);
        assert!(lemma_4_4_normalized(1).unwrap().pass);
    }

    #[test]
    fn exact_units_pass() {
        assert!(prop_4_1::<Rational>(4, 3).unwrap().pass);
        assert!(alpha_omega::<Rational>(6, 2).unwrap().pass);
        assert!(lemma_2_1::<Rational>(4, 1).unwrap().pass);
        assert_eq!(lemma_5_5::<Rational>(4).unwrap().value, Some(4));
    }

    #[test]
    fn float_units_pass() {
        assert!(prop_4_1::<f64>(6, 3).unwrap().pass);
        assert!(prop_2_3::<f64>(4, 9).unwrap().pass);
    }
}

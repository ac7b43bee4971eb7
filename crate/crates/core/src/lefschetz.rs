//! Lefschetz operators of a Hermitian vector space and the bilinear
//! contractions `P_k`.

use crate::blade;
use crate::error::{Error, Result};
use crate::form::{Form, Vector};
use crate::hermitian::ComplexStructure;
use crate::linalg::Matrix;
use crate::scalar::{factorial, Scalar};

/// `L α = ω ∧ α`.
pub fn lefschetz_l<S: Scalar>(omega: &Form<S>, alpha: &Form<S>) -> Result<Form<S>> {
    omega.wedge(alpha)
}

/// `L*α = ½ Σ_i Je_i ⌟ (e_i ⌟ α)`; the zero 0-form below degree 2.
pub fn lefschetz_lstar<S: Scalar>(j: &ComplexStructure<S>, alpha: &Form<S>) -> Result<Form<S>> {
    let n = j.dim();
    if alpha.dim() != n {
        return Err(Error::SpaceMismatch {
            left: n,
            right: alpha.dim(),
        });
    }
    if alpha.degree() < 2 {
        return Ok(Form::zero(n, 0));
    }
    let mut out = Form::zero(n, alpha.degree() - 2);
    for i in 0..n {
        let inner = alpha.contract_basis(i)?;
        if inner.is_zero() {
            continue;
        }
        out += &inner.contract(&j.image_of_basis(i))?;
    }
    Ok(out.scale(&S::from_ratio(1, 2)))
}

/// `(L*)^m α`.
pub fn lefschetz_lstar_power<S: Scalar>(
    j: &ComplexStructure<S>,
    alpha: &Form<S>,
    m: usize,
) -> Result<Form<S>> {
    let mut cur = alpha.clone();
    for _ in 0..m {
        cur = lefschetz_lstar(j, &cur)?;
    }
    Ok(cur)
}

pub fn is_primitive<S: Scalar>(j: &ComplexStructure<S>, alpha: &Form<S>) -> Result<bool> {
    Ok(lefschetz_lstar(j, alpha)?.is_negligible(alpha.max_abs()))
}

/// A basis of the primitive `p`-forms, the kernel of `L*` on `Λ^p`.
pub fn primitive_basis<S: Scalar>(j: &ComplexStructure<S>, p: usize) -> Result<Vec<Form<S>>> {
    let n = j.dim();
    if p < 2 {
        return Ok(Form::basis_forms(n, p));
    }
    let m: Matrix<S> = j.operator_matrix(p, p - 2, |e| lefschetz_lstar(j, e))?;
    Ok(m.nullspace()
        .into_iter()
        .map(|v| Form::from_dense(n, p, &v))
        .collect())
}

/// `P_k(α, β) = Σ (e_{i1} ⌟ .. e_{ik} ⌟ α) ∧ (Je_{i1} ⌟ .. Je_{ik} ⌟ β)`
/// over all ordered `k`-tuples. Permuting a tuple changes both factors by
/// the same sign and repeated indices kill the first factor, so the sum is
/// `k!` times the sum over increasing tuples, which is what is evaluated.
pub fn p_k<S: Scalar>(
    j: &ComplexStructure<S>,
    alpha: &Form<S>,
    beta: &Form<S>,
    k: usize,
) -> Result<Form<S>> {
    let n = j.dim();
    for f in [alpha, beta] {
        if f.dim() != n {
            return Err(Error::SpaceMismatch {
                left: n,
                right: f.dim(),
            });
        }
    }
    let (r, s) = (alpha.degree(), beta.degree());
    if k > r.min(s) {
        return Err(Error::ContractionUnderflow {
            k,
            left: r,
            right: s,
        });
    }
    let images: Vec<Vector<S>> = (0..n).map(|i| j.image_of_basis(i)).collect();
    let mut out = Form::zero(n, (r + s - 2 * k).min(n));
    if r + s - 2 * k > n {
        return Ok(out);
    }
    for tuple in blade::blades(n, k) {
        // innermost contraction is the last index of the tuple
        let idx: Vec<usize> = tuple.indices().collect();
        let mut a = alpha.clone();
        for &i in idx.iter().rev() {
            a = a.contract_basis(i)?;
            if a.is_zero() {
                break;
            }
        }
        if a.is_zero() {
            continue;
        }
        let mut b = beta.clone();
        for &i in idx.iter().rev() {
            b = b.contract(&images[i])?;
            if b.is_zero() {
                break;
            }
        }
        if b.is_zero() {
            continue;
        }
        out += &a.wedge(&b)?;
    }
    Ok(out.scale(&factorial(k)))
}

/// `α_Ω(X, Y) = ⟨JX ⌟ Ω, Y ⌟ Ω⟩` for `Ω ∈ λ^p`, `p ≥ 2`.
pub fn alpha_from_holomorphic<S: Scalar>(
    j: &ComplexStructure<S>,
    omega: &Form<S>,
) -> Result<Form<S>> {
    let n = j.dim();
    if omega.degree() < 2 {
        return Err(Error::DegreeUnderflow {
            degree: omega.degree(),
            required: 2,
        });
    }
    if !j.is_in_lambda_p(omega)? {
        return Err(Error::NotInLambdaP {
            degree: omega.degree(),
        });
    }
    let plain: Vec<Form<S>> = (0..n)
        .map(|i| omega.contract_basis(i))
        .collect::<Result<_>>()?;
    let turned: Vec<Form<S>> = (0..n)
        .map(|i| omega.contract(&j.image_of_basis(i)))
        .collect::<Result<_>>()?;
    let scale = omega.norm_sq().magnitude();
    let mut out = Form::zero(n, 2);
    for a in 0..n {
        for b in a + 1..n {
            let ab = turned[a].inner(&plain[b])?;
            let ba = turned[b].inner(&plain[a])?;
            if !(ab.clone() + ba).is_negligible(scale) {
                return Err(Error::InvariantViolation(format!(
                    "α_Ω is not skew at ({}, {})",
                    a + 1,
                    b + 1
                )));
            }
            if !ab.is_zero() {
                out.add_term(blade::Blade::single(a).with(b), ab);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type F = Form<Rational>;

    fn e(dim: usize, idx: &[usize]) -> F {
        F::basis(dim, idx).unwrap()
    }

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn lefschetz_l_examples() {
        let j = ComplexStructure::<Rational>::standard(4).unwrap();
        let w = j.kahler_form();
        assert_eq!(lefschetz_l(&w, &F::one(4)).unwrap(), w);
        assert_eq!(lefschetz_l(&w, &w).unwrap(), F::volume(4).scale(&q(2)));
        assert!(lefschetz_l(&w, &F::volume(4)).unwrap().is_zero());
    }

    #[test]
    fn lstar_examples() {
        for k in 1..=4 {
            let j = ComplexStructure::<Rational>::standard(2 * k).unwrap();
            let w = j.kahler_form();
            assert_eq!(lefschetz_lstar(&j, &w).unwrap(), F::scalar(2 * k, q(k as i64)));
            assert!(!is_primitive(&j, &w).unwrap());
        }
        let j = ComplexStructure::<Rational>::standard(4).unwrap();
        assert!(lefschetz_lstar(&j, &e(4, &[1])).unwrap().is_zero());
        assert!(lefschetz_lstar(&j, &e(4, &[1, 3])).unwrap().is_zero());
        assert!(is_primitive(&j, &e(4, &[1, 3])).unwrap());
        assert!(is_primitive(&j, &e(4, &[2])).unwrap());
    }

    #[test]
    fn lstar_is_adjoint_of_l() {
        let j = ComplexStructure::<Rational>::standard(6).unwrap();
        let w = j.kahler_form();
        for p in 2..=6 {
            for b in F::basis_forms(6, p) {
                assert_eq!(
                    lefschetz_lstar(&j, &b).unwrap(),
                    F::adjoint_wedge(&w, &b).unwrap()
                );
            }
        }
    }

    #[test]
    fn p_k_examples() {
        let j = ComplexStructure::<Rational>::standard(4).unwrap();
        assert_eq!(p_k(&j, &e(4, &[1]), &e(4, &[2]), 0).unwrap(), e(4, &[1, 2]));
        assert!(p_k(&j, &e(4, &[1]), &e(4, &[1]), 1).unwrap().is_zero());
        assert_eq!(
            p_k(&j, &e(4, &[1]), &e(4, &[1, 2]), 2),
            Err(Error::ContractionUnderflow { k: 2, left: 1, right: 2 })
        );
        // P_1(e¹, e²) = e¹(e_1) · e²(Je_1) = 1
        assert_eq!(p_k(&j, &e(4, &[1]), &e(4, &[2]), 1).unwrap(), F::one(4));
    }

    #[test]
    fn alpha_omega_example() {
        let j = ComplexStructure::<Rational>::standard(4).unwrap();
        let omega = &e(4, &[1, 3]) - &e(4, &[2, 4]);
        let a = alpha_from_holomorphic(&j, &omega).unwrap();
        assert_eq!(a.coeff(&[1, 2]).unwrap(), q(1));
        assert_eq!(j.pullback(&a).unwrap(), a);
        assert!(alpha_from_holomorphic(&j, &F::zero(4, 2)).unwrap().is_zero());
        assert_eq!(
            alpha_from_holomorphic(&j, &j.kahler_form()),
            Err(Error::NotInLambdaP { degree: 2 })
        );
    }
}

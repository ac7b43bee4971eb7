//! Orthogonal complex structures and the complex bigrading of forms.
//!
//! `J` acts on vectors by its matrix (column `j` is `J e_j`) and on forms by
//! pullback, `(Jα)(v_1, ..) = α(Jv_1, ..)`. The derivation `𝒥` inserts `J`
//! in one slot at a time; `𝒥²` acts on `λ^{p,q}` as `-(p-q)²`.

use crate::blade::{self, Blade};
use crate::error::{Error, Result};
use crate::form::{Form, Vector};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexStructure<S> {
    matrix: Matrix<S>,
}

impl<S: Scalar> ComplexStructure<S> {
    /// `J e_{2i-1} = e_{2i}`.
    pub fn standard(dim: usize) -> Result<Self> {
        blade::check_dim(dim)?;
        if dim % 2 != 0 {
            return Err(Error::InvalidComplexStructure(format!(
                "odd dimension {dim}"
            )));
        }
        let mut m = Matrix::zeros(dim, dim);
        for i in (0..dim).step_by(2) {
            m[(i + 1, i)] = S::one();
            m[(i, i + 1)] = -S::one();
        }
        Ok(ComplexStructure { matrix: m })
    }

    /// Validates `J² = -I` and `JᵀJ = I`.
    pub fn new(matrix: Matrix<S>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidComplexStructure("matrix is not square".into()));
        }
        let n = matrix.rows();
        blade::check_dim(n)?;
        if n % 2 != 0 {
            return Err(Error::InvalidComplexStructure(format!("odd dimension {n}")));
        }
        let id = Matrix::<S>::identity(n);
        let scale = matrix.max_abs();
        if !(&(&matrix * &matrix) + &id).is_negligible(scale) {
            return Err(Error::InvalidComplexStructure("J² ≠ -I".into()));
        }
        if !(&(&matrix.transpose() * &matrix) - &id).is_negligible(scale) {
            return Err(Error::InvalidComplexStructure("J is not orthogonal".into()));
        }
        Ok(ComplexStructure { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Half the real dimension.
    pub fn complex_dim(&self) -> usize {
        self.dim() / 2
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn apply(&self, v: &Vector<S>) -> Vector<S> {
        Vector::new(self.matrix.mul_vec(v.components()))
    }

    /// `J e_i` for the 0-based basis index `i`.
    pub fn image_of_basis(&self, i: usize) -> Vector<S> {
        Vector::new(self.matrix.column(i))
    }

    /// The pullback `J e^k = Σ_j J_{kj} e^j`.
    fn pulled_covector(&self, k: usize) -> Form<S> {
        let n = self.dim();
        let mut f = Form::zero(n, 1);
        for j in 0..n {
            f.add_term(Blade::single(j), self.matrix[(k, j)].clone());
        }
        f
    }

    fn check_space(&self, alpha: &Form<S>) -> Result<()> {
        if alpha.dim() != self.dim() {
            return Err(Error::SpaceMismatch {
                left: self.dim(),
                right: alpha.dim(),
            });
        }
        Ok(())
    }

    /// `(Jα)(v_1, .., v_p) = α(Jv_1, .., Jv_p)`.
    pub fn pullback(&self, alpha: &Form<S>) -> Result<Form<S>> {
        self.check_space(alpha)?;
        let n = self.dim();
        let covectors: Vec<Form<S>> = (0..n).map(|k| self.pulled_covector(k)).collect();
        let mut out = Form::zero(n, alpha.degree());
        for (b, c) in alpha.terms() {
            let mut term = Form::scalar(n, c.clone());
            for k in b.indices() {
                term = term.wedge(&covectors[k])?;
            }
            out += &term;
        }
        Ok(out)
    }

    /// `𝒥α = Σ_k (J e^k) ∧ (e_k ⌟ α)`.
    pub fn curly_j(&self, alpha: &Form<S>) -> Result<Form<S>> {
        self.check_space(alpha)?;
        let n = self.dim();
        let mut out = Form::zero(n, alpha.degree());
        if alpha.degree() == 0 {
            return Ok(out);
        }
        for k in 0..n {
            let c = alpha.contract_basis(k)?;
            if c.is_zero() {
                continue;
            }
            out += &self.pulled_covector(k).wedge(&c)?;
        }
        Ok(out)
    }

    pub fn curly_j_squared(&self, alpha: &Form<S>) -> Result<Form<S>> {
        self.curly_j(&self.curly_j(alpha)?)
    }

    /// The `-(p-q)²` eigencomponent of `𝒥²` on `α`, by Lagrange
    /// interpolation over the spectrum `{-(s-2j)²}` of `𝒥²` on degree `s`.
    pub fn bidegree_project(&self, alpha: &Form<S>, p: usize, q: usize) -> Result<Form<S>> {
        self.check_space(alpha)?;
        let s = alpha.degree();
        if p + q != s {
            return Err(Error::DegreeMismatch {
                expected: s,
                found: p + q,
            });
        }
        let target = q.min(p);
        let eigen = |j: usize| -> i64 {
            let d = s as i64 - 2 * j as i64;
            -d * d
        };
        let mut out = alpha.clone();
        for j in 0..=s / 2 {
            if j == target {
                continue;
            }
            // (𝒥² - λ_j) / (λ_t - λ_j)
            let shifted = &self.curly_j_squared(&out)? - &out.scale(&S::from_i64(eigen(j)));
            out = shifted.scale(&S::from_ratio(1, eigen(target) - eigen(j)));
        }
        Ok(out)
    }

    /// Projection onto `λ^p = λ^{p,0}`.
    pub fn lambda_p_project(&self, alpha: &Form<S>) -> Result<Form<S>> {
        self.bidegree_project(alpha, alpha.degree(), 0)
    }

    pub fn is_in_lambda_p(&self, alpha: &Form<S>) -> Result<bool> {
        let proj = self.lambda_p_project(alpha)?;
        Ok((&proj - alpha).is_negligible(alpha.max_abs()))
    }

    fn require_lambda_p(&self, alpha: &Form<S>) -> Result<()> {
        if !self.is_in_lambda_p(alpha)? {
            return Err(Error::NotInLambdaP {
                degree: alpha.degree(),
            });
        }
        Ok(())
    }

    /// `𝕁 = p⁻¹𝒥` on `λ^p`, `p ≥ 1`.
    pub fn bb_j(&self, alpha: &Form<S>) -> Result<Form<S>> {
        if alpha.degree() == 0 {
            return Err(Error::DegreeUnderflow {
                degree: 0,
                required: 1,
            });
        }
        self.require_lambda_p(alpha)?;
        Ok(self
            .curly_j(alpha)?
            .scale(&S::from_ratio(1, alpha.degree() as i64)))
    }

    /// The form `(X_1, .., X_p) ↦ α(JX_1, X_2, .., X_p)`, evaluated on every
    /// increasing basis tuple. Only alternating when `α ∈ λ^p`.
    pub fn first_slot_j(&self, alpha: &Form<S>) -> Result<Form<S>> {
        self.check_space(alpha)?;
        let n = self.dim();
        let p = alpha.degree();
        if p == 0 {
            return Err(Error::DegreeUnderflow {
                degree: 0,
                required: 1,
            });
        }
        let mut out = Form::zero(n, p);
        for b in blade::blades(n, p) {
            let mut vs: Vec<Vector<S>> = b.indices().map(|i| Vector::basis(n, i + 1)).collect();
            vs[0] = self.apply(&vs[0]);
            out.add_term(b, alpha.eval(&vs)?);
        }
        Ok(out)
    }

    /// `ω(X, Y) = ⟨JX, Y⟩`.
    pub fn kahler_form(&self) -> Form<S> {
        let n = self.dim();
        let mut f = Form::zero(n, 2);
        for i in 0..n {
            for j in i + 1..n {
                f.add_term(Blade::single(i).with(j), self.matrix[(j, i)].clone());
            }
        }
        f
    }

    /// An orthogonal (not normalised) basis of `λ^p`, obtained by projecting
    /// the lexicographic basis forms and discarding dependent ones.
    pub fn lambda_p_basis(&self, p: usize) -> Result<Vec<Form<S>>> {
        let n = self.dim();
        if p > n {
            return Err(Error::DegreeOverflow { degree: p, dim: n });
        }
        let mut basis: Vec<(Form<S>, S)> = Vec::new();
        for e in Form::<S>::basis_forms(n, p) {
            let mut v = self.lambda_p_project(&e)?;
            for (u, norm) in &basis {
                let c = v.inner(u)? / norm.clone();
                v -= &u.scale(&c);
            }
            if v.is_negligible(1.0) {
                continue;
            }
            let norm = v.norm_sq();
            basis.push((v, norm));
        }
        Ok(basis.into_iter().map(|(v, _)| v).collect())
    }

    /// Matrix of a linear operator on `Λ^p` in the lexicographic basis.
    pub fn operator_matrix(
        &self,
        p: usize,
        target_degree: usize,
        op: impl Fn(&Form<S>) -> Result<Form<S>>,
    ) -> Result<Matrix<S>> {
        let n = self.dim();
        let columns: Vec<Vec<S>> = Form::<S>::basis_forms(n, p)
            .iter()
            .map(|e| op(e).map(|f| f.to_dense()))
            .collect::<Result<_>>()?;
        Ok(Matrix::from_columns(blade::binomial(n, target_degree), &columns))
    }

    /// The orthogonal projector onto `λ^p` as a matrix on `Λ^p`.
    pub fn lambda_p_projector(&self, p: usize) -> Result<Matrix<S>> {
        self.operator_matrix(p, p, |e| self.lambda_p_project(e))
    }

    /// `p⁻¹𝒥` as a matrix on all of `Λ^p`; it restricts to `𝕁` on `λ^p`.
    pub fn bb_j_matrix(&self, p: usize) -> Result<Matrix<S>> {
        if p == 0 {
            return Err(Error::DegreeUnderflow {
                degree: 0,
                required: 1,
            });
        }
        let inv = S::from_ratio(1, p as i64);
        self.operator_matrix(p, p, |e| Ok(self.curly_j(e)?.scale(&inv)))
    }
}

pub fn j_pullback<S: Scalar>(j: &ComplexStructure<S>, alpha: &Form<S>) -> Result<Form<S>> {
    j.pullback(alpha)
}

pub fn curly_j<S: Scalar>(j: &ComplexStructure<S>, alpha: &Form<S>) -> Result<Form<S>> {
    j.curly_j(alpha)
}

pub fn bidegree_project<S: Scalar>(
    j: &ComplexStructure<S>,
    alpha: &Form<S>,
    p: usize,
    q: usize,
) -> Result<Form<S>> {
    j.bidegree_project(alpha, p, q)
}

pub fn lambda_p_project<S: Scalar>(j: &ComplexStructure<S>, alpha: &Form<S>) -> Result<Form<S>> {
    j.lambda_p_project(alpha)
}

pub fn bb_j<S: Scalar>(j: &ComplexStructure<S>, alpha: &Form<S>) -> Result<Form<S>> {
    j.bb_j(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blade::binomial;
    use crate::scalar::Rational;

    type F = Form<Rational>;

    fn e(dim: usize, idx: &[usize]) -> F {
        F::basis(dim, idx).unwrap()
    }

    fn std4() -> ComplexStructure<Rational> {
        ComplexStructure::standard(4).unwrap()
    }

    fn holo() -> F {
        &e(4, &[1, 3]) - &e(4, &[2, 4])
    }

    #[test]
    fn pullback_examples() {
        let j = std4();
        let omega = j.kahler_form();
        assert_eq!(j.pullback(&omega).unwrap(), omega);
        assert_eq!(j.pullback(&e(4, &[1])).unwrap(), -e(4, &[2]));
        assert_eq!(j.pullback(&F::one(4)).unwrap(), F::one(4));
    }

    #[test]
    fn curly_j_examples() {
        let j = std4();
        assert!(j.curly_j(&j.kahler_form()).unwrap().is_zero());
        let expected = (&e(4, &[2, 3]) + &e(4, &[1, 4])).scale(&Rational::from_i64(-2));
        assert_eq!(j.curly_j(&holo()).unwrap(), expected);
        assert!(j.curly_j(&F::one(4)).unwrap().is_zero());
    }

    #[test]
    fn bidegree_examples() {
        let j = std4();
        assert_eq!(j.bidegree_project(&e(4, &[1, 2]), 1, 1).unwrap(), e(4, &[1, 2]));
        assert_eq!(j.bidegree_project(&holo(), 2, 0).unwrap(), holo());
        assert!(j.bidegree_project(&j.kahler_form(), 2, 0).unwrap().is_zero());
        assert_eq!(
            j.bidegree_project(&e(4, &[1, 2]), 2, 1),
            Err(Error::DegreeMismatch { expected: 2, found: 3 })
        );
        assert_eq!(j.lambda_p_project(&e(4, &[1])).unwrap(), e(4, &[1]));
    }

    #[test]
    fn bb_j_examples() {
        let j = std4();
        assert_eq!(j.bb_j(&e(4, &[1])).unwrap(), -e(4, &[2]));
        let jj = j.bb_j(&j.bb_j(&holo()).unwrap()).unwrap();
        assert_eq!(jj, -holo());
        assert!(j.bb_j(&F::zero(4, 2)).unwrap().is_zero());
        assert_eq!(
            j.bb_j(&j.kahler_form()),
            Err(Error::NotInLambdaP { degree: 2 })
        );
    }

    #[test]
    fn first_slot_agrees_on_lambda_p() {
        let j = std4();
        assert_eq!(j.first_slot_j(&holo()).unwrap(), j.bb_j(&holo()).unwrap());
    }

    #[test]
    fn lambda_p_dimensions() {
        for k in 1..=4 {
            let j = ComplexStructure::<Rational>::standard(2 * k).unwrap();
            for p in 1..=k {
                let basis = j.lambda_p_basis(p).unwrap();
                assert_eq!(basis.len(), 2 * binomial(k, p), "k={k} p={p}");
                assert_eq!(j.lambda_p_projector(p).unwrap().rank(), basis.len());
            }
        }
    }

    #[test]
    fn rejects_non_complex_structures() {
        let m = Matrix::<Rational>::identity(4);
        assert!(matches!(
            ComplexStructure::new(m),
            Err(Error::InvalidComplexStructure(_))
        ));
        assert!(ComplexStructure::<Rational>::standard(3).is_err());
        let j = std4();
        assert!(ComplexStructure::new(j.matrix().clone()).is_ok());
    }
}

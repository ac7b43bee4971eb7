//! Form-valued maps `Q : λ^p → λ^q` and the total antisymmetrisation `a`.
//!
//! A map is stored by its values `Q(e_I) = Q(e_{i1}, .., e_{ip})` on the
//! increasing basis tuples, which is the same as the linear map sending
//! `e^I` to `Q(e_I)`. In these terms `Q(JX_1, X_2, ..)` is `-Q ∘ 𝕁`, so the
//! defining relation of `λ^p ⊗₁ λ^q` says that `Q` commutes with `𝕁` and
//! `λ^p ⊗₂ λ^q` consists of the maps anticommuting with it.

use crate::blade::{self, Blade};
use crate::error::{Error, Result};
use crate::form::{Form, Vector};
use crate::hermitian::ComplexStructure;
use crate::linalg::Matrix;
use crate::scalar::{factorial, sign_power, Scalar};

#[derive(Debug, Clone)]
pub struct FormValuedMap<S> {
    j: ComplexStructure<S>,
    p: usize,
    q: usize,
    columns: Vec<Form<S>>,
}

impl<S: Scalar> PartialEq for FormValuedMap<S> {
    fn eq(&self, other: &Self) -> bool {
        self.j == other.j && self.p == other.p && self.q == other.q && self.columns == other.columns
    }
}

impl<S: Scalar> FormValuedMap<S> {
    pub fn zero(j: &ComplexStructure<S>, p: usize, q: usize) -> Self {
        let n = j.dim();
        FormValuedMap {
            j: j.clone(),
            p,
            q,
            columns: vec![Form::zero(n, q); blade::binomial(n, p)],
        }
    }

    /// Builds `Q` from its values on increasing basis tuples, checking that
    /// the values lie in `λ^q` and that `Q` factors through `λ^p`.
    pub fn from_values(j: &ComplexStructure<S>, p: usize, q: usize, columns: Vec<Form<S>>) -> Result<Self> {
        let map = Self::from_values_unchecked(j, p, q, columns)?;
        map.validate()?;
        Ok(map)
    }

    fn from_values_unchecked(j: &ComplexStructure<S>, p: usize, q: usize, columns: Vec<Form<S>>) -> Result<Self> {
        let n = j.dim();
        if p > n || q > n {
            return Err(Error::DegreeOverflow { degree: p.max(q), dim: n });
        }
        if columns.len() != blade::binomial(n, p) {
            return Err(Error::InvariantViolation(format!(
                "expected {} values, found {}",
                blade::binomial(n, p),
                columns.len()
            )));
        }
        for c in &columns {
            if c.dim() != n {
                return Err(Error::SpaceMismatch { left: n, right: c.dim() });
            }
            if c.degree() != q {
                return Err(Error::DegreeMismatch { expected: q, found: c.degree() });
            }
        }
        Ok(FormValuedMap {
            j: j.clone(),
            p,
            q,
            columns,
        })
    }

    /// The map `α ↦ ⟨α, u⟩ w` with `u ∈ λ^p` and `w ∈ λ^q`.
    pub fn outer(j: &ComplexStructure<S>, w: &Form<S>, u: &Form<S>) -> Result<Self> {
        let n = j.dim();
        let mut columns = vec![Form::zero(n, w.degree()); blade::binomial(n, u.degree())];
        for (b, c) in u.terms() {
            columns[blade::blade_rank(n, b)] = w.scale(c);
        }
        Self::from_values_unchecked(j, u.degree(), w.degree(), columns)
    }

    /// The identity of `λ^p`.
    pub fn identity(j: &ComplexStructure<S>, p: usize) -> Result<Self> {
        Self::from_operator(j, p, p, |e| j.lambda_p_project(e))
    }

    /// `𝕁` as a map of `λ^p`.
    pub fn bb_j(j: &ComplexStructure<S>, p: usize) -> Result<Self> {
        let inv = S::from_ratio(1, p.max(1) as i64);
        Self::from_operator(j, p, p, |e| Ok(j.curly_j(&j.lambda_p_project(e)?)?.scale(&inv)))
    }

    fn from_operator(
        j: &ComplexStructure<S>,
        p: usize,
        q: usize,
        op: impl Fn(&Form<S>) -> Result<Form<S>>,
    ) -> Result<Self> {
        let columns = Form::basis_forms(j.dim(), p)
            .iter()
            .map(op)
            .collect::<Result<_>>()?;
        Self::from_values(j, p, q, columns)
    }

    pub fn complex_structure(&self) -> &ComplexStructure<S> {
        &self.j
    }

    pub fn source_degree(&self) -> usize {
        self.p
    }

    pub fn target_degree(&self) -> usize {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.j.dim()
    }

    /// `Q(e_I)` for the increasing tuples in lexicographic order.
    pub fn values(&self) -> &[Form<S>] {
        &self.columns
    }

    pub fn value_on(&self, blade: Blade) -> &Form<S> {
        &self.columns[blade::blade_rank(self.dim(), blade)]
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_zero())
    }

    pub fn is_negligible(&self, scale: f64) -> bool {
        self.columns.iter().all(|c| c.is_negligible(scale))
    }

    pub fn max_abs(&self) -> f64 {
        self.columns.iter().map(|c| c.max_abs()).fold(0.0, f64::max)
    }

    fn validate(&self) -> Result<()> {
        let scale = self.max_abs();
        for c in &self.columns {
            if !(&self.j.lambda_p_project(c)? - c).is_negligible(scale) {
                return Err(Error::InvariantViolation("value outside λ^q".into()));
            }
        }
        let restricted = self.precompose(|e| self.j.lambda_p_project(e))?;
        if !restricted.sub(self)?.is_negligible(scale) {
            return Err(Error::InvariantViolation("map does not factor through λ^p".into()));
        }
        Ok(())
    }

    /// The linear map applied to a `p`-form.
    pub fn apply(&self, alpha: &Form<S>) -> Result<Form<S>> {
        if alpha.degree() != self.p {
            return Err(Error::DegreeMismatch { expected: self.p, found: alpha.degree() });
        }
        let n = self.dim();
        let mut out = Form::zero(n, self.q);
        for (b, c) in alpha.terms() {
            let col = &self.columns[blade::blade_rank(n, b)];
            if !col.is_zero() {
                out += &col.scale(c);
            }
        }
        Ok(out)
    }

    /// `Q(X_1, .., X_p) = Q(X_1^♭ ∧ .. ∧ X_p^♭)`.
    pub fn eval(&self, xs: &[Vector<S>]) -> Result<Form<S>> {
        if xs.len() != self.p {
            return Err(Error::DegreeMismatch { expected: self.p, found: xs.len() });
        }
        let mut f = Form::one(self.dim());
        for x in xs {
            f = f.wedge(&x.flat())?;
        }
        self.apply(&f)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(FormValuedMap {
            j: self.j.clone(),
            p: self.p,
            q: self.q,
            columns: self
                .columns
                .iter()
                .zip(&other.columns)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, s: &S) -> Self {
        FormValuedMap {
            j: self.j.clone(),
            p: self.p,
            q: self.q,
            columns: self.columns.iter().map(|c| c.scale(s)).collect(),
        }
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::SpaceMismatch { left: self.dim(), right: other.dim() });
        }
        if (self.p, self.q) != (other.p, other.q) {
            return Err(Error::DegreeMismatch { expected: self.p, found: other.p });
        }
        Ok(())
    }

    /// `Q ∘ op` for an operator `op` of `Λ^p`.
    pub fn precompose(&self, op: impl Fn(&Form<S>) -> Result<Form<S>>) -> Result<Self> {
        let columns = Form::basis_forms(self.dim(), self.p)
            .iter()
            .map(|e| self.apply(&op(e)?))
            .collect::<Result<_>>()?;
        Self::from_values_unchecked(&self.j, self.p, self.q, columns)
    }

    /// `op ∘ Q` for an operator `op` of `Λ^q`.
    pub fn postcompose(&self, op: impl Fn(&Form<S>) -> Result<Form<S>>) -> Result<Self> {
        let columns = self.columns.iter().map(op).collect::<Result<_>>()?;
        Self::from_values_unchecked(&self.j, self.p, self.q, columns)
    }

    /// `(X_1, .., X_p) ↦ Q(JX_1, X_2, .., X_p)`.
    pub fn slot_j(&self) -> Result<Self> {
        let inv = S::from_ratio(-1, self.p as i64);
        self.precompose(|e| Ok(self.j.curly_j(e)?.scale(&inv)))
    }

    /// `(X_1, .., X_p) ↦ 𝕁(Q(X_1, .., X_p))`.
    pub fn value_j(&self) -> Result<Self> {
        let inv = S::from_ratio(1, self.q as i64);
        self.postcompose(|f| Ok(self.j.curly_j(f)?.scale(&inv)))
    }

    /// `𝕁 ∘ Q ∘ 𝕁` as linear maps; an involution on `λ^p ⊗ λ^q`.
    fn conjugate_by_j(&self) -> Result<Self> {
        Ok(self.slot_j()?.value_j()?.scale(&-S::one()))
    }

    /// The matrix `M` with `M e^I = Q(e_I)`, sized `C(n,q) × C(n,p)`.
    pub fn matrix(&self) -> Matrix<S> {
        let cols: Vec<Vec<S>> = self.columns.iter().map(|c| c.to_dense()).collect();
        Matrix::from_columns(blade::binomial(self.dim(), self.q), &cols)
    }

    /// Entries of the matrix, flattened column by column.
    pub fn flatten(&self) -> Vec<S> {
        self.columns.iter().flat_map(|c| c.to_dense()).collect()
    }

    /// `Q_X = Q(X, ·)`.
    pub fn q_lower(&self, x: &Vector<S>) -> Result<Self> {
        if self.p == 0 {
            return Err(Error::DegreeUnderflow { degree: 0, required: 1 });
        }
        let xf = x.flat();
        let columns = Form::basis_forms(self.dim(), self.p - 1)
            .iter()
            .map(|e| self.apply(&xf.wedge(e)?))
            .collect::<Result<_>>()?;
        Self::from_values_unchecked(&self.j, self.p - 1, self.q, columns)
    }

    /// `Q^X = X ⌟ Q`.
    pub fn q_upper(&self, x: &Vector<S>) -> Result<Self> {
        if self.q == 0 {
            return Err(Error::DegreeUnderflow { degree: 0, required: 1 });
        }
        let columns = self.columns.iter().map(|c| c.contract(x)).collect::<Result<_>>()?;
        Self::from_values_unchecked(&self.j, self.p, self.q - 1, columns)
    }
}

/// Splits `Q = Q₁ + Q₂` with `Q₁ ∈ λ^p ⊗₁ λ^q` and `Q₂ ∈ λ^p ⊗₂ λ^q`.
/// Maps with a degree-zero factor have no `⊗₁` part.
pub fn split_type<S: Scalar>(q: &FormValuedMap<S>) -> Result<(FormValuedMap<S>, FormValuedMap<S>)> {
    if q.p == 0 || q.q == 0 {
        return Ok((FormValuedMap::zero(&q.j, q.p, q.q), q.clone()));
    }
    let t = q.conjugate_by_j()?;
    let half = S::from_ratio(1, 2);
    Ok((q.sub(&t)?.scale(&half), q.add(&t)?.scale(&half)))
}

/// `a(Q) = Σ e^{i1} ∧ .. ∧ e^{ip} ∧ Q(e_{i1}, .., e_{ip})` over all ordered
/// tuples, that is `p!` times the sum over increasing ones.
pub fn antisymmetrize<S: Scalar>(q: &FormValuedMap<S>) -> Result<Form<S>> {
    let n = q.dim();
    if q.p + q.q > n {
        return Err(Error::DegreeOverflow { degree: q.p + q.q, dim: n });
    }
    let mut out = Form::zero(n, q.p + q.q);
    for (b, col) in blade::blades(n, q.p).into_iter().zip(&q.columns) {
        if col.is_zero() {
            continue;
        }
        let mut e = Form::zero(n, q.p);
        e.add_term(b, S::one());
        out += &e.wedge(col)?;
    }
    Ok(out.scale(&factorial(q.p)))
}

/// Bases of `λ^p` adapted to `𝕁`: vectors `u_1, 𝕁u_1, u_2, 𝕁u_2, ..`,
/// returned as the list of the `u_i`.
fn complex_half_basis<S: Scalar>(j: &ComplexStructure<S>, p: usize) -> Result<Vec<Form<S>>> {
    let n = j.dim();
    let mut span = crate::linalg::Echelon::new(blade::binomial(n, p));
    let mut half = Vec::new();
    for u in j.lambda_p_basis(p)? {
        if !span.insert(u.to_dense()) {
            continue;
        }
        let ju = j.bb_j(&u)?;
        span.insert(ju.to_dense());
        half.push(u);
    }
    Ok(half)
}

/// Bases of the two summands of `λ^p ⊗ λ^q`.
#[derive(Debug, Clone)]
pub struct TypeBases<S> {
    pub type1: Vec<FormValuedMap<S>>,
    pub type2: Vec<FormValuedMap<S>>,
}

/// For complex bases `{u, 𝕁u}` and `{w, 𝕁w}` the maps `w⊗u + 𝕁w⊗𝕁u` and
/// `𝕁w⊗u - w⊗𝕁u` span `⊗₁`; the opposite signs span `⊗₂`.
pub fn type_bases<S: Scalar>(j: &ComplexStructure<S>, p: usize, q: usize) -> Result<TypeBases<S>> {
    let n = j.dim();
    if p == 0 || q == 0 {
        let mut type2 = Vec::new();
        let ps = if p == 0 { vec![Form::one(n)] } else { j.lambda_p_basis(p)? };
        let qs = if q == 0 { vec![Form::one(n)] } else { j.lambda_p_basis(q)? };
        for u in &ps {
            for w in &qs {
                type2.push(FormValuedMap::outer(j, w, u)?);
            }
        }
        return Ok(TypeBases { type1: Vec::new(), type2 });
    }
    let us = complex_half_basis(j, p)?;
    let ws = complex_half_basis(j, q)?;
    let mut type1 = Vec::new();
    let mut type2 = Vec::new();
    for u in &us {
        let ju = j.bb_j(u)?;
        for w in &ws {
            let jw = j.bb_j(w)?;
            let a = FormValuedMap::outer(j, w, u)?;
            let b = FormValuedMap::outer(j, &jw, &ju)?;
            let c = FormValuedMap::outer(j, &jw, u)?;
            let d = FormValuedMap::outer(j, w, &ju)?;
            type1.push(a.add(&b)?);
            type1.push(c.sub(&d)?);
            type2.push(a.sub(&b)?);
            type2.push(c.add(&d)?);
        }
    }
    Ok(TypeBases { type1, type2 })
}

/// Matrix whose columns are `a` of the given maps, in `Λ^{p+q}` coordinates.
pub fn antisymmetrization_matrix<S: Scalar>(maps: &[FormValuedMap<S>], n: usize, degree: usize) -> Result<Matrix<S>> {
    let cols: Vec<Vec<S>> = maps
        .iter()
        .map(|m| antisymmetrize(m).map(|f| f.to_dense()))
        .collect::<Result<_>>()?;
    Ok(Matrix::from_columns(blade::binomial(n, degree), &cols))
}

/// Rank of `a` restricted to `λ^p ⊗₁ λ^q`, together with the dimension of
/// that space.
pub fn a_restricted_rank<S: Scalar>(j: &ComplexStructure<S>, p: usize, q: usize) -> Result<(usize, usize)> {
    let n = j.dim();
    if p + q > n {
        return Err(Error::DegreeOverflow { degree: p + q, dim: n });
    }
    let bases = type_bases(j, p, q)?;
    if bases.type1.is_empty() {
        return Ok((0, 0));
    }
    let m = antisymmetrization_matrix(&bases.type1, n, p + q)?;
    Ok((m.rank(), bases.type1.len()))
}

/// A basis of the kernel of `a` on all of `λ^p ⊗ λ^q`.
pub fn a_kernel<S: Scalar>(j: &ComplexStructure<S>, p: usize, q: usize) -> Result<Vec<FormValuedMap<S>>> {
    let n = j.dim();
    if p + q > n {
        return Err(Error::DegreeOverflow { degree: p + q, dim: n });
    }
    let bases = type_bases(j, p, q)?;
    let all: Vec<FormValuedMap<S>> = bases.type1.into_iter().chain(bases.type2).collect();
    let m = antisymmetrization_matrix(&all, n, p + q)?;
    m.nullspace()
        .into_iter()
        .map(|coeffs| {
            let mut acc = FormValuedMap::zero(j, p, q);
            for (c, b) in coeffs.iter().zip(&all) {
                if !c.is_zero() {
                    acc = acc.add(&b.scale(c))?;
                }
            }
            Ok(acc)
        })
        .collect()
}

/// Both sides of `X ⌟ a(Q) = p a(Q_X) + (-1)^p a(Q^X)`.
pub fn contraction_identity_sides<S: Scalar>(q: &FormValuedMap<S>, x: &Vector<S>) -> Result<(Form<S>, Form<S>)> {
    let n = q.dim();
    let lhs = antisymmetrize(q)?.contract(x)?;
    let mut rhs = Form::zero(n, q.p + q.q - 1);
    if q.p > 0 {
        rhs += &antisymmetrize(&q.q_lower(x)?)?.scale(&S::from_i64(q.p as i64));
    }
    if q.q > 0 {
        rhs += &antisymmetrize(&q.q_upper(x)?)?.scale(&sign_power(q.p));
    }
    Ok((lhs, rhs))
}

pub fn contraction_identity_check<S: Scalar>(q: &FormValuedMap<S>, x: &Vector<S>) -> Result<bool> {
    let (lhs, rhs) = contraction_identity_sides(q, x)?;
    Ok((&lhs - &rhs).is_negligible(lhs.max_abs().max(rhs.max_abs())))
}

/// `S(X_1, .., X_{p-1}) = Ω(X_1, .., X_{p-1}, ·)` as a vector.
pub fn s_vector<S: Scalar>(omega: &Form<S>, xs: &[Vector<S>]) -> Result<Vector<S>> {
    if xs.len() + 1 != omega.degree() {
        return Err(Error::DegreeMismatch {
            expected: omega.degree().saturating_sub(1),
            found: xs.len(),
        });
    }
    let mut f = omega.clone();
    for x in xs {
        f = f.contract(x)?;
    }
    f.sharp()
}

/// `Q(X_1, .., X_{p-1}) = D_{S(X_1, .., X_{p-1})^♯}` where `D_X` is linear in
/// `X`, given by its values on the basis vectors, and stands in for `∇_X Ω`.
/// Requires `D_{JX} = 𝕁(D_X)`.
pub fn holomorphic_q<S: Scalar>(
    j: &ComplexStructure<S>,
    omega: &Form<S>,
    derivative: &[Form<S>],
) -> Result<FormValuedMap<S>> {
    let n = j.dim();
    let p = omega.degree();
    if p < 2 {
        return Err(Error::DegreeUnderflow { degree: p, required: 2 });
    }
    if !j.is_in_lambda_p(omega)? {
        return Err(Error::NotInLambdaP { degree: p });
    }
    if derivative.len() != n {
        return Err(Error::InvalidDerivative(format!(
            "expected {n} values, found {}",
            derivative.len()
        )));
    }
    for (k, d) in derivative.iter().enumerate() {
        if d.dim() != n || d.degree() != p || !j.is_in_lambda_p(d)? {
            return Err(Error::InvalidDerivative(format!("D_e{} is not in λ^{p}", k + 1)));
        }
    }
    let scale = derivative.iter().map(|d| d.max_abs()).fold(0.0, f64::max);
    for k in 0..n {
        let along_j = derivative_along(derivative, &j.image_of_basis(k))?;
        if !(&along_j - &j.bb_j(&derivative[k])?).is_negligible(scale) {
            return Err(Error::InvalidDerivative(format!(
                "D_(Je{0}) differs from 𝕁 D_e{0}",
                k + 1
            )));
        }
    }
    let columns = blade::blades(n, p - 1)
        .into_iter()
        .map(|b| {
            let xs: Vec<Vector<S>> = b.indices().map(|i| Vector::basis(n, i + 1)).collect();
            derivative_along(derivative, &s_vector(omega, &xs)?)
        })
        .collect::<Result<_>>()?;
    FormValuedMap::from_values(j, p - 1, p, columns)
}

/// `D_X = Σ X_k D_{e_k}`.
pub fn derivative_along<S: Scalar>(derivative: &[Form<S>], x: &Vector<S>) -> Result<Form<S>> {
    let first = derivative
        .first()
        .ok_or_else(|| Error::InvalidDerivative("empty derivative".into()))?;
    let mut out = Form::zero(first.dim(), first.degree());
    for (d, c) in derivative.iter().zip(x.components()) {
        if !c.is_zero() {
            out += &d.scale(c);
        }
    }
    Ok(out)
}

/// Turns arbitrary `λ^p`-valued data `D'` into `D_X = ½(D'_X - 𝕁 D'_{JX})`,
/// which satisfies `D_{JX} = 𝕁 D_X`.
pub fn holomorphize<S: Scalar>(j: &ComplexStructure<S>, raw: &[Form<S>]) -> Result<Vec<Form<S>>> {
    let half = S::from_ratio(1, 2);
    (0..j.dim())
        .map(|k| {
            let along_j = derivative_along(raw, &j.image_of_basis(k))?;
            Ok((&raw[k] - &j.bb_j(&along_j)?).scale(&half))
        })
        .collect()
}

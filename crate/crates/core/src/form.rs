//! Alternating forms on an oriented inner-product space with a fixed
//! orthonormal basis `e_1, .., e_n`.
//!
//! A form stores its coefficients on strictly increasing multi-indices, so
//! `α = Σ_I α_I e^I` and `⟨α, β⟩ = Σ_I α_I β_I`. The evaluation convention is
//! the determinant one: `e^{i1..ip}(e_{i1}, .., e_{ip}) = 1`, and
//! `(X ⌟ α)(v_1, ..) = α(X, v_1, ..)`.

use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::blade::{self, check_dim, wedge_sign_negative, Blade};
use crate::error::{Error, Result};
use crate::scalar::{Backend, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Space {
    pub dim: usize,
    pub backend: Backend,
}

#[derive(Debug, Clone)]
pub struct Form<S> {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Blade, S>,
    degenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vector<S> {
    components: Vec<S>,
}

impl<S: Scalar> Vector<S> {
    pub fn new(components: Vec<S>) -> Self {
        Vector { components }
    }

    pub fn zero(dim: usize) -> Self {
        Vector {
            components: vec![S::zero(); dim],
        }
    }

    /// `e_i`, 1-based.
    pub fn basis(dim: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= dim, "basis vector e_{i} outside dimension {dim}");
        let mut v = Self::zero(dim);
        v.components[i - 1] = S::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[S] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &S {
        &self.components[i]
    }

    /// The metric dual 1-form `X^♭`.
    pub fn flat(&self) -> Form<S> {
        let mut f = Form::zero(self.dim(), 1);
        for (i, c) in self.components.iter().enumerate() {
            f.add_term(Blade::single(i), c.clone());
        }
        f
    }

    pub fn dot(&self, other: &Self) -> S {
        self.components
            .iter()
            .zip(&other.components)
            .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn scale(&self, s: &S) -> Self {
        Vector {
            components: self.components.iter().map(|c| c.clone() * s.clone()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }
}

impl<S: Scalar> Add for &Vector<S> {
    type Output = Vector<S>;

    fn add(self, rhs: &Vector<S>) -> Vector<S> {
        assert_eq!(self.dim(), rhs.dim());
        Vector {
            components: self
                .components
                .iter()
                .zip(&rhs.components)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<S: Scalar> Neg for &Vector<S> {
    type Output = Vector<S>;

    fn neg(self) -> Vector<S> {
        Vector {
            components: self.components.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl<S: Scalar> Form<S> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Form {
            dim,
            degree,
            terms: BTreeMap::new(),
            degenerate: false,
        }
    }

    /// The constant 0-form `s`.
    pub fn scalar(dim: usize, s: S) -> Self {
        let mut f = Self::zero(dim, 0);
        f.add_term(Blade::EMPTY, s);
        f
    }

    pub fn one(dim: usize) -> Self {
        Self::scalar(dim, S::one())
    }

    /// `e^{i1} ∧ .. ∧ e^{ip}` from 1-based indices in any order.
    pub fn basis(dim: usize, indices: &[usize]) -> Result<Self> {
        Self::from_terms(dim, indices.len(), [(indices.to_vec(), S::one())])
    }

    /// Builds `Σ c · e^{I}` from 1-based index lists of length `degree`.
    /// Unsorted index lists are sorted with the permutation sign; repeated
    /// indices contribute nothing.
    pub fn from_terms<I>(dim: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, S)>,
    {
        check_dim(dim)?;
        if degree > dim {
            return Err(Error::DegreeOverflow { degree, dim });
        }
        let mut f = Self::zero(dim, degree);
        for (indices, c) in terms {
            if indices.len() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: indices.len(),
                });
            }
            if let Some((b, negative)) = Blade::from_one_based(dim, &indices)? {
                f.add_term(b, if negative { -c } else { c });
            }
        }
        Ok(f)
    }

    /// The volume form `e^1 ∧ .. ∧ e^n`.
    pub fn volume(dim: usize) -> Self {
        let mut f = Self::zero(dim, dim);
        f.add_term(Blade::full(dim), S::one());
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn space(&self) -> Space {
        Space {
            dim: self.dim,
            backend: S::BACKEND,
        }
    }

    /// Set on the zero form returned by a wedge product past top degree.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, &S)> {
        self.terms.iter().map(|(b, c)| (*b, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn get(&self, blade: Blade) -> S {
        self.terms.get(&blade).cloned().unwrap_or_else(S::zero)
    }

    /// Coefficient of `e^{I}` for 1-based indices in any order (signed).
    pub fn coeff(&self, indices: &[usize]) -> Result<S> {
        if indices.len() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: indices.len(),
            });
        }
        Ok(match Blade::from_one_based(self.dim, indices)? {
            Some((b, negative)) => {
                let c = self.get(b);
                if negative {
                    -c
                } else {
                    c
                }
            }
            None => S::zero(),
        })
    }

    /// Adds `c · e^{blade}`; zero coefficients are pruned.
    pub fn add_term(&mut self, blade: Blade, c: S) {
        debug_assert_eq!(blade.grade(), self.degree);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(blade) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (b, c) in &self.terms {
            out.add_term(*b, c.clone() * s.clone());
        }
        out
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Form<T> {
        let mut out = Form::zero(self.dim, self.degree);
        for (b, c) in &self.terms {
            out.add_term(*b, f(c));
        }
        out
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::SpaceMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        out.degenerate = false;
        for (b, c) in &other.terms {
            out.add_term(*b, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn norm_sq(&self) -> S {
        self.terms
            .values()
            .fold(S::zero(), |acc, c| acc + c.clone() * c.clone())
    }

    /// Largest coefficient magnitude; the residual measure used in reports.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    /// Zero on the exact backend; every coefficient within `TAU * scale` on
    /// the float backend.
    pub fn is_negligible(&self, scale: f64) -> bool {
        self.terms.values().all(|c| c.is_negligible(scale))
    }

    /// `self == other` up to the backend's zero test.
    pub fn approx_eq(&self, other: &Self, scale: f64) -> bool {
        match self.checked_sub(other) {
            Ok(d) => d.is_negligible(scale),
            Err(_) => false,
        }
    }

    /// `α ∧ β`. Past top degree the result is the zero form of degree `n`,
    /// tagged degenerate.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::SpaceMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let degree = self.degree + other.degree;
        if degree > self.dim {
            let mut z = Self::zero(self.dim, self.dim);
            z.degenerate = true;
            return Ok(z);
        }
        let mut out = Self::zero(self.dim, degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if !a.is_disjoint(*b) {
                    continue;
                }
                let c = ca.clone() * cb.clone();
                out.add_term(a.union(*b), if wedge_sign_negative(*a, *b) { -c } else { c });
            }
        }
        Ok(out)
    }

    /// `e_i ⌟ α` for the 0-based basis vector `e_{i+1}`.
    pub fn contract_basis(&self, i: usize) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::DegreeUnderflow {
                degree: 0,
                required: 1,
            });
        }
        let mut out = Self::zero(self.dim, self.degree - 1);
        for (b, c) in &self.terms {
            if let Some(pos) = b.position(i) {
                out.add_term(b.without(i), if pos % 2 == 1 { -c.clone() } else { c.clone() });
            }
        }
        Ok(out)
    }

    /// `X ⌟ α`, with `(X ⌟ α)(v_1, ..) = α(X, v_1, ..)`.
    pub fn contract(&self, x: &Vector<S>) -> Result<Self> {
        if x.dim() != self.dim {
            return Err(Error::SpaceMismatch {
                left: x.dim(),
                right: self.dim,
            });
        }
        if self.degree == 0 {
            return Err(Error::DegreeUnderflow {
                degree: 0,
                required: 1,
            });
        }
        let mut out = Self::zero(self.dim, self.degree - 1);
        for (b, c) in &self.terms {
            for (pos, i) in b.indices().enumerate() {
                let xi = &x.components[i];
                if xi.is_zero() {
                    continue;
                }
                let v = c.clone() * xi.clone();
                out.add_term(b.without(i), if pos % 2 == 1 { -v } else { v });
            }
        }
        Ok(out)
    }

    /// `⟨α, β⟩ = Σ_I α_I β_I`.
    pub fn inner(&self, other: &Self) -> Result<S> {
        self.check_same_shape(other)?;
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        Ok(small.terms.iter().fold(S::zero(), |acc, (b, c)| match large.terms.get(b) {
            Some(d) => acc + c.clone() * d.clone(),
            None => acc,
        }))
    }

    /// Hodge star with `α ∧ ⋆β = ⟨α, β⟩ e^1 ∧ .. ∧ e^n`.
    pub fn hodge_star(&self) -> Self {
        let full = Blade::full(self.dim);
        let mut out = Self::zero(self.dim, self.dim - self.degree);
        for (b, c) in &self.terms {
            let rest = full.difference(*b);
            out.add_term(rest, if wedge_sign_negative(*b, rest) { -c.clone() } else { c.clone() });
        }
        out
    }

    /// `L*_φ ψ`, the metric adjoint of `χ ↦ φ ∧ χ` applied to `ψ`.
    pub fn adjoint_wedge(phi: &Self, psi: &Self) -> Result<Self> {
        if phi.dim != psi.dim {
            return Err(Error::SpaceMismatch {
                left: phi.dim,
                right: psi.dim,
            });
        }
        if psi.degree < phi.degree {
            return Err(Error::DegreeUnderflow {
                degree: psi.degree,
                required: phi.degree,
            });
        }
        let mut out = Self::zero(psi.dim, psi.degree - phi.degree);
        for (a, ca) in &phi.terms {
            for (b, cb) in &psi.terms {
                if !a.is_subset_of(*b) {
                    continue;
                }
                let rest = b.difference(*a);
                let c = ca.clone() * cb.clone();
                out.add_term(rest, if wedge_sign_negative(*a, rest) { -c } else { c });
            }
        }
        Ok(out)
    }

    /// `α(v_1, .., v_p)`.
    pub fn eval(&self, vectors: &[Vector<S>]) -> Result<S> {
        if vectors.len() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: vectors.len(),
            });
        }
        let mut cur = self.clone();
        for v in vectors {
            cur = cur.contract(v)?;
        }
        Ok(cur.get(Blade::EMPTY))
    }

    /// Value of a 0-form.
    pub fn scalar_part(&self) -> S {
        self.get(Blade::EMPTY)
    }

    /// The vector `α^♯` of a 1-form.
    pub fn sharp(&self) -> Result<Vector<S>> {
        if self.degree != 1 {
            return Err(Error::DegreeMismatch {
                expected: 1,
                found: self.degree,
            });
        }
        Ok(Vector::new(
            (0..self.dim).map(|i| self.get(Blade::single(i))).collect(),
        ))
    }

    /// Dense coefficient vector on the lexicographic basis of its degree.
    pub fn to_dense(&self) -> Vec<S> {
        blade::blades(self.dim, self.degree)
            .into_iter()
            .map(|b| self.get(b))
            .collect()
    }

    pub fn from_dense(dim: usize, degree: usize, coeffs: &[S]) -> Self {
        let basis = blade::blades(dim, degree);
        assert_eq!(basis.len(), coeffs.len(), "dense length mismatch");
        let mut out = Self::zero(dim, degree);
        for (b, c) in basis.into_iter().zip(coeffs) {
            out.add_term(b, c.clone());
        }
        out
    }

    /// All basis forms `e^I` of the given degree, lexicographically ordered.
    pub fn basis_forms(dim: usize, degree: usize) -> Vec<Self> {
        blade::blades(dim, degree)
            .into_iter()
            .map(|b| {
                let mut f = Self::zero(dim, degree);
                f.add_term(b, S::one());
                f
            })
            .collect()
    }
}

impl<S: Scalar> PartialEq for Form<S> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.degree == other.degree && self.terms == other.terms
    }
}

impl<S: Scalar> Add for &Form<S> {
    type Output = Form<S>;

    /// Panics on mismatched shapes; see [`Form::checked_add`].
    fn add(self, rhs: &Form<S>) -> Form<S> {
        self.checked_add(rhs).expect("adding forms of different shape")
    }
}

impl<S: Scalar> Add for Form<S> {
    type Output = Form<S>;

    fn add(mut self, rhs: Form<S>) -> Form<S> {
        self += &rhs;
        self
    }
}

impl<S: Scalar> AddAssign<&Form<S>> for Form<S> {
    fn add_assign(&mut self, rhs: &Form<S>) {
        self.check_same_shape(rhs).expect("adding forms of different shape");
        self.degenerate = false;
        for (b, c) in &rhs.terms {
            self.add_term(*b, c.clone());
        }
    }
}

impl<S: Scalar> SubAssign<&Form<S>> for Form<S> {
    fn sub_assign(&mut self, rhs: &Form<S>) {
        self.check_same_shape(rhs).expect("subtracting forms of different shape");
        self.degenerate = false;
        for (b, c) in &rhs.terms {
            self.add_term(*b, -c.clone());
        }
    }
}

impl<S: Scalar> Sub for &Form<S> {
    type Output = Form<S>;

    fn sub(self, rhs: &Form<S>) -> Form<S> {
        self.checked_sub(rhs).expect("subtracting forms of different shape")
    }
}

impl<S: Scalar> Sub for Form<S> {
    type Output = Form<S>;

    fn sub(mut self, rhs: Form<S>) -> Form<S> {
        self -= &rhs;
        self
    }
}

impl<S: Scalar> Neg for &Form<S> {
    type Output = Form<S>;

    fn neg(self) -> Form<S> {
        let mut out = Form::zero(self.dim, self.degree);
        for (b, c) in &self.terms {
            out.terms.insert(*b, -c.clone());
        }
        out
    }
}

impl<S: Scalar> Neg for Form<S> {
    type Output = Form<S>;

    fn neg(self) -> Form<S> {
        -&self
    }
}

impl<S: Scalar> Mul<&Form<S>> for &Form<S> {
    type Output = Form<S>;

    /// Wedge product; panics on mismatched spaces.
    fn mul(self, rhs: &Form<S>) -> Form<S> {
        self.wedge(rhs).expect("wedging forms of different spaces")
    }
}

pub fn wedge<S: Scalar>(alpha: &Form<S>, beta: &Form<S>) -> Result<Form<S>> {
    alpha.wedge(beta)
}

pub fn contract<S: Scalar>(x: &Vector<S>, alpha: &Form<S>) -> Result<Form<S>> {
    alpha.contract(x)
}

pub fn inner<S: Scalar>(alpha: &Form<S>, beta: &Form<S>) -> Result<S> {
    alpha.inner(beta)
}

pub fn hodge_star<S: Scalar>(alpha: &Form<S>) -> Form<S> {
    alpha.hodge_star()
}

pub fn adjoint_wedge<S: Scalar>(phi: &Form<S>, psi: &Form<S>) -> Result<Form<S>> {
    Form::adjoint_wedge(phi, psi)
}

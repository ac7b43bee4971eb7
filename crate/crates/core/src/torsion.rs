//! Intrinsic torsion of an almost-Kähler structure as linear algebra.
//!
//! A torsion tensor assigns a skew endomorphism `η_X` to every vector,
//! linearly in `X`, subject to
//!
//! * `⟨η_X Y, Z⟩ + ⟨η_Y Z, X⟩ + ⟨η_Z X, Y⟩ = 0`,
//! * `η_{JX} = η_X J`,
//! * `η_X J = -J η_X`.
//!
//! Unknown tensors are parametrised by the strictly upper entries of each
//! `η_{e_k}`, so every constraint becomes a row of a linear system.

use crate::error::{Error, Result};
use crate::hermitian::ComplexStructure;
use crate::linalg::{Echelon, Matrix};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct TorsionTensor<S> {
    j: ComplexStructure<S>,
    eta: Vec<Matrix<S>>,
}

/// A trilinear form on an `n`-dimensional space, `T(e_x, e_y, e_z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trilinear<S> {
    n: usize,
    data: Vec<S>,
}

impl<S: Scalar> Trilinear<S> {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, x: usize, y: usize, z: usize) -> &S {
        &self.data[(x * self.n + y) * self.n + z]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.magnitude()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }
}

impl<S: Scalar> TorsionTensor<S> {
    /// Validates the three defining constraints.
    pub fn new(j: &ComplexStructure<S>, eta: Vec<Matrix<S>>) -> Result<Self> {
        let t = Self::unchecked(j, eta)?;
        let scale = t.eta.iter().map(|m| m.max_abs()).fold(0.0, f64::max);
        let v = t.constraint_residual();
        let ok = if S::is_exact() { v == 0.0 } else { v <= crate::scalar::TAU * scale.max(1.0) };
        if !ok {
            return Err(Error::InvariantViolation(format!(
                "torsion constraints violated by {v:e}"
            )));
        }
        Ok(t)
    }

    fn unchecked(j: &ComplexStructure<S>, eta: Vec<Matrix<S>>) -> Result<Self> {
        let n = j.dim();
        if eta.len() != n {
            return Err(Error::InvariantViolation(format!(
                "expected {n} endomorphisms, found {}",
                eta.len()
            )));
        }
        for m in &eta {
            if m.rows() != n || m.cols() != n {
                return Err(Error::SpaceMismatch { left: n, right: m.rows() });
            }
            if !(m + &m.transpose()).is_negligible(m.max_abs()) {
                return Err(Error::InvariantViolation("η_X is not skew".into()));
            }
        }
        Ok(TorsionTensor { j: j.clone(), eta })
    }

    pub fn zero(j: &ComplexStructure<S>) -> Self {
        let n = j.dim();
        TorsionTensor {
            j: j.clone(),
            eta: vec![Matrix::zeros(n, n); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.j.dim()
    }

    /// `η_{e_k}` for the 0-based index `k`.
    pub fn component(&self, k: usize) -> &Matrix<S> {
        &self.eta[k]
    }

    /// `η_X = Σ X_k η_{e_k}`.
    pub fn along(&self, x: &[S]) -> Matrix<S> {
        let n = self.dim();
        let mut out = Matrix::zeros(n, n);
        for (k, c) in x.iter().enumerate() {
            if !c.is_zero() {
                out = &out + &self.eta[k].scale(c);
            }
        }
        out
    }

    /// Largest violation of the three defining constraints.
    pub fn constraint_residual(&self) -> f64 {
        let n = self.dim();
        let jm = self.j.matrix();
        let mut worst: f64 = 0.0;
        for x in 0..n {
            for y in x + 1..n {
                for z in y + 1..n {
                    let v = self.eta[x][(z, y)].clone()
                        + self.eta[y][(x, z)].clone()
                        + self.eta[z][(y, x)].clone();
                    worst = worst.max(v.magnitude());
                }
            }
        }
        for k in 0..n {
            let ej = &self.eta[k] * jm;
            let qk = &self.along(&jm.column(k)) - &ej;
            let anti = &ej + &(jm * &self.eta[k]);
            worst = worst.max(qk.max_abs()).max(anti.max_abs());
        }
        worst
    }

    fn from_unknowns(j: &ComplexStructure<S>, v: &[S]) -> Self {
        let n = j.dim();
        let layout = Layout::new(n);
        let eta = (0..n)
            .map(|k| {
                let mut m = Matrix::zeros(n, n);
                for a in 0..n {
                    for b in a + 1..n {
                        let c = v[layout.var(k, a, b)].clone();
                        m[(b, a)] = -c.clone();
                        m[(a, b)] = c;
                    }
                }
                m
            })
            .collect();
        TorsionTensor { j: j.clone(), eta }
    }
}

/// `(Q • η)(X, Y, Z) = σ_{X,Y,Z} ⟨η_{QX} Y, Z⟩`.
pub fn torsion_bullet<S: Scalar>(q: &Matrix<S>, eta: &TorsionTensor<S>) -> Result<Trilinear<S>> {
    let n = eta.dim();
    if q.rows() != n || q.cols() != n {
        return Err(Error::SpaceMismatch { left: n, right: q.rows() });
    }
    let turned: Vec<Matrix<S>> = (0..n).map(|x| eta.along(&q.column(x))).collect();
    let term = |x: usize, y: usize, z: usize| turned[x][(z, y)].clone();
    let mut data = Vec::with_capacity(n * n * n);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                data.push(term(x, y, z) + term(y, z, x) + term(z, x, y));
            }
        }
    }
    Ok(Trilinear { n, data })
}

struct Layout {
    n: usize,
    pairs: usize,
}

impl Layout {
    fn new(n: usize) -> Self {
        Layout {
            n,
            pairs: n * (n - 1) / 2,
        }
    }

    fn unknowns(&self) -> usize {
        self.n * self.pairs
    }

    fn pair(&self, a: usize, b: usize) -> usize {
        // rank of (a, b), a < b, among the pairs in lexicographic order
        a * (2 * self.n - a - 1) / 2 + (b - a - 1)
    }

    fn var(&self, k: usize, a: usize, b: usize) -> usize {
        k * self.pairs + self.pair(a, b)
    }

    /// Adds `c · (η_k)_{ab}` to `row`.
    fn add<S: Scalar>(&self, row: &mut [S], k: usize, a: usize, b: usize, c: &S) {
        if a == b || c.is_zero() {
            return;
        }
        if a < b {
            let v = self.var(k, a, b);
            row[v] = row[v].clone() + c.clone();
        } else {
            let v = self.var(k, b, a);
            row[v] = row[v].clone() - c.clone();
        }
    }
}

/// Rows of the three defining constraints, anticommutation first, then
/// quasi-Kähler, then the cyclic identity.
fn constraint_rows<S: Scalar>(j: &ComplexStructure<S>) -> Vec<Vec<S>> {
    let n = j.dim();
    let layout = Layout::new(n);
    let jm = j.matrix();
    let mut rows = Vec::new();
    let zero_row = || vec![S::zero(); layout.unknowns()];
    for k in 0..n {
        for a in 0..n {
            for b in 0..n {
                // (η_k J + J η_k)_{ab}
                let mut row = zero_row();
                for c in 0..n {
                    layout.add(&mut row, k, a, c, &jm[(c, b)]);
                    layout.add(&mut row, k, c, b, &jm[(a, c)]);
                }
                rows.push(row);
            }
        }
    }
    for k in 0..n {
        for a in 0..n {
            for b in 0..n {
                // (η_{Je_k} - η_k J)_{ab}
                let mut row = zero_row();
                for m in 0..n {
                    layout.add(&mut row, m, a, b, &jm[(m, k)]);
                }
                for c in 0..n {
                    layout.add(&mut row, k, a, c, &-jm[(c, b)].clone());
                }
                rows.push(row);
            }
        }
    }
    for x in 0..n {
        for y in x + 1..n {
            for z in y + 1..n {
                let mut row = zero_row();
                layout.add(&mut row, x, z, y, &S::one());
                layout.add(&mut row, y, x, z, &S::one());
                layout.add(&mut row, z, y, x, &S::one());
                rows.push(row);
            }
        }
    }
    rows
}

/// Rows of `F • η = 0`, one per increasing triple; `F • η` is alternating.
fn bullet_rows<S: Scalar>(f: &Matrix<S>, n: usize) -> Vec<Vec<S>> {
    let layout = Layout::new(n);
    let mut rows = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            for z in y + 1..n {
                let mut row = vec![S::zero(); layout.unknowns()];
                for m in 0..n {
                    layout.add(&mut row, m, z, y, &f[(m, x)]);
                    layout.add(&mut row, m, x, z, &f[(m, y)]);
                    layout.add(&mut row, m, y, x, &f[(m, z)]);
                }
                rows.push(row);
            }
        }
    }
    rows
}

/// A basis of the tensors satisfying the three defining constraints.
pub fn admissible_basis<S: Scalar>(j: &ComplexStructure<S>) -> Vec<TorsionTensor<S>> {
    kernel(j, constraint_rows(j))
}

fn kernel<S: Scalar>(j: &ComplexStructure<S>, rows: Vec<Vec<S>>) -> Vec<TorsionTensor<S>> {
    let cols = Layout::new(j.dim()).unknowns();
    let m = Matrix::from_row_major(rows.len(), cols, rows.into_iter().flatten().collect());
    m.nullspace()
        .iter()
        .map(|v| TorsionTensor::from_unknowns(j, v))
        .collect()
}

/// Skew endomorphisms commuting (`anti = false`) or anticommuting with `J`;
/// the first family is `u(k)`, the second `m`.
pub fn skew_basis<S: Scalar>(j: &ComplexStructure<S>, anti: bool) -> Vec<Matrix<S>> {
    let n = j.dim();
    let jm = j.matrix();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let generator = |(a, b): (usize, usize)| {
        let mut m = Matrix::<S>::zeros(n, n);
        m[(a, b)] = S::one();
        m[(b, a)] = -S::one();
        m
    };
    let columns: Vec<Vec<S>> = pairs
        .iter()
        .map(|&pr| {
            let g = generator(pr);
            let fj = &g * jm;
            let jf = jm * &g;
            let c = if anti { &fj + &jf } else { &fj - &jf };
            c.row_major().to_vec()
        })
        .collect();
    let system = Matrix::from_columns(n * n, &columns);
    system
        .nullspace()
        .into_iter()
        .map(|v| {
            let mut m = Matrix::zeros(n, n);
            for (c, &pr) in v.iter().zip(&pairs) {
                if !c.is_zero() {
                    m = &m + &generator(pr).scale(c);
                }
            }
            m
        })
        .collect()
}

/// Dimension of the space of tensors satisfying the defining constraints
/// and `F • η = 0` for every skew `F` commuting with `J`.
pub fn van_kernel_dimension<S: Scalar>(j: &ComplexStructure<S>) -> usize {
    let n = j.dim();
    let cols = Layout::new(n).unknowns();
    let mut echelon = Echelon::new(cols);
    for row in constraint_rows(j) {
        echelon.insert(row);
        if echelon.is_full() {
            return 0;
        }
    }
    for f in skew_basis(j, false) {
        for row in bullet_rows(&f, n) {
            echelon.insert(row);
            if echelon.is_full() {
                return 0;
            }
        }
    }
    cols - echelon.rank()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolarizationReport {
    /// Dimension of the tensors satisfying the defining constraints.
    pub admissible_dim: usize,
    /// Dimension after imposing `(FG + GF) • η = 0` for all `F, G ∈ m`.
    pub polarized_dim: usize,
    /// Largest `|[F, G] • η|` over basis elements of the polarized kernel.
    pub bracket_residual: f64,
    /// Rank of the span of `{[F, G] : F, G ∈ m}`.
    pub bracket_span_rank: usize,
    /// `dim u(k) = k²`.
    pub unitary_dim: usize,
}

/// Polarises `F² • η = 0` over `F ∈ m` and checks that every bracket of
/// two elements of `m` then annihilates `η`.
pub fn polarization_report<S: Scalar>(j: &ComplexStructure<S>) -> PolarizationReport {
    let n = j.dim();
    let m_basis = skew_basis(j, true);
    let admissible = constraint_rows(j);
    let admissible_dim = kernel(j, admissible.clone()).len();
    let mut rows = admissible;
    for a in 0..m_basis.len() {
        for b in a..m_basis.len() {
            let sym = &(&m_basis[a] * &m_basis[b]) + &(&m_basis[b] * &m_basis[a]);
            rows.extend(bullet_rows(&sym, n));
        }
    }
    let polarized = kernel(j, rows);
    let mut residual: f64 = 0.0;
    let mut brackets = Vec::new();
    for a in 0..m_basis.len() {
        for b in a + 1..m_basis.len() {
            let br = &(&m_basis[a] * &m_basis[b]) - &(&m_basis[b] * &m_basis[a]);
            for eta in &polarized {
                let t = torsion_bullet(&br, eta).expect("shapes agree");
                residual = residual.max(t.max_abs());
            }
            brackets.push(br.row_major().to_vec());
        }
    }
    let span = Matrix::from_columns(n * n, &brackets);
    let k = n / 2;
    PolarizationReport {
        admissible_dim,
        polarized_dim: polarized.len(),
        bracket_residual: residual,
        bracket_span_rank: if brackets.is_empty() { 0 } else { span.rank() },
        unitary_dim: k * k,
    }
}

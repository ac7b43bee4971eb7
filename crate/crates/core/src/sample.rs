//! Seeded random inputs for property checks.
//!
//! Every generator draws from a SplitMix64 stream, so a seed fully determines
//! the sample. Rational entries have numerators in `[-9, 9]` and denominators
//! in `[1, 9]`.

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::blade;
use crate::form::{Form, Vector};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

pub type SampleRng = SplitMix64;

pub fn rng(seed: u64) -> SampleRng {
    SplitMix64::seed_from_u64(seed)
}

/// Derives an independent stream from a seed and a small tag, so that one
/// seed can drive several unrelated draws.
pub fn sub_rng(seed: u64, tag: u64) -> SampleRng {
    rng(seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn ratio<S: Scalar>(rng: &mut SampleRng) -> S {
    let num = rng.random_range(-9i64..=9);
    let den = rng.random_range(1i64..=9);
    S::from_ratio(num, den)
}

/// Uniform in `[-1, 1)`.
pub fn uniform(rng: &mut SampleRng) -> f64 {
    rng.random::<f64>() * 2.0 - 1.0
}

pub fn form<S: Scalar>(rng: &mut SampleRng, dim: usize, degree: usize) -> Form<S> {
    let mut f = Form::zero(dim, degree);
    for b in blade::blades(dim, degree) {
        f.add_term(b, ratio(rng));
    }
    f
}

pub fn vector<S: Scalar>(rng: &mut SampleRng, dim: usize) -> Vector<S> {
    Vector::new((0..dim).map(|_| ratio(rng)).collect())
}

/// Random combination of the given forms, all of one shape.
pub fn combination<S: Scalar>(rng: &mut SampleRng, basis: &[Form<S>], dim: usize, degree: usize) -> Form<S> {
    let mut f = Form::zero(dim, degree);
    for b in basis {
        f += &b.scale(&ratio(rng));
    }
    f
}

pub fn skew_matrix<S: Scalar>(rng: &mut SampleRng, n: usize) -> Matrix<S> {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v: S = ratio(rng);
            m[(j, i)] = -v.clone();
            m[(i, j)] = v;
        }
    }
    m
}

pub fn float_skew_matrix(rng: &mut SampleRng, n: usize) -> Matrix<f64> {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = uniform(rng);
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
    }
    m
}

/// Orthogonal `Q` factor of a random matrix.
pub fn orthogonal_matrix(rng: &mut SampleRng, n: usize) -> Matrix<f64> {
    loop {
        let m = nalgebra::DMatrix::from_fn(n, n, |_, _| uniform(rng));
        if m.determinant().abs() > 1e-3 {
            let q = m.qr().q();
            return Matrix::from_fn(n, n, |i, j| q[(i, j)]);
        }
    }
}

/// `O diag(λ_1 J, .., λ_r J, 0) Oᵀ` with `λ_i ∈ [1/2, 2)` and `r = rank / 2`.
/// With `unit` all `λ_i = 1`.
pub fn float_skew_of_rank(rng: &mut SampleRng, n: usize, rank: usize, unit: bool) -> Matrix<f64> {
    assert!(rank % 2 == 0 && rank <= n);
    let mut d = Matrix::zeros(n, n);
    for b in 0..rank / 2 {
        let l = if unit { 1.0 } else { 0.5 + 0.75 * (uniform(rng) + 1.0) };
        d[(2 * b + 1, 2 * b)] = l;
        d[(2 * b, 2 * b + 1)] = -l;
    }
    let o = orthogonal_matrix(rng, n);
    let m = &(&o * &d) * &o.transpose();
    // exact skew symmetry despite rounding
    Matrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] - m[(j, i)]))
}

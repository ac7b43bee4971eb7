use hodgelab::hermitian::ComplexStructure;
use hodgelab::lefschetz::{alpha_from_holomorphic, p_k};
use hodgelab::sample::{self, SampleRng};
use hodgelab::scalar::{factorial, sign_power};
use hodgelab::tensor_maps::{
    a_kernel, a_restricted_rank, antisymmetrize, contraction_identity_sides, holomorphic_q,
    holomorphize, s_vector, split_type, FormValuedMap,
};
use hodgelab::{Form, Rational, Scalar, Vector};

type F = Form<Rational>;

fn std(n: usize) -> ComplexStructure<Rational> {
    ComplexStructure::standard(n).unwrap()
}

fn random_map(rng: &mut SampleRng, j: &ComplexStructure<Rational>, p: usize, q: usize) -> FormValuedMap<Rational> {
    let n = j.dim();
    let sources = if p == 0 { vec![F::one(n)] } else { j.lambda_p_basis(p).unwrap() };
    let mut acc = FormValuedMap::zero(j, p, q);
    for u in &sources {
        let raw: F = sample::form(rng, n, q);
        let w = if q == 0 { raw } else { j.lambda_p_project(&raw).unwrap() };
        acc = acc.add(&FormValuedMap::outer(j, &w, u).unwrap()).unwrap();
    }
    acc
}

#[test]
fn antisymmetrisation_respects_type() {
    for n in [4usize, 6] {
        let j = std(n);
        for p in 1..=2usize {
            for q in 1..=2usize {
                for seed in 0..6u64 {
                    let mut rng = sample::sub_rng(seed, (n * 100 + p * 10 + q) as u64);
                    let (q1, q2) = split_type(&random_map(&mut rng, &j, p, q)).unwrap();
                    let a1 = antisymmetrize(&q1).unwrap();
                    let a2 = antisymmetrize(&q2).unwrap();
                    assert_eq!(j.bidegree_project(&a1, p, q).unwrap(), a1, "n={n} p={p} q={q}");
                    assert_eq!(j.lambda_p_project(&a2).unwrap(), a2, "n={n} p={p} q={q}");
                    let d = (p as i64 - q as i64).pow(2);
                    let jj = j.curly_j_squared(&a1).unwrap();
                    assert_eq!(jj, a1.scale(&Rational::from_i64(-d)));
                }
            }
        }
    }
}

#[test]
fn restricted_antisymmetrisation_is_injective_off_diagonal() {
    for n in [4usize, 6] {
        let j = std(n);
        for p in 1..=3usize {
            for q in 1..=3usize {
                if p == q || p + q > n {
                    continue;
                }
                let (rank, dim) = a_restricted_rank(&j, p, q).unwrap();
                assert_eq!(rank, dim, "n={n} p={p} q={q}");
                for k in a_kernel(&j, p, q).unwrap() {
                    let (q1, _) = split_type(&k).unwrap();
                    assert!(q1.is_zero());
                }
            }
        }
    }
}

#[test]
fn contraction_identity_on_random_maps() {
    for (n, seed) in [(4usize, 1u64), (4, 2), (6, 3)] {
        let j = std(n);
        let mut rng = sample::rng(seed);
        for (p, q) in [(1usize, 2usize), (2, 1), (1, 1), (2, 2)] {
            let m = random_map(&mut rng, &j, p, q);
            let (q1, _) = split_type(&m).unwrap();
            let x: Vector<Rational> = sample::vector(&mut rng, n);
            let (lhs, rhs) = contraction_identity_sides(&q1, &x).unwrap();
            assert_eq!(lhs, rhs, "n={n} p={p} q={q}");
        }
    }
}

fn random_holomorphic(rng: &mut SampleRng, j: &ComplexStructure<Rational>, p: usize) -> F {
    let raw: F = sample::form(rng, j.dim(), p);
    j.lambda_p_project(&raw).unwrap()
}

#[test]
fn holomorphic_q_is_type_one() {
    for n in [4usize, 6] {
        let j = std(n);
        for p in 2..=3usize.min(n / 2 + 1) {
            let mut rng = sample::sub_rng(11, (n * 10 + p) as u64);
            let omega = random_holomorphic(&mut rng, &j, p);
            let raw: Vec<F> = (0..n).map(|_| random_holomorphic(&mut rng, &j, p)).collect();
            let d = holomorphize(&j, &raw).unwrap();
            let q = holomorphic_q(&j, &omega, &d).unwrap();
            let (_, q2) = split_type(&q).unwrap();
            assert!(q2.is_zero(), "n={n} p={p}");
        }
    }
}

#[test]
fn s_vector_anticommutes_with_j() {
    let j = std(6);
    let mut rng = sample::rng(5);
    for p in 2..=3usize {
        let omega = random_holomorphic(&mut rng, &j, p);
        let xs: Vec<Vector<Rational>> = (0..p - 1).map(|_| sample::vector(&mut rng, 6)).collect();
        let mut turned = xs.clone();
        turned[0] = j.apply(&xs[0]);
        let lhs = s_vector(&omega, &turned).unwrap();
        let rhs = -&j.apply(&s_vector(&omega, &xs).unwrap());
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn alpha_omega_from_p_k() {
    for n in [4usize, 6] {
        let j = std(n);
        for p in 2..=3usize {
            if p > n / 2 + 1 {
                continue;
            }
            let mut rng = sample::sub_rng(3, (n + p) as u64);
            let omega = random_holomorphic(&mut rng, &j, p);
            let j_omega = j.pullback(&omega).unwrap();
            let lhs = p_k(&j, &omega, &j_omega, p - 1).unwrap();
            let coeff: Rational = sign_power::<Rational>(p) * factorial::<Rational>(p - 1) * Rational::from_i64(2);
            let rhs = alpha_from_holomorphic(&j, &omega).unwrap().scale(&coeff);
            assert_eq!(lhs, rhs, "n={n} p={p}");
        }
    }
}

use hodgelab::hermitian::ComplexStructure;
use hodgelab::lefschetz::{
    alpha_from_holomorphic, lefschetz_lstar, lefschetz_lstar_power, p_k, primitive_basis,
};
use hodgelab::sample;
use hodgelab::scalar::{factorial, sign_power};
use hodgelab::{Form, Rational, Scalar};

type F = Form<Rational>;

#[test]
fn lstar_recursion_on_random_forms() {
    for n in [4usize, 6, 8] {
        let j = ComplexStructure::<Rational>::standard(n).unwrap();
        for seed in 0..12u64 {
            let mut rng = sample::rng(seed);
            for r in 0..=3usize {
                for s in 0..=3usize {
                    let a: F = sample::form(&mut rng, n, r);
                    let b: F = sample::form(&mut rng, n, s);
                    for k in 0..=r.min(s) {
                        if r + s - 2 * k < 2 || r + s - 2 * k > n {
                            continue;
                        }
                        let lhs = lefschetz_lstar(&j, &p_k(&j, &a, &b, k).unwrap()).unwrap();
                        let mut rhs = F::zero(n, r + s - 2 * k - 2);
                        if r >= 2 && k <= r - 2 {
                            rhs += &p_k(&j, &lefschetz_lstar(&j, &a).unwrap(), &b, k).unwrap();
                        }
                        if s >= 2 && k <= s - 2 {
                            rhs += &p_k(&j, &a, &lefschetz_lstar(&j, &b).unwrap(), k).unwrap();
                        }
                        if k < r.min(s) {
                            let sign: Rational = sign_power(r + 1 - k);
                            rhs += &p_k(&j, &a, &b, k + 1).unwrap().scale(&sign);
                        }
                        assert_eq!(lhs, rhs, "n={n} seed={seed} r={r} s={s} k={k}");
                    }
                }
            }
        }
    }
}

#[test]
fn lstar_power_evaluation_on_primitive_forms() {
    for n in [4usize, 6, 8] {
        let j = ComplexStructure::<Rational>::standard(n).unwrap();
        for p in 1..=3usize.min(n / 2) {
            let basis = primitive_basis(&j, p).unwrap();
            for seed in 0..5u64 {
                let mut rng = sample::rng(seed);
                let a = sample::combination(&mut rng, &basis, n, p);
                let b = sample::combination(&mut rng, &basis, n, p);
                let lhs = lefschetz_lstar_power(&j, &a.wedge(&b).unwrap(), p).unwrap();
                let c: Rational = sign_power::<Rational>(p * (p - 1) / 2)
                    * factorial::<Rational>(p)
                    * a.inner(&j.pullback(&b).unwrap()).unwrap();
                assert_eq!(lhs, F::scalar(n, c), "n={n} p={p} seed={seed}");
            }
        }
    }
}

#[test]
fn alpha_omega_identity() {
    for n in [4usize, 6, 8] {
        let j = ComplexStructure::<Rational>::standard(n).unwrap();
        for p in 2..=3usize.min(n / 2) {
            let basis = j.lambda_p_basis(p).unwrap();
            for seed in 0..4u64 {
                let mut rng = sample::rng(seed);
                let om = sample::combination(&mut rng, &basis, n, p);
                let jom = j.pullback(&om).unwrap();
                let lhs = p_k(&j, &om, &jom, p - 1).unwrap();
                let c: Rational = sign_power::<Rational>(p) * factorial::<Rational>(p - 1) * Rational::from_i64(2);
                let alpha = alpha_from_holomorphic(&j, &om).unwrap();
                assert_eq!(lhs, alpha.scale(&c), "n={n} p={p} seed={seed}");
                let l = lefschetz_lstar_power(&j, &om.wedge(&jom).unwrap(), p - 1).unwrap();
                // the induction on the L* recursion gives (-1)^{p(p-1)/2}
                let s: Rational = sign_power(p * (p - 1) / 2);
                assert_eq!(l, lhs.scale(&s), "n={n} p={p} seed={seed}");
            }
        }
    }
}

use hodgelab::blade;
use hodgelab::harmonic::{
    form_endo, moment_agreement, spectral, splitting_q, square_residual, stab_expand,
    symplectic_candidate, symplectic_patch, triple, SkewEndo, SPECTRAL_TOL,
};
use hodgelab::linalg::Matrix;
use hodgelab::sample;
use hodgelab::{Form, Rational, Scalar, Vector};

type F = Form<Rational>;

#[test]
fn stab_identity_on_seeded_triples() {
    for n in [4usize, 6, 8] {
        for seed in 0..20u64 {
            let mut rng = sample::sub_rng(seed, n as u64);
            let a: Vec<F> = (0..3).map(|_| sample::form(&mut rng, n, 2)).collect();
            let lhs = F::adjoint_wedge(&a[0], &a[1].wedge(&a[2]).unwrap()).unwrap();
            assert_eq!(stab_expand(&a[0], &a[1], &a[2]).unwrap(), lhs, "n={n} seed={seed}");
        }
    }
}

#[test]
fn disjoint_support_reduces_to_matrix_term() {
    let e = |i: &[usize]| F::basis(6, i).unwrap();
    let (a1, a2, a3) = (e(&[1, 3]), e(&[1, 2]), e(&[3, 4]));
    let lhs = F::adjoint_wedge(&a1, &a2.wedge(&a3).unwrap()).unwrap();
    let t = triple(
        &form_endo(&a1).unwrap(),
        &form_endo(&a2).unwrap(),
        &form_endo(&a3).unwrap(),
    )
    .unwrap();
    assert_eq!(lhs, hodgelab::harmonic::endo_form(&t));
    assert_eq!(stab_expand(&a1, &a2, &a3).unwrap(), lhs);
}

#[test]
fn odd_powers_by_iterated_triple() {
    let mut rng = sample::rng(17);
    let a = SkewEndo::new(sample::skew_matrix::<Rational>(&mut rng, 5)).unwrap();
    let half = Rational::from_ratio(1, 2);
    let mut odd = a.clone();
    let mut power = a.matrix().clone();
    for _ in 1..=3 {
        let t = triple(&odd, &a, &a).unwrap();
        odd = SkewEndo::new(t.matrix().scale(&half)).unwrap();
        power = &(&power * a.matrix()) * a.matrix();
        assert_eq!(odd.matrix(), &power);
    }
}

#[test]
fn spectral_and_moments_agree() {
    for seed in 0..30u64 {
        let mut rng = sample::rng(seed);
        let n = 2 + (seed as usize % 7);
        let a = SkewEndo::new(sample::float_skew_matrix(&mut rng, n)).unwrap();
        let d = spectral(&a).unwrap();
        assert!(d.residual(&a) <= SPECTRAL_TOL, "seed={seed}");
        assert!(moment_agreement(&a).unwrap() <= 1e-6, "seed={seed}");
        for c in d.nonzero() {
            assert_eq!(c.mult % 2, 0);
        }
        if n % 2 == 0 {
            let c = symplectic_candidate(&d);
            assert!(c.compatible);
            assert!(c.square_residual <= SPECTRAL_TOL);
        }
    }
}

#[test]
fn rank_four_patch_in_dimension_six() {
    for seed in 0..10u64 {
        let mut rng = sample::rng(seed);
        let a = SkewEndo::new(sample::float_skew_of_rank(&mut rng, 6, 4, false)).unwrap();
        let c = symplectic_candidate(&spectral(&a).unwrap());
        assert_eq!(c.kernel_rank, 2);
        let patched = symplectic_patch(&c.form).unwrap();
        assert!(square_residual(&patched) <= SPECTRAL_TOL, "seed={seed}");
    }
}

fn frames_from_subsets(n: usize, r: usize) -> Vec<(Vec<usize>, Vec<Vector<Rational>>)> {
    blade::blades(n, r)
        .into_iter()
        .map(|b| (b.indices().collect(), b.indices().map(|i| Vector::basis(n, i + 1)).collect()))
        .collect()
}

#[test]
fn splitting_spectrum_on_coordinate_subspaces() {
    let n = 6;
    for r in [2usize, 4] {
        for (hs, h) in frames_from_subsets(n, r) {
            for p in 0..=n {
                for b in blade::blades(n, p) {
                    let mut psi = F::zero(n, p);
                    psi.add_term(b, Rational::from_i64(1));
                    let j = b.indices().filter(|i| hs.contains(i)).count();
                    let eig: Rational = if p == 0 {
                        Rational::from_i64(0)
                    } else {
                        hodgelab::scalar::sign_power::<Rational>(p - 1) * Rational::from_i64(j as i64)
                    };
                    assert_eq!(splitting_q(&h, &psi).unwrap(), psi.scale(&eig));
                }
            }
        }
    }
}

#[test]
fn splitting_spectrum_on_rotated_plane() {
    // h₁ = (3e₁ + 4e₃)/5, h₂ = e₂; v = (-4e₁ + 3e₃)/5 completes the frame
    let q = |a, b| Rational::from_ratio(a, b);
    let z = || q(0, 1);
    let h1 = Vector::new(vec![q(3, 5), z(), q(4, 5), z(), z(), z()]);
    let h2 = Vector::basis(6, 2);
    let v = Vector::new(vec![q(-4, 5), z(), q(3, 5), z(), z(), z()]);
    let frame = [h1.clone(), h2.clone()];
    let w = |a: &Vector<Rational>, b: &Vector<Rational>| a.flat().wedge(&b.flat()).unwrap();
    let e4 = Vector::basis(6, 4);
    assert_eq!(splitting_q(&frame, &w(&h1, &h2)).unwrap(), w(&h1, &h2).scale(&q(-2, 1)));
    assert_eq!(splitting_q(&frame, &w(&h1, &v)).unwrap(), -w(&h1, &v));
    assert!(splitting_q(&frame, &w(&v, &e4)).unwrap().is_zero());
    let three = w(&h1, &h2).wedge(&v.flat()).unwrap();
    assert_eq!(splitting_q(&frame, &three).unwrap(), three.scale(&q(2, 1)));
}

#[test]
fn duality_round_trip() {
    let mut rng = sample::rng(8);
    for n in 2..=7 {
        let a: F = sample::form(&mut rng, n, 2);
        assert_eq!(hodgelab::harmonic::endo_form(&form_endo(&a).unwrap()), a);
        let m = form_endo(&a).unwrap().into_matrix();
        assert_eq!(m.transpose(), m.scale(&Rational::from_i64(-1)));
        let _: Matrix<Rational> = m;
    }
}

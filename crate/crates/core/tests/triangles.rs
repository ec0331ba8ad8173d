use factn_core::algebra::{parse_poly, Field, Matrix, Ring, RingRef};
use factn_core::factcat::{random_chain, random_factorization, FactMorphism, NFactorization};
use factn_core::homotopy::{homotopy_classes_respect_ops, null_homotopic_through_theta, Homotopy};
use factn_core::parallel::Execution;
use factn_core::triangles::{
    cone_homotopy_iso, fill_morphism, mapping_cone, octahedron, rotate, run_axiom_suite, suspend, unsuspend,
    ConeIsoForm,
};
use factn_core::{named_backend, named_backends, Backend, Error};

fn one_by_one(r: &RingRef, s: &str) -> Matrix {
    Matrix::from_rows(r, vec![vec![parse_poly(s, r).unwrap()]], 1).unwrap()
}

#[test]
fn suite_passes_on_every_backend() {
    for (name, b) in named_backends() {
        for n in [2, 4] {
            let r = run_axiom_suite(&b, n, 6, 21, None, Execution::default()).unwrap();
            assert!(r.all_pass(), "{name} n={n}: {:?}", r.first_failure());
            assert_eq!(r.find("Sigma_inv.unavailable").is_some(), !b.has_inverse());
        }
    }
}

#[test]
fn octahedron_on_x_squared() {
    let r = Ring::new(Field::Rational, vec!["x".into()]).unwrap();
    let b = Backend::poly_classical(&r, parse_poly("x^4", &r).unwrap()).unwrap();
    let x = NFactorization::from_diffs(&b, vec![one_by_one(&r, "x^2"), one_by_one(&r, "x^2")]).unwrap();
    let y = NFactorization::from_diffs(&b, vec![one_by_one(&r, "x"), one_by_one(&r, "x^3")]).unwrap();
    let z = NFactorization::from_diffs(&b, vec![one_by_one(&r, "1"), one_by_one(&r, "x^4")]).unwrap();
    // squares: f1 x^2 = x f0, f0 x^2 = x^3 f1 and g1 x = g0, g0 x^3 = x^4 g1
    let f = FactMorphism::new(&x, &y, vec![one_by_one(&r, "x"), one_by_one(&r, "1")]).unwrap();
    let g = FactMorphism::new(&y, &z, vec![one_by_one(&r, "x"), one_by_one(&r, "1")]).unwrap();
    let o = octahedron(&f, &g).unwrap();
    for m in [&o.alpha, &o.beta, &o.sigma, &o.tau, &o.gamma] {
        assert!(m.validate().all_pass());
    }
    assert!(FactMorphism::compose(&o.tau, &o.sigma).unwrap().is_identity());
    assert!(FactMorphism::compose(&o.cone_alpha.project, &o.sigma).unwrap().same_comps(&o.gamma));
    assert!(o.w_sigma_tau.verify().all_pass());
    assert!(o.w_i_alpha.verify().all_pass());
}

#[test]
fn degenerate_cases() {
    let b = named_backend("fp5").unwrap();
    let x = random_factorization(&b, 4, 2, 5).unwrap();
    let y = random_factorization(&b, 4, 2, 6).unwrap();
    let zero_obj = NFactorization::zero(&b, 4).unwrap();
    assert!(suspend(&zero_obj).unwrap().is_zero());
    assert!(unsuspend(&zero_obj).unwrap().is_zero());

    // f = 0 gives block-diagonal cone differentials
    let c = mapping_cone(&FactMorphism::zero(&x, &y).unwrap()).unwrap();
    let (rx, ry) = (x.ranks(), y.ranks());
    for j in 0..4 {
        let lower = c.cone.diff(j).submatrix(rx[(j + 2) % 4], ry[(j + 1) % 4], 0, rx[(j + 1) % 4]);
        assert!(lower.is_zero());
    }

    // f = 0 still gives beta alpha = id
    let rot = rotate(&FactMorphism::zero(&x, &y).unwrap()).unwrap();
    assert!(FactMorphism::compose(&rot.beta, &rot.alpha).unwrap().is_identity());
    assert!(rot.witness_ab.verify().all_pass() && rot.witness_nat.verify().all_pass());

    // alpha = beta = id, f1 = f2, s = 0 gives gamma = id
    let f = random_chain(&b, 4, 2, 1, 8).unwrap().remove(0);
    let (xs, ys) = (f.source().clone(), f.target().clone());
    let s = Homotopy::reflexive(&f);
    let (_, _, gamma) =
        fill_morphism(&f, &f, &FactMorphism::identity(&xs), &FactMorphism::identity(&ys), &s).unwrap();
    assert!(gamma.is_identity());

    // f = g = id on the octahedron
    let id = FactMorphism::identity(&x);
    let o = octahedron(&id, &id).unwrap();
    assert!(o.w_sigma_tau.verify().all_pass() && o.w_i_alpha.verify().all_pass());
}

#[test]
fn fill_rejects_a_wrong_witness() {
    let b = named_backend("fp5").unwrap();
    let ch = random_chain(&b, 4, 2, 2, 3).unwrap();
    let (f, g) = (&ch[0], &ch[1]);
    let gf = FactMorphism::compose(g, f).unwrap();
    let mut rng = factn_core::random::rng(4);
    let c = b.object(1);
    let k = null_homotopic_through_theta(f.source(), g.target(), &c, &mut rng).unwrap();
    let f2 = gf.add(&k.f).unwrap();
    let id = FactMorphism::identity(f.source());
    // the zero diagonal is not a witness unless k happens to vanish
    let bogus = Homotopy::new(&gf, &f2, k.diag.iter().map(|m| Matrix::zeros(m.ring(), m.rows(), m.cols())).collect())
        .unwrap();
    if !k.f.is_zero() {
        assert!(matches!(fill_morphism(f, &f2, &id, g, &bogus), Err(Error::InvalidHomotopy(_))));
    }
}

#[test]
fn cone_iso_from_perturbation() {
    let b = named_backend("qxy").unwrap();
    let mut rng = factn_core::random::rng(2);
    for seed in 0..5 {
        let f = random_chain(&b, 2, 2, 1, seed).unwrap().remove(0);
        let c = b.object(1);
        let k = null_homotopic_through_theta(f.source(), f.target(), &c, &mut rng).unwrap();
        let f2 = f.add(&k.f).unwrap();
        let s = Homotopy::new(&f, &f2, k.diag.iter().map(Matrix::neg).collect()).unwrap();
        assert!(s.verify().all_pass());
        let (lam, mu) = cone_homotopy_iso(&s, ConeIsoForm::Corrected).unwrap();
        assert!(lam.validate().all_pass() && mu.validate().all_pass());
        assert!(FactMorphism::compose(&mu, &lam).unwrap().is_identity());
        let (printed, _) = cone_homotopy_iso(&s, ConeIsoForm::Printed).unwrap();
        if f.target().ranks().iter().any(|&r| r > 0) {
            assert!(!printed.validate().all_pass());
        }
    }
}

#[test]
fn right_rotation_needs_an_inverse() {
    let b = named_backend("graded").unwrap();
    let x = random_factorization(&b, 4, 2, 1).unwrap();
    assert_eq!(suspend(&unsuspend(&x).unwrap()).unwrap(), x);
    let t = named_backend("twist").unwrap();
    let y = random_factorization(&t, 2, 2, 1).unwrap();
    assert!(matches!(unsuspend(&y), Err(Error::NoInverse(_))));
}

#[test]
fn homotopy_classes_on_every_backend() {
    for (name, b) in named_backends() {
        let r = homotopy_classes_respect_ops(&b, 4, 3, 4, Execution::default()).unwrap();
        assert!(r.all_pass(), "{name}: {:?}", r.first_failure());
    }
}

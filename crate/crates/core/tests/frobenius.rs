use factn_core::factcat::{
    direct_sum, kernel, random_factorization, random_morphism, Conflation, FactMorphism, NFactorization,
};
use factn_core::frobenius::{
    adjunction_suite, canonical_deflation, canonical_inflation, concentrated, stably_zero, test_injective,
    test_projective, theta0, theta1, theta_s, transpose_backward, transpose_forward, AdjunctionId, CoverMode,
};
use factn_core::parallel::Execution;
use factn_core::{named_backend, named_backends, Backend, Verdict};

fn conflation_onto(z: &NFactorization) -> Conflation {
    let p = canonical_deflation(z, CoverMode::Full).unwrap().morphism;
    let k = kernel(&p).unwrap();
    Conflation::new(k.k, p).unwrap()
}

fn conflation_from(w: &NFactorization) -> Conflation {
    let l = canonical_inflation(w, CoverMode::Full).unwrap().morphism;
    let c = factn_core::factcat::cokernel(&l).unwrap();
    Conflation::new(l, c.q).unwrap()
}

#[test]
fn adjunctions_on_every_backend() {
    for (name, b) in named_backends() {
        for n in [2, 4] {
            let r = adjunction_suite(&b, n, 8, 11, Execution::default()).unwrap();
            assert!(r.all_pass(), "{name} n={n}: {:?}", r.first_failure());
        }
    }
}

#[test]
fn unit_of_first_adjunction_is_identity() {
    let b = named_backend("fp5").unwrap();
    let c = b.object(2);
    let x = theta0(&b, &c, 4).unwrap();
    let m = transpose_forward(AdjunctionId::Theta0Pr0, &x, &c, &b.id(&c)).unwrap();
    assert!(m.is_identity());
}

#[test]
fn third_adjunction_components_are_chains() {
    let b = named_backend("qxy").unwrap();
    let x = random_factorization(&b, 4, 2, 3).unwrap();
    let c = b.object(1);
    let mut rng = factn_core::random::rng(5);
    let g = b.random_matrix(x.object(3), &c, 2, &mut rng);
    let m = transpose_forward(AdjunctionId::PrLastTheta0, &x, &c, &g).unwrap();
    for j in 0..4 {
        assert_eq!(m.comp(j), &(&g * &x.diff_chain(j, 3)));
    }
    assert_eq!(transpose_backward(AdjunctionId::PrLastTheta0, &m).unwrap(), g);
}

#[test]
fn paper_mode_covers_n2_and_random_full_covers() {
    for name in ["fp5", "fp5-c0"] {
        let b = named_backend(name).unwrap();
        for seed in 0..20 {
            let x2 = random_factorization(&b, 2, 3, seed).unwrap();
            assert!(canonical_deflation(&x2, CoverMode::Paper).unwrap().succeeded());
            assert!(canonical_inflation(&x2, CoverMode::Paper).unwrap().succeeded());
            let x4 = random_factorization(&b, 4, 3, seed).unwrap();
            let d = canonical_deflation(&x4, CoverMode::Full).unwrap();
            let i = canonical_inflation(&x4, CoverMode::Full).unwrap();
            assert!(d.report.all_pass() && i.report.all_pass(), "{name} seed={seed}");
        }
    }
}

#[test]
fn concentrated_object_separates_the_modes() {
    let b = named_backend("fp5-c0").unwrap();
    let x = concentrated(&b, 4, 2, 1).unwrap();
    let d = canonical_deflation(&x, CoverMode::Paper).unwrap();
    assert!(d.object.is_zero());
    assert!(!d.succeeded());
    assert_eq!(d.failing_component(), Some(2));
    assert!(canonical_deflation(&x, CoverMode::Full).unwrap().succeeded());
    let i = canonical_inflation(&x, CoverMode::Paper).unwrap();
    assert!(!i.succeeded());
    assert_eq!(i.failing_component(), Some(2));
    assert!(canonical_inflation(&x, CoverMode::Full).unwrap().succeeded());
}

#[test]
fn theta_objects_lift_and_extend() {
    for name in ["fp5", "fp5-c0"] {
        let b = named_backend(name).unwrap();
        let mut rng = factn_core::random::rng(9);
        for seed in 0..25u64 {
            let n = 4;
            let c = b.random_object(2, &mut rng);
            let s = seed as usize % n;
            let p = theta_s(&b, &c, n, s).unwrap();
            let z = random_factorization(&b, n, 2, seed).unwrap();
            let conf = conflation_onto(&z);
            let f = random_morphism(&p, &z, seed).unwrap();
            let lift = test_projective(&p, &conf, &f, 0).unwrap();
            let h = lift.found().expect("theta objects are projective");
            assert!(FactMorphism::compose(&conf.p, h).unwrap().same_comps(&f));

            let w = random_factorization(&b, n, 2, seed + 500).unwrap();
            let conf = conflation_from(&w);
            let f = random_morphism(&w, &p, seed).unwrap();
            let ext = test_injective(&p, &conf, &f, 0).unwrap();
            let e = ext.found().expect("theta objects are injective");
            assert!(FactMorphism::compose(e, &conf.l).unwrap().same_comps(&f));
        }
    }
}

#[test]
fn stable_zero_on_projective_injectives_and_sandwiches() {
    let b: Backend = named_backend("fp5").unwrap();
    let mut rng = factn_core::random::rng(1);
    for seed in 0..10u64 {
        let (p, q) = (b.random_object(2, &mut rng), b.random_object(2, &mut rng));
        let t = direct_sum(&theta0(&b, &p, 4).unwrap(), &theta1(&b, &q, 4).unwrap()).unwrap().sum;
        let id = FactMorphism::identity(&t);
        let sz = stably_zero(&id, 0).unwrap();
        assert_eq!(sz.verdict, Verdict::True);
        let (a, e) = sz.witness.unwrap();
        assert!(FactMorphism::compose(&e, &a).unwrap().same_comps(&id));
        // ideal property
        let x = random_factorization(&b, 4, 2, seed).unwrap();
        let y = random_factorization(&b, 4, 2, seed + 1).unwrap();
        let v = random_morphism(&x, &t, seed).unwrap();
        let u = random_morphism(&t, &y, seed).unwrap();
        let sandwich = FactMorphism::chain(&[&v, &id, &u]).unwrap();
        assert_eq!(stably_zero(&sandwich, 0).unwrap().verdict, Verdict::True);
    }
    let zero = FactMorphism::zero(&random_factorization(&b, 4, 2, 3).unwrap(), &random_factorization(&b, 4, 2, 4).unwrap()).unwrap();
    assert_eq!(stably_zero(&zero, 0).unwrap().verdict, Verdict::True);
    let c0 = named_backend("fp5-c0").unwrap();
    let x = concentrated(&c0, 4, 2, 1).unwrap();
    assert_eq!(stably_zero(&FactMorphism::identity(&x), 0).unwrap().verdict, Verdict::False);
}

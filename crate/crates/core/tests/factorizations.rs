use factn_core::algebra::{parse_poly, Matrix, Ring, Field};
use factn_core::factcat::{
    cokernel, direct_sum, is_conflation, kernel, pullback_deflation, pushout_inflation, random_chain,
    random_factorization, random_morphism, Conflation, FactMorphism, NFactorization,
};
use factn_core::frobenius::{canonical_deflation, canonical_inflation, theta0, theta_s, CoverMode};
use factn_core::triangles::{mapping_cone, suspend};
use factn_core::{named_backend, named_backends, Backend};
use proptest::prelude::*;

fn fp5() -> Backend {
    named_backend("fp5").unwrap()
}

#[test]
fn constructions_validate_on_every_backend() {
    for (name, b) in named_backends() {
        for n in [2, 4, 6] {
            for seed in 0..6 {
                let x = random_factorization(&b, n, 3, seed).unwrap();
                let y = random_factorization(&b, n, 3, seed + 100).unwrap();
                let ctx = format!("{name} n={n} seed={seed}");
                assert!(x.validate().all_pass(), "{ctx}");
                assert!(direct_sum(&x, &y).unwrap().sum.validate().all_pass(), "{ctx}");
                assert!(x.shift_s().validate().all_pass(), "{ctx}");
                assert!(suspend(&x).unwrap().validate().all_pass(), "{ctx}");
                let c = b.object(1 + seed as usize % 2);
                assert!(theta0(&b, &c, n).unwrap().validate().all_pass(), "{ctx}");
                if b.has_inverse() {
                    for s in 1..n {
                        assert!(theta_s(&b, &c, n, s).unwrap().validate().all_pass(), "{ctx} s={s}");
                    }
                }
                let f = random_morphism(&x, &y, seed).unwrap();
                assert!(mapping_cone(&f).unwrap().cone.validate().all_pass(), "{ctx}");
            }
        }
    }
}

#[test]
fn validator_names_the_failing_index() {
    let r = Ring::new(Field::Rational, vec!["x".into(), "y".into()]).unwrap();
    let b = Backend::poly_classical(&r, parse_poly("x*y", &r).unwrap()).unwrap();
    let x = Matrix::from_rows(&r, vec![vec![parse_poly("x", &r).unwrap()]], 1).unwrap();
    let err = NFactorization::from_diffs(&b, vec![x.clone(), x]).unwrap_err();
    assert!(err.to_string().contains("composite[0]"), "{err}");
}

#[test]
fn pullbacks_and_pushouts_of_canonical_covers() {
    for name in ["fp5", "fp5-c0"] {
        let b = named_backend(name).unwrap();
        for seed in 0..15 {
            let z = random_factorization(&b, 4, 2, seed).unwrap();
            let w = random_factorization(&b, 4, 2, seed + 50).unwrap();
            let p = canonical_deflation(&z, CoverMode::Full).unwrap().morphism;
            let f = random_morphism(&w, &z, seed).unwrap();
            let pb = pullback_deflation(&p, &f).unwrap();
            assert!(pb.report.all_pass(), "{name} seed={seed}: {}", pb.report);
            let l = canonical_inflation(&w, CoverMode::Full).unwrap().morphism;
            let g = random_morphism(&w, &z, seed + 1).unwrap();
            let po = pushout_inflation(&l, &g).unwrap();
            assert!(po.report.all_pass(), "{name} seed={seed}: {}", po.report);
        }
    }
}

#[test]
fn kernel_cokernel_conflation() {
    let b = fp5();
    for seed in 0..20 {
        let ch = random_chain(&b, 4, 2, 1, seed).unwrap();
        let f = &ch[0];
        let k = kernel(f).unwrap();
        let c = cokernel(&k.k).unwrap();
        let conf = Conflation::new(k.k.clone(), c.q.clone()).unwrap();
        assert!(is_conflation(&conf).unwrap().all_pass());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    /// Existence and uniqueness of the factorization through a kernel.
    #[test]
    fn kernel_universal_property(seed in 0u64..1_000_000, c0 in any::<bool>()) {
        let b = named_backend(if c0 { "fp5-c0" } else { "fp5" }).unwrap();
        let f = random_chain(&b, 4, 3, 1, seed).unwrap().remove(0);
        let k = kernel(&f).unwrap();
        prop_assert!(k.object().validate().all_pass());
        let w = random_factorization(&b, 4, 2, seed ^ 0xabc).unwrap();
        let h = random_morphism(&w, k.object(), seed ^ 0xdef).unwrap();
        let g = FactMorphism::compose(&k.k, &h).unwrap();
        prop_assert!(FactMorphism::compose(&f, &g).unwrap().is_zero());
        let fac = k.factor(&g).unwrap();
        prop_assert!(fac.unique);
        prop_assert!(fac.h.same_comps(&h));
        prop_assert!(FactMorphism::compose(&k.k, &fac.h).unwrap().same_comps(&g));
    }

    #[test]
    fn cokernel_universal_property(seed in 0u64..1_000_000) {
        let b = fp5();
        let f = random_chain(&b, 4, 3, 1, seed).unwrap().remove(0);
        let c = cokernel(&f).unwrap();
        let w = random_factorization(&b, 4, 2, seed ^ 0x123).unwrap();
        let h = random_morphism(c.object(), &w, seed ^ 0x456).unwrap();
        let g = FactMorphism::compose(&h, &c.q).unwrap();
        let fac = c.factor(&g).unwrap();
        prop_assert!(fac.unique && fac.h.same_comps(&h));
    }
}

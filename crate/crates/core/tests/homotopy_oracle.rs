//! Over F2 with n = 2 every hom-set and every space of witnesses is finite,
//! so homotopy can be decided by enumeration and compared with the solver.

use factn_core::algebra::{Field, Matrix, Polynomial, RingRef};
use factn_core::factcat::{random_factorization, random_morphism, FactMorphism, NFactorization};
use factn_core::homotopy::{solve_homotopy, Homotopy};
use factn_core::Backend;

fn all_matrices(ring: &RingRef, rows: usize, cols: usize) -> Vec<Matrix> {
    let cells = rows * cols;
    (0..1u32 << cells)
        .map(|bits| {
            Matrix::from_fn(ring, rows, cols, |i, j| {
                if bits >> (i * cols + j) & 1 == 1 {
                    Polynomial::one(ring)
                } else {
                    Polynomial::zero(ring)
                }
            })
        })
        .collect()
}

/// Whether some `(s0, s1)` satisfies both equations; `T = id` here.
fn homotopic_by_enumeration(f: &FactMorphism, g: &FactMorphism) -> bool {
    let (x, y) = (f.source(), f.target());
    let ring = x.backend().ring();
    let (rx, ry) = (x.ranks(), y.ranks());
    let s0s = all_matrices(ring, ry[0], rx[1]);
    let s1s = all_matrices(ring, ry[1], rx[0]);
    let h0 = f.comp(0) - g.comp(0);
    let h1 = f.comp(1) - g.comp(1);
    s0s.iter().any(|s0| {
        s1s.iter().any(|s1| {
            let e0 = &(y.diff(1) * s1) + &(s0 * x.diff(0));
            let e1 = &(y.diff(0) * s0) + &(s1 * x.diff(1));
            e0 == h0 && e1 == h1
        })
    })
}

fn all_factorizations(b: &Backend, r0: usize, r1: usize) -> Vec<NFactorization> {
    let ring = b.ring();
    let mut out = Vec::new();
    for d0 in all_matrices(ring, r1, r0) {
        for d1 in all_matrices(ring, r0, r1) {
            if let Ok(x) = NFactorization::new(b, vec![b.object(r0), b.object(r1)], vec![d0.clone(), d1]) {
                out.push(x);
            }
        }
    }
    out
}

fn all_morphisms(x: &NFactorization, y: &NFactorization) -> Vec<FactMorphism> {
    let ring = x.backend().ring();
    let mut out = Vec::new();
    for f0 in all_matrices(ring, y.object(0).rank(), x.object(0).rank()) {
        for f1 in all_matrices(ring, y.object(1).rank(), x.object(1).rank()) {
            if let Ok(f) = FactMorphism::new(x, y, vec![f0.clone(), f1]) {
                out.push(f);
            }
        }
    }
    out
}

fn f2_backends() -> Vec<Backend> {
    let f2 = Field::prime(2).unwrap();
    vec![Backend::field_scalar(f2, f2.zero()).unwrap(), Backend::field_scalar(f2, f2.one()).unwrap()]
}

fn agree(f: &FactMorphism, g: &FactMorphism) -> bool {
    let expected = homotopic_by_enumeration(f, g);
    let found = solve_homotopy(f, g, 0).unwrap();
    assert_eq!(found.is_some(), expected, "f = {:?}, g = {:?}", f.comps(), g.comps());
    if let Some(h) = found {
        assert!(h.verify().all_pass());
    }
    expected
}

#[test]
fn all_rank_one_pairs() {
    let mut pairs = 0;
    for b in f2_backends() {
        let mut objs = Vec::new();
        for (r0, r1) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            objs.extend(all_factorizations(&b, r0, r1));
        }
        for x in &objs {
            for y in &objs {
                let homs = all_morphisms(x, y);
                for f in &homs {
                    for g in &homs {
                        let _ = agree(f, g);
                        pairs += 1;
                    }
                }
            }
        }
    }
    assert!(pairs > 50, "{pairs}");
}

#[test]
fn sampled_rank_two_pairs() {
    let mut verdicts = [0; 2];
    for b in f2_backends() {
        for seed in 0..100u64 {
            let x = random_factorization(&b, 2, 2, seed).unwrap();
            let y = random_factorization(&b, 2, 2, seed + 1000).unwrap();
            let f = random_morphism(&x, &y, seed).unwrap();
            let g = if seed % 3 == 0 { f.clone() } else { random_morphism(&x, &y, seed + 7).unwrap() };
            verdicts[agree(&f, &g) as usize] += 1;
        }
    }
    assert!(verdicts[0] > 0 && verdicts[1] > 0, "{verdicts:?}");
}

#[test]
fn enumeration_matches_witness_shapes() {
    let b = &f2_backends()[0];
    let x = NFactorization::new(
        b,
        vec![b.object(1), b.object(1)],
        vec![Matrix::identity(b.ring(), 1), Matrix::zeros(b.ring(), 1, 1)],
    )
    .unwrap();
    // d0 = 1 makes the identity null-homotopic via s1 = 0, s0 = 1
    let id = FactMorphism::identity(&x);
    let zero = FactMorphism::zero(&x, &x).unwrap();
    assert!(homotopic_by_enumeration(&id, &zero));
    let h = Homotopy::new(&id, &zero, vec![Matrix::identity(b.ring(), 1), Matrix::zeros(b.ring(), 1, 1)]).unwrap();
    assert!(h.verify().all_pass());
}

//! Seeded random instances.
//!
//! Factorizations are direct sums of small building blocks (rotated
//! `theta^s(C)`, monomial splittings of `w`, rank-2 Koszul blocks, and blocks
//! with one zero differential when `omega = 0`), conjugated at every node by a
//! random automorphism. For `FieldScalar` with `c != 0` the differentials are
//! a random invertible chain closed up by `c` times the inverse product.
//! Morphisms combine a bounded Hom-space basis with maps through `theta^0`
//! and, between related instances, scalar multiples of shared blocks.

use rand::seq::SliceRandom;
use rand::Rng as _;

use super::fact::NFactorization;
use super::morphism::FactMorphism;
use super::sum::direct_sum_all;
use super::hom::hom_space;
use crate::algebra::{Matrix, Monomial, Polynomial};
use crate::ambient::{Backend, BackendKind, ObjectHandle};
use crate::error::{Error, Result};
use crate::frobenius::adjoint::{left_forward, right_forward};
use crate::frobenius::theta_s;
use crate::random::{self, Rng};

/// A random valid factorization with every node of rank `<= max_rank`.
pub fn random_factorization(backend: &Backend, n: usize, max_rank: usize, seed: u64) -> Result<NFactorization> {
    let mut rng = random::rng(seed);
    let blocks = random_blocks(backend, n, &vec![max_rank; n], &mut rng)?;
    Ok(Layout::assemble(backend, n, blocks, &mut rng)?.fact)
}

/// A random morphism `x -> y`.
pub fn random_morphism(x: &NFactorization, y: &NFactorization, seed: u64) -> Result<FactMorphism> {
    let mut rng = random::rng(seed);
    generic_morphism(x, y, &mut rng)
}

/// Random `X`, `Y` sharing some summands, and a morphism `X -> Y`.
pub fn random_morphism_pair(backend: &Backend, n: usize, max_rank: usize, seed: u64) -> Result<FactMorphism> {
    Ok(random_chain(backend, n, max_rank, 1, seed)?.remove(0))
}

/// `len` composable random morphisms `X_0 -> X_1 -> ... -> X_len`.
pub fn random_chain(backend: &Backend, n: usize, max_rank: usize, len: usize, seed: u64) -> Result<Vec<FactMorphism>> {
    let mut rng = random::rng(seed);
    let caps = vec![max_rank; n];
    let mut layouts = vec![Layout::assemble(backend, n, random_blocks(backend, n, &caps, &mut rng)?, &mut rng)?];
    for _ in 0..len {
        let prev = layouts.last().expect("nonempty");
        let mut shared: Vec<NFactorization> = prev.blocks.iter().filter(|_| rng.gen_bool(0.6)).cloned().collect();
        let used = load(&shared, n);
        let rest: Vec<usize> = caps.iter().zip(&used).map(|(c, u)| c - u).collect();
        let fresh = random_blocks(backend, n, &rest, &mut rng)?;
        let nshared = shared.len();
        shared.extend(fresh);
        let mut next = Layout::assemble(backend, n, shared, &mut rng)?;
        next.shared_prefix = nshared;
        layouts.push(next);
    }
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let (a, b) = (&layouts[i], &layouts[i + 1]);
        let mut f = shared_morphism(a, b, &mut rng)?;
        let g = generic_morphism(&a.fact, &b.fact, &mut rng)?;
        f = f.add(&g)?;
        out.push(f);
    }
    Ok(out)
}

/// Hom-space combination plus (on polynomial backends) a map through
/// `theta^0(C)`.
fn generic_morphism(x: &NFactorization, y: &NFactorization, rng: &mut Rng) -> Result<FactMorphism> {
    let b = x.backend();
    let field = b.field();
    let ring = b.ring();
    let bound = if b.is_field() { 0 } else { 1 };
    let mut acc = FactMorphism::zero(x, y)?;
    let fits = |z: &NFactorization| z.ranks().iter().sum::<usize>() <= 12;
    if fits(x) && fits(y) {
        for e in hom_space(x, y, bound)? {
            if rng.gen_bool(0.7) {
                let c = Polynomial::constant(ring, field.random(rng));
                acc = acc.add(&e.scale(&c))?;
            }
        }
    }
    if !b.is_field() && rng.gen_bool(0.8) {
        let n = x.n();
        let c = b.random_object_of_rank(rng.gen_range(1..=2), rng);
        let g = b.random_matrix(x.object(n - 1), &c, 1, rng);
        let h = b.random_matrix(&c, y.object(0), 1, rng);
        let u = right_forward(x, &c, 0, &g)?;
        let v = left_forward(y, &c, 0, &h)?;
        acc = acc.add(&FactMorphism::compose(&v, &u)?)?;
    }
    Ok(acc)
}

/// Scalar multiples of the identity on the summands `b` shares with `a`.
fn shared_morphism(a: &Layout, b: &Layout, rng: &mut Rng) -> Result<FactMorphism> {
    let backend = a.fact.backend();
    let ring = backend.ring();
    let n = a.fact.n();
    let mut comps: Vec<Matrix> = (0..n).map(|j| backend.zero(a.sum.object(j), b.sum.object(j))).collect();
    let mut offs_a = vec![0usize; n];
    let mut offs_b = vec![0usize; n];
    let mut bi = 0;
    // shared blocks appear in `b` in the same order as in `a`, first
    for blk in &a.blocks {
        let is_shared = bi < b.shared_prefix && b.blocks[bi] == *blk;
        if is_shared {
            let lambda = backend.field().random(rng);
            for j in 0..n {
                for t in 0..blk.object(j).rank() {
                    comps[j].set(offs_b[j] + t, offs_a[j] + t, Polynomial::constant(ring, lambda.clone()));
                }
                offs_b[j] += blk.object(j).rank();
            }
            bi += 1;
        }
        for (j, o) in offs_a.iter_mut().enumerate() {
            *o += blk.object(j).rank();
        }
    }
    // f = Q f0 P^-1
    let comps = (0..n).map(|j| &(&b.conj[j].0 * &comps[j]) * &a.conj[j].1).collect();
    Ok(FactMorphism::unchecked(&a.fact, &b.fact, comps))
}

/// The block decomposition behind a generated instance.
struct Layout {
    blocks: Vec<NFactorization>,
    sum: NFactorization,
    conj: Vec<(Matrix, Matrix)>,
    fact: NFactorization,
    /// Number of leading blocks shared with the previous layout in a chain.
    shared_prefix: usize,
}

impl Layout {
    fn assemble(backend: &Backend, n: usize, blocks: Vec<NFactorization>, rng: &mut Rng) -> Result<Layout> {
        let sum = direct_sum_all(&blocks, backend, n)?;
        let conj: Vec<(Matrix, Matrix)> = (0..n).map(|j| random_automorphism(backend, sum.object(j), rng)).collect();
        let fact = sum.conjugate(&conj);
        Ok(Layout { blocks, sum, conj, fact, shared_prefix: 0 })
    }
}

fn load(blocks: &[NFactorization], n: usize) -> Vec<usize> {
    let mut l = vec![0; n];
    for b in blocks {
        for (j, r) in b.ranks().into_iter().enumerate() {
            l[j] += r;
        }
    }
    l
}

/// Blocks whose node ranks together stay within `caps`.
fn random_blocks(backend: &Backend, n: usize, caps: &[usize], rng: &mut Rng) -> Result<Vec<NFactorization>> {
    if n < 2 {
        return Err(Error::SmallN(n));
    }
    if let BackendKind::FieldScalar { c } = backend.kind() {
        if !c.is_zero() {
            let cap = *caps.iter().min().expect("n >= 2");
            if cap == 0 {
                return Ok(Vec::new());
            }
            let r = rng.gen_range(1..=cap);
            return Ok(vec![invertible_chain(backend, n, r, rng)]);
        }
    }
    let mut used = vec![0usize; n];
    let mut blocks = Vec::new();
    let attempts = 2 + caps.iter().max().copied().unwrap_or(0);
    for _ in 0..attempts {
        let room: Vec<usize> = caps.iter().zip(&used).map(|(c, u)| c - u).collect();
        if room.iter().all(|&r| r == 0) {
            break;
        }
        let Some(blk) = random_block(backend, n, &room, rng)? else {
            continue;
        };
        for (j, r) in blk.ranks().into_iter().enumerate() {
            used[j] += r;
        }
        blocks.push(blk);
    }
    blocks.shuffle(rng);
    Ok(blocks)
}

fn random_block(backend: &Backend, n: usize, room: &[usize], rng: &mut Rng) -> Result<Option<NFactorization>> {
    let min_room = *room.iter().min().expect("n >= 2");
    let w = backend.w();
    let mut kinds: Vec<u8> = Vec::new();
    if min_room >= 1 {
        kinds.push(0); // theta
    }
    if w.is_zero() {
        kinds.push(1); // one zero differential
    } else if min_room >= 1 && w.num_terms() == 1 && !backend.is_field() {
        kinds.push(2); // monomial split
    }
    if !w.is_zero() && w.num_terms() >= 2 && min_room >= 2 {
        kinds.push(3); // Koszul
    }
    let Some(&kind) = kinds.choose(rng) else {
        return Ok(None);
    };
    let blk = match kind {
        0 => {
            let c = backend.random_object_of_rank(rng.gen_range(1..=min_room.min(2)), rng);
            let s = if backend.has_inverse() { rng.gen_range(0..n) } else { 0 };
            theta_s(backend, &c, n, s)?
        }
        1 => zero_diff_block(backend, n, room, rng),
        2 => monomial_split(backend, n, rng),
        _ => koszul_block(backend, n, rng),
    };
    // rotating keeps node ranks only for uniform blocks
    let turns = if kind == 1 { 0 } else { rng.gen_range(0..n) };
    Ok(Some((0..turns).fold(blk, |b, _| b.shift_s())))
}

/// Random differentials with `d^z = 0` for one random `z`; valid when
/// `omega = 0`.
fn zero_diff_block(backend: &Backend, n: usize, room: &[usize], rng: &mut Rng) -> NFactorization {
    let ranks: Vec<usize> = room.iter().map(|&r| rng.gen_range(0..=r.min(2))).collect();
    let objects: Vec<ObjectHandle> = ranks.iter().map(|&r| backend.random_object_of_rank(r, rng)).collect();
    let z = rng.gen_range(0..n);
    let diffs = (0..n)
        .map(|j| {
            let tgt = if j + 1 < n { objects[j + 1].clone() } else { backend.apply_t_obj(&objects[0]) };
            if j == z {
                backend.zero(&objects[j], &tgt)
            } else {
                backend.random_matrix(&objects[j], &tgt, 1, rng)
            }
        })
        .collect();
    NFactorization::unchecked(backend, objects, diffs)
}

/// `w = c * m` split into rank-1 factors `m_0 ... m_{n-1}`.
fn monomial_split(backend: &Backend, n: usize, rng: &mut Rng) -> NFactorization {
    let ring = backend.ring();
    let w = backend.w();
    let (m, c) = w.leading().map(|(m, c)| (m.clone(), c.clone())).expect("w nonzero");
    let mut parts = vec![vec![0u32; ring.nvars()]; n];
    for (v, &e) in m.0.iter().enumerate() {
        for _ in 0..e {
            parts[rng.gen_range(0..n)][v] += 1;
        }
    }
    let holder = rng.gen_range(0..n);
    let field = ring.field();
    let factors: Vec<Polynomial> = parts
        .into_iter()
        .enumerate()
        .map(|(j, p)| {
            let coeff = if j == holder { c.clone() } else { field.one() };
            Polynomial::monomial(ring, coeff, Monomial(p))
        })
        .collect();
    let mut degs = vec![rng.gen_range(0..=2i64)];
    for f in &factors[..n - 1] {
        degs.push(degs.last().unwrap() + poly_degree(backend, f));
    }
    let objects: Vec<ObjectHandle> = degs.iter().map(|&d| object_with_degrees(backend, vec![d])).collect();
    let diffs = factors.iter().map(|f| Matrix::scalar_diag(ring, 1, f)).collect();
    NFactorization::unchecked(backend, objects, diffs)
}

/// `w = f1 g1 + f2 g2` as the rank-2 pair `A = [[f1, g2], [-f2, g1]]`,
/// `B = [[g1, -g2], [f2, f1]]`, padded with identities.
fn koszul_block(backend: &Backend, n: usize, rng: &mut Rng) -> NFactorization {
    let ring = backend.ring();
    let field = ring.field();
    let w = backend.w();
    let (lm, lc) = w.leading().map(|(m, c)| (m.clone(), c.clone())).expect("w nonzero");
    let lead = Polynomial::monomial(ring, lc.clone(), lm.clone());
    let rest = &w - &lead;
    // f1 g1 = leading term, f1 a random divisor of it
    let f1_exp: Vec<u32> = lm.0.iter().map(|&e| rng.gen_range(0..=e)).collect();
    let g1_exp: Vec<u32> = lm.0.iter().zip(&f1_exp).map(|(e, a)| e - a).collect();
    let f1 = Polynomial::monomial(ring, field.one(), Monomial(f1_exp));
    let g1 = Polynomial::monomial(ring, lc, Monomial(g1_exp));
    let f2 = Polynomial::one(ring);
    let g2 = rest;
    let a = Matrix::from_rows(ring, vec![vec![f1.clone(), g2.clone()], vec![-&f2, g1.clone()]], 2).expect("2x2");
    let bm = Matrix::from_rows(ring, vec![vec![g1.clone(), -&g2], vec![f2.clone(), f1.clone()]], 2).expect("2x2");
    let e = rng.gen_range(0..=2i64);
    let da = poly_degree(backend, &f1);
    let dw = poly_degree(backend, &w);
    let x0 = object_with_degrees(backend, vec![e, e + da - dw]);
    let x1 = object_with_degrees(backend, vec![e + da, e]);
    let tx0 = backend.apply_t_obj(&x0);
    let mut objects = vec![x0.clone(), x1.clone()];
    let mut diffs = vec![a, bm];
    for _ in 2..n {
        objects.push(tx0.clone());
        diffs.push(backend.id(&tx0));
    }
    NFactorization::unchecked(backend, objects, diffs)
}

fn poly_degree(backend: &Backend, p: &Polynomial) -> i64 {
    match backend.kind() {
        BackendKind::GradedShift { weights, .. } => p.homogeneous_degree(weights).unwrap_or(0),
        _ => 0,
    }
}

fn object_with_degrees(backend: &Backend, degrees: Vec<i64>) -> ObjectHandle {
    if backend.is_graded() {
        backend.graded_object(degrees).expect("graded")
    } else {
        backend.object(degrees.len())
    }
}

/// `d^0 .. d^{n-2}` random invertible, `d^{n-1} = c (d^{n-2} ... d^0)^-1`.
fn invertible_chain(backend: &Backend, n: usize, r: usize, rng: &mut Rng) -> NFactorization {
    let w = backend.w();
    let mut diffs: Vec<Matrix> = (0..n - 1).map(|_| random_automorphism(backend, &backend.object(r), rng).0).collect();
    let prod = crate::algebra::matrix::product(diffs.iter().rev()).expect("n >= 2");
    let inv = prod.inverse().expect("product of invertibles");
    diffs.push(inv.scale(&w));
    NFactorization::unchecked(backend, vec![backend.object(r); n], diffs)
}

/// A random automorphism of `x` with its inverse: a diagonal of units times
/// elementary matrices (degree <= 1 entries, homogeneous when graded). Over a
/// field, a dense random invertible matrix.
fn random_automorphism(backend: &Backend, x: &ObjectHandle, rng: &mut Rng) -> (Matrix, Matrix) {
    let ring = backend.ring();
    let field = backend.field();
    let r = x.rank();
    if backend.is_field() {
        loop {
            let m = Matrix::from_fn(ring, r, r, |_, _| Polynomial::constant(ring, field.random(rng)));
            if let Some(inv) = m.inverse() {
                return (m, inv);
            }
        }
    }
    let mut p = Matrix::identity(ring, r);
    let mut pinv = Matrix::identity(ring, r);
    for i in 0..r {
        let u = field.random_nonzero(rng);
        p.set(i, i, Polynomial::constant(ring, u.clone()));
        pinv.set(i, i, Polynomial::constant(ring, u.inv().expect("nonzero")));
    }
    if r < 2 {
        return (p, pinv);
    }
    for _ in 0..r {
        let a = rng.gen_range(0..r);
        let mut b = rng.gen_range(0..r - 1);
        if b >= a {
            b += 1;
        }
        let entry = match (backend.kind(), x.degrees()) {
            (BackendKind::GradedShift { weights, .. }, Some(d)) => {
                Polynomial::random_homogeneous(ring, weights, d[a] - d[b], 0.6, rng)
            }
            _ => Polynomial::random(ring, 1, 0.5, rng),
        };
        if entry.is_zero() {
            continue;
        }
        // E = I + p e_ab, E^-1 = I - p e_ab; P <- E P, P^-1 <- P^-1 E^-1
        let mut e = Matrix::identity(ring, r);
        e.set(a, b, entry.clone());
        let mut einv = Matrix::identity(ring, r);
        einv.set(a, b, -&entry);
        p = &e * &p;
        pinv = &pinv * &einv;
    }
    (p, pinv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn backends() -> Vec<Backend> {
        crate::ambient::named_backends().into_iter().map(|(_, b)| b).collect()
    }

    #[test]
    fn generated_instances_validate() {
        for b in backends() {
            for n in [2, 3, 4] {
                for seed in 0..30 {
                    let x = random_factorization(&b, n, 3, seed).unwrap();
                    assert!(x.validate().all_pass(), "{} n={n} seed={seed}", b.kind_name());
                    assert!(x.ranks().iter().all(|&r| r <= 3));
                    if b.is_graded() {
                        assert!(x.check_homogeneous().all_pass());
                    }
                }
            }
        }
    }

    #[test]
    fn generated_morphisms_validate() {
        for b in backends() {
            for seed in 0..10 {
                let fs = random_chain(&b, 4, 2, 2, seed).unwrap();
                for f in &fs {
                    assert!(f.validate().all_pass(), "{} seed={seed}", b.kind_name());
                    if b.is_graded() {
                        for j in 0..4 {
                            assert!(b.is_homogeneous(f.comp(j), f.source().object(j), f.target().object(j)));
                        }
                    }
                }
                assert!(FactMorphism::compose(&fs[1], &fs[0]).is_ok());
            }
        }
    }

    #[test]
    fn deterministic() {
        let b = &backends()[2];
        assert_eq!(random_factorization(b, 4, 3, 9).unwrap(), random_factorization(b, 4, 3, 9).unwrap());
    }
}

use super::fact::{check_compatible, NFactorization};
use super::morphism::FactMorphism;
use crate::algebra::Matrix;
use crate::error::Result;

/// `X (+) Y` with its injections and projections.
#[derive(Clone, Debug)]
pub struct Biproduct {
    pub sum: NFactorization,
    pub inj1: FactMorphism,
    pub inj2: FactMorphism,
    pub proj1: FactMorphism,
    pub proj2: FactMorphism,
}

/// Componentwise direct sum with block-diagonal differentials.
pub fn direct_sum(x: &NFactorization, y: &NFactorization) -> Result<Biproduct> {
    check_compatible(x, y)?;
    let b = x.backend();
    let n = x.n();
    let objects = (0..n).map(|j| x.object(j).direct_sum(y.object(j))).collect();
    let diffs = (0..n).map(|j| Matrix::diag(x.diff(j), y.diff(j))).collect();
    let sum = NFactorization::unchecked(b, objects, diffs);
    let ring = b.ring();
    let (mut i1, mut i2, mut p1, mut p2) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for j in 0..n {
        let (rx, ry) = (x.object(j).rank(), y.object(j).rank());
        let ix = Matrix::identity(ring, rx);
        let iy = Matrix::identity(ring, ry);
        i1.push(Matrix::vstack(&ix, &Matrix::zeros(ring, ry, rx)));
        i2.push(Matrix::vstack(&Matrix::zeros(ring, rx, ry), &iy));
        p1.push(Matrix::hstack(&ix, &Matrix::zeros(ring, rx, ry)));
        p2.push(Matrix::hstack(&Matrix::zeros(ring, ry, rx), &iy));
    }
    Ok(Biproduct {
        inj1: FactMorphism::unchecked(x, &sum, i1),
        inj2: FactMorphism::unchecked(y, &sum, i2),
        proj1: FactMorphism::unchecked(&sum, x, p1),
        proj2: FactMorphism::unchecked(&sum, y, p2),
        sum,
    })
}

/// `f (+) g: X1 (+) X2 -> Y1 (+) Y2` between the given sums.
pub fn sum_morphism(f: &FactMorphism, g: &FactMorphism, source: &NFactorization, target: &NFactorization) -> FactMorphism {
    let comps = (0..f.n()).map(|j| Matrix::diag(f.comp(j), g.comp(j))).collect();
    FactMorphism::unchecked(source, target, comps)
}

/// `[f; g]: X -> Y1 (+) Y2`.
pub fn column_morphism(f: &FactMorphism, g: &FactMorphism, target: &NFactorization) -> FactMorphism {
    let comps = (0..f.n()).map(|j| Matrix::vstack(f.comp(j), g.comp(j))).collect();
    FactMorphism::unchecked(f.source(), target, comps)
}

/// `[f g]: X1 (+) X2 -> Y`.
pub fn row_morphism(f: &FactMorphism, g: &FactMorphism, source: &NFactorization) -> FactMorphism {
    let comps = (0..f.n()).map(|j| Matrix::hstack(f.comp(j), g.comp(j))).collect();
    FactMorphism::unchecked(source, f.target(), comps)
}

/// Direct sum of a list; the zero factorization for an empty list.
pub fn direct_sum_all(parts: &[NFactorization], backend: &crate::ambient::Backend, n: usize) -> Result<NFactorization> {
    let mut acc = NFactorization::zero(backend, n)?;
    for p in parts {
        acc = direct_sum(&acc, p)?.sum;
    }
    Ok(acc)
}

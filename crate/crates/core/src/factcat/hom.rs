//! Morphisms as solutions of linear systems.

use super::fact::NFactorization;
use super::morphism::FactMorphism;
use crate::algebra::{bounded_poly_solve, solution_space, LinearTemplate, Matrix, Polynomial, Term};
use crate::ambient::{Backend, BackendKind, ObjectHandle};
use crate::error::Result;

/// A template whose unknowns `U_0..U_{n-1}` are the components of a morphism
/// `x -> y`, with the `n` commuting squares as equations. Returns the
/// template and the unknown indices.
pub fn morphism_template(x: &NFactorization, y: &NFactorization) -> Result<(LinearTemplate, Vec<usize>)> {
    super::fact::check_compatible(x, y)?;
    let b = x.backend();
    let n = x.n();
    let ring = b.ring();
    let mut t = LinearTemplate::new(ring);
    if let BackendKind::EndoTwist { phi, .. } = b.kind() {
        t = t.with_twist(phi.clone());
    }
    let u: Vec<usize> = (0..n).map(|j| t.add_unknown(y.object(j).rank(), x.object(j).rank())).collect();
    for j in 0..n {
        let next = (j + 1) % n;
        let tgt = y.object_ext(j + 1).rank();
        let terms = vec![
            Term { left: Matrix::identity(ring, tgt), unknown: u[next], right: x.diff(j).clone(), twisted: j + 1 == n },
            Term { left: y.diff(j).neg(), unknown: u[j], right: Matrix::identity(ring, x.object(j).rank()), twisted: false },
        ];
        t.add_equation(terms, Matrix::zeros(ring, tgt, x.object(j).rank()))?;
    }
    Ok((t, u))
}

/// Solves a morphism template extended by the caller; the solution is
/// projected to homogeneous parts on graded backends.
pub fn solve_morphism(
    x: &NFactorization,
    y: &NFactorization,
    t: &LinearTemplate,
    u: &[usize],
    bound: i64,
) -> Result<Option<FactMorphism>> {
    let Some(sol) = bounded_poly_solve(t, bound)? else {
        return Ok(None);
    };
    let b = x.backend();
    let comps = u
        .iter()
        .enumerate()
        .map(|(j, &k)| homogeneous_part(b, &sol[k], x.object(j), y.object(j)))
        .collect();
    Ok(Some(FactMorphism::unchecked(x, y, comps)))
}

/// A basis of the morphisms `x -> y` whose entries have degree `<= bound`.
/// On graded backends only the homogeneous basis elements are kept (the
/// equations are homogeneous, so the homogeneous parts of a solution solve
/// them too).
pub fn hom_space(x: &NFactorization, y: &NFactorization, bound: i64) -> Result<Vec<FactMorphism>> {
    let b = x.backend();
    let (t, _) = morphism_template(x, y)?;
    let space = solution_space(&t, bound)?.expect("zero is a solution");
    let mut basis = Vec::new();
    for v in space.basis {
        let comps: Vec<Matrix> = if b.is_graded() {
            v.iter().enumerate().map(|(j, m)| homogeneous_part(b, m, x.object(j), y.object(j))).collect()
        } else {
            v
        };
        if comps.iter().all(Matrix::is_zero) {
            continue;
        }
        basis.push(FactMorphism::unchecked(x, y, comps));
    }
    Ok(basis)
}

/// Terms of each entry with the degree a homogeneous map `src -> tgt` needs.
pub(crate) fn homogeneous_part(b: &Backend, m: &Matrix, src: &ObjectHandle, tgt: &ObjectHandle) -> Matrix {
    let BackendKind::GradedShift { weights, .. } = b.kind() else {
        return m.clone();
    };
    let (sd, td) = (src.degrees().unwrap_or(&[]), tgt.degrees().unwrap_or(&[]));
    Matrix::from_fn(b.ring(), m.rows(), m.cols(), |i, k| {
        let want = td[i] - sd[k];
        Polynomial::from_terms(
            b.ring(),
            m.get(i, k)
                .terms()
                .filter(|(mo, _)| mo.weighted_degree(weights) == want)
                .map(|(mo, c)| (mo.clone(), c.clone())),
        )
    })
}

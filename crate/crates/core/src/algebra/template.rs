//! Degree-bounded linear solving over a polynomial ring.
//!
//! A template is a system `sum_t L_t * U_t * R_t = B` (optionally with a ring
//! endomorphism applied to some `U_t`) in unknown polynomial matrices. Each
//! unknown entry is expanded in the monomials of degree `<= bound`, which
//! turns the system into a finite scalar one.

use std::collections::{BTreeMap, HashMap};

use super::linsolve::{sparse_solve, SparseRow};
use super::matrix::Matrix;
use super::poly::{same_ring, Monomial, Polynomial, RingMap, RingRef};
use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Term {
    pub left: Matrix,
    pub unknown: usize,
    pub right: Matrix,
    /// Apply the template's endomorphism to the unknown before multiplying.
    pub twisted: bool,
}

#[derive(Clone, Debug)]
pub struct Equation {
    pub terms: Vec<Term>,
    pub rhs: Matrix,
}

#[derive(Clone, Debug)]
pub struct LinearTemplate {
    ring: RingRef,
    unknowns: Vec<(usize, usize)>,
    equations: Vec<Equation>,
    twist: Option<RingMap>,
}

/// An affine solution space `particular + span(basis)`.
#[derive(Clone, Debug)]
pub struct SolutionSpace {
    pub particular: Vec<Matrix>,
    pub basis: Vec<Vec<Matrix>>,
}

impl LinearTemplate {
    pub fn new(ring: &RingRef) -> Self {
        LinearTemplate { ring: ring.clone(), unknowns: Vec::new(), equations: Vec::new(), twist: None }
    }

    pub fn with_twist(mut self, phi: RingMap) -> Self {
        self.twist = Some(phi);
        self
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn unknowns(&self) -> &[(usize, usize)] {
        &self.unknowns
    }

    pub fn add_unknown(&mut self, rows: usize, cols: usize) -> usize {
        self.unknowns.push((rows, cols));
        self.unknowns.len() - 1
    }

    /// Adds `sum terms = rhs`, checking every shape.
    pub fn add_equation(&mut self, terms: Vec<Term>, rhs: Matrix) -> Result<()> {
        if !same_ring(rhs.ring(), &self.ring) {
            return Err(Error::RingMismatch("template rhs in another ring".into()));
        }
        for (t_idx, t) in terms.iter().enumerate() {
            let &(ur, uc) = self
                .unknowns
                .get(t.unknown)
                .ok_or_else(|| Error::Dimension(format!("term {t_idx} names unknown {} which does not exist", t.unknown)))?;
            let ok = t.left.rows() == rhs.rows()
                && t.left.cols() == ur
                && t.right.rows() == uc
                && t.right.cols() == rhs.cols();
            if !ok {
                return Err(Error::Dimension(format!(
                    "term {t_idx}: {}x{} * U{}[{ur}x{uc}] * {}x{} does not yield {}x{}",
                    t.left.rows(),
                    t.left.cols(),
                    t.unknown,
                    t.right.rows(),
                    t.right.cols(),
                    rhs.rows(),
                    rhs.cols()
                )));
            }
            if !same_ring(t.left.ring(), &self.ring) || !same_ring(t.right.ring(), &self.ring) {
                return Err(Error::RingMismatch("template coefficient in another ring".into()));
            }
        }
        self.equations.push(Equation { terms, rhs });
        Ok(())
    }

    /// Evaluates `sum terms - rhs` for each equation at the given assignment.
    pub fn residuals(&self, values: &[Matrix]) -> Vec<Matrix> {
        self.equations
            .iter()
            .map(|eq| {
                let mut acc = eq.rhs.neg();
                for t in &eq.terms {
                    let u = if t.twisted { self.twist_matrix(&values[t.unknown]) } else { values[t.unknown].clone() };
                    acc = &acc + &(&(&t.left * &u) * &t.right);
                }
                acc
            })
            .collect()
    }

    fn twist_matrix(&self, m: &Matrix) -> Matrix {
        match &self.twist {
            Some(phi) => m.apply_map(phi),
            None => m.clone(),
        }
    }

    fn twist_poly(&self, p: &Polynomial) -> Polynomial {
        match &self.twist {
            Some(phi) => phi.apply(p),
            None => p.clone(),
        }
    }
}

/// Unknown entries of degree `<= bound` solving the template, or `None` if no
/// such assignment exists (a solution of higher degree may still exist).
pub fn bounded_poly_solve(t: &LinearTemplate, bound: i64) -> Result<Option<Vec<Matrix>>> {
    Ok(solution_space(t, bound)?.map(|s| s.particular))
}

/// The full affine space of bounded solutions.
pub fn solution_space(t: &LinearTemplate, bound: i64) -> Result<Option<SolutionSpace>> {
    if bound < 0 {
        return Err(Error::NegativeBound(bound));
    }
    let bound = bound as u32;
    let ring = &t.ring;
    let field = ring.field();
    let monos = ring.monomials_up_to(bound);
    let twisted_monos: Vec<Polynomial> = monos
        .iter()
        .map(|m| t.twist_poly(&Polynomial::monomial(ring, field.one(), m.clone())))
        .collect();
    let plain_monos: Vec<Polynomial> =
        monos.iter().map(|m| Polynomial::monomial(ring, field.one(), m.clone())).collect();

    // column layout: unknown, then entry (a, b) row-major, then monomial
    let mut offsets = Vec::with_capacity(t.unknowns.len());
    let mut ncols = 0;
    for &(r, c) in &t.unknowns {
        offsets.push(ncols);
        ncols += r * c * monos.len();
    }

    let mut row_index: HashMap<(usize, usize, usize, Monomial), usize> = HashMap::new();
    let mut rows: Vec<BTreeMap<usize, Scalar>> = Vec::new();
    let mut push = |key: (usize, usize, usize, Monomial), col: usize, v: &Scalar, rows: &mut Vec<BTreeMap<usize, Scalar>>| {
        let r = *row_index.entry(key).or_insert_with(|| {
            rows.push(BTreeMap::new());
            rows.len() - 1
        });
        let slot = rows[r].entry(col).or_insert_with(|| field.zero());
        *slot = &*slot + v;
    };

    for (e, eq) in t.equations.iter().enumerate() {
        for term in &eq.terms {
            let (_, uc) = t.unknowns[term.unknown];
            let mono_polys = if term.twisted { &twisted_monos } else { &plain_monos };
            for a in 0..term.left.cols() {
                let left_col: Vec<(usize, &Polynomial)> =
                    (0..term.left.rows()).map(|i| (i, term.left.get(i, a))).filter(|(_, p)| !p.is_zero()).collect();
                if left_col.is_empty() {
                    continue;
                }
                for b in 0..term.right.rows() {
                    let right_row: Vec<(usize, &Polynomial)> = (0..term.right.cols())
                        .map(|k| (k, term.right.get(b, k)))
                        .filter(|(_, p)| !p.is_zero())
                        .collect();
                    if right_row.is_empty() {
                        continue;
                    }
                    for (mi, mp) in mono_polys.iter().enumerate() {
                        let col = offsets[term.unknown] + (a * uc + b) * monos.len() + mi;
                        for &(i, l) in &left_col {
                            let lm = l * mp;
                            for &(k, r) in &right_row {
                                let prod = &lm * r;
                                for (m, c) in prod.terms() {
                                    push((e, i, k, m.clone()), col, c, &mut rows);
                                }
                            }
                        }
                    }
                }
            }
        }
        for i in 0..eq.rhs.rows() {
            for k in 0..eq.rhs.cols() {
                for (m, c) in eq.rhs.get(i, k).terms() {
                    push((e, i, k, m.clone()), ncols, c, &mut rows);
                }
            }
        }
    }

    let sparse: Vec<SparseRow> = rows
        .into_iter()
        .map(|r| r.into_iter().filter(|(_, v)| !v.is_zero()).collect())
        .collect();
    let sol = sparse_solve(field, sparse, ncols, 1);
    let Some(particular) = sol.particular else {
        return Ok(None);
    };
    let assemble = |vec: &SparseRow| -> Vec<Matrix> {
        let mut out: Vec<Matrix> = t.unknowns.iter().map(|&(r, c)| Matrix::zeros(ring, r, c)).collect();
        for (col, v) in vec {
            let u = offsets.partition_point(|&o| o <= *col) - 1;
            let local = col - offsets[u];
            let (_, uc) = t.unknowns[u];
            let entry = local / monos.len();
            let mi = local % monos.len();
            let (a, b) = (entry / uc, entry % uc);
            let add = Polynomial::monomial(ring, v.clone(), monos[mi].clone());
            let cur = out[u].get(a, b).clone();
            out[u].set(a, b, &cur + &add);
        }
        out
    };
    Ok(Some(SolutionSpace {
        particular: assemble(&particular[0]),
        basis: sol.nullspace.iter().map(assemble).collect(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;
    use crate::algebra::poly::Ring;
    use crate::algebra::scalar::Field;

    fn qx() -> RingRef {
        Ring::new(Field::Rational, vec!["x".into()]).unwrap()
    }

    fn one_unknown(r: &RingRef, rhs: &str) -> LinearTemplate {
        let mut t = LinearTemplate::new(r);
        let u = t.add_unknown(1, 1);
        let one = Matrix::identity(r, 1);
        let rhs = Matrix::from_rows(r, vec![vec![parse_poly(rhs, r).unwrap()]], 1).unwrap();
        t.add_equation(vec![Term { left: one.clone(), unknown: u, right: one, twisted: false }], rhs).unwrap();
        t
    }

    #[test]
    fn forced_solution() {
        let r = qx();
        let t = one_unknown(&r, "x^2");
        let sol = bounded_poly_solve(&t, 2).unwrap().unwrap();
        assert_eq!(sol[0].get(0, 0).to_string(), "x^2");
    }

    #[test]
    fn degree_obstruction() {
        let r = qx();
        assert!(bounded_poly_solve(&one_unknown(&r, "x^2"), 1).unwrap().is_none());
        assert!(matches!(bounded_poly_solve(&one_unknown(&r, "x^2"), -1), Err(Error::NegativeBound(-1))));
    }

    #[test]
    fn twisted_terms_use_the_endomorphism() {
        let r = qx();
        let x = Polynomial::var(&r, 0);
        let phi = RingMap::new(&r, vec![&x * &x]).unwrap();
        let mut t = LinearTemplate::new(&r).with_twist(phi);
        let u = t.add_unknown(1, 1);
        let one = Matrix::identity(&r, 1);
        let rhs = Matrix::from_rows(&r, vec![vec![parse_poly("x^4 + 1", &r).unwrap()]], 1).unwrap();
        t.add_equation(vec![Term { left: one.clone(), unknown: u, right: one, twisted: true }], rhs).unwrap();
        let sol = bounded_poly_solve(&t, 2).unwrap().unwrap();
        assert_eq!(sol[0].get(0, 0).to_string(), "x^2 + 1");
        assert!(t.residuals(&sol).iter().all(Matrix::is_zero));
    }

    #[test]
    fn shape_errors() {
        let r = qx();
        let mut t = LinearTemplate::new(&r);
        let u = t.add_unknown(2, 1);
        let res = t.add_equation(
            vec![Term { left: Matrix::identity(&r, 1), unknown: u, right: Matrix::identity(&r, 1), twisted: false }],
            Matrix::zeros(&r, 1, 1),
        );
        assert!(matches!(res, Err(Error::Dimension(_))));
    }
}

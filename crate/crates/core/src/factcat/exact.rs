//! Componentwise kernels and cokernels, the exact structure of componentwise
//! split sequences, and pullbacks/pushouts along deflations/inflations.
//! Implemented over field backends only, where all of this is exact linear
//! algebra.

use serde_json::{json, Value};

use super::fact::NFactorization;
use super::morphism::FactMorphism;
use super::sum::{column_morphism, direct_sum, row_morphism};
use crate::algebra::{field_solve, Matrix, ScalarMatrix};
use crate::ambient::Backend;
use crate::error::{Error, Result};
use crate::report::Report;

pub(crate) fn require_field(b: &Backend, what: &str) -> Result<()> {
    if b.is_field() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("{what} needs a field-scalar backend, got {}", b.kind_name())))
    }
}

fn scalars(m: &Matrix) -> ScalarMatrix {
    m.to_scalars().expect("field backends have constant entries")
}

/// Columns of the returned matrix form a basis of `ker m`.
fn kernel_basis(m: &Matrix) -> Matrix {
    let s = scalars(m);
    let sol = field_solve(&s, &ScalarMatrix::zeros(s.field(), s.rows(), 1)).expect("shapes agree");
    let mut out = Matrix::zeros(m.ring(), m.cols(), sol.nullspace.len());
    for (c, v) in sol.nullspace.iter().enumerate() {
        for r in 0..m.cols() {
            out.set(r, c, crate::algebra::Polynomial::constant(m.ring(), v.get(r, 0).clone()));
        }
    }
    out
}

/// Unique `x` with `a x = b` where `a` is injective; `None` if unsolvable.
fn solve_left(a: &Matrix, b: &Matrix) -> Option<(Matrix, bool)> {
    let sol = field_solve(&scalars(a), &scalars(b)).expect("shapes agree");
    let unique = sol.nullspace.is_empty();
    sol.particular.map(|x| (Matrix::from_scalars(a.ring(), &x), unique))
}

/// Solves `x a = b`.
fn solve_right(a: &Matrix, b: &Matrix) -> Option<(Matrix, bool)> {
    solve_left(&a.transpose(), &b.transpose()).map(|(x, u)| (x.transpose(), u))
}

pub fn rank(m: &Matrix) -> usize {
    scalars(m).rank()
}

pub fn is_injective(m: &Matrix) -> bool {
    rank(m) == m.cols()
}

pub fn is_surjective(m: &Matrix) -> bool {
    rank(m) == m.rows()
}

/// A factorization through a universal morphism.
#[derive(Clone, Debug)]
pub struct Factored {
    pub h: FactMorphism,
    pub unique: bool,
}

#[derive(Clone, Debug)]
pub struct Kernel {
    pub k: FactMorphism,
    f: FactMorphism,
}

impl Kernel {
    pub fn object(&self) -> &NFactorization {
        self.k.source()
    }

    /// The `h` with `k h = g`, for `g` with `f g = 0`.
    pub fn factor(&self, g: &FactMorphism) -> Result<Factored> {
        if g.target() != self.k.target() {
            return Err(Error::Incompatible("test morphism does not land in the source of f".into()));
        }
        if !FactMorphism::compose(&self.f, g)?.is_zero() {
            return Err(Error::Precondition("f . g is not zero".into()));
        }
        let mut comps = Vec::new();
        let mut unique = true;
        for j in 0..g.n() {
            let (h, u) = solve_left(self.k.comp(j), g.comp(j))
                .ok_or_else(|| Error::Precondition(format!("g^{j} does not factor through ker f^{j}")))?;
            unique &= u;
            comps.push(h);
        }
        Ok(Factored { h: FactMorphism::new(g.source(), self.object(), comps)?, unique })
    }
}

/// Componentwise kernel; induced differentials are the unique solutions of
/// `k^{j+1} d_K^j = d_X^j k^j`.
pub fn kernel(f: &FactMorphism) -> Result<Kernel> {
    let b = f.backend();
    require_field(b, "kernel")?;
    let x = f.source();
    let n = f.n();
    let ks: Vec<Matrix> = f.comps().iter().map(kernel_basis).collect();
    let mut diffs = Vec::with_capacity(n);
    for j in 0..n {
        let next = b.t(&ks[(j + 1) % n]);
        let rhs = x.diff(j) * &ks[j];
        let (d, _) = solve_left(&next, &rhs).expect("differential restricts to kernels");
        diffs.push(d);
    }
    let objects = ks.iter().map(|k| b.object(k.cols())).collect();
    let kobj = NFactorization::new(b, objects, diffs)?;
    let k = FactMorphism::new(&kobj, x, ks)?;
    Ok(Kernel { k, f: f.clone() })
}

#[derive(Clone, Debug)]
pub struct Cokernel {
    pub q: FactMorphism,
    f: FactMorphism,
}

impl Cokernel {
    pub fn object(&self) -> &NFactorization {
        self.q.target()
    }

    /// The `h` with `h q = g`, for `g` with `g f = 0`.
    pub fn factor(&self, g: &FactMorphism) -> Result<Factored> {
        if g.source() != self.q.source() {
            return Err(Error::Incompatible("test morphism does not start at the target of f".into()));
        }
        if !FactMorphism::compose(g, &self.f)?.is_zero() {
            return Err(Error::Precondition("g . f is not zero".into()));
        }
        let mut comps = Vec::new();
        let mut unique = true;
        for j in 0..g.n() {
            let (h, u) = solve_right(self.q.comp(j), g.comp(j))
                .ok_or_else(|| Error::Precondition(format!("g^{j} does not factor through coker f^{j}")))?;
            unique &= u;
            comps.push(h);
        }
        Ok(Factored { h: FactMorphism::new(self.object(), g.target(), comps)?, unique })
    }
}

/// Componentwise cokernel, dual to [`kernel`].
pub fn cokernel(f: &FactMorphism) -> Result<Cokernel> {
    let b = f.backend();
    require_field(b, "cokernel")?;
    let y = f.target();
    let n = f.n();
    // q^j: rows spanning the left nullspace of phi^j
    let qs: Vec<Matrix> = f.comps().iter().map(|m| kernel_basis(&m.transpose()).transpose()).collect();
    let mut diffs = Vec::with_capacity(n);
    for j in 0..n {
        let next = b.t(&qs[(j + 1) % n]);
        let rhs = &next * y.diff(j);
        let (d, _) = solve_right(&qs[j], &rhs).expect("differential descends to cokernels");
        diffs.push(d);
    }
    let objects = qs.iter().map(|q| b.object(q.rows())).collect();
    let qobj = NFactorization::new(b, objects, diffs)?;
    let q = FactMorphism::new(y, &qobj, qs)?;
    Ok(Cokernel { q, f: f.clone() })
}

/// A composable pair `l, p`.
#[derive(Clone, Debug)]
pub struct Conflation {
    pub l: FactMorphism,
    pub p: FactMorphism,
}

impl Conflation {
    pub fn new(l: FactMorphism, p: FactMorphism) -> Result<Self> {
        if l.target() != p.source() {
            return Err(Error::Incompatible("conflation: target of l is not the source of p".into()));
        }
        Ok(Conflation { l, p })
    }
}

/// Per component: `l` injective, `p` surjective, `im l = ker p`.
pub fn is_conflation(c: &Conflation) -> Result<Report> {
    require_field(c.l.backend(), "conflation test")?;
    let mut report = Report::new();
    for j in 0..c.l.n() {
        let (l, p) = (c.l.comp(j), c.p.comp(j));
        let inj = is_injective(l);
        let surj = is_surjective(p);
        let zero = (p * l).is_zero();
        let exact = zero && rank(l) == p.cols() - rank(p);
        let pass = inj && surj && exact;
        let detail = if pass {
            Value::Null
        } else {
            json!({ "l_injective": inj, "p_surjective": surj, "p_l_zero": zero, "image_is_kernel": exact })
        };
        report.push(format!("component[{j}]"), pass, detail);
    }
    Ok(report)
}

pub fn is_deflation(p: &FactMorphism) -> Result<bool> {
    require_field(p.backend(), "deflation test")?;
    Ok(p.comps().iter().all(is_surjective))
}

pub fn is_inflation(l: &FactMorphism) -> Result<bool> {
    require_field(l.backend(), "inflation test")?;
    Ok(l.comps().iter().all(is_injective))
}

/// Per-component surjectivity report.
pub fn surjectivity_report(p: &FactMorphism) -> Report {
    let mut r = Report::new();
    for (j, m) in p.comps().iter().enumerate() {
        let (rk, rows) = (rank(m), m.rows());
        let detail = if rk == rows { Value::Null } else { json!({ "rank": rk, "target_rank": rows }) };
        r.push(format!("surjective[{j}]"), rk == rows, detail);
    }
    r
}

pub fn injectivity_report(l: &FactMorphism) -> Report {
    let mut r = Report::new();
    for (j, m) in l.comps().iter().enumerate() {
        let (rk, cols) = (rank(m), m.cols());
        let detail = if rk == cols { Value::Null } else { json!({ "rank": rk, "source_rank": cols }) };
        r.push(format!("injective[{j}]"), rk == cols, detail);
    }
    r
}

#[derive(Clone, Debug)]
pub struct Pullback {
    /// `Y1 -> Z`, a deflation.
    pub p1: FactMorphism,
    /// `Y1 -> X`.
    pub f1: FactMorphism,
    pub report: Report,
    kernel: Kernel,
    p: FactMorphism,
    f: FactMorphism,
}

impl Pullback {
    pub fn object(&self) -> &NFactorization {
        self.p1.source()
    }

    /// The `h: W -> Y1` with `f1 h = u`, `p1 h = v`, given `p u = f v`.
    pub fn factor(&self, u: &FactMorphism, v: &FactMorphism) -> Result<Factored> {
        let lhs = FactMorphism::compose(&self.p, u)?;
        let rhs = FactMorphism::compose(&self.f, v)?;
        if !lhs.same_comps(&rhs) {
            return Err(Error::Precondition("p . u != f . v".into()));
        }
        let g = column_morphism(u, v, self.kernel.k.target());
        self.kernel.factor(&g)
    }
}

/// Pullback of the deflation `p: X -> Y` along `f: Z -> Y`.
pub fn pullback_deflation(p: &FactMorphism, f: &FactMorphism) -> Result<Pullback> {
    require_field(p.backend(), "pullback")?;
    if p.target() != f.target() {
        return Err(Error::Incompatible("p and f must share a target".into()));
    }
    if !is_deflation(p)? {
        return Err(Error::Precondition("p is not a deflation".into()));
    }
    let s = direct_sum(p.source(), f.source())?;
    let m = row_morphism(p, &f.neg(), &s.sum);
    let kernel = kernel(&m)?;
    let f1 = FactMorphism::compose(&s.proj1, &kernel.k)?;
    let p1 = FactMorphism::compose(&s.proj2, &kernel.k)?;
    let mut report = Report::new();
    report.push("object_valid", kernel.object().validate().all_pass(), Value::Null);
    let square = FactMorphism::compose(p, &f1)?.same_comps(&FactMorphism::compose(f, &p1)?);
    report.push("square_commutes", square, Value::Null);
    report.push("p1_deflation", is_deflation(&p1)?, Value::Null);
    report.push("joint_injective", is_inflation(&kernel.k)?, Value::Null);
    Ok(Pullback { p1, f1, report, kernel, p: p.clone(), f: f.clone() })
}

#[derive(Clone, Debug)]
pub struct Pushout {
    /// `Z -> Y1`, an inflation.
    pub l1: FactMorphism,
    /// `Y -> Y1`.
    pub f1: FactMorphism,
    pub report: Report,
    cokernel: Cokernel,
    l: FactMorphism,
    f: FactMorphism,
}

impl Pushout {
    pub fn object(&self) -> &NFactorization {
        self.l1.target()
    }

    /// The `h: Y1 -> W` with `h f1 = u`, `h l1 = v`, given `u l = v f`.
    pub fn factor(&self, u: &FactMorphism, v: &FactMorphism) -> Result<Factored> {
        let lhs = FactMorphism::compose(u, &self.l)?;
        let rhs = FactMorphism::compose(v, &self.f)?;
        if !lhs.same_comps(&rhs) {
            return Err(Error::Precondition("u . l != v . f".into()));
        }
        let g = row_morphism(u, v, self.cokernel.q.source());
        self.cokernel.factor(&g)
    }
}

/// Pushout of the inflation `l: X -> Y` along `f: X -> Z`.
pub fn pushout_inflation(l: &FactMorphism, f: &FactMorphism) -> Result<Pushout> {
    require_field(l.backend(), "pushout")?;
    if l.source() != f.source() {
        return Err(Error::Incompatible("l and f must share a source".into()));
    }
    if !is_inflation(l)? {
        return Err(Error::Precondition("l is not an inflation".into()));
    }
    let s = direct_sum(l.target(), f.target())?;
    let m = column_morphism(l, &f.neg(), &s.sum);
    let cokernel = cokernel(&m)?;
    let f1 = FactMorphism::compose(&cokernel.q, &s.inj1)?;
    let l1 = FactMorphism::compose(&cokernel.q, &s.inj2)?;
    let mut report = Report::new();
    report.push("object_valid", cokernel.object().validate().all_pass(), Value::Null);
    let square = FactMorphism::compose(&f1, l)?.same_comps(&FactMorphism::compose(&l1, f)?);
    report.push("square_commutes", square, Value::Null);
    report.push("l1_inflation", is_inflation(&l1)?, Value::Null);
    report.push("joint_surjective", is_deflation(&cokernel.q)?, Value::Null);
    Ok(Pushout { l1, f1, report, cokernel, l: l.clone(), f: f.clone() })
}

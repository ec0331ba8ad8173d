//! Homotopies between parallel morphisms: verification, bounded search,
//! contractibility, and witnesses for the operations on homotopy classes.

use serde_json::{json, Value};

use crate::algebra::{bounded_poly_solve, LinearTemplate, Matrix, Term};
use crate::ambient::{Backend, BackendKind, ObjectHandle};
use crate::error::{Error, Result};
use crate::factcat::hom::homogeneous_part;
use crate::factcat::{random_chain, random_factorization, random_morphism, FactMorphism, NFactorization};
use crate::frobenius::adjoint::{left_forward, right_forward};
use crate::frobenius::theta0;
use crate::parallel::{run_samples, Execution};
use crate::random;
use crate::report::{Report, Verdict};

/// Diagonal maps `s^j: X^{j+1} -> Y^j` exhibiting `f ~ g`.
#[derive(Clone, Debug)]
pub struct Homotopy {
    pub f: FactMorphism,
    pub g: FactMorphism,
    pub diag: Vec<Matrix>,
}

impl Homotopy {
    /// Shape-checked construction; use [`verify`](Self::verify) for the
    /// equations.
    pub fn new(f: &FactMorphism, g: &FactMorphism, diag: Vec<Matrix>) -> Result<Self> {
        check_parallel(f, g)?;
        let (x, y) = (f.source(), f.target());
        if diag.len() != x.n() {
            return Err(Error::Dimension(format!("{} diagonal maps for n = {}", diag.len(), x.n())));
        }
        for (j, s) in diag.iter().enumerate() {
            let want = (y.object(j).rank(), x.object_ext(j + 1).rank());
            if s.shape() != want {
                return Err(Error::Dimension(format!(
                    "s^{j} is {}x{}, expected {}x{}",
                    s.rows(),
                    s.cols(),
                    want.0,
                    want.1
                )));
            }
        }
        Ok(Homotopy { f: f.clone(), g: g.clone(), diag })
    }

    pub(crate) fn unchecked(f: &FactMorphism, g: &FactMorphism, diag: Vec<Matrix>) -> Self {
        Homotopy { f: f.clone(), g: g.clone(), diag }
    }

    /// `f ~ f` with `s = 0`.
    pub fn reflexive(f: &FactMorphism) -> Self {
        let (x, y) = (f.source(), f.target());
        let b = x.backend();
        let diag = (0..x.n()).map(|j| b.zero(&x.object_ext(j + 1), y.object(j))).collect();
        Homotopy::unchecked(f, f, diag)
    }

    /// `g ~ f` from `f ~ g`.
    pub fn symmetric(&self) -> Self {
        Homotopy::unchecked(&self.g, &self.f, self.diag.iter().map(Matrix::neg).collect())
    }

    /// `f ~ h` from `f ~ g` and `g ~ h`.
    pub fn transitive(&self, other: &Homotopy) -> Result<Self> {
        if !self.g.same_comps(&other.f) {
            return Err(Error::Incompatible("homotopies do not chain".into()));
        }
        Ok(Homotopy::unchecked(&self.f, &other.g, add_all(&self.diag, &other.diag)))
    }

    /// `f1 + f2 ~ g1 + g2` with witness `s + t`.
    pub fn sum(&self, other: &Homotopy) -> Result<Self> {
        Ok(Homotopy::unchecked(&self.f.add(&other.f)?, &self.g.add(&other.g)?, add_all(&self.diag, &other.diag)))
    }

    /// `u f ~ u g` with witness `(u s)^j = u^j s^j`.
    pub fn post(&self, u: &FactMorphism) -> Result<Self> {
        let diag = self.diag.iter().enumerate().map(|(j, s)| u.comp(j) * s).collect();
        Ok(Homotopy::unchecked(&FactMorphism::compose(u, &self.f)?, &FactMorphism::compose(u, &self.g)?, diag))
    }

    /// `f v ~ g v` with witness `(s v)^j = s^j v^{j+1}`, last `s^{n-1} T(v^0)`.
    pub fn pre(&self, v: &FactMorphism) -> Result<Self> {
        let diag = self.diag.iter().enumerate().map(|(j, s)| s * &v.comp_ext(j + 1)).collect();
        Ok(Homotopy::unchecked(&FactMorphism::compose(&self.f, v)?, &FactMorphism::compose(&self.g, v)?, diag))
    }

    /// `q1 f1 ~ q2 f2` from `f1 ~ f2` (self) and `q1 ~ q2`:
    /// `q1 f1 - q2 f2 = q1 (f1 - f2) + (q1 - q2) f2`.
    pub fn compose(&self, q: &Homotopy) -> Result<Self> {
        let left = self.post(&q.f)?;
        let right = q.pre(&self.g)?;
        Ok(Homotopy::unchecked(&left.f, &right.g, add_all(&left.diag, &right.diag)))
    }

    pub fn verify(&self) -> Report {
        verify_homotopy(self)
    }

    pub fn to_json(&self, f: &str, g: &str) -> Value {
        let s: Vec<_> = self.diag.iter().map(Matrix::row_strings).collect();
        json!({ "f": f, "g": g, "s": s })
    }
}

fn add_all(a: &[Matrix], b: &[Matrix]) -> Vec<Matrix> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn check_parallel(f: &FactMorphism, g: &FactMorphism) -> Result<()> {
    if f.source() != g.source() || f.target() != g.target() {
        return Err(Error::Incompatible("f and g are not parallel".into()));
    }
    Ok(())
}

/// `T(f^0 - g^0) = d_Y^{n-1} s^{n-1} + T(s^0 d_X^0)` and, for `j >= 1`,
/// `f^j - g^j = d_Y^{j-1} s^{j-1} + s^j d_X^j`.
pub fn verify_homotopy(h: &Homotopy) -> Report {
    let (x, y) = (h.f.source(), h.f.target());
    let b = x.backend();
    let n = x.n();
    let mut report = Report::new();
    for j in 0..n {
        let (lhs, rhs) = if j == 0 {
            let lhs = b.t(&(h.f.comp(0) - h.g.comp(0)));
            let rhs = &(y.diff(n - 1) * &h.diag[n - 1]) + &b.t(&(&h.diag[0] * x.diff(0)));
            (lhs, rhs)
        } else {
            let lhs = h.f.comp(j) - h.g.comp(j);
            let rhs = &(y.diff(j - 1) * &h.diag[j - 1]) + &(&h.diag[j] * x.diff(j));
            (lhs, rhs)
        };
        let pass = lhs == rhs;
        let detail = if pass { Value::Null } else { json!({ "f-g": lhs.row_strings(), "ds+sd": rhs.row_strings() }) };
        report.push(format!("index[{j}]"), pass, detail);
    }
    report
}

/// Largest entry degree among `f`, `g` and all differentials, plus `deg w`.
pub fn default_bound(f: &FactMorphism, g: &FactMorphism) -> i64 {
    let (x, y) = (f.source(), f.target());
    let mats = f.comps().iter().chain(g.comps()).chain(x.diffs()).chain(y.diffs());
    let m = mats.map(Matrix::max_degree).max().unwrap_or(0);
    (m + f.backend().w_degree()) as i64
}

fn homotopy_template(f: &FactMorphism, g: &FactMorphism) -> Result<LinearTemplate> {
    let (x, y) = (f.source(), f.target());
    let b = x.backend();
    let ring = b.ring();
    let n = x.n();
    let mut t = LinearTemplate::new(ring);
    if let BackendKind::EndoTwist { phi, .. } = b.kind() {
        t = t.with_twist(phi.clone());
    }
    for j in 0..n {
        t.add_unknown(y.object(j).rank(), x.object_ext(j + 1).rank());
    }
    // index 0, twisted: T(f0 - g0) = d_Y^{n-1} s^{n-1} + T(s^0) T(d_X^0)
    let ty0 = y.object_ext(n).rank();
    t.add_equation(
        vec![
            Term { left: y.diff(n - 1).clone(), unknown: n - 1, right: Matrix::identity(ring, x.object_ext(n).rank()), twisted: false },
            Term { left: Matrix::identity(ring, ty0), unknown: 0, right: b.t(x.diff(0)), twisted: true },
        ],
        b.t(&(f.comp(0) - g.comp(0))),
    )?;
    for j in 1..n {
        let yj = y.object(j).rank();
        let xj = x.object(j).rank();
        t.add_equation(
            vec![
                Term { left: y.diff(j - 1).clone(), unknown: j - 1, right: Matrix::identity(ring, xj), twisted: false },
                Term { left: Matrix::identity(ring, yj), unknown: j, right: x.diff(j).clone(), twisted: false },
            ],
            f.comp(j) - g.comp(j),
        )?;
    }
    Ok(t)
}

/// A witness with entries of degree `<= bound`, searched with increasing
/// degree. Over field backends the bound is irrelevant.
pub fn solve_homotopy(f: &FactMorphism, g: &FactMorphism, bound: i64) -> Result<Option<Homotopy>> {
    check_parallel(f, g)?;
    if bound < 0 {
        return Err(Error::NegativeBound(bound));
    }
    let b = f.backend();
    let top = if b.is_field() { 0 } else { bound };
    let t = homotopy_template(f, g)?;
    let (x, y) = (f.source(), f.target());
    for d in 0..=top {
        let Some(sol) = bounded_poly_solve(&t, d)? else {
            continue;
        };
        let diag: Vec<Matrix> = sol
            .iter()
            .enumerate()
            .map(|(j, s)| homogeneous_part(b, s, &x.object_ext(j + 1), y.object(j)))
            .collect();
        let h = Homotopy::unchecked(f, g, diag);
        if h.verify().all_pass() {
            return Ok(Some(h));
        }
    }
    Ok(None)
}

/// `id_X ~ 0`: true with a witness, false (definitive over fields), or
/// unknown when a bounded polynomial search fails.
pub fn is_contractible(x: &NFactorization, bound: i64) -> Result<(Verdict, Option<Homotopy>)> {
    let id = FactMorphism::identity(x);
    let zero = FactMorphism::zero(x, x)?;
    match solve_homotopy(&id, &zero, bound)? {
        Some(h) => Ok((Verdict::True, Some(h))),
        None if x.backend().is_field() => Ok((Verdict::False, None)),
        None => Ok((Verdict::Unknown, None)),
    }
}

/// `id ~ 0` on `theta^0(C)` for even `n`: `s^j = id` for even `j`, `0` for odd.
pub fn theta0_contraction(backend: &Backend, c: &ObjectHandle, n: usize) -> Result<Homotopy> {
    if n % 2 == 1 {
        return Err(Error::OddN(n));
    }
    let x = theta0(backend, c, n)?;
    let diag = (0..n).map(|j| if j % 2 == 0 { backend.id(c) } else { backend.zero(c, c) }).collect();
    Ok(Homotopy::unchecked(&FactMorphism::identity(&x), &FactMorphism::zero(&x, &x)?, diag))
}

/// A null-homotopic `k = v u: X -> theta^0(C) -> Y` with its witness `v s u`.
pub fn null_homotopic_through_theta(
    x: &NFactorization,
    y: &NFactorization,
    c: &ObjectHandle,
    rng: &mut random::Rng,
) -> Result<Homotopy> {
    let b = x.backend();
    let n = x.n();
    let g = b.random_matrix(x.object(n - 1), c, 1, rng);
    let h = b.random_matrix(c, y.object(0), 1, rng);
    let u = right_forward(x, c, 0, &g)?;
    let v = left_forward(y, c, 0, &h)?;
    let s = theta0_contraction(b, c, n)?;
    s.pre(&u)?.post(&v)
}

/// Random instances of: the equivalence-relation witnesses, the sum witness,
/// the composition witness and the ideal property of null-homotopic maps.
pub fn homotopy_classes_respect_ops(
    backend: &Backend,
    n: usize,
    seed: u64,
    samples: usize,
    exec: Execution,
) -> Result<Report> {
    if n % 2 == 1 {
        return Err(Error::OddN(n));
    }
    run_samples(exec, seed, samples, |s| {
        let mut rng = random::rng(s);
        let chain = random_chain(backend, n, 2, 2, random::mix(s))?;
        let (f1, q1) = (&chain[0], &chain[1]);
        let (x, y, z) = (f1.source(), f1.target(), q1.target());
        let f2 = random_morphism(x, y, random::mix(s ^ 1))?;
        let c = backend.random_object_of_rank(1, &mut rng);
        let null = |a: &NFactorization, b: &NFactorization, rng: &mut random::Rng| null_homotopic_through_theta(a, b, &c, rng);

        // g = f + k with k ~ 0 gives f ~ g via the negated witness of k
        let perturbed = |f: &FactMorphism, k: &Homotopy| -> Result<Homotopy> {
            let g = f.add(&k.f)?;
            Ok(Homotopy::unchecked(f, &g, k.diag.iter().map(Matrix::neg).collect()))
        };
        let k1 = null(x, y, &mut rng)?;
        let k2 = null(x, y, &mut rng)?;
        let k3 = null(y, z, &mut rng)?;
        let h1 = perturbed(f1, &k1)?;
        let h2 = perturbed(&f2, &k2)?;
        let hq = perturbed(q1, &k3)?;

        let mut r = Report::new();
        let mut check = |name: &str, h: Result<Homotopy>| -> Result<()> {
            let h = h?;
            let ok = h.f.validate().all_pass() && h.g.validate().all_pass() && h.verify().all_pass();
            r.push(name, ok, Value::Null);
            Ok(())
        };
        check("given.f1~g1", Ok(h1.clone()))?;
        check("given.f2~g2", Ok(h2.clone()))?;
        check("reflexive", Ok(Homotopy::reflexive(f1)))?;
        check("symmetric", Ok(h1.symmetric()))?;
        let back = perturbed(&h1.g, &null(x, y, &mut rng)?)?;
        check("transitive", h1.transitive(&back))?;
        check("sum", h1.sum(&h2))?;
        check("composite", h1.compose(&hq))?;
        let v = random_morphism(&random_factorization(backend, n, 2, random::mix(s ^ 2))?, x, random::mix(s ^ 3))?;
        let w = random_morphism(y, z, random::mix(s ^ 4))?;
        check("ideal", k1.pre(&v).and_then(|k| k.post(&w)))?;
        Ok(r)
    })
}

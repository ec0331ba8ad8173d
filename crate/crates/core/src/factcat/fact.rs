use std::sync::Arc;

use serde_json::json;

use crate::algebra::matrix::product;
use crate::algebra::Matrix;
use crate::ambient::{Backend, ObjectHandle};
use crate::error::{Error, Result};
use crate::report::Report;

#[derive(Debug, PartialEq)]
struct Inner {
    backend: Backend,
    objects: Vec<ObjectHandle>,
    diffs: Vec<Matrix>,
}

/// An n-fold factorization `X^0 -> X^1 -> ... -> X^{n-1} -> T(X^0)` of omega.
#[derive(Clone, Debug)]
pub struct NFactorization(Arc<Inner>);

impl PartialEq for NFactorization {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl NFactorization {
    /// Checks shapes and all `n` cyclic composites.
    pub fn new(backend: &Backend, objects: Vec<ObjectHandle>, diffs: Vec<Matrix>) -> Result<Self> {
        let x = Self::shaped(backend, objects, diffs)?;
        let report = x.validate();
        if report.all_pass() {
            Ok(x)
        } else {
            Err(Error::InvalidFactorization(Box::new(report)))
        }
    }

    /// Like [`new`](Self::new), with default objects of the implied ranks.
    pub fn from_diffs(backend: &Backend, diffs: Vec<Matrix>) -> Result<Self> {
        let objects = diffs.iter().map(|d| backend.object(d.cols())).collect();
        Self::new(backend, objects, diffs)
    }

    /// Shape-checked but not validated.
    pub fn shaped(backend: &Backend, objects: Vec<ObjectHandle>, diffs: Vec<Matrix>) -> Result<Self> {
        let n = objects.len();
        if n < 2 {
            return Err(Error::SmallN(n));
        }
        if diffs.len() != n {
            return Err(Error::Dimension(format!("{} objects but {} differentials", n, diffs.len())));
        }
        for o in &objects {
            backend.check_object(o)?;
        }
        for (j, d) in diffs.iter().enumerate() {
            if !crate::algebra::poly::same_ring(d.ring(), backend.ring()) {
                return Err(Error::RingMismatch(format!("d^{j} is not over the backend ring")));
            }
            let tgt = if j + 1 < n { objects[j + 1].rank() } else { objects[0].rank() };
            if d.shape() != (tgt, objects[j].rank()) {
                return Err(Error::Dimension(format!(
                    "d^{j} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    tgt,
                    objects[j].rank()
                )));
            }
        }
        Ok(Self::unchecked(backend, objects, diffs))
    }

    pub(crate) fn unchecked(backend: &Backend, objects: Vec<ObjectHandle>, diffs: Vec<Matrix>) -> Self {
        NFactorization(Arc::new(Inner { backend: backend.clone(), objects, diffs }))
    }

    pub fn zero(backend: &Backend, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::SmallN(n));
        }
        let z = backend.object(0);
        Ok(Self::unchecked(backend, vec![z.clone(); n], vec![backend.zero(&z, &z); n]))
    }

    pub fn backend(&self) -> &Backend {
        &self.0.backend
    }

    pub fn n(&self) -> usize {
        self.0.objects.len()
    }

    pub fn objects(&self) -> &[ObjectHandle] {
        &self.0.objects
    }

    pub fn object(&self, j: usize) -> &ObjectHandle {
        &self.0.objects[j]
    }

    pub fn diffs(&self) -> &[Matrix] {
        &self.0.diffs
    }

    pub fn diff(&self, j: usize) -> &Matrix {
        &self.0.diffs[j]
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.0.objects.iter().map(ObjectHandle::rank).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.0.objects.iter().all(ObjectHandle::is_zero)
    }

    /// `X^j` for any `j >= 0`, reading `X^{j+n}` as `T(X^j)`.
    pub fn object_ext(&self, j: usize) -> ObjectHandle {
        let n = self.n();
        self.backend().t_pow_obj(&self.0.objects[j % n], j / n)
    }

    /// `d^j` for any `j >= 0`, reading `d^{j+n}` as `T(d^j)`.
    pub fn diff_ext(&self, j: usize) -> Matrix {
        let n = self.n();
        self.backend().t_pow(&self.0.diffs[j % n], j / n)
    }

    /// `d^{hi-1} ... d^{lo}` in extended indices; identity when `hi == lo`.
    pub fn diff_chain(&self, lo: usize, hi: usize) -> Matrix {
        if hi == lo {
            return self.backend().id(&self.object_ext(lo));
        }
        let ms: Vec<Matrix> = (lo..hi).rev().map(|j| self.diff_ext(j)).collect();
        product(&ms).expect("nonempty chain")
    }

    /// The cyclic composite starting at `X^j`.
    pub fn composite(&self, j: usize) -> Matrix {
        self.diff_chain(j, j + self.n())
    }

    /// All `n` equalities `composite(j) = omega_{X^j}`.
    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        for j in 0..self.n() {
            let lhs = self.composite(j);
            let rhs = self.backend().omega(self.object(j));
            let pass = lhs == rhs;
            let detail = if pass {
                serde_json::Value::Null
            } else {
                json!({ "composite": lhs.row_strings(), "omega": rhs.row_strings() })
            };
            report.push(format!("composite[{j}]"), pass, detail);
        }
        report
    }

    /// Homogeneity of every differential (graded backends only).
    pub fn check_homogeneous(&self) -> Report {
        let mut report = Report::new();
        for j in 0..self.n() {
            let ok = self.backend().is_homogeneous(self.diff(j), self.object(j), &self.object_ext(j + 1));
            report.push(format!("homogeneous[{j}]"), ok, serde_json::Value::Null);
        }
        report
    }

    /// `S(X) = X^1 -> ... -> T(X^0) -> T(X^1)`.
    pub fn shift_s(&self) -> NFactorization {
        let n = self.n();
        Self::unchecked(
            self.backend(),
            (1..=n).map(|j| self.object_ext(j)).collect(),
            (1..=n).map(|j| self.diff_ext(j)).collect(),
        )
    }

    /// Differentials conjugated by node automorphisms `p[j]` (with inverses):
    /// `d'^j = p[j+1] d^j p[j]^-1`, where `p[n] = T(p[0])`.
    pub fn conjugate(&self, p: &[(Matrix, Matrix)]) -> NFactorization {
        let n = self.n();
        let diffs = (0..n)
            .map(|j| {
                let next = if j + 1 < n { p[j + 1].0.clone() } else { self.backend().t(&p[0].0) };
                &(&next * self.diff(j)) * &p[j].1
            })
            .collect();
        Self::unchecked(self.backend(), self.0.objects.clone(), diffs)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let d: Vec<_> = self.diffs().iter().map(Matrix::row_strings).collect();
        let mut v = json!({ "n": self.n(), "ranks": self.ranks(), "d": d });
        if self.backend().is_graded() {
            let degs: Vec<_> = self.objects().iter().map(|o| o.degrees().unwrap_or(&[]).to_vec()).collect();
            v["degrees"] = json!(degs);
        }
        v
    }
}

/// Validates raw data without constructing.
pub fn validate_factorization(backend: &Backend, objects: Vec<ObjectHandle>, diffs: Vec<Matrix>) -> Result<Report> {
    Ok(NFactorization::shaped(backend, objects, diffs)?.validate())
}

pub(crate) fn same_backend(a: &Backend, b: &Backend) -> bool {
    a == b
}

pub(crate) fn check_compatible(x: &NFactorization, y: &NFactorization) -> Result<()> {
    if !same_backend(x.backend(), y.backend()) {
        return Err(Error::Incompatible("factorizations over different backends".into()));
    }
    if x.n() != y.n() {
        return Err(Error::Incompatible(format!("n = {} vs n = {}", x.n(), y.n())));
    }
    Ok(())
}

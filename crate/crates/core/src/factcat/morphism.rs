use std::sync::Arc;

use serde_json::json;

use super::fact::{check_compatible, NFactorization};
use crate::algebra::{Matrix, Polynomial};
use crate::ambient::Backend;
use crate::error::{Error, Result};
use crate::report::Report;

#[derive(Debug, PartialEq)]
struct Inner {
    source: NFactorization,
    target: NFactorization,
    comps: Vec<Matrix>,
}

/// A levelwise morphism `phi = (phi^0, ..., phi^{n-1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct FactMorphism(Arc<Inner>);

impl FactMorphism {
    pub fn new(source: &NFactorization, target: &NFactorization, comps: Vec<Matrix>) -> Result<Self> {
        let f = Self::shaped(source, target, comps)?;
        let report = f.validate();
        if report.all_pass() {
            Ok(f)
        } else {
            Err(Error::InvalidMorphism(Box::new(report)))
        }
    }

    pub fn shaped(source: &NFactorization, target: &NFactorization, comps: Vec<Matrix>) -> Result<Self> {
        check_compatible(source, target)?;
        if comps.len() != source.n() {
            return Err(Error::Dimension(format!("{} components for n = {}", comps.len(), source.n())));
        }
        for (j, c) in comps.iter().enumerate() {
            if c.shape() != (target.object(j).rank(), source.object(j).rank()) {
                return Err(Error::Dimension(format!(
                    "phi^{j} is {}x{}, expected {}x{}",
                    c.rows(),
                    c.cols(),
                    target.object(j).rank(),
                    source.object(j).rank()
                )));
            }
            if !crate::algebra::poly::same_ring(c.ring(), source.backend().ring()) {
                return Err(Error::RingMismatch(format!("phi^{j} is not over the backend ring")));
            }
        }
        Ok(Self::unchecked(source, target, comps))
    }

    pub(crate) fn unchecked(source: &NFactorization, target: &NFactorization, comps: Vec<Matrix>) -> Self {
        FactMorphism(Arc::new(Inner { source: source.clone(), target: target.clone(), comps }))
    }

    pub fn identity(x: &NFactorization) -> Self {
        let comps = x.objects().iter().map(|o| x.backend().id(o)).collect();
        Self::unchecked(x, x, comps)
    }

    pub fn zero(x: &NFactorization, y: &NFactorization) -> Result<Self> {
        check_compatible(x, y)?;
        let comps = (0..x.n()).map(|j| x.backend().zero(x.object(j), y.object(j))).collect();
        Ok(Self::unchecked(x, y, comps))
    }

    pub fn source(&self) -> &NFactorization {
        &self.0.source
    }

    pub fn target(&self) -> &NFactorization {
        &self.0.target
    }

    pub fn backend(&self) -> &Backend {
        self.0.source.backend()
    }

    pub fn n(&self) -> usize {
        self.0.comps.len()
    }

    pub fn comps(&self) -> &[Matrix] {
        &self.0.comps
    }

    pub fn comp(&self, j: usize) -> &Matrix {
        &self.0.comps[j]
    }

    /// `phi^j` in extended indices: `phi^{j+n} = T(phi^j)`.
    pub fn comp_ext(&self, j: usize) -> Matrix {
        let n = self.n();
        self.backend().t_pow(&self.0.comps[j % n], j / n)
    }

    /// `phi^{j+1} d_X^j = d_Y^j phi^j`, the last square using `T(phi^0)`.
    pub fn validate(&self) -> Report {
        let (x, y) = (self.source(), self.target());
        let mut report = Report::new();
        for j in 0..self.n() {
            let lhs = &self.comp_ext(j + 1) * x.diff(j);
            let rhs = y.diff(j) * self.comp(j);
            let pass = lhs == rhs;
            let detail = if pass {
                serde_json::Value::Null
            } else {
                json!({ "phi_next*d_X": lhs.row_strings(), "d_Y*phi": rhs.row_strings() })
            };
            report.push(format!("square[{j}]"), pass, detail);
        }
        report
    }

    /// `g . f`.
    pub fn compose(g: &FactMorphism, f: &FactMorphism) -> Result<FactMorphism> {
        if f.target() != g.source() {
            return Err(Error::Incompatible("composition: target of f is not the source of g".into()));
        }
        Ok(Self::compose_unchecked(g, f))
    }

    pub(crate) fn compose_unchecked(g: &FactMorphism, f: &FactMorphism) -> FactMorphism {
        let comps = g.comps().iter().zip(f.comps()).map(|(a, b)| a * b).collect();
        Self::unchecked(f.source(), g.target(), comps)
    }

    /// `g . f` for the chain `[f, g, ...]` applied left to right.
    pub fn chain(ms: &[&FactMorphism]) -> Result<FactMorphism> {
        let mut acc = (*ms.first().ok_or_else(|| Error::Incompatible("empty chain".into()))?).clone();
        for m in &ms[1..] {
            acc = Self::compose(m, &acc)?;
        }
        Ok(acc)
    }

    fn check_parallel(&self, other: &FactMorphism) -> Result<()> {
        if self.source() != other.source() || self.target() != other.target() {
            return Err(Error::Incompatible("morphisms are not parallel".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &FactMorphism) -> Result<FactMorphism> {
        self.check_parallel(other)?;
        let comps = self.comps().iter().zip(other.comps()).map(|(a, b)| a + b).collect();
        Ok(Self::unchecked(self.source(), self.target(), comps))
    }

    pub fn sub(&self, other: &FactMorphism) -> Result<FactMorphism> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FactMorphism {
        Self::unchecked(self.source(), self.target(), self.comps().iter().map(Matrix::neg).collect())
    }

    /// Multiplication by a constant of the base field (a ring element in general).
    pub fn scale(&self, c: &Polynomial) -> FactMorphism {
        Self::unchecked(self.source(), self.target(), self.comps().iter().map(|m| m.scale(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.comps().iter().all(Matrix::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.source() == self.target() && self.comps().iter().all(Matrix::is_identity)
    }

    /// Same components (sources and targets may be equal only componentwise).
    pub fn same_comps(&self, other: &FactMorphism) -> bool {
        self.comps() == other.comps()
    }

    /// The inverse morphism when every component is invertible over the ring.
    pub fn inverse(&self) -> Option<FactMorphism> {
        let comps = self.comps().iter().map(Matrix::inverse).collect::<Option<Vec<_>>>()?;
        Some(Self::unchecked(self.target(), self.source(), comps))
    }

    pub fn is_isomorphism(&self) -> bool {
        self.inverse().is_some()
    }

    pub fn to_json(&self, from: &str, to: &str) -> serde_json::Value {
        let comps: Vec<_> = self.comps().iter().map(Matrix::row_strings).collect();
        json!({ "from": from, "to": to, "comps": comps })
    }
}

/// Whether `f` is invertible, with the inverse when it is.
pub fn is_isomorphism(f: &FactMorphism) -> (bool, Option<FactMorphism>) {
    let inv = f.inverse();
    (inv.is_some(), inv)
}

pub fn validate_morphism(f: &FactMorphism) -> Report {
    f.validate()
}

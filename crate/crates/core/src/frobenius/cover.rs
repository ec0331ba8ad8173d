//! Canonical deflations onto and inflations out of a factorization, lifting
//! tests for projectivity/injectivity, and the stable zero test.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use super::adjoint::{left_forward, right_forward};
use crate::algebra::{Matrix, Term};
use crate::ambient::{Backend, ObjectHandle};
use crate::error::{Error, Result};
use crate::factcat::exact::{injectivity_report, require_field, surjectivity_report};
use crate::factcat::{
    column_morphism, direct_sum, morphism_template, row_morphism, solve_morphism, Conflation, FactMorphism,
    NFactorization,
};
use crate::report::{Report, Verdict};

/// Which `theta^s` summands to use: `s in {0, 1}` or every `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoverMode {
    Paper,
    Full,
}

impl CoverMode {
    pub fn indices(self, n: usize) -> Vec<usize> {
        match self {
            CoverMode::Paper => vec![0, 1],
            CoverMode::Full => (0..n).collect(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CoverMode::Paper => "paper",
            CoverMode::Full => "full",
        }
    }
}

impl fmt::Display for CoverMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CoverMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(CoverMode::Paper),
            "full" => Ok(CoverMode::Full),
            other => Err(Error::Precondition(format!("mode must be paper or full, got `{other}`"))),
        }
    }
}

/// `X^s` of a factorization.
pub fn project(x: &NFactorization, s: usize) -> Result<ObjectHandle> {
    if s >= x.n() {
        return Err(Error::IndexRange { index: s, n: x.n() });
    }
    Ok(x.object(s).clone())
}

/// `phi^s` of a morphism.
pub fn project_morphism(f: &FactMorphism, s: usize) -> Result<Matrix> {
    if s >= f.n() {
        return Err(Error::IndexRange { index: s, n: f.n() });
    }
    Ok(f.comp(s).clone())
}

/// A cover `P -> X` or coextension `X -> I` by sums of `theta^s` objects.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub mode: CoverMode,
    /// `P` for a deflation, `I` for an inflation.
    pub object: NFactorization,
    pub morphism: FactMorphism,
    pub report: Report,
}

impl Canonical {
    /// Whether the componentwise test passed (surjective or injective).
    pub fn succeeded(&self) -> bool {
        self.report.checks.iter().filter(|c| c.name.starts_with("surjective") || c.name.starts_with("injective")).all(|c| c.pass)
    }

    /// First component where the map is not surjective/injective.
    pub fn failing_component(&self) -> Option<usize> {
        self.report
            .checks
            .iter()
            .find(|c| !c.pass && (c.name.starts_with("surjective") || c.name.starts_with("injective")))
            .and_then(|c| c.name.split(['[', ']']).nth(1))
            .and_then(|s| s.parse().ok())
    }
}

/// `sum_s theta^s(X^s) -> X`, each summand the transpose of `id_{X^s}`.
pub fn canonical_deflation(x: &NFactorization, mode: CoverMode) -> Result<Canonical> {
    let b = x.backend();
    require_field(b, "canonical deflation")?;
    let n = x.n();
    let mut acc: Option<(NFactorization, FactMorphism)> = None;
    for s in mode.indices(n) {
        let c = x.object(s).clone();
        let piece = left_forward(x, &c, s, &b.id(&c))?;
        acc = Some(match acc {
            None => (piece.source().clone(), piece),
            Some((src, m)) => {
                let bp = direct_sum(&src, piece.source())?;
                let joined = row_morphism(&m, &piece, &bp.sum);
                (bp.sum, joined)
            }
        });
    }
    let (object, morphism) = acc.expect("at least two summands");
    let mut report = Report::new();
    report.push("mode", true, json!(mode.as_str()));
    report.push("extension_summands", true, json!(mode == CoverMode::Full && n > 2));
    report.absorb_prefixed("source", object.validate());
    report.absorb_prefixed("morphism", morphism.validate());
    report.absorb(surjectivity_report(&morphism), None);
    Ok(Canonical { mode, object, morphism, report })
}

/// `X -> sum_s theta^s(C_s)` with `C_0 = X^{n-1}`, `C_s = T(X^{s-1})`, each
/// summand the transpose of an identity.
pub fn canonical_inflation(x: &NFactorization, mode: CoverMode) -> Result<Canonical> {
    let b = x.backend();
    require_field(b, "canonical inflation")?;
    let n = x.n();
    let mut acc: Option<(NFactorization, FactMorphism)> = None;
    for s in mode.indices(n) {
        let c = super::adjoint::base_object(super::adjoint::Side::Right, s, x);
        let piece = right_forward(x, &c, s, &b.id(&c))?;
        acc = Some(match acc {
            None => (piece.target().clone(), piece),
            Some((tgt, m)) => {
                let bp = direct_sum(&tgt, piece.target())?;
                let joined = column_morphism(&m, &piece, &bp.sum);
                (bp.sum, joined)
            }
        });
    }
    let (object, morphism) = acc.expect("at least two summands");
    let mut report = Report::new();
    report.push("mode", true, json!(mode.as_str()));
    report.push("extension_summands", true, json!(mode == CoverMode::Full && n > 2));
    report.absorb_prefixed("target", object.validate());
    report.absorb_prefixed("morphism", morphism.validate());
    report.absorb(injectivity_report(&morphism), None);
    Ok(Canonical { mode, object, morphism, report })
}

/// Result of a lifting or extension search.
#[derive(Clone, Debug)]
pub enum Lift {
    Found(FactMorphism),
    /// No solution; definitive over field backends, bounded otherwise.
    NotFound { definitive: bool },
}

impl Lift {
    pub fn found(&self) -> Option<&FactMorphism> {
        match self {
            Lift::Found(m) => Some(m),
            Lift::NotFound { .. } => None,
        }
    }

    pub fn describe(&self) -> Value {
        match self {
            Lift::Found(_) => json!("found"),
            Lift::NotFound { definitive: true } => json!("none"),
            Lift::NotFound { definitive: false } => json!("none within bound"),
        }
    }
}

/// A morphism `h: P -> B` with `c.p h = f` for `f: P -> C`.
pub fn test_projective(p: &NFactorization, c: &Conflation, f: &FactMorphism, bound: i64) -> Result<Lift> {
    if f.source() != p || f.target() != c.p.target() {
        return Err(Error::Incompatible("f must go from P to the end of the conflation".into()));
    }
    let mid = c.p.source();
    let (mut t, u) = morphism_template(p, mid)?;
    let ring = p.backend().ring();
    for j in 0..p.n() {
        let terms = vec![Term {
            left: c.p.comp(j).clone(),
            unknown: u[j],
            right: Matrix::identity(ring, p.object(j).rank()),
            twisted: false,
        }];
        t.add_equation(terms, f.comp(j).clone())?;
    }
    finish(p.backend(), solve_morphism(p, mid, &t, &u, effective_bound(p.backend(), bound))?)
}

/// A morphism `e: B -> I` with `e c.l = f` for `f: A -> I`.
pub fn test_injective(i: &NFactorization, c: &Conflation, f: &FactMorphism, bound: i64) -> Result<Lift> {
    if f.target() != i || f.source() != c.l.source() {
        return Err(Error::Incompatible("f must go from the start of the conflation to I".into()));
    }
    extend_along(&c.l, f, bound)
}

/// Solves `e l = f` for a morphism `e: target(l) -> target(f)`.
fn extend_along(l: &FactMorphism, f: &FactMorphism, bound: i64) -> Result<Lift> {
    let (mid, i) = (l.target(), f.target());
    let (mut t, u) = morphism_template(mid, i)?;
    let ring = i.backend().ring();
    for j in 0..mid.n() {
        let terms = vec![Term {
            left: Matrix::identity(ring, i.object(j).rank()),
            unknown: u[j],
            right: l.comp(j).clone(),
            twisted: false,
        }];
        t.add_equation(terms, f.comp(j).clone())?;
    }
    finish(i.backend(), solve_morphism(mid, i, &t, &u, effective_bound(i.backend(), bound))?)
}

fn effective_bound(b: &Backend, bound: i64) -> i64 {
    if b.is_field() {
        0
    } else {
        bound
    }
}

fn finish(b: &Backend, sol: Option<FactMorphism>) -> Result<Lift> {
    Ok(match sol {
        Some(m) if m.validate().all_pass() => Lift::Found(m),
        _ => Lift::NotFound { definitive: b.is_field() },
    })
}

/// Whether `f` factors through a projective-injective object, decided by
/// extending `f` along the full canonical inflation of its source.
#[derive(Clone, Debug)]
pub struct StableZero {
    pub verdict: Verdict,
    /// `(X -> I, I -> Y)` when the verdict is true.
    pub witness: Option<(FactMorphism, FactMorphism)>,
}

pub fn stably_zero(f: &FactMorphism, bound: i64) -> Result<StableZero> {
    require_field(f.backend(), "stable zero test")?;
    let infl = canonical_inflation(f.source(), CoverMode::Full)?;
    Ok(match extend_along(&infl.morphism, f, bound)? {
        Lift::Found(e) => StableZero { verdict: Verdict::True, witness: Some((infl.morphism, e)) },
        Lift::NotFound { definitive } => StableZero {
            verdict: if definitive { Verdict::False } else { Verdict::Unknown },
            witness: None,
        },
    })
}

/// `X` with `X^pos` of the given rank, all other components zero and all
/// differentials zero; valid when `omega = 0`.
pub fn concentrated(backend: &Backend, n: usize, pos: usize, rank: usize) -> Result<NFactorization> {
    if pos >= n {
        return Err(Error::IndexRange { index: pos, n });
    }
    let objects: Vec<ObjectHandle> = (0..n).map(|j| backend.object(if j == pos { rank } else { 0 })).collect();
    let diffs = (0..n)
        .map(|j| {
            let tgt = if j + 1 < n { objects[j + 1].clone() } else { backend.apply_t_obj(&objects[0]) };
            backend.zero(&objects[j], &tgt)
        })
        .collect();
    NFactorization::new(backend, objects, diffs)
}

//! Transposes for the adjunctions between `theta^s` and the projections.
//!
//! Left side: `Hom(theta^s C, X) = Hom(C, X^s)`. Right side:
//! `Hom(X, theta^0 C) = Hom(X^{n-1}, C)` and, for `s >= 1`,
//! `Hom(X, theta^s C) = Hom(T(X^{s-1}), C)`. The pairs numbered 1..4 are the
//! cases `theta^0 -| pr^0`, `theta^1 -| pr^1`, `pr^{n-1} -| theta^0` and
//! `pr^{n-1} S -| theta^1`.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use super::theta::{theta_s, theta_s_morphism};
use crate::algebra::Matrix;
use crate::ambient::{Backend, ObjectHandle};
use crate::error::{Error, Result};
use crate::factcat::{random_factorization, random_morphism, FactMorphism, NFactorization};
use crate::parallel::{run_samples, Execution};
use crate::random;
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AdjunctionId {
    /// `(theta^0, pr^0)`.
    Theta0Pr0,
    /// `(theta^1, pr^1)`.
    Theta1Pr1,
    /// `(pr^{n-1}, theta^0)`.
    PrLastTheta0,
    /// `(pr^{n-1} S, theta^1)`.
    PrLastSTheta1,
}

impl AdjunctionId {
    pub const ALL: [AdjunctionId; 4] =
        [AdjunctionId::Theta0Pr0, AdjunctionId::Theta1Pr1, AdjunctionId::PrLastTheta0, AdjunctionId::PrLastSTheta1];

    pub fn number(self) -> u8 {
        match self {
            AdjunctionId::Theta0Pr0 => 1,
            AdjunctionId::Theta1Pr1 => 2,
            AdjunctionId::PrLastTheta0 => 3,
            AdjunctionId::PrLastSTheta1 => 4,
        }
    }

    pub fn from_number(k: u8) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.number() == k)
            .ok_or_else(|| Error::Precondition(format!("adjunction must be 1..4, got {k}")))
    }

    /// Which `theta^s` appears, and on which side.
    pub fn side(self) -> (Side, usize) {
        match self {
            AdjunctionId::Theta0Pr0 => (Side::Left, 0),
            AdjunctionId::Theta1Pr1 => (Side::Left, 1),
            AdjunctionId::PrLastTheta0 => (Side::Right, 0),
            AdjunctionId::PrLastSTheta1 => (Side::Right, 1),
        }
    }

    /// Pairs 2 and 4 involve `T^-1`.
    pub fn needs_inverse(self) -> bool {
        self.side().1 == 1
    }
}

impl fmt::Display for AdjunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

impl FromStr for AdjunctionId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let k: u8 = s.parse().map_err(|_| Error::Precondition(format!("adjunction must be 1..4, got `{s}`")))?;
        Self::from_number(k)
    }
}

/// `theta^s` on the left (`Hom(theta^s C, X)`) or on the right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

impl FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fwd" | "forward" => Ok(Direction::Forward),
            "bwd" | "backward" => Ok(Direction::Backward),
            other => Err(Error::Precondition(format!("direction must be fwd or bwd, got `{other}`"))),
        }
    }
}

/// The object `g` must start at (left) or end at (right) for the base side
/// of the adjunction; i.e. `X^s`, `X^{n-1}` or `T(X^{s-1})`.
pub fn base_object(side: Side, s: usize, x: &NFactorization) -> ObjectHandle {
    match (side, s) {
        (Side::Left, s) => x.object(s).clone(),
        (Side::Right, 0) => x.object(x.n() - 1).clone(),
        (Side::Right, s) => x.object_ext(s - 1 + x.n()),
    }
}

/// `g: C -> X^s` to `theta^s(C) -> X`.
pub fn left_forward(x: &NFactorization, c: &ObjectHandle, s: usize, g: &Matrix) -> Result<FactMorphism> {
    let n = x.n();
    let b = x.backend();
    check_shape(g, c.rank(), x.object(s).rank(), "g: C -> X^s")?;
    let src = theta_s(b, c, n, s)?;
    let mut comps = vec![Matrix::zeros(b.ring(), 0, 0); n];
    for j in s..n {
        comps[j] = &x.diff_chain(s, j) * g;
    }
    if s > 0 {
        let inv = b.require_inverse()?;
        // g^0 = eps_{X^0} T^-1(d^{n-1} ... d^s g)
        let top = &x.diff_chain(s, n) * g;
        comps[0] = &inv.epsilon(x.object(0)) * &inv.apply_t_inv(&top);
        for j in 1..s {
            comps[j] = &x.diff_chain(0, j) * &comps[0];
        }
    }
    FactMorphism::new(&src, x, comps)
}

/// `theta^s(C) -> X` to its component `s`.
pub fn left_backward(m: &FactMorphism, s: usize) -> Matrix {
    m.comp(s).clone()
}

/// `g: X^{n-1} -> C` (s = 0) or `g: T(X^{s-1}) -> C` to `X -> theta^s(C)`.
pub fn right_forward(x: &NFactorization, c: &ObjectHandle, s: usize, g: &Matrix) -> Result<FactMorphism> {
    let n = x.n();
    let b = x.backend();
    let tgt = theta_s(b, c, n, s)?;
    let mut comps = vec![Matrix::zeros(b.ring(), 0, 0); n];
    if s == 0 {
        check_shape(g, x.object(n - 1).rank(), c.rank(), "g: X^{n-1} -> C")?;
        for j in 0..n {
            comps[j] = g * &x.diff_chain(j, n - 1);
        }
    } else {
        check_shape(g, x.object(s - 1).rank(), c.rank(), "g: T(X^{s-1}) -> C")?;
        let inv = b.require_inverse()?;
        // g^{s-1} = T^-1(g) eps^-1_{X^{s-1}}
        comps[s - 1] = &inv.apply_t_inv(g) * &inv.epsilon_inv(x.object(s - 1));
        for j in 0..s - 1 {
            comps[j] = &comps[s - 1] * &x.diff_chain(j, s - 1);
        }
        for j in s..n {
            comps[j] = g * &x.diff_chain(j, n + s - 1);
        }
    }
    FactMorphism::new(x, &tgt, comps)
}

/// `X -> theta^s(C)` back to `g`.
pub fn right_backward(m: &FactMorphism, s: usize) -> Result<Matrix> {
    let n = m.n();
    if s == 0 {
        return Ok(m.comp(n - 1).clone());
    }
    let b = m.backend();
    let inv = b.require_inverse()?;
    let c = m.target().object(s);
    // eta_C^-1 T(g^{s-1})
    Ok(&inv.eta_inv(c) * &b.t(m.comp(s - 1)))
}

fn check_shape(g: &Matrix, src_rank: usize, tgt_rank: usize, what: &str) -> Result<()> {
    if g.shape() != (tgt_rank, src_rank) {
        return Err(Error::Dimension(format!(
            "{what} must be {tgt_rank}x{src_rank}, got {}x{}",
            g.rows(),
            g.cols()
        )));
    }
    Ok(())
}

/// Forward transpose for one of the four numbered pairs.
pub fn transpose_forward(adj: AdjunctionId, x: &NFactorization, c: &ObjectHandle, g: &Matrix) -> Result<FactMorphism> {
    match adj.side() {
        (Side::Left, s) => left_forward(x, c, s, g),
        (Side::Right, s) => right_forward(x, c, s, g),
    }
}

/// Backward transpose; the morphism must have the matching `theta` end.
pub fn transpose_backward(adj: AdjunctionId, m: &FactMorphism) -> Result<Matrix> {
    match adj.side() {
        (Side::Left, s) => Ok(left_backward(m, s)),
        (Side::Right, s) => right_backward(m, s),
    }
}

/// Round trips and naturality of the `theta^s` adjunction on given data.
///
/// Left side: for `g: C -> X^s`, `f: C1 -> C`, `h: X -> X1`,
/// `Phi(h^s g f) = h Phi(g) theta^s(f)`. Right side: for `g` out of the base
/// object of `X`, `f: C -> C1`, `h: X1 -> X`,
/// `Phi(f g h_base) = theta^s(f) Phi(g) h`.
pub struct NaturalityData<'a> {
    pub x: &'a NFactorization,
    pub c: &'a ObjectHandle,
    pub g: &'a Matrix,
    pub c1: &'a ObjectHandle,
    pub f: &'a Matrix,
    pub h: &'a FactMorphism,
}

pub fn check_adjunction(side: Side, s: usize, data: &NaturalityData<'_>) -> Result<Report> {
    let mut report = Report::new();
    let b = data.x.backend();
    let n = data.x.n();
    let fwd = match side {
        Side::Left => left_forward(data.x, data.c, s, data.g)?,
        Side::Right => right_forward(data.x, data.c, s, data.g)?,
    };
    let back = match side {
        Side::Left => left_backward(&fwd, s),
        Side::Right => right_backward(&fwd, s)?,
    };
    report.push("backward_forward", &back == data.g, Value::Null);
    // forward(backward(m)) = m on the morphism we just built, and on a
    // perturbed one obtained by post/pre-composition with h
    let again = match side {
        Side::Left => left_forward(data.x, data.c, s, &back)?,
        Side::Right => right_forward(data.x, data.c, s, &back)?,
    };
    report.push("forward_backward", again.same_comps(&fwd), Value::Null);

    let theta_f = match side {
        Side::Left => theta_s_morphism(b, data.f, data.c1, data.c, n, s)?,
        Side::Right => theta_s_morphism(b, data.f, data.c, data.c1, n, s)?,
    };
    let (lhs, rhs, detail) = match side {
        Side::Left => {
            // h: X -> X1
            let moved = &(data.h.comp(s) * data.g) * data.f;
            let lhs = left_forward(data.h.target(), data.c1, s, &moved)?;
            let rhs = FactMorphism::chain(&[&theta_f, &fwd, data.h])?;
            (lhs, rhs, "Phi(h^s g f) = h Phi(g) theta(f)")
        }
        Side::Right => {
            // h: X1 -> X
            let x1 = data.h.source();
            let base_h = if s == 0 { data.h.comp(n - 1).clone() } else { b.t(data.h.comp(s - 1)) };
            let moved = &(data.f * data.g) * &base_h;
            let lhs = right_forward(x1, data.c1, s, &moved)?;
            let rhs = FactMorphism::chain(&[data.h, &fwd, &theta_f])?;
            (lhs, rhs, "Phi(f g h) = theta(f) Phi(g) h")
        }
    };
    let ok = lhs.same_comps(&rhs);
    report.push("naturality", ok, if ok { Value::Null } else { json!({ "identity": detail }) });
    // the inverse transpose is natural as well
    let lhs_back = match side {
        Side::Left => left_backward(&rhs, s),
        Side::Right => right_backward(&rhs, s)?,
    };
    let expect = match side {
        Side::Left => &(data.h.comp(s) * data.g) * data.f,
        Side::Right => {
            let base_h = if s == 0 { data.h.comp(n - 1).clone() } else { b.t(data.h.comp(s - 1)) };
            &(data.f * data.g) * &base_h
        }
    };
    report.push("naturality_inverse", lhs_back == expect, Value::Null);
    Ok(report)
}

/// Round trips and naturality for every adjunction the backend supports, on
/// random `g`, `f`, `h`; also `forward(backward(m)) = m` for a random
/// morphism `m` with a `theta` end. Pairs needing `T^-1` are skipped (and
/// reported as such) on backends without it.
pub fn adjunction_suite(backend: &Backend, n: usize, samples: usize, seed: u64, exec: Execution) -> Result<Report> {
    run_samples(exec, seed, samples, |s| {
        let mut rng = random::rng(s);
        let mut r = Report::new();
        for adj in AdjunctionId::ALL {
            let name = format!("adj{}", adj.number());
            if adj.needs_inverse() && !backend.has_inverse() {
                r.push(format!("{name}.skipped"), true, json!("T is not invertible"));
                continue;
            }
            let (side, k) = adj.side();
            let x = random_factorization(backend, n, 2, random::mix(s ^ 1))?;
            let x1 = random_factorization(backend, n, 2, random::mix(s ^ 2))?;
            let c = backend.random_object(2, &mut rng);
            let c1 = backend.random_object(2, &mut rng);
            let base = base_object(side, k, &x);
            let (g, f, h) = match side {
                Side::Left => (
                    backend.random_matrix(&c, &base, 2, &mut rng),
                    backend.random_matrix(&c1, &c, 2, &mut rng),
                    random_morphism(&x, &x1, random::mix(s ^ 3))?,
                ),
                Side::Right => (
                    backend.random_matrix(&base, &c, 2, &mut rng),
                    backend.random_matrix(&c, &c1, 2, &mut rng),
                    random_morphism(&x1, &x, random::mix(s ^ 3))?,
                ),
            };
            let data = NaturalityData { x: &x, c: &c, g: &g, c1: &c1, f: &f, h: &h };
            r.absorb_prefixed(&name, check_adjunction(side, k, &data)?);
            let theta = theta_s(backend, &c, n, k)?;
            let m = match side {
                Side::Left => random_morphism(&theta, &x, random::mix(s ^ 4))?,
                Side::Right => random_morphism(&x, &theta, random::mix(s ^ 4))?,
            };
            let back = transpose_backward(adj, &m)?;
            let again = transpose_forward(adj, &x, &c, &back)?;
            r.push(format!("{name}.forward_backward_random"), again.same_comps(&m), Value::Null);
        }
        Ok(r)
    })
}

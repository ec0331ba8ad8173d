//! Sparse multivariate polynomials over a [`Field`] in graded-lex order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rand::Rng;

use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// Polynomial ring `k[x_1, .., x_m]`; `m = 0` gives the field itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    field: Field,
    vars: Vec<String>,
}

pub type RingRef = Arc<Ring>;

impl Ring {
    pub fn new(field: Field, vars: Vec<String>) -> Result<RingRef> {
        for (i, v) in vars.iter().enumerate() {
            let mut chars = v.chars();
            let head_ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic());
            if !head_ok || !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::InvalidBackend(format!("bad variable name `{v}`")));
            }
            if vars[..i].contains(v) {
                return Err(Error::InvalidBackend(format!("duplicate variable `{v}`")));
            }
        }
        Ok(Arc::new(Ring { field, vars }))
    }

    /// The field regarded as a ring with no variables.
    pub fn constants(field: Field) -> RingRef {
        Arc::new(Ring { field, vars: Vec::new() })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// All monomials of total degree `<= bound`, ascending in graded-lex order.
    pub fn monomials_up_to(&self, bound: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for d in 0..=bound {
            let mut layer = Vec::new();
            let mut cur = vec![0u32; self.nvars()];
            compositions(d, 0, &mut cur, &mut layer);
            layer.sort();
            out.extend(layer);
            if self.nvars() == 0 {
                break;
            }
        }
        out
    }
}

fn compositions(rest: u32, at: usize, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if at == cur.len() {
        if rest == 0 {
            out.push(Monomial(cur.clone()));
        }
        return;
    }
    if at + 1 == cur.len() {
        cur[at] = rest;
        out.push(Monomial(cur.clone()));
        cur[at] = 0;
        return;
    }
    for e in (0..=rest).rev() {
        cur[at] = e;
        compositions(rest - e, at + 1, cur, out);
    }
    cur[at] = 0;
}

pub fn same_ring(a: &RingRef, b: &RingRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn weighted_degree(&self, weights: &[i64]) -> i64 {
        self.0.iter().zip(weights).map(|(&e, &w)| e as i64 * w).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: RingRef,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ring: &RingRef) -> Self {
        Polynomial { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &RingRef) -> Self {
        Self::constant(ring, ring.field().one())
    }

    pub fn from_i64(ring: &RingRef, v: i64) -> Self {
        Self::constant(ring, ring.field().from_i64(v))
    }

    pub fn constant(ring: &RingRef, c: Scalar) -> Self {
        Self::monomial(ring, c, Monomial::one(ring.nvars()))
    }

    pub fn var(ring: &RingRef, i: usize) -> Self {
        Self::monomial(ring, ring.field().one(), Monomial::var(ring.nvars(), i))
    }

    pub fn monomial(ring: &RingRef, c: Scalar, m: Monomial) -> Self {
        debug_assert_eq!(m.0.len(), ring.nvars());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { ring: ring.clone(), terms }
    }

    /// Builds from raw terms, merging duplicates and dropping zeros.
    pub fn from_terms(ring: &RingRef, raw: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = Self::zero(ring);
        for (m, c) in raw {
            p.add_term(m, &c);
        }
        p
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// The value of a constant polynomial (including zero).
    pub fn constant_value(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(self.ring.field().zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.field().zero())
    }

    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// Weighted degree if every term has the same weighted degree.
    pub fn homogeneous_degree(&self, weights: &[i64]) -> Option<i64> {
        let mut degs = self.terms.keys().map(|m| m.weighted_degree(weights));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// `self += a * b` without building the product.
    pub(crate) fn add_product(&mut self, a: &Polynomial, b: &Polynomial) {
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                self.add_term(ma.mul(mb), &(ca * cb));
            }
        }
    }

    fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = &*existing + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn mul_monomial(&self, c: &Scalar, mono: &Monomial) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(m, a)| (m.mul(mono), a * c)).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Self::one(&self.ring);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient `self / d` when `d` divides `self`, else `None`.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        let (dm, dc) = d.leading()?;
        let dc_inv = dc.inv()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.ring);
        while let Some((rm, rc)) = rem.leading() {
            if !dm.divides(rm) {
                return None;
            }
            let qm = dm.quotient_of(rm);
            let qc = rc * &dc_inv;
            rem = &rem - &d.mul_monomial(&qc, &qm);
            quot.add_term(qm, &qc);
        }
        Some(quot)
    }

    /// Random polynomial of degree `<= max_deg`; each monomial is present with
    /// probability `density`.
    pub fn random<R: Rng + ?Sized>(ring: &RingRef, max_deg: u32, density: f64, rng: &mut R) -> Polynomial {
        let mut p = Self::zero(ring);
        for m in ring.monomials_up_to(max_deg) {
            if rng.gen_bool(density) {
                let c = ring.field().random_nonzero(rng);
                p.add_term(m, &c);
            }
        }
        p
    }

    /// Random homogeneous polynomial of weighted degree `deg`.
    pub fn random_homogeneous<R: Rng + ?Sized>(
        ring: &RingRef,
        weights: &[i64],
        deg: i64,
        density: f64,
        rng: &mut R,
    ) -> Polynomial {
        let mut p = Self::zero(ring);
        if deg < 0 {
            return p;
        }
        let min_w = weights.iter().copied().filter(|&w| w > 0).min().unwrap_or(1);
        let max_total = (deg / min_w) as u32;
        for m in ring.monomials_up_to(max_total) {
            if m.weighted_degree(weights) == deg && rng.gen_bool(density) {
                let c = ring.field().random_nonzero(rng);
                p.add_term(m, &c);
            }
        }
        p
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        debug_assert!(same_ring(&self.ring, &rhs.ring));
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() { (self.clone(), rhs) } else { (rhs.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c);
        }
        big
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        debug_assert!(same_ring(&self.ring, &rhs.ring));
        let mut out = Polynomial::zero(&self.ring);
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            let factors: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    if e == 1 {
                        self.ring.vars[v].clone()
                    } else {
                        format!("{}^{e}", self.ring.vars[v])
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// A `k`-algebra endomorphism of a polynomial ring, given by variable images.
#[derive(Clone, Debug, PartialEq)]
pub struct RingMap {
    ring: RingRef,
    images: Vec<Polynomial>,
}

impl RingMap {
    pub fn new(ring: &RingRef, images: Vec<Polynomial>) -> Result<Self> {
        if images.len() != ring.nvars() {
            return Err(Error::Dimension(format!(
                "ring map needs {} images, got {}",
                ring.nvars(),
                images.len()
            )));
        }
        if images.iter().any(|p| !same_ring(p.ring(), ring)) {
            return Err(Error::RingMismatch("ring map image in a foreign ring".into()));
        }
        Ok(RingMap { ring: ring.clone(), images })
    }

    pub fn identity(ring: &RingRef) -> Self {
        let images = (0..ring.nvars()).map(|i| Polynomial::var(ring, i)).collect();
        RingMap { ring: ring.clone(), images }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, p)| *p == Polynomial::var(&self.ring, i))
    }

    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in p.terms() {
            let mut t = Polynomial::constant(&self.ring, c.clone());
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &self.images[v].pow(e);
                }
            }
            out = &out + &t;
        }
        out
    }

    /// The inverse when this map is affine with invertible linear part;
    /// `None` otherwise (including non-affine automorphisms, which are not
    /// detected).
    pub fn affine_inverse(&self) -> Option<RingMap> {
        let n = self.ring.nvars();
        let field = self.ring.field();
        if self.images.iter().any(|p| p.degree().unwrap_or(0) > 1) {
            return None;
        }
        // images[i] = sum_j a[i][j] x_j + b[i]
        let mut a = vec![vec![field.zero(); n]; n];
        let mut b = vec![field.zero(); n];
        for (i, p) in self.images.iter().enumerate() {
            for (m, c) in p.terms() {
                match m.0.iter().position(|&e| e == 1) {
                    Some(j) => a[i][j] = c.clone(),
                    None => b[i] = c.clone(),
                }
            }
        }
        let inv = super::linsolve::invert_dense(&a)?;
        // phi^{-1}(x_i) = sum_j inv[i][j] (x_j - b_j)
        let images = (0..n)
            .map(|i| {
                let mut p = Polynomial::zero(&self.ring);
                for j in 0..n {
                    let xj_minus_bj = &Polynomial::var(&self.ring, j) - &Polynomial::constant(&self.ring, b[j].clone());
                    p = &p + &xj_minus_bj.scale(&inv[i][j]);
                }
                p
            })
            .collect();
        Some(RingMap { ring: self.ring.clone(), images })
    }

    pub fn compose(&self, inner: &RingMap) -> RingMap {
        // (self . inner)(x_i) = self(inner(x_i))
        let images = inner.images.iter().map(|p| self.apply(p)).collect();
        RingMap { ring: self.ring.clone(), images }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qxy() -> RingRef {
        Ring::new(Field::Rational, vec!["x".into(), "y".into()]).unwrap()
    }

    #[test]
    fn grlex_order_and_printing() {
        let r = qxy();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let p = &(&(&x * &x) * &y) - &Polynomial::from_i64(&r, 3);
        assert_eq!(p.to_string(), "x^2*y - 3");
        let q = &(&y * &y) + &(&x * &y);
        assert_eq!(q.to_string(), "x*y + y^2");
        assert_eq!((-&x).to_string(), "-x");
        assert_eq!(Polynomial::zero(&r).to_string(), "0");
    }

    #[test]
    fn exact_division() {
        let r = qxy();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let a = &(&x + &y) * &(&x - &y);
        assert_eq!(a.div_exact(&(&x + &y)).unwrap(), &x - &y);
        assert!(x.div_exact(&y).is_none());
    }

    #[test]
    fn monomial_enumeration() {
        let r = qxy();
        let ms = r.monomials_up_to(2);
        assert_eq!(ms.len(), 6);
        assert!(ms.windows(2).all(|w| w[0] < w[1]));
        let k = Ring::constants(Field::Rational);
        assert_eq!(k.monomials_up_to(5).len(), 1);
    }

    #[test]
    fn affine_inverse_roundtrip() {
        let r = qxy();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let phi = RingMap::new(&r, vec![&(&x + &y) + &Polynomial::one(&r), y.clone()]).unwrap();
        let inv = phi.affine_inverse().unwrap();
        assert!(phi.compose(&inv).is_identity());
        assert!(inv.compose(&phi).is_identity());
        let sq = RingMap::new(&r, vec![&x * &x, y.clone()]).unwrap();
        assert!(sq.affine_inverse().is_none());
    }
}

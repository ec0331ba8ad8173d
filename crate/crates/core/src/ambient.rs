//! The ambient data `(A, T, omega)`: free modules over a base ring, an additive
//! functor `T` acting on objects and matrices, and the transformation
//! `omega: Id -> T`. Every shipped backend has `omega_X = w * Id` for a fixed
//! ring element `w`.

use std::fmt;
use std::sync::Arc;

use rand::Rng as _;
use serde_json::{json, Map, Value};

use crate::algebra::{parse_poly, parse_scalar, Field, Matrix, Polynomial, Ring, RingMap, RingRef, Scalar};
use crate::error::{Error, Result};
use crate::random;
use crate::report::Report;

/// A finite-rank free module, with generator degrees on graded backends.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ObjectHandle {
    rank: usize,
    degrees: Option<Vec<i64>>,
}

impl ObjectHandle {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degrees(&self) -> Option<&[i64]> {
        self.degrees.as_deref()
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0
    }

    pub fn direct_sum(&self, other: &ObjectHandle) -> ObjectHandle {
        let degrees = match (&self.degrees, &other.degrees) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        ObjectHandle { rank: self.rank + other.rank, degrees }
    }

    pub fn to_json(&self) -> Value {
        match &self.degrees {
            Some(d) => json!({ "rank": self.rank, "degrees": d }),
            None => json!({ "rank": self.rank }),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BackendKind {
    /// `T = Id`, `omega = c * Id` over a field.
    FieldScalar { c: Scalar },
    /// `T = Id`, `omega = w * Id` over a polynomial ring.
    PolyClassical { w: Polynomial },
    /// `T` shifts generator degrees by `deg w`; matrices are unchanged.
    GradedShift { weights: Vec<i64>, w: Polynomial, shift: i64 },
    /// `T` applies `phi` entrywise. `w` is zero except in the deliberately
    /// unchecked constructor.
    EndoTwist { phi: RingMap, inverse: Option<RingMap>, w: Polynomial },
}

#[derive(Debug, PartialEq)]
struct Inner {
    ring: RingRef,
    kind: BackendKind,
}

/// Shared, immutable backend description.
#[derive(Clone, Debug)]
pub struct Backend(Arc<Inner>);

impl PartialEq for Backend {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Backend {
    pub fn field_scalar(field: Field, c: Scalar) -> Result<Self> {
        if c.field() != field {
            return Err(Error::InvalidBackend("c is not an element of the field".into()));
        }
        Ok(Self::wrap(Ring::constants(field), BackendKind::FieldScalar { c }))
    }

    pub fn poly_classical(ring: &RingRef, w: Polynomial) -> Result<Self> {
        check_in_ring(ring, &w)?;
        Ok(Self::wrap(ring.clone(), BackendKind::PolyClassical { w }))
    }

    /// `w` must be nonzero and homogeneous for the variable weights.
    pub fn graded_shift(ring: &RingRef, weights: Vec<i64>, w: Polynomial) -> Result<Self> {
        check_in_ring(ring, &w)?;
        if weights.len() != ring.nvars() {
            return Err(Error::InvalidBackend(format!(
                "{} variable degrees given for {} variables",
                weights.len(),
                ring.nvars()
            )));
        }
        let shift = w
            .homogeneous_degree(&weights)
            .ok_or_else(|| Error::InvalidBackend(format!("w = {w} is not a nonzero homogeneous element")))?;
        Ok(Self::wrap(ring.clone(), BackendKind::GradedShift { weights, w, shift }))
    }

    /// `T = phi` entrywise with `omega = 0`.
    pub fn endo_twist(ring: &RingRef, phi: RingMap) -> Result<Self> {
        Self::endo_twist_with_omega(ring, phi, Polynomial::zero(ring))
    }

    /// `omega = w * Id` is natural for `T = phi` only if `phi(w) f = w phi(f)`
    /// for all `f`; over a domain this forces `phi = id` unless `w = 0`.
    pub fn endo_twist_with_omega(ring: &RingRef, phi: RingMap, w: Polynomial) -> Result<Self> {
        check_in_ring(ring, &w)?;
        if !crate::algebra::poly::same_ring(phi.ring(), ring) {
            return Err(Error::InvalidBackend("phi acts on a different ring".into()));
        }
        if !w.is_zero() && !phi.is_identity() {
            return Err(Error::InvalidBackend("omega = w*Id with w != 0 is not natural for phi != id".into()));
        }
        Ok(Self::endo_twist_unchecked(ring, phi, w))
    }

    /// Skips the naturality gate; used to exercise the coherence checker.
    pub fn endo_twist_unchecked(ring: &RingRef, phi: RingMap, w: Polynomial) -> Self {
        let inverse = phi.affine_inverse();
        Self::wrap(ring.clone(), BackendKind::EndoTwist { phi, inverse, w })
    }

    fn wrap(ring: RingRef, kind: BackendKind) -> Self {
        Backend(Arc::new(Inner { ring, kind }))
    }

    pub fn ring(&self) -> &RingRef {
        &self.0.ring
    }

    pub fn field(&self) -> Field {
        self.0.ring.field()
    }

    pub fn kind(&self) -> &BackendKind {
        &self.0.kind
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind() {
            BackendKind::FieldScalar { .. } => "field-scalar",
            BackendKind::PolyClassical { .. } => "poly-classical",
            BackendKind::GradedShift { .. } => "graded-shift",
            BackendKind::EndoTwist { .. } => "endo-twist",
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self.kind(), BackendKind::FieldScalar { .. })
    }

    pub fn is_graded(&self) -> bool {
        matches!(self.kind(), BackendKind::GradedShift { .. })
    }

    /// The element with `omega_X = w * Id`.
    pub fn w(&self) -> Polynomial {
        match self.kind() {
            BackendKind::FieldScalar { c } => Polynomial::constant(self.ring(), c.clone()),
            BackendKind::PolyClassical { w } | BackendKind::GradedShift { w, .. } | BackendKind::EndoTwist { w, .. } => {
                w.clone()
            }
        }
    }

    /// Degree of `w`, used as slack in homotopy searches.
    pub fn w_degree(&self) -> u32 {
        self.w().degree().unwrap_or(0)
    }

    /// An object of the given rank, with all generators in degree 0 when graded.
    pub fn object(&self, rank: usize) -> ObjectHandle {
        let degrees = self.is_graded().then(|| vec![0; rank]);
        ObjectHandle { rank, degrees }
    }

    pub fn graded_object(&self, degrees: Vec<i64>) -> Result<ObjectHandle> {
        if !self.is_graded() {
            return Err(Error::InvalidBackend("generator degrees on an ungraded backend".into()));
        }
        Ok(ObjectHandle { rank: degrees.len(), degrees: Some(degrees) })
    }

    /// Checks that an object belongs to this backend.
    pub fn check_object(&self, x: &ObjectHandle) -> Result<()> {
        match (&x.degrees, self.is_graded()) {
            (Some(d), true) if d.len() == x.rank => Ok(()),
            (None, false) => Ok(()),
            _ => Err(Error::InvalidBackend("object degrees do not match the backend".into())),
        }
    }

    pub fn apply_t_obj(&self, x: &ObjectHandle) -> ObjectHandle {
        self.shift_obj(x, 1)
    }

    fn shift_obj(&self, x: &ObjectHandle, times: i64) -> ObjectHandle {
        match self.kind() {
            BackendKind::GradedShift { shift, .. } => ObjectHandle {
                rank: x.rank,
                degrees: x.degrees.as_ref().map(|d| d.iter().map(|v| v + times * shift).collect()),
            },
            _ => x.clone(),
        }
    }

    /// `T` on matrices; identity except for the endomorphism twist.
    pub fn t(&self, m: &Matrix) -> Matrix {
        match self.kind() {
            BackendKind::EndoTwist { phi, .. } if !phi.is_identity() => m.apply_map(phi),
            _ => m.clone(),
        }
    }

    /// `T` on matrices with a ring check.
    pub fn apply_t(&self, m: &Matrix) -> Result<Matrix> {
        if !crate::algebra::poly::same_ring(m.ring(), self.ring()) {
            return Err(Error::RingMismatch("matrix is not over the backend ring".into()));
        }
        Ok(self.t(m))
    }

    /// `T^k` on matrices.
    pub fn t_pow(&self, m: &Matrix, k: usize) -> Matrix {
        (0..k).fold(m.clone(), |acc, _| self.t(&acc))
    }

    pub fn t_pow_obj(&self, x: &ObjectHandle, k: usize) -> ObjectHandle {
        self.shift_obj(x, k as i64)
    }

    pub fn omega(&self, x: &ObjectHandle) -> Matrix {
        Matrix::scalar_diag(self.ring(), x.rank, &self.w())
    }

    pub fn inverse_data(&self) -> Option<InverseData<'_>> {
        match self.kind() {
            BackendKind::EndoTwist { inverse: None, .. } => None,
            _ => Some(InverseData { backend: self }),
        }
    }

    pub fn has_inverse(&self) -> bool {
        self.inverse_data().is_some()
    }

    pub fn require_inverse(&self) -> Result<InverseData<'_>> {
        self.inverse_data()
            .ok_or_else(|| Error::NoInverse(format!("T is not invertible on the {} backend", self.kind_name())))
    }

    pub fn zero(&self, src: &ObjectHandle, tgt: &ObjectHandle) -> Matrix {
        Matrix::zeros(self.ring(), tgt.rank, src.rank)
    }

    pub fn id(&self, x: &ObjectHandle) -> Matrix {
        Matrix::identity(self.ring(), x.rank)
    }

    /// Whether each entry `(i, k)` is homogeneous of degree
    /// `deg tgt_i - deg src_k` (always true on ungraded backends).
    pub fn is_homogeneous(&self, m: &Matrix, src: &ObjectHandle, tgt: &ObjectHandle) -> bool {
        let BackendKind::GradedShift { weights, .. } = self.kind() else {
            return true;
        };
        let (Some(sd), Some(td)) = (src.degrees(), tgt.degrees()) else {
            return false;
        };
        (0..m.rows()).all(|i| {
            (0..m.cols()).all(|k| {
                let e = m.get(i, k);
                e.is_zero() || e.homogeneous_degree(weights) == Some(td[i] - sd[k])
            })
        })
    }

    /// A random object of rank at most `max_rank` (degrees in `[0, 2]`).
    pub fn random_object(&self, max_rank: usize, rng: &mut random::Rng) -> ObjectHandle {
        let rank = rng.gen_range(0..=max_rank);
        self.random_object_of_rank(rank, rng)
    }

    pub fn random_object_of_rank(&self, rank: usize, rng: &mut random::Rng) -> ObjectHandle {
        let degrees = self.is_graded().then(|| (0..rank).map(|_| rng.gen_range(0..=2)).collect());
        ObjectHandle { rank, degrees }
    }

    /// A random morphism `src -> tgt`: homogeneous on graded backends,
    /// entries of degree `<= max_deg` otherwise.
    pub fn random_matrix(&self, src: &ObjectHandle, tgt: &ObjectHandle, max_deg: u32, rng: &mut random::Rng) -> Matrix {
        let ring = self.ring();
        match self.kind() {
            BackendKind::GradedShift { weights, .. } => {
                let sd = src.degrees().map(<[i64]>::to_vec).unwrap_or_else(|| vec![0; src.rank]);
                let td = tgt.degrees().map(<[i64]>::to_vec).unwrap_or_else(|| vec![0; tgt.rank]);
                Matrix::from_fn(ring, tgt.rank, src.rank, |i, k| {
                    Polynomial::random_homogeneous(ring, weights, td[i] - sd[k], 0.5, rng)
                })
            }
            _ => Matrix::from_fn(ring, tgt.rank, src.rank, |_, _| Polynomial::random(ring, max_deg, 0.4, rng)),
        }
    }

    /// `omega_{T X} = T(omega_X)` and `T(f) omega_X = omega_Y f` on probe
    /// morphisms `[[x_i]]` followed by random ones.
    pub fn check_omega_coherence(&self, samples: usize, seed: u64) -> Report {
        let mut rng = random::rng(seed);
        let mut report = Report::new();
        let mut probes: Vec<(ObjectHandle, ObjectHandle, Matrix)> = Vec::new();
        for i in 0..self.ring().nvars() {
            let x = Polynomial::var(self.ring(), i);
            let (src, tgt) = match self.kind() {
                BackendKind::GradedShift { weights, .. } => (
                    ObjectHandle { rank: 1, degrees: Some(vec![0]) },
                    ObjectHandle { rank: 1, degrees: Some(vec![weights[i]]) },
                ),
                _ => (self.object(1), self.object(1)),
            };
            probes.push((src, tgt, Matrix::from_rows(self.ring(), vec![vec![x]], 1).unwrap()));
        }
        while probes.len() < samples {
            let src = self.random_object(3, &mut rng);
            let tgt = self.random_object(3, &mut rng);
            let f = self.random_matrix(&src, &tgt, 2, &mut rng);
            probes.push((src, tgt, f));
        }

        let mut stable: Option<Value> = None;
        let mut natural: Option<Value> = None;
        for (src, tgt, f) in &probes {
            if stable.is_none() {
                let lhs = self.omega(&self.apply_t_obj(src));
                let rhs = self.t(&self.omega(src));
                if lhs != rhs {
                    stable = Some(json!({ "object": src.to_json(), "omega_TX": lhs.row_strings(), "T_omega_X": rhs.row_strings() }));
                }
            }
            if natural.is_none() {
                let lhs = &self.t(f) * &self.omega(src);
                let rhs = &self.omega(tgt) * f;
                if lhs != rhs {
                    natural = Some(json!({
                        "f": f.row_strings(),
                        "T(f)*omega_X": lhs.row_strings(),
                        "omega_Y*f": rhs.row_strings(),
                    }));
                }
            }
        }
        report.push("omega_T_stable", stable.is_none(), stable.unwrap_or(json!({ "samples": probes.len() })));
        report.push("omega_natural", natural.is_none(), natural.unwrap_or(json!({ "samples": probes.len() })));
        report
    }

    /// Verifies the six equalities relating `eta`, `epsilon`, `omega` and
    /// `omega^(-1)` on random objects, plus naturality of `eta` and
    /// `epsilon` on random morphisms.
    pub fn check_adjunction_identities(&self, samples: usize, seed: u64) -> Result<Report> {
        let inv = self.require_inverse()?;
        let mut rng = random::rng(seed);
        let mut failures: [Option<Value>; 8] = Default::default();
        for _ in 0..samples {
            let x = self.random_object(3, &mut rng);
            let tx = self.apply_t_obj(&x);
            let tix = inv.apply_t_inv_obj(&x);
            let checks: [(Matrix, Matrix); 6] = [
                // (1) T(eps_X) . eta_{TX} = Id_{TX}
                (&self.t(&inv.epsilon(&x)) * &inv.eta(&tx), self.id(&tx)),
                // (2) eps_{T^-1 X} . T^-1(eta_X) = Id_{T^-1 X}
                (&inv.epsilon(&tix) * &inv.apply_t_inv(&inv.eta(&x)), self.id(&tix)),
                // (3) T(omega^(-1)_X) . eta_X = omega_X
                (&self.t(&inv.omega_inv(&x)) * &inv.eta(&x), self.omega(&x)),
                // (4) omega_X . eps_X = omega^(-1)_{TX}
                (&self.omega(&x) * &inv.epsilon(&x), inv.omega_inv(&tx)),
                // (5) eps_{T^-1 X} . T^-1(omega_{T^-1 X}) = T^-1(eps_X) . T^-2(omega_X)
                (
                    &inv.epsilon(&tix) * &inv.apply_t_inv(&self.omega(&tix)),
                    &inv.apply_t_inv(&inv.epsilon(&x)) * &inv.apply_t_inv(&inv.apply_t_inv(&self.omega(&x))),
                ),
                // (6) omega_{T^-1 X} = eta_X . omega^(-1)_X
                (self.omega(&tix), &inv.eta(&x) * &inv.omega_inv(&x)),
            ];
            for (k, (lhs, rhs)) in checks.iter().enumerate() {
                if failures[k].is_none() && lhs != rhs {
                    failures[k] = Some(json!({ "object": x.to_json(), "lhs": lhs.row_strings(), "rhs": rhs.row_strings() }));
                }
            }
            let y = self.random_object(3, &mut rng);
            let f = self.random_matrix(&x, &y, 2, &mut rng);
            // eta_Y f = T T^-1 (f) eta_X and f eps_X = eps_Y T^-1 T (f)
            let eta_lhs = &inv.eta(&y) * &f;
            let eta_rhs = &self.t(&inv.apply_t_inv(&f)) * &inv.eta(&x);
            if failures[6].is_none() && eta_lhs != eta_rhs {
                failures[6] = Some(json!({ "f": f.row_strings() }));
            }
            let eps_lhs = &f * &inv.epsilon(&x);
            let eps_rhs = &inv.epsilon(&y) * &inv.apply_t_inv(&self.t(&f));
            if failures[7].is_none() && eps_lhs != eps_rhs {
                failures[7] = Some(json!({ "f": f.row_strings() }));
            }
        }
        let names = ["eq1", "eq2", "eq3", "eq4", "eq5", "eq6", "eta_natural", "epsilon_natural"];
        let mut report = Report::new();
        for (name, fail) in names.iter().zip(failures) {
            let pass = fail.is_none();
            report.push(*name, pass, fail.unwrap_or(json!({ "samples": samples })));
        }
        Ok(report)
    }

    pub fn to_json(&self) -> Value {
        let ring = self.ring();
        let field = match self.field() {
            Field::Rational => json!({ "kind": "Q" }),
            Field::Prime(p) => json!({ "kind": "Fp", "p": p }),
        };
        let mut obj = Map::new();
        obj.insert("kind".into(), json!(self.kind_name()));
        obj.insert("field".into(), field);
        match self.kind() {
            BackendKind::FieldScalar { c } => {
                obj.insert("c".into(), json!(c.to_string()));
            }
            BackendKind::PolyClassical { w } => {
                obj.insert("vars".into(), json!(ring.vars()));
                obj.insert("w".into(), json!(w.to_string()));
            }
            BackendKind::GradedShift { weights, w, .. } => {
                obj.insert("vars".into(), json!(ring.vars()));
                obj.insert("var_degrees".into(), json!(weights));
                obj.insert("w".into(), json!(w.to_string()));
            }
            BackendKind::EndoTwist { phi, w, .. } => {
                obj.insert("vars".into(), json!(ring.vars()));
                let images: Map<String, Value> = ring
                    .vars()
                    .iter()
                    .zip(phi.images())
                    .map(|(v, p)| (v.clone(), json!(p.to_string())))
                    .collect();
                obj.insert("phi".into(), Value::Object(images));
                if !w.is_zero() {
                    obj.insert("w".into(), json!(w.to_string()));
                }
            }
        }
        Value::Object(obj)
    }

    /// Parses the backend schema; errors carry a JSON-pointer location.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::InvalidBackend(what.to_string());
        let obj = v.as_object().ok_or_else(|| bad("/backend: expected an object"))?;
        let kind = obj.get("kind").and_then(Value::as_str).ok_or_else(|| bad("/backend/kind: expected a string"))?;
        let fobj = obj.get("field").and_then(Value::as_object).ok_or_else(|| bad("/backend/field: expected an object"))?;
        let field = match fobj.get("kind").and_then(Value::as_str) {
            Some("Q") => Field::Rational,
            Some("Fp") => {
                let p = fobj.get("p").and_then(Value::as_u64).ok_or_else(|| bad("/backend/field/p: expected an integer"))?;
                Field::prime(p)?
            }
            _ => return Err(bad("/backend/field/kind: expected \"Q\" or \"Fp\"")),
        };
        let vars: Vec<String> = match obj.get("vars") {
            None => Vec::new(),
            Some(Value::Array(a)) => a
                .iter()
                .map(|x| x.as_str().map(str::to_string).ok_or_else(|| bad("/backend/vars: expected strings")))
                .collect::<Result<_>>()?,
            Some(_) => return Err(bad("/backend/vars: expected an array")),
        };
        let poly_field = |key: &str, ring: &RingRef| -> Result<Polynomial> {
            let s = obj.get(key).and_then(Value::as_str).ok_or_else(|| bad(&format!("/backend/{key}: expected a string")))?;
            parse_poly(s, ring)
        };
        match kind {
            "field-scalar" => {
                let ring = Ring::constants(field);
                let s = obj.get("c").and_then(Value::as_str).ok_or_else(|| bad("/backend/c: expected a string"))?;
                Backend::field_scalar(field, parse_scalar(s, &ring)?)
            }
            "poly-classical" => {
                let ring = Ring::new(field, vars)?;
                let w = poly_field("w", &ring)?;
                Backend::poly_classical(&ring, w)
            }
            "graded-shift" => {
                let ring = Ring::new(field, vars)?;
                let weights: Vec<i64> = obj
                    .get("var_degrees")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("/backend/var_degrees: expected an array"))?
                    .iter()
                    .map(|x| x.as_i64().ok_or_else(|| bad("/backend/var_degrees: expected integers")))
                    .collect::<Result<_>>()?;
                let w = poly_field("w", &ring)?;
                Backend::graded_shift(&ring, weights, w)
            }
            "endo-twist" => {
                let ring = Ring::new(field, vars)?;
                let pobj = obj.get("phi").and_then(Value::as_object).ok_or_else(|| bad("/backend/phi: expected an object"))?;
                for k in pobj.keys() {
                    if ring.var_index(k).is_none() {
                        return Err(Error::UnknownVariable(k.clone()));
                    }
                }
                let images = (0..ring.nvars())
                    .map(|i| match pobj.get(&ring.vars()[i]) {
                        None => Ok(Polynomial::var(&ring, i)),
                        Some(Value::String(s)) => parse_poly(s, &ring),
                        Some(_) => Err(bad("/backend/phi: expected polynomial strings")),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let phi = RingMap::new(&ring, images)?;
                let w = if obj.contains_key("w") { poly_field("w", &ring)? } else { Polynomial::zero(&ring) };
                Backend::endo_twist_with_omega(&ring, phi, w)
            }
            other => Err(bad(&format!("/backend/kind: unknown kind `{other}`"))),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

fn check_in_ring(ring: &RingRef, p: &Polynomial) -> Result<()> {
    if crate::algebra::poly::same_ring(p.ring(), ring) {
        Ok(())
    } else {
        Err(Error::RingMismatch("backend element outside its ring".into()))
    }
}

/// Strict quasi-inverse data: `eta` and `epsilon` are identity families.
#[derive(Clone, Copy, Debug)]
pub struct InverseData<'a> {
    backend: &'a Backend,
}

impl InverseData<'_> {
    pub fn apply_t_inv(&self, m: &Matrix) -> Matrix {
        match self.backend.kind() {
            BackendKind::EndoTwist { inverse: Some(inv), .. } if !inv.is_identity() => m.apply_map(inv),
            _ => m.clone(),
        }
    }

    pub fn apply_t_inv_obj(&self, x: &ObjectHandle) -> ObjectHandle {
        self.backend.shift_obj(x, -1)
    }

    pub fn t_inv_pow_obj(&self, x: &ObjectHandle, k: usize) -> ObjectHandle {
        self.backend.shift_obj(x, -(k as i64))
    }

    /// `eta_X: X -> T T^-1 X`.
    pub fn eta(&self, x: &ObjectHandle) -> Matrix {
        self.backend.id(x)
    }

    pub fn eta_inv(&self, x: &ObjectHandle) -> Matrix {
        self.backend.id(x)
    }

    /// `epsilon_X: T^-1 T X -> X`.
    pub fn epsilon(&self, x: &ObjectHandle) -> Matrix {
        self.backend.id(x)
    }

    pub fn epsilon_inv(&self, x: &ObjectHandle) -> Matrix {
        self.backend.id(x)
    }

    /// `omega^(-1)_X = epsilon_X . T^-1(omega_X): T^-1 X -> X`.
    pub fn omega_inv(&self, x: &ObjectHandle) -> Matrix {
        &self.epsilon(x) * &self.apply_t_inv(&self.backend.omega(x))
    }
}

/// The standard test backends, by short name: `fp5` (c = 1), `fp5-c0`,
/// `qxy` (w = xy), `qxy-sq` (w = x^2 + y^2), `graded` (weights 1, 2,
/// w = x^2 y), `graded-11` (w = x^2 - y^2), `twist` (`x -> x^2, y -> y^2`
/// on F5[x,y], not invertible) and `twist-swap` (`x <-> y`, invertible).
pub fn named_backends() -> Vec<(&'static str, Backend)> {
    let f5 = Field::prime(5).expect("5 is prime");
    let q = Ring::new(Field::Rational, vec!["x".into(), "y".into()]).expect("ring");
    let r5 = Ring::new(f5, vec!["x".into(), "y".into()]).expect("ring");
    let p = |s: &str, r: &RingRef| parse_poly(s, r).expect("literal polynomial");
    let swap = RingMap::new(&r5, vec![p("y", &r5), p("x", &r5)]).expect("ring map");
    let square = RingMap::new(&r5, vec![p("x^2", &r5), p("y^2", &r5)]).expect("ring map");
    vec![
        ("fp5", Backend::field_scalar(f5, f5.one()).expect("backend")),
        ("fp5-c0", Backend::field_scalar(f5, f5.zero()).expect("backend")),
        ("qxy", Backend::poly_classical(&q, p("x*y", &q)).expect("backend")),
        ("qxy-sq", Backend::poly_classical(&q, p("x^2 + y^2", &q)).expect("backend")),
        ("graded", Backend::graded_shift(&q, vec![1, 2], p("x^2*y", &q)).expect("backend")),
        ("graded-11", Backend::graded_shift(&q, vec![1, 1], p("x^2 - y^2", &q)).expect("backend")),
        ("twist", Backend::endo_twist(&r5, square).expect("backend")),
        ("twist-swap", Backend::endo_twist(&r5, swap).expect("backend")),
    ]
}

pub fn named_backend(name: &str) -> Option<Backend> {
    named_backends().into_iter().find(|(k, _)| *k == name).map(|(_, b)| b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qxy() -> RingRef {
        Ring::new(Field::Rational, vec!["x".into(), "y".into()]).unwrap()
    }

    fn p(s: &str, r: &RingRef) -> Polynomial {
        parse_poly(s, r).unwrap()
    }

    #[test]
    fn endo_twist_applies_phi() {
        let r = Ring::new(Field::Rational, vec!["x".into()]).unwrap();
        let b = Backend::endo_twist(&r, RingMap::new(&r, vec![p("x^2", &r)]).unwrap()).unwrap();
        let m = Matrix::from_rows(&r, vec![vec![p("x + 1", &r)]], 1).unwrap();
        assert_eq!(b.apply_t(&m).unwrap().get(0, 0).to_string(), "x^2 + 1");
        assert!(b.inverse_data().is_none());
        assert!(b.omega(&b.object(3)).is_zero());
        assert!(matches!(b.check_adjunction_identities(5, 1), Err(Error::NoInverse(_))));
    }

    #[test]
    fn graded_shift_moves_degrees() {
        let r = qxy();
        let b = Backend::graded_shift(&r, vec![1, 1], p("x*y", &r)).unwrap();
        let x = b.graded_object(vec![0]).unwrap();
        assert_eq!(b.apply_t_obj(&x).degrees(), Some(&[2][..]));
        assert!(Backend::graded_shift(&r, vec![1, 1], p("x + y^2", &r)).is_err());
        assert!(Backend::graded_shift(&r, vec![1, 1], Polynomial::zero(&r)).is_err());
        let inv = b.inverse_data().unwrap();
        assert_eq!(inv.omega_inv(&x), b.omega(&x));
    }

    #[test]
    fn omega_examples() {
        let b = Backend::field_scalar(Field::Rational, Field::Rational.one()).unwrap();
        assert!(b.omega(&b.object(2)).is_identity());
        let r = qxy();
        let b = Backend::poly_classical(&r, p("x*y", &r)).unwrap();
        assert_eq!(b.omega(&b.object(1)).get(0, 0).to_string(), "x*y");
    }

    #[test]
    fn twisted_omega_rejected_unless_identity() {
        let r = Ring::new(Field::Rational, vec!["x".into()]).unwrap();
        let phi = RingMap::new(&r, vec![p("x^2", &r)]).unwrap();
        assert!(Backend::endo_twist_with_omega(&r, phi.clone(), p("x", &r)).is_err());
        assert!(Backend::endo_twist_with_omega(&r, RingMap::identity(&r), p("x", &r)).is_ok());
    }

    #[test]
    fn corrupted_backend_reports_probe() {
        let r = Ring::new(Field::Rational, vec!["x".into()]).unwrap();
        let phi = RingMap::new(&r, vec![p("x^2", &r)]).unwrap();
        let b = Backend::endo_twist_unchecked(&r, phi, p("x", &r));
        let rep = b.check_omega_coherence(20, 3);
        let c = rep.find("omega_natural").unwrap();
        assert!(!c.pass);
        assert_eq!(c.detail["f"], json!([["x"]]));
    }

    #[test]
    fn json_roundtrip() {
        let r = qxy();
        let backends = [
            Backend::field_scalar(Field::Prime(5), Field::Prime(5).one()).unwrap(),
            Backend::poly_classical(&r, p("x*y", &r)).unwrap(),
            Backend::graded_shift(&r, vec![1, 2], p("x^2 + y", &r)).unwrap(),
            Backend::endo_twist(&r, RingMap::new(&r, vec![p("x^2", &r), p("y + 1", &r)]).unwrap()).unwrap(),
        ];
        for b in backends {
            let back = Backend::from_json(&b.to_json()).unwrap();
            assert_eq!(back, b);
        }
    }
}

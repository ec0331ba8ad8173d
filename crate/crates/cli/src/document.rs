//! The JSON document format: a backend plus named factorizations, morphisms
//! and homotopies. Serialization is canonical (sorted keys, canonical
//! polynomial printing, two-space indentation, trailing newline), so
//! `save(load(d))` is byte-stable.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use factn_core::algebra::{parse_poly, Matrix};
use factn_core::factcat::{FactMorphism, NFactorization};
use factn_core::homotopy::Homotopy;
use factn_core::{Backend, ObjectHandle};
use serde_json::{json, Map, Value};

use crate::error::CliError;

#[derive(Clone, Debug)]
pub struct NamedMorphism {
    pub from: String,
    pub to: String,
    pub morphism: FactMorphism,
}

#[derive(Clone, Debug)]
pub struct NamedHomotopy {
    pub f: String,
    pub g: String,
    pub homotopy: Homotopy,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub bound: Option<i64>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct Document {
    pub backend: Backend,
    pub factorizations: BTreeMap<String, NFactorization>,
    pub morphisms: BTreeMap<String, NamedMorphism>,
    pub homotopies: BTreeMap<String, NamedHomotopy>,
    pub options: Options,
}

/// Escapes one JSON-pointer reference token.
pub fn pointer_token(s: &str) -> String {
    s.replace('~', "~0").replace('/', "~1")
}

fn schema(pointer: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Schema { pointer: pointer.into(), message: message.into() }
}

fn as_object<'a>(v: &'a Value, ptr: &str) -> Result<&'a Map<String, Value>, CliError> {
    v.as_object().ok_or_else(|| schema(ptr, "expected an object"))
}

fn as_array<'a>(v: &'a Value, ptr: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| schema(ptr, "expected an array"))
}

fn as_str<'a>(v: &'a Value, ptr: &str) -> Result<&'a str, CliError> {
    v.as_str().ok_or_else(|| schema(ptr, "expected a string"))
}

fn as_usize(v: &Value, ptr: &str) -> Result<usize, CliError> {
    v.as_u64().map(|k| k as usize).ok_or_else(|| schema(ptr, "expected a non-negative integer"))
}

fn reject_unknown(obj: &Map<String, Value>, allowed: &[&str], ptr: &str) -> Result<(), CliError> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(schema(format!("{ptr}/{}", pointer_token(k)), "unknown field")),
        None => Ok(()),
    }
}

/// A row-major matrix of polynomial strings with the given shape.
pub fn parse_matrix(v: &Value, backend: &Backend, rows: usize, cols: usize, ptr: &str) -> Result<Matrix, CliError> {
    let ring = backend.ring();
    let arr = as_array(v, ptr)?;
    if arr.len() != rows {
        return Err(schema(ptr, format!("expected {rows} rows, found {}", arr.len())));
    }
    let mut out = Vec::with_capacity(rows);
    for (i, row) in arr.iter().enumerate() {
        let rptr = format!("{ptr}/{i}");
        let cells = as_array(row, &rptr)?;
        if cells.len() != cols {
            return Err(schema(&rptr, format!("expected {cols} entries, found {}", cells.len())));
        }
        let mut parsed = Vec::with_capacity(cols);
        for (j, cell) in cells.iter().enumerate() {
            let cptr = format!("{rptr}/{j}");
            let text = as_str(cell, &cptr)?;
            parsed.push(parse_poly(text, ring).map_err(|e| schema(&cptr, e.to_string()))?);
        }
        out.push(parsed);
    }
    Matrix::from_rows(ring, out, cols).map_err(|e| schema(ptr, e.to_string()))
}

/// `X^j` objects from `ranks` and optional per-object generator degrees.
pub fn parse_objects(backend: &Backend, obj: &Map<String, Value>, ptr: &str) -> Result<Vec<ObjectHandle>, CliError> {
    let ranks_ptr = format!("{ptr}/ranks");
    let ranks = obj.get("ranks").ok_or_else(|| schema(&ranks_ptr, "missing"))?;
    let ranks: Vec<usize> = as_array(ranks, &ranks_ptr)?
        .iter()
        .enumerate()
        .map(|(j, r)| as_usize(r, &format!("{ranks_ptr}/{j}")))
        .collect::<Result<_, _>>()?;
    match obj.get("degrees") {
        None => Ok(ranks.iter().map(|&r| backend.object(r)).collect()),
        Some(degs) => {
            let dptr = format!("{ptr}/degrees");
            if !backend.is_graded() {
                return Err(schema(&dptr, "degrees are only allowed on graded backends"));
            }
            let degs = as_array(degs, &dptr)?;
            if degs.len() != ranks.len() {
                return Err(schema(&dptr, format!("expected {} entries", ranks.len())));
            }
            degs.iter()
                .enumerate()
                .map(|(j, d)| {
                    let p = format!("{dptr}/{j}");
                    let list: Vec<i64> = as_array(d, &p)?
                        .iter()
                        .map(|x| x.as_i64().ok_or_else(|| schema(&p, "expected integers")))
                        .collect::<Result<_, _>>()?;
                    if list.len() != ranks[j] {
                        return Err(schema(&p, format!("expected {} degrees", ranks[j])));
                    }
                    backend.graded_object(list).map_err(|e| schema(&p, e.to_string()))
                })
                .collect()
        }
    }
}

fn parse_factorization(backend: &Backend, v: &Value, ptr: &str) -> Result<NFactorization, CliError> {
    let obj = as_object(v, ptr)?;
    reject_unknown(obj, &["n", "ranks", "d", "degrees"], ptr)?;
    let n = as_usize(obj.get("n").ok_or_else(|| schema(format!("{ptr}/n"), "missing"))?, &format!("{ptr}/n"))?;
    let objects = parse_objects(backend, obj, ptr)?;
    if objects.len() != n {
        return Err(schema(format!("{ptr}/ranks"), format!("expected {n} ranks, found {}", objects.len())));
    }
    let dptr = format!("{ptr}/d");
    let d = as_array(obj.get("d").ok_or_else(|| schema(&dptr, "missing"))?, &dptr)?;
    if d.len() != n {
        return Err(schema(&dptr, format!("expected {n} differentials, found {}", d.len())));
    }
    let diffs = (0..n)
        .map(|j| {
            let tgt = if j + 1 < n { objects[j + 1].clone() } else { backend.apply_t_obj(&objects[0]) };
            parse_matrix(&d[j], backend, tgt.rank(), objects[j].rank(), &format!("{dptr}/{j}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    NFactorization::new(backend, objects, diffs).map_err(|e| CliError::Invalid { pointer: ptr.into(), source: e })
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, v: Option<&Value>, ptr: &str, what: &str) -> Result<(String, &'a T), CliError> {
    let name = as_str(v.ok_or_else(|| schema(ptr, "missing"))?, ptr)?;
    map.get(name).map(|t| (name.to_string(), t)).ok_or_else(|| schema(ptr, format!("unknown {what} `{name}`")))
}

fn parse_morphism(
    facts: &BTreeMap<String, NFactorization>,
    v: &Value,
    ptr: &str,
) -> Result<NamedMorphism, CliError> {
    let obj = as_object(v, ptr)?;
    reject_unknown(obj, &["from", "to", "comps"], ptr)?;
    let (from, x) = lookup(facts, obj.get("from"), &format!("{ptr}/from"), "factorization")?;
    let (to, y) = lookup(facts, obj.get("to"), &format!("{ptr}/to"), "factorization")?;
    if x.n() != y.n() {
        return Err(schema(ptr, format!("source has n = {}, target has n = {}", x.n(), y.n())));
    }
    let cptr = format!("{ptr}/comps");
    let comps = as_array(obj.get("comps").ok_or_else(|| schema(&cptr, "missing"))?, &cptr)?;
    if comps.len() != x.n() {
        return Err(schema(&cptr, format!("expected {} components, found {}", x.n(), comps.len())));
    }
    let comps = comps
        .iter()
        .enumerate()
        .map(|(j, c)| parse_matrix(c, x.backend(), y.object(j).rank(), x.object(j).rank(), &format!("{cptr}/{j}")))
        .collect::<Result<Vec<_>, _>>()?;
    let morphism = FactMorphism::new(x, y, comps).map_err(|e| CliError::Invalid { pointer: ptr.into(), source: e })?;
    Ok(NamedMorphism { from, to, morphism })
}

fn parse_homotopy(morphs: &BTreeMap<String, NamedMorphism>, v: &Value, ptr: &str) -> Result<NamedHomotopy, CliError> {
    let obj = as_object(v, ptr)?;
    reject_unknown(obj, &["f", "g", "s"], ptr)?;
    let (fname, f) = lookup(morphs, obj.get("f"), &format!("{ptr}/f"), "morphism")?;
    let (gname, g) = lookup(morphs, obj.get("g"), &format!("{ptr}/g"), "morphism")?;
    let (x, y) = (f.morphism.source(), f.morphism.target());
    if g.morphism.source() != x || g.morphism.target() != y {
        return Err(schema(ptr, "f and g must be parallel"));
    }
    let sptr = format!("{ptr}/s");
    let s = as_array(obj.get("s").ok_or_else(|| schema(&sptr, "missing"))?, &sptr)?;
    if s.len() != x.n() {
        return Err(schema(&sptr, format!("expected {} components, found {}", x.n(), s.len())));
    }
    let diag = s
        .iter()
        .enumerate()
        .map(|(j, m)| {
            parse_matrix(m, x.backend(), y.object(j).rank(), x.object_ext(j + 1).rank(), &format!("{sptr}/{j}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let homotopy =
        Homotopy::new(&f.morphism, &g.morphism, diag).map_err(|e| CliError::Invalid { pointer: ptr.into(), source: e })?;
    Ok(NamedHomotopy { f: fname, g: gname, homotopy })
}

fn parse_options(v: &Value) -> Result<Options, CliError> {
    let obj = as_object(v, "/options")?;
    reject_unknown(obj, &["bound", "seed"], "/options")?;
    let bound = match obj.get("bound") {
        None => None,
        Some(b) => Some(b.as_i64().ok_or_else(|| schema("/options/bound", "expected an integer"))?),
    };
    let seed = match obj.get("seed") {
        None => None,
        Some(s) => Some(s.as_u64().ok_or_else(|| schema("/options/seed", "expected a non-negative integer"))?),
    };
    Ok(Options { bound, seed })
}

impl Document {
    pub fn new(backend: Backend) -> Self {
        Document {
            backend,
            factorizations: BTreeMap::new(),
            morphisms: BTreeMap::new(),
            homotopies: BTreeMap::new(),
            options: Options::default(),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self, CliError> {
        let obj = as_object(v, "")?;
        reject_unknown(obj, &["backend", "factorizations", "morphisms", "homotopies", "options"], "")?;
        let bv = obj.get("backend").ok_or_else(|| schema("/backend", "missing"))?;
        let backend = Backend::from_json(bv).map_err(|e| CliError::Invalid { pointer: "/backend".into(), source: e })?;
        let mut doc = Document::new(backend);
        let empty = Value::Object(Map::new());

        for (name, fv) in as_object(obj.get("factorizations").unwrap_or(&empty), "/factorizations")? {
            let ptr = format!("/factorizations/{}", pointer_token(name));
            let x = parse_factorization(&doc.backend, fv, &ptr)?;
            doc.factorizations.insert(name.clone(), x);
        }
        for (name, mv) in as_object(obj.get("morphisms").unwrap_or(&empty), "/morphisms")? {
            let ptr = format!("/morphisms/{}", pointer_token(name));
            let m = parse_morphism(&doc.factorizations, mv, &ptr)?;
            doc.morphisms.insert(name.clone(), m);
        }
        for (name, hv) in as_object(obj.get("homotopies").unwrap_or(&empty), "/homotopies")? {
            let ptr = format!("/homotopies/{}", pointer_token(name));
            let h = parse_homotopy(&doc.morphisms, hv, &ptr)?;
            doc.homotopies.insert(name.clone(), h);
        }
        if let Some(o) = obj.get("options") {
            doc.options = parse_options(o)?;
        }
        doc.check_unique_names()?;
        Ok(doc)
    }

    /// Names are shared across the three kinds of payload.
    fn check_unique_names(&self) -> Result<(), CliError> {
        let mut seen = BTreeSet::new();
        let all = self
            .factorizations
            .keys()
            .map(|k| ("factorizations", k))
            .chain(self.morphisms.keys().map(|k| ("morphisms", k)))
            .chain(self.homotopies.keys().map(|k| ("homotopies", k)));
        for (kind, name) in all {
            if !seen.insert(name) {
                return Err(schema(format!("/{kind}/{}", pointer_token(name)), "name already used"));
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let v: Value = serde_json::from_str(text).map_err(|e| schema("", format!("malformed JSON: {e}")))?;
        Self::from_json(&v)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        fs::write(path, self.to_canonical_string()).map_err(|e| CliError::io(path, e))
    }

    pub fn to_json(&self) -> Value {
        let facts: Map<String, Value> = self.factorizations.iter().map(|(k, x)| (k.clone(), x.to_json())).collect();
        let morphs: Map<String, Value> =
            self.morphisms.iter().map(|(k, m)| (k.clone(), m.morphism.to_json(&m.from, &m.to))).collect();
        let homs: Map<String, Value> =
            self.homotopies.iter().map(|(k, h)| (k.clone(), h.homotopy.to_json(&h.f, &h.g))).collect();
        let mut out = Map::new();
        out.insert("backend".into(), self.backend.to_json());
        out.insert("factorizations".into(), Value::Object(facts));
        out.insert("morphisms".into(), Value::Object(morphs));
        out.insert("homotopies".into(), Value::Object(homs));
        let mut opts = Map::new();
        if let Some(b) = self.options.bound {
            opts.insert("bound".into(), json!(b));
        }
        if let Some(s) = self.options.seed {
            opts.insert("seed".into(), json!(s));
        }
        if !opts.is_empty() {
            out.insert("options".into(), Value::Object(opts));
        }
        Value::Object(out)
    }

    pub fn to_canonical_string(&self) -> String {
        canonical_string(&self.to_json())
    }

    /// The factorization called `name`, or the only one when `name` is absent.
    pub fn factorization(&self, name: Option<&str>) -> Result<(String, &NFactorization), CliError> {
        pick(&self.factorizations, name, "factorization")
    }

    pub fn morphism(&self, name: Option<&str>) -> Result<(String, &NamedMorphism), CliError> {
        pick(&self.morphisms, name, "morphism")
    }

    pub fn homotopy(&self, name: Option<&str>) -> Result<(String, &NamedHomotopy), CliError> {
        pick(&self.homotopies, name, "homotopy")
    }

    fn taken(&self, name: &str) -> bool {
        self.factorizations.contains_key(name) || self.morphisms.contains_key(name) || self.homotopies.contains_key(name)
    }

    /// Adds a factorization, reusing the name of an equal one already present.
    pub fn add_factorization(&mut self, name: &str, x: &NFactorization) -> Result<String, CliError> {
        if let Some((k, _)) = self.factorizations.iter().find(|(_, y)| *y == x) {
            return Ok(k.clone());
        }
        self.claim(name)?;
        self.factorizations.insert(name.to_string(), x.clone());
        Ok(name.to_string())
    }

    /// Adds a morphism together with whatever objects it needs; `name` also
    /// prefixes generated object names.
    pub fn add_morphism(&mut self, name: &str, f: &FactMorphism) -> Result<String, CliError> {
        let from = self.add_factorization(&format!("{name}.source"), f.source())?;
        let to = self.add_factorization(&format!("{name}.target"), f.target())?;
        self.claim(name)?;
        self.morphisms.insert(name.to_string(), NamedMorphism { from, to, morphism: f.clone() });
        Ok(name.to_string())
    }

    pub fn add_homotopy(&mut self, name: &str, h: &Homotopy) -> Result<String, CliError> {
        let f = self.existing_or_new_morphism(&format!("{name}.f"), &h.f)?;
        let g = self.existing_or_new_morphism(&format!("{name}.g"), &h.g)?;
        self.claim(name)?;
        self.homotopies.insert(name.to_string(), NamedHomotopy { f, g, homotopy: h.clone() });
        Ok(name.to_string())
    }

    fn existing_or_new_morphism(&mut self, name: &str, f: &FactMorphism) -> Result<String, CliError> {
        let found = self
            .morphisms
            .iter()
            .find(|(_, m)| m.morphism.source() == f.source() && m.morphism.target() == f.target() && m.morphism.same_comps(f));
        match found {
            Some((k, _)) => Ok(k.clone()),
            None => self.add_morphism(name, f),
        }
    }

    fn claim(&self, name: &str) -> Result<(), CliError> {
        if self.taken(name) {
            return Err(CliError::Usage(format!("result name `{name}` is already used in the document")));
        }
        Ok(())
    }
}

fn pick<'a, T>(map: &'a BTreeMap<String, T>, name: Option<&str>, what: &str) -> Result<(String, &'a T), CliError> {
    match name {
        Some(n) => map
            .get(n)
            .map(|t| (n.to_string(), t))
            .ok_or_else(|| CliError::Usage(format!("no {what} named `{n}` in the document"))),
        None if map.len() == 1 => {
            let (k, v) = map.iter().next().unwrap();
            Ok((k.clone(), v))
        }
        None => Err(CliError::Usage(format!("the document has {} {what} entries; name one", map.len()))),
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn canonical_string(v: &Value) -> String {
    // serde_json's default map is ordered by key, so this already sorts
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

//! Subcommand definitions and their handlers. Each handler turns a loaded
//! document into an [`Outcome`]; [`crate::run`] wraps it in the report
//! envelope.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use factn_core::algebra::Matrix;
use factn_core::factcat::{
    cokernel, direct_sum, is_conflation, is_deflation, is_inflation, is_isomorphism, kernel, pullback_deflation,
    pushout_inflation, random_factorization, validate_factorization, validate_morphism, Conflation, FactMorphism,
    NFactorization,
};
use factn_core::frobenius::{
    adjunction_suite, canonical_deflation, canonical_inflation, project, project_morphism, stably_zero, test_injective,
    test_projective, theta0, theta1, theta_s, transpose_backward, transpose_forward, AdjunctionId, CoverMode,
    Direction, Side,
};
use factn_core::homotopy::{default_bound, homotopy_classes_respect_ops, is_contractible, solve_homotopy, verify_homotopy};
use factn_core::parallel::Execution;
use factn_core::random::sample_seed;
use factn_core::triangles::{
    cone_homotopy_iso, cone_iso_checks, cone_triangle, contract_identity_cone, fill_checks, fill_morphism, octahedron,
    octahedron_checks, rotate, rotation_checks, run_axiom_suite, suspend, suspend_homotopy, suspend_morphism,
    unsuspend, ConeIsoForm,
};
use factn_core::{Backend, ObjectHandle, Report, Verdict};
use serde_json::{json, Map, Value};

use crate::document::{parse_matrix, Document};
use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "factn", version, about = "Exact computations with n-fold matrix factorizations")]
pub struct Cli {
    /// Seed for randomized subcommands (required by `suite` and `adjoint-identities`).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Degree bound for polynomial searches.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub bound: Option<i64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Number of random samples.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Also write the result document on its own.
    #[arg(long, global = true, value_name = "PATH")]
    pub emit: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// Input document.
    #[arg(value_name = "DOC")]
    pub doc: Option<PathBuf>,
    /// Input document (alternative to the positional form).
    #[arg(long = "input", visible_alias = "backend", value_name = "DOC", conflicts_with = "doc")]
    pub input: Option<PathBuf>,
}

impl Input {
    pub fn path(&self) -> Result<&PathBuf, CliError> {
        self.doc.as_ref().or(self.input.as_ref()).ok_or_else(|| CliError::Usage("an input document is required".into()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteKind {
    /// Suspension and the four axioms on random instances.
    Axioms,
    /// Transpose round trips and naturality for the four adjunctions.
    Adjunctions,
    /// Homotopy is a congruence for sums and composition.
    HomotopyClasses,
    /// Random factorizations, validated and returned.
    Generate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Paper,
    Full,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Load, validate and canonicalize a document.
    Validate {
        #[command(flatten)]
        input: Input,
        /// Also check graded homogeneity of all differentials and components.
        #[arg(long)]
        homogeneous: bool,
        /// Test these morphisms for invertibility.
        #[arg(long, value_name = "MORPHISM")]
        iso: Vec<String>,
    },
    /// Direct sum with its injections and projections.
    Sum {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value = "sum")]
        name: String,
    },
    /// Suspension of an object, morphism or homotopy, or the shift S of an object.
    Suspend {
        #[command(flatten)]
        input: Input,
        #[arg(long, conflicts_with_all = ["f", "homotopy"])]
        x: Option<String>,
        #[arg(long, conflicts_with = "homotopy")]
        f: Option<String>,
        #[arg(long)]
        homotopy: Option<String>,
        /// Apply the unsigned shift S instead of the suspension.
        #[arg(long, conflicts_with_all = ["f", "homotopy"])]
        shift: bool,
        #[arg(long, default_value = "suspended")]
        name: String,
    },
    /// Inverse suspension; needs an invertible T.
    Unsuspend {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        x: Option<String>,
        #[arg(long, default_value = "unsuspended")]
        name: String,
    },
    /// Mapping cone and standard triangle, the contraction of C(id), or the cone isomorphism of a homotopy.
    Cone {
        #[command(flatten)]
        input: Input,
        #[arg(long, conflicts_with_all = ["identity", "homotopy"])]
        f: Option<String>,
        /// Cone of the identity of this factorization, with its contraction.
        #[arg(long, conflicts_with = "homotopy")]
        identity: Option<String>,
        /// Isomorphism C(f) -> C(g) induced by a homotopy f ~ g.
        #[arg(long)]
        homotopy: Option<String>,
        /// Use the block form with a zero corner instead of the identity.
        #[arg(long, requires = "homotopy")]
        printed: bool,
        #[arg(long, default_value = "cone")]
        name: String,
    },
    /// Rotation of the standard triangle of f.
    Rotate {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        f: Option<String>,
        #[arg(long, default_value = "rot")]
        name: String,
    },
    /// Morphism of cones from a square commuting up to a homotopy.
    Fill {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        f1: String,
        #[arg(long)]
        f2: String,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        /// Homotopy beta f1 ~ f2 alpha.
        #[arg(long)]
        homotopy: String,
        #[arg(long, default_value = "fill")]
        name: String,
    },
    /// Octahedral data for composable f, g.
    Octahedron {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long, default_value = "oct")]
        name: String,
    },
    /// Verify a homotopy witness or search for one.
    Homotopy {
        #[command(flatten)]
        input: Input,
        #[arg(long, conflicts_with = "solve", required_unless_present = "solve")]
        verify: bool,
        #[arg(long)]
        solve: bool,
        /// Witness to verify.
        #[arg(long, conflicts_with = "solve")]
        h: Option<String>,
        #[arg(long, requires = "solve")]
        f: Option<String>,
        #[arg(long, requires = "solve")]
        g: Option<String>,
        #[arg(long, default_value = "witness")]
        name: String,
    },
    /// Whether id ~ 0.
    Contractible {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        x: Option<String>,
        #[arg(long, default_value = "contraction")]
        name: String,
    },
    /// Kernel of a morphism, optionally factoring another morphism through it.
    Kernel {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        f: Option<String>,
        #[arg(long, value_name = "MORPHISM")]
        factor: Option<String>,
        #[arg(long, default_value = "ker")]
        name: String,
    },
    /// Cokernel of a morphism, optionally factoring another morphism through it.
    Cokernel {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        f: Option<String>,
        #[arg(long, value_name = "MORPHISM")]
        factor: Option<String>,
        #[arg(long, default_value = "coker")]
        name: String,
    },
    /// Test a pair for being a conflation, and lift or extend along it.
    Conflation {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        l: String,
        #[arg(long)]
        p: String,
        /// Lift `--f: P -> target of p` along p.
        #[arg(long, value_name = "FACTORIZATION", requires = "f", conflicts_with = "injective")]
        projective: Option<String>,
        /// Extend `--f: source of l -> I` along l.
        #[arg(long, value_name = "FACTORIZATION", requires = "f")]
        injective: Option<String>,
        #[arg(long)]
        f: Option<String>,
        #[arg(long, default_value = "lift")]
        name: String,
    },
    /// Pullback of a deflation along a morphism.
    Pullback {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        p: String,
        #[arg(long)]
        f: String,
        #[arg(long, default_value = "pb")]
        name: String,
    },
    /// Pushout of an inflation along a morphism.
    Pushout {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        l: String,
        #[arg(long)]
        f: String,
        #[arg(long, default_value = "po")]
        name: String,
    },
    /// The object theta^s(C), or the projection of an object or morphism to index s.
    Theta {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        s: usize,
        #[arg(long, required_unless_present_any = ["x", "f"])]
        n: Option<usize>,
        /// Rank of C.
        #[arg(long, conflicts_with = "degrees")]
        rank: Option<usize>,
        /// Generator degrees of C (graded backends), comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        degrees: Option<Vec<i64>>,
        /// Project this factorization instead.
        #[arg(long, conflicts_with_all = ["f", "n"])]
        x: Option<String>,
        /// Project this morphism instead.
        #[arg(long, conflicts_with = "n")]
        f: Option<String>,
        #[arg(long, default_value = "theta")]
        name: String,
    },
    /// Transpose along one of the four adjunctions.
    Transpose {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        adj: u8,
        #[arg(long, value_parser = ["fwd", "bwd"])]
        dir: String,
        /// Factorization X (forward).
        #[arg(long)]
        x: Option<String>,
        /// Matrix g as JSON rows of polynomial strings (forward).
        #[arg(long)]
        g: Option<String>,
        /// Rank of C (forward).
        #[arg(long, conflicts_with = "degrees")]
        rank: Option<usize>,
        /// Generator degrees of C (forward, graded backends).
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        degrees: Option<Vec<i64>>,
        /// Morphism to transpose back (backward).
        #[arg(long)]
        m: Option<String>,
        #[arg(long, default_value = "transposed")]
        name: String,
    },
    /// Canonical deflation onto X or inflation out of X.
    Frobenius {
        #[command(flatten)]
        input: Input,
        #[arg(long, conflicts_with = "inflation", required_unless_present = "inflation")]
        deflation: bool,
        #[arg(long)]
        inflation: bool,
        #[arg(long, value_enum, default_value = "full")]
        mode: Mode,
        #[arg(long)]
        x: Option<String>,
        #[arg(long, default_value = "cover")]
        name: String,
    },
    /// Whether a morphism factors through a projective-injective object.
    StablyZero {
        #[command(flatten)]
        input: Input,
        #[arg(long, conflicts_with = "x")]
        f: Option<String>,
        /// Test the identity of this factorization.
        #[arg(long)]
        x: Option<String>,
        #[arg(long, default_value = "through")]
        name: String,
    },
    /// The identities relating T, its inverse and omega on random samples.
    AdjointIdentities {
        #[command(flatten)]
        input: Input,
    },
    /// Seeded randomized suites over the document's backend.
    Suite {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, value_enum, default_value = "axioms")]
        kind: SuiteKind,
        /// Run samples on the calling thread.
        #[arg(long)]
        sequential: bool,
        /// Largest rank for generated objects.
        #[arg(long, default_value_t = 3)]
        max_rank: usize,
    },
}

/// Which library operations each subcommand exposes.
pub const COMMAND_TABLE: &[(&str, &[&str])] = &[
    (
        "validate",
        &[
            "load_document",
            "save_document",
            "parse_poly",
            "mat_mul",
            "validate_factorization",
            "validate_morphism",
            "is_isomorphism",
        ],
    ),
    ("sum", &["direct_sum"]),
    ("suspend", &["suspend", "suspend_morphism", "suspend_homotopy", "shift_S"]),
    ("unsuspend", &["unsuspend", "inverse_data"]),
    ("cone", &["mapping_cone", "cone_triangle", "contract_identity_cone", "cone_homotopy_iso"]),
    ("rotate", &["rotate"]),
    ("fill", &["fill_morphism"]),
    ("octahedron", &["octahedron"]),
    ("homotopy", &["verify_homotopy", "solve_homotopy", "bounded_poly_solve"]),
    ("contractible", &["is_contractible"]),
    ("kernel", &["kernel", "field_solve"]),
    ("cokernel", &["cokernel"]),
    ("conflation", &["is_conflation", "test_projective", "test_injective"]),
    ("pullback", &["pullback_deflation"]),
    ("pushout", &["pushout_inflation"]),
    ("theta", &["theta0", "theta1", "theta_s", "project"]),
    ("transpose", &["transpose"]),
    ("frobenius", &["canonical_deflation", "canonical_inflation"]),
    ("stably-zero", &["stably_zero"]),
    ("adjoint-identities", &["check_adjunction_identities", "check_omega_coherence", "apply_T", "omega"]),
    ("suite", &["run_axiom_suite", "homotopy_classes_respect_ops", "random_factorization", "run_command"]),
];

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Sum { .. } => "sum",
            Command::Suspend { .. } => "suspend",
            Command::Unsuspend { .. } => "unsuspend",
            Command::Cone { .. } => "cone",
            Command::Rotate { .. } => "rotate",
            Command::Fill { .. } => "fill",
            Command::Octahedron { .. } => "octahedron",
            Command::Homotopy { .. } => "homotopy",
            Command::Contractible { .. } => "contractible",
            Command::Kernel { .. } => "kernel",
            Command::Cokernel { .. } => "cokernel",
            Command::Conflation { .. } => "conflation",
            Command::Pullback { .. } => "pullback",
            Command::Pushout { .. } => "pushout",
            Command::Theta { .. } => "theta",
            Command::Transpose { .. } => "transpose",
            Command::Frobenius { .. } => "frobenius",
            Command::StablyZero { .. } => "stably-zero",
            Command::AdjointIdentities { .. } => "adjoint-identities",
            Command::Suite { .. } => "suite",
        }
    }

    pub fn input(&self) -> &Input {
        match self {
            Command::Validate { input, .. }
            | Command::Sum { input, .. }
            | Command::Suspend { input, .. }
            | Command::Unsuspend { input, .. }
            | Command::Cone { input, .. }
            | Command::Rotate { input, .. }
            | Command::Fill { input, .. }
            | Command::Octahedron { input, .. }
            | Command::Homotopy { input, .. }
            | Command::Contractible { input, .. }
            | Command::Kernel { input, .. }
            | Command::Cokernel { input, .. }
            | Command::Conflation { input, .. }
            | Command::Pullback { input, .. }
            | Command::Pushout { input, .. }
            | Command::Theta { input, .. }
            | Command::Transpose { input, .. }
            | Command::Frobenius { input, .. }
            | Command::StablyZero { input, .. }
            | Command::AdjointIdentities { input }
            | Command::Suite { input, .. } => input,
        }
    }
}

/// What a handler produces before it is wrapped in the report envelope.
#[derive(Debug, Default)]
pub struct Outcome {
    pub report: Report,
    pub result: Option<Document>,
    /// Outputs that are not document payloads: matrices, objects, verdicts.
    pub values: Map<String, Value>,
    /// Everything besides the document that determined the run.
    pub params: Map<String, Value>,
    pub seed: Option<u64>,
}

/// Resolved global options.
#[derive(Clone, Copy, Debug)]
pub struct Globals {
    pub seed: Option<u64>,
    pub bound: Option<i64>,
    pub samples: Option<usize>,
}

impl Globals {
    fn seed(&self, command: &str) -> Result<u64, CliError> {
        self.seed.ok_or_else(|| CliError::Usage(format!("`{command}` is randomized and needs --seed")))
    }
}

fn push(r: &mut Report, name: &str, pass: bool) {
    r.push(name, pass, Value::Null);
}

fn verdict_check(r: &mut Report, name: &str, v: Verdict) {
    r.push(name, v == Verdict::True, json!(v.as_str()));
}

fn base_object(b: &Backend, rank: Option<usize>, degrees: &Option<Vec<i64>>) -> Result<ObjectHandle, CliError> {
    match (rank, degrees) {
        (_, Some(d)) => Ok(b.graded_object(d.clone())?),
        (Some(r), None) => Ok(b.object(r)),
        (None, None) => Err(CliError::Usage("pass --rank or --degrees for C".into())),
    }
}

fn matrix_arg(b: &Backend, text: &str, rows: usize, cols: usize) -> Result<Matrix, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Usage(format!("--g is not JSON: {e}")))?;
    parse_matrix(&v, b, rows, cols, "--g")
}

fn cover_mode(m: Mode) -> CoverMode {
    match m {
        Mode::Paper => CoverMode::Paper,
        Mode::Full => CoverMode::Full,
    }
}

pub fn execute(command: &Command, doc: &Document, g: Globals) -> Result<Outcome, CliError> {
    let b = doc.backend.clone();
    let bound = g.bound.or(doc.options.bound);
    let mut out = Outcome::default();
    let mut res = doc.clone();
    let mut r = Report::new();
    let mut param = |k: &str, v: Value| {
        out.params.insert(k.to_string(), v);
    };
    if let Some(bd) = bound {
        param("bound", json!(bd));
    }

    match command {
        Command::Validate { homogeneous, iso, .. } => {
            param("homogeneous", json!(homogeneous));
            param("iso", json!(iso));
            for (name, x) in &doc.factorizations {
                let prefix = format!("factorization:{name}");
                r.absorb_prefixed(&prefix, validate_factorization(&b, x.objects().to_vec(), x.diffs().to_vec())?);
                if *homogeneous {
                    r.absorb_prefixed(&prefix, x.check_homogeneous());
                }
            }
            for (name, m) in &doc.morphisms {
                let prefix = format!("morphism:{name}");
                r.absorb_prefixed(&prefix, validate_morphism(&m.morphism));
                if *homogeneous {
                    let f = &m.morphism;
                    for j in 0..f.n() {
                        let ok = b.is_homogeneous(f.comp(j), f.source().object(j), f.target().object(j));
                        push(&mut r, &format!("{prefix}.homogeneous[{j}]"), ok);
                    }
                }
            }
            for name in iso {
                let (_, m) = doc.morphism(Some(name))?;
                let (ok, inv) = is_isomorphism(&m.morphism);
                push(&mut r, &format!("morphism:{name}.isomorphism"), ok);
                if let Some(inv) = inv {
                    res.add_morphism(&format!("{name}.inverse"), &inv)?;
                }
            }
            let text = doc.to_canonical_string();
            let again = Document::parse(&text).map(|d| d.to_canonical_string() == text).unwrap_or(false);
            push(&mut r, "document.round_trip", again);
        }
        Command::Sum { x, y, name, .. } => {
            param("x", json!(x));
            param("y", json!(y));
            let (_, xo) = doc.factorization(Some(x))?;
            let (_, yo) = doc.factorization(Some(y))?;
            let s = direct_sum(xo, yo)?;
            r.absorb_prefixed("sum", s.sum.validate());
            push(&mut r, "proj1_inj1_id", FactMorphism::compose(&s.proj1, &s.inj1)?.is_identity());
            push(&mut r, "proj2_inj2_id", FactMorphism::compose(&s.proj2, &s.inj2)?.is_identity());
            push(&mut r, "proj1_inj2_zero", FactMorphism::compose(&s.proj1, &s.inj2)?.is_zero());
            push(&mut r, "proj2_inj1_zero", FactMorphism::compose(&s.proj2, &s.inj1)?.is_zero());
            let split = FactMorphism::compose(&s.inj1, &s.proj1)?.add(&FactMorphism::compose(&s.inj2, &s.proj2)?)?;
            push(&mut r, "split_id", split.is_identity());
            res.add_factorization(name, &s.sum)?;
            for (suffix, m) in [("inj1", &s.inj1), ("inj2", &s.inj2), ("proj1", &s.proj1), ("proj2", &s.proj2)] {
                res.add_morphism(&format!("{name}.{suffix}"), m)?;
            }
        }
        Command::Suspend { x, f, homotopy, shift, name, .. } => {
            param("shift", json!(shift));
            if let Some(h) = homotopy {
                param("homotopy", json!(h));
                let (_, nh) = doc.homotopy(Some(h))?;
                let sh = suspend_homotopy(&nh.homotopy)?;
                r.absorb_prefixed("homotopy", sh.verify());
                res.add_homotopy(name, &sh)?;
            } else if let Some(f) = f {
                param("f", json!(f));
                let (_, m) = doc.morphism(Some(f))?;
                let sf = suspend_morphism(&m.morphism)?;
                r.absorb_prefixed("morphism", sf.validate());
                res.add_morphism(name, &sf)?;
            } else {
                let (xn, xo) = doc.factorization(x.as_deref())?;
                param("x", json!(xn));
                let sx = if *shift { xo.shift_s() } else { suspend(xo)? };
                r.absorb_prefixed("object", sx.validate());
                res.add_factorization(name, &sx)?;
            }
        }
        Command::Unsuspend { x, name, .. } => {
            let (xn, xo) = doc.factorization(x.as_deref())?;
            param("x", json!(xn));
            let u = unsuspend(xo)?;
            r.absorb_prefixed("object", u.validate());
            push(&mut r, "sigma_unsuspend", suspend(&u)? == *xo);
            push(&mut r, "unsuspend_sigma", unsuspend(&suspend(xo)?)? == *xo);
            res.add_factorization(name, &u)?;
        }
        Command::Cone { f, identity, homotopy, printed, name, .. } => {
            if let Some(h) = homotopy {
                param("homotopy", json!(h));
                param("printed", json!(printed));
                let (_, nh) = doc.homotopy(Some(h))?;
                let form = if *printed { ConeIsoForm::Printed } else { ConeIsoForm::Corrected };
                let (lambda, mu) = cone_homotopy_iso(&nh.homotopy, form)?;
                r.absorb_prefixed("witness", nh.homotopy.verify());
                r.absorb(cone_iso_checks(&nh.homotopy, &lambda, &mu)?, None);
                res.add_morphism(&format!("{name}.lambda"), &lambda)?;
                res.add_morphism(&format!("{name}.mu"), &mu)?;
            } else if let Some(xn) = identity {
                param("identity", json!(xn));
                let (_, xo) = doc.factorization(Some(xn))?;
                let (cd, h) = contract_identity_cone(xo)?;
                r.absorb_prefixed("cone", cd.validate());
                r.absorb_prefixed("contraction", h.verify());
                res.add_factorization(name, &cd.cone)?;
                res.add_morphism(&format!("{name}.i"), &cd.inject)?;
                res.add_morphism(&format!("{name}.pi"), &cd.project)?;
                res.add_homotopy(&format!("{name}.contraction"), &h)?;
            } else {
                let (fname, m) = doc.morphism(f.as_deref())?;
                param("f", json!(fname));
                let (cd, tri) = cone_triangle(&m.morphism)?;
                r.absorb_prefixed("cone", cd.validate());
                r.absorb_prefixed("triangle", tri.validate());
                res.add_factorization(name, &cd.cone)?;
                res.add_morphism(&format!("{name}.i"), &cd.inject)?;
                res.add_morphism(&format!("{name}.pi"), &cd.project)?;
                res.add_morphism(&format!("{name}.h"), &tri.h)?;
            }
        }
        Command::Rotate { f, name, .. } => {
            let (fname, m) = doc.morphism(f.as_deref())?;
            param("f", json!(fname));
            let rot = rotate(&m.morphism)?;
            r.absorb(rotation_checks(&rot)?, None);
            res.add_morphism(&format!("{name}.alpha"), &rot.alpha)?;
            res.add_morphism(&format!("{name}.beta"), &rot.beta)?;
            res.add_morphism(&format!("{name}.g"), &rot.rotated.g)?;
            res.add_morphism(&format!("{name}.h"), &rot.rotated.h)?;
            res.add_homotopy(&format!("{name}.witness_ab"), &rot.witness_ab)?;
            res.add_homotopy(&format!("{name}.witness_nat"), &rot.witness_nat)?;
        }
        Command::Fill { f1, f2, alpha, beta, homotopy, name, .. } => {
            for (k, v) in [("f1", f1), ("f2", f2), ("alpha", alpha), ("beta", beta), ("homotopy", homotopy)] {
                param(k, json!(v));
            }
            let m = |n: &str| doc.morphism(Some(n)).map(|(_, m)| m.morphism.clone());
            let (f1, f2, alpha, beta) = (m(f1)?, m(f2)?, m(alpha)?, m(beta)?);
            let (_, h) = doc.homotopy(Some(homotopy))?;
            let (c1, c2, gamma) = fill_morphism(&f1, &f2, &alpha, &beta, &h.homotopy)?;
            r.absorb(fill_checks(&c1, &c2, &gamma, &alpha, &beta)?, None);
            res.add_morphism(name, &gamma)?;
        }
        Command::Octahedron { f, g: gname, name, .. } => {
            param("f", json!(f));
            param("g", json!(gname));
            let (_, fm) = doc.morphism(Some(f))?;
            let (_, gm) = doc.morphism(Some(gname))?;
            let oct = octahedron(&fm.morphism, &gm.morphism)?;
            r.absorb(octahedron_checks(&fm.morphism, &gm.morphism, &oct)?, None);
            for (suffix, m) in [
                ("alpha", &oct.alpha),
                ("beta", &oct.beta),
                ("gamma", &oct.gamma),
                ("sigma", &oct.sigma),
                ("tau", &oct.tau),
            ] {
                res.add_morphism(&format!("{name}.{suffix}"), m)?;
            }
            res.add_homotopy(&format!("{name}.w_sigma_tau"), &oct.w_sigma_tau)?;
            res.add_homotopy(&format!("{name}.w_i_alpha"), &oct.w_i_alpha)?;
        }
        Command::Homotopy { solve, h, f, g: gname, name, .. } => {
            if *solve {
                let (fname, fm) = doc.morphism(f.as_deref())?;
                let (gn, gm) = doc.morphism(gname.as_deref())?;
                param("f", json!(fname));
                param("g", json!(gn));
                let bd = bound.unwrap_or_else(|| default_bound(&fm.morphism, &gm.morphism));
                param("effective_bound", json!(bd));
                match solve_homotopy(&fm.morphism, &gm.morphism, bd)? {
                    Some(w) => {
                        push(&mut r, "homotopic", true);
                        res.add_homotopy(name, &w)?;
                    }
                    None => {
                        let v = if b.is_field() { Verdict::False } else { Verdict::Unknown };
                        verdict_check(&mut r, "homotopic", v);
                    }
                }
            } else {
                let (hn, nh) = doc.homotopy(h.as_deref())?;
                param("h", json!(hn));
                r.absorb_prefixed("homotopy", verify_homotopy(&nh.homotopy));
            }
        }
        Command::Contractible { x, name, .. } => {
            let (xn, xo) = doc.factorization(x.as_deref())?;
            param("x", json!(xn));
            let id = FactMorphism::identity(xo);
            let bd = bound.unwrap_or_else(|| default_bound(&id, &id));
            param("effective_bound", json!(bd));
            let (v, w) = is_contractible(xo, bd)?;
            verdict_check(&mut r, "contractible", v);
            if let Some(w) = w {
                res.add_homotopy(name, &w)?;
            }
        }
        Command::Kernel { f, factor, name, .. } => {
            let (fname, fm) = doc.morphism(f.as_deref())?;
            param("f", json!(fname));
            let k = kernel(&fm.morphism)?;
            r.absorb_prefixed("object", k.object().validate());
            push(&mut r, "composite_zero", FactMorphism::compose(&fm.morphism, &k.k)?.is_zero());
            push(&mut r, "inflation", is_inflation(&k.k)?);
            res.add_factorization(name, k.object())?;
            res.add_morphism(&format!("{name}.k"), &k.k)?;
            if let Some(gn) = factor {
                param("factor", json!(gn));
                let (_, gm) = doc.morphism(Some(gn))?;
                let fac = k.factor(&gm.morphism)?;
                push(&mut r, "factor.commutes", FactMorphism::compose(&k.k, &fac.h)?.same_comps(&gm.morphism));
                push(&mut r, "factor.unique", fac.unique);
                res.add_morphism(&format!("{name}.factor"), &fac.h)?;
            }
        }
        Command::Cokernel { f, factor, name, .. } => {
            let (fname, fm) = doc.morphism(f.as_deref())?;
            param("f", json!(fname));
            let c = cokernel(&fm.morphism)?;
            r.absorb_prefixed("object", c.object().validate());
            push(&mut r, "composite_zero", FactMorphism::compose(&c.q, &fm.morphism)?.is_zero());
            push(&mut r, "deflation", is_deflation(&c.q)?);
            res.add_factorization(name, c.object())?;
            res.add_morphism(&format!("{name}.q"), &c.q)?;
            if let Some(gn) = factor {
                param("factor", json!(gn));
                let (_, gm) = doc.morphism(Some(gn))?;
                let fac = c.factor(&gm.morphism)?;
                push(&mut r, "factor.commutes", FactMorphism::compose(&fac.h, &c.q)?.same_comps(&gm.morphism));
                push(&mut r, "factor.unique", fac.unique);
                res.add_morphism(&format!("{name}.factor"), &fac.h)?;
            }
        }
        Command::Conflation { l, p, projective, injective, f, name, .. } => {
            param("l", json!(l));
            param("p", json!(p));
            let (_, lm) = doc.morphism(Some(l))?;
            let (_, pm) = doc.morphism(Some(p))?;
            let conf = Conflation::new(lm.morphism.clone(), pm.morphism.clone())?;
            r.absorb_prefixed("conflation", is_conflation(&conf)?);
            let bd = bound.unwrap_or(0);
            if let Some(fname) = f {
                param("f", json!(fname));
                let (_, fm) = doc.morphism(Some(fname))?;
                let (label, lift) = if let Some(pn) = projective {
                    param("projective", json!(pn));
                    let (_, po) = doc.factorization(Some(pn))?;
                    ("lift", test_projective(po, &conf, &fm.morphism, bd)?)
                } else {
                    let inn = injective.as_ref().expect("clap requires --projective or --injective with --f");
                    param("injective", json!(inn));
                    let (_, io) = doc.factorization(Some(inn))?;
                    ("extension", test_injective(io, &conf, &fm.morphism, bd)?)
                };
                r.push(label, lift.found().is_some(), lift.describe());
                if let Some(m) = lift.found() {
                    res.add_morphism(name, m)?;
                }
            }
        }
        Command::Pullback { p, f, name, .. } => {
            param("p", json!(p));
            param("f", json!(f));
            let (_, pm) = doc.morphism(Some(p))?;
            let (_, fm) = doc.morphism(Some(f))?;
            let pb = pullback_deflation(&pm.morphism, &fm.morphism)?;
            r.absorb(pb.report.clone(), None);
            res.add_factorization(name, pb.object())?;
            res.add_morphism(&format!("{name}.p1"), &pb.p1)?;
            res.add_morphism(&format!("{name}.f1"), &pb.f1)?;
        }
        Command::Pushout { l, f, name, .. } => {
            param("l", json!(l));
            param("f", json!(f));
            let (_, lm) = doc.morphism(Some(l))?;
            let (_, fm) = doc.morphism(Some(f))?;
            let po = pushout_inflation(&lm.morphism, &fm.morphism)?;
            r.absorb(po.report.clone(), None);
            res.add_factorization(name, po.object())?;
            res.add_morphism(&format!("{name}.l1"), &po.l1)?;
            res.add_morphism(&format!("{name}.f1"), &po.f1)?;
        }
        Command::Theta { s, n, rank, degrees, x, f, name, .. } => {
            param("s", json!(s));
            if let Some(xn) = x {
                param("x", json!(xn));
                let (_, xo) = doc.factorization(Some(xn))?;
                out.values.insert("object".into(), project(xo, *s)?.to_json());
                push(&mut r, "projected", true);
            } else if let Some(fname) = f {
                param("f", json!(fname));
                let (_, fm) = doc.morphism(Some(fname))?;
                out.values.insert("matrix".into(), json!(project_morphism(&fm.morphism, *s)?.row_strings()));
                push(&mut r, "projected", true);
            } else {
                let n = n.expect("clap requires --n without --x or --f");
                param("n", json!(n));
                param("rank", json!(rank));
                param("degrees", json!(degrees));
                let c = base_object(&b, *rank, degrees)?;
                let t = match s {
                    0 => theta0(&b, &c, n)?,
                    1 => theta1(&b, &c, n)?,
                    _ => theta_s(&b, &c, n, *s)?,
                };
                r.absorb_prefixed("object", t.validate());
                res.add_factorization(name, &t)?;
            }
        }
        Command::Transpose { adj, dir, x, g: gtext, rank, degrees, m, name, .. } => {
            param("adj", json!(adj));
            param("dir", json!(dir));
            let id = AdjunctionId::from_number(*adj)?;
            let direction: Direction = dir.parse()?;
            let (side, s) = id.side();
            match direction {
                Direction::Forward => {
                    let (xn, xo) = doc.factorization(x.as_deref())?;
                    param("x", json!(xn));
                    param("rank", json!(rank));
                    param("degrees", json!(degrees));
                    let c = base_object(&b, *rank, degrees)?;
                    let base = factn_core::frobenius::adjoint::base_object(side, s, xo);
                    let text = gtext.as_ref().ok_or_else(|| CliError::Usage("forward transpose needs --g".into()))?;
                    param("g", json!(text));
                    let gm = match side {
                        Side::Left => matrix_arg(&b, text, base.rank(), c.rank())?,
                        Side::Right => matrix_arg(&b, text, c.rank(), base.rank())?,
                    };
                    let t = transpose_forward(id, xo, &c, &gm)?;
                    r.absorb_prefixed("morphism", t.validate());
                    push(&mut r, "round_trip", transpose_backward(id, &t)? == gm);
                    res.add_morphism(name, &t)?;
                }
                Direction::Backward => {
                    let (mn, mm) = doc.morphism(m.as_deref())?;
                    param("m", json!(mn));
                    let back = transpose_backward(id, &mm.morphism)?;
                    // theta^s(C) has C in component s
                    let (xo, c_obj) = match side {
                        Side::Left => (mm.morphism.target(), mm.morphism.source().object(s).clone()),
                        Side::Right => (mm.morphism.source(), mm.morphism.target().object(s).clone()),
                    };
                    let theta_end = match side {
                        Side::Left => mm.morphism.source(),
                        Side::Right => mm.morphism.target(),
                    };
                    let expected = theta_s(&b, &c_obj, mm.morphism.n(), s)?;
                    push(&mut r, "theta_end", *theta_end == expected);
                    let again = transpose_forward(id, xo, &c_obj, &back)?;
                    push(&mut r, "round_trip", again.same_comps(&mm.morphism));
                    out.values.insert("matrix".into(), json!(back.row_strings()));
                }
            }
        }
        Command::Frobenius { deflation, mode, x, name, .. } => {
            let (xn, xo) = doc.factorization(x.as_deref())?;
            let cm = cover_mode(*mode);
            param("x", json!(xn));
            param("mode", json!(cm.as_str()));
            let (label, cover) = if *deflation {
                ("deflation", canonical_deflation(xo, cm)?)
            } else {
                ("inflation", canonical_inflation(xo, cm)?)
            };
            param("kind", json!(label));
            r.absorb_prefixed(label, cover.report.clone());
            if let Some(j) = cover.failing_component() {
                out.values.insert("failing_component".into(), json!(j));
            }
            res.add_factorization(name, &cover.object)?;
            res.add_morphism(&format!("{name}.{label}"), &cover.morphism)?;
        }
        Command::StablyZero { f, x, name, .. } => {
            let fm = match x {
                Some(xn) => {
                    param("x", json!(xn));
                    FactMorphism::identity(doc.factorization(Some(xn))?.1)
                }
                None => {
                    let (fname, m) = doc.morphism(f.as_deref())?;
                    param("f", json!(fname));
                    m.morphism.clone()
                }
            };
            let sz = stably_zero(&fm, bound.unwrap_or(0))?;
            verdict_check(&mut r, "stably_zero", sz.verdict);
            if let Some((a, e)) = &sz.witness {
                res.add_morphism(&format!("{name}.in"), a)?;
                res.add_morphism(&format!("{name}.out"), e)?;
            }
        }
        Command::AdjointIdentities { .. } => {
            let seed = g.seed("adjoint-identities")?;
            let samples = g.samples.unwrap_or(100);
            param("samples", json!(samples));
            out.seed = Some(seed);
            r.absorb_prefixed("identities", b.check_adjunction_identities(samples, seed)?);
            r.absorb_prefixed("omega", b.check_omega_coherence(samples, seed));
        }
        Command::Suite { n, kind, sequential, max_rank, .. } => {
            let seed = g.seed("suite")?;
            let samples = g.samples.unwrap_or(20);
            let exec = if *sequential { Execution::Sequential } else { Execution::default() };
            param("n", json!(n));
            param("samples", json!(samples));
            param("kind", json!(format!("{kind:?}").to_lowercase()));
            out.seed = Some(seed);
            match kind {
                SuiteKind::Axioms => r = run_axiom_suite(&b, *n, samples, seed, bound, exec)?,
                SuiteKind::Adjunctions => r = adjunction_suite(&b, *n, samples, seed, exec)?,
                SuiteKind::HomotopyClasses => r = homotopy_classes_respect_ops(&b, *n, seed, samples, exec)?,
                SuiteKind::Generate => {
                    param("max_rank", json!(max_rank));
                    let mut gen = Document::new(b.clone());
                    for i in 0..samples {
                        let s = sample_seed(seed, i as u64);
                        let xo: NFactorization = random_factorization(&b, *n, *max_rank, s)?;
                        let name = format!("random{i}");
                        let mut part = xo.validate();
                        part.checks.iter_mut().for_each(|c| c.name = format!("{name}.{}", c.name));
                        r.absorb(part, Some(s));
                        gen.factorizations.insert(name, xo);
                    }
                    res = gen;
                }
            }
        }
    }
    out.report = r;
    out.result = Some(res);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;
    use std::collections::BTreeMap;

    /// Library operations that must be reachable from the command line.
    const OPERATIONS: &[&str] = &[
        "parse_poly",
        "mat_mul",
        "field_solve",
        "bounded_poly_solve",
        "apply_T",
        "omega",
        "inverse_data",
        "check_adjunction_identities",
        "check_omega_coherence",
        "validate_factorization",
        "validate_morphism",
        "direct_sum",
        "is_isomorphism",
        "shift_S",
        "kernel",
        "cokernel",
        "is_conflation",
        "pullback_deflation",
        "pushout_inflation",
        "random_factorization",
        "verify_homotopy",
        "solve_homotopy",
        "is_contractible",
        "homotopy_classes_respect_ops",
        "suspend",
        "suspend_morphism",
        "suspend_homotopy",
        "mapping_cone",
        "cone_triangle",
        "contract_identity_cone",
        "rotate",
        "fill_morphism",
        "octahedron",
        "cone_homotopy_iso",
        "unsuspend",
        "run_axiom_suite",
        "theta0",
        "theta1",
        "theta_s",
        "project",
        "transpose",
        "canonical_deflation",
        "canonical_inflation",
        "test_projective",
        "test_injective",
        "stably_zero",
        "load_document",
        "save_document",
        "run_command",
    ];

    #[test]
    fn every_operation_has_exactly_one_subcommand() {
        let mut owners: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for (cmd, ops) in COMMAND_TABLE {
            for op in *ops {
                owners.entry(op).or_default().push(cmd);
            }
        }
        for op in OPERATIONS {
            assert_eq!(owners.get(op).map(Vec::len), Some(1), "{op}: {:?}", owners.get(op));
        }
        for op in owners.keys() {
            assert!(OPERATIONS.contains(op), "unlisted operation {op}");
        }
    }

    #[test]
    fn table_matches_the_parser() {
        let cli = Cli::command();
        let mut parsed: Vec<&str> = cli.get_subcommands().map(|c| c.get_name()).collect();
        let mut table: Vec<&str> = COMMAND_TABLE.iter().map(|(c, _)| *c).collect();
        parsed.sort_unstable();
        table.sort_unstable();
        assert_eq!(parsed, table);
    }

    #[test]
    fn parser_is_consistent() {
        Cli::command().debug_assert();
    }
}

//! Suspension, mapping cones and the constructions behind the axioms of the
//! right triangulated homotopy category, with their explicit witnesses.
//! Everything here needs `n` even.

use serde_json::{json, Value};

use crate::algebra::{Matrix, RingRef};
use crate::error::{Error, Result};
use crate::factcat::{direct_sum, random_chain, random_morphism, FactMorphism, NFactorization};
use crate::homotopy::{default_bound, is_contractible, solve_homotopy, null_homotopic_through_theta, Homotopy};
use crate::parallel::{run_samples, Execution};
use crate::random;
use crate::report::{Report, Verdict};
use crate::ambient::{Backend, BackendKind, ObjectHandle};

fn require_even(n: usize) -> Result<()> {
    if n % 2 == 1 {
        Err(Error::OddN(n))
    } else {
        Ok(())
    }
}

/// Places blocks into a matrix with the given block row/column sizes.
fn blocks(ring: &RingRef, rows: &[usize], cols: &[usize], cells: &[(usize, usize, &Matrix)]) -> Matrix {
    let offset = |sizes: &[usize], k: usize| sizes[..k].iter().sum::<usize>();
    let mut m = Matrix::zeros(ring, rows.iter().sum(), cols.iter().sum());
    for &(bi, bj, b) in cells {
        debug_assert_eq!(b.shape(), (rows[bi], cols[bj]));
        let (r0, c0) = (offset(rows, bi), offset(cols, bj));
        for i in 0..b.rows() {
            for k in 0..b.cols() {
                m.set(r0 + i, c0 + k, b.get(i, k).clone());
            }
        }
    }
    m
}

/// Rank of `X^j` in extended indices.
fn rk(x: &NFactorization, j: usize) -> usize {
    x.object(j % x.n()).rank()
}

/// `Sigma X = X^1 -> X^2 -> ... -> T(X^0)` with negated differentials.
pub fn suspend(x: &NFactorization) -> Result<NFactorization> {
    require_even(x.n())?;
    let n = x.n();
    let objects = (1..=n).map(|j| x.object_ext(j)).collect();
    let diffs = (1..=n).map(|j| x.diff_ext(j).neg()).collect();
    Ok(NFactorization::unchecked(x.backend(), objects, diffs))
}

/// `Sigma f = (f^1, ..., f^{n-1}, T(f^0))`.
pub fn suspend_morphism(f: &FactMorphism) -> Result<FactMorphism> {
    let (sx, sy) = (suspend(f.source())?, suspend(f.target())?);
    let comps = (1..=f.n()).map(|j| f.comp_ext(j)).collect();
    Ok(FactMorphism::unchecked(&sx, &sy, comps))
}

/// `Sigma` on a homotopy: `s'^j = -s^{j+1}`, with `s^n = T(s^0)`.
pub fn suspend_homotopy(h: &Homotopy) -> Result<Homotopy> {
    let b = h.f.backend();
    let n = h.f.n();
    let diag = (0..n)
        .map(|j| {
            let s = if j + 1 < n { h.diag[j + 1].clone() } else { b.t(&h.diag[0]) };
            s.neg()
        })
        .collect();
    Ok(Homotopy::new(&suspend_morphism(&h.f)?, &suspend_morphism(&h.g)?, diag)?)
}

/// `C_f = Sigma X (+) Y` with its injection `i_f` and projection `pi_f`.
#[derive(Clone, Debug)]
pub struct ConeData {
    pub f: FactMorphism,
    pub cone: NFactorization,
    pub inject: FactMorphism,
    pub project: FactMorphism,
}

/// `d_C^j = [[-d_X^{j+1}, 0], [f^{j+1}, d_Y^j]]` in extended indices.
pub fn mapping_cone(f: &FactMorphism) -> Result<ConeData> {
    let (x, y) = (f.source(), f.target());
    require_even(x.n())?;
    let b = x.backend();
    let ring = b.ring();
    let n = x.n();
    let sx = suspend(x)?;
    let objects: Vec<ObjectHandle> = (0..n).map(|j| sx.object(j).direct_sum(y.object(j))).collect();
    let diffs = (0..n)
        .map(|j| {
            let rows = [rk(x, j + 2), rk(y, j + 1)];
            let cols = [rk(x, j + 1), rk(y, j)];
            let dx = x.diff_ext(j + 1).neg();
            let fj = f.comp_ext(j + 1);
            blocks(ring, &rows, &cols, &[(0, 0, &dx), (1, 0, &fj), (1, 1, y.diff(j))])
        })
        .collect();
    let cone = NFactorization::unchecked(b, objects, diffs);
    let inject = (0..n)
        .map(|j| {
            let id = Matrix::identity(ring, rk(y, j));
            blocks(ring, &[rk(x, j + 1), rk(y, j)], &[rk(y, j)], &[(1, 0, &id)])
        })
        .collect();
    let project = (0..n)
        .map(|j| {
            let id = Matrix::identity(ring, rk(x, j + 1));
            blocks(ring, &[rk(x, j + 1)], &[rk(x, j + 1), rk(y, j)], &[(0, 0, &id)])
        })
        .collect();
    Ok(ConeData {
        f: f.clone(),
        inject: FactMorphism::unchecked(y, &cone, inject),
        project: FactMorphism::unchecked(&cone, &sx, project),
        cone,
    })
}

impl ConeData {
    pub fn validate(&self) -> Report {
        let mut r = Report::new();
        r.absorb_prefixed("cone", self.cone.validate());
        r.absorb_prefixed("inject", self.inject.validate());
        r.absorb_prefixed("project", self.project.validate());
        let zero = FactMorphism::compose_unchecked(&self.project, &self.inject).is_zero();
        r.push("pi_i_zero", zero, Value::Null);
        r
    }
}

/// `X -f-> Y -g-> Z -h-> Sigma X`.
#[derive(Clone, Debug)]
pub struct Triangle {
    pub f: FactMorphism,
    pub g: FactMorphism,
    pub h: FactMorphism,
}

impl Triangle {
    pub fn new(f: FactMorphism, g: FactMorphism, h: FactMorphism) -> Result<Self> {
        let t = Triangle { f, g, h };
        if t.f.target() != t.g.source() || t.g.target() != t.h.source() || *t.h.target() != suspend(t.f.source())? {
            return Err(Error::Incompatible("triangle maps do not chain to the suspension".into()));
        }
        Ok(t)
    }

    pub fn validate(&self) -> Report {
        let mut r = Report::new();
        r.absorb_prefixed("f", self.f.validate());
        r.absorb_prefixed("g", self.g.validate());
        r.absorb_prefixed("h", self.h.validate());
        r
    }
}

/// `(f, i_f, pi_f)`.
pub fn cone_triangle(f: &FactMorphism) -> Result<(ConeData, Triangle)> {
    let c = mapping_cone(f)?;
    let t = Triangle { f: f.clone(), g: c.inject.clone(), h: c.project.clone() };
    Ok((c, t))
}

/// `id ~ 0` on `C_{id_X}` with `s^j = [[0, 1], [0, 0]]`.
pub fn contract_identity_cone(x: &NFactorization) -> Result<(ConeData, Homotopy)> {
    let c = mapping_cone(&FactMorphism::identity(x))?;
    let ring = x.backend().ring();
    let n = x.n();
    let diag = (0..n)
        .map(|j| {
            let id = Matrix::identity(ring, rk(x, j + 1));
            blocks(ring, &[rk(x, j + 1), rk(x, j)], &[rk(x, j + 2), rk(x, j + 1)], &[(0, 1, &id)])
        })
        .collect();
    let id = FactMorphism::identity(&c.cone);
    let zero = FactMorphism::zero(&c.cone, &c.cone)?;
    let h = Homotopy::new(&id, &zero, diag)?;
    Ok((c, h))
}

/// The data of the rotation axiom for `f: X -> Y`.
#[derive(Clone, Debug)]
pub struct Rotation {
    pub cone_f: ConeData,
    pub cone_i: ConeData,
    pub alpha: FactMorphism,
    pub beta: FactMorphism,
    /// `id ~ alpha beta` on `C_{i_f}`.
    pub witness_ab: Homotopy,
    /// `i_{i_f} ~ alpha pi_f`.
    pub witness_nat: Homotopy,
    pub rotated: Triangle,
}

pub fn rotate(f: &FactMorphism) -> Result<Rotation> {
    let (x, y) = (f.source(), f.target());
    let ring = x.backend().ring();
    let n = x.n();
    let cone_f = mapping_cone(f)?;
    let cone_i = mapping_cone(&cone_f.inject)?;
    let sx = suspend(x)?;
    // C_{i_f}^j = Y^{j+1} (+) X^{j+1} (+) Y^j
    let ci = |j: usize| [rk(y, j + 1), rk(x, j + 1), rk(y, j)];
    let alpha = (0..n)
        .map(|j| {
            let mf = f.comp_ext(j + 1).neg();
            let id = Matrix::identity(ring, rk(x, j + 1));
            blocks(ring, &ci(j), &[rk(x, j + 1)], &[(0, 0, &mf), (1, 0, &id)])
        })
        .collect();
    let beta = (0..n)
        .map(|j| {
            let id = Matrix::identity(ring, rk(x, j + 1));
            blocks(ring, &[rk(x, j + 1)], &ci(j), &[(0, 1, &id)])
        })
        .collect();
    let alpha = FactMorphism::unchecked(&sx, &cone_i.cone, alpha);
    let beta = FactMorphism::unchecked(&cone_i.cone, &sx, beta);
    let ab = FactMorphism::compose_unchecked(&alpha, &beta);
    // s^j = e_{13}: C_{i_f}^{j+1} -> C_{i_f}^j
    let s_ab = (0..n)
        .map(|j| {
            let id = Matrix::identity(ring, rk(y, j + 1));
            blocks(ring, &ci(j), &ci(j + 1), &[(0, 2, &id)])
        })
        .collect();
    let witness_ab = Homotopy::new(&FactMorphism::identity(&cone_i.cone), &ab, s_ab)?;
    // s^j = e_{12}: C_f^{j+1} = X^{j+2} (+) Y^{j+1} -> C_{i_f}^j
    let s_nat = (0..n)
        .map(|j| {
            let id = Matrix::identity(ring, rk(y, j + 1));
            blocks(ring, &ci(j), &[rk(x, j + 2), rk(y, j + 1)], &[(0, 1, &id)])
        })
        .collect();
    let a_pi = FactMorphism::compose_unchecked(&alpha, &cone_f.project);
    let witness_nat = Homotopy::new(&cone_i.inject, &a_pi, s_nat)?;
    let rotated = Triangle {
        f: cone_f.inject.clone(),
        g: cone_f.project.clone(),
        h: suspend_morphism(f)?.neg(),
    };
    Ok(Rotation { cone_f, cone_i, alpha, beta, witness_ab, witness_nat, rotated })
}

/// `gamma: C_{f1} -> C_{f2}` with `gamma^j = [[alpha^{j+1}, 0], [s^j, beta^j]]`,
/// from a homotopy `s: beta f1 ~ f2 alpha`.
pub fn fill_morphism(
    f1: &FactMorphism,
    f2: &FactMorphism,
    alpha: &FactMorphism,
    beta: &FactMorphism,
    s: &Homotopy,
) -> Result<(ConeData, ConeData, FactMorphism)> {
    let bf = FactMorphism::compose(beta, f1)?;
    let fa = FactMorphism::compose(f2, alpha)?;
    if !s.f.same_comps(&bf) || !s.g.same_comps(&fa) {
        return Err(Error::Precondition("the homotopy must relate beta f1 and f2 alpha".into()));
    }
    let check = s.verify();
    if !check.all_pass() {
        return Err(Error::InvalidHomotopy(Box::new(check)));
    }
    let c1 = mapping_cone(f1)?;
    let c2 = mapping_cone(f2)?;
    let (x, y, x1, y1) = (f1.source(), f1.target(), f2.source(), f2.target());
    let ring = x.backend().ring();
    let comps = (0..x.n())
        .map(|j| {
            let a = alpha.comp_ext(j + 1);
            blocks(
                ring,
                &[rk(x1, j + 1), rk(y1, j)],
                &[rk(x, j + 1), rk(y, j)],
                &[(0, 0, &a), (1, 0, &s.diag[j]), (1, 1, beta.comp(j))],
            )
        })
        .collect();
    let gamma = FactMorphism::unchecked(&c1.cone, &c2.cone, comps);
    Ok((c1, c2, gamma))
}

/// The data of the octahedral axiom for `f: X -> Y`, `g: Y -> Z`.
#[derive(Clone, Debug)]
pub struct Octahedron {
    pub cone_f: ConeData,
    pub cone_gf: ConeData,
    pub cone_g: ConeData,
    pub cone_alpha: ConeData,
    pub alpha: FactMorphism,
    pub beta: FactMorphism,
    pub gamma: FactMorphism,
    pub sigma: FactMorphism,
    pub tau: FactMorphism,
    /// `id ~ sigma tau` on `C_alpha`.
    pub w_sigma_tau: Homotopy,
    /// `i_alpha ~ sigma beta`.
    pub w_i_alpha: Homotopy,
}

pub fn octahedron(f: &FactMorphism, g: &FactMorphism) -> Result<Octahedron> {
    let gf = FactMorphism::compose(g, f)?;
    let (x, y, z) = (f.source(), f.target(), g.target());
    let ring = x.backend().ring();
    let n = x.n();
    let cone_f = mapping_cone(f)?;
    let cone_gf = mapping_cone(&gf)?;
    let cone_g = mapping_cone(g)?;
    let cf = |j: usize| [rk(x, j + 1), rk(y, j)];
    let cgf = |j: usize| [rk(x, j + 1), rk(z, j)];
    let cg = |j: usize| [rk(y, j + 1), rk(z, j)];
    // C_alpha^j = X^{j+2} (+) Y^{j+1} (+) X^{j+1} (+) Z^j
    let ca = |j: usize| [rk(x, j + 2), rk(y, j + 1), rk(x, j + 1), rk(z, j)];
    let alpha = (0..n)
        .map(|j| {
            let id = Matrix::identity(ring, rk(x, j + 1));
            blocks(ring, &cgf(j), &cf(j), &[(0, 0, &id), (1, 1, g.comp(j))])
        })
        .collect();
    let alpha = FactMorphism::unchecked(&cone_f.cone, &cone_gf.cone, alpha);
    let beta = (0..n)
        .map(|j| {
            let fj = f.comp_ext(j + 1);
            let id = Matrix::identity(ring, rk(z, j));
            blocks(ring, &cg(j), &cgf(j), &[(0, 0, &fj), (1, 1, &id)])
        })
        .collect();
    let beta = FactMorphism::unchecked(&cone_gf.cone, &cone_g.cone, beta);
    let gamma = FactMorphism::compose_unchecked(&suspend_morphism(&cone_f.inject)?, &cone_g.project);
    let cone_alpha = mapping_cone(&alpha)?;
    let sigma = (0..n)
        .map(|j| {
            let iy = Matrix::identity(ring, rk(y, j + 1));
            let iz = Matrix::identity(ring, rk(z, j));
            blocks(ring, &ca(j), &cg(j), &[(1, 0, &iy), (3, 1, &iz)])
        })
        .collect();
    let sigma = FactMorphism::unchecked(&cone_g.cone, &cone_alpha.cone, sigma);
    let tau = (0..n)
        .map(|j| {
            let iy = Matrix::identity(ring, rk(y, j + 1));
            let fj = f.comp_ext(j + 1);
            let iz = Matrix::identity(ring, rk(z, j));
            blocks(ring, &cg(j), &ca(j), &[(0, 1, &iy), (0, 2, &fj), (1, 3, &iz)])
        })
        .collect();
    let tau = FactMorphism::unchecked(&cone_alpha.cone, &cone_g.cone, tau);
    // s^j = e_{13}: C_alpha^{j+1} -> C_alpha^j
    let s1 = (0..n)
        .map(|j| {
            let id = Matrix::identity(ring, rk(x, j + 2));
            blocks(ring, &ca(j), &ca(j + 1), &[(0, 2, &id)])
        })
        .collect();
    let st = FactMorphism::compose_unchecked(&sigma, &tau);
    let w_sigma_tau = Homotopy::new(&FactMorphism::identity(&cone_alpha.cone), &st, s1)?;
    // s^j = e_{11}: C_gf^{j+1} = X^{j+2} (+) Z^{j+1} -> C_alpha^j
    let s2 = (0..n)
        .map(|j| {
            let id = Matrix::identity(ring, rk(x, j + 2));
            blocks(ring, &ca(j), &cgf(j + 1), &[(0, 0, &id)])
        })
        .collect();
    let sb = FactMorphism::compose_unchecked(&sigma, &beta);
    let w_i_alpha = Homotopy::new(&cone_alpha.inject, &sb, s2)?;
    Ok(Octahedron { cone_f, cone_gf, cone_g, cone_alpha, alpha, beta, gamma, sigma, tau, w_sigma_tau, w_i_alpha })
}

/// Which lower-left block the cone isomorphism uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeIsoForm {
    /// `[[1, 0], [s^j, 1]]`, which is a morphism for every homotopy `s`.
    Corrected,
    /// `[[1, 0], [s^j, 0]]` as printed; kept to test that it fails.
    Printed,
}

/// `lambda: C_{f1} -> C_{f2}` and `mu: C_{f2} -> C_{f1}` from `s: f1 ~ f2`.
/// Returned unchecked so the printed form can be examined.
pub fn cone_homotopy_iso(s: &Homotopy, form: ConeIsoForm) -> Result<(FactMorphism, FactMorphism)> {
    let check = s.verify();
    if !check.all_pass() {
        return Err(Error::InvalidHomotopy(Box::new(check)));
    }
    let (f1, f2) = (&s.f, &s.g);
    let (x, y) = (f1.source(), f1.target());
    let ring = x.backend().ring();
    let c1 = mapping_cone(f1)?;
    let c2 = mapping_cone(f2)?;
    let build = |sign: bool| -> Vec<Matrix> {
        (0..x.n())
            .map(|j| {
                let ix = Matrix::identity(ring, rk(x, j + 1));
                let iy = Matrix::identity(ring, rk(y, j));
                let sj = if sign { s.diag[j].clone() } else { s.diag[j].neg() };
                let sizes = [rk(x, j + 1), rk(y, j)];
                match form {
                    ConeIsoForm::Corrected => blocks(ring, &sizes, &sizes, &[(0, 0, &ix), (1, 0, &sj), (1, 1, &iy)]),
                    ConeIsoForm::Printed => blocks(ring, &sizes, &sizes, &[(0, 0, &ix), (1, 0, &sj)]),
                }
            })
            .collect()
    };
    let lambda = FactMorphism::unchecked(&c1.cone, &c2.cone, build(true));
    let mu = FactMorphism::unchecked(&c2.cone, &c1.cone, build(false));
    Ok((lambda, mu))
}

/// `Sigma^-1 X`: `Y^0 = T^-1 X^{n-1}`, `Y^j = X^{j-1}`, with
/// `d_Y^0 = -eps T^-1(d^{n-1})`, `d_Y^j = -d^{j-1}` for `0 < j < n-1` and
/// `d_Y^{n-1} = -eta d^{n-2}`.
pub fn unsuspend(x: &NFactorization) -> Result<NFactorization> {
    let n = x.n();
    require_even(n)?;
    let b = x.backend();
    let inv = b.require_inverse()?;
    let y0 = inv.apply_t_inv_obj(x.object(n - 1));
    let mut objects = vec![y0];
    objects.extend((0..n - 1).map(|j| x.object(j).clone()));
    let mut diffs = vec![(&inv.epsilon(x.object(0)) * &inv.apply_t_inv(x.diff(n - 1))).neg()];
    for j in 1..n {
        let d = x.diff(j - 1).neg();
        if j == n - 1 {
            diffs.push(&inv.eta(x.object(n - 1)) * &d);
        } else {
            diffs.push(d);
        }
    }
    Ok(NFactorization::unchecked(b, objects, diffs))
}

fn push_bool(r: &mut Report, name: &str, pass: bool) {
    r.push(name, pass, Value::Null);
}

fn push_report(r: &mut Report, name: &str, sub: Report) {
    let pass = sub.all_pass();
    let detail = if pass { Value::Null } else { json!(sub.first_failure().map(|c| c.name.clone())) };
    r.push(name, pass, detail);
}

/// `lambda`, `mu` are morphisms, mutually inverse, and compatible with the
/// cone maps of `s.f` and `s.g`.
pub fn cone_iso_checks(s: &Homotopy, lambda: &FactMorphism, mu: &FactMorphism) -> Result<Report> {
    let mut r = Report::new();
    let (c1, c2) = (mapping_cone(&s.f)?, mapping_cone(&s.g)?);
    push_report(&mut r, "lambda_valid", lambda.validate());
    push_report(&mut r, "mu_valid", mu.validate());
    push_bool(&mut r, "mu_lambda_id", FactMorphism::compose(mu, lambda)?.is_identity());
    push_bool(&mut r, "lambda_mu_id", FactMorphism::compose(lambda, mu)?.is_identity());
    push_bool(&mut r, "on_inject", FactMorphism::compose(lambda, &c1.inject)?.same_comps(&c2.inject));
    push_bool(&mut r, "on_project", FactMorphism::compose(&c2.project, lambda)?.same_comps(&c1.project));
    Ok(r)
}

/// The strict identities and both witnesses of a rotation.
pub fn rotation_checks(rot: &Rotation) -> Result<Report> {
    let mut r = Report::new();
    push_report(&mut r, "alpha_valid", rot.alpha.validate());
    push_report(&mut r, "beta_valid", rot.beta.validate());
    push_bool(&mut r, "beta_alpha_id", FactMorphism::compose(&rot.beta, &rot.alpha)?.is_identity());
    let neg_sigma_f = suspend_morphism(&rot.cone_f.f)?.neg();
    push_bool(
        &mut r,
        "pi_alpha_neg_sigma_f",
        FactMorphism::compose(&rot.cone_i.project, &rot.alpha)?.same_comps(&neg_sigma_f),
    );
    push_report(&mut r, "alpha_beta_homotopic_id", rot.witness_ab.verify());
    push_report(&mut r, "i_if_homotopic_alpha_pi", rot.witness_nat.verify());
    push_report(&mut r, "rotated_valid", rot.rotated.validate());
    Ok(r)
}

/// `gamma` is a morphism making both squares of the ladder commute.
pub fn fill_checks(
    c1: &ConeData,
    c2: &ConeData,
    gamma: &FactMorphism,
    alpha: &FactMorphism,
    beta: &FactMorphism,
) -> Result<Report> {
    let mut r = Report::new();
    push_report(&mut r, "gamma_valid", gamma.validate());
    push_bool(
        &mut r,
        "left_square",
        FactMorphism::compose(gamma, &c1.inject)?.same_comps(&FactMorphism::compose(&c2.inject, beta)?),
    );
    push_bool(
        &mut r,
        "right_square",
        FactMorphism::compose(&c2.project, gamma)?.same_comps(&FactMorphism::compose(&suspend_morphism(alpha)?, &c1.project)?),
    );
    Ok(r)
}

/// All contracts of the octahedral data for `f`, `g`.
pub fn octahedron_checks(f: &FactMorphism, g: &FactMorphism, oct: &Octahedron) -> Result<Report> {
    let mut r = Report::new();
    push_report(&mut r, "alpha_valid", oct.alpha.validate());
    push_report(&mut r, "beta_valid", oct.beta.validate());
    push_report(&mut r, "sigma_valid", oct.sigma.validate());
    push_report(&mut r, "tau_valid", oct.tau.validate());
    let ladder = FactMorphism::compose(&oct.alpha, &oct.cone_f.inject)?
        .same_comps(&FactMorphism::compose(&oct.cone_gf.inject, g)?)
        && FactMorphism::compose(&oct.beta, &oct.cone_gf.inject)?.same_comps(&oct.cone_g.inject)
        && FactMorphism::compose(&oct.cone_gf.project, &oct.alpha)?.same_comps(&oct.cone_f.project)
        && FactMorphism::compose(&suspend_morphism(f)?, &oct.cone_gf.project)?
            .same_comps(&FactMorphism::compose(&oct.cone_g.project, &oct.beta)?);
    push_bool(&mut r, "ladder", ladder);
    push_bool(&mut r, "tau_sigma_id", FactMorphism::compose(&oct.tau, &oct.sigma)?.is_identity());
    push_bool(
        &mut r,
        "pi_alpha_sigma_gamma",
        FactMorphism::compose(&oct.cone_alpha.project, &oct.sigma)?.same_comps(&oct.gamma),
    );
    push_report(&mut r, "sigma_tau_homotopic_id", oct.w_sigma_tau.verify());
    push_report(&mut r, "i_alpha_homotopic_sigma_beta", oct.w_i_alpha.verify());
    Ok(r)
}

/// Every construction of the right triangulated structure on random
/// instances, with each strict identity and witness checked exactly.
pub fn run_axiom_suite(
    backend: &Backend,
    n: usize,
    samples: usize,
    seed: u64,
    bound: Option<i64>,
    exec: Execution,
) -> Result<Report> {
    require_even(n)?;
    run_samples(exec, seed, samples, |s| axiom_sample(backend, n, s, bound))
}

fn axiom_sample(backend: &Backend, n: usize, s: u64, bound: Option<i64>) -> Result<Report> {
    let mut rng = random::rng(s);
    let mut r = Report::new();
    let chain = random_chain(backend, n, 2, 2, random::mix(s))?;
    let (f, g) = (&chain[0], &chain[1]);
    let (x, y, z) = (f.source(), f.target(), g.target());

    // suspension is a strict additive functor
    let sx = suspend(x)?;
    push_report(&mut r, "Sigma.valid", sx.validate());
    push_bool(&mut r, "Sigma.id", suspend_morphism(&FactMorphism::identity(x))?.is_identity());
    let gf = FactMorphism::compose(g, f)?;
    push_bool(
        &mut r,
        "Sigma.compose",
        suspend_morphism(&gf)?.same_comps(&FactMorphism::compose(&suspend_morphism(g)?, &suspend_morphism(f)?)?),
    );
    let f2 = random_morphism(x, y, random::mix(s ^ 7))?;
    push_bool(
        &mut r,
        "Sigma.additive",
        suspend_morphism(&f.add(&f2)?)?.same_comps(&suspend_morphism(f)?.add(&suspend_morphism(&f2)?)?),
    );
    let sum = direct_sum(x, y)?.sum;
    let sum_s = direct_sum(&sx, &suspend(y)?)?.sum;
    push_bool(&mut r, "Sigma.direct_sum", suspend(&sum)?.diffs() == sum_s.diffs());

    // RTR1: cones, the identity cone, isomorphism closure
    let (cone, tri) = cone_triangle(f)?;
    push_report(&mut r, "RTR1.cone_valid", cone.validate());
    push_report(&mut r, "RTR1.triangle_valid", tri.validate());
    let (cid, hid) = contract_identity_cone(x)?;
    push_report(&mut r, "RTR1.identity_cone_valid", cid.validate());
    push_report(&mut r, "RTR1.identity_cone_contraction", hid.verify());
    let idc = FactMorphism::identity(&cid.cone);
    let zc = FactMorphism::zero(&cid.cone, &cid.cone)?;
    let found = solve_homotopy(&idc, &zc, bound.unwrap_or_else(|| default_bound(&idc, &zc)))?;
    push_bool(&mut r, "RTR1.identity_cone_solver", found.map_or(false, |h| h.verify().all_pass()));
    let c = backend.random_object_of_rank(1, &mut rng);
    let k = null_homotopic_through_theta(x, y, &c, &mut rng)?;
    let f_pert = f.add(&k.f)?;
    let s_pert = Homotopy::new(f, &f_pert, k.diag.iter().map(Matrix::neg).collect())?;
    push_report(&mut r, "RTR1.perturbation_witness", s_pert.verify());
    let (lambda, mu) = cone_homotopy_iso(&s_pert, ConeIsoForm::Corrected)?;
    r.absorb_prefixed("RTR1.iso", cone_iso_checks(&s_pert, &lambda, &mu)?);
    let sh = suspend_homotopy(&s_pert)?;
    push_report(&mut r, "Sigma.homotopy", sh.verify());
    if let BackendKind::FieldScalar { c } = backend.kind() {
        if !c.is_zero() {
            let bnd = bound.unwrap_or_else(|| default_bound(f, f));
            let (v, _) = is_contractible(&cone.cone, bnd)?;
            push_bool(&mut r, "RTR1.cone_contractible_invertible_diffs", v == Verdict::True);
        }
    }

    // RTR2
    let rot = rotate(f)?;
    r.absorb_prefixed("RTR2", rotation_checks(&rot)?);

    // RTR3 with alpha = id and a perturbed square
    let beta = g;
    let f1 = f;
    let kz = null_homotopic_through_theta(x, z, &c, &mut rng)?;
    let f2 = gf.add(&kz.f)?; // f2 = beta f1 + k
    let id_x = FactMorphism::identity(x);
    let hom = Homotopy::new(&gf, &FactMorphism::compose(&f2, &id_x)?, kz.diag.iter().map(Matrix::neg).collect())?;
    let (c1, c2, gamma) = fill_morphism(f1, &f2, &id_x, beta, &hom)?;
    r.absorb_prefixed("RTR3", fill_checks(&c1, &c2, &gamma, &id_x, beta)?);

    // RTR4
    let oct = octahedron(f, g)?;
    r.absorb_prefixed("RTR4", octahedron_checks(f, g, &oct)?);

    // right rotation, when T is invertible
    if backend.has_inverse() {
        let u = unsuspend(x)?;
        push_report(&mut r, "Sigma_inv.valid", u.validate());
        push_bool(&mut r, "Sigma_inv.sigma_unsuspend", *x == suspend(&u)?);
        push_bool(&mut r, "Sigma_inv.unsuspend_sigma", *x == unsuspend(&sx)?);
    } else {
        push_bool(&mut r, "Sigma_inv.unavailable", matches!(unsuspend(x), Err(Error::NoInverse(_))));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, Field, Ring};

    fn xy() -> NFactorization {
        let r = Ring::new(Field::Rational, vec!["x".into(), "y".into()]).unwrap();
        let b = Backend::poly_classical(&r, parse_poly("x*y", &r).unwrap()).unwrap();
        let m = |s: &str| Matrix::from_rows(&r, vec![vec![parse_poly(s, &r).unwrap()]], 1).unwrap();
        NFactorization::from_diffs(&b, vec![m("x"), m("y")]).unwrap()
    }

    #[test]
    fn identity_cone_of_xy() {
        let x = xy();
        let c = mapping_cone(&FactMorphism::identity(&x)).unwrap();
        assert_eq!(c.cone.diff(0).row_strings(), vec![vec!["-y", "0"], vec!["1", "x"]]);
        assert_eq!(c.cone.diff(1).row_strings(), vec![vec!["-x", "0"], vec!["1", "y"]]);
        assert!(c.validate().all_pass());
        let (_, h) = contract_identity_cone(&x).unwrap();
        assert!(h.verify().all_pass());
    }

    #[test]
    fn printed_cone_iso_is_not_a_morphism() {
        let x = xy();
        let id = FactMorphism::identity(&x);
        let s = Homotopy::reflexive(&id);
        let (lam, _) = cone_homotopy_iso(&s, ConeIsoForm::Printed).unwrap();
        assert!(!lam.validate().all_pass());
        let (lam, mu) = cone_homotopy_iso(&s, ConeIsoForm::Corrected).unwrap();
        assert!(lam.validate().all_pass() && mu.validate().all_pass());
    }

    #[test]
    fn sigma_of_xy() {
        let sx = suspend(&xy()).unwrap();
        assert_eq!(sx.diff(0).row_strings(), vec![vec!["-y"]]);
        assert_eq!(sx.diff(1).row_strings(), vec![vec!["-x"]]);
        let f5 = Field::prime(5).unwrap();
        let b = Backend::field_scalar(f5, f5.one()).unwrap();
        let one = Matrix::identity(b.ring(), 1);
        let x3 = NFactorization::from_diffs(&b, vec![one.clone(), one.clone(), one]).unwrap();
        assert!(matches!(suspend(&x3), Err(Error::OddN(3))));
    }

    #[test]
    fn suite_on_small_backends() {
        let f5 = Field::prime(5).unwrap();
        let b = Backend::field_scalar(f5, f5.one()).unwrap();
        let r = run_axiom_suite(&b, 4, 6, 1, None, Execution::default()).unwrap();
        assert!(r.all_pass(), "{r}");
        let q = Ring::new(Field::Rational, vec!["x".into(), "y".into()]).unwrap();
        let b = Backend::poly_classical(&q, parse_poly("x*y", &q).unwrap()).unwrap();
        let r = run_axiom_suite(&b, 2, 6, 2, None, Execution::default()).unwrap();
        assert!(r.all_pass(), "{r}");
    }
}

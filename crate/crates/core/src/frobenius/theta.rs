use crate::ambient::{Backend, ObjectHandle};
use crate::error::{Error, Result};
use crate::factcat::{FactMorphism, NFactorization};

/// `C -> C -> ... -> C -> T(C)` with identities and a final `omega_C`.
pub fn theta0(backend: &Backend, c: &ObjectHandle, n: usize) -> Result<NFactorization> {
    theta_s(backend, c, n, 0)
}

/// `T^-1 C -> C -> ... -> C -> T T^-1 C` with `omega^(-1)_C` first and
/// `eta_C` last.
pub fn theta1(backend: &Backend, c: &ObjectHandle, n: usize) -> Result<NFactorization> {
    theta_s(backend, c, n, 1)
}

/// `T^-1 C` in components `0..s`, `C` in `s..n`; the differential `s-1 -> s`
/// is `omega^(-1)_C`, the last one `eta_C` (or `omega_C` for `s = 0`), and
/// all others are identities.
pub fn theta_s(backend: &Backend, c: &ObjectHandle, n: usize, s: usize) -> Result<NFactorization> {
    if n < 2 {
        return Err(Error::SmallN(n));
    }
    if s >= n {
        return Err(Error::IndexRange { index: s, n });
    }
    backend.check_object(c)?;
    if s == 0 {
        let mut diffs = vec![backend.id(c); n];
        diffs[n - 1] = backend.omega(c);
        return Ok(NFactorization::unchecked(backend, vec![c.clone(); n], diffs));
    }
    let inv = backend.require_inverse()?;
    let tic = inv.apply_t_inv_obj(c);
    let objects: Vec<ObjectHandle> = (0..n).map(|j| if j < s { tic.clone() } else { c.clone() }).collect();
    let diffs = (0..n)
        .map(|j| {
            if j + 1 == s {
                inv.omega_inv(c)
            } else if j == n - 1 {
                inv.eta(c)
            } else if j < s {
                backend.id(&tic)
            } else {
                backend.id(c)
            }
        })
        .collect();
    Ok(NFactorization::unchecked(backend, objects, diffs))
}

/// `theta^s` on a morphism `f: C -> D`.
pub fn theta_s_morphism(
    backend: &Backend,
    f: &crate::algebra::Matrix,
    c: &ObjectHandle,
    d: &ObjectHandle,
    n: usize,
    s: usize,
) -> Result<FactMorphism> {
    let src = theta_s(backend, c, n, s)?;
    let tgt = theta_s(backend, d, n, s)?;
    let comps = if s == 0 {
        vec![f.clone(); n]
    } else {
        let inv = backend.require_inverse()?;
        let tf = inv.apply_t_inv(f);
        (0..n).map(|j| if j < s { tf.clone() } else { f.clone() }).collect()
    };
    FactMorphism::new(&src, &tgt, comps)
}

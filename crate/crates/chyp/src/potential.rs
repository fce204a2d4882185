//! Kähler potentials of the ball and the Toledo invariant as a sum of edge integrals.
//!
//! For a negative point `c` the one-form `P_c(v_p) = -Im(<p,p><v,c> / 2<p,c>)` satisfies
//! `dP_c = omega`, where `omega(v_p,w_p) = Im <v_p,w_p>` is the Kähler form. Two potentials
//! differ by the differential of `f_{c1,c2}(p) = Arg(<c1,p><p,c2> / <c1,c2>) / 2`, which is
//! multivalued and is evaluated here by continuous tracking along a path.
//!
//! A tangent vector `v_p` is stored as a [`TangentRep`]; the curve `p + e <p,p> v` has
//! velocity `v_p` at `e = 0`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_rational::Ratio;

use crate::error::{GeomError, Result};
use crate::hermitian::{form, norm2, PVec, TangentRep, C64};
use crate::isometry::angle_0_2pi;
use crate::quadrangle::QuadrangleData;

/// Relative size below which `<p,c>` counts as zero.
pub const ORTHO_TOL: f64 = 1e-12;

/// Relative size below which a point counts as isotropic.
const ISOTROPIC_TOL: f64 = 1e-12;

/// Initial number of segments used to track `f` along an edge of the cycle.
const EDGE_STEPS: usize = 64;

/// Largest number of segments tried before giving up on an edge.
const MAX_EDGE_STEPS: usize = 1 << 14;

/// Distance from a multiple of `1/3` accepted when rounding the Toledo invariant.
pub const TOLEDO_ROUND_TOL: f64 = 1e-9;

fn relative_form(a: &PVec, b: &PVec) -> f64 {
    form(a, b).norm() / (a.coord_norm() * b.coord_norm())
}

fn check_base(p: &PVec) -> Result<()> {
    if p.is_zero() || (norm2(p) / p.coord_norm_sqr()).abs() < ISOTROPIC_TOL {
        return Err(GeomError::Isotropic);
    }
    Ok(())
}

fn check_not_orthogonal(p: &PVec, c: &PVec) -> Result<()> {
    if relative_form(p, c) < ORTHO_TOL {
        return Err(GeomError::Degenerate("point orthogonal to a potential centre"));
    }
    Ok(())
}

/// The potential `P_c(v_p) = -Im(<p,p><v,c> / 2<p,c>)`.
pub fn potential(c: &PVec, v: &TangentRep) -> Result<f64> {
    check_base(&v.base)?;
    check_not_orthogonal(&v.base, c)?;
    let q = form(&v.dir, c) * norm2(&v.base) / (form(&v.base, c) * 2.0);
    Ok(-q.im)
}

/// The quantity `<c1,p><p,c2> / <c1,c2>` whose argument is twice `f_{c1,c2}(p)`.
fn f_quantity(c1: &PVec, c2: &PVec, p: &PVec) -> Result<C64> {
    check_not_orthogonal(p, c1)?;
    check_not_orthogonal(p, c2)?;
    Ok(form(c1, p) * form(p, c2) / form(c1, c2))
}

/// Increment of `f_{c1,c2}` along a path, by nearest-angle continuation.
///
/// Consecutive path points must change the argument by less than `pi/2`.
pub fn f_pot(c1: &PVec, c2: &PVec, path: &[PVec]) -> Result<f64> {
    if relative_form(c1, c2) < ORTHO_TOL {
        return Err(GeomError::Degenerate("potential centres are orthogonal"));
    }
    let mut total = 0.0;
    let mut prev: Option<C64> = None;
    for p in path {
        let z = f_quantity(c1, c2, p)?;
        if let Some(zp) = prev {
            let step = (z * zp.conj()).arg();
            if step.abs() >= FRAC_PI_2 {
                return Err(GeomError::Degenerate("branch tracking step too large"));
            }
            total += step;
        }
        prev = Some(z);
    }
    Ok(total / 2.0)
}

/// Rewrites `w` over the representative `v.base` of the same projective point.
fn rebase(v: &TangentRep, w: &TangentRep) -> Result<PVec> {
    if !v.base.same_point(&w.base, 1e-9) {
        return Err(GeomError::Degenerate("tangent vectors at different points"));
    }
    // w.base = lambda v.base, and the direction over v.base is conj(lambda) w.dir.
    let lambda = form(&w.base, &v.base) / norm2(&v.base);
    Ok(w.dir.scale(lambda.conj()))
}

/// The Kähler form `omega(v_p,w_p) = Im(-<p,p><v,w>)`.
pub fn omega(v: &TangentRep, w: &TangentRep) -> Result<f64> {
    check_base(&v.base)?;
    let wd = rebase(v, w)?;
    Ok((form(&v.dir, &wd) * (-norm2(&v.base))).im)
}

/// Velocity of the patch along one coordinate by a central difference.
fn patch_tangent<F>(patch: &F, s: f64, t: f64, h: f64, along_s: bool) -> Result<TangentRep>
where
    F: Fn(f64, f64) -> PVec,
{
    let (plus, minus) = if along_s {
        (patch(s + h, t), patch(s - h, t))
    } else {
        (patch(s, t + h), patch(s, t - h))
    };
    let x = patch(s, t);
    check_base(&x)?;
    if norm2(&x) >= 0.0 {
        return Err(GeomError::Signature("patch leaves the ball"));
    }
    TangentRep::from_curve(x, (plus - minus).scale(C64::new(0.5 / h, 0.0)))
}

/// Largest deviation of the finite-difference `dP_c` from `omega` on the coordinate bivectors.
///
/// With `alpha = P_c(d/ds)` and `beta = P_c(d/dt)`, the exterior derivative is
/// `d beta/ds - d alpha/dt`; all derivatives are central differences with step `h`.
pub fn check_dp<F>(c: &PVec, patch: F, samples: &[(f64, f64)], h: f64) -> Result<f64>
where
    F: Fn(f64, f64) -> PVec,
{
    let alpha = |s: f64, t: f64| patch_tangent(&patch, s, t, h, true).and_then(|v| potential(c, &v));
    let beta = |s: f64, t: f64| patch_tangent(&patch, s, t, h, false).and_then(|v| potential(c, &v));
    let mut worst = 0.0f64;
    for &(s, t) in samples {
        let d_beta = (beta(s + h, t)? - beta(s - h, t)?) / (2.0 * h);
        let d_alpha = (alpha(s, t + h)? - alpha(s, t - h)?) / (2.0 * h);
        let ts = patch_tangent(&patch, s, t, h, true)?;
        let tt = patch_tangent(&patch, s, t, h, false)?;
        worst = worst.max((d_beta - d_alpha - omega(&ts, &tt)?).abs());
    }
    Ok(worst)
}

/// Deviation of the central difference of `f_{c1,c2}` along `v` from `P_{c1}(v) - P_{c2}(v)`.
pub fn check_df(c1: &PVec, c2: &PVec, v: &TangentRep, h: f64) -> Result<f64> {
    let p = v.base;
    let step = v.dir.scale(C64::new(norm2(&p) * h, 0.0));
    let df = f_pot(c1, c2, &[p - step, p, p + step])? / (2.0 * h);
    Ok((df - (potential(c1, v)? - potential(c2, v)?)).abs())
}

/// Increment of `f_{c,s}` along the segment from `s` to `-s_next` inside the ball.
///
/// Requires `<s_next,s> > 0`, so the segment stays negative. Along the way the tracked
/// quantity `<c,p><p,s>/<c,s>` must never be real nonnegative; meeting that ray is reported
/// as a property violation. `steps` segments are used.
pub fn edge_increment(c: &PVec, s: &PVec, s_next: &PVec, steps: usize) -> Result<f64> {
    let pair = form(s_next, s);
    if pair.re <= 0.0 || pair.im.abs() > 1e-9 * pair.norm() {
        return Err(GeomError::Property(format!("<s_next,s> = {pair} is not positive")));
    }
    let a = s.scale(C64::new(1.0 / s.coord_norm(), 0.0));
    let b = -(s_next.scale(C64::new(1.0 / s_next.coord_norm(), 0.0)));
    let mut path = Vec::with_capacity(steps + 1);
    for j in 0..=steps {
        let x = j as f64 / steps as f64;
        let p = a.scale(C64::new(1.0 - x, 0.0)) + b.scale(C64::new(x, 0.0));
        if norm2(&p) >= 0.0 {
            return Err(GeomError::Signature("edge segment leaves the ball"));
        }
        let z = f_quantity(c, s, &p)?;
        if z.re >= 0.0 && z.im.abs() <= 1e-12 * z.norm() {
            return Err(GeomError::Property("tracked quantity met the nonnegative real axis".into()));
        }
        path.push(p);
    }
    f_pot(c, s, &path)
}

/// Closed form of [`edge_increment`]: `Arg(<c,s_next>/<c,s>) / 2 - pi/2` with `Arg` in `[0, 2pi)`.
pub fn edge_increment_closed(c: &PVec, s: &PVec, s_next: &PVec) -> f64 {
    angle_0_2pi((form(c, s_next) / form(c, s)).arg()) / 2.0 - FRAC_PI_2
}

/// One edge of the cycle: `s_i`, `s_{i+1} = R_i s_i` and `Arg(<q,s_{i+1}>/<q,s_i>)` in `[0, 2pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToledoEdge {
    pub s: PVec,
    pub s_next: PVec,
    pub arg: f64,
}

/// The `n` edge terms of the Toledo sum, each cross-checked against path tracking.
///
/// Every term is invariant under rescaling `s_i`, so `s_i = W^{i-2} h1` is built directly
/// rather than by iterating the reflections.
pub fn toledo_edges(data: &QuadrangleData) -> Result<Vec<ToledoEdge>> {
    let n = data.params.n;
    let q = data.q;
    let mut edges = Vec::with_capacity(n as usize);
    for i in 1..=n {
        let s = data.iso_w.pow(i - 2).apply(&data.h1);
        let s_next = data.cycle_reflection(i).apply(&s);
        let expected = data.iso_w.pow(i - 1).apply(&data.h1);
        if !s_next.same_point(&expected, 1e-7) {
            return Err(GeomError::Property(format!("R_{i} s_{i} is not s_{}", i + 1)));
        }
        let arg = angle_0_2pi((form(&q, &s_next) / form(&q, &s)).arg());
        let mut steps = EDGE_STEPS;
        let tracked = loop {
            match edge_increment(&q, &s, &s_next, steps) {
                Err(GeomError::Degenerate(_)) if steps < MAX_EDGE_STEPS => steps *= 2,
                other => break other?,
            }
        };
        let closed = arg / 2.0 - FRAC_PI_2;
        if (tracked - closed).abs() > 1e-9 {
            return Err(GeomError::Property(format!(
                "edge {i}: tracked increment {tracked} differs from closed form {closed}"
            )));
        }
        edges.push(ToledoEdge { s, s_next, arg });
    }
    Ok(edges)
}

/// The unrounded Toledo sum `(1/pi) sum (Arg(<q,s_{i+1}>/<q,s_i>) - pi)`.
pub fn toledo_integral_value(data: &QuadrangleData) -> Result<f64> {
    let edges = toledo_edges(data)?;
    Ok(edges.iter().map(|e| e.arg - PI).sum::<f64>() / PI)
}

/// The Toledo invariant of the cycle, rounded to the nearest third.
///
/// Fails when the sum is farther than [`TOLEDO_ROUND_TOL`] from a multiple of `1/3`.
pub fn toledo_by_integral(data: &QuadrangleData) -> Result<Ratio<i64>> {
    let value = toledo_integral_value(data)?;
    let thirds = (3.0 * value).round();
    if (value - thirds / 3.0).abs() > TOLEDO_ROUND_TOL {
        return Err(GeomError::Property(format!("Toledo sum {value} is not a multiple of 1/3")));
    }
    Ok(Ratio::new(thirds as i64, 3))
}

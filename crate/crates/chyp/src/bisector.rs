//! Bisectors given by two points of their real spine.
//!
//! The bisector with real spine through `g1, g2` is the projectivization of
//! `R g1 + R g2 + C f` (after rephasing so `<g1,g2>` is real), where the focus `f`
//! is polar to the complex spine. Its points satisfy `Im(<g1,x><x,g2>/<g1,g2>) = 0`,
//! and the sign of that imaginary part, multiplied by the signature of the focus,
//! selects the side of the oriented normal.

use std::f64::consts::TAU;

use crate::error::{GeomError, Result};
use crate::hermitian::{
    classify, form, midpoint_polar, norm2, proj_perp, reflection, slice_basis, tance, tance_to_bisector,
    tance_to_slice, PVec, PointTag, TangentRep, C64, CLASSIFY_TOL, I,
};
use crate::isometry::angle_0_2pi;

/// Strictness margin applied to the strict inequalities of this module.
pub const STRICT_MARGIN: f64 = 1e-9;

/// A bisector stored by two points of its real spine and its focus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bisector {
    pub g1: PVec,
    pub g2: PVec,
    pub focus: PVec,
}

impl Bisector {
    pub fn new(g1: PVec, g2: PVec) -> Result<Self> {
        let ta = tance(&g1, &g2);
        if (ta - 1.0).abs() <= 1e-10 || ta <= 1e-10 {
            return Err(GeomError::Degenerate("spine points must have tance other than 0 and 1"));
        }
        let focus = g1.j().cross(&g2.j()).conj();
        if focus.is_zero() {
            return Err(GeomError::Degenerate("spine points coincide"));
        }
        Ok(Bisector { g1, g2, focus })
    }

    /// Signature of the focus, `+1` or `-1` (`+1` when isotropic).
    pub fn focus_sign(&self) -> f64 {
        if norm2(&self.focus) < 0.0 && classify(&self.focus, CLASSIFY_TOL).tag == PointTag::Negative {
            -1.0
        } else {
            1.0
        }
    }

    /// The complex number `<g1,x><x,g2>/<g1,g2>`, real exactly on the bisector.
    pub fn x_invariant(&self, x: &PVec) -> C64 {
        form(&self.g1, x) * form(x, &self.g2) / form(&self.g1, &self.g2)
    }

    /// Scale under which [`Bisector::x_invariant`] is compared with zero.
    fn x_scale(&self, x: &PVec) -> f64 {
        x.coord_norm_sqr() * self.g1.coord_norm() * self.g2.coord_norm() / form(&self.g1, &self.g2).norm()
    }

    /// The two isotropic points of the real spine, when the spine meets the ball.
    pub fn vertices(&self) -> Option<(PVec, PVec)> {
        let g1 = self.g1;
        let c = form(&self.g1, &self.g2);
        let g2 = self.g2.scale(c / c.norm());
        let (n1, n2, t) = (norm2(&g1), norm2(&g2), form(&g1, &g2).re);
        let disc = t * t - n1 * n2;
        if disc <= 0.0 {
            return None;
        }
        let s = disc.sqrt();
        // a^2 n1 + 2ab t + b^2 n2 = 0 on the real span; solve for the ratio avoiding cancellation.
        let (x1, x2) = if n2.abs() > n1.abs() {
            let q = -(t + t.signum() * s);
            let r1 = q / n2;
            let r2 = n1 / q;
            (g1 + g2.scale(C64::new(r1, 0.0)), g1 + g2.scale(C64::new(r2, 0.0)))
        } else {
            let q = -(t + t.signum() * s);
            let r1 = q / n1;
            let r2 = n2 / q;
            (g1.scale(C64::new(r1, 0.0)) + g2, g1.scale(C64::new(r2, 0.0)) + g2)
        };
        Some((x1, x2))
    }
}

/// `b(x,g1,g2) = 2i Im(<g1,x><x,g2>/<g1,g2>)`, vanishing exactly on the bisector.
pub fn bisector_value(x: &PVec, b: &Bisector) -> C64 {
    C64::new(0.0, 2.0 * b.x_invariant(x).im)
}

/// True when `x` satisfies the bisector equation up to a scale-free tolerance.
pub fn contains(x: &PVec, b: &Bisector, tol: f64) -> bool {
    b.x_invariant(x).im.abs() <= tol * b.x_scale(x)
}

/// The normal `<-,p> i((<p,g2>/<g1,g2>) g1 - (<p,g1>/<g2,g1>) g2)` at a bisector point `p`.
pub fn normal_vector(p: &PVec, b: &Bisector) -> Result<TangentRep> {
    if classify(p, CLASSIFY_TOL).tag == PointTag::Isotropic {
        return Err(GeomError::Isotropic);
    }
    if p.same_point(&b.focus, 1e-12) {
        return Err(GeomError::Degenerate("point is the focus"));
    }
    let a1 = form(p, &b.g2) / form(&b.g1, &b.g2);
    let a2 = form(p, &b.g1) / form(&b.g2, &b.g1);
    let dir = (b.g1.scale(a1) - b.g2.scale(a2)).scale(I);
    TangentRep::new(*p, dir)
}

/// Real number `-i t(v,p,g1,g2)`; it vanishes iff `<-,p> v` is tangent to the bisector at `p`.
pub fn tangency_test(v: &PVec, p: &PVec, b: &Bisector) -> f64 {
    let a = (form(&b.g1, v) * form(p, &b.g2) + form(&b.g1, p) * form(v, &b.g2)) / form(&b.g1, &b.g2);
    2.0 * a.im
}

/// Side of the bisector: sign of `sigma_f Im(<g1,x><x,g2>/<g1,g2>)`, `0` within `tol`.
///
/// The side with sign `+1` is the one the normal of [`normal_vector`] points to.
pub fn halfspace_sign(x: &PVec, b: &Bisector, tol: f64) -> i8 {
    let v = b.focus_sign() * b.x_invariant(x).im / b.x_scale(x);
    if v > tol {
        1
    } else if v < -tol {
        -1
    } else {
        0
    }
}

/// Oriented angle at `p` from the normal of `B(g,g1)` to the normal of `B(g,g2)`, in `[0, 2pi)`.
pub fn cotranchal_angle(g: &PVec, g1: &PVec, g2: &PVec, p: &PVec) -> Result<f64> {
    if classify(p, CLASSIFY_TOL).tag == PointTag::Isotropic {
        return Err(GeomError::Isotropic);
    }
    let scale = p.coord_norm();
    if form(g1, p).norm() <= 1e-12 * scale * g1.coord_norm() || form(g2, p).norm() <= 1e-12 * scale * g2.coord_norm() {
        return Err(GeomError::Degenerate("point is a focus"));
    }
    let val = -norm2(p) * norm2(g) * form(g1, p) * form(p, g2) / (form(g1, g) * form(g, g2));
    Ok(angle_0_2pi(val.arg()))
}

/// `RHS - LHS` of the transversality criterion for `B(g,g1)` and `B(g,g2)` along the slice of `g`.
pub fn cotranchal_slack(g: &PVec, g1: &PVec, g2: &PVec) -> Result<f64> {
    if classify(g, CLASSIFY_TOL).tag != PointTag::Positive {
        return Err(GeomError::Signature("common slice polar must be positive"));
    }
    let (t1, t2) = (tance(g, g1), tance(g, g2));
    if t1 <= 1.0 || t2 <= 1.0 {
        return Err(GeomError::NotUltraparallel(t1.min(t2)));
    }
    let lhs = ((form(g1, g2) * norm2(g) / (form(g1, g) * form(g, g2))).re - 1.0).abs();
    let rhs = (1.0 - 1.0 / t1).sqrt() * (1.0 - 1.0 / t2).sqrt();
    Ok(rhs - lhs)
}

/// Transversality of `B(g,g1)` and `B(g,g2)` along their common slice, with strict margin `delta`.
pub fn cotranchal_transversal(g: &PVec, g1: &PVec, g2: &PVec, delta: f64) -> Result<bool> {
    Ok(cotranchal_slack(g, g1, g2)? > delta)
}

/// Brute-force transversality check over a sampled closed disc of the common slice.
///
/// At a slice point `p` the normal of `B(g,gi)` is a multiple of `i w_i g` with
/// `w_i = <p,gi>/<g,gi>`, so the two tangent hyperplanes coincide exactly when
/// `w1 conj(w2)` is real. The bisectors are transversal when `Im(w1 conj(w2))`
/// keeps a strict sign over a `grid x grid` interior sample plus `8 grid` boundary points.
pub fn transversality_oracle(g: &PVec, g1: &PVec, g2: &PVec, grid: usize) -> Result<bool> {
    if classify(g, CLASSIFY_TOL).tag != PointTag::Positive {
        return Err(GeomError::Signature("common slice polar must be positive"));
    }
    let (n0, p0) = slice_basis(g)?;
    let (c1, c2) = (form(g, g1), form(g, g2));
    let eval = |z: C64| {
        let p = n0 + p0.scale(z);
        let w1 = form(&p, g1) / c1;
        let w2 = form(&p, g2) / c2;
        let denom = w1.norm() * w2.norm();
        if denom == 0.0 {
            0.0
        } else {
            (w1 * w2.conj()).im / denom
        }
    };
    let mut pos = false;
    let mut neg = false;
    let mut record = |s: f64| {
        if s > 0.0 {
            pos = true;
        } else if s < 0.0 {
            neg = true;
        } else {
            pos = true;
            neg = true;
        }
    };
    for i in 0..grid {
        for j in 0..grid {
            let x = -1.0 + 2.0 * (i as f64 + 0.5) / grid as f64;
            let y = -1.0 + 2.0 * (j as f64 + 0.5) / grid as f64;
            if x * x + y * y <= 1.0 {
                record(eval(C64::new(x, y)));
            }
        }
    }
    let nb = 8 * grid.max(1);
    for k in 0..nb {
        record(eval(C64::from_polar(1.0, TAU * k as f64 / nb as f64)));
    }
    Ok(!(pos && neg))
}

/// Image of `s` on the slice of `p1` under the meridional identification with the slice of `p2`.
pub fn slice_transport(s: &PVec, p1: &PVec, p2: &PVec) -> Result<PVec> {
    if form(s, p1).norm() > 1e-8 * s.coord_norm() * p1.coord_norm() {
        return Err(GeomError::Degenerate("point is not on the initial slice"));
    }
    let m = midpoint_polar(p1, p2)?;
    Ok(reflection(&m)?.apply(s))
}

/// Isotropic points `(v, v')` of the real spine through the positive `g` and `gi`,
/// normalized so `<v,v'> = 1/2` and `g = v + v'` once `<g,g> = 1`.
pub fn vertices_through(g: &PVec, gi: &PVec) -> Result<(PVec, PVec, PVec)> {
    let gg = norm2(g);
    if gg <= 0.0 {
        return Err(GeomError::Signature("spine point must be positive"));
    }
    let g = g.scale(C64::new(1.0 / gg.sqrt(), 0.0));
    let b = proj_perp(&g, gi)?;
    let bb = norm2(&b);
    if bb >= 0.0 {
        return Err(GeomError::Degenerate("real spine misses the ball"));
    }
    let d = b.scale(C64::new(1.0 / (-bb).sqrt(), 0.0));
    let half = C64::new(0.5, 0.0);
    Ok(((g + d).scale(half), (g - d).scale(half), g))
}

/// Radical inverse of `i` in base `b`, the `i`-th Halton coordinate.
fn halton(mut i: u64, b: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= b as f64;
        r += f * (i % b) as f64;
        i /= b;
    }
    r
}

/// Sampled supremum of `ta(p, S) - 1` over points `p` of `B2` inside the ball with
/// `ta(p, B1) < 1 + eps^2`, where `S` is the common slice.
///
/// Both bisectors are given through the common slice polar `g` and a second spine
/// point: `B1 = B(g,g1)`, `B2 = B(g,g2)`. Points of `B2` are `z f + g(t)` with `f`
/// the unit focus of `B2`, `g(t) = v2/t - t v2'` on its real spine, `|z| < 1`, and
/// `(log t, |z|^2, arg z)` drawn from a Halton sequence with `t` in `[1e-2, 1e2]`.
/// Returns `0` when no sample meets the condition.
pub fn separability_probe(g: &PVec, g1: &PVec, g2: &PVec, eps: f64, samples: usize) -> Result<f64> {
    if !cotranchal_transversal(g, g1, g2, STRICT_MARGIN)? {
        return Err(GeomError::Degenerate("bisectors are not transversal along the common slice"));
    }
    let (v1, v1p, _) = vertices_through(g, g1)?;
    let (v2, v2p, gn) = vertices_through(g, g2)?;
    let b2 = Bisector::new(gn, *g2)?;
    let f = b2.focus;
    let ff = norm2(&f);
    if ff <= 0.0 {
        return Err(GeomError::Signature("focus must be positive"));
    }
    let f = f.scale(C64::new(1.0 / ff.sqrt(), 0.0));
    let span = 100f64.ln();
    let mut sup: f64 = 0.0;
    for i in 1..=samples as u64 {
        let lt = -span + 2.0 * span * halton(i, 2);
        let r = halton(i, 3).sqrt();
        let th = TAU * halton(i, 5);
        let t = lt.exp();
        let p = f.scale(C64::from_polar(r, th)) + v2.scale(C64::new(1.0 / t, 0.0)) - v2p.scale(C64::new(t, 0.0));
        if norm2(&p) >= -1e-12 * p.coord_norm_sqr() {
            continue;
        }
        if tance_to_bisector(&p, &v1, &v1p)? < 1.0 + eps * eps {
            sup = sup.max(tance_to_slice(&p, &gn)? - 1.0);
        }
    }
    Ok(sup)
}

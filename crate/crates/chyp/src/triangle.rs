//! Triangles of bisectors: ordered triples of pairwise ultraparallel complex geodesics.
//!
//! A triple of positive polar points `g1, g2, g3` with `ta(gi,gj) > 1` is determined up to
//! isometry by `tij = sqrt(ta(gi,gj))` and the unit complex number `eps`, the phase of
//! `<g1,g2><g2,g3><g3,g1>`. With representatives normalized so the Gram matrix is
//! `[[1, t12, t31 conj(eps)], [t12, 1, t23], [t31 eps, t23, 1]]`, the holonomy is the
//! product of the reflections in the three middle slices and fixes `g1` up to the factor `eps`.

use nalgebra::Matrix3;

use crate::error::{GeomError, Result};
use crate::hermitian::{classify as classify_point, form, norm2, proj_perp, reflection, PVec, PointTag, C64, CLASSIFY_TOL, ONE};
use crate::isometry::{classify, restrict_to_slice, Isometry, ParabolicKind, SliceClass, SliceTag};

/// The complete invariants `(t12, t23, t31, eps)` of an ordered triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleInv {
    pub t12: f64,
    pub t23: f64,
    pub t31: f64,
    pub eps: C64,
}

impl TriangleInv {
    pub fn eps0(&self) -> f64 {
        self.eps.re
    }

    pub fn eps1(&self) -> f64 {
        self.eps.im
    }

    /// Determinant of the normalized Gram matrix, `1 + 2 t12 t23 t31 eps0 - t12^2 - t23^2 - t31^2`.
    pub fn d(&self) -> f64 {
        1.0 + 2.0 * self.t12 * self.t23 * self.t31 * self.eps0()
            - self.t12 * self.t12
            - self.t23 * self.t23
            - self.t31 * self.t31
    }

    /// `(t12 + 1)(t23 + 1)(t31 + 1)`.
    fn shifted_product(&self) -> f64 {
        (self.t12 + 1.0) * (self.t23 + 1.0) * (self.t31 + 1.0)
    }

    /// Smallest of the three transversality slacks, each divided by `1 + t12^2 + t23^2 + t31^2`.
    ///
    /// The three inequalities place `eps0^2` on each of the squared sides in turn.
    pub fn transversality_slack(&self) -> f64 {
        let (a, b, c, e) = (self.t12 * self.t12, self.t23 * self.t23, self.t31 * self.t31, self.eps0());
        let rhs = 1.0 + 2.0 * self.t12 * self.t23 * self.t31 * e;
        let e2 = e * e;
        let s1 = rhs - (a * e2 + b + c);
        let s2 = rhs - (a + b * e2 + c);
        let s3 = rhs - (a + b + c * e2);
        s1.min(s2).min(s3) / (1.0 + a + b + c)
    }

    /// All three transversality inequalities hold with normalized slack above `delta`.
    pub fn is_transversal(&self, delta: f64) -> bool {
        self.transversality_slack() > delta
    }

    /// Counterclockwise orientation: `eps1 < -delta`.
    pub fn is_ccw(&self, delta: f64) -> bool {
        self.eps1() < -delta
    }

    /// `|tr psi| = sqrt(2(1 + eps0)) (1 - d / ((t12+1)(t23+1)(t31+1)))`.
    pub fn holonomy_abs_trace(&self) -> f64 {
        (2.0 * (1.0 + self.eps0())).max(0.0).sqrt() * (1.0 - self.d() / self.shifted_product())
    }

    /// Closed form `tr phi = eps - (1 + conj(eps))(1 - d / ((t12+1)(t23+1)(t31+1)))`.
    pub fn holonomy_trace(&self) -> C64 {
        self.eps - (ONE + self.eps.conj()) * (1.0 - self.d() / self.shifted_product())
    }

    /// Invariants of the triple relabeled as `(g2, g3, g1)`.
    pub fn rotate(&self) -> TriangleInv {
        TriangleInv { t12: self.t23, t23: self.t31, t31: self.t12, eps: self.eps }
    }
}

/// Polar points of an ordered triple of pairwise ultraparallel complex geodesics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrianglePolars {
    pub g: [PVec; 3],
}

impl TrianglePolars {
    pub fn new(g1: PVec, g2: PVec, g3: PVec) -> Result<Self> {
        let g = [g1, g2, g3];
        for p in &g {
            if classify_point(p, CLASSIFY_TOL).tag != PointTag::Positive {
                return Err(GeomError::Signature("triangle vertices must be positive"));
            }
        }
        for (i, j) in [(0, 1), (1, 2), (2, 0)] {
            let ta = crate::hermitian::tance(&g[i], &g[j]);
            if ta <= 1.0 {
                return Err(GeomError::NotUltraparallel(ta));
            }
        }
        Ok(TrianglePolars { g })
    }

    /// Representatives with the normalized Gram matrix: unit norms, `<g1,g2> = t12`, `<g2,g3> = t23`.
    pub fn normalized(&self) -> [PVec; 3] {
        let unit = |p: &PVec| p.scale(C64::new(1.0 / norm2(p).sqrt(), 0.0));
        let g1 = unit(&self.g[0]);
        let g2 = crate::hermitian::align_phase(&g1, &unit(&self.g[1]));
        let g3 = crate::hermitian::align_phase(&g2, &unit(&self.g[2]));
        [g1, g2, g3]
    }

    /// Middle-slice polars `m1, m2, m3` of the three sides, with `<mi,mi> = 1`.
    pub fn middle_polars(&self) -> [PVec; 3] {
        let inv = invariants(self);
        let [g1, g2, g3] = self.normalized();
        let s = |t: f64| C64::new(1.0 / (2.0 * t + 2.0).sqrt(), 0.0);
        [
            (g1 + g2).scale(s(inv.t12)),
            (g2 + g3).scale(s(inv.t23)),
            (g1.scale(inv.eps) + g3).scale(s(inv.t31)),
        ]
    }
}

/// Invariants of an ordered triple; independent of the chosen representatives.
pub fn invariants(t: &TrianglePolars) -> TriangleInv {
    let [g1, g2, g3] = t.g;
    let kappa = form(&g1, &g2) * form(&g2, &g3) * form(&g3, &g1) / (norm2(&g1) * norm2(&g2) * norm2(&g3));
    let tt = |a: &PVec, b: &PVec| crate::hermitian::tance(a, b).sqrt();
    TriangleInv { t12: tt(&g1, &g2), t23: tt(&g2, &g3), t31: tt(&g3, &g1), eps: kappa / kappa.norm() }
}

/// A triple realizing the given invariants, with Gram matrix exactly the normalized one.
///
/// The frame comes from the eigendecomposition `V diag(l) V*` of the transposed Gram matrix:
/// the columns of `|l|^{1/2} V*`, negative eigenvalue first, have the prescribed pairings and
/// coordinates no larger than the `tij`, which keeps later matrix products well conditioned.
pub fn from_invariants(inv: &TriangleInv) -> Result<TrianglePolars> {
    if inv.t12 <= 1.0 || inv.t23 <= 1.0 || inv.t31 <= 1.0 {
        return Err(GeomError::NotUltraparallel(inv.t12.min(inv.t23).min(inv.t31).powi(2)));
    }
    if inv.d() > 1e-10 {
        return Err(GeomError::Degenerate("positive Gram determinant"));
    }
    let r = |x: f64| C64::new(x, 0.0);
    let y = inv.eps * inv.t31;
    // Transpose of the Gram matrix g_ij = <g_i,g_j>, which equals A* J A for the coordinate matrix A.
    let h = Matrix3::new(ONE, r(inv.t12), y, r(inv.t12), ONE, r(inv.t23), y.conj(), r(inv.t23), ONE);
    let eig = h.symmetric_eigen();
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut g = [PVec::zero(); 3];
    for (row, &k) in order.iter().enumerate() {
        let s = eig.eigenvalues[k].abs().sqrt();
        for (i, gi) in g.iter_mut().enumerate() {
            gi.0[row] = eig.eigenvectors[(i, k)].conj() * s;
        }
    }
    TrianglePolars::new(g[0], g[1], g[2])
}

/// Holonomy `R(m3) R(m2) R(m1)`; it maps `g1` to `eps g1` for the normalized `g1`.
pub fn holonomy(t: &TrianglePolars) -> Isometry {
    let m = t.middle_polars();
    let r = |p: &PVec| reflection(p).expect("middle polars are positive");
    r(&m[2]) * r(&m[1]) * r(&m[0])
}

/// Inverse holonomy `R(m1) R(m2) R(m3)`, formed directly from the involutions.
pub fn holonomy_inverse(t: &TrianglePolars) -> Isometry {
    let m = t.middle_polars();
    let r = |p: &PVec| reflection(p).expect("middle polars are positive");
    r(&m[0]) * r(&m[1]) * r(&m[2])
}

/// `tr phi` through the Gram entries of the middle polars:
/// `8 g12 g23 g31 - 4 g23 g32 - 4 g13 g31 - 4 g12 g21 + 3`.
pub fn holonomy_trace_from_middles(t: &TrianglePolars) -> C64 {
    let m = t.middle_polars();
    let g = |i: usize, j: usize| form(&m[i], &m[j]);
    8.0 * g(0, 1) * g(1, 2) * g(2, 0) - 4.0 * g(1, 2) * g(2, 1) - 4.0 * g(0, 2) * g(2, 0) - 4.0 * g(0, 1) * g(1, 0)
        + C64::new(3.0, 0.0)
}

/// Classification of the holonomy restricted to the first slice.
///
/// Fails with a property violation if the holonomy of a counterclockwise
/// transversal triangle is trivial or R-parabolic, which cannot happen.
pub fn classify_triangle(t: &TrianglePolars, tol: f64) -> Result<SliceClass> {
    let phi = holonomy(t);
    let a = restrict_to_slice(&phi, &t.g[0])?;
    let class = classify(&a, tol);
    match (class.tag, class.parabolic) {
        (SliceTag::Identity, _) => Err(GeomError::Property("trivial holonomy".into())),
        (SliceTag::Parabolic, Some(ParabolicKind::R)) => Err(GeomError::Property("R-parabolic holonomy".into())),
        _ => Ok(class),
    }
}

/// Oriented area of the geodesic triangle underlying a C-plane triangle (`d = 0`).
///
/// Uses `1/2 arg(-<p1,p2><p2,p3><p3,p1>)` with `p1 = pi[g1] g2`, `p2 = pi[g2] g1`, `p3 = pi[g3] g2`.
pub fn cplane_area(t: &TrianglePolars) -> Result<f64> {
    let inv = invariants(t);
    if inv.d().abs() > 1e-8 * (1.0 + inv.t12.powi(2) + inv.t23.powi(2) + inv.t31.powi(2)) {
        return Err(GeomError::Degenerate("triangle is not a C-plane triangle"));
    }
    let [g1, g2, g3] = t.g;
    let p1 = proj_perp(&g1, &g2)?;
    let p2 = proj_perp(&g2, &g1)?;
    let p3 = proj_perp(&g3, &g2)?;
    let v = -form(&p1, &p2) * form(&p2, &p3) * form(&p3, &p1);
    Ok(0.5 * v.arg())
}

/// Membership in `1 < t1 <= t2, t3` and `t1^2 e^2 + t2^2 + t3^2 < 1 + 2 t1 t2 t3 e <= t1^2 + t2^2 + t3^2`,
/// with every inequality relaxed by `tol`.
pub fn region_member(e: f64, t1: f64, t2: f64, t3: f64, tol: f64) -> bool {
    let mid = 1.0 + 2.0 * t1 * t2 * t3 * e;
    let scale = 1.0 + t1 * t1 + t2 * t2 + t3 * t3;
    1.0 < t1 + tol
        && t1 <= t2 + tol
        && t1 <= t3 + tol
        && t1 * t1 * e * e + t2 * t2 + t3 * t3 < mid + tol * scale
        && mid <= t1 * t1 + t2 * t2 + t3 * t3 + tol * scale
}

/// Root of a decreasing function on `[lo, hi]` with `f(lo) >= 0 > f(hi)`, by bisection.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    while hi - lo > 1e-12 * hi.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        if f(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Push samples `from..=to` of a monotone stage variable with spacing at most `step`.
fn ladder(from: f64, to: f64, step: f64) -> Vec<f64> {
    let n = (((to - from).abs() / step).ceil() as usize).max(1);
    (1..=n).map(|k| from + (to - from) * k as f64 / n as f64).collect()
}

/// Piecewise-monotone path inside the closed region from `(e, t1, t2, t3)` to the `d = 0` locus.
///
/// Stage one raises `t1` until `t1 = t2` or `d = 0`; stage two raises `t1 = t2` until
/// `t1 = t2 = t3` or `d = 0`; stage three raises `e` until `d = 0`. Here `t2 <= t3` after
/// an internal relabeling that is undone in the output. Stage switches are located by bisection.
pub fn deformation_path(e: f64, t1: f64, t2: f64, t3: f64, step: f64) -> Result<Vec<[f64; 4]>> {
    if step <= 0.0 || !region_member(e, t1, t2, t3, 1e-12) {
        return Err(GeomError::Degenerate("start point is outside the region"));
    }
    let swapped = t2 > t3;
    let (b, c) = if swapped { (t3, t2) } else { (t2, t3) };
    let emit = |e: f64, a: f64, b: f64, c: f64| if swapped { [e, a, c, b] } else { [e, a, b, c] };
    let mut path = vec![emit(e, t1, b, c)];
    let on_locus = |e: f64, a: f64, b: f64, c: f64| (1.0 + 2.0 * a * b * c * e - a * a - b * b - c * c).abs() <= 1e-12 * (1.0 + a * a + b * b + c * c);
    if on_locus(e, t1, b, c) {
        return Ok(path);
    }
    // Stage one: f(x) = x^2 + b^2 + c^2 - 2 x b c e - 1 decreases on [t1, b].
    let f = |x: f64| x * x + b * b + c * c - 2.0 * x * b * c * e - 1.0;
    let (x1, done) = if f(b) < 0.0 { (bisect(f, t1, b), true) } else { (b, false) };
    for x in ladder(t1, x1, step) {
        path.push(emit(e, x, b, c));
    }
    if done || on_locus(e, x1, b, c) {
        return Ok(path);
    }
    // Stage two: h(x) = c^2 - 1 - 2 x^2 (c e - 1) decreases on [b, c].
    let h = |x: f64| c * c - 1.0 - 2.0 * x * x * (c * e - 1.0);
    let (x2, done) = if h(c) < 0.0 { (bisect(h, x1, c), true) } else { (c, false) };
    for x in ladder(x1, x2, step) {
        path.push(emit(e, x, x, c));
    }
    if done || on_locus(e, x2, x2, c) {
        return Ok(path);
    }
    // Stage three: all sides equal; raise e until x e = (3x^2 - 1)/(2x^2).
    let x = x2;
    let e_end = (3.0 * x * x - 1.0) / (2.0 * x * x * x);
    for ee in ladder(e, e_end, step) {
        path.push(emit(ee, x, x, x));
    }
    Ok(path)
}

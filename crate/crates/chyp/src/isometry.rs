//! Isometries of the complex hyperbolic plane and their action on a stabilized complex geodesic.
//!
//! An [`Isometry`] is a `3x3` complex matrix preserving the Hermitian form. When
//! it stabilizes the complex geodesic polar to a positive point `g`, it induces a
//! Möbius transformation of the disc `{n0 + z p0 : |z| <= 1}` spanned by
//! [`slice_basis`]. The disc coordinate `z = -<x,p0>/<x,n0>` is holomorphic, so
//! increasing `arg z` is the natural orientation of the boundary circle.

use std::f64::consts::{PI, TAU};
use std::ops::Mul;

use crate::error::{GeomError, Result};
use crate::hermitian::{form, norm2, slice_basis, PVec, C64, J, ONE, ZERO};

/// Relative tolerance for "`I g` is proportional to `g`".
pub const STABILIZE_TOL: f64 = 1e-8;

/// Width of the band around `|tr| = 2` classified as parabolic or identity.
pub const PARABOLIC_BAND: f64 = 1e-8;

/// Minimum angular separation between boundary points used by the combinatorial predicates.
pub const ANGLE_SEPARATION: f64 = 1e-6;

/// A `3x3` complex matrix acting on column vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    pub m: [[C64; 3]; 3],
}

impl Isometry {
    pub fn from_matrix(m: [[C64; 3]; 3]) -> Self {
        Isometry { m }
    }

    pub fn identity() -> Self {
        Self::diag([ONE; 3])
    }

    pub fn diag(d: [C64; 3]) -> Self {
        let mut m = [[ZERO; 3]; 3];
        for i in 0..3 {
            m[i][i] = d[i];
        }
        Isometry { m }
    }

    pub fn apply(&self, p: &PVec) -> PVec {
        let mut out = [ZERO; 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.m[i][0] * p.0[0] + self.m[i][1] * p.0[1] + self.m[i][2] * p.0[2];
        }
        PVec(out)
    }

    /// Matrix product `self * other` (apply `other` first).
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let mut m = [[ZERO; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = (0..3).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        Isometry { m }
    }

    pub fn det(&self) -> C64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn trace(&self) -> C64 {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    /// Matrix inverse through the adjugate.
    pub fn inverse(&self) -> Isometry {
        let m = &self.m;
        let d = self.det();
        let mut inv = [[ZERO; 3]; 3];
        for (i, row) in inv.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
                let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
                *e = (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) / d;
            }
        }
        Isometry { m: inv }
    }

    /// `self^k` for `k >= 0` by repeated squaring; negative powers go through [`Isometry::inverse`].
    pub fn pow(&self, k: i64) -> Isometry {
        let mut base = if k < 0 { self.inverse() } else { *self };
        let mut e = k.unsigned_abs();
        let mut acc = Isometry::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, c: C64) -> Isometry {
        let mut m = self.m;
        for row in m.iter_mut() {
            for e in row.iter_mut() {
                *e *= c;
            }
        }
        Isometry { m }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_diff(&self, other: &Isometry) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                d = d.max((self.m[i][j] - other.m[i][j]).norm());
            }
        }
        d
    }

    /// Largest entrywise deviation of `M* J M` from `J`.
    pub fn unitarity_defect(&self) -> f64 {
        let mut d: f64 = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                let s: C64 = (0..3).map(|i| self.m[i][a].conj() * J[i] * self.m[i][b]).sum();
                let target = if a == b { J[a] } else { 0.0 };
                d = d.max((s - target).norm());
            }
        }
        d
    }
}

impl Mul for Isometry {
    type Output = Isometry;
    fn mul(self, rhs: Isometry) -> Isometry {
        self.compose(&rhs)
    }
}

/// The action of a slice-stabilizing isometry on the disc coordinate of its slice.
///
/// Column `j` of `a` holds the `(n0, p0)` coordinates of the image of the `j`-th basis
/// vector, so `z -> (a10 + a11 z)/(a00 + a01 z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceAction {
    pub a: [[C64; 2]; 2],
    pub g: PVec,
    pub n0: PVec,
    pub p0: PVec,
}

impl SliceAction {
    pub fn trace(&self) -> C64 {
        self.a[0][0] + self.a[1][1]
    }

    pub fn det(&self) -> C64 {
        self.a[0][0] * self.a[1][1] - self.a[0][1] * self.a[1][0]
    }

    /// Image of the disc coordinate `z`.
    pub fn mobius(&self, z: C64) -> C64 {
        (self.a[1][0] + self.a[1][1] * z) / (self.a[0][0] + self.a[0][1] * z)
    }

    /// Largest deviation of `A* diag(-1,1) A` from `diag(-1,1)`.
    pub fn unitarity_defect(&self) -> f64 {
        let s = [-1.0, 1.0];
        let mut d: f64 = 0.0;
        for x in 0..2 {
            for y in 0..2 {
                let v: C64 = (0..2).map(|i| self.a[i][x].conj() * s[i] * self.a[i][y]).sum();
                let target = if x == y { s[x] } else { 0.0 };
                d = d.max((v - target).norm());
            }
        }
        d
    }
}

/// Disc coordinate `z` of `x` relative to the basis `(n0, p0)`.
pub fn slice_coordinate(x: &PVec, n0: &PVec, p0: &PVec) -> Result<C64> {
    let a = form(x, n0);
    if a.norm() <= 1e-300 {
        return Err(GeomError::Degenerate("point at infinity of the disc chart"));
    }
    Ok(-form(x, p0) / a)
}

/// Restriction of `iso` to the complex geodesic polar to `g`, expressed in [`slice_basis`].
pub fn restrict_to_slice(iso: &Isometry, g: &PVec) -> Result<SliceAction> {
    let (n0, p0) = slice_basis(g)?;
    restrict_with_basis(iso, g, &n0, &p0)
}

/// Restriction of `iso` relative to a caller-supplied orthonormal basis `(n0, p0)` of `g^perp`.
pub fn restrict_with_basis(iso: &Isometry, g: &PVec, n0: &PVec, p0: &PVec) -> Result<SliceAction> {
    if !iso.apply(g).same_point(g, STABILIZE_TOL) {
        return Err(GeomError::NotStabilized);
    }
    let in0 = iso.apply(n0);
    let ip0 = iso.apply(p0);
    let mut a = [
        [-form(&in0, n0), -form(&ip0, n0)],
        [form(&in0, p0), form(&ip0, p0)],
    ];
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let s = det.sqrt();
    for row in a.iter_mut() {
        for e in row.iter_mut() {
            *e /= s;
        }
    }
    Ok(SliceAction { a, g: *g, n0: *n0, p0: *p0 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SliceTag {
    Elliptic,
    Parabolic,
    Hyperbolic,
    Identity,
}

/// Direction in which a parabolic map pushes the boundary circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParabolicKind {
    /// Counterclockwise motion; the clockwise arc (L-part) is empty.
    R,
    /// Clockwise motion of every non-fixed boundary point.
    L,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SliceClass {
    pub tag: SliceTag,
    pub abs_trace: f64,
    /// Rotation angle in `(-pi, pi]` about the interior fixed point (elliptic only).
    pub rotation_angle: Option<f64>,
    /// Interior fixed point in the disc coordinate (elliptic only).
    pub center: Option<C64>,
    /// Fixed boundary angles in `[0, 2pi)`.
    pub fixed: Vec<f64>,
    pub parabolic: Option<ParabolicKind>,
}

/// Classify the restriction by `|tr A|` against `2`, using a band of width `tol`.
pub fn classify(a: &SliceAction, tol: f64) -> SliceClass {
    let tr = a.trace();
    let abs_trace = tr.norm();
    let mut out = SliceClass {
        tag: SliceTag::Elliptic,
        abs_trace,
        rotation_angle: None,
        center: None,
        fixed: Vec::new(),
        parabolic: None,
    };
    if abs_trace < 2.0 - tol {
        let roots = fixed_points(a);
        let z = if roots[0].norm() < roots[1].norm() { roots[0] } else { roots[1] };
        let mu = a.a[0][0] + a.a[0][1] * z;
        out.center = Some(z);
        out.rotation_angle = Some(wrap_pi((mu * mu).inv().arg()));
        return out;
    }
    if abs_trace > 2.0 + tol {
        out.tag = SliceTag::Hyperbolic;
        out.fixed = fixed_points(a).iter().map(|z| angle_0_2pi(z.arg())).collect();
        return out;
    }
    let sign = if tr.re >= 0.0 { ONE } else { -ONE };
    let off = (a.a[0][0] - sign).norm() + (a.a[1][1] - sign).norm() + a.a[0][1].norm() + a.a[1][0].norm();
    if off < tol.sqrt() {
        out.tag = SliceTag::Identity;
        return out;
    }
    out.tag = SliceTag::Parabolic;
    let roots = fixed_points(a);
    let zf = (roots[0] + roots[1]) * 0.5;
    let theta_f = angle_0_2pi(zf.arg());
    out.fixed = vec![theta_f];
    let theta_x = theta_f + PI;
    let zx = C64::from_polar(1.0, theta_x);
    let theta_ix = a.mobius(zx).arg();
    out.parabolic = Some(if moves_clockwise(theta_x, theta_ix, &[theta_f]) {
        ParabolicKind::L
    } else {
        ParabolicKind::R
    });
    out
}

/// Roots of `a01 z^2 + (a00 - a11) z - a10 = 0`, the fixed points of the Möbius map.
fn fixed_points(a: &SliceAction) -> [C64; 2] {
    let qa = a.a[0][1];
    let qb = a.a[0][0] - a.a[1][1];
    let qc = -a.a[1][0];
    let scale = qa.norm() + qb.norm() + qc.norm();
    if qa.norm() <= 1e-14 * scale {
        // One fixed point sits at infinity in the chart.
        let inf = C64::new(f64::INFINITY, 0.0);
        return [-qc / qb, inf];
    }
    let disc = (qb * qb - 4.0 * qa * qc).sqrt();
    let r1 = if (-qb + disc).norm() > (-qb - disc).norm() {
        (-qb + disc) / (2.0 * qa)
    } else {
        (-qb - disc) / (2.0 * qa)
    };
    let r2 = if r1.norm() > 0.0 { qc / (qa * r1) } else { (-qb - disc) / (2.0 * qa) };
    [r1, r2]
}

/// True when the motion `theta_x -> theta_ix` along the boundary is clockwise, given fixed angles.
///
/// A point cannot pass a fixed point, so the motion is clockwise exactly when the
/// clockwise displacement is shorter than the clockwise distance to the nearest fixed point.
pub fn moves_clockwise(theta_x: f64, theta_ix: f64, fixed: &[f64]) -> bool {
    let step = (theta_x - theta_ix).rem_euclid(TAU);
    let reach = fixed.iter().map(|f| (theta_x - f).rem_euclid(TAU)).fold(TAU, f64::min);
    step < reach
}

pub(crate) fn angle_0_2pi(x: f64) -> f64 {
    let a = x.rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

pub fn wrap_pi(x: f64) -> f64 {
    let a = x.rem_euclid(TAU);
    if a > PI {
        a - TAU
    } else {
        a
    }
}

/// Angle `theta` in `[0, 2pi)` with `x ~ n0 + e^{i theta} p0` on the ideal boundary of the slice of `g`.
pub fn boundary_angle(g: &PVec, x: &PVec) -> Result<f64> {
    let (n0, p0) = slice_basis(g)?;
    boundary_angle_with_basis(x, &n0, &p0, g)
}

fn boundary_angle_with_basis(x: &PVec, n0: &PVec, p0: &PVec, g: &PVec) -> Result<f64> {
    let scale = x.coord_norm_sqr();
    let on_slice = form(x, g).norm() <= 1e-8 * x.coord_norm() * g.coord_norm();
    if !on_slice || norm2(x).abs() > 1e-8 * scale {
        return Err(GeomError::NotOnBoundary);
    }
    let z = slice_coordinate(x, n0, p0)?;
    // A relative isotropy error of `e` moves the chart coordinate by about `e (|n0| + |p0|)^2`.
    let chart_tol = 1e-6f64.max(1e-8 * (n0.coord_norm() + p0.coord_norm()).powi(2));
    if (z.norm() - 1.0).abs() > chart_tol {
        return Err(GeomError::NotOnBoundary);
    }
    Ok(angle_0_2pi(z.arg()))
}

/// `0` when `theta1, theta2, theta3` appear in counterclockwise cyclic order, `1` otherwise.
pub fn cyclic_order(theta1: f64, theta2: f64, theta3: f64, sep: f64) -> Result<u8> {
    let d = |a: f64, b: f64| {
        let x = (a - b).rem_euclid(TAU);
        x.min(TAU - x)
    };
    if d(theta1, theta2) < sep || d(theta2, theta3) < sep || d(theta1, theta3) < sep {
        return Err(GeomError::Degenerate("boundary points too close"));
    }
    let a = (theta2 - theta1).rem_euclid(TAU);
    let b = (theta3 - theta1).rem_euclid(TAU);
    Ok(if a < b { 0 } else { 1 })
}

/// `0` when `x` lies in the L-part of `iso` on the slice of `g`, `1` otherwise.
///
/// The L-part is the whole circle for elliptic restrictions, empty for the
/// identity and R-parabolic ones, and the clockwise-moving arc otherwise.
pub fn l_part_indicator(x: &PVec, iso: &Isometry, g: &PVec) -> Result<u8> {
    let a = restrict_to_slice(iso, g)?;
    let class = classify(&a, PARABOLIC_BAND);
    match class.tag {
        SliceTag::Elliptic => return Ok(0),
        SliceTag::Identity => return Ok(1),
        SliceTag::Parabolic if class.parabolic == Some(ParabolicKind::R) => return Ok(1),
        _ => {}
    }
    let theta_x = boundary_angle_with_basis(x, &a.n0, &a.p0, g)?;
    for f in &class.fixed {
        let sep = (theta_x - f).rem_euclid(TAU);
        if sep.min(TAU - sep) < ANGLE_SEPARATION {
            return Err(GeomError::Degenerate("boundary point is fixed"));
        }
    }
    let theta_ix = boundary_angle_with_basis(&iso.apply(x), &a.n0, &a.p0, g)?;
    Ok(if moves_clockwise(theta_x, theta_ix, &class.fixed) { 0 } else { 1 })
}

/// Eigenvalues and eigenvectors of a `3x3` matrix with distinct eigenvalues.
///
/// Roots of the characteristic polynomial come from Cardano's formula followed by
/// two Newton steps; each eigenvector is the cross product of two rows of `M - lambda I`.
pub fn eigensystem3(iso: &Isometry) -> Result<[(C64, PVec); 3]> {
    let m = &iso.m;
    let tr = iso.trace();
    let c2 = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0]
        + m[1][1] * m[2][2]
        - m[1][2] * m[2][1];
    let det = iso.det();
    // lambda^3 + a lambda^2 + b lambda + c
    let (a, b, c) = (-tr, c2, -det);
    let mut roots = cubic_roots(a, b, c);
    for r in roots.iter_mut() {
        for _ in 0..2 {
            let f = ((*r + a) * *r + b) * *r + c;
            let df = (3.0 * *r + 2.0 * a) * *r + b;
            if df.norm() > 0.0 {
                *r -= f / df;
            }
        }
    }
    let scale = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
    for i in 0..3 {
        for j in i + 1..3 {
            if (roots[i] - roots[j]).norm() < 1e-8 * scale {
                return Err(GeomError::Degenerate("near-degenerate spectrum"));
            }
        }
    }
    let mut out = [(ZERO, PVec::zero()); 3];
    for (slot, &lambda) in out.iter_mut().zip(roots.iter()) {
        let rows: Vec<PVec> = (0..3)
            .map(|i| {
                let mut r = m[i];
                r[i] -= lambda;
                PVec(r)
            })
            .collect();
        let mut best = PVec::zero();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let v = rows[i].cross(&rows[j]);
            if v.coord_norm() > best.coord_norm() {
                best = v;
            }
        }
        if best.is_zero() {
            return Err(GeomError::Degenerate("eigenvector extraction failed"));
        }
        *slot = (lambda, best.normalized());
    }
    Ok(out)
}

fn cubic_roots(a: C64, b: C64, c: C64) -> [C64; 3] {
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let u1 = -q / 2.0 + disc;
    let u2 = -q / 2.0 - disc;
    let u = if u1.norm() >= u2.norm() { u1 } else { u2 };
    let shift = -a / 3.0;
    if u.norm() == 0.0 {
        return [shift; 3];
    }
    let cu = u.powf(1.0 / 3.0);
    let omega = C64::from_polar(1.0, TAU / 3.0);
    let mut out = [ZERO; 3];
    let mut w = ONE;
    for o in out.iter_mut() {
        let t = cu * w;
        *o = t - p / (3.0 * t) + shift;
        w *= omega;
    }
    out
}

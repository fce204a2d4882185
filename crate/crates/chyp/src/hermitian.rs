//! The Hermitian space of signature `(-,+,+)` and its point-level primitives.
//!
//! Vectors live in `C^3` with the form `<x,y> = -x1*conj(y1) + x2*conj(y2) + x3*conj(y3)`,
//! linear in the first argument. Swapping that convention conjugates every
//! cross-ratio-like quantity (`eta`, the triangle invariant `eps`, ...), so all formulas
//! here are written for first-argument linearity and the tests pin the resulting signs.
//!
//! A [`PVec`] is a representative of a point of the projective plane. Every
//! projective quantity (tance, eta, angles) is invariant under rescaling any
//! representative by a nonzero complex number.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{GeomError, Result};
use crate::isometry::Isometry;

pub type C64 = Complex64;

/// Default tolerance on the normalized sign of `<p,p>`.
pub const CLASSIFY_TOL: f64 = 1e-12;

/// Coordinate-norm floor below which a vector counts as zero.
pub const ZERO_NORM: f64 = 1e-300;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Signs of the form on the standard basis.
pub const J: [f64; 3] = [-1.0, 1.0, 1.0];

/// A vector of `V = C^3`, used as a representative of a projective point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PVec(pub [C64; 3]);

impl PVec {
    pub const fn new(z1: C64, z2: C64, z3: C64) -> Self {
        PVec([z1, z2, z3])
    }

    /// Vector with real coordinates.
    pub fn real(x1: f64, x2: f64, x3: f64) -> Self {
        PVec([C64::new(x1, 0.0), C64::new(x2, 0.0), C64::new(x3, 0.0)])
    }

    pub fn zero() -> Self {
        PVec([ZERO; 3])
    }

    /// Standard basis vector `e_i` (0-based).
    pub fn basis(i: usize) -> Self {
        let mut v = [ZERO; 3];
        v[i] = ONE;
        PVec(v)
    }

    /// Euclidean norm of the coordinate vector.
    pub fn coord_norm(&self) -> f64 {
        self.coord_norm_sqr().sqrt()
    }

    pub fn coord_norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coord_norm() <= ZERO_NORM
    }

    pub fn scale(&self, c: C64) -> Self {
        PVec([self.0[0] * c, self.0[1] * c, self.0[2] * c])
    }

    pub fn conj(&self) -> Self {
        PVec([self.0[0].conj(), self.0[1].conj(), self.0[2].conj()])
    }

    /// Rescale to unit coordinate norm with the largest-modulus coordinate real positive.
    pub fn normalized(&self) -> Self {
        let k = self.largest_index();
        let z = self.0[k];
        let phase = z.conj() / z.norm();
        self.scale(phase / self.coord_norm())
    }

    fn largest_index(&self) -> usize {
        let mut k = 0;
        for i in 1..3 {
            if self.0[i].norm() > self.0[k].norm() {
                k = i;
            }
        }
        k
    }

    /// True when `self` and `other` span the same complex line, up to `tol`.
    ///
    /// The test is the rank of the `2x3` coordinate matrix: all `2x2` minors
    /// must vanish relative to the product of the coordinate norms.
    pub fn same_point(&self, other: &PVec, tol: f64) -> bool {
        let a = &self.0;
        let b = &other.0;
        let scale = self.coord_norm() * other.coord_norm();
        if scale <= ZERO_NORM {
            return false;
        }
        let minors = [
            a[0] * b[1] - a[1] * b[0],
            a[0] * b[2] - a[2] * b[0],
            a[1] * b[2] - a[2] * b[1],
        ];
        minors.iter().all(|m| m.norm() <= tol * scale)
    }

    /// Complex bilinear cross product (no conjugation): `(a x b) . a = 0`.
    pub fn cross(&self, other: &PVec) -> PVec {
        let a = &self.0;
        let b = &other.0;
        PVec([
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ])
    }

    /// Multiply coordinates by the signs of the form.
    pub fn j(&self) -> PVec {
        PVec([-self.0[0], self.0[1], self.0[2]])
    }
}

impl Add for PVec {
    type Output = PVec;
    fn add(self, o: PVec) -> PVec {
        PVec([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for PVec {
    type Output = PVec;
    fn sub(self, o: PVec) -> PVec {
        PVec([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for PVec {
    type Output = PVec;
    fn neg(self) -> PVec {
        PVec([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl Mul<PVec> for C64 {
    type Output = PVec;
    fn mul(self, v: PVec) -> PVec {
        v.scale(self)
    }
}

impl Mul<PVec> for f64 {
    type Output = PVec;
    fn mul(self, v: PVec) -> PVec {
        v.scale(C64::new(self, 0.0))
    }
}

/// The Hermitian form `<x,y>`.
#[inline]
pub fn form(x: &PVec, y: &PVec) -> C64 {
    -x.0[0] * y.0[0].conj() + x.0[1] * y.0[1].conj() + x.0[2] * y.0[2].conj()
}

/// The real number `<p,p>`.
#[inline]
pub fn norm2(p: &PVec) -> f64 {
    -p.0[0].norm_sqr() + p.0[1].norm_sqr() + p.0[2].norm_sqr()
}

/// `<p,p>` divided by the squared coordinate norm; lies in `[-1, 1]`.
pub fn normalized_norm2(p: &PVec) -> f64 {
    norm2(p) / p.coord_norm_sqr()
}

fn is_isotropic(p: &PVec) -> bool {
    normalized_norm2(p).abs() <= CLASSIFY_TOL
}

/// Which part of the projective plane a point lies in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointTag {
    Negative,
    Isotropic,
    Positive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointClass {
    pub tag: PointTag,
    /// `<p,p>` normalized by the squared coordinate norm.
    pub margin: f64,
}

/// Classify `p` as negative (inside the ball), isotropic, or positive.
pub fn classify(p: &PVec, tol: f64) -> PointClass {
    let margin = normalized_norm2(p);
    let tag = if margin < -tol {
        PointTag::Negative
    } else if margin > tol {
        PointTag::Positive
    } else {
        PointTag::Isotropic
    };
    PointClass { tag, margin }
}

/// The tance `<p,q><q,p> / (<p,p><q,q>)`.
///
/// When one argument is isotropic the value is `+inf` unless the two points
/// are orthogonal, in which case it is `1`.
pub fn tance(p: &PVec, q: &PVec) -> f64 {
    let pq = form(p, q);
    if is_isotropic(p) || is_isotropic(q) {
        if pq.norm() <= CLASSIFY_TOL * p.coord_norm() * q.coord_norm() {
            return 1.0;
        }
        return f64::INFINITY;
    }
    pq.norm_sqr() / (norm2(p) * norm2(q))
}

/// Orthogonal projection of `v` onto `p^perp`: `v - (<v,p>/<p,p>) p`.
///
/// The result is the zero vector when `v` is a multiple of `p`; callers that
/// need a point check [`PVec::is_zero`].
pub fn proj_perp(p: &PVec, v: &PVec) -> Result<PVec> {
    Ok(*v - proj_par(p, v)?)
}

/// Orthogonal projection of `v` onto the line `C p`.
pub fn proj_par(p: &PVec, v: &PVec) -> Result<PVec> {
    if is_isotropic(p) {
        return Err(GeomError::Isotropic);
    }
    Ok(p.scale(form(v, p) / norm2(p)))
}

/// The reflection `x -> 2 (<x,p>/<p,p>) p - x` in the complex geodesic (or point) polar to `p`.
pub fn reflection(p: &PVec) -> Result<Isometry> {
    if is_isotropic(p) {
        return Err(GeomError::Isotropic);
    }
    let pp = norm2(p);
    let mut m = [[ZERO; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = p.0[i] * p.0[j].conj() * (2.0 * J[j] / pp);
            if i == j {
                *entry -= ONE;
            }
        }
    }
    Ok(Isometry::from_matrix(m))
}

/// The invariant `<v1,p><p,v2> / (<v1,v2><p,p>)` of a point relative to a pair of isotropic vertices.
pub fn eta(v1: &PVec, v2: &PVec, p: &PVec) -> Result<C64> {
    if is_isotropic(p) {
        return Err(GeomError::Isotropic);
    }
    let v12 = form(v1, v2);
    if v12.norm() <= CLASSIFY_TOL * v1.coord_norm() * v2.coord_norm() {
        return Err(GeomError::Degenerate("orthogonal isotropic vertices"));
    }
    Ok(form(v1, p) * form(p, v2) / (v12 * norm2(p)))
}

fn require(p: &PVec, tag: PointTag, what: &'static str) -> Result<()> {
    if classify(p, CLASSIFY_TOL).tag == tag {
        Ok(())
    } else {
        Err(GeomError::Signature(what))
    }
}

/// Distance between two points of the ball, `acosh(sqrt(ta(p,q)))`.
///
/// The metric is four times the one with holomorphic curvature `-1` scaled
/// so that `cosh^2(dist) = ta`.
pub fn dist(p: &PVec, q: &PVec) -> Result<f64> {
    require(p, PointTag::Negative, "dist needs negative points")?;
    require(q, PointTag::Negative, "dist needs negative points")?;
    Ok(tance(p, q).max(1.0).sqrt().acosh())
}

/// Tance from a negative point `q` to the complex geodesic polar to the positive point `p`.
pub fn tance_to_slice(q: &PVec, p: &PVec) -> Result<f64> {
    require(p, PointTag::Positive, "slice polar must be positive")?;
    require(q, PointTag::Negative, "point must be negative")?;
    Ok(1.0 - tance(p, q))
}

/// Tance from a negative point `p` to the bisector with isotropic vertices `v1`, `v2`.
pub fn tance_to_bisector(p: &PVec, v1: &PVec, v2: &PVec) -> Result<f64> {
    require(p, PointTag::Negative, "point must be negative")?;
    if !is_isotropic(v1) || !is_isotropic(v2) {
        return Err(GeomError::Signature("bisector vertices must be isotropic"));
    }
    let e = eta(v1, v2, p)?;
    Ok(1.0 - e.re + e.norm())
}

/// Rescale a nonisotropic vector to `|<p,p>| = 1`.
pub fn unit(p: &PVec) -> Result<PVec> {
    let pp = norm2(p);
    if is_isotropic(p) {
        return Err(GeomError::Isotropic);
    }
    Ok(p.scale(C64::new(1.0 / pp.abs().sqrt(), 0.0)))
}

/// Rescale `q` by a unit complex number so that `<p,q>` is real positive.
pub fn align_phase(p: &PVec, q: &PVec) -> PVec {
    let c = form(p, q);
    if c.norm() == 0.0 {
        return *q;
    }
    q.scale(c / c.norm())
}

/// Polar point of the middle slice of the bisector segment between the
/// complex geodesics polar to `p1` and `p2`.
///
/// Representatives are normalized to the Gram matrix `[[1,t],[t,1]]`, `t > 1`,
/// and the result `(p1 + p2) / sqrt(2t + 2)` satisfies `<m,m> = 1`.
pub fn midpoint_polar(p1: &PVec, p2: &PVec) -> Result<PVec> {
    require(p1, PointTag::Positive, "midpoint needs positive points")?;
    require(p2, PointTag::Positive, "midpoint needs positive points")?;
    let ta = tance(p1, p2);
    if ta <= 1.0 {
        return Err(GeomError::NotUltraparallel(ta));
    }
    let a = unit(p1)?;
    let b = align_phase(&a, &unit(p2)?);
    let t = form(&a, &b).re;
    Ok((a + b).scale(C64::new(1.0 / (2.0 * t + 2.0).sqrt(), 0.0)))
}

/// Deterministic orthonormal basis `(n0, p0)` of `g^perp` for a positive `g`,
/// with `<n0,n0> = -1` and `<p0,p0> = 1`.
///
/// `n0` is the projection of `e1`, which is always negative in `g^perp`;
/// `p0` comes from whichever of `e2`, `e3` keeps the larger residual after
/// removing the `g` and `n0` components. Each output has its largest-modulus
/// coordinate real positive. Points of the closed disc are `n0 + z p0`, `|z| <= 1`.
pub fn slice_basis(g: &PVec) -> Result<(PVec, PVec)> {
    require(g, PointTag::Positive, "slice polar must be positive")?;
    let n = proj_perp(g, &PVec::basis(0))?;
    let n0 = fix_phase(&n.scale(C64::new(1.0 / (-norm2(&n)).sqrt(), 0.0)));
    let mut best = PVec::zero();
    for i in 1..3 {
        let e = PVec::basis(i);
        let r = proj_perp(g, &e)?;
        let r = r + n0.scale(form(&r, &n0));
        if r.coord_norm() > best.coord_norm() {
            best = r;
        }
    }
    let p0 = fix_phase(&best.scale(C64::new(1.0 / norm2(&best).sqrt(), 0.0)));
    Ok((n0, p0))
}

fn fix_phase(v: &PVec) -> PVec {
    let k = v.largest_index();
    let z = v.0[k];
    v.scale(z.conj() / z.norm())
}

/// Gram matrix `g_ij = <p_i, p_j>` of an ordered triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gram3(pub [[C64; 3]; 3]);

impl Gram3 {
    pub fn of(p: &[PVec; 3]) -> Self {
        let mut g = [[ZERO; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                g[i][j] = form(&p[i], &p[j]);
            }
        }
        Gram3(g)
    }

    pub fn det(&self) -> C64 {
        let g = &self.0;
        g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
            - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
            + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0])
    }
}

/// A tangent vector `v_p = <-,p> v` at a nonisotropic point `p`, with `v` in `p^perp`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentRep {
    pub base: PVec,
    pub dir: PVec,
}

impl TangentRep {
    /// Tangent vector `<-,p> pi[p] v`; the component of `v` along `p` is dropped.
    pub fn new(base: PVec, v: PVec) -> Result<Self> {
        Ok(TangentRep { base, dir: proj_perp(&base, &v)? })
    }

    /// Velocity of a curve with lift `c0` and lift derivative `dc0` at the same parameter.
    pub fn from_curve(c0: PVec, dc0: PVec) -> Result<Self> {
        let d = proj_perp(&c0, &dc0)?;
        let nn = norm2(&c0);
        Ok(TangentRep { base: c0, dir: d.scale(C64::new(1.0 / nn, 0.0)) })
    }

    /// The Hermitian metric `<v_p,w_p> = -<p,p><v,w>` (both at the same base).
    pub fn inner(&self, other: &TangentRep) -> C64 {
        form(&self.dir, &other.dir) * (-norm2(&self.base))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn form_on_basis_vectors() {
        let e1 = PVec::basis(0);
        assert_eq!(form(&e1, &e1), c(-1.0, 0.0));
        assert_eq!(form(&PVec::basis(1), &PVec::basis(2)), ZERO);
        let x = PVec::real(1.0, 1.0, 0.0);
        let y = PVec::real(1.0, -1.0, 0.0);
        assert_eq!(form(&x, &y), c(-2.0, 0.0));
    }

    #[test]
    fn form_is_linear_in_first_argument() {
        let x = PVec::new(c(1.0, 2.0), c(0.5, -1.0), c(0.0, 3.0));
        let y = PVec::new(c(-1.0, 0.5), c(2.0, 0.0), c(1.0, 1.0));
        let a = c(0.3, -0.7);
        assert!((form(&x.scale(a), &y) - a * form(&x, &y)).norm() < 1e-14);
        assert!((form(&x, &y.scale(a)) - a.conj() * form(&x, &y)).norm() < 1e-14);
        assert!((form(&x, &y).conj() - form(&y, &x)).norm() < 1e-14);
    }

    #[test]
    fn tance_examples() {
        let e1 = PVec::basis(0);
        assert!(close(tance(&e1, &e1), 1.0, 1e-15));
        assert!(close(tance(&e1, &PVec::basis(1)), 0.0, 1e-15));
        // <p,q> = -2, <p,p> = -1, <q,q> = -3
        assert!(close(tance(&e1, &PVec::real(2.0, 1.0, 0.0)), 4.0 / 3.0, 1e-14));
    }

    #[test]
    fn tance_isotropic_conventions() {
        let v = PVec::real(1.0, 1.0, 0.0);
        assert_eq!(tance(&v, &PVec::basis(0)), f64::INFINITY);
        assert_eq!(tance(&v, &PVec::basis(2)), 1.0);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&PVec::basis(0), 1e-12).tag, PointTag::Negative);
        assert_eq!(classify(&PVec::real(1.0, 1.0, 0.0), 1e-12).tag, PointTag::Isotropic);
        let p = PVec::real(1.0, 2.0, 2.0);
        assert_eq!(norm2(&p), 7.0);
        assert_eq!(classify(&p, 1e-12).tag, PointTag::Positive);
    }

    #[test]
    fn projections() {
        let p = PVec::basis(0);
        let v = proj_perp(&p, &PVec::real(1.0, 1.0, 0.0)).unwrap();
        assert_eq!(v, PVec::real(0.0, 1.0, 0.0));
        let z = proj_perp(&PVec::basis(1), &PVec::basis(1)).unwrap();
        assert!(z.is_zero());
        let w = proj_perp(&PVec::basis(2), &PVec::real(1.0, 2.0, 3.0)).unwrap();
        assert_eq!(w, PVec::real(1.0, 2.0, 0.0));
        assert!(proj_perp(&PVec::real(1.0, 1.0, 0.0), &p).is_err());
    }

    #[test]
    fn reflection_examples() {
        let r = reflection(&PVec::basis(1)).unwrap();
        let expected = [[-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((r.m[i][j] - c(expected[i][j], 0.0)).norm() < 1e-15);
            }
        }
        let p = PVec::real(0.0, 1.0, 1.0);
        let rp = reflection(&p).unwrap();
        assert!(rp.apply(&PVec::basis(1)).same_point(&PVec::basis(2), 1e-14));
        assert!(rp.apply(&p).same_point(&p, 1e-14));
        assert!(reflection(&PVec::real(1.0, 0.0, 1.0)).is_err());
    }

    #[test]
    fn eta_examples() {
        let v1 = PVec::real(1.0, 1.0, 0.0);
        let v2 = PVec::real(1.0, -1.0, 0.0);
        let p = PVec::basis(0);
        assert!((eta(&v1, &v2, &p).unwrap() - c(0.5, 0.0)).norm() < 1e-15);
        let e = eta(&v1, &v2, &p.scale(c(0.0, 2.0))).unwrap();
        assert!((e - c(0.5, 0.0)).norm() < 1e-15);
        assert!(eta(&v1, &v1, &p).is_err());
    }

    #[test]
    fn eta_is_real_on_the_real_span_of_the_vertices() {
        // <v1,v2> = -2 here; rescale to 1/2 by hand: v1' = v1, v2' = -v2/4.
        let v1 = PVec::real(1.0, 1.0, 0.0);
        let v2 = PVec::real(-0.25, 0.25, 0.0);
        assert!((form(&v1, &v2) - c(0.5, 0.0)).norm() < 1e-15);
        for t in [0.3, 1.0, 2.5] {
            let p = v1.scale(c(1.0 / t, 0.0)) - v2.scale(c(t, 0.0));
            assert!(eta(&v1, &v2, &p).unwrap().im.abs() < 1e-14);
        }
    }

    #[test]
    fn dist_examples() {
        let p = PVec::basis(0);
        let q = PVec::real(2.0, 1.0, 0.0);
        assert!(close(dist(&p, &p).unwrap(), 0.0, 1e-12));
        assert!(close(dist(&p, &q).unwrap(), 0.549_306_144_334_054_8, 1e-12));
        assert!(close(dist(&q, &p).unwrap(), dist(&p, &q).unwrap(), 1e-15));
        assert!(dist(&p, &PVec::basis(1)).is_err());
    }

    #[test]
    fn tance_to_slice_examples() {
        let q = PVec::real(2.0, 1.0, 0.0);
        assert!(close(tance_to_slice(&q, &PVec::basis(2)).unwrap(), 1.0, 1e-15));
        let t = tance_to_slice(&PVec::basis(0), &PVec::real(0.0, 1.0, 2.0)).unwrap();
        // ta(p,q) = 0 here since <p,q> = 0
        assert!(close(t, 1.0, 1e-15));
        let p = PVec::real(1.0, 1.0, 2.0);
        // <p,p> = 4, <q,q> = -1, <p,q> = -1, ta = 1/(-4)
        let t = tance_to_slice(&PVec::basis(0), &p).unwrap();
        assert!(close(t, 1.25, 1e-15));
    }

    #[test]
    fn tance_to_bisector_on_negative_real_eta() {
        let v1 = PVec::real(1.0, 1.0, 0.0);
        let v2 = PVec::real(1.0, -1.0, 0.0);
        // p = (1,0,0) gives eta = 1/2 > 0 and sits on the spine: tance 1.
        let t = tance_to_bisector(&PVec::basis(0), &v1, &v2).unwrap();
        assert!(close(t, 1.0, 1e-14));
    }

    #[test]
    fn midpoint_polar_swaps_the_ends() {
        let s = 2f64.sqrt();
        let p1 = PVec::real(0.0, s, 1.0);
        let p2 = PVec::real(0.0, s, -1.0);
        // <p1,p2> = 1, <pi,pi> = 3: tance 1/9, so these are not ultraparallel.
        assert!(midpoint_polar(&p1, &p2).is_err());
        let p1 = PVec::real(1.0, s, 0.5);
        let p2 = PVec::real(-1.0, s, 0.5);
        let m = midpoint_polar(&p1, &p2).unwrap();
        assert!(close(norm2(&m), 1.0, 1e-13));
        assert!(m.same_point(&PVec::real(0.0, 2.0 * s, 1.0), 1e-12));
        let r = reflection(&m).unwrap();
        assert!(r.apply(&p1).same_point(&p2, 1e-12));
        let m2 = midpoint_polar(&p2, &p1).unwrap();
        assert!(m.same_point(&m2, 1e-12));
    }

    #[test]
    fn slice_basis_examples() {
        let (n0, p0) = slice_basis(&PVec::basis(2)).unwrap();
        assert_eq!(n0, PVec::basis(0));
        assert_eq!(p0, PVec::basis(1));
        assert!(norm2(&(n0 + p0)).abs() < 1e-15);
        let g = PVec::new(c(0.3, 0.1), c(1.0, -0.5), c(0.2, 0.9));
        let (n0, p0) = slice_basis(&g).unwrap();
        assert!(close(norm2(&n0), -1.0, 1e-12));
        assert!(close(norm2(&p0), 1.0, 1e-12));
        assert!(form(&n0, &p0).norm() < 1e-12);
        assert!(form(&n0, &g).norm() < 1e-12);
        assert!(form(&p0, &g).norm() < 1e-12);
        assert!(slice_basis(&PVec::basis(0)).is_err());
    }

    #[test]
    fn gram_det_of_orthonormal_basis() {
        let g = Gram3::of(&[PVec::basis(0), PVec::basis(1), PVec::basis(2)]);
        assert!((g.det() - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn tangent_metric_example() {
        let base = PVec::basis(0);
        let v = TangentRep::new(base, PVec::basis(1)).unwrap();
        let w = TangentRep::new(base, PVec::new(ZERO, I, ZERO)).unwrap();
        assert!((v.inner(&w) - c(0.0, -1.0)).norm() < 1e-15);
    }
}

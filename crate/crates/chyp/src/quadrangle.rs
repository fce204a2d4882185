//! The disc-bundle family `M(n,l,k,p)`: a regular elliptic `W`, a reflection `R` in the
//! complex geodesic polar to `m`, and `U = W R`, all written in the eigenbasis `q1, q2, q3` of `W`.
//!
//! The eight quadrangle conditions make the triangles `(C, M1, M2)` and `(S2, M2, M1)`
//! counterclockwise, transversal and transversally adjacent, where `C`, `M1`, `M2`, `S2` are
//! the complex geodesics polar to `q2`, `m`, `W m`, `h2`.

use std::f64::consts::PI;

use num_rational::Ratio;

use crate::bisector::cotranchal_slack;
use crate::error::{GeomError, Result};
use crate::hermitian::{form, norm2, normalized_norm2, reflection, slice_basis, tance, PVec, C64, ONE};
use crate::isometry::{
    boundary_angle, classify, cyclic_order, l_part_indicator, restrict_to_slice, wrap_pi, Isometry, SliceTag, ANGLE_SEPARATION,
};
use crate::triangle::{holonomy, holonomy_inverse, invariants, TriangleInv, TrianglePolars};

/// Default strict margin of the sweep.
pub const DEFAULT_MARGIN: f64 = 1e-9;
/// Slack allowed below zero for the non-strict conditions.
pub const NONSTRICT_SLACK: f64 = -1e-12;
/// Slacks below this magnitude flag a tuple as marginal.
pub const MARGINAL_BAND: f64 = 1e-6;
/// Default boundary angle of the generic point on the ideal boundary of `C`.
pub const DEFAULT_Z_SEED: f64 = 0.7337;
/// Tolerance for the identities checked on accepted tuples.
pub const IDENTITY_TOL: f64 = 1e-7;

const RADICAND_CLAMP: f64 = -1e-12;
const RADICAND_FAIL: f64 = -1e-8;
const SEED_RETRIES: usize = 32;
const SEEDS_REQUIRED: usize = 3;

/// Parameters `(n, l, k, p)` of the construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Params {
    pub n: i64,
    pub l: i64,
    pub k: i64,
    pub p: i64,
}

impl Params {
    pub fn new(n: i64, l: i64, k: i64, p: i64) -> Self {
        Params { n, l, k, p }
    }

    /// `0 <= k <= l <= n - 3`, `p` in `{1, 2}`, `n >= 3`.
    pub fn is_admissible(&self) -> bool {
        self.n >= 3 && 0 <= self.k && self.k <= self.l && self.l <= self.n - 3 && (self.p == 1 || self.p == 2)
    }

    /// All admissible tuples for a given `n`, in lexicographic `(l, k, p)` order.
    pub fn enumerate(n: i64) -> impl Iterator<Item = Params> {
        (0..=(n - 3).max(-1)).flat_map(move |l| (0..=l).flat_map(move |k| (1..=2).map(move |p| Params::new(n, l, k, p))))
    }

    /// Degree of the cover from the orbifold group to the surface group: 2 for even `n`, 4 for odd.
    pub fn cover_degree(&self) -> i64 {
        if self.n % 2 == 0 {
            2
        } else {
            4
        }
    }

    fn angle(&self, num: i64) -> C64 {
        C64::from_polar(1.0, num as f64 * PI / (3 * self.n) as f64)
    }

    /// `u1, u2, u3`; the eigenvalues of `U` are their squares.
    pub fn u(&self) -> [C64; 3] {
        let (n, k, p) = (self.n, self.k, self.p);
        [self.angle(2 * n * p - k), self.angle(2 * n * p - k - 3), self.angle(2 * n * p + 2 * k + 3)]
    }

    /// `w1, w2, w3`; the eigenvalues of `W` are their squares.
    pub fn w(&self) -> [C64; 3] {
        let l = self.l;
        [self.angle(l), self.angle(l + 3), self.angle(-(2 * l + 3))]
    }
}

/// `v = (u1^2 + u2^2 + u3^2 + w1^2 + w2^2 + w3^2) / 2`.
fn v_of(u: &[C64; 3], w: &[C64; 3]) -> C64 {
    (u.iter().chain(w.iter()).map(|x| x * x).sum::<C64>()) * 0.5
}

/// Slacks of the two inequalities bounding `v`: `Re w2^3 - Re(v w2)` (strict) and
/// `Re(w1^2 w3) - Re(v w3)` (non-strict).
pub fn v_slacks(params: &Params) -> (f64, f64) {
    let (u, w) = (params.u(), params.w());
    let v = v_of(&u, &w);
    ((w[1] * w[1] * w[1]).re - (v * w[1]).re, (w[0] * w[0] * w[2]).re - (v * w[2]).re)
}

/// `min |ui^2 + wj^2|` over all pairs.
pub fn eigen_separation(params: &Params) -> f64 {
    let (u, w) = (params.u(), params.w());
    let mut best = f64::INFINITY;
    for ui in &u {
        for wj in &w {
            best = best.min((ui * ui + wj * wj).norm());
        }
    }
    best
}

/// All derived objects of the construction for one parameter tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadrangleData {
    pub params: Params,
    pub u: [C64; 3],
    pub w: [C64; 3],
    pub v: C64,
    /// Coordinates `(m1, m2, m3)` of `m`, nonnegative with `-m1^2 + m2^2 + m3^2 = 1`.
    pub mc: [f64; 3],
    pub m: PVec,
    pub h1: PVec,
    pub h2: PVec,
    pub iso_w: Isometry,
    pub iso_r: Isometry,
    pub iso_u: Isometry,
    /// The fixed point `q = q1` of `W`, the centre of `C`.
    pub q: PVec,
    /// Polar point of `C`.
    pub q2: PVec,
    /// Polar point of `M2`.
    pub wm: PVec,
}

impl QuadrangleData {
    /// Triangle `(C, M1, M2)`.
    pub fn triangle_c(&self) -> TrianglePolars {
        TrianglePolars { g: [self.q2, self.m, self.wm] }
    }

    /// Triangle `(S2, M2, M1)`.
    pub fn triangle_s(&self) -> TrianglePolars {
        TrianglePolars { g: [self.h2, self.wm, self.m] }
    }

    /// `delta = exp(2 (k + l + n p) pi i / 3)`.
    pub fn delta(&self) -> C64 {
        let Params { n, l, k, p } = self.params;
        C64::from_polar(1.0, 2.0 * PI * ((k + l + n * p).rem_euclid(3)) as f64 / 3.0)
    }

    /// Reflection `R_i = W^{i-1} R W^{1-i}` in the middle slice of the `i`-th bisector of the cycle.
    pub fn cycle_reflection(&self, i: i64) -> Isometry {
        let wp = self.iso_w.pow(i - 1);
        wp * self.iso_r * wp.inverse()
    }

    /// `U_i = W^{i-2} U W^{2-i}`, the rotation about `s_i`.
    pub fn cycle_rotation(&self, i: i64) -> Isometry {
        let wp = self.iso_w.pow(i - 2);
        wp * self.iso_u * wp.inverse()
    }
}

/// Eigenvector of `U` for `u_i^2`: coordinates `m_j / (u_i^2 w_j^{-2} + 1)`.
fn eigenvector(mc: &[f64; 3], ui: C64, w: &[C64; 3]) -> PVec {
    let c = |j: usize| C64::new(mc[j], 0.0) / (ui * ui / (w[j] * w[j]) + ONE);
    PVec::new(c(0), c(1), c(2))
}

/// Builds `m`, `W`, `R`, `U`, `h1`, `h2` for an admissible tuple.
pub fn build(params: Params) -> Result<QuadrangleData> {
    if !params.is_admissible() {
        return Err(GeomError::Degenerate("parameters are not admissible"));
    }
    let (u, w) = (params.u(), params.w());
    let v = v_of(&u, &w);
    let radicand = |wj: C64| ((w[0] * w[0] - v) * wj).re / ((w[0] * w[0] - wj * wj) * wj).re;
    let (r2, r3) = (radicand(w[1]), radicand(w[2]));
    if r2 < RADICAND_FAIL || r3 < RADICAND_FAIL {
        return Err(GeomError::Degenerate("negative radicand for m"));
    }
    let clamp = |r: f64| if r < RADICAND_CLAMP { r } else { r.max(0.0) };
    let (m2, m3) = (clamp(r2).max(0.0).sqrt(), clamp(r3).max(0.0).sqrt());
    let r1 = m2 * m2 + m3 * m3 - 1.0;
    if r1 <= 0.0 {
        return Err(GeomError::Degenerate("m is not positive"));
    }
    if eigen_separation(&params) < 1e-12 {
        return Err(GeomError::Degenerate("an eigenvalue of U is opposite to one of W"));
    }
    let mc = [r1.sqrt(), m2, m3];
    let m = PVec::real(mc[0], mc[1], mc[2]);
    let iso_w = Isometry::diag([w[0] * w[0], w[1] * w[1], w[2] * w[2]]);
    let iso_r = reflection(&m)?;
    let iso_u = iso_w * iso_r;
    Ok(QuadrangleData {
        params,
        u,
        w,
        v,
        mc,
        m,
        h1: eigenvector(&mc, u[0], &w),
        h2: eigenvector(&mc, u[1], &w),
        iso_w,
        iso_r,
        iso_u,
        q: PVec::basis(0),
        q2: PVec::basis(1),
        wm: iso_w.apply(&m),
    })
}

/// The quadrangle conditions, in order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cond {
    /// Parameter ranges.
    Q1,
    /// Inequalities bounding `v`.
    Q2,
    /// `ui^2 + wj^2 != 0`.
    Q3,
    /// `h1` negative; `M1, M2` and `M1, S2` ultraparallel.
    Q4,
    /// `(C, M1, M2)` transversal and counterclockwise.
    Q5,
    /// `(S2, M2, M1)` transversal and counterclockwise.
    Q6,
    /// Transversality of the bisectors through `C` and `S2` along `M1`.
    Q7,
    /// `h1` in the interior sector at `C`.
    Q8,
}

impl Cond {
    pub const ALL: [Cond; 8] = [Cond::Q1, Cond::Q2, Cond::Q3, Cond::Q4, Cond::Q5, Cond::Q6, Cond::Q7, Cond::Q8];

    pub fn name(&self) -> &'static str {
        ["Q1", "Q2", "Q3", "Q4", "Q5", "Q6", "Q7", "Q8"][*self as usize]
    }
}

/// Outcome of one condition: pass flag and signed slack (`NaN` when it could not be evaluated).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CondResult {
    pub cond: Cond,
    pub passed: bool,
    pub slack: f64,
}

/// Per-condition results for one tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub params: Params,
    pub results: [CondResult; 8],
    pub accepted: bool,
    pub marginal: bool,
    /// Rejected, but every failing condition was evaluated and has `|slack| < band`.
    pub near_miss: bool,
}

impl ConditionReport {
    /// First failing condition, if any.
    pub fn first_failure(&self) -> Option<Cond> {
        self.results.iter().find(|r| !r.passed).map(|r| r.cond)
    }

    pub fn result(&self, c: Cond) -> &CondResult {
        &self.results[c as usize]
    }

    /// All conditions other than `c` pass.
    pub fn passes_all_but(&self, c: Cond) -> bool {
        self.results.iter().all(|r| r.cond == c || r.passed)
    }
}

/// A strict group of slacks passes when every one exceeds `margin`; non-strict ones need `NONSTRICT_SLACK`.
struct Slacks {
    strict: Vec<f64>,
    nonstrict: Vec<f64>,
}

impl Slacks {
    fn result(&self, cond: Cond, margin: f64) -> CondResult {
        let ok = self.strict.iter().all(|&s| s > margin) && self.nonstrict.iter().all(|&s| s > NONSTRICT_SLACK);
        let slack = self.strict.iter().chain(self.nonstrict.iter()).fold(f64::INFINITY, |a, &b| a.min(b));
        CondResult { cond, passed: ok && slack.is_finite(), slack }
    }

    fn min_abs(&self) -> f64 {
        self.strict.iter().chain(self.nonstrict.iter()).fold(f64::INFINITY, |a, &b| a.min(b.abs()))
    }
}

/// Normalized slack of a triangle: smaller of the transversality slack and `-eps1`.
fn triangle_slack(inv: &TriangleInv) -> f64 {
    inv.transversality_slack().min(-inv.eps1())
}

/// `Im(<g1,x><x,g2>/<g1,g2>) / (-<x,x>)` for a negative `x`.
fn sector_slack(g1: &PVec, g2: &PVec, x: &PVec) -> f64 {
    (form(g1, x) * form(x, g2) / form(g1, g2)).im / (-norm2(x))
}

/// Slacks of the eight conditions. Q1 is reported in integer units and never counts as marginal.
fn condition_slacks(params: &Params, data: Option<&QuadrangleData>) -> Vec<Option<Slacks>> {
    let Params { n, l, k, p } = *params;
    let q1 = Slacks { strict: vec![], nonstrict: vec![k.min(l - k).min(n - 3 - l) as f64, if p == 1 || p == 2 { 0.0 } else { -1.0 }] };
    let (s2a, s2b) = v_slacks(params);
    let mut out = vec![Some(q1), Some(Slacks { strict: vec![s2a], nonstrict: vec![s2b] }), Some(Slacks { strict: vec![eigen_separation(params)], nonstrict: vec![] })];
    let Some(d) = data else {
        out.extend((0..5).map(|_| None));
        return out;
    };
    let one_minus_inv = |ta: f64| 1.0 - 1.0 / ta;
    out.push(Some(Slacks {
        strict: vec![-normalized_norm2(&d.h1), one_minus_inv(tance(&d.m, &d.wm)), one_minus_inv(tance(&d.m, &d.h2))],
        nonstrict: vec![],
    }));
    out.push(Some(Slacks { strict: vec![triangle_slack(&invariants(&d.triangle_c()))], nonstrict: vec![] }));
    out.push(Some(Slacks { strict: vec![triangle_slack(&invariants(&d.triangle_s()))], nonstrict: vec![] }));
    out.push(cotranchal_slack(&d.m, &d.h2, &d.q2).ok().map(|s| Slacks { strict: vec![s], nonstrict: vec![] }));
    out.push(Some(Slacks { strict: vec![], nonstrict: vec![sector_slack(&d.q2, &d.m, &d.h1), sector_slack(&d.wm, &d.q2, &d.h1)] }));
    out
}

fn report_from(params: Params, slacks: Vec<Option<Slacks>>, margin: f64, band: f64) -> ConditionReport {
    let mut marginal = false;
    let results: Vec<CondResult> = slacks
        .iter()
        .zip(Cond::ALL)
        .map(|(s, cond)| match s {
            Some(s) => {
                let r = s.result(cond, margin);
                if cond != Cond::Q1 && s.min_abs() < band {
                    marginal = true;
                }
                r
            }
            None => CondResult { cond, passed: false, slack: f64::NAN },
        })
        .collect();
    let results: [CondResult; 8] = results.try_into().expect("eight conditions");
    let accepted = results.iter().all(|r| r.passed);
    let near_miss = !accepted
        && results
            .iter()
            .filter(|r| !r.passed)
            .all(|r| r.cond != Cond::Q1 && r.slack.is_finite() && r.slack.abs() < band);
    ConditionReport { params, results, accepted, marginal: accepted && marginal, near_miss }
}

/// Evaluates the eight conditions on built data with strict margin `margin`.
pub fn check_conditions(data: &QuadrangleData, margin: f64) -> ConditionReport {
    check_conditions_with_band(data, margin, MARGINAL_BAND)
}

pub fn check_conditions_with_band(data: &QuadrangleData, margin: f64, band: f64) -> ConditionReport {
    report_from(data.params, condition_slacks(&data.params, Some(data)), margin, band)
}

/// Builds and checks a tuple; conditions that cannot be evaluated after a failed build are reported failed.
pub fn evaluate(params: Params, margin: f64, band: f64) -> (ConditionReport, Option<QuadrangleData>) {
    if !params.is_admissible() {
        return (report_from(params, condition_slacks(&params, None), margin, band), None);
    }
    match build(params) {
        Ok(d) => (check_conditions_with_band(&d, margin, band), Some(d)),
        Err(_) => (report_from(params, condition_slacks(&params, None), margin, band), None),
    }
}

/// The terms of `f = lambda(y, phi) + lambda(z, phi') + o(y, Uy, phi^{-1} y) - o(z, Wz, phi' z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FTerms {
    pub lambda_y: u8,
    pub lambda_z: u8,
    pub o_y: u8,
    pub o_z: u8,
}

impl FTerms {
    pub fn f(&self) -> i64 {
        self.lambda_y as i64 + self.lambda_z as i64 + self.o_y as i64 - self.o_z as i64
    }
}

/// The terms of `f` for the generic point of `C` at boundary angle `theta`.
pub fn f_terms(data: &QuadrangleData, theta: f64) -> Result<FTerms> {
    let (n0, p0) = slice_basis(&data.q2)?;
    let z = n0 + p0.scale(C64::from_polar(1.0, theta));
    let p1 = crate::bisector::slice_transport(&z, &data.q2, &data.m)?;
    let y = crate::bisector::slice_transport(&p1, &data.m, &data.h2)?;
    let phi = holonomy(&data.triangle_s());
    let phi_c = holonomy(&data.triangle_c());
    let lambda_y = l_part_indicator(&y, &phi, &data.h2)?;
    let lambda_z = l_part_indicator(&z, &phi_c, &data.q2)?;
    let ang_s = |x: &PVec| boundary_angle(&data.h2, x);
    let ang_c = |x: &PVec| boundary_angle(&data.q2, x);
    let o_y = cyclic_order(ang_s(&y)?, ang_s(&data.iso_u.apply(&y))?, ang_s(&holonomy_inverse(&data.triangle_s()).apply(&y))?, ANGLE_SEPARATION)?;
    let o_z = cyclic_order(ang_c(&z)?, ang_c(&data.iso_w.apply(&z))?, ang_c(&phi_c.apply(&z))?, ANGLE_SEPARATION)?;
    Ok(FTerms { lambda_y, lambda_z, o_y, o_z })
}

/// Golden-ratio angle used to advance the seed after a degenerate attempt.
pub const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;

/// The integer `f`, required to agree for three generic seeds starting at `z_seed`.
pub fn compute_f(data: &QuadrangleData, z_seed: f64) -> Result<i64> {
    compute_f_terms(data, z_seed).map(|t| t.f())
}

/// Like `compute_f`, returning the terms from the first generic seed.
pub fn compute_f_terms(data: &QuadrangleData, z_seed: f64) -> Result<FTerms> {
    let mut found: Vec<FTerms> = Vec::new();
    for attempt in 0..(SEEDS_REQUIRED + SEED_RETRIES) {
        let theta = (z_seed + attempt as f64 * GOLDEN_ANGLE).rem_euclid(2.0 * PI);
        match f_terms(data, theta) {
            Ok(t) => {
                found.push(t);
                if found.len() == SEEDS_REQUIRED {
                    let f0 = found[0].f();
                    if found.iter().any(|t| t.f() != f0) {
                        return Err(GeomError::Property(format!("f depends on the seed: {:?}", found)));
                    }
                    return Ok(found[0]);
                }
            }
            Err(GeomError::Degenerate(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(GeomError::Degenerate("no generic boundary point found"))
}

/// Terms of `f` at the first of `samples` equally spaced boundary angles of `C` with `o(z,Wz,phi' z) = 0`.
///
/// The individual terms move with `z` (both cyclic orders can flip together) while `f` does
/// not; `None` means no sampled generic point has `o(z,Wz,phi' z) = 0`.
pub fn terms_with_trivial_c_order(data: &QuadrangleData, samples: usize) -> Result<Option<FTerms>> {
    for j in 0..samples {
        let theta = (DEFAULT_Z_SEED + 2.0 * PI * j as f64 / samples as f64).rem_euclid(2.0 * PI);
        match f_terms(data, theta) {
            Ok(t) if t.o_z == 0 => return Ok(Some(t)),
            Ok(_) | Err(GeomError::Degenerate(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// `t` in `[0, 3n)` with `t = 2np - k - l mod 3n`, and `3 tau = deg (2t - 3n)` for the bundle.
pub fn toledo(params: &Params) -> (i64, i64) {
    let Params { n, l, k, p } = *params;
    let t = (2 * n * p - k - l).rem_euclid(3 * n);
    (t, params.cover_degree() * (2 * t - 3 * n))
}

/// Euler data of the polyhedron and the bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EulerData {
    pub e_p: i64,
    pub e: i64,
    pub genus: i64,
    pub chi: i64,
    /// Rational Euler number `f - (k + l + 2)/n` of the orbifold bundle.
    pub orb_e: Ratio<i64>,
}

pub fn euler(params: &Params, f: i64) -> EulerData {
    let Params { n, l, k, .. } = *params;
    let e_p = n * f - k - l - 2;
    let genus = if n % 2 == 0 { n / 2 - 1 } else { n - 3 };
    EulerData { e_p, e: params.cover_degree() * e_p, genus, chi: 2 - 2 * genus, orb_e: Ratio::new(e_p, n) }
}

/// Orbifold Toledo invariant `2t/(3n) - 1`.
pub fn orbifold_toledo(params: &Params) -> Ratio<i64> {
    let (t, _) = toledo(params);
    Ratio::new(2 * t - 3 * params.n, 3 * params.n)
}

/// An accepted tuple together with its invariants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExampleRecord {
    pub params: Params,
    pub f: i64,
    pub t: i64,
    /// `3 tau`, exact.
    pub tau3: i64,
    pub e_p: i64,
    pub genus: i64,
    pub chi: i64,
    pub e: i64,
    pub orb_e: Ratio<i64>,
    pub orb_tau: Ratio<i64>,
    pub marginal: bool,
}

impl ExampleRecord {
    pub fn new(params: Params, f: i64, marginal: bool) -> Self {
        let (t, tau3) = toledo(&params);
        let eu = euler(&params, f);
        ExampleRecord {
            params,
            f,
            t,
            tau3,
            e_p: eu.e_p,
            genus: eu.genus,
            chi: eu.chi,
            e: eu.e,
            orb_e: eu.orb_e,
            orb_tau: orbifold_toledo(&params),
            marginal,
        }
    }

    /// `tau` as a reduced fraction.
    pub fn tau(&self) -> Ratio<i64> {
        Ratio::new(self.tau3, 3)
    }

    /// The empirical laws: `2(chi + e) = 3 tau`, `tau < 0`, `chi/2 < e < 0`, `p + f = 2`, and the
    /// congruence `2(chi + e) = 3 tau` modulo `8n` (odd `n`) or `4n` (even `n`).
    pub fn check_laws(&self) -> std::result::Result<(), String> {
        let n = self.params.n;
        let lhs = 2 * (self.chi + self.e);
        let modulus = if n % 2 == 0 { 4 * n } else { 8 * n };
        let mut bad = Vec::new();
        if (lhs - self.tau3).rem_euclid(modulus) != 0 {
            bad.push("congruence");
        }
        if lhs != self.tau3 {
            bad.push("2(chi+e) = 3 tau");
        }
        if self.tau3 >= 0 {
            bad.push("tau < 0");
        }
        if !(self.chi < 2 * self.e && self.e < 0) {
            bad.push("chi/2 < e < 0");
        }
        if self.params.p + self.f != 2 {
            bad.push("p + f = 2");
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(format!("{:?}: {}", self.params, bad.join(", ")))
        }
    }
}

/// Residuals of the identities that accepted tuples satisfy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityReport {
    /// Angle from the bisector `(C, M1)` to `(C, M2)` at `q`, minus `2 pi / n`.
    pub angle_c: f64,
    /// Angle from the bisector `(S2, M2)` to `(S2, M1)` at `s2 = h1`, minus `2 pi / n`.
    pub angle_s: f64,
    /// Rotation angle of `W^{-1}` on `C` minus `2(l+1)pi/n`, modulo `2 pi`.
    pub rotation_w: f64,
    /// Rotation angle of `U` on `S2` minus `2(k+1)pi/n`, modulo `2 pi`.
    pub rotation_u: f64,
    /// `max_i |R_i U_i - U_{i+1} R_i|`.
    pub conjugation: f64,
    /// `|W^n U^{-n} - delta|`, in double-double arithmetic.
    pub delta: f64,
    /// `|R_n ... R_1 - delta|`, in double-double arithmetic.
    pub cycle: f64,
    /// `|U h1 - u1^2 h1|` relative.
    pub eigen: f64,
    /// `|tr U - (u1^2 + u2^2 + u3^2)|`.
    pub trace: f64,
}

impl IdentityReport {
    pub fn max_residual(&self) -> f64 {
        [self.angle_c, self.angle_s, self.rotation_w, self.rotation_u, self.conjugation, self.delta, self.cycle, self.eigen, self.trace]
            .iter()
            .fold(0.0f64, |a, &b| a.max(b.abs()))
    }
}

fn angle_gap(a: f64, b: f64) -> f64 {
    wrap_pi(a - b).abs()
}

/// Computes the identity residuals; fails with a property violation when one exceeds `IDENTITY_TOL`.
pub fn verify_identities(data: &QuadrangleData) -> Result<IdentityReport> {
    let Params { n, l, k, .. } = data.params;
    let nf = n as f64;
    let step = 2.0 * PI / nf;
    let angle_c = angle_gap(crate::bisector::cotranchal_angle(&data.q2, &data.m, &data.wm, &data.q)?, step);
    let angle_s = angle_gap(crate::bisector::cotranchal_angle(&data.h2, &data.wm, &data.m, &data.h1)?, step);
    let rot = |iso: &Isometry, g: &PVec| -> Result<f64> {
        let class = classify(&restrict_to_slice(iso, g)?, 1e-9);
        match (class.tag, class.rotation_angle) {
            (SliceTag::Elliptic, Some(a)) => Ok(a),
            _ => Err(GeomError::Property("expected an elliptic rotation".into())),
        }
    };
    let rotation_w = angle_gap(rot(&data.iso_w.inverse(), &data.q2)?, 2.0 * (l + 1) as f64 * PI / nf);
    let rotation_u = angle_gap(rot(&data.iso_u, &data.h2)?, 2.0 * (k + 1) as f64 * PI / nf);
    let mut conjugation = 0.0f64;
    for i in 1..=n {
        let lhs = data.cycle_reflection(i) * data.cycle_rotation(i);
        let rhs = data.cycle_rotation(i + 1) * data.cycle_reflection(i);
        conjugation = conjugation.max(lhs.max_diff(&rhs));
    }
    let (delta, cycle) =
        crate::highprec::cycle_residuals(&data.params).ok_or(GeomError::Degenerate("m is not defined for the tuple"))?;
    let u1sq = data.u[0] * data.u[0];
    let eigen = (data.iso_u.apply(&data.h1) - data.h1.scale(u1sq)).coord_norm() / data.h1.coord_norm();
    let trace = (data.iso_u.trace() - data.u.iter().map(|x| x * x).sum::<C64>()).norm();
    let report = IdentityReport {
        angle_c,
        angle_s,
        rotation_w,
        rotation_u,
        conjugation,
        delta,
        cycle,
        eigen,
        trace,
    };
    if report.max_residual() > IDENTITY_TOL {
        return Err(GeomError::Property(format!("identity residual too large: {:?}", report)));
    }
    Ok(report)
}

//! Samplers and numerical oracles shared by the property suites and the acceptance run.

#![allow(dead_code)]

use chyp::hermitian::{align_phase, form, norm2, reflection, PVec, TangentRep, C64};
use chyp::triangle::{from_invariants, TriangleInv, TrianglePolars};
use chyp::Isometry;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn random_complex<R: Rng>(rng: &mut R, scale: f64) -> C64 {
    c(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

pub fn random_unit<R: Rng>(rng: &mut R) -> C64 {
    C64::from_polar(1.0, rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
}

/// Nonzero complex scale with modulus in `[0.2, 5]`.
pub fn random_scale<R: Rng>(rng: &mut R) -> C64 {
    C64::from_polar(rng.gen_range(0.2..5.0), rng.gen_range(-3.0..3.0))
}

/// A negative point whose affine coordinates lie in the disc of radius `radius < 1`.
pub fn random_negative<R: Rng>(rng: &mut R, radius: f64) -> PVec {
    loop {
        let z1 = random_complex(rng, radius);
        let z2 = random_complex(rng, radius);
        if z1.norm_sqr() + z2.norm_sqr() < radius * radius {
            return PVec::new(c(1.0, 0.0), z1, z2).scale(random_scale(rng));
        }
    }
}

/// A positive point with `<p,p>` bounded away from zero.
pub fn random_positive<R: Rng>(rng: &mut R) -> PVec {
    loop {
        let p = PVec::new(random_complex(rng, 1.0), random_complex(rng, 2.0), random_complex(rng, 2.0));
        if norm2(&p) > 0.2 * p.coord_norm_sqr() {
            return p;
        }
    }
}

/// Polars of three pairwise ultraparallel complex geodesics, each near a random boundary point.
pub fn random_ultraparallel_triple<R: Rng>(rng: &mut R) -> [PVec; 3] {
    let small = |rng: &mut R| {
        let phi: f64 = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
        let rho: f64 = rng.gen_range(1.02..1.8);
        PVec::new(c(1.0, 0.0), random_unit(rng) * (rho * phi.cos()), random_unit(rng) * (rho * phi.sin()))
            .scale(random_scale(rng))
    };
    loop {
        let g = [small(rng), small(rng), small(rng)];
        if [(0, 1), (1, 2), (2, 0)].iter().all(|&(i, j)| chyp::hermitian::tance(&g[i], &g[j]) > 1.0 + 1e-6) {
            return g;
        }
    }
}

/// A random isometry as a product of reflections in random positive points.
///
/// Matrices with an entry above `4` are redrawn; larger ones cost digits in every form.
pub fn random_isometry<R: Rng>(rng: &mut R) -> Isometry {
    loop {
        let mut iso = Isometry::diag([random_unit(rng), random_unit(rng), random_unit(rng)]);
        for _ in 0..3 {
            iso = reflection(&random_positive(rng)).unwrap() * iso;
        }
        if iso.m.iter().flatten().all(|z| z.norm() <= 4.0) {
            return iso;
        }
    }
}

/// Invariants of a counterclockwise transversal triangle with sides in `(1, tmax)`, by rejection.
pub fn random_ccw_transversal<R: Rng>(rng: &mut R, tmax: f64, delta: f64) -> TriangleInv {
    loop {
        let inv = TriangleInv {
            t12: rng.gen_range(1.0..tmax),
            t23: rng.gen_range(1.0..tmax),
            t31: rng.gen_range(1.0..tmax),
            eps: C64::from_polar(1.0, rng.gen_range(-std::f64::consts::PI..0.0)),
        };
        if inv.t12.min(inv.t23).min(inv.t31) > 1.0 + 1e-6 && inv.d() <= 0.0 && inv.is_transversal(delta) && inv.is_ccw(delta) {
            return inv;
        }
    }
}

/// Invariants of any triangle (`d <= 0`) with sides in `(1, tmax)`.
pub fn random_triangle_inv<R: Rng>(rng: &mut R, tmax: f64) -> TriangleInv {
    loop {
        let inv = TriangleInv {
            t12: rng.gen_range(1.0..tmax),
            t23: rng.gen_range(1.0..tmax),
            t31: rng.gen_range(1.0..tmax),
            eps: random_unit(rng),
        };
        if inv.t12.min(inv.t23).min(inv.t31) > 1.0 + 1e-6 && inv.d() < -1e-9 {
            return inv;
        }
    }
}

/// A realization of `inv` moved by a random isometry, with random representatives.
pub fn scrambled_triangle<R: Rng>(rng: &mut R, inv: &TriangleInv) -> TrianglePolars {
    let base = from_invariants(inv).unwrap();
    let iso = random_isometry(rng);
    let g = base.g.map(|p| iso.apply(&p).scale(random_scale(rng)));
    TrianglePolars::new(g[0], g[1], g[2]).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// `<x,y>` relative to the coordinate sizes.
pub fn relative_form(x: &PVec, y: &PVec) -> f64 {
    form(x, y).norm() / (x.coord_norm() * y.coord_norm())
}

/// A quadratic patch `x(s,t)` around a random point of the ball, small enough to stay inside.
pub fn random_patch<R: Rng>(r: &mut R) -> impl Fn(f64, f64) -> PVec {
    let base = random_negative(r, 0.6);
    let base = base.scale(C64::new(1.0, 0.0) / base.0[0]);
    let a = [random_complex(r, 0.1), random_complex(r, 0.1)];
    let b = [random_complex(r, 0.1), random_complex(r, 0.1)];
    let q = [random_complex(r, 0.05), random_complex(r, 0.05)];
    let lift = random_scale(r);
    move |s: f64, t: f64| {
        let z1 = base.0[1] + a[0] * s + b[0] * t + q[0] * s * t;
        let z2 = base.0[2] + a[1] * s + b[1] * t + q[1] * (s * s - t * t);
        PVec::new(C64::new(1.0, 0.0), z1, z2).scale(lift * C64::from_polar(1.0, 0.3 * s - 0.2 * t))
    }
}

/// Arclength of the geodesic `e^{-t} v1 + e^{t} v2` between `p` and `q`, by composite Simpson.
///
/// With `<p,p> = <q,q> = -1` and `<p,q> = cosh D`, the vertices on the real span of `p` and
/// `q` are `p + x q` with `x^2 - 2 cosh(D) x + 1 = 0`. Taking `v1 = p + x_- q` and
/// `v2 = -(p + x_+ q)`, the curve passes through `q` at `t = 0` and `p` at `t = log(x_-/x_+)/2`.
pub fn simpson_arclength(p: &PVec, q: &PVec, intervals: usize) -> f64 {
    let p = p.scale(c(1.0 / (-norm2(p)).sqrt(), 0.0));
    let q = align_phase(&p, &q.scale(c(1.0 / (-norm2(q)).sqrt(), 0.0)));
    let ch = form(&p, &q).re;
    let root = (ch * ch - 1.0).sqrt();
    let (xm, xp) = (ch - root, ch + root);
    let v1 = p + q.scale(c(xm, 0.0));
    let v2 = -(p + q.scale(c(xp, 0.0)));
    let curve = |t: f64| v1.scale(c((-t).exp(), 0.0)) + v2.scale(c(t.exp(), 0.0));
    let velocity = |t: f64| v2.scale(c(t.exp(), 0.0)) - v1.scale(c((-t).exp(), 0.0));
    let speed = |t: f64| {
        let v = TangentRep::from_curve(curve(t), velocity(t)).unwrap();
        v.inner(&v).re.max(0.0).sqrt()
    };
    let at_p = 0.5 * (xm / xp).ln();
    let (a, b) = (at_p.min(0.0), at_p.max(0.0));
    let h = (b - a) / intervals as f64;
    let mut sum = speed(a) + speed(b);
    for j in 1..intervals {
        let w = if j % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * speed(a + h * j as f64);
    }
    sum * h / 3.0
}

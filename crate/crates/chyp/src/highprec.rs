//! Double-double evaluation of the long matrix products of the cycle.
//!
//! Products of `n` reflections lose roughly `n |R| max|partial|^2` ulps in `f64`, which reaches
//! `1e-7` around `n = 60`. Here every eigenvalue is a power of `zeta = exp(i pi / 3n)`, obtained
//! by Newton refinement on `z^{6n} = 1`, so inputs and products carry about 32 significant digits.

use num_complex::Complex;
use twofloat::TwoFloat;

use crate::quadrangle::Params;

type Dc = Complex<TwoFloat>;
type Mat = [[Dc; 3]; 3];

fn real(x: f64) -> TwoFloat {
    TwoFloat::from(x)
}

fn dc(re: TwoFloat, im: TwoFloat) -> Dc {
    Complex::new(re, im)
}

fn zero() -> Dc {
    dc(real(0.0), real(0.0))
}

fn one() -> Dc {
    dc(real(1.0), real(0.0))
}

/// `a / b` with a residual correction; the crate's own division is only accurate to `f64`.
fn div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let mut q = TwoFloat::from(a.hi() / b.hi());
    for _ in 0..2 {
        let r = a - q * b;
        q += TwoFloat::from(r.hi() / b.hi());
    }
    q
}

fn cdiv(a: Dc, b: Dc) -> Dc {
    let den = b.re * b.re + b.im * b.im;
    let num = a * b.conj();
    dc(div(num.re, den), div(num.im, den))
}

fn pow_u(z: Dc, mut e: u64) -> Dc {
    let (mut acc, mut base) = (one(), z);
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base = base * base;
        e >>= 1;
    }
    acc
}

/// `exp(2 pi i / order)` to double-double accuracy.
fn root_of_unity(order: i64) -> Dc {
    let z0 = num_complex::Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / order as f64);
    let mut z = dc(real(z0.re), real(z0.im));
    let nn = dc(real(order as f64), real(0.0));
    for _ in 0..2 {
        let zm1 = pow_u(z, order as u64 - 1);
        z = z - cdiv(zm1 * z - one(), nn * zm1);
    }
    z
}

/// `zeta^e` for a unit `zeta`, any integer `e`.
fn pow_i(z: Dc, e: i64, order: i64) -> Dc {
    pow_u(z, e.rem_euclid(order) as u64)
}

fn mul(a: &Mat, b: &Mat) -> Mat {
    let mut c = [[zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
        }
    }
    c
}

fn diag(d: [Dc; 3]) -> Mat {
    let mut m = [[zero(); 3]; 3];
    for i in 0..3 {
        m[i][i] = d[i];
    }
    m
}

fn distance_to_scalar(a: &Mat, s: Dc) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            let target = if i == j { s } else { zero() };
            let d = a[i][j] - target;
            let norm = (d.re * d.re + d.im * d.im).sqrt();
            worst = worst.max(f64::from(norm));
        }
    }
    worst
}

/// Residuals `|W^n U^{-n} - delta|` and `|R_n ... R_1 - delta|` in double-double arithmetic.
///
/// Returns `None` when the construction of `m` is not defined for the tuple.
pub fn cycle_residuals(params: &Params) -> Option<(f64, f64)> {
    let Params { n, l, k, p } = *params;
    let order = 6 * n;
    let zeta = root_of_unity(order);
    let z = |e: i64| pow_i(zeta, e, order);
    let u = [z(2 * n * p - k), z(2 * n * p - k - 3), z(2 * n * p + 2 * k + 3)];
    let w = [z(l), z(l + 3), z(-(2 * l + 3))];
    let sq = |x: Dc| x * x;
    let half = real(0.5);
    let sum = u.iter().chain(w.iter()).fold(zero(), |a, &x| a + sq(x));
    let v = dc(sum.re * half, sum.im * half);
    let w1sq = sq(w[0]);
    let radicand = |wj: Dc| div(((w1sq - v) * wj).re, ((w1sq - sq(wj)) * wj).re);
    let clamp = |r: TwoFloat| if r < real(0.0) { real(0.0) } else { r };
    let (r2, r3) = (radicand(w[1]), radicand(w[2]));
    if r2 < real(-1e-8) || r3 < real(-1e-8) {
        return None;
    }
    let (m2sq, m3sq) = (clamp(r2), clamp(r3));
    let m1sq = m2sq + m3sq - real(1.0);
    if m1sq <= real(0.0) {
        return None;
    }
    let mc = [m1sq.sqrt(), m2sq.sqrt(), m3sq.sqrt()];
    let j = [-1.0, 1.0, 1.0];
    let mut r = [[zero(); 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            let mut e = mc[a] * mc[b] * real(2.0 * j[b]);
            if a == b {
                e -= real(1.0);
            }
            r[a][b] = dc(e, real(0.0));
        }
    }
    let delta = z(2 * n * (k + l + n * p));
    let w_sq = [sq(w[0]), sq(w[1]), sq(w[2])];
    let w_inv = diag([w_sq[0].conj(), w_sq[1].conj(), w_sq[2].conj()]);
    let u_inv = mul(&r, &w_inv);
    let mut acc = diag([one(); 3]);
    for _ in 0..n {
        acc = mul(&acc, &u_inv);
    }
    let w_n = diag([pow_u(w_sq[0], n as u64), pow_u(w_sq[1], n as u64), pow_u(w_sq[2], n as u64)]);
    let wu = mul(&w_n, &acc);
    let mut cycle = diag([one(); 3]);
    let mut wp = [one(); 3];
    for _ in 0..n {
        let mut ri = r;
        for a in 0..3 {
            for b in 0..3 {
                ri[a][b] = r[a][b] * wp[a] * wp[b].conj();
            }
        }
        cycle = mul(&ri, &cycle);
        for a in 0..3 {
            wp[a] *= w_sq[a];
        }
    }
    Some((distance_to_scalar(&wu, delta), distance_to_scalar(&cycle, delta)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_is_double_double() {
        let x = div(real(1.0), real(3.0));
        assert!(f64::from((x * real(3.0) - real(1.0)).abs()) < 1e-31);
    }

    #[test]
    fn roots_of_unity_are_refined() {
        let z = root_of_unity(606);
        let e = pow_u(z, 606) - one();
        assert!(f64::from((e.re * e.re + e.im * e.im).sqrt()) < 1e-28);
    }

    #[test]
    fn residuals_are_tiny_for_long_cycles() {
        for params in [Params::new(10, 6, 3, 1), Params::new(63, 5, 4, 2), Params::new(101, 9, 9, 2)] {
            let (a, b) = cycle_residuals(&params).unwrap();
            assert!(a < 1e-12 && b < 1e-12, "{params:?}: {a} {b}");
        }
    }
}

//! Independent oracles for the integration tests: trial division, brute-force
//! matrix enumeration, a Minkowski-space model of H^3 and naive divisor
//! counts in imaginary quadratic rings. Nothing here calls the library's
//! counting code.
#![allow(dead_code)]

use std::collections::HashSet;

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Number of divisors by trial division.
pub fn d(n: u64) -> u64 {
    let mut c = 0;
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            c += if i * i == n { 1 } else { 2 };
        }
        i += 1;
    }
    c
}

/// (x, y) with a x + b y = gcd(a, b).
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        return (a, 1, 0);
    }
    let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
    (g, y, x - a.div_euclid(b) * y)
}

/// Every (a, b, c, d) in SL2(Z) with all |entries| <= e.
pub fn sl2z_matrices(e: i64) -> Vec<[i64; 4]> {
    let mut out = Vec::new();
    for c in -e..=e {
        for dd in -e..=e {
            if gcd(c, dd) != 1 {
                continue;
            }
            if c == 0 {
                for b in -e..=e {
                    out.push([dd, b, 0, dd]);
                }
                continue;
            }
            // a dd - b c = 1: particular solution, then (a, b) + k (c, dd).
            let (g, x, y) = ext_gcd(dd, -c);
            let (a0, b0) = (x * g, y * g);
            for k in -4 * e - 4..=4 * e + 4 {
                let (a, b) = (a0 + k * c, b0 + k * dd);
                if a.abs() <= e && b.abs() <= e {
                    debug_assert_eq!(a * dd - b * c, 1);
                    out.push([a, b, c, dd]);
                }
            }
        }
    }
    out
}

/// A point of Q u {oo} as a reduced fraction with positive denominator;
/// oo is (1, 0).
pub type Frac = (i64, i64);

pub fn frac(p: i64, q: i64) -> Frac {
    if q == 0 {
        return (1, 0);
    }
    let g = gcd(p, q) * q.signum();
    (p / g, q / g)
}

/// Image of the rational x under the Mobius map of m.
pub fn mobius(m: &[i64; 4], x: Frac) -> Frac {
    frac(m[0] * x.0 + m[1] * x.1, m[2] * x.0 + m[3] * x.1)
}

/// Unordered endpoint pairs of all images of the geodesic ]x, y[ by the
/// matrices with entries bounded by e.
pub fn geodesic_orbit(x: Frac, y: Frac, e: i64) -> HashSet<(Frac, Frac)> {
    sl2z_matrices(e)
        .iter()
        .map(|m| {
            let (p, q) = (mobius(m, x), mobius(m, y));
            if p <= q { (p, q) } else { (q, p) }
        })
        .collect()
}

/// cosh of the distance from ]0, oo[ to ]x, y[ when 0 < x < y, as an exact
/// fraction (num, den), else None.
pub fn cosh_to_vertical(x: Frac, y: Frac) -> Option<(i128, i128)> {
    if x.1 == 0 || y.1 == 0 || x.0 <= 0 || y.0 <= 0 {
        return None;
    }
    let (xa, xb, ya, yb) = (x.0 as i128, x.1 as i128, y.0 as i128, y.1 as i128);
    // (y + x)/(y - x) with y > x.
    let num = ya * xb + xa * yb;
    let den = (ya * xb - xa * yb).abs();
    Some((num, den))
}

/// z -> z/(2 - z), sending ]0, 2[ to ]0, oo[.
pub fn to_delta1_frame(x: Frac) -> Frac {
    if x.1 == 0 {
        return (-1, 1);
    }
    frac(x.0, 2 * x.1 - x.0)
}

/// Number of translates of ]0, oo[ on the positive side with cosh <= c.
pub fn naive_dd_count(e: i64, c: (i128, i128)) -> usize {
    naive_count(((0, 1), (1, 0)), e, c, |p| p)
}

/// Same for translates of ]0, 2[ seen from ]0, oo[.
pub fn naive_dd1_count(e: i64, c: (i128, i128)) -> usize {
    naive_count(((0, 1), (2, 1)), e, c, |p| p)
}

/// Same for translates of ]0, 2[ seen from ]0, 2[.
pub fn naive_d1d1_count(e: i64, c: (i128, i128)) -> usize {
    naive_count(((0, 1), (2, 1)), e, c, to_delta1_frame)
}

fn naive_count(base: (Frac, Frac), e: i64, c: (i128, i128), frame: impl Fn(Frac) -> Frac) -> usize {
    geodesic_orbit(base.0, base.1, e)
        .into_iter()
        .filter_map(|(x, y)| {
            let (x, y) = (frame(x), frame(y));
            let (x, y) = if ratio_lt(x, y) { (x, y) } else { (y, x) };
            cosh_to_vertical(x, y)
        })
        .filter(|&(n, d)| n * c.1 <= c.0 * d)
        .count()
}

fn ratio_lt(x: Frac, y: Frac) -> bool {
    if y.1 == 0 {
        return true;
    }
    if x.1 == 0 {
        return false;
    }
    (x.0 as i128) * (y.1 as i128) < (y.0 as i128) * (x.1 as i128)
}

/// Orbit points gamma.i = (m + i)/n as (m, n), over matrices with entries
/// bounded by e.
pub fn i_orbit(e: i64) -> HashSet<(i64, i64)> {
    sl2z_matrices(e)
        .iter()
        .map(|&[a, b, c, d]| (a * c + b * d, c * c + d * d))
        .collect()
}

/// Orbit points with positive real part and cosh-distance to ]0, oo[ at
/// most sqrt(c2), i.e. m^2 + 1 <= c2.
pub fn naive_di_count(e: i64, c2: f64) -> usize {
    i_orbit(e).into_iter().filter(|&(m, _)| m > 0 && ((m * m + 1) as f64) <= c2).count()
}

/// Orbit points strictly outside the circle over ]0, 2[ with cosh-distance
/// to it at most sqrt(c2): cosh^2 = (m^2 + 1)((2n - m)^2 + 1) / (4 n^2).
pub fn naive_d1i_count(e: i64, c2: f64) -> usize {
    i_orbit(e)
        .into_iter()
        .filter(|&(m, n)| {
            let (m, n) = (m as f64, n as f64);
            m * m + 1.0 > 2.0 * m * n && (m * m + 1.0) * ((2.0 * n - m).powi(2) + 1.0) <= 4.0 * n * n * c2
        })
        .count()
}

/// Reflections tau = (x y; z -x), x^2 + y z = -1, with tau g tau^{-1} = +-g^{-1},
/// found by scanning x and z up to `bound`.
pub fn brute_conjugating_involutions(g: [i64; 4], bound: i64) -> Vec<[i64; 4]> {
    let inv = [g[3], -g[1], -g[2], g[0]];
    let mul = |p: [i64; 4], q: [i64; 4]| {
        [p[0] * q[0] + p[1] * q[2], p[0] * q[1] + p[1] * q[3], p[2] * q[0] + p[3] * q[2], p[2] * q[1] + p[3] * q[3]]
    };
    let mut out = Vec::new();
    for x in -bound..=bound {
        for z in -bound..=bound {
            if z == 0 || (-1 - x * x) % z != 0 {
                continue;
            }
            let y = (-1 - x * x) / z;
            let tau = [x, y, z, -x];
            // tau^{-1} = -tau in SL2.
            let c = mul(mul(tau, g), [-x, -y, -z, x]);
            if c == inv || c == inv.map(|v| -v) {
                out.push(tau);
            }
        }
    }
    out
}

/// Minkowski form -x0 y0 + x1 y1 + x2 y2 + x3 y3.
pub fn mink(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

/// Hyperboloid image of the upper half-space point (x + iy, t).
fn hyperboloid_point(x: f64, y: f64, t: f64) -> [f64; 4] {
    let r2 = x * x + y * y + t * t;
    [(r2 + 1.0) / (2.0 * t), (r2 - 1.0) / (2.0 * t), x / t, y / t]
}

/// A point on the oriented geodesic from s to e (None is oo) and the unit
/// tangent there pointing toward e.
fn geodesic_frame(s: Option<(f64, f64)>, e: Option<(f64, f64)>) -> ([f64; 4], [f64; 4]) {
    match (s, e) {
        (Some((x, y)), Some((u, v))) => {
            // Top of the semicircle; the tangent there is horizontal.
            let (cx, cy) = ((x + u) / 2.0, (y + v) / 2.0);
            let len = (u - x).hypot(v - y);
            let (dx, dy) = ((u - x) / len, (v - y) / len);
            let h = cx * dx + cy * dy;
            (hyperboloid_point(cx, cy, len / 2.0), [h, h, dx, dy])
        }
        (Some((x, y)), None) | (None, Some((x, y))) => {
            let r2 = x * x + y * y;
            let up = [-r2 / 2.0, (2.0 - r2) / 2.0, -x, -y];
            let sign = if e.is_none() { 1.0 } else { -1.0 };
            (hyperboloid_point(x, y, 1.0), up.map(|c| sign * c))
        }
        (None, None) => panic!("degenerate geodesic"),
    }
}

/// Length and transport angle of the common perpendicular between the
/// oriented geodesics from s1 to e1 and from s2 to e2. Each geodesic is
/// cosh(s) m + sinh(s) w on the hyperboloid, and the perpendicular joins the
/// minimisers of -<g1(s1), g2(s2)>, found in closed form.
pub fn hyperboloid_complex_length(
    s1: Option<(f64, f64)>,
    e1: Option<(f64, f64)>,
    s2: Option<(f64, f64)>,
    e2: Option<(f64, f64)>,
) -> (f64, f64) {
    let (m1, w1) = geodesic_frame(s1, e1);
    let (m2, w2) = geodesic_frame(s2, e2);
    let (a, b, c, d) = (-mink(&m1, &m2), -mink(&m1, &w2), -mink(&w1, &m2), -mink(&w1, &w2));
    // For fixed t1 the inner minimum is sqrt(P^2 - Q^2), a quadratic form in
    // (cosh t1, sinh t1) minimised at tanh 2 t1 = -2 beta / (alpha + gamma).
    let (alpha, beta, gamma) = (a * a - b * b, a * c - b * d, c * c - d * d);
    let t1 = 0.5 * (-2.0 * beta / (alpha + gamma)).atanh();
    let (p, q) = (a * t1.cosh() + c * t1.sinh(), b * t1.cosh() + d * t1.sinh());
    let t2 = (-q / p).atanh();
    let along = |t: f64, m: &[f64; 4], w: &[f64; 4]| -> ([f64; 4], [f64; 4]) {
        let (ch, sh) = (t.cosh(), t.sinh());
        (std::array::from_fn(|i| ch * m[i] + sh * w[i]), std::array::from_fn(|i| sh * m[i] + ch * w[i]))
    };
    let (x1, v1) = along(t1, &m1, &w1);
    let (x2, v2) = along(t2, &m2, &w2);
    let cosh_l = -mink(&x1, &x2);
    (cosh_l.max(1.0).acosh(), mink(&v1, &v2).clamp(-1.0, 1.0).acos())
}

/// Element x + y omega of O_K with omega = (D + sqrt D)/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Qi {
    pub x: i64,
    pub y: i64,
}

pub fn qnorm(d: i64, a: Qi) -> i64 {
    a.x * a.x + d * a.x * a.y + (d * d - d) / 4 * a.y * a.y
}

pub fn qmul(d: i64, a: Qi, b: Qi) -> Qi {
    let nc = (d * d - d) / 4;
    Qi { x: a.x * b.x - nc * a.y * b.y, y: a.x * b.y + a.y * b.x + d * a.y * b.y }
}

/// conj(x + y omega) = (x + y D) - y omega.
pub fn qconj(d: i64, a: Qi) -> Qi {
    Qi { x: a.x + d * a.y, y: -a.y }
}

pub fn qdivides(d: i64, a: Qi, k: Qi) -> bool {
    let n = qnorm(d, a);
    let p = qmul(d, k, qconj(d, a));
    p.x % n == 0 && p.y % n == 0
}

/// Nonzero elements of norm at most r2, by scanning a box that contains
/// the ellipse x^2 + D x y + c y^2 <= r2.
pub fn elements_up_to(d: i64, r2: i64) -> Vec<Qi> {
    let ymax = ((4.0 * r2 as f64 / (-d) as f64).sqrt()).ceil() as i64 + 1;
    let mut out = Vec::new();
    for y in -ymax..=ymax {
        let xc = -(d * y) as f64 / 2.0;
        let xr = (r2 as f64).sqrt() + 1.0;
        for x in (xc - xr).floor() as i64..=(xc + xr).ceil() as i64 {
            let a = Qi { x, y };
            let n = qnorm(d, a);
            if n > 0 && n <= r2 {
                out.push(a);
            }
        }
    }
    out
}

/// Sum of tau(k) tau(k - 1) over k != 0, 1 with N(k) <= n^2, where tau
/// counts all element divisors (units included), by trial division.
pub fn naive_bianchi_raw_sum(d: i64, n: i64) -> u128 {
    let ks = elements_up_to(d, n * n);
    let cands = elements_up_to(d, (n + 1) * (n + 1));
    let tau = |k: Qi| cands.iter().filter(|&&a| qnorm(d, a) <= qnorm(d, k) && qdivides(d, a, k)).count() as u128;
    ks.iter()
        .filter(|k| !(k.x == 1 && k.y == 0))
        .map(|&k| {
            let km1 = Qi { x: k.x - 1, y: k.y };
            tau(k) * tau(km1)
        })
        .sum()
}

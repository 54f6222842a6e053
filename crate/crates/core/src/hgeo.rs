//! Real hyperbolic plane and space in the upper half-space model: distances,
//! common perpendiculars of geodesics, complex lengths, and the horospherical
//! estimates used by the counting asymptotics.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::arcosh;
use crate::ring::{Discriminant, Mat2, ProjPoint, Quaternion};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointH2 {
    pub x: f64,
    pub y: f64,
}

impl PointH2 {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::Precondition(format!("({x}, {y}) is not in the upper half-plane")));
        }
        Ok(PointH2 { x, y })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointH3 {
    pub z: Complex64,
    pub t: f64,
}

impl PointH3 {
    pub fn new(z: Complex64, t: f64) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() || !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::Precondition(format!("height {t} is not positive")));
        }
        Ok(PointH3 { z, t })
    }

    fn quat(&self) -> Quaternion {
        Quaternion::new(self.z.re, self.z.im, self.t, 0.0)
    }
}

pub fn dist_h2(p: PointH2, q: PointH2) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    arcosh(1.0 + (dx * dx + dy * dy) / (2.0 * p.y * q.y))
}

pub fn dist_h3(p: PointH3, q: PointH3) -> f64 {
    let dt = p.t - q.t;
    arcosh(1.0 + ((p.z - q.z).norm_sqr() + dt * dt) / (2.0 * p.t * q.t))
}

/// Distance from p to the geodesic ]0, oo[.
pub fn dist_point_to_vertical_axis_h2(p: PointH2) -> f64 {
    arcosh(p.x.hypot(p.y) / p.y)
}

pub fn dist_point_to_vertical_axis_h3(p: PointH3) -> f64 {
    arcosh((p.z.norm_sqr() + p.t * p.t).sqrt() / p.t)
}

/// A point of the boundary sphere C u {oo}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Ideal {
    Finite(Complex64),
    Infinity,
}

impl Ideal {
    pub fn real(x: f64) -> Self {
        Ideal::Finite(Complex64::new(x, 0.0))
    }

    pub fn from_proj(p: &ProjPoint<BigInt>) -> Self {
        if p.q.is_zero() {
            Ideal::Infinity
        } else {
            Ideal::real(ratio_f64(&p.p, &p.q))
        }
    }

    fn close_to(&self, o: &Ideal) -> bool {
        match (self, o) {
            (Ideal::Infinity, Ideal::Infinity) => true,
            (Ideal::Finite(a), Ideal::Finite(b)) => (a - b).norm() <= 1e-13 * (1.0 + a.norm().max(b.norm())),
            _ => false,
        }
    }
}

/// p/q as a float, accurate even when p and q overflow f64 individually.
pub fn ratio_f64(p: &BigInt, q: &BigInt) -> f64 {
    let bits = p.bits().max(q.bits());
    if bits < 1000 {
        return p.to_f64().unwrap() / q.to_f64().unwrap();
    }
    let shift = bits - 900;
    (p >> shift).to_f64().unwrap() / (q >> shift).to_f64().unwrap()
}

/// The oriented geodesic from `a` to `b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeodesicBP {
    pub a: Ideal,
    pub b: Ideal,
}

impl GeodesicBP {
    pub fn new(a: Ideal, b: Ideal) -> Result<Self> {
        if a.close_to(&b) {
            return Err(Error::Precondition("geodesic endpoints coincide".into()));
        }
        Ok(GeodesicBP { a, b })
    }

    pub fn real(a: f64, b: f64) -> Result<Self> {
        GeodesicBP::new(Ideal::real(a), Ideal::real(b))
    }

    pub fn vertical() -> Self {
        GeodesicBP { a: Ideal::real(0.0), b: Ideal::Infinity }
    }

    pub fn image(&self, m: &CMat) -> GeodesicBP {
        GeodesicBP { a: m.apply_ideal(self.a), b: m.apply_ideal(self.b) }
    }
}

/// A geodesic of H^2 with exact rational endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicQ {
    pub a: ProjPoint<BigInt>,
    pub b: ProjPoint<BigInt>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Linkage {
    Disjoint,
    Linked,
    SharedEndpoint,
}

fn pdet(u: &ProjPoint<BigInt>, v: &ProjPoint<BigInt>) -> BigInt {
    &u.p * &v.q - &v.p * &u.q
}

impl GeodesicQ {
    pub fn new(a: ProjPoint<BigInt>, b: ProjPoint<BigInt>) -> Result<Self> {
        if a.same(&b) {
            return Err(Error::Precondition("geodesic endpoints coincide".into()));
        }
        Ok(GeodesicQ { a, b })
    }

    pub fn from_fracs(a: (i64, i64), b: (i64, i64)) -> Result<Self> {
        GeodesicQ::new(ProjPoint::new(BigInt::from(a.0), BigInt::from(a.1))?, ProjPoint::new(BigInt::from(b.0), BigInt::from(b.1))?)
    }

    /// Image under a matrix of GL2(Z) acting by Mobius maps.
    pub fn image(&self, m: &Mat2<BigInt>) -> Result<Self> {
        GeodesicQ::new(crate::ring::mobius_apply(m, &self.a)?, crate::ring::mobius_apply(m, &self.b)?)
    }

    /// Exact position of two geodesics: the endpoints interleave on the
    /// circle iff the cross-ratio [a, b; c, d] is negative.
    pub fn linkage(&self, o: &GeodesicQ) -> Linkage {
        let f = [pdet(&o.a, &self.a), pdet(&o.b, &self.b), pdet(&o.a, &self.b), pdet(&o.b, &self.a)];
        if f.iter().any(|x| x.is_zero()) {
            return Linkage::SharedEndpoint;
        }
        let neg = f.iter().filter(|x| x.is_negative()).count();
        if neg % 2 == 1 {
            Linkage::Linked
        } else {
            Linkage::Disjoint
        }
    }

    pub fn to_float(&self) -> GeodesicBP {
        GeodesicBP { a: Ideal::from_proj(&self.a), b: Ideal::from_proj(&self.b) }
    }
}

/// 2x2 complex matrix acting on the upper half-space by the Poincare
/// extension of its Mobius action.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl CMat {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        CMat { a, b, c, d }
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        let r = |x| Complex64::new(x, 0.0);
        CMat::new(r(a), r(b), r(c), r(d))
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// Rescaled to determinant 1.
    pub fn normalized(&self) -> Result<CMat> {
        let det = self.det();
        if det.norm() == 0.0 {
            return Err(Error::Precondition("singular matrix".into()));
        }
        let s = det.sqrt();
        Ok(CMat::new(self.a / s, self.b / s, self.c / s, self.d / s))
    }

    pub fn inverse(&self) -> Result<CMat> {
        let m = self.normalized()?;
        Ok(CMat::new(m.d, -m.b, -m.c, m.a))
    }

    pub fn mul(&self, o: &CMat) -> CMat {
        CMat::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn apply_ideal(&self, z: Ideal) -> Ideal {
        match z {
            Ideal::Infinity => {
                if self.c.norm() == 0.0 {
                    Ideal::Infinity
                } else {
                    Ideal::Finite(self.a / self.c)
                }
            }
            Ideal::Finite(z) => {
                let den = self.c * z + self.d;
                if den.norm() == 0.0 {
                    Ideal::Infinity
                } else {
                    Ideal::Finite((self.a * z + self.b) / den)
                }
            }
        }
    }

    /// (aP + b)(cP + d)^{-1} with P = z + t j, after rescaling to det 1.
    pub fn apply_point(&self, p: PointH3) -> Result<PointH3> {
        let m = self.normalized()?;
        let q = |w: Complex64| Quaternion::new(w.re, w.im, 0.0, 0.0);
        let pq = p.quat();
        let num = q(m.a) * pq + q(m.b);
        let den = q(m.c) * pq + q(m.d);
        let inv = den.conj().scale(1.0 / den.norm2());
        let r = num * inv;
        PointH3::new(Complex64::new(r.0[0], r.0[1]), r.0[2])
    }
}

/// A Mobius map sending the oriented geodesic ]a, b[ to ]0, oo[.
pub fn normalizing_map(g: &GeodesicBP) -> CMat {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    match (g.a, g.b) {
        (Ideal::Finite(a), Ideal::Finite(b)) => CMat::new(one, -a, one, -b),
        (Ideal::Finite(a), Ideal::Infinity) => CMat::new(one, -a, zero, one),
        (Ideal::Infinity, Ideal::Finite(b)) => CMat::new(zero, one, one, -b),
        (Ideal::Infinity, Ideal::Infinity) => unreachable!("endpoints are distinct"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PerpResult {
    pub length: f64,
    pub cosh_length: f64,
    /// Transport angle in [0, pi]; 0 or pi for geodesics of a common plane.
    pub angle: f64,
    pub foot1: PointH3,
    pub foot2: PointH3,
}

/// Common perpendicular from ]0, oo[ to ]x, y[ with 0 < x < y.
pub fn perp_vertical_to_nested(x: f64, y: f64) -> Result<PerpResult> {
    if !(x > 0.0) || !(y > x) {
        return Err(if x == 0.0 || x == y { Error::SharedEndpoint } else { Error::LinkedGeodesics });
    }
    let cosh_length = (y + x) / (y - x);
    let h2 = x * y;
    let re = 2.0 * x * y / (x + y);
    Ok(PerpResult {
        length: arcosh(cosh_length),
        cosh_length,
        angle: 0.0,
        foot1: PointH3::new(Complex64::new(0.0, 0.0), h2.sqrt())?,
        foot2: PointH3::new(Complex64::new(re, 0.0), (h2 - re * re).sqrt())?,
    })
}

/// Distance and transport angle from ]0, oo[ to the oriented geodesic ]p, q[.
/// Satisfies cosh(length) + cos(angle) = 2|q| / |q - p|.
pub fn complex_length_h3(p: Complex64, q: Complex64) -> Result<(f64, f64)> {
    let (ch, cs) = complex_length_parts(p, q)?;
    Ok((arcosh(ch), cs.clamp(-1.0, 1.0).acos()))
}

/// (cosh length, cos angle) for ]0, oo[ versus ]p, q[.
fn complex_length_parts(p: Complex64, q: Complex64) -> Result<(f64, f64)> {
    if p.norm() == 0.0 || q.norm() == 0.0 {
        return Err(Error::SharedEndpoint);
    }
    if (q - p).norm() == 0.0 {
        return Err(Error::Precondition("geodesic endpoints coincide".into()));
    }
    let c = (q + p) / (q - p);
    let u = (c + 1.0).norm();
    let v = (c - 1.0).norm();
    // Geodesics meet iff p/q is a negative real, i.e. c lies in [-1, 1].
    let r = p / q;
    if r.re < 0.0 && r.im.abs() <= 1e-14 * r.re.abs() {
        return Err(Error::LinkedGeodesics);
    }
    Ok(((u + v) / 2.0, (u - v) / 2.0))
}

/// Common perpendicular of two geodesics of H^3 (or H^2 when all endpoints
/// are real): normalize g1 to ]0, oo[, use the closed form, map feet back.
pub fn perp_between_geodesics(g1: &GeodesicBP, g2: &GeodesicBP) -> Result<PerpResult> {
    for e in [g2.a, g2.b] {
        if e.close_to(&g1.a) || e.close_to(&g1.b) {
            return Err(Error::SharedEndpoint);
        }
    }
    let m1 = normalizing_map(g1);
    let (p, q) = finite_pair(&g2.image(&m1))?;
    let (ch, cs) = complex_length_parts(p, q)?;
    let m2 = normalizing_map(g2);
    let (p2, q2) = finite_pair(&g1.image(&m2))?;
    let foot = |m: &CMat, p: Complex64, q: Complex64| -> Result<PointH3> {
        let h = (p * q).norm().sqrt();
        m.inverse()?.apply_point(PointH3::new(Complex64::new(0.0, 0.0), h)?)
    };
    Ok(PerpResult {
        length: arcosh(ch),
        cosh_length: ch,
        angle: cs.clamp(-1.0, 1.0).acos(),
        foot1: foot(&m1, p, q)?,
        foot2: foot(&m2, p2, q2)?,
    })
}

fn finite_pair(g: &GeodesicBP) -> Result<(Complex64, Complex64)> {
    match (g.a, g.b) {
        (Ideal::Finite(p), Ideal::Finite(q)) => Ok((p, q)),
        _ => Err(Error::SharedEndpoint),
    }
}

/// Exact-linkage front end for rational geodesics of H^2.
pub fn perp_between_rational(g1: &GeodesicQ, g2: &GeodesicQ) -> Result<PerpResult> {
    match g1.linkage(g2) {
        Linkage::Linked => Err(Error::LinkedGeodesics),
        Linkage::SharedEndpoint => Err(Error::SharedEndpoint),
        Linkage::Disjoint => perp_between_geodesics(&g1.to_float(), &g2.to_float()),
    }
}

/// Hamenstadt distance on the height-1 horosphere centered at oo.
pub fn hamenstadt_dist_real(x1: &[f64], x2: &[f64]) -> Result<f64> {
    if x1.len() != x2.len() {
        return Err(Error::Precondition("dimension mismatch".into()));
    }
    Ok(x1.iter().zip(x2).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
}

/// e^{d(x_T, y_T)/2 - T} for x = (0, 1), y = (a, 1), following the rays away
/// from oo: x_T = (0, e^{-T}).
pub fn hamenstadt_limit_term(a: f64, big_t: f64) -> f64 {
    // d = arcosh(1 + a^2 e^{2T} / 2), evaluated as a log to avoid overflow.
    let w = a * a * (2.0 * big_t).exp() / 2.0;
    let d = if w > 1e150 { (2.0 * w).ln() + (1.0 / w).ln_1p() } else { arcosh(1.0 + w) };
    (0.5 * d - big_t).exp()
}

/// d(l'(t), l) - (t + ln a + ln 2) for the vertical geodesic l through 0 and
/// the vertical ray l' through a horizontal offset a.
pub fn lemma4_residual(a: f64, t: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::Precondition("offset must be positive".into()));
    }
    // d = arcosh(X), X = sqrt(a^2 + e^{-2t}) / e^{-t}. Split
    // arcosh(X) - ln(2X) and ln(2X) - t - ln a - ln 2 to avoid cancellation.
    let e = (-2.0 * t).exp();
    let u = 1.0 / (1.0 + a * a / e);
    let first = (-(u / (1.0 + (1.0 - u).sqrt())) / 2.0).ln_1p();
    let second = 0.5 * (e / (a * a)).ln_1p();
    Ok(first + second)
}

/// The distance whose expansion lemma4_residual measures.
pub fn ray_to_vertical_distance(a: f64, t: f64) -> f64 {
    let e = (-t).exp();
    arcosh((a * a + e * e).sqrt() / e)
}

/// Checks d_H(x, y) <= e^{d(x, D)} with D the vertical geodesic above y,
/// both points on the height-1 horosphere.
pub fn lemma3_check(x: &[f64], y: &[f64]) -> Result<bool> {
    let dh = hamenstadt_dist_real(x, y)?;
    let dist = arcosh((dh * dh + 1.0).sqrt());
    Ok(dh <= dist.exp() * (1.0 + 1e-15))
}

/// Element x + y omega of O_K in lattice coordinates.
pub type OkElem = (i64, i64);

fn ok_mul(disc: Discriminant, (x1, y1): OkElem, (x2, y2): OkElem) -> Result<OkElem> {
    // omega^2 = D omega - (D^2 - D)/4.
    let ovf = || Error::Range("O_K entry overflows i64".into());
    let yy = y1.checked_mul(y2).ok_or_else(ovf)?;
    let x = x1.checked_mul(x2).and_then(|v| v.checked_sub(yy.checked_mul(disc.norm_c())?)).ok_or_else(ovf)?;
    let y = x1
        .checked_mul(y2)
        .and_then(|v| v.checked_add(x2.checked_mul(y1)?))
        .and_then(|v| v.checked_add(yy.checked_mul(disc.d())?))
        .ok_or_else(ovf)?;
    Ok((x, y))
}

fn ok_add(a: OkElem, b: OkElem) -> Result<OkElem> {
    match (a.0.checked_add(b.0), a.1.checked_add(b.1)) {
        (Some(x), Some(y)) => Ok((x, y)),
        _ => Err(Error::Range("O_K entry overflows i64".into())),
    }
}

pub fn ok_to_complex(disc: Discriminant, (x, y): OkElem) -> Complex64 {
    let d = disc.d() as f64;
    Complex64::new(x as f64 + y as f64 * d / 2.0, y as f64 * (-d).max(0.0).sqrt() / 2.0)
}

/// Exact product S T^{t_1} S T^{t_2} ... S T^{t_k} in SL2(O_K), with
/// S = (0 -1; 1 0) and T^t = (1 t; 0 1), as entries [a, b, c, d].
pub fn sl2_word(disc: Discriminant, ts: &[OkElem]) -> Result<[OkElem; 4]> {
    if disc == Discriminant::Rational && ts.iter().any(|t| t.1 != 0) {
        return Err(Error::Precondition("rational entries need y = 0".into()));
    }
    let mut m = [(1, 0), (0, 0), (0, 0), (1, 0)];
    for &t in ts {
        // m S = (b, -a; d, -c), then (m S) T^t.
        let (a, b, c, d) = (m[1], (-m[0].0, -m[0].1), m[3], (-m[2].0, -m[2].1));
        m = [a, ok_add(ok_mul(disc, a, t)?, b)?, c, ok_add(ok_mul(disc, c, t)?, d)?];
    }
    Ok(m)
}

/// cosh(length) + cos(angle) of the common perpendicular from ]0, oo[ to
/// ]g.0, g.oo[, against 2|ad|.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AdIdentity {
    pub length: f64,
    pub angle: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

pub fn ad_identity(m: [Complex64; 4]) -> Result<AdIdentity> {
    let [a, b, c, d] = m;
    if [a, b, c, d].iter().any(|z| z.norm() == 0.0) {
        return Err(Error::Precondition("needs abcd != 0".into()));
    }
    let g = GeodesicBP { a: Ideal::Finite(b / d), b: Ideal::Finite(a / c) };
    let r = perp_between_geodesics(&GeodesicBP::vertical(), &g)?;
    let lhs = r.cosh_length + r.angle.cos();
    let rhs = 2.0 * a.norm() * d.norm();
    Ok(AdIdentity { length: r.length, angle: r.angle, lhs, rhs, residual: lhs - rhs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn basic_distances() {
        let p = PointH2::new(0.0, 1.0).unwrap();
        assert_eq!(dist_h2(p, p), 0.0);
        assert!((dist_h2(p, PointH2::new(0.0, std::f64::consts::E).unwrap()) - 1.0).abs() < 1e-14);
        assert!(PointH2::new(0.0, 0.0).is_err());
        assert_eq!(dist_point_to_vertical_axis_h2(p), 0.0);
        let q = PointH2::new(1.0, 1.0).unwrap();
        assert!((dist_point_to_vertical_axis_h2(q) - arcosh(2f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn nested_closed_form() {
        let r = perp_vertical_to_nested(1.0, 3.0).unwrap();
        assert!((r.cosh_length - 2.0).abs() < 1e-15);
        assert!((r.foot1.t - 3f64.sqrt()).abs() < 1e-15);
        // foot2 lies on the semicircle over [1, 3] and on |z| = sqrt(3)
        let f = r.foot2;
        assert!(((f.z.re - 2.0).powi(2) + f.t * f.t - 1.0).abs() < 1e-14);
        assert!((f.z.re * f.z.re + f.t * f.t - 3.0).abs() < 1e-14);
        assert!((dist_h3(r.foot1, r.foot2) - r.length).abs() < 1e-12);
        assert_eq!(perp_vertical_to_nested(-1.0, 3.0), Err(Error::LinkedGeodesics));
        assert_eq!(perp_vertical_to_nested(0.0, 3.0), Err(Error::SharedEndpoint));
    }

    #[test]
    fn generic_matches_nested() {
        let g2 = GeodesicBP::real(1.0, 3.0).unwrap();
        let r = perp_between_geodesics(&GeodesicBP::vertical(), &g2).unwrap();
        assert!((r.cosh_length - 2.0).abs() < 1e-14);
        assert!((r.foot1.t - 3f64.sqrt()).abs() < 1e-12);
        let back = perp_between_geodesics(&g2, &GeodesicBP::vertical()).unwrap();
        assert!((back.length - r.length).abs() < 1e-12);
    }

    #[test]
    fn linkage_is_exact() {
        let g = GeodesicQ::from_fracs((0, 1), (1, 0)).unwrap();
        let crossing = GeodesicQ::from_fracs((-1, 1), (1, 1)).unwrap();
        let disjoint = GeodesicQ::from_fracs((1, 3), (1, 2)).unwrap();
        let touching = GeodesicQ::from_fracs((0, 1), (5, 1)).unwrap();
        assert_eq!(g.linkage(&crossing), Linkage::Linked);
        assert_eq!(g.linkage(&disjoint), Linkage::Disjoint);
        assert_eq!(g.linkage(&touching), Linkage::SharedEndpoint);
        assert_eq!(perp_between_rational(&g, &crossing), Err(Error::LinkedGeodesics));
    }

    #[test]
    fn complex_length_real_case() {
        // gamma = (3 1; 2 1): p = 1, q = 3/2, cosh = 1 + 2bc = 5
        let (l, th) = complex_length_h3(c(1.0, 0.0), c(1.5, 0.0)).unwrap();
        assert!((l.cosh() - 5.0).abs() < 1e-12);
        assert_eq!(th, 0.0);
        assert!(complex_length_h3(c(0.0, 0.0), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn poincare_extension_fixes_axis_under_dilation() {
        let m = CMat::real(2.0, 0.0, 0.0, 0.5);
        let p = m.apply_point(PointH3::new(c(0.0, 0.0), 1.0).unwrap()).unwrap();
        assert!(p.z.norm() < 1e-15 && (p.t - 4.0).abs() < 1e-14);
    }

    #[test]
    fn vertical_residual_small_cases() {
        let r = lemma4_residual(1.0, 0.0).unwrap();
        let direct = arcosh(2f64.sqrt()) - 2f64.ln();
        assert!((r - direct).abs() < 1e-15);
        for &(a, t) in &[(1.0, 1.0), (2.0, 0.5), (5.0, 2.0)] {
            let direct = ray_to_vertical_distance(a, t) - (t + f64::ln(a) + 2f64.ln());
            assert!((lemma4_residual(a, t).unwrap() - direct).abs() < 1e-12);
        }
        assert!(lemma4_residual(0.0, 1.0).is_err());
    }

    #[test]
    fn hamenstadt() {
        assert_eq!(hamenstadt_dist_real(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert!((hamenstadt_dist_real(&[0.0], &[3.0]).unwrap() - 3.0).abs() < 1e-15);
        assert!((hamenstadt_limit_term(3.0, 20.0) - 3.0).abs() < 1e-6);
        assert!(lemma3_check(&[3.0], &[0.0]).unwrap());
        assert!(lemma3_check(&[0.0], &[0.0]).unwrap());
    }

    #[test]
    fn sl2_words_satisfy_the_ad_identity() {
        for disc in [Discriminant::new(-4).unwrap(), Discriminant::new(-7).unwrap()] {
            let m = sl2_word(disc, &[(1, 1), (2, -1), (-1, 2), (3, 1)]).unwrap();
            let z = m.map(|e| ok_to_complex(disc, e));
            assert!((z[0] * z[3] - z[1] * z[2] - 1.0).norm() < 1e-9);
            let r = ad_identity(z).unwrap();
            assert!(r.residual.abs() < 1e-10 * r.rhs);
        }
        assert!(sl2_word(Discriminant::Rational, &[(1, 1)]).is_err());
    }
}

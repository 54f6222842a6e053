//! Complex and quaternionic hyperbolic space in horospherical coordinates
//! (zeta, u, t): Heisenberg group law, Cygan distances, distance to the
//! vertical geodesic, and the horosphere volume constant Xi.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeric::{arcosh, ball_volume, gamma, sphere_volume};
use crate::ring::Quaternion;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KField {
    Real,
    Complex,
    Quaternion,
}

impl KField {
    pub fn dim(&self) -> u32 {
        match self {
            KField::Real => 1,
            KField::Complex => 2,
            KField::Quaternion => 4,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "R" | "r" => Ok(KField::Real),
            "C" | "c" => Ok(KField::Complex),
            "H" | "h" => Ok(KField::Quaternion),
            _ => Err(Error::Precondition(format!("unknown field {s}; expected R, C or H"))),
        }
    }

    fn check(&self, q: &Quaternion, imaginary: bool) -> bool {
        let v = q.0;
        let real_ok = !imaginary || v[0] == 0.0;
        match self {
            KField::Real => real_ok && v[1] == 0.0 && v[2] == 0.0 && v[3] == 0.0,
            KField::Complex => real_ok && v[2] == 0.0 && v[3] == 0.0,
            KField::Quaternion => real_ok,
        }
    }
}

/// Element (zeta, u) of Heis_{n,K}: zeta in K^{n-1}, u in Im K. Complex
/// numbers are stored as quaternions with vanishing j and k parts.
#[derive(Clone, Debug, PartialEq)]
pub struct HeisElement {
    pub field: KField,
    pub zeta: Vec<Quaternion>,
    pub u: Quaternion,
}

/// Point (zeta, u, t) of the upper half-space; t = 0 on the boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct HsPoint {
    pub g: HeisElement,
    pub t: f64,
}

/// sum conj(a_i) b_i, in this order (K acts on the right).
pub fn herm(a: &[Quaternion], b: &[Quaternion]) -> Quaternion {
    a.iter().zip(b).fold(Quaternion::real(0.0), |acc, (x, y)| acc + x.conj() * *y)
}

fn norm2(v: &[Quaternion]) -> f64 {
    v.iter().map(|q| q.norm2()).sum()
}

impl HeisElement {
    pub fn new(field: KField, zeta: Vec<Quaternion>, u: Quaternion) -> Result<Self> {
        if field == KField::Real {
            return Err(Error::Precondition("the Heisenberg group needs K = C or H".into()));
        }
        if zeta.is_empty() {
            return Err(Error::Precondition("n must be at least 2".into()));
        }
        if !zeta.iter().all(|q| field.check(q, false)) || !field.check(&u, true) {
            return Err(Error::Precondition("coordinates outside K or u not imaginary".into()));
        }
        Ok(HeisElement { field, zeta, u })
    }

    /// Complex case with zeta in C^{n-1} given as (re, im) pairs and u = i * u_im.
    pub fn complex(zeta: &[(f64, f64)], u_im: f64) -> Result<Self> {
        HeisElement::new(
            KField::Complex,
            zeta.iter().map(|&(a, b)| Quaternion::new(a, b, 0.0, 0.0)).collect(),
            Quaternion::new(0.0, u_im, 0.0, 0.0),
        )
    }

    pub fn identity(field: KField, n: usize) -> Result<Self> {
        HeisElement::new(field, vec![Quaternion::real(0.0); n.saturating_sub(1)], Quaternion::real(0.0))
    }

    pub fn inverse(&self) -> Self {
        HeisElement { field: self.field, zeta: self.zeta.iter().map(|q| -*q).collect(), u: -self.u }
    }

    pub fn zeta_norm2(&self) -> f64 {
        norm2(&self.zeta)
    }

    /// |(zeta, u)| = (|zeta|^4 + |u|^2)^{1/4}.
    pub fn cygan_norm(&self) -> f64 {
        let z = self.zeta_norm2();
        (z * z + self.u.norm2()).sqrt().sqrt()
    }

    pub fn cygan_mod_norm(&self) -> f64 {
        let z = self.zeta_norm2();
        (z + (z * z + self.u.norm2()).sqrt()).sqrt()
    }
}

fn same_space(a: &HeisElement, b: &HeisElement) -> Result<()> {
    if a.field != b.field || a.zeta.len() != b.zeta.len() {
        return Err(Error::Precondition("Heisenberg elements of different spaces".into()));
    }
    Ok(())
}

/// (zeta', u')(zeta, u) = (zeta' + zeta, u' + u + 2 Im(conj(zeta') . zeta)).
pub fn heis_mul(g1: &HeisElement, g2: &HeisElement) -> Result<HeisElement> {
    same_space(g1, g2)?;
    let zeta = g1.zeta.iter().zip(&g2.zeta).map(|(a, b)| *a + *b).collect();
    let u = g1.u + g2.u + herm(&g1.zeta, &g2.zeta).im().scale(2.0);
    Ok(HeisElement { field: g1.field, zeta, u })
}

/// Heisenberg translation of a point of the half-space.
pub fn heis_translate(g: &HeisElement, p: &HsPoint) -> Result<HsPoint> {
    Ok(HsPoint { g: heis_mul(g, &p.g)?, t: p.t })
}

/// h_l(zeta, u, t) = (l zeta, l^2 u, l^2 t).
pub fn heis_dilate(l: f64, p: &HsPoint) -> Result<HsPoint> {
    if !(l > 0.0) {
        return Err(Error::Precondition("dilation factor must be positive".into()));
    }
    Ok(HsPoint {
        g: HeisElement {
            field: p.g.field,
            zeta: p.g.zeta.iter().map(|q| q.scale(l)).collect(),
            u: p.g.u.scale(l * l),
        },
        t: l * l * p.t,
    })
}

pub fn cygan_dist(g1: &HeisElement, g2: &HeisElement) -> Result<f64> {
    Ok(heis_mul(&g1.inverse(), g2)?.cygan_norm())
}

pub fn cygan_mod_dist(g1: &HeisElement, g2: &HeisElement) -> Result<f64> {
    Ok(heis_mul(&g1.inverse(), g2)?.cygan_mod_norm())
}

/// Distance from p to the vertical geodesic ]0, oo[ and the closest point
/// (0, 0, ||zeta|^2 + t + u|) on it.
pub fn dist_to_vertical_axis_k(p: &HsPoint) -> Result<(f64, f64)> {
    if !(p.t > 0.0) {
        return Err(Error::Precondition("point must be interior (t > 0)".into()));
    }
    let z = p.g.zeta_norm2();
    let m = ((z + p.t).powi(2) + p.g.u.norm2()).sqrt();
    Ok((0.5 * arcosh((z + m) / p.t), m))
}

/// Left side minus right side of the sphere equation
/// |t0 + |zeta - zeta0|^2 + t + (u - u0 - 2 Im conj(zeta0).zeta)|^2 = 4 t0 t cosh^2 rho.
pub fn sphere_equation_residual(center: &HsPoint, p: &HsPoint, rho: f64) -> Result<f64> {
    same_space(&center.g, &p.g)?;
    let diff: Vec<Quaternion> = p.g.zeta.iter().zip(&center.g.zeta).map(|(a, b)| *a - *b).collect();
    let im = p.g.u - center.g.u - herm(&center.g.zeta, &p.g.zeta).im().scale(2.0);
    let w = Quaternion::real(center.t + norm2(&diff) + p.t) + im;
    Ok(w.norm2() - 4.0 * center.t * p.t * rho.cosh().powi(2))
}

/// d(l'(s), l) - (s + ln d' + ln 2) where l' is the ray s -> (zeta, u, e^{-2s})
/// and d' = d'_Cyg((zeta, u), 0) / sqrt 2 is the cuspidal distance.
pub fn lemma8_residual(s: f64, g: &HeisElement) -> Result<f64> {
    if g.cygan_norm() < 1.0 {
        return Err(Error::Precondition("Cygan distance to the identity must be at least 1".into()));
    }
    let t = (-2.0 * s).exp();
    let z = g.zeta_norm2();
    let u2 = g.u.norm2();
    let base = (z * z + u2).sqrt();
    let moved = ((z + t).powi(2) + u2).sqrt();
    // x = (z + moved) / t; distance = arcosh(x) / 2 and d'^2 = (z + base) / 2.
    // Split into arcosh(x) - ln(2x) and ln(2x) - ln(4 d'^2 / t).
    let x = (z + moved) / t;
    let v = 1.0 / (x * x);
    let first = (-(v / (1.0 + (1.0 - v).sqrt())) / 2.0).ln_1p();
    let delta = t * (2.0 * z + t) / (moved + base);
    let second = (delta / (z + base)).ln_1p();
    Ok(0.5 * (first + second))
}

/// d(l'(s), l) computed directly from the axis-distance formula.
pub fn ray_to_axis_distance(s: f64, g: &HeisElement) -> Result<f64> {
    Ok(dist_to_vertical_axis_k(&HsPoint { g: g.clone(), t: (-2.0 * s).exp() })?.0)
}

/// Hamenstadt distance on the horosphere of height t, obtained by dilating
/// it onto the height-1 horosphere where it equals the Cygan distance.
pub fn horosphere_dist(t: f64, g1: &HeisElement, g2: &HeisElement) -> Result<f64> {
    let l = 1.0 / t.sqrt();
    let a = heis_dilate(l, &HsPoint { g: g1.clone(), t })?;
    let b = heis_dilate(l, &HsPoint { g: g2.clone(), t })?;
    cygan_dist(&a.g, &b.g)
}

/// d_{H_t'} = sqrt(t''/t') d_{H_t''} for 0 < t' <= t''.
pub fn horosphere_scaling_check(t1: f64, t2: f64, g1: &HeisElement, g2: &HeisElement) -> Result<bool> {
    if !(t1 > 0.0) || t2 < t1 {
        return Err(Error::Precondition("need 0 < t' <= t''".into()));
    }
    let lhs = horosphere_dist(t1, g1, g2)?;
    let rhs = (t2 / t1).sqrt() * horosphere_dist(t2, g1, g2)?;
    Ok((lhs - rhs).abs() <= 1e-12 * lhs.max(1.0))
}

/// Siegel-domain coordinates (w0, w) with zeta = w, u = w0 - conj(w0),
/// t = 2 Re w0 - |w|^2.
pub fn to_siegel(p: &HsPoint) -> (Quaternion, Vec<Quaternion>) {
    let w0 = Quaternion::real((p.t + p.g.zeta_norm2()) / 2.0) + p.g.u.scale(0.5);
    (w0, p.g.zeta.clone())
}

pub fn from_siegel(field: KField, w0: Quaternion, w: Vec<Quaternion>) -> Result<HsPoint> {
    let t = 2.0 * w0.re() - norm2(&w);
    let u = w0 - w0.conj();
    Ok(HsPoint { g: HeisElement::new(field, w, u)?, t })
}

/// Xi in its two closed forms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XiForms {
    pub gamma_form: f64,
    pub sphere_form: f64,
}

/// Real case: 2^{n-1} pi^{(n-1)/2} / Gamma((n+1)/2) and 2^{n-1} Vol(B_{n-1}).
pub fn xi_real(n: u32) -> Result<XiForms> {
    if n < 2 {
        return Err(Error::Precondition("n must be at least 2".into()));
    }
    let nf = n as f64;
    Ok(XiForms {
        gamma_form: 2f64.powi(n as i32 - 1) * std::f64::consts::PI.powf((nf - 1.0) / 2.0) / gamma((nf + 1.0) / 2.0),
        sphere_form: 2f64.powi(n as i32 - 1) * ball_volume(n - 1),
    })
}

/// K = C, H: 2 pi^{(nd-1)/2} / (Gamma((d-1)/2) (d(n-1)/2 - 1)!) and
/// Vol(S^{d-2}) Vol(S^{d(n-1)-1}) / 2.
pub fn xi_constant(field: KField, n: u32) -> Result<XiForms> {
    if field == KField::Real {
        return xi_real(n);
    }
    if n < 2 {
        return Err(Error::Precondition("n must be at least 2".into()));
    }
    let d = field.dim();
    let m = d * (n - 1);
    let fact = gamma((m / 2) as f64);
    Ok(XiForms {
        gamma_form: 2.0 * std::f64::consts::PI.powf(((n * d) as f64 - 1.0) / 2.0) / (gamma((d as f64 - 1.0) / 2.0) * fact),
        sphere_form: 0.5 * sphere_volume(d - 2) * sphere_volume(m - 1),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub volume: f64,
    pub std_err: f64,
    pub samples: u64,
}

const MC_SHARDS: u64 = 64;

/// Monte Carlo volume of {(zeta, u) : |zeta|^2 + sqrt(|zeta|^4 + |u|^2) <= 2}
/// in K^{n-1} x Im K. zeta is drawn from the unit ball (which contains the
/// region's projection) with the radial coordinate stratified, u uniformly
/// from the cube [-2, 2]^{d-1}.
pub fn xi_region_volume_mc(field: KField, n: u32, samples: u64, seed: u64) -> Result<McEstimate> {
    if field == KField::Real || n < 2 {
        return Err(Error::Precondition("needs K = C or H and n >= 2".into()));
    }
    if samples < MC_SHARDS {
        return Err(Error::Precondition(format!("need at least {MC_SHARDS} samples")));
    }
    let d = field.dim();
    let m = d * (n - 1);
    let per = samples / MC_SHARDS;
    let hits: Vec<u64> = (0..MC_SHARDS)
        .into_par_iter()
        .map(|shard| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ shard.wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let mut hits = 0u64;
            for i in 0..per {
                // Radial stratification: |zeta|^m is uniform on [0, 1].
                let v = (i as f64 + rng.gen::<f64>()) / per as f64;
                let r2 = v.powf(2.0 / m as f64);
                let mut u2 = 0.0;
                for _ in 0..d - 1 {
                    let c = rng.gen_range(-2.0..2.0);
                    u2 += c * c;
                }
                if r2 + (r2 * r2 + u2).sqrt() <= 2.0 {
                    hits += 1;
                }
            }
            hits
        })
        .collect();
    let total = per * MC_SHARDS;
    let p = hits.iter().sum::<u64>() as f64 / total as f64;
    let box_vol = ball_volume(m) * 4f64.powi(d as i32 - 1);
    Ok(McEstimate {
        volume: p * box_vol,
        std_err: (p * (1.0 - p) / total as f64).sqrt() * box_vol,
        samples: total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn group_law_basics() {
        let g = HeisElement::complex(&[(1.0, 2.0)], 0.5).unwrap();
        let e = HeisElement::identity(KField::Complex, 2).unwrap();
        assert_eq!(heis_mul(&g, &e).unwrap(), g);
        let inv = heis_mul(&g, &g.inverse()).unwrap();
        assert!(inv.cygan_norm() < 1e-15);
        let bad = HeisElement::identity(KField::Complex, 3).unwrap();
        assert!(heis_mul(&g, &bad).is_err());
        assert!(HeisElement::new(KField::Complex, vec![Quaternion::real(1.0)], Quaternion::real(1.0)).is_err());
    }

    #[test]
    fn cygan_examples() {
        let g = HeisElement::complex(&[(1.0, 0.0)], 0.0).unwrap();
        let e = HeisElement::identity(KField::Complex, 2).unwrap();
        assert!((cygan_dist(&g, &e).unwrap() - 1.0).abs() < 1e-15);
        assert!((cygan_mod_dist(&g, &e).unwrap() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn axis_distance_examples() {
        let p = HsPoint { g: HeisElement::complex(&[(0.0, 0.0)], 0.0).unwrap(), t: 3.0 };
        assert_eq!(dist_to_vertical_axis_k(&p).unwrap(), (0.0, 3.0));
        let q = HsPoint { g: HeisElement::complex(&[(0.0, 0.0)], 1.0).unwrap(), t: 1.0 };
        let (rho, tp) = dist_to_vertical_axis_k(&q).unwrap();
        assert!((rho - 0.5 * arcosh(2f64.sqrt())).abs() < 1e-15);
        assert!((tp - 2f64.sqrt()).abs() < 1e-15);
        let center = HsPoint { g: HeisElement::identity(KField::Complex, 2).unwrap(), t: tp };
        assert!(sphere_equation_residual(&center, &q, rho).unwrap().abs() < 1e-12);
        assert!(dist_to_vertical_axis_k(&HsPoint { g: q.g.clone(), t: 0.0 }).is_err());
    }

    #[test]
    fn cuspidal_residual_matches_direct_at_small_s() {
        let g = HeisElement::complex(&[(1.0, 0.0)], 0.0).unwrap();
        for s in [0.0, 0.5, 1.0] {
            let d = ray_to_axis_distance(s, &g).unwrap();
            let dp = g.cygan_mod_norm() / 2f64.sqrt();
            let direct = d - (s + dp.ln() + 2f64.ln());
            assert!((lemma8_residual(s, &g).unwrap() - direct).abs() < 1e-12);
        }
        let small = HeisElement::complex(&[(0.5, 0.0)], 0.0).unwrap();
        assert!(lemma8_residual(1.0, &small).is_err());
    }

    #[test]
    fn xi_forms() {
        let c2 = xi_constant(KField::Complex, 2).unwrap();
        assert!((c2.gamma_form - 2.0 * PI).abs() < 1e-13);
        assert!((c2.sphere_form - 2.0 * PI).abs() < 1e-13);
        assert!((xi_real(2).unwrap().gamma_form - 4.0).abs() < 1e-14);
        assert!((xi_real(3).unwrap().sphere_form - 4.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn siegel_round_trip() {
        let p = HsPoint { g: HeisElement::complex(&[(0.3, -1.2), (2.0, 0.1)], 0.7).unwrap(), t: 1.5 };
        let (w0, w) = to_siegel(&p);
        let back = from_siegel(KField::Complex, w0, w).unwrap();
        assert!((back.t - p.t).abs() < 1e-12);
        assert!((back.g.u - p.g.u).abs() < 1e-12);
    }

    #[test]
    fn scaling_trivial_cases() {
        let g1 = HeisElement::complex(&[(1.0, 0.5)], 0.2).unwrap();
        let g2 = HeisElement::complex(&[(-0.4, 2.0)], -1.0).unwrap();
        assert!(horosphere_scaling_check(1.0, 1.0, &g1, &g2).unwrap());
        assert!(horosphere_scaling_check(1.0, 2.0, &g1, &g2).unwrap());
        let d1 = horosphere_dist(1.0, &g1, &g2).unwrap();
        let d2 = horosphere_dist(2.0, &g1, &g2).unwrap();
        assert!((d1 - 2f64.sqrt() * d2).abs() < 1e-12);
    }
}

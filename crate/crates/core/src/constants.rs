//! Closed forms of the asymptotic coefficients, each available both as the
//! displayed formula and as the generic pipeline built from delta, Xi and the
//! Bowen-Margulis mass.

use std::f64::consts::PI;

use crate::divisor::zeta_k2;
use crate::error::{Error, Result};
use crate::heis::{xi_constant, KField};
use crate::numeric::{gamma, sphere_volume};
use crate::ring::Discriminant;

/// Data of a finite-volume orbifold M = Gamma \ H^n_K.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrbifoldData {
    pub field: KField,
    pub n: u32,
    pub volume: f64,
}

/// Scalar data of one convex subset D: skinning mass, reciprocity index and
/// pointwise stabilizer order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubsetData {
    pub sigma_mass: f64,
    pub iota_rec: u32,
    pub m: u32,
}

impl OrbifoldData {
    pub fn new(field: KField, n: u32, volume: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Precondition("n must be at least 2".into()));
        }
        if !(volume > 0.0) {
            return Err(Error::Precondition("volume must be positive".into()));
        }
        Ok(OrbifoldData { field, n, volume })
    }

    /// PSL2(Z) \ H^2, of area pi/3.
    pub fn modular() -> Self {
        OrbifoldData { field: KField::Real, n: 2, volume: PI / 3.0 }
    }
}

impl SubsetData {
    pub fn new(sigma_mass: f64, iota_rec: u32, m: u32) -> Result<Self> {
        if !(1..=2).contains(&iota_rec) || m == 0 {
            return Err(Error::Precondition("need iota_rec in {1, 2} and m >= 1".into()));
        }
        Ok(SubsetData { sigma_mass, iota_rec, m })
    }
}

/// delta = d_K (n + 1) - 2.
pub fn critical_exponent(field: KField, n: u32) -> u32 {
    field.dim() * (n + 1) - 2
}

/// Total mass of the Bowen-Margulis measure.
pub fn bm_mass(field: KField, n: u32, vol: f64) -> f64 {
    match field {
        KField::Real => 2f64.powi(n as i32 - 1) * sphere_volume(n - 1) * vol,
        _ => {
            let d = field.dim();
            sphere_volume(n * d - 1) / 2f64.powi((d * (n - 1)) as i32) * vol
        }
    }
}

/// The same mass written as pi^{nd/2} / (2^{d(n-1)-1} (nd/2 - 1)!) Vol.
pub fn bm_mass_gamma_form(field: KField, n: u32, vol: f64) -> f64 {
    let d = field.dim();
    let h = (n * d) as f64 / 2.0;
    PI.powf(h) / (2f64.powi((d * (n - 1)) as i32 - 1) * gamma(h)) * vol
}

fn xi(field: KField, n: u32) -> Result<f64> {
    Ok(xi_constant(field, n)?.gamma_form)
}

/// Coefficient of s e^{delta s} in the generic form
/// iota ||sigma|| Xi / (2^delta m ||m_BM||).
pub fn pipeline_single(orb: &OrbifoldData, plus: &SubsetData) -> Result<f64> {
    let delta = critical_exponent(orb.field, orb.n) as i32;
    Ok(plus.iota_rec as f64 * plus.sigma_mass * xi(orb.field, orb.n)?
        / (2f64.powi(delta) * plus.m as f64 * bm_mass(orb.field, orb.n, orb.volume)))
}

/// Coefficient of s^2 e^{delta s} in the generic form
/// delta iota- iota+ Xi^2 / (2^{2 delta + 1} m- m+ ||m_BM||).
pub fn pipeline_double(orb: &OrbifoldData, minus: &SubsetData, plus: &SubsetData) -> Result<f64> {
    let delta = critical_exponent(orb.field, orb.n);
    let x = xi(orb.field, orb.n)?;
    Ok(delta as f64 * (minus.iota_rec * plus.iota_rec) as f64 * x * x
        / (2f64.powi(2 * delta as i32 + 1) * (minus.m * plus.m) as f64 * bm_mass(orb.field, orb.n, orb.volume)))
}

fn require_real(orb: &OrbifoldData) -> Result<()> {
    if orb.field != KField::Real {
        return Err(Error::Precondition("this coefficient is for real hyperbolic orbifolds".into()));
    }
    Ok(())
}

/// Gamma(n/2) iota ||sigma|| / (2^n sqrt(pi) Gamma((n+1)/2) m Vol).
pub fn thm5_coeff(orb: &OrbifoldData, plus: &SubsetData) -> Result<f64> {
    require_real(orb)?;
    let nf = orb.n as f64;
    Ok(gamma(nf / 2.0) * plus.iota_rec as f64 * plus.sigma_mass
        / (2f64.powi(orb.n as i32) * PI.sqrt() * gamma((nf + 1.0) / 2.0) * plus.m as f64 * orb.volume))
}

/// (n-1) pi^{n/2-1} Gamma(n/2) iota- iota+ / (2^{n+1} Gamma((n+1)/2)^2 m- m+ Vol).
pub fn thm6_coeff(orb: &OrbifoldData, minus: &SubsetData, plus: &SubsetData) -> Result<f64> {
    require_real(orb)?;
    let nf = orb.n as f64;
    Ok((nf - 1.0) * PI.powf(nf / 2.0 - 1.0) * gamma(nf / 2.0) * (minus.iota_rec * plus.iota_rec) as f64
        / (2f64.powi(orb.n as i32 + 1) * gamma((nf + 1.0) / 2.0).powi(2) * (minus.m * plus.m) as f64 * orb.volume))
}

/// Displayed coefficients of s e^{delta s} and s^2 e^{delta s} for K = C, H.
pub fn thm9_coeffs(orb: &OrbifoldData, minus: &SubsetData, plus: &SubsetData) -> Result<(f64, f64)> {
    if orb.field == KField::Real {
        return Err(Error::Precondition("needs K = C or H".into()));
    }
    let d = orb.field.dim();
    let n = orb.n;
    let half = (n * d) as f64 / 2.0;
    let prod: f64 = (1..=d / 2).map(|i| half - i as f64).product();
    let g = gamma((d as f64 - 1.0) / 2.0);
    let c1 = prod * plus.iota_rec as f64 * plus.sigma_mass
        / (4f64.powi(d as i32 - 1) * PI.sqrt() * g * plus.m as f64 * orb.volume);
    let fact = gamma((d * (n - 1) / 2) as f64);
    let c2 = (d * (n + 1) - 2) as f64 * PI.powf(half - 1.0) * prod * (minus.iota_rec * plus.iota_rec) as f64
        / (2f64.powi((d * (n + 3)) as i32 - 4) * g * g * fact * (minus.m * plus.m) as f64 * orb.volume);
    Ok((c1, c2))
}

/// Vol(PSL2(O_K) \ H^3) = |D|^{3/2} zeta_K(2) / (4 pi^2).
pub fn humbert_volume(disc: Discriminant) -> Result<f64> {
    let d = require_imaginary(disc)?;
    Ok(d.powf(1.5) * zeta_k2(disc)? / (4.0 * PI * PI))
}

fn require_imaginary(disc: Discriminant) -> Result<f64> {
    match disc {
        Discriminant::Imaginary(d) => Ok((-d) as f64),
        Discriminant::Rational => Err(Error::Precondition("needs an imaginary quadratic discriminant".into())),
    }
}

/// Data of the Bianchi orbifold and of the geodesic ]0, oo[ in it.
pub fn bianchi_data(disc: Discriminant) -> Result<(OrbifoldData, SubsetData)> {
    let orb = OrbifoldData::new(KField::Real, 3, humbert_volume(disc)?)?;
    Ok((orb, SubsetData { sigma_mass: 0.0, iota_rec: 1, m: disc.unit_count() as u32 / 2 }))
}

/// pi^3 / (|O_K^x|^2 |D|^{3/2} zeta_K(2)).
pub fn c_k(disc: Discriminant) -> Result<f64> {
    let d = require_imaginary(disc)?;
    let u = disc.unit_count() as f64;
    Ok(PI.powi(3) / (u * u * d.powf(1.5) * zeta_k2(disc)?))
}

/// Coefficient of X (ln X)^2 for the sum of d_K(x) d_K(x+1) over N(x) <= X:
/// 8 pi^3 / (|D|^{3/2} zeta_K(2)).
pub fn thm2_coeff(disc: Discriminant) -> Result<f64> {
    let d = require_imaginary(disc)?;
    Ok(8.0 * PI.powi(3) / (d.powf(1.5) * zeta_k2(disc)?))
}

/// Coefficient of N^2 (ln N)^2 for the sum over |k| <= N divided by
/// |O_K^x|^2: 32 pi^3 / (|O_K^x|^2 |D|^{3/2} zeta_K(2)).
pub fn bianchi_main_coeff(disc: Discriminant) -> Result<f64> {
    let d = require_imaginary(disc)?;
    let u = disc.unit_count() as f64;
    Ok(32.0 * PI.powi(3) / (u * u * d.powf(1.5) * zeta_k2(disc)?))
}

/// Ideal-divisor form of the X (ln X)^2 coefficient: thm2 / |O_K^x|^2.
pub fn ideal_divisor_coeff(disc: Discriminant) -> Result<f64> {
    let u = disc.unit_count() as f64;
    Ok(thm2_coeff(disc)? / (u * u))
}

/// 3/(2 pi^2): modular Delta -> Delta (and Delta_1) coefficient of s^2 e^s.
pub fn modular_dd_coeff() -> f64 {
    let one = SubsetData { sigma_mass: 0.0, iota_rec: 1, m: 1 };
    thm6_coeff(&OrbifoldData::modular(), &one, &one).expect("modular data is real")
}

/// 3/(2 pi): modular Delta -> Gamma.i coefficient of s e^s.
pub fn modular_di_coeff() -> f64 {
    let plus = SubsetData { sigma_mass: PI, iota_rec: 1, m: 1 };
    thm5_coeff(&OrbifoldData::modular(), &plus).expect("modular data is real")
}

/// 3/(4 pi^2): ambiguous classes, from (1/2 + 1/2 + 1) counts at s/2.
pub fn ambiguous_coeff() -> f64 {
    (0.5 + 0.5 + 1.0) * modular_dd_coeff() * 0.25
}

/// 3/(8 pi): ambiguous reciprocal classes, from (1/2 + 1/2) counts at s/4.
pub fn ambiguous_reciprocal_coeff() -> f64 {
    (0.5 + 0.5) * modular_di_coeff() * 0.25
}

//! Counting common perpendiculars in the modular orbifold (between the images
//! of the geodesics ]0, oo[, ]0, 2[ and the orbit of i) and in Bianchi
//! orbifolds, through exact divisor-sum identities.

use std::f64::consts::PI;

use num_bigint::BigUint;
use num_integer::{Integer, Roots};
use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{bianchi_main_coeff, modular_dd_coeff, modular_di_coeff};
use crate::divisor::{divisor_counts_sum_of_squares, divisor_sums_quadratic, sieve_d, SieveConfig};
use crate::error::{Error, Result};
use crate::numeric::{arcosh, least_squares};
use crate::ring::{Discriminant, Mat2};

/// A length bound s, either as a float or given exactly by cosh s = p/q or
/// cosh s = sqrt(p/q), so that boundary cases compare exactly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Threshold {
    Real(f64),
    Acosh { num: u64, den: u64 },
    AcoshSqrt { num: u64, den: u64 },
}

fn parse_frac(s: &str) -> Result<(u64, u64)> {
    let bad = || Error::Precondition(format!("cannot parse rational '{s}'"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?),
        None => (s.trim().parse().map_err(|_| bad())?, 1),
    };
    if d == 0 {
        return Err(bad());
    }
    Ok((n, d))
}

impl Threshold {
    /// `12.5`, `acosh:5`, `acosh:7/2`, `acosh:sqrt:2`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = if let Some(rest) = s.strip_prefix("acosh:sqrt:") {
            let (num, den) = parse_frac(rest)?;
            Threshold::AcoshSqrt { num, den }
        } else if let Some(rest) = s.strip_prefix("acosh:") {
            let (num, den) = parse_frac(rest)?;
            Threshold::Acosh { num, den }
        } else {
            Threshold::Real(s.trim().parse().map_err(|_| Error::Precondition(format!("cannot parse length '{s}'")))?)
        };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Threshold::Real(s) => s > 0.0 && s.is_finite(),
            Threshold::Acosh { num, den } | Threshold::AcoshSqrt { num, den } => den > 0 && num > den,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition("length bound must be positive".into()))
        }
    }

    pub fn cosh(&self) -> f64 {
        match *self {
            Threshold::Real(s) => s.cosh(),
            Threshold::Acosh { num, den } => num as f64 / den as f64,
            Threshold::AcoshSqrt { num, den } => (num as f64 / den as f64).sqrt(),
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Threshold::Real(s) => s,
            _ => arcosh(self.cosh()),
        }
    }

    /// cosh s >= sqrt(a / b).
    pub fn cosh_ge_sqrt(&self, a: u128, b: u128) -> bool {
        match *self {
            Threshold::Real(s) => s.cosh().powi(2) * b as f64 >= a as f64,
            Threshold::Acosh { num, den } => {
                BigUint::from(num).pow(2) * BigUint::from(b) >= BigUint::from(a) * BigUint::from(den).pow(2)
            }
            Threshold::AcoshSqrt { num, den } => BigUint::from(num) * BigUint::from(b) >= BigUint::from(a) * BigUint::from(den),
        }
    }

    /// cosh s >= a / b.
    pub fn cosh_ge(&self, a: u128, b: u128) -> bool {
        self.cosh_ge_sqrt(a * a, b * b)
    }

    pub fn scaled(&self, f: f64) -> Threshold {
        Threshold::Real(self.value() * f)
    }

    /// The length of a closed geodesic whose SL2 trace is `trace`:
    /// 2 cosh(s/2) = trace, i.e. cosh s = (trace^2 - 2)/2.
    pub fn from_trace(trace: u64) -> Result<Threshold> {
        if trace < 3 {
            return Err(Error::Precondition("trace bound must be at least 3".into()));
        }
        Ok(Threshold::Acosh { num: trace * trace - 2, den: 2 })
    }

    /// cosh sqrt(p/q) with p/q a rational square becomes exact rational.
    fn normalized(self) -> Threshold {
        match self {
            Threshold::AcoshSqrt { num, den } => {
                let g = num.gcd(&den);
                let (n, d) = (num / g, den / g);
                let (rn, rd) = (n.sqrt(), d.sqrt());
                if rn * rn == n && rd * rd == d {
                    Threshold::Acosh { num: rn, den: rd }
                } else {
                    Threshold::AcoshSqrt { num: n, den: d }
                }
            }
            t => t,
        }
    }

    /// s/2, exact when cosh s is rational: cosh(s/2) = sqrt((cosh s + 1)/2).
    pub fn half(&self) -> Threshold {
        match self.normalized() {
            Threshold::Real(s) => Threshold::Real(s / 2.0),
            Threshold::Acosh { num, den } => Threshold::AcoshSqrt { num: num + den, den: 2 * den }.normalized(),
            t @ Threshold::AcoshSqrt { .. } => Threshold::Real(t.value() / 2.0),
        }
    }
}

/// Largest k >= 0 with ok(k), for ok true at 0 and monotone.
fn max_true(ok: impl Fn(u64) -> bool) -> u64 {
    let mut hi = 1u64;
    while ok(hi) {
        hi *= 2;
    }
    let mut lo = hi / 2;
    if !ok(lo) {
        return 0;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Bound on k = bc for Delta -> Delta: cosh = 1 + 2k.
pub fn dd_bound(t: &Threshold) -> u64 {
    max_true(|k| k == 0 || t.cosh_ge(1 + 2 * k as u128, 1))
}

/// Bound on k for Delta -> Delta_1: cosh = 1 + k.
pub fn dd1_bound(t: &Threshold) -> u64 {
    max_true(|k| k == 0 || t.cosh_ge(1 + k as u128, 1))
}

/// Bound on k for Delta_1 -> Delta_1: cosh = 1 + k/2.
pub fn d1d1_bound(t: &Threshold) -> u64 {
    max_true(|k| k == 0 || t.cosh_ge(2 + k as u128, 2))
}

/// Bound on m for Delta -> Gamma.i: cosh = sqrt(m^2 + 1).
pub fn di_bound(t: &Threshold) -> u64 {
    max_true(|m| m == 0 || t.cosh_ge_sqrt(m as u128 * m as u128 + 1, 1))
}

/// Bound on j for Delta_1 -> Gamma.i: cosh = sqrt(j^2 + 4) / 2.
pub fn d1i_bound(t: &Threshold) -> u64 {
    max_true(|j| j == 0 || t.cosh_ge_sqrt(j as u128 * j as u128 + 4, 4))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Pair {
    Dd,
    Dd1,
    D1d1,
    Di,
    D1i,
}

impl Pair {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "dd" => Ok(Pair::Dd),
            "dd1" => Ok(Pair::Dd1),
            "d1d1" => Ok(Pair::D1d1),
            "di" => Ok(Pair::Di),
            "d1i" => Ok(Pair::D1i),
            _ => Err(Error::Precondition(format!("unknown pair '{s}'"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Pair::Dd => "dd",
            Pair::Dd1 => "dd1",
            Pair::D1d1 => "d1d1",
            Pair::Di => "di",
            Pair::D1i => "d1i",
        }
    }

    /// Leading coefficient c and power p of the main term c s^p e^s.
    pub fn main_term(&self) -> (f64, i32) {
        match self {
            Pair::Dd | Pair::Dd1 | Pair::D1d1 => (modular_dd_coeff(), 2),
            Pair::Di | Pair::D1i => (modular_di_coeff(), 1),
        }
    }
}

/// Exact count at one length bound against its predicted main term.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountReport {
    pub pair: String,
    pub param: f64,
    #[serde(serialize_with = "crate::report::u128_str")]
    pub count: u128,
    pub main_term: f64,
    pub second_order: Option<f64>,
    /// count / main_term
    pub ratio: f64,
    /// (count - main_term) / (s^{p-1} e^s): tends to the next coefficient.
    pub residual: f64,
    /// Whether an independent second computation confirmed the count.
    pub paths_checked: bool,
}

impl CountReport {
    fn new(pair: Pair, s: f64, count: u128, paths_checked: bool) -> Self {
        let (c, p) = pair.main_term();
        let main = c * s.powi(p) * s.exp();
        let second_order = (pair == Pair::Dd).then(|| main + b1() * s * s.exp());
        CountReport {
            pair: pair.name().into(),
            param: s,
            count,
            main_term: main,
            second_order,
            ratio: count as f64 / main,
            residual: (count as f64 - main) / (s.powi(p - 1) * s.exp()),
            paths_checked,
        }
    }
}

/// Second coefficient in the sum of d(k)d(k+1): 6/pi^2 n ln^2 n + a_1 n ln n + ...
pub const A1: f64 = 1.574;
/// Quadratic analogue fitted numerically for D = -4.
pub const A1_GAUSS: f64 = 8.37;

/// Coefficient of s e^s in the Delta -> Delta count: a_1/4 - 6 ln 2 / pi^2.
pub fn b1() -> f64 {
    A1 / 4.0 - 6.0 * 2f64.ln() / (PI * PI)
}

/// Common perpendicular from ]0, oo[ to gamma ]0, oo[.
#[derive(Clone, Debug, PartialEq)]
pub struct PerpRecord {
    pub gamma: Mat2<i64>,
    /// cosh of the length, as an exact rational num/den.
    pub cosh_num: u64,
    pub cosh_den: u64,
    pub length: f64,
    /// Height of the foot on the base geodesic.
    pub foot_height: f64,
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Translates gamma ]0, oo[ = ]b/d, a/c[ with a, b, c, d > 0 and
/// 1 <= bc <= max_bc, built from divisor pairs of bc and ad = bc + 1.
pub fn enumerate_delta_translates(max_bc: u64) -> Result<Vec<PerpRecord>> {
    if max_bc == 0 {
        return Err(Error::Precondition("max_bc must be positive".into()));
    }
    let mut out = Vec::new();
    for k in 1..=max_bc {
        let dk = divisors(k);
        let dk1 = divisors(k + 1);
        for &b in &dk {
            for &a in &dk1 {
                let (c, d) = (k / b, (k + 1) / a);
                let cosh = 1 + 2 * k;
                out.push(PerpRecord {
                    gamma: Mat2::new(a as i64, b as i64, c as i64, d as i64),
                    cosh_num: cosh,
                    cosh_den: 1,
                    length: arcosh(cosh as f64),
                    foot_height: ((a * b) as f64 / (c * d) as f64).sqrt(),
                });
            }
        }
    }
    Ok(out)
}

/// Number of the translates above, by the same divisor-pair construction but
/// without materializing them.
fn count_delta_translates(n: u64) -> u128 {
    (1..=n)
        .into_par_iter()
        .map(|k| (divisors(k).len() * divisors(k + 1).len()) as u128)
        .sum()
}

/// Above this bound the enumeration path is skipped.
pub const DUAL_PATH_LIMIT: u64 = 500_000;
/// Same for Delta_1 -> Gamma.i, whose enumeration factors j^2 + 4 by trial division.
pub const D1I_DUAL_PATH_LIMIT: u64 = 20_000;

/// Sum over k <= n of d(k) d(k+1), from the sieve.
pub fn dd_divisor_sum(n: u64) -> Result<u128> {
    if n == 0 {
        return Ok(0);
    }
    let t = sieve_d(n as usize + 1)?;
    let c = t.as_slice();
    Ok((1..=n as usize).map(|k| c[k] as u128 * c[k + 1] as u128).sum())
}

pub fn count_perp_delta_delta(t: &Threshold) -> Result<CountReport> {
    let n = dd_bound(t);
    let sum = dd_divisor_sum(n)?;
    let checked = n <= DUAL_PATH_LIMIT;
    if checked {
        let direct = count_delta_translates(n);
        if direct != sum {
            return Err(Error::Invariant(format!("divisor sum {sum} != enumeration {direct} at bc <= {n}")));
        }
    }
    Ok(CountReport::new(Pair::Dd, t.value(), sum, checked))
}

/// Translate gamma ]0, 2[ = ]P, Q[ with 0 < P = p1/q1 < Q = p2/q2 in lowest
/// terms; p2 q1 - p1 q2 = 2 and cosh = 1 + p1 q2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Delta1Translate {
    pub p1: u64,
    pub q1: u64,
    pub p2: u64,
    pub q2: u64,
}

impl Delta1Translate {
    /// beta with beta.0 = P and beta.2 = Q.
    pub fn beta(&self) -> Mat2<i64> {
        let (p1, q1, p2, q2) = (self.p1 as i64, self.q1 as i64, self.p2 as i64, self.q2 as i64);
        Mat2::new((p2 - p1) / 2, p1, (q2 - q1) / 2, q1)
    }
}

/// Translates of ]0, 2[ in the right half-plane at cosh-distance 1 + k from
/// ]0, oo[, for 1 <= k <= max_k.
pub fn delta_delta1_translates(max_k: u64) -> Vec<Delta1Translate> {
    let mut out = Vec::new();
    for k in 1..=max_k {
        for p1 in divisors(k) {
            let q2 = k / p1;
            for p2 in divisors(k + 2) {
                let q1 = (k + 2) / p2;
                if p1.gcd(&q1) == 1 && p2.gcd(&q2) == 1 {
                    out.push(Delta1Translate { p1, q1, p2, q2 });
                }
            }
        }
    }
    out
}

fn count_dd1_enumeration(max_k: u64) -> u128 {
    (1..=max_k)
        .into_par_iter()
        .map(|k| {
            let a = divisors(k);
            let b = divisors(k + 2);
            let mut c = 0u128;
            for &p1 in &a {
                for &p2 in &b {
                    if p1.gcd(&((k + 2) / p2)) == 1 && p2.gcd(&(k / p1)) == 1 {
                        c += 1;
                    }
                }
            }
            c
        })
        .sum()
}

fn odd_part(mut k: u64) -> u64 {
    while k % 2 == 0 {
        k /= 2;
    }
    k
}

/// Closed form: w(k) = d(k) d(k+2) for odd k, 2 d(k') d(k'') for even k with
/// k', k'' the odd parts of k and k+2.
pub fn dd1_divisor_sum(max_k: u64) -> Result<u128> {
    if max_k == 0 {
        return Ok(0);
    }
    let t = sieve_d(max_k as usize + 2)?;
    let d = |k: u64| t.get(k as usize) as u128;
    Ok((1..=max_k)
        .map(|k| if k % 2 == 1 { d(k) * d(k + 2) } else { 2 * d(odd_part(k)) * d(odd_part(k + 2)) })
        .sum())
}

pub fn count_perp_delta_delta1(t: &Threshold) -> Result<CountReport> {
    let k = dd1_bound(t);
    let sum = dd1_divisor_sum(k)?;
    let checked = k <= DUAL_PATH_LIMIT;
    if checked {
        let direct = count_dd1_enumeration(k);
        if direct != sum {
            return Err(Error::Invariant(format!("closed form {sum} != enumeration {direct} at k <= {k}")));
        }
    }
    Ok(CountReport::new(Pair::Dd1, t.value(), sum, checked))
}

/// Translates of ]0, 2[ with both endpoints in ]0, 2[. In the coordinates
/// z -> z/(2 - z), which send ]0, 2[ to ]0, oo[, the endpoints are p1/r1 and
/// p2/r2 with r = 2q - p, p2 r1 - p1 r2 = 4 and cosh = 1 + p1 r2 / 2.
pub fn delta1_delta1_translates(max_k: u64) -> Vec<Delta1Translate> {
    let mut out = Vec::new();
    for k in 1..=max_k {
        d1d1_at(k, |t| out.push(t));
    }
    out
}

fn d1d1_at(k: u64, mut f: impl FnMut(Delta1Translate)) {
    for p1 in divisors(k) {
        let r2 = k / p1;
        for p2 in divisors(k + 4) {
            let r1 = (k + 4) / p2;
            if (p1 + r1) % 2 != 0 || (p2 + r2) % 2 != 0 {
                continue;
            }
            let (q1, q2) = ((p1 + r1) / 2, (p2 + r2) / 2);
            if p1.gcd(&q1) == 1 && p2.gcd(&q2) == 1 {
                f(Delta1Translate { p1, q1, p2, q2 });
            }
        }
    }
}

pub fn count_perp_delta1_delta1(t: &Threshold) -> Result<CountReport> {
    let k = d1d1_bound(t);
    let count: u128 = (1..=k)
        .into_par_iter()
        .map(|k| {
            let mut c = 0u128;
            d1d1_at(k, |_| c += 1);
            c
        })
        .sum();
    Ok(CountReport::new(Pair::D1d1, t.value(), count, false))
}

/// Orbit point (m + i)/n of i, with n | m^2 + 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitPoint {
    pub m: i64,
    pub n: u64,
}

impl OrbitPoint {
    /// alpha in SL2(Z) with alpha.i = (m + i)/n.
    pub fn witness(&self) -> Option<Mat2<i64>> {
        let n = self.n as i64;
        let mut c = 0i64;
        while c * c <= n {
            let rest = n - c * c;
            let d0 = (rest as f64).sqrt().round() as i64;
            for d in [d0, -d0] {
                if d * d != rest {
                    continue;
                }
                for (cc, dd) in [(c, d), (-c, d), (d, c), (d, -c)] {
                    let (an, bn) = (self.m * cc + dd, self.m * dd - cc);
                    if an % n == 0 && bn % n == 0 {
                        return Some(Mat2::new(an / n, bn / n, cc, dd));
                    }
                }
            }
            c += 1;
        }
        None
    }
}

/// Orbit points with positive real part at cosh-distance sqrt(m^2 + 1) from
/// ]0, oo[, for 1 <= m <= max_m.
pub fn delta_iorbit_points(max_m: u64) -> Vec<OrbitPoint> {
    let mut out = Vec::new();
    for m in 1..=max_m {
        for n in divisors(m * m + 1) {
            out.push(OrbitPoint { m: m as i64, n });
        }
    }
    out
}

pub fn count_perp_delta_iorbit(t: &Threshold) -> Result<CountReport> {
    let m = di_bound(t);
    let d = divisor_counts_sum_of_squares(1, m)?;
    let count: u128 = d[1..].iter().map(|&v| v as u128).sum();
    Ok(CountReport::new(Pair::Di, t.value(), count, false))
}

/// Orbit points (m + i)/n outside the circle over ]0, 2[, at sinh-distance
/// j/2 from it where j = n' - 2m and n n' = m^2 + 1, for 1 <= j <= max_j.
/// Since 4(m^2 + 1) = (n' - j)^2 + 4, n' runs over divisors of j^2 + 4.
pub fn delta1_iorbit_points(max_j: u64) -> Vec<OrbitPoint> {
    let mut out = Vec::new();
    for j in 1..=max_j {
        d1i_at(j, |p| out.push(p));
    }
    out
}

fn d1i_at(j: u64, mut f: impl FnMut(OrbitPoint)) {
    let j = j as i128;
    for t in divisors((j * j + 4) as u64) {
        let t = t as i128;
        if (t - j) % 2 != 0 {
            continue;
        }
        let m = (t - j) / 2;
        let v = m * m + 1;
        if v % t == 0 {
            f(OrbitPoint { m: m as i64, n: (v / t) as u64 });
        }
    }
}

fn count_d1i_enumeration(max_j: u64) -> u128 {
    (1..=max_j)
        .into_par_iter()
        .map(|j| {
            let mut c = 0u128;
            d1i_at(j, |_| c += 1);
            c
        })
        .sum()
}

/// Sum over j <= max_j of w(j): d(j^2 + 4) for odd j, d((j/2)^2 + 1) for
/// j = 0 mod 4, and 0 for j = 2 mod 4.
pub fn d1i_divisor_sum(max_j: u64) -> Result<u128> {
    if max_j == 0 {
        return Ok(0);
    }
    let odd = divisor_counts_sum_of_squares(2, max_j)?;
    let half = divisor_counts_sum_of_squares(1, max_j / 2)?;
    Ok((1..=max_j)
        .map(|j| match j % 4 {
            1 | 3 => odd[j as usize] as u128,
            0 => half[(j / 2) as usize] as u128,
            _ => 0,
        })
        .sum())
}

pub fn count_perp_delta1_iorbit(t: &Threshold) -> Result<CountReport> {
    let j = d1i_bound(t);
    let sum = d1i_divisor_sum(j)?;
    let checked = j <= D1I_DUAL_PATH_LIMIT;
    if checked {
        let direct = count_d1i_enumeration(j);
        if direct != sum {
            return Err(Error::Invariant(format!("closed form {sum} != enumeration {direct} at j <= {j}")));
        }
    }
    Ok(CountReport::new(Pair::D1i, t.value(), sum, checked))
}

pub fn count_perp(pair: Pair, t: &Threshold) -> Result<CountReport> {
    match pair {
        Pair::Dd => count_perp_delta_delta(t),
        Pair::Dd1 => count_perp_delta_delta1(t),
        Pair::D1d1 => count_perp_delta1_delta1(t),
        Pair::Di => count_perp_delta_iorbit(t),
        Pair::D1i => count_perp_delta1_iorbit(t),
    }
}

/// Sum of d_K(k) d_K(k-1) over k != 0, 1 with |k| <= N, normalized by
/// |O_K^x|^2 and compared with 32 pi^3/(|O_K^x|^2 |D|^{3/2} zeta_K(2)) N^2 ln^2 N.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BianchiReport {
    pub disc: i64,
    pub radius: u64,
    #[serde(serialize_with = "crate::report::u128_str")]
    pub raw_sum: u128,
    #[serde(serialize_with = "crate::report::u128_str")]
    pub shifted_plus_sum: u128,
    /// raw_sum / |O_K^x|^2, the sum of ideal-divisor products.
    #[serde(serialize_with = "crate::report::u128_str")]
    pub normalized: u128,
    pub main_term: f64,
    /// normalized / main_term.
    pub ratio: f64,
    /// normalized / (main_term + 8.37 N^2 ln N); meaningful for D = -4.
    pub ratio_with_second_term: f64,
}

pub fn bianchi_count(disc: Discriminant, n: u64) -> Result<BianchiReport> {
    bianchi_count_with(disc, n, SieveConfig::default())
}

pub fn bianchi_count_with(disc: Discriminant, n: u64, cfg: SieveConfig) -> Result<BianchiReport> {
    let sums = divisor_sums_quadratic(disc, n, cfg)?;
    let u2 = (disc.unit_count() as u128).pow(2);
    if sums.minus % u2 != 0 {
        return Err(Error::Invariant("quadratic divisor sum is not divisible by |O_K^x|^2".into()));
    }
    let nf = n as f64;
    let main = bianchi_main_coeff(disc)? * nf * nf * nf.ln().powi(2);
    let normalized = sums.minus / u2;
    Ok(BianchiReport {
        disc: disc.d(),
        radius: n,
        raw_sum: sums.minus,
        shifted_plus_sum: sums.plus,
        normalized,
        main_term: main,
        ratio: normalized as f64 / main,
        ratio_with_second_term: normalized as f64 / (main + A1_GAUSS * nf * nf * nf.ln()),
    })
}

/// Ratio of the rational divisor sum to its main term, with and without the
/// a_1 n ln n correction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RationalRatio {
    pub n: u64,
    pub sum: u64,
    pub ratio: f64,
    pub ratio_with_second_term: f64,
}

pub fn rational_ratio(n: u64) -> Result<RationalRatio> {
    let sum = dd_divisor_sum(n)? as u64;
    let nf = n as f64;
    let main = 6.0 / (PI * PI) * nf * nf.ln().powi(2);
    Ok(RationalRatio {
        n,
        sum,
        ratio: sum as f64 / main,
        ratio_with_second_term: sum as f64 / (main + A1 * nf * nf.ln()),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioReports {
    pub rational: RationalRatio,
    pub quadratic: Vec<BianchiReport>,
}

/// The rational ratio at n = 10^6 and the Gaussian ratios at the given radii.
pub fn ratio_reports(radii: &[u64]) -> Result<RatioReports> {
    let gauss = Discriminant::new(-4)?;
    Ok(RatioReports {
        rational: rational_ratio(1_000_000)?,
        quadratic: radii.iter().map(|&n| bianchi_count(gauss, n)).collect::<Result<_>>()?,
    })
}

/// Least-squares fit of count e^{-delta s} = c2 s^2 + c1 s + c0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AsymptoticFit {
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
    pub max_residual: f64,
}

pub fn asymptotic_fit(points: &[(f64, f64)], delta: f64) -> Result<AsymptoticFit> {
    if points.len() < 3 {
        return Err(Error::Degenerate);
    }
    let rows: Vec<Vec<f64>> = points.iter().map(|&(s, _)| vec![s * s, s, 1.0]).collect();
    let ys: Vec<f64> = points.iter().map(|&(s, c)| c * (-delta * s).exp()).collect();
    let c = least_squares(&rows, &ys)?;
    let max_residual = rows
        .iter()
        .zip(&ys)
        .map(|(r, y)| (r[0] * c[0] + r[1] * c[1] + r[2] * c[2] - y).abs())
        .fold(0.0, f64::max);
    Ok(AsymptoticFit { c2: c[0], c1: c[1], c0: c[2], max_residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_parsing_and_bounds() {
        let t = Threshold::parse("acosh:3").unwrap();
        assert_eq!(dd_bound(&t), 1);
        assert_eq!(dd_bound(&Threshold::parse("acosh:5").unwrap()), 2);
        assert_eq!(dd_bound(&Threshold::parse("acosh:49/10").unwrap()), 1);
        assert_eq!(di_bound(&Threshold::parse("acosh:sqrt:2").unwrap()), 1);
        assert!(Threshold::parse("acosh:1").is_err());
        assert!(Threshold::parse("-1").is_err());
        assert!(Threshold::parse("acosh:x").is_err());
    }

    #[test]
    fn halving_stays_exact_for_trace_bounds() {
        let s = Threshold::from_trace(10).unwrap();
        assert_eq!(s.half(), Threshold::Acosh { num: 5, den: 1 });
        assert_eq!(s.half().half(), Threshold::AcoshSqrt { num: 3, den: 1 });
        assert!((s.half().value() - s.value() / 2.0).abs() < 1e-12);
        assert!((s.half().half().value() - s.value() / 4.0).abs() < 1e-12);
        assert_eq!(Threshold::Real(3.0).half(), Threshold::Real(1.5));
    }

    #[test]
    fn delta_delta_small() {
        let r = enumerate_delta_translates(1).unwrap();
        let mut m: Vec<_> = r.iter().map(|p| p.gamma.entries().map(|x| *x)).collect();
        m.sort();
        assert_eq!(m, vec![[1, 1, 1, 2], [2, 1, 1, 1]]);
        assert_eq!(enumerate_delta_translates(2).unwrap().len(), 6);
        assert_eq!(count_perp_delta_delta(&Threshold::parse("acosh:3").unwrap()).unwrap().count, 2);
        assert_eq!(count_perp_delta_delta(&Threshold::parse("acosh:5").unwrap()).unwrap().count, 6);
    }

    #[test]
    fn delta1_translate_matrix_has_det_one() {
        for t in delta_delta1_translates(30) {
            let b = t.beta();
            assert_eq!(b.det(), 1);
            assert_eq!(t.p2 * t.q1 - t.p1 * t.q2, 2);
        }
    }

    #[test]
    fn iorbit_small() {
        let c = count_perp_delta_iorbit(&Threshold::parse("acosh:sqrt:2").unwrap()).unwrap();
        assert_eq!(c.count, 2);
        for p in delta_iorbit_points(20) {
            let a = p.witness().unwrap();
            assert_eq!(a.det(), 1);
            assert_eq!(a.c * a.c + a.d * a.d, p.n as i64);
        }
    }

    #[test]
    fn fit_recovers_exact_model() {
        let pts: Vec<(f64, f64)> = [1.0, 2.0, 3.0, 4.5]
            .iter()
            .map(|&s: &f64| (s, (0.3 * s * s - 0.1 * s + 2.0) * s.exp()))
            .collect();
        let f = asymptotic_fit(&pts, 1.0).unwrap();
        assert!((f.c2 - 0.3).abs() < 1e-9 && (f.c1 + 0.1).abs() < 1e-9 && (f.c0 - 2.0).abs() < 1e-9);
        assert!(asymptotic_fit(&pts[..2], 1.0).is_err());
    }
}

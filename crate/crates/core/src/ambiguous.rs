//! Ambiguous and reciprocal elements of PSL2(Z): exact classification,
//! conjugacy-class keys, and the counts of ambiguous (reciprocal) classes
//! obtained from common perpendiculars.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{ambiguous_coeff, ambiguous_reciprocal_coeff};
use crate::error::{Error, Result};
use crate::numeric::{exact_sqrt, isqrt_u128};
use crate::perp::{
    count_perp, delta1_delta1_translates, delta1_iorbit_points, delta_delta1_translates, delta_iorbit_points,
    enumerate_delta_translates, d1d1_bound, d1i_bound, dd1_bound, dd_bound, di_bound, Pair, Threshold,
};
use crate::ring::Mat2;

pub type M = Mat2<i128>;

pub fn m(a: i128, b: i128, c: i128, d: i128) -> M {
    Mat2::new(a, b, c, d)
}

/// Reflection in ]0, oo[ (determinant -1).
pub fn w() -> M {
    m(1, 0, 0, -1)
}

/// Reflection in ]0, 2[ (determinant -1).
pub fn w1() -> M {
    m(1, 0, 1, -1)
}

/// Rotation of order 2 about i.
pub fn iota() -> M {
    m(0, -1, 1, 0)
}

pub fn from_i64(g: &Mat2<i64>) -> M {
    m(g.a as i128, g.b as i128, g.c as i128, g.d as i128)
}

/// Inverse of a matrix of determinant +-1.
pub fn inverse(g: &M) -> M {
    let adj = g.adj();
    if g.det() == 1 {
        adj
    } else {
        adj.neg()
    }
}

fn require_sl2(g: &M) -> Result<()> {
    if g.det() != 1 {
        return Err(Error::DetNotOne);
    }
    Ok(())
}

fn hyperbolic_trace(g: &M) -> Result<i128> {
    require_sl2(g)?;
    let t = g.trace();
    if t.abs() <= 2 {
        return Err(Error::Precondition(format!("{g} is not hyperbolic (trace {t})")));
    }
    Ok(t)
}

/// gamma ]0, oo[ and ]0, oo[ have a common perpendicular iff abcd != 0.
pub fn has_common_perp_with_delta(g: &M) -> Result<bool> {
    require_sl2(g)?;
    Ok(g.a * g.b * g.c * g.d != 0)
}

/// a = d: conjugated to its inverse by w.
pub fn is_first_kind(g: &M) -> Result<bool> {
    require_sl2(g)?;
    Ok(g.a == g.d)
}

/// a + b = d: conjugated to its inverse by w1. The condition is invariant under g -> -g.
pub fn is_second_kind(g: &M) -> Result<bool> {
    require_sl2(g)?;
    Ok(g.a + g.b == g.d)
}

/// w g w = g^{-1} in PSL2, by matrix multiplication.
pub fn conjugated_to_inverse_by(g: &M, inv: &M) -> Result<bool> {
    require_sl2(g)?;
    Ok(inv.mul(g).mul(inv).eq_psl(&inverse(g)))
}

/// Trace-zero tau = (x y; z -x) with tau g = g^{-1} tau and x^2 + yz = eps.
/// eps = -1 gives rotations of order 2 (reciprocity), eps = +1 reflections.
///
/// Such tau fix a point (or meet the axis of g in a point) of height at most
/// 1/|z|. Composing with g moves that point by half the translation length l.
/// The solutions tau and tau g can lie in different PGL2(Z) classes, so the
/// search keeps every tau meeting the axis within l/2 of its top, whose
/// height is sqrt(t^2 - 4)/(2|c|). That bounds |z| by |c t| / sqrt(t^2 - 4).
pub fn conjugating_involutions(g: &M, eps: i128) -> Result<Vec<M>> {
    let t = hyperbolic_trace(g)?;
    let (a, b, c, d) = (g.a, g.b, g.c, g.d);
    let disc = t * t - 4;
    let zmax = isqrt_u128((c * c * t * t / disc) as u128) as i128 + 1;
    let mut out = Vec::new();
    for z in -zmax..=zmax {
        // c x^2 - (a - d) z x - (b z^2 + c eps) = 0
        let Some(s) = exact_sqrt(z * z * disc + 4 * c * c * eps) else {
            continue;
        };
        let roots = if s == 0 { vec![0] } else { vec![s, -s] };
        for r in roots {
            let num = (a - d) * z + r;
            if num % (2 * c) != 0 {
                continue;
            }
            let x = num / (2 * c);
            let ynum = -((a - d) * x + b * z);
            if ynum % c != 0 {
                continue;
            }
            let y = ynum / c;
            debug_assert_eq!(x * x + y * z, eps);
            out.push(m(x, y, z, -x));
        }
    }
    Ok(out)
}

/// Some elliptic element of order 2 conjugates g to its inverse, i.e. the
/// axis of g passes through the orbit of i.
pub fn is_reciprocal(g: &M) -> Result<bool> {
    Ok(!conjugating_involutions(g, -1)?.is_empty())
}

/// Reciprocity read off the class keys: g is conjugate to its inverse.
/// Linear in the continued-fraction period, unlike the involution search.
pub fn is_reciprocal_by_key(g: &M) -> Result<bool> {
    Ok(class_key(g)? == class_key(&inverse(g))?)
}

/// A reflection (x y; z -x) is conjugate to w when y and z are even (the
/// quadratic form z X^2 - 2x XY - y Y^2 then has content 2) and to w1 otherwise.
pub fn reflection_is_first_kind(tau: &M) -> bool {
    tau.b % 2 == 0 && tau.c % 2 == 0
}

/// (conjugate to a first-kind element, conjugate to a second-kind element).
pub fn conjugate_kinds(g: &M) -> Result<(bool, bool)> {
    let refl = conjugating_involutions(g, 1)?;
    Ok((refl.iter().any(reflection_is_first_kind), refl.iter().any(|r| !reflection_is_first_kind(r))))
}

/// [gamma, W] = (ad + bc, 2ab; 2cd, ad + bc), whose axis ]-r, r[ with
/// r = sqrt(ab/cd) contains the common perpendicular from ]0, oo[ to
/// gamma ]0, oo[. Determinant -1 inputs are accepted: the output still has
/// determinant (ad - bc)^2 = 1.
pub fn double_perp(g: &M) -> Result<M> {
    if g.det().abs() != 1 {
        return Err(Error::DetNotOne);
    }
    if g.a <= 0 || g.b <= 0 || g.c <= 0 || g.d <= 0 {
        return Err(Error::Precondition("double_perp needs positive entries".into()));
    }
    let (a, b, c, d) = (g.a, g.b, g.c, g.d);
    Ok(m(a * d + b * c, 2 * a * b, 2 * c * d, a * d + b * c))
}

pub fn double_perp_axis_radius(g: &M) -> f64 {
    ((g.a * g.b) as f64 / (g.c * g.d) as f64).sqrt()
}

/// Chebyshev pair (V_k, U_{k-1}, U_{k-2}) at trace t, with V_k = tr(M^k) and
/// M^k = U_{k-1} M - U_{k-2} I for tr M = t. None on overflow.
fn chebyshev(t: i128, k: u32) -> Option<(i128, i128, i128)> {
    let (mut v0, mut v1) = (2i128, t);
    let (mut u0, mut u1) = (0i128, 1i128);
    for _ in 1..k {
        let v2 = t.checked_mul(v1)?.checked_sub(v0)?;
        let u2 = t.checked_mul(u1)?.checked_sub(u0)?;
        (v0, v1, u0, u1) = (v1, v2, u1, u2);
    }
    Some((v1, u1, u0))
}

/// Primitive root g0 and exponent k >= 2 with g = g0^k in PSL2, if any.
pub fn proper_power_root(g: &M) -> Result<Option<(M, u32)>> {
    let t = hyperbolic_trace(g)?;
    let g = if t > 0 { g.clone() } else { g.neg() };
    let t = t.abs();
    let mut best = None;
    for k in 2u32.. {
        match chebyshev(3, k) {
            Some((v, _, _)) if v <= t => {}
            _ => break,
        }
        // V_k is increasing in the root trace on [3, t].
        let (mut lo, mut hi) = (3i128, t);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            match chebyshev(mid, k) {
                Some((v, _, _)) if v >= t => hi = mid,
                Some(_) => lo = mid + 1,
                None => hi = mid,
            }
        }
        let Some((v, u1, u0)) = chebyshev(lo, k) else { continue };
        if v != t {
            continue;
        }
        let entries = [g.a + u0, g.b, g.c, g.d + u0];
        if entries.iter().any(|e| e % u1 != 0) {
            continue;
        }
        let root = m(entries[0] / u1, entries[1] / u1, entries[2] / u1, entries[3] / u1);
        if root.det() == 1 && root.pow(k) == g {
            best = Some((root, k));
        }
    }
    Ok(best)
}

pub fn is_proper_power(g: &M) -> Result<bool> {
    Ok(proper_power_root(g)?.is_some())
}

/// Conjugacy-class key of a hyperbolic element: |trace| and the canonical
/// cyclic run-length word R^{a0} L^{a1} ... of its primitive root, of even
/// length, minimal among rotations by an even number of runs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ClassKey {
    pub trace: i128,
    pub runs: Vec<u64>,
}

fn canonical_runs(mut runs: Vec<u64>) -> Vec<u64> {
    // Minimal period as a cyclic sequence.
    let n = runs.len();
    let p = (1..=n).find(|&p| n % p == 0 && (0..n).all(|i| runs[i] == runs[(i + p) % n])).unwrap_or(n);
    runs.truncate(p);
    if p % 2 == 1 {
        let copy = runs.clone();
        runs.extend(copy);
    }
    let n = runs.len();
    (0..n)
        .step_by(2)
        .map(|r| runs[r..].iter().chain(&runs[..r]).copied().collect::<Vec<_>>())
        .min()
        .expect("nonempty")
}

/// Key from the periodic continued fraction of the attracting fixed point
/// (a - d + sqrt(t^2 - 4))/(2c).
pub fn class_key(g: &M) -> Result<ClassKey> {
    let t = hyperbolic_trace(g)?;
    let g = if t > 0 { g.clone() } else { g.neg() };
    let t = t.abs();
    let disc = t * t - 4;
    let s = isqrt_u128(disc as u128) as i128;
    let (mut p, mut q) = (g.a - g.d, 2 * g.c);
    let mut seen: BTreeMap<(i128, i128), usize> = BTreeMap::new();
    let mut terms = Vec::new();
    loop {
        if let Some(&start) = seen.get(&(p, q)) {
            // Even-indexed partial quotients are R runs.
            let mut period = terms[start..].to_vec();
            if start % 2 == 1 {
                period.rotate_left(1);
            }
            return Ok(ClassKey { trace: t, runs: canonical_runs(period) });
        }
        seen.insert((p, q), terms.len());
        let a = if q > 0 { Integer::div_floor(&(p + s), &q) } else { -(Integer::div_floor(&(p + s), &-q) + 1) };
        terms.push(a.max(0) as u64);
        p = a * q - p;
        q = (disc - p * p) / q;
    }
}

/// R/L word of a matrix with nonnegative entries (true = R), by peeling
/// R = (1 1; 0 1) and L = (1 0; 1 1) off the left.
pub fn rl_word(g: &M) -> Result<Vec<bool>> {
    require_sl2(g)?;
    if g.a < 0 || g.b < 0 || g.c < 0 || g.d < 0 {
        return Err(Error::Precondition("R/L words need nonnegative entries".into()));
    }
    let (mut a, mut b, mut c, mut d) = (g.a, g.b, g.c, g.d);
    let mut letters = Vec::new();
    while !(a == 1 && b == 0 && c == 0 && d == 1) {
        if a >= c && b >= d {
            letters.push(true);
            a -= c;
            b -= d;
        } else {
            letters.push(false);
            c -= a;
            d -= b;
        }
    }
    Ok(letters)
}

/// Key of a nonnegative hyperbolic matrix through its cyclic R/L word.
pub fn class_key_from_word(g: &M) -> Result<ClassKey> {
    let t = hyperbolic_trace(g)?;
    let mut letters = rl_word(g)?;
    let n = letters.len();
    // Start at an R preceded (cyclically) by an L; hyperbolic words use both letters.
    let start = (0..n)
        .find(|&i| letters[i] && !letters[(i + n - 1) % n])
        .ok_or_else(|| Error::Invariant(format!("{g} has a one-letter word")))?;
    letters.rotate_left(start);
    let mut runs: Vec<u64> = Vec::new();
    for (i, &l) in letters.iter().enumerate() {
        if i == 0 || l != letters[i - 1] {
            runs.push(0);
        }
        *runs.last_mut().expect("nonempty") += 1;
    }
    Ok(ClassKey { trace: t, runs: canonical_runs(runs) })
}

/// One representative of every hyperbolic conjugacy class with
/// 3 <= trace <= max_trace, from the nonnegative matrices of each trace.
pub fn hyperbolic_classes(max_trace: i128) -> Result<BTreeMap<ClassKey, M>> {
    let mut out = BTreeMap::new();
    for t in 3..=max_trace {
        for a in 1..t {
            let d = t - a;
            let bc = a * d - 1;
            for b in 1..=bc {
                if bc % b == 0 {
                    let g = m(a, b, bc / b, d);
                    out.entry(class_key_from_word(&g)?).or_insert(g);
                }
            }
        }
    }
    Ok(out)
}

/// Elements (a b; c a) of trace t conjugate to g.
pub fn first_kind_conjugates(g: &M) -> Result<Vec<M>> {
    let key = class_key(g)?;
    let t = key.trace;
    let mut out = Vec::new();
    if t % 2 != 0 {
        return Ok(out);
    }
    let a = t / 2;
    let bc = a * a - 1;
    for b in 1..=bc {
        if bc % b == 0 {
            for s in [1, -1] {
                let h = m(a, s * b, s * bc / b, a);
                if class_key(&h)? == key {
                    out.push(h);
                }
            }
        }
    }
    Ok(out)
}

/// Elements with a + b = d of trace t conjugate to g. With u = b = t - 2a,
/// det = 1 forces 4u | t^2 - 4 - u^2, so u divides t^2 - 4.
pub fn second_kind_conjugates(g: &M) -> Result<Vec<M>> {
    let key = class_key(g)?;
    let t = key.trace;
    let n = t * t - 4;
    let mut out = Vec::new();
    for u0 in 1..=n {
        if n % u0 != 0 {
            continue;
        }
        for u in [u0, -u0] {
            if (t - u) % 2 != 0 || (n - u * u) % (4 * u) != 0 {
                continue;
            }
            let a = (t - u) / 2;
            let h = m(a, u, (n - u * u) / (4 * u), a + u);
            if h.det() == 1 && class_key(&h)? == key {
                out.push(h);
            }
        }
    }
    Ok(out)
}

/// Exact flags of one element, as reported by `ambiguous classify`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub matrix: [i128; 4],
    pub first_kind: bool,
    pub second_kind: bool,
    /// None for non-hyperbolic input.
    pub reciprocal: Option<bool>,
    pub conjugate_to_first_kind: Option<bool>,
    pub conjugate_to_second_kind: Option<bool>,
    pub proper_power: Option<bool>,
}

pub fn classify(g: &M) -> Result<Classification> {
    require_sl2(g)?;
    let hyperbolic = g.trace().abs() > 2;
    let (cf, cs) = if hyperbolic {
        let (f, s) = conjugate_kinds(g)?;
        (Some(f), Some(s))
    } else {
        (None, None)
    };
    Ok(Classification {
        matrix: [g.a, g.b, g.c, g.d],
        first_kind: is_first_kind(g)?,
        second_kind: is_second_kind(g)?,
        reciprocal: if hyperbolic { Some(is_reciprocal(g)?) } else { None },
        conjugate_to_first_kind: cf,
        conjugate_to_second_kind: cs,
        proper_power: if hyperbolic { Some(is_proper_power(g)?) } else { None },
    })
}

/// Tally of hyperbolic classes up to a trace bound by ambiguity type.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ClassCensus {
    pub max_trace: i128,
    pub classes: usize,
    pub primitive: usize,
    pub reciprocal: usize,
    pub conj_first: usize,
    pub conj_second: usize,
    pub conj_both: usize,
    /// Reciprocal and conjugate to both kinds; never observed.
    pub reciprocal_and_both: usize,
    /// Primitive classes that are ambiguous (first or second kind).
    pub ambiguous_primitive: usize,
    /// Primitive classes that are ambiguous and reciprocal.
    pub ambiguous_reciprocal_primitive: usize,
}

pub fn class_census(max_trace: i128) -> Result<ClassCensus> {
    let mut c = ClassCensus { max_trace, ..Default::default() };
    for g in hyperbolic_classes(max_trace)?.values() {
        let rec = is_reciprocal(g)?;
        let (f, s) = conjugate_kinds(g)?;
        let prim = !is_proper_power(g)?;
        c.classes += 1;
        c.primitive += prim as usize;
        c.reciprocal += rec as usize;
        c.conj_first += f as usize;
        c.conj_second += s as usize;
        c.conj_both += (f && s) as usize;
        c.reciprocal_and_both += (rec && f && s) as usize;
        c.ambiguous_primitive += (prim && (f || s)) as usize;
        c.ambiguous_reciprocal_primitive += (prim && rec && (f || s)) as usize;
    }
    Ok(c)
}

/// Closed-geodesic element attached to each counted perpendicular:
/// [beta, W] type products for perpendiculars between ]0, oo[ and ]0, 2[
/// translates, and (alpha iota alpha^{-1} W)^2 for orbit points of i.
pub fn perpendicular_elements(pair: Pair, t: &Threshold) -> Result<Vec<M>> {
    let conj = |a: &M, x: &M| a.mul(x).mul(&inverse(a));
    Ok(match pair {
        Pair::Dd => {
            let n = dd_bound(t);
            if n == 0 {
                return Ok(Vec::new());
            }
            enumerate_delta_translates(n)?
                .iter()
                .map(|r| conj(&from_i64(&r.gamma), &w()).mul(&w()))
                .collect()
        }
        Pair::Dd1 => delta_delta1_translates(dd1_bound(t))
            .iter()
            .map(|r| conj(&from_i64(&r.beta()), &w1()).mul(&w()))
            .collect(),
        Pair::D1d1 => delta1_delta1_translates(d1d1_bound(t))
            .iter()
            .map(|r| conj(&from_i64(&r.beta()), &w1()).mul(&w1()))
            .collect(),
        Pair::Di | Pair::D1i => {
            let (pts, refl) = if pair == Pair::Di {
                (delta_iorbit_points(di_bound(t)), w())
            } else {
                (delta1_iorbit_points(d1i_bound(t)), w1())
            };
            pts.iter()
                .map(|p| {
                    let a = from_i64(&p.witness().ok_or_else(|| Error::Invariant(format!("no witness for {p:?}")))?);
                    let h = conj(&a, &iota()).mul(&refl);
                    Ok(h.mul(&h))
                })
                .collect::<Result<_>>()?
        }
    })
}

/// Perpendiculars whose element is primitive; for perpendiculars between
/// geodesics the element must also not be reciprocal, since an orbit point
/// of i on the perpendicular makes it non-primitive as a perpendicular.
pub fn count_primitive(pair: Pair, t: &Threshold) -> Result<u128> {
    let between_geodesics = matches!(pair, Pair::Dd | Pair::Dd1 | Pair::D1d1);
    perpendicular_elements(pair, t)?
        .par_iter()
        .map(|g| -> Result<u128> {
            let mut keep = !is_proper_power(g)?;
            if keep && between_geodesics {
                keep = !is_reciprocal_by_key(g)?;
            }
            Ok(keep as u128)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

/// Count of ambiguous (or ambiguous reciprocal) classes of length <= s.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AmbiguousReport {
    pub kind: String,
    pub param: f64,
    pub primitive: bool,
    /// Exact; the formula has halves, so this is an integer or a half-integer.
    pub count: String,
    pub main_term: f64,
    pub ratio: f64,
    pub residual: f64,
    /// Perpendicular counts used: (pair, length bound, count).
    pub components: Vec<(String, f64, String)>,
}

fn half_str(twice: u128) -> String {
    if twice % 2 == 0 {
        format!("{}", twice / 2)
    } else {
        format!("{}.5", twice / 2)
    }
}

fn component(pair: Pair, t: &Threshold, primitive: bool) -> Result<(u128, (String, f64, String))> {
    let n = if primitive { count_primitive(pair, t)? } else { count_perp(pair, t)?.count };
    Ok((n, (pair.name().to_string(), t.value(), n.to_string())))
}

/// N_AR(s) = 1/2 Perp(Delta, Gamma.i, s/4) + 1/2 Perp(Delta_1, Gamma.i, s/4).
pub fn count_ambiguous_reciprocal(t: &Threshold, primitive: bool) -> Result<AmbiguousReport> {
    let q = t.half().half();
    let (a, ca) = component(Pair::Di, &q, primitive)?;
    let (b, cb) = component(Pair::D1i, &q, primitive)?;
    let s = t.value();
    let main = ambiguous_reciprocal_coeff() * s * (s / 4.0).exp();
    let twice = a + b;
    Ok(AmbiguousReport {
        kind: "ambiguous_reciprocal".into(),
        param: s,
        primitive,
        count: half_str(twice),
        main_term: main,
        ratio: twice as f64 / 2.0 / main,
        residual: (twice as f64 / 2.0 - main) / (s / 4.0).exp(),
        components: vec![ca, cb],
    })
}

/// N_A(s) = 1/2 Perp(Delta, Delta, s/2) + 1/2 Perp(Delta_1, Delta_1, s/2)
///        + Perp(Delta, Delta_1, s/2) + N_AR(s).
pub fn count_ambiguous(t: &Threshold, primitive: bool) -> Result<AmbiguousReport> {
    let h = t.half();
    let (dd, c1) = component(Pair::Dd, &h, primitive)?;
    let (d1d1, c2) = component(Pair::D1d1, &h, primitive)?;
    let (dd1, c3) = component(Pair::Dd1, &h, primitive)?;
    let q = h.half();
    let (di, c4) = component(Pair::Di, &q, primitive)?;
    let (d1i, c5) = component(Pair::D1i, &q, primitive)?;
    let s = t.value();
    let main = ambiguous_coeff() * s * s * (s / 2.0).exp();
    let twice = dd + d1d1 + 2 * dd1 + di + d1i;
    let count = twice as f64 / 2.0;
    Ok(AmbiguousReport {
        kind: "ambiguous".into(),
        param: s,
        primitive,
        count: half_str(twice),
        main_term: main,
        ratio: count / main,
        residual: (count - main) / (s * (s / 2.0).exp()),
        components: vec![c1, c2, c3, c4, c5],
    })
}

/// 3/(4 pi^2) from two copies of the 3/(2 pi^2) (s/2)^2 e^{s/2} terms.
pub fn ambiguous_coeff_assembly() -> f64 {
    2.0 * crate::constants::modular_dd_coeff() / 4.0
}

/// 3/(8 pi) from two halves of the 3/(2 pi) (s/4) e^{s/4} terms.
pub fn ambiguous_reciprocal_coeff_assembly() -> f64 {
    crate::constants::modular_di_coeff() / 4.0
}

/// Angle at which two geodesics of the upper half-plane, given as circles
/// (center, radius) on the real axis, meet; pi/2 means orthogonal.
pub fn circle_intersection_angle(c1: f64, r1: f64, c2: f64, r2: f64) -> Option<f64> {
    let d = (c1 - c2).abs();
    if d >= r1 + r2 || d <= (r1 - r2).abs() {
        return None;
    }
    let cos = (r1 * r1 + r2 * r2 - d * d) / (2.0 * r1 * r2);
    Some(cos.clamp(-1.0, 1.0).acos().min(PI - cos.clamp(-1.0, 1.0).acos()))
}

//! Command-line front end: argument grammar, dispatch, JSON/CSV/SVG output
//! and exit statuses (0 success, 1 runtime or invariant error, 2 usage or
//! input error).

use std::f64::consts::PI;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::ambiguous::{self, class_census, classify, count_ambiguous, count_ambiguous_reciprocal};
use crate::constants::{self, OrbifoldData, SubsetData};
use crate::divisor::{self, sieve_d, sieve_dk, zeta_k2_eval};
use crate::error::{Error, Result};
use crate::figures::{self, Figure};
use crate::heis::{self, HeisElement, HsPoint, KField};
use crate::hgeo::{self, OkElem};
use crate::numeric::{fit_slope, fmt_real};
use crate::perp::{self, Pair, Threshold};
use crate::ring::{Discriminant, Quaternion};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const FORMAT_VERSION: u32 = 1;
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser, Debug)]
#[command(name = "perpcount", version, about = "Common perpendicular counts in arithmetic hyperbolic orbifolds")]
pub struct Cli {
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads for sharded enumerations (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    pub out: OutFormat,
    /// Report format version; only 1 exists.
    #[arg(long, global = true, default_value_t = FORMAT_VERSION)]
    pub format_version: u32,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Csv,
    Svg,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(untagged)]
pub enum Command {
    /// Divisor-count tables.
    #[command(subcommand)]
    Sieve(SieveCmd),
    /// Perpendicular counts and divisor-sum ratios.
    #[command(subcommand)]
    Count(CountCmd),
    /// Exact identities and expansions.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Asymptotic constants of an orbifold.
    Constants(ConstantsArgs),
    /// Ambiguous and reciprocal classes of PSL2(Z).
    #[command(subcommand)]
    Ambiguous(AmbiguousCmd),
    /// Heisenberg-group distance checks.
    #[command(subcommand)]
    Heisenberg(HeisenbergCmd),
    /// Figures in the modular fundamental domain.
    #[command(subcommand)]
    Plot(PlotCmd),
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(untagged)]
pub enum SieveCmd {
    /// d(k) for 1 <= k <= n.
    Rational {
        #[arg(long)]
        n: usize,
    },
    /// d_K(x) for 0 < N(x) <= radius^2.
    Quadratic {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long)]
        radius: u64,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(untagged)]
pub enum CountCmd {
    /// Modular perpendicular count of one pair of subsets.
    Perp {
        #[arg(long)]
        pair: String,
        /// Length bound: a real, or acosh:<p/q>, or acosh-sqrt:<p/q>.
        #[arg(long)]
        s: String,
    },
    /// Quadratic divisor sum against its main term.
    Bianchi {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long)]
        radius: u64,
    },
    /// Rational ratio at n = 10^6 and Gaussian ratios at the given radii.
    Ratios {
        #[arg(long, value_delimiter = ',', default_values_t = vec![2000u64, 4000])]
        radii: Vec<u64>,
    },
    /// Quadratic fit of count e^{-s} in s.
    Fit {
        #[arg(long, default_value = "dd")]
        pair: String,
        #[arg(long, value_delimiter = ',', default_values_t = vec![10.0f64, 12.0, 14.0])]
        s: Vec<f64>,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(untagged)]
pub enum VerifyCmd {
    /// Delta -> Delta enumeration against the divisor sum, for every k <= max-bc.
    Prop19 {
        #[arg(long)]
        max_bc: u64,
    },
    /// cosh(length) + cos(angle) = 2|ad| on random elements of SL2(O_K).
    Eq78 {
        #[arg(long, allow_hyphen_values = true, default_value_t = -4)]
        disc: i64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Distance expansion between vertical geodesics at offset a.
    Lemma4 {
        #[arg(long, value_delimiter = ',', default_values_t = vec![1.0f64, 2.0, 5.0])]
        a: Vec<f64>,
        #[arg(long, default_value = "2:10")]
        t_range: String,
    },
}

#[derive(Args, Debug, Serialize)]
pub struct ConstantsArgs {
    #[arg(long, default_value = "R")]
    pub kfield: String,
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    /// Imaginary quadratic discriminant for the Bianchi constants.
    #[arg(long, allow_hyphen_values = true)]
    pub disc: Option<i64>,
    /// Orbifold volume; defaults to pi/3 for (R, 2) and to the Humbert volume
    /// for (R, 3) with --disc.
    #[arg(long)]
    pub volume: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub sigma_plus: f64,
    #[arg(long, default_value_t = 1)]
    pub iota_minus: u32,
    #[arg(long, default_value_t = 1)]
    pub iota_plus: u32,
    #[arg(long, default_value_t = 1)]
    pub m_minus: u32,
    #[arg(long, default_value_t = 1)]
    pub m_plus: u32,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(untagged)]
pub enum AmbiguousCmd {
    /// Exact flags of one element of SL2(Z).
    Classify {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        matrix: Vec<i64>,
    },
    /// Ambiguous (or ambiguous reciprocal) classes of length <= s.
    Count {
        #[arg(long)]
        s: String,
        #[arg(long)]
        primitive: bool,
        #[arg(long)]
        reciprocal: bool,
    },
    /// Exact tally of hyperbolic classes up to a trace bound.
    Census {
        #[arg(long)]
        max_trace: i64,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(untagged)]
pub enum HeisenbergCmd {
    /// Distance expansion, Xi volume or horosphere scaling checks
    Check {
        #[arg(long, value_enum)]
        case: HeisCase,
        #[arg(long, default_value = "C")]
        kfield: String,
        #[arg(long, default_value_t = 2)]
        n: u32,
        /// Monte Carlo samples for the xi case.
        #[arg(long, default_value_t = 10_000_000)]
        samples: u64,
        /// Seeded points for the other cases.
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HeisCase {
    Lemma7,
    Lemma8,
    Xi,
    Scaling,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(untagged)]
pub enum PlotCmd {
    /// Folded vertical geodesics ending at the given rationals.
    Divergent {
        #[arg(long, value_delimiter = ',', default_values_t = vec!["3/8".to_string(), "31/80".to_string(), "3/10".to_string()])]
        rational: Vec<String>,
        #[arg(long, default_value_t = figures::DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value = "-2:10", allow_hyphen_values = true)]
        t_range: String,
        #[arg(long, default_value_t = 3.0)]
        ymax: f64,
    },
    /// All divergent geodesics ending at p/q with q <= max-den.
    DivergentFamily {
        #[arg(long, default_value_t = 6)]
        max_den: i64,
        #[arg(long, default_value_t = figures::DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value = "-2:10", allow_hyphen_values = true)]
        t_range: String,
        #[arg(long, default_value_t = 3.0)]
        ymax: f64,
    },
    /// Perpendiculars from ]0, oo[ with bc <= max-bc and axis radius in [rmin, rmax].
    PerpFamily {
        #[arg(long, default_value_t = 300)]
        max_bc: u64,
        #[arg(long, default_value_t = 2.05)]
        rmin: f64,
        #[arg(long, default_value_t = 2.1)]
        rmax: f64,
        #[arg(long, default_value_t = figures::DEFAULT_SAMPLES)]
        samples: usize,
    },
}

/// What a command produced before formatting.
enum Output {
    Json(Value),
    /// JSON results plus an integer table, emitted under "table" in JSON
    /// and as the rows of CSV output.
    Table(Value, Vec<String>, Vec<Vec<i64>>),
    Figure(Figure, Value),
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Invariant(format!("serialization failed: {e}")))
}

fn parse_disc(d: i64) -> Result<Discriminant> {
    Discriminant::new(d)
}

fn parse_range(s: &str) -> Result<(f64, f64)> {
    let bad = || Error::Precondition(format!("range {s:?} must look like a:b with a < b"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let (a, b): (f64, f64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if !(a < b) {
        return Err(bad());
    }
    Ok((a, b))
}

fn parse_fraction(s: &str) -> Result<(i64, i64)> {
    let bad = || Error::Precondition(format!("{s:?} is not a fraction p/q"));
    let (p, q) = s.split_once('/').unwrap_or((s, "1"));
    Ok((p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?))
}

fn real(x: f64) -> Value {
    Value::String(fmt_real(x))
}

fn sieve(cmd: &SieveCmd) -> Result<Output> {
    match *cmd {
        SieveCmd::Rational { n } => {
            if n == 0 {
                return Err(Error::Precondition("n must be positive".into()));
            }
            let t = sieve_d(n)?;
            let rows: Vec<Vec<i64>> = (1..=n).map(|k| vec![k as i64, t.get(k) as i64]).collect();
            let sum: u64 = (1..=n).map(|k| t.get(k) as u64).sum();
            let results = json!({
                "n": n,
                "divisor_count_sum": sum.to_string(),
            });
            Ok(Output::Table(results, vec!["k".into(), "d".into()], rows))
        }
        SieveCmd::Quadratic { disc, radius } => {
            let disc = parse_disc(disc)?;
            let t = sieve_dk(disc, radius)?;
            let mut rows: Vec<Vec<i64>> = t.iter().map(|((x, y), d)| vec![x, y, d as i64]).collect();
            drop(t);
            rows.sort_unstable();
            let z = zeta_k2_eval(disc);
            let results = json!({
                "disc": disc.d(),
                "radius": radius,
                "elements": rows.len(),
                "zeta_k2": {"series": real(z.series), "euler": real(z.euler), "tail_bound": real(z.tail_bound)},
            });
            Ok(Output::Table(results, vec!["x".into(), "y".into(), "d".into()], rows))
        }
    }
}

fn count(cmd: &CountCmd) -> Result<Output> {
    match cmd {
        CountCmd::Perp { pair, s } => {
            let r = perp::count_perp(Pair::parse(pair)?, &Threshold::parse(s)?)?;
            Ok(Output::Json(to_value(&r)?))
        }
        CountCmd::Bianchi { disc, radius } => {
            let r = perp::bianchi_count(parse_disc(*disc)?, *radius)?;
            Ok(Output::Json(to_value(&r)?))
        }
        CountCmd::Ratios { radii } => Ok(Output::Json(to_value(&perp::ratio_reports(radii)?)?)),
        CountCmd::Fit { pair, s } => {
            let pair = Pair::parse(pair)?;
            let mut points = Vec::new();
            let mut reports = Vec::new();
            for &x in s {
                let r = perp::count_perp(pair, &Threshold::Real(x))?;
                points.push((x, r.count as f64));
                reports.push(r);
            }
            let fit = perp::asymptotic_fit(&points, 1.0)?;
            let (coeff, power) = pair.main_term();
            let leading = if power == 2 { fit.c2 } else { fit.c1 };
            Ok(Output::Json(json!({
                "pair": pair.name(),
                "fit": to_value(&fit)?,
                "expected_leading": real(coeff),
                "leading_relative_error": real(leading / coeff - 1.0),
                "counts": to_value(&reports)?,
            })))
        }
    }
}

fn verify(cmd: &VerifyCmd, seed: u64) -> Result<Output> {
    match cmd {
        VerifyCmd::Prop19 { max_bc } => {
            let max_bc = *max_bc;
            if max_bc == 0 {
                return Err(Error::Precondition("max-bc must be positive".into()));
            }
            let records = perp::enumerate_delta_translates(max_bc)?;
            let mut by_k = vec![0u64; max_bc as usize + 1];
            for r in &records {
                by_k[(r.gamma.b * r.gamma.c) as usize] += 1;
            }
            let d = sieve_d(max_bc as usize + 1)?;
            let (mut enumerated, mut divisor_sum) = (0u64, 0u64);
            let mut first_mismatch = None;
            for k in 1..=max_bc as usize {
                enumerated += by_k[k];
                divisor_sum += d.get(k) as u64 * d.get(k + 1) as u64;
                if enumerated != divisor_sum && first_mismatch.is_none() {
                    first_mismatch = Some(k);
                }
            }
            let direct = perp::dd_divisor_sum(max_bc)?;
            let paths_equal = first_mismatch.is_none() && direct == divisor_sum as u128;
            if !paths_equal {
                return Err(Error::Invariant(format!(
                    "enumeration and divisor sum differ (first k = {first_mismatch:?})"
                )));
            }
            Ok(Output::Json(json!({
                "max_bc": max_bc,
                "enumerated": enumerated.to_string(),
                "divisor_sum": divisor_sum.to_string(),
                "paths_equal": paths_equal,
            })))
        }
        VerifyCmd::Eq78 { disc, samples } => {
            let disc = parse_disc(*disc)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut rows = Vec::new();
            let mut max_abs = 0f64;
            while rows.len() < *samples {
                let m = random_sl2(disc, &mut rng)?;
                let z = m.map(|e| hgeo::ok_to_complex(disc, e));
                if z.iter().any(|e| e.norm() == 0.0) {
                    continue;
                }
                let r = hgeo::ad_identity(z)?;
                max_abs = max_abs.max(r.residual.abs());
                rows.push(json!({
                    "matrix": m,
                    "length": real(r.length),
                    "angle": real(r.angle),
                    "lhs": real(r.lhs),
                    "rhs": real(r.rhs),
                    "residual": real(r.residual),
                }));
            }
            Ok(Output::Json(json!({
                "disc": disc.d(),
                "samples": samples,
                "max_abs_residual": real(max_abs),
                "within_1e-9": max_abs <= 1e-9,
                "per_sample": rows,
            })))
        }
        VerifyCmd::Lemma4 { a, t_range } => {
            let (t0, t1) = parse_range(t_range)?;
            let ts: Vec<f64> = (0..=16).map(|i| t0 + (t1 - t0) * i as f64 / 16.0).collect();
            let mut per_a = Vec::new();
            for &a in a {
                let mut res = Vec::new();
                let mut scaled_max = 0f64;
                for &t in &ts {
                    let r = hgeo::lemma4_residual(a, t)?;
                    let scaled = r * a * a * (2.0 * t).exp();
                    scaled_max = scaled_max.max(scaled.abs());
                    res.push(json!({"t": real(t), "residual": real(r), "scaled": real(scaled)}));
                }
                let logs: Vec<f64> = ts.iter().map(|&t| hgeo::lemma4_residual(a, t).map(|r| r.abs().ln())).collect::<Result<_>>()?;
                per_a.push(json!({
                    "a": real(a),
                    "decay_slope": real(fit_slope(&ts, &logs)?),
                    "max_scaled_residual": real(scaled_max),
                    "residuals": res,
                }));
            }
            Ok(Output::Json(json!({ "t_range": [real(t0), real(t1)], "sweeps": per_a })))
        }
    }
}

/// Random element S T^{t_1} ... S T^{t_k} of SL2(O_K) with k in 2..=3 and
/// small nonzero translations.
pub fn random_sl2<R: Rng>(disc: Discriminant, rng: &mut R) -> Result<[OkElem; 4]> {
    let k = rng.gen_range(2..=3);
    let ts: Vec<OkElem> = (0..k)
        .map(|_| loop {
            let x = rng.gen_range(-2..=2);
            let y = if disc == Discriminant::Rational { 0 } else { rng.gen_range(-2..=2) };
            if (x, y) != (0, 0) {
                break (x, y);
            }
        })
        .collect();
    hgeo::sl2_word(disc, &ts)
}

fn constants_cmd(a: &ConstantsArgs) -> Result<Output> {
    let field = KField::parse(&a.kfield)?;
    let n = a.n;
    if n < 2 {
        return Err(Error::Precondition("n must be at least 2".into()));
    }
    let disc = a.disc.map(parse_disc).transpose()?;
    let xi = heis::xi_constant(field, n)?;
    let mut out = Map::new();
    out.insert("kfield".into(), json!(a.kfield));
    out.insert("n".into(), json!(n));
    out.insert("delta".into(), json!(constants::critical_exponent(field, n)));
    out.insert("xi".into(), real(xi.gamma_form));
    out.insert("xi_sphere_form".into(), real(xi.sphere_form));
    let volume = match (a.volume, field, n, disc) {
        (Some(v), ..) => Some(v),
        (None, KField::Real, 2, _) => Some(PI / 3.0),
        (None, KField::Real, 3, Some(d)) => Some(constants::humbert_volume(d)?),
        _ => None,
    };
    if let Some(vol) = volume {
        let orb = OrbifoldData::new(field, n, vol)?;
        let minus = SubsetData::new(0.0, a.iota_minus, a.m_minus)?;
        let plus = SubsetData::new(a.sigma_plus, a.iota_plus, a.m_plus)?;
        out.insert("volume".into(), real(vol));
        out.insert("bm_mass".into(), real(constants::bm_mass(field, n, vol)));
        if field != KField::Real {
            out.insert("bm_mass_gamma_form".into(), real(constants::bm_mass_gamma_form(field, n, vol)));
        }
        out.insert("single_pipeline".into(), real(constants::pipeline_single(&orb, &plus)?));
        out.insert("double_pipeline".into(), real(constants::pipeline_double(&orb, &minus, &plus)?));
        if field == KField::Real {
            out.insert("thm5".into(), real(constants::thm5_coeff(&orb, &plus)?));
            out.insert("thm6".into(), real(constants::thm6_coeff(&orb, &minus, &plus)?));
        } else {
            let (c1, c2) = constants::thm9_coeffs(&orb, &minus, &plus)?;
            out.insert("thm9_single".into(), real(c1));
            out.insert("thm9_double".into(), real(c2));
        }
    }
    if field == KField::Real && n == 2 {
        out.insert(
            "modular".into(),
            json!({
                "dd": real(constants::modular_dd_coeff()),
                "di": real(constants::modular_di_coeff()),
                "ambiguous": real(constants::ambiguous_coeff()),
                "ambiguous_reciprocal": real(constants::ambiguous_reciprocal_coeff()),
            }),
        );
    }
    if let Some(d) = disc {
        let z = zeta_k2_eval(d);
        out.insert(
            "bianchi".into(),
            json!({
                "disc": d.d(),
                "units": d.unit_count(),
                "zeta_k2": real(divisor::zeta_k2(d)?),
                "zeta_k2_euler": real(z.euler),
                "humbert_volume": real(constants::humbert_volume(d)?),
                "c_k": real(constants::c_k(d)?),
                "thm2": real(constants::thm2_coeff(d)?),
                "ideal_divisor_coeff": real(constants::ideal_divisor_coeff(d)?),
                "main_coeff": real(constants::bianchi_main_coeff(d)?),
            }),
        );
    }
    Ok(Output::Json(Value::Object(out)))
}

fn ambiguous_cmd(cmd: &AmbiguousCmd) -> Result<Output> {
    match cmd {
        AmbiguousCmd::Classify { matrix } => {
            if matrix.len() != 4 {
                return Err(Error::Precondition("--matrix takes four entries a,b,c,d".into()));
            }
            let g = ambiguous::m(matrix[0] as i128, matrix[1] as i128, matrix[2] as i128, matrix[3] as i128);
            Ok(Output::Json(to_value(&classify(&g)?)?))
        }
        AmbiguousCmd::Count { s, primitive, reciprocal } => {
            let t = Threshold::parse(s)?;
            let r = if *reciprocal { count_ambiguous_reciprocal(&t, *primitive)? } else { count_ambiguous(&t, *primitive)? };
            Ok(Output::Json(to_value(&r)?))
        }
        AmbiguousCmd::Census { max_trace } => {
            if *max_trace < 3 {
                return Err(Error::Precondition("max-trace must be at least 3".into()));
            }
            Ok(Output::Json(to_value(&class_census(*max_trace as i128)?)?))
        }
    }
}

fn random_element<R: Rng>(field: KField, n: u32, rng: &mut R, scale: f64) -> Result<HeisElement> {
    let mut q = |imaginary_only: bool| {
        let mut c = [0.0; 4];
        let k = if field == KField::Complex { 2 } else { 4 };
        for (i, x) in c.iter_mut().enumerate().take(k) {
            if !(imaginary_only && i == 0) {
                *x = rng.gen_range(-scale..scale);
            }
        }
        Quaternion(c)
    };
    let zeta: Vec<Quaternion> = (1..n).map(|_| q(false)).collect();
    let u = q(true);
    HeisElement::new(field, zeta, u)
}

fn heisenberg(cmd: &HeisenbergCmd, seed: u64) -> Result<Output> {
    let HeisenbergCmd::Check { case, kfield, n, samples, points } = cmd;
    let field = KField::parse(kfield)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match case {
        HeisCase::Xi => {
            let forms = heis::xi_constant(field, *n)?;
            let mc = heis::xi_region_volume_mc(field, *n, *samples, seed)?;
            let rel = mc.volume / forms.gamma_form - 1.0;
            Ok(Output::Json(json!({
                "kfield": kfield, "n": n,
                "gamma_form": real(forms.gamma_form),
                "sphere_form": real(forms.sphere_form),
                "forms_agree": (forms.gamma_form - forms.sphere_form).abs() <= 1e-12 * forms.gamma_form,
                "mc_volume": real(mc.volume),
                "mc_std_err": real(mc.std_err),
                "mc_samples": mc.samples,
                "relative_error": real(rel),
                "within_1pct": rel.abs() <= 0.01,
            })))
        }
        HeisCase::Lemma7 => {
            let mut worst = 0f64;
            for _ in 0..*points {
                let g = random_element(field, *n, &mut rng, 2.0)?;
                let t = rng.gen_range(0.05..3.0);
                let p = HsPoint { g: g.clone(), t };
                let (rho, t_proj) = heis::dist_to_vertical_axis_k(&p)?;
                let center = HsPoint { g: HeisElement::identity(field, *n as usize)?, t: t_proj };
                let res = heis::sphere_equation_residual(&center, &p, rho)?;
                worst = worst.max(res.abs() / (4.0 * t_proj * t * rho.cosh().powi(2)));
            }
            Ok(Output::Json(json!({ "points": points, "max_relative_sphere_residual": real(worst) })))
        }
        HeisCase::Lemma8 => {
            let ss: Vec<f64> = (0..=12).map(|i| 2.0 + 0.5 * i as f64).collect();
            let mut slopes = Vec::new();
            let mut scaled_max = 0f64;
            let mut used = 0;
            while used < *points {
                let g = random_element(field, *n, &mut rng, 3.0)?;
                let dc = g.cygan_norm();
                if !(1.0..=10.0).contains(&dc) {
                    continue;
                }
                used += 1;
                let dp = g.cygan_mod_norm() / 2f64.sqrt();
                let mut logs = Vec::new();
                for &s in &ss {
                    let r = heis::lemma8_residual(s, &g)?;
                    scaled_max = scaled_max.max((r * dp * dp * (2.0 * s).exp()).abs());
                    logs.push(r.abs().ln());
                }
                slopes.push(fit_slope(&ss, &logs)?);
            }
            let (lo, hi) = slopes.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
            Ok(Output::Json(json!({
                "points": points,
                "s_range": [real(2.0), real(8.0)],
                "min_slope": real(lo),
                "max_slope": real(hi),
                "max_scaled_residual": real(scaled_max),
            })))
        }
        HeisCase::Scaling => {
            let mut all = true;
            for _ in 0..*points {
                let g1 = random_element(field, *n, &mut rng, 2.0)?;
                let g2 = random_element(field, *n, &mut rng, 2.0)?;
                let t1 = rng.gen_range(0.1..2.0);
                let t2 = t1 * rng.gen_range(1.0..5.0);
                all &= heis::horosphere_scaling_check(t1, t2, &g1, &g2)?;
            }
            Ok(Output::Json(json!({ "points": points, "all_scale": all })))
        }
    }
}

fn plot(cmd: &PlotCmd) -> Result<Output> {
    match cmd {
        PlotCmd::Divergent { rational, samples, t_range, ymax } => {
            let rs: Vec<(i64, i64)> = rational.iter().map(|s| parse_fraction(s)).collect::<Result<_>>()?;
            let fig = figures::divergent_figure(&rs, parse_range(t_range)?, *samples, *ymax)?;
            let params = json!({"rationals": rational, "samples": samples});
            Ok(Output::Figure(fig, params))
        }
        PlotCmd::DivergentFamily { max_den, samples, t_range, ymax } => {
            if *max_den < 1 {
                return Err(Error::Precondition("max-den must be positive".into()));
            }
            let rs = figures::rationals_up_to(*max_den);
            let fig = figures::divergent_figure(&rs, parse_range(t_range)?, *samples, *ymax)?;
            Ok(Output::Figure(fig, json!({"max_den": max_den, "geodesics": rs.len()})))
        }
        PlotCmd::PerpFamily { max_bc, rmin, rmax, samples } => {
            let family = figures::perpendicular_family(*max_bc, *rmin, *rmax)?;
            let fig = figures::perpendicular_family_figure(*max_bc, *rmin, *rmax, *samples)?;
            Ok(Output::Figure(fig, json!({"perpendiculars": to_value(&family)?})))
        }
    }
}

fn command_name(c: &Command) -> String {
    let sub = match c {
        Command::Sieve(SieveCmd::Rational { .. }) => "sieve rational",
        Command::Sieve(SieveCmd::Quadratic { .. }) => "sieve quadratic",
        Command::Count(CountCmd::Perp { .. }) => "count perp",
        Command::Count(CountCmd::Bianchi { .. }) => "count bianchi",
        Command::Count(CountCmd::Ratios { .. }) => "count ratios",
        Command::Count(CountCmd::Fit { .. }) => "count fit",
        Command::Verify(VerifyCmd::Prop19 { .. }) => "verify prop19",
        Command::Verify(VerifyCmd::Eq78 { .. }) => "verify eq78",
        Command::Verify(VerifyCmd::Lemma4 { .. }) => "verify lemma4",
        Command::Constants(_) => "constants",
        Command::Ambiguous(AmbiguousCmd::Classify { .. }) => "ambiguous classify",
        Command::Ambiguous(AmbiguousCmd::Count { .. }) => "ambiguous count",
        Command::Ambiguous(AmbiguousCmd::Census { .. }) => "ambiguous census",
        Command::Heisenberg(_) => "heisenberg check",
        Command::Plot(PlotCmd::Divergent { .. }) => "plot divergent",
        Command::Plot(PlotCmd::DivergentFamily { .. }) => "plot divergent-family",
        Command::Plot(PlotCmd::PerpFamily { .. }) => "plot perp-family",
    };
    sub.to_string()
}

/// Input errors exit with 2, everything else with 1.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Precondition(_)
        | Error::InvalidDiscriminant(_)
        | Error::DetNotOne
        | Error::ZeroMatrix
        | Error::Range(_) => 2,
        _ => 1,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidDiscriminant(_) => "invalid_discriminant",
        Error::ZeroMatrix => "zero_matrix",
        Error::DetNotOne => "det_not_one",
        Error::ZeroDivisor => "zero_divisor",
        Error::Precondition(_) => "precondition",
        Error::LinkedGeodesics => "linked_geodesics",
        Error::SharedEndpoint => "shared_endpoint",
        Error::Invariant(_) => "invariant",
        Error::MemoryBound { .. } => "memory_bound",
        Error::ZetaMismatch { .. } => "zeta_mismatch",
        Error::Degenerate => "degenerate",
        Error::Range(_) => "range",
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Array(_) => out.push((prefix.to_string(), v.to_string())),
        _ => out.push((prefix.to_string(), v.to_string())),
    }
}

/// One header row and one value row with dotted keys.
fn flat_csv(v: &Value) -> String {
    let mut cells = Vec::new();
    flatten("", v, &mut cells);
    let header: Vec<String> = cells.iter().map(|(k, _)| csv_field(k)).collect();
    let row: Vec<String> = cells.iter().map(|(_, v)| csv_field(v)).collect();
    format!("{}\n{}\n", header.join(","), row.join(","))
}

/// Report envelope; fields in the same (sorted) order as the JSON maps.
#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    format_version: u32,
    params: &'a Value,
    results: Body<'a>,
    timing_ms: f64,
    tool_version: &'a str,
}

/// Results with an integer table serialized straight from the rows, which
/// keeps large sieve tables out of the Value tree.
#[derive(Serialize)]
struct WithTable<'a> {
    #[serde(flatten)]
    results: &'a Value,
    table: &'a [Vec<i64>],
}

#[derive(Serialize)]
#[serde(untagged)]
enum Body<'a> {
    Plain(&'a Value),
    Table(WithTable<'a>),
}

/// Parses argv, runs the command, writes the report to stdout and returns
/// the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (code, text) = execute(&cli);
    print!("{text}");
    code
}

/// Runs a parsed command and returns (exit status, stdout text).
pub fn execute(cli: &Cli) -> (i32, String) {
    let name = command_name(&cli.command);
    let fail = |code: i32, e: &Error| {
        let v = json!({
            "tool_version": TOOL_VERSION,
            "command": name,
            "error": {"kind": error_kind(e), "message": e.to_string()},
        });
        (code, format!("{}\n", serde_json::to_string_pretty(&v).unwrap()))
    };
    if cli.format_version != FORMAT_VERSION {
        return fail(2, &Error::Precondition(format!("unsupported format version {}", cli.format_version)));
    }
    let is_plot = matches!(cli.command, Command::Plot(_));
    if cli.out == OutFormat::Svg && !is_plot {
        return fail(2, &Error::Precondition("svg output is only available for plot commands".into()));
    }
    let start = Instant::now();
    let result = match cli.threads {
        Some(0) => Err(Error::Precondition("threads must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Invariant(format!("thread pool: {e}")))
            .and_then(|pool| pool.install(|| dispatch(cli))),
        None => dispatch(cli),
    };
    let output = match result {
        Ok(o) => o,
        Err(e) => return fail(exit_code(&e), &e),
    };
    let timing_ms = start.elapsed().as_secs_f64() * 1e3;
    let params = params_of(cli);
    let envelope = |results: Body| {
        let v = Envelope { command: &name, format_version: FORMAT_VERSION, params: &params, results, timing_ms, tool_version: TOOL_VERSION };
        format!("{}\n", serde_json::to_string_pretty(&v).unwrap())
    };
    let text = match (cli.out, output) {
        (OutFormat::Json, Output::Json(v)) => envelope(Body::Plain(&v)),
        (OutFormat::Json, Output::Table(v, _, rows)) => envelope(Body::Table(WithTable { results: &v, table: &rows })),
        (OutFormat::Json, Output::Figure(f, extra)) => {
            let fv = match to_value(&f) {
                Ok(v) => v,
                Err(e) => return fail(1, &e),
            };
            envelope(Body::Plain(&json!({"figure": fv, "details": extra})))
        }
        (OutFormat::Csv, Output::Json(v)) => flat_csv(&v),
        (OutFormat::Csv, Output::Table(_, header, rows)) => {
            let mut s = header.join(",");
            s.push('\n');
            for r in rows {
                let cells: Vec<String> = r.iter().map(|c| c.to_string()).collect();
                s.push_str(&cells.join(","));
                s.push('\n');
            }
            s
        }
        (OutFormat::Csv, Output::Figure(f, _)) => figures::emit_csv(&f),
        (OutFormat::Svg, Output::Figure(f, _)) => figures::emit_svg(&f),
        (OutFormat::Svg, _) => unreachable!("rejected above"),
    };
    (0, text)
}

fn dispatch(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Sieve(c) => sieve(c),
        Command::Count(c) => count(c),
        Command::Verify(c) => verify(c, cli.seed),
        Command::Constants(a) => constants_cmd(a),
        Command::Ambiguous(c) => ambiguous_cmd(c),
        Command::Heisenberg(c) => heisenberg(c, cli.seed),
        Command::Plot(c) => plot(c),
    }
}

fn params_of(cli: &Cli) -> Value {
    let mut v = to_value(&cli.command).unwrap_or(Value::Null);
    if let Value::Object(m) = &mut v {
        m.insert("seed".into(), json!(cli.seed));
        m.insert("threads".into(), json!(cli.threads));
    }
    v
}

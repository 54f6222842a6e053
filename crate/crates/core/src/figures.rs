//! Folding into the standard fundamental domain of PSL2(Z), geodesic
//! sampling, and deterministic SVG/CSV emission of the modular figures.

use std::fmt::Write as _;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hgeo::{GeodesicBP, Ideal};
use crate::numeric::arcosh;
use crate::perp::enumerate_delta_translates;

/// Generators z -> z + n and z -> -1/z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Gen {
    T(i64),
    S,
}

impl Gen {
    pub fn apply(&self, z: (f64, f64)) -> (f64, f64) {
        match *self {
            Gen::T(n) => (z.0 + n as f64, z.1),
            Gen::S => {
                let r2 = z.0 * z.0 + z.1 * z.1;
                (-z.0 / r2, z.1 / r2)
            }
        }
    }

    pub fn inverse(&self) -> Gen {
        match *self {
            Gen::T(n) => Gen::T(-n),
            Gen::S => Gen::S,
        }
    }
}

/// Word applied left to right: the folded point is w_k(...w_1(z)).
pub type Word = Vec<Gen>;

pub fn apply_word(w: &[Gen], z: (f64, f64)) -> (f64, f64) {
    w.iter().fold(z, |z, g| g.apply(z))
}

pub fn apply_inverse_word(w: &[Gen], z: (f64, f64)) -> (f64, f64) {
    w.iter().rev().fold(z, |z, g| g.inverse().apply(z))
}

const FOLD_GUARD: usize = 10_000;

/// Reduce z into {-1/2 <= Re z < 1/2, |z| >= 1}, with points of the unit
/// circle of positive real part sent to their mirror image.
pub fn fold_point(z: (f64, f64)) -> Result<((f64, f64), Word)> {
    if !(z.1 > 0.0) || !z.0.is_finite() || !z.1.is_finite() {
        return Err(Error::Precondition("fold_point needs Im z > 0".into()));
    }
    let mut z = z;
    let mut word = Vec::new();
    for _ in 0..FOLD_GUARD {
        let n = -(z.0 + 0.5).floor() as i64;
        if n != 0 {
            z = Gen::T(n).apply(z);
            word.push(Gen::T(n));
        }
        let r2 = z.0 * z.0 + z.1 * z.1;
        if r2 < 1.0 || (r2 == 1.0 && z.0 > 0.0) {
            z = Gen::S.apply(z);
            word.push(Gen::S);
        } else {
            return Ok((z, word));
        }
    }
    Err(Error::Invariant(format!("folding did not terminate in {FOLD_GUARD} steps")))
}

/// Point at signed hyperbolic arclength t along a geodesic, oriented from g.a
/// to g.b and measured from height 1 on a vertical line, from the apex on a
/// semicircle.
pub fn geodesic_point(g: &GeodesicBP, t: f64) -> Result<(f64, f64)> {
    let re = |z: Ideal| match z {
        Ideal::Finite(c) if c.im.abs() < 1e-12 => Ok(Some(c.re)),
        Ideal::Finite(_) => Err(Error::Precondition("geodesic of H^2 needs real endpoints".into())),
        Ideal::Infinity => Ok(None),
    };
    Ok(match (re(g.a)?, re(g.b)?) {
        (Some(a), None) => (a, t.exp()),
        (None, Some(b)) => (b, (-t).exp()),
        (Some(a), Some(b)) => {
            let (c, r) = ((a + b) / 2.0, (b - a) / 2.0);
            (c + r * t.tanh(), r.abs() / t.cosh())
        }
        (None, None) => return Err(Error::Precondition("geodesic endpoints coincide".into())),
    })
}

/// Sampled geodesic folded into the fundamental domain, one polyline per
/// maximal run of samples sharing a folding word.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FoldedPolyline {
    pub points: Vec<(f64, f64)>,
    pub word: Word,
}

pub const DEFAULT_SAMPLES: usize = 512;

/// Samples uniformly in hyperbolic arclength over t_range.
pub fn fold_geodesic(g: &GeodesicBP, t_range: (f64, f64), samples: usize) -> Result<Vec<FoldedPolyline>> {
    if samples < 2 || !(t_range.1 > t_range.0) {
        return Err(Error::Precondition("need at least 2 samples over a nonempty range".into()));
    }
    let mut out: Vec<FoldedPolyline> = Vec::new();
    for i in 0..samples {
        let t = t_range.0 + (t_range.1 - t_range.0) * i as f64 / (samples - 1) as f64;
        let (z, word) = fold_point(geodesic_point(g, t)?)?;
        match out.last_mut() {
            Some(p) if p.word == word => p.points.push(z),
            _ => out.push(FoldedPolyline { points: vec![z], word }),
        }
    }
    Ok(out)
}

/// Vertical geodesic from oo down to p/q.
pub fn divergent_geodesic(p: i64, q: i64) -> Result<GeodesicBP> {
    if q <= 0 || p.gcd(&q) != 1 {
        return Err(Error::Precondition(format!("{p}/{q} is not a reduced fraction with q > 0")));
    }
    Ok(GeodesicBP { a: Ideal::Infinity, b: Ideal::real(p as f64 / q as f64) })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Window {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Window {
    /// The fundamental domain with a truncated cusp.
    pub fn domain(ymax: f64) -> Self {
        Window { xmin: -0.6, xmax: 0.6, ymin: 0.0, ymax }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Series {
    pub name: String,
    pub color: String,
    pub polylines: Vec<Vec<(f64, f64)>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Marker {
    pub x: f64,
    pub y: f64,
    pub color: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Figure {
    pub title: String,
    pub window: Window,
    pub width: u32,
    pub draw_domain: bool,
    pub series: Vec<Series>,
    pub markers: Vec<Marker>,
}

/// Series colors, cycled.
pub const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

fn height_px(w: &Window, width: u32) -> u32 {
    ((w.ymax - w.ymin) / (w.xmax - w.xmin) * width as f64).round().max(1.0) as u32
}

/// Pieces of a polyline inside the window's vertical range.
fn clip(poly: &[(f64, f64)], w: &Window) -> Vec<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    for &p in poly {
        if p.1 <= w.ymax && p.1 >= w.ymin {
            cur.push(p);
        } else if !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// SVG 1.1 with path elements only and coordinates to 6 decimals.
pub fn emit_svg(fig: &Figure) -> String {
    let w = &fig.window;
    let (wp, hp) = (fig.width, height_px(w, fig.width));
    let sx = wp as f64 / (w.xmax - w.xmin);
    let sy = hp as f64 / (w.ymax - w.ymin);
    let px = |p: (f64, f64)| ((p.0 - w.xmin) * sx, (w.ymax - p.1) * sy);
    let path_d = |poly: &[(f64, f64)]| {
        let mut d = String::new();
        for (i, &p) in poly.iter().enumerate() {
            let (x, y) = px(p);
            let _ = write!(d, "{}{:.6} {:.6}", if i == 0 { "M" } else { " L" }, x, y);
        }
        d
    };
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{wp}\" height=\"{hp}\" viewBox=\"0 0 {wp} {hp}\">"
    );
    let _ = writeln!(s, "<title>{}</title>", xml_escape(&fig.title));
    if fig.draw_domain {
        let top = w.ymax;
        let base = 3f64.sqrt() / 2.0;
        let arc: Vec<(f64, f64)> = (0..=64)
            .map(|i| {
                let th = std::f64::consts::PI * (2.0 / 3.0 - i as f64 / 192.0);
                (th.cos(), th.sin())
            })
            .collect();
        for poly in [vec![(-0.5, top), (-0.5, base)], arc, vec![(0.5, base), (0.5, top)]] {
            let _ = writeln!(s, "<path d=\"{}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>", path_d(&poly));
        }
    }
    for series in &fig.series {
        for poly in &series.polylines {
            for piece in clip(poly, w) {
                if piece.len() < 2 {
                    continue;
                }
                let _ = writeln!(
                    s,
                    "<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>",
                    path_d(&piece),
                    series.color
                );
            }
        }
    }
    for mk in &fig.markers {
        let (x, y) = px((mk.x, mk.y));
        let _ = writeln!(
            s,
            "<path d=\"M{:.6} {:.6} m-3 0 a3 3 0 1 0 6 0 a3 3 0 1 0 -6 0\" fill=\"{}\"/>",
            x, y, mk.color
        );
    }
    s.push_str("</svg>\n");
    s
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// CSV rows series,polyline,index,x,y.
pub fn emit_csv(fig: &Figure) -> String {
    let mut s = String::from("series,polyline,index,x,y\n");
    for series in &fig.series {
        for (j, poly) in series.polylines.iter().enumerate() {
            for (i, p) in poly.iter().enumerate() {
                let _ = writeln!(s, "{},{},{},{:.17e},{:.17e}", series.name, j, i, p.0, p.1);
            }
        }
    }
    s
}

pub const DEFAULT_T_RANGE: (f64, f64) = (-2.0, 10.0);

/// Divergent geodesics ending at the given rationals, folded.
pub fn divergent_figure(rationals: &[(i64, i64)], t_range: (f64, f64), samples: usize, ymax: f64) -> Result<Figure> {
    let mut series = Vec::new();
    for (k, &(p, q)) in rationals.iter().enumerate() {
        let g = divergent_geodesic(p, q)?;
        let polys = fold_geodesic(&g, t_range, samples)?;
        series.push(Series {
            name: format!("{p}/{q}"),
            color: PALETTE[k % PALETTE.len()].to_string(),
            polylines: polys.into_iter().map(|p| p.points).collect(),
        });
    }
    Ok(Figure {
        title: "divergent geodesics".into(),
        window: Window::domain(ymax),
        width: 600,
        draw_domain: true,
        series,
        markers: Vec::new(),
    })
}

/// Reduced p/q in [0, 1) with 1 <= q <= max_den.
pub fn rationals_up_to(max_den: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for q in 1..=max_den {
        for p in 0..q {
            if p.gcd(&q) == 1 {
                out.push((p, q));
            }
        }
    }
    out
}

/// One common perpendicular from ]0, oo[ to gamma ]0, oo[.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerpArc {
    pub gamma: [i64; 4],
    /// Euclidean radius sqrt(ab/cd) of the axis of [gamma, W].
    pub radius: f64,
    pub length: f64,
}

/// Perpendiculars with bc <= max_bc and axis radius in [rmin, rmax].
pub fn perpendicular_family(max_bc: u64, rmin: f64, rmax: f64) -> Result<Vec<PerpArc>> {
    Ok(enumerate_delta_translates(max_bc)?
        .into_iter()
        .filter(|r| r.foot_height >= rmin && r.foot_height <= rmax)
        .map(|r| PerpArc {
            gamma: [r.gamma.a, r.gamma.b, r.gamma.c, r.gamma.d],
            radius: r.foot_height,
            length: r.length,
        })
        .collect())
}

/// Point at arclength t from the apex (0, r) along the circle |z| = r,
/// toward positive real part.
pub fn perp_arc_point(r: f64, t: f64) -> (f64, f64) {
    (r * t.tanh(), r / t.cosh())
}

pub fn perpendicular_family_figure(max_bc: u64, rmin: f64, rmax: f64, samples: usize) -> Result<Figure> {
    if samples < 2 {
        return Err(Error::Precondition("need at least 2 samples".into()));
    }
    let family = perpendicular_family(max_bc, rmin, rmax)?;
    let mut series = Vec::new();
    let mut markers = Vec::new();
    for (k, arc) in family.iter().enumerate() {
        let mut polys: Vec<FoldedPolyline> = Vec::new();
        for i in 0..samples {
            let t = arc.length * i as f64 / (samples - 1) as f64;
            let (z, word) = fold_point(perp_arc_point(arc.radius, t))?;
            match polys.last_mut() {
                Some(p) if p.word == word => p.points.push(z),
                _ => polys.push(FoldedPolyline { points: vec![z], word }),
            }
        }
        let color = PALETTE[k % PALETTE.len()].to_string();
        let start = fold_point((0.0, arc.radius))?.0;
        markers.push(Marker { x: start.0, y: start.1, color: color.clone() });
        series.push(Series {
            name: format!("({} {}; {} {})", arc.gamma[0], arc.gamma[1], arc.gamma[2], arc.gamma[3]),
            color,
            polylines: polys.into_iter().map(|p| p.points).collect(),
        });
    }
    Ok(Figure {
        title: format!("common perpendiculars, bc <= {max_bc}, {rmin} <= r <= {rmax}"),
        window: Window::domain(rmax.max(2.0) + 0.5),
        width: 600,
        draw_domain: true,
        series,
        markers,
    })
}

/// Smallest Euclidean distance from `target` to the samples of the polylines.
pub fn closest_sample(polys: &[FoldedPolyline], target: (f64, f64)) -> f64 {
    polys
        .iter()
        .flat_map(|p| p.points.iter())
        .map(|p| ((p.0 - target.0).powi(2) + (p.1 - target.1).powi(2)).sqrt())
        .fold(f64::INFINITY, f64::min)
}

/// Hyperbolic length of the perpendicular with cosh = 1 + 2bc.
pub fn perp_length_from_bc(bc: u64) -> f64 {
    arcosh(1.0 + 2.0 * bc as f64)
}

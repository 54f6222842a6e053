//! Small numeric helpers: stable arcosh, Gamma at half-integers, compensated
//! sums, integer square roots and tiny least-squares solves.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// ln(x + sqrt(x^2 - 1)) with a series near 1.
pub fn arcosh(x: f64) -> f64 {
    let e = x - 1.0;
    if e < 0.0 {
        return if e > -1e-14 { 0.0 } else { f64::NAN };
    }
    if e < 1e-8 {
        // arcosh(1+e) = sqrt(2e) (1 - e/12 + 3e^2/160 - ...)
        return (2.0 * e).sqrt() * (1.0 - e / 12.0 + 3.0 * e * e / 160.0);
    }
    if x > 1e150 {
        return (2.0 * x).ln();
    }
    (x + (e * (x + 1.0)).sqrt()).ln()
}

/// Gamma function; exact products at positive integers and half-integers.
pub fn gamma(x: f64) -> f64 {
    let twice = 2.0 * x;
    if x > 0.0 && twice.fract() == 0.0 && twice <= 340.0 {
        let (mut v, mut t) = if twice as i64 % 2 == 0 { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
        while t < x {
            v *= t;
            t += 1.0;
        }
        return v;
    }
    statrs::function::gamma::gamma(x)
}

/// Volume of the unit sphere S^k in R^{k+1}.
pub fn sphere_volume(k: u32) -> f64 {
    let m = (k + 1) as f64;
    2.0 * PI.powf(m / 2.0) / gamma(m / 2.0)
}

/// Volume of the unit ball in R^k.
pub fn ball_volume(k: u32) -> f64 {
    let m = k as f64;
    PI.powf(m / 2.0) / gamma(m / 2.0 + 1.0)
}

/// Neumaier (improved Kahan) summation.
#[derive(Default, Clone, Copy, Debug)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn isqrt_i128(n: i128) -> Option<i128> {
    if n < 0 {
        None
    } else {
        Some(isqrt_u128(n as u128) as i128)
    }
}

/// Exact square root when n is a perfect square.
pub fn exact_sqrt(n: i128) -> Option<i128> {
    let r = isqrt_i128(n)?;
    (r * r == n).then_some(r)
}

/// Solve the normal equations of a linear least-squares problem with `k` basis
/// functions by Gaussian elimination with partial pivoting.
pub fn least_squares(rows: &[Vec<f64>], rhs: &[f64]) -> Result<Vec<f64>> {
    let k = rows.first().map_or(0, |r| r.len());
    if k == 0 || rows.len() < k {
        return Err(Error::Degenerate);
    }
    let mut a = vec![vec![0.0; k + 1]; k];
    for (r, &y) in rows.iter().zip(rhs) {
        for i in 0..k {
            for j in 0..k {
                a[i][j] += r[i] * r[j];
            }
            a[i][k] += r[i] * y;
        }
    }
    let scale = a.iter().flat_map(|r| r[..k].iter()).fold(0.0f64, |m, v| m.max(v.abs()));
    for col in 0..k {
        let piv = (col..k)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[piv][col].abs() <= scale * 1e-14 {
            return Err(Error::Degenerate);
        }
        a.swap(col, piv);
        for r in 0..k {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..=k {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    Ok((0..k).map(|i| a[i][k] / a[i][i]).collect())
}

/// Slope of the least-squares line through (x, y).
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    let rows: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x, 1.0]).collect();
    Ok(least_squares(&rows, ys)?[0])
}

/// Scientific notation with 17 significant digits (round-trips any f64).
pub fn fmt_real(x: f64) -> String {
    if x.is_finite() {
        format!("{:.16e}", x)
    } else {
        format!("{x}")
    }
}

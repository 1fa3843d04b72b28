//! Compactly supported nonnegative weight profiles `h`.
//!
//! The analytic kinds are probability densities on their support; tables
//! are piecewise-linear and keep whatever mass their values give them.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProfileKind {
    Uniform { a: f64, b: f64 },
    /// Symmetric triangle with its peak at the midpoint of `[a, b]`.
    Triangular { a: f64, b: f64 },
    TruncatedGaussian { mean: f64, sigma: f64, a: f64, b: f64 },
    /// Piecewise-linear interpolation of `values` at strictly increasing `knots`.
    Table { knots: Vec<f64>, values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProfileKind", into = "ProfileKind")]
pub struct WeightProfile {
    kind: ProfileKind,
    mass: f64,
    // standard normal CDF at the truncation points, cached for sampling
    gauss_cdf: (f64, f64),
}

impl TryFrom<ProfileKind> for WeightProfile {
    type Error = Error;

    fn try_from(kind: ProfileKind) -> Result<Self> {
        WeightProfile::new(kind)
    }
}

impl From<WeightProfile> for ProfileKind {
    fn from(p: WeightProfile) -> Self {
        p.kind
    }
}

fn std_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal")
}

impl WeightProfile {
    pub fn new(kind: ProfileKind) -> Result<Self> {
        let bad = |msg: &str| Err(Error::InvalidProfile(msg.to_string()));
        let interval_ok = |a: f64, b: f64| a.is_finite() && b.is_finite() && a < b;
        let mut gauss_cdf = (0.0, 1.0);
        let mass = match &kind {
            ProfileKind::Uniform { a, b } | ProfileKind::Triangular { a, b } => {
                if !interval_ok(*a, *b) {
                    return bad("support must be a finite interval with a < b");
                }
                1.0
            }
            ProfileKind::TruncatedGaussian { mean, sigma, a, b } => {
                if !interval_ok(*a, *b) || !(*sigma > 0.0) || !mean.is_finite() {
                    return bad("truncated gaussian needs sigma > 0 and a finite support a < b");
                }
                let n = std_normal();
                gauss_cdf = (n.cdf((a - mean) / sigma), n.cdf((b - mean) / sigma));
                if !(gauss_cdf.1 - gauss_cdf.0 > 0.0) {
                    return bad("truncation window carries no gaussian mass");
                }
                1.0
            }
            ProfileKind::Table { knots, values } => {
                if knots.len() < 2 || knots.len() != values.len() {
                    return bad("table needs at least two knots and one value per knot");
                }
                if knots.iter().any(|k| !k.is_finite()) || knots.windows(2).any(|w| w[1] <= w[0]) {
                    return bad("table knots must be finite and strictly increasing");
                }
                if values.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
                    return bad("table values must be finite and nonnegative");
                }
                knots
                    .windows(2)
                    .zip(values.windows(2))
                    .map(|(k, v)| 0.5 * (k[1] - k[0]) * (v[0] + v[1]))
                    .sum()
            }
        };
        Ok(Self { kind, mass, gauss_cdf })
    }

    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        Self::new(ProfileKind::Uniform { a, b })
    }

    pub fn triangular(a: f64, b: f64) -> Result<Self> {
        Self::new(ProfileKind::Triangular { a, b })
    }

    pub fn truncated_gaussian(mean: f64, sigma: f64, a: f64, b: f64) -> Result<Self> {
        Self::new(ProfileKind::TruncatedGaussian { mean, sigma, a, b })
    }

    pub fn table(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::new(ProfileKind::Table { knots, values })
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    pub fn support(&self) -> (f64, f64) {
        match &self.kind {
            ProfileKind::Uniform { a, b }
            | ProfileKind::Triangular { a, b }
            | ProfileKind::TruncatedGaussian { a, b, .. } => (*a, *b),
            ProfileKind::Table { knots, .. } => (knots[0], knots[knots.len() - 1]),
        }
    }

    /// `∫ h`.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Points inside the support where `h` has a kink or jump.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.kind {
            ProfileKind::Triangular { a, b } => vec![0.5 * (a + b)],
            ProfileKind::Table { knots, .. } => knots[1..knots.len() - 1].to_vec(),
            _ => Vec::new(),
        }
    }

    pub fn density(&self, t: f64) -> f64 {
        let (lo, hi) = self.support();
        if !(lo <= t && t <= hi) {
            return 0.0;
        }
        match &self.kind {
            ProfileKind::Uniform { a, b } => 1.0 / (b - a),
            ProfileKind::Triangular { a, b } => {
                let half = 0.5 * (b - a);
                let peak = 1.0 / half;
                peak * (1.0 - (t - 0.5 * (a + b)).abs() / half)
            }
            ProfileKind::TruncatedGaussian { mean, sigma, .. } => {
                let z = (t - mean) / sigma;
                let norm = (2.0 * std::f64::consts::PI).sqrt() * sigma * (self.gauss_cdf.1 - self.gauss_cdf.0);
                (-0.5 * z * z).exp() / norm
            }
            ProfileKind::Table { knots, values } => {
                let i = knots.partition_point(|&k| k <= t).clamp(1, knots.len() - 1);
                let (k0, k1) = (knots[i - 1], knots[i]);
                let f = (t - k0) / (k1 - k0);
                values[i - 1] + f * (values[i] - values[i - 1])
            }
        }
    }

    pub fn sup(&self) -> f64 {
        match &self.kind {
            ProfileKind::Uniform { a, b } => 1.0 / (b - a),
            ProfileKind::Triangular { a, b } => 2.0 / (b - a),
            ProfileKind::TruncatedGaussian { mean, a, b, .. } => self.density(mean.clamp(*a, *b)),
            ProfileKind::Table { values, .. } => values.iter().copied().fold(0.0, f64::max),
        }
    }

    /// `∫_{-∞}^{t} h`.
    pub fn cdf(&self, t: f64) -> f64 {
        let (lo, hi) = self.support();
        if t <= lo {
            return 0.0;
        }
        if t >= hi {
            return self.mass;
        }
        match &self.kind {
            ProfileKind::Uniform { a, b } => (t - a) / (b - a),
            ProfileKind::Triangular { a, b } => {
                let mid = 0.5 * (a + b);
                let width = b - a;
                if t <= mid {
                    2.0 * (t - a).powi(2) / width.powi(2)
                } else {
                    1.0 - 2.0 * (b - t).powi(2) / width.powi(2)
                }
            }
            ProfileKind::TruncatedGaussian { mean, sigma, .. } => {
                let (ca, cb) = self.gauss_cdf;
                (std_normal().cdf((t - mean) / sigma) - ca) / (cb - ca)
            }
            ProfileKind::Table { knots, values } => {
                let mut acc = 0.0;
                for i in 1..knots.len() {
                    let (k0, k1) = (knots[i - 1], knots[i]);
                    if t >= k1 {
                        acc += 0.5 * (k1 - k0) * (values[i - 1] + values[i]);
                    } else {
                        let d = t - k0;
                        let slope = (values[i] - values[i - 1]) / (k1 - k0);
                        acc += d * values[i - 1] + 0.5 * slope * d * d;
                        break;
                    }
                }
                acc
            }
        }
    }

    /// Inverse of the normalized CDF: the `t` with `cdf(t) = u · mass`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(self.mass > 0.0) {
            return Err(Error::InvalidProfile("profile has zero mass and cannot be normalized".into()));
        }
        let u = u.clamp(0.0, 1.0);
        let (lo, hi) = self.support();
        Ok(match &self.kind {
            ProfileKind::Uniform { a, b } => a + u * (b - a),
            ProfileKind::Triangular { a, b } => {
                let width = b - a;
                if u <= 0.5 {
                    a + width * (0.5 * u).sqrt()
                } else {
                    b - width * (0.5 * (1.0 - u)).sqrt()
                }
            }
            ProfileKind::TruncatedGaussian { mean, sigma, .. } => {
                let (ca, cb) = self.gauss_cdf;
                let p = (ca + u * (cb - ca)).clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON);
                (mean + sigma * std_normal().inverse_cdf(p)).clamp(lo, hi)
            }
            ProfileKind::Table { knots, values } => {
                let target = u * self.mass;
                let mut acc = 0.0;
                let mut result = hi;
                for i in 1..knots.len() {
                    let (k0, k1) = (knots[i - 1], knots[i]);
                    let (v0, v1) = (values[i - 1], values[i]);
                    let seg = 0.5 * (k1 - k0) * (v0 + v1);
                    if acc + seg >= target && seg > 0.0 {
                        // solve v0·d + ½·slope·d² = target − acc on [0, k1 − k0]
                        let rem = target - acc;
                        let slope = (v1 - v0) / (k1 - k0);
                        let d = if rem <= 0.0 {
                            0.0
                        } else if slope.abs() < 1e-14 * (v0.abs() + v1.abs()) {
                            rem / v0
                        } else {
                            let disc = (v0 * v0 + 2.0 * slope * rem).max(0.0);
                            2.0 * rem / (v0 + disc.sqrt())
                        };
                        result = k0 + d.clamp(0.0, k1 - k0);
                        break;
                    }
                    acc += seg;
                }
                result
            }
        })
    }

    /// `sup_x ∫_x^{x+ε} h`, the modulus of continuity of `h dt`.
    pub fn window_sup(&self, eps: f64) -> f64 {
        let (lo, hi) = self.support();
        if eps >= hi - lo {
            return self.mass;
        }
        let window = |x: f64| self.cdf(x + eps) - self.cdf(x);
        match &self.kind {
            ProfileKind::Uniform { .. } | ProfileKind::Triangular { .. } => window(0.5 * (lo + hi) - 0.5 * eps),
            ProfileKind::TruncatedGaussian { mean, .. } => {
                window((mean - 0.5 * eps).clamp(lo, hi - eps))
            }
            ProfileKind::Table { knots, .. } => {
                let steps = 4096;
                let span = hi - lo - eps;
                let grid = (0..=steps).map(|i| lo + span * i as f64 / steps as f64);
                let aligned = knots
                    .iter()
                    .flat_map(|&k| [k, k - eps])
                    .filter(|&x| (lo..=hi - eps).contains(&x));
                grid.chain(aligned).map(window).fold(0.0, f64::max)
            }
        }
    }
}

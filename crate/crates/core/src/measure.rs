//! Finite measures on the real line.
//!
//! [`PointMeasure`] holds exact atomic measures (spectral measures of finite
//! matrices and their quadrature averages); [`BinnedMeasure`] holds
//! fixed-width histograms. Both expose the modulus of continuity
//! `s(μ, ε) = sup { μ([a, b]) : b − a = ε }` through [`WindowMass`], which is
//! what turns "absolutely continuous" into something a test can check.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};

/// Relative tolerance (w.r.t. the spectral diameter) under which atoms merge.
pub const MERGE_TOLERANCE: f64 = 1e-12;

/// Formats a float with 17 significant digits so that it round-trips.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::MalformedInterval { a: lo, b: hi });
        }
        Ok(Self { lo, hi })
    }

    /// The whole real line.
    pub fn everything() -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Measures whose window masses can be maximized.
pub trait WindowMass {
    fn total_mass(&self) -> f64;

    /// Largest mass carried by a window of width `eps`, together with the
    /// width of the window actually used (binned measures round up).
    fn window_sup(&self, eps: f64) -> Result<(f64, f64)>;
}

/// `s(m, ε)`: the largest mass `m` puts on an interval of length `ε`.
pub fn modulus_of_continuity<M: WindowMass + ?Sized>(m: &M, eps: f64) -> Result<f64> {
    m.window_sup(eps).map(|(s, _)| s)
}

fn check_width(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveWidth(eps))
    }
}

/// Finite atomic measure with strictly increasing atom locations.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointMeasure {
    locations: Vec<f64>,
    weights: Vec<f64>,
}

impl PointMeasure {
    /// Builds a canonical measure: sorted, with atoms closer than
    /// [`MERGE_TOLERANCE`] times the spectral diameter merged.
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        for &(x, w) in &atoms {
            if !x.is_finite() {
                return Err(Error::InvalidArgument(format!("atom location {x} is not finite")));
            }
            if !(w >= 0.0) || !w.is_finite() {
                return Err(Error::NegativeWeight(w));
            }
        }
        Ok(Self::canonicalize(atoms))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// Unit atom of weight `w` at `x`.
    pub fn dirac(x: f64, w: f64) -> Result<Self> {
        Self::new(vec![(x, w)])
    }

    pub(crate) fn canonicalize(mut atoms: Vec<(f64, f64)>) -> Self {
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let (Some(first), Some(last)) = (atoms.first(), atoms.last()) else {
            return Self::zero();
        };
        let scale = (last.0 - first.0).max(first.0.abs()).max(last.0.abs());
        let tol = MERGE_TOLERANCE * scale;

        let mut locations = Vec::with_capacity(atoms.len());
        let mut weights: Vec<f64> = Vec::with_capacity(atoms.len());
        let mut anchor = f64::NEG_INFINITY;
        for (x, w) in atoms {
            if !locations.is_empty() && x - anchor <= tol {
                *weights.last_mut().unwrap() += w;
            } else {
                anchor = x;
                locations.push(x);
                weights.push(w);
            }
        }
        Self { locations, weights }
    }

    pub fn len(&self) -> usize {
        self.locations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locations.is_empty()
    }

    pub fn locations(&self) -> &[f64] {
        &self.locations
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.locations.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn max_weight(&self) -> f64 {
        self.weights.iter().copied().fold(0.0, f64::max)
    }

    /// Mass in the closed interval `interval`; boundary atoms count.
    pub fn restrict(&self, interval: Interval) -> f64 {
        let start = self.locations.partition_point(|&x| x < interval.lo);
        let end = self.locations.partition_point(|&x| x <= interval.hi);
        self.weights[start..end.max(start)].iter().sum()
    }

    pub fn translate(&self, shift: f64) -> Self {
        Self::canonicalize(self.atoms().map(|(x, w)| (x + shift, w)).collect())
    }

    pub fn scale_weights(&self, factor: f64) -> Result<Self> {
        if !(factor >= 0.0) {
            return Err(Error::NegativeWeight(factor));
        }
        Ok(Self {
            locations: self.locations.clone(),
            weights: self.weights.iter().map(|w| w * factor).collect(),
        })
    }

    /// Smallest closed interval containing every atom.
    pub fn support_hull(&self) -> Option<Interval> {
        Some(Interval {
            lo: *self.locations.first()?,
            hi: *self.locations.last()?,
        })
    }

    /// Histogram with bins `[lo + iε, lo + (i+1)ε)` covering `[lo, hi)`.
    pub fn bin(&self, eps: f64, lo: f64, hi: f64) -> Result<BinnedMeasure> {
        check_width(eps)?;
        let range = Interval::new(lo, hi)?;
        let count = (((range.hi - range.lo) / eps) - 1e-9).ceil().max(1.0) as usize;
        let mut masses = vec![0.0; count];
        let mut escaped = 0.0;
        for (x, w) in self.atoms() {
            let pos = ((x - lo) / eps).floor();
            if x < lo || x >= hi || pos < 0.0 || pos as usize >= count {
                escaped += w;
            } else {
                masses[pos as usize] += w;
            }
        }
        if escaped > 0.0 {
            return Err(Error::MassOutsideRange { escaped, lo, hi });
        }
        BinnedMeasure::new(lo, eps, masses)
    }

    /// Linear (cloud-in-cell) binning onto `count` bins of width `eps`
    /// starting at `origin`.
    ///
    /// Each atom is split between the two nearest bin centres in proportion
    /// to proximity, which equals the histogram of the measure convolved with
    /// a box of width `eps`. Mass beyond the outer bin centres is clamped into
    /// the outer bins, so total mass is preserved. Atoms outside
    /// `[origin, origin + count·eps]` are rejected.
    pub fn bin_linear(&self, eps: f64, origin: f64, count: usize) -> Result<BinnedMeasure> {
        check_width(eps)?;
        if count == 0 {
            return Err(Error::InvalidArgument("linear binning needs at least one bin".into()));
        }
        let hi = origin + eps * count as f64;
        let mut masses = vec![0.0; count];
        let mut escaped = 0.0;
        for (x, w) in self.atoms() {
            if x < origin || x > hi {
                escaped += w;
                continue;
            }
            let u = (x - origin) / eps - 0.5;
            let left = u.floor();
            let frac = u - left;
            let clamp = |i: f64| i.max(0.0).min((count - 1) as f64) as usize;
            masses[clamp(left)] += w * (1.0 - frac);
            masses[clamp(left + 1.0)] += w * frac;
        }
        if escaped > 0.0 {
            return Err(Error::MassOutsideRange { escaped, lo: origin, hi });
        }
        BinnedMeasure::new(origin, eps, masses)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "location,weight")?;
        for (x, w) in self.atoms() {
            writeln!(out, "{},{}", format_f64(x), format_f64(w))?;
        }
        Ok(())
    }
}

impl WindowMass for PointMeasure {
    fn total_mass(&self) -> f64 {
        PointMeasure::total_mass(self)
    }

    /// Two-pointer sweep over windows `[x_i, x_i + ε]` anchored at atoms;
    /// some optimal closed window always has an atom at its left end.
    fn window_sup(&self, eps: f64) -> Result<(f64, f64)> {
        check_width(eps)?;
        let mut best = 0.0f64;
        let mut right = 0;
        let mut running = 0.0;
        for left in 0..self.len() {
            if right < left {
                right = left;
                running = 0.0;
            }
            let limit = self.locations[left] + eps;
            while right < self.len() && self.locations[right] <= limit {
                running += self.weights[right];
                right += 1;
            }
            best = best.max(running);
            running -= self.weights[left];
        }
        Ok((best, eps))
    }
}

/// Weighted union of measures, canonicalized.
pub fn merge(parts: &[(&PointMeasure, f64)]) -> Result<PointMeasure> {
    let mut atoms = Vec::with_capacity(parts.iter().map(|(m, _)| m.len()).sum());
    for &(m, c) in parts {
        if !(c >= 0.0) {
            return Err(Error::NegativeWeight(c));
        }
        atoms.extend(m.atoms().map(|(x, w)| (x, w * c)));
    }
    Ok(PointMeasure::canonicalize(atoms))
}

/// Fixed-width histogram; bin `i` covers `[origin + iε, origin + (i+1)ε)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinnedMeasure {
    origin: f64,
    width: f64,
    masses: Vec<f64>,
}

impl BinnedMeasure {
    pub fn new(origin: f64, width: f64, masses: Vec<f64>) -> Result<Self> {
        check_width(width)?;
        if let Some(&bad) = masses.iter().find(|m| !(**m >= 0.0) || !m.is_finite()) {
            return Err(Error::NegativeWeight(bad));
        }
        Ok(Self {
            origin,
            width,
            masses,
        })
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn bin_left(&self, i: usize) -> f64 {
        self.origin + self.width * i as f64
    }

    pub fn density(&self, i: usize) -> f64 {
        self.masses[i] / self.width
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// Mass in `interval`, treating each bin's mass as uniformly spread.
    pub fn restrict(&self, interval: Interval) -> f64 {
        self.masses
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                let left = self.bin_left(i);
                let right = left + self.width;
                let overlap = (right.min(interval.hi) - left.max(interval.lo)).max(0.0);
                m * (overlap / self.width).min(1.0)
            })
            .sum()
    }

    fn same_grid(&self, other: &Self) -> Result<()> {
        let tol = 1e-12 * self.width.max(other.width);
        if self.len() != other.len()
            || (self.width - other.width).abs() > tol
            || (self.origin - other.origin).abs() > tol.max(1e-12 * self.origin.abs())
        {
            return Err(Error::InvalidArgument("binned measures live on different grids".into()));
        }
        Ok(())
    }

    /// `Σ |m_i − m'_i|` over a common grid.
    pub fn l1_distance(&self, other: &Self) -> Result<f64> {
        self.same_grid(other)?;
        Ok(self
            .masses
            .iter()
            .zip(&other.masses)
            .map(|(a, b)| (a - b).abs())
            .sum())
    }

    /// Total-variation distance `½ Σ |m_i − m'_i|`.
    pub fn tv_distance(&self, other: &Self) -> Result<f64> {
        Ok(0.5 * self.l1_distance(other)?)
    }

    /// Bins per window of width `eps`, rounded up.
    pub fn window_bins(&self, eps: f64) -> Result<usize> {
        check_width(eps)?;
        Ok(((eps / self.width) - 1e-9).ceil().max(1.0) as usize)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "bin_left,mass")?;
        for (i, m) in self.masses.iter().enumerate() {
            writeln!(out, "{},{}", format_f64(self.bin_left(i)), format_f64(*m))?;
        }
        Ok(())
    }
}

impl WindowMass for BinnedMeasure {
    fn total_mass(&self) -> f64 {
        BinnedMeasure::total_mass(self)
    }

    fn window_sup(&self, eps: f64) -> Result<(f64, f64)> {
        let k = self.window_bins(eps)?;
        let width = k as f64 * self.width;
        if self.masses.len() <= k {
            return Ok((self.total_mass(), width));
        }
        // Direct window sums; a running sum would drift and break monotonicity in ε.
        let best = self
            .masses
            .windows(k)
            .map(|w| w.iter().sum::<f64>())
            .fold(0.0, f64::max);
        Ok((best, width))
    }
}

/// Modulus of continuity and window density over a ladder of widths.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuityReport {
    pub epsilons: Vec<f64>,
    pub s_values: Vec<f64>,
    pub density_sup: Vec<f64>,
}

impl ContinuityReport {
    /// `max / min` of the window densities over the ladder; infinite when
    /// some density vanishes while another does not.
    pub fn density_ratio(&self) -> f64 {
        let max = self.density_sup.iter().copied().fold(0.0, f64::max);
        let min = self.density_sup.iter().copied().fold(f64::INFINITY, f64::min);
        if max == 0.0 {
            1.0
        } else {
            max / min
        }
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "epsilon,s_value,density_sup")?;
        for i in 0..self.epsilons.len() {
            writeln!(
                out,
                "{},{},{}",
                format_f64(self.epsilons[i]),
                format_f64(self.s_values[i]),
                format_f64(self.density_sup[i])
            )?;
        }
        Ok(())
    }
}

/// Computes `s(m, ε)` and the sliding-window density `s / |window|` for each
/// `ε` of a strictly decreasing ladder.
pub fn continuity_ladder<M: WindowMass + ?Sized>(m: &M, epsilons: &[f64]) -> Result<ContinuityReport> {
    if epsilons.is_empty() {
        return Err(Error::EmptyLadder);
    }
    if epsilons.iter().any(|&e| !(e > 0.0)) || epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::UnsortedLadder);
    }
    let mut s_values = Vec::with_capacity(epsilons.len());
    let mut density_sup = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let (s, width) = m.window_sup(eps)?;
        s_values.push(s);
        density_sup.push(s / width);
    }
    debug_assert!(s_values.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12) + 1e-300));
    Ok(ContinuityReport {
        epsilons: epsilons.to_vec(),
        s_values,
        density_sup,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn two_atoms() -> PointMeasure {
        PointMeasure::new(vec![(0.0, 0.3), (0.5, 0.7)]).unwrap()
    }

    fn uniform_unit(width: f64) -> BinnedMeasure {
        let n = (1.0 / width).round() as usize;
        BinnedMeasure::new(0.0, width, vec![width; n]).unwrap()
    }

    #[test]
    fn total_mass_examples() {
        assert_eq!(PointMeasure::dirac(0.0, 1.0).unwrap().total_mass(), 1.0);
        assert_eq!(PointMeasure::zero().total_mass(), 0.0);
        let m = PointMeasure::new(vec![(-1.0, 0.5), (1.0, 0.5)]).unwrap();
        assert_eq!(m.total_mass(), 1.0);
    }

    #[test]
    fn restrict_examples() {
        let m = two_atoms();
        assert_eq!(m.restrict(Interval::new(0.0, 0.1).unwrap()), 0.3);
        assert_eq!(m.restrict(Interval::new(-1.0, 1.0).unwrap()), 1.0);
        assert_eq!(m.restrict(Interval::new(0.5, 0.5).unwrap()), 0.7);
        let u = uniform_unit(0.01);
        let half = u.restrict(Interval::new(0.25, 0.75).unwrap());
        assert!((half - 0.5).abs() <= 1e-12);
        assert!(Interval::new(1.0, 0.0).is_err());
    }

    #[test]
    fn modulus_examples() {
        let w = 0.42;
        let single = PointMeasure::dirac(0.0, w).unwrap();
        for eps in [1e-6, 0.1, 10.0] {
            assert_eq!(modulus_of_continuity(&single, eps).unwrap(), w);
        }
        assert_eq!(modulus_of_continuity(&two_atoms(), 0.1).unwrap(), 0.7);
        assert_eq!(modulus_of_continuity(&two_atoms(), 0.5).unwrap(), 1.0);
        let u = uniform_unit(0.01);
        assert!((modulus_of_continuity(&u, 0.05).unwrap() - 0.05).abs() < 1e-12);
        assert!(modulus_of_continuity(&u, 0.0).is_err());
        assert!(modulus_of_continuity(&two_atoms(), -1.0).is_err());
    }

    #[test]
    fn binned_window_rounds_up() {
        let u = uniform_unit(0.01);
        assert_eq!(u.window_bins(0.05).unwrap(), 5);
        assert_eq!(u.window_bins(0.051).unwrap(), 6);
        assert_eq!(u.window_bins(0.001).unwrap(), 1);
        let (s, width) = u.window_sup(0.051).unwrap();
        assert!((s - 0.06).abs() < 1e-12 && (width - 0.06).abs() < 1e-12);
    }

    #[test]
    fn bin_examples() {
        let m = PointMeasure::dirac(0.5, 1.0).unwrap();
        assert_eq!(m.bin(1.0, 0.0, 1.0).unwrap().masses(), &[1.0]);
        let m = PointMeasure::new(vec![(0.1, 0.5), (0.9, 0.5)]).unwrap();
        assert_eq!(m.bin(0.5, 0.0, 1.0).unwrap().masses(), &[0.5, 0.5]);
        match PointMeasure::new(vec![(0.5, 0.25), (2.0, 0.75)]).unwrap().bin(0.5, 0.0, 1.0) {
            Err(Error::MassOutsideRange { escaped, .. }) => assert_eq!(escaped, 0.75),
            other => panic!("expected escape error, got {other:?}"),
        }
        // right end of the range is open
        assert!(PointMeasure::dirac(1.0, 1.0).unwrap().bin(0.5, 0.0, 1.0).is_err());
    }

    #[test]
    fn linear_binning_splits_between_centres() {
        let m = PointMeasure::dirac(1.0, 1.0).unwrap();
        let b = m.bin_linear(1.0, 0.0, 3).unwrap();
        assert_eq!(b.masses(), &[0.5, 0.5, 0.0]);
        let b = PointMeasure::dirac(0.1, 2.0).unwrap().bin_linear(1.0, 0.0, 3).unwrap();
        assert_eq!(b.masses(), &[2.0, 0.0, 0.0]);
        assert!(PointMeasure::dirac(3.5, 1.0).unwrap().bin_linear(1.0, 0.0, 3).is_err());
    }

    #[test]
    fn merge_examples() {
        let m = two_atoms();
        assert_eq!(merge(&[(&m, 1.0)]).unwrap(), m);
        let unit = PointMeasure::dirac(0.0, 1.0).unwrap();
        let merged = merge(&[(&unit, 0.5), (&unit, 0.5)]).unwrap();
        assert_eq!(merged.atoms().collect::<Vec<_>>(), vec![(0.0, 1.0)]);
        let other = PointMeasure::new(vec![(0.25, 0.1), (0.5, 0.2)]).unwrap();
        assert_eq!(
            merge(&[(&m, 1.0), (&other, 2.0)]).unwrap(),
            merge(&[(&other, 2.0), (&m, 1.0)]).unwrap()
        );
        assert!(matches!(merge(&[(&m, -1.0)]), Err(Error::NegativeWeight(_))));
    }

    #[test]
    fn degenerate_locations_merge() {
        let m = PointMeasure::new(vec![(1.0, 0.25), (1.0 + 1e-14, 0.25), (2.0, 0.5)]).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.weights(), &[0.5, 0.5]);
        assert!(PointMeasure::new(vec![(0.0, -0.1)]).is_err());
    }

    #[test]
    fn ladder_examples() {
        let w = 0.3;
        let r = continuity_ladder(&PointMeasure::dirac(0.0, w).unwrap(), &[0.1, 0.01]).unwrap();
        assert_eq!(r.s_values, vec![w, w]);
        assert!((r.density_sup[0] - 10.0 * w).abs() < 1e-12);
        assert!((r.density_sup[1] - 100.0 * w).abs() < 1e-9);

        let u = uniform_unit(0.001);
        let r = continuity_ladder(&u, &[0.1, 0.01]).unwrap();
        assert!((r.s_values[0] - 0.1).abs() < 1e-9 && (r.s_values[1] - 0.01).abs() < 1e-9);
        assert!(r.density_sup.iter().all(|d| (d - 1.0).abs() < 1e-9));

        assert!(matches!(continuity_ladder(&u, &[]), Err(Error::EmptyLadder)));
        assert!(matches!(continuity_ladder(&u, &[0.01, 0.1]), Err(Error::UnsortedLadder)));
    }

    #[test]
    fn empty_bins_have_zero_modulus() {
        let b = BinnedMeasure::new(0.0, 0.1, vec![0.0; 10]).unwrap();
        assert_eq!(modulus_of_continuity(&b, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        two_atoms().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("location,weight"));
        let first: Vec<f64> = lines.next().unwrap().split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(first, vec![0.0, 0.3]);
    }

    fn brute_force_modulus(m: &PointMeasure, eps: f64) -> f64 {
        m.locations()
            .iter()
            .map(|&a| m.restrict(Interval::new(a, a + eps).unwrap()))
            .fold(0.0, f64::max)
    }

    fn arb_measure() -> impl Strategy<Value = PointMeasure> {
        prop::collection::vec((-5.0f64..5.0, 0.0f64..1.0), 0..100)
            .prop_map(|atoms| PointMeasure::new(atoms).unwrap())
    }

    proptest! {
        #[test]
        fn sweep_matches_brute_force(m in arb_measure(), eps in 1e-3f64..3.0) {
            let fast = modulus_of_continuity(&m, eps).unwrap();
            prop_assert!((fast - brute_force_modulus(&m, eps)).abs() <= 1e-12);
        }

        #[test]
        fn modulus_is_monotone_and_bounded(m in arb_measure(), a in 1e-3f64..2.0, b in 1e-3f64..2.0) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let s_lo = modulus_of_continuity(&m, lo).unwrap();
            let s_hi = modulus_of_continuity(&m, hi).unwrap();
            prop_assert!(s_lo <= s_hi + 1e-12);
            prop_assert!(s_hi <= m.total_mass() + 1e-12);
            prop_assert!(s_lo >= m.max_weight() - 1e-15);
        }

        #[test]
        fn bin_and_merge_conserve_mass(m in arb_measure(), c in 0.0f64..3.0, eps in 0.01f64..1.0) {
            let mass = m.total_mass();
            let b = m.bin(eps, -5.0, 5.0 + eps).unwrap();
            prop_assert!((b.total_mass() - mass).abs() <= 1e-12 * mass.max(1.0));
            let l = m.bin_linear(eps, -5.0, (10.0 / eps).ceil() as usize).unwrap();
            prop_assert!((l.total_mass() - mass).abs() <= 1e-12 * mass.max(1.0));
            let merged = merge(&[(&m, c), (&m, 1.0)]).unwrap();
            prop_assert!((merged.total_mass() - (1.0 + c) * mass).abs() <= 1e-12 * mass.max(1.0) * (1.0 + c));
        }

        #[test]
        fn binned_ladder_is_monotone(masses in prop::collection::vec(0.0f64..1.0, 1..200)) {
            let b = BinnedMeasure::new(0.0, 0.01, masses).unwrap();
            let r = continuity_ladder(&b, &[0.5, 0.2, 0.05, 0.01]).unwrap();
            prop_assert!(r.s_values.windows(2).all(|w| w[1] <= w[0] + 1e-12));
            prop_assert!(r.s_values[0] <= b.total_mass() + 1e-12);
        }
    }
}

//! Parameter loci: centers, multiplier loci and parametric preimages.

mod centers;
mod continuation;
mod cubic;
mod homotopy;
mod jets;
mod multiplier;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::ParamPoint;

pub use centers::{centers_unicritical, preimage_locus};
pub use cubic::{
    centers_cubic, centers_cubic_homotopy, cubic_multiplier_locus, transversality_check, SeedGrid,
    Transversality, CUBIC_SEED_RADIUS,
};
pub use homotopy::{HomotopyOptions, HomotopyReport};
pub use multiplier::{multiplier_locus, principal_power};

/// Points closer than this are merged in multistart and continuation output.
pub const DEDUP_RADIUS: f64 = 1e-6;
/// Merge radius for roots of a single polynomial. Exact-period centers of
/// `z^2 + c` come within `2.2e-7` of each other already at `n = 14`, so the
/// multistart radius would merge distinct roots.
pub const DIRECT_DEDUP_RADIUS: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocusMethod {
    DirectRoots,
    Continuation,
    MultistartNewton,
    Homotopy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocusResult {
    pub points: Vec<ParamPoint>,
    pub residuals: Vec<f64>,
    /// Method-specific label per point: the exact period of the continued
    /// cycle for unicritical multiplier loci, the critical-point assignment
    /// (0 or 1) for cubic multiplier loci, zero otherwise.
    pub tags: Vec<u32>,
    /// Multiplicity per point; more than one only where several lifts
    /// `a = b^{1/3}` coincide at `b = 0`.
    pub multiplicities: Vec<u32>,
    pub expected_count: u64,
    pub method: LocusMethod,
}

impl LocusResult {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of points counted with multiplicity.
    pub fn count_with_multiplicity(&self) -> u64 {
        self.multiplicities.iter().map(|&m| u64::from(m)).sum()
    }

    /// Keeps only the points with the given tag.
    pub fn with_tag(&self, tag: u32) -> LocusResult {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| self.tags[i] == tag).collect();
        LocusResult {
            points: keep.iter().map(|&i| self.points[i]).collect(),
            residuals: keep.iter().map(|&i| self.residuals[i]).collect(),
            tags: keep.iter().map(|&i| self.tags[i]).collect(),
            multiplicities: keep.iter().map(|&i| self.multiplicities[i]).collect(),
            expected_count: keep.iter().map(|&i| u64::from(self.multiplicities[i])).sum(),
            method: self.method,
        }
    }

    /// Unicritical parameters as complex numbers.
    pub fn unicritical_values(&self) -> Vec<Complex64> {
        self.points
            .iter()
            .filter_map(|p| match p {
                ParamPoint::Unicritical { c, .. } => Some(*c),
                ParamPoint::CubicModuli { .. } => None,
            })
            .collect()
    }
}

/// Coordinates of a parameter point as a vector in `C^k`.
pub(crate) fn coords(p: &ParamPoint) -> Vec<Complex64> {
    p.params()
}

pub(crate) fn distance(p: &ParamPoint, q: &ParamPoint) -> f64 {
    coords(p)
        .iter()
        .zip(coords(q))
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Hausdorff distance between two finite point sets; infinite if exactly
/// one of them is empty.
pub fn set_distance(a: &[ParamPoint], b: &[ParamPoint]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    let one_way = |x: &[ParamPoint], y: &[ParamPoint]| {
        x.iter()
            .map(|p| y.iter().map(|q| distance(p, q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// Order by coordinates, (Re, Im) lexicographically per coordinate.
pub(crate) fn compare_points(p: &ParamPoint, q: &ParamPoint) -> std::cmp::Ordering {
    let (a, b) = (coords(p), coords(q));
    for (x, y) in a.iter().zip(&b) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o != std::cmp::Ordering::Equal {
            return o;
        }
    }
    std::cmp::Ordering::Equal
}

/// Sorts candidates and drops any within `radius` of an earlier kept one,
/// preferring the smaller residual. Items are `(point, residual, tag,
/// multiplicity)`.
pub(crate) fn dedup_sorted(
    mut items: Vec<(ParamPoint, f64, u32, u32)>,
    radius: f64,
) -> Vec<(ParamPoint, f64, u32, u32)> {
    // Best residual first so that survivors are the most accurate copies.
    items.sort_by(|a, b| a.1.total_cmp(&b.1).then(compare_points(&a.0, &b.0)));
    let mut kept: Vec<(ParamPoint, f64, u32, u32)> = Vec::with_capacity(items.len());
    // Bucket on the first real coordinate for near-linear behavior.
    let mut index: std::collections::BTreeMap<i64, Vec<usize>> = std::collections::BTreeMap::new();
    let key = |p: &ParamPoint| (coords(p)[0].re / radius.max(1e-300)).floor() as i64;
    for item in items {
        let k = key(&item.0);
        let dup = (k - 1..=k + 1).any(|b| {
            index
                .get(&b)
                .is_some_and(|v| v.iter().any(|&i| distance(&kept[i].0, &item.0) <= radius))
        });
        if !dup {
            index.entry(k).or_default().push(kept.len());
            kept.push(item);
        }
    }
    kept.sort_by(|a, b| compare_points(&a.0, &b.0));
    kept
}

pub(crate) fn assemble(
    items: Vec<(ParamPoint, f64, u32, u32)>,
    expected_count: u64,
    method: LocusMethod,
) -> LocusResult {
    LocusResult {
        points: items.iter().map(|t| t.0).collect(),
        residuals: items.iter().map(|t| t.1).collect(),
        tags: items.iter().map(|t| t.2).collect(),
        multiplicities: items.iter().map(|t| t.3).collect(),
        expected_count,
        method,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dedup_keeps_best_residual() {
        let p = |x: f64| ParamPoint::Unicritical {
            d: 2,
            c: Complex64::new(x, 0.0),
        };
        let items = vec![
            (p(0.0), 1e-3, 0, 1),
            (p(1e-8), 1e-9, 0, 1),
            (p(1.0), 1e-5, 0, 1),
        ];
        let kept = dedup_sorted(items, 1e-6);
        assert_eq!(kept.len(), 2);
        assert_eq!(kept[0].1, 1e-9);
    }
}

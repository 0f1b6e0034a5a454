//! Gap-sequence statistics: correlations against a null model and the
//! distance of a gap sequence from perfectly uniform gaps.

use thiserror::Error;

use crate::generate::{gap_summary, generate, Distribution, DistributionSpec, GenerateError};
use crate::instance::SortedInstance;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("sequences differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("need at least 2 observations, got {0}")]
    TooShort(usize),
    #[error("correlation is undefined for a constant sequence")]
    ZeroVariance,
    #[error("need at least {needed} elements, got {got}")]
    TooFewElements { needed: usize, got: usize },
    #[error("null model generation failed: {0}")]
    NullModel(#[from] GenerateError),
}

/// Consecutive-value gaps of an instance; every gap is at least 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapSequence(Vec<u64>);

impl GapSequence {
    /// Returns `None` if any gap is zero.
    pub fn new(gaps: Vec<u64>) -> Option<Self> {
        gaps.iter().all(|&g| g >= 1).then_some(Self(gaps))
    }

    pub fn of(instance: &SortedInstance) -> Self {
        Self(instance.gaps().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&g| g as f64).collect()
    }
}

pub fn pearson(x: &GapSequence, y: &GapSequence) -> Result<f64, StatsError> {
    pearson_f64(&x.to_f64(), &y.to_f64())
}

pub fn spearman(x: &GapSequence, y: &GapSequence) -> Result<f64, StatsError> {
    spearman_f64(&x.to_f64(), &y.to_f64())
}

fn check_lengths(x: &[f64], y: &[f64]) -> Result<(), StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(StatsError::TooShort(x.len()));
    }
    Ok(())
}

/// Sample Pearson correlation, clamped to `[-1, 1]`.
pub fn pearson_f64(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    check_lengths(x, y)?;
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Ranks starting at 1; tied values share the average of their ranks.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        // positions i..j hold ranks i+1..=j
        let rank = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = rank;
        }
        i = j;
    }
    ranks
}

/// Pearson correlation of the average-rank vectors.
pub fn spearman_f64(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    check_lengths(x, y)?;
    pearson_f64(&average_ranks(x), &average_ranks(y))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L2Distance {
    /// `sqrt(sum (g_i - mean)^2)` with `mean = (R - 1) / N`.
    pub raw: f64,
    /// `raw / (mean * sqrt(N))`, comparable across sizes and scales.
    pub normalized: f64,
}

pub fn l2_from_uniform(instance: &SortedInstance) -> Result<L2Distance, StatsError> {
    let summary = gap_summary(instance).map_err(|e| StatsError::TooFewElements { needed: 2, got: e.0 })?;
    let mean = summary.mean;
    let raw = instance
        .gaps()
        .map(|g| {
            let d = g as f64 - mean;
            d * d
        })
        .sum::<f64>()
        .sqrt();
    Ok(L2Distance {
        raw,
        normalized: raw / (mean * (summary.gap_count as f64).sqrt()),
    })
}

/// Positional comparison of two gap sequences of equal length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapComparison {
    pub spearman: f64,
    pub pearson: f64,
}

/// Correlates gap `i` of `a` with gap `i` of `b`. A constant gap sequence
/// carries no linear or rank signal, so its correlations are reported as 0.
pub fn compare_gaps(a: &SortedInstance, b: &SortedInstance) -> Result<GapComparison, StatsError> {
    let x = GapSequence::of(a).to_f64();
    let y = GapSequence::of(b).to_f64();
    let degenerate = |r: Result<f64, StatsError>| match r {
        Err(StatsError::ZeroVariance) => Ok(0.0),
        other => other,
    };
    Ok(GapComparison {
        spearman: degenerate(spearman_f64(&x, &y))?,
        pearson: degenerate(pearson_f64(&x, &y))?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonuniformityReport {
    pub correlation: GapComparison,
    pub l2_instance: L2Distance,
    pub l2_null: L2Distance,
    pub null_model: SortedInstance,
}

/// Builds a null model with the instance's size, range, gap mean and gap
/// deviation, then compares the two gap sequences.
pub fn nonuniformity_report(instance: &SortedInstance, seed: u64) -> Result<NonuniformityReport, StatsError> {
    if instance.len() < 3 {
        return Err(StatsError::TooFewElements {
            needed: 3,
            got: instance.len(),
        });
    }
    let target = gap_summary(instance).expect("length checked above");
    let null_model = generate(
        &DistributionSpec::new(Distribution::NullModel { target }, instance.len())
            .with_start(instance.first())
            .with_seed(seed),
    )?;
    Ok(NonuniformityReport {
        correlation: compare_gaps(instance, &null_model)?,
        l2_instance: l2_from_uniform(instance)?,
        l2_null: l2_from_uniform(&null_model)?,
        null_model,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn pearson_examples() {
        let x = [1.0, 2.0, 3.0, 5.0];
        assert!(close(pearson_f64(&x, &x).unwrap(), 1.0));
        assert!(close(pearson_f64(&[1.0, 2.0, 3.0], &[6.0, 4.0, 2.0]).unwrap(), -1.0));
        // cov = 4/4, var_x = var_y = 5/4  =>  r = 0.8
        assert!(close(pearson_f64(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap(), 0.8));
    }

    #[test]
    fn pearson_errors() {
        assert_eq!(
            pearson_f64(&[1.0, 2.0], &[1.0, 2.0, 3.0]),
            Err(StatsError::LengthMismatch { left: 2, right: 3 })
        );
        assert_eq!(pearson_f64(&[1.0], &[1.0]), Err(StatsError::TooShort(1)));
        assert_eq!(pearson_f64(&[2.0, 2.0], &[1.0, 3.0]), Err(StatsError::ZeroVariance));
    }

    #[test]
    fn spearman_examples() {
        let x = [4.0, 1.0, 9.0, 7.0];
        assert!(close(spearman_f64(&x, &x).unwrap(), 1.0));
        let mut sorted = x.to_vec();
        sorted.sort_by(f64::total_cmp);
        let reversed: Vec<f64> = sorted.iter().rev().copied().collect();
        assert!(close(spearman_f64(&sorted, &reversed).unwrap(), -1.0));
        // ranks x = [1,2,3], y = [1.5,1.5,3]: cov 1.5, var_x 2, var_y 1.5
        let expected = 1.5 / (2.0f64.sqrt() * 1.5f64.sqrt());
        assert!(close(spearman_f64(&[10.0, 20.0, 30.0], &[1.0, 1.0, 2.0]).unwrap(), expected));
        assert!(spearman_f64(&[1.0, 2.0], &[1.0]).is_err());
    }

    #[test]
    fn average_ranks_share_ties() {
        assert_eq!(average_ranks(&[3.0, 1.0, 3.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
    }

    #[test]
    fn gap_sequence_rejects_zero() {
        assert!(GapSequence::new(vec![1, 0]).is_none());
        let a = GapSequence::new(vec![1, 2, 3]).unwrap();
        let b = GapSequence::new(vec![6, 4, 2]).unwrap();
        assert!(close(pearson(&a, &b).unwrap(), -1.0));
        assert!(close(spearman(&a, &b).unwrap(), -1.0));
    }

    #[test]
    fn l2_examples() {
        let d = l2_from_uniform(&SortedInstance::new(vec![0, 1, 3]).unwrap()).unwrap();
        assert!(close(d.raw, 0.5f64.sqrt()));
        // normalized by 1.5 * sqrt(2)
        assert!(close(d.normalized, 0.5f64.sqrt() / (1.5 * 2f64.sqrt())));
        let uniform = SortedInstance::new((0..100).map(|i| 3 * i).collect()).unwrap();
        assert_eq!(l2_from_uniform(&uniform).unwrap().raw, 0.0);
        assert!(l2_from_uniform(&SortedInstance::new(vec![1]).unwrap()).is_err());
    }

    #[test]
    fn stepwise_is_farther_from_uniform_than_increasing() {
        let step = generate(&DistributionSpec::new(Distribution::stepwise(), 1001)).unwrap();
        let inc = generate(&DistributionSpec::new(Distribution::increasing(), 1001)).unwrap();
        let ds = l2_from_uniform(&step).unwrap();
        let di = l2_from_uniform(&inc).unwrap();
        assert!(ds.raw > 0.0);
        assert!(ds.normalized > di.normalized);
    }

    #[test]
    fn self_comparison_is_perfect() {
        let inst = generate(&DistributionSpec::new(Distribution::gaussian(), 500).with_seed(5)).unwrap();
        let c = compare_gaps(&inst, &inst).unwrap();
        assert!(close(c.spearman, 1.0));
        assert!(close(c.pearson, 1.0));
    }

    #[test]
    fn report_on_uniform_instance() {
        let inst = SortedInstance::new((0..1000).map(|i| 10 * i).collect()).unwrap();
        let report = nonuniformity_report(&inst, 1).unwrap();
        assert_eq!(report.l2_instance.raw, 0.0);
        assert_eq!(report.correlation.pearson, 0.0);
        assert_eq!(report.correlation.spearman, 0.0);
        assert_eq!(report.null_model.last(), inst.last());
    }

    #[test]
    fn report_needs_three_elements() {
        let inst = SortedInstance::new(vec![1, 2]).unwrap();
        assert_eq!(
            nonuniformity_report(&inst, 0).unwrap_err(),
            StatsError::TooFewElements { needed: 3, got: 2 }
        );
    }

    proptest! {
        #[test]
        fn pearson_symmetric_and_affine_invariant(
            pairs in prop::collection::vec((1u32..1000, 1u32..1000), 3..40),
            scale in 0.1f64..50.0,
            shift in -100.0f64..100.0,
        ) {
            let x: Vec<f64> = pairs.iter().map(|p| p.0 as f64).collect();
            let y: Vec<f64> = pairs.iter().map(|p| p.1 as f64).collect();
            if let Ok(r) = pearson_f64(&x, &y) {
                prop_assert!((r - pearson_f64(&y, &x).unwrap()).abs() < 1e-9);
                let xt: Vec<f64> = x.iter().map(|v| v * scale + shift).collect();
                prop_assert!((r - pearson_f64(&xt, &y).unwrap()).abs() < 1e-9);
                prop_assert!((-1.0..=1.0).contains(&r));
            }
        }

        #[test]
        fn spearman_symmetric_and_monotone_invariant(
            pairs in prop::collection::vec((1u32..1000, 1u32..1000), 3..40),
        ) {
            let x: Vec<f64> = pairs.iter().map(|p| p.0 as f64).collect();
            let y: Vec<f64> = pairs.iter().map(|p| p.1 as f64).collect();
            if let Ok(r) = spearman_f64(&x, &y) {
                prop_assert!((r - spearman_f64(&y, &x).unwrap()).abs() < 1e-9);
                let xt: Vec<f64> = x.iter().map(|v| v.powi(3) + v.ln()).collect();
                prop_assert!((r - spearman_f64(&xt, &y).unwrap()).abs() < 1e-9);
            }
        }

        #[test]
        fn l2_zero_iff_equal_gaps(gaps in prop::collection::vec(1i64..6, 1..30)) {
            let mut values = vec![0i64];
            for g in &gaps {
                values.push(values.last().unwrap() + g);
            }
            let d = l2_from_uniform(&SortedInstance::new(values).unwrap()).unwrap();
            let all_equal = gaps.iter().all(|&g| g == gaps[0]);
            prop_assert_eq!(d.raw == 0.0, all_equal);
        }
    }
}

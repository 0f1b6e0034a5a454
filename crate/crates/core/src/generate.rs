//! Seeded synthetic instance generators.
//!
//! Every stochastic generator draws from a ChaCha8 stream seeded with
//! `ChaCha8Rng::seed_from_u64(spec.seed)`, so an instance is a pure function
//! of its [`DistributionSpec`].

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Exp, Normal};
use thiserror::Error;

use crate::instance::SortedInstance;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenerateError {
    #[error("instance size must be at least 1")]
    ZeroSize,
    #[error("invalid {distribution} parameters: {reason}")]
    InvalidParameter {
        distribution: &'static str,
        reason: String,
    },
    #[error("{distribution} instance of {n} elements overflows 64-bit values")]
    Overflow { distribution: &'static str, n: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("need at least 2 elements to measure gaps, got {0}")]
pub struct TooFewElements(pub usize);

/// Statistics of the `N = n - 1` gaps of an instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapSummary {
    pub gap_count: usize,
    /// `last - first + 1`.
    pub range: u128,
    pub mean: f64,
    /// Population standard deviation (divisor `N`).
    pub std: f64,
    pub min: u64,
    pub max: u64,
}

impl fmt::Display for GapSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "gaps={} range={} mean={:.6} std={:.6} min={} max={}",
            self.gap_count, self.range, self.mean, self.std, self.min, self.max
        )
    }
}

pub fn gap_summary(instance: &SortedInstance) -> Result<GapSummary, TooFewElements> {
    if instance.len() < 2 {
        return Err(TooFewElements(instance.len()));
    }
    let gap_count = instance.len() - 1;
    let (mut min, mut max, mut total) = (u64::MAX, 0u64, 0u128);
    for g in instance.gaps() {
        min = min.min(g);
        max = max.max(g);
        total += g as u128;
    }
    let mean = total as f64 / gap_count as f64;
    let var = instance
        .gaps()
        .map(|g| {
            let d = g as f64 - mean;
            d * d
        })
        .sum::<f64>()
        / gap_count as f64;
    Ok(GapSummary {
        gap_count,
        range: total + 1,
        mean,
        std: var.sqrt(),
        min,
        max,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Distribution {
    /// Every gap equals `gap`.
    UniformGap { gap: u64 },
    /// Gap `i` is `initial_gap + i * growth_step`.
    IncreasingGap { initial_gap: u64, growth_step: u64 },
    /// Equal-sized zones; zone `j` uses `zone_gaps[j]`, strictly ascending.
    StepwiseGap { zone_gaps: Vec<u64> },
    /// The first `split` fraction of values sums to the same total as the
    /// rest. Base gaps are exponential with mean `base_gap`.
    Paretian { split: f64, base_gap: f64 },
    /// Gaps drawn from `N(mean, std)`, rounded and clamped to at least 1.
    GaussianGap { mean: f64, std: f64 },
    /// Random gaps matching the target's count, range, mean and deviation.
    NullModel { target: GapSummary },
}

impl Distribution {
    pub const DEFAULT_UNIFORM_GAP: u64 = 10;
    pub const DEFAULT_STEPWISE_GAPS: [u64; 4] = [1, 10, 100, 1000];

    pub fn uniform() -> Self {
        Distribution::UniformGap {
            gap: Self::DEFAULT_UNIFORM_GAP,
        }
    }

    pub fn increasing() -> Self {
        Distribution::IncreasingGap {
            initial_gap: 1,
            growth_step: 1,
        }
    }

    pub fn stepwise() -> Self {
        Distribution::StepwiseGap {
            zone_gaps: Self::DEFAULT_STEPWISE_GAPS.to_vec(),
        }
    }

    pub fn paretian() -> Self {
        Distribution::Paretian {
            split: 0.8,
            base_gap: 100.0,
        }
    }

    pub fn gaussian() -> Self {
        Distribution::GaussianGap {
            mean: 1000.0,
            std: 100.0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Distribution::UniformGap { .. } => "uniform",
            Distribution::IncreasingGap { .. } => "increasing",
            Distribution::StepwiseGap { .. } => "stepwise",
            Distribution::Paretian { .. } => "paretian",
            Distribution::GaussianGap { .. } => "gaussian",
            Distribution::NullModel { .. } => "null",
        }
    }

    pub fn is_stochastic(&self) -> bool {
        matches!(
            self,
            Distribution::Paretian { .. } | Distribution::GaussianGap { .. } | Distribution::NullModel { .. }
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionSpec {
    pub kind: Distribution,
    pub n: usize,
    pub start: i64,
    pub seed: u64,
}

impl DistributionSpec {
    pub fn new(kind: Distribution, n: usize) -> Self {
        Self {
            kind,
            n,
            start: 0,
            seed: 0,
        }
    }

    pub fn with_start(mut self, start: i64) -> Self {
        self.start = start;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

pub fn generate(spec: &DistributionSpec) -> Result<SortedInstance, GenerateError> {
    if spec.n == 0 {
        return Err(GenerateError::ZeroSize);
    }
    let name = spec.kind.name();
    let gap_count = spec.n - 1;
    let invalid = |reason: String| GenerateError::InvalidParameter {
        distribution: name,
        reason,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let gaps: Vec<u64> = match &spec.kind {
        Distribution::UniformGap { gap } => {
            if *gap == 0 {
                return Err(invalid("gap must be at least 1".into()));
            }
            vec![*gap; gap_count]
        }
        Distribution::IncreasingGap {
            initial_gap,
            growth_step,
        } => {
            if *initial_gap == 0 {
                return Err(invalid("initial gap must be at least 1".into()));
            }
            (0..gap_count as u64)
                .map(|i| {
                    i.checked_mul(*growth_step)
                        .and_then(|g| g.checked_add(*initial_gap))
                        .ok_or(GenerateError::Overflow { distribution: name, n: spec.n })
                })
                .collect::<Result<_, _>>()?
        }
        Distribution::StepwiseGap { zone_gaps } => {
            if zone_gaps.is_empty() {
                return Err(invalid("at least one zone is required".into()));
            }
            if zone_gaps[0] == 0 {
                return Err(invalid("zone gaps must be at least 1".into()));
            }
            if zone_gaps.windows(2).any(|w| w[0] >= w[1]) {
                return Err(invalid("zone gaps must be strictly ascending".into()));
            }
            let zones = zone_gaps.len();
            // gap i leads into element i + 1
            (0..gap_count).map(|i| zone_gaps[(i + 1) * zones / spec.n]).collect()
        }
        Distribution::GaussianGap { mean, std } => {
            if !(mean.is_finite() && *mean > 0.0) {
                return Err(invalid(format!("mean must be positive, got {mean}")));
            }
            if !(std.is_finite() && *std >= 0.0) {
                return Err(invalid(format!("std must be non-negative, got {std}")));
            }
            let normal = Normal::new(*mean, *std).map_err(|e| invalid(e.to_string()))?;
            (0..gap_count)
                .map(|_| round_gap(normal.sample(&mut rng)))
                .collect()
        }
        Distribution::Paretian { split, base_gap } => {
            if !(*split > 0.0 && *split < 1.0) {
                return Err(invalid(format!("split must lie in (0, 1), got {split}")));
            }
            if !(base_gap.is_finite() && *base_gap > 0.0) {
                return Err(invalid(format!("base gap must be positive, got {base_gap}")));
            }
            let exp = Exp::new(1.0 / base_gap).map_err(|e| invalid(e.to_string()))?;
            let base: Vec<f64> = (0..gap_count).map(|_| exp.sample(&mut rng)).collect();
            paretian_gaps(&base, spec, *split)?
        }
        Distribution::NullModel { target } => null_model_gaps(target, spec, &mut rng)?,
    };

    accumulate(spec.start, &gaps)
        .map(|values| SortedInstance::new(values).expect("positive gaps give a strictly increasing sequence"))
        .ok_or(GenerateError::Overflow { distribution: name, n: spec.n })
}

fn round_gap(x: f64) -> u64 {
    if x.is_nan() || x < 1.0 {
        1
    } else {
        x.round().min(u64::MAX as f64) as u64
    }
}

fn accumulate(start: i64, gaps: &[u64]) -> Option<Vec<i64>> {
    let mut values = Vec::with_capacity(gaps.len() + 1);
    let mut current = start;
    values.push(current);
    for &g in gaps {
        current = i64::try_from(current as i128 + g as i128).ok()?;
        values.push(current);
    }
    Some(values)
}

/// Number of leading elements that form the "first" group of a Paretian split.
pub fn paretian_head(n: usize, split: f64) -> usize {
    ((split * n as f64).floor() as usize).clamp(1, n.saturating_sub(1).max(1))
}

/// `|sum(head) - sum(tail)| / sum(all)` for the Paretian split.
pub fn paretian_imbalance(values: &[i64], split: f64) -> f64 {
    let head = paretian_head(values.len(), split);
    let first: i128 = values[..head].iter().map(|&v| v as i128).sum();
    let rest: i128 = values[head..].iter().map(|&v| v as i128).sum();
    let total = (first + rest) as f64;
    ((first - rest) as f64 / total).abs()
}

/// Scales the tail gaps by a factor found by bisection so that the head and
/// tail value sums match. Tiny instances may not admit a 1% match; the best
/// factor found is used regardless.
fn paretian_gaps(base: &[f64], spec: &DistributionSpec, split: f64) -> Result<Vec<u64>, GenerateError> {
    let n = spec.n;
    if n < 2 {
        return Ok(Vec::new());
    }
    let head = paretian_head(n, split);
    let build = |factor: f64| -> Vec<u64> {
        base.iter()
            .enumerate()
            .map(|(i, &b)| round_gap(if i + 1 >= head { b * factor } else { b }))
            .collect()
    };
    // tail sum minus head sum; None when the values overflow
    let excess = |gaps: &[u64]| -> Option<i128> {
        let values = accumulate(spec.start, gaps)?;
        let first: i128 = values[..head].iter().map(|&v| v as i128).sum();
        let rest: i128 = values[head..].iter().map(|&v| v as i128).sum();
        Some(rest - first)
    };

    let (mut lo, mut hi) = (1e-9f64.ln(), 1e12f64.ln());
    let low_gaps = build(lo.exp());
    match excess(&low_gaps) {
        Some(e) if e >= 0 => return Ok(low_gaps),
        Some(_) => {}
        None => return Err(GenerateError::Overflow { distribution: "paretian", n }),
    }
    if matches!(excess(&build(hi.exp())), Some(e) if e < 0) {
        return Err(GenerateError::InvalidParameter {
            distribution: "paretian",
            reason: format!("no tail scaling balances the split from start {}", spec.start),
        });
    }
    let mut best = (i128::MAX, low_gaps);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let gaps = build(mid.exp());
        match excess(&gaps) {
            Some(e) => {
                if e.abs() < best.0 {
                    best = (e.abs(), gaps);
                }
                if e == 0 {
                    break;
                }
                if e < 0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            None => hi = mid,
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Ok(best.1)
}

/// Gaussian gaps re-standardized to the target moments (clamping at 1
/// between rounds), then rescaled and rounded by largest remainder so the
/// total span equals the target range exactly.
fn null_model_gaps(target: &GapSummary, spec: &DistributionSpec, rng: &mut ChaCha8Rng) -> Result<Vec<u64>, GenerateError> {
    let invalid = |reason: String| GenerateError::InvalidParameter {
        distribution: "null",
        reason,
    };
    let count = spec.n.saturating_sub(1);
    if target.gap_count != count {
        return Err(invalid(format!(
            "target has {} gaps but an instance of {} elements has {count}",
            target.gap_count, spec.n
        )));
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    let span = target.range.checked_sub(1).ok_or_else(|| invalid("range must be at least 1".into()))?;
    if span < count as u128 {
        return Err(invalid(format!("range {} cannot hold {count} positive gaps", target.range)));
    }
    if !(target.mean.is_finite() && target.std.is_finite() && target.std >= 0.0) {
        return Err(invalid("target moments must be finite".into()));
    }
    if span > i64::MAX as u128 {
        return Err(GenerateError::Overflow { distribution: "null", n: spec.n });
    }

    let normal = Normal::new(target.mean, target.std).map_err(|e| invalid(e.to_string()))?;
    let mut x: Vec<f64> = (0..count).map(|_| normal.sample(rng)).collect();
    for _ in 0..64 {
        let m = x.iter().sum::<f64>() / count as f64;
        let s = (x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / count as f64).sqrt();
        let mut clamped = false;
        for v in &mut x {
            *v = if s > 0.0 { target.mean + (*v - m) * (target.std / s) } else { target.mean };
            if *v < 1.0 {
                *v = 1.0;
                clamped = true;
            }
        }
        if !clamped {
            break;
        }
    }

    let spare = (span - count as u128) as f64;
    let excess: f64 = x.iter().map(|v| v - 1.0).sum();
    let scaled: Vec<f64> = if excess > 0.0 {
        x.iter().map(|v| (v - 1.0) * (spare / excess)).collect()
    } else {
        vec![spare / count as f64; count]
    };

    let mut gaps: Vec<u64> = scaled.iter().map(|e| 1 + e.floor() as u64).collect();
    let assigned: u128 = gaps.iter().map(|&g| g as u128).sum();
    let mut remaining = span.saturating_sub(assigned) as usize;
    if remaining > 0 {
        let mut order: Vec<usize> = (0..count).collect();
        order.sort_by(|&a, &b| {
            let fa = scaled[a] - scaled[a].floor();
            let fb = scaled[b] - scaled[b].floor();
            fb.total_cmp(&fa).then(a.cmp(&b))
        });
        for &i in order.iter().cycle() {
            if remaining == 0 {
                break;
            }
            gaps[i] += 1;
            remaining -= 1;
        }
    } else {
        // floating-point overshoot: take the surplus back from the largest gaps
        let mut surplus = assigned - span;
        let mut order: Vec<usize> = (0..count).collect();
        order.sort_by(|&a, &b| gaps[b].cmp(&gaps[a]).then(a.cmp(&b)));
        for &i in order.iter().cycle() {
            if surplus == 0 {
                break;
            }
            if gaps[i] > 1 {
                gaps[i] -= 1;
                surplus -= 1;
            }
        }
    }
    Ok(gaps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn values(spec: &DistributionSpec) -> Vec<i64> {
        generate(spec).unwrap().into_vec()
    }

    #[test]
    fn uniform_is_arithmetic() {
        let spec = DistributionSpec::new(Distribution::UniformGap { gap: 10 }, 5).with_start(10);
        assert_eq!(values(&spec), vec![10, 20, 30, 40, 50]);
    }

    #[test]
    fn increasing_matches_cumulative_sum() {
        let spec = DistributionSpec::new(
            Distribution::IncreasingGap {
                initial_gap: 1,
                growth_step: 1,
            },
            4,
        );
        assert_eq!(values(&spec), vec![0, 1, 3, 6]);

        // oracle: running sum of initial + i * step
        let spec = DistributionSpec::new(
            Distribution::IncreasingGap {
                initial_gap: 3,
                growth_step: 5,
            },
            50,
        )
        .with_start(-7);
        let mut expected = vec![-7i64];
        for i in 0..49 {
            let last = *expected.last().unwrap();
            expected.push(last + 3 + 5 * i);
        }
        assert_eq!(values(&spec), expected);
    }

    #[test]
    fn stepwise_zones_ascend() {
        let spec = DistributionSpec::new(Distribution::StepwiseGap { zone_gaps: vec![1, 10] }, 6);
        assert_eq!(values(&spec), vec![0, 1, 2, 12, 22, 32]);
        let inst = generate(&DistributionSpec::new(Distribution::stepwise(), 1000)).unwrap();
        let gaps: Vec<u64> = inst.gaps().collect();
        assert!(gaps.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(gaps[0], 1);
        assert_eq!(*gaps.last().unwrap(), 1000);
    }

    #[test]
    fn stepwise_rejects_non_ascending() {
        let spec = DistributionSpec::new(Distribution::StepwiseGap { zone_gaps: vec![5, 5] }, 10);
        assert!(matches!(generate(&spec), Err(GenerateError::InvalidParameter { .. })));
        let spec = DistributionSpec::new(Distribution::StepwiseGap { zone_gaps: vec![0, 5] }, 10);
        assert!(generate(&spec).is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(
            generate(&DistributionSpec::new(Distribution::uniform(), 0)),
            Err(GenerateError::ZeroSize)
        );
        assert!(generate(&DistributionSpec::new(Distribution::UniformGap { gap: 0 }, 3)).is_err());
        assert!(generate(&DistributionSpec::new(Distribution::GaussianGap { mean: -1.0, std: 1.0 }, 3)).is_err());
        assert!(generate(&DistributionSpec::new(Distribution::GaussianGap { mean: 5.0, std: -1.0 }, 3)).is_err());
        assert!(generate(&DistributionSpec::new(Distribution::Paretian { split: 1.0, base_gap: 1.0 }, 3)).is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let spec = DistributionSpec::new(Distribution::UniformGap { gap: u64::MAX / 2 }, 4);
        assert!(matches!(generate(&spec), Err(GenerateError::Overflow { .. })));
    }

    #[test]
    fn paretian_balances_split() {
        for seed in 0..5 {
            let spec = DistributionSpec::new(Distribution::paretian(), 1000).with_seed(seed);
            let v = values(&spec);
            let head: i128 = v[..800].iter().map(|&x| x as i128).sum();
            let tail: i128 = v[800..].iter().map(|&x| x as i128).sum();
            let total = (head + tail) as f64;
            assert!(((head - tail) as f64).abs() / total <= 0.01, "seed {seed}");
            assert!(paretian_imbalance(&v, 0.8) <= 0.01);
        }
    }

    #[test]
    fn stochastic_kinds_are_seeded() {
        for kind in [Distribution::paretian(), Distribution::gaussian()] {
            let a = generate(&DistributionSpec::new(kind.clone(), 500).with_seed(1)).unwrap();
            let b = generate(&DistributionSpec::new(kind.clone(), 500).with_seed(1)).unwrap();
            let c = generate(&DistributionSpec::new(kind.clone(), 500).with_seed(2)).unwrap();
            assert_eq!(a, b);
            assert_ne!(a, c);
        }
    }

    #[test]
    fn gap_summary_examples() {
        let s = gap_summary(&SortedInstance::new(vec![10, 20, 30, 40, 50]).unwrap()).unwrap();
        assert_eq!((s.gap_count, s.range, s.min, s.max), (4, 41, 10, 10));
        assert_eq!(s.mean, 10.0);
        assert_eq!(s.std, 0.0);

        let s = gap_summary(&SortedInstance::new(vec![0, 1]).unwrap()).unwrap();
        assert_eq!((s.gap_count, s.range, s.mean, s.std), (1, 2, 1.0, 0.0));

        // gaps {1, 2, 4}: mean 7/3, population variance 14/9
        let s = gap_summary(&SortedInstance::new(vec![2, 3, 5, 9]).unwrap()).unwrap();
        assert!((s.mean - 7.0 / 3.0).abs() < 1e-12);
        assert!((s.std - (14.0f64 / 9.0).sqrt()).abs() < 1e-12);

        assert_eq!(gap_summary(&SortedInstance::new(vec![3]).unwrap()), Err(TooFewElements(1)));
    }

    #[test]
    fn null_model_matches_target() {
        let source = generate(&DistributionSpec::new(Distribution::GaussianGap { mean: 50.0, std: 20.0 }, 20_000).with_seed(3)).unwrap();
        let target = gap_summary(&source).unwrap();
        let null = generate(&DistributionSpec::new(Distribution::NullModel { target }, 20_000).with_seed(4)).unwrap();
        let got = gap_summary(&null).unwrap();
        assert_eq!(got.range, target.range);
        assert_eq!(got.gap_count, target.gap_count);
        assert!((got.mean - target.mean).abs() / target.mean < 0.02);
        assert!((got.std - target.std).abs() / target.std < 0.10);
    }

    #[test]
    fn null_model_handles_heavy_spread() {
        // std equal to the mean forces plenty of clamping at 1
        let target = GapSummary {
            gap_count: 9_999,
            range: 9_999 * 40 + 1,
            mean: 40.0,
            std: 40.0,
            min: 1,
            max: 400,
        };
        let null = generate(&DistributionSpec::new(Distribution::NullModel { target }, 10_000).with_seed(9)).unwrap();
        let got = gap_summary(&null).unwrap();
        assert_eq!(got.range, target.range);
        assert!((got.std - 40.0).abs() / 40.0 < 0.10, "std {}", got.std);
    }

    #[test]
    fn null_model_constant_target() {
        let target = gap_summary(&SortedInstance::new((0..100).map(|i| i * 7).collect()).unwrap()).unwrap();
        let null = generate(&DistributionSpec::new(Distribution::NullModel { target }, 100)).unwrap();
        assert!(null.gaps().all(|g| g == 7));
    }

    #[test]
    fn null_model_rejects_mismatched_size() {
        let target = gap_summary(&SortedInstance::new(vec![0, 5, 10]).unwrap()).unwrap();
        assert!(generate(&DistributionSpec::new(Distribution::NullModel { target }, 10)).is_err());
    }
}

//! Seedable Monte Carlo estimation of proportions in `M(d, q)` and
//! `GL(d, q)`.
//!
//! Sample `j` of a run with seed `s` is drawn from a ChaCha8 generator seeded
//! with `s` on stream `j`, so any partition of `0..n` across workers yields
//! the same hits.

use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gf::Field;
use crate::interval::{Interval, Verdict};
use crate::matrix::Mat;
use crate::rational::{enclose, Rational};
use crate::{Error, Result};

/// Two-sided 99% standard normal quantile.
pub const Z_99: f64 = 2.5758293035489004;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    /// Uniform over `M(d, q)`.
    Algebra,
    /// Uniform over `GL(d, q)`.
    General,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    pub seed: u64,
    pub n: u64,
    pub target: Target,
}

/// Generator for sample number `index`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn sample_matrix<R: Rng + ?Sized>(d: usize, field: &Field, rng: &mut R) -> Mat {
    let q = field.size() as u32;
    let data = (0..d * d).map(|_| field.elem(rng.random_range(0..q))).collect();
    Mat::new(field, d, d, data)
}

/// Uniform element of `GL(d, q)` by rejection from `M(d, q)`.
pub fn sample_gl<R: Rng + ?Sized>(d: usize, field: &Field, rng: &mut R) -> Mat {
    loop {
        let m = sample_matrix(d, field, rng);
        if m.is_invertible() {
            return m;
        }
    }
}

pub fn draw(d: usize, field: &Field, cfg: &SampleConfig, index: u64) -> Mat {
    let mut rng = sample_rng(cfg.seed, index);
    match cfg.target {
        Target::Algebra => sample_matrix(d, field, &mut rng),
        Target::General => sample_gl(d, field, &mut rng),
    }
}

/// Number of samples with index in `lo..hi` satisfying `pred`.
pub fn count_hits<P>(pred: P, d: usize, field: &Field, cfg: &SampleConfig, lo: u64, hi: u64) -> u64
where
    P: Fn(&Mat) -> bool,
{
    (lo..hi).filter(|&j| pred(&draw(d, field, cfg, j))).count() as u64
}

/// Wilson score interval for `hits` successes in `n` trials.
pub fn wilson(hits: u64, n: u64, z: f64) -> (f64, f64) {
    assert!(n > 0 && hits <= n);
    let nf = n as f64;
    let p = hits as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z * libm::sqrt(p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)) / denom;
    let lo = if hits == 0 { 0.0 } else { (center - half).clamp(0.0, p) };
    let hi = if hits == n { 1.0 } else { (center + half).clamp(p, 1.0) };
    (lo, hi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// The claim is `proportion > bound`.
    Lower,
    /// The claim is `proportion ≤ bound`.
    Upper,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedBound {
    pub name: String,
    pub value: Interval,
    pub direction: Direction,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProportionReport {
    pub n: u64,
    pub hits: u64,
    pub exact: Option<Rational>,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub bounds: Vec<(NamedBound, Verdict)>,
}

impl ProportionReport {
    pub fn new(hits: u64, n: u64, exact: Option<Rational>, bounds: Vec<NamedBound>) -> ProportionReport {
        let (ci_low, ci_high) = wilson(hits, n, Z_99);
        let estimate = hits as f64 / n as f64;
        let mut report = ProportionReport { n, hits, exact, estimate, ci_low, ci_high, bounds: Vec::new() };
        report.bounds = bounds.into_iter().map(|b| { let v = report.judge(&b); (b, v) }).collect();
        report
    }

    /// Definitive when the exact value is known; otherwise the sample can
    /// only contradict the claim, never confirm it.
    fn judge(&self, b: &NamedBound) -> Verdict {
        if let Some(x) = &self.exact {
            let x = enclose(x);
            return match b.direction {
                Direction::Lower => Interval::verdict_gt(x, b.value),
                Direction::Upper => Interval::verdict_le(x, b.value),
            };
        }
        let violated = match b.direction {
            Direction::Lower => self.ci_high < b.value.lo,
            Direction::Upper => self.ci_low > b.value.hi,
        };
        if violated {
            Verdict::Violated
        } else {
            Verdict::Inconclusive
        }
    }

    pub fn ci_contains(&self, r: &Rational) -> bool {
        let e = enclose(r);
        self.ci_low <= e.lo && e.hi <= self.ci_high
    }

    /// The whole interval sits strictly above `b`.
    pub fn ci_above(&self, b: Interval) -> bool {
        self.ci_low > b.hi
    }

    pub fn worst_verdict(&self) -> Option<Verdict> {
        let vs = self.bounds.iter().map(|(_, v)| *v);
        if vs.clone().any(|v| v == Verdict::Violated) {
            Some(Verdict::Violated)
        } else if vs.clone().any(|v| v == Verdict::Inconclusive) {
            Some(Verdict::Inconclusive)
        } else {
            vs.clone().next().map(|_| Verdict::Holds)
        }
    }
}

/// Sequential Monte Carlo run; parallel drivers split `0..n` and sum
/// [`count_hits`] instead.
pub fn monte_carlo<P>(
    pred: P,
    d: usize,
    field: &Field,
    cfg: &SampleConfig,
    budget: u128,
    exact: Option<Rational>,
    bounds: Vec<NamedBound>,
) -> Result<ProportionReport>
where
    P: Fn(&Mat) -> bool,
{
    if cfg.n == 0 {
        return Err(Error::RangeError("sample count must be positive".into()));
    }
    if cfg.n as u128 > budget {
        return Err(Error::BudgetExceeded { needed: cfg.n as u128, budget });
    }
    let hits = count_hits(pred, d, field, cfg, 0, cfg.n);
    Ok(ProportionReport::new(hits, cfg.n, exact, bounds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use alloc::collections::BTreeMap;
    use alloc::vec;

    fn fq(q: u64) -> Field {
        Field::with_size(q).unwrap()
    }

    fn cfg(seed: u64, n: u64, target: Target) -> SampleConfig {
        SampleConfig { seed, n, target }
    }

    #[test]
    fn gl_1_2_is_trivial() {
        let f = fq(2);
        for j in 0..50 {
            assert!(draw(1, &f, &cfg(3, 50, Target::General), j).is_identity());
        }
    }

    #[test]
    fn invertibility_rate() {
        let f = fq(2);
        let r = monte_carlo(|m| m.is_invertible(), 2, &f, &cfg(1, 100_000, Target::Algebra), 1 << 24, None, vec![]).unwrap();
        assert!(r.ci_contains(&ratio(3, 8)), "{r:?}");
    }

    #[test]
    fn determinism_across_partitions() {
        let f = fq(3);
        let c = cfg(99, 3000, Target::Algebra);
        let whole = count_hits(|m| m.is_nilpotent(), 2, &f, &c, 0, 3000);
        let parts: u64 = [(0, 1000), (1000, 1001), (1001, 3000)]
            .iter()
            .map(|&(lo, hi)| count_hits(|m| m.is_nilpotent(), 2, &f, &c, lo, hi))
            .sum();
        assert_eq!(whole, parts);
        assert_eq!(draw(2, &f, &c, 17), draw(2, &f, &c, 17));
    }

    #[test]
    fn constant_predicate() {
        let f = fq(2);
        let r = monte_carlo(|_| true, 2, &f, &cfg(0, 1000, Target::Algebra), 1 << 24, None, vec![]).unwrap();
        assert_eq!(r.estimate, 1.0);
        assert_eq!(r.ci_high, 1.0);
        assert!(r.ci_low < 1.0 && r.ci_low > 0.99);
        let r = monte_carlo(|_| false, 2, &f, &cfg(0, 1000, Target::Algebra), 1 << 24, None, vec![]).unwrap();
        assert_eq!((r.estimate, r.ci_low), (0.0, 0.0));
    }

    #[test]
    fn nilpotent_rate() {
        let f = fq(2);
        let r = monte_carlo(|m| m.is_nilpotent(), 2, &f, &cfg(5, 100_000, Target::Algebra), 1 << 24, None, vec![]).unwrap();
        assert!(r.ci_contains(&ratio(1, 4)));
    }

    #[test]
    fn wilson_properties() {
        for (h, n) in [(0u64, 10u64), (3, 10), (10, 10), (500, 1000), (1, 100_000)] {
            let (lo, hi) = wilson(h, n, Z_99);
            let p = h as f64 / n as f64;
            assert!(0.0 <= lo && lo <= p && p <= hi && hi <= 1.0);
        }
    }

    #[test]
    fn gl_sampler_is_uniform() {
        let f = fq(2);
        let n = 60_000u64;
        let c = cfg(2024, n, Target::General);
        let mut cells: BTreeMap<u128, u64> = BTreeMap::new();
        for j in 0..n {
            let g = draw(2, &f, &c, j);
            assert!(g.is_invertible());
            *cells.entry(g.index()).or_default() += 1;
        }
        assert_eq!(cells.len(), 6);
        let e = n as f64 / 6.0;
        let chi2: f64 = cells.values().map(|&o| (o as f64 - e) * (o as f64 - e) / e).sum();
        // chi-square upper 0.001 quantile with 5 degrees of freedom
        assert!(chi2 < 20.515, "chi2 = {chi2}");
    }

    #[test]
    fn verdicts() {
        let b = |v: f64, direction| NamedBound { name: "b".into(), value: Interval::point(v), direction };
        let r = ProportionReport::new(50, 100, None, vec![b(0.9, Direction::Lower), b(0.1, Direction::Lower), b(0.1, Direction::Upper)]);
        let vs: Vec<Verdict> = r.bounds.iter().map(|(_, v)| *v).collect();
        assert_eq!(vs, vec![Verdict::Violated, Verdict::Inconclusive, Verdict::Violated]);
        let r = ProportionReport::new(50, 100, Some(ratio(1, 2)), vec![b(0.1, Direction::Lower), b(0.9, Direction::Lower)]);
        let vs: Vec<Verdict> = r.bounds.iter().map(|(_, v)| *v).collect();
        assert_eq!(vs, vec![Verdict::Holds, Verdict::Violated]);
        assert_eq!(r.worst_verdict(), Some(Verdict::Violated));
    }

    #[test]
    fn budget_and_empty_runs() {
        let f = fq(2);
        assert!(matches!(
            monte_carlo(|_| true, 1, &f, &cfg(0, 10, Target::Algebra), 5, None, vec![]),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(monte_carlo(|_| true, 1, &f, &cfg(0, 0, Target::Algebra), 5, None, vec![]).is_err());
    }
}

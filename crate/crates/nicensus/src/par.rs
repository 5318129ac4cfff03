//! Rayon drivers over matrix index ranges.
//!
//! Work is cut into fixed-size chunks independent of the thread count and
//! the per-chunk results are merged in chunk order, so every output
//! (including which witness is reported first) is the same for any
//! `--threads`.

use nicensus_core::census::{count_matrices, count_ni, ni_verify, ni_verify_range, FlagCensus, MatrixCounts, NiReport, NiSpec};
use nicensus_core::embed::{membership_counts, primary_cyclic_counts, proposition_sweep, MembershipCounts, PropositionSweep, Tower};
use nicensus_core::estimate::{count_hits, sample_rng, NamedBound, ProportionReport, SampleConfig};
use nicensus_core::matrix::{jordan_sweep, JordanSweep};
use nicensus_core::rational::Rational;
use nicensus_core::{Error, Field, Mat, Poly};
use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{CliError, Result};

pub const CHUNK: u128 = 2048;

/// Default enumeration cap when neither `--budget` nor `NICENSUS_BUDGET` is set.
pub const DEFAULT_BUDGET: u128 = 1 << 24;

pub fn chunks(total: u128, size: u128) -> Vec<(u128, u128)> {
    (0..total.div_ceil(size)).map(|j| (j * size, ((j + 1) * size).min(total))).collect()
}

fn map_chunks<T: Send>(total: u128, f: impl Fn(u128, u128) -> T + Sync + Send) -> Vec<T> {
    chunks(total, CHUNK).into_par_iter().map(|(lo, hi)| f(lo, hi)).collect()
}

/// Runs `f` on a pool of `threads` workers, or on the global pool.
pub fn in_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Usage(format!("cannot start {n} threads: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// `|M(d, q)|`, or `BudgetExceeded` when it is above `budget`.
pub fn algebra_within(q: u64, d: usize, budget: u128) -> Result<u128> {
    let needed = Mat::algebra_size(q, d).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget }.into());
    }
    Ok(needed)
}

fn merge_all<T>(parts: Vec<nicensus_core::Result<T>>, init: T, merge: impl Fn(T, T) -> T) -> Result<T> {
    let mut acc = init;
    for p in parts {
        acc = merge(acc, p?);
    }
    Ok(acc)
}

/// Exhaustive flag census of `spec` on `M(d, q)`.
pub fn census(spec: &dyn NiSpec, field: &Field, d: usize, budget: u128) -> Result<FlagCensus> {
    let q = field.size();
    let total = algebra_within(q, d, budget)?;
    let parts = map_chunks(total, |lo, hi| count_matrices(spec, field, d, lo, hi));
    let counts = merge_all(parts, MatrixCounts::new(d), MatrixCounts::merge)?;
    let ni = (0..=d)
        .map(|i| {
            let size = Mat::algebra_size(q, i).expect("smaller than the algebra");
            map_chunks(size, |lo, hi| count_ni(spec, field, d, i, lo, hi))
                .into_iter()
                .fold((BigUint::ZERO, BigUint::ZERO), |(n, g), (a, b)| (n + a, g + b))
        })
        .collect();
    Ok(FlagCensus::assemble(spec.name(), d, q, counts, ni))
}

/// Exhaustive NI audit when `M(d, q)` fits the budget, else `trials` sampled
/// matrices drawn from `seed`.
pub fn ni_audit(spec: &dyn NiSpec, field: &Field, d: usize, budget: u128, trials: u64, seed: u64) -> NiReport {
    match algebra_within(field.size(), d, budget) {
        Ok(total) => map_chunks(total, |lo, hi| ni_verify_range(spec, field, d, lo, hi))
            .into_iter()
            .fold(NiReport::default(), NiReport::merge),
        Err(_) => ni_verify(spec, field, d, trials, budget, &mut sample_rng(seed, 0)),
    }
}

pub fn mc_hits<P>(pred: &P, d: usize, field: &Field, cfg: &SampleConfig) -> u64
where
    P: Fn(&Mat) -> bool + Sync,
{
    chunks(cfg.n as u128, CHUNK)
        .into_par_iter()
        .map(|(lo, hi)| count_hits(pred, d, field, cfg, lo as u64, hi as u64))
        .sum()
}

pub fn monte_carlo<P>(
    pred: &P,
    d: usize,
    field: &Field,
    cfg: &SampleConfig,
    budget: u128,
    exact: Option<Rational>,
    bounds: Vec<NamedBound>,
) -> Result<ProportionReport>
where
    P: Fn(&Mat) -> bool + Sync,
{
    if cfg.n == 0 {
        return Err(CliError::Usage("--n must be positive".into()));
    }
    if cfg.n as u128 > budget {
        return Err(Error::BudgetExceeded { needed: cfg.n as u128, budget }.into());
    }
    let hits = mc_hits(pred, d, field, cfg);
    Ok(ProportionReport::new(hits, cfg.n, exact, bounds))
}

pub fn membership(tower: &Tower, c: usize, budget: u128, cross_check: bool) -> Result<MembershipCounts> {
    let total = algebra_within(tower.ext().size(), c, budget)?;
    let parts = map_chunks(total, |lo, hi| membership_counts(tower, c, lo, hi, cross_check));
    merge_all(parts, MembershipCounts::default(), MembershipCounts::merge)
}

pub fn primary_cyclic(tower: &Tower, c: usize, fs: &[Poly], budget: u128) -> Result<(u64, Vec<u64>)> {
    let total = algebra_within(tower.ext().size(), c, budget)?;
    let parts = map_chunks(total, |lo, hi| primary_cyclic_counts(tower, c, fs, lo, hi));
    merge_all(parts, (0, vec![0; fs.len()]), |(g, mut a), (h, b)| {
        a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        (g + h, a)
    })
}

pub fn proposition(tower: &Tower, c: usize, budget: u128) -> Result<PropositionSweep> {
    let total = algebra_within(tower.ext().size(), c, budget)?;
    let parts = map_chunks(total, |lo, hi| proposition_sweep(tower, c, lo, hi));
    merge_all(parts, PropositionSweep::default(), PropositionSweep::merge)
}

pub fn jordan(field: &Field, n: usize, budget: u128) -> Result<JordanSweep> {
    let total = algebra_within(field.size(), n, budget)?;
    let parts = map_chunks(total, |lo, hi| jordan_sweep(field, n, lo, hi));
    merge_all(parts, JordanSweep::default(), JordanSweep::merge)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nicensus_core::census::PrimaryCyclicNotT;
    use nicensus_core::estimate::Target;

    #[test]
    fn chunking_covers_range() {
        assert_eq!(chunks(5, 2), vec![(0, 2), (2, 4), (4, 5)]);
        assert!(chunks(0, 2).is_empty());
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let f = Field::with_size(3).unwrap();
        let a = in_pool(Some(1), || census(&PrimaryCyclicNotT, &f, 2, 1 << 20).unwrap()).unwrap();
        let b = in_pool(Some(3), || census(&PrimaryCyclicNotT, &f, 2, 1 << 20).unwrap()).unwrap();
        assert_eq!(a, b);
        let cfg = SampleConfig { seed: 7, n: 5000, target: Target::Algebra };
        let pred = |m: &Mat| m.is_invertible();
        let h1 = in_pool(Some(1), || mc_hits(&pred, 2, &f, &cfg)).unwrap();
        let h4 = in_pool(Some(4), || mc_hits(&pred, 2, &f, &cfg)).unwrap();
        assert_eq!(h1, h4);
        assert_eq!(h1, count_hits(pred, 2, &f, &cfg, 0, 5000));
    }

    #[test]
    fn budget_is_enforced() {
        let f = Field::with_size(2).unwrap();
        assert!(matches!(
            census(&PrimaryCyclicNotT, &f, 3, 100),
            Err(CliError::Core(Error::BudgetExceeded { needed: 512, budget: 100 }))
        ));
    }
}

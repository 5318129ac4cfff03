//! Exact / sampled / theory comparison for the large-degree primary-cyclic
//! proportion `|N(c, q, b)| / |M(c, q^b)|`.

use nicensus_core::embed::Tower;
use nicensus_core::estimate::{Direction, NamedBound, ProportionReport, SampleConfig, Target};
use nicensus_core::interval::{Interval, Verdict};
use nicensus_core::quokka::{thm_pc_m_bound, thm_pc_m_exact};
use nicensus_core::rational::{ratio, Rational};
use nicensus_core::Mat;
use serde_json::{json, Value};

use crate::error::Result;
use crate::json;
use crate::par;

/// Instances with at most this many matrices are also counted exhaustively.
pub const EXHAUSTIVE_CAP: u128 = 1 << 16;

#[derive(Clone, Debug)]
pub struct CompareRow {
    pub c: usize,
    pub q: u64,
    pub b: u32,
    pub report: ProportionReport,
    /// Proportion from enumerating all of `M(c, q^b)`, when small enough.
    pub exhaustive: Option<Rational>,
    pub bound: Option<Interval>,
}

impl CompareRow {
    pub fn instance(&self) -> String {
        format!("pc-large-degree({}):M({},{})", self.b, self.c, self.q.pow(self.b))
    }

    pub fn exact(&self) -> &Rational {
        self.report.exact.as_ref().expect("closed form is always attached")
    }

    pub fn exact_in_ci(&self) -> bool {
        self.report.ci_contains(self.exact())
    }

    pub fn bound_positive(&self) -> bool {
        self.bound.is_some_and(|b| b.lo > 0.0)
    }

    /// `Some(ci_low > bound)` when the bound is positive, else `None`.
    pub fn ci_above_bound(&self) -> Option<bool> {
        self.bound.filter(|_| self.bound_positive()).map(|b| self.report.ci_above(b))
    }

    /// Definitive failures are a closed form disagreeing with enumeration or
    /// a violated bound; a sample that misses the exact value or fails to
    /// clear a positive bound is only inconclusive.
    pub fn verdict(&self) -> Verdict {
        if self.exhaustive.as_ref().is_some_and(|e| e != self.exact())
            || self.report.worst_verdict() == Some(Verdict::Violated)
        {
            Verdict::Violated
        } else if !self.exact_in_ci() || self.ci_above_bound() == Some(false) {
            Verdict::Inconclusive
        } else {
            Verdict::Holds
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "instance": self.instance(),
            "c": self.c,
            "q": self.q,
            "b": self.b,
            "report": json::proportion_report(&self.report),
            "exhaustive": json::opt(self.exhaustive.as_ref(), json::rational),
            "bound_positive": self.bound_positive(),
            "ci_above_bound": self.ci_above_bound(),
            "verdict": json::verdict(self.verdict()),
        })
    }
}

pub fn compare_one(c: usize, q: u64, b: u32, n: u64, seed: u64, budget: u128) -> Result<CompareRow> {
    let tower = Tower::with_sizes(q, b)?;
    let field = tower.ext().clone();
    let exact = thm_pc_m_exact(c, q, b);
    let exhaustive = match par::algebra_within(field.size(), c, budget.min(EXHAUSTIVE_CAP)) {
        Ok(_) => {
            let counts = par::membership(&tower, c, budget, false)?;
            Some(ratio(counts.members, counts.total))
        }
        Err(_) => None,
    };
    let bound = thm_pc_m_bound(c, q, b).ok();
    let bounds = bound
        .map(|value| NamedBound { name: "algebra-lower-bound".into(), value, direction: Direction::Lower })
        .into_iter()
        .collect();
    let cfg = SampleConfig { seed, n, target: Target::Algebra };
    let pred = |x: &Mat| tower.pc_membership(x).expect("matrix lives over the tower's top field").member;
    let report = par::monte_carlo(&pred, c, &field, &cfg, budget, Some(exact), bounds)?;
    Ok(CompareRow { c, q, b, report, exhaustive, bound })
}

pub fn compare(instances: &[(usize, u64, u32)], n: u64, seed: u64, budget: u128) -> Result<Vec<CompareRow>> {
    instances.iter().map(|&(c, q, b)| compare_one(c, q, b, n, seed, budget)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_instance_is_exact() {
        let row = compare_one(2, 2, 2, 20_000, 1, 1 << 24).unwrap();
        assert_eq!(row.exact(), &ratio(7, 16));
        assert_eq!(row.exhaustive, Some(ratio(7, 16)));
        assert!(!row.bound_positive());
        assert_eq!(row.report.bounds[0].1, Verdict::Holds);
        assert_eq!(row.verdict(), Verdict::Holds);
        assert_eq!(row.instance(), "pc-large-degree(2):M(2,4)");
    }
}

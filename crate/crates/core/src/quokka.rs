//! Cycle-type sums over `S_c` and the closed-form proportions of the
//! large-degree primary-cyclic sets in `GL(c, q^b)` and `M(c, q^b)`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Signed};

use crate::census::{flag_weight, omega, pc_large_degree_ni};
use crate::interval::{Interval, Verdict};
use crate::poly::irr_count;
use crate::rational::{enclose, from_biguint, integer, ratio, Rational};
use crate::{Error, Result};

/// A partition of `c`, parts in non-increasing order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycleType {
    pub parts: Vec<usize>,
}

impl CycleType {
    pub fn degree(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `(j, m_j)` for each distinct part size `j`, ascending.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in self.parts.iter().rev() {
            match out.last_mut() {
                Some((j, m)) if *j == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    pub fn has_part(&self, r: usize) -> bool {
        self.parts.contains(&r)
    }

    /// `1 / ∏_j j^{m_j} m_j!`.
    pub fn class_proportion(&self) -> Rational {
        let den: BigUint = self
            .multiplicities()
            .into_iter()
            .map(|(j, m)| BigUint::from(j).pow(m as u32) * (1..=m as u64).product::<u64>())
            .product();
        from_biguint(den).recip()
    }
}

fn partitions(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<CycleType>) {
    if n == 0 {
        out.push(CycleType { parts: prefix.clone() });
        return;
    }
    for p in (1..=max.min(n)).rev() {
        prefix.push(p);
        partitions(n - p, p, prefix, out);
        prefix.pop();
    }
}

/// All cycle types of `S_c` with their class proportions.
pub fn cycle_types(c: usize) -> Vec<(CycleType, Rational)> {
    let mut out = Vec::new();
    partitions(c, c, &mut vec![], &mut out);
    out.into_iter().map(|t| { let p = t.class_proportion(); (t, p) }).collect()
}

fn check_large(c: usize, r: usize) -> Result<()> {
    if 2 * r <= c || r > c {
        return Err(Error::RangeError(alloc::format!("need c/2 < r <= c, got c = {c}, r = {r}")));
    }
    Ok(())
}

/// Proportion of permutations in `S_c` with an `r`-cycle, for `r > c/2`.
pub fn r_cycle_proportion(c: usize, r: usize) -> Result<Rational> {
    check_large(c, r)?;
    Ok(cycle_types(c).into_iter().filter(|(t, _)| t.has_part(r)).map(|(_, p)| p).sum())
}

/// Class-weighted torus sum: `torus` on classes with an `r`-part, zero
/// elsewhere.
pub fn quokka_class_sum(c: usize, r: usize, torus: &Rational) -> Result<Rational> {
    Ok(r_cycle_proportion(c, r)? * torus)
}

/// `|N(c, q, b; f)| / |GL(c, q^b)|` for one `f ∈ Irr_{br}(q)` with `r > c/2`,
/// from the class sum with torus proportion `br / (q^{br} - 1)`.
pub fn quokka_pc_single(c: usize, q: u64, b: u32, r: usize) -> Result<Rational> {
    check_large(c, r)?;
    let m = b * r as u32;
    let torus = ratio(m as u64, BigUint::from(q).pow(m) - 1u32);
    quokka_class_sum(c, r, &torus)
}

/// `|Irr_m(q)|` without the polynomial `t`.
pub fn irr_count_not_t(m: u32, q: u64) -> BigUint {
    let n = irr_count(m, q);
    if m == 1 {
        n - 1u32
    } else {
        n
    }
}

/// `|N(c, q, b, r)| / |GL(c, q^b)| = b |Irr_{br}(q) ∖ {t}| / (q^{br} - 1)`.
pub fn quokka_pc_r(c: usize, q: u64, b: u32, r: usize) -> Result<Rational> {
    check_large(c, r)?;
    let m = b * r as u32;
    Ok(from_biguint(irr_count_not_t(m, q) * b) / from_biguint(BigUint::from(q).pow(m) - 1u32))
}

/// Exact check of `(1/r)(1 - 2 q^{-br/2}) < value ≤ 1/r`.
pub fn pc_r_bounds_hold(q: u64, b: u32, r: usize, value: &Rational) -> bool {
    let rr = integer(r as u64);
    let upper = value <= &rr.recip();
    // value > (1 - 2 q^{-br/2}) / r  ⟺  2 q^{-br/2} > 1 - r·value
    let gap = Rational::one() - rr * value;
    let lower = !gap.is_positive() || &gap * &gap * from_biguint(BigUint::from(q).pow(b * r as u32)) < integer(4u32);
    upper && lower
}

/// `|N(c, q, b)| / |GL(c, q^b)|`, the sum over `r > c/2`.
pub fn ngl_exact(c: usize, q: u64, b: u32) -> Rational {
    (c / 2 + 1..=c).map(|r| quokka_pc_r(c, q, b, r).expect("r is large")).sum()
}

/// `(log 2 - 1/(c+1) - 2/q^{bc/4}, log 2 + 1/c)` as enclosures.
pub fn ngl_band(c: usize, q: u64, b: u32) -> (Interval, Interval) {
    let ln2 = Interval::ln2();
    let one = Interval::from_u64(1);
    let inv = |n: u64| one.div(Interval::from_u64(n));
    let quarter = Interval::root_pow(q, b * c as u32, 2);
    let lower = ln2.sub(inv(c as u64 + 1)).sub(Interval::from_u64(2).div(quarter));
    let upper = ln2.add(inv(c as u64));
    (lower, upper)
}

pub fn harmonic_sum(c: usize) -> Rational {
    (c / 2 + 1..=c).map(|r| ratio(1, r as u64)).sum()
}

/// `(log 2 - 1/(c+1), log 2 + 1/c)` as enclosures.
pub fn harmonic_band(c: usize) -> (Interval, Interval) {
    let ln2 = Interval::ln2();
    let one = Interval::from_u64(1);
    (
        ln2.sub(one.div(Interval::from_u64(c as u64 + 1))),
        ln2.add(one.div(Interval::from_u64(c as u64))),
    )
}

/// `log 2 - (log 2 + 3)/c - 2(1 - 1/c)/q^{b/2}`, for `b, c ≥ 2`.
pub fn thm_pc_m_bound(c: usize, q: u64, b: u32) -> Result<Interval> {
    if c < 2 || b < 2 {
        return Err(Error::RangeError(alloc::format!("need b, c >= 2, got b = {b}, c = {c}")));
    }
    let ln2 = Interval::ln2();
    let cc = Interval::from_u64(c as u64);
    let one = Interval::from_u64(1);
    let t1 = ln2.add(Interval::from_u64(3)).div(cc);
    let t2 = Interval::from_u64(2).mul(one.sub(one.div(cc))).div(Interval::root_pow(q, b, 1));
    Ok(ln2.sub(t1).sub(t2))
}

/// Exact `|N|/|M(c, q^b)|` for the large-degree primary-cyclic set, assembled
/// from the flag sum over `F_{q^b}` with per-dimension proportions
/// [`pc_large_degree_ni`].
pub fn thm_pc_m_exact(c: usize, q: u64, b: u32) -> Rational {
    let qb = q.pow(b);
    let sum: Rational = (0..=c).map(|i| flag_weight(c, i, qb) * pc_large_degree_ni(i, q, b)).sum();
    sum * omega(c as u32, qb)
}

/// The `i = 1` proportion used by [`thm_pc_m_exact`] next to the value `1`
/// that treating every `1×1` invertible matrix as a member would give.
pub fn n1_discrepancy(q: u64, b: u32) -> (Rational, Rational) {
    (pc_large_degree_ni(1, q, b), Rational::one())
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundSheet {
    pub c: usize,
    pub q: u64,
    pub b: u32,
    pub exact_by_r: Vec<(usize, Rational)>,
    pub exact_total: Rational,
    /// Lower end of the GL band, `c ≥ 2` only.
    pub lower: Option<Interval>,
    pub upper: Option<Interval>,
    /// The lower bound on the proportion in `M(c, q^b)`, `b, c ≥ 2` only.
    pub thm_bound: Option<Interval>,
    pub thm_exact: Rational,
    /// Every `r` satisfies the per-`r` sandwich.
    pub per_r_bounds: bool,
    pub band_lower: Option<Verdict>,
    pub band_upper: Option<Verdict>,
    pub thm: Option<Verdict>,
}

impl BoundSheet {
    pub fn new(c: usize, q: u64, b: u32) -> BoundSheet {
        let exact_by_r: Vec<(usize, Rational)> =
            (c / 2 + 1..=c).map(|r| (r, quokka_pc_r(c, q, b, r).expect("r is large"))).collect();
        let per_r_bounds = exact_by_r.iter().all(|(r, v)| pc_r_bounds_hold(q, b, *r, v));
        let exact_total: Rational = exact_by_r.iter().map(|(_, v)| v).sum();
        let (lower, upper) = if c >= 2 {
            let (l, u) = ngl_band(c, q, b);
            (Some(l), Some(u))
        } else {
            (None, None)
        };
        let e = enclose(&exact_total);
        let band_lower = lower.map(|l| Interval::verdict_gt(e, l));
        let band_upper = upper.map(|u| Interval::verdict_le(e, u));
        let thm_bound = thm_pc_m_bound(c, q, b).ok();
        let thm_exact = thm_pc_m_exact(c, q, b);
        let thm = thm_bound.map(|t| Interval::verdict_ge(enclose(&thm_exact), t));
        BoundSheet { c, q, b, exact_by_r, exact_total, lower, upper, thm_bound, thm_exact, per_r_bounds, band_lower, band_upper, thm }
    }

    /// Number of definitive failures among the sheet's checks.
    pub fn violations(&self) -> usize {
        let verdicts = [self.band_lower, self.band_upper, self.thm];
        verdicts.iter().flatten().filter(|v| **v == Verdict::Violated).count() + usize::from(!self.per_r_bounds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::Tower;
    use crate::gf::Field;
    use crate::matrix::Mat;
    use crate::poly::irr_enumerate;
    use num_traits::Zero;

    #[test]
    fn cycle_type_examples() {
        let one = cycle_types(1);
        assert_eq!(one, vec![(CycleType { parts: vec![1] }, Rational::one())]);
        let three = cycle_types(3);
        let lookup = |parts: &[usize]| three.iter().find(|(t, _)| t.parts == parts).unwrap().1.clone();
        assert_eq!(lookup(&[3]), ratio(1, 3));
        assert_eq!(lookup(&[2, 1]), ratio(1, 2));
        assert_eq!(lookup(&[1, 1, 1]), ratio(1, 6));
        for c in 1..=12 {
            let all = cycle_types(c);
            assert!(all.iter().all(|(t, _)| t.degree() == c));
            assert_eq!(all.iter().map(|(_, p)| p).sum::<Rational>(), Rational::one());
        }
        assert_eq!(cycle_types(12).len(), 77);
    }

    #[test]
    fn r_cycle_examples() {
        assert_eq!(r_cycle_proportion(3, 2).unwrap(), ratio(1, 2));
        assert_eq!(r_cycle_proportion(2, 2).unwrap(), ratio(1, 2));
        assert_eq!(r_cycle_proportion(5, 3).unwrap(), ratio(1, 3));
        assert!(matches!(r_cycle_proportion(4, 2), Err(Error::RangeError(_))));
        for c in 1..=12 {
            for r in c / 2 + 1..=c {
                assert_eq!(r_cycle_proportion(c, r).unwrap(), ratio(1, r as u64));
            }
        }
    }

    #[test]
    fn single_closed_form() {
        assert_eq!(quokka_pc_single(2, 2, 1, 2).unwrap(), ratio(1, 3));
        assert_eq!(quokka_pc_single(1, 2, 2, 1).unwrap(), ratio(2, 3));
        assert_eq!(quokka_pc_single(2, 2, 2, 2).unwrap(), ratio(2, 15));
        for c in 1..=10 {
            for b in 1..=3u32 {
                for q in [2u64, 3] {
                    for r in c / 2 + 1..=c {
                        let expect = ratio(b as u64, BigUint::from(q).pow(b * r as u32) - 1u32);
                        assert_eq!(quokka_pc_single(c, q, b, r).unwrap(), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn single_sums_to_r_value() {
        for c in 1..=6 {
            for b in 1..=3u32 {
                for q in [2u64, 3] {
                    for r in c / 2 + 1..=c {
                        let n = from_biguint(irr_count_not_t(b * r as u32, q));
                        assert_eq!(quokka_pc_single(c, q, b, r).unwrap() * n, quokka_pc_r(c, q, b, r).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn r_examples() {
        assert_eq!(quokka_pc_r(1, 2, 2, 1).unwrap(), ratio(2, 3));
        assert_eq!(quokka_pc_r(2, 3, 1, 2).unwrap(), ratio(3, 8));
        assert_eq!(quokka_pc_r(2, 2, 1, 2).unwrap(), ratio(1, 3));
        assert!(pc_r_bounds_hold(2, 2, 1, &ratio(2, 3)));
        assert!(!pc_r_bounds_hold(2, 1, 2, &ratio(2, 3)));
        assert!(!pc_r_bounds_hold(2, 1, 2, &Rational::zero()));
    }

    #[test]
    fn per_r_bounds_on_grid() {
        for c in 1..=12 {
            for b in 1..=4u32 {
                for q in [2u64, 3, 4, 5] {
                    for r in c / 2 + 1..=c {
                        let v = quokka_pc_r(c, q, b, r).unwrap();
                        assert!(pc_r_bounds_hold(q, b, r, &v), "c={c} b={b} q={q} r={r}");
                    }
                }
            }
        }
    }

    #[test]
    fn bands_on_grid() {
        for c in 2..=12 {
            let h = enclose(&harmonic_sum(c));
            let (lo, hi) = harmonic_band(c);
            assert_eq!(Interval::verdict_ge(h, lo), Verdict::Holds, "c={c}");
            assert_eq!(Interval::verdict_le(h, hi), Verdict::Holds, "c={c}");
            for b in 1..=4u32 {
                for q in [2u64, 3, 4, 5] {
                    let sheet = BoundSheet::new(c, q, b);
                    assert_eq!(sheet.band_lower, Some(Verdict::Holds), "{sheet:?}");
                    assert_eq!(sheet.band_upper, Some(Verdict::Holds), "{sheet:?}");
                    assert_eq!(sheet.violations(), 0);
                }
            }
        }
    }

    #[test]
    fn band_examples() {
        assert_eq!(ngl_exact(2, 2, 1), ratio(1, 3));
        let (lo, hi) = ngl_band(2, 2, 1);
        // log 2 - 1/3 - 2/sqrt(2)
        assert!(lo.lo < -1.05439 && lo.hi > -1.05440, "{lo}");
        assert!(hi.lo < 1.1932 && hi.hi > 1.1931);
        assert_eq!(harmonic_sum(2), ratio(1, 2));
        let s = BoundSheet::new(6, 2, 2);
        assert_eq!(s.exact_by_r.len(), 3);
    }

    #[test]
    fn theorem_bound_examples() {
        let b = thm_pc_m_bound(100, 2, 8).unwrap();
        assert!(b.lo > 0.5323 && b.hi < 0.5325, "{b}");
        let b = thm_pc_m_bound(2, 2, 2).unwrap();
        assert!(b.hi < 0.0);
        assert_eq!(thm_pc_m_exact(2, 2, 2), ratio(7, 16));
        assert!(thm_pc_m_bound(1, 2, 2).is_err());
        for c in 2..=12 {
            for b in 2..=4u32 {
                for q in [2u64, 3, 4, 5] {
                    let s = BoundSheet::new(c, q, b);
                    assert_ne!(s.thm, Some(Verdict::Violated), "{s:?}");
                }
            }
        }
    }

    #[test]
    fn n1_is_below_one() {
        assert_eq!(n1_discrepancy(2, 2), (ratio(2, 3), Rational::one()));
        assert_eq!(n1_discrepancy(3, 1).0, Rational::one());
    }

    /// `|{X ∈ GL(c, q^b) : blow_up(X) is f-primary cyclic}|` for each `f`.
    fn brute_force(c: usize, q: u64, b: u32, r: usize) -> Vec<Rational> {
        let tw = Tower::with_sizes(q, b).unwrap();
        let fs: Vec<_> = irr_enumerate(b as usize * r, tw.base(), 1 << 20)
            .unwrap()
            .into_iter()
            .filter(|f| !f.is_t())
            .collect();
        let mut counts = vec![0u64; fs.len()];
        let mut gl = 0u64;
        for idx in 0..Mat::algebra_size(tw.ext().size(), c).unwrap() {
            let x = Mat::from_index(tw.ext(), c, idx);
            if !x.is_invertible() {
                continue;
            }
            gl += 1;
            let y = tw.blow_up(&x).unwrap();
            for (k, f) in fs.iter().enumerate() {
                if y.is_primary_cyclic(f).unwrap() {
                    counts[k] += 1;
                }
            }
        }
        counts.into_iter().map(|n| ratio(n, gl)).collect()
    }

    #[test]
    fn single_matches_enumeration() {
        for (c, q, b, r) in [(2usize, 2u64, 1u32, 2usize), (2, 3, 1, 2), (1, 2, 2, 1), (3, 2, 1, 2), (3, 2, 1, 3), (1, 3, 2, 1), (1, 2, 3, 1)] {
            let expect = quokka_pc_single(c, q, b, r).unwrap();
            let got = brute_force(c, q, b, r);
            assert!(!got.is_empty());
            assert!(got.iter().all(|g| g == &expect), "({c},{q},{b},{r}): {got:?} vs {expect}");
        }
    }

    #[test]
    fn gl_sum_matches_membership() {
        for (c, q, b) in [(2usize, 2u64, 1u32), (2, 3, 1), (1, 2, 2), (3, 2, 1), (2, 2, 2)] {
            let tw = Tower::with_sizes(q, b).unwrap();
            let field: Field = tw.ext().clone();
            let (mut hits, mut gl) = (0u64, 0u64);
            for idx in 0..Mat::algebra_size(field.size(), c).unwrap() {
                let x = Mat::from_index(&field, c, idx);
                if x.is_invertible() {
                    gl += 1;
                    hits += u64::from(tw.pc_membership(&x).unwrap().member);
                }
            }
            assert_eq!(ratio(hits, gl), ngl_exact(c, q, b), "({c},{q},{b})");
        }
    }
}

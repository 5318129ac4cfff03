//! Dense univariate polynomials over a [`Field`].
//!
//! Factorization is fully deterministic: square-free split, distinct-degree
//! split, then equal-degree splitting driven by candidate polynomials taken
//! in canonical order instead of random ones.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::gf::{prime_divisors, Elem, Field};
use crate::{Error, Result};

/// A polynomial with coefficients stored low degree first and no trailing
/// zeros, so the zero polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Elem>,
}

/// `unit * prod f_i^{m_i}` with the `f_i` monic irreducible, distinct, and in
/// canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Elem,
    pub factors: Vec<(Poly, usize)>,
}

impl Factorization {
    pub fn recompose(&self, field: &Field) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(field, self.unit), |acc, (f, m)| acc.mul(&f.pow(*m as u64)))
    }

    /// Multiplicity of the irreducible `f` (zero when absent).
    pub fn multiplicity(&self, f: &Poly) -> usize {
        self.factors.iter().find(|(g, _)| g == f).map_or(0, |(_, m)| *m)
    }
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<Elem>) -> Poly {
        while coeffs.last() == Some(&Elem::ZERO) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    /// Builds from integer encodings of the coefficients.
    pub fn from_indices(field: &Field, coeffs: &[u32]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.elem(c)).collect())
    }

    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, Elem::ONE)
    }

    pub fn constant(field: &Field, c: Elem) -> Poly {
        Poly::new(field, vec![c])
    }

    /// The indeterminate `t`.
    pub fn t(field: &Field) -> Poly {
        Poly::monomial(field, Elem::ONE, 1)
    }

    /// `t - a`.
    pub fn linear(field: &Field, a: Elem) -> Poly {
        Poly::new(field, vec![field.neg(a), Elem::ONE])
    }

    pub fn monomial(field: &Field, c: Elem, n: usize) -> Poly {
        let mut coeffs = vec![Elem::ZERO; n + 1];
        coeffs[n] = c;
        Poly::new(field, coeffs)
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    /// Integer encodings of the coefficients, low degree first.
    pub fn indices(&self) -> Vec<u32> {
        self.coeffs.iter().map(|c| c.index()).collect()
    }

    /// `None` for the zero polynomial.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Elem::ONE
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    pub fn lead(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == Elem::ONE
    }

    /// Scales to a monic polynomial; the zero polynomial is returned as is.
    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(self.field.inv(self.lead()))
    }

    pub fn is_t(&self) -> bool {
        self.coeffs.len() == 2 && self.coeffs[0] == Elem::ZERO && self.coeffs[1] == Elem::ONE
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Poly::new(f, c)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        Poly::new(f, c)
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, s: Elem) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.mul(c, s)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let f = &self.field;
        let Some(n) = self.degree() else {
            return (Poly::zero(f), Poly::zero(f));
        };
        if n < dd {
            return (Poly::zero(f), self.clone());
        }
        let inv_lead = f.inv(d.lead());
        let mut r = self.coeffs.clone();
        let mut quot = vec![Elem::ZERO; n - dd + 1];
        for i in (0..=n - dd).rev() {
            let c = f.mul(r[i + dd], inv_lead);
            if c.is_zero() {
                continue;
            }
            quot[i] = c;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                r[i + j] = f.sub(r[i + j], f.mul(c, dc));
            }
        }
        r.truncate(dd);
        (Poly::new(f, quot), Poly::new(f, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    /// Exact quotient; panics when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.divrem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        self.mul(other).div_exact(&self.gcd(other)).monic()
    }

    pub fn mulmod(&self, other: &Poly, m: &Poly) -> Poly {
        self.mul(other).rem(m)
    }

    pub fn powmod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::one(&self.field).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mulmod(&base, m);
            }
        }
        acc
    }

    pub fn powmod_big(&self, e: &BigUint, m: &Poly) -> Poly {
        let mut acc = Poly::one(&self.field).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mulmod(&acc, m);
            if e.bit(i) {
                acc = acc.mulmod(&base, m);
            }
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
            .collect();
        Poly::new(f, c)
    }

    pub fn eval(&self, x: Elem) -> Elem {
        let f = &self.field;
        self.coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Applies an element map to every coefficient, landing in `target`.
    pub fn map_coeffs(&self, target: &Field, mut map: impl FnMut(Elem) -> Elem) -> Poly {
        Poly::new(target, self.coeffs.iter().map(|&c| map(c)).collect())
    }

    /// Largest `m` with `f^m | self`. `f` must be non-constant.
    pub fn multiplicity(&self, f: &Poly) -> usize {
        assert!(f.degree().unwrap_or(0) >= 1, "multiplicity of a constant");
        if self.is_zero() {
            return usize::MAX;
        }
        let mut m = 0;
        let mut g = self.clone();
        loop {
            let (q, r) = g.divrem(f);
            if !r.is_zero() {
                return m;
            }
            m += 1;
            g = q;
        }
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).is_one()
    }

    /// `t^{q^j} mod self` for `j = 0..=n` where `q` is the field order.
    fn frobenius_powers_of_t(&self, n: usize) -> Vec<Poly> {
        let q = self.field.size();
        let mut out = Vec::with_capacity(n + 1);
        let mut h = Poly::t(&self.field).rem(self);
        out.push(h.clone());
        for _ in 0..n {
            h = h.powmod(q, self);
            out.push(h.clone());
        }
        out
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else { return false };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let f = self.monic();
        let t = Poly::t(&self.field);
        let powers = f.frobenius_powers_of_t(n);
        if powers[n] != t.rem(&f) {
            return false;
        }
        prime_divisors(n as u64)
            .into_iter()
            .all(|l| powers[n / l as usize].sub(&t).gcd(&f).is_one())
    }

    /// Exact factorization into monic irreducibles.
    pub fn factorize(&self) -> Result<Factorization> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let unit = self.lead();
        let mut factors: Vec<(Poly, usize)> = Vec::new();
        for (part, mult) in squarefree_parts(&self.monic()) {
            for (block, d) in distinct_degree(&part) {
                for g in equal_degree(&block, d) {
                    factors.push((g, mult));
                }
            }
        }
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Poly, usize)> = Vec::with_capacity(factors.len());
        for (g, m) in factors {
            match merged.last_mut() {
                Some((h, mm)) if *h == g => *mm += m,
                _ => merged.push((g, m)),
            }
        }
        Ok(Factorization { unit, factors: merged })
    }

    /// Applies `x -> x^{q^i}` to every coefficient.
    pub fn galois_conjugate(&self, i: u32, q: u64) -> Result<Poly> {
        let f = &self.field;
        f.subfield_degree(q).ok_or(Error::NotASubfield { q, field: f.size() })?;
        let mut out = self.clone();
        for _ in 0..i {
            out = out.map_coeffs(f, |c| f.pow(c, q));
        }
        Ok(out)
    }

    /// Lexicographic-rank key used by the canonical order.
    fn cmp_canonical(&self, other: &Poly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().cmp(other.coeffs.iter()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: by degree, then coefficient encodings from the constant
/// term upwards.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_canonical(other)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{:?}]({})", self.field, self)
    }
}

/// Text form `c0+c1*t+c2*t^2` listing nonzero terms with integer-encoded
/// coefficients.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{i}")?,
            }
        }
        Ok(())
    }
}

/// Coefficient-wise `p`-th root of a polynomial with zero derivative.
fn pth_root(f: &Poly) -> Poly {
    let field = f.field();
    let p = field.characteristic() as usize;
    let root_exp = field.size() / p as u64;
    let c = f.coeffs().iter().step_by(p).map(|&c| field.pow(c, root_exp)).collect();
    Poly::new(field, c)
}

/// Square-free decomposition of a monic polynomial: pairs `(g, m)` with `g`
/// square-free and `f = prod g^m`.
fn squarefree_parts(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field();
    let p = field.characteristic() as usize;
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let df = f.derivative();
    if df.is_zero() {
        for (g, m) in squarefree_parts(&pth_root(f)) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = f.gcd(&df);
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_exact(&y);
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w);
    }
    if !c.is_one() {
        for (g, m) in squarefree_parts(&pth_root(&c)) {
            out.push((g, m * p));
        }
    }
    out
}

/// Splits a monic square-free polynomial into products of irreducibles of
/// equal degree: pairs `(product, degree)`.
fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field();
    let q = field.size();
    let t = Poly::t(field);
    let mut out = Vec::new();
    let mut g = f.clone();
    let mut h = t.rem(&g);
    let mut i = 1;
    while g.degree().unwrap_or(0) >= 2 * i {
        h = h.powmod(q, &g);
        let d = h.sub(&t).gcd(&g);
        if !d.is_one() {
            g = g.div_exact(&d);
            h = h.rem(&g);
            out.push((d, i));
        }
        i += 1;
    }
    if g.degree().unwrap_or(0) > 0 {
        let d = g.degree().unwrap();
        out.push((g, d));
    }
    out
}

/// Candidate splitting polynomials in canonical order: every polynomial of
/// degree `1..limit`, monic or not.
fn splitting_candidates(field: &Field, limit: usize) -> impl Iterator<Item = Poly> + '_ {
    let q = field.size();
    (1..limit).flat_map(move |deg| {
        let count = q.saturating_pow(deg as u32);
        (0..count).flat_map(move |low| {
            (1..q).map(move |lead| {
                let mut c = vec![Elem::ZERO; deg + 1];
                let mut r = low;
                for slot in c.iter_mut().take(deg) {
                    *slot = field.elem((r % q) as u32);
                    r /= q;
                }
                c[deg] = field.elem(lead as u32);
                Poly::new(field, c)
            })
        })
    })
}

/// Splits a monic square-free product of degree-`d` irreducibles.
fn equal_degree(f: &Poly, d: usize) -> Vec<Poly> {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    if n == d {
        return vec![f.clone()];
    }
    let field = f.field();
    let q = field.size();
    let p = field.characteristic();
    for a in splitting_candidates(field, n) {
        let s = if p == 2 {
            // absolute trace down to F_2: a + a^2 + ... + a^{2^{kd-1}}
            let steps = field.degree() as usize * d;
            let mut term = a.rem(f);
            let mut acc = term.clone();
            for _ in 1..steps {
                term = term.mulmod(&term, f);
                acc = acc.add(&term);
            }
            acc
        } else {
            let e = (BigUint::from(q).pow(d as u32) - 1u32) / 2u32;
            a.powmod_big(&e, f).sub(&Poly::one(field))
        };
        let g = s.gcd(f);
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let mut out = equal_degree(&g, d);
            out.extend(equal_degree(&f.div_exact(&g), d));
            return out;
        }
    }
    unreachable!("equal-degree splitting exhausted all candidates")
}

/// Number of monic irreducibles of degree `m` over `F_q`.
pub fn irr_count(m: u32, q: u64) -> BigUint {
    assert!(m >= 1, "degree must be positive");
    let qb = BigInt::from(q);
    let mut sum = BigInt::zero();
    for d in 1..=m {
        if !m.is_multiple_of(d) {
            continue;
        }
        let mu = mobius(d as u64);
        if mu != 0 {
            sum += BigInt::from(mu) * qb.pow(m / d);
        }
    }
    let total = sum / BigInt::from(m);
    total.to_biguint().expect("count is nonnegative")
}

pub(crate) fn mobius(n: u64) -> i32 {
    let mut n = n;
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// The `idx`-th monic polynomial of degree `m`, counting lexicographically
/// from the constant term (so `c_0` is the most significant digit).
fn monic_candidate(field: &Field, m: usize, idx: u128) -> Poly {
    let q = field.size() as u128;
    let mut c = vec![Elem::ZERO; m + 1];
    let mut r = idx;
    for i in (0..m).rev() {
        c[i] = field.elem((r % q) as u32);
        r /= q;
    }
    c[m] = Elem::ONE;
    Poly::new(field, c)
}

/// All monic irreducibles of degree `m` over `field`, in canonical order.
pub fn irr_enumerate(m: usize, field: &Field, budget: u128) -> Result<Vec<Poly>> {
    assert!(m >= 1, "degree must be positive");
    let q = field.size() as u128;
    let needed = q.checked_pow(m as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok((0..needed).map(|idx| monic_candidate(field, m, idx)).filter(Poly::is_irreducible).collect())
}

/// The first monic irreducible of degree `m` in canonical order.
pub fn canonical_irreducible(m: usize, field: &Field) -> Poly {
    assert!(m >= 1, "degree must be positive");
    (0u128..)
        .map(|idx| monic_candidate(field, m, idx))
        .find(Poly::is_irreducible)
        .expect("irreducibles exist in every degree")
}

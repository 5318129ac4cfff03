//! Finite fields `F_{p^k}`.
//!
//! Elements are stored as their integer encoding: the coefficient vector
//! `(c_0, ..., c_{k-1})` of the residue modulo the defining polynomial, read
//! as a base-`p` number with `c_0` least significant. Multiplication goes
//! through discrete-log tables built once per field, so fields are limited to
//! [`MAX_FIELD_SIZE`] elements.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::poly::Poly;
use crate::{Error, Result};

/// Largest field order supported by the table-driven arithmetic.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

/// Above this order the additive table is not materialised.
const ADD_TABLE_LIMIT: u32 = 512;

/// A field element, identified by its integer encoding in `[0, q)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    /// Wraps an index the caller knows to be below the field size.
    #[inline]
    pub(crate) const fn from_index_unchecked(i: u32) -> Elem {
        Elem(i)
    }

    /// Integer encoding of the element.
    #[inline]
    pub const fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Inner {
    p: u32,
    k: u32,
    q: u32,
    /// Monic defining polynomial over `F_p`, low degree first, length `k + 1`.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
    primitive: u32,
}

/// Shared handle to an immutable finite field.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.0.p, self.0.k)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.0.p, self.0.k)
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors of `n`, ascending.
pub(crate) fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Writes `q = p^k` as `(p, k)` when `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = prime_divisors(q)[0];
    let mut k = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

fn checked_size(p: u64, k: u32) -> Result<u32> {
    let mut q: u64 = 1;
    for _ in 0..k {
        q = q.saturating_mul(p);
        if q > MAX_FIELD_SIZE {
            return Err(Error::FieldTooLarge(q));
        }
    }
    Ok(q as u32)
}

/// Multiplication of encoded residues without tables; used while building
/// the tables themselves.
fn mul_slow(a: u32, b: u32, p: u32, k: usize, modulus: &[u32]) -> u32 {
    let da = digits(a, p, k);
    let db = digits(b, p, k);
    let mut prod = vec![0u64; 2 * k];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    for deg in (k..2 * k).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        // t^k = -(m_0 + ... + m_{k-1} t^{k-1})
        for (i, &m) in modulus.iter().enumerate().take(k) {
            let sub = c * m as u64 % p as u64;
            let idx = deg - k + i;
            prod[idx] = (prod[idx] + p as u64 - sub) % p as u64;
        }
        prod[deg] = 0;
    }
    undigits(&prod[..k], p)
}

fn pow_slow(a: u32, mut e: u64, p: u32, k: usize, modulus: &[u32]) -> u32 {
    let mut base = a;
    let mut acc = 1u32;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_slow(acc, base, p, k, modulus);
        }
        base = mul_slow(base, base, p, k, modulus);
        e >>= 1;
    }
    acc
}

fn digits(mut a: u32, p: u32, k: usize) -> Vec<u32> {
    let mut out = vec![0; k];
    for d in out.iter_mut() {
        *d = a % p;
        a /= p;
    }
    out
}

fn undigits<T: Copy + Into<u64>>(ds: &[T], p: u32) -> u32 {
    ds.iter().rev().fold(0u64, |acc, &d| acc * p as u64 + d.into()) as u32
}

fn add_digits(mut a: u32, mut b: u32, p: u32) -> u32 {
    let mut out = 0u32;
    let mut place = 1u32;
    while a > 0 || b > 0 {
        out += ((a % p + b % p) % p) * place;
        place = place.wrapping_mul(p);
        a /= p;
        b /= p;
    }
    out
}

fn neg_digits(mut a: u32, p: u32) -> u32 {
    let mut out = 0u32;
    let mut place = 1u32;
    while a > 0 {
        out += ((p - a % p) % p) * place;
        place = place.wrapping_mul(p);
        a /= p;
    }
    out
}

impl Field {
    /// The prime field `F_p`, with defining polynomial `t`.
    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NonPrimeCharacteristic(p));
        }
        Self::build(p as u32, 1, vec![0, 1])
    }

    /// `F_{p^k}`. With no modulus, the canonical one is the lexicographically
    /// smallest monic irreducible of degree `k` (coefficients compared from
    /// the constant term upwards).
    pub fn new(p: u64, k: u32, modulus: Option<&Poly>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NonPrimeCharacteristic(p));
        }
        if k == 0 {
            return Err(Error::DegreeMismatch { expected: 1, found: 0 });
        }
        checked_size(p, k)?;
        let fp = Field::prime(p)?;
        let modulus = match modulus {
            Some(m) => {
                if m.field().size() != p {
                    return Err(Error::FieldMismatch);
                }
                if m.degree() != Some(k as usize) {
                    return Err(Error::DegreeMismatch {
                        expected: k as usize,
                        found: m.degree().unwrap_or(0),
                    });
                }
                if !m.is_monic() || !m.is_irreducible() {
                    return Err(Error::ReducibleModulus);
                }
                m.clone()
            }
            None => canonical_modulus(&fp, k as usize),
        };
        if k == 1 && modulus.coeff(0) == Elem::ZERO {
            return Ok(fp);
        }
        let coeffs = modulus.coeffs().iter().map(|c| c.index()).collect();
        Self::build(p as u32, k, coeffs)
    }

    /// `F_q` for a prime power `q`, with the canonical modulus.
    pub fn with_size(q: u64) -> Result<Field> {
        let (p, k) = prime_power(q).ok_or(Error::NonPrimeCharacteristic(q))?;
        Field::new(p, k, None)
    }

    /// `F_{p^k}` with the modulus given by its integer encoding, leading
    /// coefficient included (e.g. `7` for `t^2 + t + 1` over `F_2`).
    pub fn from_modulus_index(p: u64, k: u32, modulus: u64) -> Result<Field> {
        let fp = Field::prime(p)?;
        let mut coeffs = Vec::new();
        let mut m = modulus;
        while m > 0 {
            coeffs.push(fp.elem((m % p) as u32));
            m /= p;
        }
        let poly = Poly::new(&fp, coeffs);
        Field::new(p, k, Some(&poly))
    }

    fn build(p: u32, k: u32, modulus: Vec<u32>) -> Result<Field> {
        let q = checked_size(p as u64, k)?;
        let ku = k as usize;
        let order = (q - 1) as u64;
        let divisors = prime_divisors(order);
        let primitive = if q == 2 {
            1
        } else {
            (2..q)
                .chain(core::iter::once(1))
                .find(|&g| divisors.iter().all(|&l| pow_slow(g, order / l, p, ku, &modulus) != 1))
                .expect("multiplicative group is cyclic")
        };
        let mut exp = vec![0u32; (q - 1) as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = x;
            log[x as usize] = i as u32;
            x = mul_slow(x, primitive, p, ku, &modulus);
        }
        let neg = (0..q)
            .map(|a| if p == 2 { a } else { neg_digits(a, p) })
            .collect();
        let add = (p != 2 && k > 1 && q <= ADD_TABLE_LIMIT).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = add_digits(a, b, p);
                }
            }
            t
        });
        Ok(Field(Arc::new(Inner { p, k, q, modulus, exp, log, neg, add, primitive })))
    }

    #[inline]
    pub fn characteristic(&self) -> u64 {
        self.0.p as u64
    }

    /// Degree `k` over the prime field.
    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.k
    }

    /// Field order `p^k`.
    #[inline]
    pub fn size(&self) -> u64 {
        self.0.q as u64
    }

    /// Defining polynomial over `F_p` as integer coefficients, low degree first.
    pub fn modulus_coeffs(&self) -> &[u32] {
        &self.0.modulus
    }

    /// Integer encoding of the defining polynomial, leading term included.
    pub fn modulus_index(&self) -> u64 {
        self.0.modulus.iter().rev().fold(0u64, |acc, &d| acc * self.0.p as u64 + d as u64)
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.k == 1
    }

    /// A fixed generator of the multiplicative group.
    pub fn primitive(&self) -> Elem {
        Elem(self.0.primitive)
    }

    /// Element with the given integer encoding. Panics when out of range.
    #[inline]
    pub fn elem(&self, index: u32) -> Elem {
        assert!(index < self.0.q, "element index {index} out of range for field of size {}", self.0.q);
        Elem(index)
    }

    pub fn try_elem(&self, index: u64) -> Option<Elem> {
        (index < self.0.q as u64).then_some(Elem(index as u32))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.0.q).map(Elem)
    }

    /// Coordinates over `F_p`, low degree first.
    pub fn coords(&self, x: Elem) -> Vec<u32> {
        digits(x.0, self.0.p, self.0.k as usize)
    }

    pub fn from_coords(&self, c: &[u32]) -> Elem {
        Elem(undigits(c, self.0.p))
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let f = &*self.0;
        if f.p == 2 {
            Elem(a.0 ^ b.0)
        } else if f.k == 1 {
            let s = a.0 + b.0;
            Elem(if s >= f.p { s - f.p } else { s })
        } else if let Some(t) = &f.add {
            Elem(t[(a.0 * f.q + b.0) as usize])
        } else {
            Elem(add_digits(a.0, b.0, f.p))
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let f = &*self.0;
        let n = f.q - 1;
        let s = f.log[a.0 as usize] + f.log[b.0 as usize];
        Elem(f.exp[(if s >= n { s - n } else { s }) as usize])
    }

    /// Multiplicative inverse. Panics on zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(!a.is_zero(), "inverse of zero");
        let f = &*self.0;
        let n = f.q - 1;
        let l = f.log[a.0 as usize];
        Elem(f.exp[(if l == 0 { 0 } else { n - l }) as usize])
    }

    #[inline]
    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let f = &*self.0;
        let n = (f.q - 1) as u64;
        let l = f.log[a.0 as usize] as u64;
        Elem(f.exp[((l * (e % n)) % n) as usize])
    }

    /// Discrete logarithm to the base [`Field::primitive`].
    pub fn log(&self, a: Elem) -> Option<u32> {
        (!a.is_zero()).then(|| self.0.log[a.0 as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Elem) -> u64 {
        assert!(!a.is_zero());
        let n = self.size() - 1;
        let l = self.0.log[a.0 as usize] as u64;
        n / num_integer::gcd(n, l)
    }

    /// If `q` is the order of a subfield, its degree `e` over `F_p`.
    pub fn subfield_degree(&self, q: u64) -> Option<u32> {
        let (p, e) = prime_power(q)?;
        (p == self.characteristic() && self.0.k.is_multiple_of(e)).then_some(e)
    }

    /// `x -> x^q`, a generator of the Galois group over `F_q`.
    pub fn frobenius(&self, x: Elem, q: u64) -> Result<Elem> {
        self.subfield_degree(q).ok_or(Error::NotASubfield { q, field: self.size() })?;
        Ok(self.pow(x, q))
    }

    /// Smallest `e >= 1` with `x^{q^e} = x`, i.e. the degree of `x` over `F_q`.
    pub fn degree_over_subfield(&self, x: Elem, q: u64) -> Result<u32> {
        self.subfield_degree(q).ok_or(Error::NotASubfield { q, field: self.size() })?;
        let mut y = self.pow(x, q);
        let mut e = 1;
        while y != x {
            y = self.pow(y, q);
            e += 1;
        }
        Ok(e)
    }

    /// Whether `x` lies in the subfield of order `q`.
    pub fn in_subfield(&self, x: Elem, q: u64) -> bool {
        self.pow(x, q) == x
    }
}

fn canonical_modulus(fp: &Field, k: usize) -> Poly {
    let p = fp.size();
    let count = p.pow(k as u32);
    // Index digits are read with c_0 most significant so that iteration order
    // is lexicographic from the constant term upwards.
    for idx in 0..count {
        let mut coeffs = vec![Elem::ZERO; k + 1];
        let mut r = idx;
        for i in (0..k).rev() {
            coeffs[i] = Elem((r % p) as u32);
            r /= p;
        }
        coeffs[k] = Elem::ONE;
        let f = Poly::new(fp, coeffs);
        if f.is_irreducible() {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_fields() -> Vec<Field> {
        [2u64, 3, 4, 8, 9].iter().map(|&q| Field::with_size(q).unwrap()).collect()
    }

    #[test]
    fn create_prime_field() {
        let f = Field::new(2, 1, None).unwrap();
        assert_eq!(f.size(), 2);
        assert_eq!(f.elements().count(), 2);
    }

    #[test]
    fn create_f4_with_explicit_modulus() {
        let f2 = Field::prime(2).unwrap();
        let m = Poly::new(&f2, vec![Elem::ONE, Elem::ONE, Elem::ONE]);
        let f4 = Field::new(2, 2, Some(&m)).unwrap();
        assert_eq!(f4.size(), 4);
        assert_eq!(f4, Field::with_size(4).unwrap());
        // t^2 + t + 1 has no root in F_2
        for a in f2.elements() {
            assert_ne!(m.eval(a), Elem::ZERO);
        }
    }

    #[test]
    fn creation_errors() {
        assert_eq!(Field::new(4, 1, None).unwrap_err(), Error::NonPrimeCharacteristic(4));
        let f2 = Field::prime(2).unwrap();
        let reducible = Poly::new(&f2, vec![Elem::ONE, Elem::ZERO, Elem::ONE]);
        assert_eq!(Field::new(2, 2, Some(&reducible)).unwrap_err(), Error::ReducibleModulus);
        let cubic = Poly::new(&f2, vec![Elem::ONE, Elem::ONE, Elem::ZERO, Elem::ONE]);
        assert!(matches!(Field::new(2, 2, Some(&cubic)), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn canonical_moduli() {
        assert_eq!(Field::with_size(4).unwrap().modulus_coeffs(), &[1, 1, 1]);
        assert_eq!(Field::with_size(8).unwrap().modulus_coeffs(), &[1, 0, 1, 1]);
        assert_eq!(Field::with_size(9).unwrap().modulus_coeffs(), &[1, 0, 1]);
        assert_eq!(Field::from_modulus_index(2, 2, 7).unwrap().modulus_index(), 7);
    }

    #[test]
    fn field_axioms_exhaustive() {
        for f in small_fields() {
            let els: Vec<Elem> = f.elements().collect();
            assert_eq!(els.len() as u64, f.size());
            for &a in &els {
                assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a)), Elem::ONE);
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_examples() {
        let f2 = Field::prime(2).unwrap();
        for x in f2.elements() {
            assert_eq!(f2.frobenius(x, 2).unwrap(), x);
        }
        let f4 = Field::with_size(4).unwrap();
        let lambda = f4.elem(2);
        assert_eq!(f4.frobenius(lambda, 2).unwrap(), f4.add(lambda, Elem::ONE));
        assert!(matches!(f4.frobenius(lambda, 3), Err(Error::NotASubfield { .. })));
        let f8 = Field::with_size(8).unwrap();
        for x in f8.elements() {
            let mut y = x;
            for _ in 0..3 {
                y = f8.frobenius(y, 2).unwrap();
            }
            assert_eq!(y, x);
        }
    }

    #[test]
    fn frobenius_is_automorphism_with_subfield_fixed() {
        for (qb, q) in [(4u64, 2u64), (8, 2), (9, 3), (16, 4), (16, 2), (81, 9), (81, 3), (64, 8), (64, 4)] {
            let k = Field::with_size(qb).unwrap();
            let fixed = k.elements().filter(|&x| k.frobenius(x, q).unwrap() == x).count() as u64;
            assert_eq!(fixed, q, "fixed field of Frobenius in F_{qb} over F_{q}");
            for a in k.elements() {
                for b in k.elements().step_by(3) {
                    let fa = k.frobenius(a, q).unwrap();
                    let fb = k.frobenius(b, q).unwrap();
                    assert_eq!(k.frobenius(k.add(a, b), q).unwrap(), k.add(fa, fb));
                    assert_eq!(k.frobenius(k.mul(a, b), q).unwrap(), k.mul(fa, fb));
                }
            }
        }
    }

    #[test]
    fn degree_over_subfield_examples() {
        let f4 = Field::with_size(4).unwrap();
        assert_eq!(f4.degree_over_subfield(Elem::ONE, 2).unwrap(), 1);
        assert_eq!(f4.degree_over_subfield(f4.elem(2), 2).unwrap(), 2);
        let f8 = Field::with_size(8).unwrap();
        assert_eq!(f8.degree_over_subfield(f8.primitive(), 2).unwrap(), 3);
        let f16 = Field::with_size(16).unwrap();
        for x in f16.elements() {
            let e = f16.degree_over_subfield(x, 2).unwrap();
            assert_eq!(4 % e, 0);
        }
    }

    #[test]
    fn element_orders() {
        let f9 = Field::with_size(9).unwrap();
        assert_eq!(f9.order(Elem::ONE), 1);
        assert_eq!(f9.order(f9.primitive()), 8);
        assert_eq!(f9.order(f9.from_int(-1)), 2);
    }
}

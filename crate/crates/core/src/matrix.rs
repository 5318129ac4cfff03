//! Dense matrices over a [`Field`], acting on row vectors from the right
//! (`v -> vX`).

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::gf::{prime_divisors, Elem, Field};
use crate::poly::{Factorization, Poly};
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

/// `V = V_inv ⊕ V_nil` together with the restrictions of `X` to each part.
#[derive(Clone, Debug)]
pub struct FittingSplit {
    /// Rows spanning `V_inv = im X^d`.
    pub inv_basis: Mat,
    /// Rows spanning `V_nil = ker X^d`.
    pub nil_basis: Mat,
    pub x_inv: Mat,
    pub x_nil: Mat,
}

#[derive(Clone, Debug)]
pub struct PrimaryComponent {
    pub poly: Poly,
    /// Rows spanning `V_f = ker f(X)^{m_f}`.
    pub basis: Mat,
    /// Multiplicity in the characteristic polynomial.
    pub char_mult: usize,
    /// Multiplicity in the minimal polynomial.
    pub min_mult: usize,
}

#[derive(Clone, Debug)]
pub struct PrimaryDecomposition {
    pub components: Vec<PrimaryComponent>,
}

impl PrimaryDecomposition {
    pub fn component(&self, f: &Poly) -> Option<&PrimaryComponent> {
        self.components.iter().find(|c| &c.poly == f)
    }
}

impl FittingSplit {
    pub fn inv_dim(&self) -> usize {
        self.inv_basis.rows
    }

    pub fn nil_dim(&self) -> usize {
        self.nil_basis.rows
    }

    /// Change-of-basis matrix whose rows are the `V_inv` basis followed by
    /// the `V_nil` basis.
    pub fn basis(&self) -> Mat {
        self.inv_basis.stack(&self.nil_basis)
    }

    /// `X_inv ⊕ 0_{V_nil}` written in standard coordinates.
    pub fn invertible_part_padded(&self) -> Mat {
        let p = self.basis();
        let zero = Mat::zero(&self.x_inv.field, self.nil_dim());
        let block = self.x_inv.direct_sum(&zero);
        p.inverse().expect("basis is invertible").mul(&block).mul(&p)
    }
}

impl Mat {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<Elem>) -> Mat {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Mat { field: field.clone(), rows, cols, data }
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<Elem>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat::new(field, r, c, rows.into_iter().flatten().collect())
    }

    /// Square matrix from row-major integer encodings.
    pub fn from_indices(field: &Field, n: usize, entries: &[u32]) -> Mat {
        Mat::new(field, n, entries.len() / n.max(1), entries.iter().map(|&e| field.elem(e)).collect())
    }

    pub fn zero_rect(field: &Field, rows: usize, cols: usize) -> Mat {
        Mat::new(field, rows, cols, vec![Elem::ZERO; rows * cols])
    }

    pub fn zero(field: &Field, n: usize) -> Mat {
        Mat::zero_rect(field, n, n)
    }

    pub fn scalar(field: &Field, n: usize, a: Elem) -> Mat {
        let mut m = Mat::zero(field, n);
        for i in 0..n {
            m.data[i * n + i] = a;
        }
        m
    }

    pub fn identity(field: &Field, n: usize) -> Mat {
        Mat::scalar(field, n, Elem::ONE)
    }

    /// The `idx`-th matrix of `M(n, q)`: entry `k` in row-major order is digit
    /// `k` of `idx` in base `q`.
    pub fn from_index(field: &Field, n: usize, mut idx: u128) -> Mat {
        let q = field.size() as u128;
        let data = (0..n * n)
            .map(|_| {
                let e = (idx % q) as u32;
                idx /= q;
                Elem::from_index_unchecked(e)
            })
            .collect();
        Mat::new(field, n, n, data)
    }

    /// Inverse of [`Mat::from_index`].
    pub fn index(&self) -> u128 {
        let q = self.field.size() as u128;
        self.data.iter().rev().fold(0u128, |acc, e| acc * q + e.index() as u128)
    }

    /// `q^{n^2}`, or `None` on overflow.
    pub fn algebra_size(q: u64, n: usize) -> Option<u128> {
        (q as u128).checked_pow((n * n) as u32)
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Side length of a square matrix.
    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Elem] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Mat::identity(&self.field, self.rows)
    }

    pub fn add(&self, o: &Mat) -> Mat {
        assert!(self.rows == o.rows && self.cols == o.cols);
        let f = &self.field;
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| f.add(a, b)).collect();
        Mat::new(f, self.rows, self.cols, data)
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        assert!(self.rows == o.rows && self.cols == o.cols);
        let f = &self.field;
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Mat::new(f, self.rows, self.cols, data)
    }

    pub fn scale(&self, s: Elem) -> Mat {
        let f = &self.field;
        Mat::new(f, self.rows, self.cols, self.data.iter().map(|&a| f.mul(a, s)).collect())
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let f = &self.field;
        let mut out = vec![Elem::ZERO; self.rows * o.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let orow = &o.data[k * o.cols..(k + 1) * o.cols];
                let dst = &mut out[i * o.cols..(i + 1) * o.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d = f.add(*d, f.mul(a, b));
                }
            }
        }
        Mat::new(f, self.rows, o.cols, out)
    }

    /// Row vector times matrix.
    pub fn apply(&self, v: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let mut out = vec![Elem::ZERO; self.cols];
        for (k, &a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (d, &b) in out.iter_mut().zip(self.row(k)) {
                *d = f.add(*d, f.mul(a, b));
            }
        }
        out
    }

    /// Power by repeated squaring.
    pub fn pow(&self, e: u64) -> Mat {
        self.pow_big(&BigUint::from(e))
    }

    pub fn pow_big(&self, e: &BigUint) -> Mat {
        let mut acc = Mat::identity(&self.field, self.rows);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc);
            if e.bit(i) {
                acc = acc.mul(self);
            }
        }
        acc
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero_rect(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// Vertical concatenation.
    pub fn stack(&self, o: &Mat) -> Mat {
        let cols = if self.rows == 0 { o.cols } else { self.cols };
        assert!(o.rows == 0 || o.cols == cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&o.data);
        Mat::new(&self.field, self.rows + o.rows, cols, data)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = f.inv(m.get(r, c));
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let s = m.get(i, c);
                if s.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(s, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Reduced basis of the row space, i.e. the image `{vX}` of the action.
    pub fn row_space(&self) -> Mat {
        let (m, pivots) = self.rref();
        let k = pivots.len();
        Mat::new(&self.field, k, self.cols, m.data[..k * self.cols].to_vec())
    }

    /// Basis of `{x : A x = 0}` for column vectors `x`, returned as rows.
    fn right_kernel(&self) -> Mat {
        let f = &self.field;
        let (m, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![Elem::ZERO; self.cols];
            v[fc] = Elem::ONE;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m.get(r, fc));
            }
            out.push(v);
        }
        if out.is_empty() {
            return Mat::zero_rect(f, 0, self.cols);
        }
        Mat::from_rows(f, out)
    }

    /// Basis of the kernel `{v : vX = 0}` of the right action.
    pub fn left_kernel(&self) -> Mat {
        self.transpose().right_kernel()
    }

    /// Solves `C · basis = w` for `C`, when every row of `w` lies in the row
    /// space of the (linearly independent) rows of `basis`.
    pub fn solve_left(basis: &Mat, w: &Mat) -> Option<Mat> {
        let k = basis.rows;
        let f = &basis.field;
        if k == 0 {
            return w.is_zero().then(|| Mat::zero_rect(f, w.rows, 0));
        }
        let bt = basis.transpose();
        let wt = w.transpose();
        let d = bt.rows;
        let mut aug = Mat::zero_rect(f, d, k + w.rows);
        for i in 0..d {
            for j in 0..k {
                aug.set(i, j, bt.get(i, j));
            }
            for j in 0..w.rows {
                aug.set(i, k + j, wt.get(i, j));
            }
        }
        let (m, pivots) = aug.rref();
        if pivots.len() < k || pivots[..k] != (0..k).collect::<Vec<_>>()[..] || pivots.len() > k {
            return None;
        }
        let mut ct = Mat::zero_rect(f, k, w.rows);
        for i in 0..k {
            for j in 0..w.rows {
                ct.set(i, j, m.get(i, k + j));
            }
        }
        Some(ct.transpose())
    }

    /// Matrix of the action on an invariant subspace spanned by the rows of
    /// `basis`.
    pub fn restrict(&self, basis: &Mat) -> Mat {
        let image = basis.mul(self);
        Mat::solve_left(basis, &image).expect("subspace is not invariant")
    }

    pub fn inverse(&self) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(String::from("inverse of a non-square matrix")));
        }
        let n = self.rows;
        let f = &self.field;
        let mut aug = Mat::zero_rect(f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, Elem::ONE);
        }
        let (m, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::SingularMatrix);
        }
        let mut inv = Mat::zero(f, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, m.get(i, n + j));
            }
        }
        Ok(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn is_nilpotent(&self) -> bool {
        self.pow(self.rows as u64).is_zero()
    }

    /// `g^{-1} X g`.
    pub fn conjugate(&self, g: &Mat) -> Result<Mat> {
        Ok(g.inverse()?.mul(self).mul(g))
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, o: &Mat) -> Mat {
        let n = self.rows + o.rows;
        let mut out = Mat::zero(&self.field, n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
        }
        for i in 0..o.rows {
            for j in 0..o.cols {
                out.set(self.rows + i, self.cols + j, o.get(i, j));
            }
        }
        out
    }

    /// Companion matrix of the monic polynomial `f`: `e_i -> e_{i+1}` and the
    /// last basis vector maps to minus the low coefficients.
    pub fn companion(f: &Poly) -> Result<Mat> {
        let n = f.degree().unwrap_or(0);
        if n == 0 {
            return Err(Error::DegreeMismatch { expected: 1, found: 0 });
        }
        let f = f.monic();
        let field = f.field();
        let mut m = Mat::zero(field, n);
        for i in 0..n - 1 {
            m.set(i, i + 1, Elem::ONE);
        }
        for j in 0..n {
            m.set(n - 1, j, field.neg(f.coeff(j)));
        }
        Ok(m)
    }

    /// `f(X)` by Horner's rule.
    pub fn eval_poly(&self, f: &Poly) -> Mat {
        let n = self.rows;
        let field = &self.field;
        let mut acc = Mat::zero(field, n);
        for &c in f.coeffs().iter().rev() {
            acc = acc.mul(self).add(&Mat::scalar(field, n, c));
        }
        acc
    }

    pub fn det(&self) -> Elem {
        assert!(self.is_square());
        let f = &self.field;
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Elem::ONE;
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Elem::ZERO;
            };
            if p != c {
                m.swap_rows(p, c);
                det = f.neg(det);
            }
            let pivot = m.get(c, c);
            det = f.mul(det, pivot);
            let inv = f.inv(pivot);
            for i in c + 1..n {
                let s = f.mul(m.get(i, c), inv);
                if s.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = f.sub(m.get(i, j), f.mul(s, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// Characteristic polynomial `det(tI - X)` via reduction to upper
    /// Hessenberg form.
    pub fn charpoly(&self) -> Poly {
        assert!(self.is_square(), "charpoly of a non-square matrix");
        let f = &self.field;
        let n = self.rows;
        let mut h = self.clone();
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| !h.get(i, m - 1).is_zero()) else {
                continue;
            };
            if i != m {
                h.swap_rows(i, m);
                h.swap_cols(i, m);
            }
            let inv = f.inv(h.get(m, m - 1));
            for i in m + 1..n {
                let u = f.mul(h.get(i, m - 1), inv);
                if u.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = f.sub(h.get(i, j), f.mul(u, h.get(m, j)));
                    h.set(i, j, v);
                }
                for j in 0..n {
                    let v = f.add(h.get(j, m), f.mul(u, h.get(j, i)));
                    h.set(j, m, v);
                }
            }
        }
        let t = Poly::t(f);
        let mut p: Vec<Poly> = Vec::with_capacity(n + 1);
        p.push(Poly::one(f));
        for m in 1..=n {
            let diag = Poly::constant(f, h.get(m - 1, m - 1));
            let mut pm = t.sub(&diag).mul(&p[m - 1]);
            let mut prod = Elem::ONE;
            for i in 1..m {
                prod = f.mul(prod, h.get(m - i, m - i - 1));
                if prod.is_zero() {
                    break;
                }
                let c = f.mul(h.get(m - i - 1, m - 1), prod);
                pm = pm.sub(&p[m - i - 1].scale(c));
            }
            p.push(pm);
        }
        p.pop().unwrap()
    }

    /// Monic annihilator of the row vector `v` under the action of `X`.
    pub fn vector_annihilator(&self, v: &[Elem]) -> Poly {
        let f = &self.field;
        let n = self.rows;
        // reduced Krylov rows: (pivot column, vector, combination coefficients)
        let mut basis: Vec<(usize, Vec<Elem>, Vec<Elem>)> = Vec::new();
        let mut w = v.to_vec();
        for j in 0..=n {
            let mut vec_j = w.clone();
            let mut combo = vec![Elem::ZERO; j + 1];
            combo[j] = Elem::ONE;
            for (pc, bv, bc) in &basis {
                let s = vec_j[*pc];
                if s.is_zero() {
                    continue;
                }
                for (x, &y) in vec_j.iter_mut().zip(bv) {
                    *x = f.sub(*x, f.mul(s, y));
                }
                for (x, &y) in combo.iter_mut().zip(bc) {
                    *x = f.sub(*x, f.mul(s, y));
                }
            }
            match vec_j.iter().position(|e| !e.is_zero()) {
                None => return Poly::new(f, combo),
                Some(pc) => {
                    let inv = f.inv(vec_j[pc]);
                    for x in vec_j.iter_mut() {
                        *x = f.mul(*x, inv);
                    }
                    for x in combo.iter_mut() {
                        *x = f.mul(*x, inv);
                    }
                    basis.push((pc, vec_j, combo));
                }
            }
            w = self.apply(&w);
        }
        unreachable!("Krylov sequence of length n+1 is dependent")
    }

    /// Minimal polynomial: least common multiple of the annihilators of the
    /// standard basis vectors.
    pub fn minpoly(&self) -> Poly {
        assert!(self.is_square(), "minpoly of a non-square matrix");
        let f = &self.field;
        let n = self.rows;
        let mut m = Poly::one(f);
        for i in 0..n {
            let mut e = vec![Elem::ZERO; n];
            e[i] = Elem::ONE;
            if m.degree() == Some(n) {
                break;
            }
            m = m.lcm(&self.vector_annihilator(&e));
        }
        m
    }

    /// Splits `V` into the invertible part `im X^d` and nilpotent part
    /// `ker X^d`.
    pub fn fitting_decompose(&self) -> FittingSplit {
        let d = self.dim();
        let xd = self.pow(d as u64);
        let inv_basis = xd.row_space();
        let nil_basis = xd.left_kernel();
        let x_inv = self.restrict(&inv_basis);
        let x_nil = self.restrict(&nil_basis);
        FittingSplit { inv_basis, nil_basis, x_inv, x_nil }
    }

    /// Dimension of `V_inv(X) = im X^d`.
    pub fn inv_dim(&self) -> usize {
        self.pow(self.dim() as u64).rank()
    }

    pub fn primary_components(&self) -> PrimaryDecomposition {
        let cp = self.charpoly();
        let mp = self.minpoly();
        let Factorization { factors, .. } = cp.factorize().expect("charpoly is monic");
        let components = factors
            .into_iter()
            .map(|(poly, char_mult)| {
                let basis = self.eval_poly(&poly.pow(char_mult as u64)).left_kernel();
                let min_mult = mp.multiplicity(&poly);
                PrimaryComponent { poly, basis, char_mult, min_mult }
            })
            .collect();
        PrimaryDecomposition { components }
    }

    /// Whether `f` occurs in the characteristic and minimal polynomials with
    /// the same positive multiplicity.
    pub fn is_primary_cyclic(&self, f: &Poly) -> Result<bool> {
        if f.field() != &self.field {
            return Err(Error::FieldMismatch);
        }
        if !f.is_monic() || !f.is_irreducible() {
            return Err(Error::NotIrreducible);
        }
        Ok(primary_cyclic_for(&self.charpoly(), &self.minpoly(), f))
    }

    /// Multiplicative order of an invertible matrix.
    pub fn order(&self) -> Result<BigUint> {
        if !self.is_invertible() {
            return Err(Error::SingularMatrix);
        }
        let exponent = gl_exponent(self.field.size(), self.rows);
        let mut n: BigUint = exponent.iter().map(|&(l, e)| BigUint::from(l).pow(e)).product();
        let id = Mat::identity(&self.field, self.rows);
        for &(l, e) in &exponent {
            for _ in 0..e {
                let cand = &n / l;
                if self.pow_big(&cand) == id {
                    n = cand;
                } else {
                    break;
                }
            }
        }
        Ok(n)
    }

    /// Multiplicative Jordan decomposition `g = su = us` with `s` of order
    /// coprime to `p` and `u` of `p`-power order.
    pub fn jordan_multiplicative(&self) -> Result<(Mat, Mat)> {
        let ord = self.order()?;
        let p = BigUint::from(self.field.characteristic());
        let mut pa = BigUint::one();
        let mut m = ord.clone();
        while (&m % &p).is_zero() {
            m /= &p;
            pa *= &p;
        }
        // e ≡ 0 (mod p^a), e ≡ 1 (mod m)
        let e = if m.is_one() {
            BigUint::zero()
        } else {
            let inv = mod_inverse(&pa, &m);
            (&pa * inv) % &ord
        };
        let s = self.pow_big(&e);
        let u = s.inverse()?.mul(self);
        Ok((s, u))
    }
}

/// Outcome of checking the multiplicative Jordan decomposition on a range
/// of `GL(n, q)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct JordanSweep {
    pub checked: u64,
    /// `s u != g`, `s u != u s`, `s` of order divisible by `p`, or `u` not unipotent.
    pub bad_decompositions: u64,
    /// `c_g != c_s`.
    pub charpoly_mismatches: u64,
}

impl JordanSweep {
    pub fn merge(self, o: JordanSweep) -> JordanSweep {
        JordanSweep {
            checked: self.checked + o.checked,
            bad_decompositions: self.bad_decompositions + o.bad_decompositions,
            charpoly_mismatches: self.charpoly_mismatches + o.charpoly_mismatches,
        }
    }

    pub fn passed(&self) -> bool {
        self.bad_decompositions == 0 && self.charpoly_mismatches == 0
    }
}

/// Decomposes every invertible matrix with index in `lo..hi`.
pub fn jordan_sweep(field: &Field, n: usize, lo: u128, hi: u128) -> Result<JordanSweep> {
    let p = BigUint::from(field.characteristic());
    let mut out = JordanSweep::default();
    for idx in lo..hi {
        let g = Mat::from_index(field, n, idx);
        if !g.is_invertible() {
            continue;
        }
        out.checked += 1;
        let (s, u) = g.jordan_multiplicative()?;
        let id = Mat::identity(field, n);
        let ok = s.mul(&u) == g
            && s.mul(&u) == u.mul(&s)
            && !(s.order()? % &p).is_zero()
            && u.sub(&id).is_nilpotent();
        out.bad_decompositions += u64::from(!ok);
        out.charpoly_mismatches += u64::from(g.charpoly() != s.charpoly());
    }
    Ok(out)
}

/// `f` is primary cyclic for a matrix with the given characteristic and
/// minimal polynomials.
pub fn primary_cyclic_for(charpoly: &Poly, minpoly: &Poly, f: &Poly) -> bool {
    let mc = charpoly.multiplicity(f);
    mc >= 1 && mc == minpoly.multiplicity(f)
}

fn mod_inverse(a: &BigUint, m: &BigUint) -> BigUint {
    let a = BigInt::from(a.clone());
    let m = BigInt::from(m.clone());
    let g = a.extended_gcd(&m);
    debug_assert!(g.gcd.is_one());
    g.x.mod_floor(&m).to_biguint().expect("nonnegative")
}

/// Prime factorization of the exponent of `GL(n, q)`:
/// `p^a · lcm(q^i - 1 : i <= n)` with `p^a` the least `p`-power `>= n`.
fn gl_exponent(q: u64, n: usize) -> Vec<(u64, u32)> {
    let p = prime_divisors(q)[0];
    let mut exps: Vec<(u64, u32)> = Vec::new();
    let mut bump = |l: u64, e: u32| match exps.iter_mut().find(|(x, _)| *x == l) {
        Some(slot) => slot.1 = slot.1.max(e),
        None => exps.push((l, e)),
    };
    let mut a = 0;
    let mut pa = 1u64;
    while pa < n as u64 {
        pa *= p;
        a += 1;
    }
    if a > 0 {
        bump(p, a);
    }
    for i in 1..=n as u32 {
        let v = q.checked_pow(i).expect("q^n fits in u64") - 1;
        for l in prime_divisors(v) {
            let mut e = 0;
            let mut r = v;
            while r % l == 0 {
                r /= l;
                e += 1;
            }
            bump(l, e);
        }
    }
    exps.sort_unstable();
    exps
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `d p^k : e11 e12 ... edd` for square matrices, `r x c p^k : ...` otherwise.
impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_square() {
            write!(f, "{} {} :", self.rows, self.field)?;
        } else {
            write!(f, "{}x{} {} :", self.rows, self.cols, self.field)?;
        }
        for e in &self.data {
            write!(f, " {e}")?;
        }
        Ok(())
    }
}

/// Count of matrices in `GL(n, q)`.
pub fn gl_order(n: usize, q: u64) -> BigUint {
    let qn = BigUint::from(q).pow(n as u32);
    (0..n as u32).map(|i| &qn - BigUint::from(q).pow(i)).product()
}

/// Convenience for tests and sweeps: the number of matrices as `u64` if it fits.
pub fn gl_order_u64(n: usize, q: u64) -> Option<u64> {
    gl_order(n, q).to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fq(q: u64) -> Field {
        Field::with_size(q).unwrap()
    }

    fn all_matrices(field: &Field, n: usize) -> impl Iterator<Item = Mat> + '_ {
        let total = Mat::algebra_size(field.size(), n).unwrap();
        (0..total).map(move |i| Mat::from_index(field, n, i))
    }

    /// det(tI - X) by cofactor expansion over polynomial entries.
    fn charpoly_by_cofactors(x: &Mat) -> Poly {
        let f = x.field().clone();
        let n = x.dim();
        let entries: Vec<Vec<Poly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = Poly::constant(&f, f.neg(x.get(i, j)));
                        if i == j { c.add(&Poly::t(&f)) } else { c }
                    })
                    .collect()
            })
            .collect();
        fn det(m: &[Vec<Poly>], f: &Field) -> Poly {
            let n = m.len();
            if n == 0 {
                return Poly::one(f);
            }
            let mut acc = Poly::zero(f);
            for j in 0..n {
                let minor: Vec<Vec<Poly>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, p)| p.clone()).collect())
                    .collect();
                let term = m[0][j].mul(&det(&minor, f));
                acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
        det(&entries, &f)
    }

    /// Smallest-degree monic divisor of the charpoly that annihilates X.
    fn minpoly_by_divisors(x: &Mat) -> Poly {
        let cp = x.charpoly();
        let fac = cp.factorize().unwrap();
        let mut best: Option<Poly> = None;
        let mut exps = vec![0usize; fac.factors.len()];
        loop {
            let cand = fac
                .factors
                .iter()
                .zip(&exps)
                .fold(Poly::one(x.field()), |acc, ((g, _), &e)| acc.mul(&g.pow(e as u64)));
            if x.eval_poly(&cand).is_zero() && best.as_ref().is_none_or(|b| cand.degree() < b.degree()) {
                best = Some(cand);
            }
            let mut i = 0;
            loop {
                if i == exps.len() {
                    return best.unwrap();
                }
                exps[i] += 1;
                if exps[i] <= fac.factors[i].1 {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
        }
    }

    struct Lcg(u64);
    impl Lcg {
        fn next(&mut self, m: u64) -> u64 {
            self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (self.0 >> 33) % m
        }
        fn mat(&mut self, f: &Field, n: usize) -> Mat {
            let data = (0..n * n).map(|_| f.elem(self.next(f.size()) as u32)).collect();
            Mat::new(f, n, n, data)
        }
    }

    #[test]
    fn charpoly_minpoly_examples() {
        let f2 = fq(2);
        let id = Mat::identity(&f2, 2);
        assert_eq!(id.charpoly(), Poly::from_indices(&f2, &[1, 0, 1]));
        assert_eq!(id.minpoly(), Poly::from_indices(&f2, &[1, 1]));
        let f = Poly::from_indices(&f2, &[1, 1, 0, 1]);
        let c = Mat::companion(&f).unwrap();
        assert_eq!(c.charpoly(), f);
        assert_eq!(c.minpoly(), f);
        let j = Mat::from_indices(&f2, 2, &[0, 1, 0, 0]);
        assert_eq!(j.charpoly(), Poly::from_indices(&f2, &[0, 0, 1]));
        assert_eq!(j.minpoly(), Poly::from_indices(&f2, &[0, 0, 1]));
    }

    #[test]
    fn charpoly_matches_cofactor_oracle() {
        let mut rng = Lcg(7);
        for q in [2u64, 3, 4, 5, 9] {
            let f = fq(q);
            for n in 1..=5 {
                for _ in 0..40 {
                    let x = rng.mat(&f, n);
                    assert_eq!(x.charpoly(), charpoly_by_cofactors(&x), "{x}");
                }
            }
        }
    }

    #[test]
    fn minpoly_matches_divisor_oracle() {
        let mut rng = Lcg(11);
        for q in [2u64, 3, 4] {
            let f = fq(q);
            for n in 1..=5 {
                for _ in 0..40 {
                    // sparse matrices have more interesting minimal polynomials
                    let mut x = rng.mat(&f, n);
                    for k in 0..n * n {
                        if rng.next(3) > 0 {
                            x.data[k] = Elem::ZERO;
                        }
                    }
                    let mp = x.minpoly();
                    assert_eq!(mp, minpoly_by_divisors(&x), "{x}");
                    let cp = x.charpoly();
                    assert!(mp.divides(&cp));
                    assert!(cp.divides(&mp.pow(n as u64)));
                    assert!(x.eval_poly(&mp).is_zero());
                }
            }
        }
    }

    #[test]
    fn invariants_under_conjugation() {
        let mut rng = Lcg(3);
        for q in [2u64, 3, 4] {
            let f = fq(q);
            let mut done = 0;
            while done < 1000 {
                let x = rng.mat(&f, 3);
                let g = rng.mat(&f, 3);
                let Ok(y) = x.conjugate(&g) else { continue };
                assert_eq!(x.charpoly(), y.charpoly());
                assert_eq!(x.minpoly(), y.minpoly());
                done += 1;
            }
        }
    }

    #[test]
    fn fitting_examples() {
        let f2 = fq(2);
        let g = Mat::companion(&Poly::from_indices(&f2, &[1, 1, 1])).unwrap();
        let s = g.fitting_decompose();
        assert_eq!((s.inv_dim(), s.nil_dim()), (2, 0));
        assert_eq!(s.x_inv.charpoly(), g.charpoly());
        let nil = Mat::from_indices(&f2, 2, &[0, 1, 0, 0]);
        assert_eq!(nil.fitting_decompose().inv_dim(), 0);
        let d = Mat::from_indices(&f2, 2, &[1, 0, 0, 0]);
        let s = d.fitting_decompose();
        assert_eq!(s.inv_basis, Mat::from_indices(&f2, 1, &[1, 0]).clone_rect(1, 2));
        assert_eq!(s.nil_basis, Mat::from_indices(&f2, 1, &[0, 1]).clone_rect(1, 2));
    }

    impl Mat {
        fn clone_rect(&self, r: usize, c: usize) -> Mat {
            Mat::new(&self.field, r, c, self.data.clone())
        }
    }

    #[test]
    fn fitting_invariants_exhaustive() {
        for q in [2u64, 3] {
            let f = fq(q);
            for x in all_matrices(&f, 2) {
                let s = x.fitting_decompose();
                let d = 2;
                assert_eq!(s.inv_dim() + s.nil_dim(), d);
                assert_eq!(s.nil_dim(), d - x.pow(d as u64).rank());
                assert!(s.x_inv.is_invertible());
                assert!(s.x_nil.pow(s.nil_dim() as u64).is_zero());
                let p = s.basis();
                assert!(p.is_invertible());
                // P X P^{-1} = X_inv ⊕ X_nil
                let block = p.mul(&x).mul(&p.inverse().unwrap());
                assert_eq!(block, s.x_inv.direct_sum(&s.x_nil));
                // invariance of both subspaces
                assert!(Mat::solve_left(&s.inv_basis, &s.inv_basis.mul(&x)).is_some());
                assert!(Mat::solve_left(&s.nil_basis, &s.nil_basis.mul(&x)).is_some());
            }
        }
    }

    #[test]
    fn nilpotent_counts() {
        for (n, q, expected) in [(2usize, 2u64, 4u64), (2, 3, 9), (3, 2, 64), (3, 3, 729), (1, 2, 1), (1, 3, 1)] {
            let f = fq(q);
            let count = all_matrices(&f, n).filter(|x| x.is_nilpotent()).count() as u64;
            assert_eq!(count, expected);
            assert_eq!(count, q.pow((n * n - n) as u32));
        }
    }

    #[test]
    fn primary_component_examples() {
        let f2 = fq(2);
        let f = Poly::from_indices(&f2, &[1, 1, 1]);
        let c = Mat::companion(&f).unwrap();
        let pd = c.primary_components();
        assert_eq!(pd.components.len(), 1);
        assert_eq!(pd.components[0].basis.rows(), 2);
        let f3 = fq(3);
        let d = Mat::from_indices(&f3, 2, &[1, 0, 0, 2]);
        let pd = d.primary_components();
        assert_eq!(pd.components.len(), 2);
        for comp in &pd.components {
            assert_eq!(comp.basis.rows(), 1);
            assert_eq!((comp.char_mult, comp.min_mult), (1, 1));
        }
        let d = Mat::from_indices(&f2, 2, &[1, 0, 0, 0]);
        let pd = d.primary_components();
        let t_comp = pd.component(&Poly::t(&f2)).unwrap();
        assert_eq!(t_comp.basis, d.fitting_decompose().nil_basis);
    }

    #[test]
    fn primary_components_span() {
        let mut rng = Lcg(5);
        for q in [2u64, 3] {
            let f = fq(q);
            for _ in 0..200 {
                let x = rng.mat(&f, 4);
                let pd = x.primary_components();
                let all = pd.components.iter().fold(Mat::zero_rect(&f, 0, 4), |acc, c| acc.stack(&c.basis));
                assert_eq!(all.rows(), 4);
                assert!(all.is_invertible());
                for c in &pd.components {
                    assert_eq!(c.basis.rows(), c.char_mult * c.poly.degree().unwrap());
                    assert!(1 <= c.min_mult && c.min_mult <= c.char_mult);
                }
            }
        }
    }

    #[test]
    fn primary_cyclic_examples() {
        let f2 = fq(2);
        let f = Poly::from_indices(&f2, &[1, 1, 1]);
        assert!(Mat::companion(&f).unwrap().is_primary_cyclic(&f).unwrap());
        let id = Mat::identity(&f2, 2);
        assert!(!id.is_primary_cyclic(&Poly::from_indices(&f2, &[1, 1])).unwrap());
        let f3 = fq(3);
        let d = Mat::from_indices(&f3, 2, &[1, 0, 0, 2]);
        assert!(d.is_primary_cyclic(&Poly::linear(&f3, Elem::ONE)).unwrap());
        assert_eq!(id.is_primary_cyclic(&Poly::from_indices(&f2, &[1, 0, 1])), Err(Error::NotIrreducible));
    }

    #[test]
    fn plumbing_examples() {
        let f2 = fq(2);
        let mut rng = Lcg(1);
        let x = rng.mat(&f2, 3);
        assert_eq!(x.conjugate(&Mat::identity(&f2, 3)).unwrap(), x);
        let f = Poly::from_indices(&f2, &[1, 1, 1]);
        let c = Mat::companion(&f).unwrap();
        let ds = c.direct_sum(&Mat::zero(&f2, 1));
        assert_eq!(ds.charpoly(), f.mul(&Poly::t(&f2)));
        assert!(c.pow(3).is_identity());
        assert_eq!(c.order().unwrap(), BigUint::from(3u32));
        assert_eq!(x.conjugate(&Mat::zero(&f2, 3)), Err(Error::SingularMatrix));
        assert!(matches!(Mat::companion(&Poly::one(&f2)), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn jordan_decomposition_exhaustive() {
        for (n, q) in [(2usize, 2u64), (2, 3), (3, 2)] {
            let f = fq(q);
            let p = BigUint::from(f.characteristic());
            let mut seen = 0;
            for g in all_matrices(&f, n).filter(Mat::is_invertible) {
                let (s, u) = g.jordan_multiplicative().unwrap();
                assert_eq!(s.mul(&u), g);
                assert_eq!(u.mul(&s), g);
                let os = s.order().unwrap();
                assert!(!(&os % &p).is_zero() || os.is_one());
                let mut ou = u.order().unwrap();
                while (&ou % &p).is_zero() {
                    ou /= &p;
                }
                assert!(ou.is_one());
                assert_eq!(g.charpoly(), s.charpoly());
                seen += 1;
            }
            assert_eq!(BigUint::from(seen as u64), gl_order(n, q));
        }
    }

    #[test]
    fn jordan_sweep_split_ranges() {
        let f = fq(3);
        let whole = jordan_sweep(&f, 2, 0, 81).unwrap();
        assert!(whole.passed());
        assert_eq!(BigUint::from(whole.checked), gl_order(2, 3));
        let parts = jordan_sweep(&f, 2, 0, 40).unwrap().merge(jordan_sweep(&f, 2, 40, 81).unwrap());
        assert_eq!(parts, whole);
    }

    #[test]
    fn jordan_special_cases() {
        let f3 = fq(3);
        let g = Mat::from_indices(&f3, 2, &[2, 0, 0, 1]);
        assert_eq!(g.jordan_multiplicative().unwrap(), (g.clone(), Mat::identity(&f3, 2)));
        let u = Mat::from_indices(&f3, 2, &[1, 1, 0, 1]);
        assert_eq!(u.jordan_multiplicative().unwrap(), (Mat::identity(&f3, 2), u.clone()));
        assert_eq!(Mat::zero(&f3, 2).jordan_multiplicative(), Err(Error::SingularMatrix));
    }

    #[test]
    fn index_round_trip() {
        let f = fq(3);
        for i in (0..3u128.pow(4)).step_by(7) {
            assert_eq!(Mat::from_index(&f, 2, i).index(), i);
        }
    }
}

//! Field towers `F_q ⊂ K = F_{q^b}`, the blow-up `M(c, q^b) -> M(bc, q)` and
//! membership in the large-degree primary-cyclic sets.
//!
//! `K` is always built with its canonical modulus over `F_p`. The subfield
//! `F_q` sits inside `K` through the smallest root of the modulus of `F_q`,
//! and `K` is viewed as an `F_q`-space through the power basis
//! `1, β, …, β^{b-1}` where `β` is the smallest root of the canonical
//! degree-`b` irreducible over `F_q`.

use alloc::vec::Vec;
use core::fmt;

use crate::gf::{Elem, Field};
use crate::matrix::{primary_cyclic_for, Mat};
use crate::poly::{canonical_irreducible, irr_enumerate, Poly};
use crate::{Error, Result};

#[derive(Clone)]
pub struct Tower {
    base: Field,
    ext: Field,
    b: u32,
    beta: Elem,
    /// `embed[x]` is the image of base element `x` in `K`.
    embed: Vec<Elem>,
    /// Inverse of the matrix whose rows are the `F_p`-coordinates of
    /// `emb(θ^i)·β^j`, row index `j·k + i`.
    coord_inv: Mat,
}

/// Outcome of the membership test for `N(c, q, b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcMembership {
    pub member: bool,
    /// The unique `f ∈ Irr_{br}(q)` for which the blow-up is `f`-primary cyclic.
    pub witness_f: Option<Poly>,
    /// The divisor of `f` over `K` that divides the characteristic polynomial.
    pub witness_g: Option<Poly>,
    pub r: Option<usize>,
}

impl PcMembership {
    fn non_member() -> PcMembership {
        PcMembership { member: false, witness_f: None, witness_g: None, r: None }
    }
}

/// Both sides of the blow-up equivalence for one pair `(X, f)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PropositionReport {
    /// `blow_up(X)` is `f`-primary cyclic.
    pub direct: bool,
    /// Some divisor `g` of `f` over `K` satisfies conditions (i) and (ii).
    pub conditions: bool,
}

impl PropositionReport {
    pub fn agree(&self) -> bool {
        self.direct == self.conditions
    }
}

fn roots_in<'a>(ext: &'a Field, coeffs: &'a [Elem]) -> impl Iterator<Item = Elem> + 'a {
    ext.elements().filter(move |&x| {
        coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| ext.add(ext.mul(acc, x), c)).is_zero()
    })
}

impl Tower {
    pub fn new(base: &Field, b: u32) -> Result<Tower> {
        if b == 0 {
            return Err(Error::RangeError("tower degree must be positive".into()));
        }
        let p = base.characteristic();
        let k = base.degree();
        let ext = Field::new(p, k * b, None)?;
        let fp = Field::prime(p)?;

        // image of the generator θ of F_q: smallest root of its modulus in K
        let theta = if k == 1 {
            Elem::ONE
        } else {
            let m: Vec<Elem> = base.modulus_coeffs().iter().map(|&c| ext.from_int(c as i64)).collect();
            let root = roots_in(&ext, &m).next();
            root.expect("K contains F_q")
        };
        let theta_pows: Vec<Elem> = (0..k as u64).map(|i| ext.pow(theta, i)).collect();
        let embed: Vec<Elem> = base
            .elements()
            .map(|x| {
                base.coords(x).iter().zip(&theta_pows).fold(Elem::ZERO, |acc, (&c, &tp)| {
                    ext.add(acc, ext.mul(ext.from_int(c as i64), tp))
                })
            })
            .collect();

        let beta = if b == 1 {
            Elem::ONE
        } else {
            let g = canonical_irreducible(b as usize, base);
            let coeffs: Vec<Elem> = g.coeffs().iter().map(|c| embed[c.index() as usize]).collect();
            let root = roots_in(&ext, &coeffs).next();
            root.expect("K splits every degree-b irreducible")
        };

        let n = (k * b) as usize;
        let mut rows = Vec::with_capacity(n);
        for j in 0..b as u64 {
            let bj = ext.pow(beta, j);
            for &tp in &theta_pows {
                let v = ext.mul(tp, bj);
                rows.push(ext.coords(v).into_iter().map(|c| fp.elem(c)).collect::<Vec<_>>());
            }
        }
        let coord_inv = Mat::from_rows(&fp, rows).inverse().expect("tower basis is independent");
        Ok(Tower { base: base.clone(), ext, b, beta, embed, coord_inv })
    }

    pub fn with_sizes(q: u64, b: u32) -> Result<Tower> {
        Tower::new(&Field::with_size(q)?, b)
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn ext(&self) -> &Field {
        &self.ext
    }

    pub fn degree(&self) -> u32 {
        self.b
    }

    pub fn beta(&self) -> Elem {
        self.beta
    }

    pub fn embed(&self, x: Elem) -> Elem {
        self.embed[x.index() as usize]
    }

    /// `F_q`-coordinates of `x` in the basis `1, β, …, β^{b-1}`.
    pub fn coords(&self, x: Elem) -> Vec<Elem> {
        let fp = self.coord_inv.field();
        let v: Vec<Elem> = self.ext.coords(x).into_iter().map(|c| fp.elem(c)).collect();
        let c = self.coord_inv.apply(&v);
        let k = self.base.degree() as usize;
        c.chunks(k)
            .map(|chunk| self.base.from_coords(&chunk.iter().map(|e| e.index()).collect::<Vec<_>>()))
            .collect()
    }

    /// Preimage of `x` in `F_q`, if it lies in the embedded subfield.
    pub fn descend_elem(&self, x: Elem) -> Option<Elem> {
        let c = self.coords(x);
        c[1..].iter().all(|e| e.is_zero()).then_some(c[0])
    }

    /// `f` over `F_q` viewed over `K`.
    pub fn ascend(&self, f: &Poly) -> Poly {
        f.map_coeffs(&self.ext, |c| self.embed(c))
    }

    /// A polynomial over `K` with all coefficients in `F_q`, rewritten over `F_q`.
    pub fn descend(&self, g: &Poly) -> Option<Poly> {
        let coeffs = g.coeffs().iter().map(|&c| self.descend_elem(c)).collect::<Option<Vec<_>>>()?;
        Some(Poly::new(&self.base, coeffs))
    }

    /// Matrix of `x -> xα` on `K` in the tower basis.
    pub fn regular_rep(&self, alpha: Elem) -> Mat {
        let b = self.b as usize;
        let mut m = Mat::zero(&self.base, b);
        let mut bj = Elem::ONE;
        for j in 0..b {
            for (col, c) in self.coords(self.ext.mul(bj, alpha)).into_iter().enumerate() {
                m.set(j, col, c);
            }
            bj = self.ext.mul(bj, self.beta);
        }
        m
    }

    /// Replaces each entry of `X ∈ M(c, q^b)` by its regular representation.
    pub fn blow_up(&self, x: &Mat) -> Result<Mat> {
        if x.field() != &self.ext {
            return Err(Error::FieldMismatch);
        }
        let c = x.rows();
        let b = self.b as usize;
        let mut out = Mat::zero(&self.base, b * c);
        for i in 0..c {
            for j in 0..x.cols() {
                let r = self.regular_rep(x.get(i, j));
                for a in 0..b {
                    for e in 0..b {
                        out.set(i * b + a, j * b + e, r.get(a, e));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `g^τ` for `τ: x -> x^{q^i}`.
    pub fn conjugate(&self, g: &Poly, i: u32) -> Poly {
        g.galois_conjugate(i, self.base.size()).expect("F_q is a subfield of K")
    }

    /// Length of the Galois orbit of `g`.
    pub fn orbit_length(&self, g: &Poly) -> u32 {
        (1..=self.b).find(|&i| self.b.is_multiple_of(i) && &self.conjugate(g, i) == g).unwrap_or(self.b)
    }

    /// `∏_τ g^τ`, rewritten over `F_q`. Irreducible exactly when the orbit of
    /// `g` is regular.
    pub fn galois_orbit_product(&self, g: &Poly) -> Result<Poly> {
        if g.field() != &self.ext {
            return Err(Error::FieldMismatch);
        }
        if !g.is_monic() || !g.is_irreducible() {
            return Err(Error::NotIrreducible);
        }
        let prod = (0..self.b).fold(Poly::one(&self.ext), |acc, i| acc.mul(&self.conjugate(g, i)));
        Ok(self.descend(&prod).expect("norm has coefficients in F_q"))
    }

    /// Membership of `X ∈ M(c, q^b)` in `N(c, q, b)`, decided over `K`.
    ///
    /// A candidate is an irreducible `g ≠ t` dividing `c_X` with degree
    /// `r > dim V_inv(X) / 2` and a regular Galois orbit; such `g` occurs in
    /// `c_X` with multiplicity one and no other orbit member divides `c_X`.
    pub fn pc_membership(&self, x: &Mat) -> Result<PcMembership> {
        if x.field() != &self.ext {
            return Err(Error::FieldMismatch);
        }
        let c = x.dim();
        let cp = x.charpoly();
        let t = Poly::t(&self.ext);
        let inv_dim = c - cp.multiplicity(&t);
        let mut candidates: Vec<Poly> = cp
            .factorize()?
            .factors
            .into_iter()
            .filter(|(g, _)| !g.is_t() && 2 * g.degree().unwrap() > inv_dim)
            .map(|(g, _)| g)
            .collect();
        candidates.sort_by_key(|g| core::cmp::Reverse(g.degree()));
        let mut mp = None;
        for g in candidates {
            if self.orbit_length(&g) != self.b {
                continue;
            }
            if (1..self.b).any(|i| self.conjugate(&g, i).divides(&cp)) {
                continue;
            }
            let mp = mp.get_or_insert_with(|| x.minpoly());
            if !primary_cyclic_for(&cp, mp, &g) {
                continue;
            }
            let f = self.galois_orbit_product(&g)?;
            return Ok(PcMembership { member: true, r: g.degree(), witness_f: Some(f), witness_g: Some(g) });
        }
        Ok(PcMembership::non_member())
    }

    /// The same membership decided on the blow-up over `F_q`: some
    /// irreducible `f ≠ t` of degree `br` with `r > dim_K V_inv(X) / 2` makes
    /// `blow_up(X)` `f`-primary cyclic.
    pub fn pc_membership_blowup(&self, x: &Mat) -> Result<PcMembership> {
        let y = self.blow_up(x)?;
        let b = self.b as usize;
        let cp = y.charpoly();
        let t = Poly::t(&self.base);
        let inv_dim = (y.dim() - cp.multiplicity(&t)) / b;
        let mut candidates: Vec<Poly> = cp
            .factorize()?
            .factors
            .into_iter()
            .map(|(f, _)| f)
            .filter(|f| {
                let n = f.degree().unwrap();
                !f.is_t() && n % b == 0 && 2 * (n / b) > inv_dim
            })
            .collect();
        candidates.sort_by_key(|f| core::cmp::Reverse(f.degree()));
        if candidates.is_empty() {
            return Ok(PcMembership::non_member());
        }
        let mp = y.minpoly();
        for f in candidates {
            if primary_cyclic_for(&cp, &mp, &f) {
                let r = f.degree().unwrap() / b;
                let g = self
                    .ascend(&f)
                    .factorize()?
                    .factors
                    .into_iter()
                    .map(|(g, _)| g)
                    .find(|g| g.divides(&x.charpoly()));
                return Ok(PcMembership { member: true, witness_f: Some(f), witness_g: g, r: Some(r) });
            }
        }
        Ok(PcMembership::non_member())
    }

    /// Evaluates both sides of the equivalence between `f`-primary cyclicity
    /// of the blow-up and the conditions on divisors of `f` over `K`.
    pub fn proposition_check(&self, x: &Mat, f: &Poly) -> Result<PropositionReport> {
        if f.field() != &self.base {
            return Err(Error::FieldMismatch);
        }
        if !f.is_monic() || !f.is_irreducible() {
            return Err(Error::NotIrreducible);
        }
        let y = self.blow_up(x)?;
        if !f.divides(&y.charpoly()) {
            return Err(Error::NotADivisor);
        }
        let direct = y.is_primary_cyclic(f)?;
        let n = f.degree().unwrap();
        let b = self.b as usize;
        let conditions = n.is_multiple_of(b) && {
            let cp = x.charpoly();
            let mp = x.minpoly();
            self.ascend(f).factorize()?.factors.iter().any(|(g, _)| {
                g.degree() == Some(n / b)
                    && primary_cyclic_for(&cp, &mp, g)
                    && (1..self.b).all(|i| {
                        let gt = self.conjugate(g, i);
                        &gt != g && !gt.divides(&cp)
                    })
            })
        };
        Ok(PropositionReport { direct, conditions })
    }
}

/// Number of `g ∈ Irr_r(q^b)` whose Galois orbit over `F_q` has length `b`,
/// by enumeration.
pub fn count_regular_orbit_irr(r: usize, b: u32, q: u64, budget: u128) -> Result<u64> {
    let tower = Tower::with_sizes(q, b)?;
    let irr = irr_enumerate(r, tower.ext(), budget)?;
    Ok(irr.iter().filter(|g| tower.orbit_length(g) == b).count() as u64)
}

/// Counts over the matrices of `M(c, q^b)` with index in `lo..hi`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MembershipCounts {
    pub total: u64,
    pub members: u64,
    pub invertible: u64,
    pub invertible_members: u64,
    /// Matrices where the direct and blow-up membership tests differ.
    pub route_mismatches: u64,
}

impl MembershipCounts {
    pub fn merge(self, o: MembershipCounts) -> MembershipCounts {
        MembershipCounts {
            total: self.total + o.total,
            members: self.members + o.members,
            invertible: self.invertible + o.invertible,
            invertible_members: self.invertible_members + o.invertible_members,
            route_mismatches: self.route_mismatches + o.route_mismatches,
        }
    }
}

/// Sweeps `lo..hi` of `M(c, q^b)`, optionally cross-checking each matrix
/// against [`Tower::pc_membership_blowup`].
pub fn membership_counts(tower: &Tower, c: usize, lo: u128, hi: u128, cross_check: bool) -> Result<MembershipCounts> {
    let mut out = MembershipCounts::default();
    for idx in lo..hi {
        let x = Mat::from_index(tower.ext(), c, idx);
        let m = tower.pc_membership(&x)?;
        if cross_check && tower.pc_membership_blowup(&x)? != m {
            out.route_mismatches += 1;
        }
        let inv = x.is_invertible();
        out.total += 1;
        out.members += u64::from(m.member);
        out.invertible += u64::from(inv);
        out.invertible_members += u64::from(inv && m.member);
    }
    Ok(out)
}

/// For each `f` in `fs`, the number of invertible `X` (index in `lo..hi`)
/// whose blow-up is `f`-primary cyclic, together with the number of
/// invertible matrices seen.
pub fn primary_cyclic_counts(tower: &Tower, c: usize, fs: &[Poly], lo: u128, hi: u128) -> Result<(u64, Vec<u64>)> {
    let mut counts = alloc::vec![0u64; fs.len()];
    let mut gl = 0u64;
    for idx in lo..hi {
        let x = Mat::from_index(tower.ext(), c, idx);
        if !x.is_invertible() {
            continue;
        }
        gl += 1;
        let y = tower.blow_up(&x)?;
        let cp = y.charpoly();
        let mp = y.minpoly();
        for (n, f) in counts.iter_mut().zip(fs) {
            *n += u64::from(primary_cyclic_for(&cp, &mp, f));
        }
    }
    Ok((gl, counts))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PropositionSweep {
    pub matrices: u64,
    /// `(X, f)` pairs with `f` an irreducible factor of the blow-up's
    /// characteristic polynomial.
    pub pairs: u64,
    pub agreements: u64,
    /// Pairs where the blow-up is `f`-primary cyclic.
    pub positives: u64,
}

impl PropositionSweep {
    pub fn merge(self, o: PropositionSweep) -> PropositionSweep {
        PropositionSweep {
            matrices: self.matrices + o.matrices,
            pairs: self.pairs + o.pairs,
            agreements: self.agreements + o.agreements,
            positives: self.positives + o.positives,
        }
    }

    pub fn all_agree(&self) -> bool {
        self.pairs == self.agreements
    }
}

/// Runs [`Tower::proposition_check`] on every `(X, f)` with `X` of index in
/// `lo..hi` and `f` any irreducible factor of `c_{blow_up(X)}`.
pub fn proposition_sweep(tower: &Tower, c: usize, lo: u128, hi: u128) -> Result<PropositionSweep> {
    let mut out = PropositionSweep::default();
    for idx in lo..hi {
        let x = Mat::from_index(tower.ext(), c, idx);
        out.matrices += 1;
        for (f, _) in tower.blow_up(&x)?.charpoly().factorize()?.factors {
            let rep = tower.proposition_check(&x, &f)?;
            out.pairs += 1;
            out.agreements += u64::from(rep.agree());
            out.positives += u64::from(rep.direct);
        }
    }
    Ok(out)
}

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tower({} over {}, β = {})", self.ext, self.base, self.beta)
    }
}

/// Descriptor `q^b/q`, e.g. `4/2`.
impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.ext.size(), self.base.size())
    }
}

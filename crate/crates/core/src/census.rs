//! NI subsets of `M(d, q)`, their flag families `N_i`, and the identities that
//! tie `|N|` to the `|N_i|`.
//!
//! The fixed maximal flag is `V_i = span(e_1, …, e_i)`. A matrix `Y ∈ GL(i, q)`
//! lies in `N_i` when `Y ⊕ 0_{d-i}` belongs to the set; for NI sets this is
//! the same as asking for some member with invertible part `Y` on `V_i`.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::embed::Tower;
use crate::gf::{Elem, Field};
use crate::matrix::{gl_order, primary_cyclic_for, Mat};
use crate::poly::irr_count;
use crate::rational::{from_biguint, integer, qpow, ratio, Rational};
use crate::{Error, Result};

/// `ω(j, q) = ∏_{k=1}^{j} (1 - q^{-k})`.
pub fn omega(j: u32, q: u64) -> Rational {
    (1..=j as i64).fold(Rational::one(), |acc, k| acc * (Rational::one() - qpow(q, -k)))
}

/// Number of `i`-dimensional subspaces of `F_q^d`.
pub fn gaussian_binomial(d: usize, i: usize, q: u64) -> Result<BigUint> {
    if i > d {
        return Err(Error::IndexOutOfRange { index: i, max: d });
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for k in 0..i as u32 {
        num *= q.pow(d as u32 - k) - 1u32;
        den *= q.pow(k + 1) - 1u32;
    }
    Ok(num / den)
}

/// A subset of `M(d, q)` given by a membership predicate.
///
/// Implementations are expected to be NI sets: closed under conjugation and
/// with `member(X) == member(X_inv ⊕ 0)`. [`ni_verify`] audits both.
pub trait NiSpec: Send + Sync {
    fn name(&self) -> String;

    fn member(&self, x: &Mat) -> bool;

    /// Exact `|N_i| / |GL(i, q)|` in ambient dimension `d`, when known.
    fn closed_form_ni(&self, _d: usize, _i: usize, _q: u64) -> Option<Rational> {
        None
    }

    fn contains_nilpotents(&self, field: &Field, d: usize) -> bool {
        self.member(&Mat::zero(field, d))
    }
}

fn indicator(b: bool) -> Rational {
    if b {
        Rational::one()
    } else {
        Rational::zero()
    }
}

/// The whole algebra.
pub struct All;

impl NiSpec for All {
    fn name(&self) -> String {
        "all".into()
    }
    fn member(&self, _: &Mat) -> bool {
        true
    }
    fn closed_form_ni(&self, _: usize, _: usize, _: u64) -> Option<Rational> {
        Some(Rational::one())
    }
}

pub struct Invertible;

impl NiSpec for Invertible {
    fn name(&self) -> String {
        "invertible".into()
    }
    fn member(&self, x: &Mat) -> bool {
        x.is_invertible()
    }
    fn closed_form_ni(&self, d: usize, i: usize, _: u64) -> Option<Rational> {
        Some(indicator(i == d))
    }
}

/// Matrices that are not nilpotent.
pub struct NilpotentComplement;

impl NiSpec for NilpotentComplement {
    fn name(&self) -> String {
        "nilpotent-complement".into()
    }
    fn member(&self, x: &Mat) -> bool {
        !x.is_nilpotent()
    }
    fn closed_form_ni(&self, _: usize, i: usize, _: u64) -> Option<Rational> {
        Some(indicator(i >= 1))
    }
}

/// Primary cyclic with respect to some irreducible `f ≠ t`.
pub struct PrimaryCyclicNotT;

impl NiSpec for PrimaryCyclicNotT {
    fn name(&self) -> String {
        "primary-cyclic-some-f-not-t".into()
    }
    fn member(&self, x: &Mat) -> bool {
        let cp = x.charpoly();
        let fac = cp.factorize().expect("charpoly is nonzero");
        if fac.factors.iter().all(|(f, _)| f.is_t()) {
            return false;
        }
        let mp = x.minpoly();
        fac.factors.iter().any(|(f, _)| !f.is_t() && primary_cyclic_for(&cp, &mp, f))
    }
}

/// Matrices over `F_{q^b}` whose blow-up to `M(bd, q)` is `f`-primary cyclic
/// for some `f` of degree `br` with `r > dim V_inv / 2`.
pub struct PcLargeDegree {
    tower: Tower,
}

impl PcLargeDegree {
    /// `field` must have size `q^b` for some prime power `q`.
    pub fn new(field: &Field, b: u32) -> Result<PcLargeDegree> {
        let k = field.degree();
        if b == 0 || !k.is_multiple_of(b) {
            return Err(Error::NotASubfield { q: 0, field: field.size() });
        }
        let base = Field::new(field.characteristic(), k / b, None)?;
        let tower = Tower::new(&base, b)?;
        if tower.ext() != field {
            return Err(Error::FieldMismatch);
        }
        Ok(PcLargeDegree { tower })
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }
}

/// `Σ_{r=⌊i/2⌋+1}^{i} b·|Irr_{br}(q) ∖ {t}| / (q^{br} - 1)`, zero at `i = 0`.
pub fn pc_large_degree_ni(i: usize, q: u64, b: u32) -> Rational {
    (i / 2 + 1..=i)
        .map(|r| {
            let m = b * r as u32;
            let mut n = irr_count(m, q);
            if m == 1 {
                n -= 1u32;
            }
            from_biguint(n * b) / from_biguint(BigUint::from(q).pow(m) - 1u32)
        })
        .sum()
}

impl NiSpec for PcLargeDegree {
    fn name(&self) -> String {
        format!("pc-large-degree({})", self.tower.degree())
    }
    fn member(&self, x: &Mat) -> bool {
        self.tower.pc_membership(x).map(|m| m.member).unwrap_or(false)
    }
    fn closed_form_ni(&self, _: usize, i: usize, _: u64) -> Option<Rational> {
        Some(pc_large_degree_ni(i, self.tower.base().size(), self.tower.degree()))
    }
}

/// Square-free characteristic polynomial.
pub struct Separable;

impl NiSpec for Separable {
    fn name(&self) -> String {
        "separable".into()
    }
    fn member(&self, x: &Mat) -> bool {
        x.charpoly().is_squarefree()
    }
}

/// `α` is a root of the characteristic polynomial.
pub struct HasEigenvalue(pub Elem);

impl NiSpec for HasEigenvalue {
    fn name(&self) -> String {
        format!("has-eigenvalue({})", self.0)
    }
    fn member(&self, x: &Mat) -> bool {
        x.charpoly().eval(self.0).is_zero()
    }
}

pub struct Unipotent;

impl NiSpec for Unipotent {
    fn name(&self) -> String {
        "unipotent".into()
    }
    fn member(&self, x: &Mat) -> bool {
        x.sub(&Mat::identity(x.field(), x.dim())).is_nilpotent()
    }
    fn closed_form_ni(&self, d: usize, i: usize, q: u64) -> Option<Rational> {
        Some(if i == d {
            from_biguint(BigUint::from(q).pow((d * d - d) as u32)) / from_biguint(gl_order(d, q))
        } else {
            Rational::zero()
        })
    }
}

pub const BUILTIN_NAMES: [&str; 8] = [
    "all",
    "invertible",
    "nilpotent-complement",
    "primary-cyclic-some-f-not-t",
    "pc-large-degree(b)",
    "separable",
    "has-eigenvalue(a)",
    "unipotent",
];

fn parse_arg(name: &str, prefix: &str) -> Option<Result<u64>> {
    let rest = name.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?;
    Some(rest.trim().parse::<u64>().map_err(|_| Error::UnknownName(name.to_string())))
}

/// Looks up a built-in spec by name for matrices over `field`.
/// Parameterised names take the form `pc-large-degree(2)` and
/// `has-eigenvalue(3)` (an element encoding).
pub fn builtin_spec(name: &str, field: &Field) -> Result<Box<dyn NiSpec>> {
    Ok(match name {
        "all" => Box::new(All),
        "invertible" => Box::new(Invertible),
        "nilpotent-complement" => Box::new(NilpotentComplement),
        "primary-cyclic-some-f-not-t" => Box::new(PrimaryCyclicNotT),
        "separable" => Box::new(Separable),
        "unipotent" => Box::new(Unipotent),
        _ => {
            if let Some(b) = parse_arg(name, "pc-large-degree") {
                Box::new(PcLargeDegree::new(field, b? as u32)?)
            } else if let Some(a) = parse_arg(name, "has-eigenvalue") {
                let a = field.try_elem(a?).ok_or_else(|| Error::UnknownName(name.to_string()))?;
                Box::new(HasEigenvalue(a))
            } else {
                return Err(Error::UnknownName(name.to_string()));
            }
        }
    })
}

/// Every built-in spec that makes sense over `field`, with parameters
/// `b ∈ {1, k}` (for `|field| = p^k`) and eigenvalues `0` and `1`.
pub fn builtin_specs(field: &Field) -> Vec<Box<dyn NiSpec>> {
    let mut out: Vec<Box<dyn NiSpec>> = vec![
        Box::new(All),
        Box::new(Invertible),
        Box::new(NilpotentComplement),
        Box::new(PrimaryCyclicNotT),
        Box::new(Separable),
        Box::new(HasEigenvalue(Elem::ZERO)),
        Box::new(HasEigenvalue(Elem::ONE)),
        Box::new(Unipotent),
    ];
    let k = field.degree();
    let mut bs = vec![1];
    if k > 1 {
        bs.push(k);
    }
    for b in bs {
        out.push(Box::new(PcLargeDegree::new(field, b).expect("b divides the degree")));
    }
    out
}

/// Raw counts from enumerating a range of `M(d, q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixCounts {
    pub total: BigUint,
    /// `|N(i)|`: members with `dim V_inv = i`.
    pub by_inv_dim: Vec<BigUint>,
}

impl MatrixCounts {
    pub fn new(d: usize) -> MatrixCounts {
        MatrixCounts { total: BigUint::zero(), by_inv_dim: vec![BigUint::zero(); d + 1] }
    }

    pub fn merge(mut self, o: MatrixCounts) -> MatrixCounts {
        self.total += o.total;
        for (a, b) in self.by_inv_dim.iter_mut().zip(o.by_inv_dim) {
            *a += b;
        }
        self
    }
}

/// Counts members among the matrices with indices in `lo..hi`, checking
/// `member(X) == member(X_inv ⊕ 0)` along the way.
pub fn count_matrices(spec: &dyn NiSpec, field: &Field, d: usize, lo: u128, hi: u128) -> Result<MatrixCounts> {
    let mut counts = MatrixCounts::new(d);
    for idx in lo..hi {
        let x = Mat::from_index(field, d, idx);
        let m = spec.member(&x);
        let split = x.fitting_decompose();
        if split.nil_dim() > 0 && split.inv_dim() < d && m != spec.member(&split.invertible_part_padded()) {
            return Err(Error::NiViolation { spec: spec.name(), witness: x });
        }
        if m {
            counts.total += 1u32;
            counts.by_inv_dim[split.inv_dim()] += 1u32;
        }
    }
    Ok(counts)
}

/// `(|N_i|, |GL(i, q)|)` restricted to the `M(i, q)` indices `lo..hi`.
pub fn count_ni(spec: &dyn NiSpec, field: &Field, d: usize, i: usize, lo: u128, hi: u128) -> (BigUint, BigUint) {
    let pad = Mat::zero(field, d - i);
    let (mut n, mut g) = (0u64, 0u64);
    for idx in lo..hi {
        let y = Mat::from_index(field, i, idx);
        if !y.is_invertible() {
            continue;
        }
        g += 1;
        if spec.member(&y.direct_sum(&pad)) {
            n += 1;
        }
    }
    (BigUint::from(n), BigUint::from(g))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagRow {
    pub i: usize,
    pub n_i: BigUint,
    pub gl_i: BigUint,
    /// `|N(i)|` counted directly in `M(d, q)`.
    pub n_of_i: BigUint,
}

impl FlagRow {
    pub fn proportion(&self) -> Rational {
        from_biguint(self.n_i.clone()) / from_biguint(self.gl_i.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagCensus {
    pub spec: String,
    pub d: usize,
    pub q: u64,
    pub per_i: Vec<FlagRow>,
    pub n_total: BigUint,
    /// `|N| / |GL(d, q)|` from enumeration.
    pub lhs: Rational,
    /// `Σ_i q^{-(d-i)}/ω(d-i, q) · |N_i|/|GL(i, q)|`.
    pub rhs: Rational,
}

/// Weight of the `i`-th term of the flag sum.
pub fn flag_weight(d: usize, i: usize, q: u64) -> Rational {
    qpow(q, -((d - i) as i64)) / omega((d - i) as u32, q)
}

impl FlagCensus {
    pub fn assemble(spec: String, d: usize, q: u64, counts: MatrixCounts, ni: Vec<(BigUint, BigUint)>) -> FlagCensus {
        let per_i: Vec<FlagRow> = ni
            .into_iter()
            .zip(counts.by_inv_dim)
            .enumerate()
            .map(|(i, ((n_i, gl_i), n_of_i))| FlagRow { i, n_i, gl_i, n_of_i })
            .collect();
        let lhs = from_biguint(counts.total.clone()) / from_biguint(gl_order(d, q));
        let rhs = per_i.iter().map(|row| flag_weight(d, row.i, q) * row.proportion()).sum();
        FlagCensus { spec, d, q, per_i, n_total: counts.total, lhs, rhs }
    }

    pub fn identity_holds(&self) -> bool {
        self.lhs == self.rhs
    }

    /// `|N(i)| = [d i]_q q^{(d-i)(d-1)} |N_i|` for each `i`.
    pub fn counts_hold(&self) -> bool {
        let d = self.d;
        self.per_i.iter().all(|row| {
            let predicted = gaussian_binomial(d, row.i, self.q).unwrap()
                * BigUint::from(self.q).pow(((d - row.i) * (d - 1)) as u32)
                * &row.n_i;
            predicted == row.n_of_i
        }) && self.per_i.iter().map(|r| &r.n_of_i).sum::<BigUint>() == self.n_total
    }

    /// `|N| / |M(d, q)|`, which equals `ω(d, q)` times the flag sum.
    pub fn proportion_of_algebra(&self) -> Rational {
        from_biguint(self.n_total.clone()) / from_biguint(BigUint::from(self.q).pow((self.d * self.d) as u32))
    }

    /// Rows where the spec's closed form disagrees with the count, as
    /// `(i, closed form, counted)`.
    pub fn closed_form_mismatches(&self, spec: &dyn NiSpec) -> Vec<(usize, Rational, Rational)> {
        self.per_i
            .iter()
            .filter_map(|row| {
                let cf = spec.closed_form_ni(self.d, row.i, self.q)?;
                let got = row.proportion();
                (cf != got).then_some((row.i, cf, got))
            })
            .collect()
    }
}

fn check_budget(q: u64, d: usize, budget: u128) -> Result<u128> {
    let needed = Mat::algebra_size(q, d).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(needed)
}

/// Exhaustive census of `spec` on `M(d, q)`.
pub fn census_exact(spec: &dyn NiSpec, field: &Field, d: usize, budget: u128) -> Result<FlagCensus> {
    let q = field.size();
    let total = check_budget(q, d, budget)?;
    let counts = count_matrices(spec, field, d, 0, total)?;
    let ni = (0..=d)
        .map(|i| count_ni(spec, field, d, i, 0, Mat::algebra_size(q, i).unwrap()))
        .collect();
    Ok(FlagCensus::assemble(spec.name(), d, q, counts, ni))
}

/// `|N_i'|` for the flag whose `i`-th space is spanned by the first `i` rows
/// of `flag`, computed from the definition: collect the distinct invertible
/// parts (in the basis given by those rows) of members whose invertible
/// space is exactly that span.
pub fn ni_by_definition(spec: &dyn NiSpec, field: &Field, d: usize, flag: &Mat, budget: u128) -> Result<Vec<u64>> {
    let total = check_budget(field.size(), d, budget)?;
    let spaces: Vec<Mat> = (0..=d)
        .map(|i| Mat::new(field, i, d, flag.entries()[..i * d].to_vec()))
        .collect();
    let reduced: Vec<Mat> = spaces.iter().map(Mat::row_space).collect();
    let mut seen: Vec<BTreeSet<u128>> = vec![BTreeSet::new(); d + 1];
    for idx in 0..total {
        let x = Mat::from_index(field, d, idx);
        if !spec.member(&x) {
            continue;
        }
        let split = x.fitting_decompose();
        let i = split.inv_dim();
        if split.inv_basis != reduced[i] {
            continue;
        }
        seen[i].insert(x.restrict(&spaces[i]).index());
    }
    Ok(seen.iter().map(|s| s.len() as u64).collect())
}

/// Generators of `GL(d, q)`: elementary transvections `I + a E_ij` with `a`
/// running over an `F_p`-basis of `F_q`, and `diag(ω, 1, …, 1)`.
pub fn gl_generators(field: &Field, d: usize) -> Vec<Mat> {
    let p = field.characteristic() as u32;
    let basis: Vec<Elem> = (0..field.degree()).map(|j| field.elem(p.pow(j))).collect();
    let mut out = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if i == j {
                continue;
            }
            for &a in &basis {
                let mut g = Mat::identity(field, d);
                g.set(i, j, a);
                out.push(g);
            }
        }
    }
    if field.size() > 2 && d > 0 {
        let mut g = Mat::identity(field, d);
        g.set(0, 0, field.primitive());
        out.push(g);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NiWitness {
    /// `member(X) != member(X^g)`.
    Conjugation { x: Mat, g: Mat },
    /// `member(X) != member(X_inv ⊕ 0)`.
    NilpotentPart { x: Mat, padded: Mat },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NiReport {
    pub checked: u64,
    pub violations: u64,
    /// First few witnesses, in enumeration order.
    pub witnesses: Vec<NiWitness>,
}

const MAX_WITNESSES: usize = 8;

impl NiReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn merge(mut self, o: NiReport) -> NiReport {
        self.checked += o.checked;
        self.violations += o.violations;
        for w in o.witnesses {
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w);
            }
        }
        self
    }

    fn record(&mut self, w: NiWitness) {
        self.violations += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(w);
        }
    }
}

fn audit_one(spec: &dyn NiSpec, x: &Mat, conjugators: &[Mat], report: &mut NiReport) {
    report.checked += 1;
    let m = spec.member(x);
    let padded = x.fitting_decompose().invertible_part_padded();
    if spec.member(&padded) != m {
        report.record(NiWitness::NilpotentPart { x: x.clone(), padded });
    }
    for g in conjugators {
        let y = x.conjugate(g).expect("conjugator is invertible");
        if spec.member(&y) != m {
            report.record(NiWitness::Conjugation { x: x.clone(), g: g.clone() });
        }
    }
}

/// Exhaustive audit of both NI conditions on the matrices with index in
/// `lo..hi`. Conjugation closure is tested against a generating set, which
/// suffices because the set is finite.
pub fn ni_verify_range(spec: &dyn NiSpec, field: &Field, d: usize, lo: u128, hi: u128) -> NiReport {
    let gens = gl_generators(field, d);
    let mut report = NiReport::default();
    for idx in lo..hi {
        audit_one(spec, &Mat::from_index(field, d, idx), &gens, &mut report);
    }
    report
}

/// Audits the NI conditions: exhaustively when `q^{d²} ≤ budget`, otherwise
/// on `trials` random matrices, each conjugated by a random invertible matrix
/// and by the generators.
pub fn ni_verify<R: Rng + ?Sized>(
    spec: &dyn NiSpec,
    field: &Field,
    d: usize,
    trials: u64,
    budget: u128,
    rng: &mut R,
) -> NiReport {
    match check_budget(field.size(), d, budget) {
        Ok(total) => ni_verify_range(spec, field, d, 0, total),
        Err(_) => {
            let mut gens = gl_generators(field, d);
            let mut report = NiReport::default();
            for _ in 0..trials.max(1) {
                let x = crate::estimate::sample_matrix(d, field, rng);
                gens.push(crate::estimate::sample_gl(d, field, rng));
                audit_one(spec, &x, &gens, &mut report);
                gens.pop();
            }
            report
        }
    }
}

/// Both sides of the two corollary identities for `N = M(d, q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorollarySums {
    /// `Σ_{i=0}^{d} q^{-(d-i)}/ω(d-i, q)`.
    pub full_lhs: Rational,
    /// `1/ω(d, q)`.
    pub full_rhs: Rational,
    /// The same sum from `i = 1`.
    pub truncated_lhs: Rational,
    /// `(1 - q^{-d})/ω(d, q)`.
    pub truncated_rhs: Rational,
}

impl CorollarySums {
    pub fn holds(&self) -> bool {
        self.full_lhs == self.full_rhs && self.truncated_lhs == self.truncated_rhs
    }
}

pub fn corollary_sum_check(d: usize, q: u64) -> CorollarySums {
    let terms: Vec<Rational> = (0..=d).map(|i| flag_weight(d, i, q)).collect();
    let full_lhs: Rational = terms.iter().sum();
    let truncated_lhs: Rational = terms[1..].iter().sum();
    let w = omega(d as u32, q);
    CorollarySums {
        full_lhs,
        full_rhs: w.recip(),
        truncated_lhs,
        truncated_rhs: (Rational::one() - qpow(q, -(d as i64))) / w,
    }
}

fn positive(a: &Rational, k: &Rational) -> Result<()> {
    if a.is_positive() && k.is_positive() {
        Ok(())
    } else {
        Err(Error::NonPositiveConstants)
    }
}

/// Lower bound `a - (a + k) d q^{-d}` on `|N|/|M(d, q)|` given
/// `|N_i|/|GL(i, q)| ≥ a - k q^{-i}` for `1 ≤ i ≤ d`.
pub fn transfer_bound_exp(a: &Rational, k: &Rational, d: usize, q: u64) -> Result<Rational> {
    positive(a, k)?;
    Ok(a - (a + k) * integer(d as u64) * qpow(q, -(d as i64)))
}

/// Lower bounds `(a - 3k/d)(1 - q^{-d})` and its relaxation `a - (a + 3k)/d`
/// given `|N_i|/|GL(i, q)| ≥ a - k/i` for `1 ≤ i ≤ d`.
pub fn transfer_bound_linear(a: &Rational, k: &Rational, d: usize, q: u64) -> Result<(Rational, Rational)> {
    positive(a, k)?;
    if d == 0 {
        return Err(Error::RangeError("dimension must be positive".into()));
    }
    let dd = integer(d as u64);
    let three = integer(3u32);
    let tight = (a - &three * k / &dd) * (Rational::one() - qpow(q, -(d as i64)));
    let loose = a - (a + three * k) / dd;
    Ok((tight, loose))
}

/// Smallest usable `k` with `p_i ≥ a - k·q^{-i}` for all listed `(i, p_i)`;
/// a tiny positive value when the constraint is slack everywhere.
pub fn fit_k_exp(a: &Rational, props: &[(usize, Rational)], q: u64) -> Rational {
    let k = props.iter().map(|(i, p)| qpow(q, *i as i64) * (a - p)).max();
    k.filter(|k| k.is_positive()).unwrap_or_else(tiny)
}

/// Smallest usable `k` with `p_i ≥ a - k/i` for all listed `(i, p_i)`.
pub fn fit_k_linear(a: &Rational, props: &[(usize, Rational)]) -> Rational {
    let k = props.iter().map(|(i, p)| integer(*i as u64) * (a - p)).max();
    k.filter(|k| k.is_positive()).unwrap_or_else(tiny)
}

fn tiny() -> Rational {
    ratio(1, BigInt::from(2u32).pow(64))
}

/// `(d Σ_{i=1}^{d} q^i / i, 3 q^d)`; the first is always the smaller.
pub fn aux_sum_sides(d: usize, q: u64) -> (Rational, Rational) {
    let s: Rational = (1..=d).map(|i| qpow(q, i as i64) / integer(i as u64)).sum();
    (s * integer(d as u64), integer(3u32) * qpow(q, d as i64))
}

/// Exact `|GL(i, q)| / |M(i, q)|` check used by tests: counts invertible
/// matrices by enumeration.
pub fn count_invertible(field: &Field, d: usize) -> u64 {
    (0..Mat::algebra_size(field.size(), d).unwrap())
        .filter(|&i| Mat::from_index(field, d, i).is_invertible())
        .count() as u64
}

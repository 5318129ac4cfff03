//! JSON views of core results. Exact quantities are never floats: rationals
//! become `{"num": "...", "den": "..."}` and big integers decimal strings.
//! Keys come out sorted, so equal inputs serialise to equal bytes.

use nicensus_core::census::{flag_weight, FlagCensus, NiReport, NiSpec, NiWitness};
use nicensus_core::embed::PcMembership;
use nicensus_core::estimate::{Direction, ProportionReport};
use nicensus_core::interval::{Interval, Verdict};
use nicensus_core::quokka::BoundSheet;
use nicensus_core::rational::Rational;
use nicensus_core::{Mat, Poly};
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::format::field_descriptor;

pub fn rational(r: &Rational) -> Value {
    json!({ "num": r.numer().to_string(), "den": r.denom().to_string() })
}

pub fn big(n: &BigUint) -> Value {
    Value::String(n.to_string())
}

/// Endpoints as shortest round-trip decimals of an outward-rounded enclosure.
pub fn interval(iv: Interval) -> Value {
    json!({ "lower": iv.lo.to_string(), "upper": iv.hi.to_string(), "rounding": "outward" })
}

pub fn verdict(v: Verdict) -> Value {
    Value::String(v.as_str().into())
}

pub fn opt<T>(x: Option<T>, f: impl FnOnce(T) -> Value) -> Value {
    x.map_or(Value::Null, f)
}

pub fn poly(p: &Poly) -> Value {
    json!({
        "text": p.to_string(),
        "coeffs": p.coeffs().iter().map(|c| c.index()).collect::<Vec<_>>(),
    })
}

pub fn mat(m: &Mat) -> Value {
    json!({
        "field": field_descriptor(m.field()),
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": m.entries().iter().map(|e| e.index()).collect::<Vec<_>>(),
    })
}

pub fn flag_census(c: &FlagCensus, spec: &dyn NiSpec) -> Value {
    let rows: Vec<Value> = c
        .per_i
        .iter()
        .map(|r| {
            json!({
                "i": r.i,
                "n_i": big(&r.n_i),
                "gl_i": big(&r.gl_i),
                "n_of_i": big(&r.n_of_i),
                "proportion": rational(&r.proportion()),
                "weight": rational(&flag_weight(c.d, r.i, c.q)),
                "closed_form": opt(spec.closed_form_ni(c.d, r.i, c.q), |x| rational(&x)),
            })
        })
        .collect();
    let mismatches: Vec<Value> = c
        .closed_form_mismatches(spec)
        .iter()
        .map(|(i, cf, got)| json!({ "i": i, "closed_form": rational(cf), "counted": rational(got) }))
        .collect();
    json!({
        "spec": c.spec,
        "d": c.d,
        "q": c.q,
        "per_i": rows,
        "n_total": big(&c.n_total),
        "lhs": rational(&c.lhs),
        "rhs": rational(&c.rhs),
        "identity_holds": c.identity_holds(),
        "counts_hold": c.counts_hold(),
        "proportion_of_algebra": rational(&c.proportion_of_algebra()),
        "closed_form_mismatches": mismatches,
    })
}

pub fn bound_sheet(s: &BoundSheet) -> Value {
    json!({
        "c": s.c,
        "q": s.q,
        "b": s.b,
        "exact_by_r": s.exact_by_r.iter().map(|(r, v)| json!({ "r": r, "value": rational(v) })).collect::<Vec<_>>(),
        "exact_total": rational(&s.exact_total),
        "band_lower": opt(s.lower, interval),
        "band_upper": opt(s.upper, interval),
        "band_lower_verdict": opt(s.band_lower, verdict),
        "band_upper_verdict": opt(s.band_upper, verdict),
        "per_r_bounds_hold": s.per_r_bounds,
        "algebra_exact": rational(&s.thm_exact),
        "algebra_bound": opt(s.thm_bound, interval),
        "algebra_bound_verdict": opt(s.thm, verdict),
        "violations": s.violations(),
    })
}

fn direction(d: Direction) -> &'static str {
    match d {
        Direction::Lower => "lower",
        Direction::Upper => "upper",
    }
}

pub fn proportion_report(r: &ProportionReport) -> Value {
    let bounds: Vec<Value> = r
        .bounds
        .iter()
        .map(|(b, v)| json!({ "name": b.name, "value": interval(b.value), "direction": direction(b.direction), "verdict": verdict(*v) }))
        .collect();
    json!({
        "n": r.n,
        "hits": r.hits,
        "estimate": r.estimate.to_string(),
        "ci_low": r.ci_low.to_string(),
        "ci_high": r.ci_high.to_string(),
        "confidence": "0.99 wilson",
        "exact": opt(r.exact.as_ref(), rational),
        "exact_in_ci": opt(r.exact.as_ref(), |x| Value::Bool(r.ci_contains(x))),
        "bounds": bounds,
    })
}

pub fn pc_membership(m: &PcMembership) -> Value {
    json!({
        "member": m.member,
        "f": opt(m.witness_f.as_ref(), poly),
        "g": opt(m.witness_g.as_ref(), poly),
        "r": m.r,
    })
}

pub fn ni_report(r: &NiReport) -> Value {
    let witnesses: Vec<Value> = r
        .witnesses
        .iter()
        .map(|w| match w {
            NiWitness::Conjugation { x, g } => json!({ "kind": "conjugation", "x": x.to_string(), "g": g.to_string() }),
            NiWitness::NilpotentPart { x, padded } => {
                json!({ "kind": "nilpotent-part", "x": x.to_string(), "invertible_part": padded.to_string() })
            }
        })
        .collect();
    json!({ "checked": r.checked, "violations": r.violations, "passed": r.passed(), "witnesses": witnesses })
}

/// Fitting split, characteristic and minimal polynomials and primary
/// components of a square matrix.
pub fn decomposition(x: &Mat) -> nicensus_core::Result<Value> {
    let split = x.fitting_decompose();
    let cp = x.charpoly();
    let mp = x.minpoly();
    let parts = x.primary_components();
    let comps: Vec<Value> = parts
        .components
        .iter()
        .map(|c| {
            json!({
                "f": poly(&c.poly),
                "char_mult": c.char_mult,
                "min_mult": c.min_mult,
                "dim": c.basis.rows(),
                "primary_cyclic": c.char_mult >= 1 && c.char_mult == c.min_mult,
                "basis": mat(&c.basis),
            })
        })
        .collect();
    let factors: Vec<Value> = cp
        .factorize()?
        .factors
        .iter()
        .map(|(f, m)| json!({ "f": poly(f), "mult": m }))
        .collect();
    Ok(json!({
        "matrix": mat(x),
        "charpoly": poly(&cp),
        "minpoly": poly(&mp),
        "charpoly_factors": factors,
        "fitting": {
            "inv_dim": split.inv_dim(),
            "nil_dim": split.nil_dim(),
            "inv_basis": mat(&split.inv_basis),
            "nil_basis": mat(&split.nil_basis),
            "x_inv": mat(&split.x_inv),
            "x_nil": mat(&split.x_nil),
        },
        "primary_components": comps,
    }))
}

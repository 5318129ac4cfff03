//! Coverage of the 99% Wilson interval on predicates whose proportion is
//! known exactly by enumerating `M(2, 2)` or `M(2, 3)`.

use nicensus_core::estimate::{monte_carlo, SampleConfig, Target};
use nicensus_core::rational::ratio;
use nicensus_core::{Field, Mat};

type Pred = fn(&Mat) -> bool;

fn entry(m: &Mat, r: usize, c: usize) -> u32 {
    m.get(r, c).index()
}

fn trace(m: &Mat) -> u32 {
    let f = m.field();
    f.add(m.get(0, 0), m.get(1, 1)).index()
}

const PREDICATES: [(&str, Pred); 10] = [
    ("invertible", |m| m.is_invertible()),
    ("nilpotent", |m| m.is_nilpotent()),
    ("trace zero", |m| trace(m) == 0),
    ("trace one", |m| trace(m) == 1),
    ("det one", |m| m.det().index() == 1),
    ("top-left zero", |m| entry(m, 0, 0) == 0),
    ("symmetric", |m| entry(m, 0, 1) == entry(m, 1, 0)),
    ("irreducible charpoly", |m| m.charpoly().is_irreducible()),
    ("cyclic", |m| m.minpoly() == m.charpoly()),
    ("no nilpotent part", |m| m.inv_dim() == 2),
];

#[test]
fn twenty_predicates_are_covered() {
    let mut covered = 0;
    let mut lines = Vec::new();
    for (k, q) in [2u64, 3].into_iter().enumerate() {
        let f = Field::with_size(q).unwrap();
        let total = Mat::algebra_size(q, 2).unwrap();
        for (j, (name, pred)) in PREDICATES.iter().enumerate() {
            let hits = (0..total).filter(|&i| pred(&Mat::from_index(&f, 2, i))).count();
            let exact = ratio(hits as u64, total as u64);
            let cfg = SampleConfig { seed: 1000 + (k * 10 + j) as u64, n: 20_000, target: Target::Algebra };
            let r = monte_carlo(pred, 2, &f, &cfg, 1 << 24, Some(exact.clone()), vec![]).unwrap();
            let ok = r.ci_contains(&exact);
            covered += usize::from(ok);
            lines.push(format!("M(2,{q}) {name}: exact {exact}, interval [{:.4}, {:.4}] {ok}", r.ci_low, r.ci_high));
        }
    }
    assert!(covered >= 18, "{covered} of 20 covered:\n{}", lines.join("\n"));
}

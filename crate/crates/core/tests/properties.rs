use nicensus_core::embed::Tower;
use nicensus_core::estimate::{wilson, Z_99};
use nicensus_core::{Field, Mat, Poly};
use proptest::prelude::*;

const SIZES: [u64; 8] = [2, 3, 4, 5, 7, 8, 9, 16];

fn field_and_elems() -> impl Strategy<Value = (Field, u32, u32, u32)> {
    prop::sample::select(SIZES.to_vec()).prop_flat_map(|q| {
        let q32 = q as u32;
        (Just(Field::with_size(q).unwrap()), 0..q32, 0..q32, 0..q32)
    })
}

fn small_matrix() -> impl Strategy<Value = (Field, usize, u128, u128)> {
    (prop::sample::select(vec![2u64, 3, 4, 5]), 1usize..=4).prop_flat_map(|(q, n)| {
        let size = Mat::algebra_size(q, n).unwrap();
        (Just(Field::with_size(q).unwrap()), Just(n), 0..size, 0..size)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms((f, a, b, c) in field_and_elems()) {
        let (a, b, c) = (f.elem(a), f.elem(b), f.elem(c));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != nicensus_core::Elem::ZERO {
            prop_assert_eq!(f.mul(a, f.inv(a)), nicensus_core::Elem::ONE);
            prop_assert_eq!(f.pow(a, f.size() - 1), nicensus_core::Elem::ONE);
        }
        prop_assert_eq!(f.pow(a, f.size()), a);
    }

    #[test]
    fn matrix_index_round_trip((f, n, i, _j) in small_matrix()) {
        let m = Mat::from_index(&f, n, i);
        prop_assert_eq!(m.index(), i);
    }

    #[test]
    fn similarity_invariants((f, n, i, j) in small_matrix()) {
        let x = Mat::from_index(&f, n, i);
        let g = Mat::from_index(&f, n, j);
        prop_assume!(g.is_invertible());
        let y = x.conjugate(&g).unwrap();
        prop_assert_eq!(y.charpoly(), x.charpoly());
        prop_assert_eq!(y.minpoly(), x.minpoly());
        prop_assert_eq!(y.inv_dim(), x.inv_dim());
    }

    #[test]
    fn minpoly_divides_charpoly_and_annihilates((f, n, i, _j) in small_matrix()) {
        let x = Mat::from_index(&f, n, i);
        let (c, m) = (x.charpoly(), x.minpoly());
        prop_assert!(m.divides(&c));
        prop_assert!(x.eval_poly(&m).is_zero());
        prop_assert!(x.eval_poly(&c).is_zero());
        prop_assert_eq!(c.degree(), Some(n));
    }

    #[test]
    fn fitting_split_is_complementary((f, n, i, _j) in small_matrix()) {
        let x = Mat::from_index(&f, n, i);
        let s = x.fitting_decompose();
        prop_assert_eq!(s.inv_dim() + s.nil_dim(), n);
        let t = Poly::t(&f);
        prop_assert_eq!(x.charpoly().multiplicity(&t), s.nil_dim());
    }

    #[test]
    fn factorization_recomposes((f, n, i, _j) in small_matrix()) {
        let c = Mat::from_index(&f, n, i).charpoly();
        let fac = c.factorize().unwrap();
        prop_assert_eq!(fac.recompose(&f), c);
    }

    #[test]
    fn blow_up_is_multiplicative(i in 0u128..256, j in 0u128..256) {
        let tower = Tower::with_sizes(2, 2).unwrap();
        let x = Mat::from_index(tower.ext(), 2, i);
        let y = Mat::from_index(tower.ext(), 2, j);
        let bx = tower.blow_up(&x).unwrap();
        let by = tower.blow_up(&y).unwrap();
        prop_assert_eq!(tower.blow_up(&x.mul(&y)).unwrap(), bx.mul(&by));
        prop_assert_eq!(tower.blow_up(&x.add(&y)).unwrap(), bx.add(&by));
    }

    #[test]
    fn wilson_brackets_the_estimate(n in 1u64..1_000_000, frac in 0.0f64..=1.0) {
        let hits = ((n as f64) * frac).floor() as u64;
        let (lo, hi) = wilson(hits, n, Z_99);
        let p = hits as f64 / n as f64;
        prop_assert!(0.0 <= lo && lo <= p && p <= hi && hi <= 1.0);
        prop_assert!(lo < hi);
    }
}

//! Field axioms and table/algorithm agreement on fields too large to test
//! exhaustively.

use std::sync::OnceLock;

use pglcode::field::{Field, FieldElem, QuadRoots};
use proptest::prelude::*;

const QS: [u64; 11] = [16, 25, 27, 32, 49, 64, 81, 121, 125, 169, 256];

fn fields() -> &'static [Field] {
    static FIELDS: OnceLock<Vec<Field>> = OnceLock::new();
    FIELDS.get_or_init(|| QS.iter().map(|&q| Field::for_q(q).unwrap()).collect())
}

/// A field and three of its elements.
fn sample() -> impl Strategy<Value = (&'static Field, FieldElem, FieldElem, FieldElem)> {
    (0..QS.len(), any::<u32>(), any::<u32>(), any::<u32>()).prop_map(|(i, x, y, z)| {
        let f = &fields()[i];
        let n = f.size() as u64;
        let e = |v: u32| f.elem(v as u64 % n).unwrap();
        (f, e(x), e(y), e(z))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn ring_axioms((f, x, y, z) in sample()) {
        prop_assert_eq!(f.add(x, f.add(y, z)), f.add(f.add(x, y), z));
        prop_assert_eq!(f.mul(x, f.mul(y, z)), f.mul(f.mul(x, y), z));
        prop_assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
        prop_assert_eq!(f.add(x, y), f.add(y, x));
        prop_assert_eq!(f.mul(x, y), f.mul(y, x));
        prop_assert_eq!(f.add(x, f.neg(x)), FieldElem::ZERO);
        prop_assert_eq!(f.sub(f.add(x, y), y), x);
    }

    #[test]
    fn inverses((f, x, y, _z) in sample()) {
        if !x.is_zero() {
            prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), FieldElem::ONE);
            prop_assert_eq!(f.mul(f.div(y, x).unwrap(), x), y);
            prop_assert_eq!(f.pow(x, -1).unwrap(), f.inv(x).unwrap());
        } else {
            prop_assert!(f.inv(x).is_err());
        }
    }

    #[test]
    fn frobenius_and_norm((f, x, y, _z) in sample()) {
        let q = f.q() as u64;
        prop_assert_eq!(f.frobenius(x), f.pow_u(x, q));
        prop_assert_eq!(f.frobenius(f.frobenius(x)), x);
        prop_assert_eq!(f.frobenius(f.add(x, y)), f.add(f.frobenius(x), f.frobenius(y)));
        prop_assert_eq!(f.norm(f.mul(x, y)), f.mul(f.norm(x), f.norm(y)));
        prop_assert!(f.in_subfield(f.norm(x)));
        prop_assert_eq!(f.in_subfield(x), f.frobenius(x) == x);
    }

    #[test]
    fn square_roots((f, x, _y, _z) in sample()) {
        let sq = f.mul(x, x);
        let r = f.sqrt(sq).unwrap();
        prop_assert_eq!(f.mul(r, r), sq);
        if !f.is_even() {
            let ts = f.sqrt_tonelli_shanks(sq).unwrap();
            prop_assert!(ts == r || ts == f.neg(r));
            let n = f.norm(x);
            prop_assert_eq!(f.square_class(n).unwrap(), f.square_class_euler(n).unwrap());
        }
    }

    #[test]
    fn quadratic_roots_satisfy_equation((f, a, b, c) in sample()) {
        prop_assume!(!a.is_zero());
        let eval = |x| f.add(f.add(f.mul(a, f.mul(x, x)), f.mul(b, x)), c);
        match f.solve_quadratic(a, b, c).unwrap() {
            QuadRoots::None => {
                // no element is a root
                prop_assert!(f.elements().all(|x| eval(x) != FieldElem::ZERO));
            }
            QuadRoots::Double(x) => prop_assert_eq!(eval(x), FieldElem::ZERO),
            QuadRoots::Pair(x, y) => {
                prop_assert_ne!(x, y);
                prop_assert_eq!(eval(x), FieldElem::ZERO);
                prop_assert_eq!(eval(y), FieldElem::ZERO);
                // Viète
                prop_assert_eq!(f.mul(a, f.mul(x, y)), c);
            }
        }
    }
}

#[test]
fn tables_are_consistent() {
    for f in fields() {
        let order = f.size() as u64 - 1;
        let g = f.generator();
        assert_eq!(f.exp(0), FieldElem::ONE);
        assert_eq!(f.exp(1), g);
        for i in 0..order {
            assert_eq!(f.log(f.exp(i)), Some(i as u32));
        }
        assert_eq!(f.subfield().len(), f.q() as usize);
    }
}

//! Tonelli–Shanks square roots, kept as an independent check on the
//! precomputed square-root table.

use super::{Field, FieldElem};

impl Field {
    /// A square root of `a` in GF(q²) for odd q, by Tonelli–Shanks. Returns
    /// `None` for nonsquares. Characteristic 2 is handled by inverting the
    /// absolute Frobenius.
    pub fn sqrt_tonelli_shanks(&self, a: FieldElem) -> Option<FieldElem> {
        if a.is_zero() {
            return Some(a);
        }
        let n = (self.size() - 1) as u64;
        if self.is_even() {
            return Some(self.pow_u(a, n.div_ceil(2)));
        }
        let one = FieldElem::ONE;
        if self.pow_u(a, n / 2) != one {
            return None;
        }
        let mut m = n;
        let mut s = 0u32;
        while m.is_multiple_of(2) {
            m /= 2;
            s += 1;
        }
        let z = self
            .units()
            .find(|&z| self.pow_u(z, n / 2) != one)
            .expect("odd-order fields have nonsquares");

        let mut c = self.pow_u(z, m);
        let mut x = self.pow_u(a, m.div_ceil(2));
        let mut t = self.pow_u(a, m);
        let mut r = s;
        while t != one {
            let mut i = 0;
            let mut t2 = t;
            while t2 != one {
                t2 = self.mul(t2, t2);
                i += 1;
            }
            let mut b = c;
            for _ in 0..r - i - 1 {
                b = self.mul(b, b);
            }
            x = self.mul(x, b);
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = i;
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use crate::field::{Field, FieldElem};

    #[test]
    fn agrees_with_table() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 25, 27] {
            let f = Field::for_q(q).unwrap();
            for a in f.elements() {
                let ts = f.sqrt_tonelli_shanks(a);
                let table = f.sqrt(a);
                assert_eq!(ts.is_some(), table.is_some(), "q = {q}, a = {a}");
                if let (Some(x), Some(y)) = (ts, table) {
                    assert_eq!(f.mul(x, x), a);
                    assert!(x == y || x == f.neg(y));
                }
            }
        }
    }

    #[test]
    fn half_of_units_are_squares() {
        let f = Field::for_q(9).unwrap();
        let n = f.units().filter(|&a| f.sqrt(a).is_some()).count();
        assert_eq!(n, 40);
        assert_eq!(f.sqrt(FieldElem::ZERO), Some(FieldElem::ZERO));
    }
}

//! GL(2,q) as the invertible maps `f_{a,b}: x -> a x + b x^q` on GF(q²).
//!
//! Every GF(q)-linear map of GF(q²) has exactly one such representation, so a
//! group element is just the coefficient pair `(a, b)`. The map is invertible
//! iff `N(a) != N(b)` where `N` is the norm `x -> x^(q+1)`.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};

/// The invertible map `x -> a x + b x^q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElem {
    a: FieldElem,
    b: FieldElem,
}

impl GroupElem {
    pub(crate) fn new_unchecked(a: FieldElem, b: FieldElem) -> Self {
        GroupElem { a, b }
    }

    pub fn a(&self) -> FieldElem {
        self.a
    }

    pub fn b(&self) -> FieldElem {
        self.b
    }

    pub fn pair(&self) -> (u32, u32) {
        (self.a.index(), self.b.index())
    }
}

impl Serialize for GroupElem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.pair().serialize(serializer)
    }
}

impl std::fmt::Display for GroupElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// Parameter `s` of the conjugates `L_{t,s}`: a field element or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SParam {
    Finite(FieldElem),
    Infinity,
}

/// A conjugacy class `C_t`, keyed by the smaller of `t` and `t^q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ConjClassKey(FieldElem);

impl ConjClassKey {
    pub fn representative(&self) -> FieldElem {
        self.0
    }
}

/// Group operations over a borrowed field.
#[derive(Debug, Clone, Copy)]
pub struct Gl2<'f> {
    field: &'f Field,
}

impl<'f> Gl2<'f> {
    pub fn new(field: &'f Field) -> Self {
        Gl2 { field }
    }

    pub fn field(&self) -> &'f Field {
        self.field
    }

    /// `|GL(2,q)| = (q²−1)(q²−q)`.
    pub fn order(&self) -> u64 {
        let q = self.field.q() as u64;
        (q * q - 1) * (q * q - q)
    }

    pub fn identity(&self) -> GroupElem {
        GroupElem::new_unchecked(FieldElem::ONE, FieldElem::ZERO)
    }

    pub fn is_invertible(&self, a: FieldElem, b: FieldElem) -> bool {
        self.field.norm(a) != self.field.norm(b)
    }

    pub fn make(&self, a: FieldElem, b: FieldElem) -> Result<GroupElem> {
        if self.is_invertible(a, b) {
            Ok(GroupElem::new_unchecked(a, b))
        } else {
            Err(Error::NotInvertible {
                a: a.index(),
                b: b.index(),
            })
        }
    }

    /// Dense index `a * q² + b`, used by the count tables.
    #[inline]
    pub fn raw_index(&self, g: GroupElem) -> usize {
        g.a.index() as usize * self.field.size() as usize + g.b.index() as usize
    }

    pub fn from_raw_index(&self, index: usize) -> Result<GroupElem> {
        let q2 = self.field.size() as usize;
        if index >= q2 * q2 {
            return Err(Error::OutOfRange(index as u64));
        }
        let a = FieldElem::from_raw((index / q2) as u32);
        let b = FieldElem::from_raw((index % q2) as u32);
        self.make(a, b)
    }

    /// All group elements in `(a, b)` order.
    pub fn elements(&self) -> Vec<GroupElem> {
        let f = self.field;
        let mut out = Vec::with_capacity(self.order() as usize);
        for a in f.elements() {
            for b in f.elements() {
                if self.is_invertible(a, b) {
                    out.push(GroupElem::new_unchecked(a, b));
                }
            }
        }
        out
    }

    #[inline]
    pub fn apply(&self, g: GroupElem, x: FieldElem) -> FieldElem {
        let f = self.field;
        f.add(f.mul(g.a, x), f.mul(g.b, f.frobenius(x)))
    }

    /// `g ∘ h`, i.e. `x -> g(h(x))`:
    /// `(a, b) ∘ (c, d) = (ac + b d^q, ad + b c^q)`.
    #[inline]
    pub fn compose(&self, g: GroupElem, h: GroupElem) -> GroupElem {
        let f = self.field;
        let a = f.add(f.mul(g.a, h.a), f.mul(g.b, f.frobenius(h.b)));
        let b = f.add(f.mul(g.a, h.b), f.mul(g.b, f.frobenius(h.a)));
        GroupElem::new_unchecked(a, b)
    }

    /// `f_{a,b}^{-1} = f_{a', b'}` with `a' = a^q / D`, `b' = -b / D` and
    /// `D = N(a) - N(b)`.
    pub fn inverse(&self, g: GroupElem) -> GroupElem {
        let f = self.field;
        let det = f.sub(f.norm(g.a), f.norm(g.b));
        let det_inv = f.inv_nonzero(det);
        GroupElem::new_unchecked(
            f.mul(f.frobenius(g.a), det_inv),
            f.mul(f.neg(g.b), det_inv),
        )
    }

    pub fn pow(&self, g: GroupElem, mut n: u64) -> GroupElem {
        let mut acc = self.identity();
        let mut base = g;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.compose(acc, base);
            }
            base = self.compose(base, base);
            n >>= 1;
        }
        acc
    }

    /// `h^{-1} g h`.
    pub fn conjugate(&self, g: GroupElem, h: GroupElem) -> GroupElem {
        self.compose(self.inverse(h), self.compose(g, h))
    }

    /// Whether `g` is a central scalar `x -> c x` with `c ∈ GF(q)*`.
    #[inline]
    pub fn is_scalar(&self, g: GroupElem) -> bool {
        g.b.is_zero() && self.field.in_subfield(g.a)
    }

    /// `f_{c,0}` for `c ∈ GF(q)*`; these form the center.
    pub fn scalars(&self) -> Vec<GroupElem> {
        self.field
            .subfield()
            .iter()
            .filter(|c| !c.is_zero())
            .map(|&c| GroupElem::new_unchecked(c, FieldElem::ZERO))
            .collect()
    }

    /// The conjugate `L_{t,s}` of `f_{t,0}`:
    /// `L_{t,s}(x) = (t N(s) − t^q)/(N(s) − 1) · x + (t − t^q) s^q/(N(s) − 1) · x^q`,
    /// and `L_{t,∞} = f_{t,0}`.
    pub fn l_ts(&self, t: FieldElem, s: SParam) -> Result<GroupElem> {
        if t.is_zero() {
            return Err(Error::Domain("L_{t,s} requires t != 0"));
        }
        let f = self.field;
        match s {
            SParam::Infinity => Ok(GroupElem::new_unchecked(t, FieldElem::ZERO)),
            SParam::Finite(s) => {
                let ns = f.norm(s);
                if ns == FieldElem::ONE {
                    return Err(Error::Domain("L_{t,s} requires N(s) != 1"));
                }
                let den = f.inv_nonzero(f.sub(ns, FieldElem::ONE));
                let tq = f.frobenius(t);
                let a = f.mul(f.sub(f.mul(t, ns), tq), den);
                let b = f.mul(f.mul(f.sub(t, tq), f.frobenius(s)), den);
                Ok(GroupElem::new_unchecked(a, b))
            }
        }
    }

    /// Parameters `s` with `N(s) != 1`, together with infinity.
    pub fn class_parameters(&self) -> Vec<SParam> {
        let f = self.field;
        f.elements()
            .filter(|&u| f.norm(u) != FieldElem::ONE)
            .map(SParam::Finite)
            .chain(std::iter::once(SParam::Infinity))
            .collect()
    }

    /// The conjugacy class of `f_{t,0}`, sorted. It has `q(q−1)` elements when
    /// `t ∉ GF(q)` and collapses to `{f_{t,0}}` when `t ∈ GF(q)*`.
    pub fn conj_class(&self, t: FieldElem) -> Result<Vec<GroupElem>> {
        if t.is_zero() {
            return Err(Error::Domain("conjugacy class parameter t must be nonzero"));
        }
        let mut out: Vec<GroupElem> = self
            .class_parameters()
            .into_iter()
            .map(|s| self.l_ts(t, s))
            .collect::<Result<_>>()?;
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    pub fn class_key(&self, t: FieldElem) -> Result<ConjClassKey> {
        if t.is_zero() {
            return Err(Error::Domain("conjugacy class parameter t must be nonzero"));
        }
        Ok(ConjClassKey(t.min(self.field.frobenius(t))))
    }

    /// `C_t = C_{t'}` iff `t' ∈ {t, t^q}`.
    pub fn class_equal(&self, t: FieldElem, t2: FieldElem) -> Result<bool> {
        Ok(self.class_key(t)? == self.class_key(t2)?)
    }

    /// `N(s) != 1`, `s != 0`.
    #[inline]
    pub fn in_s(&self, s: FieldElem) -> bool {
        !s.is_zero() && self.field.norm(s) != FieldElem::ONE
    }

    /// `t^(2(q−1)) != 1`, `t != 0`.
    #[inline]
    pub fn in_t(&self, t: FieldElem) -> bool {
        let q = self.field.q() as u64;
        !t.is_zero() && self.field.pow_u(t, 2 * (q - 1)) != FieldElem::ONE
    }

    /// Members of T that are the smaller index of their pair `{t, t^q}`.
    #[inline]
    pub fn in_t1(&self, t: FieldElem) -> bool {
        self.in_t(t) && t <= self.field.frobenius(t)
    }

    pub fn set_s(&self) -> Vec<FieldElem> {
        self.field.units().filter(|&s| self.in_s(s)).collect()
    }

    pub fn set_t(&self) -> Vec<FieldElem> {
        self.field.units().filter(|&t| self.in_t(t)).collect()
    }

    pub fn set_t1(&self) -> Vec<FieldElem> {
        self.field.units().filter(|&t| self.in_t1(t)).collect()
    }

    /// `|T|`: `q(q−1)` for even q, `(q−1)²` for odd q.
    pub fn t_size(&self) -> u64 {
        let q = self.field.q() as u64;
        if self.field.is_even() {
            q * (q - 1)
        } else {
            (q - 1) * (q - 1)
        }
    }

    /// `{f_{t,0}, f_{0,t} : t != 0}`, a subgroup of order `2(q²−1)`, sorted.
    pub fn d_tilde(&self) -> Vec<GroupElem> {
        let f = self.field;
        let mut out: Vec<GroupElem> = f
            .units()
            .map(|t| GroupElem::new_unchecked(t, FieldElem::ZERO))
            .chain(f.units().map(|t| GroupElem::new_unchecked(FieldElem::ZERO, t)))
            .collect();
        out.sort_unstable();
        out
    }

    /// The union of the classes `C_t` over `t ∈ T₁`, class by class. The
    /// classes are pairwise disjoint.
    pub fn a_tilde(&self) -> Vec<GroupElem> {
        let mut out = Vec::new();
        for t in self.set_t1() {
            out.extend(self.conj_class(t).expect("members of T are nonzero"));
        }
        out
    }

    /// Membership in the preimage of A, through element orders:
    /// `g^(q+1)` is scalar and `g²` is not.
    pub fn in_a_tilde(&self, g: GroupElem) -> bool {
        let q = self.field.q() as u64;
        self.is_scalar(self.pow(g, q + 1)) && !self.is_scalar(self.compose(g, g))
    }

    /// Order of the image of `g` in PGL(2,q): least `n >= 1` with `g^n` scalar.
    pub fn order_pgl(&self, g: GroupElem) -> u64 {
        let mut n = 1;
        let mut h = g;
        while !self.is_scalar(h) {
            h = self.compose(h, g);
            n += 1;
        }
        n
    }

    /// Lexicographically smallest `(λa, λb)` over `λ ∈ GF(q)*`.
    pub fn pgl_canon(&self, g: GroupElem) -> GroupElem {
        let f = self.field;
        f.subfield()
            .iter()
            .filter(|c| !c.is_zero())
            .map(|&c| GroupElem::new_unchecked(f.mul(c, g.a), f.mul(c, g.b)))
            .min()
            .expect("GF(q)* is nonempty")
    }
}

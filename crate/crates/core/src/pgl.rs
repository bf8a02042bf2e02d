//! PGL(2,q) = GL(2,q) / GF(q)*, realized on canonical representatives.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gl2::{Gl2, GroupElem};
use crate::oracle::FiniteGroup;

/// Largest field order q² for which dense `q⁴`-sized tables are built.
pub const DENSE_CAPACITY: u64 = 1 << 10;

/// A coset of the center, stored as its lexicographically smallest member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PglElem(GroupElem);

impl PglElem {
    pub fn rep(&self) -> GroupElem {
        self.0
    }
}

impl Serialize for PglElem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

const UNSET: u32 = u32::MAX;

/// The enumerated quotient group. Elements are numbered `0..q(q²−1)` in
/// increasing order of their canonical representatives; these ordinals are
/// the canonical PGL indices used in exports.
#[derive(Debug, Clone)]
pub struct Pgl<'f> {
    gl: Gl2<'f>,
    reps: Vec<PglElem>,
    // raw GL index -> ordinal of its class
    ordinal: Vec<u32>,
    identity: usize,
}

impl<'f> Pgl<'f> {
    pub fn new(gl: Gl2<'f>) -> Result<Self> {
        let f = gl.field();
        let q2 = f.size() as u64;
        if q2 > DENSE_CAPACITY {
            return Err(Error::Capacity {
                what: "field order q^2 for dense PGL tables",
                size: q2,
                bound: DENSE_CAPACITY,
            });
        }
        let mut ordinal = vec![UNSET; (q2 * q2) as usize];
        let mut reps = Vec::new();
        // canonical representatives are minimal, so they are seen before
        // every other member of their class
        for g in gl.elements() {
            let c = gl.pgl_canon(g);
            let idx = if c == g {
                reps.push(PglElem(g));
                (reps.len() - 1) as u32
            } else {
                ordinal[gl.raw_index(c)]
            };
            debug_assert_ne!(idx, UNSET);
            ordinal[gl.raw_index(g)] = idx;
        }
        let identity = ordinal[gl.raw_index(gl.identity())] as usize;
        Ok(Pgl {
            gl,
            reps,
            ordinal,
            identity,
        })
    }

    pub fn gl(&self) -> Gl2<'f> {
        self.gl
    }

    /// `q(q²−1)`.
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn elements(&self) -> &[PglElem] {
        &self.reps
    }

    /// Canonical image of a GL element, by scanning the scalar multiples.
    pub fn canon(&self, g: GroupElem) -> PglElem {
        PglElem(self.gl.pgl_canon(g))
    }

    /// Ordinal of the class of `g`, by table lookup.
    #[inline]
    pub fn index_of(&self, g: GroupElem) -> usize {
        self.ordinal[self.gl.raw_index(g)] as usize
    }

    pub fn elem(&self, index: usize) -> Result<PglElem> {
        self.reps
            .get(index)
            .copied()
            .ok_or(Error::OutOfRange(index as u64))
    }

    #[inline]
    pub fn compose(&self, x: PglElem, y: PglElem) -> PglElem {
        self.reps[self.index_of(self.gl.compose(x.0, y.0))]
    }

    pub fn inverse(&self, x: PglElem) -> PglElem {
        self.reps[self.index_of(self.gl.inverse(x.0))]
    }

    pub fn order_of(&self, x: PglElem) -> u64 {
        self.gl.order_pgl(x.0)
    }

    /// Images of `set`, deduplicated and sorted.
    pub fn project(&self, set: &[GroupElem]) -> Vec<PglElem> {
        let mut seen = vec![false; self.len()];
        for &g in set {
            seen[self.index_of(g)] = true;
        }
        seen.iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(i, _)| self.reps[i])
            .collect()
    }

    pub fn indices(&self, set: &[PglElem]) -> Vec<usize> {
        set.iter().map(|x| self.index_of(x.0)).collect()
    }
}

impl FiniteGroup for Pgl<'_> {
    fn order(&self) -> usize {
        self.len()
    }

    fn identity(&self) -> usize {
        self.identity
    }

    fn mul(&self, x: usize, y: usize) -> usize {
        self.index_of(self.gl.compose(self.reps[x].0, self.reps[y].0))
    }

    fn inv(&self, x: usize) -> usize {
        self.index_of(self.gl.inverse(self.reps[x].0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn sizes() {
        for q in [2u64, 3, 4, 5, 7] {
            let f = Field::for_q(q).unwrap();
            let pgl = Pgl::new(Gl2::new(&f)).unwrap();
            assert_eq!(pgl.len() as u64, q * (q * q - 1));
            assert_eq!(pgl.elem(pgl.identity).unwrap().rep(), pgl.gl().identity());
        }
    }

    #[test]
    fn lookup_agrees_with_scan() {
        let f = Field::for_q(5).unwrap();
        let gl = Gl2::new(&f);
        let pgl = Pgl::new(gl).unwrap();
        for g in gl.elements() {
            assert_eq!(pgl.reps[pgl.index_of(g)], pgl.canon(g));
        }
    }

    #[test]
    fn same_class_iff_scalar_multiple() {
        let f = Field::for_q(3).unwrap();
        let gl = Gl2::new(&f);
        let pgl = Pgl::new(gl).unwrap();
        let scalars = gl.scalars();
        let els = gl.elements();
        for &g in &els {
            for &h in &els {
                let related = scalars.iter().any(|&c| gl.compose(c, g) == h);
                assert_eq!(pgl.canon(g) == pgl.canon(h), related);
            }
        }
    }

    #[test]
    fn quotient_is_a_group() {
        let f = Field::for_q(4).unwrap();
        let pgl = Pgl::new(Gl2::new(&f)).unwrap();
        let n = pgl.order();
        let e = FiniteGroup::identity(&pgl);
        for x in 0..n {
            assert_eq!(pgl.mul(x, e), x);
            assert_eq!(pgl.mul(x, pgl.inv(x)), e);
        }
    }

    #[test]
    fn capacity() {
        let f = Field::for_q(64).unwrap();
        assert!(matches!(Pgl::new(Gl2::new(&f)), Err(Error::Capacity { .. })));
    }
}

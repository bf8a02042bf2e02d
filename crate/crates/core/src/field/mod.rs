//! Table-driven arithmetic in GF(q²) with its subfield GF(q).
//!
//! The field is built directly over the prime field as GF(p)[x]/(m(x)) with
//! `deg m = 2k`. An element is encoded by its coefficient vector read as a
//! base-`p` number, so index 0 is zero, index 1 is one and index `p` is the
//! residue class of `x`. Writing an index as `lo + q * hi` splits it into two
//! GF(p)^k blocks, which is how addition is done without per-digit loops.
//!
//! Multiplication goes through discrete exp/log tables for a fixed primitive
//! element (the smallest index of full order).

mod poly;
mod sqrt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::{is_prime, prime_factors};

/// Default bound on the field order q².
pub const DEFAULT_CAPACITY: u64 = 1 << 16;

/// Upper limit for any capacity setting; the split tables store 16-bit halves.
pub const HARD_LIMIT: u64 = 1 << 24;

const NONE: u32 = u32::MAX;

/// The pair `(p, k)` with `q = p^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub k: u32,
}

impl FieldSpec {
    pub fn new(p: u32, k: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if k == 0 {
            return Err(Error::InvalidSpec("exponent k must be at least 1".into()));
        }
        let spec = FieldSpec { p, k };
        if spec.checked_q2().is_none() {
            return Err(Error::Capacity {
                what: "field order q^2",
                size: u64::MAX,
                bound: DEFAULT_CAPACITY,
            });
        }
        Ok(spec)
    }

    /// Factors `q` as a prime power.
    pub fn from_q(q: u64) -> Result<Self> {
        let (p, k) = crate::numtheory::as_prime_power(q).ok_or(Error::NotPrimePower(q))?;
        let p = u32::try_from(p).map_err(|_| Error::NotPrimePower(q))?;
        FieldSpec::new(p, k)
    }

    fn checked_q2(&self) -> Option<u64> {
        let q = (self.p as u64).checked_pow(self.k)?;
        q.checked_mul(q)
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.k)
    }

    pub fn q2(&self) -> u64 {
        self.q() * self.q()
    }
}

/// An element of GF(q²), identified by its canonical index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub(crate) const fn from_raw(index: u32) -> Self {
        FieldElem(index)
    }
}

impl std::fmt::Display for FieldElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Quadratic character of an element of GF(q), q odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SquareClass {
    Zero,
    Square,
    Nonsquare,
}

/// Roots in GF(q²) of a quadratic with nonzero leading coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadRoots {
    None,
    /// A repeated root.
    Double(FieldElem),
    /// Two distinct roots, smaller index first.
    Pair(FieldElem, FieldElem),
}

impl QuadRoots {
    /// Distinct roots in ascending index order.
    pub fn distinct(&self) -> Vec<FieldElem> {
        match *self {
            QuadRoots::None => vec![],
            QuadRoots::Double(x) => vec![x],
            QuadRoots::Pair(x, y) => vec![x, y],
        }
    }

    /// Number of roots counted with multiplicity.
    pub fn count_with_multiplicity(&self) -> usize {
        match self {
            QuadRoots::None => 0,
            _ => 2,
        }
    }

    fn pair(x: FieldElem, y: FieldElem) -> Self {
        if x == y {
            QuadRoots::Double(x)
        } else if x < y {
            QuadRoots::Pair(x, y)
        } else {
            QuadRoots::Pair(y, x)
        }
    }
}

/// Immutable arithmetic context for GF(q²) ⊃ GF(q).
#[derive(Debug, Clone)]
pub struct Field {
    spec: FieldSpec,
    p: u32,
    q: u32,
    q2: u32,
    order: u32,
    modulus: Vec<u32>,
    generator: FieldElem,
    // exp has length 2 * order so that log x + log y never needs reducing
    exp: Vec<u32>,
    log: Vec<u32>,
    frob: Vec<u32>,
    norm: Vec<u32>,
    // each index split as (lo, hi) with index = lo + q * hi
    lo: Vec<u16>,
    hi: Vec<u16>,
    block_add: Vec<u32>,
    block_neg: Vec<u32>,
    sqrt: Vec<u32>,
    subfield: Vec<FieldElem>,
    subfield_square: Vec<bool>,
    // char 2 only: artin_schreier[c] = smallest y with y^2 + y = c
    artin_schreier: Vec<u32>,
}

impl Field {
    /// Builds GF(q²) with the default capacity bound.
    pub fn new(spec: FieldSpec) -> Result<Self> {
        Self::with_capacity(spec, DEFAULT_CAPACITY)
    }

    /// Convenience for `Field::new(FieldSpec::from_q(q)?)`.
    pub fn for_q(q: u64) -> Result<Self> {
        Self::new(FieldSpec::from_q(q)?)
    }

    pub fn with_capacity(spec: FieldSpec, capacity: u64) -> Result<Self> {
        let spec = FieldSpec::new(spec.p, spec.k)?;
        let q2_wide = spec.q2();
        if q2_wide > capacity.min(HARD_LIMIT) {
            return Err(Error::Capacity {
                what: "field order q^2",
                size: q2_wide,
                bound: capacity,
            });
        }
        let p = spec.p;
        let q = spec.q() as u32;
        let q2 = q2_wide as u32;
        let n = 2 * spec.k as usize;
        let order = q2 - 1;

        let modulus = poly::first_irreducible(p, n);
        let to_poly = |i: u32| poly::digits(i as u64, p, n);
        let slow_mul = |x: u32, y: u32| {
            poly::from_digits(&poly::mul_mod(&to_poly(x), &to_poly(y), &modulus, p), p) as u32
        };
        let slow_pow = |x: u32, mut e: u64| {
            let mut acc = 1u32;
            let mut base = x;
            while e > 0 {
                if e & 1 == 1 {
                    acc = slow_mul(acc, base);
                }
                base = slow_mul(base, base);
                e >>= 1;
            }
            acc
        };

        let factors = prime_factors(order as u64);
        let generator = (2..q2)
            .find(|&c| factors.iter().all(|&l| slow_pow(c, order as u64 / l) != 1))
            .expect("the multiplicative group of a finite field is cyclic");

        let mut exp = Vec::with_capacity(2 * order as usize);
        let mut log = vec![NONE; q2 as usize];
        let mut cur = 1u32;
        for i in 0..order {
            if log[cur as usize] != NONE {
                // only possible if the modulus were reducible
                return Err(Error::InvalidSpec("modulus does not define a field".into()));
            }
            log[cur as usize] = i;
            exp.push(cur);
            cur = slow_mul(cur, generator);
        }
        debug_assert_eq!(cur, 1);
        exp.extend_from_within(..);

        let pow_log = |i: u32, e: u64| -> u32 {
            if i == 0 {
                0
            } else {
                exp[((log[i as usize] as u64 * e) % order as u64) as usize]
            }
        };
        let frob: Vec<u32> = (0..q2).map(|i| pow_log(i, q as u64)).collect();
        let norm: Vec<u32> = (0..q2).map(|i| pow_log(i, q as u64 + 1)).collect();

        let lo: Vec<u16> = (0..q2).map(|i| (i % q) as u16).collect();
        let hi: Vec<u16> = (0..q2).map(|i| (i / q) as u16).collect();
        let k = spec.k as usize;
        let mut block_add = vec![0u32; (q * q) as usize];
        for x in 0..q {
            let dx = poly::digits(x as u64, p, k);
            for y in 0..q {
                let dy = poly::digits(y as u64, p, k);
                let s: Vec<u32> = dx.iter().zip(&dy).map(|(a, b)| (a + b) % p).collect();
                block_add[(x * q + y) as usize] = poly::from_digits(&s, p) as u32;
            }
        }
        let block_neg: Vec<u32> = (0..q)
            .map(|x| {
                let d: Vec<u32> = poly::digits(x as u64, p, k)
                    .into_iter()
                    .map(|c| (p - c) % p)
                    .collect();
                poly::from_digits(&d, p) as u32
            })
            .collect();

        let mut subfield: Vec<FieldElem> = (0..q2)
            .filter(|&i| frob[i as usize] == i)
            .map(FieldElem)
            .collect();
        subfield.sort();

        let mut field = Field {
            spec,
            p,
            q,
            q2,
            order,
            modulus,
            generator: FieldElem(generator),
            exp,
            log,
            frob,
            norm,
            lo,
            hi,
            block_add,
            block_neg,
            sqrt: vec![NONE; q2 as usize],
            subfield,
            subfield_square: vec![false; q2 as usize],
            artin_schreier: Vec::new(),
        };

        // the smaller root wins, since x runs upwards
        for x in (0..q2).rev() {
            let sq = field.mul(FieldElem(x), FieldElem(x));
            field.sqrt[sq.0 as usize] = x;
        }
        for &v in &field.subfield.clone() {
            if !v.is_zero() {
                let sq = field.mul(v, v);
                field.subfield_square[sq.0 as usize] = true;
            }
        }
        if p == 2 {
            let mut table = vec![NONE; q2 as usize];
            for y in (0..q2).rev() {
                let y = FieldElem(y);
                let c = field.add(field.mul(y, y), y);
                table[c.0 as usize] = y.0;
            }
            field.artin_schreier = table;
        }
        Ok(field)
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Subfield order q.
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Field order q².
    pub fn size(&self) -> u32 {
        self.q2
    }

    pub fn is_even(&self) -> bool {
        self.p == 2
    }

    /// Coefficients of the defining polynomial, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> FieldElem {
        self.generator
    }

    /// `exp_table()[i]` is the index of `g^i`, for `0 <= i < q² - 1`.
    pub fn exp_table(&self) -> &[u32] {
        &self.exp[..self.order as usize]
    }

    /// Discrete logarithms; entry 0 is `u32::MAX`.
    pub fn log_table(&self) -> &[u32] {
        &self.log
    }

    /// Validated conversion from an index.
    pub fn elem(&self, index: u64) -> Result<FieldElem> {
        if index < self.q2 as u64 {
            Ok(FieldElem(index as u32))
        } else {
            Err(Error::OutOfRange(index))
        }
    }

    /// Embeds an integer through the prime field.
    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q2).map(FieldElem)
    }

    pub fn units(&self) -> impl Iterator<Item = FieldElem> {
        (1..self.q2).map(FieldElem)
    }

    /// Elements of GF(q), ascending.
    pub fn subfield(&self) -> &[FieldElem] {
        &self.subfield
    }

    /// `g^i`.
    #[inline]
    pub fn exp(&self, i: u64) -> FieldElem {
        FieldElem(self.exp[(i % self.order as u64) as usize])
    }

    /// Discrete log base the primitive element, `None` at zero.
    #[inline]
    pub fn log(&self, x: FieldElem) -> Option<u32> {
        let l = self.log[x.0 as usize];
        (l != NONE).then_some(l)
    }

    /// Coefficient vector of `x` over GF(p), constant term first.
    pub fn coeffs(&self, x: FieldElem) -> Vec<u32> {
        poly::digits(x.0 as u64, self.p, 2 * self.spec.k as usize)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElem> {
        let n = 2 * self.spec.k as usize;
        if coeffs.len() > n || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::Domain("coefficient vector does not describe an element"));
        }
        Ok(FieldElem(poly::from_digits(coeffs, self.p) as u32))
    }

    /// Renders `x` as a polynomial in the generator `x` of the modulus.
    pub fn format(&self, x: FieldElem) -> String {
        let terms: Vec<String> = self
            .coeffs(x)
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    #[inline]
    pub fn add(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        if self.p == 2 {
            return FieldElem(x.0 ^ y.0);
        }
        let (xi, yi) = (x.0 as usize, y.0 as usize);
        let q = self.q as usize;
        let lo = self.block_add[self.lo[xi] as usize * q + self.lo[yi] as usize];
        let hi = self.block_add[self.hi[xi] as usize * q + self.hi[yi] as usize];
        FieldElem(lo + self.q * hi)
    }

    #[inline]
    pub fn neg(&self, x: FieldElem) -> FieldElem {
        if self.p == 2 {
            return x;
        }
        let i = x.0 as usize;
        let lo = self.block_neg[self.lo[i] as usize];
        let hi = self.block_neg[self.hi[i] as usize];
        FieldElem(lo + self.q * hi)
    }

    #[inline]
    pub fn sub(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: FieldElem, y: FieldElem) -> FieldElem {
        if x.0 == 0 || y.0 == 0 {
            return FieldElem::ZERO;
        }
        let l = self.log[x.0 as usize] + self.log[y.0 as usize];
        FieldElem(self.exp[l as usize])
    }

    pub fn inv(&self, x: FieldElem) -> Result<FieldElem> {
        if x.is_zero() {
            return Err(Error::Domain("zero has no multiplicative inverse"));
        }
        Ok(self.inv_nonzero(x))
    }

    /// Inverse of an element known to be nonzero.
    #[inline]
    pub(crate) fn inv_nonzero(&self, x: FieldElem) -> FieldElem {
        debug_assert!(!x.is_zero());
        let l = self.log[x.0 as usize];
        FieldElem(self.exp[(self.order - l) as usize])
    }

    pub fn div(&self, x: FieldElem, y: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// `x^e`; negative exponents need `x != 0`, and `0^0 = 1`.
    pub fn pow(&self, x: FieldElem, e: i64) -> Result<FieldElem> {
        if x.is_zero() {
            return match e.signum() {
                0 => Ok(FieldElem::ONE),
                1 => Ok(FieldElem::ZERO),
                _ => Err(Error::Domain("negative power of zero")),
            };
        }
        let l = self.log[x.0 as usize] as i128 * e as i128;
        let l = l.rem_euclid(self.order as i128) as usize;
        Ok(FieldElem(self.exp[l]))
    }

    /// `x^e` for a nonnegative exponent.
    #[inline]
    pub fn pow_u(&self, x: FieldElem, e: u64) -> FieldElem {
        if x.is_zero() {
            return if e == 0 { FieldElem::ONE } else { FieldElem::ZERO };
        }
        let l = (self.log[x.0 as usize] as u64 * (e % self.order as u64)) % self.order as u64;
        FieldElem(self.exp[l as usize])
    }

    /// The relative Frobenius `x -> x^q`.
    #[inline]
    pub fn frobenius(&self, x: FieldElem) -> FieldElem {
        FieldElem(self.frob[x.0 as usize])
    }

    /// `x^(q+1)`, the norm down to GF(q).
    #[inline]
    pub fn norm(&self, x: FieldElem) -> FieldElem {
        FieldElem(self.norm[x.0 as usize])
    }

    #[inline]
    pub fn in_subfield(&self, x: FieldElem) -> bool {
        self.frob[x.0 as usize] == x.0
    }

    /// Absolute trace down to GF(p), returned as an integer in `[0, p)`.
    pub fn absolute_trace(&self, x: FieldElem) -> u32 {
        let mut acc = FieldElem::ZERO;
        let mut y = x;
        for _ in 0..2 * self.spec.k {
            acc = self.add(acc, y);
            y = self.pow_u(y, self.p as u64);
        }
        debug_assert!(acc.0 < self.p);
        acc.0
    }

    /// Square class of `u ∈ GF(q)` via the table of subfield squares.
    pub fn square_class(&self, u: FieldElem) -> Result<SquareClass> {
        self.check_square_class_input(u)?;
        Ok(if u.is_zero() {
            SquareClass::Zero
        } else if self.subfield_square[u.0 as usize] {
            SquareClass::Square
        } else {
            SquareClass::Nonsquare
        })
    }

    /// Square class of `u ∈ GF(q)` by Euler's criterion `u^((q-1)/2) = ±1`.
    pub fn square_class_euler(&self, u: FieldElem) -> Result<SquareClass> {
        self.check_square_class_input(u)?;
        if u.is_zero() {
            return Ok(SquareClass::Zero);
        }
        let e = self.pow_u(u, ((self.q - 1) / 2) as u64);
        if e == FieldElem::ONE {
            Ok(SquareClass::Square)
        } else {
            debug_assert_eq!(e, self.neg(FieldElem::ONE));
            Ok(SquareClass::Nonsquare)
        }
    }

    fn check_square_class_input(&self, u: FieldElem) -> Result<()> {
        if self.is_even() {
            return Err(Error::UnsupportedCharacteristic);
        }
        if !self.in_subfield(u) {
            return Err(Error::NotInSubfield(u.0));
        }
        Ok(())
    }

    /// A square root in GF(q²) from the precomputed table, smallest index
    /// first when there are two.
    pub fn sqrt(&self, x: FieldElem) -> Option<FieldElem> {
        let r = self.sqrt[x.0 as usize];
        (r != NONE).then_some(FieldElem(r))
    }

    /// All roots of `alpha X^2 + beta X + gamma` in GF(q²).
    pub fn solve_quadratic(
        &self,
        alpha: FieldElem,
        beta: FieldElem,
        gamma: FieldElem,
    ) -> Result<QuadRoots> {
        if alpha.is_zero() {
            return Err(Error::Domain("leading coefficient of a quadratic is zero"));
        }
        if self.is_even() {
            return Ok(self.solve_quadratic_char2(alpha, beta, gamma));
        }
        let two_alpha = self.add(alpha, alpha);
        let four_ag = self.mul(self.add(two_alpha, two_alpha), gamma);
        let disc = self.sub(self.mul(beta, beta), four_ag);
        let Some(r) = self.sqrt(disc) else {
            return Ok(QuadRoots::None);
        };
        let inv = self.inv_nonzero(two_alpha);
        let nb = self.neg(beta);
        let x1 = self.mul(self.add(nb, r), inv);
        let x2 = self.mul(self.sub(nb, r), inv);
        Ok(QuadRoots::pair(x1, x2))
    }

    fn solve_quadratic_char2(&self, alpha: FieldElem, beta: FieldElem, gamma: FieldElem) -> QuadRoots {
        let alpha_inv = self.inv_nonzero(alpha);
        if beta.is_zero() {
            // squaring is bijective in characteristic 2
            let r = self.sqrt(self.mul(gamma, alpha_inv)).expect("every element is a square");
            return QuadRoots::Double(r);
        }
        // X = (beta / alpha) Y turns the equation into Y^2 + Y = alpha gamma / beta^2
        let c = self.mul(self.mul(alpha, gamma), self.inv_nonzero(self.mul(beta, beta)));
        let y = self.artin_schreier[c.0 as usize];
        if y == NONE {
            debug_assert_ne!(self.absolute_trace(c), 0);
            return QuadRoots::None;
        }
        debug_assert_eq!(self.absolute_trace(c), 0);
        let scale = self.mul(beta, alpha_inv);
        let y = FieldElem(y);
        let y2 = self.add(y, FieldElem::ONE);
        QuadRoots::pair(self.mul(scale, y), self.mul(scale, y2))
    }
}

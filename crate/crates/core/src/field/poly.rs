//! Dense polynomials over GF(p), coefficients stored low degree first.
//!
//! Only what field construction needs: reduction modulo a monic polynomial,
//! irreducibility by trial division and the modulus scan.

/// Base-`p` digits of `v`, least significant first, padded to `n` digits.
pub(crate) fn digits(mut v: u64, p: u32, n: usize) -> Vec<u32> {
    let mut out = vec![0; n];
    for d in out.iter_mut() {
        *d = (v % p as u64) as u32;
        v /= p as u64;
    }
    out
}

pub(crate) fn from_digits(coeffs: &[u32], p: u32) -> u64 {
    coeffs
        .iter()
        .rev()
        .fold(0u64, |acc, &c| acc * p as u64 + c as u64)
}

/// Remainder of `f` modulo the monic polynomial `g`. The result has exactly
/// `deg g` coefficients.
pub(crate) fn rem_monic(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let dg = g.len() - 1;
    debug_assert_eq!(g[dg], 1);
    let mut r: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let p = p as u64;
    for i in (dg..r.len()).rev() {
        let c = r[i] % p;
        if c == 0 {
            continue;
        }
        for (slot, &gj) in r[i - dg..=i].iter_mut().zip(g) {
            *slot = (*slot + (p - c) * gj as u64) % p;
        }
    }
    let mut out: Vec<u32> = r.into_iter().take(dg).map(|c| (c % p) as u32).collect();
    out.resize(dg, 0);
    out
}

/// Product of `x` and `y` reduced modulo the monic `m`.
pub(crate) fn mul_mod(x: &[u32], y: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u64; x.len() + y.len()];
    for (i, &a) in x.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in y.iter().enumerate() {
            prod[i + j] = (prod[i + j] + a as u64 * b as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    rem_monic(&prod, m, p)
}

/// Trial division by every monic polynomial of degree at most `deg f / 2`.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    for d in 1..=n / 2 {
        let count = (p as u64).pow(d as u32);
        for m in 0..count {
            let mut g = digits(m, p, d);
            g.push(1);
            if rem_monic(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// First monic irreducible polynomial of degree `n` over GF(p), scanning the
/// lower coefficients `(c_{n-1}, ..., c_0)` in lexicographic order, which is
/// the same as counting `c_0 + c_1 p + ... + c_{n-1} p^{n-1}` upwards.
pub(crate) fn first_irreducible(p: u32, n: usize) -> Vec<u32> {
    let count = (p as u64).pow(n as u32);
    for m in 0..count {
        let mut f = digits(m, p, n);
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over GF(p)")
}

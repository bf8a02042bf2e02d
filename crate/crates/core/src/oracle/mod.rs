//! Brute-force verification of `Ã·D̃ = |T|·GL(2,q)` and `A·D = λ·PGL(2,q)`.
//!
//! Nothing here relies on the counting lemmas except the optional cross-check
//! against `Counter::multiplicity_closed`.

mod cayley;

pub use cayley::{cayley_code_check, CodeOutcome, FiniteGroup, GroupTable};

use std::collections::HashSet;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::counting::{Counter, CALIBRATED};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::gl2::{Gl2, GroupElem};
use crate::pgl::{Pgl, PglElem, DENSE_CAPACITY};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Gl,
    Pgl,
}

/// Which routes produce multiplicities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMode {
    ClosedForm,
    BruteForce,
    Both,
}

impl OracleMode {
    pub fn brute_force(self) -> bool {
        matches!(self, OracleMode::BruteForce | OracleMode::Both)
    }

    pub fn closed_form(self) -> bool {
        matches!(self, OracleMode::ClosedForm | OracleMode::Both)
    }
}

/// Counts of a product multiset, one per group element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityTable {
    level: Level,
    elements: Vec<GroupElem>,
    counts: Vec<u64>,
}

impl MultiplicityTable {
    pub fn level(&self) -> Level {
        self.level
    }

    /// Group elements (canonical representatives at PGL level), ascending.
    pub fn elements(&self) -> &[GroupElem] {
        &self.elements
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn iter(&self) -> impl Iterator<Item = (GroupElem, u64)> + '_ {
        self.elements.iter().copied().zip(self.counts.iter().copied())
    }

    pub fn total(&self) -> Result<u64> {
        self.counts
            .iter()
            .try_fold(0u64, |acc, &c| acc.checked_add(c))
            .ok_or(Error::CountOverflow)
    }

    pub fn min(&self) -> u64 {
        self.counts.iter().copied().min().unwrap_or(0)
    }

    pub fn max(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }
}

/// Default worker count: the available parallelism.
pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn check_dense(field: &Field) -> Result<()> {
    let q2 = field.size() as u64;
    if q2 > DENSE_CAPACITY {
        return Err(Error::Capacity {
            what: "field order q^2 for exhaustive products",
            size: q2,
            bound: DENSE_CAPACITY,
        });
    }
    Ok(())
}

/// Splits `xs` into contiguous chunks, one per worker, each counting into a
/// private array; the arrays are summed in chunk order.
fn sweep<T, F>(xs: &[T], ys: &[T], slots: usize, workers: usize, index: F) -> Result<Vec<u64>>
where
    T: Copy + Sync,
    F: Fn(T, T) -> usize + Sync,
{
    // left translation is injective, so no cell exceeds the chunk length
    if xs.len() >= u32::MAX as usize {
        return Err(Error::Capacity {
            what: "left factor set",
            size: xs.len() as u64,
            bound: u32::MAX as u64 - 1,
        });
    }
    let count = |part: &[T]| {
        let mut c = vec![0u32; slots];
        for &x in part {
            for &y in ys {
                c[index(x, y)] += 1;
            }
        }
        c
    };
    let workers = workers.clamp(1, xs.len().max(1));
    let partials: Vec<Vec<u32>> = if workers == 1 {
        vec![count(xs)]
    } else {
        let chunk = xs.len().div_ceil(workers);
        std::thread::scope(|scope| {
            let handles: Vec<_> = xs
                .chunks(chunk)
                .map(|part| scope.spawn(|| count(part)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("sweep worker panicked"))
                .collect()
        })
    };
    let mut out = vec![0u64; slots];
    for part in partials {
        for (acc, c) in out.iter_mut().zip(part) {
            *acc = acc.checked_add(c as u64).ok_or(Error::CountOverflow)?;
        }
    }
    Ok(out)
}

/// The multiset `{x∘y : x ∈ X, y ∈ Y}` in GL(2,q).
pub fn product_multiset(
    gl: Gl2<'_>,
    xs: &[GroupElem],
    ys: &[GroupElem],
    workers: usize,
) -> Result<MultiplicityTable> {
    check_dense(gl.field())?;
    let q2 = gl.field().size() as usize;
    let raw = sweep(xs, ys, q2 * q2, workers, |x, y| gl.raw_index(gl.compose(x, y)))?;
    let elements = gl.elements();
    let counts = elements.iter().map(|&g| raw[gl.raw_index(g)]).collect();
    Ok(MultiplicityTable {
        level: Level::Gl,
        elements,
        counts,
    })
}

/// The multiset `{x·y : x ∈ X, y ∈ Y}` in PGL(2,q).
pub fn product_multiset_pgl(
    pgl: &Pgl<'_>,
    xs: &[PglElem],
    ys: &[PglElem],
    workers: usize,
) -> Result<MultiplicityTable> {
    let gl = pgl.gl();
    let counts = sweep(xs, ys, pgl.len(), workers, |x, y| {
        pgl.index_of(gl.compose(x.rep(), y.rep()))
    })?;
    Ok(MultiplicityTable {
        level: Level::Pgl,
        elements: pgl.elements().iter().map(|e| e.rep()).collect(),
        counts,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub workers: usize,
    pub mode: OracleMode,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            workers: default_workers(),
            mode: OracleMode::Both,
        }
    }
}

/// Necessary identities checked alongside the multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountingIdentities {
    /// `|A|·|D| = expected·|G|`.
    pub products_balance: bool,
    /// Sum of the table equals `|A|·|D|`.
    pub total_matches: bool,
    pub a_inverse_closed: bool,
    pub identity_not_in_a: bool,
}

impl CountingIdentities {
    pub fn all(&self) -> bool {
        self.products_balance && self.total_matches && self.a_inverse_closed && self.identity_not_in_a
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub q: u64,
    pub p: u32,
    pub k: u32,
    pub level: Level,
    pub oracle: OracleMode,
    pub workers: usize,
    pub group_order: u64,
    pub a_size: u64,
    pub d_size: u64,
    pub products: u64,
    pub total: u64,
    /// `|T|` at GL level, λ at PGL level.
    pub expected: u64,
    /// Smallest and largest multiplicity seen over every enabled route.
    pub min: u64,
    pub max: u64,
    /// `|T| / (q−1)`, which must equal λ at PGL level.
    pub lambda_from_t: u64,
    pub closed_form_mismatches: Option<u64>,
    pub cayley_lambda: Option<u64>,
    pub identities: CountingIdentities,
    pub kappa_convention: Option<String>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

fn inverse_closed(gl: Gl2<'_>, set: &[GroupElem]) -> bool {
    let members: HashSet<GroupElem> = set.iter().copied().collect();
    set.iter().all(|&g| members.contains(&gl.inverse(g)))
}

struct Observed {
    min: u64,
    max: u64,
}

impl Observed {
    fn new() -> Self {
        Observed { min: u64::MAX, max: 0 }
    }

    fn see(&mut self, v: u64) {
        self.min = self.min.min(v);
        self.max = self.max.max(v);
    }
}

/// Checks that every element of GL(2,q) occurs exactly `|T|` times in `Ã·D̃`.
pub fn verify_theorem_gl(field: &Field, opts: &VerifyOptions) -> Result<VerificationReport> {
    let start = Instant::now();
    check_dense(field)?;
    let gl = Gl2::new(field);
    let a = gl.a_tilde();
    let d = gl.d_tilde();
    let expected = gl.t_size();
    let order = gl.order();
    let products = a.len() as u64 * d.len() as u64;

    let mut seen = Observed::new();
    let table = if opts.mode.brute_force() {
        let table = product_multiset(gl, &a, &d, opts.workers)?;
        table.counts().iter().for_each(|&c| seen.see(c));
        Some(table)
    } else {
        None
    };

    let mut closed_total = 0u64;
    let mismatches = if opts.mode.closed_form() {
        let counter = Counter::new(gl);
        let mut mismatches = 0;
        let elements = gl.elements();
        for (i, &g) in elements.iter().enumerate() {
            let m = counter.multiplicity_closed(g);
            seen.see(m);
            closed_total += m;
            if let Some(t) = &table {
                debug_assert_eq!(t.elements()[i], g);
                if t.counts()[i] != m {
                    mismatches += 1;
                }
            }
        }
        Some(mismatches)
    } else {
        None
    };

    let total = match &table {
        Some(t) => t.total()?,
        None => closed_total,
    };
    let identities = CountingIdentities {
        products_balance: products == expected * order,
        total_matches: total == products,
        a_inverse_closed: inverse_closed(gl, &a),
        identity_not_in_a: !a.contains(&gl.identity()),
    };
    let pass = seen.min == expected
        && seen.max == expected
        && mismatches.unwrap_or(0) == 0
        && identities.all();
    let spec = field.spec();
    Ok(VerificationReport {
        q: spec.q(),
        p: spec.p,
        k: spec.k,
        level: Level::Gl,
        oracle: opts.mode,
        workers: opts.workers,
        group_order: order,
        a_size: a.len() as u64,
        d_size: d.len() as u64,
        products,
        total,
        expected,
        min: seen.min,
        max: seen.max,
        lambda_from_t: expected,
        closed_form_mismatches: mismatches.filter(|_| opts.mode == OracleMode::Both),
        cayley_lambda: None,
        identities,
        kappa_convention: kappa_note(field, opts.mode),
        pass,
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    })
}

fn kappa_note(field: &Field, mode: OracleMode) -> Option<String> {
    (mode.closed_form() && !field.is_even()).then(|| CALIBRATED.describe())
}

/// λ = q for even q, q − 1 for odd q.
pub fn expected_lambda(field: &Field) -> u64 {
    let q = field.q() as u64;
    if field.is_even() {
        q
    } else {
        q - 1
    }
}

/// Checks `A·D = λ·PGL(2,q)` on the images of `Ã` and `D̃`.
pub fn verify_theorem_pgl(field: &Field, opts: &VerifyOptions) -> Result<VerificationReport> {
    let start = Instant::now();
    check_dense(field)?;
    let gl = Gl2::new(field);
    let pgl = Pgl::new(gl)?;
    let a_tilde = gl.a_tilde();
    let a = pgl.project(&a_tilde);
    let d = pgl.project(&gl.d_tilde());
    let q = field.q() as u64;
    let expected = expected_lambda(field);
    let lambda_from_t = gl.t_size() / (q - 1);
    let order = pgl.len() as u64;
    let products = a.len() as u64 * d.len() as u64;

    let mut seen = Observed::new();
    let mut cayley_lambda = None;
    let table = if opts.mode.brute_force() {
        let table = product_multiset_pgl(&pgl, &a, &d, opts.workers)?;
        table.counts().iter().for_each(|&c| seen.see(c));
        let outcome = cayley_code_check(&pgl, &pgl.indices(&a), &pgl.indices(&d))?;
        // an uneven cover can never agree with λ
        cayley_lambda = Some(outcome.lambda().unwrap_or(0));
        Some(table)
    } else {
        None
    };

    let mut closed_total = 0;
    let mismatches = if opts.mode.closed_form() {
        let counter = Counter::new(gl);
        let scalars = gl.scalars();
        let mut mismatches = 0;
        for (i, x) in pgl.elements().iter().enumerate() {
            let sum: u64 = scalars
                .iter()
                .map(|&c| counter.multiplicity_closed(gl.compose(c, x.rep())))
                .sum();
            // both factors are unions of cosets of the center, so every PGL
            // factorization lifts to (q−1)² GL factorizations of the coset;
            // a remainder means the closed form is inconsistent
            let lifts = (q - 1) * (q - 1);
            let m = if sum.is_multiple_of(lifts) { sum / lifts } else { u64::MAX };
            seen.see(m);
            closed_total += m.min(sum);
            if let Some(t) = &table {
                if t.counts()[i] != m {
                    mismatches += 1;
                }
            }
        }
        Some(mismatches)
    } else {
        None
    };

    let total = match &table {
        Some(t) => t.total()?,
        None => closed_total,
    };
    let a_gl: Vec<GroupElem> = a.iter().map(|x| x.rep()).collect();
    let inverse_closed = a.iter().all(|&x| a.binary_search(&pgl.inverse(x)).is_ok());
    let identities = CountingIdentities {
        products_balance: products == expected * order
            && a.len() as u64 * (q - 1) == a_tilde.len() as u64
            && d.len() as u64 == 2 * (q + 1),
        total_matches: total == products,
        a_inverse_closed: inverse_closed,
        identity_not_in_a: !a_gl.contains(&gl.identity()),
    };
    let pass = seen.min == expected
        && seen.max == expected
        && lambda_from_t == expected
        && cayley_lambda.is_none_or(|l| l == expected)
        && mismatches.unwrap_or(0) == 0
        && identities.all();
    let spec = field.spec();
    Ok(VerificationReport {
        q,
        p: spec.p,
        k: spec.k,
        level: Level::Pgl,
        oracle: opts.mode,
        workers: opts.workers,
        group_order: order,
        a_size: a.len() as u64,
        d_size: d.len() as u64,
        products,
        total,
        expected,
        min: seen.min,
        max: seen.max,
        lambda_from_t,
        closed_form_mismatches: mismatches.filter(|_| opts.mode == OracleMode::Both),
        cayley_lambda,
        identities,
        kappa_convention: kappa_note(field, opts.mode),
        pass,
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_products() {
        let f = Field::for_q(3).unwrap();
        let gl = Gl2::new(&f);
        let id = [gl.identity()];
        let t = product_multiset(gl, &id, &id, 1).unwrap();
        assert_eq!(t.total().unwrap(), 1);
        assert_eq!(t.max(), 1);
        let all = gl.elements();
        let g = [all[17]];
        let t = product_multiset(gl, &g, &all, 1).unwrap();
        assert_eq!((t.min(), t.max()), (1, 1));
    }

    #[test]
    fn q2_products_hand_count() {
        let f = Field::for_q(2).unwrap();
        let gl = Gl2::new(&f);
        let t = product_multiset(gl, &gl.a_tilde(), &gl.d_tilde(), 1).unwrap();
        assert_eq!(t.elements().len(), 6);
        assert!(t.counts().iter().all(|&c| c == 2));
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let f = Field::for_q(5).unwrap();
        let gl = Gl2::new(&f);
        let a = gl.a_tilde();
        let d = gl.d_tilde();
        let one = product_multiset(gl, &a, &d, 1).unwrap();
        for w in [2, 3, 7, 1000] {
            assert_eq!(product_multiset(gl, &a, &d, w).unwrap(), one);
        }
    }

    #[test]
    fn small_reports() {
        for q in [2u64, 3, 4, 5] {
            let f = Field::for_q(q).unwrap();
            let opts = VerifyOptions {
                workers: 2,
                mode: OracleMode::Both,
            };
            let gl = verify_theorem_gl(&f, &opts).unwrap();
            assert!(gl.pass, "{gl:?}");
            let pgl = verify_theorem_pgl(&f, &opts).unwrap();
            assert!(pgl.pass, "{pgl:?}");
            assert_eq!(pgl.cayley_lambda, Some(pgl.expected));
        }
    }

    #[test]
    fn modes_agree() {
        let f = Field::for_q(7).unwrap();
        for mode in [OracleMode::ClosedForm, OracleMode::BruteForce] {
            let opts = VerifyOptions { workers: 1, mode };
            let r = verify_theorem_pgl(&f, &opts).unwrap();
            assert!(r.pass);
            assert_eq!(r.expected, 6);
            assert_eq!(r.closed_form_mismatches, None);
        }
    }

    #[test]
    fn capacity() {
        let f = Field::for_q(64).unwrap();
        assert!(matches!(
            verify_theorem_gl(&f, &VerifyOptions::default()),
            Err(Error::Capacity { .. })
        ));
    }
}

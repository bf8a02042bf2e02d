//! Generic λ-code checker for Cayley graphs of finite groups.
//!
//! `B` is a λ-code with respect to `A` when every group element `g` has
//! exactly λ factorizations `g = a·b` with `a ∈ A`, `b ∈ B`; equivalently
//! every vertex of `Cay(G, A)` has exactly λ neighbours in `B`.

use serde::Serialize;

use crate::error::{Error, Result};

/// A finite group with elements numbered `0..order()`.
pub trait FiniteGroup {
    fn order(&self) -> usize;
    fn identity(&self) -> usize;
    fn mul(&self, x: usize, y: usize) -> usize;
    fn inv(&self, x: usize) -> usize;
}

/// An explicit multiplication table.
#[derive(Debug, Clone)]
pub struct GroupTable {
    n: usize,
    table: Vec<u32>,
    identity: usize,
    inverse: Vec<u32>,
}

impl GroupTable {
    /// `table[x * n + y]` is the product `x·y`. Checks closure, a two-sided
    /// identity and inverses; associativity is the caller's responsibility.
    pub fn new(n: usize, table: Vec<u32>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroupTable("empty group".into()));
        }
        if table.len() != n * n {
            return Err(Error::InvalidGroupTable(format!(
                "expected {} entries, found {}",
                n * n,
                table.len()
            )));
        }
        if let Some(pos) = table.iter().position(|&v| v as usize >= n) {
            return Err(Error::InvalidGroupTable(format!(
                "product {} * {} = {} is not an element",
                pos / n,
                pos % n,
                table[pos]
            )));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e * n + x] as usize == x && table[x * n + e] as usize == x))
            .ok_or_else(|| Error::InvalidGroupTable("no identity element".into()))?;
        let mut inverse = vec![0u32; n];
        for x in 0..n {
            let y = (0..n)
                .find(|&y| table[x * n + y] as usize == identity && table[y * n + x] as usize == identity)
                .ok_or_else(|| Error::InvalidGroupTable(format!("element {x} has no inverse")))?;
            inverse[x] = y as u32;
        }
        Ok(GroupTable {
            n,
            table,
            identity,
            inverse,
        })
    }

    pub fn from_group<G: FiniteGroup>(group: &G) -> Result<Self> {
        let n = group.order();
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                table.push(group.mul(x, y) as u32);
            }
        }
        GroupTable::new(n, table)
    }
}

impl FiniteGroup for GroupTable {
    fn order(&self) -> usize {
        self.n
    }

    fn identity(&self) -> usize {
        self.identity
    }

    fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.n + y] as usize
    }

    fn inv(&self, x: usize) -> usize {
        self.inverse[x] as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum CodeOutcome {
    /// Every element is covered exactly `lambda` times.
    Code { lambda: u64 },
    /// `witness` is covered `count` times while some element is covered
    /// `max` times.
    NotCode { witness: usize, count: u64, max: u64 },
}

impl CodeOutcome {
    pub fn lambda(&self) -> Option<u64> {
        match self {
            CodeOutcome::Code { lambda } => Some(*lambda),
            CodeOutcome::NotCode { .. } => None,
        }
    }
}

/// Decides whether `b` is a λ-code for the connection set `a`.
pub fn cayley_code_check<G: FiniteGroup>(group: &G, a: &[usize], b: &[usize]) -> Result<CodeOutcome> {
    let n = group.order();
    let mut in_a = vec![false; n];
    for &x in a.iter().chain(b) {
        if x >= n {
            return Err(Error::InvalidConnectionSet(format!("element {x} is out of range")));
        }
    }
    for &x in a {
        in_a[x] = true;
    }
    let a_size = in_a.iter().filter(|&&v| v).count();
    if a_size == 0 {
        return Err(Error::InvalidConnectionSet("A is empty".into()));
    }
    if a_size == n {
        return Err(Error::InvalidConnectionSet("A is the whole group".into()));
    }
    if in_a[group.identity()] {
        return Err(Error::InvalidConnectionSet("A contains the identity".into()));
    }
    if let Some(&x) = a.iter().find(|&&x| !in_a[group.inv(x)]) {
        return Err(Error::InvalidConnectionSet(format!(
            "A is not closed under inverses: {x} has inverse {}",
            group.inv(x)
        )));
    }
    let mut in_b = vec![false; n];
    for &x in b {
        in_b[x] = true;
    }
    if !in_b.iter().any(|&v| v) {
        return Err(Error::InvalidConnectionSet("B is empty".into()));
    }

    let mut counts = vec![0u64; n];
    for x in (0..n).filter(|&x| in_a[x]) {
        for y in (0..n).filter(|&y| in_b[y]) {
            counts[group.mul(x, y)] += 1;
        }
    }
    let max = counts.iter().copied().max().unwrap_or(0);
    Ok(match counts.iter().position(|&c| c != max) {
        None => CodeOutcome::Code { lambda: max },
        Some(w) => CodeOutcome::NotCode {
            witness: w,
            count: counts[w],
            max,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Z/n under addition.
    struct Cyclic(usize);

    impl FiniteGroup for Cyclic {
        fn order(&self) -> usize {
            self.0
        }
        fn identity(&self) -> usize {
            0
        }
        fn mul(&self, x: usize, y: usize) -> usize {
            (x + y) % self.0
        }
        fn inv(&self, x: usize) -> usize {
            (self.0 - x) % self.0
        }
    }

    #[test]
    fn perfect_code_in_a_cycle() {
        // C_4 with A = {±1}: every vertex has exactly one neighbour in {0, 1}
        let g = Cyclic(4);
        assert_eq!(
            cayley_code_check(&g, &[1, 3], &[0, 1]).unwrap(),
            CodeOutcome::Code { lambda: 1 }
        );
    }

    #[test]
    fn complement_of_identity_is_not_a_code_of_identity() {
        let g = Cyclic(5);
        let a: Vec<usize> = (1..5).collect();
        assert_eq!(
            cayley_code_check(&g, &a, &[0]).unwrap(),
            CodeOutcome::NotCode {
                witness: 0,
                count: 0,
                max: 1
            }
        );
    }

    #[test]
    fn whole_group_is_an_a_code() {
        let g = Cyclic(7);
        let b: Vec<usize> = (0..7).collect();
        assert_eq!(cayley_code_check(&g, &[2, 5], &b).unwrap().lambda(), Some(2));
    }

    #[test]
    fn rejects_bad_connection_sets() {
        let g = Cyclic(6);
        let all: Vec<usize> = (0..6).collect();
        for (a, b) in [
            (vec![], vec![0]),
            (all.clone(), vec![0]),
            (vec![0, 1, 5], vec![0]),
            (vec![1], vec![0]),
            (vec![1, 5], vec![]),
            (vec![1, 9], vec![0]),
        ] {
            assert!(matches!(
                cayley_code_check(&g, &a, &b),
                Err(Error::InvalidConnectionSet(_))
            ));
        }
    }

    #[test]
    fn table_validation() {
        assert!(GroupTable::new(2, vec![0, 1, 1, 0]).is_ok());
        assert!(matches!(GroupTable::new(2, vec![0, 1, 1, 2]), Err(Error::InvalidGroupTable(_))));
        assert!(matches!(GroupTable::new(2, vec![0, 1, 1]), Err(Error::InvalidGroupTable(_))));
        assert!(matches!(GroupTable::new(2, vec![1, 1, 1, 1]), Err(Error::InvalidGroupTable(_))));
        let t = GroupTable::from_group(&Cyclic(4)).unwrap();
        assert_eq!(t.identity(), 0);
        assert_eq!(t.inv(1), 3);
        assert_eq!(t.mul(3, 3), 2);
    }
}

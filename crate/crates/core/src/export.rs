//! Serializable artifacts: field tables, per-pair count tables, conjugacy
//! class listings, and the Cayley graph edge list.
//!
//! All iteration orders are fixed, so equal inputs give identical output.

use std::fmt::Write as _;

use serde::Serialize;

use crate::counting::Counter;
use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::gl2::{Gl2, GroupElem};
use crate::oracle::{product_multiset, OracleMode};
use crate::pgl::{Pgl, PglElem};

/// Everything needed to rebuild the field arithmetic elsewhere.
#[derive(Debug, Clone, Serialize)]
pub struct FieldDump {
    pub p: u32,
    pub k: u32,
    pub q: u32,
    pub q2: u32,
    /// Coefficients of the monic modulus over GF(p), constant term first.
    pub modulus: Vec<u32>,
    pub generator: u32,
    /// `exp[i] = g^i` for `0 <= i < q² − 1`.
    pub exp: Vec<u32>,
    /// `log[x]` for `x != 0`; `log[0]` is meaningless and written as 0.
    pub log: Vec<u32>,
}

pub fn field_dump(field: &Field) -> FieldDump {
    let spec = field.spec();
    let order = field.size() as usize - 1;
    let mut log = field.log_table().to_vec();
    log[0] = 0;
    FieldDump {
        p: spec.p,
        k: spec.k,
        q: field.q(),
        q2: field.size(),
        modulus: field.modulus().to_vec(),
        generator: field.generator().index(),
        exp: field.exp_table()[..order].to_vec(),
        log,
    }
}

/// One row of the per-pair table. Counts that are only defined for `ab != 0`
/// are `None` on the axes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub a: u32,
    pub b: u32,
    pub n_ab_enum: Option<u64>,
    pub n_ab_closed: Option<u64>,
    pub r1: Option<u64>,
    pub r2: Option<u64>,
    pub multiplicity_closed: Option<u64>,
    pub multiplicity_bruteforce: Option<u64>,
}

pub const TABLE_COLUMNS: [&str; 8] = [
    "a",
    "b",
    "n_ab_enum",
    "n_ab_closed",
    "r1",
    "r2",
    "multiplicity_closed",
    "multiplicity_bruteforce",
];

/// One row per element of GL(2,q), in increasing `(a, b)` order.
pub fn tables(field: &Field, mode: OracleMode, workers: usize) -> Result<Vec<TableRow>> {
    let gl = Gl2::new(field);
    let counter = Counter::new(gl);
    let brute = if mode.brute_force() {
        Some(product_multiset(gl, &gl.a_tilde(), &gl.d_tilde(), workers)?)
    } else {
        None
    };
    let mut rows = Vec::new();
    for (i, g) in gl.elements().into_iter().enumerate() {
        let (a, b) = (g.a(), g.b());
        let generic = !a.is_zero() && !b.is_zero();
        let (n_enum, n_closed, r) = if generic {
            let (r1, r2) = counter.sizes_r1r2_enum(a, b)?;
            (
                mode.brute_force().then(|| counter.n_ab_enum(a, b)).transpose()?,
                mode.closed_form().then(|| counter.n_ab_closed(a, b)).transpose()?,
                Some((r1, r2)),
            )
        } else {
            (None, None, None)
        };
        rows.push(TableRow {
            a: a.index(),
            b: b.index(),
            n_ab_enum: n_enum.map(|n| n.0),
            n_ab_closed: n_closed.map(|n| n.0),
            r1: r.map(|r| r.0),
            r2: r.map(|r| r.1),
            multiplicity_closed: mode.closed_form().then(|| counter.multiplicity_closed(g)),
            multiplicity_bruteforce: brute.as_ref().map(|t| t.counts()[i]),
        });
    }
    Ok(rows)
}

fn cell(v: Option<u64>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

pub fn tables_csv(rows: &[TableRow]) -> String {
    let mut out = TABLE_COLUMNS.join(",");
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.a,
            r.b,
            cell(r.n_ab_enum),
            cell(r.n_ab_closed),
            cell(r.r1),
            cell(r.r2),
            cell(r.multiplicity_closed),
            cell(r.multiplicity_bruteforce)
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassInfo {
    /// The smaller of `t`, `t^q`.
    pub t: u32,
    pub size: u64,
    /// Order of the class's image in PGL(2,q).
    pub order_pgl: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassListing {
    pub q: u32,
    pub t: Vec<u32>,
    pub t1: Vec<u32>,
    pub classes: Vec<ClassInfo>,
    pub a_tilde_size: u64,
}

pub fn classes(field: &Field) -> Result<ClassListing> {
    let gl = Gl2::new(field);
    let t1 = gl.set_t1();
    let mut classes = Vec::with_capacity(t1.len());
    let mut total = 0;
    for &t in &t1 {
        let class = gl.conj_class(t)?;
        total += class.len() as u64;
        classes.push(ClassInfo {
            t: t.index(),
            size: class.len() as u64,
            order_pgl: gl.order_pgl(class[0]),
        });
    }
    Ok(ClassListing {
        q: field.q(),
        t: gl.set_t().iter().map(|t| t.index()).collect(),
        t1: t1.iter().map(|t| t.index()).collect(),
        classes,
        a_tilde_size: total,
    })
}

/// Both counts for one pair and its transpose.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairCount {
    pub a: u32,
    pub b: u32,
    pub n_ab_enum: u64,
    pub n_ab_closed: u64,
    pub n_ba_enum: u64,
    pub n_ba_closed: u64,
    pub r1_enum: u64,
    pub r2_enum: u64,
    pub r1_closed: u64,
    pub r2_closed: u64,
    /// `N_{a,b} + N_{b,a}` by enumeration.
    pub multiplicity: u64,
    pub expected: u64,
    pub pass: bool,
}

pub fn count_pair(field: &Field, a: FieldElem, b: FieldElem) -> Result<PairCount> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Domain("count needs a and b nonzero"));
    }
    let gl = Gl2::new(field);
    let counter = Counter::new(gl);
    let n_ab_enum = counter.n_ab_enum(a, b)?.0;
    let n_ab_closed = counter.n_ab_closed(a, b)?.0;
    let n_ba_enum = counter.n_ab_enum(b, a)?.0;
    let n_ba_closed = counter.n_ab_closed(b, a)?.0;
    let (r1_enum, r2_enum) = counter.sizes_r1r2_enum(a, b)?;
    let (r1_closed, r2_closed) = counter.sizes_r1r2_closed(a, b)?;
    let expected = gl.t_size();
    let multiplicity = n_ab_enum + n_ba_enum;
    Ok(PairCount {
        a: a.index(),
        b: b.index(),
        n_ab_enum,
        n_ab_closed,
        n_ba_enum,
        n_ba_closed,
        r1_enum,
        r2_enum,
        r1_closed,
        r2_closed,
        multiplicity,
        expected,
        pass: multiplicity == expected
            && n_ab_enum == n_ab_closed
            && n_ba_enum == n_ba_closed
            && (r1_enum, r2_enum) == (r1_closed, r2_closed),
    })
}

/// `Cay(PGL(2,q), A)` with vertices numbered by PGL ordinal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CayleyGraph {
    pub vertices: usize,
    pub degree: usize,
    /// Each undirected edge once, as `(u, v)` with `u < v`, sorted.
    pub edges: Vec<(u32, u32)>,
}

/// The Cayley graph for the connection set A, the image of `Ã`.
pub fn cayley_graph(field: &Field) -> Result<CayleyGraph> {
    let gl = Gl2::new(field);
    let pgl = Pgl::new(gl)?;
    let a = pgl.project(&gl.a_tilde());
    Ok(cayley_graph_for(&pgl, &a))
}

/// Edges `{g, g·a}` for `a` in an inverse-closed set.
pub fn cayley_graph_for(pgl: &Pgl<'_>, a: &[PglElem]) -> CayleyGraph {
    let gl = pgl.gl();
    let mut edges = Vec::with_capacity(pgl.len() * a.len() / 2);
    for (u, g) in pgl.elements().iter().enumerate() {
        for x in a {
            let v = pgl.index_of(gl.compose(g.rep(), x.rep()));
            if u < v {
                edges.push((u as u32, v as u32));
            }
        }
    }
    edges.sort_unstable();
    CayleyGraph {
        vertices: pgl.len(),
        degree: a.len(),
        edges,
    }
}

impl CayleyGraph {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph {\n");
        for v in 0..self.vertices {
            let _ = writeln!(out, "  {v};");
        }
        for (u, v) in &self.edges {
            let _ = writeln!(out, "  {u} -- {v};");
        }
        out.push_str("}\n");
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("source,target\n");
        for (u, v) in &self.edges {
            let _ = writeln!(out, "{u},{v}");
        }
        out
    }
}

/// The canonical PGL representative listing, ordinal order.
pub fn pgl_vertices(pgl: &Pgl<'_>) -> Vec<GroupElem> {
    pgl.elements().iter().map(|x| x.rep()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_dump_roundtrips_through_json() {
        let f = Field::for_q(5).unwrap();
        let d = field_dump(&f);
        assert_eq!(d.modulus, vec![2, 0, 1]);
        assert_eq!(d.exp.len(), 24);
        let v: serde_json::Value = serde_json::to_value(&d).unwrap();
        assert_eq!(v["q2"], 25);
        for (i, &x) in d.exp.iter().enumerate() {
            assert_eq!(d.log[x as usize] as usize, i);
        }
    }

    #[test]
    fn cayley_graph_q5() {
        let f = Field::for_q(5).unwrap();
        let g = cayley_graph(&f).unwrap();
        assert_eq!(g.vertices, 120);
        assert_eq!(g.degree, 40);
        assert_eq!(g.edges.len(), 120 * 40 / 2);
        let mut deg = vec![0; 120];
        for &(u, v) in &g.edges {
            assert!(u < v);
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        assert!(deg.iter().all(|&d| d == 40));
        assert!(g.to_dot().starts_with("graph {\n  0;\n"));
        assert_eq!(g.to_csv().lines().count(), 2401);
    }

    #[test]
    fn tables_q3() {
        let f = Field::for_q(3).unwrap();
        let rows = tables(&f, OracleMode::Both, 1).unwrap();
        assert_eq!(rows.len(), 48);
        for r in &rows {
            assert_eq!(r.multiplicity_closed, Some(4));
            assert_eq!(r.multiplicity_bruteforce, Some(4));
            assert_eq!(r.n_ab_enum, r.n_ab_closed);
            assert_eq!(r.a == 0 || r.b == 0, r.r1.is_none());
        }
        let csv = tables_csv(&rows);
        assert!(csv.starts_with("a,b,n_ab_enum,"));
        assert!(csv.lines().nth(1).unwrap().ends_with(",,,,,4,4"));
    }

    #[test]
    fn closed_only_tables_skip_enumeration() {
        let f = Field::for_q(4).unwrap();
        let rows = tables(&f, OracleMode::ClosedForm, 1).unwrap();
        assert!(rows.iter().all(|r| r.n_ab_enum.is_none() && r.multiplicity_bruteforce.is_none()));
        assert!(rows.iter().all(|r| r.multiplicity_closed == Some(12)));
    }

    #[test]
    fn class_listing() {
        let f = Field::for_q(5).unwrap();
        let c = classes(&f).unwrap();
        assert_eq!(c.t.len(), 16);
        assert_eq!(c.t1.len(), 8);
        assert!(c.classes.iter().all(|k| k.size == 20));
        assert_eq!(c.a_tilde_size, 160);
        assert!(c.classes.iter().all(|k| k.order_pgl > 2 && 6 % k.order_pgl == 0));
    }

    #[test]
    fn pair_count() {
        let f = Field::for_q(7).unwrap();
        let a = f.elem(1).unwrap();
        let b = f.elem(9).unwrap();
        let gl = Gl2::new(&f);
        assert!(gl.is_invertible(a, b));
        let c = count_pair(&f, a, b).unwrap();
        assert!(c.pass, "{c:?}");
        assert_eq!(c.multiplicity, 36);
        assert!(count_pair(&f, FieldElem::ZERO, b).is_err());
    }
}

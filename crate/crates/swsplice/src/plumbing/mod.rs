//! Negative definite plumbing graphs: intersection form, homology and
//! characters, weights and linking numbers, A'Campo's formula, the Fourier
//! sum for the torsion, the canonical class and Seifert star graphs.

mod format;
mod star;
mod torsion;

pub use format::{parse_graph, serialize_graph};
pub use star::{negative_continued_fraction, seifert_star_graph, StarArm, StarGraph};
pub use torsion::{character_limit, torsion_sigma_can, torsion_sigma_can_bounded, Characters};

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact_core::{
    qi, smith_normal_form, snf::determinant, BinomialProduct, IntLaurentPolynomial, IntMatrix, Rational, RationalFunction,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Record {
    Vertex { id: String, euler: i64 },
    Edge { a: String, b: String },
    Arrow { id: String, label: String },
    Comment(String),
    Blank,
}

/// A decorated tree: vertices with Euler numbers, edges, and arrows marking
/// knot components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlumbingGraph {
    // Each record keeps its source line when it was parsed from text.
    pub(crate) records: Vec<(Record, Option<String>)>,
    pub(crate) trailing_newline: bool,
}

impl Default for PlumbingGraph {
    fn default() -> Self {
        Self::new()
    }
}

impl PlumbingGraph {
    pub fn new() -> Self {
        PlumbingGraph { records: Vec::new(), trailing_newline: true }
    }

    pub fn add_vertex(&mut self, id: impl Into<String>, euler: i64) {
        self.records.push((Record::Vertex { id: id.into(), euler }, None));
    }

    pub fn add_edge(&mut self, a: impl Into<String>, b: impl Into<String>) {
        self.records.push((Record::Edge { a: a.into(), b: b.into() }, None));
    }

    pub fn add_arrow(&mut self, id: impl Into<String>, label: impl Into<String>) {
        self.records.push((Record::Arrow { id: id.into(), label: label.into() }, None));
    }

    /// `(id, e_v)` in file order.
    pub fn vertices(&self) -> Vec<(&str, i64)> {
        self.records
            .iter()
            .filter_map(|(r, _)| match r {
                Record::Vertex { id, euler } => Some((id.as_str(), *euler)),
                _ => None,
            })
            .collect()
    }

    pub fn edges(&self) -> Vec<(&str, &str)> {
        self.records
            .iter()
            .filter_map(|(r, _)| match r {
                Record::Edge { a, b } => Some((a.as_str(), b.as_str())),
                _ => None,
            })
            .collect()
    }

    /// `(vertex id, label)` pairs.
    pub fn arrows(&self) -> Vec<(&str, &str)> {
        self.records
            .iter()
            .filter_map(|(r, _)| match r {
                Record::Arrow { id, label } => Some((id.as_str(), label.as_str())),
                _ => None,
            })
            .collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices().len()
    }

    /// Position of a vertex id in [`Self::vertices`].
    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.vertices().iter().position(|(v, _)| *v == id)
    }

    /// A copy without arrows.
    pub fn without_arrows(&self) -> PlumbingGraph {
        PlumbingGraph {
            records: self.records.iter().filter(|(r, _)| !matches!(r, Record::Arrow { .. })).cloned().collect(),
            trailing_newline: self.trailing_newline,
        }
    }

    /// A copy with one more arrow.
    pub fn with_arrow(&self, id: &str, label: &str) -> PlumbingGraph {
        let mut g = self.clone();
        g.add_arrow(id, label);
        g
    }

    /// Checks ids, references and the tree property.
    pub fn validate(&self) -> Result<()> {
        self.validate_with_lines().map_err(|e| match e {
            Error::GraphParse { msg, .. } => Error::MalformedGraph(msg),
            other => other,
        })
    }

    pub(crate) fn validate_with_lines(&self) -> Result<()> {
        let mut ids: HashMap<&str, usize> = HashMap::new();
        for (line, (r, _)) in self.records.iter().enumerate() {
            if let Record::Vertex { id, .. } = r {
                if ids.insert(id.as_str(), ids.len()).is_some() {
                    return Err(Error::GraphParse { line: line + 1, msg: format!("duplicate vertex {:?}", id) });
                }
            }
        }
        let n = ids.len();
        if n == 0 {
            return Err(Error::MalformedGraph("graph has no vertices".into()));
        }
        let mut adj = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (line, (r, _)) in self.records.iter().enumerate() {
            match r {
                Record::Edge { a, b } => {
                    let (Some(&x), Some(&y)) = (ids.get(a.as_str()), ids.get(b.as_str())) else {
                        return Err(Error::GraphParse {
                            line: line + 1,
                            msg: format!("edge {} {} references an unknown vertex", a, b),
                        });
                    };
                    if x == y || adj[x].contains(&y) {
                        return Err(Error::GraphParse { line: line + 1, msg: format!("loop or repeated edge {} {}", a, b) });
                    }
                    adj[x].push(y);
                    adj[y].push(x);
                    edge_count += 1;
                }
                Record::Arrow { id, .. } => {
                    if !ids.contains_key(id.as_str()) {
                        return Err(Error::GraphParse {
                            line: line + 1,
                            msg: format!("arrow attached to unknown vertex {:?}", id),
                        });
                    }
                }
                _ => {}
            }
        }
        if edge_count != n - 1 {
            return Err(Error::MalformedGraph(format!("{} vertices but {} edges: not a tree", n, edge_count)));
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::MalformedGraph("graph is not connected".into()));
        }
        Ok(())
    }

    /// Neighbour lists by vertex index.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let verts = self.vertices();
        let idx: HashMap<&str, usize> = verts.iter().enumerate().map(|(i, (v, _))| (*v, i)).collect();
        let mut adj = vec![Vec::new(); verts.len()];
        for (a, b) in self.edges() {
            adj[idx[a]].push(idx[b]);
            adj[idx[b]].push(idx[a]);
        }
        adj
    }

    /// `δ_v`: degree without arrows.
    pub fn degrees(&self) -> Vec<i64> {
        self.adjacency().iter().map(|a| a.len() as i64).collect()
    }

    /// `δ̄_v`: degree counting arrows.
    pub fn degrees_with_arrows(&self) -> Vec<i64> {
        let mut d = self.degrees();
        for (id, _) in self.arrows() {
            d[self.index_of(id).unwrap()] += 1;
        }
        d
    }
}

/// The intersection matrix `I` with `I_vv = e_v` and adjacency entries 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionForm {
    pub matrix: IntMatrix,
    pub negative_definite: bool,
    pub det: BigInt,
}

/// `LDLᵀ` factorization of `I` along a leaves-first order of the tree.
///
/// With the vertices permuted into `order` reversed, the leading principal
/// minors are the partial products of `pivots`, so definiteness and the
/// determinant come out of one linear pass. Linear solves are also linear
/// time since eliminating a leaf only touches its parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct TreeFactor {
    /// BFS order from vertex 0.
    order: Vec<usize>,
    parent: Vec<Option<usize>>,
    /// Pivot of each vertex after its subtree has been eliminated.
    pivots: Vec<Rational>,
}

impl TreeFactor {
    /// `None` if a zero pivot shows up before the root.
    pub(crate) fn new(g: &PlumbingGraph) -> Option<TreeFactor> {
        let adj = g.adjacency();
        let n = adj.len();
        let mut order = vec![0];
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    order.push(w);
                }
            }
            i += 1;
        }
        let mut pivots: Vec<Rational> = g.vertices().iter().map(|(_, e)| qi(*e)).collect();
        for &v in order.iter().rev() {
            if let Some(p) = parent[v] {
                if pivots[v].is_zero() {
                    return None;
                }
                let corr = pivots[v].recip();
                pivots[p] -= corr;
            }
        }
        Some(TreeFactor { order, parent, pivots })
    }

    pub(crate) fn det(&self) -> Rational {
        self.pivots.iter().fold(Rational::one(), |acc, p| acc * p)
    }

    pub(crate) fn negative_definite(&self) -> bool {
        self.pivots.iter().all(|p| p.is_negative())
    }

    /// Solves `I·x = rhs`.
    pub(crate) fn solve(&self, rhs: &[Rational]) -> Result<Vec<Rational>> {
        let mut r = rhs.to_vec();
        for &v in self.order.iter().rev() {
            if let Some(p) = self.parent[v] {
                let c = &r[v] / &self.pivots[v];
                r[p] -= c;
            }
        }
        let mut x = vec![Rational::zero(); r.len()];
        for &v in &self.order {
            let rest = match self.parent[v] {
                Some(p) => &r[v] - &x[p],
                None => r[v].clone(),
            };
            if self.pivots[v].is_zero() {
                return Err(Error::DegenerateGraph);
            }
            x[v] = rest / &self.pivots[v];
        }
        Ok(x)
    }
}

/// Leading principal minors in file order (dense fallback).
fn leading_minors(m: &IntMatrix) -> Vec<BigInt> {
    (1..=m.len()).map(|k| determinant(&m[..k].iter().map(|r| r[..k].to_vec()).collect::<Vec<_>>())).collect()
}

pub(crate) fn build_matrix(g: &PlumbingGraph) -> IntMatrix {
    let verts = g.vertices();
    let n = verts.len();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for (i, (_, e)) in verts.iter().enumerate() {
        m[i][i] = BigInt::from(*e);
    }
    for (i, nb) in g.adjacency().iter().enumerate() {
        for &j in nb {
            m[i][j] = BigInt::one();
        }
    }
    m
}

pub fn intersection_matrix(g: &PlumbingGraph) -> Result<IntersectionForm> {
    g.validate()?;
    let m = build_matrix(g);
    let (det, negative_definite) = match TreeFactor::new(g) {
        Some(f) => (f.det().to_integer(), f.negative_definite()),
        None => {
            let minors = leading_minors(&m);
            // Negative definite iff (−1)^k·minor_k > 0 for all k.
            let nd = minors.iter().enumerate().all(|(k, mk)| if k % 2 == 0 { mk.is_negative() } else { mk.is_positive() });
            (minors.last().unwrap().clone(), nd)
        }
    };
    if det.is_zero() {
        return Err(Error::DegenerateGraph);
    }
    Ok(IntersectionForm { matrix: m, negative_definite, det })
}

/// `H = coker(I)` via the Smith normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyData {
    /// Invariant factors `d_i > 1`.
    pub invariant_factors: Vec<u64>,
    /// `|H|`.
    pub order: BigInt,
    /// For each vertex (file order), the residues of `g_v` in `⊕ Z/d_i`.
    pub fiber_classes: Vec<Vec<u64>>,
}

impl HomologyData {
    /// Exponent of `H` (largest invariant factor, 1 for the trivial group).
    pub fn exponent(&self) -> u64 {
        self.invariant_factors.last().copied().unwrap_or(1)
    }

    /// `χ_k(g_v)` as an angle numerator over the exponent `N`: `Σ_i k_i c_{v,i} N/d_i mod N`.
    pub fn character_angle(&self, k: &[u64], v: usize) -> u64 {
        let n = self.exponent();
        let mut s: u128 = 0;
        for (i, &d) in self.invariant_factors.iter().enumerate() {
            s += k[i] as u128 * self.fiber_classes[v][i] as u128 * (n / d) as u128;
        }
        (s % n as u128) as u64
    }
}

pub fn homology(g: &PlumbingGraph) -> Result<HomologyData> {
    let form = intersection_matrix(g)?;
    let snf = smith_normal_form(&form.matrix);
    let diag = snf.diagonal();
    let mut factors = Vec::new();
    let mut rows = Vec::new();
    for (i, d) in diag.iter().enumerate() {
        if d.is_zero() {
            return Err(Error::DegenerateGraph);
        }
        if !d.is_one() {
            factors.push(d.to_u64().ok_or_else(|| Error::InvalidInput("invariant factor too large".into()))?);
            rows.push(i);
        }
    }
    let n = form.matrix.len();
    let classes = (0..n)
        .map(|v| {
            rows.iter()
                .zip(&factors)
                .map(|(&i, &d)| snf.u[i][v].mod_floor(&BigInt::from(d)).to_u64().unwrap())
                .collect()
        })
        .collect();
    let order = factors.iter().fold(BigInt::one(), |acc, &d| acc * d);
    debug_assert_eq!(order, form.det.abs());
    Ok(HomologyData { invariant_factors: factors, order, fiber_classes: classes })
}

/// Exact inverse of a nonsingular integer matrix.
pub(crate) fn rational_inverse(m: &IntMatrix) -> Result<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let mut inv: Vec<Vec<Rational>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero()).ok_or(Error::DegenerateGraph)?;
        a.swap(k, p);
        inv.swap(k, p);
        let piv = a[k][k].clone();
        for j in 0..n {
            a[k][j] /= &piv;
            inv[k][j] /= &piv;
        }
        for i in 0..n {
            if i != k && !a[i][k].is_zero() {
                let f = a[i][k].clone();
                for j in 0..n {
                    let x = &f * &a[k][j];
                    a[i][j] -= x;
                    let y = &f * &inv[k][j];
                    inv[i][j] -= y;
                }
            }
        }
    }
    Ok(inv)
}

#[derive(Clone, Debug)]
enum Solver {
    Tree(TreeFactor),
    Dense(Vec<Vec<Rational>>),
}

/// The linking form `Lk(g_u, g_v) = −I⁻¹_{uv}`, computed column by column.
#[derive(Clone, Debug)]
pub struct LinkingForm {
    solver: Solver,
    n: usize,
    columns: std::cell::RefCell<HashMap<usize, Vec<Rational>>>,
}

impl LinkingForm {
    pub fn of(g: &PlumbingGraph) -> Result<Self> {
        intersection_matrix(g)?;
        let solver = match TreeFactor::new(g) {
            Some(f) => Solver::Tree(f),
            None => Solver::Dense(rational_inverse(&build_matrix(g))?),
        };
        Ok(LinkingForm { solver, n: g.vertex_count(), columns: Default::default() })
    }

    /// `Lk(g_u, g_v)` for all `v`.
    pub fn column(&self, u: usize) -> Vec<Rational> {
        if let Some(c) = self.columns.borrow().get(&u) {
            return c.clone();
        }
        let col: Vec<Rational> = match &self.solver {
            Solver::Tree(f) => {
                let mut rhs = vec![Rational::zero(); self.n];
                rhs[u] = -Rational::one();
                f.solve(&rhs).expect("nonsingular")
            }
            Solver::Dense(inv) => inv.iter().map(|r| -r[u].clone()).collect(),
        };
        self.columns.borrow_mut().insert(u, col.clone());
        col
    }

    pub fn entry(&self, u: usize, v: usize) -> Rational {
        self.column(u)[v].clone()
    }

    /// `o(u)`: order of `g_u` in `H`, the lcm of the denominators of column `u`.
    pub fn order(&self, u: usize) -> u64 {
        self.column(u).iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom())).to_u64().expect("order fits u64")
    }

    /// `w_v(u) = o(u)·Lk(g_u, g_v)`.
    pub fn weights(&self, u: usize) -> Vec<BigInt> {
        let o = qi(self.order(u));
        self.column(u).iter().map(|x| (x * &o).to_integer()).collect()
    }
}

/// Weights of the knot `g_u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    pub base: usize,
    pub order: u64,
    /// `w_v(u)` in vertex order.
    pub weights: Vec<BigInt>,
    /// `Lk(g_u, g_v) = w_v(u)/o(u)`.
    pub linking: Vec<Rational>,
}

/// Solves `I·w = −o(u)·b(u)` and exposes the linking numbers.
pub fn weights_and_linking(g: &PlumbingGraph, u: &str) -> Result<WeightVector> {
    let ui = g.index_of(u).ok_or_else(|| Error::InvalidInput(format!("unknown vertex {:?}", u)))?;
    let lk = LinkingForm::of(g)?;
    let order = lk.order(ui);
    let weights = lk.weights(ui);
    // Verify I·w = −o(u)·b(u) exactly.
    let euler: Vec<i64> = g.vertices().iter().map(|(_, e)| *e).collect();
    for (i, nb) in g.adjacency().iter().enumerate() {
        let s: BigInt = &weights[i] * euler[i] + nb.iter().map(|&j| &weights[j]).sum::<BigInt>();
        let expect = if i == ui { -BigInt::from(order) } else { BigInt::zero() };
        if s != expect {
            return Err(Error::InternalInconsistency("I·w != −o(u)·b(u)".into()));
        }
    }
    let linking = lk.column(ui);
    Ok(WeightVector { base: ui, order, weights, linking })
}

/// Result of A'Campo's formula for the knot `g_u` given by the single arrow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcampoResult {
    /// `(t−1)·Π_v (t^{w_v(u)} − 1)^{δ̄_v − 2}`, reduced.
    pub delta: RationalFunction,
    /// The same product in binomial form.
    pub binomial: BinomialProduct,
    pub order: u64,
    pub h1_order: BigInt,
    /// `lim_{t→1}` of the product; equals `|H|/o(u)`.
    pub limit: Rational,
}

impl AcampoResult {
    /// `Δ` as a polynomial when `g_u` is homologically trivial.
    pub fn polynomial(&self) -> Option<IntLaurentPolynomial> {
        if self.order == 1 {
            self.delta.as_polynomial()
        } else {
            None
        }
    }
}

pub fn acampo_alexander(g: &PlumbingGraph) -> Result<AcampoResult> {
    let arrows = g.arrows();
    let (u, _) = *arrows.first().ok_or(Error::ArrowMissing)?;
    if arrows.len() > 1 {
        return Err(Error::InvalidInput("A'Campo's formula here needs exactly one arrow".into()));
    }
    let form = intersection_matrix(g)?;
    let wv = weights_and_linking(g, u)?;
    let dbar = g.degrees_with_arrows();
    let mut num = IntLaurentPolynomial::t_pow_minus_one(1);
    let mut den = IntLaurentPolynomial::one();
    // (t−1)Π(t^w−1)^e = (−1)^{1+Σe}·(1−t)Π(1−t^w)^e
    let mut bin = BinomialProduct::factor(1, 1);
    let mut sign_exp = 1i64;
    for (v, &e) in dbar.iter().enumerate() {
        let e = e - 2;
        if e == 0 {
            continue;
        }
        let w = wv.weights[v].to_u64().ok_or_else(|| Error::InternalInconsistency("nonpositive weight".into()))?;
        if w == 0 {
            return Err(Error::InternalInconsistency("zero weight".into()));
        }
        let f = IntLaurentPolynomial::t_pow_minus_one(w).pow(e.unsigned_abs() as u32);
        if e > 0 {
            num = &num * &f;
        } else {
            den = &den * &f;
        }
        bin = bin.mul(&BinomialProduct::factor(w, e));
        sign_exp += e;
    }
    let delta = RationalFunction::new(num, den)?;
    let h = form.det.abs();
    let limit = bin
        .value_at_1()
        .map(|v| if sign_exp % 2 == 0 { v } else { -v })
        .ok_or_else(|| Error::InternalInconsistency("A'Campo product has a zero or pole at t = 1".into()))?;
    let expected = BigRational::new(h.clone(), BigInt::from(wv.order));
    if limit != expected {
        return Err(Error::InternalInconsistency(format!("A'Campo limit {} != |H|/o(u) = {}", limit, expected)));
    }
    if wv.order == 1 {
        let p = delta
            .as_polynomial()
            .ok_or_else(|| Error::InternalInconsistency("A'Campo quotient is not a polynomial".into()))?;
        if BigInt::from(p.value_at_1()) != h {
            return Err(Error::InternalInconsistency("Δ(1) != |H|".into()));
        }
    }
    Ok(AcampoResult { delta, binomial: bin, order: wv.order, h1_order: h, limit })
}

/// `K² + #V` from the adjunction relation `K·E_v = −e_v − 2`.
pub fn canonical_class_invariant(g: &PlumbingGraph) -> Result<Rational> {
    let form = intersection_matrix(g)?;
    if !form.negative_definite {
        return Err(Error::NotNegativeDefinite);
    }
    let rhs: Vec<Rational> = g.vertices().iter().map(|(_, e)| qi(-e - 2)).collect();
    let k: Vec<Rational> = match TreeFactor::new(g) {
        Some(f) => f.solve(&rhs)?,
        None => {
            let inv = rational_inverse(&form.matrix)?;
            inv.iter().map(|row| row.iter().zip(&rhs).map(|(a, b)| a * b).sum()).collect()
        }
    };
    let k2: Rational = k.iter().zip(&rhs).map(|(a, b)| a * b).sum();
    Ok(k2 + qi(g.vertex_count() as i64))
}

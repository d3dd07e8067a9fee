//! Rings `R = R_G / (l_1, l_2)` from connected bipartite graphs, where `R_G`
//! is the Stanley-Reisner ring, `l_1 = X_1 + .. + X_n`, `l_2 = Y_1 + .. + Y_m`.
//!
//! Removing `x_n` and `y_m` must leave exactly two components `A` (the one
//! holding `x_1`) and `B`, and `x_n y_m` must not be an edge. Then `R` is a
//! connected sum along `delta = f_A g_A = -f_B g_B`.

use std::collections::VecDeque;

use serde::Serialize;

use crate::algebra::{Element, ShortAlgebra};
use crate::error::{Error, Result};
use crate::ezd::{proxy_algebra, search_ezd_exhaustive};
use crate::field::PrimeField;
use crate::io::graph::BipartiteGraph;
use crate::io::ring::{Presentation, Quadric};
use crate::linalg::{intersection_dimension, DenseMatrix};

/// A vertex of the graph, 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    X(usize),
    Y(usize),
}

impl Vertex {
    pub fn name(self) -> String {
        match self {
            Vertex::X(i) => format!("x{}", i + 1),
            Vertex::Y(j) => format!("y{}", j + 1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GraphChecks {
    pub truncation: bool,
    pub fg_zero: bool,
    /// `f_A g_A = -f_B g_B`.
    pub delta_identity: bool,
    pub delta_nonzero: bool,
    /// Every product of an `A`-variable with a `B`-variable vanishes.
    pub cross_products_zero: bool,
    /// `dim (a ∩ b)_2 = 1`.
    pub intersection_is_delta: bool,
}

impl GraphChecks {
    pub fn all(&self) -> bool {
        self.truncation
            && self.fg_zero
            && self.delta_identity
            && self.delta_nonzero
            && self.cross_products_zero
            && self.intersection_is_delta
    }
}

#[derive(Clone, Debug)]
pub struct GraphRingData {
    pub graph: BipartiteGraph,
    pub component_a: Vec<Vertex>,
    pub component_b: Vec<Vertex>,
    pub presentation: Presentation,
    pub algebra: ShortAlgebra,
    pub f_a: Element,
    pub f_b: Element,
    pub g_a: Element,
    pub g_b: Element,
    pub delta: Element,
    pub checks: GraphChecks,
}

impl GraphRingData {
    /// Variable index of a surviving vertex in the presentation.
    pub fn variable_of(&self, v: Vertex) -> Option<usize> {
        variable_index(self.graph.x_count(), self.graph.y_count(), v)
    }
}

fn variable_index(n: usize, m: usize, v: Vertex) -> Option<usize> {
    match v {
        Vertex::X(i) if i + 1 < n => Some(i),
        Vertex::Y(j) if j + 1 < m => Some(n - 1 + j),
        _ => None,
    }
}

fn hypothesis(msg: impl Into<String>) -> Error {
    Error::GraphHypothesis(msg.into())
}

/// Connected components of the graph restricted to `keep`, in order of their
/// smallest vertex (x before y).
fn components(g: &BipartiteGraph, keep: impl Fn(Vertex) -> bool) -> Vec<Vec<Vertex>> {
    let (n, m) = (g.x_count(), g.y_count());
    let id = |v: Vertex| match v {
        Vertex::X(i) => i,
        Vertex::Y(j) => n + j,
    };
    let vertices: Vec<Vertex> = (0..n).map(Vertex::X).chain((0..m).map(Vertex::Y)).filter(|&v| keep(v)).collect();
    let mut adjacency = vec![Vec::new(); n + m];
    for (i, j) in g.edges() {
        let (x, y) = (Vertex::X(i), Vertex::Y(j));
        if keep(x) && keep(y) {
            adjacency[id(x)].push(y);
            adjacency[id(y)].push(x);
        }
    }
    let mut seen = vec![false; n + m];
    let mut out = Vec::new();
    for &start in &vertices {
        if seen[id(start)] {
            continue;
        }
        seen[id(start)] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &adjacency[id(v)] {
                if !seen[id(w)] {
                    seen[id(w)] = true;
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        comp.sort();
        out.push(comp);
    }
    out
}

/// The Stanley-Reisner generators with `X_n`, `Y_m` eliminated. Integer
/// coefficients are kept so the presentation can be read over other primes.
fn generators(g: &BipartiteGraph, field: PrimeField) -> Vec<Quadric> {
    let (n, m) = (g.x_count(), g.y_count());
    let width = n + m - 2;
    let form = |v: Vertex| -> Vec<i64> {
        let mut out = vec![0i64; width];
        match variable_index(n, m, v) {
            Some(k) => out[k] = 1,
            None => {
                let range = match v {
                    Vertex::X(_) => 0..n - 1,
                    Vertex::Y(_) => n - 1..width,
                };
                out[range].iter_mut().for_each(|c| *c = -1);
            }
        }
        out
    };
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i..n {
            pairs.push((Vertex::X(i), Vertex::X(j)));
        }
    }
    for i in 0..m {
        for j in i..m {
            pairs.push((Vertex::Y(i), Vertex::Y(j)));
        }
    }
    for i in 0..n {
        for j in 0..m {
            if !g.has_edge(i, j) {
                pairs.push((Vertex::X(i), Vertex::Y(j)));
            }
        }
    }
    let mut out: Vec<Quadric> = Vec::new();
    for (a, b) in pairs {
        let q = Quadric::product(&form(a), &form(b));
        if !q.is_zero_mod(field) && !out.contains(&q) {
            out.push(q);
        }
    }
    out
}

pub fn build_from_graph(g: &BipartiteGraph, field: PrimeField) -> Result<GraphRingData> {
    let (n, m) = (g.x_count(), g.y_count());
    if n < 2 || m < 2 {
        return Err(hypothesis(format!("need at least two vertices on each side, found n = {n}, m = {m}")));
    }
    if components(g, |_| true).len() != 1 {
        return Err(hypothesis("the graph is not connected"));
    }
    if g.has_edge(n - 1, m - 1) {
        return Err(hypothesis(format!("x{n} and y{m} are joined by an edge")));
    }
    let parts = components(g, |v| variable_index(n, m, v).is_some());
    if parts.len() != 2 {
        return Err(hypothesis(format!(
            "removing x{n} and y{m} leaves {} components instead of two",
            parts.len()
        )));
    }
    let (component_a, component_b) = (parts[0].clone(), parts[1].clone());

    let mut variables: Vec<String> = (0..n - 1).map(|i| format!("x{}", i + 1)).collect();
    variables.extend((0..m - 1).map(|j| format!("y{}", j + 1)));
    let presentation = Presentation::new(field, variables, generators(g, field), None)?;
    let truncation = ShortAlgebra::verify_truncation(&presentation);
    if !truncation {
        return Err(Error::TruncationUnfaithful(presentation.variables().join(", ")));
    }
    let alg = ShortAlgebra::build(&presentation);
    let width = n + m - 2;
    let sum_of = |comp: &[Vertex], side_x: bool| {
        let mut v = vec![0u32; width];
        for &u in comp {
            if matches!(u, Vertex::X(_)) == side_x {
                v[variable_index(n, m, u).expect("surviving vertex")] = 1;
            }
        }
        alg.linear(v)
    };
    let f_a = sum_of(&component_a, true);
    let f_b = sum_of(&component_b, true);
    let g_a = sum_of(&component_a, false);
    let g_b = sum_of(&component_b, false);
    let f = alg.add(&f_a, &f_b);
    let gg = alg.add(&g_a, &g_b);
    let delta = alg.multiply(&f_a, &g_a);
    let minus_b = alg.neg(&alg.multiply(&f_b, &g_b));

    let index_set = |comp: &[Vertex]| -> Vec<usize> {
        comp.iter().map(|&u| variable_index(n, m, u).expect("surviving vertex")).collect()
    };
    let (ia, ib) = (index_set(&component_a), index_set(&component_b));
    let cross_products_zero = ia
        .iter()
        .all(|&i| ib.iter().all(|&j| alg.reduce_monomial(i.min(j), i.max(j)).iter().all(|&c| c == 0)));
    let degree_two_span = |idx: &[usize]| {
        let columns: Vec<Vec<u32>> = idx
            .iter()
            .flat_map(|&i| (0..width).map(move |j| (i.min(j), i.max(j))))
            .map(|(i, j)| alg.reduce_monomial(i, j).to_vec())
            .collect();
        DenseMatrix::from_columns(field, alg.d(), &columns)
    };
    let intersection_is_delta = intersection_dimension(&degree_two_span(&ia), &degree_two_span(&ib)) == 1;

    let checks = GraphChecks {
        truncation,
        fg_zero: alg.multiply(&f, &gg) == alg.zero(),
        delta_identity: delta == minus_b,
        delta_nonzero: delta != alg.zero(),
        cross_products_zero,
        intersection_is_delta,
    };
    Ok(GraphRingData {
        graph: g.clone(),
        component_a,
        component_b,
        presentation,
        algebra: alg,
        f_a,
        f_b,
        g_a,
        g_b,
        delta,
        checks,
    })
}

/// True when an exhaustive search over `F_prime` finds no exact zero
/// divisors in the ring of `presentation`.
pub fn no_ezd_spotcheck(presentation: &Presentation, prime: u32) -> Result<bool> {
    if presentation.n() <= 1 {
        return Ok(true);
    }
    let alg = proxy_algebra(presentation, prime)?;
    Ok(search_ezd_exhaustive(&alg, false)?.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn path6() -> GraphRingData {
        build_from_graph(&fixtures::graph("path6.graph").unwrap(), PrimeField::default()).unwrap()
    }

    #[test]
    fn path6_ring() {
        let data = path6();
        assert!(data.checks.all(), "{:?}", data.checks);
        assert_eq!(data.presentation.variables(), ["x1", "x2", "y1", "y2"]);
        assert_eq!(data.component_a, vec![Vertex::X(0), Vertex::Y(0)]);
        assert_eq!(data.component_b, vec![Vertex::X(1), Vertex::Y(1)]);
        let alg = &data.algebra;
        assert_eq!(data.f_a, alg.variable(0));
        assert_eq!(data.g_b, alg.variable(3));
    }

    /// Substituting `X3 = -(X1 + X2)`, `Y3 = -(Y1 + Y2)` by hand: the squares
    /// and `X1 X3`, `X2 X3` kill every `x_i x_j`; likewise for `y`; the
    /// non-edges `x1 y2`, `x2 y1` vanish and `X3 Y3` gives
    /// `x1 y1 + x2 y2 = 0`. So `R_2` is spanned by `x1 y1`.
    #[test]
    fn path6_matches_hand_substitution() {
        let data = path6();
        let alg = &data.algebra;
        assert_eq!((alg.n(), alg.d()), (4, 1));
        let (x1, x2, y1, y2) = (alg.variable(0), alg.variable(1), alg.variable(2), alg.variable(3));
        let x1y1 = alg.multiply(&x1, &y1);
        assert_ne!(x1y1, alg.zero());
        assert_eq!(alg.multiply(&x2, &y2), alg.neg(&x1y1));
        for (a, b) in [(&x1, &x1), (&x1, &x2), (&x2, &x2), (&y1, &y1), (&y1, &y2), (&y2, &y2), (&x1, &y2), (&x2, &y1)] {
            assert_eq!(alg.multiply(a, b), alg.zero());
        }
        assert_eq!(data.delta, x1y1);
    }

    #[test]
    fn path6_has_no_ezd_over_f3() {
        assert!(no_ezd_spotcheck(&path6().presentation, 3).unwrap());
    }

    #[test]
    fn spotcheck_finds_pairs_in_exnew() {
        assert!(!no_ezd_spotcheck(&fixtures::ring("exnew_r.ring").unwrap(), 3).unwrap());
    }

    #[test]
    fn hypothesis_violations() {
        let k = PrimeField::default();
        let with_corner = BipartiteGraph::new(3, 3, &[(0, 0), (1, 1), (2, 0), (2, 1), (0, 2), (1, 2), (2, 2)]).unwrap();
        assert!(matches!(build_from_graph(&with_corner, k), Err(Error::GraphHypothesis(_))));
        let disconnected = BipartiteGraph::new(2, 2, &[(0, 0)]).unwrap();
        assert!(matches!(build_from_graph(&disconnected, k), Err(Error::GraphHypothesis(_))));
        // removing x3, y3 leaves a single component
        let one_part = BipartiteGraph::new(3, 3, &[(0, 0), (1, 0), (0, 1), (2, 1), (0, 2)]).unwrap();
        assert!(matches!(build_from_graph(&one_part, k), Err(Error::GraphHypothesis(_))));
        let small = BipartiteGraph::new(1, 2, &[(0, 0)]).unwrap();
        assert!(build_from_graph(&small, k).is_err());
    }

    #[test]
    fn trivial_spotcheck() {
        let p = Presentation::new(PrimeField::default(), vec!["x".into()], vec![Quadric::monomial(0, 0)], None).unwrap();
        assert!(no_ezd_spotcheck(&p, 3).unwrap());
    }
}

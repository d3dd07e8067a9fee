//! Matrices with linear entries over a short algebra, complexes built from
//! them, and the checks on those complexes: degree-wise exactness, total
//! acyclicity, the coefficient matrix of a lifted composite against `f`, the
//! lifting condition `(f) R_0^b ⊆ im(Ã)`, and normalization to `Ã Ã' = f I`.
//!
//! A `c x b` matrix represents a map `R^b -> R^c` acting on column vectors.
//! In a [`PeriodicComplex`] with maps `m_0, ..., m_{p-1}` the composites are
//! `m_{k-1} m_k` (indices mod p): the sequence reads
//! `... -> m_1 -> m_0 -> m_{p-1} -> ...`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{format_linear, Element, LiftPair, ShortAlgebra};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::linalg::DenseMatrix;

/// `rows x cols` matrix whose entries are degree-1 coordinate vectors of
/// length `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearMatrix {
    rows: usize,
    cols: usize,
    n: usize,
    data: Vec<u32>,
}

impl LinearMatrix {
    pub fn zeros(rows: usize, cols: usize, n: usize) -> Self {
        Self {
            rows,
            cols,
            n,
            data: vec![0; rows * cols * n],
        }
    }

    /// Entries given row-major.
    pub fn from_entries(rows: usize, cols: usize, n: usize, entries: Vec<Vec<u32>>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count");
        let mut m = Self::zeros(rows, cols, n);
        for (k, e) in entries.into_iter().enumerate() {
            assert_eq!(e.len(), n, "entry length");
            m.data[k * n..(k + 1) * n].copy_from_slice(&e);
        }
        m
    }

    /// 1 x 1 matrix holding a single linear form.
    pub fn from_form(form: &[u32]) -> Self {
        Self::from_entries(1, 1, form.len(), vec![form.to_vec()])
    }

    /// Square diagonal matrix with the given linear forms on the diagonal.
    pub fn diagonal(n: usize, forms: &[Vec<u32>]) -> Self {
        let b = forms.len();
        let mut m = Self::zeros(b, b, n);
        for (i, f) in forms.iter().enumerate() {
            m.entry_mut(i, i).copy_from_slice(f);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of variables of the ambient algebra.
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn entry(&self, r: usize, c: usize) -> &[u32] {
        let k = (r * self.cols + c) * self.n;
        &self.data[k..k + self.n]
    }

    #[inline]
    pub fn entry_mut(&mut self, r: usize, c: usize) -> &mut [u32] {
        let k = (r * self.cols + c) * self.n;
        &mut self.data[k..k + self.n]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows, self.n);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.entry_mut(c, r).copy_from_slice(self.entry(r, c));
            }
        }
        t
    }

    pub fn scale(&self, field: PrimeField, s: u32) -> Self {
        let mut m = self.clone();
        m.data.iter_mut().for_each(|v| *v = field.mul(*v, s));
        m
    }

    pub fn add(&self, field: PrimeField, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols, self.n), (other.rows, other.cols, other.n));
        let mut m = self.clone();
        for (a, &b) in m.data.iter_mut().zip(&other.data) {
            *a = field.add(*a, b);
        }
        m
    }

    /// `S * self` for a scalar matrix `S`.
    pub fn left_mul(&self, s: &DenseMatrix) -> Self {
        assert_eq!(s.cols(), self.rows, "shape mismatch in scalar product");
        let k = s.field();
        let mut out = Self::zeros(s.rows(), self.cols, self.n);
        for i in 0..s.rows() {
            for l in 0..self.rows {
                let a = s.get(i, l);
                if a == 0 {
                    continue;
                }
                for c in 0..self.cols {
                    let src = (l * self.cols + c) * self.n;
                    let dst = (i * self.cols + c) * self.n;
                    for t in 0..self.n {
                        out.data[dst + t] = k.mul_add(out.data[dst + t], a, self.data[src + t]);
                    }
                }
            }
        }
        out
    }

    /// `self * S` for a scalar matrix `S`.
    pub fn right_mul(&self, s: &DenseMatrix) -> Self {
        self.transpose().left_mul(&s.transpose()).transpose()
    }

    /// `[[a, b], [c, d]]` from four blocks with compatible shapes.
    pub fn block(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let n = a.n;
        let (rows, cols) = (a.rows + c.rows, a.cols + b.cols);
        let mut m = Self::zeros(rows, cols, n);
        for (blk, r0, c0) in [(a, 0, 0), (b, 0, a.cols), (c, a.rows, 0), (d, a.rows, a.cols)] {
            for r in 0..blk.rows {
                for col in 0..blk.cols {
                    m.entry_mut(r0 + r, c0 + col).copy_from_slice(blk.entry(r, col));
                }
            }
        }
        m
    }

    pub fn direct_sum(parts: &[&Self]) -> Self {
        let n = parts.first().map_or(0, |p| p.n);
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut m = Self::zeros(rows, cols, n);
        let (mut r0, mut c0) = (0, 0);
        for p in parts {
            for r in 0..p.rows {
                for c in 0..p.cols {
                    m.entry_mut(r0 + r, c0 + c).copy_from_slice(p.entry(r, c));
                }
            }
            r0 += p.rows;
            c0 += p.cols;
        }
        m
    }

    /// Move entries into an algebra with `n_new` variables, sending old
    /// variable `i` to `index_map[i]`.
    pub fn embed(&self, n_new: usize, index_map: &[usize]) -> Self {
        assert_eq!(index_map.len(), self.n);
        let mut m = Self::zeros(self.rows, self.cols, n_new);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let src = self.entry(r, c).to_vec();
                let dst = m.entry_mut(r, c);
                for (i, v) in src.into_iter().enumerate() {
                    dst[index_map[i]] = v;
                }
            }
        }
        m
    }

    /// Keep only the listed variable coordinates, in the listed order.
    pub fn restrict(&self, indices: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, self.cols, indices.len());
        for r in 0..self.rows {
            for c in 0..self.cols {
                let src = self.entry(r, c);
                let dst = m.entry_mut(r, c);
                for (t, &i) in indices.iter().enumerate() {
                    dst[t] = src[i];
                }
            }
        }
        m
    }

    /// `[[e00, e01], [e10, e11]]` using the given variable names.
    pub fn to_text(&self, field: PrimeField, names: &[String]) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|r| {
                let cells: Vec<String> = (0..self.cols)
                    .map(|c| format_linear(field, names, self.entry(r, c)))
                    .collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }

    fn check_algebra(&self, alg: &ShortAlgebra) -> Result<()> {
        if self.n != alg.n() {
            return Err(Error::ShapeMismatch(format!(
                "matrix entries have {} coordinates, algebra has {} variables",
                self.n,
                alg.n()
            )));
        }
        Ok(())
    }
}

/// `rows x cols` matrix of degree-2 coordinate vectors of length `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticMatrix {
    rows: usize,
    cols: usize,
    d: usize,
    data: Vec<u32>,
}

impl QuadraticMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> &[u32] {
        let k = (r * self.cols + c) * self.d;
        &self.data[k..k + self.d]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Whether this equals `element * M` entrywise for the scalar matrix `M`.
    pub fn equals_scaled(&self, field: PrimeField, element: &[u32], m: &DenseMatrix) -> bool {
        if (m.rows(), m.cols()) != (self.rows, self.cols) {
            return false;
        }
        (0..self.rows).all(|r| {
            (0..self.cols).all(|c| {
                let s = m.get(r, c);
                self.entry(r, c)
                    .iter()
                    .zip(element)
                    .all(|(&q, &f)| q == field.mul(s, f))
            })
        })
    }
}

/// Entrywise product `A B` with degree-2 entries reduced in `alg`.
pub fn compose(alg: &ShortAlgebra, a: &LinearMatrix, b: &LinearMatrix) -> Result<QuadraticMatrix> {
    a.check_algebra(alg)?;
    b.check_algebra(alg)?;
    if a.cols != b.rows {
        return Err(Error::ShapeMismatch(format!(
            "cannot compose {}x{} with {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let d = alg.d();
    let mut out = QuadraticMatrix {
        rows: a.rows,
        cols: b.cols,
        d,
        data: vec![0; a.rows * b.cols * d],
    };
    for r in 0..a.rows {
        for c in 0..b.cols {
            let k = (r * b.cols + c) * d;
            let acc = &mut out.data[k..k + d];
            for l in 0..a.cols {
                alg.add_product_linear(acc, 1, a.entry(r, l), b.entry(l, c));
            }
        }
    }
    Ok(out)
}

/// The `(c*d) x (b*n)` matrix of the k-linear map `(R_1)^b -> (R_2)^c`
/// induced by a `c x b` linear matrix. Row `r*d + t`, column `s*n + v`.
pub fn degree_map(alg: &ShortAlgebra, a: &LinearMatrix) -> Result<DenseMatrix> {
    a.check_algebra(alg)?;
    let (n, d) = (alg.n(), alg.d());
    let k = alg.field();
    let mut m = DenseMatrix::zeros(k, a.rows * d, a.cols * n);
    for r in 0..a.rows {
        for s in 0..a.cols {
            let e = a.entry(r, s);
            for (u, &eu) in e.iter().enumerate() {
                if eu == 0 {
                    continue;
                }
                for v in 0..n {
                    for (t, &red) in alg.reduce_monomial(u, v).iter().enumerate() {
                        if red != 0 {
                            let (row, col) = (r * d + t, s * n + v);
                            m.set(row, col, k.mul_add(m.get(row, col), eu, red));
                        }
                    }
                }
            }
        }
    }
    Ok(m)
}

/// Columns of `a` as vectors in `(R_1)^rows`: a `(rows*n) x cols` matrix.
pub fn column_matrix(field: PrimeField, a: &LinearMatrix) -> DenseMatrix {
    let n = a.n;
    let mut m = DenseMatrix::zeros(field, a.rows * n, a.cols);
    for r in 0..a.rows {
        for c in 0..a.cols {
            for (v, &x) in a.entry(r, c).iter().enumerate() {
                m.set(r * n + v, c, x);
            }
        }
    }
    m
}

/// Degree-wise exactness data at one module of a linear complex, with
/// `outgoing` leaving and `incoming` arriving.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositionVerdict {
    /// Degree 0: the columns of the outgoing map are independent.
    pub columns_independent: bool,
    /// Degree 1: dimension of the kernel of the outgoing degree map.
    pub kernel_dimension: usize,
    /// Degree 1: dimension of the span of the incoming map's columns.
    pub image_dimension: usize,
    /// Degree 2: the incoming degree map is onto.
    pub surjective: bool,
}

impl PositionVerdict {
    pub fn exact(&self) -> bool {
        self.columns_independent && self.kernel_dimension == self.image_dimension && self.surjective
    }
}

/// Exactness at the module between `incoming` and `outgoing`. The caller
/// guarantees `outgoing * incoming = 0`.
pub fn position_verdict(
    alg: &ShortAlgebra,
    outgoing: &LinearMatrix,
    incoming: &LinearMatrix,
) -> Result<PositionVerdict> {
    let k = alg.field();
    let out_cols = column_matrix(k, outgoing);
    let out_map = degree_map(alg, outgoing)?;
    let in_map = degree_map(alg, incoming)?;
    Ok(PositionVerdict {
        columns_independent: out_cols.rank() == outgoing.cols,
        kernel_dimension: out_map.nullity(),
        image_dimension: column_matrix(k, incoming).rank(),
        surjective: in_map.rank() == incoming.rows * alg.d(),
    })
}

/// Finite window of maps; `maps[i] * maps[i + 1]` are the composites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexWindow {
    maps: Vec<LinearMatrix>,
}

impl ComplexWindow {
    pub fn new(maps: Vec<LinearMatrix>) -> Result<Self> {
        for (i, w) in maps.windows(2).enumerate() {
            if w[0].cols != w[1].rows || w[0].n != w[1].n {
                return Err(Error::ShapeMismatch(format!(
                    "maps {i} ({}x{}) and {} ({}x{}) do not chain",
                    w[0].rows,
                    w[0].cols,
                    i + 1,
                    w[1].rows,
                    w[1].cols
                )));
            }
        }
        Ok(Self { maps })
    }

    pub fn maps(&self) -> &[LinearMatrix] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn is_complex(&self, alg: &ShortAlgebra) -> Result<bool> {
        for w in self.maps.windows(2) {
            if !compose(alg, &w[0], &w[1])?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Verdict at interior position `i` (between `maps[i + 1]` and
    /// `maps[i]`); boundary positions are not assessed and give `None`.
    pub fn exactness_at(&self, alg: &ShortAlgebra, i: usize) -> Result<Option<bool>> {
        if i + 1 >= self.maps.len() {
            return Ok(None);
        }
        if !compose(alg, &self.maps[i], &self.maps[i + 1])?.is_zero() {
            return Err(Error::NotAComplex(format!("composite at position {i} is nonzero")));
        }
        Ok(Some(position_verdict(alg, &self.maps[i], &self.maps[i + 1])?.exact()))
    }

    pub fn dual(&self) -> Self {
        Self {
            maps: self.maps.iter().rev().map(LinearMatrix::transpose).collect(),
        }
    }
}

/// Doubly infinite complex repeating `m_0, ..., m_{p-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PeriodicComplex {
    maps: Vec<LinearMatrix>,
}

impl PeriodicComplex {
    pub fn new(maps: Vec<LinearMatrix>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::Precondition("period must be at least 1".into()));
        }
        let p = maps.len();
        for k in 0..p {
            let (m, next) = (&maps[k], &maps[(k + 1) % p]);
            if m.cols != next.rows || m.n != next.n {
                return Err(Error::ShapeMismatch(format!(
                    "source of map {k} ({}x{}) is not the target of map {} ({}x{})",
                    m.rows,
                    m.cols,
                    (k + 1) % p,
                    next.rows,
                    next.cols
                )));
            }
        }
        Ok(Self { maps })
    }

    /// The rank-1, period-2 complex `... -> a -> b -> a -> ...`.
    pub fn pair(a: &[u32], b: &[u32]) -> Self {
        Self {
            maps: vec![LinearMatrix::from_form(a), LinearMatrix::from_form(b)],
        }
    }

    pub fn period(&self) -> usize {
        self.maps.len()
    }

    pub fn maps(&self) -> &[LinearMatrix] {
        &self.maps
    }

    pub fn map(&self, k: usize) -> &LinearMatrix {
        &self.maps[k % self.maps.len()]
    }

    /// Free ranks of the modules, indexed by the map leaving them.
    pub fn ranks(&self) -> Vec<usize> {
        self.maps.iter().map(|m| m.cols).collect()
    }

    /// The same complex listed over `times` periods.
    pub fn unrolled(&self, times: usize) -> Self {
        let maps = (0..times).flat_map(|_| self.maps.iter().cloned()).collect();
        Self { maps }
    }

    /// Direct sum of `copies` copies of the complex.
    pub fn inflated(&self, copies: usize) -> Self {
        let maps = self
            .maps
            .iter()
            .map(|m| LinearMatrix::direct_sum(&vec![m; copies]))
            .collect();
        Self { maps }
    }

    /// Transposes with arrows reversed: `m'_k = m_{p-1-k}^T`.
    pub fn dual(&self) -> Self {
        Self {
            maps: self.maps.iter().rev().map(LinearMatrix::transpose).collect(),
        }
    }

    /// `maps[k] * maps[k + 1]` for `k` in one period.
    pub fn composite(&self, alg: &ShortAlgebra, k: usize) -> Result<QuadraticMatrix> {
        compose(alg, self.map(k), self.map(k + 1))
    }

    pub fn is_complex(&self, alg: &ShortAlgebra) -> Result<bool> {
        for k in 0..self.period() {
            if !self.composite(alg, k)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn position_verdict(&self, alg: &ShortAlgebra, i: usize) -> Result<PositionVerdict> {
        if !self.composite(alg, i)?.is_zero() {
            return Err(Error::NotAComplex(format!("composite at position {i} is nonzero")));
        }
        position_verdict(alg, self.map(i), self.map(i + 1))
    }

    /// Exactness at the module leaving through `m_i`.
    pub fn exactness_at(&self, alg: &ShortAlgebra, i: usize) -> Result<bool> {
        Ok(self.position_verdict(alg, i)?.exact())
    }

    pub fn is_totally_acyclic(&self, alg: &ShortAlgebra) -> Result<bool> {
        Ok(self.acyclicity_report(alg)?.totally_acyclic)
    }

    pub fn acyclicity_report(&self, alg: &ShortAlgebra) -> Result<AcyclicityReport> {
        let is_complex = self.is_complex(alg)?;
        if !is_complex {
            return Ok(AcyclicityReport {
                is_complex,
                exact_at: BTreeMap::new(),
                dual_exact_at: BTreeMap::new(),
                totally_acyclic: false,
            });
        }
        let dual = self.dual();
        let mut exact_at = BTreeMap::new();
        let mut dual_exact_at = BTreeMap::new();
        for i in 0..self.period() {
            exact_at.insert(i.to_string(), self.exactness_at(alg, i)?);
            dual_exact_at.insert(i.to_string(), dual.exactness_at(alg, i)?);
        }
        let totally_acyclic = exact_at.values().chain(dual_exact_at.values()).all(|&b| b);
        Ok(AcyclicityReport {
            is_complex,
            exact_at,
            dual_exact_at,
            totally_acyclic,
        })
    }

    pub fn to_window(&self, length: usize) -> ComplexWindow {
        ComplexWindow {
            maps: (0..length).map(|i| self.map(i).clone()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AcyclicityReport {
    pub is_complex: bool,
    pub exact_at: BTreeMap<String, bool>,
    pub dual_exact_at: BTreeMap<String, bool>,
    pub totally_acyclic: bool,
}

/// If every entry of the lifted composite `Ã1 Ã2` (computed in `R_0`) is a
/// scalar multiple of `f`, the scalar matrix `M` with `Ã1 Ã2 = f M`.
pub fn product_f_coefficient(
    r0: &ShortAlgebra,
    a1: &LinearMatrix,
    a2: &LinearMatrix,
    f: &Element,
) -> Result<Option<DenseMatrix>> {
    let k = r0.field();
    let Some(lead) = f.v2.iter().position(|&x| x != 0) else {
        return Err(Error::Precondition("f is zero in R_0".into()));
    };
    let inv = k.inv(f.v2[lead]).expect("nonzero");
    let comp = compose(r0, a1, a2)?;
    let mut m = DenseMatrix::zeros(k, comp.rows, comp.cols);
    for r in 0..comp.rows {
        for c in 0..comp.cols {
            m.set(r, c, k.mul(comp.entry(r, c)[lead], inv));
        }
    }
    Ok(comp.equals_scaled(k, &f.v2, &m).then_some(m))
}

/// Whether `f e_j` lies in the image of the lifted degree map of every map
/// in one period.
pub fn lifting_condition(pair: &LiftPair, c: &PeriodicComplex) -> Result<bool> {
    for m in c.maps() {
        if !lift_contains_f(pair, m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(f) R_0^rows ⊆ im(Ã)` for a single lifted map.
pub fn lift_contains_f(pair: &LiftPair, m: &LinearMatrix) -> Result<bool> {
    let d0 = pair.r0.d();
    let map = degree_map(&pair.r0, m)?;
    for j in 0..m.rows() {
        let mut target = vec![0u32; m.rows() * d0];
        target[j * d0..(j + 1) * d0].copy_from_slice(&pair.f.v2);
        if !map.contains_column(&target) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Normalized {
    Periodic(PeriodicComplex),
    Window(ComplexWindow),
}

impl Normalized {
    pub fn maps(&self) -> &[LinearMatrix] {
        match self {
            Normalized::Periodic(c) => c.maps(),
            Normalized::Window(w) => w.maps(),
        }
    }
}

pub const DEFAULT_WINDOW: usize = 8;

/// Change bases by invertible constant matrices so that every adjacent
/// lifted composite is exactly `f I`. The window holds `d'_0 .. d'_{L-1}`
/// with `d'_i = V_i d_i W_i`, `V_{i+1} = W_i^{-1}`, `W_{i+1} = (V_i U_i)^{-1}`
/// where `d_i d_{i+1} = f U_i`. When the result repeats with the input
/// period (or twice it) it is returned as a periodic complex.
pub fn normalize(pair: &LiftPair, c: &PeriodicComplex, window: usize) -> Result<Normalized> {
    let k = pair.field();
    let b = c.map(0).rows();
    if c.maps().iter().any(|m| m.rows() != b || m.cols() != b) {
        return Err(Error::Precondition(
            "normalization needs square maps of constant rank".into(),
        ));
    }
    let p = c.period();
    let mut v = DenseMatrix::identity(k, b);
    let mut w = DenseMatrix::identity(k, b);
    let mut out = Vec::with_capacity(window);
    for i in 0..window {
        out.push(c.map(i).left_mul(&v).right_mul(&w));
        let u = product_f_coefficient(&pair.r0, c.map(i), c.map(i + 1), &pair.f)?
            .ok_or(Error::NotScalarSpan { position: i })?;
        let vu = v.mul(&u);
        let next_w = vu.inverse().ok_or_else(|| Error::NotInvertible {
            position: i,
            matrix: u.clone(),
        })?;
        v = w.inverse().expect("W_i is invertible by construction");
        w = next_w;
    }
    for q in [p, 2 * p] {
        if window > q && out[q] == out[0] {
            return Ok(Normalized::Periodic(PeriodicComplex::new(out[..q].to_vec())?));
        }
    }
    Ok(Normalized::Window(ComplexWindow::new(out)?))
}

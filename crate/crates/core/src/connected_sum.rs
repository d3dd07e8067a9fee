//! Connected sums `R = (R_0 x_k S_0) / (f - g)` of two short algebras along
//! distinguished quadrics, and the passage of complexes between `R` and the
//! factors `R_1 = R_0 / (f)`, `S_1 = S_0 / (g)`.
//!
//! Variables of `R` are those of the first factor followed by those of the
//! second; a matrix over `R` splits coordinate-wise into its two halves.

use std::collections::HashSet;

use serde::Serialize;

use crate::algebra::{Element, LiftPair, ShortAlgebra};
use crate::complex::{
    lifting_condition, normalize, product_f_coefficient, LinearMatrix, Normalized, PeriodicComplex,
    DEFAULT_WINDOW,
};
use crate::error::{Error, Result};
use crate::io::ring::{Presentation, Quadric};
use crate::linalg::DenseMatrix;

#[derive(Clone, Debug)]
pub struct ConnectedSum {
    pub presentation: Presentation,
    pub r: ShortAlgebra,
    /// `R_1`, `R_0` and `f`.
    pub left: LiftPair,
    /// `S_1`, `S_0` and `g`.
    pub right: LiftPair,
    /// Image of `f` (equivalently `g`) in `R_2`.
    pub delta: Element,
}

impl ConnectedSum {
    pub fn left_indices(&self) -> Vec<usize> {
        (0..self.left.r1.n()).collect()
    }

    pub fn right_indices(&self) -> Vec<usize> {
        let n1 = self.left.r1.n();
        (n1..n1 + self.right.r1.n()).collect()
    }

    /// Split a matrix over `R` into its parts over `R_1` and `S_1`.
    pub fn split_matrix(&self, d: &LinearMatrix) -> (LinearMatrix, LinearMatrix) {
        (d.restrict(&self.left_indices()), d.restrict(&self.right_indices()))
    }

    /// The lift of a matrix over `R_1` (or `R_0`) into `R`.
    pub fn embed_left(&self, a: &LinearMatrix) -> LinearMatrix {
        a.embed(self.r.n(), &self.left_indices())
    }

    pub fn embed_right(&self, b: &LinearMatrix) -> LinearMatrix {
        b.embed(self.r.n(), &self.right_indices())
    }

    /// `d_k = A'_k + B'_k` with no checks.
    pub fn plain_sum(&self, a: &PeriodicComplex, b: &PeriodicComplex) -> Result<PeriodicComplex> {
        check_alignment(a, b)?;
        let k = self.r.field();
        let maps = a
            .maps()
            .iter()
            .zip(b.maps())
            .map(|(x, y)| self.embed_left(x).add(k, &self.embed_right(y)))
            .collect();
        PeriodicComplex::new(maps)
    }

    /// Split every map of a complex over `R`.
    pub fn split_complex(&self, c: &PeriodicComplex) -> Result<(PeriodicComplex, PeriodicComplex)> {
        let (a, b): (Vec<_>, Vec<_>) = c.maps().iter().map(|m| self.split_matrix(m)).unzip();
        Ok((PeriodicComplex::new(a)?, PeriodicComplex::new(b)?))
    }

    /// Structural invariants of the sum: `ab = 0`, `f` and `g` both map to a
    /// nonzero `delta` annihilated by every variable, and the dimension
    /// formulas.
    pub fn invariants(&self) -> Invariants {
        let r = &self.r;
        let (li, ri) = (self.left_indices(), self.right_indices());
        let cross_zero = li
            .iter()
            .all(|&i| ri.iter().all(|&j| r.reduce_monomial(i, j).iter().all(|&x| x == 0)));
        let g_image = r.quadric_element(&self.distinguished_right());
        let delta_nonzero = self.delta.v2.iter().any(|&x| x != 0);
        let delta_in_socle = (0..r.n()).all(|i| {
            let p = r.multiply(&self.delta, &r.variable(i));
            p.c0 == 0 && p.v1.iter().all(|&x| x == 0) && p.v2.iter().all(|&x| x == 0)
        });
        let dim1_formula = r.n() == self.left.r0.n() + self.right.r0.n();
        let dim2_formula = r.d() + 1 == self.left.r0.d() + self.right.r0.d();
        Invariants {
            cross_products_zero: cross_zero,
            f_equals_g: g_image == self.delta,
            delta_nonzero,
            delta_in_socle,
            dim1_formula,
            dim2_formula,
        }
    }

    fn distinguished_right(&self) -> Quadric {
        let n1 = self.left.r1.n();
        let map: Vec<usize> = (0..self.right.r1.n()).map(|i| n1 + i).collect();
        self.right
            .r1
            .presentation()
            .distinguished_quadric()
            .expect("checked at construction")
            .reindexed(&map)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Invariants {
    pub cross_products_zero: bool,
    pub f_equals_g: bool,
    pub delta_nonzero: bool,
    pub delta_in_socle: bool,
    pub dim1_formula: bool,
    pub dim2_formula: bool,
}

impl Invariants {
    pub fn all(&self) -> bool {
        self.cross_products_zero
            && self.f_equals_g
            && self.delta_nonzero
            && self.delta_in_socle
            && self.dim1_formula
            && self.dim2_formula
    }
}

/// Glue `p1` (distinguished `f`) and `p2` (distinguished `g`). The quadrics
/// of the result are the non-distinguished quadrics of both factors, every
/// product `x_i y_j` across the factors, and `f - g`, which becomes the
/// distinguished quadric of the result so the construction can be repeated.
pub fn build_connected_sum(p1: &Presentation, p2: &Presentation) -> Result<ConnectedSum> {
    if p1.field() != p2.field() {
        return Err(Error::FieldMismatch(p1.field().p(), p2.field().p()));
    }
    let field = p1.field();
    let f = p1
        .distinguished_quadric()
        .ok_or_else(|| Error::MissingDistinguished(p1.variables().join(",")))?;
    let g = p2
        .distinguished_quadric()
        .ok_or_else(|| Error::MissingDistinguished(p2.variables().join(",")))?;
    let names1: HashSet<&String> = p1.variables().iter().collect();
    if let Some(clash) = p2.variables().iter().find(|v| names1.contains(v)) {
        return Err(Error::NameCollision(format!("variable `{clash}` occurs in both factors")));
    }

    let (n1, n2) = (p1.n(), p2.n());
    let shift: Vec<usize> = (n1..n1 + n2).collect();
    let mut quadrics: Vec<Quadric> = p1.without_distinguished().quadrics().to_vec();
    quadrics.extend(p2.without_distinguished().quadrics().iter().map(|q| q.reindexed(&shift)));
    for i in 0..n1 {
        for j in n1..n1 + n2 {
            quadrics.push(Quadric::monomial(i, j));
        }
    }
    let g_shifted = g.reindexed(&shift);
    quadrics.push(f.sub(&g_shifted));
    let variables: Vec<String> = p1.variables().iter().chain(p2.variables()).cloned().collect();
    let mut presentation = Presentation::new(field, variables, quadrics, None)?;

    let r = ShortAlgebra::build(&presentation);
    let delta = r.quadric_element(f);
    if delta.v2.iter().all(|&x| x == 0) {
        return Err(Error::DeltaZero);
    }
    // f - g stays a minimal generator unless it was already implied
    let last = presentation.quadrics().len() - 1;
    if let Ok(p) = presentation.with_distinguished(Some(last)) {
        presentation = p;
    }
    let r = ShortAlgebra::build(&presentation);

    if !ShortAlgebra::verify_truncation(&presentation) {
        return Err(Error::TruncationUnfaithful("the connected sum".into()));
    }
    let left = LiftPair::new(p1)?;
    let right = LiftPair::new(p2)?;
    for (name, pair) in [("the first factor", &left), ("the second factor", &right)] {
        if !pair.verify_truncation() {
            return Err(Error::TruncationUnfaithful(name.into()));
        }
    }
    let cs = ConnectedSum {
        presentation,
        r,
        left,
        right,
        delta,
    };
    let inv = cs.invariants();
    if !inv.all() {
        return Err(Error::InvariantViolation(format!("connected sum invariants: {inv:?}")));
    }
    Ok(cs)
}

fn check_alignment(a: &PeriodicComplex, b: &PeriodicComplex) -> Result<()> {
    if a.period() != b.period() {
        return Err(Error::Precondition(format!(
            "periods differ ({} and {}); align them first",
            a.period(),
            b.period()
        )));
    }
    for (k, (x, y)) in a.maps().iter().zip(b.maps()).enumerate() {
        if (x.rows(), x.cols()) != (y.rows(), y.cols()) {
            return Err(Error::Precondition(format!(
                "map {k} has shape {}x{} on one side and {}x{} on the other; align them first",
                x.rows(),
                x.cols(),
                y.rows(),
                y.cols()
            )));
        }
    }
    Ok(())
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Bring two constant-rank complexes to a common period and rank by
/// unrolling and by direct sums of copies.
pub fn align(a: &PeriodicComplex, b: &PeriodicComplex) -> Result<(PeriodicComplex, PeriodicComplex)> {
    let rank = |c: &PeriodicComplex| -> Result<usize> {
        let r = c.map(0).rows();
        if c.maps().iter().any(|m| m.rows() != r || m.cols() != r) || r == 0 {
            return Err(Error::Precondition("alignment needs square maps of constant positive rank".into()));
        }
        Ok(r)
    };
    let (ra, rb) = (rank(a)?, rank(b)?);
    let (pa, pb) = (a.period(), b.period());
    let (r, p) = (lcm(ra, rb), lcm(pa, pb));
    Ok((
        a.unrolled(p / pa).inflated(r / ra),
        b.unrolled(p / pb).inflated(r / rb),
    ))
}

/// A complex over `R` assembled from complexes over the two factors.
#[derive(Clone, Debug)]
pub struct Assembled {
    pub complex: PeriodicComplex,
    /// Sign applied to each map of the second factor.
    pub signs: Vec<i8>,
}

/// `d_k = A'_k + s_k B'_k`, after checking that the lifted composites are
/// `f I` and `-g I` (with the signs applied). With `auto_sign` the signs
/// alternate `+, -, +, ...`, unrolling odd periods to even ones.
pub fn assemble(
    cs: &ConnectedSum,
    a: &PeriodicComplex,
    b: &PeriodicComplex,
    auto_sign: bool,
) -> Result<Assembled> {
    check_alignment(a, b)?;
    let (a, b) = if auto_sign && a.period() % 2 == 1 {
        (a.unrolled(2), b.unrolled(2))
    } else {
        (a.clone(), b.clone())
    };
    let k = cs.r.field();
    let p = a.period();
    let signs: Vec<i8> = (0..p).map(|i| if auto_sign && i % 2 == 1 { -1 } else { 1 }).collect();
    let signed: Vec<LinearMatrix> = b
        .maps()
        .iter()
        .zip(&signs)
        .map(|(m, &s)| if s < 0 { m.scale(k, k.neg(1)) } else { m.clone() })
        .collect();
    let b = PeriodicComplex::new(signed)?;

    for i in 0..p {
        let rows = a.map(i).rows();
        let ca = product_f_coefficient(&cs.left.r0, a.map(i), a.map(i + 1), &cs.left.f)?;
        if ca.as_ref() != Some(&DenseMatrix::identity(k, rows)) {
            return Err(Error::CompositeMismatch {
                position: i,
                expected: "f*I",
                found: ca,
            });
        }
        let cb = product_f_coefficient(&cs.right.r0, b.map(i), b.map(i + 1), &cs.right.f)?;
        if cb.as_ref() != Some(&DenseMatrix::scalar(k, rows, k.neg(1))) {
            return Err(Error::CompositeMismatch {
                position: i,
                expected: "-g*I",
                found: cb,
            });
        }
    }
    Ok(Assembled {
        complex: cs.plain_sum(&a, &b)?,
        signs,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GorensteinCrosscheck {
    pub gor_r: bool,
    pub gor_r0: bool,
    pub gor_s0: bool,
    pub gor_r1: bool,
    pub gor_s1: bool,
    /// `R` is Gorenstein exactly when `R_0` and `S_0` are.
    pub consistent: bool,
}

pub fn gorenstein_crosscheck(cs: &ConnectedSum) -> GorensteinCrosscheck {
    let gor_r = cs.r.is_gorenstein();
    let gor_r0 = cs.left.r0.is_gorenstein();
    let gor_s0 = cs.right.r0.is_gorenstein();
    GorensteinCrosscheck {
        gor_r,
        gor_r0,
        gor_s0,
        gor_r1: cs.left.r1.is_gorenstein(),
        gor_s1: cs.right.r1.is_gorenstein(),
        consistent: gor_r == (gor_r0 && gor_s0),
    }
}

/// Exactness at every position of one period (not the dual); a sequence
/// that is not a complex counts as not exact.
pub fn exact_everywhere(alg: &ShortAlgebra, c: &PeriodicComplex) -> Result<bool> {
    if !c.is_complex(alg)? {
        return Ok(false);
    }
    for i in 0..c.period() {
        if !c.exactness_at(alg, i)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssemblyCheck {
    pub lifting_left: bool,
    pub lifting_right: bool,
    pub hypothesis_holds: bool,
    pub left_is_complex: bool,
    pub right_is_complex: bool,
    pub left_exact: bool,
    pub right_exact: bool,
    /// "normalized" when the factors were brought to composites `f I`,
    /// `-g I` and assembled; "plain" for the unchecked sum.
    pub assembly: &'static str,
    pub assembled_is_complex: bool,
    pub assembled_exact: bool,
    /// Whether assembled exactness matches exactness of both factors; only
    /// asserted when the hypothesis holds.
    pub biconditional: Option<bool>,
}

impl AssemblyCheck {
    /// True unless the hypothesis holds and the biconditional fails.
    pub fn consistent(&self) -> bool {
        self.biconditional != Some(false)
    }
}

fn normalized(pair: &LiftPair, c: &PeriodicComplex) -> Result<PeriodicComplex> {
    match normalize(pair, c, DEFAULT_WINDOW.max(4 * c.period() + 1))? {
        Normalized::Periodic(p) => Ok(p),
        Normalized::Window(_) => Err(Error::Precondition(
            "normalization did not close up into a periodic complex".into(),
        )),
    }
}

/// Compare exactness of the assembled complex with exactness of the two
/// factor complexes. Under the lifting condition on both sides the factors
/// are normalized and assembled with alternating signs and the two verdicts
/// must agree; otherwise the plain sum is examined and only recorded.
pub fn assembly_crosscheck(
    cs: &ConnectedSum,
    a: &PeriodicComplex,
    b: &PeriodicComplex,
) -> Result<AssemblyCheck> {
    let lifting_left = lifting_condition(&cs.left, a)?;
    let lifting_right = lifting_condition(&cs.right, b)?;
    let hypothesis_holds = lifting_left && lifting_right;
    let left_is_complex = a.is_complex(&cs.left.r1)?;
    let right_is_complex = b.is_complex(&cs.right.r1)?;
    let left_exact = exact_everywhere(&cs.left.r1, a)?;
    let right_exact = exact_everywhere(&cs.right.r1, b)?;
    let (assembly, assembled) = if hypothesis_holds && left_is_complex && right_is_complex {
        let (na, nb) = (normalized(&cs.left, a)?, normalized(&cs.right, b)?);
        let (na, nb) = align(&na, &nb)?;
        ("normalized", assemble(cs, &na, &nb, true)?.complex)
    } else {
        ("plain", cs.plain_sum(a, b)?)
    };
    let assembled_is_complex = assembled.is_complex(&cs.r)?;
    let assembled_exact = exact_everywhere(&cs.r, &assembled)?;
    let biconditional =
        hypothesis_holds.then_some(assembled_exact == (left_exact && right_exact));
    Ok(AssemblyCheck {
        lifting_left,
        lifting_right,
        hypothesis_holds,
        left_is_complex,
        right_is_complex,
        left_exact,
        right_exact,
        assembly,
        assembled_is_complex,
        assembled_exact,
        biconditional,
    })
}

/// For a totally acyclic complex over a non-Gorenstein `R`, the lifting
/// condition on both split factors. `None` when the premise does not hold.
pub fn lifting_condition_of_split(cs: &ConnectedSum, c: &PeriodicComplex) -> Result<Option<(bool, bool)>> {
    if cs.r.is_gorenstein() || !c.is_totally_acyclic(&cs.r)? {
        return Ok(None);
    }
    let (a, b) = cs.split_complex(c)?;
    Ok(Some((lifting_condition(&cs.left, &a)?, lifting_condition(&cs.right, &b)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use std::collections::HashMap;

    fn sum(a: &str, b: &str) -> ConnectedSum {
        build_connected_sum(&fixtures::ring(a).unwrap(), &fixtures::ring(b).unwrap()).unwrap()
    }

    fn same_span(p: &Presentation, q: &Presentation) -> bool {
        let a = p.quadric_matrix(|_| true);
        let b = q.quadric_matrix(|_| true);
        a.rank() == b.rank() && a.rank() == a.vstack(&b).rank()
    }

    #[test]
    fn exnew_sum_presentation() {
        let cs = sum("exnew_r1.ring", "exnew_s1.ring");
        assert!(same_span(&cs.presentation, &fixtures::ring("exnew_r.ring").unwrap()));
        assert_eq!((cs.r.n(), cs.r.d()), (6, 5));
        assert!(cs.invariants().all());
    }

    #[test]
    fn ex1_dimensions() {
        let cs = sum("ex1_r1.ring", "ex1_s1.ring");
        assert_eq!((cs.r.n(), cs.r.d()), (10, 9));
        assert!(same_span(&cs.presentation, &fixtures::ring("ex1_r.ring").unwrap()));
        assert_eq!(cs.presentation, fixtures::ring("ex1_r.ring").unwrap());
    }

    #[test]
    fn counterexample() {
        let g = fixtures::ring("gorenstein_pair.ring").unwrap();
        let rename: HashMap<String, String> = [("x1", "x2"), ("y1", "y2"), ("z1", "z2")]
            .into_iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        let cs = build_connected_sum(&g, &g.renamed(&rename).unwrap()).unwrap();
        assert_eq!((cs.r.n(), cs.r.d()), (6, 3));
        let check = gorenstein_crosscheck(&cs);
        assert!(check.gor_r1 && check.gor_s1);
        assert!(!check.gor_r && !check.gor_r0 && !check.gor_s0);
        assert!(check.consistent);
        assert!(same_span(&cs.presentation, &fixtures::ring("counterex_r.ring").unwrap()));
    }

    #[test]
    fn errors() {
        let p = fixtures::ring("exnew_r1.ring").unwrap();
        assert!(matches!(build_connected_sum(&p, &p), Err(Error::NameCollision(_))));
        let plain = p.with_distinguished(None).unwrap();
        let q = fixtures::ring("exnew_s1.ring").unwrap();
        assert!(matches!(build_connected_sum(&plain, &q), Err(Error::MissingDistinguished(_))));
    }

    #[test]
    fn exnew_assembly() {
        let cs = sum("exnew_r1.ring", "exnew_s1.ring");
        let (_, z1) = fixtures::complex("exnew_z1.cx").unwrap();
        let (_, z2) = fixtures::complex("exnew_z2.cx").unwrap();
        let out = assemble(&cs, &z1, &z2, true).unwrap();
        assert_eq!(out.signs, vec![1, -1]);
        let (_, expected) = fixtures::complex("exnew_sum.cx").unwrap();
        assert_eq!(out.complex, expected);
        assert!(out.complex.is_totally_acyclic(&cs.r).unwrap());
        let (a, b) = cs.split_complex(&out.complex).unwrap();
        assert_eq!(a, z1);
        assert_eq!(b.map(1), &z2.map(1).scale(cs.r.field(), cs.r.field().neg(1)));
        match assemble(&cs, &z1, &z2, false) {
            Err(Error::CompositeMismatch { expected: "-g*I", found, .. }) => {
                assert_eq!(found, Some(DenseMatrix::identity(cs.r.field(), 1)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn finalex_assembly() {
        let cs = sum("ex1_r1.ring", "ex1_s1.ring");
        let (_, x1) = fixtures::complex("finalex_r1.cx").unwrap();
        let (_, x2) = fixtures::complex("finalex_s1.cx").unwrap();
        let out = assemble(&cs, &x1, &x2, true).unwrap();
        let (_, expected) = fixtures::complex("finalex.cx").unwrap();
        assert_eq!(out.complex, expected);
        assert!(out.complex.is_totally_acyclic(&cs.r).unwrap());
        assert!(out.complex.dual().is_totally_acyclic(&cs.r).unwrap());
        assert_eq!(lifting_condition_of_split(&cs, &out.complex).unwrap(), Some((true, true)));
    }

    #[test]
    fn assembly_crosscheck_examples() {
        let cs = sum("exnew_r1.ring", "exnew_s1.ring");
        let (_, z1) = fixtures::complex("exnew_z1.cx").unwrap();
        let (_, z2) = fixtures::complex("exnew_z2.cx").unwrap();
        let m = assembly_crosscheck(&cs, &z1, &z2).unwrap();
        assert!(m.hypothesis_holds && m.left_exact && m.right_exact && m.assembled_exact);
        assert_eq!(m.biconditional, Some(true));

        let cs = sum("ex1_r1.ring", "ex1_s1.ring");
        let (_, l1) = fixtures::complex("ex1_l1.cx").unwrap();
        let (_, l2) = fixtures::complex("ex1_l2.cx").unwrap();
        let m = assembly_crosscheck(&cs, &l1, &l2).unwrap();
        assert!(!m.hypothesis_holds);
        assert!(m.left_exact && m.right_exact);
        assert!(m.assembled_is_complex && !m.assembled_exact);
        assert_eq!(m.biconditional, None);
        assert!(m.consistent());
    }

    #[test]
    fn alignment_pads_rank_and_period() {
        let (_, z1) = fixtures::complex("exnew_z1.cx").unwrap();
        let (_, x1) = fixtures::complex("finalex_r1.cx").unwrap();
        let single = PeriodicComplex::new(vec![z1.map(0).clone()]).unwrap();
        let (a, b) = align(&single, &x1).unwrap();
        assert_eq!((a.period(), a.map(0).rows()), (2, 2));
        assert_eq!(b, x1);
    }
}

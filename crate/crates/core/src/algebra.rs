//! Short graded algebras `k + R_1 + R_2` with cube of the maximal ideal zero.
//!
//! The model is the degree <= 2 truncation of `k[x_1..x_n] / (quadrics)`.
//! Degree-2 coordinates are taken with respect to the monomials that are not
//! pivots of the reduced quadric matrix, in lex order on `(i, j)`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::io::ring::{quadratic_index, quadratic_monomials, Presentation, Quadric};
use crate::linalg::DenseMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortAlgebra {
    field: PrimeField,
    n: usize,
    d: usize,
    basis_monomials: Vec<(usize, usize)>,
    /// Coordinates of every `x_i x_j` (i <= j, lex order), each of length d.
    reduction: Vec<Vec<u32>>,
    presentation: Arc<Presentation>,
}

/// Element `c0 + v1 + v2` split by degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    pub c0: u32,
    pub v1: Vec<u32>,
    pub v2: Vec<u32>,
}

impl ShortAlgebra {
    pub fn build(presentation: &Presentation) -> ShortAlgebra {
        let field = presentation.field();
        let n = presentation.n();
        let monomials = quadratic_monomials(n);
        let (rref, pivots) = presentation.quadric_matrix(|_| true).rref();
        let free: Vec<usize> = (0..monomials.len()).filter(|c| !pivots.contains(c)).collect();
        let d = free.len();
        let mut reduction = vec![vec![0u32; d]; monomials.len()];
        for (t, &c) in free.iter().enumerate() {
            reduction[c][t] = 1;
        }
        // a pivot monomial equals minus the free part of its row
        for (row, &pc) in pivots.iter().enumerate() {
            for (t, &c) in free.iter().enumerate() {
                reduction[pc][t] = field.neg(rref.get(row, c));
            }
        }
        ShortAlgebra {
            field,
            n,
            d,
            basis_monomials: free.iter().map(|&c| monomials[c]).collect(),
            reduction,
            presentation: Arc::new(presentation.clone()),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Dimension of the degree-1 component.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension of the degree-2 component.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn basis_monomials(&self) -> &[(usize, usize)] {
        &self.basis_monomials
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn variables(&self) -> &[String] {
        self.presentation.variables()
    }

    /// Degree-2 coordinates of `x_i x_j`.
    #[inline]
    pub fn reduce_monomial(&self, i: usize, j: usize) -> &[u32] {
        &self.reduction[quadratic_index(self.n, i, j)]
    }

    /// Degree-2 coordinates of a quadric polynomial.
    pub fn reduce_quadric(&self, q: &Quadric) -> Vec<u32> {
        let k = self.field;
        let mut out = vec![0; self.d];
        for ((i, j), c) in q.terms() {
            let c = k.from_i64(c);
            for (o, &r) in out.iter_mut().zip(self.reduce_monomial(i, j)) {
                *o = k.mul_add(*o, c, r);
            }
        }
        out
    }

    /// Bilinear degree-1 x degree-1 -> degree-2 product.
    pub fn product_linear(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let k = self.field;
        let mut out = vec![0; self.d];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                let c = k.mul(ai, bj);
                for (o, &r) in out.iter_mut().zip(self.reduce_monomial(i, j)) {
                    *o = k.mul_add(*o, c, r);
                }
            }
        }
        out
    }

    /// Accumulate `coef * a * b` into `out` without allocating.
    #[inline]
    pub(crate) fn add_product_linear(&self, out: &mut [u32], coef: u32, a: &[u32], b: &[u32]) {
        let k = self.field;
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            let cai = k.mul(coef, ai);
            for (j, &bj) in b.iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                let c = k.mul(cai, bj);
                for (o, &r) in out.iter_mut().zip(self.reduce_monomial(i, j)) {
                    *o = k.mul_add(*o, c, r);
                }
            }
        }
    }

    /// The d x n matrix of multiplication by the linear form `a`,
    /// degree 1 -> degree 2.
    pub fn multiplication_matrix(&self, a: &[u32]) -> DenseMatrix {
        let k = self.field;
        let mut m = DenseMatrix::zeros(k, self.d, self.n);
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for v in 0..self.n {
                for (t, &r) in self.reduce_monomial(i, v).iter().enumerate() {
                    if r != 0 {
                        m.set(t, v, k.mul_add(m.get(t, v), ai, r));
                    }
                }
            }
        }
        m
    }

    pub fn zero(&self) -> Element {
        Element {
            c0: 0,
            v1: vec![0; self.n],
            v2: vec![0; self.d],
        }
    }

    pub fn one(&self) -> Element {
        Element {
            c0: 1,
            ..self.zero()
        }
    }

    pub fn variable(&self, i: usize) -> Element {
        let mut e = self.zero();
        e.v1[i] = 1;
        e
    }

    pub fn linear(&self, v1: Vec<u32>) -> Element {
        assert_eq!(v1.len(), self.n);
        Element {
            c0: 0,
            v1,
            v2: vec![0; self.d],
        }
    }

    pub fn quadric_element(&self, q: &Quadric) -> Element {
        Element {
            c0: 0,
            v1: vec![0; self.n],
            v2: self.reduce_quadric(q),
        }
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        let k = self.field;
        Element {
            c0: k.add(a.c0, b.c0),
            v1: a.v1.iter().zip(&b.v1).map(|(&x, &y)| k.add(x, y)).collect(),
            v2: a.v2.iter().zip(&b.v2).map(|(&x, &y)| k.add(x, y)).collect(),
        }
    }

    pub fn scale(&self, s: u32, a: &Element) -> Element {
        let k = self.field;
        Element {
            c0: k.mul(s, a.c0),
            v1: a.v1.iter().map(|&x| k.mul(s, x)).collect(),
            v2: a.v2.iter().map(|&x| k.mul(s, x)).collect(),
        }
    }

    pub fn neg(&self, a: &Element) -> Element {
        self.scale(self.field.neg(1), a)
    }

    /// Product in the truncated algebra; degree >= 3 contributions vanish.
    pub fn multiply(&self, a: &Element, b: &Element) -> Element {
        let k = self.field;
        let mut v2: Vec<u32> = (0..self.d)
            .map(|t| k.add(k.mul(a.c0, b.v2[t]), k.mul(b.c0, a.v2[t])))
            .collect();
        self.add_product_linear(&mut v2, 1, &a.v1, &b.v1);
        Element {
            c0: k.mul(a.c0, b.c0),
            v1: (0..self.n)
                .map(|i| k.add(k.mul(a.c0, b.v1[i]), k.mul(b.c0, a.v1[i])))
                .collect(),
            v2,
        }
    }

    /// Whether the honest quotient has zero cubic component, i.e. every
    /// degree-3 monomial lies in the span of {variable x quadric}.
    pub fn verify_truncation(presentation: &Presentation) -> bool {
        let field = presentation.field();
        let n = presentation.n();
        let cubics = cubic_monomials(n);
        if cubics.is_empty() {
            return true;
        }
        let mut columns = Vec::new();
        for q in presentation.quadrics() {
            for v in 0..n {
                let mut col = vec![0u32; cubics.len()];
                for ((i, j), c) in q.terms() {
                    let idx = cubic_index(&cubics, i, j, v);
                    col[idx] = field.add(col[idx], field.from_i64(c));
                }
                columns.push(col);
            }
        }
        DenseMatrix::from_columns(field, cubics.len(), &columns).rank() == cubics.len()
    }

    /// The (n*d) x n matrix sending a linear form v to (v x_1, ..., v x_n).
    fn annihilator_matrix(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.field, self.n * self.d, self.n);
        for v in 0..self.n {
            for u in 0..self.n {
                for (t, &r) in self.reduce_monomial(u, v).iter().enumerate() {
                    m.set(v * self.d + t, u, r);
                }
            }
        }
        m
    }

    pub fn socle_dimension(&self) -> usize {
        if self.n == 0 {
            return 1;
        }
        self.d + self.annihilator_matrix().nullity()
    }

    pub fn is_gorenstein(&self) -> bool {
        self.socle_dimension() == 1
    }

    pub fn yoshino_check(&self) -> YoshinoCheck {
        YoshinoCheck {
            dim1: self.n,
            dim2: self.d,
            quadric_defined: true,
            dim_condition: self.n >= 1 && self.d + 1 == self.n,
            koszul: "not checked",
        }
    }

    pub fn is_linear(&self, e: &Element) -> bool {
        e.c0 == 0 && e.v2.iter().all(|&x| x == 0)
    }

    /// Format a linear form with the algebra's variable names.
    pub fn format_linear(&self, v: &[u32]) -> String {
        format_linear(self.field, self.variables(), v)
    }
}

pub fn format_linear(field: PrimeField, names: &[String], v: &[u32]) -> String {
    let mut s = String::new();
    for (i, &c) in v.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let c = field.to_signed(c);
        let mag = c.unsigned_abs();
        if s.is_empty() {
            if c < 0 {
                s.push('-');
            }
        } else {
            s.push_str(if c < 0 { " - " } else { " + " });
        }
        if mag != 1 {
            s.push_str(&format!("{mag}*"));
        }
        s.push_str(&names[i]);
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

/// Necessary conditions for non-G-regularity when cube of the maximal
/// ideal is zero. Koszulness has no finite certificate here and is reported
/// as unchecked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct YoshinoCheck {
    pub dim1: usize,
    pub dim2: usize,
    pub quadric_defined: bool,
    pub dim_condition: bool,
    pub koszul: &'static str,
}

fn cubic_monomials(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            for l in j..n {
                out.push((i, j, l));
            }
        }
    }
    out
}

fn cubic_index(cubics: &[(usize, usize, usize)], a: usize, b: usize, c: usize) -> usize {
    let mut key = [a, b, c];
    key.sort_unstable();
    cubics
        .binary_search(&(key[0], key[1], key[2]))
        .expect("cubic monomial present")
}

/// Split a presentation with a distinguished quadric `f` into the pair
/// `R_1 = P/(I + f)` and `R_0 = P/(I + m f)`, sharing degree-1 coordinates.
#[derive(Clone, Debug)]
pub struct LiftPair {
    pub r1: ShortAlgebra,
    pub r0: ShortAlgebra,
    /// `f` as a degree-2 element of `R_0`; nonzero.
    pub f: Element,
}

impl LiftPair {
    pub fn new(presentation: &Presentation) -> Result<LiftPair> {
        let f = presentation
            .distinguished_quadric()
            .ok_or_else(|| Error::MissingDistinguished(presentation.variables().join(",")))?;
        let r1 = ShortAlgebra::build(presentation);
        let r0 = ShortAlgebra::build(&presentation.without_distinguished());
        let f = r0.quadric_element(f);
        if f.v2.iter().all(|&x| x == 0) {
            return Err(Error::DistinguishedInSpan);
        }
        Ok(LiftPair { r1, r0, f })
    }

    pub fn field(&self) -> PrimeField {
        self.r1.field()
    }

    /// The truncated model of `R_0` is faithful iff the cubic span of the
    /// full quadric list (others plus `m f`) is everything, which is the
    /// same certificate as for `R_1`.
    pub fn verify_truncation(&self) -> bool {
        ShortAlgebra::verify_truncation(self.r1.presentation())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::ring::parse_ring_file;
    use proptest::prelude::*;

    fn ring(text: &str) -> ShortAlgebra {
        ShortAlgebra::build(&parse_ring_file(text, PrimeField::default()).unwrap())
    }

    const EXNEW_R1: &str = "[vars]\nx1,y1,z1\n[quadrics]\nx1^2, y1^2, z1^2, x1*y1\n[distinguished]\nz1^2\n";
    const GOR: &str = "[vars]\nx1,y1,z1\n[quadrics]\nx1^2, y1^2, z1^2 - x1*y1, x1*z1, y1*z1\n";

    #[test]
    fn exnew_products() {
        let r1 = ring(EXNEW_R1);
        assert_eq!((r1.n(), r1.d()), (3, 2));
        let z = r1.variable(2);
        assert_eq!(r1.multiply(&z, &z), r1.zero());

        let pair = LiftPair::new(&parse_ring_file(EXNEW_R1, PrimeField::default()).unwrap()).unwrap();
        let z0 = pair.r0.variable(2);
        let zz = pair.r0.multiply(&z0, &z0);
        assert_eq!(zz, pair.f);
        assert_ne!(zz, pair.r0.zero());
        assert!(pair.verify_truncation());
    }

    #[test]
    fn socle_and_gorenstein() {
        let g = ring(GOR);
        assert_eq!(g.socle_dimension(), 1);
        assert!(g.is_gorenstein());
        let r1 = ring(EXNEW_R1);
        // spanned by x1 z1, y1 z1
        assert_eq!(r1.socle_dimension(), 2);
        assert!(!r1.is_gorenstein());
        let k = ring("[vars]\n[quadrics]\n");
        assert_eq!((k.n(), k.d()), (0, 0));
        assert_eq!(k.socle_dimension(), 1);
    }

    #[test]
    fn socle_matches_enumeration_oracle() {
        // oracle: a linear form is in the socle iff its product with every
        // variable is zero; enumerate all of F_3^3
        let text = format!("[field]\np = 3\n{EXNEW_R1}");
        let a = ring(&text);
        let mut count = 0;
        for code in 0..27u32 {
            let v = vec![code % 3, (code / 3) % 3, code / 9];
            let e = a.linear(v);
            if (0..3).all(|i| a.multiply(&e, &a.variable(i)) == a.zero()) {
                count += 1;
            }
        }
        // 3^k elements form a subspace of dimension k
        let k = (count as f64).log(3.0).round() as usize;
        assert_eq!(a.socle_dimension(), a.d() + k);
    }

    #[test]
    fn truncation_certificates() {
        let free = parse_ring_file("[vars]\nx1,x2\n[quadrics]\nx1^2\n", PrimeField::default()).unwrap();
        assert!(!ShortAlgebra::verify_truncation(&free));
        let one = parse_ring_file("[vars]\nx1\n[quadrics]\nx1^2\n", PrimeField::default()).unwrap();
        assert!(ShortAlgebra::verify_truncation(&one));
        let gor = parse_ring_file(GOR, PrimeField::default()).unwrap();
        assert!(ShortAlgebra::verify_truncation(&gor));
    }

    #[test]
    fn yoshino() {
        let r1 = ring(EXNEW_R1);
        let y = r1.yoshino_check();
        assert!(y.dim_condition);
        assert_eq!(y.koszul, "not checked");
        assert!(!ring(GOR).yoshino_check().dim_condition);
    }

    #[test]
    fn format_linear_forms() {
        let r1 = ring(EXNEW_R1);
        let k = r1.field();
        assert_eq!(r1.format_linear(&[1, 0, k.neg(1)]), "x1 - z1");
        assert_eq!(r1.format_linear(&[0, 2, 0]), "2*y1");
        assert_eq!(r1.format_linear(&[0, 0, 0]), "0");
    }

    /// Random presentation over F_7 in up to 4 variables.
    fn arb_algebra() -> impl Strategy<Value = ShortAlgebra> {
        (1usize..5).prop_flat_map(|n| {
            let nm = n * (n + 1) / 2;
            prop::collection::vec(prop::collection::vec(0i64..7, nm), 0..nm + 1).prop_map(move |rows| {
                let k = PrimeField::new(7).unwrap();
                let mons = quadratic_monomials(n);
                let qs = rows
                    .into_iter()
                    .map(|row| {
                        let mut q = Quadric::new();
                        for (c, &(i, j)) in row.iter().zip(&mons) {
                            q.add_term(i, j, *c);
                        }
                        q
                    })
                    .filter(|q| !q.is_zero_mod(k))
                    .collect();
                let vars = (0..n).map(|i| format!("v{i}")).collect();
                ShortAlgebra::build(&Presentation::new(k, vars, qs, None).unwrap())
            })
        })
    }

    fn arb_element(a: &ShortAlgebra, seed: u64, unit: bool) -> Element {
        let p = a.field().p() as u64;
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 33) % p) as u32
        };
        Element {
            c0: if unit { next() } else { 0 },
            v1: (0..a.n()).map(|_| next()).collect(),
            v2: (0..a.d()).map(|_| next()).collect(),
        }
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_algebra(), s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
            let (x, y, z) = (arb_element(&a, s1, true), arb_element(&a, s2, true), arb_element(&a, s3, true));
            prop_assert_eq!(a.multiply(&x, &y), a.multiply(&y, &x));
            prop_assert_eq!(
                a.multiply(&a.multiply(&x, &y), &z),
                a.multiply(&x, &a.multiply(&y, &z))
            );
            prop_assert_eq!(a.multiply(&a.one(), &x), x.clone());
            let (mx, my, mz) = (arb_element(&a, s1, false), arb_element(&a, s2, false), arb_element(&a, s3, false));
            prop_assert_eq!(a.multiply(&a.multiply(&mx, &my), &mz), a.zero());
        }

        #[test]
        fn quadrics_vanish(a in arb_algebra()) {
            let n = a.n();
            prop_assert!(a.d() <= n * (n + 1) / 2);
            for q in a.presentation().quadrics() {
                let mut acc = a.zero();
                for ((i, j), c) in q.terms() {
                    let prod = a.multiply(&a.variable(i), &a.variable(j));
                    acc = a.add(&acc, &a.scale(a.field().from_i64(c), &prod));
                }
                prop_assert_eq!(acc, a.zero());
            }
        }
    }
}

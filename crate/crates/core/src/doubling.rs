//! Doubling a period-2 complex `X, W` over `R_1` into a complex of rank
//! `2^k b` whose lifted composites contain `(f)`, using a decomposition
//! `f = y_1 z_1 + ... + y_k z_k` and a scalar `alpha`.
//!
//! With `X W = W X = diag(0, .., 0, f, .., f)` (`v` zeros) after a change of
//! basis, and `Y_j`, `Z_j` block diagonal with `2^(j-1)` copies of
//! `diag(y_j, .., y_j, 0, .., 0)` and `diag(z_j, ..)`:
//!
//! ```text
//! A_1 = [[X, aY_1], [-aZ_1, W]]        B_1 = [[W, -aY_1], [aZ_1, X]]
//! A_j+1 = [[A_j, aY_j+1], [-aZ_j+1, B_j]]   B_j+1 = [[B_j, -aY_j+1], [aZ_j+1, A_j]]
//! ```

use serde::Serialize;

use crate::algebra::LiftPair;
use crate::complex::{compose, lifting_condition, product_f_coefficient, LinearMatrix, PeriodicComplex};
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Linear forms `(y_i, z_i)` over `R_0` with `sum y_i z_i = f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SocleDecomposition {
    pairs: Vec<(Vec<u32>, Vec<u32>)>,
}

impl SocleDecomposition {
    pub fn new(lift: &LiftPair, pairs: Vec<(Vec<u32>, Vec<u32>)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Precondition("the decomposition of f needs at least one pair".into()));
        }
        let r0 = &lift.r0;
        let mut sum = vec![0u32; r0.d()];
        for (y, z) in &pairs {
            if y.len() != r0.n() || z.len() != r0.n() {
                return Err(Error::ShapeMismatch("decomposition forms have the wrong length".into()));
            }
            for (s, p) in sum.iter_mut().zip(r0.product_linear(y, z)) {
                *s = r0.field().add(*s, p);
            }
        }
        if sum != lift.f.v2 {
            return Err(Error::Precondition("the products y_i z_i do not sum to f".into()));
        }
        Ok(Self { pairs })
    }

    /// One pair `(c x_i, x_j)` per term `c x_i x_j` of the distinguished
    /// quadric.
    pub fn from_monomials(lift: &LiftPair) -> Result<Self> {
        let p = lift.r1.presentation();
        let f = p.distinguished_quadric().ok_or_else(|| Error::MissingDistinguished(p.variables().join(",")))?;
        let (k, n) = (p.field(), p.n());
        let pairs = f
            .terms()
            .filter(|&(_, c)| k.from_i64(c) != 0)
            .map(|((i, j), c)| {
                let mut y = vec![0u32; n];
                let mut z = vec![0u32; n];
                y[i] = k.from_i64(c);
                z[j] = 1;
                (y, z)
            })
            .collect();
        Self::new(lift, pairs)
    }

    pub fn pairs(&self) -> &[(Vec<u32>, Vec<u32>)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub x: LinearMatrix,
    pub w: LinearMatrix,
    /// Number of leading zero diagonal entries of the composite pattern.
    pub v: usize,
    /// The scalar absorbed into `w`.
    pub lambda: u32,
}

/// Conjugate `X, W` by a constant matrix and rescale `W` so that both lifted
/// composites are `f diag(0, .., 0, 1, .., 1)`. Supported when the common
/// coefficient matrix `M` is zero or a nonzero multiple of an idempotent.
pub fn normal_form(lift: &LiftPair, x: &LinearMatrix, w: &LinearMatrix) -> Result<NormalForm> {
    let k = lift.field();
    let b = x.rows();
    if (x.cols(), w.rows(), w.cols()) != (b, b, b) {
        return Err(Error::Precondition("X and W must be square of the same size".into()));
    }
    let m = product_f_coefficient(&lift.r0, x, w, &lift.f)?.ok_or(Error::NotScalarSpan { position: 0 })?;
    let n = product_f_coefficient(&lift.r0, w, x, &lift.f)?.ok_or(Error::NotScalarSpan { position: 1 })?;
    if m != n {
        return Err(Error::Precondition("the lifted composites XW and WX differ".into()));
    }
    if m.is_zero() {
        return Ok(NormalForm {
            x: x.clone(),
            w: w.clone(),
            v: b,
            lambda: 1,
        });
    }
    let m2 = m.mul(&m);
    let (r, c) = (0..b)
        .flat_map(|r| (0..b).map(move |c| (r, c)))
        .find(|&(r, c)| m.get(r, c) != 0)
        .expect("m is nonzero");
    let lambda = k.mul(m2.get(r, c), k.inv(m.get(r, c)).expect("nonzero"));
    if lambda == 0 || m2 != m.scale(lambda) {
        return Err(Error::NormalFormUnsupported(m));
    }
    let e = m.scale(k.inv(lambda).expect("nonzero"));
    let kernel = e.kernel_basis();
    let (_, pivots) = e.rref();
    let image: Vec<Vec<u32>> = pivots.iter().map(|&p| e.column(p)).collect();
    let columns: Vec<Vec<u32>> = kernel.columns().into_iter().chain(image).collect();
    let s = DenseMatrix::from_columns(k, b, &columns);
    let s_inv = s.inverse().ok_or_else(|| Error::NormalFormUnsupported(m.clone()))?;
    let inv_lambda = k.inv(lambda).expect("nonzero");
    Ok(NormalForm {
        x: x.left_mul(&s_inv).right_mul(&s),
        w: w.left_mul(&s_inv).right_mul(&s).scale(k, inv_lambda),
        v: kernel.cols(),
        lambda,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubledPair {
    pub a: LinearMatrix,
    pub b: LinearMatrix,
    pub alpha: u32,
    /// Zero-block size of the normal form; 0 means no doubling was needed.
    pub v: usize,
    /// Rank of the input complex.
    pub base_rank: usize,
    /// Number of doubling levels applied.
    pub levels: usize,
}

impl DoubledPair {
    pub fn complex(&self) -> PeriodicComplex {
        PeriodicComplex::new(vec![self.a.clone(), self.b.clone()]).expect("square maps of equal size")
    }
}

fn scaled_diagonal(n: usize, b: usize, v: usize, copies: usize, form: &[u32]) -> LinearMatrix {
    let zero = vec![0u32; n];
    let forms: Vec<Vec<u32>> = (0..copies)
        .flat_map(|_| (0..b).map(|i| if i < v { form.to_vec() } else { zero.clone() }))
        .collect();
    LinearMatrix::diagonal(n, &forms)
}

/// Check that `A_j B_j` and `B_j A_j` are block diagonal with blocks
/// `diag(a^2 s_j, .., a^2 s_j, f, .., f)`, `s_j = y_1 z_1 + .. + y_j z_j`.
fn check_level(
    lift: &LiftPair,
    a: &LinearMatrix,
    b: &LinearMatrix,
    level: usize,
    base: usize,
    v: usize,
    alpha_sq_s: &[u32],
) -> Result<()> {
    let size = a.rows();
    for (name, comp) in [("A B", compose(&lift.r0, a, b)?), ("B A", compose(&lift.r0, b, a)?)] {
        for r in 0..size {
            for c in 0..size {
                let e = comp.entry(r, c);
                if r != c {
                    if e.iter().any(|&x| x != 0) {
                        let msg = if r / base != c / base {
                            format!("{name} has a nonzero off-diagonal block at entry ({r}, {c})")
                        } else {
                            format!("{name} has a nonzero off-diagonal entry ({r}, {c}) in a diagonal block")
                        };
                        return Err(Error::ClaimViolation { level, message: msg });
                    }
                } else {
                    let want: &[u32] = if r % base < v { alpha_sq_s } else { &lift.f.v2 };
                    if e != want {
                        return Err(Error::ClaimViolation {
                            level,
                            message: format!("{name} has an unexpected diagonal entry at position {r}"),
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// The doubled pair for `X, W` (entries read in `R_0`), decomposition `dec`
/// and scalar `alpha`. When the normal form has no zero block the normal
/// form itself is returned.
pub fn build_doubled(
    lift: &LiftPair,
    x: &LinearMatrix,
    w: &LinearMatrix,
    dec: &SocleDecomposition,
    alpha: u32,
) -> Result<DoubledPair> {
    let k = lift.field();
    let nf = normal_form(lift, x, w)?;
    let base = x.rows();
    if nf.v == 0 {
        return Ok(DoubledPair {
            a: nf.x,
            b: nf.w,
            alpha,
            v: 0,
            base_rank: base,
            levels: 0,
        });
    }
    let n = lift.r0.n();
    let alpha_sq = k.mul(alpha, alpha);
    let neg_alpha = k.neg(alpha);
    let mut sum = vec![0u32; lift.r0.d()];
    let (mut a, mut b) = (nf.x, nf.w);
    for (j, (y, z)) in dec.pairs().iter().enumerate() {
        let copies = 1usize << j;
        let yj = scaled_diagonal(n, base, nf.v, copies, y);
        let zj = scaled_diagonal(n, base, nf.v, copies, z);
        let next_a = LinearMatrix::block(&a, &yj.scale(k, alpha), &zj.scale(k, neg_alpha), &b);
        let next_b = LinearMatrix::block(&b, &yj.scale(k, neg_alpha), &zj.scale(k, alpha), &a);
        a = next_a;
        b = next_b;
        for (s, p) in sum.iter_mut().zip(lift.r0.product_linear(y, z)) {
            *s = k.add(*s, p);
        }
        let scaled: Vec<u32> = sum.iter().map(|&s| k.mul(alpha_sq, s)).collect();
        check_level(lift, &a, &b, j + 1, base, nf.v, &scaled)?;
    }
    Ok(DoubledPair {
        a,
        b,
        alpha,
        v: nf.v,
        base_rank: base,
        levels: dec.len(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DoublingVerdict {
    /// Both lifted composites are `f diag(a^2, .., a^2, 1, .., 1)` per block
    /// and that diagonal is invertible.
    pub composite_pattern: bool,
    pub is_complex: bool,
    pub totally_acyclic: bool,
    pub lifting_condition: bool,
}

impl DoublingVerdict {
    pub fn all(&self) -> bool {
        self.composite_pattern && self.is_complex && self.totally_acyclic && self.lifting_condition
    }
}

pub fn verify_doubling(lift: &LiftPair, pair: &DoubledPair) -> Result<DoublingVerdict> {
    let k = lift.field();
    let size = pair.a.rows();
    let alpha_sq = k.mul(pair.alpha, pair.alpha);
    let diag: Vec<u32> = (0..size)
        .map(|i| if i % pair.base_rank < pair.v { alpha_sq } else { 1 })
        .collect();
    let pattern = DenseMatrix::diagonal(k, &diag);
    let ab = product_f_coefficient(&lift.r0, &pair.a, &pair.b, &lift.f)?;
    let ba = product_f_coefficient(&lift.r0, &pair.b, &pair.a, &lift.f)?;
    let composite_pattern =
        ab.as_ref() == Some(&pattern) && ba.as_ref() == Some(&pattern) && diag.iter().all(|&d| d != 0);
    let c = pair.complex();
    let is_complex = c.is_complex(&lift.r1)?;
    let totally_acyclic = is_complex && c.is_totally_acyclic(&lift.r1)?;
    let lifting_condition = lifting_condition(lift, &c)?;
    Ok(DoublingVerdict {
        composite_pattern,
        is_complex,
        totally_acyclic,
        lifting_condition,
    })
}

/// The first `alpha` in `1, 2, .., p - 1` for which every claim holds.
pub fn search_alpha(
    lift: &LiftPair,
    x: &LinearMatrix,
    w: &LinearMatrix,
    dec: &SocleDecomposition,
) -> Result<Option<(DoubledPair, DoublingVerdict)>> {
    for alpha in 1..lift.field().p() {
        let pair = build_doubled(lift, x, w, dec, alpha)?;
        let verdict = verify_doubling(lift, &pair)?;
        if verdict.all() {
            return Ok(Some((pair, verdict)));
        }
    }
    Ok(None)
}

//! Linear exact zero divisors: pairs of linear forms `(a, b)` with
//! `ann(a) = (b)` and `ann(b) = (a)`.
//!
//! In a short algebra with `d = n - 1` this is equivalent to `ab = 0` and
//! both multiplication maps `R_1 -> R_2` having a one-dimensional kernel:
//! the kernel of multiplication by `a` then is `k b`, and the rank `n - 1 = d`
//! makes `b R_1 = R_2`, so `(b) = k b + R_2` is all of `ann(a)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Element, ShortAlgebra};
use crate::complex::PeriodicComplex;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::io::ring::Presentation;

/// Refuse exhaustive searches with more than this many vectors `p^n`.
pub const EXHAUSTIVE_BUDGET: u128 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EzdPair {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
}

impl EzdPair {
    /// Both forms scaled to have leading coefficient 1.
    pub fn canonical(&self, field: PrimeField) -> EzdPair {
        EzdPair {
            a: canonical_form(field, &self.a),
            b: canonical_form(field, &self.b),
        }
    }

    pub fn describe(&self, alg: &ShortAlgebra) -> PairText {
        PairText {
            a: alg.format_linear(&self.a),
            b: alg.format_linear(&self.b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairText {
    pub a: String,
    pub b: String,
}

/// Scale a nonzero vector so that its first nonzero coordinate is 1.
pub fn canonical_form(field: PrimeField, v: &[u32]) -> Vec<u32> {
    match v.iter().find(|&&x| x != 0) {
        None => v.to_vec(),
        Some(&lead) => {
            let inv = field.inv(lead).expect("nonzero");
            v.iter().map(|&x| field.mul(x, inv)).collect()
        }
    }
}

/// Individual facts behind an EZD verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EzdDiagnostics {
    pub dim_condition: bool,
    pub product_zero: bool,
    pub ann_a_dimension: usize,
    pub ann_b_dimension: usize,
    pub ezd: bool,
}

pub fn ezd_diagnostics(alg: &ShortAlgebra, a: &[u32], b: &[u32]) -> Result<EzdDiagnostics> {
    for (name, v) in [("a", a), ("b", b)] {
        if v.len() != alg.n() {
            return Err(Error::ShapeMismatch(format!(
                "{name} has {} coordinates, algebra has {} variables",
                v.len(),
                alg.n()
            )));
        }
        if v.iter().all(|&x| x == 0) {
            return Err(Error::Precondition(format!("{name} must be nonzero")));
        }
    }
    let dim_condition = alg.d() + 1 == alg.n();
    let product_zero = alg.product_linear(a, b).iter().all(|&x| x == 0);
    let ann_a_dimension = alg.multiplication_matrix(a).nullity();
    let ann_b_dimension = alg.multiplication_matrix(b).nullity();
    Ok(EzdDiagnostics {
        dim_condition,
        product_zero,
        ann_a_dimension,
        ann_b_dimension,
        ezd: dim_condition && product_zero && ann_a_dimension == 1 && ann_b_dimension == 1,
    })
}

/// Whether the linear forms `a`, `b` are a pair of exact zero divisors.
pub fn verify_ezd(alg: &ShortAlgebra, a: &[u32], b: &[u32]) -> Result<bool> {
    Ok(ezd_diagnostics(alg, a, b)?.ezd)
}

/// [`verify_ezd`] on elements, rejecting non-linear ones.
pub fn verify_ezd_elements(alg: &ShortAlgebra, a: &Element, b: &Element) -> Result<bool> {
    for (name, e) in [("a", a), ("b", b)] {
        if !alg.is_linear(e) {
            return Err(Error::NotLinear(format!("{name} is not a linear form")));
        }
    }
    verify_ezd(alg, &a.v1, &b.v1)
}

/// The partner `b` of a candidate `a`, if `a` is one half of a pair.
fn partner(alg: &ShortAlgebra, a: &[u32]) -> Option<Vec<u32>> {
    let kernel = alg.multiplication_matrix(a).kernel_basis();
    if kernel.cols() != 1 {
        return None;
    }
    let b = canonical_form(alg.field(), &kernel.column(0));
    (alg.multiplication_matrix(&b).nullity() == 1).then_some(b)
}

/// Number of vectors `p^n`, saturating.
pub fn space_size(p: u32, n: usize) -> u128 {
    (0..n).fold(1u128, |acc, _| acc.saturating_mul(p as u128))
}

/// Number of projective representatives `(p^n - 1) / (p - 1)`.
pub fn candidate_count(p: u32, n: usize) -> u128 {
    (space_size(p, n) - 1) / (p as u128 - 1)
}

/// The `t`-th projective representative in canonical order: leading 1 at
/// the earliest position first, then the tail as a base-p number.
fn candidate(p: u32, n: usize, mut t: u128) -> Vec<u32> {
    let mut v = vec![0u32; n];
    for lead in 0..n {
        let tail = space_size(p, n - lead - 1);
        if t < tail {
            v[lead] = 1;
            for slot in v[lead + 1..].iter_mut().rev() {
                *slot = (t % p as u128) as u32;
                t /= p as u128;
            }
            return v;
        }
        t -= tail;
    }
    unreachable!("candidate index out of range")
}

/// Every linear EZD pair `(a, b)` with `a` and `b` canonical, ordered by `a`.
/// Refuses when `p^n` exceeds [`EXHAUSTIVE_BUDGET`] unless `force` is set.
pub fn search_ezd_exhaustive(alg: &ShortAlgebra, force: bool) -> Result<Vec<EzdPair>> {
    let p = alg.field().p();
    let n = alg.n();
    let size = space_size(p, n);
    if size > EXHAUSTIVE_BUDGET && !force {
        return Err(Error::BudgetExceeded {
            candidates: size,
            budget: EXHAUSTIVE_BUDGET,
        });
    }
    if alg.d() + 1 != n {
        return Ok(Vec::new());
    }
    let count = candidate_count(p, n);
    let count = u64::try_from(count).map_err(|_| Error::BudgetExceeded {
        candidates: size,
        budget: EXHAUSTIVE_BUDGET,
    })?;
    Ok((0..count)
        .into_par_iter()
        .filter_map(|t| {
            let a = candidate(p, n, t as u128);
            partner(alg, &a).map(|b| EzdPair { a, b })
        })
        .collect())
}

/// Sample `trials` uniform linear forms and return the first that is half of
/// an EZD pair. Deterministic for a given seed.
pub fn search_ezd_random(alg: &ShortAlgebra, trials: u64, seed: u64) -> Result<Option<EzdPair>> {
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    if alg.d() + 1 != alg.n() {
        return Ok(None);
    }
    let p = alg.field().p();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let a: Vec<u32> = (0..alg.n()).map(|_| rng.gen_range(0..p)).collect();
        if a.iter().all(|&x| x == 0) {
            continue;
        }
        let a = canonical_form(alg.field(), &a);
        if let Some(b) = partner(alg, &a) {
            return Ok(Some(EzdPair { a, b }));
        }
    }
    Ok(None)
}

/// The period-2 complex `... -> R -a-> R -b-> R -a-> ...` of a verified pair.
pub fn ezd_complex(alg: &ShortAlgebra, a: &[u32], b: &[u32]) -> Result<PeriodicComplex> {
    if !verify_ezd(alg, a, b)? {
        return Err(Error::Precondition("the pair is not a pair of exact zero divisors".into()));
    }
    Ok(PeriodicComplex::pair(a, b))
}

/// The algebra of `presentation` over a proxy prime, with any distinguished
/// marker dropped.
pub fn proxy_algebra(presentation: &Presentation, prime: u32) -> Result<ShortAlgebra> {
    let field = PrimeField::new(prime)?;
    let p = presentation.with_distinguished(None)?.with_field(field)?;
    Ok(ShortAlgebra::build(&p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::ring::parse_ring_file;
    use proptest::prelude::*;

    const EXNEW_R: &str = "[vars]\nx1,y1,z1,x2,y2,z2\n[quadrics]\n\
        x1^2, y1^2, x1*y1, x2^2, y2^2, x2*y2,\n\
        x1*x2, x1*y2, x1*z2, y1*x2, y1*y2, y1*z2, z1*x2, z1*y2, z1*z2,\n\
        z1^2 - z2^2\n";

    fn alg(text: &str, p: u32) -> ShortAlgebra {
        ShortAlgebra::build(&parse_ring_file(text, PrimeField::new(p).unwrap()).unwrap())
    }

    #[test]
    fn candidate_enumeration_is_projective() {
        let (p, n) = (3, 3);
        let all: Vec<_> = (0..candidate_count(p, n)).map(|t| candidate(p, n, t)).collect();
        assert_eq!(all.len(), 13);
        assert_eq!(all[0], vec![1, 0, 0]);
        assert_eq!(all[12], vec![0, 0, 1]);
        let k = PrimeField::new(p).unwrap();
        let mut seen = std::collections::HashSet::new();
        for v in &all {
            assert_eq!(&canonical_form(k, v), v);
            assert!(seen.insert(v.clone()));
        }
    }

    #[test]
    fn exnew_pair() {
        let a = alg(EXNEW_R, 32003);
        let k = a.field();
        let z = |s: i64| {
            let mut v = vec![0; 6];
            v[2] = 1;
            v[5] = k.from_i64(s);
            v
        };
        assert!(verify_ezd(&a, &z(1), &z(-1)).unwrap());
        assert!(!verify_ezd(&a, &z(1), &z(1)).unwrap());
        let c = ezd_complex(&a, &z(1), &z(-1)).unwrap();
        assert!(c.is_totally_acyclic(&a).unwrap());
    }

    #[test]
    fn exnew_exhaustive_and_random_agree() {
        let a = alg(EXNEW_R, 3);
        let pairs = search_ezd_exhaustive(&a, false).unwrap();
        let target = EzdPair {
            a: vec![0, 0, 1, 0, 0, 1],
            b: vec![0, 0, 1, 0, 0, 2],
        };
        assert!(pairs.contains(&target));
        for pair in &pairs {
            assert!(verify_ezd(&a, &pair.a, &pair.b).unwrap());
        }
        let found = search_ezd_random(&a, 1000, 7).unwrap().expect("a pair");
        assert!(pairs.contains(&found.canonical(a.field())));
    }

    #[test]
    fn single_variable_square_zero() {
        let a = alg("[vars]\nx\n[quadrics]\nx^2\n", 5);
        assert_eq!((a.n(), a.d()), (1, 0));
        let pairs = search_ezd_exhaustive(&a, false).unwrap();
        assert_eq!(pairs, vec![EzdPair { a: vec![1], b: vec![1] }]);
        assert!(ezd_complex(&a, &[1], &[1]).unwrap().is_totally_acyclic(&a).unwrap());
    }

    #[test]
    fn guards() {
        let a = alg(EXNEW_R, 32003);
        assert!(matches!(search_ezd_exhaustive(&a, false), Err(Error::BudgetExceeded { .. })));
        assert!(search_ezd_random(&a, 0, 1).is_err());
        assert!(verify_ezd(&a, &[0; 6], &[1, 0, 0, 0, 0, 0]).is_err());
        let not_linear = a.one();
        assert!(matches!(
            verify_ezd_elements(&a, &not_linear, &a.variable(0)),
            Err(Error::NotLinear(_))
        ));
    }

    proptest! {
        #[test]
        fn symmetric_and_scale_invariant(
            a in proptest::collection::vec(0u32..3, 6),
            b in proptest::collection::vec(0u32..3, 6),
            l in 1u32..3,
            m in 1u32..3,
        ) {
            prop_assume!(a.iter().any(|&x| x != 0) && b.iter().any(|&x| x != 0));
            let alg = alg(EXNEW_R, 3);
            let k = alg.field();
            let v = verify_ezd(&alg, &a, &b).unwrap();
            prop_assert_eq!(v, verify_ezd(&alg, &b, &a).unwrap());
            let la: Vec<u32> = a.iter().map(|&x| k.mul(x, l)).collect();
            let mb: Vec<u32> = b.iter().map(|&x| k.mul(x, m)).collect();
            prop_assert_eq!(v, verify_ezd(&alg, &la, &mb).unwrap());
        }
    }
}

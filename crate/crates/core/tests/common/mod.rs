//! Shared generators and oracles for the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use tacx::algebra::{LiftPair, ShortAlgebra};
use tacx::complex::{LinearMatrix, PeriodicComplex};
use tacx::io::ring::{quadratic_monomials, Presentation, Quadric};
use tacx::{DenseMatrix, PrimeField};

pub fn rename(pairs: &[(&str, &str)]) -> HashMap<String, String> {
    pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

/// A ring with a distinguished quadric and a period-2 complex over it.
#[derive(Clone, Debug)]
pub struct Side {
    pub presentation: Presentation,
    pub complex: PeriodicComplex,
}

fn small(rng: &mut ChaCha8Rng) -> i64 {
    rng.gen_range(-2..=2)
}

fn random_form(rng: &mut ChaCha8Rng, n: usize) -> Vec<i64> {
    loop {
        let v: Vec<i64> = (0..n).map(|_| small(rng)).collect();
        if v.iter().any(|&c| c != 0) {
            return v;
        }
    }
}

/// An integer matrix invertible mod p, as rows.
fn random_invertible(rng: &mut ChaCha8Rng, k: PrimeField, n: usize) -> Vec<Vec<i64>> {
    loop {
        let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| small(rng)).collect()).collect();
        if DenseMatrix::from_rows(k, &rows).rank() == n {
            return rows;
        }
    }
}

/// `sum_l s[k][l] x_l` for each old variable `k`.
fn substitute(q: &Quadric, s: &[Vec<i64>]) -> Quadric {
    let mut out = Quadric::new();
    for ((i, j), c) in q.terms() {
        let p = Quadric::product(&s[i], &s[j]);
        for ((a, b), d) in p.terms() {
            out.add_term(a, b, c * d);
        }
    }
    out
}

fn apply(s: &[Vec<i64>], form: &[i64]) -> Vec<i64> {
    let n = s.len();
    (0..n).map(|l| (0..n).map(|k| form[k] * s[k][l]).sum()).collect()
}

fn to_field(k: PrimeField, v: &[i64]) -> Vec<u32> {
    v.iter().map(|&c| k.from_i64(c)).collect()
}

/// Rings of two kinds: `k[u_1.., z]/(u_i u_j, z^2)` with `f = z^2` (where
/// `z` is an exact zero divisor), or `f = a b` for random forms `a`, `b`
/// completed by random monomials until the cube of the maximal ideal
/// vanishes. A random change of coordinates is applied afterwards. The
/// complex has rank 1 or 2 with maps built from `a`, `b` and lifted
/// composite `f U`, `U` invertible.
pub fn random_side(rng: &mut ChaCha8Rng, k: PrimeField, prefix: &str) -> Option<Side> {
    let n = rng.gen_range(2..=4);
    let variables: Vec<String> = (1..=n).map(|i| format!("{prefix}{i}")).collect();
    let (mut quadrics, a, b) = if rng.gen_bool(0.5) {
        let mut qs = Vec::new();
        for i in 0..n - 1 {
            for j in i..n - 1 {
                qs.push(Quadric::monomial(i, j));
            }
        }
        let mut z = vec![0i64; n];
        z[n - 1] = 1;
        (qs, z.clone(), z)
    } else {
        (Vec::new(), random_form(rng, n), random_form(rng, n))
    };
    let f = Quadric::product(&a, &b);
    if f.is_zero_mod(k) {
        return None;
    }
    let mut monomials = quadratic_monomials(n);
    monomials.shuffle(rng);
    let mut pending = monomials.into_iter();
    let presentation = loop {
        let mut qs = quadrics.clone();
        qs.push(f.clone());
        let d = qs.len() - 1;
        if let Ok(p) = Presentation::new(k, variables.clone(), qs, Some(d)) {
            if ShortAlgebra::verify_truncation(&p) {
                break p;
            }
        }
        let (i, j) = pending.next()?;
        let q = Quadric::monomial(i, j);
        let mut trial = quadrics.clone();
        trial.push(q.clone());
        trial.push(f.clone());
        let d = trial.len() - 1;
        if Presentation::new(k, variables.clone(), trial, Some(d)).is_ok() {
            quadrics.push(q);
        }
    };
    let s = random_invertible(rng, k, n);
    let qs: Vec<Quadric> = presentation.quadrics().iter().map(|q| substitute(q, &s)).collect();
    let presentation = Presentation::new(k, variables, qs, presentation.distinguished()).ok()?;
    let (a, b) = (to_field(k, &apply(&s, &a)), to_field(k, &apply(&s, &b)));
    let complex = random_complex(rng, k, n, &a, &b);
    Some(Side {
        presentation,
        complex,
    })
}

fn nonzero(rng: &mut ChaCha8Rng, k: PrimeField) -> u32 {
    rng.gen_range(1..k.p())
}

/// `X = P diag(a_i) Q`, `W = Q^-1 diag(b_i) P^-1` with `a_i b_i` a nonzero
/// multiple of `a b`.
fn random_complex(rng: &mut ChaCha8Rng, k: PrimeField, n: usize, a: &[u32], b: &[u32]) -> PeriodicComplex {
    let rank = rng.gen_range(1..=2);
    let scale = |v: &[u32], s: u32| -> Vec<u32> { v.iter().map(|&x| k.mul(x, s)).collect() };
    let mut xs = Vec::new();
    let mut ws = Vec::new();
    for _ in 0..rank {
        let (l, m) = (nonzero(rng, k), nonzero(rng, k));
        if rng.gen_bool(0.5) {
            xs.push(scale(a, l));
            ws.push(scale(b, m));
        } else {
            xs.push(scale(b, l));
            ws.push(scale(a, m));
        }
    }
    let x = LinearMatrix::diagonal(n, &xs);
    let w = LinearMatrix::diagonal(n, &ws);
    if rank == 1 {
        return PeriodicComplex::new(vec![x, w]).unwrap();
    }
    let p = DenseMatrix::from_rows(k, &random_invertible(rng, k, 2));
    let q = DenseMatrix::from_rows(k, &random_invertible(rng, k, 2));
    let x = x.left_mul(&p).right_mul(&q);
    let w = w.left_mul(&q.inverse().unwrap()).right_mul(&p.inverse().unwrap());
    PeriodicComplex::new(vec![x, w]).unwrap()
}

/// A period-2 complex `(a), (b)` over a random ring with `b` in the
/// annihilator of `a`; usually not exact.
pub fn random_annihilator_complex(rng: &mut ChaCha8Rng, k: PrimeField) -> Option<(ShortAlgebra, PeriodicComplex)> {
    let side = random_side(rng, k, "t")?;
    let alg = ShortAlgebra::build(&side.presentation);
    let n = alg.n();
    let a = to_field(k, &random_form(rng, n));
    let ann = alg.multiplication_matrix(&a).kernel_basis();
    if ann.cols() == 0 {
        return None;
    }
    let coeffs: Vec<u32> = (0..ann.cols()).map(|_| rng.gen_range(0..k.p())).collect();
    let b = ann.mul_vec(&coeffs);
    if b.iter().all(|&x| x == 0) {
        return None;
    }
    Some((alg, PeriodicComplex::pair(&a, &b)))
}

pub fn lift(side: &Side) -> LiftPair {
    LiftPair::new(&side.presentation).unwrap()
}

/// Exactness of a complex over a short graded algebra, decided on the full
/// `k`-linear model of the free modules (basis `1, x_i, R_2` in each
/// coordinate) with a naive elimination written for this oracle alone.
pub mod oracle {
    use super::*;

    fn rank(p: u64, mut rows: Vec<Vec<u64>>) -> usize {
        let cols = rows.first().map_or(0, Vec::len);
        let mut r = 0;
        for c in 0..cols {
            let Some(piv) = (r..rows.len()).find(|&i| !rows[i][c].is_multiple_of(p)) else {
                continue;
            };
            rows.swap(r, piv);
            let inv = pow(rows[r][c], p - 2, p);
            for x in rows[r].iter_mut() {
                *x = *x * inv % p;
            }
            for i in 0..rows.len() {
                if i != r && rows[i][c] != 0 {
                    let t = rows[i][c];
                    for j in 0..cols {
                        rows[i][j] = (rows[i][j] + p - t * rows[r][j] % p) % p;
                    }
                }
            }
            r += 1;
        }
        r
    }

    fn pow(mut b: u64, mut e: u64, p: u64) -> u64 {
        let mut acc = 1;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc
    }

    /// Multiplication by the linear form `l` on `R`, restricted to the
    /// source degree `deg` and landing in degree `deg + 1`; as a
    /// `dim R_{deg+1} x dim R_deg` matrix.
    fn multiply(alg: &ShortAlgebra, l: &[u32], deg: usize) -> Vec<Vec<u64>> {
        let (n, d) = (alg.n(), alg.d());
        match deg {
            0 => (0..n).map(|i| vec![l[i] as u64]).collect(),
            1 => {
                let mut m = vec![vec![0u64; n]; d];
                for j in 0..n {
                    for i in 0..n {
                        let prod = alg.reduce_monomial(i.min(j), i.max(j));
                        for t in 0..d {
                            m[t][j] = (m[t][j] + l[i] as u64 * prod[t] as u64) % alg.field().p() as u64;
                        }
                    }
                }
                m
            }
            _ => Vec::new(),
        }
    }

    fn dims(alg: &ShortAlgebra) -> [usize; 3] {
        [1, alg.n(), alg.d()]
    }

    /// Block matrix of `m` on the degree-`deg` part of the source, into the
    /// degree `deg + 1` part of the target.
    fn graded_block(alg: &ShortAlgebra, m: &LinearMatrix, deg: usize) -> Vec<Vec<u64>> {
        let dm = dims(alg);
        let (src, dst) = (dm[deg], if deg < 2 { dm[deg + 1] } else { 0 });
        let mut out = vec![vec![0u64; m.cols() * src]; m.rows() * dst];
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let block = multiply(alg, m.entry(r, c), deg);
                for (i, row) in block.iter().enumerate() {
                    for (j, &x) in row.iter().enumerate() {
                        out[r * dst + i][c * src + j] = x;
                    }
                }
            }
        }
        out
    }

    /// Per degree `0, 1, 2`: whether `ker(out) = im(in)` there.
    pub fn exact_by_degree(alg: &ShortAlgebra, outgoing: &LinearMatrix, incoming: &LinearMatrix) -> [bool; 3] {
        let p = alg.field().p() as u64;
        let dm = dims(alg);
        let mut verdict = [false; 3];
        for (deg, v) in verdict.iter_mut().enumerate() {
            let source_dim = outgoing.cols() * dm[deg];
            let kernel = if deg == 2 {
                source_dim
            } else {
                source_dim - rank(p, graded_block(alg, outgoing, deg))
            };
            let image = if deg == 0 { 0 } else { rank(p, graded_block(alg, incoming, deg - 1)) };
            *v = kernel == image;
        }
        verdict
    }

    pub fn exact_at(alg: &ShortAlgebra, c: &PeriodicComplex, i: usize) -> bool {
        exact_by_degree(alg, c.map(i), c.map(i + 1)).iter().all(|&x| x)
    }
}

//! The bundled example files, embedded at compile time.

use crate::complex::PeriodicComplex;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::io::complex::ComplexFile;
use crate::io::graph::{parse_graph_file, BipartiteGraph};
use crate::io::ring::{parse_ring_file, Presentation};

macro_rules! fixture {
    ($name:literal) => {
        ($name, include_str!(concat!("../../../fixtures/", $name)))
    };
}

/// `(file name, contents)` for every bundled fixture.
pub const ALL: &[(&str, &str)] = &[
    fixture!("exnew_r1.ring"),
    fixture!("exnew_s1.ring"),
    fixture!("exnew_r.ring"),
    fixture!("ex1_r1.ring"),
    fixture!("ex1_s1.ring"),
    fixture!("ex1_r.ring"),
    fixture!("gorenstein_pair.ring"),
    fixture!("counterex_r.ring"),
    fixture!("path6.graph"),
    fixture!("exnew_z1.cx"),
    fixture!("exnew_z2.cx"),
    fixture!("exnew_sum.cx"),
    fixture!("ex1_l1.cx"),
    fixture!("ex1_l2.cx"),
    fixture!("ex1_sum.cx"),
    fixture!("finalex_r1.cx"),
    fixture!("finalex_s1.cx"),
    fixture!("finalex.cx"),
];

pub fn text(name: &str) -> Result<&'static str> {
    ALL.iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::Precondition(format!("no bundled fixture named `{name}`")))
}

/// A bundled `.ring` over the default field (unless the file names one).
pub fn ring(name: &str) -> Result<Presentation> {
    ring_over(name, PrimeField::default())
}

pub fn ring_over(name: &str, field: PrimeField) -> Result<Presentation> {
    parse_ring_file(text(name)?, field)
}

/// A bundled `.cx` with the bundled ring it references.
pub fn complex(name: &str) -> Result<(Presentation, PeriodicComplex)> {
    let file = ComplexFile::parse(text(name)?)?;
    let presentation = ring(file.ring())?;
    let c = file.resolve(&presentation)?;
    Ok((presentation, c))
}

pub fn graph(name: &str) -> Result<BipartiteGraph> {
    parse_graph_file(text(name)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{LiftPair, ShortAlgebra};

    #[test]
    fn every_fixture_parses() {
        for (name, _) in ALL {
            let ok = if name.ends_with(".ring") {
                ring(name).map(|_| ())
            } else if name.ends_with(".cx") {
                complex(name).map(|_| ())
            } else {
                graph(name).map(|_| ())
            };
            ok.unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn dimensions() {
        let dims = |name: &str| {
            let a = ShortAlgebra::build(&ring(name).unwrap());
            (a.n(), a.d())
        };
        assert_eq!(dims("ex1_r1.ring"), (5, 4));
        assert_eq!(dims("ex1_s1.ring"), (5, 4));
        assert_eq!(dims("ex1_r.ring"), (10, 9));
        assert_eq!(dims("exnew_r.ring"), (6, 5));
        assert_eq!(dims("counterex_r.ring"), (6, 3));
        assert_eq!(dims("gorenstein_pair.ring"), (3, 1));
    }

    #[test]
    fn finalex_factor_composites_are_identity() {
        for name in ["finalex_r1.cx", "finalex_s1.cx"] {
            let (p, c) = complex(name).unwrap();
            let pair = LiftPair::new(&p).unwrap();
            let id = crate::linalg::DenseMatrix::identity(p.field(), 2);
            for k in 0..2 {
                let m = crate::complex::product_f_coefficient(&pair.r0, c.map(k), c.map(k + 1), &pair.f).unwrap();
                assert_eq!(m.as_ref(), Some(&id), "{name} position {k}");
            }
        }
    }
}

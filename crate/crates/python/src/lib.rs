use std::path::PathBuf;

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use tacx::algebra::{LiftPair, ShortAlgebra};
use tacx::complex::PeriodicComplex;
use tacx::connected_sum::{align, assemble as assemble_sum, build_connected_sum, gorenstein_crosscheck};
use tacx::doubling::{build_doubled, search_alpha, verify_doubling, SocleDecomposition};
use tacx::ezd::{proxy_algebra, search_ezd_exhaustive, search_ezd_random, verify_ezd};
use tacx::graph::build_from_graph;
use tacx::io::complex::{complex_to_text, parse_linear_form, ComplexFile};
use tacx::io::graph::parse_graph_file;
use tacx::io::ring::{parse_ring_file, Presentation};
use tacx::PrimeField;

create_exception!(tacx, TacxError, PyException);

fn err(e: tacx::Error) -> PyErr {
    TacxError::new_err(e.to_string())
}

fn field(prime: Option<u32>) -> PyResult<PrimeField> {
    prime.map_or(Ok(PrimeField::default()), |p| PrimeField::new(p).map_err(err))
}

fn read(path: &PathBuf) -> PyResult<String> {
    std::fs::read_to_string(path).map_err(|e| TacxError::new_err(format!("{}: {e}", path.display())))
}

/// A ring presentation with its short graded algebra.
#[pyclass(module = "tacx", frozen, from_py_object)]
#[derive(Clone)]
struct Ring {
    presentation: Presentation,
    algebra: ShortAlgebra,
}

impl Ring {
    fn wrap(presentation: Presentation) -> Self {
        let algebra = ShortAlgebra::build(&presentation);
        Self { presentation, algebra }
    }

    fn form(&self, text: &str) -> PyResult<Vec<u32>> {
        parse_linear_form(text, &self.presentation).map_err(err)
    }
}

#[pymethods]
impl Ring {
    #[staticmethod]
    #[pyo3(signature = (text, prime = None))]
    fn from_text(text: &str, prime: Option<u32>) -> PyResult<Self> {
        let k = field(prime)?;
        let p = parse_ring_file(text, k).map_err(err)?;
        let p = if prime.is_some() { p.with_field(k).map_err(err)? } else { p };
        Ok(Self::wrap(p))
    }

    #[staticmethod]
    #[pyo3(signature = (path, prime = None))]
    fn from_file(path: PathBuf, prime: Option<u32>) -> PyResult<Self> {
        Self::from_text(&read(&path)?, prime)
    }

    #[getter]
    fn prime(&self) -> u32 {
        self.presentation.field().p()
    }

    #[getter]
    fn variables(&self) -> Vec<String> {
        self.presentation.variables().to_vec()
    }

    /// Dimension of the degree-1 part.
    #[getter]
    fn dim1(&self) -> usize {
        self.algebra.n()
    }

    #[getter]
    fn dim2(&self) -> usize {
        self.algebra.d()
    }

    fn socle_dimension(&self) -> usize {
        self.algebra.socle_dimension()
    }

    fn is_gorenstein(&self) -> bool {
        self.algebra.is_gorenstein()
    }

    fn verify_truncation(&self) -> bool {
        ShortAlgebra::verify_truncation(&self.presentation)
    }

    /// `(dim1, dim2, dim_condition)`; Koszulness is not checked.
    fn yoshino(&self) -> (usize, usize, bool) {
        let y = self.algebra.yoshino_check();
        (y.dim1, y.dim2, y.dim_condition)
    }

    /// Coordinates of a linear form such as `"x1 - 2*y1"`.
    fn linear(&self, expr: &str) -> PyResult<Vec<u32>> {
        self.form(expr)
    }

    fn verify_ezd(&self, a: &str, b: &str) -> PyResult<bool> {
        verify_ezd(&self.algebra, &self.form(a)?, &self.form(b)?).map_err(err)
    }

    /// Exact zero divisor pairs as strings. Exhaustive search lists every
    /// pair; random search returns at most one.
    #[pyo3(signature = (exhaustive = false, trials = 10_000, seed = 0, proxy_prime = None, force = false))]
    fn search_ezd(
        &self,
        py: Python<'_>,
        exhaustive: bool,
        trials: u64,
        seed: u64,
        proxy_prime: Option<u32>,
        force: bool,
    ) -> PyResult<Vec<(String, String)>> {
        let alg = match proxy_prime {
            Some(q) => proxy_algebra(&self.presentation, q).map_err(err)?,
            None => self.algebra.clone(),
        };
        let pairs = py
            .detach(|| {
                if exhaustive {
                    search_ezd_exhaustive(&alg, force)
                } else {
                    search_ezd_random(&alg, trials, seed).map(|p| p.into_iter().collect())
                }
            })
            .map_err(err)?;
        Ok(pairs
            .iter()
            .map(|p| {
                let t = p.describe(&alg);
                (t.a, t.b)
            })
            .collect())
    }

    fn to_text(&self) -> String {
        self.presentation.to_text()
    }

    fn __repr__(&self) -> String {
        format!(
            "Ring(variables={:?}, dim1={}, dim2={}, prime={})",
            self.presentation.variables(),
            self.algebra.n(),
            self.algebra.d(),
            self.prime()
        )
    }
}

/// A periodic complex of linear matrices over a ring.
#[pyclass(module = "tacx", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Complex {
    ring: Ring,
    complex: PeriodicComplex,
}

#[pymethods]
impl Complex {
    /// Parse `.cx` text; the `[ring]` line is ignored in favour of `ring`.
    #[staticmethod]
    fn from_text(text: &str, ring: Ring) -> PyResult<Self> {
        let file = ComplexFile::parse(text).map_err(err)?;
        let complex = file.resolve(&ring.presentation).map_err(err)?;
        Ok(Self { ring, complex })
    }

    /// Read a `.cx` file and the ring file it names.
    #[staticmethod]
    #[pyo3(signature = (path, prime = None))]
    fn from_file(path: PathBuf, prime: Option<u32>) -> PyResult<Self> {
        let text = read(&path)?;
        let file = ComplexFile::parse(&text).map_err(err)?;
        let ring = Ring::from_file(file.ring_path(&path), prime)?;
        Self::from_text(&text, ring)
    }

    #[getter]
    fn ring(&self) -> Ring {
        self.ring.clone()
    }

    #[getter]
    fn period(&self) -> usize {
        self.complex.period()
    }

    fn ranks(&self) -> Vec<usize> {
        self.complex.ranks()
    }

    fn is_complex(&self) -> PyResult<bool> {
        self.complex.is_complex(&self.ring.algebra).map_err(err)
    }

    /// Exactness at each position of one period.
    fn exact_at(&self) -> PyResult<Vec<bool>> {
        (0..self.complex.period())
            .map(|i| self.complex.exactness_at(&self.ring.algebra, i).map_err(err))
            .collect()
    }

    fn is_totally_acyclic(&self) -> PyResult<bool> {
        self.complex.is_totally_acyclic(&self.ring.algebra).map_err(err)
    }

    fn dual(&self) -> Self {
        Self {
            ring: self.ring.clone(),
            complex: self.complex.dual(),
        }
    }

    /// Each map as `[[..], ..]` text.
    fn maps(&self) -> Vec<String> {
        let p = &self.ring.presentation;
        self.complex.maps().iter().map(|m| m.to_text(p.field(), p.variables())).collect()
    }

    #[pyo3(signature = (ring_path = "ring.ring"))]
    fn to_text(&self, ring_path: &str) -> String {
        complex_to_text(&self.complex, &self.ring.presentation, ring_path)
    }

    fn __repr__(&self) -> String {
        format!("Complex(period={}, ranks={:?})", self.complex.period(), self.complex.ranks())
    }
}

/// Connected sum of two rings with distinguished quadrics. Returns the ring
/// and whether every structural invariant and the Gorenstein crosscheck
/// hold.
#[pyfunction]
fn connected_sum(left: &Ring, right: &Ring) -> PyResult<(Ring, bool)> {
    let cs = build_connected_sum(&left.presentation, &right.presentation).map_err(err)?;
    let ok = cs.invariants().all() && gorenstein_crosscheck(&cs).consistent;
    Ok((Ring::wrap(cs.presentation), ok))
}

/// Assemble complexes over the two factors into a complex over their sum.
#[pyfunction]
#[pyo3(signature = (left, right, auto_sign = true))]
fn assemble(left: &Complex, right: &Complex, auto_sign: bool) -> PyResult<Complex> {
    let cs = build_connected_sum(&left.ring.presentation, &right.ring.presentation).map_err(err)?;
    let (a, b) = align(&left.complex, &right.complex).map_err(err)?;
    let out = assemble_sum(&cs, &a, &b, auto_sign).map_err(err)?;
    Ok(Complex {
        ring: Ring::wrap(cs.presentation),
        complex: out.complex,
    })
}

/// Double a period-2 complex. `dec` lists pairs `(y, z)` with
/// `sum y z = f`; by default one pair per term of `f`. With `alpha = None`
/// the first working `alpha` is searched for. Returns the complex, `alpha`
/// and whether every claim about the result holds.
#[pyfunction]
#[pyo3(signature = (complex, dec = None, alpha = None))]
fn double(
    py: Python<'_>,
    complex: &Complex,
    dec: Option<Vec<(String, String)>>,
    alpha: Option<u32>,
) -> PyResult<Option<(Complex, u32, bool)>> {
    let ring = &complex.ring;
    let lift = LiftPair::new(&ring.presentation).map_err(err)?;
    let dec = match dec {
        None => SocleDecomposition::from_monomials(&lift).map_err(err)?,
        Some(pairs) => {
            let forms = pairs
                .iter()
                .map(|(y, z)| Ok((ring.form(y)?, ring.form(z)?)))
                .collect::<PyResult<Vec<_>>>()?;
            SocleDecomposition::new(&lift, forms).map_err(err)?
        }
    };
    let c = &complex.complex;
    if c.period() != 2 {
        return Err(TacxError::new_err("doubling needs a period-2 complex"));
    }
    let found = py
        .detach(|| match alpha {
            Some(a) => build_doubled(&lift, c.map(0), c.map(1), &dec, a)
                .and_then(|d| verify_doubling(&lift, &d).map(|v| Some((d, v)))),
            None => search_alpha(&lift, c.map(0), c.map(1), &dec),
        })
        .map_err(err)?;
    Ok(found.map(|(d, v)| {
        let alpha = d.alpha;
        (
            Complex {
                ring: ring.clone(),
                complex: d.complex(),
            },
            alpha,
            v.all(),
        )
    }))
}

/// The ring of a bipartite graph given in `.graph` text, with whether all
/// structural checks hold.
#[pyfunction]
#[pyo3(signature = (text, prime = None))]
fn graph_ring(text: &str, prime: Option<u32>) -> PyResult<(Ring, bool)> {
    let g = parse_graph_file(text).map_err(err)?;
    let data = build_from_graph(&g, field(prime)?).map_err(err)?;
    Ok((Ring::wrap(data.presentation), data.checks.all()))
}

/// Run the command line with `args` (without the program name); returns the
/// exit status and the printed report.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("tacx".to_string()).chain(args);
    let code = tacx::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned())
}

#[pymodule]
#[pyo3(name = "tacx")]
fn tacx_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("TacxError", m.py().get_type::<TacxError>())?;
    m.add_class::<Ring>()?;
    m.add_class::<Complex>()?;
    m.add_function(wrap_pyfunction!(connected_sum, m)?)?;
    m.add_function(wrap_pyfunction!(assemble, m)?)?;
    m.add_function(wrap_pyfunction!(double, m)?)?;
    m.add_function(wrap_pyfunction!(graph_ring, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}

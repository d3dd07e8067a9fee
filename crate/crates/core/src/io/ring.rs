//! Quadric presentations and the `.ring` file format.
//!
//! ```text
//! [field]
//! p = 32003
//! [vars]
//! x1, y1, z1
//! [quadrics]
//! x1^2, y1^2
//! z1^2
//! x1*y1
//! [distinguished]
//! z1^2
//! ```
//!
//! `[field]` and `[distinguished]` are optional. The distinguished entry is
//! either one of the listed quadrics (as an expression) or a 0-based index.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::io::expr::{is_identifier, tokenize, Parser, Term, TokenKind};
use crate::io::sections::{key_value, split_sections};
use crate::linalg::DenseMatrix;

/// Degree-2 monomials `x_i x_j` (i <= j) in lex order.
pub fn quadratic_monomials(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

/// Position of `x_i x_j` in [`quadratic_monomials`].
#[inline]
pub fn quadratic_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * i.saturating_sub(1) / 2 + (j - i)
}

/// A homogeneous quadric as an integer coefficient table over `x_i x_j`,
/// `i <= j`. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Quadric {
    terms: BTreeMap<(usize, usize), i64>,
}

impl Quadric {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn monomial(i: usize, j: usize) -> Self {
        let mut q = Self::new();
        q.add_term(i, j, 1);
        q
    }

    pub fn add_term(&mut self, i: usize, j: usize, coefficient: i64) {
        let key = if i <= j { (i, j) } else { (j, i) };
        let entry = self.terms.entry(key).or_insert(0);
        *entry += coefficient;
        if *entry == 0 {
            self.terms.remove(&key);
        }
    }

    /// Product of two integer linear forms.
    pub fn product(a: &[i64], b: &[i64]) -> Self {
        let mut q = Self::new();
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                if ai != 0 && bj != 0 {
                    q.add_term(i, j, ai * bj);
                }
            }
        }
        q
    }

    pub fn sub(&self, other: &Quadric) -> Quadric {
        let mut q = self.clone();
        for (&(i, j), &c) in &other.terms {
            q.add_term(i, j, -c);
        }
        q
    }

    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), i64)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    pub fn coefficient(&self, i: usize, j: usize) -> i64 {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.terms.get(&key).copied().unwrap_or(0)
    }

    pub fn is_zero_mod(&self, field: PrimeField) -> bool {
        self.terms.values().all(|&c| field.from_i64(c) == 0)
    }

    /// Re-index variables through `map` (old index -> new index).
    pub fn reindexed(&self, map: &[usize]) -> Quadric {
        let mut q = Quadric::new();
        for (&(i, j), &c) in &self.terms {
            q.add_term(map[i], map[j], c);
        }
        q
    }

    /// Coordinates over [`quadratic_monomials`] reduced mod p.
    pub fn coordinates(&self, n: usize, field: PrimeField) -> Vec<u32> {
        let mut v = vec![0; n * (n + 1) / 2];
        for (&(i, j), &c) in &self.terms {
            let idx = quadratic_index(n, i, j);
            v[idx] = field.add(v[idx], field.from_i64(c));
        }
        v
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> QuadricDisplay<'a> {
        QuadricDisplay { q: self, names }
    }
}

pub struct QuadricDisplay<'a> {
    q: &'a Quadric,
    names: &'a [String],
}

impl fmt::Display for QuadricDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (&(i, j), &c)) in self.q.terms.iter().enumerate() {
            let mag = c.unsigned_abs();
            if k == 0 {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            }
            if mag != 1 {
                write!(f, "{mag}*")?;
            }
            if i == j {
                write!(f, "{}^2", self.names[i])?;
            } else {
                write!(f, "{}*{}", self.names[i], self.names[j])?;
            }
        }
        Ok(())
    }
}

/// Variables, homogeneous quadrics, and an optional distinguished quadric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    field: PrimeField,
    variables: Vec<String>,
    quadrics: Vec<Quadric>,
    distinguished: Option<usize>,
}

impl Presentation {
    pub fn new(
        field: PrimeField,
        variables: Vec<String>,
        quadrics: Vec<Quadric>,
        distinguished: Option<usize>,
    ) -> Result<Self> {
        let mut seen = HashSet::new();
        for v in &variables {
            if !is_identifier(v) {
                return Err(Error::Precondition(format!("`{v}` is not a valid identifier")));
            }
            if !seen.insert(v.as_str()) {
                return Err(Error::NameCollision(format!("variable `{v}` declared twice")));
            }
        }
        let n = variables.len();
        for (k, q) in quadrics.iter().enumerate() {
            if q.terms.keys().any(|&(_, j)| j >= n) {
                return Err(Error::Precondition(format!("quadric {k} references an unknown variable")));
            }
            if q.is_zero_mod(field) {
                return Err(Error::Precondition(format!("quadric {k} is zero over {field}")));
            }
        }
        let p = Self {
            field,
            variables,
            quadrics,
            distinguished,
        };
        if let Some(d) = distinguished {
            if d >= p.quadrics.len() {
                return Err(Error::Precondition(format!(
                    "distinguished index {d} out of range (0..{})",
                    p.quadrics.len()
                )));
            }
            p.check_distinguished_minimal()?;
        }
        Ok(p)
    }

    fn check_distinguished_minimal(&self) -> Result<()> {
        let Some(d) = self.distinguished else {
            return Ok(());
        };
        let others = self.quadric_matrix(|k| k != d);
        let f = self.quadrics[d].coordinates(self.n(), self.field);
        if others.transpose().contains_column(&f) {
            return Err(Error::DistinguishedInSpan);
        }
        Ok(())
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn n(&self) -> usize {
        self.variables.len()
    }

    pub fn quadrics(&self) -> &[Quadric] {
        &self.quadrics
    }

    pub fn distinguished(&self) -> Option<usize> {
        self.distinguished
    }

    pub fn distinguished_quadric(&self) -> Option<&Quadric> {
        self.distinguished.map(|d| &self.quadrics[d])
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    /// Rows are the selected quadrics, columns the degree-2 monomials.
    pub fn quadric_matrix(&self, include: impl Fn(usize) -> bool) -> DenseMatrix {
        let n = self.n();
        let rows: Vec<Vec<u32>> = self
            .quadrics
            .iter()
            .enumerate()
            .filter(|(k, _)| include(*k))
            .map(|(_, q)| q.coordinates(n, self.field))
            .collect();
        DenseMatrix::from_columns(self.field, n * (n + 1) / 2, &rows).transpose()
    }

    /// The presentation with the distinguished quadric removed: the degree
    /// <= 2 data of `P / (I + m f)`.
    pub fn without_distinguished(&self) -> Presentation {
        let quadrics = self
            .quadrics
            .iter()
            .enumerate()
            .filter(|(k, _)| Some(*k) != self.distinguished)
            .map(|(_, q)| q.clone())
            .collect();
        Presentation {
            field: self.field,
            variables: self.variables.clone(),
            quadrics,
            distinguished: None,
        }
    }

    /// Same presentation over another prime. Revalidates, since quadrics can
    /// vanish or become dependent mod the new prime.
    pub fn with_field(&self, field: PrimeField) -> Result<Presentation> {
        Presentation::new(
            field,
            self.variables.clone(),
            self.quadrics.clone(),
            self.distinguished,
        )
    }

    pub fn with_distinguished(&self, distinguished: Option<usize>) -> Result<Presentation> {
        Presentation::new(
            self.field,
            self.variables.clone(),
            self.quadrics.clone(),
            distinguished,
        )
    }

    /// Rename variables through `rename`; names not in the map are kept.
    pub fn renamed(&self, rename: &HashMap<String, String>) -> Result<Presentation> {
        let variables = self
            .variables
            .iter()
            .map(|v| rename.get(v).cloned().unwrap_or_else(|| v.clone()))
            .collect();
        Presentation::new(self.field, variables, self.quadrics.clone(), self.distinguished)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "[field]\np = {}\n", self.field.p());
        let _ = writeln!(s, "[vars]\n{}\n", self.variables.join(", "));
        s.push_str("[quadrics]\n");
        for q in &self.quadrics {
            let _ = writeln!(s, "{}", q.display(&self.variables));
        }
        if let Some(d) = self.distinguished {
            let _ = writeln!(s, "\n[distinguished]\n{}", self.quadrics[d].display(&self.variables));
        }
        s
    }
}

/// Parse a `.ring` file. A `[field]` section in the file takes precedence
/// over `default_field`.
pub fn parse_ring_file(text: &str, default_field: PrimeField) -> Result<Presentation> {
    let sections = split_sections(text)?;
    let mut field = default_field;
    let mut variables: Vec<String> = Vec::new();
    let mut vars_seen = false;
    let mut quadric_lines = Vec::new();
    let mut distinguished_line = None;

    for s in &sections {
        match s.name.as_str() {
            "field" => {
                for (ln, off, line) in &s.lines {
                    let (k, v) = key_value(line, *ln, *off)?;
                    if k != "p" {
                        return Err(Error::parse(*ln, off + 1, format!("unknown field key `{k}`")));
                    }
                    let p: u32 = v
                        .parse()
                        .map_err(|_| Error::parse(*ln, off + 1, format!("invalid prime `{v}`")))?;
                    field = PrimeField::new(p).map_err(|e| Error::parse(*ln, off + 1, e.to_string()))?;
                }
            }
            "vars" => {
                vars_seen = true;
                for (ln, off, line) in &s.lines {
                    for tok in tokenize(line, *ln, *off)? {
                        match tok.kind {
                            TokenKind::Ident(name) => {
                                if variables.contains(&name) {
                                    return Err(Error::parse(
                                        *ln,
                                        tok.column,
                                        format!("duplicate variable `{name}`"),
                                    ));
                                }
                                variables.push(name);
                            }
                            TokenKind::Comma => {}
                            _ => return Err(Error::parse(*ln, tok.column, "expected a variable name")),
                        }
                    }
                }
            }
            "quadrics" => quadric_lines.extend(s.lines.iter().cloned()),
            "distinguished" => {
                if s.lines.len() != 1 {
                    return Err(Error::parse(
                        s.header_line,
                        1,
                        "[distinguished] must contain exactly one entry",
                    ));
                }
                distinguished_line = Some(s.lines[0].clone());
            }
            other => {
                return Err(Error::parse(
                    s.header_line,
                    1,
                    format!("unknown section `[{other}]`"),
                ))
            }
        }
    }
    if !vars_seen {
        return Err(Error::parse(1, 1, "missing [vars] section"));
    }

    let mut quadrics = Vec::new();
    for (ln, off, line) in &quadric_lines {
        let tokens = tokenize(line, *ln, *off)?;
        let mut parser = Parser::new(&tokens, *ln, off + line.len() + 1);
        loop {
            let col = parser.column();
            let terms = parser.expression()?;
            let q = quadric_from_terms(&terms, &variables, *ln)?;
            if q.is_zero_mod(field) {
                return Err(Error::parse(*ln, col, format!("quadric is zero over {field}")));
            }
            quadrics.push(q);
            if parser.at_end() {
                break;
            }
            parser.expect(TokenKind::Comma, "`,` between quadrics")?;
            // a trailing comma continues the list on the next line
            if parser.at_end() {
                break;
            }
        }
    }

    let distinguished = match distinguished_line {
        None => None,
        Some((ln, off, line)) => {
            if let Ok(idx) = line.trim().parse::<usize>() {
                if idx >= quadrics.len() {
                    return Err(Error::parse(
                        ln,
                        off + 1,
                        format!("distinguished index {idx} out of range (0..{})", quadrics.len()),
                    ));
                }
                Some(idx)
            } else {
                let tokens = tokenize(&line, ln, off)?;
                let mut parser = Parser::new(&tokens, ln, off + line.len() + 1);
                let terms = parser.expression()?;
                if !parser.at_end() {
                    return Err(parser.error("trailing input after distinguished quadric"));
                }
                let q = quadric_from_terms(&terms, &variables, ln)?;
                let n = variables.len();
                let target = q.coordinates(n, field);
                let idx = quadrics
                    .iter()
                    .position(|c| c.coordinates(n, field) == target)
                    .ok_or_else(|| {
                        Error::parse(ln, off + 1, "distinguished quadric is not among the listed quadrics")
                    })?;
                Some(idx)
            }
        }
    };

    Presentation::new(field, variables, quadrics, distinguished)
}

fn quadric_from_terms(terms: &[Term], variables: &[String], line: usize) -> Result<Quadric> {
    let mut q = Quadric::new();
    for t in terms {
        if t.degree() != 2 {
            return Err(Error::parse(
                line,
                t.column,
                format!("term has degree {}, expected a homogeneous quadric", t.degree()),
            ));
        }
        let mut idx = Vec::with_capacity(2);
        for f in &t.factors {
            let i = variables
                .iter()
                .position(|v| *v == f.name)
                .ok_or_else(|| Error::parse(line, f.column, format!("unknown variable `{}`", f.name)))?;
            for _ in 0..f.power {
                idx.push(i);
            }
        }
        q.add_term(idx[0], idx[1], t.coefficient);
    }
    Ok(q)
}

//! The `.cx` format: a periodic complex of matrices with linear entries.
//!
//! ```text
//! [ring]
//! ex1_r.ring            # path relative to the .cx file
//! [period]
//! 2
//! let l1 = x1 + x2 + y1 + y2 + y3
//! [matrix 0]
//! [[l1 + l2, x1 + x4],
//!  [-y1 - y4, l1p + l2p]]
//! ```
//!
//! `let` lines may appear in any section and are visible to everything after
//! them. Parsing is two-stage: [`ComplexFile::parse`] checks syntax, and
//! [`ComplexFile::resolve`] interprets names against a presentation.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::complex::{LinearMatrix, PeriodicComplex};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::io::expr::{tokenize, Parser, Term, Token, TokenKind};
use crate::io::ring::{parse_ring_file, Presentation};
use crate::io::sections::split_sections;

#[derive(Clone, Debug)]
struct Alias {
    name: String,
    terms: Vec<Term>,
    line: usize,
    column: usize,
}

#[derive(Clone, Debug)]
struct MatrixSource {
    /// Row-major entries; all rows have the same length.
    rows: Vec<Vec<Vec<Term>>>,
    cols: usize,
}

/// Syntax-checked contents of a `.cx` file.
#[derive(Clone, Debug)]
pub struct ComplexFile {
    ring: String,
    period: usize,
    aliases: Vec<Alias>,
    matrices: Vec<MatrixSource>,
}

impl ComplexFile {
    pub fn parse(text: &str) -> Result<Self> {
        let sections = split_sections(text)?;
        let mut ring = None;
        let mut period = None;
        let mut aliases: Vec<Alias> = Vec::new();
        let mut matrices: Vec<(usize, usize, MatrixSource)> = Vec::new();

        for s in &sections {
            let mut body = Vec::new();
            for (ln, off, line) in &s.lines {
                if let Some(rest) = line.strip_prefix("let ") {
                    aliases.push(parse_alias(rest, *ln, off + 4)?);
                } else {
                    body.push((*ln, *off, line.as_str()));
                }
            }
            let name = s.name.as_str();
            if name == "ring" || name == "period" {
                let [(ln, off, line)] = body[..] else {
                    return Err(Error::parse(
                        s.header_line,
                        1,
                        format!("[{name}] must contain exactly one entry"),
                    ));
                };
                if name == "ring" {
                    ring = Some(line.to_string());
                } else {
                    let p: usize = line
                        .parse()
                        .map_err(|_| Error::parse(ln, off + 1, format!("invalid period `{line}`")))?;
                    if p == 0 {
                        return Err(Error::parse(ln, off + 1, "period must be at least 1"));
                    }
                    period = Some(p);
                }
            } else if let Some(idx) = name.strip_prefix("matrix") {
                let k: usize = idx.trim().parse().map_err(|_| {
                    Error::parse(s.header_line, 1, format!("invalid matrix header `[{name}]`"))
                })?;
                let mut tokens = Vec::new();
                for (ln, off, line) in &body {
                    tokens.extend(tokenize(line, *ln, *off)?);
                }
                matrices.push((k, s.header_line, parse_matrix(&tokens, s.header_line)?));
            } else {
                return Err(Error::parse(
                    s.header_line,
                    1,
                    format!("unknown section `[{name}]`"),
                ));
            }
        }

        let ring = ring.ok_or_else(|| Error::parse(1, 1, "missing [ring] section"))?;
        let period = period.ok_or_else(|| Error::parse(1, 1, "missing [period] section"))?;
        let mut slots: Vec<Option<MatrixSource>> = vec![None; period];
        for (k, header, m) in matrices {
            if k >= period {
                return Err(Error::parse(
                    header,
                    1,
                    format!("matrix index {k} out of range for period {period}"),
                ));
            }
            if slots[k].replace(m).is_some() {
                return Err(Error::parse(header, 1, format!("matrix {k} given twice")));
            }
        }
        let matrices = slots
            .into_iter()
            .enumerate()
            .map(|(k, m)| m.ok_or_else(|| Error::parse(1, 1, format!("missing [matrix {k}]"))))
            .collect::<Result<_>>()?;
        Ok(Self {
            ring,
            period,
            aliases,
            matrices,
        })
    }

    /// The ring reference exactly as written.
    pub fn ring(&self) -> &str {
        &self.ring
    }

    /// The ring reference resolved against the directory of the `.cx` file.
    pub fn ring_path(&self, cx_path: &Path) -> PathBuf {
        let p = Path::new(&self.ring);
        match cx_path.parent() {
            Some(dir) if p.is_relative() => dir.join(p),
            _ => p.to_path_buf(),
        }
    }

    pub fn period(&self) -> usize {
        self.period
    }

    /// Interpret every entry as a linear form over `presentation`.
    pub fn resolve(&self, presentation: &Presentation) -> Result<PeriodicComplex> {
        let field = presentation.field();
        let n = presentation.n();
        let mut forms: HashMap<String, Vec<u32>> = HashMap::new();
        for (i, v) in presentation.variables().iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            forms.insert(v.clone(), e);
        }
        for a in &self.aliases {
            if forms.contains_key(&a.name) {
                return Err(Error::parse(
                    a.line,
                    a.column,
                    format!("alias `{}` shadows an existing name", a.name),
                ));
            }
            let v = linear_form(field, n, &forms, &a.terms)?;
            forms.insert(a.name.clone(), v);
        }
        let mut maps = Vec::with_capacity(self.period);
        for m in &self.matrices {
            let mut entries = Vec::with_capacity(m.rows.len() * m.cols);
            for row in &m.rows {
                for e in row {
                    entries.push(linear_form(field, n, &forms, e)?);
                }
            }
            maps.push(LinearMatrix::from_entries(m.rows.len(), m.cols, n, entries));
        }
        PeriodicComplex::new(maps)
    }
}

fn parse_alias(rest: &str, line: usize, offset: usize) -> Result<Alias> {
    let tokens = tokenize(rest, line, offset)?;
    let mut p = Parser::new(&tokens, line, offset + rest.len() + 1);
    let column = p.column();
    let name = match p.peek() {
        Some(TokenKind::Ident(name)) => name.clone(),
        _ => return Err(p.error("expected an alias name after `let`")),
    };
    p.eat(&TokenKind::Ident(name.clone()));
    p.expect(TokenKind::Equals, "`=` in alias declaration")?;
    let terms = p.expression()?;
    if !p.at_end() {
        return Err(p.error("trailing input after alias expression"));
    }
    Ok(Alias {
        name,
        terms,
        line,
        column,
    })
}

fn parse_matrix(tokens: &[Token], header_line: usize) -> Result<MatrixSource> {
    let end_column = tokens.last().map_or(1, |t| t.column + 1);
    let last_line = tokens.last().map_or(header_line, |t| t.line);
    let mut p = Parser::new(tokens, last_line, end_column);
    p.expect(TokenKind::LBracket, "`[` opening the matrix")?;
    let mut rows: Vec<Vec<Vec<Term>>> = Vec::new();
    if !p.eat(&TokenKind::RBracket) {
        loop {
            let row_line = p.line();
            let row_column = p.column();
            p.expect(TokenKind::LBracket, "`[` opening a row")?;
            let mut row = Vec::new();
            loop {
                row.push(p.expression()?);
                if !p.eat(&TokenKind::Comma) {
                    break;
                }
            }
            p.expect(TokenKind::RBracket, "`]` closing a row")?;
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err(Error::parse(
                        row_line,
                        row_column,
                        format!("row has {} entries, expected {}", row.len(), first.len()),
                    ));
                }
            }
            rows.push(row);
            if !p.eat(&TokenKind::Comma) {
                break;
            }
        }
        p.expect(TokenKind::RBracket, "`]` closing the matrix")?;
    }
    if !p.at_end() {
        return Err(p.error("trailing input after matrix"));
    }
    let cols = rows.first().map_or(0, Vec::len);
    Ok(MatrixSource { rows, cols })
}

fn linear_form(
    field: PrimeField,
    n: usize,
    forms: &HashMap<String, Vec<u32>>,
    terms: &[Term],
) -> Result<Vec<u32>> {
    let mut out = vec![0u32; n];
    for t in terms {
        let c = field.from_i64(t.coefficient);
        match t.factors.as_slice() {
            [] if c == 0 => {}
            [] => {
                return Err(Error::parse(
                    t.line,
                    t.column,
                    "constant entry; entries must be linear forms",
                ))
            }
            [f] if f.power == 1 => {
                let v = forms
                    .get(&f.name)
                    .ok_or_else(|| Error::parse(f.line, f.column, format!("unknown name `{}`", f.name)))?;
                for (o, &x) in out.iter_mut().zip(v) {
                    *o = field.mul_add(*o, c, x);
                }
            }
            _ => {
                return Err(Error::parse(
                    t.line,
                    t.column,
                    format!("term has degree {}, entries must be linear forms", t.degree()),
                ))
            }
        }
    }
    Ok(out)
}

/// A single linear form such as `x1 + 2*y3 - z` in the variables of
/// `presentation`.
pub fn parse_linear_form(text: &str, presentation: &Presentation) -> Result<Vec<u32>> {
    let tokens = tokenize(text, 1, 0)?;
    let mut p = Parser::new(&tokens, 1, text.len() + 1);
    let terms = p.expression()?;
    if !p.at_end() {
        return Err(p.error("trailing input after linear form"));
    }
    let n = presentation.n();
    let forms: HashMap<String, Vec<u32>> = presentation
        .variables()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut e = vec![0; n];
            e[i] = 1;
            (v.clone(), e)
        })
        .collect();
    linear_form(presentation.field(), n, &forms, &terms)
}

/// Serialize with every entry written out in the presentation's variables.
pub fn complex_to_text(c: &PeriodicComplex, presentation: &Presentation, ring: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "[ring]\n{ring}\n\n[period]\n{}", c.period());
    for (k, m) in c.maps().iter().enumerate() {
        let _ = writeln!(
            s,
            "\n[matrix {k}]\n{}",
            m.to_text(presentation.field(), presentation.variables())
        );
    }
    s
}

/// Read a `.cx` file and the ring it references.
pub fn load_complex(path: &Path, default_field: PrimeField) -> Result<(Presentation, PeriodicComplex)> {
    let text = read_file(path)?;
    let file = ComplexFile::parse(&text)?;
    let ring_path = file.ring_path(path);
    let presentation = parse_ring_file(&read_file(&ring_path)?, default_field)?;
    let complex = file.resolve(&presentation)?;
    Ok((presentation, complex))
}

pub(crate) fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

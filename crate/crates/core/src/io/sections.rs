//! `[section]`-structured text shared by the `.ring` and `.cx` formats.

use crate::error::{Error, Result};

#[derive(Debug)]
pub(crate) struct Section {
    /// Header text between the brackets, trimmed.
    pub name: String,
    pub header_line: usize,
    /// Non-empty body lines with comments stripped: (1-based line number,
    /// column offset of the retained text, text).
    pub lines: Vec<(usize, usize, String)>,
}

pub(crate) fn split_sections(text: &str) -> Result<Vec<Section>> {
    let mut sections: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let offset = content.len() - content.trim_start().len();
        if let Some(name) = header_name(trimmed) {
            let name = name.trim().to_string();
            sections.push(Section {
                name,
                header_line: line_no,
                lines: Vec::new(),
            });
            continue;
        }
        match sections.last_mut() {
            Some(s) => s.lines.push((line_no, offset, trimmed.to_string())),
            None => {
                return Err(Error::parse(
                    line_no,
                    offset + 1,
                    "content before the first section header",
                ))
            }
        }
    }
    Ok(sections)
}

/// `[name]` or `[matrix 3]`; matrix rows such as `[-y1, x2]]` are not headers.
fn header_name(line: &str) -> Option<&str> {
    let inner = line.strip_prefix('[')?.strip_suffix(']')?;
    let first = inner.trim_start().chars().next()?;
    (first.is_ascii_alphabetic()
        && inner.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == ' '))
    .then_some(inner)
}

/// Parse a `key = value` line.
pub(crate) fn key_value(line: &str, line_no: usize, offset: usize) -> Result<(&str, &str)> {
    let Some((k, v)) = line.split_once('=') else {
        return Err(Error::parse(line_no, offset + 1, "expected `key = value`"));
    };
    Ok((k.trim(), v.trim()))
}

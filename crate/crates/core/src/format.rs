//! Text format for generator lists.
//!
//! ```text
//! # comment
//! degree 7
//! g: (5 6 7)
//! [7,1,1,1,2,3,4]
//! t: classes {1,2,3,4}->1; {5}->2; {6}->3; {7}->4
//! ```
//!
//! Points are 1-based. Labels are optional. Cycle products are composed
//! left to right.

use std::path::Path;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::{Permutation, Transformation, MAX_DEGREE};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub label: Option<String>,
    pub map: Transformation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorFile {
    pub degree: usize,
    pub entries: Vec<Entry>,
}

impl GeneratorFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut degree = None;
        let mut entries = Vec::new();
        for (number, raw) in text.lines().enumerate() {
            let line_no = number + 1;
            let err = |message: String| Error::Parse { line: line_no, message };
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let Some(n) = degree else {
                let n = line
                    .strip_prefix("degree")
                    .and_then(|rest| rest.trim().parse::<usize>().ok())
                    .ok_or_else(|| err("expected `degree <n>` header".into()))?;
                if n == 0 || n > MAX_DEGREE {
                    return Err(err(format!("degree {n} outside 1..={MAX_DEGREE}")));
                }
                degree = Some(n);
                continue;
            };
            let (label, body) = split_label(line);
            let map = parse_map(body, n).map_err(err)?;
            entries.push(Entry { label: label.map(str::to_string), map });
        }
        let degree = degree.ok_or(Error::Parse { line: 0, message: "missing `degree <n>` header".into() })?;
        Ok(Self { degree, entries })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn transformations(&self) -> Vec<Transformation> {
        self.entries.iter().map(|e| e.map.clone()).collect()
    }

    pub fn permutations(&self) -> Result<Vec<Permutation>> {
        self.entries
            .iter()
            .map(|e| e.map.to_permutation().ok_or_else(|| Error::NotBijective(e.map.to_string())))
            .collect()
    }

    pub fn group(&self) -> Result<PermGroup> {
        PermGroup::generate(self.degree, &self.permutations()?)
    }

    pub fn get(&self, label: &str) -> Option<&Transformation> {
        self.entries.iter().find(|e| e.label.as_deref() == Some(label)).map(|e| &e.map)
    }
}

fn split_label(line: &str) -> (Option<&str>, &str) {
    if let Some((head, rest)) = line.split_once(':') {
        let head = head.trim();
        let is_ident = head.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
            && head.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'');
        if is_ident {
            return (Some(head), rest.trim());
        }
    }
    (None, line)
}

fn point(token: &str, n: usize) -> std::result::Result<usize, String> {
    let x: usize = token.trim().parse().map_err(|_| format!("bad point `{}`", token.trim()))?;
    if x == 0 || x > n {
        return Err(format!("point {x} outside 1..={n}"));
    }
    Ok(x - 1)
}

fn parse_map(body: &str, n: usize) -> std::result::Result<Transformation, String> {
    if body.starts_with('(') {
        parse_cycles(body, n).map(|p| p.as_transformation())
    } else if let Some(inner) = body.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
        let images = inner.split(',').map(|t| point(t, n)).collect::<std::result::Result<Vec<_>, _>>()?;
        if images.len() != n {
            return Err(format!("image list has {} entries, expected {n}", images.len()));
        }
        Transformation::new(images).map_err(|e| e.to_string())
    } else if let Some(rest) = body.strip_prefix("classes") {
        parse_classes(rest, n)
    } else {
        Err(format!("unrecognized generator `{body}`"))
    }
}

fn parse_cycles(body: &str, n: usize) -> std::result::Result<Permutation, String> {
    let mut result = Permutation::identity(n);
    let mut rest = body.trim();
    while !rest.is_empty() {
        let inner_end = rest.find(')').ok_or("unclosed cycle")?;
        let inner = rest.strip_prefix('(').ok_or_else(|| format!("expected `(` at `{rest}`"))?;
        let inner = &inner[..inner_end - 1];
        let cycle = inner
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| point(t, n))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let cycle = Permutation::from_cycles(n, &[cycle]).map_err(|e| e.to_string())?;
        result = result.then(&cycle);
        rest = rest[inner_end + 1..].trim_start();
    }
    Ok(result)
}

fn parse_classes(body: &str, n: usize) -> std::result::Result<Transformation, String> {
    let mut classes = Vec::new();
    let mut images = Vec::new();
    for part in body.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (set, image) = part.split_once("->").ok_or_else(|| format!("expected `{{..}}->x` in `{part}`"))?;
        let set = set
            .trim()
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| format!("expected braces in `{part}`"))?;
        classes.push(set.split(',').map(|t| point(t, n)).collect::<std::result::Result<Vec<_>, _>>()?);
        images.push(point(image, n)?);
    }
    Transformation::from_kernel(n, &classes, &images).map_err(|e| e.to_string())
}

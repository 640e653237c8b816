//! Line-oriented input documents: universe descriptions and `P_ID` tables.
//!
//! Both share one layout. Top-level `key: value` lines open a section, and
//! `- item` lines belong to the section above them. `#` starts a comment.
//!
//! ```text
//! species: photon, electron
//! atoms:
//!   - a micro photon
//!   - m macro
//! qsets:
//!   - x: a, b
//! ```
//!
//! ```text
//! sources: s1, s2
//! pid:
//!   - 1, 0.9
//!   - [0.9, 1]
//! ```

use std::collections::HashMap;
use std::fmt;

use indist_core::quasiset::{QuasisetError, Universe};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}

impl std::error::Error for ParseError {}

/// A piece of text with its 1-based position in the source.
#[derive(Debug, Clone, PartialEq)]
struct Span<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl<'a> Span<'a> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::at(self.line, self.column, message)
    }

    fn trim(&self) -> Span<'a> {
        let lead = self.text.len() - self.text.trim_start().len();
        Span {
            text: self.text.trim(),
            line: self.line,
            column: self.column + self.text[..lead].chars().count(),
        }
    }

    fn split_once(&self, sep: char) -> Option<(Span<'a>, Span<'a>)> {
        let i = self.text.find(sep)?;
        let head = Span {
            text: &self.text[..i],
            ..*self
        };
        let tail = Span {
            text: &self.text[i + sep.len_utf8()..],
            line: self.line,
            column: self.column + self.text[..=i].chars().count(),
        };
        Some((head, tail))
    }

    /// Comma-separated pieces, trimmed; optional surrounding brackets are dropped.
    /// An empty list yields no pieces.
    fn list(&self) -> Result<Vec<Span<'a>>, ParseError> {
        let mut s = self.trim();
        if let Some(inner) = s.text.strip_prefix('[') {
            let Some(inner) = inner.strip_suffix(']') else {
                return Err(s.error("unclosed `[`"));
            };
            s = Span {
                text: inner,
                line: s.line,
                column: s.column + 1,
            }
            .trim();
        }
        if s.text.is_empty() {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let mut rest = s;
        loop {
            match rest.split_once(',') {
                Some((head, tail)) => {
                    out.push(head.trim());
                    rest = tail;
                }
                None => {
                    out.push(rest.trim());
                    break;
                }
            }
        }
        if let Some(empty) = out.iter().find(|p| p.text.is_empty()) {
            return Err(empty.error("empty list entry"));
        }
        Ok(out)
    }
}

#[derive(Debug)]
enum Line<'a> {
    Section { key: Span<'a>, value: Span<'a> },
    Item(Span<'a>),
}

fn lines(src: &str) -> Result<Vec<Line<'_>>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let text = raw.split('#').next().unwrap_or("");
        let span = Span {
            text,
            line: i + 1,
            column: 1,
        }
        .trim();
        if span.text.is_empty() {
            continue;
        }
        if let Some(item) = span.text.strip_prefix('-') {
            out.push(Line::Item(
                Span {
                    text: item,
                    line: span.line,
                    column: span.column + 1,
                }
                .trim(),
            ));
        } else if let Some((key, value)) = span.split_once(':') {
            out.push(Line::Section {
                key: key.trim(),
                value: value.trim(),
            });
        } else {
            return Err(span.error("expected `key: value` or `- item`"));
        }
    }
    Ok(out)
}

/// Sections in file order; each holds its inline value and its items.
fn sections<'a>(
    src: &'a str,
    known: &[&str],
) -> Result<HashMap<String, (Span<'a>, Vec<Span<'a>>)>, ParseError> {
    let mut out: HashMap<String, (Span<'a>, Vec<Span<'a>>)> = HashMap::new();
    let mut current: Option<String> = None;
    for line in lines(src)? {
        match line {
            Line::Section { key, value } => {
                if !known.contains(&key.text) {
                    return Err(key.error(format!("unknown section `{}`", key.text)));
                }
                if out.contains_key(key.text) {
                    return Err(key.error(format!("section `{}` appears twice", key.text)));
                }
                out.insert(key.text.to_string(), (value, Vec::new()));
                current = Some(key.text.to_string());
            }
            Line::Item(item) => {
                let Some(name) = &current else {
                    return Err(item.error("list item outside any section"));
                };
                out.get_mut(name).expect("section recorded").1.push(item);
            }
        }
    }
    Ok(out)
}

fn identifier<'a>(s: &Span<'a>, what: &str) -> Result<&'a str, ParseError> {
    let ok = !s.text.is_empty()
        && s.text
            .chars()
            .all(|c| c.is_alphanumeric() || matches!(c, '_' | '.' | '\'' | '-'));
    if ok {
        Ok(s.text)
    } else {
        Err(s.error(format!("invalid {what} `{}`", s.text)))
    }
}

/// Entries of a section given either inline or as `- item` lines.
fn entries<'a>(section: &(Span<'a>, Vec<Span<'a>>)) -> Result<Vec<Span<'a>>, ParseError> {
    let (inline, items) = section;
    if !inline.text.is_empty() && !items.is_empty() {
        return Err(items[0].error("section has both an inline list and items"));
    }
    if inline.text.is_empty() {
        Ok(items.clone())
    } else {
        inline.list()
    }
}

/// Parse and build a universe description.
pub fn parse_universe(src: &str) -> Result<Universe, ParseError> {
    let secs = sections(src, &["species", "atoms", "qsets"])?;
    let eof = ParseError::at(src.lines().count().max(1), 1, "missing `species:` section");
    let species = match secs.get("species") {
        Some(s) => entries(s)?,
        None => return Err(eof),
    };

    let mut b = Universe::builder();
    let mut species_at: HashMap<&str, &Span> = HashMap::new();
    for s in &species {
        let label = identifier(s, "species label")?;
        if species_at.insert(label, s).is_some() {
            return Err(s.error(format!("duplicate species `{label}`")));
        }
        b = b.species(label);
    }

    let mut names: HashMap<String, (usize, usize)> = HashMap::new();
    let mut declare = |s: &Span<'_>, name: &str| -> Result<(), ParseError> {
        if names.contains_key(name) {
            return Err(s.error(format!("duplicate name `{name}`")));
        }
        names.insert(name.to_string(), (s.line, s.column));
        Ok(())
    };

    if let Some(atoms) = secs.get("atoms") {
        if !atoms.0.text.is_empty() {
            return Err(atoms
                .0
                .error("atoms are listed as `- name micro species` or `- name macro` items"));
        }
        for item in &atoms.1 {
            let words: Vec<&str> = item.text.split_whitespace().collect();
            let name = identifier(
                &Span {
                    text: words.first().copied().unwrap_or(""),
                    ..item.clone()
                },
                "atom name",
            )?;
            declare(item, name)?;
            match words.as_slice() {
                [_, "micro", sp] => {
                    if !species_at.contains_key(sp) {
                        let col = item.column + item.text.rfind(sp).unwrap_or(0);
                        return Err(ParseError::at(
                            item.line,
                            col,
                            format!("unknown species `{sp}`"),
                        ));
                    }
                    b = b.micro(name, *sp);
                }
                [_, "macro"] => b = b.macro_atom(name),
                _ => return Err(item.error("expected `name micro species` or `name macro`")),
            }
        }
    }

    let mut qset_lines = Vec::new();
    if let Some(qsets) = secs.get("qsets") {
        if !qsets.0.text.is_empty() {
            return Err(qsets
                .0
                .error("qsets are listed as `- name: member, …` items"));
        }
        for item in &qsets.1 {
            let Some((name, members)) = item.split_once(':') else {
                return Err(item.error("expected `name: member, …`"));
            };
            let name = identifier(&name.trim(), "qset name")?;
            declare(item, name)?;
            let members = members.list()?;
            for m in &members {
                identifier(m, "member name")?;
            }
            qset_lines.push((name, members));
        }
    }
    for (name, members) in &qset_lines {
        let mut seen = Vec::new();
        for m in members {
            if !names.contains_key(m.text) {
                return Err(m.error(format!("unknown member `{}`", m.text)));
            }
            if seen.contains(&m.text) {
                return Err(m.error(format!("`{}` listed twice in `{name}`", m.text)));
            }
            seen.push(m.text);
        }
        b = b.qset(*name, members.iter().map(|m| m.text));
    }

    b.build().map_err(|e| {
        let pos = match &e {
            QuasisetError::Cycle(n)
            | QuasisetError::DuplicateName(n)
            | QuasisetError::UnknownTerm(n) => names.get(n).copied(),
            _ => None,
        };
        let (line, column) = pos.unwrap_or((1, 1));
        ParseError::at(line, column, e.to_string())
    })
}

/// A parsed `P_ID` table document.
#[derive(Debug, Clone, PartialEq)]
pub struct PidTable {
    pub sources: Vec<String>,
    pub pid: Vec<Vec<f64>>,
}

pub fn parse_pid_table(src: &str) -> Result<PidTable, ParseError> {
    let secs = sections(src, &["sources", "pid"])?;
    let last = src.lines().count().max(1);
    let sources = secs
        .get("sources")
        .ok_or_else(|| ParseError::at(last, 1, "missing `sources:` section"))?;
    let sources: Vec<String> = entries(sources)?
        .iter()
        .map(|s| identifier(s, "source label").map(str::to_string))
        .collect::<Result<_, _>>()?;
    let (inline, rows) = secs
        .get("pid")
        .ok_or_else(|| ParseError::at(last, 1, "missing `pid:` section"))?;
    if !inline.text.is_empty() {
        return Err(inline.error("rows are listed as `- v, v, …` items"));
    }
    let mut pid = Vec::new();
    for row in rows {
        let values = row
            .list()?
            .iter()
            .map(|v| {
                v.text
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| v.error(format!("`{}` is not a finite number", v.text)))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        if values.len() != sources.len() {
            return Err(row.error(format!(
                "row has {} entries, expected {}",
                values.len(),
                sources.len()
            )));
        }
        pid.push(values);
    }
    if pid.len() != sources.len() {
        return Err(ParseError::at(
            rows.last().map_or(inline.line, |r| r.line),
            1,
            format!("{} rows for {} sources", pid.len(), sources.len()),
        ));
    }
    Ok(PidTable { sources, pid })
}

#[cfg(test)]
mod tests {
    use super::*;
    use indist_core::quasiset::{indist, quasi_cardinality};

    const PHOTONS: &str = "\
# three photons and a detector
species: photon
atoms:
  - a micro photon
  - b micro photon
  - c micro photon
  - det macro
qsets:
  - x: a, b
  - all: [a, b, c]
  - empty:
";

    #[test]
    fn universe_round() {
        let u = parse_universe(PHOTONS).unwrap();
        let t = |n| u.lookup(n).unwrap();
        assert!(indist(&u, t("a"), t("c")).unwrap());
        assert!(!indist(&u, t("a"), t("det")).unwrap());
        assert_eq!(quasi_cardinality(&u, t("all")).unwrap(), 3);
        assert_eq!(quasi_cardinality(&u, t("empty")).unwrap(), 0);
    }

    #[test]
    fn species_as_items() {
        let src = "species:\n  - p\n  - q\natoms:\n  - a micro q\n";
        let u = parse_universe(src).unwrap();
        assert_eq!(u.species(), ["p", "q"]);
    }

    #[test]
    fn positioned_errors() {
        let dup = "species: p\natoms:\n  - a micro p\n  - a micro p\n";
        assert_eq!(
            parse_universe(dup).unwrap_err(),
            ParseError::at(4, 5, "duplicate name `a`")
        );

        let unknown = "species: p\natoms:\n  - a micro q\n";
        let e = parse_universe(unknown).unwrap_err();
        assert_eq!((e.line, e.column), (3, 13));

        let member = "species: p\natoms:\n  - a micro p\nqsets:\n  - x: a, zz\n";
        let e = parse_universe(member).unwrap_err();
        assert_eq!(
            (e.line, e.column, e.message.as_str()),
            (5, 11, "unknown member `zz`")
        );

        let junk = "species: p\nwhat is this\n";
        assert_eq!(parse_universe(junk).unwrap_err().line, 2);

        let section = "species: p\nelements: a\n";
        assert_eq!(
            parse_universe(section).unwrap_err().message,
            "unknown section `elements`"
        );

        assert!(parse_universe("atoms:\n")
            .unwrap_err()
            .message
            .contains("species"));
    }

    #[test]
    fn cycles_are_reported_at_the_qset() {
        let src = "species: p\nqsets:\n  - x: y\n  - y: x\n";
        let e = parse_universe(src).unwrap_err();
        assert!(e.line == 3 || e.line == 4, "{e}");
    }

    #[test]
    fn pid_tables() {
        let src = "sources: [s1, s2]\npid:\n  - 1, 0.9\n  - [0.9, 1.0]  # row two\n";
        let t = parse_pid_table(src).unwrap();
        assert_eq!(t.sources, ["s1", "s2"]);
        assert_eq!(t.pid, vec![vec![1.0, 0.9], vec![0.9, 1.0]]);

        let bad = "sources: s1, s2\npid:\n  - 1, zero\n  - 0, 1\n";
        let e = parse_pid_table(bad).unwrap_err();
        assert_eq!((e.line, e.column), (3, 8));

        let short = "sources: s1, s2\npid:\n  - 1, 0\n";
        assert!(parse_pid_table(short)
            .unwrap_err()
            .message
            .contains("1 rows"));

        let ragged = "sources: s1, s2\npid:\n  - 1\n  - 0, 1\n";
        assert_eq!(parse_pid_table(ragged).unwrap_err().line, 3);
    }
}

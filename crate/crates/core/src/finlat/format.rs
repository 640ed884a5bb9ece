//! Lattice text format:
//!
//! ```text
//! elements: 4 0 a a' 1
//! bottom: 0
//! top: 1
//! leq:
//! 0 a
//! ...
//! ortho:
//! a a'
//! ...
//! ```
//!
//! `leq:` pairs generate the order (the reflexive-transitive closure is
//! taken); output lists exactly the covering pairs. `ortho:` pairs are read
//! symmetrically. Blank lines and lines starting with `#` are ignored.

use std::collections::HashMap;

use super::lattice::FiniteOrtholattice;
use super::FinLatError;

enum Section {
    Header,
    Leq,
    Ortho,
}

pub fn parse_lattice(text: &str) -> Result<FiniteOrtholattice, FinLatError> {
    let err = |line: usize, msg: String| FinLatError::Parse { line, msg };
    let mut names: Option<Vec<String>> = None;
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut bottom = None;
    let mut top = None;
    let mut pairs = Vec::new();
    let mut ortho: Option<Vec<Option<usize>>> = None;
    let mut section = Section::Header;

    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("elements:") {
            let mut toks = rest.split_whitespace();
            let count: usize = toks
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| err(ln, "expected element count".into()))?;
            let ns: Vec<String> = toks.map(str::to_string).collect();
            if ns.len() != count {
                return Err(err(
                    ln,
                    format!("declared {count} elements, listed {}", ns.len()),
                ));
            }
            for (i, n) in ns.iter().enumerate() {
                if index.insert(n.clone(), i).is_some() {
                    return Err(err(ln, format!("duplicate element `{n}`")));
                }
            }
            names = Some(ns);
            continue;
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| err(ln, format!("unknown element `{name}`")))
        };
        if let Some(rest) = line.strip_prefix("bottom:") {
            bottom = Some(lookup(rest.trim())?);
        } else if let Some(rest) = line.strip_prefix("top:") {
            top = Some(lookup(rest.trim())?);
        } else if line == "leq:" {
            section = Section::Leq;
        } else if line == "ortho:" {
            section = Section::Ortho;
            ortho.get_or_insert_with(|| vec![None; index.len()]);
        } else {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let [a, b] = toks[..] else {
                return Err(err(ln, "expected a pair of element names".into()));
            };
            let (a, b) = (lookup(a)?, lookup(b)?);
            match section {
                Section::Header => {
                    return Err(err(ln, "pair outside a `leq:` or `ortho:` section".into()))
                }
                Section::Leq => pairs.push((a, b)),
                Section::Ortho => {
                    let o = ortho.as_mut().expect("section opened");
                    for (x, y) in [(a, b), (b, a)] {
                        if o[x].is_some_and(|old| old != y) {
                            return Err(err(
                                ln,
                                format!(
                                    "conflicting complement for `{}`",
                                    names.as_ref().unwrap()[x]
                                ),
                            ));
                        }
                        o[x] = Some(y);
                    }
                }
            }
        }
    }
    let names = names.ok_or_else(|| err(0, "missing `elements:` line".into()))?;
    let ortho = match ortho {
        None => None,
        Some(o) => Some(
            o.iter()
                .enumerate()
                .map(|(i, y)| {
                    y.ok_or_else(|| err(0, format!("no complement given for `{}`", names[i])))
                })
                .collect::<Result<Vec<_>, _>>()?,
        ),
    };
    let l = FiniteOrtholattice::from_order(names, &pairs, ortho)?;
    if bottom.is_some_and(|b| b != l.bottom()) {
        return Err(FinLatError::Structure(
            "declared bottom is not the least element".into(),
        ));
    }
    if top.is_some_and(|t| t != l.top()) {
        return Err(FinLatError::Structure(
            "declared top is not the greatest element".into(),
        ));
    }
    Ok(l)
}

pub fn write_lattice(l: &FiniteOrtholattice) -> String {
    let mut out = format!("elements: {} {}\n", l.len(), l.names().join(" "));
    out += &format!(
        "bottom: {}\ntop: {}\nleq:\n",
        l.name(l.bottom()),
        l.name(l.top())
    );
    for (a, b) in l.cover_pairs() {
        out += &format!("{} {}\n", l.name(a), l.name(b));
    }
    if let Some(o) = l.ortho_table() {
        out += "ortho:\n";
        for (x, &y) in o.iter().enumerate() {
            out += &format!("{} {}\n", l.name(x), l.name(y));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finlat::{boolean, chain, mo, o6, product};

    #[test]
    fn round_trip() {
        for l in [
            mo(3),
            boolean(3),
            o6(),
            chain(4),
            product(&mo(2), &boolean(1)),
        ] {
            let text = write_lattice(&l);
            let back = parse_lattice(&text).unwrap();
            assert_eq!(back, l);
            assert_eq!(write_lattice(&back), text);
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_lattice("elements: 2 0\n"),
            Err(FinLatError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_lattice("elements: 2 0 1\nleq:\n0 x\n"),
            Err(FinLatError::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_lattice("elements: 2 0 1\nbottom: 1\nleq:\n0 1\n"),
            Err(FinLatError::Structure(_))
        ));
        assert!(parse_lattice("elements: 3 0 a 1\nleq:\n0 a\na 1\northo:\n0 1\n").is_err());
    }

    #[test]
    fn generating_pairs_are_closed() {
        let l = parse_lattice("elements: 3 0 a 1\nleq:\n0 a\na 1\n").unwrap();
        assert!(l.leq(0, 2));
        assert_eq!(l.bottom(), 0);
    }
}

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use molkit::exactla::parse_rational;
use molkit::finlat::{boolean, chain, interval_subalgebra, mo, o6, parse_lattice, product_all};
use molkit::geometry::parse_geometry;
use molkit::{FiniteOrtholattice, FormSpace, PointGeometry, Rational, RationalMatrix, Subspace};

pub fn read(path: &str) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read `{path}`"))
}

/// Built-in lattices: `mo:N`, `bool:N`, `chain:N`, `o6`,
/// `prod:S1,S2,...` and `interval:LO,HI:S` (the interval `[LO, HI]` of `S`
/// as an ortholattice with relative complements).
pub fn builtin_lattice(spec: &str) -> Result<FiniteOrtholattice> {
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| anyhow!("bad size `{s}` in `{spec}`"))
    };
    if spec == "o6" {
        return Ok(o6());
    }
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| anyhow!("unknown lattice spec `{spec}`"))?;
    Ok(match kind {
        "mo" => mo(num(rest)?),
        "bool" => boolean(num(rest)?),
        "chain" => chain(num(rest)?),
        "prod" => {
            let parts = rest
                .split(',')
                .map(builtin_lattice)
                .collect::<Result<Vec<_>>>()?;
            product_all(&parts)
        }
        "interval" => {
            let (bounds, inner) = rest
                .split_once(':')
                .ok_or_else(|| anyhow!("expected interval:LO,HI:SPEC"))?;
            let (lo, hi) = bounds
                .split_once(',')
                .ok_or_else(|| anyhow!("expected interval:LO,HI:SPEC"))?;
            let l = builtin_lattice(inner)?;
            let (lo, hi) = (l.index_of(lo)?, l.index_of(hi)?);
            interval_subalgebra(&l, hi, lo)?.0
        }
        _ => bail!("unknown lattice spec `{spec}`"),
    })
}

/// A lattice file, or a built-in spec when no such file exists.
pub fn lattice(arg: &str) -> Result<FiniteOrtholattice> {
    if Path::new(arg).is_file() {
        Ok(parse_lattice(&read(arg)?).with_context(|| format!("in `{arg}`"))?)
    } else {
        builtin_lattice(arg)
    }
}

pub fn geometry(path: &str) -> Result<PointGeometry> {
    Ok(parse_geometry(&read(path)?).with_context(|| format!("in `{path}`"))?)
}

pub fn subspace(path: &str) -> Result<Subspace> {
    read(path)?.parse().with_context(|| format!("in `{path}`"))
}

pub fn rational(s: &str) -> Result<Rational> {
    parse_rational(s.trim()).ok_or_else(|| anyhow!("bad rational `{s}`"))
}

/// Inline matrix: rows separated by `;`, entries by spaces or commas.
/// A single entry is a 1×1 matrix.
pub fn inline_matrix(s: &str) -> Result<RationalMatrix> {
    let rows = s
        .split(';')
        .map(|r| {
            r.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(rational)
                .collect()
        })
        .collect::<Result<Vec<Vec<Rational>>>>()?;
    Ok(RationalMatrix::from_rows(rows).with_context(|| format!("bad matrix `{s}`"))?)
}

/// A form: `identity:N`, `diag:d1,d2,...`, or a Gram matrix file.
pub fn form(spec: &str) -> Result<FormSpace> {
    if let Some(n) = spec.strip_prefix("identity:") {
        return Ok(FormSpace::identity(
            n.parse().map_err(|_| anyhow!("bad dimension `{n}`"))?,
        ));
    }
    if let Some(d) = spec.strip_prefix("diag:") {
        let entries = d.split(',').map(rational).collect::<Result<Vec<_>>>()?;
        return Ok(FormSpace::diagonal(&entries)?);
    }
    let gram: RationalMatrix = read(spec)?
        .parse()
        .with_context(|| format!("in `{spec}`"))?;
    Ok(FormSpace::new(gram)?)
}

/// `i,j` with 1-based indices, returned 0-based.
pub fn index_pair(s: &str) -> Result<(usize, usize)> {
    let (i, j) = s
        .split_once(',')
        .ok_or_else(|| anyhow!("expected `i,j`, got `{s}`"))?;
    let p = |t: &str| -> Result<usize> {
        let v: usize = t.trim().parse().map_err(|_| anyhow!("bad index `{t}`"))?;
        v.checked_sub(1)
            .ok_or_else(|| anyhow!("indices are 1-based"))
    };
    Ok((p(i)?, p(j)?))
}

pub fn subspace_line(u: &Subspace) -> String {
    format!(
        "dim {}: {:?}",
        u.dim(),
        u.basis_vectors()
            .iter()
            .map(|v| v
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" "))
            .collect::<Vec<_>>()
    )
}

/// Inverse of `inline_matrix`: `1 2; 3 4`.
pub fn matrix_inline(m: &RationalMatrix) -> String {
    m.row_vecs()
        .iter()
        .map(|r| {
            r.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join("; ")
}

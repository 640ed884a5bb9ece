//! Von Neumann frames in subspace lattices of Q^N, their coordinate domains
//! and the ring operations on them given by lattice polynomials.
//!
//! Indices are 0-based in the API and printed 1-based in messages.
//! A block frame assigns each index `i` a list of coordinates `blocks[i]`
//! (all of one size `m`); then `a_i` is the span of those coordinates and
//! `a_ij` is spanned by the paired differences. For such frames the element
//! of `R_ij` with matrix `r` (m×m) is the subspace `{x at block i, −r·x at
//! block j}`.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_traits::Zero;
use thiserror::Error;

use crate::exactla::{LinAlgError, Rational, RationalMatrix};
use crate::subspaces::{FormSpace, Subspace, SubspaceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("frame axiom fails: {0}")]
    AxiomViolation(String),
    #[error("a frame needs order at least 3, got {0}")]
    OrderTooSmall(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index mismatch: {0}")]
    IndexMismatch(String),
    #[error("no single transfer from R_{0} to R_{1}")]
    BadIndexPattern(String, String),
    #[error("element is not in the coordinate domain R_{0}")]
    NotInCoordinateDomain(String),
    #[error("frame has no form")]
    NoForm,
    #[error("frame is not orthogonal")]
    NotOrthogonal,
    #[error("frame is not spanning")]
    NotSpanning,
    #[error("frame has no coordinate blocks")]
    NotBlockFrame,
    #[error("alpha block {0} is singular")]
    SingularAlpha(usize),
    #[error("alpha block {0} is not symmetric")]
    NonHermitianAlpha(usize),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

fn label(i: usize, j: usize) -> String {
    format!("{}{}", i + 1, j + 1)
}

fn join(x: &Subspace, y: &Subspace) -> Result<Subspace, FrameError> {
    Ok(x.sum(y)?)
}

fn meet(x: &Subspace, y: &Subspace) -> Result<Subspace, FrameError> {
    Ok(x.intersect(y)?)
}

#[derive(Clone, Debug)]
pub struct Frame {
    a: Vec<Subspace>,
    pairs: Vec<Vec<Option<Subspace>>>,
    form: Option<FormSpace>,
    blocks: Option<Vec<Vec<usize>>>,
    spanning: bool,
    orthogonal: Option<bool>,
}

/// Checks the frame axioms for `a_i` and `a_ij` (keys `(i, j)`; a missing
/// `(j, i)` is taken from `(i, j)`), and records whether the frame is
/// spanning and, given a form, orthogonal.
pub fn check_frame(
    a: Vec<Subspace>,
    pairs: &BTreeMap<(usize, usize), Subspace>,
    form: Option<FormSpace>,
) -> Result<Frame, FrameError> {
    let n = a.len();
    if n < 3 {
        return Err(FrameError::OrderTooSmall(n));
    }
    let dim = a[0].ambient();
    if let Some(x) = a.iter().chain(pairs.values()).find(|x| x.ambient() != dim) {
        return Err(FrameError::DimensionMismatch(format!(
            "ambient {} vs {dim}",
            x.ambient()
        )));
    }
    if let Some(f) = &form {
        if f.dim() != dim {
            return Err(FrameError::DimensionMismatch(format!(
                "form on Q^{} vs ambient {dim}",
                f.dim()
            )));
        }
    }
    let mut table = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let x = match (pairs.get(&(i, j)), pairs.get(&(j, i))) {
                (Some(x), Some(y)) if x != y => {
                    return Err(FrameError::AxiomViolation(format!(
                        "a_{} = a_{}",
                        label(i, j),
                        label(j, i)
                    )));
                }
                (Some(x), _) | (None, Some(x)) => x.clone(),
                (None, None) => {
                    return Err(FrameError::AxiomViolation(format!(
                        "a_{} missing",
                        label(i, j)
                    )))
                }
            };
            table[i][j] = Some(x);
        }
    }
    if let Some(&(i, j)) = pairs.keys().find(|&&(i, j)| i >= n || j >= n || i == j) {
        return Err(FrameError::IndexMismatch(format!(
            "pair ({}, {}) for a frame of order {n}",
            i + 1,
            j + 1
        )));
    }
    let mut frame = Frame {
        a,
        pairs: table,
        form,
        blocks: None,
        spanning: false,
        orthogonal: None,
    };
    frame.validate()?;
    Ok(frame)
}

impl Frame {
    fn validate(&mut self) -> Result<(), FrameError> {
        let n = self.order();
        let dim = self.ambient();
        let fail = |s: String| Err(FrameError::AxiomViolation(s));
        let mut prod = Subspace::full(dim);
        let mut sum = Subspace::zero(dim);
        for x in &self.a {
            prod = meet(&prod, x)?;
            sum = join(&sum, x)?;
        }
        for j in 0..n {
            let mut others = Subspace::zero(dim);
            for i in (0..n).filter(|&i| i != j) {
                others = join(&others, &self.a[i])?;
            }
            if meet(&self.a[j], &others)? != prod {
                return fail(format!("a_{} · Σ_(i≠{}) a_i = Π a_i", j + 1, j + 1));
            }
            for k in (0..n).filter(|&k| k != j) {
                let ajk = self.pair(j, k);
                if meet(&self.a[j], ajk)? != prod {
                    return fail(format!("a_{} · a_{} = Π a_i", j + 1, label(j, k)));
                }
                if join(&self.a[j], ajk)? != join(&self.a[j], &self.a[k])? {
                    return fail(format!(
                        "a_{} + a_{} = a_{} + a_{}",
                        j + 1,
                        label(j, k),
                        j + 1,
                        k + 1
                    ));
                }
                for l in (0..n).filter(|&l| l != j && l != k) {
                    let rhs = meet(&join(&self.a[j], &self.a[l])?, &join(ajk, self.pair(k, l))?)?;
                    if *self.pair(j, l) != rhs {
                        return fail(format!(
                            "a_{} = (a_{} + a_{})(a_{} + a_{})",
                            label(j, l),
                            j + 1,
                            l + 1,
                            label(j, k),
                            label(k, l)
                        ));
                    }
                }
            }
        }
        self.spanning = prod.is_zero() && sum.is_full();
        self.orthogonal = match &self.form {
            None => None,
            Some(f) => {
                let mut ok = true;
                for j in 0..n {
                    for k in j + 1..n {
                        ok &= f.is_orthogonal(&self.a[j], &self.a[k])?;
                    }
                }
                Some(ok)
            }
        };
        Ok(())
    }

    /// Block frame on the given coordinate lists (all of equal length).
    pub fn from_blocks(
        ambient: usize,
        blocks: Vec<Vec<usize>>,
        form: Option<FormSpace>,
    ) -> Result<Self, FrameError> {
        let m = blocks.first().map_or(0, Vec::len);
        if blocks
            .iter()
            .any(|b| b.len() != m || b.iter().any(|&c| c >= ambient))
        {
            return Err(FrameError::DimensionMismatch(
                "blocks must have equal size and lie in the ambient space".into(),
            ));
        }
        let a: Vec<Subspace> = blocks
            .iter()
            .map(|b| Subspace::coordinate(ambient, b.iter().copied()))
            .collect();
        let mut pairs = BTreeMap::new();
        for i in 0..blocks.len() {
            for j in i + 1..blocks.len() {
                let vecs: Vec<Vec<Rational>> = (0..m)
                    .map(|t| {
                        let mut v = vec![Rational::zero(); ambient];
                        v[blocks[i][t]] = Rational::from_integer(1.into());
                        v[blocks[j][t]] = Rational::from_integer((-1).into());
                        v
                    })
                    .collect();
                pairs.insert((i, j), Subspace::span(ambient, &vecs)?);
            }
        }
        let mut f = check_frame(a, &pairs, form)?;
        f.blocks = Some(blocks);
        Ok(f)
    }

    pub fn order(&self) -> usize {
        self.a.len()
    }

    pub fn ambient(&self) -> usize {
        self.a[0].ambient()
    }

    pub fn a(&self, i: usize) -> &Subspace {
        &self.a[i]
    }

    pub fn pair(&self, i: usize, j: usize) -> &Subspace {
        self.pairs[i][j].as_ref().expect("i != j")
    }

    pub fn form(&self) -> Option<&FormSpace> {
        self.form.as_ref()
    }

    pub fn blocks(&self) -> Option<&[Vec<usize>]> {
        self.blocks.as_deref()
    }

    pub fn block_size(&self) -> Option<usize> {
        self.blocks.as_ref().map(|b| b[0].len())
    }

    pub fn is_spanning(&self) -> bool {
        self.spanning
    }

    pub fn is_orthogonal(&self) -> bool {
        self.orthogonal == Some(true)
    }

    pub fn ortho(&self, x: &Subspace) -> Result<Subspace, FrameError> {
        Ok(self
            .form
            .as_ref()
            .ok_or(FrameError::NoForm)?
            .ortho_complement(x)?)
    }

    /// Whether `x · a_j = a_i · a_j` and `x + a_j = a_i + a_j`.
    pub fn in_domain(&self, x: &Subspace, i: usize, j: usize) -> Result<bool, FrameError> {
        self.check_pair(i, j)?;
        Ok(meet(x, &self.a[j])? == meet(&self.a[i], &self.a[j])?
            && join(x, &self.a[j])? == join(&self.a[i], &self.a[j])?)
    }

    /// Least index other than `i` and `j`.
    pub fn default_aux(&self, i: usize, j: usize) -> usize {
        (0..self.order())
            .find(|&k| k != i && k != j)
            .expect("order at least 3")
    }

    fn check_pair(&self, i: usize, j: usize) -> Result<(), FrameError> {
        if i == j || i >= self.order() || j >= self.order() {
            return Err(FrameError::IndexMismatch(format!(
                "({}, {}) in a frame of order {}",
                i + 1,
                j + 1,
                self.order()
            )));
        }
        Ok(())
    }

    fn check_aux(&self, i: usize, j: usize, k: usize) -> Result<(), FrameError> {
        if k == i || k == j || k >= self.order() {
            return Err(FrameError::IndexMismatch(format!(
                "auxiliary index {} for R_{}",
                k + 1,
                label(i, j)
            )));
        }
        Ok(())
    }
}

/// The frame `a_i` = coordinates `i·m .. (i+1)·m`, `a_ij` = paired
/// differences, in `Q^{n·m}`.
pub fn canonical_frame(n: usize, m: usize, form: Option<FormSpace>) -> Result<Frame, FrameError> {
    if let Some(f) = &form {
        if f.dim() != n * m {
            return Err(FrameError::DimensionMismatch(format!(
                "form on Q^{} for {n} blocks of size {m}",
                f.dim()
            )));
        }
    }
    let blocks = (0..n).map(|i| (i * m..(i + 1) * m).collect()).collect();
    Frame::from_blocks(n * m, blocks, form)
}

/// An element of the coordinate domain `R_ij`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingElem {
    i: usize,
    j: usize,
    carrier: Subspace,
}

impl RingElem {
    pub fn new(f: &Frame, i: usize, j: usize, carrier: Subspace) -> Result<Self, FrameError> {
        if !f.in_domain(&carrier, i, j)? {
            return Err(FrameError::NotInCoordinateDomain(label(i, j)));
        }
        Ok(Self { i, j, carrier })
    }

    pub fn indices(&self) -> (usize, usize) {
        (self.i, self.j)
    }

    pub fn carrier(&self) -> &Subspace {
        &self.carrier
    }
}

fn elem(f: &Frame, i: usize, j: usize, carrier: Subspace) -> Result<RingElem, FrameError> {
    RingElem::new(f, i, j, carrier)
}

/// The element of `R_ij` with matrix `r` in a block frame.
pub fn embed_ring(
    f: &Frame,
    r: &RationalMatrix,
    i: usize,
    j: usize,
) -> Result<RingElem, FrameError> {
    f.check_pair(i, j)?;
    let blocks = f.blocks().ok_or(FrameError::NotBlockFrame)?;
    let m = blocks[0].len();
    if r.rows() != m || r.cols() != m {
        return Err(FrameError::DimensionMismatch(format!(
            "{}×{} matrix for blocks of size {m}",
            r.rows(),
            r.cols()
        )));
    }
    let vecs: Vec<Vec<Rational>> = (0..m)
        .map(|t| {
            let mut v = vec![Rational::zero(); f.ambient()];
            v[blocks[i][t]] = Rational::from_integer(1.into());
            for s in 0..m {
                v[blocks[j][s]] = -r.get(s, t).clone();
            }
            v
        })
        .collect();
    elem(f, i, j, Subspace::span(f.ambient(), &vecs)?)
}

pub fn embed_scalar(f: &Frame, c: &Rational, i: usize, j: usize) -> Result<RingElem, FrameError> {
    let m = f.block_size().ok_or(FrameError::NotBlockFrame)?;
    embed_ring(f, &RationalMatrix::scalar(m, c), i, j)
}

/// Inverse of `embed_ring`: the matrix of an element of a block frame.
pub fn coordinate(f: &Frame, r: &RingElem) -> Result<RationalMatrix, FrameError> {
    let blocks = f.blocks().ok_or(FrameError::NotBlockFrame)?;
    let m = blocks[0].len();
    let b = r.carrier.basis();
    let pick = |blk: &[usize]| {
        let mut out = RationalMatrix::zeros(b.rows(), m);
        for s in 0..b.rows() {
            for (t, &c) in blk.iter().enumerate() {
                out.set(s, t, b.get(s, c).clone());
            }
        }
        out
    };
    // Basis rows are (x_s, −r·x_s), so Y = −X·rᵀ.
    let x = pick(&blocks[r.i]);
    let y = pick(&blocks[r.j]);
    let xinv = x
        .inverse()
        .map_err(|_| FrameError::NotInCoordinateDomain(label(r.i, r.j)))?;
    Ok(-&(&xinv * &y).transpose())
}

/// One transfer step: `R_ij → R_iq` by `(r + a_jq)(a_i + a_q)`, or
/// `R_ij → R_pj` by `(r + a_ip)(a_p + a_j)`.
pub fn pi_transfer(f: &Frame, r: &RingElem, p: usize, q: usize) -> Result<RingElem, FrameError> {
    f.check_pair(p, q)?;
    let (i, j) = (r.i, r.j);
    let carrier = if (p, q) == (i, j) {
        r.carrier.clone()
    } else if p == i && q != j {
        meet(&join(&r.carrier, f.pair(j, q))?, &join(&f.a[i], &f.a[q])?)?
    } else if q == j && p != i {
        meet(&join(&r.carrier, f.pair(i, p))?, &join(&f.a[p], &f.a[j])?)?
    } else {
        return Err(FrameError::BadIndexPattern(label(i, j), label(p, q)));
    };
    elem(f, p, q, carrier)
}

/// Moves `r` to `R_pq` by a shortest chain of transfer steps.
pub fn transport(f: &Frame, r: &RingElem, p: usize, q: usize) -> Result<RingElem, FrameError> {
    f.check_pair(p, q)?;
    let n = f.order();
    let start = (r.i, r.j);
    let mut prev: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    let mut queue = VecDeque::from([start]);
    prev.insert(start, start);
    while let Some((i, j)) = queue.pop_front() {
        if (i, j) == (p, q) {
            break;
        }
        let next = (0..n)
            .filter(|&x| x != i && x != j)
            .flat_map(|x| [(i, x), (x, j)]);
        for s in next {
            if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(s) {
                e.insert((i, j));
                queue.push_back(s);
            }
        }
    }
    let mut path = vec![(p, q)];
    while *path.last().unwrap() != start {
        path.push(prev[path.last().unwrap()]);
    }
    let mut cur = r.clone();
    for &(a, b) in path.iter().rev().skip(1) {
        cur = pi_transfer(f, &cur, a, b)?;
    }
    Ok(cur)
}

fn same_domain(r: &RingElem, s: &RingElem) -> Result<(usize, usize), FrameError> {
    if (r.i, r.j) != (s.i, s.j) {
        return Err(FrameError::IndexMismatch(format!(
            "R_{} and R_{}",
            label(r.i, r.j),
            label(s.i, s.j)
        )));
    }
    Ok((r.i, r.j))
}

/// `r ⊕ s = [(r + a_k)(a_ik + a_j) + s_kj](a_i + a_j)` with
/// `s_kj = (s + a_ik)(a_k + a_j)`.
pub fn ring_add_via(
    f: &Frame,
    r: &RingElem,
    s: &RingElem,
    k: usize,
) -> Result<RingElem, FrameError> {
    let (i, j) = same_domain(r, s)?;
    f.check_aux(i, j, k)?;
    let s_kj = meet(&join(&s.carrier, f.pair(i, k))?, &join(&f.a[k], &f.a[j])?)?;
    let lifted = meet(&join(&r.carrier, &f.a[k])?, &join(f.pair(i, k), &f.a[j])?)?;
    elem(
        f,
        i,
        j,
        meet(&join(&lifted, &s_kj)?, &join(&f.a[i], &f.a[j])?)?,
    )
}

pub fn ring_add(f: &Frame, r: &RingElem, s: &RingElem) -> Result<RingElem, FrameError> {
    ring_add_via(f, r, s, f.default_aux(r.i, r.j))
}

/// `⊖r = [(r_ik + a_j)(a_i + a_jk) + a_k](a_i + a_j)` with
/// `r_ik = (r + a_jk)(a_i + a_k)`.
pub fn ring_neg_via(f: &Frame, r: &RingElem, k: usize) -> Result<RingElem, FrameError> {
    let (i, j) = (r.i, r.j);
    f.check_aux(i, j, k)?;
    let r_ik = meet(&join(&r.carrier, f.pair(j, k))?, &join(&f.a[i], &f.a[k])?)?;
    let mirrored = meet(&join(&r_ik, &f.a[j])?, &join(&f.a[i], f.pair(j, k))?)?;
    elem(
        f,
        i,
        j,
        meet(&join(&mirrored, &f.a[k])?, &join(&f.a[i], &f.a[j])?)?,
    )
}

pub fn ring_neg(f: &Frame, r: &RingElem) -> Result<RingElem, FrameError> {
    ring_neg_via(f, r, f.default_aux(r.i, r.j))
}

pub fn ring_sub(f: &Frame, r: &RingElem, s: &RingElem) -> Result<RingElem, FrameError> {
    ring_add(f, r, &ring_neg(f, s)?)
}

/// Product `s·r` of `r ∈ R_ij` and `s ∈ R_jk`, landing in `R_ik`:
/// `(r + s)(a_i + a_k)`.
fn compose(f: &Frame, s: &RingElem, r: &RingElem) -> Result<RingElem, FrameError> {
    let (i, k) = (r.i, s.j);
    elem(
        f,
        i,
        k,
        meet(&join(&r.carrier, &s.carrier)?, &join(&f.a[i], &f.a[k])?)?,
    )
}

/// `s·r` for `r, s ∈ R_ij`, through `R_ik` and `R_kj`.
pub fn ring_mul_via(
    f: &Frame,
    s: &RingElem,
    r: &RingElem,
    k: usize,
) -> Result<RingElem, FrameError> {
    let (i, j) = same_domain(r, s)?;
    f.check_aux(i, j, k)?;
    compose(f, &pi_transfer(f, s, k, j)?, &pi_transfer(f, r, i, k)?)
}

/// `s·r`: for `r ∈ R_ij`, `s ∈ R_jk` the result is in `R_ik`; for both in
/// `R_ij` it stays in `R_ij`. In matrix terms the result is `s·r`.
pub fn ring_mul(f: &Frame, s: &RingElem, r: &RingElem) -> Result<RingElem, FrameError> {
    if (r.i, r.j) == (s.i, s.j) {
        ring_mul_via(f, s, r, f.default_aux(r.i, r.j))
    } else if r.j == s.i && r.i != s.j {
        compose(f, s, r)
    } else {
        Err(FrameError::IndexMismatch(format!(
            "cannot multiply R_{} by R_{}",
            label(s.i, s.j),
            label(r.i, r.j)
        )))
    }
}

/// The inverse of `r ∈ R_ij` exists iff the carrier also lies in `R_ji`;
/// read there and moved back to `R_ij` it is the inverse.
pub fn ring_inverse(f: &Frame, r: &RingElem) -> Result<Option<RingElem>, FrameError> {
    if !f.in_domain(&r.carrier, r.j, r.i)? {
        return Ok(None);
    }
    let back = RingElem {
        i: r.j,
        j: r.i,
        carrier: r.carrier.clone(),
    };
    transport(f, &back, r.i, r.j).map(Some)
}

pub fn ring_zero(f: &Frame, i: usize, j: usize) -> Result<RingElem, FrameError> {
    elem(f, i, j, f.a[i].clone())
}

pub fn ring_one(f: &Frame, i: usize, j: usize) -> Result<RingElem, FrameError> {
    f.check_pair(i, j)?;
    elem(f, i, j, f.pair(i, j).clone())
}

fn require_orthogonal(f: &Frame) -> Result<(), FrameError> {
    if f.form.is_none() {
        return Err(FrameError::NoForm);
    }
    if !f.is_orthogonal() {
        return Err(FrameError::NotOrthogonal);
    }
    if !f.spanning {
        return Err(FrameError::NotSpanning);
    }
    Ok(())
}

/// `(x' + x(x' + Σ_{j≠2} a_j)) · (x + x'·Σ_{j≠2} a_j) · (a_1 + a_2)`, which
/// lies in `R_12` for every `x` and fixes every element of `R_12`.
pub fn retract_polynomial(f: &Frame, x: &Subspace) -> Result<RingElem, FrameError> {
    require_orthogonal(f)?;
    let xp = f.ortho(x)?;
    let mut rest = Subspace::zero(f.ambient());
    for j in (0..f.order()).filter(|&j| j != 1) {
        rest = join(&rest, &f.a[j])?;
    }
    let left = join(&xp, &meet(x, &join(&xp, &rest)?)?)?;
    let right = join(x, &meet(&xp, &rest)?)?;
    let carrier = meet(&meet(&left, &right)?, &join(&f.a[0], &f.a[1])?)?;
    elem(f, 0, 1, carrier)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarResult {
    /// `(r*)_12`.
    pub value: RingElem,
    /// `r'·(a_1 + a_2)`, an element of `R_21`.
    pub orthogonal_part: RingElem,
    /// `a_12'·(a_1 + a_2)`, an element of `R_21`.
    pub unit_part: RingElem,
}

/// The involution on `R_12` from orthocomplements: with `c = r'(a_1+a_2)`
/// and `u = a_12'(a_1+a_2)` in `R_21`, the result is `c·u⁻¹` in `R_12`.
pub fn star_polynomial(f: &Frame, r: &RingElem) -> Result<StarResult, FrameError> {
    require_orthogonal(f)?;
    if (r.i, r.j) != (0, 1) {
        return Err(FrameError::IndexMismatch(format!(
            "star is defined on R_12, got R_{}",
            label(r.i, r.j)
        )));
    }
    let plane = join(&f.a[0], &f.a[1])?;
    let orthogonal_part = elem(f, 1, 0, meet(&f.ortho(&r.carrier)?, &plane)?)?;
    let unit_part = elem(f, 1, 0, meet(&f.ortho(f.pair(0, 1))?, &plane)?)?;
    let c = transport(f, &orthogonal_part, 0, 1)?;
    let u = transport(f, &unit_part, 0, 1)?;
    let uinv =
        ring_inverse(f, &u)?.ok_or_else(|| FrameError::NotInCoordinateDomain(label(1, 0)))?;
    let value = ring_mul(f, &c, &uinv)?;
    Ok(StarResult {
        value,
        orthogonal_part,
        unit_part,
    })
}

/// `(x*)_ij = α_i⁻¹ · x_jiᵀ · α_j` on block matrices with diagonal blocks
/// sized by `alpha`.
pub fn matrix_involution(
    alpha: &[RationalMatrix],
    x: &RationalMatrix,
) -> Result<RationalMatrix, FrameError> {
    let mut offsets = vec![0];
    for (i, a) in alpha.iter().enumerate() {
        if !a.is_square() {
            return Err(FrameError::DimensionMismatch(format!(
                "alpha block {} is {}×{}",
                i + 1,
                a.rows(),
                a.cols()
            )));
        }
        if !a.is_symmetric() {
            return Err(FrameError::NonHermitianAlpha(i + 1));
        }
        offsets.push(offsets[i] + a.rows());
    }
    let total = offsets[alpha.len()];
    if x.rows() != total || x.cols() != total {
        return Err(FrameError::DimensionMismatch(format!(
            "{}×{} matrix for blocks totalling {total}",
            x.rows(),
            x.cols()
        )));
    }
    let inv = alpha
        .iter()
        .enumerate()
        .map(|(i, a)| a.inverse().map_err(|_| FrameError::SingularAlpha(i + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = RationalMatrix::zeros(total, total);
    for i in 0..alpha.len() {
        for j in 0..alpha.len() {
            let xji = x.submatrix(offsets[j], offsets[i], alpha[j].rows(), alpha[i].rows());
            let block = &(&inv[i] * &xji.transpose()) * &alpha[j];
            out.set_block(offsets[i], offsets[j], &block);
        }
    }
    Ok(out)
}

/// Hermitian idempotent (orthogonal projector, standard form) with the same
/// column space as `m`.
pub fn column_projector(m: &RationalMatrix) -> RationalMatrix {
    let c = Subspace::column_space(m);
    if c.is_zero() {
        return RationalMatrix::zeros(m.rows(), m.rows());
    }
    let b = c.basis();
    let gram = &(b * &b.transpose());
    &(&b.transpose() * &gram.inverse().expect("basis rows are independent")) * b
}

/// Hermitian idempotent with the same row space as `m`.
pub fn row_projector(m: &RationalMatrix) -> RationalMatrix {
    column_projector(&m.transpose())
}

/// For idempotents `e`, `f`: `e + g` with `g` an idempotent generating
/// `(f − ef)R`, so that `(e + g)R = eR + fR`.
pub fn idempotent_join(
    e: &RationalMatrix,
    f: &RationalMatrix,
) -> Result<RationalMatrix, FrameError> {
    let g = column_projector(&f.try_sub(&e.try_mul(f)?)?);
    Ok(e.try_add(&g)?)
}

/// For idempotents `e`, `f`: `f − fg` with `g` an idempotent and
/// `Rg = R(f − ef)`, so that `(f − fg)R = eR ∩ fR`.
pub fn idempotent_meet(
    e: &RationalMatrix,
    f: &RationalMatrix,
) -> Result<RationalMatrix, FrameError> {
    let g = row_projector(&f.try_sub(&e.try_mul(f)?)?);
    Ok(f.try_sub(&f.try_mul(&g)?)?)
}

/// Some `x` with `r·x·r = r` (the Moore–Penrose inverse).
pub fn quasi_inverse(r: &RationalMatrix) -> RationalMatrix {
    let (rref, pivots) = r.rref();
    if pivots.is_empty() {
        return RationalMatrix::zeros(r.cols(), r.rows());
    }
    // Rank factorization r = c·w with c the pivot columns and w the nonzero
    // rows of the reduced form.
    let k = pivots.len();
    let mut c = RationalMatrix::zeros(r.rows(), k);
    for (t, &p) in pivots.iter().enumerate() {
        for s in 0..r.rows() {
            c.set(s, t, r.get(s, p).clone());
        }
    }
    let w = rref.submatrix(0, 0, k, r.cols());
    let wt = w.transpose();
    let ct = c.transpose();
    let left = &wt * &(&w * &wt).inverse().expect("full row rank");
    let right = &(&ct * &c).inverse().expect("full column rank") * &ct;
    &left * &right
}

/// `rᵀr = 0` forces `r = 0`.
pub fn star_regular_witness(r: &RationalMatrix) -> bool {
    !(&r.transpose() * r).is_zero() || r.is_zero()
}

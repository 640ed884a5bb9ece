//! Subspaces of Q^n with an anisotropic symmetric form.
//!
//! A [`Subspace`] stores its basis in reduced row echelon form, so two
//! subspaces are equal exactly when their stored matrices are equal. The form
//! lives in a separate [`FormSpace`]; only the orthocomplement depends on it.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::exactla::{int, LinAlgError, Rational, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubspaceError {
    #[error("vector of length {found} in Q^{expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("subspaces live in Q^{0} and Q^{1}")]
    AmbientMismatch(usize, usize),
    #[error("first argument is not contained in the second")]
    NotBelow,
    #[error("subspace of dimension {0} is not an atom")]
    NotAnAtom(usize),
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("gram matrix is not positive definite (anisotropy over Q cannot be certified)")]
    NotPositiveDefinite,
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: RationalMatrix,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Self {
            ambient: n,
            basis: RationalMatrix::zeros(0, n),
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            ambient: n,
            basis: RationalMatrix::identity(n),
        }
    }

    /// Coordinate subspace spanned by the listed standard basis vectors.
    pub fn coordinate(n: usize, coords: impl IntoIterator<Item = usize>) -> Self {
        let vecs = coords
            .into_iter()
            .map(|c| unit_vector(n, c))
            .collect::<Vec<_>>();
        Self::span(n, &vecs).expect("coordinate out of range")
    }

    /// Canonical subspace spanned by the rows of `m`.
    pub fn row_space(m: &RationalMatrix) -> Self {
        let (r, pivots) = m.rref();
        Self {
            ambient: m.cols(),
            basis: r.submatrix(0, 0, pivots.len(), m.cols()),
        }
    }

    /// Canonical subspace spanned by the columns of `m`.
    pub fn column_space(m: &RationalMatrix) -> Self {
        Self::row_space(&m.transpose())
    }

    pub fn span(n: usize, vectors: &[Vec<Rational>]) -> Result<Self, SubspaceError> {
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(SubspaceError::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        Ok(Self::row_space(&RationalMatrix::from_rows_with_cols(
            vectors.to_vec(),
            n,
        )?))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// The RREF basis, one vector per row.
    pub fn basis(&self) -> &RationalMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Rational>> {
        self.basis.row_vecs()
    }

    fn same_ambient(&self, other: &Self) -> Result<(), SubspaceError> {
        if self.ambient == other.ambient {
            Ok(())
        } else {
            Err(SubspaceError::AmbientMismatch(self.ambient, other.ambient))
        }
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        let one = RationalMatrix::from_rows_with_cols(vec![v.to_vec()], self.ambient)
            .expect("vector length");
        self.basis.vstack(&one).expect("same width").rank() == self.dim()
    }

    /// `self ≤ other` in the subspace lattice.
    pub fn leq(&self, other: &Self) -> bool {
        self.ambient == other.ambient
            && self.dim() <= other.dim()
            && other.basis.vstack(&self.basis).expect("same width").rank() == other.dim()
    }

    pub fn sum(&self, other: &Self) -> Result<Self, SubspaceError> {
        self.same_ambient(other)?;
        Ok(Self::row_space(&self.basis.vstack(&other.basis)?))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self, SubspaceError> {
        self.same_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ambient));
        }
        // λᵀU = μᵀV  ⇔  (λ, μ) ∈ ker [U; -V]ᵀ
        let stacked = self.basis.vstack(&(-&other.basis))?;
        let ker = stacked.transpose().kernel();
        let lambdas = ker.submatrix(0, 0, ker.rows(), self.dim());
        Ok(Self::row_space(&(&lambdas * &self.basis)))
    }

    /// Basis vectors of `self` that extend a basis of `inner` (assumed below
    /// `self`) to a basis of `self`, picked greedily from the RREF rows.
    fn extension_basis(&self, inner: &Self) -> Vec<Vec<Rational>> {
        let mut acc = inner.basis.clone();
        let mut chosen = Vec::new();
        for i in 0..self.dim() {
            let row = self.basis.submatrix(i, 0, 1, self.ambient);
            let next = acc.vstack(&row).expect("same width");
            if next.rank() > acc.rank() {
                acc = next;
                chosen.push(self.basis.row(i).to_vec());
            }
        }
        chosen
    }

    /// A common complement of `self` and `other` in `[0, self + other]`, if
    /// one exists. For subspaces this happens exactly when the dimensions
    /// agree; the witness is built from diagonal vectors `u_i + v_i`.
    pub fn perspectivity_witness(&self, other: &Self) -> Result<Option<Self>, SubspaceError> {
        self.same_ambient(other)?;
        if self.dim() != other.dim() {
            return Ok(None);
        }
        let common = self.intersect(other)?;
        let us = self.extension_basis(&common);
        let vs = other.extension_basis(&common);
        let diag: Vec<Vec<Rational>> = us
            .iter()
            .zip(&vs)
            .map(|(u, v)| u.iter().zip(v).map(|(a, b)| a + b).collect())
            .collect();
        let c = Self::span(self.ambient, &diag)?;
        let top = self.sum(other)?;
        let zero = Self::zero(self.ambient);
        let ok = self.sum(&c)? == top
            && other.sum(&c)? == top
            && self.intersect(&c)? == zero
            && other.intersect(&c)? == zero;
        assert!(ok, "perspectivity witness failed its own complement check");
        Ok(Some(c))
    }

    pub fn to_text(&self) -> String {
        format!("ambient {}\n{}", self.ambient, self.basis)
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(Q^{}, {:?})", self.ambient, self.basis)
    }
}

/// Text format: `ambient n` followed by the matrix format of a spanning set.
/// Any spanning set is accepted on input; output is always the RREF basis.
impl FromStr for Subspace {
    type Err = SubspaceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s.lines().enumerate();
        let (ln, first) =
            lines
                .find(|(_, l)| !l.trim().is_empty())
                .ok_or(SubspaceError::Parse {
                    line: 0,
                    msg: "empty input".into(),
                })?;
        let n: usize = first
            .trim()
            .strip_prefix("ambient")
            .and_then(|r| r.trim().parse().ok())
            .ok_or_else(|| SubspaceError::Parse {
                line: ln + 1,
                msg: "expected `ambient n`".into(),
            })?;
        let m = RationalMatrix::parse_lines(&mut lines).map_err(|e| match e {
            LinAlgError::Parse { line, msg } => SubspaceError::Parse { line, msg },
            other => other.into(),
        })?;
        if let Some((ln, _)) = lines.find(|(_, l)| !l.trim().is_empty()) {
            return Err(SubspaceError::Parse {
                line: ln + 1,
                msg: "trailing data".into(),
            });
        }
        if m.cols() != n {
            return Err(SubspaceError::DimensionMismatch {
                expected: n,
                found: m.cols(),
            });
        }
        Ok(Self::row_space(&m))
    }
}

pub fn unit_vector(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

/// Q^n with a positive definite symmetric Gram matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormSpace {
    gram: RationalMatrix,
}

impl FormSpace {
    pub fn new(gram: RationalMatrix) -> Result<Self, SubspaceError> {
        if !gram.is_symmetric() {
            return Err(SubspaceError::NotSymmetric);
        }
        if !gram.is_positive_definite()? {
            return Err(SubspaceError::NotPositiveDefinite);
        }
        Ok(Self { gram })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            gram: RationalMatrix::identity(n),
        }
    }

    pub fn diagonal(entries: &[Rational]) -> Result<Self, SubspaceError> {
        Self::new(RationalMatrix::diagonal(entries))
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &RationalMatrix {
        &self.gram
    }

    fn check(&self, u: &Subspace) -> Result<(), SubspaceError> {
        if u.ambient() == self.dim() {
            Ok(())
        } else {
            Err(SubspaceError::AmbientMismatch(self.dim(), u.ambient()))
        }
    }

    /// `{y : Φ(x, y) = 0 for all x ∈ u}`.
    pub fn ortho_complement(&self, u: &Subspace) -> Result<Subspace, SubspaceError> {
        self.check(u)?;
        if u.is_zero() {
            return Ok(Subspace::full(self.dim()));
        }
        Ok(Subspace::row_space(&(u.basis() * &self.gram).kernel()))
    }

    pub fn is_orthogonal(&self, u: &Subspace, v: &Subspace) -> Result<bool, SubspaceError> {
        self.check(u)?;
        self.check(v)?;
        Ok((&(u.basis() * &self.gram) * &v.basis().transpose()).is_zero())
    }

    /// Orthocomplement of `x` relative to the interval `[0, u]`: `u ∩ x^⊥`.
    pub fn interval_ortho(&self, u: &Subspace, x: &Subspace) -> Result<Subspace, SubspaceError> {
        self.check(u)?;
        if !x.leq(u) {
            return Err(SubspaceError::NotBelow);
        }
        u.intersect(&self.ortho_complement(x)?)
    }

    /// For each sampled atom `p`, checks `p + p^⊥ = 1` and `p ∩ p^⊥ = 0`.
    pub fn check_polarity_sample(
        &self,
        atoms: &[Subspace],
    ) -> Result<PolarityReport, SubspaceError> {
        let mut failures = Vec::new();
        for (i, p) in atoms.iter().enumerate() {
            self.check(p)?;
            if p.dim() != 1 {
                return Err(SubspaceError::NotAnAtom(p.dim()));
            }
            let pp = self.ortho_complement(p)?;
            if !p.sum(&pp)?.is_full() {
                failures.push((i, "p + p^⊥ is not the whole space".to_string()));
            }
            if !p.intersect(&pp)?.is_zero() {
                failures.push((i, "p meets p^⊥".to_string()));
            }
        }
        Ok(PolarityReport {
            checked: atoms.len(),
            failures,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarityReport {
    pub checked: usize,
    /// Index of the offending atom and a description.
    pub failures: Vec<(usize, String)>,
}

impl PolarityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `u + (v ∩ w) = (u + v) ∩ w` for `u ≤ w`.
pub fn modular_law_check(u: &Subspace, v: &Subspace, w: &Subspace) -> Result<bool, SubspaceError> {
    u.same_ambient(v)?;
    u.same_ambient(w)?;
    if !u.leq(w) {
        return Err(SubspaceError::NotBelow);
    }
    Ok(u.sum(&v.intersect(w)?)? == u.sum(v)?.intersect(w)?)
}

/// Random subspace of Q^n spanned by `k` random integer vectors with entries
/// in `[-5, 5]`, where `k` is uniform in `0..=n`.
pub fn random_subspace<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Subspace {
    let k = rng.gen_range(0..=n);
    random_subspace_spanned_by(rng, n, k)
}

pub fn random_subspace_spanned_by<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Subspace {
    let rows = (0..k)
        .map(|_| (0..n).map(|_| int(rng.gen_range(-5..=5))).collect())
        .collect();
    Subspace::row_space(&RationalMatrix::from_rows_with_cols(rows, n).expect("shape"))
}

/// Random positive definite Gram matrix `aᵀa + I` with small integer `a`.
pub fn random_form<R: Rng + ?Sized>(rng: &mut R, n: usize) -> FormSpace {
    let data = (0..n * n).map(|_| int(rng.gen_range(-2..=2))).collect();
    let a = RationalMatrix::from_vec(n, n, data).expect("shape");
    let g = &(&a.transpose() * &a) + &RationalMatrix::identity(n);
    FormSpace::new(g).expect("aᵀa + I is positive definite")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rat;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn span_examples() {
        assert_eq!(Subspace::span(3, &[]).unwrap(), Subspace::zero(3));
        let s = Subspace::span(2, &[v(&[1, 0]), v(&[2, 0])]).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s, Subspace::coordinate(2, [0]));
        assert!(Subspace::span(2, &[v(&[1, 1]), v(&[1, -1])])
            .unwrap()
            .is_full());
        assert!(matches!(
            Subspace::span(2, &[v(&[1, 1, 1])]),
            Err(SubspaceError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn sum_and_intersect_examples() {
        let e1 = Subspace::coordinate(2, [0]);
        let e2 = Subspace::coordinate(2, [1]);
        assert!(e1.sum(&e2).unwrap().is_full());
        let a = Subspace::coordinate(3, [0, 1]);
        let b = Subspace::coordinate(3, [1, 2]);
        assert_eq!(a.intersect(&b).unwrap(), Subspace::coordinate(3, [1]));
        assert_eq!(a.sum(&Subspace::zero(3)).unwrap(), a);
        assert_eq!(e1.sum(&a), Err(SubspaceError::AmbientMismatch(2, 3)));
    }

    #[test]
    fn intersect_of_skew_planes() {
        // x + y + z = 0 meets z = 0 in span{(1,-1,0)}
        let p = Subspace::span(3, &[v(&[1, -1, 0]), v(&[0, 1, -1])]).unwrap();
        let q = Subspace::coordinate(3, [0, 1]);
        assert_eq!(
            p.intersect(&q).unwrap(),
            Subspace::span(3, &[v(&[1, -1, 0])]).unwrap()
        );
    }

    #[test]
    fn ortho_examples() {
        let f = FormSpace::identity(3);
        assert_eq!(
            f.ortho_complement(&Subspace::coordinate(3, [0])).unwrap(),
            Subspace::coordinate(3, [1, 2])
        );
        let u = Subspace::span(3, &[v(&[1, 1, 0])]).unwrap();
        let expected = Subspace::span(3, &[v(&[1, -1, 0]), v(&[0, 0, 1])]).unwrap();
        assert_eq!(f.ortho_complement(&u).unwrap(), expected);
        assert!(f.ortho_complement(&Subspace::full(3)).unwrap().is_zero());
    }

    #[test]
    fn interval_ortho_examples() {
        let f = FormSpace::identity(3);
        let u = Subspace::coordinate(3, [0, 1]);
        let x = Subspace::coordinate(3, [0]);
        assert_eq!(
            f.interval_ortho(&u, &x).unwrap(),
            Subspace::coordinate(3, [1])
        );
        assert_eq!(f.interval_ortho(&u, &Subspace::zero(3)).unwrap(), u);
        assert!(f.interval_ortho(&u, &u).unwrap().is_zero());
        assert_eq!(f.interval_ortho(&x, &u), Err(SubspaceError::NotBelow));
    }

    #[test]
    fn perspectivity_examples() {
        let e1 = Subspace::coordinate(2, [0]);
        let e2 = Subspace::coordinate(2, [1]);
        let c = e1.perspectivity_witness(&e2).unwrap().unwrap();
        assert_eq!(c, Subspace::span(2, &[v(&[1, 1])]).unwrap());
        assert_eq!(
            e1.perspectivity_witness(&e1).unwrap(),
            Some(Subspace::zero(2))
        );
        let z = Subspace::zero(2);
        assert_eq!(z.perspectivity_witness(&z).unwrap(), Some(z.clone()));
        assert_eq!(e1.perspectivity_witness(&Subspace::full(2)).unwrap(), None);
    }

    #[test]
    fn polarity_sample_examples() {
        let f = FormSpace::identity(3);
        assert!(f
            .check_polarity_sample(&[Subspace::coordinate(3, [0])])
            .unwrap()
            .passed());
        let g = FormSpace::diagonal(&[int(1), int(2), int(3)]).unwrap();
        let p = Subspace::span(3, &[v(&[1, 1, 1])]).unwrap();
        assert!(g.check_polarity_sample(&[p]).unwrap().passed());
        assert_eq!(
            f.check_polarity_sample(&[Subspace::coordinate(3, [0, 1])]),
            Err(SubspaceError::NotAnAtom(2))
        );
        assert_eq!(
            FormSpace::diagonal(&[int(1), int(-1)]),
            Err(SubspaceError::NotPositiveDefinite)
        );
        assert_eq!(
            FormSpace::diagonal(&[int(1), int(0)]),
            Err(SubspaceError::NotPositiveDefinite)
        );
    }

    #[test]
    fn modular_law_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let u = random_subspace(&mut rng, 4);
            let v = random_subspace(&mut rng, 4);
            let w = u.sum(&random_subspace(&mut rng, 4)).unwrap();
            assert!(modular_law_check(&u, &v, &w).unwrap());
            assert!(modular_law_check(&Subspace::zero(4), &v, &w).unwrap());
            assert!(modular_law_check(&w, &v, &w).unwrap());
        }
        let a = Subspace::coordinate(2, [0]);
        let b = Subspace::coordinate(2, [1]);
        assert_eq!(modular_law_check(&a, &a, &b), Err(SubspaceError::NotBelow));
    }

    #[test]
    fn text_round_trip() {
        let u = Subspace::span(3, &[vec![rat(1, 2), int(1), int(0)], v(&[0, 0, 3])]).unwrap();
        let text = u.to_text();
        let back: Subspace = text.parse().unwrap();
        assert_eq!(back, u);
        assert_eq!(back.to_text(), text);
        assert!("ambient 2\n1 3\n1 2 3\n".parse::<Subspace>().is_err());
    }

    fn arb_subspace(n: usize) -> impl Strategy<Value = Subspace> {
        (0..=n).prop_flat_map(move |k| {
            proptest::collection::vec(-5i64..=5, k * n).prop_map(move |xs| {
                let rows = xs
                    .chunks(n.max(1))
                    .take(k)
                    .map(|c| c.iter().map(|&x| int(x)).collect())
                    .collect();
                Subspace::row_space(&RationalMatrix::from_rows_with_cols(rows, n).unwrap())
            })
        })
    }

    fn arb_form(n: usize) -> impl Strategy<Value = FormSpace> {
        any::<u64>().prop_map(move |s| random_form(&mut ChaCha8Rng::seed_from_u64(s), n))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ortho_laws(f in arb_form(4), u in arb_subspace(4), w in arb_subspace(4)) {
            let uo = f.ortho_complement(&u).unwrap();
            let wo = f.ortho_complement(&w).unwrap();
            prop_assert_eq!(f.ortho_complement(&uo).unwrap(), u.clone());
            prop_assert!(u.intersect(&uo).unwrap().is_zero());
            prop_assert_eq!(u.dim() + uo.dim(), 4);
            prop_assert_eq!(f.ortho_complement(&u.sum(&w).unwrap()).unwrap(), uo.intersect(&wo).unwrap());
            prop_assert_eq!(f.ortho_complement(&u.intersect(&w).unwrap()).unwrap(), uo.sum(&wo).unwrap());
            let v = u.sum(&w).unwrap();
            // orthomodular instance for u ≤ v
            prop_assert_eq!(u.sum(&v.intersect(&uo).unwrap()).unwrap(), v.clone());
            prop_assert!(f.ortho_complement(&v).unwrap().leq(&uo));
        }

        #[test]
        fn perspectivity_iff_equal_dimension(u in arb_subspace(4), w in arb_subspace(4)) {
            let c = u.perspectivity_witness(&w).unwrap();
            prop_assert_eq!(c.is_some(), u.dim() == w.dim());
        }

        #[test]
        fn intersection_is_greatest_lower_bound(u in arb_subspace(4), w in arb_subspace(4)) {
            let m = u.intersect(&w).unwrap();
            prop_assert!(m.leq(&u) && m.leq(&w));
            prop_assert_eq!(m.dim() + u.sum(&w).unwrap().dim(), u.dim() + w.dim());
        }
    }
}

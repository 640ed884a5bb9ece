//! The A_k/B_k matrix recursion, the positive definite block form on
//! Q^{3n} whose canonical 3-frame generates the subspace lattice, the
//! replay of the 6-frame construction inside a 3-frame over 2×2 blocks,
//! and the doubling embedding Q^m → Q^{2m}.
//!
//! Generation of a whole lattice is not decided here. The replays check
//! every displayed construction step exactly and sample coordinate-ring
//! elements.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactla::{LinAlgError, Rational, RationalMatrix};
use crate::frames::{
    canonical_frame, check_frame, embed_ring, pi_transfer, ring_add, ring_inverse, ring_mul,
    ring_neg, ring_sub, transport, Frame, FrameError, RingElem,
};
use crate::subspaces::{FormSpace, Subspace, SubspaceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("seeds must be positive, got a = {a}, b = {b}")]
    NonPositiveSeed { a: Rational, b: Rational },
    #[error("level must be at least 1")]
    InvalidLevel,
    #[error("identity `{name}` fails under both sign readings:\n  lhs: {lhs}\n  rhs: {rhs}")]
    IdentityMismatch {
        name: String,
        lhs: String,
        rhs: String,
    },
    #[error("chain needs {needed} steps, cap is {cap}")]
    CapExceeded { cap: usize, needed: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

type Result<T> = std::result::Result<T, WitnessError>;

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

fn two() -> Rational {
    Rational::from_integer(2.into())
}

fn block2(
    a: &RationalMatrix,
    b: &RationalMatrix,
    c: &RationalMatrix,
    d: &RationalMatrix,
) -> RationalMatrix {
    RationalMatrix::from_blocks(&[vec![a.clone(), b.clone()], vec![c.clone(), d.clone()]])
        .expect("square blocks of one size")
}

/// `[[a + b, b], [b, 2b]]` and `[[b, b], [b, 2b]]`.
fn double_step(a: &RationalMatrix, b: &RationalMatrix) -> (RationalMatrix, RationalMatrix) {
    let b2 = b.scale(&two());
    (block2(&(a + b), b, b, &b2), block2(b, b, b, &b2))
}

/// `A_1 = (a)`, `B_1 = (b)`, `A_{k+1} = [[A_k + B_k, B_k], [B_k, 2B_k]]`,
/// `B_{k+1} = [[B_k, B_k], [B_k, 2B_k]]`. Both are `2^{k−1}` square.
pub fn ab_matrices(
    k: usize,
    a: &Rational,
    b: &Rational,
) -> Result<(RationalMatrix, RationalMatrix)> {
    if k == 0 {
        return Err(WitnessError::InvalidLevel);
    }
    if !a.is_positive() || !b.is_positive() {
        return Err(WitnessError::NonPositiveSeed {
            a: a.clone(),
            b: b.clone(),
        });
    }
    let mut am = RationalMatrix::scalar(1, a);
    let mut bm = RationalMatrix::scalar(1, b);
    for _ in 1..k {
        (am, bm) = double_step(&am, &bm);
    }
    Ok((am, bm))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessConfig {
    pub k: usize,
    pub a: Rational,
    pub b: Rational,
}

impl WitnessConfig {
    pub fn new(k: usize, a: Rational, b: Rational) -> Result<Self> {
        ab_matrices(1, &a, &b)?;
        if k == 0 {
            return Err(WitnessError::InvalidLevel);
        }
        Ok(Self { k, a, b })
    }

    pub fn level(k: usize) -> Result<Self> {
        Self::new(k, Rational::one(), Rational::one())
    }

    /// Size of `A_k`.
    pub fn n(&self) -> usize {
        1 << (self.k - 1)
    }

    pub fn matrices(&self) -> (RationalMatrix, RationalMatrix) {
        ab_matrices(self.k, &self.a, &self.b).expect("validated config")
    }
}

/// Positive definiteness of `A_k + s·B_k` (for `s ≥ 0`) by the block
/// reduction `P·(A_k + sB_k)·Pᵀ = diag(A_{k−1} + ((1+s)/2)B_{k−1},
/// 2(1+s)B_{k−1})` with `P = [[I, −½I], [0, I]]`, down to scalars. Every
/// congruence is checked exactly; a failed check returns `false`.
pub fn pd_by_reduction(k: usize, a: &Rational, b: &Rational, s: &Rational) -> Result<bool> {
    let (am, bm) = ab_matrices(k, a, b)?;
    let m = &am + &bm.scale(s);
    if k == 1 {
        return Ok(m.get(0, 0).is_positive());
    }
    let (a1, b1) = ab_matrices(k - 1, a, b)?;
    let h = a1.rows();
    let id = RationalMatrix::identity(h);
    let zero = RationalMatrix::zeros(h, h);
    let p = block2(&id, &id.scale(&-half()), &zero, &id);
    let s1 = (s + Rational::one()) * half();
    let expected = RationalMatrix::block_diag(&[
        &a1 + &b1.scale(&s1),
        b1.scale(&(two() * (s + Rational::one()))),
    ]);
    if &(&p * &m) * &p.transpose() != expected {
        return Ok(false);
    }
    Ok(pd_by_reduction(k - 1, a, b, &s1)? && pd_b_by_reduction(k - 1, a, b)?)
}

/// Positive definiteness of `B_k` by `Q·B_k·Qᵀ = diag(B_{k−1}, B_{k−1})`
/// with `Q = [[I, 0], [−I, I]]`.
pub fn pd_b_by_reduction(k: usize, a: &Rational, b: &Rational) -> Result<bool> {
    let (_, bm) = ab_matrices(k, a, b)?;
    if k == 1 {
        return Ok(bm.get(0, 0).is_positive());
    }
    let (_, b1) = ab_matrices(k - 1, a, b)?;
    let id = RationalMatrix::identity(b1.rows());
    let q = block2(
        &id,
        &RationalMatrix::zeros(b1.rows(), b1.rows()),
        &-&id,
        &id,
    );
    if &(&q * &bm) * &q.transpose() != RationalMatrix::block_diag(&[b1.clone(), b1]) {
        return Ok(false);
    }
    pd_b_by_reduction(k - 1, a, b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    /// `(j, a + (1 − 2^{−j})b)` for `j = 0..=depth`.
    pub values: Vec<(usize, String)>,
    /// Least `j ≤ depth` with a zero value.
    pub first_zero: Option<usize>,
    /// Whether no `j ≥ 0` at all gives zero.
    pub holds_for_all: bool,
}

/// Scans `a + (1 − 2^{−j})b` for `j = 0..=depth`. A zero occurs for some
/// `j` iff `b ≠ 0` and `(a + b)/b = 2^{−j}`, or `a = b = 0`, so
/// `holds_for_all` is decided exactly for every `j`.
pub fn invertibility_family_check(a: &Rational, b: &Rational, depth: usize) -> FamilyReport {
    let mut values = Vec::new();
    let mut first_zero = None;
    let mut t = Rational::zero();
    let mut step = half();
    for j in 0..=depth {
        let v = a + &t * b;
        if v.is_zero() && first_zero.is_none() {
            first_zero = Some(j);
        }
        values.push((j, v.to_string()));
        t += &step;
        step *= half();
    }
    let holds_for_all = if b.is_zero() {
        !a.is_zero()
    } else {
        let q = (a + b) / b;
        let is_power = q.is_positive() && q <= Rational::one() && q.numer().is_one() && {
            let d = q.denom();
            (d & (d - 1u32)).is_zero()
        };
        !is_power
    };
    FamilyReport {
        values,
        first_zero,
        holds_for_all,
    }
}

/// Matrix version: invertibility of `a + (1 − 2^{−j})b` for `j = 0..=depth`.
/// Returns the first `j` that fails.
pub fn matrix_family_failure(
    a: &RationalMatrix,
    b: &RationalMatrix,
    depth: usize,
) -> Result<Option<usize>> {
    let mut t = Rational::zero();
    let mut step = half();
    for j in 0..=depth {
        if a.try_add(&b.scale(&t))?.determinant()?.is_zero() {
            return Ok(Some(j));
        }
        t += &step;
        step *= half();
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub id: &'static str,
    pub label: String,
    pub lhs: String,
    pub rhs: String,
    pub passed: bool,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} {}",
            if self.passed { "pass" } else { "FAIL" },
            self.id,
            self.label
        )
    }
}

fn show_subspace(x: &Subspace) -> String {
    format!(
        "dim {} basis {}",
        x.dim(),
        x.basis().to_string().trim_end().replace('\n', "; ")
    )
}

fn show_matrix(x: &RationalMatrix) -> String {
    x.to_string().trim_end().replace('\n', "; ")
}

#[derive(Default)]
struct Steps(Vec<Step>);

impl Steps {
    fn space(
        &mut self,
        id: &'static str,
        label: impl Into<String>,
        lhs: &Subspace,
        rhs: &Subspace,
    ) -> bool {
        let passed = lhs == rhs;
        self.0.push(Step {
            id,
            label: label.into(),
            lhs: show_subspace(lhs),
            rhs: show_subspace(rhs),
            passed,
        });
        passed
    }

    fn matrix(
        &mut self,
        id: &'static str,
        label: impl Into<String>,
        lhs: &RationalMatrix,
        rhs: &RationalMatrix,
    ) -> bool {
        let passed = lhs == rhs;
        self.0.push(Step {
            id,
            label: label.into(),
            lhs: show_matrix(lhs),
            rhs: show_matrix(rhs),
            passed,
        });
        passed
    }

    fn fact(&mut self, id: &'static str, label: impl Into<String>, detail: String, passed: bool) {
        self.0.push(Step {
            id,
            label: label.into(),
            lhs: detail,
            rhs: String::new(),
            passed,
        });
    }
}

/// Identities of the 6-frame construction, by role.
pub const DOUBLING_CHECKLIST: &[&str] = &[
    "reduce_family",
    "reduce_b",
    "invertible",
    "diag_a",
    "unit_e2",
    "unit_e4",
    "units_rest",
    "frame_pairs",
    "diag_1",
    "diag_b",
    "diag_inverse",
    "offdiag_sum",
    "unit_21",
    "unit_12",
    "pair_15",
];

/// Extra steps of the inductive generation chain.
pub const CHAIN_CHECKLIST: &[&str] = &["mixed_pairs", "six_frame", "phi_a", "phi_b", "phi_sample"];

#[derive(Clone, Debug, Serialize)]
pub struct StepReport {
    pub steps: Vec<Step>,
}

impl StepReport {
    pub fn passed(&self) -> bool {
        !self.steps.is_empty() && self.steps.iter().all(|s| s.passed)
    }

    /// Checklist entries without any step.
    pub fn uncovered(&self, checklist: &[&'static str]) -> Vec<&'static str> {
        checklist
            .iter()
            .copied()
            .filter(|c| !self.steps.iter().any(|s| s.id == *c))
            .collect()
    }
}

/// Geometry of the construction: `Q^{6m}` with the canonical 3-frame over
/// blocks of size `2m`; the six half-blocks form the finer 6-frame, indices
/// 0..3 are first halves of blocks 0..3 and 3..6 the second halves.
struct Doubling {
    m: usize,
    e3: Frame,
    fine: Frame,
    a: RationalMatrix,
    b: RationalMatrix,
}

impl Doubling {
    fn new(a: &RationalMatrix, b: &RationalMatrix) -> Result<Self> {
        let m = a.rows();
        if !a.is_square() || b.rows() != m || b.cols() != m || m == 0 {
            return Err(WitnessError::DimensionMismatch(
                "a and b must be square of one size".into(),
            ));
        }
        let e3 = canonical_frame(3, 2 * m, None)?;
        let blocks = (0..6).map(|h| {
            let (blk, second) = (h % 3, h / 3);
            (blk * 2 * m + second * m..blk * 2 * m + (second + 1) * m).collect()
        });
        let fine = Frame::from_blocks(6 * m, blocks.collect(), None)?;
        Ok(Self {
            m,
            e3,
            fine,
            a: a.clone(),
            b: b.clone(),
        })
    }

    /// `diag(c, 0)` as a `2m` matrix.
    fn diag(&self, c: &RationalMatrix) -> RationalMatrix {
        RationalMatrix::block_diag(&[c.clone(), RationalMatrix::zeros(self.m, self.m)])
    }

    fn embed(&self, c: &RationalMatrix, i: usize, j: usize) -> Result<RingElem> {
        Ok(embed_ring(&self.e3, c, i, j)?)
    }

    fn big_a(&self) -> RationalMatrix {
        double_step(&self.a, &self.b).0
    }

    fn big_b(&self) -> RationalMatrix {
        double_step(&self.a, &self.b).1
    }
}

/// Six-frame elements derived from the generators.
struct Derived {
    units: Vec<Subspace>,
    pairs: Vec<Vec<Option<Subspace>>>,
    diag_a: RingElem,
    diag_b: RingElem,
}

fn join(x: &Subspace, y: &Subspace) -> Result<Subspace> {
    Ok(x.sum(y)?)
}

fn meet(x: &Subspace, y: &Subspace) -> Result<Subspace> {
    Ok(x.intersect(y)?)
}

/// The construction steps shared by the lemma replay and the chain replay.
/// Every derived element is computed from `E³`, `A_12` and `B_13` by lattice
/// and ring operations and compared against the coordinate oracle.
fn derive(d: &Doubling, st: &mut Steps) -> Result<Derived> {
    let f = &d.e3;
    let e = |i: usize| f.a(i).clone();
    let (am, bm) = (d.big_a(), d.big_b());
    let a12 = d.embed(&am, 0, 1)?;
    let b13 = d.embed(&bm, 0, 2)?;
    let b12 = pi_transfer(f, &b13, 0, 1)?;

    let diag_a = ring_sub(f, &a12, &b12)?;
    st.space(
        "diag_a",
        "diag(a,0) = A − B",
        diag_a.carrier(),
        d.embed(&d.diag(&d.a), 0, 1)?.carrier(),
    );

    let mut units: Vec<Option<Subspace>> = vec![None; 6];
    let u2 = meet(&e(1), &join(&e(0), diag_a.carrier())?)?;
    st.space(
        "unit_e2",
        "Ẽ⁶_2 = E³_2 ∩ (E³_1 + diag(a,0)_12)",
        &u2,
        d.fine.a(1),
    );
    let u4 = meet(diag_a.carrier(), &e(0))?;
    st.space("unit_e4", "Ẽ⁶_4 = diag(a,0)_12 ∩ E³_1", &u4, d.fine.a(3));
    for i in [0, 2] {
        let x = meet(&e(i), &join(&u2, f.pair(1, i))?)?;
        st.space(
            "units_rest",
            format!("Ẽ⁶_{} = E³_{} ∩ (Ẽ⁶_2 + E³_2{})", i + 1, i + 1, i + 1),
            &x,
            d.fine.a(i),
        );
        units[i] = Some(x);
    }
    for i in [4, 5] {
        let x = meet(&e(i - 3), &join(&u4, f.pair(0, i - 3))?)?;
        st.space(
            "units_rest",
            format!("Ẽ⁶_{} = E³_{} ∩ (Ẽ⁶_4 + E³_1{})", i + 1, i - 2, i - 2),
            &x,
            d.fine.a(i),
        );
        units[i] = Some(x);
    }
    units[1] = Some(u2);
    units[3] = Some(u4);
    let units: Vec<Subspace> = units.into_iter().map(Option::unwrap).collect();

    let mut pairs: Vec<Vec<Option<Subspace>>> = vec![vec![None; 6]; 6];
    for group in [0, 3] {
        for i in group..group + 3 {
            for j in i + 1..group + 3 {
                let x = meet(f.pair(i - group, j - group), &join(&units[i], &units[j])?)?;
                st.space(
                    "frame_pairs",
                    format!(
                        "Ẽ⁶_{}{} = E³_{}{} ∩ (Ẽ⁶_{} + Ẽ⁶_{})",
                        i + 1,
                        j + 1,
                        i - group + 1,
                        j - group + 1,
                        i + 1,
                        j + 1
                    ),
                    &x,
                    d.fine.pair(i, j),
                );
                pairs[i][j] = Some(x.clone());
                pairs[j][i] = Some(x);
            }
        }
    }

    let plane = join(&e(0), &e(1))?;
    let d1 = meet(&join(pairs[0][1].as_ref().unwrap(), &units[3])?, &plane)?;
    let id = RationalMatrix::identity(d.m);
    st.space(
        "diag_1",
        "diag(1,0)_12 = (Ẽ⁶_12 + Ẽ⁶_4) ∩ (E³_1 + E³_2)",
        &d1,
        d.embed(&d.diag(&id), 0, 1)?.carrier(),
    );
    let d1 = RingElem::new(f, 0, 1, d1)?;

    let diag_b = ring_mul(f, &d1, &ring_mul(f, &b12, &d1)?)?;
    st.space(
        "diag_b",
        "diag(b,0) = diag(1,0)·B·diag(1,0)",
        diag_b.carrier(),
        d.embed(&d.diag(&d.b), 0, 1)?.carrier(),
    );

    let inv = |c: &RingElem| -> Result<RingElem> {
        let c21 = transport(f, c, 1, 0)?;
        let x = meet(
            &join(&join(c21.carrier(), &units[3])?, &units[4])?,
            &join(&e(0), &units[1])?,
        )?;
        Ok(RingElem::new(f, 0, 1, x)?)
    };
    let a_plus_b = ring_add(f, &diag_a, &diag_b)?;
    let samples: [(&str, &RingElem, RationalMatrix); 3] = [
        ("a", &diag_a, d.a.clone()),
        ("b", &diag_b, d.b.clone()),
        ("a+b", &a_plus_b, &d.a + &d.b),
    ];
    let mut b_inv = None;
    for (name, c, cm) in samples {
        let x = inv(c)?;
        let expected = match cm.inverse() {
            Ok(ci) => d.embed(&d.diag(&ci), 0, 1)?,
            Err(_) => {
                st.fact(
                    "diag_inverse",
                    format!("{name} is invertible"),
                    show_matrix(&cm),
                    false,
                );
                continue;
            }
        };
        st.space(
            "diag_inverse",
            format!("diag({name}⁻¹,0)_12 = (diag({name},0)_21 + Ẽ⁶_4 + Ẽ⁶_5) ∩ (E³_1 + Ẽ⁶_2)"),
            x.carrier(),
            expected.carrier(),
        );
        if name == "b" {
            b_inv = Some(x);
        }
    }
    let b_inv =
        b_inv.ok_or_else(|| WitnessError::DimensionMismatch("b is not invertible".into()))?;

    let offdiag = ring_sub(f, &a12, &a_plus_b)?;
    let zero = RationalMatrix::zeros(d.m, d.m);
    let offdiag_m = block2(&zero, &d.b, &d.b, &d.b.scale(&two()));
    st.space(
        "offdiag_sum",
        "[[0,b],[b,2b]] = A − diag(a+b,0)",
        offdiag.carrier(),
        d.embed(&offdiag_m, 0, 1)?.carrier(),
    );

    let unit21 = ring_mul(f, &offdiag, &b_inv)?;
    let unit21_m = block2(&zero, &zero, &id, &zero);
    st.space(
        "unit_21",
        "[[0,0],[1,0]] = [[0,b],[b,2b]]·diag(b⁻¹,0)",
        unit21.carrier(),
        d.embed(&unit21_m, 0, 1)?.carrier(),
    );
    let unit12 = ring_mul(f, &b_inv, &offdiag)?;
    st.space(
        "unit_12",
        "[[0,1],[0,0]] = diag(b⁻¹,0)·[[0,b],[b,2b]]",
        unit12.carrier(),
        d.embed(&unit21_m.transpose(), 0, 1)?.carrier(),
    );

    let p15 = meet(
        &join(unit21.carrier(), &units[3])?,
        &join(&units[0], &units[4])?,
    )?;
    st.space(
        "pair_15",
        "Ẽ⁶_15 = ([[0,0],[1,0]]_12 + Ẽ⁶_4) ∩ (Ẽ⁶_1 + Ẽ⁶_5)",
        &p15,
        d.fine.pair(0, 4),
    );
    pairs[0][4] = Some(p15.clone());
    pairs[4][0] = Some(p15);

    Ok(Derived {
        units,
        pairs,
        diag_a,
        diag_b,
    })
}

/// Replays the construction of the 6-frame and the matrix units from
/// `E³`, `A_12`, `B_13` in `L(Q^{6m})`, where `A = [[a+b, b], [b, 2b]]`
/// and `B = [[b, b], [b, 2b]]`, together with the matrix identities behind
/// the invertibility of `A`, `B` and `A + (1 − 2^{−j})B` for `j ≤ depth`.
/// Failures are report entries; construction errors end the report early.
pub fn verify_frame_doubling(
    a: &RationalMatrix,
    b: &RationalMatrix,
    depth: usize,
) -> Result<StepReport> {
    let d = Doubling::new(a, b)?;
    let mut st = Steps::default();
    let (am, bm) = (d.big_a(), d.big_b());
    let m = d.m;
    let id = RationalMatrix::identity(m);
    let zero = RationalMatrix::zeros(m, m);

    let mut t = Rational::zero();
    let mut step = half();
    for j in 0..=depth {
        let p = block2(&id, &id.scale(&-half()), &zero, &id);
        let t1 = &t + &step;
        let two_t = two() - &step * two();
        let lhs = &p * &(&am + &bm.scale(&t));
        let rhs = block2(
            &(&d.a + &d.b.scale(&t1)),
            &zero,
            &d.b.scale(&two_t),
            &d.b.scale(&(two() * &two_t)),
        );
        st.matrix(
            "reduce_family",
            format!("[[1,−½],[0,1]]·(A + (1 − 2^−{j})B) is block triangular"),
            &lhs,
            &rhs,
        );
        t += &step;
        step *= half();
    }
    let q = block2(&id, &zero, &-&id, &id);
    st.matrix(
        "reduce_b",
        "[[1,0],[−1,1]]·B = [[b,b],[0,b]]",
        &(&q * &bm),
        &block2(&d.b, &d.b, &zero, &d.b),
    );

    let inv = |x: &RationalMatrix| x.determinant().map(|v| !v.is_zero()).unwrap_or(false);
    st.fact("invertible", "A is invertible", show_matrix(&am), inv(&am));
    st.fact("invertible", "B is invertible", show_matrix(&bm), inv(&bm));
    let fail = matrix_family_failure(&am, &bm, depth)?;
    st.fact(
        "invertible",
        format!("A + (1 − 2^−j)B invertible for j ≤ {depth}"),
        fail.map_or("all invertible".into(), |j| format!("singular at j = {j}")),
        fail.is_none(),
    );

    if let Err(e) = derive(&d, &mut st) {
        st.fact("aborted", "construction stopped", e.to_string(), false);
    }
    Ok(StepReport { steps: st.0 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SignReading {
    /// `ψ(A)_12 = ⊖(a_12' ∩ (a_1 + a_2))`.
    Negated,
    /// `ψ(A)_12 = a_12' ∩ (a_1 + a_2)`.
    Direct,
}

#[derive(Clone, Debug)]
pub struct M2Instance {
    pub config: WitnessConfig,
    pub form: FormSpace,
    pub frame: Frame,
    /// `A_k` in `R_12`.
    pub a12: RingElem,
    /// `B_k` in `R_13`.
    pub b13: RingElem,
    pub reading: SignReading,
    pub report: StepReport,
}

/// `Q^{3n}` with Gram `diag(I, A_k⁻¹, B_k⁻¹)` and its canonical 3-frame over
/// blocks of size `n = 2^{k−1}`. Checks positive definiteness of `A_k`, `B_k`
/// by minors and by block reduction, that the frame is orthogonal and
/// spanning, and that `A_k` and `B_k` are the negatives of the elements
/// `a_1j' ∩ (a_1 + a_j)`. If the negated reading fails, the direct one is
/// tried and recorded.
pub fn build_generating_frame(config: &WitnessConfig) -> Result<M2Instance> {
    let (am, bm) = config.matrices();
    let n = config.n();
    let mut st = Steps::default();
    let (ka, kb) = (config.k, config.clone());
    let minors = am.is_positive_definite()? && bm.is_positive_definite()?;
    st.fact(
        "pd_minors",
        "A_k, B_k positive definite by leading minors",
        String::new(),
        minors,
    );
    let reduction = pd_by_reduction(ka, &kb.a, &kb.b, &Rational::zero())?
        && pd_b_by_reduction(ka, &kb.a, &kb.b)?;
    st.fact(
        "pd_reduction",
        "A_k, B_k positive definite by block reduction",
        String::new(),
        reduction,
    );

    let gram =
        RationalMatrix::block_diag(&[RationalMatrix::identity(n), am.inverse()?, bm.inverse()?]);
    let form = FormSpace::new(gram)?;
    let frame = canonical_frame(3, n, Some(form.clone()))?;
    st.fact(
        "frame_orthogonal",
        "Ẽ³_i ⊆ (Ẽ³_j)' for i ≠ j",
        String::new(),
        frame.is_orthogonal(),
    );
    st.fact(
        "frame_spanning",
        "Ẽ³ is spanning",
        String::new(),
        frame.is_spanning(),
    );

    let a12 = embed_ring(&frame, &am, 0, 1)?;
    let b13 = embed_ring(&frame, &bm, 0, 2)?;
    let mut readings = Vec::new();
    for (name, target, j) in [("psi_a", &a12, 1), ("psi_b", &b13, 2)] {
        let plane = frame.a(0).sum(frame.a(j))?;
        let u = RingElem::new(
            &frame,
            0,
            j,
            frame.ortho(frame.pair(0, j))?.intersect(&plane)?,
        )?;
        let neg = ring_neg(&frame, &u)?;
        let label = format!(
            "ψ(X)_1{} = ⊖((Ẽ³_1{})' ∩ (Ẽ³_1 + Ẽ³_{}))",
            j + 1,
            j + 1,
            j + 1
        );
        if neg == *target {
            st.space(name, label, neg.carrier(), target.carrier());
            readings.push(SignReading::Negated);
        } else if u == *target {
            st.space(name, label.replace('⊖', ""), u.carrier(), target.carrier());
            readings.push(SignReading::Direct);
        } else {
            return Err(WitnessError::IdentityMismatch {
                name: name.into(),
                lhs: show_subspace(neg.carrier()),
                rhs: show_subspace(target.carrier()),
            });
        }
    }
    let reading = if readings.iter().all(|r| *r == SignReading::Negated) {
        SignReading::Negated
    } else {
        SignReading::Direct
    };
    Ok(M2Instance {
        config: config.clone(),
        form,
        frame,
        a12,
        b13,
        reading,
        report: StepReport { steps: st.0 },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceEntry {
    pub name: String,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub k: usize,
    pub ambient: usize,
    pub steps: StepReport,
    pub trace: Vec<TraceEntry>,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.steps.passed()
    }
}

/// One inductive step of the generation argument at level `k`: with
/// `a = A_k`, `b = B_k` (size `n = 2^{k−1}`) the lattice `L(Q^{6n})` with its
/// canonical 3-frame over blocks of size `2n` and generators `(A_{k+1})_12`,
/// `(B_{k+1})_13`. Derives the whole 6-frame (including the pairs that mix
/// halves), the images `φa_12`, `φb_13` of the previous level's generators,
/// and `diag(c, 0)_12` for sampled scalars `c`. Fails with `CapExceeded` if
/// the chain is longer than `cap` steps.
pub fn replay_generation_chain(k: usize, cap: usize) -> Result<ChainReport> {
    let cfg = WitnessConfig::level(k)?;
    let (a, b) = cfg.matrices();
    let d = Doubling::new(&a, &b)?;
    let f = &d.e3;
    let mut st = Steps::default();
    let der = derive(&d, &mut st)?;
    let mut pairs = der.pairs;

    // Remaining pairs from a_jl = (a_j + a_l)(a_jk + a_kl).
    while let Some((j, l)) = (0..6)
        .flat_map(|j| (j + 1..6).map(move |l| (j, l)))
        .find(|&(j, l)| pairs[j][l].is_none())
    {
        let k = (0..6)
            .find(|&k| k != j && k != l && pairs[j][k].is_some() && pairs[k][l].is_some())
            .ok_or_else(|| {
                WitnessError::DimensionMismatch(format!("pair {}{} unreachable", j + 1, l + 1))
            })?;
        let x = meet(
            &join(&der.units[j], &der.units[l])?,
            &join(pairs[j][k].as_ref().unwrap(), pairs[k][l].as_ref().unwrap())?,
        )?;
        st.space(
            "mixed_pairs",
            format!(
                "Ẽ⁶_{0}{1} = (Ẽ⁶_{0} + Ẽ⁶_{1})(Ẽ⁶_{0}{2} + Ẽ⁶_{2}{1})",
                j + 1,
                l + 1,
                k + 1
            ),
            &x,
            d.fine.pair(j, l),
        );
        pairs[j][l] = Some(x.clone());
        pairs[l][j] = Some(x);
    }
    let mut table = std::collections::BTreeMap::new();
    for j in 0..6 {
        for l in j + 1..6 {
            table.insert((j, l), pairs[j][l].clone().unwrap());
        }
    }
    let six = check_frame(der.units.clone(), &table, None);
    st.fact(
        "six_frame",
        "derived Ẽ⁶ satisfies the frame axioms and spans",
        String::new(),
        six.map(|x| x.is_spanning()).unwrap_or(false),
    );

    // φ: the previous level's 3-frame sits on the first halves.
    let mut phi_pairs = std::collections::BTreeMap::new();
    for j in 0..3 {
        for l in j + 1..3 {
            phi_pairs.insert((j, l), table[&(j, l)].clone());
        }
    }
    let phi = check_frame(der.units[..3].to_vec(), &phi_pairs, None)?;
    let first = join(&der.units[0], &der.units[1])?;
    let phi_a = meet(&first, &join(der.diag_a.carrier(), &der.units[3])?)?;
    let phi_oracle = |c: &RationalMatrix, j: usize| -> Result<Subspace> {
        Ok(embed_ring(&d.fine, c, 0, j)?.carrier().clone())
    };
    st.space(
        "phi_a",
        "φa_12 = (Ẽ⁶_1 + Ẽ⁶_2) ∩ (diag(a,0)_12 + Ẽ⁶_4)",
        &phi_a,
        &phi_oracle(&a, 1)?,
    );
    let diag_b13 = pi_transfer(f, &der.diag_b, 0, 2)?;
    let phi_b = meet(
        &join(&der.units[0], &der.units[2])?,
        &join(diag_b13.carrier(), &der.units[3])?,
    )?;
    st.space(
        "phi_b",
        "φb_13 = (Ẽ⁶_1 + Ẽ⁶_3) ∩ (diag(b,0)_13 + Ẽ⁶_4)",
        &phi_b,
        &phi_oracle(&b, 2)?,
    );

    let one = RingElem::new(&phi, 0, 1, phi.pair(0, 1).clone())?;
    let two_e = ring_add(&phi, &one, &one)?;
    let half_e =
        ring_inverse(&phi, &two_e)?.ok_or(FrameError::NotInCoordinateDomain("12".into()))?;
    let plane = join(f.a(0), f.a(1))?;
    let n = d.m;
    for (name, c, scalar) in [
        ("1", &one, Rational::one()),
        ("2", &two_e, two()),
        ("1/2", &half_e, half()),
    ] {
        let x = meet(&join(c.carrier(), &der.units[3])?, &plane)?;
        let expected = d.embed(&d.diag(&RationalMatrix::scalar(n, &scalar)), 0, 1)?;
        st.space(
            "phi_sample",
            format!("diag({name},0)_12 = (φ{name}_12 + Ẽ⁶_4) ∩ (E³_1 + E³_2)"),
            &x,
            expected.carrier(),
        );
    }
    let x = meet(&join(&phi_a, &der.units[3])?, &plane)?;
    st.space(
        "phi_sample",
        "diag(a,0)_12 = (φa_12 + Ẽ⁶_4) ∩ (E³_1 + E³_2)",
        &x,
        der.diag_a.carrier(),
    );

    if st.0.len() > cap {
        return Err(WitnessError::CapExceeded {
            cap,
            needed: st.0.len(),
        });
    }
    let trace =
        st.0.iter()
            .map(|s| TraceEntry {
                name: s.label.clone(),
                dim: s
                    .lhs
                    .split_whitespace()
                    .nth(1)
                    .and_then(|v| v.parse().ok())
                    .unwrap_or(0),
            })
            .collect();
    Ok(ChainReport {
        k,
        ambient: 6 * n,
        steps: StepReport { steps: st.0 },
        trace,
    })
}

/// `u ↦ u ⊕ u` from `Q^m` into `Q^{2m}`: each basis vector `v` gives
/// `(v, 0)` and `(0, v)`.
pub fn doubling_embed(u: &Subspace) -> Subspace {
    let m = u.ambient();
    let mut rows = Vec::with_capacity(2 * u.dim());
    for v in u.basis_vectors() {
        let mut lo = v.clone();
        lo.resize(2 * m, Rational::zero());
        let mut hi = vec![Rational::zero(); m];
        hi.extend(v);
        rows.push(lo);
        rows.push(hi);
    }
    Subspace::span(2 * m, &rows).expect("vectors of length 2m")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{int, rat};

    #[test]
    fn ab_examples() {
        let (a, b) = ab_matrices(1, &int(1), &int(1)).unwrap();
        assert_eq!(
            (a.clone(), b),
            (RationalMatrix::identity(1), RationalMatrix::identity(1))
        );
        let (a, b) = ab_matrices(2, &int(1), &int(1)).unwrap();
        assert_eq!(a, RationalMatrix::from_i64(&[&[2, 1], &[1, 2]]));
        assert_eq!(b, RationalMatrix::from_i64(&[&[1, 1], &[1, 2]]));
        let (a, b) = ab_matrices(3, &int(1), &int(1)).unwrap();
        assert_eq!(a.rows(), 4);
        assert!(a.is_positive_definite().unwrap() && b.is_positive_definite().unwrap());
        assert!(matches!(
            ab_matrices(2, &int(0), &int(1)),
            Err(WitnessError::NonPositiveSeed { .. })
        ));
        for k in 1..=4 {
            assert!(pd_by_reduction(k, &rat(1, 3), &int(2), &int(0)).unwrap());
            assert!(pd_b_by_reduction(k, &rat(1, 3), &int(2)).unwrap());
        }
    }

    #[test]
    fn family_examples() {
        let r = invertibility_family_check(&int(1), &int(1), 5);
        assert!(r.holds_for_all && r.first_zero.is_none());
        let r = invertibility_family_check(&int(-1), &int(1), 4);
        assert!(r.holds_for_all && r.first_zero.is_none());
        let r = invertibility_family_check(&rat(-1, 2), &int(1), 4);
        assert_eq!(r.first_zero, Some(1));
        assert!(!r.holds_for_all);
        let r = invertibility_family_check(&rat(-7, 8), &int(1), 2);
        assert_eq!(r.first_zero, None);
        assert!(!r.holds_for_all);
    }

    #[test]
    fn doubling_replay() {
        for (a, b) in [(1, 1), (2, 1), (3, 5)] {
            let r = verify_frame_doubling(
                &RationalMatrix::from_i64(&[&[a]]),
                &RationalMatrix::from_i64(&[&[b]]),
                4,
            )
            .unwrap();
            assert!(
                r.passed(),
                "{:#?}",
                r.steps.iter().filter(|s| !s.passed).collect::<Vec<_>>()
            );
            assert!(r.uncovered(DOUBLING_CHECKLIST).is_empty());
        }
        let a = RationalMatrix::from_i64(&[&[1, 1], &[0, 2]]);
        let b = RationalMatrix::from_i64(&[&[2, 0], &[1, 1]]);
        assert!(verify_frame_doubling(&a, &b, 3).unwrap().passed());
    }

    #[test]
    fn m2_levels() {
        for k in 1..=3 {
            let inst = build_generating_frame(&WitnessConfig::level(k).unwrap()).unwrap();
            assert!(inst.report.passed());
            assert_eq!(inst.reading, SignReading::Negated);
        }
    }

    #[test]
    fn chain_levels() {
        for k in 1..=2 {
            let r = replay_generation_chain(k, 1000).unwrap();
            assert!(
                r.passed(),
                "{:#?}",
                r.steps
                    .steps
                    .iter()
                    .filter(|s| !s.passed)
                    .collect::<Vec<_>>()
            );
            assert!(r.steps.uncovered(CHAIN_CHECKLIST).is_empty());
        }
        assert!(matches!(
            replay_generation_chain(1, 3),
            Err(WitnessError::CapExceeded { .. })
        ));
    }

    #[test]
    fn doubling_examples() {
        let e1 = Subspace::coordinate(2, [0]);
        assert_eq!(doubling_embed(&e1), Subspace::coordinate(4, [0, 2]));
        assert!(doubling_embed(&Subspace::zero(3)).is_zero());
        assert!(doubling_embed(&Subspace::full(3)).is_full());
    }
}

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use petgraph::unionfind::UnionFind;

use super::lattice::{is_modular, is_orthomodular, FiniteOrtholattice};
use super::perspectivity::perspectivity_unchecked;
use super::FinLatError;

/// A congruence as a partition: `class[x]` is the least element index in the
/// class of `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    class: Vec<usize>,
}

impl Congruence {
    pub fn identity(n: usize) -> Self {
        Self {
            class: (0..n).collect(),
        }
    }

    pub fn all(n: usize) -> Self {
        Self { class: vec![0; n] }
    }

    /// The partition grouping elements with equal `key`. Compatibility with
    /// any lattice is not checked here.
    pub fn from_key<K: Eq + std::hash::Hash>(n: usize, key: impl Fn(usize) -> K) -> Self {
        let mut least: HashMap<K, usize> = HashMap::new();
        let class = (0..n).map(|x| *least.entry(key(x)).or_insert(x)).collect();
        Self { class }
    }

    fn from_union_find(uf: &UnionFind<usize>, n: usize) -> Self {
        let mut least: HashMap<usize, usize> = HashMap::new();
        let class = (0..n)
            .map(|x| *least.entry(uf.find(x)).or_insert(x))
            .collect();
        Self { class }
    }

    fn to_union_find(&self) -> UnionFind<usize> {
        let mut uf = UnionFind::new(self.class.len());
        for (x, &c) in self.class.iter().enumerate() {
            uf.union(x, c);
        }
        uf
    }

    pub fn len(&self) -> usize {
        self.class.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class.is_empty()
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.class[x] == self.class[y]
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class[x]
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut by_rep: Vec<Vec<usize>> = vec![Vec::new(); self.class.len()];
        for (x, &c) in self.class.iter().enumerate() {
            by_rep[c].push(x);
        }
        by_rep.into_iter().filter(|c| !c.is_empty()).collect()
    }

    pub fn num_classes(&self) -> usize {
        self.class
            .iter()
            .enumerate()
            .filter(|&(x, &c)| x == c)
            .count()
    }

    pub fn is_identity(&self) -> bool {
        self.num_classes() == self.class.len()
    }

    pub fn is_all(&self) -> bool {
        self.num_classes() <= 1
    }

    /// `self ⊆ other` as relations.
    pub fn leq(&self, other: &Self) -> bool {
        self.class
            .iter()
            .enumerate()
            .all(|(x, &c)| other.related(x, c))
    }

    pub fn join(&self, other: &Self) -> Self {
        let mut uf = self.to_union_find();
        for (x, &c) in other.class.iter().enumerate() {
            uf.union(x, c);
        }
        Self::from_union_find(&uf, self.class.len())
    }

    pub fn meet(&self, other: &Self) -> Self {
        let mut least: HashMap<(usize, usize), usize> = HashMap::new();
        let class = (0..self.class.len())
            .map(|x| *least.entry((self.class[x], other.class[x])).or_insert(x))
            .collect();
        Self { class }
    }

    /// The class of the bottom element, sorted.
    pub fn zero_class(&self, l: &FiniteOrtholattice) -> Vec<usize> {
        (0..l.len())
            .filter(|&x| self.related(x, l.bottom()))
            .collect()
    }

    pub fn quotients(&self, l: &FiniteOrtholattice) -> QuotientSet {
        let mut q = QuotientSet::empty(l.len());
        for a in 0..l.len() {
            for b in l.down_set(a).ones() {
                if self.related(a, b) {
                    q.insert(a, b);
                }
            }
        }
        q
    }

    /// Whether the partition is compatible with join, meet and (if present)
    /// the orthocomplement.
    pub fn is_compatible(&self, l: &FiniteOrtholattice) -> bool {
        (0..l.len()).all(|x| {
            let r = self.class[x];
            (x == r || l.ortho_table().is_none_or(|o| self.related(o[x], o[r])))
                && (0..l.len()).all(|z| {
                    self.related(l.join(x, z), l.join(r, z))
                        && self.related(l.meet(x, z), l.meet(r, z))
                })
        })
    }
}

/// Quotients `a/b` (`a ≥ b`) belonging to a congruence, as a bit table
/// indexed by `a * n + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSet {
    n: usize,
    bits: FixedBitSet,
}

impl QuotientSet {
    fn empty(n: usize) -> Self {
        Self {
            n,
            bits: FixedBitSet::with_capacity(n * n),
        }
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.bits.contains(a * self.n + b)
    }

    /// Returns whether the quotient was new.
    fn insert(&mut self, a: usize, b: usize) -> bool {
        !self.bits.put(a * self.n + b)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.bits.ones().map(|k| (k / self.n, k % self.n)).collect()
    }

    /// `x θ y` iff `(x + y)/(xy)` is a quotient of the set.
    pub fn to_congruence(&self, l: &FiniteOrtholattice) -> Congruence {
        let mut uf = UnionFind::new(l.len());
        for (a, b) in self.pairs() {
            uf.union(a, b);
        }
        Congruence::from_union_find(&uf, l.len())
    }
}

/// Least quotient set containing `a/b` that contains all trivial quotients
/// and is closed under subquotients, transposes, and the join and meet rules
/// `a/c, b/c ⇒ (a+b)/c` and `c/a, c/b ⇒ c/(ab)`. On an orthomodular lattice
/// these are exactly the quotient sets of congruences.
pub fn congruence_from_quotient(
    l: &FiniteOrtholattice,
    a: usize,
    b: usize,
) -> Result<QuotientSet, FinLatError> {
    if !l.leq(b, a) {
        return Err(FinLatError::NotComparable(
            l.name(a).into(),
            l.name(b).into(),
        ));
    }
    if !is_orthomodular(l) {
        return Err(FinLatError::NotOrthomodular);
    }
    Ok(quotient_closure(l, &[(a, b)]))
}

fn quotient_closure(l: &FiniteOrtholattice, seeds: &[(usize, usize)]) -> QuotientSet {
    let n = l.len();
    let mut q = QuotientSet::empty(n);
    let mut work: Vec<(usize, usize)> = (0..n)
        .map(|x| (x, x))
        .chain(seeds.iter().copied())
        .collect();
    // quotients indexed by lower and by upper end, for the join/meet rules
    let mut by_lower: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut by_upper: Vec<Vec<usize>> = vec![Vec::new(); n];
    while let Some((a, b)) = work.pop() {
        if !q.insert(a, b) {
            continue;
        }
        by_lower[b].push(a);
        by_upper[a].push(b);
        for c in l.interval(b, a) {
            work.push((a, c));
            work.push((c, b));
        }
        for d in 0..n {
            // a/b transposes up to (a + d)/d when ad = b
            if l.meet(a, d) == b {
                work.push((l.join(a, d), d));
            }
            // a/b transposes down to c/(cb) when c + b = a
            if l.join(d, b) == a {
                work.push((d, l.meet(d, b)));
            }
        }
        for &other in &by_lower[b] {
            work.push((l.join(a, other), b));
        }
        for &other in &by_upper[a] {
            work.push((a, l.meet(b, other)));
        }
    }
    q
}

/// Re-checks every closure rule on a quotient set; returns the first
/// violation found.
pub fn check_closure_rules(l: &FiniteOrtholattice, q: &QuotientSet) -> Result<(), String> {
    let n = l.len();
    let name = |x: usize| l.name(x).to_string();
    for x in 0..n {
        if !q.contains(x, x) {
            return Err(format!("missing trivial quotient {0}/{0}", name(x)));
        }
    }
    let pairs = q.pairs();
    for &(a, b) in &pairs {
        if !l.leq(b, a) {
            return Err(format!("{}/{} is not a quotient", name(a), name(b)));
        }
        for c in l.interval(b, a) {
            for d in l.interval(b, c) {
                if !q.contains(c, d) {
                    return Err(format!(
                        "subquotient {}/{} of {}/{} missing",
                        name(c),
                        name(d),
                        name(a),
                        name(b)
                    ));
                }
            }
        }
        for d in 0..n {
            if l.meet(a, d) == b && !q.contains(l.join(a, d), d) {
                return Err(format!(
                    "upward transpose of {}/{} through {} missing",
                    name(a),
                    name(b),
                    name(d)
                ));
            }
            if l.join(d, b) == a && !q.contains(d, l.meet(d, b)) {
                return Err(format!(
                    "downward transpose of {}/{} to {} missing",
                    name(a),
                    name(b),
                    name(d)
                ));
            }
        }
        for &(c, e) in &pairs {
            if e == b && !q.contains(l.join(a, c), b) {
                return Err(format!(
                    "join rule fails for {}/{} and {}/{}",
                    name(a),
                    name(b),
                    name(c),
                    name(e)
                ));
            }
            if c == a && !q.contains(a, l.meet(b, e)) {
                return Err(format!(
                    "meet rule fails for {}/{} and {}/{}",
                    name(a),
                    name(b),
                    name(c),
                    name(e)
                ));
            }
        }
    }
    Ok(())
}

/// Congruence generated by identifying `x` and `y`, computed on partitions:
/// merge classes until every class is stable under `z ↦ x + z` and
/// `z ↦ xz`. Uses only the lattice operations.
pub fn principal_congruence(l: &FiniteOrtholattice, x: usize, y: usize) -> Congruence {
    let n = l.len();
    let mut uf = UnionFind::new(n);
    uf.union(x, y);
    loop {
        let mut changed = false;
        for e in 0..n {
            let r = uf.find(e);
            if r == e {
                continue;
            }
            for z in 0..n {
                changed |= uf.union(l.join(e, z), l.join(r, z));
                changed |= uf.union(l.meet(e, z), l.meet(r, z));
            }
        }
        if !changed {
            return Congruence::from_union_find(&uf, n);
        }
    }
}

/// Least reflexive symmetric sublattice of `L²` containing `pairs`, without
/// forcing transitivity. Returned as one bit row per element.
pub fn tolerance_closure(l: &FiniteOrtholattice, pairs: &[(usize, usize)]) -> Vec<FixedBitSet> {
    let n = l.len();
    let mut rel: Vec<FixedBitSet> = (0..n).map(|_| FixedBitSet::with_capacity(n)).collect();
    let mut list: Vec<(usize, usize)> = Vec::new();
    let mut work: Vec<(usize, usize)> = (0..n).map(|x| (x, x)).collect();
    for &(x, y) in pairs {
        work.push((x, y));
        work.push((y, x));
    }
    while let Some((x, y)) = work.pop() {
        if rel[x].put(y) {
            continue;
        }
        for &(u, v) in &list {
            work.push((l.join(x, u), l.join(y, v)));
            work.push((l.meet(x, u), l.meet(y, v)));
        }
        list.push((x, y));
        work.push((y, x));
    }
    rel
}

/// All congruences: joins of principal congruences of covering pairs,
/// ordered from the identity upward by decreasing class count.
pub fn congruence_lattice(l: &FiniteOrtholattice) -> Vec<Congruence> {
    let n = l.len();
    let mut principals: Vec<Congruence> = l
        .cover_pairs()
        .into_iter()
        .map(|(b, a)| principal_congruence(l, a, b))
        .collect();
    principals.sort();
    principals.dedup();
    let mut all = vec![Congruence::identity(n)];
    let mut i = 0;
    while i < all.len() {
        for p in &principals {
            let j = all[i].join(p);
            if !all.contains(&j) {
                all.push(j);
            }
        }
        i += 1;
    }
    all.sort_by_key(|c| std::cmp::Reverse(c.num_classes()));
    all
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiReport {
    /// A unique minimal nontrivial congruence exists.
    pub si_by_congruences: bool,
    pub minimal: Option<Congruence>,
    /// Every two nonzero elements lie above perspective nonzero elements.
    pub si_by_perspectivity: bool,
    pub num_congruences: usize,
}

impl SiReport {
    pub fn agree(&self) -> bool {
        self.si_by_congruences == self.si_by_perspectivity
    }
}

/// Subdirect irreducibility, decided by congruence enumeration and
/// independently by the perspectivity criterion.
pub fn is_subdirectly_irreducible(l: &FiniteOrtholattice) -> Result<SiReport, FinLatError> {
    if !is_modular(l) {
        return Err(FinLatError::NotModular);
    }
    let cons = congruence_lattice(l);
    let nontrivial: Vec<&Congruence> = cons.iter().filter(|c| !c.is_identity()).collect();
    let minimal: Vec<&Congruence> = nontrivial
        .iter()
        .copied()
        .filter(|c| nontrivial.iter().all(|d| !d.leq(c) || d == c))
        .collect();
    let si_by_congruences = minimal.len() == 1;

    let persp = perspectivity_unchecked(l);
    let n = l.len();
    let nonzero: Vec<usize> = (0..n).filter(|&x| x != l.bottom()).collect();
    let reach: Vec<FixedBitSet> = (0..n)
        .map(|a| {
            let mut s = FixedBitSet::with_capacity(n);
            for x in l.down_set(a).ones().filter(|&x| x != l.bottom()) {
                s.union_with(&persp[x]);
            }
            s
        })
        .collect();
    let si_by_perspectivity = n > 1
        && nonzero.iter().all(|&a| {
            nonzero.iter().all(|&b| {
                reach[a]
                    .intersection(l.down_set(b))
                    .any(|x| x != l.bottom())
            })
        });
    Ok(SiReport {
        si_by_congruences,
        minimal: if si_by_congruences {
            Some(minimal[0].clone())
        } else {
            None
        },
        si_by_perspectivity,
        num_congruences: cons.len(),
    })
}

/// `L/θ` with classes named after their least element, and the projection
/// (element index → class index).
pub fn quotient_lattice(
    l: &FiniteOrtholattice,
    theta: &Congruence,
) -> Result<(FiniteOrtholattice, Vec<usize>), FinLatError> {
    if !theta.is_compatible(l) {
        return Err(FinLatError::Structure(
            "partition is not a congruence".into(),
        ));
    }
    let reps: Vec<usize> = (0..l.len()).filter(|&x| theta.class_of(x) == x).collect();
    let pos: HashMap<usize, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let proj: Vec<usize> = (0..l.len()).map(|x| pos[&theta.class_of(x)]).collect();
    let names = reps.iter().map(|&r| format!("[{}]", l.name(r))).collect();
    let ortho = l
        .ortho_table()
        .map(|o| reps.iter().map(|&r| proj[o[r]]).collect());
    let q = FiniteOrtholattice::from_leq_fn(
        names,
        |a, b| theta.related(l.join(reps[a], reps[b]), reps[b]),
        ortho,
    )?;
    Ok((q, proj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finlat::{boolean, interval_subalgebra, mo, o6, product};

    #[test]
    fn quotient_closure_examples() {
        let m = mo(2);
        let a1 = m.index_of("a1").unwrap();
        let q = congruence_from_quotient(&m, a1, m.bottom()).unwrap();
        assert!(q.to_congruence(&m).is_all());
        check_closure_rules(&m, &q).unwrap();

        let b = boolean(2);
        let a = b.index_of("a1").unwrap();
        let q = congruence_from_quotient(&b, a, b.bottom()).unwrap();
        let c = q.to_congruence(&b);
        assert_eq!(c.zero_class(&b), vec![b.bottom(), a]);
        assert_eq!(c.num_classes(), 2);

        let q = congruence_from_quotient(&b, a, a).unwrap();
        assert!(q.to_congruence(&b).is_identity());
        assert_eq!(q.len(), b.len());

        let a2 = b.index_of("a2").unwrap();
        assert!(matches!(
            congruence_from_quotient(&b, a, a2),
            Err(FinLatError::NotComparable(_, _))
        ));
        assert_eq!(
            congruence_from_quotient(&o6(), 1, 0),
            Err(FinLatError::NotOrthomodular)
        );
    }

    #[test]
    fn both_routes_agree() {
        let l = product(&mo(2), &boolean(1));
        for a in 0..l.len() {
            for b in l.down_set(a).ones() {
                let q = congruence_from_quotient(&l, a, b).unwrap();
                check_closure_rules(&l, &q).unwrap();
                let p = principal_congruence(&l, a, b);
                assert_eq!(q.to_congruence(&l), p);
                assert_eq!(p.quotients(&l), q);
                // lattice congruences of an orthomodular lattice respect '
                assert!(p.is_compatible(&l));
            }
        }
    }

    #[test]
    fn si_examples() {
        for n in 2..=4 {
            let r = is_subdirectly_irreducible(&mo(n)).unwrap();
            assert!(r.si_by_congruences && r.agree());
            assert!(r.minimal.unwrap().is_all());
        }
        let r = is_subdirectly_irreducible(&boolean(2)).unwrap();
        assert!(!r.si_by_congruences && r.agree());
        let r = is_subdirectly_irreducible(&product(&mo(2), &mo(2))).unwrap();
        assert!(!r.si_by_congruences && r.agree());
        assert_eq!(r.num_congruences, 4);
        let r = is_subdirectly_irreducible(&boolean(1)).unwrap();
        assert!(r.si_by_congruences && r.agree());
        let r = is_subdirectly_irreducible(&boolean(0)).unwrap();
        assert!(!r.si_by_congruences && r.agree());
    }

    #[test]
    fn boolean_congruence_lattice_is_boolean() {
        assert_eq!(congruence_lattice(&boolean(3)).len(), 8);
    }

    #[test]
    fn tolerance_closes_to_congruence() {
        let l = product(&mo(3), &boolean(1));
        for a in 0..l.len() {
            for b in 0..l.len() {
                let rel = tolerance_closure(&l, &[(a, b)]);
                let c = principal_congruence(&l, l.join(a, b), l.meet(a, b));
                for x in 0..l.len() {
                    for y in 0..l.len() {
                        assert_eq!(rel[x].contains(y), c.related(x, y));
                    }
                }
            }
        }
    }

    #[test]
    fn simple_intervals_under_minimal_congruence() {
        let m = mo(3);
        let mu = is_subdirectly_irreducible(&m).unwrap().minimal.unwrap();
        for b in mu.zero_class(&m) {
            let (sub, _) = interval_subalgebra(&m, b, m.bottom()).unwrap();
            if sub.len() > 1 {
                assert_eq!(congruence_lattice(&sub).len(), 2);
            }
        }
    }

    #[test]
    fn quotient_by_projection_kernel() {
        let l = product(&mo(2), &boolean(1));
        let x = l.index_of("(0,1)").unwrap();
        let theta = principal_congruence(&l, x, l.bottom());
        let (q, proj) = quotient_lattice(&l, &theta).unwrap();
        assert_eq!(q.len(), 6);
        assert_eq!(proj.len(), l.len());
        assert!(crate::finlat::validate(&q).is_mol);
    }
}

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::FinLatError;

/// A finite bounded lattice given by its order, optionally carrying an
/// orthocomplementation. Joins and meets are derived from the order once at
/// construction and cached as tables.
#[derive(Clone, Debug)]
pub struct FiniteOrtholattice {
    names: Vec<String>,
    index: HashMap<String, usize>,
    bottom: usize,
    top: usize,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    join: Vec<u32>,
    meet: Vec<u32>,
    ortho: Option<Vec<usize>>,
}

impl PartialEq for FiniteOrtholattice {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.up == other.up && self.ortho == other.ortho
    }
}

impl Eq for FiniteOrtholattice {}

fn transitive_closure(rel: &mut [FixedBitSet]) {
    let n = rel.len();
    for k in 0..n {
        let row_k = rel[k].clone();
        for row in rel.iter_mut() {
            if row.contains(k) {
                row.union_with(&row_k);
            }
        }
    }
}

impl FiniteOrtholattice {
    /// Builds a lattice from element names and generating order pairs
    /// `(a, b)` meaning `a ≤ b`. The reflexive-transitive closure is taken.
    pub fn from_order(
        names: Vec<String>,
        pairs: &[(usize, usize)],
        ortho: Option<Vec<usize>>,
    ) -> Result<Self, FinLatError> {
        let n = names.len();
        if n == 0 {
            return Err(FinLatError::Structure(
                "a lattice needs at least one element".into(),
            ));
        }
        let mut up: Vec<FixedBitSet> = (0..n).map(|_| FixedBitSet::with_capacity(n)).collect();
        for (i, row) in up.iter_mut().enumerate() {
            row.insert(i);
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(FinLatError::Structure(format!(
                    "order pair ({a},{b}) out of range"
                )));
            }
            up[a].insert(b);
        }
        transitive_closure(&mut up);
        Self::from_up_sets(names, up, ortho)
    }

    /// Builds a lattice from an order predicate `leq(a, b)`, which must
    /// already be a partial order.
    pub fn from_leq_fn(
        names: Vec<String>,
        leq: impl Fn(usize, usize) -> bool,
        ortho: Option<Vec<usize>>,
    ) -> Result<Self, FinLatError> {
        let n = names.len();
        let up = (0..n)
            .map(|a| {
                let mut s = FixedBitSet::with_capacity(n);
                for b in 0..n {
                    if leq(a, b) {
                        s.insert(b);
                    }
                }
                s
            })
            .collect();
        Self::from_up_sets(names, up, ortho)
    }

    fn from_up_sets(
        names: Vec<String>,
        up: Vec<FixedBitSet>,
        ortho: Option<Vec<usize>>,
    ) -> Result<Self, FinLatError> {
        let n = names.len();
        let mut index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(FinLatError::Structure(format!("bad element name `{name}`")));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(FinLatError::Structure(format!(
                    "duplicate element name `{name}`"
                )));
            }
        }
        let mut down: Vec<FixedBitSet> = (0..n).map(|_| FixedBitSet::with_capacity(n)).collect();
        for (a, row) in up.iter().enumerate() {
            if !row.contains(a) {
                return Err(FinLatError::Structure(format!(
                    "order is not reflexive at `{}`",
                    names[a]
                )));
            }
            for b in row.ones() {
                if b != a && up[b].contains(a) {
                    return Err(FinLatError::Structure(format!(
                        "order is not antisymmetric: `{}` and `{}`",
                        names[a], names[b]
                    )));
                }
                for c in up[b].ones() {
                    if !row.contains(c) {
                        return Err(FinLatError::Structure("order is not transitive".into()));
                    }
                }
                down[b].insert(a);
            }
        }
        let join = Self::bound_table(&names, &up, "join")?;
        let meet = Self::bound_table(&names, &down, "meet")?;
        let bottom = (0..n)
            .find(|&a| up[a].count_ones(..) == n)
            .ok_or_else(|| FinLatError::Structure("no bottom element".into()))?;
        let top = (0..n)
            .find(|&a| down[a].count_ones(..) == n)
            .ok_or_else(|| FinLatError::Structure("no top element".into()))?;
        if let Some(o) = &ortho {
            if o.len() != n || o.iter().any(|&x| x >= n) {
                return Err(FinLatError::Structure(
                    "ortho table has the wrong shape".into(),
                ));
            }
        }
        Ok(Self {
            names,
            index,
            bottom,
            top,
            up,
            down,
            join,
            meet,
            ortho,
        })
    }

    /// Least upper bounds with respect to the order whose up-sets are `up`
    /// (pass down-sets to get greatest lower bounds).
    fn bound_table(
        names: &[String],
        up: &[FixedBitSet],
        what: &str,
    ) -> Result<Vec<u32>, FinLatError> {
        let n = up.len();
        // Relabel elements along a linear extension, so the least member of an
        // upper-bound set is its first set bit.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&a| std::cmp::Reverse(up[a].count_ones(..)));
        let mut pos = vec![0; n];
        for (k, &a) in order.iter().enumerate() {
            pos[a] = k;
        }
        let relabel: Vec<FixedBitSet> = up
            .iter()
            .map(|row| {
                let mut s = FixedBitSet::with_capacity(n);
                for b in row.ones() {
                    s.insert(pos[b]);
                }
                s
            })
            .collect();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            table[a * n + a] = a as u32;
            for b in a + 1..n {
                let common = &relabel[a] & &relabel[b];
                let lub = common
                    .ones()
                    .next()
                    .map(|k| order[k])
                    .filter(|&j| relabel[j] == common)
                    .ok_or_else(|| {
                        FinLatError::Structure(format!(
                            "`{}` and `{}` have no {what}",
                            names[a], names[b]
                        ))
                    })?;
                table[a * n + b] = lub as u32;
                table[b * n + a] = lub as u32;
            }
        }
        Ok(table)
    }

    /// Same lattice with a different (or no) orthocomplement table.
    pub fn with_ortho(&self, ortho: Option<Vec<usize>>) -> Result<Self, FinLatError> {
        if let Some(o) = &ortho {
            if o.len() != self.len() || o.iter().any(|&x| x >= self.len()) {
                return Err(FinLatError::Structure(
                    "ortho table has the wrong shape".into(),
                ));
            }
        }
        let mut l = self.clone();
        l.ortho = ortho;
        Ok(l)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn index_of(&self, name: &str) -> Result<usize, FinLatError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| FinLatError::UnknownElement(name.to_string()))
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b] as usize
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b] as usize
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn meet_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// Elements above `a`, including `a`.
    pub fn up_set(&self, a: usize) -> &FixedBitSet {
        &self.up[a]
    }

    /// Elements below `a`, including `a`.
    pub fn down_set(&self, a: usize) -> &FixedBitSet {
        &self.down[a]
    }

    /// Elements of the interval `[lo, hi]`, in index order.
    pub fn interval(&self, lo: usize, hi: usize) -> Vec<usize> {
        (&self.up[lo] & &self.down[hi]).ones().collect()
    }

    pub fn has_ortho(&self) -> bool {
        self.ortho.is_some()
    }

    pub fn ortho_table(&self) -> Option<&[usize]> {
        self.ortho.as_deref()
    }

    /// `a'`. Panics if the lattice has no orthocomplement; call
    /// [`require_ortho`](Self::require_ortho) first where that is possible.
    pub fn ortho(&self, a: usize) -> usize {
        self.ortho.as_ref().expect("lattice has no orthocomplement")[a]
    }

    pub fn require_ortho(&self) -> Result<(), FinLatError> {
        if self.has_ortho() {
            Ok(())
        } else {
            Err(FinLatError::NoOrtho)
        }
    }

    /// `a` covers `b`: `b < a` with nothing strictly between.
    pub fn covers(&self, a: usize, b: usize) -> bool {
        self.lt(b, a) && (&self.up[b] & &self.down[a]).count_ones(..) == 2
    }

    /// Hasse diagram edges `(lower, upper)`, sorted.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for b in 0..self.len() {
            for a in self.up[b].ones() {
                if a != b && self.covers(a, b) {
                    out.push((b, a));
                }
            }
        }
        out
    }

    pub fn atoms(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&a| self.covers(a, self.bottom))
            .collect()
    }

    pub fn is_atom(&self, a: usize) -> bool {
        self.covers(a, self.bottom)
    }

    /// Atoms below `a`.
    pub fn atoms_below(&self, a: usize) -> Vec<usize> {
        self.down[a].ones().filter(|&p| self.is_atom(p)).collect()
    }

    /// Length of the longest chain from 0 to `a`.
    pub fn height(&self, a: usize) -> usize {
        let mut elems: Vec<usize> = self.down[a].ones().collect();
        elems.sort_by_key(|&x| self.down[x].count_ones(..));
        let mut h = vec![0usize; self.len()];
        for &x in &elems {
            h[x] = self.down[x]
                .ones()
                .filter(|&y| y != x)
                .map(|y| h[y] + 1)
                .max()
                .unwrap_or(0);
        }
        h[a]
    }

    /// Whether the set is closed under the lattice operations, contains the
    /// bounds, and (if an ortho table is present) under `'`.
    pub fn is_subalgebra(&self, set: &[usize]) -> bool {
        let mut member = FixedBitSet::with_capacity(self.len());
        for &x in set {
            member.insert(x);
        }
        member.contains(self.bottom)
            && member.contains(self.top)
            && set
                .iter()
                .all(|&x| self.ortho.as_ref().is_none_or(|o| member.contains(o[x])))
            && set.iter().all(|&x| {
                set.iter()
                    .all(|&y| member.contains(self.join(x, y)) && member.contains(self.meet(x, y)))
            })
    }

    /// Least subalgebra containing `gens`, sorted by index.
    pub fn subalgebra_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut member = FixedBitSet::with_capacity(self.len());
        let mut list = vec![];
        let push = |x: usize, member: &mut FixedBitSet, list: &mut Vec<usize>| {
            if !member.put(x) {
                list.push(x);
            }
        };
        push(self.bottom, &mut member, &mut list);
        push(self.top, &mut member, &mut list);
        for &g in gens {
            push(g, &mut member, &mut list);
        }
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            if let Some(o) = &self.ortho {
                push(o[x], &mut member, &mut list);
            }
            for j in 0..=i {
                let y = list[j];
                push(self.join(x, y), &mut member, &mut list);
                push(self.meet(x, y), &mut member, &mut list);
            }
            i += 1;
        }
        member.ones().collect()
    }

    /// The subalgebra on `set` as a lattice in its own right, plus the
    /// embedding into `self` (new index → old index).
    pub fn restrict(&self, set: &[usize]) -> Result<(Self, Vec<usize>), FinLatError> {
        if !self.is_subalgebra(set) {
            return Err(FinLatError::NotSubalgebra);
        }
        let mut embed = set.to_vec();
        embed.sort_unstable();
        embed.dedup();
        let pos: HashMap<usize, usize> = embed.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let names = embed.iter().map(|&x| self.names[x].clone()).collect();
        let ortho = self
            .ortho
            .as_ref()
            .map(|o| embed.iter().map(|&x| pos[&o[x]]).collect());
        let l = Self::from_leq_fn(names, |a, b| self.leq(embed[a], embed[b]), ortho)?;
        Ok((l, embed))
    }
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// `MO_n`: bottom, top and `n` pairs of complementary atoms `a_i`, `a_i'`.
pub fn mo(n: usize) -> FiniteOrtholattice {
    let mut ns = names(&["0", "1"]);
    let mut ortho = vec![1, 0];
    for i in 1..=n {
        ns.push(format!("a{i}"));
        ns.push(format!("a{i}'"));
        let k = ns.len();
        ortho.push(k - 1);
        ortho.push(k - 2);
    }
    FiniteOrtholattice::from_leq_fn(ns, |a, b| a == b || a == 0 || b == 1, Some(ortho))
        .expect("MO_n is a lattice")
}

/// The Boolean algebra of subsets of an `n`-set. Element `i` is the subset
/// with bitmask `i`; names are `0`, `1` and joins of atoms like `a1+a3`.
pub fn boolean(n: usize) -> FiniteOrtholattice {
    let size = 1usize << n;
    let full = size - 1;
    let ns = (0..size)
        .map(|m| {
            if m == 0 {
                "0".to_string()
            } else if m == full {
                "1".to_string()
            } else {
                (0..n)
                    .filter(|i| m >> i & 1 == 1)
                    .map(|i| format!("a{}", i + 1))
                    .collect::<Vec<_>>()
                    .join("+")
            }
        })
        .collect();
    let ortho = (0..size).map(|m| full ^ m).collect();
    FiniteOrtholattice::from_leq_fn(ns, |a, b| a & !b == 0, Some(ortho))
        .expect("Boolean algebra is a lattice")
}

/// Chain `0 < c1 < ... < c(n-2) < 1` with `n` elements and no orthocomplement.
pub fn chain(n: usize) -> FiniteOrtholattice {
    assert!(n >= 1);
    let ns = (0..n)
        .map(|i| match i {
            0 => "0".to_string(),
            _ if i == n - 1 => "1".to_string(),
            _ => format!("c{i}"),
        })
        .collect();
    FiniteOrtholattice::from_leq_fn(ns, |a, b| a <= b, None).expect("chain is a lattice")
}

/// The hexagon ortholattice `0 < a < b < 1`, `0 < b' < a' < 1`, which is not
/// orthomodular.
pub fn o6() -> FiniteOrtholattice {
    let ns = names(&["0", "a", "b", "b'", "a'", "1"]);
    let pairs = [(0, 1), (1, 2), (2, 5), (0, 3), (3, 4), (4, 5)];
    FiniteOrtholattice::from_order(ns, &pairs, Some(vec![5, 4, 3, 2, 1, 0]))
        .expect("hexagon is a lattice")
}

/// Direct product. Element `(x, y)` has index `x * |l2| + y` and name `(x,y)`.
pub fn product(l1: &FiniteOrtholattice, l2: &FiniteOrtholattice) -> FiniteOrtholattice {
    let n2 = l2.len();
    let ns = (0..l1.len() * n2)
        .map(|i| format!("({},{})", l1.name(i / n2), l2.name(i % n2)))
        .collect();
    let ortho = match (l1.ortho_table(), l2.ortho_table()) {
        (Some(o1), Some(o2)) => Some(
            (0..l1.len() * n2)
                .map(|i| o1[i / n2] * n2 + o2[i % n2])
                .collect(),
        ),
        _ => None,
    };
    FiniteOrtholattice::from_leq_fn(
        ns,
        |a, b| l1.leq(a / n2, b / n2) && l2.leq(a % n2, b % n2),
        ortho,
    )
    .expect("product of lattices is a lattice")
}

/// Product of a list of lattices, folded from the left. The empty product is
/// the one-element lattice.
pub fn product_all(factors: &[FiniteOrtholattice]) -> FiniteOrtholattice {
    match factors.split_first() {
        None => boolean(0),
        Some((first, rest)) => rest.iter().fold(first.clone(), |acc, f| product(&acc, f)),
    }
}

/// The interval `[v, u]` with the relative orthocomplement `x ↦ v + x'u`.
/// Element names are inherited.
pub fn interval_subalgebra(
    l: &FiniteOrtholattice,
    u: usize,
    v: usize,
) -> Result<(FiniteOrtholattice, Vec<usize>), FinLatError> {
    if !l.leq(v, u) {
        return Err(FinLatError::NotBelow(l.name(v).into(), l.name(u).into()));
    }
    let elems = l.interval(v, u);
    let pos: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let ortho = l.ortho_table().map(|o| {
        elems
            .iter()
            .map(|&x| pos[&l.join(v, l.meet(o[x], u))])
            .collect()
    });
    let ns = elems.iter().map(|&x| l.name(x).to_string()).collect();
    let sub = FiniteOrtholattice::from_leq_fn(ns, |a, b| l.leq(elems[a], elems[b]), ortho)?;
    Ok((sub, elems))
}

/// Results of the exhaustive structural checks. Each failed check records a
/// counterexample in `notes`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub is_lattice: bool,
    pub is_ortholattice: bool,
    pub is_modular: bool,
    pub is_orthomodular: bool,
    pub is_mol: bool,
    pub notes: Vec<String>,
}

impl ValidationReport {
    /// Report for input that did not even form a lattice.
    pub fn not_a_lattice(reason: String) -> Self {
        Self {
            is_lattice: false,
            is_ortholattice: false,
            is_modular: false,
            is_orthomodular: false,
            is_mol: false,
            notes: vec![reason],
        }
    }
}

/// First triple `(u, v, w)` with `u ≤ w` violating `u + vw = (u + v)w`.
pub fn modularity_counterexample(l: &FiniteOrtholattice) -> Option<(usize, usize, usize)> {
    let n = l.len();
    for u in 0..n {
        for w in l.up_set(u).ones() {
            if w == u {
                continue;
            }
            for v in 0..n {
                if l.join(u, l.meet(v, w)) != l.meet(l.join(u, v), w) {
                    return Some((u, v, w));
                }
            }
        }
    }
    None
}

pub fn is_modular(l: &FiniteOrtholattice) -> bool {
    modularity_counterexample(l).is_none()
}

/// First element violating one of the orthocomplement laws.
fn ortho_counterexample(l: &FiniteOrtholattice) -> Option<String> {
    let o = l.ortho_table()?;
    for x in 0..l.len() {
        if o[o[x]] != x {
            return Some(format!("`{}`'' differs from `{}`", l.name(x), l.name(x)));
        }
        if l.meet(x, o[x]) != l.bottom() || l.join(x, o[x]) != l.top() {
            return Some(format!(
                "`{}`' is not a complement of `{}`",
                l.name(x),
                l.name(x)
            ));
        }
        for y in l.up_set(x).ones() {
            if !l.leq(o[y], o[x]) {
                return Some(format!(
                    "`{}` ≤ `{}` but not `{}`' ≤ `{}`'",
                    l.name(x),
                    l.name(y),
                    l.name(y),
                    l.name(x)
                ));
            }
        }
    }
    None
}

/// First comparable pair `y ≤ x` with `x ≠ y + x y'`.
pub fn orthomodularity_counterexample(l: &FiniteOrtholattice) -> Option<(usize, usize)> {
    let o = l.ortho_table()?;
    for y in 0..l.len() {
        for x in l.up_set(y).ones() {
            if l.join(y, l.meet(x, o[y])) != x {
                return Some((x, y));
            }
        }
    }
    None
}

pub fn is_ortholattice(l: &FiniteOrtholattice) -> bool {
    l.has_ortho() && ortho_counterexample(l).is_none()
}

pub fn is_orthomodular(l: &FiniteOrtholattice) -> bool {
    is_ortholattice(l) && orthomodularity_counterexample(l).is_none()
}

pub fn is_mol(l: &FiniteOrtholattice) -> bool {
    is_ortholattice(l) && is_modular(l)
}

pub fn validate(l: &FiniteOrtholattice) -> ValidationReport {
    let mut notes = Vec::new();
    let modular = match modularity_counterexample(l) {
        None => true,
        Some((u, v, w)) => {
            notes.push(format!(
                "modularity fails at u=`{}`, v=`{}`, w=`{}`",
                l.name(u),
                l.name(v),
                l.name(w)
            ));
            false
        }
    };
    let ortholattice = if !l.has_ortho() {
        notes.push("no orthocomplement given".into());
        false
    } else if let Some(msg) = ortho_counterexample(l) {
        notes.push(msg);
        false
    } else {
        true
    };
    let orthomodular = ortholattice
        && match orthomodularity_counterexample(l) {
            None => true,
            Some((x, y)) => {
                notes.push(format!(
                    "orthomodular law fails at x=`{}`, y=`{}`",
                    l.name(x),
                    l.name(y)
                ));
                false
            }
        };
    ValidationReport {
        is_lattice: true,
        is_ortholattice: ortholattice,
        is_modular: modular,
        is_orthomodular: orthomodular,
        is_mol: ortholattice && modular,
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructor_sizes() {
        assert_eq!(mo(3).len(), 8);
        assert_eq!(mo(3).atoms().len(), 6);
        assert_eq!(boolean(3).len(), 8);
        assert_eq!(product(&mo(2), &boolean(1)).len(), 12);
        assert_eq!(product(&mo(2), &boolean(2)).len(), 24);
        assert_eq!(boolean(0).len(), 1);
    }

    #[test]
    fn validate_examples() {
        let r = validate(&boolean(3));
        assert!(
            r.is_lattice && r.is_modular && r.is_orthomodular && r.is_mol,
            "{r:?}"
        );
        let r = validate(&o6());
        assert!(r.is_ortholattice && !r.is_orthomodular && !r.is_modular);
        assert!(validate(&mo(3)).is_mol);
        let r = validate(&chain(3));
        assert!(r.is_modular && !r.is_ortholattice);
    }

    #[test]
    fn pentagon_is_not_modular() {
        let ns = ["0", "a", "b", "c", "1"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let l = FiniteOrtholattice::from_order(ns, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)], None)
            .unwrap();
        assert!(!is_modular(&l));
    }

    #[test]
    fn non_lattice_orders_are_rejected() {
        // two incomparable upper bounds for a and b
        let ns = ["0", "a", "b", "c", "d", "1"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let pairs = [
            (0, 1),
            (0, 2),
            (1, 3),
            (2, 3),
            (1, 4),
            (2, 4),
            (3, 5),
            (4, 5),
        ];
        assert!(matches!(
            FiniteOrtholattice::from_order(ns, &pairs, None),
            Err(FinLatError::Structure(_))
        ));
        let ns: Vec<String> = ["x", "y"].iter().map(|s| s.to_string()).collect();
        assert!(FiniteOrtholattice::from_order(ns, &[(0, 1), (1, 0)], None).is_err());
    }

    #[test]
    fn interval_examples() {
        let m = mo(2);
        let (same, _) = interval_subalgebra(&m, m.top(), m.bottom()).unwrap();
        assert_eq!(same, m);
        let b = boolean(3);
        let u = b.index_of("a1+a2").unwrap();
        let (sub, elems) = interval_subalgebra(&b, u, b.bottom()).unwrap();
        assert_eq!(sub.len(), 4);
        assert!(validate(&sub).is_mol);
        assert_eq!(elems.len(), 4);
        let a1 = b.index_of("a1").unwrap();
        let a2 = b.index_of("a2").unwrap();
        assert!(matches!(
            interval_subalgebra(&b, a1, a2),
            Err(FinLatError::NotBelow(_, _))
        ));
    }

    #[test]
    fn product_is_mol() {
        let p = product(&mo(2), &boolean(1));
        assert!(validate(&p).is_mol);
        assert_eq!(p.name(p.top()), "(1,1)");
    }

    #[test]
    fn subalgebra_generation() {
        let m = mo(3);
        let a1 = m.index_of("a1").unwrap();
        let s = m.subalgebra_generated(&[a1]);
        assert_eq!(s.len(), 4);
        assert!(m.is_subalgebra(&s));
        let (sub, embed) = m.restrict(&s).unwrap();
        assert_eq!(sub.len(), 4);
        assert_eq!(embed, s);
        assert!(!m.is_subalgebra(&[m.bottom(), m.top(), a1]));
    }

    #[test]
    fn heights() {
        let b = boolean(3);
        assert_eq!(b.height(b.top()), 3);
        assert_eq!(mo(4).height(mo(4).top()), 2);
    }
}

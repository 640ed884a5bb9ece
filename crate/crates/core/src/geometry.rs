//! Finite projective geometries given by collinear triples, with optional
//! point orthogonality, and geometric representations of finite MOLs.
//!
//! Point sets are `FixedBitSet`s over the point indices of a geometry.
//!
//! Text format:
//!
//! ```text
//! points: p q r ...
//! collinear:
//! p q r
//! perp:
//! p q
//! ```

use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;
use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::finlat::{is_modular, quotient_lattice, Congruence, FinLatError, FiniteOrtholattice};

pub type PointSet = FixedBitSet;

/// Default number of triangle-rule applications before a closure gives up.
pub const DEFAULT_CLOSURE_CAP: usize = 100_000;
/// Largest subspace lattice that is materialized as a `FiniteOrtholattice`.
pub const DEFAULT_MATERIALIZE_BOUND: usize = 4096;

/// Closure cap, overridable through `MOLKIT_CAP`.
pub fn closure_cap() -> usize {
    std::env::var("MOLKIT_CAP")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_CLOSURE_CAP)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("collinear triple {0} does not consist of three distinct points")]
    BadTriple(String),
    #[error("two points lie on more than one line: {0}")]
    LineAxiom(String),
    #[error("triangle axiom fails: {0}")]
    TriangleAxiom(String),
    #[error("not an orthogonality: {0}")]
    Orthogonality(String),
    #[error("not a polarity: {0}")]
    NotPolarity(String),
    #[error("closure exceeded {cap} rule applications")]
    CapExceeded { cap: usize, partial: Vec<usize> },
    #[error("subspace lattice has more than {0} elements")]
    TooLarge(usize),
    #[error("representation check failed: {0}")]
    RepresentationFailure(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Lattice(#[from] FinLatError),
}

fn key(p: usize, q: usize) -> (usize, usize) {
    (p.min(q), p.max(q))
}

fn sorted3(p: usize, q: usize, r: usize) -> [usize; 3] {
    let mut t = [p, q, r];
    t.sort_unstable();
    t
}

fn set_of(n: usize, it: impl IntoIterator<Item = usize>) -> PointSet {
    let mut s = FixedBitSet::with_capacity(n);
    s.extend(it);
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointGeometry {
    names: Vec<String>,
    index: HashMap<String, usize>,
    triples: BTreeSet<[usize; 3]>,
    thirds: HashMap<(usize, usize), Vec<usize>>,
    through: Vec<Vec<[usize; 3]>>,
    perp: Option<Vec<PointSet>>,
}

impl PointGeometry {
    /// Builds and validates a geometry. `perp` pairs are read symmetrically.
    pub fn new(
        names: Vec<String>,
        triples: &[[usize; 3]],
        perp: Option<&[(usize, usize)]>,
    ) -> Result<Self, GeometryError> {
        let n = names.len();
        let mut index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(GeometryError::Parse {
                    line: 0,
                    msg: format!("duplicate point `{name}`"),
                });
            }
        }
        let mut set = BTreeSet::new();
        for &[p, q, r] in triples {
            if p >= n || q >= n || r >= n || p == q || p == r || q == r {
                return Err(GeometryError::BadTriple(format!("({p},{q},{r})")));
            }
            set.insert(sorted3(p, q, r));
        }
        let mut thirds: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        let mut through = vec![Vec::new(); n];
        for &t in &set {
            let [p, q, r] = t;
            thirds.entry(key(p, q)).or_default().push(r);
            thirds.entry(key(p, r)).or_default().push(q);
            thirds.entry(key(q, r)).or_default().push(p);
            for x in t {
                through[x].push(t);
            }
        }
        let mut g = Self {
            names,
            index,
            triples: set,
            thirds,
            through,
            perp: None,
        };
        g.check_lines()?;
        g.check_triangles()?;
        if let Some(pairs) = perp {
            g = g.with_perp(pairs)?;
        }
        Ok(g)
    }

    /// Same points and lines with a new orthogonality (pairs read
    /// symmetrically), validated.
    pub fn with_perp(&self, pairs: &[(usize, usize)]) -> Result<Self, GeometryError> {
        let n = self.len();
        let mut rel = vec![FixedBitSet::with_capacity(n); n];
        for &(p, q) in pairs {
            if p >= n || q >= n {
                return Err(GeometryError::Orthogonality(format!(
                    "pair ({p},{q}) out of range"
                )));
            }
            rel[p].insert(q);
            rel[q].insert(p);
        }
        self.with_perp_relation(rel)
    }

    pub fn with_perp_relation(&self, rel: Vec<PointSet>) -> Result<Self, GeometryError> {
        let n = self.len();
        if rel.len() != n {
            return Err(GeometryError::Orthogonality(
                "relation has the wrong size".into(),
            ));
        }
        for p in 0..n {
            for q in rel[p].ones() {
                if !rel[q].contains(p) {
                    return Err(GeometryError::Orthogonality(format!(
                        "not symmetric at {}, {}",
                        self.names[p], self.names[q]
                    )));
                }
            }
            // p ⊥ q, p ⊥ r and s on the line q+r force p ⊥ s.
            let ps: Vec<usize> = rel[p].ones().collect();
            for (i, &q) in ps.iter().enumerate() {
                for &r in &ps[i + 1..] {
                    for &s in self.thirds_of(q, r) {
                        if !rel[p].contains(s) {
                            return Err(GeometryError::Orthogonality(format!(
                                "{} is orthogonal to {} and {} but not to {}",
                                self.names[p], self.names[q], self.names[r], self.names[s]
                            )));
                        }
                    }
                }
            }
        }
        let mut g = self.clone();
        g.perp = Some(rel);
        Ok(g)
    }

    pub fn without_perp(&self) -> Self {
        let mut g = self.clone();
        g.perp = None;
        g
    }

    fn check_lines(&self) -> Result<(), GeometryError> {
        for (&(p, q), rs) in &self.thirds {
            for (i, &r) in rs.iter().enumerate() {
                for &s in &rs[i + 1..] {
                    if !self.collinear(p, r, s) || !self.collinear(q, r, s) {
                        return Err(GeometryError::LineAxiom(format!(
                            "{} {} with {} and {}",
                            self.names[p], self.names[q], self.names[r], self.names[s]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_triangles(&self) -> Result<(), GeometryError> {
        let mut err = None;
        self.for_each_triangle(None, |p, s, q, t, r, us| {
            if us.len() != 1 && err.is_none() {
                err = Some(format!(
                    "{} {} {} / {} {} {}: {} candidate points",
                    self.names[p],
                    self.names[s],
                    self.names[q],
                    self.names[q],
                    self.names[t],
                    self.names[r],
                    us.len()
                ));
            }
            true
        });
        err.map_or(Ok(()), |e| Err(GeometryError::TriangleAxiom(e)))
    }

    /// Calls `f(p, s, q, t, r, us)` for every configuration with `p,s,q` and
    /// `q,t,r` collinear and `p,q,r` not, where `us` are the points collinear
    /// with both `p,r` and `s,t`. Restricted to configurations inside
    /// `within` if given. Stops when `f` returns false.
    fn for_each_triangle(
        &self,
        within: Option<&PointSet>,
        mut f: impl FnMut(usize, usize, usize, usize, usize, Vec<usize>) -> bool,
    ) {
        let inside = |x: usize| within.is_none_or(|w| w.contains(x));
        for q in 0..self.len() {
            if !inside(q) {
                continue;
            }
            let lines: Vec<&[usize; 3]> = self.through[q]
                .iter()
                .filter(|t| t.iter().all(|&x| inside(x)))
                .collect();
            for t1 in &lines {
                for t2 in &lines {
                    if t1 == t2 {
                        continue;
                    }
                    let o1: Vec<usize> = t1.iter().copied().filter(|&x| x != q).collect();
                    let o2: Vec<usize> = t2.iter().copied().filter(|&x| x != q).collect();
                    for (p, s) in [(o1[0], o1[1]), (o1[1], o1[0])] {
                        for (r, t) in [(o2[0], o2[1]), (o2[1], o2[0])] {
                            if p == r || s == t || self.collinear(p, q, r) {
                                continue;
                            }
                            let st = self.thirds_of(s, t);
                            let us: Vec<usize> = self
                                .thirds_of(p, r)
                                .iter()
                                .copied()
                                .filter(|u| st.contains(u))
                                .collect();
                            if !f(p, s, q, t, r, us) {
                                return;
                            }
                        }
                    }
                }
            }
        }
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

    pub fn name(&self, p: usize) -> &str {
        &self.names[p]
    }

    pub fn index_of(&self, name: &str) -> Result<usize, GeometryError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| GeometryError::UnknownPoint(name.to_string()))
    }

    pub fn triples(&self) -> impl Iterator<Item = &[usize; 3]> {
        self.triples.iter()
    }

    pub fn collinear(&self, p: usize, q: usize, r: usize) -> bool {
        self.triples.contains(&sorted3(p, q, r))
    }

    /// Points `r` with `p, q, r` collinear.
    pub fn thirds_of(&self, p: usize, q: usize) -> &[usize] {
        self.thirds.get(&key(p, q)).map_or(&[], Vec::as_slice)
    }

    /// The line through two distinct points, as a point set.
    pub fn line(&self, p: usize, q: usize) -> PointSet {
        set_of(
            self.len(),
            [p, q]
                .into_iter()
                .chain(self.thirds_of(p, q).iter().copied()),
        )
    }

    pub fn has_perp(&self) -> bool {
        self.perp.is_some()
    }

    pub fn perp_relation(&self) -> Option<&[PointSet]> {
        self.perp.as_deref()
    }

    pub fn is_perp(&self, p: usize, q: usize) -> bool {
        self.perp.as_ref().is_some_and(|r| r[p].contains(q))
    }

    pub fn all_points(&self) -> PointSet {
        set_of(self.len(), 0..self.len())
    }

    pub fn point_set(&self, points: &[usize]) -> PointSet {
        set_of(self.len(), points.iter().copied())
    }

    /// Least subspace containing `seed`.
    pub fn span(&self, seed: &PointSet) -> PointSet {
        let mut set = FixedBitSet::with_capacity(self.len());
        let mut list = Vec::new();
        for p in seed.ones() {
            if !set.put(p) {
                list.push(p);
            }
        }
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            for j in 0..i {
                for &r in self.thirds_of(x, list[j]) {
                    if !set.put(r) {
                        list.push(r);
                    }
                }
            }
            i += 1;
        }
        set
    }

    pub fn is_subspace(&self, set: &PointSet) -> bool {
        self.span(set) == *set
    }

    /// Join in the subspace lattice.
    pub fn join(&self, x: &PointSet, y: &PointSet) -> PointSet {
        self.span(&(x | y))
    }

    /// `X^⊥`: points orthogonal to every point of `X`. Panics without an
    /// orthogonality.
    pub fn perp_of(&self, x: &PointSet) -> PointSet {
        let rel = self.perp.as_ref().expect("geometry has no orthogonality");
        let mut out = self.all_points();
        for p in x.ones() {
            out.intersect_with(&rel[p]);
        }
        out
    }

    /// Induced geometry on a subset: collinear triples and orthogonal pairs
    /// inside `set`. Returns the geometry and the embedding (new → old).
    pub fn restrict(&self, set: &PointSet) -> Result<(Self, Vec<usize>), GeometryError> {
        let embed: Vec<usize> = set.ones().collect();
        let pos: HashMap<usize, usize> = embed.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let names = embed.iter().map(|&p| self.names[p].clone()).collect();
        let triples: Vec<[usize; 3]> = self
            .triples
            .iter()
            .filter(|t| t.iter().all(|x| set.contains(*x)))
            .map(|t| [pos[&t[0]], pos[&t[1]], pos[&t[2]]])
            .collect();
        let mut g = Self::new(names, &triples, None)?;
        if let Some(rel) = &self.perp {
            let sub = embed
                .iter()
                .map(|&p| {
                    set_of(
                        embed.len(),
                        rel[p].ones().filter_map(|q| pos.get(&q).copied()),
                    )
                })
                .collect();
            g = g.with_perp_relation(sub)?;
        }
        Ok((g, embed))
    }

    /// All subspaces, provided there are at most `bound` of them.
    pub fn subspaces(&self, bound: usize) -> Result<Vec<PointSet>, GeometryError> {
        let n = self.len();
        let mut seen: HashMap<PointSet, ()> = HashMap::new();
        let mut list = vec![FixedBitSet::with_capacity(n)];
        seen.insert(list[0].clone(), ());
        let mut i = 0;
        while i < list.len() {
            let x = list[i].clone();
            for p in 0..n {
                if x.contains(p) {
                    continue;
                }
                let mut y = x.clone();
                y.insert(p);
                let y = self.span(&y);
                if !seen.contains_key(&y) {
                    if list.len() == bound {
                        return Err(GeometryError::TooLarge(bound));
                    }
                    seen.insert(y.clone(), ());
                    list.push(y);
                }
            }
            i += 1;
        }
        Ok(list)
    }

    fn set_name(&self, x: &PointSet) -> String {
        let parts: Vec<&str> = x.ones().map(|p| self.names[p].as_str()).collect();
        format!("{{{}}}", parts.join(","))
    }

    /// The subspace lattice as an explicit lattice, with `X ↦ X^⊥` as
    /// orthocomplement when that is one. Returns the lattice and the subspace
    /// behind each element.
    pub fn subspace_lattice(
        &self,
        bound: usize,
    ) -> Result<(FiniteOrtholattice, Vec<PointSet>), GeometryError> {
        let subs = self.subspaces(bound)?;
        let pos: HashMap<&PointSet, usize> = subs.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let all = self.all_points();
        let ortho = self.perp.as_ref().and_then(|_| {
            let o: Option<Vec<usize>> = subs
                .iter()
                .map(|x| pos.get(&self.perp_of(x)).copied())
                .collect();
            o.filter(|o| {
                subs.iter().enumerate().all(|(i, x)| {
                    let y = &subs[o[i]];
                    o[o[i]] == i && x.is_disjoint(y) && self.join(x, y) == all
                })
            })
        });
        let names = subs.iter().map(|s| self.set_name(s)).collect();
        let l = FiniteOrtholattice::from_leq_fn(names, |a, b| subs[a].is_subset(&subs[b]), ortho)?;
        Ok((l, subs))
    }
}

/// The projective space of atoms of a modular lattice: `p, q, r` collinear
/// iff `p+q = p+r = q+r`; with the canonical orthogonality `p ≤ q'` when the
/// lattice has an orthocomplement. Point `i` is the `i`-th atom.
pub fn points_of(l: &FiniteOrtholattice) -> Result<PointGeometry, GeometryError> {
    if !is_modular(l) {
        return Err(FinLatError::NotModular.into());
    }
    let atoms = l.atoms();
    let names = atoms.iter().map(|&a| l.name(a).to_string()).collect();
    let mut triples = Vec::new();
    for i in 0..atoms.len() {
        for j in i + 1..atoms.len() {
            let pq = l.join(atoms[i], atoms[j]);
            for k in j + 1..atoms.len() {
                if l.join(atoms[i], atoms[k]) == pq && l.join(atoms[j], atoms[k]) == pq {
                    triples.push([i, j, k]);
                }
            }
        }
    }
    let perp: Option<Vec<(usize, usize)>> = l.has_ortho().then(|| {
        let mut v = Vec::new();
        for i in 0..atoms.len() {
            for j in 0..atoms.len() {
                if l.leq(atoms[i], l.ortho(atoms[j])) {
                    v.push((i, j));
                }
            }
        }
        v
    });
    PointGeometry::new(names, &triples, perp.as_deref())
}

/// Points of `l` (as geometry indices) below `x`.
fn points_below(l: &FiniteOrtholattice, atoms: &[usize], x: usize) -> PointSet {
    set_of(
        atoms.len(),
        (0..atoms.len()).filter(|&i| l.leq(atoms[i], x)),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    pub parts: Vec<Vec<usize>>,
    /// With an orthogonality: whether points of distinct parts are always
    /// orthogonal.
    pub mutually_orthogonal: Option<bool>,
}

/// Connected components under "lies on a common collinear triple".
pub fn components(g: &PointGeometry) -> Components {
    let mut uf = UnionFind::new(g.len());
    for t in g.triples() {
        uf.union(t[0], t[1]);
        uf.union(t[0], t[2]);
    }
    let mut slot: HashMap<usize, usize> = HashMap::new();
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for p in 0..g.len() {
        let k = *slot.entry(uf.find(p)).or_insert_with(|| {
            parts.push(Vec::new());
            parts.len() - 1
        });
        parts[k].push(p);
    }
    let mutually_orthogonal = g
        .has_perp()
        .then(|| (0..g.len()).all(|p| (0..g.len()).all(|q| uf.equiv(p, q) || g.is_perp(p, q))));
    Components {
        parts,
        mutually_orthogonal,
    }
}

/// Least superset of `seed` closed under the triangle rule: for `p,s,q` and
/// `q,t,r` collinear in the set with `p,q,r` not collinear, add the point
/// `u` collinear with `p,r` and with `s,t`. Gives up after `cap` rule
/// applications.
pub fn subgeometry_closure(
    g: &PointGeometry,
    seed: &PointSet,
    cap: usize,
) -> Result<PointSet, GeometryError> {
    let mut set = seed.clone();
    set.grow(g.len());
    let mut applications = 0usize;
    loop {
        let mut added = Vec::new();
        let mut exceeded = false;
        g.for_each_triangle(Some(&set), |_, _, _, _, _, us| {
            applications += 1;
            if applications > cap {
                exceeded = true;
                return false;
            }
            added.extend(us.into_iter().filter(|&u| !set.contains(u)));
            true
        });
        if exceeded {
            return Err(GeometryError::CapExceeded {
                cap,
                partial: set.ones().collect(),
            });
        }
        if added.is_empty() {
            return Ok(set);
        }
        set.extend(added);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarityReport {
    /// Every point has a non-orthogonal point.
    pub nondegenerate: bool,
    /// Every `p^⊥` is a coatom of the subspace lattice.
    pub coatoms: bool,
    /// Pairs `p ≠ r` with `(p+r)·p^⊥ = 0`.
    pub line_failures: Vec<(usize, usize)>,
    /// No point is orthogonal to itself.
    pub anisotropic: bool,
}

impl PolarityReport {
    pub fn is_polarity(&self) -> bool {
        self.nondegenerate && self.coatoms
    }
}

pub fn check_polarity(g: &PointGeometry) -> Result<PolarityReport, GeometryError> {
    let Some(rel) = g.perp_relation() else {
        return Err(GeometryError::NotPolarity(
            "geometry has no orthogonality".into(),
        ));
    };
    let n = g.len();
    let all = g.all_points();
    let nondegenerate = (0..n).all(|p| rel[p].count_ones(..) < n);
    let anisotropic = (0..n).all(|p| !rel[p].contains(p));
    let mut coatoms = true;
    let mut line_failures = Vec::new();
    for p in 0..n {
        let pp = &rel[p];
        if pp.count_ones(..) == n {
            coatoms = false;
        }
        for q in 0..n {
            if !pp.contains(q) {
                let mut y = pp.clone();
                y.insert(q);
                if g.span(&y) != all {
                    coatoms = false;
                }
            }
            if q != p && !g.line(p, q).ones().any(|s| pp.contains(s)) {
                line_failures.push((p, q));
            }
        }
    }
    Ok(PolarityReport {
        nondegenerate,
        coatoms,
        line_failures,
        anisotropic,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For an anisotropic polarity: `u^⊥⊥ = u` and `u + u^⊥ = 1` for every
/// subspace `u`.
pub fn check_double_perp(g: &PointGeometry, bound: usize) -> Result<CheckReport, GeometryError> {
    let pol = check_polarity(g)?;
    if !pol.is_polarity() || !pol.anisotropic {
        return Err(GeometryError::NotPolarity(
            "need an anisotropic polarity".into(),
        ));
    }
    let all = g.all_points();
    let mut report = CheckReport::default();
    for u in g.subspaces(bound)? {
        report.checked += 1;
        let up = g.perp_of(&u);
        if g.perp_of(&up) != u {
            report
                .failures
                .push(format!("{} is not closed", g.set_name(&u)));
        }
        if g.join(&u, &up) != all {
            report.failures.push(format!(
                "{} + its orthogonal is not everything",
                g.set_name(&u)
            ));
        }
    }
    Ok(report)
}

/// For `ab = 0` and an atom `p ≤ a+b` below neither, `p, a(p+b), b(p+a)`
/// are three collinear atoms. Checked exhaustively.
pub fn check_collinear_projections(l: &FiniteOrtholattice) -> Result<CheckReport, GeometryError> {
    if !is_modular(l) {
        return Err(FinLatError::NotModular.into());
    }
    let atoms = l.atoms();
    let mut report = CheckReport::default();
    for a in 0..l.len() {
        for b in 0..l.len() {
            if l.meet(a, b) != l.bottom() {
                continue;
            }
            let ab = l.join(a, b);
            for &p in &atoms {
                if !l.leq(p, ab) || l.leq(p, a) || l.leq(p, b) {
                    continue;
                }
                report.checked += 1;
                let q = l.meet(a, l.join(p, b));
                let r = l.meet(b, l.join(p, a));
                let pq = l.join(p, q);
                let ok = l.is_atom(q)
                    && l.is_atom(r)
                    && p != q
                    && p != r
                    && q != r
                    && pq == l.join(p, r)
                    && pq == l.join(q, r);
                if !ok {
                    report.failures.push(format!(
                        "a={} b={} p={}",
                        l.name(a),
                        l.name(b),
                        l.name(p)
                    ));
                }
            }
        }
    }
    Ok(report)
}

/// A map from a finite lattice into the subspaces of a point geometry.
#[derive(Clone, Debug)]
pub struct RepresentationMap {
    pub source: FiniteOrtholattice,
    pub geometry: PointGeometry,
    pub eta: Vec<PointSet>,
}

impl RepresentationMap {
    pub fn image(&self, a: usize) -> &PointSet {
        &self.eta[a]
    }

    /// Checks that the map is a 0-1-lattice embedding into the subspace
    /// lattice.
    pub fn verify_embedding(&self) -> Result<(), GeometryError> {
        let (l, g) = (&self.source, &self.geometry);
        let fail = |msg: String| Err(GeometryError::RepresentationFailure(msg));
        if self.eta.len() != l.len() {
            return fail("one image per source element required".into());
        }
        if self.eta[l.bottom()].count_ones(..) != 0 {
            return fail("bottom does not map to the empty subspace".into());
        }
        if self.eta[l.top()] != g.all_points() {
            return fail("top does not map to all points".into());
        }
        for a in 0..l.len() {
            if !g.is_subspace(&self.eta[a]) {
                return fail(format!("image of {} is not a subspace", l.name(a)));
            }
            for b in 0..l.len() {
                let (x, y) = (&self.eta[a], &self.eta[b]);
                if b != a && x == y {
                    return fail(format!(
                        "{} and {} have the same image",
                        l.name(a),
                        l.name(b)
                    ));
                }
                if self.eta[l.meet(a, b)] != x & y {
                    return fail(format!(
                        "meet of {} and {} not preserved",
                        l.name(a),
                        l.name(b)
                    ));
                }
                if self.eta[l.join(a, b)] != g.join(x, y) {
                    return fail(format!(
                        "join of {} and {} not preserved",
                        l.name(a),
                        l.name(b)
                    ));
                }
            }
        }
        Ok(())
    }

    /// Checks `η(a) ⊥ η(a')` and `η(a') = η(a)^⊥` for every `a`.
    pub fn verify_orthogonality(&self) -> Result<(), GeometryError> {
        let (l, g) = (&self.source, &self.geometry);
        l.require_ortho()?;
        if !g.has_perp() {
            return Err(GeometryError::RepresentationFailure(
                "target has no orthogonality".into(),
            ));
        }
        for a in 0..l.len() {
            let x = &self.eta[a];
            let perp = g.perp_of(x);
            let y = &self.eta[l.ortho(a)];
            if !y.is_subset(&perp) || *y != perp {
                return Err(GeometryError::RepresentationFailure(format!(
                    "image of {}' is not the orthogonal of the image of {}",
                    l.name(a),
                    l.name(a)
                )));
            }
        }
        Ok(())
    }
}

/// `η(a)` = atoms of `m` below `a`, for `a` in the subalgebra `sub`. The
/// result is verified to be an embedding compatible with orthocomplements.
pub fn canonical_representation(
    m: &FiniteOrtholattice,
    sub: &[usize],
) -> Result<RepresentationMap, GeometryError> {
    m.require_ortho()?;
    let (source, embed) = m.restrict(sub)?;
    let geometry = points_of(m)?;
    let atoms = m.atoms();
    let eta = embed.iter().map(|&x| points_below(m, &atoms, x)).collect();
    let rep = RepresentationMap {
        source,
        geometry,
        eta,
    };
    rep.verify_embedding()?;
    rep.verify_orthogonality()?;
    Ok(rep)
}

#[derive(Clone, Debug)]
pub struct QuotientRepresentation {
    pub map: RepresentationMap,
    /// The class of the top element, as elements of `m`.
    pub filter: Vec<usize>,
    /// Points of `points_of(m)` below every member of the filter.
    pub points: Vec<usize>,
    /// Number of triples checked for the neutral filter lemma.
    pub filter_lemma_checked: usize,
}

/// For `a, b` in `sub` with `ab = 0` and an atom `p ≤ a+b` below every member
/// of `filter`: `a(p+b)` and `b(p+a)` are below every member of `filter`.
/// Returns the number of triples checked.
pub fn check_neutral_filter_lemma(
    m: &FiniteOrtholattice,
    sub: &[usize],
    filter: &[usize],
) -> Result<usize, GeometryError> {
    let floor = m.meet_all(filter.iter().copied());
    let below: Vec<usize> = m.atoms().into_iter().filter(|&p| m.leq(p, floor)).collect();
    let mut checked = 0;
    for &a in sub {
        for &b in sub {
            if m.meet(a, b) != m.bottom() {
                continue;
            }
            let ab = m.join(a, b);
            for &p in below.iter().filter(|&&p| m.leq(p, ab)) {
                checked += 1;
                let q = m.meet(a, m.join(p, b));
                let r = m.meet(b, m.join(p, a));
                if !m.leq(q, floor) || !m.leq(r, floor) {
                    return Err(GeometryError::RepresentationFailure(format!(
                        "a={} b={} p={}",
                        m.name(a),
                        m.name(b),
                        m.name(p)
                    )));
                }
            }
        }
    }
    Ok(checked)
}

/// Represents `sub/θ` on the points below the filter `{x : x θ 1}`, with
/// `η(a/θ)` the points of that set below `a`. `theta` is indexed like the
/// restriction of `m` to `sub` (sorted element order).
pub fn quotient_representation(
    m: &FiniteOrtholattice,
    sub: &[usize],
    theta: &Congruence,
) -> Result<QuotientRepresentation, GeometryError> {
    m.require_ortho()?;
    let (sl, embed) = m.restrict(sub)?;
    if theta.len() != sl.len() {
        return Err(FinLatError::Structure("congruence has the wrong size".into()).into());
    }
    let (ql, proj) = quotient_lattice(&sl, theta)?;
    let filter: Vec<usize> = (0..sl.len())
        .filter(|&x| theta.related(x, sl.top()))
        .map(|x| embed[x])
        .collect();
    let filter_lemma_checked = check_neutral_filter_lemma(m, &embed, &filter)?;

    let full = points_of(m)?;
    let atoms = m.atoms();
    let floor = m.meet_all(filter.iter().copied());
    let q = points_below(m, &atoms, floor);
    let (geometry, points) = full.restrict(&q)?;
    let local = |x: usize| {
        set_of(
            points.len(),
            (0..points.len()).filter(|&i| m.leq(atoms[points[i]], x)),
        )
    };

    let mut eta: Vec<Option<PointSet>> = vec![None; ql.len()];
    for x in 0..sl.len() {
        let img = local(embed[x]);
        match &eta[proj[x]] {
            Some(prev) if *prev != img => {
                return Err(GeometryError::RepresentationFailure(format!(
                    "image of the class of {} is not well defined",
                    sl.name(x)
                )));
            }
            Some(_) => {}
            None => eta[proj[x]] = Some(img),
        }
    }
    let eta = eta
        .into_iter()
        .map(|s| s.expect("every class has a member"))
        .collect();
    let map = RepresentationMap {
        source: ql,
        geometry,
        eta,
    };
    map.verify_embedding()?;
    map.verify_orthogonality()?;
    Ok(QuotientRepresentation {
        map,
        filter,
        points,
        filter_lemma_checked,
    })
}

/// `p ⊥ q` iff `p ∈ η(a)` and `q ∈ η(a')` for some `a`. Returns the target
/// geometry carrying this orthogonality after checking it is an anisotropic
/// orthogonality with `η(a') = η(a)^⊥`.
pub fn induced_point_orthogonality(
    rep: &RepresentationMap,
) -> Result<PointGeometry, GeometryError> {
    let l = &rep.source;
    l.require_ortho()?;
    let n = rep.geometry.len();
    let mut rel = vec![FixedBitSet::with_capacity(n); n];
    for a in 0..l.len() {
        for p in rep.eta[a].ones() {
            rel[p].union_with(&rep.eta[l.ortho(a)]);
        }
    }
    if let Some(p) = (0..n).find(|&p| rel[p].contains(p)) {
        return Err(GeometryError::Orthogonality(format!(
            "{} is orthogonal to itself",
            rep.geometry.name(p)
        )));
    }
    let geometry = rep.geometry.with_perp_relation(rel)?;
    let with = RepresentationMap {
        source: l.clone(),
        geometry,
        eta: rep.eta.clone(),
    };
    with.verify_orthogonality()?;
    Ok(with.geometry)
}

#[derive(Clone, Debug)]
pub struct ClosedExtensionReport {
    /// Every quotient of a finite lattice has finite dimension, so the
    /// finite-dimension congruence relates everything and the extension is
    /// all closed elements. Always true; kept so reports state it.
    pub all_finite_dimensional: bool,
    /// Elements `x` with `x^⊥⊥ = x`.
    pub closed: Vec<usize>,
    pub cond_meets: bool,
    pub cond_joins: bool,
    pub cond_perps: bool,
    /// The closed elements equivalent to a member of `sub` (all of them in
    /// the finite case), as an ortholattice with `⊥`, and their indices.
    pub extension: Option<(FiniteOrtholattice, Vec<usize>)>,
    pub extension_is_mol: bool,
    pub sub_is_subalgebra: bool,
}

impl ClosedExtensionReport {
    pub fn holds(&self) -> bool {
        self.cond_meets && self.cond_joins && self.cond_perps && self.extension_is_mol
    }
}

/// The three closure conditions (meets, joins, orthogonals of `sub` land in
/// the extension) for a modular atomistic `m` whose atoms carry the
/// orthogonality of `g` (point `i` = `i`-th atom, as built by `points_of`).
pub fn closed_extension_conditions(
    m: &FiniteOrtholattice,
    g: &PointGeometry,
    sub: &[usize],
) -> Result<ClosedExtensionReport, GeometryError> {
    let atoms = m.atoms();
    if g.len() != atoms.len() {
        return Err(GeometryError::NotPolarity(
            "geometry does not match the atoms".into(),
        ));
    }
    let pol = check_polarity(g)?;
    if !pol.is_polarity() || !pol.anisotropic {
        return Err(GeometryError::NotPolarity(
            "need an anisotropic polarity".into(),
        ));
    }
    if !is_modular(m) {
        return Err(FinLatError::NotModular.into());
    }
    if let Some(x) =
        (0..m.len()).find(|&x| m.join_all(atoms.iter().copied().filter(|&p| m.leq(p, x))) != x)
    {
        return Err(
            FinLatError::Structure(format!("`{}` is not a join of atoms", m.name(x))).into(),
        );
    }
    let perp: Vec<usize> = (0..m.len())
        .map(|x| {
            let px = g.perp_of(&points_below(m, &atoms, x));
            m.join_all(px.ones().map(|i| atoms[i]))
        })
        .collect();
    let closed_set: Vec<bool> = (0..m.len()).map(|x| perp[perp[x]] == x).collect();
    let closed: Vec<usize> = (0..m.len()).filter(|&x| closed_set[x]).collect();
    let in_extension = |x: usize| closed_set[x] && !sub.is_empty();

    let cond_meets = sub
        .iter()
        .all(|&a| sub.iter().all(|&b| in_extension(m.meet(a, b))));
    let cond_joins = sub.iter().all(|&a| {
        sub.iter()
            .all(|&b| in_extension(m.join(a, b)) && closed_set[m.join(perp[a], perp[b])])
    });
    let cond_perps = sub.iter().all(|&a| in_extension(perp[a]));

    let mut report = ClosedExtensionReport {
        all_finite_dimensional: true,
        closed: closed.clone(),
        cond_meets,
        cond_joins,
        cond_perps,
        extension: None,
        extension_is_mol: false,
        sub_is_subalgebra: false,
    };
    if !(cond_meets && cond_joins && cond_perps) || sub.is_empty() {
        return Ok(report);
    }
    let pos: HashMap<usize, usize> = closed.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let ortho: Option<Vec<usize>> = closed.iter().map(|&x| pos.get(&perp[x]).copied()).collect();
    let names = closed.iter().map(|&x| m.name(x).to_string()).collect();
    let ext = FiniteOrtholattice::from_leq_fn(names, |a, b| m.leq(closed[a], closed[b]), ortho)?;
    report.extension_is_mol = crate::finlat::is_mol(&ext);
    let sub_local: Option<Vec<usize>> = sub.iter().map(|x| pos.get(x).copied()).collect();
    report.sub_is_subalgebra = sub_local.is_some_and(|s| ext.is_subalgebra(&s));
    report.extension = Some((ext, closed));
    Ok(report)
}

pub fn parse_geometry(text: &str) -> Result<PointGeometry, GeometryError> {
    enum Section {
        Header,
        Collinear,
        Perp,
    }
    let err = |line: usize, msg: String| GeometryError::Parse { line, msg };
    let mut names: Option<Vec<String>> = None;
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut triples = Vec::new();
    let mut perp: Option<Vec<(usize, usize)>> = None;
    let mut section = Section::Header;
    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("points:") {
            let ns: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            for (i, n) in ns.iter().enumerate() {
                if index.insert(n.clone(), i).is_some() {
                    return Err(err(ln, format!("duplicate point `{n}`")));
                }
            }
            names = Some(ns);
            continue;
        }
        match line {
            "collinear:" => section = Section::Collinear,
            "perp:" => {
                section = Section::Perp;
                perp.get_or_insert_with(Vec::new);
            }
            _ => {
                let toks = line
                    .split_whitespace()
                    .map(|t| {
                        index
                            .get(t)
                            .copied()
                            .ok_or_else(|| err(ln, format!("unknown point `{t}`")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                match (&section, &toks[..]) {
                    (Section::Collinear, &[p, q, r]) => triples.push([p, q, r]),
                    (Section::Perp, &[p, q]) => perp.as_mut().expect("section opened").push((p, q)),
                    (Section::Header, _) => {
                        return Err(err(
                            ln,
                            "line outside a `collinear:` or `perp:` section".into(),
                        ))
                    }
                    _ => return Err(err(ln, "wrong number of points".into())),
                }
            }
        }
    }
    let names = names.ok_or_else(|| err(0, "missing `points:` line".into()))?;
    PointGeometry::new(names, &triples, perp.as_deref())
}

pub fn write_geometry(g: &PointGeometry) -> String {
    let mut out = format!("points: {}\ncollinear:\n", g.names().join(" "));
    for t in g.triples() {
        out += &format!("{} {} {}\n", g.name(t[0]), g.name(t[1]), g.name(t[2]));
    }
    if let Some(rel) = g.perp_relation() {
        out += "perp:\n";
        for (p, row) in rel.iter().enumerate() {
            for q in row.ones().filter(|&q| q >= p) {
                out += &format!("{} {}\n", g.name(p), g.name(q));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finlat::{boolean, chain, mo, product};

    #[test]
    fn points_of_examples() {
        let g = points_of(&mo(3)).unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g.triples().count(), 20);
        let g = points_of(&boolean(3)).unwrap();
        assert_eq!((g.len(), g.triples().count()), (3, 0));
        let g = points_of(&chain(2)).unwrap();
        assert_eq!((g.len(), g.triples().count()), (1, 0));
    }

    #[test]
    fn component_examples() {
        assert_eq!(components(&points_of(&mo(3)).unwrap()).parts.len(), 1);
        assert_eq!(components(&points_of(&boolean(3)).unwrap()).parts.len(), 3);
        let c = components(&points_of(&product(&mo(2), &mo(2))).unwrap());
        assert_eq!(c.parts.len(), 2);
        assert_eq!(c.mutually_orthogonal, Some(true));
    }

    #[test]
    fn closure_examples() {
        let m = mo(4);
        let g = points_of(&m).unwrap();
        let seed = g.point_set(&[g.index_of("a1").unwrap(), g.index_of("a2").unwrap()]);
        assert_eq!(subgeometry_closure(&g, &seed, 100).unwrap(), seed);
        assert_eq!(
            subgeometry_closure(&g, &g.all_points(), 1000).unwrap(),
            g.all_points()
        );
        let b = points_of(&boolean(3)).unwrap();
        assert_eq!(
            subgeometry_closure(&b, &b.all_points(), 10).unwrap(),
            b.all_points()
        );
    }

    #[test]
    fn fano_plane_closure() {
        let names: Vec<String> = (1..=7).map(|i| format!("p{i}")).collect();
        let lines = [
            [0, 1, 2],
            [0, 3, 4],
            [0, 5, 6],
            [1, 3, 5],
            [1, 4, 6],
            [2, 3, 6],
            [2, 4, 5],
        ];
        let g = PointGeometry::new(names, &lines, None).unwrap();
        assert_eq!(g.subspaces(100).unwrap().len(), 1 + 7 + 7 + 1);
        let seed = g.point_set(&[0, 1, 2, 3, 4]);
        assert_eq!(
            subgeometry_closure(&g, &seed, 1000).unwrap(),
            g.all_points()
        );
        assert!(matches!(
            subgeometry_closure(&g, &seed, 1),
            Err(GeometryError::CapExceeded { cap: 1, .. })
        ));
        // Removing one line breaks the triangle axiom.
        let names: Vec<String> = (1..=7).map(|i| format!("p{i}")).collect();
        assert!(matches!(
            PointGeometry::new(names, &lines[..6], None),
            Err(GeometryError::TriangleAxiom(_))
        ));
    }

    #[test]
    fn polarity_examples() {
        let r = check_polarity(&points_of(&mo(2)).unwrap()).unwrap();
        assert!(r.is_polarity() && r.anisotropic && r.line_failures.is_empty());
        let r = check_polarity(&points_of(&mo(3)).unwrap()).unwrap();
        assert!(r.is_polarity());
        let b = points_of(&boolean(2)).unwrap().with_perp(&[]).unwrap();
        let r = check_polarity(&b).unwrap();
        assert!(!r.is_polarity() && !r.coatoms && r.line_failures.len() == 2);
        assert!(
            check_double_perp(&points_of(&product(&mo(3), &boolean(2))).unwrap(), 4096)
                .unwrap()
                .passed()
        );
    }

    #[test]
    fn collinear_projections() {
        for l in [mo(3), boolean(3), product(&mo(2), &boolean(1))] {
            let r = check_collinear_projections(&l).unwrap();
            assert!(r.passed(), "{:?}", r.failures);
        }
        assert!(check_collinear_projections(&mo(2)).unwrap().checked > 0);
    }

    #[test]
    fn canonical_representation_examples() {
        let m = mo(2);
        let a1 = m.index_of("a1").unwrap();
        let sub = [m.bottom(), m.top(), a1, m.ortho(a1)];
        let rep = canonical_representation(&m, &sub).unwrap();
        let s = rep.source.index_of("a1").unwrap();
        assert_eq!(
            rep.image(s).ones().collect::<Vec<_>>(),
            vec![rep.geometry.index_of("a1").unwrap()]
        );
        let rep = canonical_representation(&m, &[m.bottom(), m.top()]).unwrap();
        assert_eq!(*rep.image(rep.source.top()), rep.geometry.all_points());
        let b = boolean(2);
        let all: Vec<usize> = (0..b.len()).collect();
        let rep = canonical_representation(&b, &all).unwrap();
        assert_eq!(rep.geometry.subspaces(100).unwrap().len(), 4);
        assert!(matches!(
            canonical_representation(&m, &[m.bottom(), m.top(), a1]),
            Err(GeometryError::Lattice(FinLatError::NotSubalgebra))
        ));
    }

    #[test]
    fn quotient_representation_examples() {
        let m = product(&mo(2), &boolean(1));
        let all: Vec<usize> = (0..m.len()).collect();
        let kernel = Congruence::from_key(m.len(), |x| x / 2);
        let q = quotient_representation(&m, &all, &kernel).unwrap();
        assert_eq!(q.points.len(), 4);
        assert_eq!(q.map.source.len(), 6);
        assert!(q.filter_lemma_checked > 0);

        let id = quotient_representation(&m, &all, &Congruence::identity(m.len())).unwrap();
        assert_eq!(id.points.len(), 5);
        let triv = quotient_representation(&m, &all, &Congruence::all(m.len())).unwrap();
        assert!(triv.points.is_empty());
        assert_eq!(triv.map.source.len(), 1);
    }

    #[test]
    fn induced_orthogonality_examples() {
        let m = mo(2);
        let all: Vec<usize> = (0..m.len()).collect();
        let rep = canonical_representation(&m, &all).unwrap();
        let g = induced_point_orthogonality(&rep).unwrap();
        assert_eq!(g.perp_relation(), rep.geometry.perp_relation());

        let rep = canonical_representation(&m, &[m.bottom(), m.top()]).unwrap();
        let g = induced_point_orthogonality(&rep).unwrap();
        assert!(g
            .perp_relation()
            .unwrap()
            .iter()
            .all(|r| r.count_ones(..) == 0));

        let m3 = mo(3);
        let sub: Vec<usize> = ["0", "1", "a1", "a1'", "a2", "a2'"]
            .iter()
            .map(|s| m3.index_of(s).unwrap())
            .collect();
        let rep = canonical_representation(&m3, &sub).unwrap();
        let g = induced_point_orthogonality(&rep).unwrap();
        let a3 = g.index_of("a3").unwrap();
        assert_eq!(g.perp_relation().unwrap()[a3].count_ones(..), 0);
        assert!(g.is_perp(g.index_of("a2").unwrap(), g.index_of("a2'").unwrap()));
    }

    #[test]
    fn closed_extension_examples() {
        let m = mo(3);
        let g = points_of(&m).unwrap();
        let a1 = m.index_of("a1").unwrap();
        let r =
            closed_extension_conditions(&m, &g, &[m.bottom(), m.top(), a1, m.ortho(a1)]).unwrap();
        assert!(r.holds() && r.all_finite_dimensional && r.sub_is_subalgebra);
        assert_eq!(r.extension.unwrap().0.len(), 8);
        assert!(closed_extension_conditions(&m, &g, &[m.bottom(), m.top()])
            .unwrap()
            .holds());
        let b = boolean(3);
        let all: Vec<usize> = (0..b.len()).collect();
        let r = closed_extension_conditions(&b, &points_of(&b).unwrap(), &all).unwrap();
        assert_eq!(r.closed.len(), 8);
        assert!(r.holds());
        let bad = points_of(&boolean(2)).unwrap().with_perp(&[]).unwrap();
        assert!(matches!(
            closed_extension_conditions(&boolean(2), &bad, &[0, 3]),
            Err(GeometryError::NotPolarity(_))
        ));
    }

    #[test]
    fn text_round_trip() {
        let g = points_of(&product(&mo(2), &boolean(1))).unwrap();
        let text = write_geometry(&g);
        let back = parse_geometry(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(write_geometry(&back), text);
        assert!(matches!(
            parse_geometry("points: a b\ncollinear:\na b\n"),
            Err(GeometryError::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn subspace_lattice_of_points() {
        let m = product(&mo(2), &boolean(1));
        let g = points_of(&m).unwrap();
        let (l, _) = g.subspace_lattice(DEFAULT_MATERIALIZE_BOUND).unwrap();
        assert!(crate::finlat::find_isomorphism(&l, &m).is_some());
        assert!(crate::finlat::is_mol(&l));
        assert!(matches!(
            g.subspace_lattice(3),
            Err(GeometryError::TooLarge(3))
        ));
    }
}

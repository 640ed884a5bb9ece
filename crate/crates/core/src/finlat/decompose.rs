use std::fmt;

use petgraph::unionfind::UnionFind;

use super::iso::is_isomorphism;
use super::lattice::{boolean, is_mol, mo, product_all, FiniteOrtholattice};
use super::perspectivity::perspective_via;
use super::FinLatError;

/// A directly irreducible factor kind of a finite MOL. `Boolean(k)` collects
/// `k` two-element factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Factor {
    Boolean(usize),
    Mo(usize),
}

impl Factor {
    pub fn lattice(&self) -> FiniteOrtholattice {
        match *self {
            Factor::Boolean(k) => boolean(k),
            Factor::Mo(n) => mo(n),
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Boolean(k) => write!(f, "Boolean({k})"),
            Factor::Mo(n) => write!(f, "MO_{n}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub factors: Vec<Factor>,
    /// Product of the factor lattices, folded from the left.
    pub product: FiniteOrtholattice,
    /// Verified isomorphism: element of the input → element of `product`.
    pub iso: Vec<usize>,
}

/// How one factor reads off an element `x` of the input: the coordinate of
/// `x` is the index of the factor element corresponding to `x · c`.
enum Coord {
    Mo {
        central: usize,
        index_of_atom: Vec<(usize, usize)>,
    },
    Boolean {
        atoms: Vec<usize>,
    },
}

/// Splits a finite MOL into MO_n factors and one Boolean factor.
///
/// Atoms are grouped into components of the perspectivity relation. A
/// component with one atom contributes a two-element factor (these are
/// merged into a single `Boolean(k)`); a larger component must span a
/// height-two interval and contributes `MO_{|component|/2}`. The resulting
/// map into the product is checked to be an isomorphism.
pub fn decompose_finite_mol(l: &FiniteOrtholattice) -> Result<Decomposition, FinLatError> {
    if !is_mol(l) {
        return Err(FinLatError::NotMOL);
    }
    let fail = |msg: String| Err(FinLatError::DecompositionFailure(msg));
    let atoms = l.atoms();
    let mut uf = UnionFind::new(atoms.len());
    for i in 0..atoms.len() {
        for j in i + 1..atoms.len() {
            if perspective_via(l, atoms[i], atoms[j]).is_some() {
                uf.union(i, j);
            }
        }
    }
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut slot: Vec<Option<usize>> = vec![None; atoms.len()];
    for i in 0..atoms.len() {
        let r = uf.find(i);
        match slot[r] {
            Some(k) => components[k].push(atoms[i]),
            None => {
                slot[r] = Some(components.len());
                components.push(vec![atoms[i]]);
            }
        }
    }

    let mut factors = Vec::new();
    let mut coords = Vec::new();
    let mut singletons = Vec::new();
    let mut centrals = Vec::new();
    for comp in &components {
        let c = l.join_all(comp.iter().copied());
        centrals.push(c);
        if comp.len() == 1 {
            singletons.push(comp[0]);
            continue;
        }
        if comp.len() % 2 != 0
            || l.height(c) != 2
            || l.interval(l.bottom(), c).len() != comp.len() + 2
        {
            return fail(format!(
                "component of `{}` does not span an MO_n block",
                l.name(comp[0])
            ));
        }
        let mut index_of_atom = Vec::new();
        for &p in comp {
            if index_of_atom.iter().any(|&(q, _)| q == p) {
                continue;
            }
            let q = l.meet(l.ortho(p), c);
            let k = index_of_atom.len();
            index_of_atom.push((p, 2 + k));
            index_of_atom.push((q, 3 + k));
        }
        factors.push(Factor::Mo(comp.len() / 2));
        coords.push(Coord::Mo {
            central: c,
            index_of_atom,
        });
    }
    if !singletons.is_empty() {
        factors.push(Factor::Boolean(singletons.len()));
        coords.push(Coord::Boolean { atoms: singletons });
    }
    if l.join_all(centrals.iter().copied()) != l.top() {
        return fail("central elements do not join to 1".into());
    }

    let lattices: Vec<FiniteOrtholattice> = factors.iter().map(Factor::lattice).collect();
    let product = product_all(&lattices);
    let mut iso = Vec::with_capacity(l.len());
    for x in 0..l.len() {
        let mut idx = 0;
        for (coord, fl) in coords.iter().zip(&lattices) {
            let i = match coord {
                Coord::Mo {
                    central,
                    index_of_atom,
                } => {
                    let y = l.meet(x, *central);
                    if y == l.bottom() {
                        0
                    } else if y == *central {
                        1
                    } else {
                        match index_of_atom.iter().find(|&&(p, _)| p == y) {
                            Some(&(_, i)) => i,
                            None => {
                                return fail(format!("`{}` is not an atom of its block", l.name(y)))
                            }
                        }
                    }
                }
                Coord::Boolean { atoms } => atoms
                    .iter()
                    .enumerate()
                    .filter(|&(_, &p)| l.leq(p, x))
                    .map(|(j, _)| 1 << j)
                    .sum(),
            };
            idx = idx * fl.len() + i;
        }
        iso.push(idx);
    }
    if !is_isomorphism(l, &product, &iso) {
        return fail("map into the product of factors is not an isomorphism".into());
    }
    Ok(Decomposition {
        factors,
        product,
        iso,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finlat::{o6, product};

    #[test]
    fn decompose_examples() {
        assert_eq!(
            decompose_finite_mol(&boolean(3)).unwrap().factors,
            vec![Factor::Boolean(3)]
        );
        assert_eq!(
            decompose_finite_mol(&mo(3)).unwrap().factors,
            vec![Factor::Mo(3)]
        );
        let p = product(&mo(2), &boolean(1));
        assert_eq!(
            decompose_finite_mol(&p).unwrap().factors,
            vec![Factor::Mo(2), Factor::Boolean(1)]
        );
        assert_eq!(
            decompose_finite_mol(&mo(1)).unwrap().factors,
            vec![Factor::Boolean(2)]
        );
        assert!(decompose_finite_mol(&boolean(0))
            .unwrap()
            .factors
            .is_empty());
        assert_eq!(
            decompose_finite_mol(&o6()).unwrap_err(),
            FinLatError::NotMOL
        );
    }

    #[test]
    fn nested_products() {
        let p = product(&product(&boolean(1), &mo(3)), &product(&mo(2), &boolean(2)));
        let d = decompose_finite_mol(&p).unwrap();
        let mut kinds: Vec<String> = d.factors.iter().map(ToString::to_string).collect();
        kinds.sort();
        assert_eq!(kinds, ["Boolean(3)", "MO_2", "MO_3"]);
        assert_eq!(d.product.len(), p.len());
    }
}

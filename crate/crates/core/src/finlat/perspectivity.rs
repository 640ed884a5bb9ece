use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;

use super::lattice::{is_modular, is_orthomodular, FiniteOrtholattice};
use super::FinLatError;
use crate::terms::Term;

/// A common complement of `a` and `b` in `[0, a + b]`, found by exhaustive
/// search (least index first).
pub fn perspective_via(l: &FiniteOrtholattice, a: usize, b: usize) -> Option<usize> {
    let top = l.join(a, b);
    l.down_set(top).ones().find(|&c| {
        l.join(a, c) == top
            && l.join(b, c) == top
            && l.meet(a, c) == l.bottom()
            && l.meet(b, c) == l.bottom()
    })
}

/// The perspectivity relation as one bit row per element.
pub fn perspectivity(l: &FiniteOrtholattice) -> Result<Vec<FixedBitSet>, FinLatError> {
    if !is_modular(l) {
        return Err(FinLatError::NotModular);
    }
    Ok(perspectivity_unchecked(l))
}

pub(crate) fn perspectivity_unchecked(l: &FiniteOrtholattice) -> Vec<FixedBitSet> {
    let n = l.len();
    let mut rel: Vec<FixedBitSet> = (0..n).map(|_| FixedBitSet::with_capacity(n)).collect();
    for a in 0..n {
        rel[a].insert(a);
        for b in a + 1..n {
            if perspective_via(l, a, b).is_some() {
                rel[a].insert(b);
                rel[b].insert(a);
            }
        }
    }
    rel
}

fn join_closure(l: &FiniteOrtholattice, mut set: FixedBitSet) -> FixedBitSet {
    loop {
        let members: Vec<usize> = set.ones().collect();
        let before = set.count_ones(..);
        for (i, &x) in members.iter().enumerate() {
            for &y in &members[i + 1..] {
                set.insert(l.join(x, y));
            }
        }
        if set.count_ones(..) == before {
            return set;
        }
    }
}

/// `I(a)`: all finite joins of elements perspective to something below `a`.
pub fn neutral_ideal(l: &FiniteOrtholattice, a: usize) -> Result<Vec<usize>, FinLatError> {
    let persp = perspectivity(l)?;
    Ok(neutral_ideal_with(l, &persp, a).ones().collect())
}

pub(crate) fn neutral_ideal_with(
    l: &FiniteOrtholattice,
    persp: &[FixedBitSet],
    a: usize,
) -> FixedBitSet {
    let mut seed = FixedBitSet::with_capacity(l.len());
    seed.insert(l.bottom());
    for y in l.down_set(a).ones() {
        seed.union_with(&persp[y]);
    }
    join_closure(l, seed)
}

/// Checks that `set` is a nonempty ideal closed under perspectivity.
pub fn is_neutral_ideal(l: &FiniteOrtholattice, set: &[usize]) -> Result<(), FinLatError> {
    let persp = perspectivity(l)?;
    let mut member = FixedBitSet::with_capacity(l.len());
    for &x in set {
        member.insert(x);
    }
    let bad = |msg: String| Err(FinLatError::NotNeutralIdeal(msg));
    if set.is_empty() {
        return bad("empty".into());
    }
    for &x in set {
        if !l.down_set(x).is_subset(&member) {
            return bad(format!("not closed downward below `{}`", l.name(x)));
        }
        if !persp[x].is_subset(&member) {
            return bad(format!("not closed under perspectivity at `{}`", l.name(x)));
        }
        for &y in set {
            if !member.contains(l.join(x, y)) {
                return bad(format!("`{}` + `{}` missing", l.name(x), l.name(y)));
            }
        }
    }
    Ok(())
}

/// Checks one instance of the approximation property of neutral ideals:
/// `f(c) ≥ p` iff `f(u) ≥ p` for some `u_i` in the ideal with `u_i ≤ c_i`.
/// Variables of `f` are bound to `c` in sorted order. The search over `u`
/// is exhaustive.
pub fn check_ideal_approximation(
    l: &FiniteOrtholattice,
    ideal: &[usize],
    f: &Term,
    c: &[usize],
    p: usize,
) -> Result<bool, FinLatError> {
    if f.has_ortho() {
        return Err(FinLatError::NotLatticePolynomial(f.render()));
    }
    is_neutral_ideal(l, ideal)?;
    if !ideal.contains(&p) {
        return Err(FinLatError::NotNeutralIdeal(format!(
            "`{}` is not in the ideal",
            l.name(p)
        )));
    }
    let vars = f.variables();
    if vars.len() != c.len() {
        return Err(FinLatError::NotLatticePolynomial(format!(
            "{} variables but {} arguments",
            vars.len(),
            c.len()
        )));
    }
    let eval = |args: &[usize]| -> usize {
        let env: BTreeMap<String, usize> = vars.iter().cloned().zip(args.iter().copied()).collect();
        f.eval(l, &env).expect("lattice polynomial evaluates")
    };
    let lhs = l.leq(p, eval(c));
    let choices: Vec<Vec<usize>> = c
        .iter()
        .map(|&ci| ideal.iter().copied().filter(|&u| l.leq(u, ci)).collect())
        .collect();
    let mut idx = vec![0usize; c.len()];
    let mut rhs = false;
    'search: loop {
        let u: Vec<usize> = idx.iter().zip(&choices).map(|(&i, ch)| ch[i]).collect();
        if l.leq(p, eval(&u)) {
            rhs = true;
            break;
        }
        for k in 0..idx.len() {
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                continue 'search;
            }
            idx[k] = 0;
        }
        break;
    }
    Ok(lhs == rhs)
}

/// Recovers the orthocomplement from an orthogonality relation on the
/// elements: `x'` is the unique `y` with `y ⊥ x` and `z ≤ x + (x + z)y` for
/// all `z`. The lattice's own ortho table, if any, is ignored.
pub fn reconstruct_orthocomplement(
    l: &FiniteOrtholattice,
    perp: impl Fn(usize, usize) -> bool,
) -> Result<Vec<usize>, FinLatError> {
    let n = l.len();
    if let Some(x) = (0..n).find(|&x| x != l.bottom() && perp(x, x)) {
        return Err(FinLatError::Structure(format!(
            "orthogonality is not anisotropic at `{}`",
            l.name(x)
        )));
    }
    let mut table = Vec::with_capacity(n);
    for x in 0..n {
        let candidates: Vec<usize> = (0..n)
            .filter(|&y| perp(y, x) && (0..n).all(|z| l.leq(z, l.join(x, l.meet(l.join(x, z), y)))))
            .collect();
        match candidates[..] {
            [] => return Err(FinLatError::NoComplementFound(l.name(x).into())),
            [y] => table.push(y),
            _ => return Err(FinLatError::AmbiguousComplement(l.name(x).into())),
        }
    }
    if !is_orthomodular(&l.with_ortho(Some(table.clone()))?) {
        return Err(FinLatError::Structure(
            "reconstructed complement is not orthomodular".into(),
        ));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finlat::{boolean, chain, mo, o6, product};

    #[test]
    fn perspectivity_examples() {
        let m = mo(3);
        let atoms = m.atoms();
        let rel = perspectivity(&m).unwrap();
        for &p in &atoms {
            for &q in &atoms {
                assert!(rel[p].contains(q));
            }
        }
        let a1 = m.index_of("a1").unwrap();
        assert_eq!(neutral_ideal(&m, a1).unwrap().len(), m.len());

        let b = boolean(2);
        let a = b.index_of("a1").unwrap();
        assert_eq!(neutral_ideal(&b, a).unwrap(), vec![b.bottom(), a]);
        assert_eq!(neutral_ideal(&b, b.bottom()).unwrap(), vec![b.bottom()]);
        assert_eq!(perspectivity(&o6()).unwrap_err(), FinLatError::NotModular);
    }

    #[test]
    fn neutral_ideals_are_neutral() {
        let l = product(&mo(2), &boolean(1));
        for a in 0..l.len() {
            let i = neutral_ideal(&l, a).unwrap();
            is_neutral_ideal(&l, &i).unwrap();
        }
    }

    #[test]
    fn ideal_approximation_examples() {
        let x: Term = "x".parse().unwrap();
        let xy: Term = "(+ x y)".parse().unwrap();
        let b = boolean(3);
        let a = b.index_of("a1").unwrap();
        let ideal = vec![b.bottom(), a];
        for c in 0..b.len() {
            for &p in &ideal {
                assert!(check_ideal_approximation(&b, &ideal, &x, &[c], p).unwrap());
                for d in 0..b.len() {
                    assert!(check_ideal_approximation(&b, &ideal, &xy, &[c, d], p).unwrap());
                }
            }
        }
        let m = mo(3);
        let whole: Vec<usize> = (0..m.len()).collect();
        let f: Term = "(* (+ x y) (+ x z))".parse().unwrap();
        for c in 0..m.len() {
            for d in 0..m.len() {
                for p in 0..m.len() {
                    assert!(check_ideal_approximation(&m, &whole, &f, &[c, d, c], p).unwrap());
                }
            }
        }
        assert!(matches!(
            check_ideal_approximation(&b, &[b.bottom(), a, b.top()], &x, &[a], a),
            Err(FinLatError::NotNeutralIdeal(_))
        ));
    }

    #[test]
    fn reconstruct_examples() {
        let m = mo(2);
        let t = reconstruct_orthocomplement(&m, |x, y| m.leq(x, m.ortho(y))).unwrap();
        assert_eq!(t, m.ortho_table().unwrap());
        let b = boolean(2);
        let t = reconstruct_orthocomplement(&b, |x, y| b.meet(x, y) == b.bottom()).unwrap();
        assert_eq!(t, b.ortho_table().unwrap());
        let c = chain(3);
        assert_eq!(
            reconstruct_orthocomplement(&c, |x, y| x == c.bottom() || y == c.bottom()),
            Err(FinLatError::NoComplementFound("c1".into()))
        );
    }
}

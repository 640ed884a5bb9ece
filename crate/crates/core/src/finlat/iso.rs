use super::lattice::FiniteOrtholattice;

fn heights(l: &FiniteOrtholattice) -> Vec<usize> {
    let mut order: Vec<usize> = (0..l.len()).collect();
    order.sort_by_key(|&x| l.down_set(x).count_ones(..));
    let mut h = vec![0usize; l.len()];
    for &x in &order {
        h[x] = l
            .down_set(x)
            .ones()
            .filter(|&y| y != x)
            .map(|y| h[y] + 1)
            .max()
            .unwrap_or(0);
    }
    h
}

/// Whether `map` (index in `l1` → index in `l2`) is a bijection preserving
/// and reflecting order, and preserving the orthocomplement when both
/// lattices carry one.
pub fn is_isomorphism(l1: &FiniteOrtholattice, l2: &FiniteOrtholattice, map: &[usize]) -> bool {
    let n = l1.len();
    if l2.len() != n || map.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &y in map {
        if y >= n || std::mem::replace(&mut seen[y], true) {
            return false;
        }
    }
    let order_ok = (0..n).all(|a| (0..n).all(|b| l1.leq(a, b) == l2.leq(map[a], map[b])));
    let ortho_ok = match (l1.ortho_table(), l2.ortho_table()) {
        (Some(o1), Some(o2)) => (0..n).all(|a| map[o1[a]] == o2[map[a]]),
        _ => true,
    };
    order_ok && ortho_ok
}

/// Backtracking isomorphism search. Elements are matched by height, up-set
/// and down-set size, then checked against every earlier assignment.
pub fn find_isomorphism(l1: &FiniteOrtholattice, l2: &FiniteOrtholattice) -> Option<Vec<usize>> {
    let n = l1.len();
    if l2.len() != n || l1.has_ortho() != l2.has_ortho() {
        return None;
    }
    let (h1, h2) = (heights(l1), heights(l2));
    let sig = |l: &FiniteOrtholattice, h: &[usize], x: usize| {
        (
            h[x],
            l.down_set(x).count_ones(..),
            l.up_set(x).count_ones(..),
        )
    };
    let mut sig1: Vec<_> = (0..n).map(|x| sig(l1, &h1, x)).collect();
    let mut sig2: Vec<_> = (0..n).map(|x| sig(l2, &h2, x)).collect();
    let order: Vec<usize> = {
        let mut o: Vec<usize> = (0..n).collect();
        o.sort_by_key(|&x| sig1[x]);
        o
    };
    {
        let (mut a, mut b) = (sig1.clone(), sig2.clone());
        a.sort();
        b.sort();
        if a != b {
            return None;
        }
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let ok = search(l1, l2, &order, 0, &mut map, &mut used, &mut sig1, &mut sig2);
    ok.then_some(map)
}

#[allow(clippy::too_many_arguments)]
fn search(
    l1: &FiniteOrtholattice,
    l2: &FiniteOrtholattice,
    order: &[usize],
    k: usize,
    map: &mut [usize],
    used: &mut [bool],
    sig1: &mut [(usize, usize, usize)],
    sig2: &mut [(usize, usize, usize)],
) -> bool {
    let Some(&x) = order.get(k) else {
        return true;
    };
    for y in 0..l2.len() {
        if used[y] || sig1[x] != sig2[y] {
            continue;
        }
        let consistent = order[..k]
            .iter()
            .all(|&z| l1.leq(x, z) == l2.leq(y, map[z]) && l1.leq(z, x) == l2.leq(map[z], y))
            && match (l1.ortho_table(), l2.ortho_table()) {
                (Some(o1), Some(o2)) => {
                    let ox = o1[x];
                    (ox == x) == (o2[y] == y) && (map[ox] == usize::MAX || map[ox] == o2[y])
                }
                _ => true,
            };
        if !consistent {
            continue;
        }
        map[x] = y;
        used[y] = true;
        if search(l1, l2, order, k + 1, map, used, sig1, sig2) {
            return true;
        }
        map[x] = usize::MAX;
        used[y] = false;
    }
    false
}

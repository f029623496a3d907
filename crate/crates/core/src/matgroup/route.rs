use std::collections::{HashMap, VecDeque};

use crate::ring::Ring;

use super::{check_pair, MatError, Word};

/// Where columns `k` and `l` of a signed permutation matrix sit: `(row, sign)`
/// for each, sign `true` meaning `+1`.
type State = (usize, bool, usize, bool);

/// Finds permutation words `(tau, rho)` with `(sigma^tau)_kl = sigma_ij` for
/// every `sigma`, and `t_kl(x)^rho = t_ij(x)` for every `x`.
///
/// `tau` is the shortest product `p^(r) ... p^(1)` of words `p_ab` whose
/// matrix has `+-e_i` in column `k` and `+-e_j` in column `l` with equal signs;
/// `rho = tau^-1`, spelled with `p_ba = p_ab^-1`.
pub fn route(ring: &Ring, n: usize, i: usize, j: usize, k: usize, l: usize) -> Result<(Word, Word), MatError> {
    check_pair(n, i, j)?;
    check_pair(n, k, l)?;
    let start: State = (k, true, l, true);
    let done = |s: &State| s.0 == i && s.2 == j && s.1 == s.3;
    let apply = |(a, b): (usize, usize), s: State| -> State {
        // p_ab e_b = e_a, p_ab e_a = -e_b
        let step = |row: usize, sign: bool| {
            if row == b {
                (a, sign)
            } else if row == a {
                (b, !sign)
            } else {
                (row, sign)
            }
        };
        let (r1, s1) = step(s.0, s.1);
        let (r2, s2) = step(s.2, s.3);
        (r1, s1, r2, s2)
    };
    let moves: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let mut parent: HashMap<State, Option<(State, (usize, usize))>> = HashMap::new();
    parent.insert(start, None);
    let mut queue = VecDeque::from([start]);
    let mut goal = None;
    while let Some(s) = queue.pop_front() {
        if done(&s) {
            goal = Some(s);
            break;
        }
        for &mv in &moves {
            let next = apply(mv, s);
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(next) {
                e.insert(Some((s, mv)));
                queue.push_back(next);
            }
        }
    }
    let mut s = goal.ok_or(MatError::Unroutable { n, i, j, k, l })?;
    // moves in application order p^(1), p^(2), ...
    let mut applied = Vec::new();
    while let Some(Some((prev, mv))) = parent.get(&s) {
        applied.push(*mv);
        s = *prev;
    }
    applied.reverse();
    let tau = Word::concat(
        ring,
        n,
        applied.iter().rev().map(|&(a, b)| Word::perm(ring.clone(), n, a, b)).collect::<Vec<_>>().iter(),
    );
    let rho = Word::concat(
        ring,
        n,
        applied.iter().map(|&(a, b)| Word::perm(ring.clone(), n, b, a)).collect::<Vec<_>>().iter(),
    );
    Ok((tau, rho))
}

//! Exact mixed Nash equilibria of two-player games, restricted to a
//! product region.
//!
//! Support enumeration: for every pair of supports drawn from the region
//! (increasing total size, then lexicographic), solve the linear
//! indifference system over exact rationals and validate the candidate as
//! a full equilibrium of the game — indifference across the support and no
//! profitable deviation to *any* action, inside or outside the region.
//!
//! Degenerate games can leave an indifference system underdetermined. In
//! that case the solution polytope is explored through its vertices: the
//! base system is augmented with every combination of `nullity` extra
//! constraints drawn from "probability is zero" and "an off-support action
//! ties the support value", which pins down each vertex as the unique
//! solution of a square system. Any vertex that validates is a genuine
//! equilibrium, so the search remains exhaustive for the support pair.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{FiniteGame, ProductSet, Profile};

/// One exact probability vector per player; entries are nonnegative and
/// each vector sums to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedProfile {
    pub probabilities: Vec<Vec<BigRational>>,
}

impl MixedProfile {
    /// Actions with strictly positive probability, per player.
    pub fn support(&self) -> Vec<Vec<usize>> {
        self.probabilities
            .iter()
            .map(|v| {
                v.iter()
                    .enumerate()
                    .filter(|(_, p)| !p.is_zero())
                    .map(|(a, _)| a)
                    .collect()
            })
            .collect()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.probabilities
                .iter()
                .map(|v| {
                    serde_json::Value::Array(
                        v.iter()
                            .map(|p| {
                                serde_json::Value::String(crate::rational::format_rational(p))
                            })
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

/// Witness detail for a validated equilibrium (used in audit reports).
#[derive(Debug, Clone, Serialize)]
pub struct SupportPair {
    pub row_support: Vec<usize>,
    pub col_support: Vec<usize>,
}

/// Find an exact mixed Nash equilibrium of a two-player game whose support
/// lies inside `region`. Returns the first hit in deterministic support
/// order, or `None` when no equilibrium is supported there.
pub fn mixed_ne_in_support(
    game: &FiniteGame,
    region: &ProductSet,
) -> Result<Option<MixedProfile>> {
    if game.player_count() != 2 {
        return Err(Error::NotTwoPlayers(game.player_count()));
    }
    region.validate_for(game)?;
    let r0 = region.component(0);
    let r1 = region.component(1);
    let max_total = r0.len() + r1.len();
    for total in 2..=max_total {
        for s0 in 1..=r0.len().min(total - 1) {
            let s1 = total - s0;
            if s1 < 1 || s1 > r1.len() {
                continue;
            }
            for x_support in combinations(r0, s0) {
                for y_support in combinations(r1, s1) {
                    if let Some(ne) = try_support_pair(game, &x_support, &y_support) {
                        return Ok(Some(ne));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Attempt one support pair: player 1 mixes on `x_support`, player 2 on
/// `y_support`.
fn try_support_pair(
    game: &FiniteGame,
    x_support: &[usize],
    y_support: &[usize],
) -> Option<MixedProfile> {
    // Solve for player 2's mixture y (making x_support indifferent), and
    // player 1's mixture x (making y_support indifferent).
    let ys = side_candidates(game, 0, x_support, y_support);
    if ys.is_empty() {
        return None;
    }
    let xs = side_candidates(game, 1, y_support, x_support);
    for x in &xs {
        for y in &ys {
            let candidate = MixedProfile {
                probabilities: vec![
                    full_vector(game.action_count(0), x_support, x),
                    full_vector(game.action_count(1), y_support, y),
                ],
            };
            if is_exact_ne(game, &candidate) {
                return Some(candidate);
            }
        }
    }
    None
}

/// Candidate mixtures of the *opponent* that make `own_support` of
/// `player` indifferent and weakly optimal against every action of
/// `player`. Probabilities are indexed by `opp_support`.
fn side_candidates(
    game: &FiniteGame,
    player: usize,
    own_support: &[usize],
    opp_support: &[usize],
) -> Vec<Vec<BigRational>> {
    let m = opp_support.len();
    // Unknowns: probabilities over opp_support, then the value v.
    // Rows: indifference of each own_support action, then normalization.
    let mut base: Vec<Vec<BigRational>> = Vec::new();
    for &a in own_support {
        let mut row = Vec::with_capacity(m + 2);
        for &b in opp_support {
            row.push(pair_utility(game, player, a, b));
        }
        row.push(-BigRational::one());
        row.push(BigRational::zero());
        base.push(row);
    }
    let mut norm = vec![BigRational::one(); m];
    norm.push(BigRational::zero());
    norm.push(BigRational::one());
    base.push(norm);

    let mut candidates = Vec::new();
    match solve_unique(base.clone(), m + 1) {
        SolveOutcome::Unique(sol) => candidates.push(sol),
        SolveOutcome::Inconsistent => return Vec::new(),
        SolveOutcome::Underdetermined(nullity) => {
            // Vertex search: augment with `nullity` extra active rows.
            let mut pool: Vec<Vec<BigRational>> = Vec::new();
            for k in 0..m {
                let mut row = vec![BigRational::zero(); m + 2];
                row[k] = BigRational::one();
                pool.push(row);
            }
            for a in 0..game.action_count(player) {
                if own_support.contains(&a) {
                    continue;
                }
                let mut row = Vec::with_capacity(m + 2);
                for &b in opp_support {
                    row.push(pair_utility(game, player, a, b));
                }
                row.push(-BigRational::one());
                row.push(BigRational::zero());
                pool.push(row);
            }
            let mut budget = 5_000usize;
            for subset in combinations(&(0..pool.len()).collect::<Vec<_>>(), nullity) {
                if budget == 0 {
                    break;
                }
                budget -= 1;
                let mut system = base.clone();
                for idx in subset {
                    system.push(pool[idx].clone());
                }
                if let SolveOutcome::Unique(sol) = solve_unique(system, m + 1) {
                    if !candidates.contains(&sol) {
                        candidates.push(sol);
                    }
                }
            }
        }
    }
    candidates.retain(|sol| {
        let probs = &sol[..m];
        let v = &sol[m];
        probs.iter().all(|p| !p.is_negative())
            && optimal_for(game, player, opp_support, probs, v)
    });
    candidates.into_iter().map(|sol| sol[..m].to_vec()).collect()
}

/// Expected utility of `player` playing `a` against the opponent playing
/// `b` (two-player game).
fn pair_utility(game: &FiniteGame, player: usize, a: usize, b: usize) -> BigRational {
    let profile = if player == 0 {
        Profile::new(vec![a, b])
    } else {
        Profile::new(vec![b, a])
    };
    game.utility(&profile, player).clone()
}

/// No action of `player` (anywhere in the game) exceeds value `v` against
/// the opponent mixture.
fn optimal_for(
    game: &FiniteGame,
    player: usize,
    opp_support: &[usize],
    probs: &[BigRational],
    v: &BigRational,
) -> bool {
    for a in 0..game.action_count(player) {
        let mut u = BigRational::zero();
        for (k, &b) in opp_support.iter().enumerate() {
            u += pair_utility(game, player, a, b) * &probs[k];
        }
        if &u > v {
            return false;
        }
    }
    true
}

fn full_vector(len: usize, support: &[usize], probs: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); len];
    for (k, &a) in support.iter().enumerate() {
        out[a] = probs[k].clone();
    }
    out
}

/// Full equilibrium validation from scratch: vectors are distributions,
/// support actions achieve the owner's best payoff, and no deviation to
/// any pure action is profitable.
pub fn is_exact_ne(game: &FiniteGame, candidate: &MixedProfile) -> bool {
    if game.player_count() != 2 || candidate.probabilities.len() != 2 {
        return false;
    }
    for (i, v) in candidate.probabilities.iter().enumerate() {
        if v.len() != game.action_count(i) {
            return false;
        }
        if v.iter().any(|p| p.is_negative()) {
            return false;
        }
        if v.iter().sum::<BigRational>() != BigRational::one() {
            return false;
        }
    }
    for player in 0..2 {
        let own = &candidate.probabilities[player];
        let opp = &candidate.probabilities[1 - player];
        let utility_of = |a: usize| -> BigRational {
            opp.iter()
                .enumerate()
                .filter(|(_, p)| !p.is_zero())
                .map(|(b, p)| pair_utility(game, player, a, b) * p)
                .sum()
        };
        let value: BigRational = own
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(a, p)| utility_of(a) * p)
            .sum();
        for a in 0..game.action_count(player) {
            let u = utility_of(a);
            if u > value {
                return false;
            }
            if !own[a].is_zero() && u != value {
                return false;
            }
        }
    }
    true
}

enum SolveOutcome {
    Unique(Vec<BigRational>),
    Underdetermined(usize),
    Inconsistent,
}

/// Gaussian elimination on an augmented matrix (last column is the right
/// side) over exact rationals.
fn solve_unique(mut rows: Vec<Vec<BigRational>>, unknowns: usize) -> SolveOutcome {
    let n_rows = rows.len();
    let mut pivot_cols = Vec::new();
    let mut r = 0usize;
    for c in 0..unknowns {
        let Some(p) = (r..n_rows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n_rows {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for k in 0..=unknowns {
                    let delta = &rows[r][k] * &factor;
                    rows[i][k] -= delta;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == n_rows {
            break;
        }
    }
    for row in rows.iter().skip(r) {
        if !row[unknowns].is_zero() {
            return SolveOutcome::Inconsistent;
        }
    }
    if pivot_cols.len() < unknowns {
        return SolveOutcome::Underdetermined(unknowns - pivot_cols.len());
    }
    let mut sol = vec![BigRational::zero(); unknowns];
    for (row, &c) in pivot_cols.iter().enumerate() {
        sol[c] = rows[row][unknowns].clone();
    }
    SolveOutcome::Unique(sol)
}

/// k-subsets of `items`, lexicographic.
fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 || k > items.len() {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        // Advance the index vector.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + items.len() - k {
                break;
            }
        }
        if idx[0] == items.len() - k && idx[k - 1] == items.len() - 1 {
            return out;
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::rational::ratio;

    fn set(comps: &[&[usize]]) -> ProductSet {
        ProductSet::new(comps.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(
            combinations(&[0, 1, 2], 2),
            vec![vec![0, 1], vec![0, 2], vec![1, 2]]
        );
        assert_eq!(combinations(&[5], 1), vec![vec![5]]);
        assert!(combinations(&[1, 2], 3).is_empty());
    }

    #[test]
    fn matching_pennies_uniform_ne() {
        let g = presets::matching_pennies();
        let ne = mixed_ne_in_support(&g, &ProductSet::full(&g))
            .unwrap()
            .expect("matching pennies has the uniform NE");
        let half = ratio(1, 2);
        assert_eq!(
            ne.probabilities,
            vec![
                vec![half.clone(), half.clone()],
                vec![half.clone(), half.clone()]
            ]
        );
        assert!(is_exact_ne(&g, &ne));
    }

    #[test]
    fn table1_ec_supports_the_half_half_ne() {
        let g = presets::table1();
        let ne = mixed_ne_in_support(&g, &set(&[&[0, 1], &[0, 1]]))
            .unwrap()
            .expect("the cycle block supports a mixed NE");
        let half = ratio(1, 2);
        let zero = ratio(0, 1);
        assert_eq!(
            ne.probabilities,
            vec![
                vec![half.clone(), half.clone(), zero.clone()],
                vec![half.clone(), half.clone(), zero.clone()]
            ]
        );
        assert!(is_exact_ne(&g, &ne));
    }

    #[test]
    fn pure_non_ne_region_yields_none() {
        let g = presets::table1();
        // (U,L) is not an equilibrium: player 2 prefers C.
        assert!(mixed_ne_in_support(&g, &set(&[&[0], &[0]]))
            .unwrap()
            .is_none());
    }

    #[test]
    fn pure_ne_is_found_as_a_degenerate_mixture() {
        let g = presets::table1();
        let ne = mixed_ne_in_support(&g, &set(&[&[2], &[2]]))
            .unwrap()
            .expect("(D,R) is an NE");
        assert_eq!(ne.support(), vec![vec![2], vec![2]]);
    }

    #[test]
    fn three_player_games_are_rejected() {
        let g = crate::game::random_game(1, &[2, 2, 2], (0, 3)).unwrap();
        assert!(matches!(
            mixed_ne_in_support(&g, &ProductSet::full(&g)),
            Err(Error::NotTwoPlayers(3))
        ));
    }

    #[test]
    fn degenerate_tied_game_still_finds_an_ne() {
        // All payoffs equal: every profile is an NE; the solver must cope
        // with a fully underdetermined indifference system.
        let g = crate::game::random_game(0, &[2, 2], (0, 0)).unwrap();
        let ne = mixed_ne_in_support(&g, &ProductSet::full(&g))
            .unwrap()
            .expect("constant games are full of equilibria");
        assert!(is_exact_ne(&g, &ne));
    }
}

//! Equilibrium cycles and curb sets.
//!
//! An equilibrium cycle is a Cartesian product `E = E_1 x ... x E_N` of
//! action subsets satisfying:
//!
//! 1. **Stability** — for every player `i` and opponent profile in `E_-i`,
//!    some inside action strictly beats every action outside `E_i`;
//! 2. **Unrest** — at every profile of `E`, some player has an inside
//!    action strictly better than their current one that also strictly
//!    beats all of their outside actions;
//! 3. **Minimality** — no proper nonempty sub-product satisfies 1 and 2.
//!
//! In finite games the ECs coincide with the non-trivial minimal curb sets
//! (products containing all best responses to themselves and no pure Nash
//! equilibrium). Enumeration goes through curb closures, which is cheap;
//! [`brute_force_ecs`] re-derives the answer straight from the definition
//! and is kept as an independent oracle — it never touches the
//! best-response table.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{splice, FiniteGame, IndexOdometer, Profile, ProductSet};
use crate::graph::{best_response_sets, BestResponseTable};
use crate::DEFAULT_BUDGET;

/// Which defining condition a candidate failed, with a concrete witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum EcFailure {
    /// `outside_action` of `player` is weakly best against `opponents`
    /// (actions of the other players, in player order), so no inside
    /// action strictly beats it.
    Stability {
        player: usize,
        opponents: Vec<usize>,
        outside_action: usize,
    },
    /// At `profile`, no player has an inside deviation that strictly
    /// improves on their current action and strictly beats all outside
    /// actions.
    Unrest { profile: Vec<usize> },
    /// A proper sub-product satisfying stability and unrest.
    Minimality { subset: ProductSet },
}

impl EcFailure {
    pub fn condition(&self) -> &'static str {
        match self {
            EcFailure::Stability { .. } => "stability",
            EcFailure::Unrest { .. } => "unrest",
            EcFailure::Minimality { .. } => "minimality",
        }
    }
}

/// Outcome of an EC verification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EcVerdict {
    pub holds: bool,
    pub failure: Option<EcFailure>,
}

impl EcVerdict {
    fn pass() -> Self {
        EcVerdict {
            holds: true,
            failure: None,
        }
    }

    fn fail(failure: EcFailure) -> Self {
        EcVerdict {
            holds: false,
            failure: Some(failure),
        }
    }
}

/// Stability check. Returns a witness for the first violation found:
/// a (player, opponent profile, outside action) triple where the outside
/// action is weakly best. Works directly on utilities.
fn stability_failure(game: &FiniteGame, set: &ProductSet) -> Option<EcFailure> {
    for i in 0..game.player_count() {
        let inside = set.component(i);
        let outside: Vec<usize> = (0..game.action_count(i))
            .filter(|a| inside.binary_search(a).is_err())
            .collect();
        if outside.is_empty() {
            continue;
        }
        for opp in opponent_profiles_in(set, i) {
            let base = splice(&opp, i, 0);
            let inside_max = inside
                .iter()
                .map(|&x| game.deviation_utility(&base, i, x))
                .max()
                .expect("component is nonempty");
            for &t in &outside {
                if game.deviation_utility(&base, i, t) >= inside_max {
                    return Some(EcFailure::Stability {
                        player: i,
                        opponents: opp,
                        outside_action: t,
                    });
                }
            }
        }
    }
    None
}

/// Unrest check. Returns the first profile at which no player has a
/// qualifying inside deviation.
fn unrest_failure(game: &FiniteGame, set: &ProductSet) -> Option<EcFailure> {
    for profile in set.profiles() {
        let mut restless = false;
        for i in 0..game.player_count() {
            let current = game.utility(&profile, i);
            let inside_max = set
                .component(i)
                .iter()
                .map(|&x| game.deviation_utility(&profile, i, x))
                .max()
                .expect("component is nonempty");
            if inside_max <= current {
                continue;
            }
            let beats_outside = (0..game.action_count(i))
                .filter(|a| set.component(i).binary_search(a).is_err())
                .all(|t| game.deviation_utility(&profile, i, t) < inside_max);
            if beats_outside {
                restless = true;
                break;
            }
        }
        if !restless {
            return Some(EcFailure::Unrest {
                profile: profile.indices().to_vec(),
            });
        }
    }
    None
}

fn opponent_profiles_in(set: &ProductSet, player: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
    let comps: Vec<&[usize]> = (0..set.player_count())
        .filter(|&j| j != player)
        .map(|j| set.component(j))
        .collect();
    let shape: Vec<usize> = comps.iter().map(|c| c.len()).collect();
    IndexOdometer::new(shape).map(move |pos| {
        pos.iter()
            .enumerate()
            .map(|(k, &idx)| comps[k][idx])
            .collect()
    })
}

/// Number of nonempty sub-products of `set`, itself included.
fn subproduct_count(set: &ProductSet) -> u128 {
    set.components()
        .iter()
        .map(|c| (1u128 << c.len()) - 1)
        .product()
}

/// All nonempty sub-products, the full set last excluded by the caller if
/// needed. Deterministic order: per-component bitmask odometer.
fn subproducts(set: &ProductSet) -> impl Iterator<Item = ProductSet> + '_ {
    let shape: Vec<usize> = set
        .components()
        .iter()
        .map(|c| (1usize << c.len()) - 1)
        .collect();
    IndexOdometer::new(shape).map(move |masks| {
        let comps: Vec<Vec<usize>> = masks
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                let mask = m + 1; // odometer runs 0..2^n-1, masks are 1..2^n
                set.component(i)
                    .iter()
                    .enumerate()
                    .filter(|&(bit, _)| mask & (1 << bit) != 0)
                    .map(|(_, &a)| a)
                    .collect()
            })
            .collect();
        ProductSet::new(comps).expect("masks are nonempty")
    })
}

/// Verify the three EC conditions for a candidate product set.
///
/// Minimality is checked by scanning every proper nonempty sub-product
/// against conditions 1–2, which is exponential in the component sizes;
/// `budget` caps the scan and the function reports an error instead of
/// silently truncating.
pub fn verify_ec(
    game: &FiniteGame,
    candidate: &ProductSet,
    check_minimality: bool,
    budget: u64,
) -> Result<EcVerdict> {
    candidate.validate_for(game)?;
    if let Some(f) = stability_failure(game, candidate) {
        return Ok(EcVerdict::fail(f));
    }
    if let Some(f) = unrest_failure(game, candidate) {
        return Ok(EcVerdict::fail(f));
    }
    if check_minimality {
        let candidates = subproduct_count(candidate) - 1;
        if candidates > budget as u128 {
            return Err(Error::BudgetExceeded {
                candidates,
                budget,
            });
        }
        for sub in subproducts(candidate) {
            if &sub == candidate {
                continue;
            }
            if stability_failure(game, &sub).is_none() && unrest_failure(game, &sub).is_none() {
                return Ok(EcVerdict::fail(EcFailure::Minimality { subset: sub }));
            }
        }
    }
    Ok(EcVerdict::pass())
}

/// True iff every best response to an opponent profile drawn from the
/// candidate lies inside the candidate.
pub fn is_curb(game: &FiniteGame, candidate: &ProductSet) -> Result<bool> {
    candidate.validate_for(game)?;
    let table = best_response_sets(game);
    Ok(is_curb_with(game, candidate, &table))
}

fn is_curb_with(game: &FiniteGame, candidate: &ProductSet, table: &BestResponseTable) -> bool {
    for i in 0..game.player_count() {
        for opp in opponent_profiles_in(candidate, i) {
            for &b in table.best_responses(i, &opp) {
                if candidate.component(i).binary_search(&b).is_err() {
                    return false;
                }
            }
        }
    }
    true
}

/// Smallest curb set containing `seed`: repeatedly union every player's
/// best responses against the current opponent components until stable.
/// Terminates because the components only grow inside a finite lattice.
pub fn curb_closure(game: &FiniteGame, seed: &ProductSet) -> Result<ProductSet> {
    seed.validate_for(game)?;
    let table = best_response_sets(game);
    Ok(curb_closure_with(game, seed, &table))
}

fn curb_closure_with(
    game: &FiniteGame,
    seed: &ProductSet,
    table: &BestResponseTable,
) -> ProductSet {
    let mut comps: Vec<BTreeSet<usize>> = seed
        .components()
        .iter()
        .map(|c| c.iter().copied().collect())
        .collect();
    loop {
        let current = ProductSet::new(comps.iter().map(|c| c.iter().copied().collect()).collect())
            .expect("components stay nonempty");
        let mut grew = false;
        for i in 0..game.player_count() {
            for opp in opponent_profiles_in(&current, i) {
                for &b in table.best_responses(i, &opp) {
                    if comps[i].insert(b) {
                        grew = true;
                    }
                }
            }
        }
        if !grew {
            return current;
        }
    }
}

/// All inclusion-minimal curb sets, canonically ordered by (profile count,
/// components). Every minimal curb set is the closure of each of its
/// singletons, so closing every singleton profile and dropping non-minimal
/// results is exhaustive.
pub fn minimal_curb_sets(game: &FiniteGame) -> Vec<ProductSet> {
    let table = best_response_sets(game);
    let mut closures: BTreeSet<ProductSet> = BTreeSet::new();
    for profile in game.profiles() {
        closures.insert(curb_closure_with(
            game,
            &ProductSet::singleton(&profile),
            &table,
        ));
    }
    let mut minimal: Vec<ProductSet> = closures
        .iter()
        .filter(|c| !closures.iter().any(|other| other.is_proper_subset_of(c)))
        .cloned()
        .collect();
    sort_canonical(&mut minimal);
    minimal
}

fn sort_canonical(sets: &mut [ProductSet]) {
    sets.sort_by(|a, b| {
        a.profile_count()
            .cmp(&b.profile_count())
            .then_with(|| a.cmp(b))
    });
}

/// True iff the curb set contains no pure Nash equilibrium. Errors when the
/// candidate is not a curb set at all.
pub fn is_non_trivial(game: &FiniteGame, curb: &ProductSet) -> Result<bool> {
    if !is_curb(game, curb)? {
        return Err(Error::NotCurb);
    }
    Ok(!curb.profiles().any(|p| game.is_pure_ne(&p)))
}

/// All equilibrium cycles of a finite game: the non-trivial minimal curb
/// sets, in canonical order.
pub fn enumerate_ecs(game: &FiniteGame) -> Vec<ProductSet> {
    let ecs: Vec<ProductSet> = minimal_curb_sets(game)
        .into_iter()
        .filter(|c| !c.profiles().any(|p| game.is_pure_ne(&p)))
        .collect();
    for ec in &ecs {
        debug_assert!(
            verify_ec(game, ec, false, DEFAULT_BUDGET)
                .map(|v| v.holds)
                .unwrap_or(false),
            "enumerated EC fails stability/unrest: {ec:?}"
        );
    }
    ecs
}

/// Definitional oracle: scan every nonempty sub-product of the full action
/// space for stability and unrest, then keep the inclusion-minimal
/// survivors. Independent of the curb machinery.
pub fn brute_force_ecs(game: &FiniteGame, budget: u64) -> Result<Vec<ProductSet>> {
    let full = ProductSet::full(game);
    let candidates = subproduct_count(&full);
    if candidates > budget as u128 {
        return Err(Error::BudgetExceeded {
            candidates,
            budget,
        });
    }
    let mut satisfying: Vec<ProductSet> = Vec::new();
    for sub in subproducts(&full) {
        if stability_failure(game, &sub).is_none() && unrest_failure(game, &sub).is_none() {
            satisfying.push(sub);
        }
    }
    let mut minimal: Vec<ProductSet> = satisfying
        .iter()
        .filter(|s| !satisfying.iter().any(|other| other.is_proper_subset_of(s)))
        .cloned()
        .collect();
    sort_canonical(&mut minimal);
    Ok(minimal)
}

/// Dominance check for a verified EC: for every player, every outside
/// action and every opponent profile in the *full* space, some inside
/// action must strictly beat the given outside action and weakly dominate
/// every outside action.
pub fn is_dominant_ec(game: &FiniteGame, ec: &ProductSet, budget: u64) -> Result<bool> {
    let verdict = verify_ec(game, ec, true, budget)?;
    if !verdict.holds {
        return Err(Error::NotAnEc);
    }
    for i in 0..game.player_count() {
        let inside = ec.component(i);
        let outside: Vec<usize> = (0..game.action_count(i))
            .filter(|a| inside.binary_search(a).is_err())
            .collect();
        if outside.is_empty() {
            continue;
        }
        for opp in game.opponent_profiles(i) {
            let base = splice(&opp, i, 0);
            for &a in &outside {
                let u_a = game.deviation_utility(&base, i, a);
                let found = inside.iter().any(|&x| {
                    let u_x = game.deviation_utility(&base, i, x);
                    u_x > u_a
                        && outside
                            .iter()
                            .all(|&t| u_x >= game.deviation_utility(&base, i, t))
                });
                if !found {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn set(comps: &[&[usize]]) -> ProductSet {
        ProductSet::new(comps.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    #[test]
    fn table1_curb_checks() {
        let g = presets::table1();
        assert!(is_curb(&g, &set(&[&[0, 1], &[0, 1]])).unwrap());
        assert!(is_curb(&g, &set(&[&[2], &[2]])).unwrap());
        // Player 2's best response to U is C, which is outside {L}.
        assert!(!is_curb(&g, &set(&[&[0], &[0]])).unwrap());
    }

    #[test]
    fn table1_closure_reaches_the_cycle_block() {
        let g = presets::table1();
        assert_eq!(
            curb_closure(&g, &set(&[&[0], &[0]])).unwrap(),
            set(&[&[0, 1], &[0, 1]])
        );
        assert_eq!(
            curb_closure(&g, &set(&[&[2], &[2]])).unwrap(),
            set(&[&[2], &[2]])
        );
    }

    #[test]
    fn matching_pennies_closure_spans_everything() {
        let g = presets::matching_pennies();
        for p in g.profiles() {
            let c = curb_closure(&g, &ProductSet::singleton(&p)).unwrap();
            assert_eq!(c, ProductSet::full(&g));
        }
    }

    #[test]
    fn table1_minimal_curbs_in_canonical_order() {
        let g = presets::table1();
        let curbs = minimal_curb_sets(&g);
        assert_eq!(curbs, vec![set(&[&[2], &[2]]), set(&[&[0, 1], &[0, 1]])]);
    }

    #[test]
    fn coordination_minimal_curbs_are_the_strict_nes() {
        let g = presets::coordination();
        let curbs = minimal_curb_sets(&g);
        assert_eq!(curbs, vec![set(&[&[0], &[0]]), set(&[&[1], &[1]])]);
    }

    #[test]
    fn non_triviality() {
        let g = presets::table1();
        assert!(is_non_trivial(&g, &set(&[&[0, 1], &[0, 1]])).unwrap());
        assert!(!is_non_trivial(&g, &set(&[&[2], &[2]])).unwrap());
        assert!(matches!(
            is_non_trivial(&g, &set(&[&[0], &[0]])),
            Err(Error::NotCurb)
        ));
        let mp = presets::matching_pennies();
        assert!(is_non_trivial(&mp, &ProductSet::full(&mp)).unwrap());
    }

    #[test]
    fn table1_ec_verifies_with_minimality() {
        let g = presets::table1();
        let v = verify_ec(&g, &set(&[&[0, 1], &[0, 1]]), true, 10_000).unwrap();
        assert!(v.holds, "failure: {:?}", v.failure);
    }

    #[test]
    fn full_space_of_table1_fails_unrest_at_the_ne() {
        let g = presets::table1();
        let v = verify_ec(&g, &ProductSet::full(&g), false, 10_000).unwrap();
        assert!(!v.holds);
        match v.failure {
            Some(EcFailure::Unrest { profile }) => assert_eq!(profile, vec![2, 2]),
            other => panic!("expected unrest failure at (D,R), got {other:?}"),
        }
    }

    #[test]
    fn stability_failure_carries_a_witness() {
        let g = presets::table1();
        // {U}x{L,C}: against L, player 1's outside action M ties... actually
        // M pays 0 vs L like D; U pays 2, so stability vs player 1 holds at L.
        // Against C, U pays 0 while outside M pays 2: stability must fail.
        let v = verify_ec(&g, &set(&[&[0], &[0, 1]]), false, 10_000).unwrap();
        assert!(!v.holds);
        match v.failure {
            Some(EcFailure::Stability {
                player,
                opponents,
                outside_action,
            }) => {
                assert_eq!(player, 0);
                assert_eq!(opponents, vec![1]);
                assert_eq!(outside_action, 1);
            }
            other => panic!("expected stability failure, got {other:?}"),
        }
    }

    #[test]
    fn singleton_cannot_be_an_ec() {
        let g = presets::table1();
        let v = verify_ec(&g, &set(&[&[2], &[2]]), false, 10_000).unwrap();
        assert!(!v.holds);
        assert!(matches!(v.failure, Some(EcFailure::Unrest { .. })));
    }

    #[test]
    fn minimality_budget_guard() {
        let g = presets::table1();
        match verify_ec(&g, &ProductSet::full(&g), true, 10) {
            Err(Error::BudgetExceeded { candidates, budget }) => {
                assert_eq!(budget, 10);
                assert_eq!(candidates, 48); // 7*7 - 1
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn table1_enumeration_and_brute_force_agree() {
        let g = presets::table1();
        let expected = vec![set(&[&[0, 1], &[0, 1]])];
        assert_eq!(enumerate_ecs(&g), expected);
        assert_eq!(brute_force_ecs(&g, 1_000_000).unwrap(), expected);
    }

    #[test]
    fn matching_pennies_ec_is_the_full_space() {
        let g = presets::matching_pennies();
        let expected = vec![ProductSet::full(&g)];
        assert_eq!(enumerate_ecs(&g), expected);
        assert_eq!(brute_force_ecs(&g, 1_000_000).unwrap(), expected);
    }

    #[test]
    fn prisoners_dilemma_has_no_ec() {
        let g = presets::prisoners_dilemma();
        assert!(enumerate_ecs(&g).is_empty());
        assert!(brute_force_ecs(&g, 1_000_000).unwrap().is_empty());
    }

    #[test]
    fn brute_force_budget_guard() {
        let g = presets::table1();
        assert!(matches!(
            brute_force_ecs(&g, 10),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn table1_ec_is_not_dominant_but_matching_pennies_is() {
        let g = presets::table1();
        let ec = set(&[&[0, 1], &[0, 1]]);
        // Against R, no action in {U,M} beats D's payoff of 1.
        assert!(!is_dominant_ec(&g, &ec, 10_000).unwrap());
        let mp = presets::matching_pennies();
        // No outside actions exist, so dominance is vacuous.
        assert!(is_dominant_ec(&mp, &ProductSet::full(&mp), 10_000).unwrap());
        assert!(matches!(
            is_dominant_ec(&g, &set(&[&[2], &[2]]), 10_000),
            Err(Error::NotAnEc)
        ));
    }

    #[test]
    fn closure_is_extensive_monotone_idempotent() {
        let g = presets::table1();
        let seeds = [set(&[&[0], &[0]]), set(&[&[0], &[0, 2]]), set(&[&[1], &[1]])];
        for seed in &seeds {
            let c = curb_closure(&g, seed).unwrap();
            assert!(seed.is_subset_of(&c), "extensive");
            assert_eq!(curb_closure(&g, &c).unwrap(), c, "idempotent");
        }
        // Monotone: a larger seed closes to a superset.
        let small = curb_closure(&g, &seeds[0]).unwrap();
        let large = curb_closure(&g, &seeds[1]).unwrap();
        assert!(small.is_subset_of(&large));
    }
}

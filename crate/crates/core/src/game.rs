//! Finite normal-form games with exact rational payoffs.
//!
//! A [`FiniteGame`] stores a dense utility tensor in profile-major order:
//! profiles are enumerated row-major over action indices (the last player's
//! action varies fastest) and the per-player utilities of one profile are
//! contiguous. That layout is part of the on-disk contract, so tensors are
//! portable across implementations.

use std::collections::BTreeSet;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, rational_from_json_number};

/// One action index per player.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Profile(Vec<usize>);

impl Profile {
    pub fn new(indices: Vec<usize>) -> Self {
        Profile(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn get(&self, player: usize) -> usize {
        self.0[player]
    }

    /// Copy with one player's action replaced.
    pub fn with_action(&self, player: usize, action: usize) -> Profile {
        let mut v = self.0.clone();
        v[player] = action;
        Profile(v)
    }
}

impl From<Vec<usize>> for Profile {
    fn from(v: Vec<usize>) -> Self {
        Profile(v)
    }
}

impl From<&[usize]> for Profile {
    fn from(v: &[usize]) -> Self {
        Profile(v.to_vec())
    }
}

/// A Cartesian product of per-player action-index sets.
///
/// Components are kept sorted and deduplicated, so two product sets are
/// equal exactly when they contain the same profiles. A profile is a member
/// iff every coordinate is a member of its component.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ProductSet {
    per_player: Vec<Vec<usize>>,
}

impl ProductSet {
    pub fn new(per_player: Vec<Vec<usize>>) -> Result<Self> {
        if per_player.is_empty() {
            return Err(Error::Empty("product set"));
        }
        let mut canon = Vec::with_capacity(per_player.len());
        for comp in per_player {
            let set: BTreeSet<usize> = comp.into_iter().collect();
            if set.is_empty() {
                return Err(Error::Empty("product-set component"));
            }
            canon.push(set.into_iter().collect());
        }
        Ok(ProductSet { per_player: canon })
    }

    /// The product containing exactly one profile.
    pub fn singleton(profile: &Profile) -> Self {
        ProductSet {
            per_player: profile.indices().iter().map(|&a| vec![a]).collect(),
        }
    }

    /// The full action space of a game.
    pub fn full(game: &FiniteGame) -> Self {
        ProductSet {
            per_player: game
                .action_counts()
                .iter()
                .map(|&n| (0..n).collect())
                .collect(),
        }
    }

    pub fn player_count(&self) -> usize {
        self.per_player.len()
    }

    pub fn component(&self, player: usize) -> &[usize] {
        &self.per_player[player]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.per_player
    }

    pub fn profile_count(&self) -> u128 {
        self.per_player
            .iter()
            .map(|c| c.len() as u128)
            .product()
    }

    pub fn contains(&self, profile: &Profile) -> bool {
        profile.indices().len() == self.per_player.len()
            && profile
                .indices()
                .iter()
                .zip(&self.per_player)
                .all(|(a, comp)| comp.binary_search(a).is_ok())
    }

    /// Componentwise subset test; this is set inclusion on the products.
    pub fn is_subset_of(&self, other: &ProductSet) -> bool {
        self.per_player.len() == other.per_player.len()
            && self
                .per_player
                .iter()
                .zip(&other.per_player)
                .all(|(a, b)| a.iter().all(|x| b.binary_search(x).is_ok()))
    }

    pub fn is_proper_subset_of(&self, other: &ProductSet) -> bool {
        self != other && self.is_subset_of(other)
    }

    /// Bounds check against a game's action counts.
    pub fn validate_for(&self, game: &FiniteGame) -> Result<()> {
        if self.per_player.len() != game.player_count() {
            return Err(Error::OutOfBounds(format!(
                "product set has {} components, game has {} players",
                self.per_player.len(),
                game.player_count()
            )));
        }
        for (player, comp) in self.per_player.iter().enumerate() {
            for &a in comp {
                if a >= game.action_count(player) {
                    return Err(Error::OutOfBounds(format!(
                        "action {a} out of range for player {player}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// All member profiles in lexicographic order.
    pub fn profiles(&self) -> impl Iterator<Item = Profile> + '_ {
        let shape: Vec<usize> = self.per_player.iter().map(|c| c.len()).collect();
        IndexOdometer::new(shape).map(move |pos| {
            Profile(
                pos.iter()
                    .enumerate()
                    .map(|(i, &k)| self.per_player[i][k])
                    .collect(),
            )
        })
    }

    /// Labels of this set's actions in a game, per player.
    pub fn labels(&self, game: &FiniteGame) -> Vec<Vec<String>> {
        self.per_player
            .iter()
            .enumerate()
            .map(|(i, comp)| {
                comp.iter()
                    .map(|&a| game.action_label(i, a).to_string())
                    .collect()
            })
            .collect()
    }
}

/// Row-major odometer over a shape; yields every index vector once.
pub(crate) struct IndexOdometer {
    shape: Vec<usize>,
    pos: Vec<usize>,
    done: bool,
}

impl IndexOdometer {
    pub(crate) fn new(shape: Vec<usize>) -> Self {
        let done = shape.iter().any(|&n| n == 0);
        let pos = vec![0; shape.len()];
        IndexOdometer { shape, pos, done }
    }
}

impl Iterator for IndexOdometer {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.pos.clone();
        for i in (0..self.shape.len()).rev() {
            self.pos[i] += 1;
            if self.pos[i] < self.shape[i] {
                return Some(out);
            }
            self.pos[i] = 0;
        }
        self.done = true;
        Some(out)
    }
}

/// A finite game: labeled action sets and a dense exact-rational utility
/// tensor. Immutable after construction; all queries are pure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGame {
    action_labels: Vec<Vec<String>>,
    utilities: Vec<BigRational>,
}

impl FiniteGame {
    /// Build from labels and a flat tensor in profile-major order (profiles
    /// row-major, last player's action fastest; players innermost).
    pub fn new(action_labels: Vec<Vec<String>>, utilities: Vec<BigRational>) -> Result<Self> {
        let players = action_labels.len();
        if players < 2 {
            return Err(Error::MalformedDocument(format!(
                "need at least 2 players, got {players}"
            )));
        }
        for (i, labels) in action_labels.iter().enumerate() {
            if labels.is_empty() {
                return Err(Error::MalformedDocument(format!(
                    "player {i} has no actions"
                )));
            }
            let mut seen = BTreeSet::new();
            for l in labels {
                if !seen.insert(l) {
                    return Err(Error::DuplicateLabel {
                        player: i,
                        label: l.clone(),
                    });
                }
            }
        }
        let profiles: usize = action_labels.iter().map(|l| l.len()).product();
        let expected = profiles * players;
        if utilities.len() != expected {
            return Err(Error::RaggedTensor(format!(
                "expected {expected} utility entries, got {}",
                utilities.len()
            )));
        }
        Ok(FiniteGame {
            action_labels,
            utilities,
        })
    }

    /// Build by evaluating a utility function on every (profile, player).
    pub fn from_fn(
        action_labels: Vec<Vec<String>>,
        mut utility: impl FnMut(&Profile, usize) -> BigRational,
    ) -> Result<Self> {
        let players = action_labels.len();
        let shape: Vec<usize> = action_labels.iter().map(|l| l.len()).collect();
        let mut utilities = Vec::new();
        for pos in IndexOdometer::new(shape) {
            let profile = Profile(pos);
            for p in 0..players {
                utilities.push(utility(&profile, p));
            }
        }
        FiniteGame::new(action_labels, utilities)
    }

    pub fn player_count(&self) -> usize {
        self.action_labels.len()
    }

    pub fn action_count(&self, player: usize) -> usize {
        self.action_labels[player].len()
    }

    pub fn action_counts(&self) -> Vec<usize> {
        self.action_labels.iter().map(|l| l.len()).collect()
    }

    pub fn action_label(&self, player: usize, action: usize) -> &str {
        &self.action_labels[player][action]
    }

    pub fn action_labels(&self) -> &[Vec<String>] {
        &self.action_labels
    }

    /// Index of the action carrying `label` for `player`.
    pub fn action_by_label(&self, player: usize, label: &str) -> Option<usize> {
        self.action_labels[player].iter().position(|l| l == label)
    }

    pub fn profile_count(&self) -> usize {
        self.action_labels.iter().map(|l| l.len()).product()
    }

    /// Flat row-major index of a profile.
    pub fn flat_index(&self, profile: &Profile) -> usize {
        let mut idx = 0;
        for (i, &a) in profile.indices().iter().enumerate() {
            idx = idx * self.action_count(i) + a;
        }
        idx
    }

    pub fn profile_from_flat(&self, mut flat: usize) -> Profile {
        let n = self.player_count();
        let mut out = vec![0; n];
        for i in (0..n).rev() {
            let c = self.action_count(i);
            out[i] = flat % c;
            flat /= c;
        }
        Profile(out)
    }

    /// All profiles in row-major order (flat index order).
    pub fn profiles(&self) -> impl Iterator<Item = Profile> + '_ {
        IndexOdometer::new(self.action_counts()).map(Profile)
    }

    /// Exact utility lookup; panics on out-of-range indices.
    pub fn utility(&self, profile: &Profile, player: usize) -> &BigRational {
        &self.utilities[self.flat_index(profile) * self.player_count() + player]
    }

    /// Bounds-checked utility lookup.
    pub fn utility_checked(&self, profile: &Profile, player: usize) -> Result<&BigRational> {
        if player >= self.player_count() {
            return Err(Error::OutOfBounds(format!(
                "player {player} out of range (game has {} players)",
                self.player_count()
            )));
        }
        if profile.indices().len() != self.player_count() {
            return Err(Error::OutOfBounds(format!(
                "profile has {} coordinates, game has {} players",
                profile.indices().len(),
                self.player_count()
            )));
        }
        for (i, &a) in profile.indices().iter().enumerate() {
            if a >= self.action_count(i) {
                return Err(Error::OutOfBounds(format!(
                    "action {a} out of range for player {i}"
                )));
            }
        }
        Ok(self.utility(profile, player))
    }

    /// Utility of `player` when they play `action` against the others'
    /// coordinates of `profile`.
    pub fn deviation_utility(
        &self,
        profile: &Profile,
        player: usize,
        action: usize,
    ) -> &BigRational {
        // Index arithmetic instead of cloning the profile: replace one digit.
        let mut idx = 0;
        for (i, &a) in profile.indices().iter().enumerate() {
            let digit = if i == player { action } else { a };
            idx = idx * self.action_count(i) + digit;
        }
        &self.utilities[idx * self.player_count() + player]
    }

    /// True iff no player has a strictly improving unilateral deviation.
    pub fn is_pure_ne(&self, profile: &Profile) -> bool {
        (0..self.player_count()).all(|i| {
            let current = self.utility(profile, i);
            (0..self.action_count(i)).all(|x| self.deviation_utility(profile, i, x) <= current)
        })
    }

    /// All pure Nash equilibria, in row-major profile order.
    pub fn enumerate_pure_ne(&self) -> Vec<Profile> {
        self.profiles().filter(|p| self.is_pure_ne(p)).collect()
    }

    /// True iff every player's candidate action is weakly best against
    /// every opponent profile, not just the candidate's own.
    pub fn is_very_weakly_dominant_ne(&self, profile: &Profile) -> Result<bool> {
        self.utility_checked(profile, 0)?;
        for i in 0..self.player_count() {
            let mine = profile.get(i);
            for opp in self.opponent_profiles(i) {
                let full = splice(&opp, i, mine);
                let u_star = self.utility(&full, i);
                for x in 0..self.action_count(i) {
                    if self.deviation_utility(&full, i, x) > u_star {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Opponent action vectors for `player` (length `players - 1`, in
    /// player order with `player` removed), row-major.
    pub fn opponent_profiles(&self, player: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
        let shape: Vec<usize> = (0..self.player_count())
            .filter(|&j| j != player)
            .map(|j| self.action_count(j))
            .collect();
        IndexOdometer::new(shape)
    }

    pub fn profile_label(&self, profile: &Profile) -> String {
        let parts: Vec<&str> = profile
            .indices()
            .iter()
            .enumerate()
            .map(|(i, &a)| self.action_label(i, a))
            .collect();
        format!("({})", parts.join(","))
    }

    /// Parse the JSON game document format:
    ///
    /// ```json
    /// { "players": 2,
    ///   "actions": [["U","M","D"], ["L","C","R"]],
    ///   "payoffs": [[[2,0],[0,2],[0,0]], ...] }
    /// ```
    ///
    /// `payoffs` is nested by action index in player order; each leaf is an
    /// array of one number or `"p/q"` string per player.
    pub fn from_json_str(text: &str) -> Result<FiniteGame> {
        let doc: Value = serde_json::from_str(text)
            .map_err(|e| Error::MalformedDocument(e.to_string()))?;
        Self::from_json_value(&doc)
    }

    pub fn from_json_value(doc: &Value) -> Result<FiniteGame> {
        let obj = doc
            .as_object()
            .ok_or_else(|| Error::MalformedDocument("top level must be an object".into()))?;
        let players = obj
            .get("players")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::MalformedDocument("missing integer field \"players\"".into()))?
            as usize;
        let actions = obj
            .get("actions")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::MalformedDocument("missing array field \"actions\"".into()))?;
        if actions.len() != players {
            return Err(Error::MalformedDocument(format!(
                "\"actions\" has {} entries for {} players",
                actions.len(),
                players
            )));
        }
        let mut labels = Vec::with_capacity(players);
        for (i, arr) in actions.iter().enumerate() {
            let arr = arr.as_array().ok_or_else(|| {
                Error::MalformedDocument(format!("actions[{i}] must be an array"))
            })?;
            let mut ls = Vec::with_capacity(arr.len());
            for v in arr {
                ls.push(
                    v.as_str()
                        .ok_or_else(|| {
                            Error::MalformedDocument(format!(
                                "actions[{i}] must contain strings"
                            ))
                        })?
                        .to_string(),
                );
            }
            labels.push(ls);
        }
        let payoffs = obj
            .get("payoffs")
            .ok_or_else(|| Error::MalformedDocument("missing field \"payoffs\"".into()))?;
        let shape: Vec<usize> = labels.iter().map(|l| l.len()).collect();
        let mut utilities = Vec::new();
        walk_payoffs(payoffs, &shape, 0, players, &mut utilities)?;
        FiniteGame::new(labels, utilities)
    }

    /// Emit the JSON document; exact integers stay numbers, other rationals
    /// become `"p/q"` strings.
    pub fn to_json_value(&self) -> Value {
        let shape = self.action_counts();
        let flat: Vec<Value> = self
            .profiles()
            .map(|p| {
                let leaf: Vec<Value> = (0..self.player_count())
                    .map(|i| rational_to_json(self.utility(&p, i)))
                    .collect();
                Value::Array(leaf)
            })
            .collect();
        let payoffs = nest(&flat, &shape);
        json!({
            "players": self.player_count(),
            "actions": self.action_labels,
            "payoffs": payoffs,
        })
    }
}

fn rational_to_json(r: &BigRational) -> Value {
    use num_traits::{One, ToPrimitive};
    if r.denom().is_one() {
        if let Some(i) = r.numer().to_i64() {
            return json!(i);
        }
    }
    json!(format_rational(r))
}

fn nest(flat: &[Value], shape: &[usize]) -> Value {
    if shape.is_empty() {
        return flat[0].clone();
    }
    let chunk = flat.len() / shape[0];
    Value::Array(
        (0..shape[0])
            .map(|k| nest(&flat[k * chunk..(k + 1) * chunk], &shape[1..]))
            .collect(),
    )
}

fn walk_payoffs(
    node: &Value,
    shape: &[usize],
    depth: usize,
    players: usize,
    out: &mut Vec<BigRational>,
) -> Result<()> {
    let arr = node.as_array().ok_or_else(|| {
        Error::MalformedDocument(format!("payoffs nesting depth {depth}: expected an array"))
    })?;
    if depth == shape.len() {
        if arr.len() != players {
            return Err(Error::RaggedTensor(format!(
                "payoff leaf has {} entries, expected one per player ({players})",
                arr.len()
            )));
        }
        for v in arr {
            out.push(payoff_value(v)?);
        }
        return Ok(());
    }
    if arr.len() != shape[depth] {
        return Err(Error::RaggedTensor(format!(
            "payoffs level {depth} has {} entries, expected {}",
            arr.len(),
            shape[depth]
        )));
    }
    for child in arr {
        walk_payoffs(child, shape, depth + 1, players, out)?;
    }
    Ok(())
}

fn payoff_value(v: &Value) -> Result<BigRational> {
    match v {
        Value::Number(n) => rational_from_json_number(n),
        Value::String(s) => parse_rational(s),
        other => Err(Error::MalformedDocument(format!(
            "payoff entry must be a number or \"p/q\" string, got {other}"
        ))),
    }
}

pub(crate) fn splice(opponents: &[usize], player: usize, action: usize) -> Profile {
    let mut v = Vec::with_capacity(opponents.len() + 1);
    v.extend_from_slice(&opponents[..player]);
    v.push(action);
    v.extend_from_slice(&opponents[player..]);
    Profile::new(v)
}

/// Deterministic random game.
///
/// Generator contract (stable across versions): a ChaCha8 stream seeded
/// with the 64-bit seed; one uniform integer draw in `[lo, hi]` per
/// (profile, player) cell, taken in profile-major order (profiles row-major
/// with the last player's action fastest, players innermost). Action labels
/// are `a0, a1, ...` for every player.
pub fn random_game(seed: u64, shape: &[usize], value_range: (i64, i64)) -> Result<FiniteGame> {
    if shape.is_empty() {
        return Err(Error::Empty("shape"));
    }
    if shape.len() < 2 {
        return Err(Error::InvalidParams(
            "random game needs at least 2 players".into(),
        ));
    }
    if shape.iter().any(|&n| n == 0) {
        return Err(Error::InvalidParams("shape entries must be >= 1".into()));
    }
    let (lo, hi) = value_range;
    if lo > hi {
        return Err(Error::InvalidParams(format!(
            "value range [{lo}, {hi}] is not ordered"
        )));
    }
    let labels: Vec<Vec<String>> = shape
        .iter()
        .map(|&n| (0..n).map(|a| format!("a{a}")).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells: usize = shape.iter().product::<usize>() * shape.len();
    let utilities: Vec<BigRational> = (0..cells)
        .map(|_| BigRational::from_integer(rng.random_range(lo..=hi).into()))
        .collect();
    FiniteGame::new(labels, utilities)
}

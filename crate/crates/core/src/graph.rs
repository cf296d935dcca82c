//! Best-response and better-response graphs over action profiles.
//!
//! Nodes are profiles (identified by their row-major flat index in the
//! game); a directed edge joins profiles differing in exactly one player's
//! action. In the best-response graph the new action must be a best
//! response to the opponents *and* a strict improvement for the mover; in
//! the better-response graph any strict improvement qualifies. Strictness
//! means no self-loops and out-degree 0 exactly at pure Nash equilibria
//! (for the better kind).

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{splice, FiniteGame, IndexOdometer, Profile, ProductSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GraphKind {
    BestResponse,
    BetterResponse,
}

impl GraphKind {
    pub fn name(&self) -> &'static str {
        match self {
            GraphKind::BestResponse => "best_response",
            GraphKind::BetterResponse => "better_response",
        }
    }
}

/// Exact argmax sets of each player's utility against every opponent
/// profile. Never empty: finite games always have best responses.
#[derive(Debug, Clone)]
pub struct BestResponseTable {
    /// `sets[player][opponent_flat]` is the sorted argmax action list.
    sets: Vec<Vec<Vec<usize>>>,
    opp_shapes: Vec<Vec<usize>>,
}

impl BestResponseTable {
    /// Best responses of `player` against the opponents' actions
    /// (`opponents` has one entry per other player, in player order).
    pub fn best_responses(&self, player: usize, opponents: &[usize]) -> &[usize] {
        &self.sets[player][self.opp_flat(player, opponents)]
    }

    fn opp_flat(&self, player: usize, opponents: &[usize]) -> usize {
        let shape = &self.opp_shapes[player];
        let mut idx = 0;
        for (k, &a) in opponents.iter().enumerate() {
            idx = idx * shape[k] + a;
        }
        idx
    }
}

/// Compute the exact best-response sets of every (player, opponent-profile)
/// cell by scanning the player's utility row.
pub fn best_response_sets(game: &FiniteGame) -> BestResponseTable {
    let players = game.player_count();
    let mut sets = Vec::with_capacity(players);
    let mut opp_shapes = Vec::with_capacity(players);
    for i in 0..players {
        let shape: Vec<usize> = (0..players)
            .filter(|&j| j != i)
            .map(|j| game.action_count(j))
            .collect();
        let mut rows = Vec::new();
        for opp in IndexOdometer::new(shape.clone()) {
            let base = splice(&opp, i, 0);
            let mut best = vec![0usize];
            let mut best_util = game.utility(&base, i);
            for x in 1..game.action_count(i) {
                let u = game.deviation_utility(&base, i, x);
                if u > best_util {
                    best_util = u;
                    best = vec![x];
                } else if u == best_util {
                    best.push(x);
                }
            }
            rows.push(best);
        }
        sets.push(rows);
        opp_shapes.push(shape);
    }
    BestResponseTable { sets, opp_shapes }
}

/// A response graph over all profiles of one game.
#[derive(Debug, Clone)]
pub struct ResponseGraph {
    pub kind: GraphKind,
    shape: Vec<usize>,
    adjacency: Vec<Vec<usize>>,
}

impl ResponseGraph {
    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edges_from(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
    }
}

/// Build the response graph of the requested kind.
pub fn build_graph(game: &FiniteGame, kind: GraphKind) -> ResponseGraph {
    let table = match kind {
        GraphKind::BestResponse => Some(best_response_sets(game)),
        GraphKind::BetterResponse => None,
    };
    let players = game.player_count();
    let mut adjacency = vec![Vec::new(); game.profile_count()];
    for profile in game.profiles() {
        let from = game.flat_index(&profile);
        for i in 0..players {
            let current = game.utility(&profile, i);
            let opp: Vec<usize> = profile
                .indices()
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &a)| a)
                .collect();
            let allowed: Option<&[usize]> = table.as_ref().map(|t| t.best_responses(i, &opp));
            for x in 0..game.action_count(i) {
                if x == profile.get(i) {
                    continue;
                }
                if let Some(brs) = allowed {
                    if brs.binary_search(&x).is_err() {
                        continue;
                    }
                }
                if game.deviation_utility(&profile, i, x) > current {
                    adjacency[from].push(game.flat_index(&profile.with_action(i, x)));
                }
            }
        }
        adjacency[from].sort_unstable();
    }
    ResponseGraph {
        kind,
        shape: game.action_counts(),
        adjacency,
    }
}

/// Partition of a graph into strongly connected components.
///
/// Components are canonicalized: each is sorted ascending, the component
/// list is ordered by smallest node, and `component_of` refers to that
/// order — results do not depend on traversal order.
#[derive(Debug, Clone)]
pub struct SccDecomposition {
    pub component_of: Vec<usize>,
    pub components: Vec<Vec<usize>>,
    pub is_sink: Vec<bool>,
}

/// Tarjan's algorithm, iterative so deep graphs cannot overflow the stack.
pub fn scc_decompose(graph: &ResponseGraph) -> SccDecomposition {
    let n = graph.node_count();
    const UNSET: usize = usize::MAX;
    let mut index = vec![UNSET; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut raw_components: Vec<Vec<usize>> = Vec::new();

    // Explicit DFS frames: (node, next child position).
    let mut frames: Vec<(usize, usize)> = Vec::new();
    for start in 0..n {
        if index[start] != UNSET {
            continue;
        }
        frames.push((start, 0));
        index[start] = next_index;
        low[start] = next_index;
        next_index += 1;
        stack.push(start);
        on_stack[start] = true;
        while let Some(&mut (v, ref mut child)) = frames.last_mut() {
            if *child < graph.edges_from(v).len() {
                let w = graph.edges_from(v)[*child];
                *child += 1;
                if index[w] == UNSET {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some(&mut (parent, _)) = frames.last_mut() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    raw_components.push(comp);
                }
            }
        }
    }

    raw_components.sort_by_key(|c| c[0]);
    let mut component_of = vec![0usize; n];
    for (cid, comp) in raw_components.iter().enumerate() {
        for &v in comp {
            component_of[v] = cid;
        }
    }
    let mut is_sink = vec![true; raw_components.len()];
    for (u, v) in graph.edges() {
        if component_of[u] != component_of[v] {
            is_sink[component_of[u]] = false;
        }
    }
    SccDecomposition {
        component_of,
        components: raw_components,
        is_sink,
    }
}

/// Sink components in deterministic order (by smallest node).
pub fn sink_sccs(decomp: &SccDecomposition, non_singleton_only: bool) -> Vec<Vec<usize>> {
    decomp
        .components
        .iter()
        .enumerate()
        .filter(|&(cid, comp)| decomp.is_sink[cid] && (!non_singleton_only || comp.len() > 1))
        .map(|(_, comp)| comp.clone())
        .collect()
}

/// If `nodes` equals the Cartesian product of its per-player projections,
/// return that product (it is then the unique one); otherwise `None`.
pub fn is_rectangular(shape: &[usize], nodes: &[usize]) -> Result<Option<ProductSet>> {
    if nodes.is_empty() {
        return Err(Error::Empty("node set"));
    }
    let distinct: BTreeSet<usize> = nodes.iter().copied().collect();
    let mut projections: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); shape.len()];
    for &node in &distinct {
        let mut flat = node;
        for i in (0..shape.len()).rev() {
            projections[i].insert(flat % shape[i]);
            flat /= shape[i];
        }
    }
    let product_size: u128 = projections.iter().map(|p| p.len() as u128).product();
    if product_size != distinct.len() as u128 {
        return Ok(None);
    }
    let set = ProductSet::new(projections.into_iter().map(|p| p.into_iter().collect()).collect())?;
    Ok(Some(set))
}

/// Profile-based convenience wrapper around [`is_rectangular`].
pub fn is_rectangular_profiles(
    game: &FiniteGame,
    nodes: &[Profile],
) -> Result<Option<ProductSet>> {
    let ids: Vec<usize> = nodes.iter().map(|p| game.flat_index(p)).collect();
    is_rectangular(&game.action_counts(), &ids)
}

/// Render the graph as a DOT digraph. Nodes are label tuples; each
/// highlight set gets the paired fill color (first matching set wins).
/// Output is byte-for-byte deterministic for a fixed input.
pub fn export_dot(
    game: &FiniteGame,
    graph: &ResponseGraph,
    highlights: &[(Vec<usize>, String)],
) -> Result<String> {
    for (nodes, _) in highlights {
        for &n in nodes {
            if n >= graph.node_count() {
                return Err(Error::UnknownNode(format!(
                    "node {n} out of range ({} nodes)",
                    graph.node_count()
                )));
            }
        }
    }
    let color_of = |node: usize| -> Option<&str> {
        highlights
            .iter()
            .find(|(nodes, _)| nodes.contains(&node))
            .map(|(_, color)| color.as_str())
    };
    let mut out = String::new();
    out.push_str(&format!("digraph {} {{\n", graph.kind.name()));
    out.push_str("  rankdir=LR;\n  node [shape=box, style=rounded];\n");
    for node in 0..graph.node_count() {
        let label = dot_escape(&game.profile_label(&game.profile_from_flat(node)));
        match color_of(node) {
            Some(color) => out.push_str(&format!(
                "  \"{label}\" [style=\"rounded,filled\", fillcolor=\"{}\"];\n",
                dot_escape(color)
            )),
            None => out.push_str(&format!("  \"{label}\";\n")),
        }
    }
    for (u, v) in graph.edges() {
        let from = dot_escape(&game.profile_label(&game.profile_from_flat(u)));
        let to = dot_escape(&game.profile_label(&game.profile_from_flat(v)));
        out.push_str(&format!("  \"{from}\" -> \"{to}\";\n"));
    }
    out.push_str("}\n");
    Ok(out)
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn flat(game: &FiniteGame, indices: &[usize]) -> usize {
        game.flat_index(&Profile::from(indices))
    }

    #[test]
    fn table1_best_response_sets() {
        let g = presets::table1();
        let t = best_response_sets(&g);
        // Player 2 against U plays C; player 1 against R plays D.
        assert_eq!(t.best_responses(1, &[0]), &[1]);
        assert_eq!(t.best_responses(0, &[2]), &[2]);
        assert_eq!(t.best_responses(0, &[0]), &[0]);
    }

    #[test]
    fn full_tie_yields_both_actions() {
        let g = crate::game::random_game(0, &[2, 2], (0, 0)).unwrap();
        let t = best_response_sets(&g);
        assert_eq!(t.best_responses(0, &[0]), &[0, 1]);
        assert_eq!(t.best_responses(1, &[1]), &[0, 1]);
    }

    #[test]
    fn matching_pennies_graph_is_one_four_cycle() {
        let g = presets::matching_pennies();
        let graph = build_graph(&g, GraphKind::BestResponse);
        assert_eq!(graph.edge_count(), 4);
        for node in 0..4 {
            assert_eq!(graph.edges_from(node).len(), 1);
        }
        let decomp = scc_decompose(&graph);
        assert_eq!(decomp.components.len(), 1);
        assert!(decomp.is_sink[0]);
        assert_eq!(decomp.components[0], vec![0, 1, 2, 3]);
    }

    #[test]
    fn table1_graph_contains_the_cycle_and_the_ne_funnel() {
        let g = presets::table1();
        let graph = build_graph(&g, GraphKind::BestResponse);
        let has_edge = |a: &[usize], b: &[usize]| {
            graph.edges_from(flat(&g, a)).contains(&flat(&g, b))
        };
        // The 4-cycle (U,L)->(U,C)->(M,C)->(M,L)->(U,L).
        assert!(has_edge(&[0, 0], &[0, 1]));
        assert!(has_edge(&[0, 1], &[1, 1]));
        assert!(has_edge(&[1, 1], &[1, 0]));
        assert!(has_edge(&[1, 0], &[0, 0]));
        // And (U,R)->(D,R).
        assert!(has_edge(&[0, 2], &[2, 2]));
        // The pure NE has no outgoing edges.
        assert!(graph.edges_from(flat(&g, &[2, 2])).is_empty());
    }

    #[test]
    fn table1_sinks_are_the_singleton_ne_and_the_four_cycle() {
        let g = presets::table1();
        let decomp = scc_decompose(&build_graph(&g, GraphKind::BestResponse));
        let sinks = sink_sccs(&decomp, false);
        assert_eq!(sinks.len(), 2);
        let four: Vec<usize> = vec![
            flat(&g, &[0, 0]),
            flat(&g, &[0, 1]),
            flat(&g, &[1, 0]),
            flat(&g, &[1, 1]),
        ];
        assert!(sinks.contains(&four));
        assert!(sinks.contains(&vec![flat(&g, &[2, 2])]));
        let non_singleton = sink_sccs(&decomp, true);
        assert_eq!(non_singleton, vec![four]);
    }

    #[test]
    fn edgeless_graph_decomposes_into_singleton_sinks() {
        let g = crate::game::random_game(7, &[2, 3], (0, 0)).unwrap();
        // All-tie games produce better graphs with no strict improvements.
        let graph = build_graph(&g, GraphKind::BetterResponse);
        assert_eq!(graph.edge_count(), 0);
        let decomp = scc_decompose(&graph);
        assert_eq!(decomp.components.len(), 6);
        assert!(decomp.is_sink.iter().all(|&s| s));
    }

    #[test]
    fn better_edges_contain_best_edges() {
        let g = presets::table1();
        let best = build_graph(&g, GraphKind::BestResponse);
        let better = build_graph(&g, GraphKind::BetterResponse);
        for (u, v) in best.edges() {
            assert!(better.edges_from(u).contains(&v));
        }
    }

    #[test]
    fn rectangularity_detection() {
        let g = presets::table1();
        let shape = g.action_counts();
        let block = vec![
            flat(&g, &[0, 0]),
            flat(&g, &[0, 1]),
            flat(&g, &[1, 0]),
            flat(&g, &[1, 1]),
        ];
        let p = is_rectangular(&shape, &block).unwrap().unwrap();
        assert_eq!(p, ProductSet::new(vec![vec![0, 1], vec![0, 1]]).unwrap());
        // Singletons are trivially rectangular.
        let single = is_rectangular(&shape, &[flat(&g, &[2, 2])]).unwrap().unwrap();
        assert_eq!(single, ProductSet::new(vec![vec![2], vec![2]]).unwrap());
        // Dropping one corner breaks rectangularity.
        assert!(is_rectangular(&shape, &block[..3]).unwrap().is_none());
        assert!(is_rectangular(&shape, &[]).is_err());
    }

    #[test]
    fn rectangular_product_re_expands_to_the_node_set() {
        let g = presets::table1();
        let shape = g.action_counts();
        let nodes = vec![flat(&g, &[0, 0]), flat(&g, &[0, 1])];
        let p = is_rectangular(&shape, &nodes).unwrap().unwrap();
        let expanded: Vec<usize> = p.profiles().map(|pr| g.flat_index(&pr)).collect();
        assert_eq!(expanded, nodes);
    }

    #[test]
    fn dot_export_is_deterministic_and_validates_highlights() {
        let g = presets::matching_pennies();
        let graph = build_graph(&g, GraphKind::BestResponse);
        let a = export_dot(&g, &graph, &[]).unwrap();
        let b = export_dot(&g, &graph, &[]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.matches("->").count(), 4);
        assert!(a.contains("\"(H,H)\""));
        let highlighted = export_dot(
            &g,
            &graph,
            &[(vec![0, 1], "palegreen".to_string())],
        )
        .unwrap();
        assert_eq!(highlighted.matches("palegreen").count(), 2);
        assert!(matches!(
            export_dot(&g, &graph, &[(vec![99], "red".to_string())]),
            Err(Error::UnknownNode(_))
        ));
    }
}

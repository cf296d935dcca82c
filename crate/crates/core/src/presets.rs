//! Small hand-built games used by the CLI's `reproduce` targets and tests.

use num_rational::BigRational;

use crate::game::FiniteGame;
use crate::rational::int;

fn labels(rows: &[&str], cols: &[&str]) -> Vec<Vec<String>> {
    vec![
        rows.iter().map(|s| s.to_string()).collect(),
        cols.iter().map(|s| s.to_string()).collect(),
    ]
}

fn bimatrix(rows: &[&str], cols: &[&str], cells: &[[(i64, i64); 3]]) -> FiniteGame {
    let mut flat: Vec<BigRational> = Vec::new();
    for row in cells {
        for &(u1, u2) in row {
            flat.push(int(u1));
            flat.push(int(u2));
        }
    }
    FiniteGame::new(labels(rows, cols), flat).expect("preset game is well formed")
}

/// The 3x3 game with both a 4-cycle equilibrium cycle over {U,M}x{L,C} and
/// the pure Nash equilibrium (D,R).
pub fn table1() -> FiniteGame {
    bimatrix(
        &["U", "M", "D"],
        &["L", "C", "R"],
        &[
            [(2, 0), (0, 2), (0, 0)],
            [(0, 2), (2, 0), (0, 0)],
            [(0, 0), (0, 0), (1, 1)],
        ],
    )
}

/// Zero-sum matcher/mismatcher game; no pure NE, one 4-cycle.
pub fn matching_pennies() -> FiniteGame {
    let cells = [[(1, -1), (-1, 1)], [(-1, 1), (1, -1)]];
    let mut flat = Vec::new();
    for row in &cells {
        for &(u1, u2) in row {
            flat.push(int(u1));
            flat.push(int(u2));
        }
    }
    FiniteGame::new(labels(&["H", "T"], &["H", "T"]), flat).unwrap()
}

/// Defection strictly dominant; unique NE (D,D).
pub fn prisoners_dilemma() -> FiniteGame {
    let cells = [[(2, 2), (0, 3)], [(3, 0), (1, 1)]];
    let mut flat = Vec::new();
    for row in &cells {
        for &(u1, u2) in row {
            flat.push(int(u1));
            flat.push(int(u2));
        }
    }
    FiniteGame::new(labels(&["C", "D"], &["C", "D"]), flat).unwrap()
}

/// Two strict equilibria on the diagonal, zero elsewhere.
pub fn coordination() -> FiniteGame {
    let cells = [[(1, 1), (0, 0)], [(0, 0), (1, 1)]];
    let mut flat = Vec::new();
    for row in &cells {
        for &(u1, u2) in row {
            flat.push(int(u1));
            flat.push(int(u2));
        }
    }
    FiniteGame::new(labels(&["A", "B"], &["A", "B"]), flat).unwrap()
}

//! Benchmark specifications: majority decision-making and division, as path
//! predicate families over configurable input grids.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::predicate::{PathPredicate, StatePredicate};

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("input grid must be non-empty")]
    EmptyGrid,
    #[error("duplicate input pair ({0}, {1})")]
    DuplicatePair(u64, u64),
    #[error("species count {0} is not supported for this specification")]
    UnsupportedSpecies(usize),
    #[error("division requires b >= 1, got pair ({0}, {1})")]
    DivisionByZero(u64, u64),
    #[error("unknown specification `{0}` (expected `am` or `div`)")]
    UnknownSpec(String),
}

/// The input pairs a specification is instantiated over.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputGrid {
    pairs: Vec<(u64, u64)>,
}

impl InputGrid {
    pub fn new(pairs: Vec<(u64, u64)>) -> Result<Self, SpecError> {
        if pairs.is_empty() {
            return Err(SpecError::EmptyGrid);
        }
        for (i, &(a, b)) in pairs.iter().enumerate() {
            if pairs[..i].contains(&(a, b)) {
                return Err(SpecError::DuplicatePair(a, b));
            }
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Keeps only pairs whose molecule total is within `bound`.
    pub fn filter_total(&self, bound: u64) -> Result<Self, SpecError> {
        Self::new(
            self.pairs
                .iter()
                .copied()
                .filter(|&(a, b)| a + b <= bound)
                .collect(),
        )
    }
}

/// The benchmark input grids: `[1..5]^2 ∪ [6..10]^2` for majority and
/// `[1..10]^2` for division.
pub fn paper_grids(name: &str) -> Result<InputGrid, SpecError> {
    match name {
        "am" => {
            let mut pairs = Vec::new();
            for a in 1..=5 {
                for b in 1..=5 {
                    pairs.push((a, b));
                }
            }
            for a in 6..=10 {
                for b in 6..=10 {
                    pairs.push((a, b));
                }
            }
            InputGrid::new(pairs)
        }
        "div" => {
            let mut pairs = Vec::new();
            for a in 1..=10 {
                for b in 1..=10 {
                    pairs.push((a, b));
                }
            }
            InputGrid::new(pairs)
        }
        other => Err(SpecError::UnknownSpec(other.to_string())),
    }
}

fn eq(name: &str, value: u64) -> StatePredicate {
    StatePredicate::species_eq(name, value as i64)
}

/// Majority predicates: start from `A = a, B = b` (and `X = 0` with a third
/// species); finish with all molecules on the initial-majority side, either
/// side winning ties.
pub fn am_predicates(grid: &InputGrid, num_species: usize) -> Result<Vec<PathPredicate>, SpecError> {
    if !(num_species == 2 || num_species == 3) {
        return Err(SpecError::UnsupportedSpecies(num_species));
    }
    Ok(grid
        .pairs()
        .iter()
        .map(|&(a, b)| {
            let mut initial = eq("A", a).and(eq("B", b));
            if num_species == 3 {
                initial = initial.and(eq("X", 0));
            }
            let a_wins = eq("A", a + b).and(eq("B", 0));
            let b_wins = eq("A", 0).and(eq("B", a + b));
            let goal = if a > b {
                a_wins
            } else if a < b {
                b_wins
            } else {
                a_wins.or(b_wins)
            };
            PathPredicate::new(initial, goal)
        })
        .collect())
}

/// Division predicates: start from `A = a, B = b, X = 0` (and `Y = 0` with a
/// fourth species); finish with `X = floor(a / b)`.
pub fn div_predicates(
    grid: &InputGrid,
    num_species: usize,
) -> Result<Vec<PathPredicate>, SpecError> {
    if !(num_species == 3 || num_species == 4) {
        return Err(SpecError::UnsupportedSpecies(num_species));
    }
    grid.pairs()
        .iter()
        .map(|&(a, b)| {
            if b == 0 {
                return Err(SpecError::DivisionByZero(a, b));
            }
            let mut initial = eq("A", a).and(eq("B", b)).and(eq("X", 0));
            if num_species == 4 {
                initial = initial.and(eq("Y", 0));
            }
            Ok(PathPredicate::new(initial, eq("X", a / b)))
        })
        .collect()
}

/// On-disk specification: `{"name": "am"|"div", "N": n, "grid": [[a,b],...]}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct SpecFile {
    pub name: String,
    #[serde(rename = "N")]
    pub num_species: usize,
    pub grid: Vec<[u64; 2]>,
}

impl SpecFile {
    pub fn grid(&self) -> Result<InputGrid, SpecError> {
        InputGrid::new(self.grid.iter().map(|&[a, b]| (a, b)).collect())
    }

    pub fn predicates(&self) -> Result<Vec<PathPredicate>, SpecError> {
        let grid = self.grid()?;
        match self.name.as_str() {
            "am" => am_predicates(&grid, self.num_species),
            "div" => div_predicates(&grid, self.num_species),
            other => Err(SpecError::UnknownSpec(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predicate::StatePredicate;

    #[test]
    fn paper_grid_sizes() {
        assert_eq!(paper_grids("am").unwrap().len(), 50);
        assert_eq!(paper_grids("div").unwrap().len(), 100);
        assert!(matches!(paper_grids("max"), Err(SpecError::UnknownSpec(_))));
    }

    #[test]
    fn majority_predicate_shapes() {
        let grid = InputGrid::new(vec![(3, 2), (2, 2)]).unwrap();
        let two = am_predicates(&grid, 2).unwrap();
        assert_eq!(
            two[0].initial,
            StatePredicate::parse("(A = 3) && (B = 2)").unwrap()
        );
        assert_eq!(
            two[0].goal,
            StatePredicate::parse("(A = 5) && (B = 0)").unwrap()
        );
        let three = am_predicates(&grid, 3).unwrap();
        assert_eq!(
            three[1].goal,
            StatePredicate::parse("((A = 4) && (B = 0)) || ((A = 0) && (B = 4))").unwrap()
        );
    }

    #[test]
    fn division_predicate_shapes() {
        let grid = InputGrid::new(vec![(7, 2), (3, 5)]).unwrap();
        let three = div_predicates(&grid, 3).unwrap();
        assert_eq!(three[0].goal, StatePredicate::parse("X = 3").unwrap());
        let four = div_predicates(&grid, 4).unwrap();
        assert_eq!(four[1].goal, StatePredicate::parse("X = 0").unwrap());
        assert!(matches!(
            div_predicates(&InputGrid::new(vec![(3, 0)]).unwrap(), 3),
            Err(SpecError::DivisionByZero(3, 0))
        ));
    }

    #[test]
    fn predicates_round_trip_text_format() {
        let grid = paper_grids("am").unwrap();
        for p in am_predicates(&grid, 3).unwrap() {
            for side in [&p.initial, &p.goal] {
                assert_eq!(&StatePredicate::parse(&side.to_string()).unwrap(), side);
            }
        }
        for p in div_predicates(&paper_grids("div").unwrap(), 4).unwrap() {
            for side in [&p.initial, &p.goal] {
                assert_eq!(&StatePredicate::parse(&side.to_string()).unwrap(), side);
            }
        }
    }

    #[test]
    fn majority_is_symmetric_under_swap() {
        use crate::crn::SysState;
        use crate::predicate::states_with_total;
        let swapped = |p: &StatePredicate| -> StatePredicate {
            // Relabel A <-> B through the text format.
            let text = p
                .to_string()
                .replace('A', "\u{1}")
                .replace('B', "A")
                .replace('\u{1}', "B");
            StatePredicate::parse(&text).unwrap()
        };
        let forward = am_predicates(&InputGrid::new(vec![(4, 1)]).unwrap(), 2).unwrap();
        let backward = am_predicates(&InputGrid::new(vec![(1, 4)]).unwrap(), 2).unwrap();
        let lhs = swapped(&forward[0].goal).resolve(&["A", "B"]).unwrap();
        let rhs = backward[0].goal.resolve(&["A", "B"]).unwrap();
        let all_states: Vec<SysState> = (0..=6).flat_map(|t| states_with_total(2, t)).collect();
        for state in all_states {
            assert_eq!(lhs.eval(&state), rhs.eval(&state), "differs at {state}");
        }
    }

    #[test]
    fn grid_validation() {
        assert!(matches!(InputGrid::new(vec![]), Err(SpecError::EmptyGrid)));
        assert!(matches!(
            InputGrid::new(vec![(1, 1), (1, 1)]),
            Err(SpecError::DuplicatePair(1, 1))
        ));
    }
}

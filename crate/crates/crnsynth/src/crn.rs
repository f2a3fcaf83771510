//! Bimolecular chemical reaction networks and their exact discrete semantics.
//!
//! A [`Crn`] is a finite set of species together with reactions carrying
//! reactant/product stoichiometry vectors and a rate constant. Every reaction
//! has exactly two reactant molecules and two product molecules, so the total
//! molecule count is conserved along every trajectory. This module provides
//! states, enabledness, propensities, firing, the nondeterministic successor
//! relation, and stutter transitions (n-fold firings plus terminal self-loops).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Canonical species names used for synthesized networks with up to 4 species.
pub const CANONICAL_NAMES: [&str; 4] = ["A", "B", "X", "Y"];

#[derive(Debug, Error)]
pub enum CrnError {
    #[error("state has {got} species, network has {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("reaction index {index} out of range (network has {count} reactions)")]
    ReactionIndex { index: usize, count: usize },
    #[error("reaction is not bimolecular: reactant total {reactants}, product total {products}")]
    NotBimolecular { reactants: u32, products: u32 },
    #[error("reaction has identical reactant and product vectors (no net change)")]
    NoNetChange,
    #[error("negative rate {0}")]
    NegativeRate(f64),
    #[error("duplicate species name `{0}`")]
    DuplicateSpecies(String),
    #[error("unknown species `{0}`")]
    UnknownSpecies(String),
    #[error("network must contain at least one reaction")]
    NoReactions,
    #[error("reactions {0} and {1} have identical reactants and products")]
    DuplicateReaction(usize, usize),
    #[error("input species `{0}` is not consumed by any reaction")]
    InputNotConsumed(String),
    #[error("output species `{0}` is not produced by any reaction")]
    OutputNotProduced(String),
    #[error("reaction {index} is not enabled in state {state}")]
    NotEnabled { index: usize, state: String },
    #[error("stoichiometry vector has {got} entries, network has {expected} species")]
    StoichiometryLength { expected: usize, got: usize },
}

/// A species: its position in the species list and its display name.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpeciesId {
    pub index: usize,
    pub name: String,
}

/// One bimolecular reaction: dense per-species stoichiometry plus a rate constant.
#[derive(Debug, Clone, PartialEq)]
pub struct Reaction {
    reactants: Vec<u32>,
    products: Vec<u32>,
    rate: f64,
}

impl Reaction {
    /// Builds a reaction, rejecting non-bimolecular stoichiometry, a missing
    /// net change, and negative rates.
    pub fn new(reactants: Vec<u32>, products: Vec<u32>, rate: f64) -> Result<Self, CrnError> {
        if reactants.len() != products.len() {
            return Err(CrnError::StoichiometryLength {
                expected: reactants.len(),
                got: products.len(),
            });
        }
        let r_total: u32 = reactants.iter().sum();
        let p_total: u32 = products.iter().sum();
        if r_total != 2 || p_total != 2 {
            return Err(CrnError::NotBimolecular {
                reactants: r_total,
                products: p_total,
            });
        }
        if reactants == products {
            return Err(CrnError::NoNetChange);
        }
        if rate.is_nan() || rate < 0.0 {
            return Err(CrnError::NegativeRate(rate));
        }
        Ok(Self {
            reactants,
            products,
            rate,
        })
    }

    pub fn reactants(&self) -> &[u32] {
        &self.reactants
    }

    pub fn products(&self) -> &[u32] {
        &self.products
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// Net change per species when this reaction fires once.
    pub fn delta(&self, species: usize) -> i64 {
        self.products[species] as i64 - self.reactants[species] as i64
    }

    /// Number of distinct reactant combinations in `state`: `x (x - 1) / 2`
    /// for a doubled reactant, `x * x'` for two distinct reactants. The
    /// propensity is the rate constant times this count.
    pub fn combinations(&self, state: &SysState) -> f64 {
        let mut doubled = None;
        let mut pair = Vec::with_capacity(2);
        for (s, &c) in self.reactants.iter().enumerate() {
            match c {
                2 => doubled = Some(s),
                1 => pair.push(s),
                _ => {}
            }
        }
        match doubled {
            Some(s) => {
                let x = state.count(s) as f64;
                x * (x - 1.0) / 2.0
            }
            None => state.count(pair[0]) as f64 * state.count(pair[1]) as f64,
        }
    }

    /// Sort key used to canonicalize reaction order within a network.
    pub fn stoichiometry_key(&self) -> (Vec<u32>, Vec<u32>) {
        (self.reactants.clone(), self.products.clone())
    }
}

/// Molecule counts per species. Values are immutable after construction and
/// hashable, so states can index maps and sets directly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SysState(Vec<u64>);

impl SysState {
    pub fn new(counts: Vec<u64>) -> Self {
        Self(counts)
    }

    pub fn counts(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, species: usize) -> u64 {
        self.0[species]
    }

    /// Total molecule count; conserved by every bimolecular reaction.
    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl fmt::Display for SysState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A bimolecular chemical reaction network with labelled input and output species.
#[derive(Debug, Clone, PartialEq)]
pub struct Crn {
    species: Vec<SpeciesId>,
    reactions: Vec<Reaction>,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
}

impl Crn {
    /// Builds and validates a network. Species names must be unique, reactions
    /// pairwise distinct, every input consumed and every output produced by at
    /// least one reaction.
    pub fn new(
        species_names: Vec<String>,
        reactions: Vec<Reaction>,
        inputs: Vec<usize>,
        outputs: Vec<usize>,
    ) -> Result<Self, CrnError> {
        let species: Vec<SpeciesId> = species_names
            .into_iter()
            .enumerate()
            .map(|(index, name)| SpeciesId { index, name })
            .collect();
        for (i, s) in species.iter().enumerate() {
            if species[..i].iter().any(|t| t.name == s.name) {
                return Err(CrnError::DuplicateSpecies(s.name.clone()));
            }
        }
        if reactions.is_empty() {
            return Err(CrnError::NoReactions);
        }
        for r in &reactions {
            if r.reactants.len() != species.len() {
                return Err(CrnError::StoichiometryLength {
                    expected: species.len(),
                    got: r.reactants.len(),
                });
            }
        }
        for i in 0..reactions.len() {
            for j in i + 1..reactions.len() {
                if reactions[i].reactants == reactions[j].reactants
                    && reactions[i].products == reactions[j].products
                {
                    return Err(CrnError::DuplicateReaction(i, j));
                }
            }
        }
        for &s in &inputs {
            if !reactions.iter().any(|r| r.reactants[s] > 0) {
                return Err(CrnError::InputNotConsumed(species[s].name.clone()));
            }
        }
        for &s in &outputs {
            if !reactions.iter().any(|r| r.products[s] > 0) {
                return Err(CrnError::OutputNotProduced(species[s].name.clone()));
            }
        }
        Ok(Self {
            species,
            reactions,
            inputs,
            outputs,
        })
    }

    /// Network over the canonical species names A, B, X, Y.
    pub fn with_canonical_species(
        num_species: usize,
        reactions: Vec<Reaction>,
        inputs: Vec<usize>,
        outputs: Vec<usize>,
    ) -> Result<Self, CrnError> {
        let names = CANONICAL_NAMES
            .iter()
            .take(num_species)
            .map(|s| s.to_string())
            .collect();
        Self::new(names, reactions, inputs, outputs)
    }

    pub fn species(&self) -> &[SpeciesId] {
        &self.species
    }

    pub fn num_species(&self) -> usize {
        self.species.len()
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn num_reactions(&self) -> usize {
        self.reactions.len()
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn species_index(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s.name == name)
    }

    /// Replaces all rate constants, keeping the structure.
    pub fn with_rates(&self, rates: &[f64]) -> Result<Self, CrnError> {
        if rates.len() != self.reactions.len() {
            return Err(CrnError::DimensionMismatch {
                expected: self.reactions.len(),
                got: rates.len(),
            });
        }
        let mut crn = self.clone();
        for (r, &k) in crn.reactions.iter_mut().zip(rates) {
            if k.is_nan() || k < 0.0 {
                return Err(CrnError::NegativeRate(k));
            }
            r.rate = k;
        }
        Ok(crn)
    }

    pub fn rates(&self) -> Vec<f64> {
        self.reactions.iter().map(|r| r.rate).collect()
    }

    /// Two networks are structurally equal when they have the same reaction
    /// multiset, ignoring rates and reaction order.
    pub fn same_structure(&self, other: &Crn) -> bool {
        if self.num_species() != other.num_species()
            || self.num_reactions() != other.num_reactions()
        {
            return false;
        }
        let mut a: Vec<_> = self.reactions.iter().map(|r| r.stoichiometry_key()).collect();
        let mut b: Vec<_> = other.reactions.iter().map(|r| r.stoichiometry_key()).collect();
        a.sort();
        b.sort();
        a == b
    }

    fn check_state(&self, state: &SysState) -> Result<(), CrnError> {
        if state.len() != self.num_species() {
            return Err(CrnError::DimensionMismatch {
                expected: self.num_species(),
                got: state.len(),
            });
        }
        Ok(())
    }

    fn check_reaction(&self, index: usize) -> Result<&Reaction, CrnError> {
        self.reactions.get(index).ok_or(CrnError::ReactionIndex {
            index,
            count: self.reactions.len(),
        })
    }

    /// True iff `state` has enough molecules of every reactant of reaction `index`.
    pub fn enabled(&self, index: usize, state: &SysState) -> Result<bool, CrnError> {
        self.check_state(state)?;
        let r = self.check_reaction(index)?;
        Ok(reaction_enabled(r, state))
    }

    /// Exponential-race rate of reaction `index` in `state`, at unit volume.
    ///
    /// For a doubled reactant the propensity is `k * x * (x - 1) / 2`; for two
    /// distinct reactants it is `k * x * x'`. Zero exactly when disabled.
    pub fn propensity(&self, index: usize, state: &SysState) -> Result<f64, CrnError> {
        self.check_state(state)?;
        let r = self.check_reaction(index)?;
        Ok(reaction_propensity(r, state))
    }

    /// Fires reaction `index` once: `x'_s = x_s - r_s + p_s`.
    pub fn fire(&self, index: usize, state: &SysState) -> Result<SysState, CrnError> {
        self.check_state(state)?;
        let r = self.check_reaction(index)?;
        if !reaction_enabled(r, state) {
            return Err(CrnError::NotEnabled {
                index,
                state: state.to_string(),
            });
        }
        Ok(apply_fire(r, state, 1))
    }

    /// True iff no reaction is enabled in `state`.
    pub fn is_terminal(&self, state: &SysState) -> Result<bool, CrnError> {
        self.check_state(state)?;
        Ok(self.reactions.iter().all(|r| !reaction_enabled(r, state)))
    }

    /// All states reachable by a single firing of any enabled reaction,
    /// deduplicated and sorted.
    pub fn successors(&self, state: &SysState) -> Result<Vec<SysState>, CrnError> {
        self.check_state(state)?;
        let mut out: Vec<SysState> = self
            .reactions
            .iter()
            .filter(|r| reaction_enabled(r, state))
            .map(|r| apply_fire(r, state, 1))
            .collect();
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// All stutter transitions from `state`: for each enabled reaction, every
    /// admissible multiplicity `n >= 1` (a species consumed on net limits `n`,
    /// and `n` never exceeds the conserved total), plus a self-loop with
    /// multiplicity 0 when the state is terminal.
    pub fn stutter_successors(&self, state: &SysState) -> Result<Vec<StutterStep>, CrnError> {
        self.check_state(state)?;
        let mut out = Vec::new();
        let total = state.total();
        for (index, r) in self.reactions.iter().enumerate() {
            if !reaction_enabled(r, state) {
                continue;
            }
            for n in 1..=total {
                if !multiplicity_admissible(r, state, n) {
                    break;
                }
                out.push(StutterStep {
                    state: apply_fire(r, state, n),
                    reaction: Some(index),
                    multiplicity: n,
                });
            }
        }
        if self.is_terminal(state)? {
            out.push(StutterStep {
                state: state.clone(),
                reaction: None,
                multiplicity: 0,
            });
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// One stutter transition: the reached state, the reaction fired (`None` for
/// the terminal self-loop), and how many times it fired.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StutterStep {
    pub state: SysState,
    pub reaction: Option<usize>,
    pub multiplicity: u64,
}

fn reaction_enabled(r: &Reaction, state: &SysState) -> bool {
    r.reactants
        .iter()
        .zip(state.counts())
        .all(|(&need, &have)| have >= need as u64)
}

fn reaction_propensity(r: &Reaction, state: &SysState) -> f64 {
    r.rate * r.combinations(state)
}

/// Checks `x_s >= n * (r_s - p_s)` for every species (the stutter consumption
/// bound); enabledness is checked separately.
fn multiplicity_admissible(r: &Reaction, state: &SysState, n: u64) -> bool {
    r.reactants
        .iter()
        .zip(&r.products)
        .zip(state.counts())
        .all(|((&rs, &ps), &x)| {
            let consumed = rs as i64 - ps as i64;
            consumed <= 0 || x as i64 >= n as i64 * consumed
        })
}

fn apply_fire(r: &Reaction, state: &SysState, n: u64) -> SysState {
    let counts = state
        .counts()
        .iter()
        .enumerate()
        .map(|(s, &x)| (x as i64 + n as i64 * r.delta(s)) as u64)
        .collect();
    SysState::new(counts)
}

impl fmt::Display for Crn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.reactions.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(
                f,
                "{} -> {} @ {}",
                side_to_string(&r.reactants, &self.species),
                side_to_string(&r.products, &self.species),
                r.rate
            )?;
        }
        Ok(())
    }
}

fn side_to_string(stoich: &[u32], species: &[SpeciesId]) -> String {
    let mut parts = Vec::new();
    for (s, &c) in stoich.iter().enumerate() {
        match c {
            0 => {}
            1 => parts.push(species[s].name.clone()),
            _ => parts.push(format!("{}{}", c, species[s].name)),
        }
    }
    parts.join(" + ")
}

/// Wire format for CRN JSON files.
///
/// `{"species": [names], "reactions": [{"reactants": {name: count},
/// "products": {name: count}, "rate": r}], "inputs": [names], "outputs": [names]}`
/// with `rate` defaulting to 1.0 when omitted.
#[derive(Debug, Serialize, Deserialize)]
pub struct CrnFile {
    pub species: Vec<String>,
    pub reactions: Vec<ReactionFile>,
    #[serde(default)]
    pub inputs: Vec<String>,
    #[serde(default)]
    pub outputs: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ReactionFile {
    pub reactants: BTreeMap<String, u32>,
    pub products: BTreeMap<String, u32>,
    #[serde(default = "default_rate", skip_serializing_if = "is_default_rate")]
    pub rate: f64,
}

fn default_rate() -> f64 {
    1.0
}

fn is_default_rate(r: &f64) -> bool {
    *r == 1.0
}

impl CrnFile {
    pub fn from_crn(crn: &Crn) -> Self {
        let name = |s: usize| crn.species()[s].name.clone();
        let side = |stoich: &[u32]| {
            stoich
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(s, &c)| (name(s), c))
                .collect()
        };
        Self {
            species: crn.species().iter().map(|s| s.name.clone()).collect(),
            reactions: crn
                .reactions()
                .iter()
                .map(|r| ReactionFile {
                    reactants: side(r.reactants()),
                    products: side(r.products()),
                    rate: r.rate(),
                })
                .collect(),
            inputs: crn.inputs().iter().map(|&s| name(s)).collect(),
            outputs: crn.outputs().iter().map(|&s| name(s)).collect(),
        }
    }

    pub fn into_crn(self) -> Result<Crn, CrnError> {
        let index = |name: &str| -> Result<usize, CrnError> {
            self.species
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| CrnError::UnknownSpecies(name.to_string()))
        };
        let mut reactions = Vec::new();
        for r in &self.reactions {
            let mut reactants = vec![0u32; self.species.len()];
            for (name, &c) in &r.reactants {
                reactants[index(name)?] += c;
            }
            let mut products = vec![0u32; self.species.len()];
            for (name, &c) in &r.products {
                products[index(name)?] += c;
            }
            reactions.push(Reaction::new(reactants, products, r.rate)?);
        }
        let inputs = self
            .inputs
            .iter()
            .map(|n| index(n))
            .collect::<Result<_, _>>()?;
        let outputs = self
            .outputs
            .iter()
            .map(|n| index(n))
            .collect::<Result<_, _>>()?;
        Crn::new(self.species, reactions, inputs, outputs)
    }
}

/// Parses CRNs from JSON text: a single object, an array, or a synthesis
/// output file carrying a `solutions` array.
pub fn crns_from_json(text: &str) -> Result<Vec<Crn>, String> {
    #[derive(Deserialize)]
    struct Wrapper {
        solutions: Vec<CrnFile>,
    }
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum AnyShape {
        One(CrnFile),
        Many(Vec<CrnFile>),
        Wrapped(Wrapper),
    }
    let parsed: AnyShape = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let files = match parsed {
        AnyShape::One(f) => vec![f],
        AnyShape::Many(fs) => fs,
        AnyShape::Wrapped(w) => w.solutions,
    };
    files
        .into_iter()
        .map(|f| f.into_crn().map_err(|e| e.to_string()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn dc() -> Crn {
        catalog::direct_competition_unit()
    }

    fn state(counts: &[u64]) -> SysState {
        SysState::new(counts.to_vec())
    }

    #[test]
    fn propensity_doubled_reactant() {
        // 2A -> 2B with k = 1 at x = (A:3): 1 * 3 * 2 / 2 = 3.
        let crn = Crn::new(
            vec!["A".into(), "B".into()],
            vec![Reaction::new(vec![2, 0], vec![0, 2], 1.0).unwrap()],
            vec![0],
            vec![1],
        )
        .unwrap();
        assert_eq!(crn.propensity(0, &state(&[3, 0])).unwrap(), 3.0);
    }

    #[test]
    fn propensity_zero_when_disabled() {
        // A + B -> 2B with no A present.
        let crn = Crn::new(
            vec!["A".into(), "B".into()],
            vec![Reaction::new(vec![1, 1], vec![0, 2], 1.0).unwrap()],
            vec![0],
            vec![1],
        )
        .unwrap();
        assert_eq!(crn.propensity(0, &state(&[0, 5])).unwrap(), 0.0);
    }

    #[test]
    fn propensity_distinct_reactants() {
        // A + B -> 2A with k = 82.9 at (A:2, B:1): 82.9 * 2 * 1.
        let crn = Crn::new(
            vec!["A".into(), "B".into()],
            vec![Reaction::new(vec![1, 1], vec![2, 0], 82.9).unwrap()],
            vec![0, 1],
            vec![0],
        )
        .unwrap();
        let p = crn.propensity(0, &state(&[2, 1])).unwrap();
        assert!((p - 165.8).abs() < 1e-12);
    }

    #[test]
    fn enabled_boundary() {
        let crn = Crn::new(
            vec!["A".into(), "B".into()],
            vec![Reaction::new(vec![2, 0], vec![0, 2], 1.0).unwrap()],
            vec![0],
            vec![1],
        )
        .unwrap();
        assert!(!crn.enabled(0, &state(&[1, 0])).unwrap());
        assert!(crn.enabled(0, &state(&[2, 0])).unwrap());
    }

    #[test]
    fn fire_updates_componentwise() {
        let crn = dc();
        // A + B -> 2B from (2,1).
        assert_eq!(crn.fire(0, &state(&[2, 1])).unwrap(), state(&[1, 2]));
        // A + B -> 2A from (1,1).
        assert_eq!(crn.fire(1, &state(&[1, 1])).unwrap(), state(&[2, 0]));
    }

    #[test]
    fn fire_three_species_majority() {
        // A + X -> 2A from (1, 0, 1).
        let crn = catalog::tri_majority_unit();
        assert_eq!(crn.fire(1, &state(&[1, 0, 1])).unwrap(), state(&[2, 0, 0]));
    }

    #[test]
    fn fire_disabled_is_error() {
        let crn = dc();
        assert!(matches!(
            crn.fire(0, &state(&[3, 0])),
            Err(CrnError::NotEnabled { .. })
        ));
    }

    #[test]
    fn terminal_states() {
        let crn = dc();
        assert!(crn.is_terminal(&state(&[3, 0])).unwrap());
        assert!(!crn.is_terminal(&state(&[1, 1])).unwrap());
        let am = catalog::tri_majority_unit();
        assert!(am.is_terminal(&state(&[0, 0, 2])).unwrap());
    }

    #[test]
    fn successor_sets() {
        let crn = dc();
        assert_eq!(
            crn.successors(&state(&[2, 1])).unwrap(),
            vec![state(&[1, 2]), state(&[3, 0])]
        );
        assert!(crn.successors(&state(&[3, 0])).unwrap().is_empty());
        let am = catalog::tri_majority_unit();
        assert_eq!(
            am.successors(&state(&[1, 1, 0])).unwrap(),
            vec![state(&[0, 0, 2])]
        );
    }

    #[test]
    fn stutter_multiplicities() {
        let crn = dc();
        let steps = crn.stutter_successors(&state(&[2, 1])).unwrap();
        // Reaction 0 (A+B -> 2B) admits n in {1,2}; reaction 1 (A+B -> 2A) only n=1.
        let via_r0: Vec<_> = steps.iter().filter(|s| s.reaction == Some(0)).collect();
        assert_eq!(via_r0.len(), 2);
        assert!(via_r0
            .iter()
            .any(|s| s.multiplicity == 1 && s.state == state(&[1, 2])));
        assert!(via_r0
            .iter()
            .any(|s| s.multiplicity == 2 && s.state == state(&[0, 3])));
    }

    #[test]
    fn stutter_terminal_self_loop() {
        let crn = dc();
        let steps = crn.stutter_successors(&state(&[3, 0])).unwrap();
        assert_eq!(
            steps,
            vec![StutterStep {
                state: state(&[3, 0]),
                reaction: None,
                multiplicity: 0
            }]
        );
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let crn = dc();
        assert!(matches!(
            crn.propensity(0, &state(&[1, 1, 1])),
            Err(CrnError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn trimolecular_rejected() {
        assert!(matches!(
            Reaction::new(vec![3, 0], vec![0, 2], 1.0),
            Err(CrnError::NotBimolecular { .. })
        ));
        assert!(matches!(
            Reaction::new(vec![1, 1], vec![1, 2], 1.0),
            Err(CrnError::NotBimolecular { .. })
        ));
    }

    #[test]
    fn identity_reaction_rejected() {
        assert!(matches!(
            Reaction::new(vec![1, 1], vec![1, 1], 1.0),
            Err(CrnError::NoNetChange)
        ));
    }

    #[test]
    fn duplicate_reactions_rejected() {
        let r = || Reaction::new(vec![1, 1], vec![0, 2], 1.0).unwrap();
        assert!(matches!(
            Crn::new(vec!["A".into(), "B".into()], vec![r(), r()], vec![0], vec![1]),
            Err(CrnError::DuplicateReaction(0, 1))
        ));
    }

    #[test]
    fn unconsumed_input_rejected() {
        let r = Reaction::new(vec![2, 0], vec![0, 2], 1.0).unwrap();
        assert!(matches!(
            Crn::new(vec!["A".into(), "B".into()], vec![r], vec![0, 1], vec![1]),
            Err(CrnError::InputNotConsumed(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let crn = catalog::tri_majority();
        let json = serde_json::to_string(&CrnFile::from_crn(&crn)).unwrap();
        let back = crns_from_json(&json).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0], crn);
    }

    #[test]
    fn json_rate_defaults_to_one() {
        let text = r#"{
            "species": ["A", "B"],
            "reactions": [
                {"reactants": {"A": 1, "B": 1}, "products": {"B": 2}},
                {"reactants": {"A": 1, "B": 1}, "products": {"A": 2}}
            ],
            "inputs": ["A", "B"],
            "outputs": ["A", "B"]
        }"#;
        let crns = crns_from_json(text).unwrap();
        assert_eq!(crns[0].rates(), vec![1.0, 1.0]);
    }
}

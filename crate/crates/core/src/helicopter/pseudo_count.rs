use super::env::{HeliAction, HeliState, N_HELI_ACTIONS};
use super::targets::{PseudoCounter, Sample};

/// `sum_i [a_i = a] max(0, 1 - d(x, x_i))` over the dataset pairs.
pub fn pseudo_count(state: &HeliState, action: HeliAction, dataset: &[Sample<HeliState>]) -> f64 {
    dataset
        .iter()
        .filter(|s| s.action == action.index())
        .map(|s| (1.0 - state.distance(&s.state)).max(0.0))
        .sum()
}

/// Euclidean-kernel pseudo-counts with the dataset states grouped by action.
#[derive(Debug, Clone, Default)]
pub struct EuclideanPseudoCounter {
    by_action: Vec<Vec<HeliState>>,
}

impl EuclideanPseudoCounter {
    pub fn new(dataset: &[Sample<HeliState>]) -> Self {
        let mut by_action = vec![Vec::new(); N_HELI_ACTIONS];
        for s in dataset {
            by_action[s.action].push(s.state);
        }
        Self { by_action }
    }

    pub fn push(&mut self, state: HeliState, action: HeliAction) {
        if self.by_action.is_empty() {
            self.by_action = vec![Vec::new(); N_HELI_ACTIONS];
        }
        self.by_action[action.index()].push(state);
    }

    pub fn count(&self, state: &HeliState, action: HeliAction) -> f64 {
        self.by_action
            .get(action.index())
            .map(|states| {
                states
                    .iter()
                    .map(|x| (1.0 - state.distance(x)).max(0.0))
                    .sum()
            })
            .unwrap_or(0.0)
    }
}

impl PseudoCounter<HeliState> for EuclideanPseudoCounter {
    fn pseudo_count(&self, state: &HeliState, action: usize) -> f64 {
        match HeliAction::from_index(action) {
            Ok(a) => self.count(state, a),
            Err(_) => 0.0,
        }
    }
}

//! Constructive search for joints violating the observability-conditioned
//! Wigner–d'Espagnat inequality on three propositions.

use super::{strengthened_we_slack, tfu_state, TfuJoint, TfuState, WeTerms};
use crate::grid::Compositions;
use crate::prob::PropositionId;
use crate::sim::rng::CounterRng;

const N: usize = 3;
const CELLS: usize = 27;

/// Which joint states the search may put mass on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchSupport {
    #[default]
    Full,
    /// Only the eight states without any `U`.
    UFree,
}

impl SearchSupport {
    fn cells(self) -> Vec<usize> {
        (0..CELLS)
            .filter(|&i| match self {
                SearchSupport::Full => true,
                SearchSupport::UFree => (0..N).all(|k| tfu_state(i, N, k) != TfuState::U),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessSource {
    /// Position of the joint in canonical grid order.
    Grid {
        rank: u64,
    },
    Climb {
        restart: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub joint: TfuJoint,
    pub terms: WeTerms,
    pub source: WitnessSource,
}

/// Grid scan over rational joints with denominator `resolution`, followed by
/// random-restart hill climbing when the grid finds nothing.
#[derive(Debug, Clone)]
pub struct ViolationSearch {
    pub resolution: u32,
    pub support: SearchSupport,
    pub restarts: usize,
    pub steps: usize,
    pub seed: u64,
    /// A joint counts as violating when its slack is below `-threshold`.
    pub threshold: f64,
}

impl Default for ViolationSearch {
    fn default() -> Self {
        Self {
            resolution: 5,
            support: SearchSupport::Full,
            restarts: 16,
            steps: 2000,
            seed: 0,
            threshold: 1e-9,
        }
    }
}

/// Searches with default settings at the given grid resolution.
pub fn search_we_violation(grid_resolution: u32) -> Option<Witness> {
    ViolationSearch {
        resolution: grid_resolution,
        ..Default::default()
    }
    .run()
}

fn slack_of(weights: &[f64]) -> Option<WeTerms> {
    let joint = TfuJoint {
        n: N,
        weights: weights.to_vec(),
    };
    strengthened_we_slack(&joint, PropositionId(0), PropositionId(1), PropositionId(2)).ok()
}

impl ViolationSearch {
    pub fn run(&self) -> Option<Witness> {
        assert!(self.resolution >= 2, "grid resolution must be at least 2");
        self.scan_grid().or_else(|| self.climb())
    }

    /// First violating grid joint in canonical order.
    pub fn scan_grid(&self) -> Option<Witness> {
        let cells = self.support.cells();
        let scale = self.resolution as f64;
        let mut weights = [0.0; CELLS];
        Compositions::new(self.resolution, cells.len())
            .enumerate()
            .find_map(|(rank, units)| {
                for (&cell, &u) in cells.iter().zip(&units) {
                    weights[cell] = u as f64 / scale;
                }
                let terms = slack_of(&weights)?;
                (terms.slack() < -self.threshold).then(|| Witness {
                    joint: TfuJoint {
                        n: N,
                        weights: weights.to_vec(),
                    },
                    terms,
                    source: WitnessSource::Grid { rank: rank as u64 },
                })
            })
    }

    /// Moves mass between support cells, keeping any step that lowers the
    /// slack. Restarts from fresh random points; the step size shrinks when
    /// progress stalls.
    pub fn climb(&self) -> Option<Witness> {
        let cells = self.support.cells();
        let mut rng = CounterRng::new(self.seed, 0x5EA4C4);
        for restart in 0..self.restarts {
            let mut weights = [0.0; CELLS];
            let raw: Vec<f64> = cells
                .iter()
                .map(|_| -rng.next_f64().max(1e-300).ln())
                .collect();
            let total: f64 = raw.iter().sum();
            for (&cell, r) in cells.iter().zip(&raw) {
                weights[cell] = r / total;
            }
            let Some(mut best) = slack_of(&weights) else {
                continue;
            };
            let mut step = 0.1;
            let mut stalls = 0;
            for _ in 0..self.steps {
                let from = cells[rng.below(cells.len())];
                let to = cells[rng.below(cells.len())];
                let moved = (step * rng.next_f64()).min(weights[from]);
                if from == to || moved <= 0.0 {
                    continue;
                }
                weights[from] -= moved;
                weights[to] += moved;
                match slack_of(&weights) {
                    Some(t) if t.slack() < best.slack() => {
                        best = t;
                        stalls = 0;
                    }
                    _ => {
                        weights[from] += moved;
                        weights[to] -= moved;
                        stalls += 1;
                        if stalls > 50 {
                            step *= 0.5;
                            stalls = 0;
                        }
                    }
                }
            }
            if best.slack() < -self.threshold {
                let total: f64 = weights.iter().sum();
                let weights: Vec<f64> = weights.iter().map(|w| w / total).collect();
                let terms = slack_of(&weights)?;
                return Some(Witness {
                    joint: TfuJoint { n: N, weights },
                    terms,
                    source: WitnessSource::Climb { restart },
                });
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_finds_a_violation_at_resolution_five() {
        let w = search_we_violation(5).expect("violating joint");
        assert!(w.terms.slack() < -1e-9);
        assert!(matches!(w.source, WitnessSource::Grid { .. }));
        assert!(w.joint.u_mass() > 0.0);
    }

    #[test]
    fn u_free_support_yields_nothing() {
        for resolution in [2, 4] {
            let search = ViolationSearch {
                resolution,
                support: SearchSupport::UFree,
                restarts: 4,
                steps: 500,
                ..Default::default()
            };
            assert!(search.run().is_none(), "resolution {resolution}");
        }
    }

    #[test]
    fn climb_alone_finds_a_violation() {
        let search = ViolationSearch::default();
        let w = search.climb().expect("hill climbing finds a witness");
        assert!(w.terms.slack() < -1e-9);
        let recomputed = strengthened_we_slack(&w.joint, 0.into(), 1.into(), 2.into()).unwrap();
        assert_eq!(recomputed, w.terms);
    }

    #[test]
    fn search_is_deterministic() {
        assert_eq!(search_we_violation(3), search_we_violation(3));
        let a = ViolationSearch::default().climb();
        let b = ViolationSearch::default().climb();
        assert_eq!(a, b);
    }
}

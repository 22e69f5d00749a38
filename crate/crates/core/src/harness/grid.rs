//! Seeded experiment grid: (policy, human choice, replication) cells run as
//! independent trials, optionally in parallel, with per-cell seeds derived
//! from a stable hash so reruns reproduce every trial bit for bit.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::engine::{run_trial, TrialResult};
use crate::error::Error;
use crate::harness::config::Config;
use crate::layer::DesirabilityPolicy;
use crate::world::{AgentId, ButtonId, TrialSetup};

/// How the human's button is chosen for a cell, relative to the correct one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HumanChoice {
    Correct,
    Incorrect,
    Random,
}

impl HumanChoice {
    pub fn label(self) -> &'static str {
        match self {
            HumanChoice::Correct => "correct",
            HumanChoice::Incorrect => "incorrect",
            HumanChoice::Random => "random",
        }
    }

    /// Resolves to a concrete button; `Random` draws from the trial seed.
    pub fn resolve(self, correct_button: ButtonId, seed: u64) -> ButtonId {
        match self {
            HumanChoice::Correct => correct_button,
            HumanChoice::Incorrect => correct_button.other(),
            HumanChoice::Random => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                if rng.gen::<bool>() {
                    ButtonId::L
                } else {
                    ButtonId::R
                }
            }
        }
    }
}

impl std::fmt::Display for HumanChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for HumanChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "correct" => Ok(HumanChoice::Correct),
            "incorrect" => Ok(HumanChoice::Incorrect),
            "random" => Ok(HumanChoice::Random),
            other => Err(Error::Config(format!("unknown human choice {other:?}"))),
        }
    }
}

/// The cells to run: every policy crossed with every choice, replicated.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentGrid {
    pub policies: Vec<DesirabilityPolicy>,
    pub human_choices: Vec<HumanChoice>,
    pub replications: u32,
    pub base_seed: u64,
}

impl Default for ExperimentGrid {
    fn default() -> Self {
        ExperimentGrid {
            policies: DesirabilityPolicy::ALL.to_vec(),
            human_choices: vec![HumanChoice::Correct, HumanChoice::Incorrect],
            replications: 3,
            base_seed: 0,
        }
    }
}

impl ExperimentGrid {
    pub fn validate(&self) -> Result<(), Error> {
        if self.policies.is_empty() || self.human_choices.is_empty() {
            return Err(Error::Config("grid needs at least one policy and one choice".into()));
        }
        if self.replications == 0 {
            return Err(Error::Config("replications must be at least 1".into()));
        }
        Ok(())
    }
}

/// One scheduled trial of a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridCell {
    pub policy: DesirabilityPolicy,
    pub human_choice: HumanChoice,
    pub replication: u32,
    pub seed: u64,
}

impl GridCell {
    /// Stable identifier used in file names and trace rows, e.g.
    /// `ethical-incorrect-r0`.
    pub fn trial_id(&self) -> String {
        format!(
            "{}-{}-r{}",
            self.policy.label(),
            self.human_choice.label(),
            self.replication
        )
    }

    /// Cell identifier without the replication, e.g. `ethical-incorrect`.
    pub fn cell_id(&self) -> String {
        format!("{}-{}", self.policy.label(), self.human_choice.label())
    }
}

/// Per-trial outcome line for the grid summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryRow {
    pub policy: DesirabilityPolicy,
    pub human_choice: HumanChoice,
    pub replication: u32,
    pub human_final_button: Option<ButtonId>,
    pub assistant_final_button: Option<ButtonId>,
    pub human_score: i32,
    pub assistant_score: i32,
    pub duration_s: f64,
}

/// FNV-1a over the cell identity; stable across runs, platforms, and
/// compiler versions, unlike the std hasher.
fn fnv1a(bytes: impl IntoIterator<Item = u8>) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in bytes {
        hash ^= byte as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Seed for replication `replication` of a cell: the base seed plus a
/// stable hash of the cell identity.
pub fn cell_seed(
    base_seed: u64,
    policy: DesirabilityPolicy,
    choice: HumanChoice,
    replication: u32,
) -> u64 {
    let identity = policy
        .label()
        .bytes()
        .chain([b'/'])
        .chain(choice.label().bytes())
        .chain([b'/'])
        .chain(replication.to_le_bytes());
    base_seed.wrapping_add(fnv1a(identity))
}

/// Enumerates the grid's trials in deterministic order: policies, then
/// choices, then replications.
pub fn enumerate_cells(grid: &ExperimentGrid) -> Vec<GridCell> {
    let mut cells = Vec::new();
    for &policy in &grid.policies {
        for &human_choice in &grid.human_choices {
            for replication in 0..grid.replications {
                cells.push(GridCell {
                    policy,
                    human_choice,
                    replication,
                    seed: cell_seed(grid.base_seed, policy, human_choice, replication),
                });
            }
        }
    }
    cells
}

/// Runs one cell of the grid.
pub fn run_cell(cell: &GridCell, config: &Config) -> Result<(TrialResult, SummaryRow), Error> {
    let setup = TrialSetup {
        correct_button: config.correct_button,
        human_choice: cell.human_choice.resolve(config.correct_button, cell.seed),
        policy: cell.policy,
        seed: cell.seed,
    };
    let result = run_trial(&config.arena, &setup, &config.sim).map_err(|source| {
        Error::GridCell {
            cell: cell.trial_id(),
            source: Box::new(source),
        }
    })?;
    let row = SummaryRow {
        policy: cell.policy,
        human_choice: cell.human_choice,
        replication: cell.replication,
        human_final_button: result.press_by(AgentId::Human).map(|p| p.button),
        assistant_final_button: result.press_by(AgentId::Assistant).map(|p| p.button),
        human_score: result.ledger.human,
        assistant_score: result.ledger.assistant,
        duration_s: result.duration_s(&config.sim),
    };
    Ok((result, row))
}

/// Runs every cell of the grid, in parallel across trials. Results come
/// back in enumeration order regardless of how they were scheduled.
pub fn run_grid(
    grid: &ExperimentGrid,
    config: &Config,
) -> Result<Vec<(GridCell, TrialResult, SummaryRow)>, Error> {
    grid.validate()?;
    config.validate()?;
    enumerate_cells(grid)
        .into_par_iter()
        .map(|cell| run_cell(&cell, config).map(|(result, row)| (cell, result, row)))
        .collect()
}

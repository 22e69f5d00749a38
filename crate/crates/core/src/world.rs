//! The arena, response buttons, trial parameters, agent states, and reward
//! accounting for the two-button shell game.
//!
//! The coordinate frame puts the origin at the arena center, x to the right
//! and y up, so a 3 by 2.5 m arena spans x in [-1.5, 1.5] and
//! y in [-1.25, 1.25].

use crate::error::Error;
use crate::geometry::Vec2;
use crate::layer::DesirabilityPolicy;

/// One of the two response buttons on the arena floor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ButtonId {
    #[default]
    L,
    R,
}

impl ButtonId {
    pub fn other(self) -> ButtonId {
        match self {
            ButtonId::L => ButtonId::R,
            ButtonId::R => ButtonId::L,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ButtonId::L => "L",
            ButtonId::R => "R",
        }
    }
}

impl std::fmt::Display for ButtonId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for ButtonId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "L" | "l" => Ok(ButtonId::L),
            "R" | "r" => Ok(ButtonId::R),
            other => Err(Error::Config(format!("unknown button {other:?}"))),
        }
    }
}

/// The two roles in a trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AgentId {
    Human,
    Assistant,
}

/// Arena geometry and fixed trial furniture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArenaSpec {
    /// Extent along x, meters.
    pub width: f64,
    /// Extent along y, meters.
    pub height: f64,
    pub button_l: Vec2,
    pub button_r: Vec2,
    /// An agent within this distance of a button presses it.
    pub press_radius: f64,
    pub human_start: Vec2,
    pub assistant_start: Vec2,
}

impl Default for ArenaSpec {
    fn default() -> Self {
        ArenaSpec {
            width: 3.0,
            height: 2.5,
            button_l: Vec2::new(-0.5, 0.6),
            button_r: Vec2::new(0.5, 0.6),
            press_radius: 0.1,
            human_start: Vec2::new(0.0, -0.8),
            assistant_start: Vec2::new(0.0, 0.9),
        }
    }
}

impl ArenaSpec {
    pub fn button_pos(&self, id: ButtonId) -> Vec2 {
        match id {
            ButtonId::L => self.button_l,
            ButtonId::R => self.button_r,
        }
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.x.abs() <= self.width / 2.0 && p.y.abs() <= self.height / 2.0
    }

    /// Checks the structural invariants: all positions inside the rectangle,
    /// buttons distinct and separated by more than twice the press radius.
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.width > 0.0 && self.height > 0.0) {
            return Err(Error::Config("arena dimensions must be positive".into()));
        }
        if !(self.press_radius > 0.0) {
            return Err(Error::Config("press_radius must be positive".into()));
        }
        for (name, p) in [
            ("button L", self.button_l),
            ("button R", self.button_r),
            ("human start", self.human_start),
            ("assistant start", self.assistant_start),
        ] {
            if !p.is_finite() || !self.contains(p) {
                return Err(Error::Config(format!(
                    "{name} at ({}, {}) lies outside the arena",
                    p.x, p.y
                )));
            }
        }
        let sep = self.button_l.distance(self.button_r);
        if sep <= 2.0 * self.press_radius {
            return Err(Error::Config(format!(
                "buttons {sep} m apart must be separated by more than twice \
                 the press radius {}",
                self.press_radius
            )));
        }
        Ok(())
    }
}

/// Per-trial parameters: which button pays out, what the human picked, how
/// the assistant combines desirabilities, and the seed the harness used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialSetup {
    pub correct_button: ButtonId,
    pub human_choice: ButtonId,
    pub policy: DesirabilityPolicy,
    pub seed: u64,
}

/// Kinematic and intent state of one agent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentState {
    pub id: AgentId,
    pub position: Vec2,
    /// Estimated velocity in m/s, derived from recent positions.
    pub velocity_estimate: Vec2,
    pub goal: Option<ButtonId>,
    /// Always `None` for the human; the assistant points by standing still
    /// and raising its arms toward a button.
    pub pointing_at: Option<ButtonId>,
    /// Walking speed, m/s.
    pub speed: f64,
    /// True when the avoidance gate blocked the last motion step.
    pub halted: bool,
}

/// Complete per-tick world value: both agents plus press bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorldState {
    pub human: AgentState,
    pub assistant: AgentState,
    /// Button each agent has pressed this trial, if any. Each agent presses
    /// at most once.
    pub human_pressed: Option<ButtonId>,
    pub assistant_pressed: Option<ButtonId>,
}

impl WorldState {
    pub fn agent(&self, id: AgentId) -> &AgentState {
        match id {
            AgentId::Human => &self.human,
            AgentId::Assistant => &self.assistant,
        }
    }

    pub fn pressed(&self, id: AgentId) -> Option<ButtonId> {
        match id {
            AgentId::Human => self.human_pressed,
            AgentId::Assistant => self.assistant_pressed,
        }
    }
}

/// Integer score per agent; each press changes exactly one score by one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RewardLedger {
    pub human: i32,
    pub assistant: i32,
}

/// Builds the world at trial start: the human at her start position with the
/// chosen button as goal, the assistant without a goal and not pointing.
///
/// The human is about to walk, so her velocity estimate is seeded toward her
/// chosen button at walking speed; the first layer evaluation thereby sees
/// the motion she is beginning rather than a spurious standstill.
pub fn initial_world(arena: &ArenaSpec, setup: &TrialSetup, speed: f64) -> Result<WorldState, Error> {
    arena.validate()?;
    if !(speed >= 0.0) {
        return Err(Error::Config(format!("agent speed {speed} must be >= 0")));
    }
    let toward_choice = arena.button_pos(setup.human_choice) - arena.human_start;
    let dist = toward_choice.norm();
    let human_velocity = if dist > 0.0 {
        toward_choice * (speed / dist)
    } else {
        Vec2::ZERO
    };
    Ok(WorldState {
        human: AgentState {
            id: AgentId::Human,
            position: arena.human_start,
            velocity_estimate: human_velocity,
            goal: Some(setup.human_choice),
            pointing_at: None,
            speed,
            halted: false,
        },
        assistant: AgentState {
            id: AgentId::Assistant,
            position: arena.assistant_start,
            velocity_estimate: Vec2::ZERO,
            goal: None,
            pointing_at: None,
            speed,
            halted: false,
        },
        human_pressed: None,
        assistant_pressed: None,
    })
}

/// First agent standing on a button it has not pressed yet, human first on
/// ties. Standing on a button means distance <= press_radius.
pub fn detect_press(world: &WorldState, arena: &ArenaSpec) -> Option<(AgentId, ButtonId)> {
    for id in [AgentId::Human, AgentId::Assistant] {
        if world.pressed(id).is_some() {
            continue;
        }
        let pos = world.agent(id).position;
        for button in [ButtonId::L, ButtonId::R] {
            if pos.distance(arena.button_pos(button)) <= arena.press_radius {
                return Some((id, button));
            }
        }
    }
    None
}

/// Scores one press: +1 to the presser on the correct button, -1 otherwise.
pub fn score_press(
    setup: &TrialSetup,
    press: (AgentId, ButtonId),
    ledger: RewardLedger,
) -> RewardLedger {
    let (agent, button) = press;
    let delta = if button == setup.correct_button { 1 } else { -1 };
    let mut next = ledger;
    match agent {
        AgentId::Human => next.human += delta,
        AgentId::Assistant => next.assistant += delta,
    }
    next
}

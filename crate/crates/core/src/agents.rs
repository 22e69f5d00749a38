//! Per-tick motion of the human proxy and the assistant: pointing
//! compliance, goal-directed stepping, and the mutual avoidance gate.

use crate::error::Error;
use crate::geometry::{advance_toward, Vec2};
use crate::layer::BehaviouralAlternative;
use crate::world::{AgentState, ArenaSpec, WorldState};

/// Obstacle-avoidance threshold shared by both controllers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AvoidanceRule {
    /// Minimum separation in meters; a step that would come closer is
    /// refused and the agent holds position.
    pub threshold: f64,
}

impl Default for AvoidanceRule {
    fn default() -> Self {
        AvoidanceRule { threshold: 0.5 }
    }
}

/// Finite-difference velocity over a window of recent positions:
/// `(latest - oldest) / ((n - 1) * dt)`. Magnitudes below 0.01 m/s are
/// reported as zero so standstill jitter does not produce a heading.
pub fn estimate_velocity(history: &[Vec2], dt: f64) -> Result<Vec2, Error> {
    if history.len() < 2 {
        return Err(Error::InsufficientHistory(history.len()));
    }
    let oldest = history[0];
    let latest = history[history.len() - 1];
    let elapsed = (history.len() - 1) as f64 * dt;
    let v = (latest - oldest) * (1.0 / elapsed);
    if v.norm() < 0.01 {
        Ok(Vec2::ZERO)
    } else {
        Ok(v)
    }
}

/// Admits `proposed_next` if it keeps at least `threshold` distance from the
/// other agent, else holds at `self_pos`. The boundary is inclusive: exactly
/// `threshold` away is allowed.
pub fn avoidance_gate(
    self_pos: Vec2,
    other_pos: Vec2,
    proposed_next: Vec2,
    rule: &AvoidanceRule,
) -> Vec2 {
    if proposed_next.distance(other_pos) >= rule.threshold {
        proposed_next
    } else {
        self_pos
    }
}

/// One motion tick for the human proxy.
///
/// If the assistant is pointing at a button, the human adopts it as her goal
/// this tick, abandoning the current one; she then takes one gated step
/// toward the goal button. The adopted goal persists after pointing stops.
pub fn human_step(world: &WorldState, arena: &ArenaSpec, dt: f64, rule: &AvoidanceRule) -> AgentState {
    let mut human = world.human;
    if let Some(pointed) = world.assistant.pointing_at {
        human.goal = Some(pointed);
    }
    step_toward_goal(&mut human, world.assistant.position, arena, dt, rule);
    human
}

/// Applies a layer decision to the assistant, then takes one motion tick.
///
/// `DoNothing` clears goal and pointing; `GoTo` sets the goal and clears
/// pointing; `Point` sets the pointing state and clears the goal so the
/// assistant stays put. An absent decision retains the current action, which
/// is how the assistant keeps acting between layer evaluations.
pub fn assistant_apply(
    world: &WorldState,
    enforcement: Option<BehaviouralAlternative>,
    arena: &ArenaSpec,
    dt: f64,
    rule: &AvoidanceRule,
) -> AgentState {
    let mut assistant = world.assistant;
    match enforcement {
        Some(BehaviouralAlternative::DoNothing) => {
            assistant.goal = None;
            assistant.pointing_at = None;
        }
        Some(BehaviouralAlternative::GoTo(button)) => {
            assistant.goal = Some(button);
            assistant.pointing_at = None;
        }
        Some(BehaviouralAlternative::Point(button)) => {
            assistant.pointing_at = Some(button);
            assistant.goal = None;
        }
        None => {}
    }
    step_toward_goal(&mut assistant, world.human.position, arena, dt, rule);
    assistant
}

fn step_toward_goal(
    agent: &mut AgentState,
    other_pos: Vec2,
    arena: &ArenaSpec,
    dt: f64,
    rule: &AvoidanceRule,
) {
    let Some(goal) = agent.goal else {
        agent.halted = false;
        return;
    };
    let proposed = advance_toward(agent.position, arena.button_pos(goal), agent.speed * dt);
    let next = avoidance_gate(agent.position, other_pos, proposed, rule);
    agent.halted = next == agent.position && proposed != agent.position;
    agent.position = next;
}

//! The consequence-evaluating control layer: generate the five behavioural
//! alternatives, predict the outcome of each with a simple forward
//! simulation, score outcomes with a sigmoid desirability, combine the two
//! per-agent scores under the active policy, and decide whether to enforce
//! the best alternative.

use crate::geometry::{angle_between, extrapolate, first_conflict, Vec2};
use crate::world::{ArenaSpec, ButtonId, WorldState};

/// One of the five candidate actions available to the assistant, in
/// canonical order: do nothing, go to L, go to R, point at L, point at R.
/// The canonical order doubles as the argmax tie-break, with DoNothing
/// winning ties so the assistant stays passive when nothing is gained by
/// acting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BehaviouralAlternative {
    DoNothing,
    GoTo(ButtonId),
    Point(ButtonId),
}

impl BehaviouralAlternative {
    pub const ALL: [BehaviouralAlternative; 5] = [
        BehaviouralAlternative::DoNothing,
        BehaviouralAlternative::GoTo(ButtonId::L),
        BehaviouralAlternative::GoTo(ButtonId::R),
        BehaviouralAlternative::Point(ButtonId::L),
        BehaviouralAlternative::Point(ButtonId::R),
    ];

    /// Position in the canonical order, 0-based.
    pub fn canonical_index(self) -> usize {
        Self::ALL
            .iter()
            .position(|&a| a == self)
            .expect("alternative is one of the five")
    }

    /// Stable token used in trace files and CLI output.
    pub fn token(self) -> &'static str {
        match self {
            BehaviouralAlternative::DoNothing => "do_nothing",
            BehaviouralAlternative::GoTo(ButtonId::L) => "go_to_l",
            BehaviouralAlternative::GoTo(ButtonId::R) => "go_to_r",
            BehaviouralAlternative::Point(ButtonId::L) => "point_l",
            BehaviouralAlternative::Point(ButtonId::R) => "point_r",
        }
    }

    pub fn from_token(token: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.token() == token)
    }
}

impl std::fmt::Display for BehaviouralAlternative {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.token())
    }
}

/// Predicted final positions of both agents for one alternative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictedOutcome {
    pub human_final: Vec2,
    pub assistant_final: Vec2,
}

/// Shape of the desirability sigmoid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmoidParams {
    /// Steepness, 1/meters.
    pub beta: f64,
    /// Midpoint distance, meters.
    pub t: f64,
}

impl Default for SigmoidParams {
    fn default() -> Self {
        SigmoidParams { beta: 10.0, t: 0.25 }
    }
}

/// How the per-agent desirabilities are combined into the single score the
/// layer maximizes. This is the one setting that separates the three robot
/// characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DesirabilityPolicy {
    /// Consider only the human's outcome.
    Ethical,
    /// Consider only the assistant's own outcome.
    Egoistic,
    /// Invert the human's outcome.
    Aggressive,
}

impl DesirabilityPolicy {
    pub const ALL: [DesirabilityPolicy; 3] = [
        DesirabilityPolicy::Ethical,
        DesirabilityPolicy::Egoistic,
        DesirabilityPolicy::Aggressive,
    ];

    pub fn label(self) -> &'static str {
        match self {
            DesirabilityPolicy::Ethical => "ethical",
            DesirabilityPolicy::Egoistic => "egoistic",
            DesirabilityPolicy::Aggressive => "aggressive",
        }
    }
}

impl std::fmt::Display for DesirabilityPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for DesirabilityPolicy {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ethical" => Ok(DesirabilityPolicy::Ethical),
            // "competitive" is the behavioural name for the egoistic policy.
            "egoistic" | "competitive" => Ok(DesirabilityPolicy::Egoistic),
            "aggressive" => Ok(DesirabilityPolicy::Aggressive),
            other => Err(crate::error::Error::Config(format!(
                "unknown policy {other:?}"
            ))),
        }
    }
}

/// Scores for one alternative: the raw per-agent desirabilities and the
/// combined value the layer maximizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub alternative: BehaviouralAlternative,
    pub outcome: PredictedOutcome,
    pub q_h: f64,
    pub q_e: f64,
    pub q_n: f64,
}

/// Minimum spread between the best and worst combined score before the
/// layer intervenes at all.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnforcementRule {
    pub spread_threshold: f64,
}

impl Default for EnforcementRule {
    fn default() -> Self {
        EnforcementRule { spread_threshold: 0.2 }
    }
}

/// Forward-simulation settings for outcome prediction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictionParams {
    /// Seconds per extrapolation step; the engine passes its physics step.
    pub dt: f64,
    /// Steps to extrapolate; long enough to reach any button from anywhere
    /// in the arena.
    pub horizon: usize,
    /// Separation below which both agents are predicted to stop, meters.
    pub conflict_threshold: f64,
}

impl Default for PredictionParams {
    fn default() -> Self {
        PredictionParams {
            dt: 1.0 / 30.0,
            horizon: 600,
            conflict_threshold: 0.5,
        }
    }
}

/// Everything one layer invocation produced, kept together so traces and
/// tests can inspect the full evaluation table rather than just the verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerDecision {
    pub inferred_goal: Option<ButtonId>,
    pub evaluations: [Evaluation; 5],
    pub enforcement: Option<BehaviouralAlternative>,
}

impl LayerDecision {
    pub fn q_values(&self) -> [f64; 5] {
        let mut q = [0.0; 5];
        for (slot, eval) in q.iter_mut().zip(self.evaluations.iter()) {
            *slot = eval.q_n;
        }
        q
    }
}

/// The five behavioural alternatives in canonical order.
pub fn generate_alternatives() -> [BehaviouralAlternative; 5] {
    BehaviouralAlternative::ALL
}

/// Infers which button the human is heading for from her velocity heading:
/// the button whose bearing makes the smallest angle with the velocity,
/// ties broken toward L. Speeds below 0.01 m/s carry no intent.
pub fn infer_human_goal(human_pos: Vec2, human_vel: Vec2, arena: &ArenaSpec) -> Option<ButtonId> {
    if human_vel.norm() < 0.01 {
        return None;
    }
    let bearing = |button: ButtonId| {
        let toward = arena.button_pos(button) - human_pos;
        // Standing exactly on a button leaves no bearing to it; treat it as
        // dead ahead so the button she occupies wins.
        angle_between(human_vel, toward).unwrap_or(0.0)
    };
    if bearing(ButtonId::L) <= bearing(ButtonId::R) {
        Some(ButtonId::L)
    } else {
        Some(ButtonId::R)
    }
}

/// Predicts the outcome of one alternative by extrapolating both agents
/// along straight lines at their speeds.
///
/// Pointing redirects the simulated human to the pointed button; otherwise
/// she heads for the inferred goal, or stands still when none could be
/// inferred. The assistant moves only under a GoTo. If the extrapolated
/// paths come within the conflict threshold, both agents are predicted to
/// stop just short; otherwise each finishes at its intended goal.
pub fn predict_outcome(
    world: &WorldState,
    alt: BehaviouralAlternative,
    inferred_goal: Option<ButtonId>,
    arena: &ArenaSpec,
    params: &PredictionParams,
) -> PredictedOutcome {
    let human_goal = match alt {
        BehaviouralAlternative::Point(button) => Some(arena.button_pos(button)),
        _ => inferred_goal.map(|b| arena.button_pos(b)),
    };
    let assistant_goal = match alt {
        BehaviouralAlternative::GoTo(button) => Some(arena.button_pos(button)),
        _ => None,
    };
    let human_path = extrapolate(
        world.human.position,
        human_goal,
        world.human.speed,
        params.dt,
        params.horizon,
    );
    let assistant_path = extrapolate(
        world.assistant.position,
        assistant_goal,
        world.assistant.speed,
        params.dt,
        params.horizon,
    );
    match first_conflict(&human_path, &assistant_path, params.conflict_threshold) {
        Some((_, human_stop, assistant_stop)) => PredictedOutcome {
            human_final: human_stop,
            assistant_final: assistant_stop,
        },
        None => PredictedOutcome {
            human_final: human_goal.unwrap_or(world.human.position),
            assistant_final: assistant_goal.unwrap_or(world.assistant.position),
        },
    }
}

/// Desirability of a final position: a sigmoid of the distance to the
/// incorrect button, `1 / (1 + exp(-beta * (d - t)))`. Larger distances from
/// the penalized button are better; the midpoint sits at `d = t`.
pub fn desirability(final_pos: Vec2, incorrect_button_pos: Vec2, params: &SigmoidParams) -> f64 {
    let d = final_pos.distance(incorrect_button_pos);
    1.0 / (1.0 + (-params.beta * (d - params.t)).exp())
}

/// Combines the per-agent desirabilities into the score the layer maximizes.
pub fn combine(q_e: f64, q_h: f64, policy: DesirabilityPolicy) -> f64 {
    match policy {
        DesirabilityPolicy::Ethical => q_h,
        DesirabilityPolicy::Egoistic => q_e,
        DesirabilityPolicy::Aggressive => -q_h,
    }
}

/// Picks the alternative with the highest combined score, provided the
/// spread between the highest and lowest score exceeds the threshold; ties
/// resolve to the earliest alternative in canonical order. A spread at or
/// below the threshold means no intervention.
pub fn select_enforcement(
    evals: &[Evaluation],
    rule: &EnforcementRule,
) -> Option<BehaviouralAlternative> {
    debug_assert_eq!(evals.len(), 5);
    let mut best: Option<&Evaluation> = None;
    let mut lowest = f64::INFINITY;
    for eval in evals {
        lowest = lowest.min(eval.q_n);
        let better = match best {
            None => true,
            Some(current) => {
                eval.q_n > current.q_n
                    || (eval.q_n == current.q_n
                        && eval.alternative.canonical_index()
                            < current.alternative.canonical_index())
            }
        };
        if better {
            best = Some(eval);
        }
    }
    let best = best?;
    if best.q_n - lowest > rule.spread_threshold {
        Some(best.alternative)
    } else {
        None
    }
}

/// One full layer invocation over a world snapshot: generate, predict,
/// evaluate, and select. Both desirabilities measure distance to the
/// incorrect button; only the combination step differs between policies.
pub fn layer_tick(
    world: &WorldState,
    policy: DesirabilityPolicy,
    correct_button: ButtonId,
    arena: &ArenaSpec,
    sigmoid: &SigmoidParams,
    rule: &EnforcementRule,
    params: &PredictionParams,
) -> LayerDecision {
    let incorrect_pos = arena.button_pos(correct_button.other());
    let inferred_goal = infer_human_goal(world.human.position, world.human.velocity_estimate, arena);
    let evaluations = generate_alternatives().map(|alternative| {
        let outcome = predict_outcome(world, alternative, inferred_goal, arena, params);
        let q_h = desirability(outcome.human_final, incorrect_pos, sigmoid);
        let q_e = desirability(outcome.assistant_final, incorrect_pos, sigmoid);
        Evaluation {
            alternative,
            outcome,
            q_h,
            q_e,
            q_n: combine(q_e, q_h, policy),
        }
    });
    let enforcement = select_enforcement(&evaluations, rule);
    LayerDecision {
        inferred_goal,
        evaluations,
        enforcement,
    }
}

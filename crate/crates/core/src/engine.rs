//! Fixed-timestep trial execution: 30 Hz physics, a 1 Hz layer cadence,
//! press scoring, termination, and per-tick trace recording.
//!
//! Within a tick the order is fixed: layer decision (on layer ticks), then
//! the assistant's motion, then the human's, then press detection. The whole
//! trial is a deterministic fold over tick numbers.

use std::collections::VecDeque;

use crate::agents::{assistant_apply, estimate_velocity, human_step, AvoidanceRule};
use crate::error::Error;
use crate::geometry::Vec2;
use crate::layer::{
    layer_tick, BehaviouralAlternative, EnforcementRule, LayerDecision, PredictionParams,
    SigmoidParams,
};
use crate::world::{
    detect_press, initial_world, score_press, AgentId, ArenaSpec, ButtonId, RewardLedger,
    TrialSetup, WorldState,
};

/// Engine timing, kinematics, and layer parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    /// Physics step, seconds (30 Hz).
    pub physics_dt: f64,
    /// Physics ticks between layer evaluations; the layer also runs at
    /// tick 0.
    pub layer_period: u64,
    /// Walking speed for both agents, m/s.
    pub agent_speed: f64,
    /// Trial timeout, seconds.
    pub timeout: f64,
    /// Mutual avoidance distance, meters.
    pub avoidance_threshold: f64,
    /// Positions in the velocity-estimation window.
    pub velocity_window: usize,
    /// Extrapolation steps per outcome prediction.
    pub prediction_horizon: usize,
    pub sigmoid: SigmoidParams,
    pub enforcement: EnforcementRule,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            physics_dt: 1.0 / 30.0,
            layer_period: 30,
            agent_speed: 0.15,
            timeout: 60.0,
            avoidance_threshold: 0.5,
            velocity_window: 5,
            prediction_horizon: 600,
            sigmoid: SigmoidParams::default(),
            enforcement: EnforcementRule::default(),
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.physics_dt > 0.0) {
            return Err(Error::Config("physics_dt must be positive".into()));
        }
        if self.layer_period == 0 {
            return Err(Error::Config("layer_period must be at least 1".into()));
        }
        if !(self.timeout > 0.0) {
            return Err(Error::Config("timeout must be positive".into()));
        }
        if self.velocity_window < 2 {
            return Err(Error::Config("velocity_window must be at least 2".into()));
        }
        if !(self.avoidance_threshold > 0.0) {
            return Err(Error::Config("avoidance_threshold must be positive".into()));
        }
        if self.prediction_horizon == 0 {
            return Err(Error::Config("prediction_horizon must be at least 1".into()));
        }
        Ok(())
    }

    fn prediction_params(&self) -> PredictionParams {
        PredictionParams {
            dt: self.physics_dt,
            horizon: self.prediction_horizon,
            conflict_threshold: self.avoidance_threshold,
        }
    }
}

/// Why a trial ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    HumanPressed,
    Timeout,
}

/// One button press, with the tick it happened on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PressEvent {
    pub agent: AgentId,
    pub button: ButtonId,
    pub tick: u64,
}

/// End-of-tick snapshot written to the trace. The enforcement and q columns
/// repeat the most recent layer decision between evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub tick: u64,
    pub time_s: f64,
    pub human_pos: Vec2,
    pub human_goal: Option<ButtonId>,
    pub assistant_pos: Vec2,
    pub assistant_goal: Option<ButtonId>,
    pub assistant_pointing: Option<ButtonId>,
    pub enforced: Option<BehaviouralAlternative>,
    pub q: [f64; 5],
}

/// Everything a finished trial produced.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub presses: Vec<PressEvent>,
    pub ledger: RewardLedger,
    pub termination: Termination,
    pub trace: Vec<TraceRecord>,
}

impl TrialResult {
    pub fn press_by(&self, agent: AgentId) -> Option<&PressEvent> {
        self.presses.iter().find(|p| p.agent == agent)
    }

    /// Simulated duration: executed ticks times the physics step.
    pub fn duration_s(&self, config: &SimConfig) -> f64 {
        self.trace.len() as f64 * config.physics_dt
    }
}

/// Trial termination condition: the human's press ends the game; otherwise
/// the clock runs out at the timeout.
pub fn termination_check(world: &WorldState, tick: u64, config: &SimConfig) -> Option<Termination> {
    if world.human_pressed.is_some() {
        Some(Termination::HumanPressed)
    } else if tick as f64 * config.physics_dt >= config.timeout {
        Some(Termination::Timeout)
    } else {
        None
    }
}

/// In-flight trial state, stepped one physics tick at a time.
pub struct TrialRunner<'a> {
    arena: &'a ArenaSpec,
    setup: &'a TrialSetup,
    config: &'a SimConfig,
    avoidance: AvoidanceRule,
    prediction: PredictionParams,
    pub world: WorldState,
    human_history: VecDeque<Vec2>,
    assistant_history: VecDeque<Vec2>,
    last_decision: Option<LayerDecision>,
    ledger: RewardLedger,
    presses: Vec<PressEvent>,
    trace: Vec<TraceRecord>,
    tick: u64,
}

impl<'a> TrialRunner<'a> {
    pub fn new(
        arena: &'a ArenaSpec,
        setup: &'a TrialSetup,
        config: &'a SimConfig,
    ) -> Result<Self, Error> {
        config.validate()?;
        let world = initial_world(arena, setup, config.agent_speed)?;
        let mut human_history = VecDeque::with_capacity(config.velocity_window + 1);
        let mut assistant_history = VecDeque::with_capacity(config.velocity_window + 1);
        human_history.push_back(world.human.position);
        assistant_history.push_back(world.assistant.position);
        Ok(TrialRunner {
            arena,
            setup,
            config,
            avoidance: AvoidanceRule {
                threshold: config.avoidance_threshold,
            },
            prediction: config.prediction_params(),
            world,
            human_history,
            assistant_history,
            last_decision: None,
            ledger: RewardLedger::default(),
            presses: Vec::new(),
            trace: Vec::new(),
            tick: 0,
        })
    }

    pub fn tick(&self) -> u64 {
        self.tick
    }

    pub fn last_decision(&self) -> Option<&LayerDecision> {
        self.last_decision.as_ref()
    }

    /// Advances the world by one physics tick: layer (on cadence), assistant
    /// motion, human motion, velocity estimates, press scoring, trace.
    pub fn step_world(&mut self) -> Result<(), Error> {
        let enforcement = if self.tick % self.config.layer_period == 0 {
            let decision = layer_tick(
                &self.world,
                self.setup.policy,
                self.setup.correct_button,
                self.arena,
                &self.config.sigmoid,
                &self.config.enforcement,
                &self.prediction,
            );
            let enforcement = decision.enforcement;
            self.last_decision = Some(decision);
            enforcement
        } else {
            None
        };

        self.world.assistant = assistant_apply(
            &self.world,
            enforcement,
            self.arena,
            self.config.physics_dt,
            &self.avoidance,
        );
        self.world.human = human_step(
            &self.world,
            self.arena,
            self.config.physics_dt,
            &self.avoidance,
        );

        self.update_velocity_estimates();

        if let Some((agent, button)) = detect_press(&self.world, self.arena) {
            self.ledger = score_press(self.setup, (agent, button), self.ledger);
            self.presses.push(PressEvent {
                agent,
                button,
                tick: self.tick,
            });
            match agent {
                AgentId::Human => self.world.human_pressed = Some(button),
                AgentId::Assistant => self.world.assistant_pressed = Some(button),
            }
        }

        if !self.world.human.position.is_finite() || !self.world.assistant.position.is_finite() {
            return Err(Error::SimulationFault {
                tick: self.tick,
                detail: "agent position became non-finite".into(),
            });
        }

        let decision = self
            .last_decision
            .as_ref()
            .expect("layer runs at tick 0 before any motion");
        self.trace.push(TraceRecord {
            tick: self.tick,
            time_s: self.tick as f64 * self.config.physics_dt,
            human_pos: self.world.human.position,
            human_goal: self.world.human.goal,
            assistant_pos: self.world.assistant.position,
            assistant_goal: self.world.assistant.goal,
            assistant_pointing: self.world.assistant.pointing_at,
            enforced: decision.enforcement,
            q: decision.q_values(),
        });
        self.tick += 1;
        Ok(())
    }

    fn update_velocity_estimates(&mut self) {
        push_window(
            &mut self.human_history,
            self.world.human.position,
            self.config.velocity_window,
        );
        push_window(
            &mut self.assistant_history,
            self.world.assistant.position,
            self.config.velocity_window,
        );
        let dt = self.config.physics_dt;
        if let Ok(v) = window_velocity(&self.human_history, dt) {
            self.world.human.velocity_estimate = v;
        }
        if let Ok(v) = window_velocity(&self.assistant_history, dt) {
            self.world.assistant.velocity_estimate = v;
        }
    }

    fn finish(self, termination: Termination) -> TrialResult {
        TrialResult {
            presses: self.presses,
            ledger: self.ledger,
            termination,
            trace: self.trace,
        }
    }
}

fn push_window(window: &mut VecDeque<Vec2>, pos: Vec2, capacity: usize) {
    window.push_back(pos);
    while window.len() > capacity {
        window.pop_front();
    }
}

fn window_velocity(window: &VecDeque<Vec2>, dt: f64) -> Result<Vec2, Error> {
    let samples: Vec<Vec2> = window.iter().copied().collect();
    estimate_velocity(&samples, dt)
}

/// Runs one trial to termination. Deterministic: identical inputs produce an
/// identical result, bit for bit.
pub fn run_trial(
    arena: &ArenaSpec,
    setup: &TrialSetup,
    config: &SimConfig,
) -> Result<TrialResult, Error> {
    let mut runner = TrialRunner::new(arena, setup, config)?;
    loop {
        if let Some(termination) = termination_check(&runner.world, runner.tick, config) {
            return Ok(runner.finish(termination));
        }
        runner.step_world()?;
    }
}

//! A deterministic 2D two-agent simulator for the button-pressing shell
//! game, driven by a consequence-evaluating control layer. The layer
//! generates five behavioural alternatives, predicts each outcome with a
//! forward simulation, scores the predicted final positions with a sigmoid
//! desirability, and enforces the best alternative; swapping the
//! desirability-combination policy turns the same machinery ethical,
//! egoistic, or aggressive.

pub mod agents;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod layer;
pub mod world;

pub use engine::{run_trial, SimConfig, Termination, TraceRecord, TrialResult};
pub use error::Error;
pub use geometry::Vec2;
pub use layer::{BehaviouralAlternative, DesirabilityPolicy, LayerDecision};
pub use world::{AgentId, ArenaSpec, ButtonId, TrialSetup};

//! Flat `key = value` configuration with `#` comments. Keys mirror the
//! arena, engine, sigmoid, and enforcement fields; anything not set keeps
//! its default, and CLI flags override file values.

use std::path::Path;

use crate::engine::SimConfig;
use crate::error::Error;
use crate::world::{ArenaSpec, ButtonId};

/// Full harness configuration for a run.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Config {
    pub arena: ArenaSpec,
    pub sim: SimConfig,
    /// Button that pays out this experiment; resolved human choices are
    /// taken relative to it.
    pub correct_button: ButtonId,
}

impl Config {
    pub fn validate(&self) -> Result<(), Error> {
        self.arena.validate()?;
        self.sim.validate()
    }

    /// Applies one `key = value` pair.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), Error> {
        let bad = |what: &str| Error::Config(format!("key {key}: invalid {what} {value:?}"));
        let as_f64 = || value.parse::<f64>().map_err(|_| bad("number"));
        let as_usize = || value.parse::<usize>().map_err(|_| bad("integer"));
        match key {
            "arena_width" => self.arena.width = as_f64()?,
            "arena_height" => self.arena.height = as_f64()?,
            "button_l_x" => self.arena.button_l.x = as_f64()?,
            "button_l_y" => self.arena.button_l.y = as_f64()?,
            "button_r_x" => self.arena.button_r.x = as_f64()?,
            "button_r_y" => self.arena.button_r.y = as_f64()?,
            "press_radius" => self.arena.press_radius = as_f64()?,
            "human_start_x" => self.arena.human_start.x = as_f64()?,
            "human_start_y" => self.arena.human_start.y = as_f64()?,
            "assistant_start_x" => self.arena.assistant_start.x = as_f64()?,
            "assistant_start_y" => self.arena.assistant_start.y = as_f64()?,
            "physics_dt" => self.sim.physics_dt = as_f64()?,
            "layer_period" => self.sim.layer_period = as_usize()? as u64,
            "agent_speed" => self.sim.agent_speed = as_f64()?,
            "timeout" => self.sim.timeout = as_f64()?,
            "avoidance_threshold" => self.sim.avoidance_threshold = as_f64()?,
            "velocity_window" => self.sim.velocity_window = as_usize()?,
            "prediction_horizon" => self.sim.prediction_horizon = as_usize()?,
            "beta" => self.sim.sigmoid.beta = as_f64()?,
            "t" => self.sim.sigmoid.t = as_f64()?,
            "spread_threshold" => self.sim.enforcement.spread_threshold = as_f64()?,
            "correct_button" => self.correct_button = value.parse()?,
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }
}

/// Parses configuration text onto the defaults.
pub fn parse_config(text: &str) -> Result<Config, Error> {
    let mut config = Config::default();
    for (number, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Config(format!(
                "line {}: expected `key = value`, got {raw:?}",
                number + 1
            )));
        };
        config.set(key.trim(), value.trim())?;
    }
    config.validate()?;
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<Config, Error> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text)
}

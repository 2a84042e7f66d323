//! Live bridge message schema and the session that drives the engine.
//!
//! Messages are JSON text frames carrying `"v": 1` and a `"type"` tag. See
//! `docs/bridge-protocol.md` for the full schema.

use accordiatron_core::{Button, Engine, GestureState, LinkStats, Transmission};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::RunConfig;
use crate::error::ShellError;

pub const PROTOCOL_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum Inbound {
    /// Absent axes keep their current position.
    Gesture {
        squeeze: Option<f64>,
        left: Option<f64>,
        right: Option<f64>,
    },
    Button {
        id: usize,
        pressed: bool,
    },
    Mode {
        pressed: bool,
    },
}

impl Inbound {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut value: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let obj = value
            .as_object_mut()
            .ok_or_else(|| "message must be a JSON object".to_owned())?;
        match obj.remove("v").and_then(|v| v.as_u64()) {
            Some(v) if v == u64::from(PROTOCOL_VERSION) => {}
            Some(v) => return Err(format!("unsupported protocol version {v}")),
            None => return Err("missing protocol version `v`".to_owned()),
        }
        serde_json::from_value(value).map_err(|e| e.to_string())
    }

    /// The pose after applying this message to `current`.
    pub fn apply_to(&self, current: &GestureState) -> Result<GestureState, String> {
        let mut next = *current;
        match *self {
            Inbound::Gesture {
                squeeze,
                left,
                right,
            } => {
                if squeeze.is_none() && left.is_none() && right.is_none() {
                    return Err("gesture carries no axis".to_owned());
                }
                next.squeeze = squeeze.unwrap_or(next.squeeze);
                next.left_rot = left.unwrap_or(next.left_rot);
                next.right_rot = right.unwrap_or(next.right_rot);
            }
            Inbound::Button { id, pressed } => {
                Button::key(id).map_err(|e| e.to_string())?;
                next.buttons[id] = pressed;
            }
            Inbound::Mode { pressed } => next.mode = pressed,
        }
        next.validate().map_err(|e| e.to_string())?;
        Ok(next)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Outbound {
    Midi {
        v: u32,
        t_us: u64,
        bytes: [u8; 3],
        decoded: String,
    },
    Stats {
        v: u32,
        sent: u64,
        coalesced: u64,
        peak_queue_depth: usize,
        peak_msgs_per_s: u64,
        mean_msgs_per_s: f64,
    },
    Error {
        v: u32,
        message: String,
    },
}

impl Outbound {
    pub fn midi(tx: &Transmission) -> Self {
        Outbound::Midi {
            v: PROTOCOL_VERSION,
            t_us: tx.t_us,
            bytes: tx.bytes,
            decoded: tx.event.to_string(),
        }
    }

    pub fn stats(s: &LinkStats) -> Self {
        Outbound::Stats {
            v: PROTOCOL_VERSION,
            sent: s.sent,
            coalesced: s.coalesced,
            peak_queue_depth: s.peak_queue_depth,
            peak_msgs_per_s: s.peak_msgs_per_s,
            mean_msgs_per_s: s.mean_msgs_per_s(),
        }
    }

    pub fn error(message: impl Into<String>) -> Self {
        Outbound::Error {
            v: PROTOCOL_VERSION,
            message: message.into(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("outbound messages always serialize")
    }
}

/// One performer's instrument. Inbound messages are applied in arrival
/// order; each is a full engine step at its timestamp.
#[derive(Debug, Clone)]
pub struct LiveSession {
    engine: Engine,
    gesture: GestureState,
}

impl LiveSession {
    /// The instrument starts at rest at `t_us = 0`, so the first gesture is
    /// a change from rest rather than the change-only baseline.
    pub fn new(config: &RunConfig) -> Result<Self, ShellError> {
        let mut engine = Engine::new(config.sensor, config.link, config.emit_initial)?;
        let gesture = GestureState::default();
        let primed = engine.step(gesture, 0)?;
        debug_assert!(primed.is_empty());
        Ok(Self { engine, gesture })
    }

    pub fn gesture(&self) -> &GestureState {
        &self.gesture
    }

    pub fn stats(&self) -> LinkStats {
        self.engine.stats()
    }

    /// A rejected message leaves the session untouched.
    pub fn handle(&mut self, text: &str, t_us: u64) -> Result<Vec<Transmission>, String> {
        let msg = Inbound::parse(text)?;
        self.apply(&msg, t_us)
    }

    pub fn apply(&mut self, msg: &Inbound, t_us: u64) -> Result<Vec<Transmission>, String> {
        let next = msg.apply_to(&self.gesture)?;
        let out = self.engine.step(next, t_us).map_err(|e| e.to_string())?;
        self.gesture = next;
        Ok(out)
    }

    pub fn tick(&mut self, t_us: u64) -> Result<Vec<Transmission>, ShellError> {
        Ok(self.engine.settle(t_us)?)
    }

    pub fn next_wakeup_us(&self) -> Option<u64> {
        self.engine.next_wakeup_us()
    }
}

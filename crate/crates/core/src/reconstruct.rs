//! Rebuilds controller state from a received event stream.

use crate::event::MidiEvent;
use crate::gesture::{Axis, Button, BUTTON_COUNT};
use crate::protocol::{axis_for, button_for, PRESS_VELOCITY, RELEASE_VELOCITY};
use crate::sensor::{SensorConfig, Taper};
use crate::{Error, Result};

/// Normalized pot position whose taper output is `value / max_value`.
pub fn invert_axis(value: u8, taper: Taper, max_value: u8) -> Result<f64> {
    if value > max_value {
        return Err(Error::range("axis value", value));
    }
    let x = f64::from(value) / f64::from(max_value);
    Ok(match taper {
        Taper::Linear => x,
        Taper::Logarithmic => ((libm::pow(10.0, x) - 1.0) / 9.0).clamp(0.0, 1.0),
    })
}

/// Receiver-side view of the instrument. Axes stay `None` until their first
/// control change arrives.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ControllerState {
    pub values: [Option<u8>; 3],
    pub estimates: [Option<f64>; 3],
    pub buttons: [bool; BUTTON_COUNT],
    pub mode: bool,
}

impl ControllerState {
    pub fn value(&self, axis: Axis) -> Option<u8> {
        self.values[axis.index()]
    }

    pub fn estimate(&self, axis: Axis) -> Option<f64> {
        self.estimates[axis.index()]
    }

    pub fn button_mask(&self) -> u16 {
        self.buttons
            .iter()
            .enumerate()
            .fold(0, |m, (i, &b)| m | (u16::from(b) << i))
    }
}

/// What an event did to the state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Applied {
    Axis(Axis, u8),
    Button(Button, bool),
    /// Outside the device vocabulary; state untouched.
    Foreign,
}

#[derive(Debug, Clone)]
pub struct Reconstructor {
    config: SensorConfig,
    state: ControllerState,
    foreign: u64,
}

impl Reconstructor {
    pub fn new(config: SensorConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            state: ControllerState::default(),
            foreign: 0,
        })
    }

    pub fn state(&self) -> &ControllerState {
        &self.state
    }

    pub fn foreign_count(&self) -> u64 {
        self.foreign
    }

    pub fn apply(&mut self, event: &MidiEvent) -> Applied {
        let applied = self.classify(event);
        match applied {
            Applied::Axis(axis, value) => {
                let taper = self.config.axis(axis).taper;
                // classify already bounded value by max_value
                let estimate = invert_axis(value, taper, self.config.max_value()).ok();
                self.state.values[axis.index()] = Some(value);
                self.state.estimates[axis.index()] = estimate;
            }
            Applied::Button(Button::Key(i), down) => self.state.buttons[i] = down,
            Applied::Button(Button::Mode, down) => self.state.mode = down,
            Applied::Foreign => self.foreign += 1,
        }
        applied
    }

    fn classify(&self, event: &MidiEvent) -> Applied {
        match *event {
            MidiEvent::ControlChange {
                channel,
                controller,
                value,
            } => match axis_for(channel, controller) {
                Some(axis) if value.get() <= self.config.max_value() => {
                    Applied::Axis(axis, value.get())
                }
                _ => Applied::Foreign,
            },
            MidiEvent::NoteOn {
                channel,
                note,
                velocity,
            } => match (button_for(channel, note), velocity.get()) {
                (Some(b), PRESS_VELOCITY) => Applied::Button(b, true),
                (Some(b), RELEASE_VELOCITY) => Applied::Button(b, false),
                _ => Applied::Foreign,
            },
        }
    }
}

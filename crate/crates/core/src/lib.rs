//! Signal path of a squeeze-box MIDI controller, from hand gesture to bytes on
//! a 31250 baud MIDI line, and back again.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure model:
//! time is passed in explicitly as integer microseconds, and there is no IO.
//!
//! The forward path is
//! [`sensor`] (taper, op-amp scaling, ADC, truncation, debounce) →
//! [`protocol`] (change-only CC and edge-triggered note encoding) →
//! [`link`] (bandwidth-limited transmit queue) →
//! [`wire`] (MIDI 1.0 bytes). [`Engine`] wires those together.
//!
//! The inverse path is [`wire::Parser`] → [`reconstruct::Reconstructor`].

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod engine;
mod error;
pub mod event;
pub mod gesture;
pub mod link;
pub mod protocol;
pub mod reconstruct;
pub mod sensor;
pub mod wire;

pub use engine::Engine;
pub use error::Error;
pub use event::{Channel, MidiEvent, U7};
pub use gesture::{Axis, Button, GestureState, BUTTON_COUNT};
pub use link::{LinkModel, LinkStats, Transmission, TxQueue};
pub use protocol::{Encoder, EncoderState};
pub use reconstruct::{Applied, ControllerState, Reconstructor};
pub use sensor::{AxisCalibration, ContinuousSample, Sampler, SensorConfig, Taper};

pub type Result<T, E = Error> = core::result::Result<T, E>;

//! MIDI channel-voice events in the device's vocabulary.

use core::fmt;

use crate::{Error, Result};

/// MIDI channel as musicians count it, 1..=16. The wire nibble is `get() - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Channel(u8);

impl Channel {
    pub fn new(channel: u8) -> Result<Self> {
        if (1..=16).contains(&channel) {
            Ok(Channel(channel))
        } else {
            Err(Error::range("MIDI channel", channel))
        }
    }

    pub fn from_nibble(nibble: u8) -> Self {
        Channel((nibble & 0x0F) + 1)
    }

    pub const fn get(self) -> u8 {
        self.0
    }

    pub const fn nibble(self) -> u8 {
        self.0 - 1
    }
}

/// A 7-bit MIDI data value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct U7(u8);

impl U7 {
    pub const MAX: U7 = U7(127);

    pub fn new(value: u8) -> Result<Self> {
        if value <= 127 {
            Ok(U7(value))
        } else {
            Err(Error::range("7-bit value", value))
        }
    }

    /// Masks off the high bit.
    pub const fn from_masked(value: u8) -> Self {
        U7(value & 0x7F)
    }

    pub const fn get(self) -> u8 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MidiEvent {
    ControlChange {
        channel: Channel,
        controller: U7,
        value: U7,
    },
    /// Velocity 0 means release.
    NoteOn {
        channel: Channel,
        note: U7,
        velocity: U7,
    },
}

impl MidiEvent {
    pub fn control_change(channel: u8, controller: u8, value: u8) -> Result<Self> {
        Ok(MidiEvent::ControlChange {
            channel: Channel::new(channel)?,
            controller: U7::new(controller)?,
            value: U7::new(value)?,
        })
    }

    pub fn note_on(channel: u8, note: u8, velocity: u8) -> Result<Self> {
        Ok(MidiEvent::NoteOn {
            channel: Channel::new(channel)?,
            note: U7::new(note)?,
            velocity: U7::new(velocity)?,
        })
    }

    pub fn channel(&self) -> Channel {
        match *self {
            MidiEvent::ControlChange { channel, .. } | MidiEvent::NoteOn { channel, .. } => channel,
        }
    }
}

/// `NoteOn ch4 n60 v127`, `ControlChange ch1 cc16 v64`.
impl fmt::Display for MidiEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MidiEvent::ControlChange {
                channel,
                controller,
                value,
            } => write!(
                f,
                "ControlChange ch{} cc{} v{}",
                channel.get(),
                controller.get(),
                value.get()
            ),
            MidiEvent::NoteOn {
                channel,
                note,
                velocity,
            } => write!(
                f,
                "NoteOn ch{} n{} v{}",
                channel.get(),
                note.get(),
                velocity.get()
            ),
        }
    }
}

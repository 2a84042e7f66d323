//! MIDI 1.0 byte encoding and a streaming parser.
//!
//! Output always uses full three-byte messages. Input may use running
//! status, may interleave real-time bytes, and may contain garbage; the
//! parser counts what it skips and picks up again at the next status byte.

use alloc::vec::Vec;

use crate::event::{Channel, MidiEvent, U7};

const NOTE_OFF: u8 = 0x80;
const NOTE_ON: u8 = 0x90;
const CONTROL_CHANGE: u8 = 0xB0;
const REAL_TIME_START: u8 = 0xF8;

pub fn serialize(event: &MidiEvent) -> [u8; 3] {
    match *event {
        MidiEvent::ControlChange {
            channel,
            controller,
            value,
        } => [
            CONTROL_CHANGE | channel.nibble(),
            controller.get(),
            value.get(),
        ],
        MidiEvent::NoteOn {
            channel,
            note,
            velocity,
        } => [NOTE_ON | channel.nibble(), note.get(), velocity.get()],
    }
}

pub fn serialize_all<'a>(events: impl IntoIterator<Item = &'a MidiEvent>) -> Vec<u8> {
    events.into_iter().flat_map(serialize).collect()
}

#[derive(Debug, Clone, Default)]
pub struct Parser {
    running: Option<u8>,
    pending: [u8; 2],
    pending_len: usize,
    diagnostics: u64,
}

impl Parser {
    pub fn new() -> Self {
        Self::default()
    }

    /// Bytes skipped so far: orphan data bytes, unsupported or system
    /// status bytes and their payloads, and partial messages cut short by a
    /// new status byte.
    pub fn diagnostics(&self) -> u64 {
        self.diagnostics
    }

    pub fn feed(&mut self, byte: u8) -> Option<MidiEvent> {
        if byte >= REAL_TIME_START {
            return None;
        }
        if byte & 0x80 != 0 {
            self.diagnostics += self.pending_len as u64;
            self.pending_len = 0;
            match byte & 0xF0 {
                NOTE_OFF | NOTE_ON | CONTROL_CHANGE => self.running = Some(byte),
                _ => {
                    // system common / exclusive also cancel running status
                    self.running = None;
                    self.diagnostics += 1;
                }
            }
            return None;
        }

        let Some(status) = self.running else {
            self.diagnostics += 1;
            return None;
        };
        self.pending[self.pending_len] = byte;
        self.pending_len += 1;
        if self.pending_len < 2 {
            return None;
        }
        self.pending_len = 0;

        let channel = Channel::from_nibble(status);
        let [d1, d2] = self.pending.map(U7::from_masked);
        Some(match status & 0xF0 {
            CONTROL_CHANGE => MidiEvent::ControlChange {
                channel,
                controller: d1,
                value: d2,
            },
            NOTE_ON => MidiEvent::NoteOn {
                channel,
                note: d1,
                velocity: d2,
            },
            _ => MidiEvent::NoteOn {
                channel,
                note: d1,
                velocity: U7::from_masked(0),
            },
        })
    }

    pub fn feed_slice(&mut self, bytes: &[u8]) -> Vec<MidiEvent> {
        bytes.iter().filter_map(|&b| self.feed(b)).collect()
    }
}

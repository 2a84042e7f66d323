//! Controller-to-MIDI assignment and the change-only encoder.
//!
//! | source          | message        | channel | number |
//! |-----------------|----------------|---------|--------|
//! | squeeze         | control change | 1       | 16     |
//! | left rotation   | control change | 2       | 17     |
//! | right rotation  | control change | 3       | 18     |
//! | key `i` (0..10) | note on        | 4 + i   | 60 + i |
//! | mode button     | note on        | 14      | 70     |
//!
//! Presses carry velocity 127 and releases velocity 0. Nothing else is sent
//! while a button is held, and a controller is only sent when its quantized
//! value moves.

use alloc::vec::Vec;

use crate::event::{Channel, MidiEvent, U7};
use crate::gesture::{Axis, Button, BUTTON_COUNT};
use crate::sensor::ContinuousSample;
use crate::{Error, Result};

pub const PRESS_VELOCITY: u8 = 127;
pub const RELEASE_VELOCITY: u8 = 0;

const AXIS_TABLE: [(u8, u8); 3] = [(1, 16), (2, 17), (3, 18)];
const FIRST_KEY_CHANNEL: u8 = 4;
const FIRST_KEY_NOTE: u8 = 60;
const MODE_CHANNEL: u8 = 14;
const MODE_NOTE: u8 = 70;

/// `(channel, controller)` carrying an axis.
pub fn axis_assignment(axis: Axis) -> (Channel, U7) {
    let (ch, cc) = AXIS_TABLE[axis.index()];
    (Channel::from_nibble(ch - 1), U7::from_masked(cc))
}

/// Inverse of [`axis_assignment`]. The pair is matched as a unit.
pub fn axis_for(channel: Channel, controller: U7) -> Option<Axis> {
    Axis::ALL
        .into_iter()
        .find(|&a| axis_assignment(a) == (channel, controller))
}

/// `(channel, note)` carrying a button.
pub fn button_assignment(button: Button) -> (Channel, U7) {
    let (ch, note) = match button {
        Button::Key(i) => {
            debug_assert!(i < BUTTON_COUNT);
            (FIRST_KEY_CHANNEL + i as u8, FIRST_KEY_NOTE + i as u8)
        }
        Button::Mode => (MODE_CHANNEL, MODE_NOTE),
    };
    (Channel::from_nibble(ch - 1), U7::from_masked(note))
}

pub fn button_for(channel: Channel, note: U7) -> Option<Button> {
    (0..BUTTON_COUNT)
        .map(Button::Key)
        .chain(core::iter::once(Button::Mode))
        .find(|&b| button_assignment(b) == (channel, note))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
enum AxisMemory {
    #[default]
    Unseen,
    /// First observed value, never transmitted.
    Baseline(u8),
    Sent(u8),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EncoderState {
    axes: [AxisMemory; 3],
    held: [bool; BUTTON_COUNT],
    mode_held: bool,
}

impl EncoderState {
    /// Value of the most recent control change sent for `axis`.
    pub fn last_sent(&self, axis: Axis) -> Option<u8> {
        match self.axes[axis.index()] {
            AxisMemory::Sent(v) => Some(v),
            _ => None,
        }
    }

    pub fn held(&self, button: Button) -> bool {
        match button {
            Button::Key(i) => self.held[i],
            Button::Mode => self.mode_held,
        }
    }
}

/// Turns sampler output into MIDI events.
///
/// With `emit_initial` off, the first value seen on an axis only sets the
/// reference point; a control change goes out on the first movement away
/// from it. With `emit_initial` on, the first value is sent as a snapshot.
#[derive(Debug, Clone, Default)]
pub struct Encoder {
    state: EncoderState,
    emit_initial: bool,
}

impl Encoder {
    pub fn new(emit_initial: bool) -> Self {
        Self {
            state: EncoderState::default(),
            emit_initial,
        }
    }

    pub fn state(&self) -> &EncoderState {
        &self.state
    }

    pub fn encode_axis(&mut self, axis: Axis, value: u8) -> Result<Option<MidiEvent>> {
        let value = U7::new(value)?;
        let slot = &mut self.state.axes[axis.index()];
        let changed = match *slot {
            AxisMemory::Unseen => self.emit_initial,
            AxisMemory::Baseline(v) | AxisMemory::Sent(v) => v != value.get(),
        };
        if !changed {
            if *slot == AxisMemory::Unseen {
                *slot = AxisMemory::Baseline(value.get());
            }
            return Ok(None);
        }
        *slot = AxisMemory::Sent(value.get());
        let (channel, controller) = axis_assignment(axis);
        Ok(Some(MidiEvent::ControlChange {
            channel,
            controller,
            value,
        }))
    }

    pub fn encode_button(&mut self, button: Button, pressed: bool) -> Result<Option<MidiEvent>> {
        let held = match button {
            Button::Key(i) => self
                .state
                .held
                .get_mut(i)
                .ok_or(Error::range("button index", i as f64))?,
            Button::Mode => &mut self.state.mode_held,
        };
        if *held == pressed {
            return Ok(None);
        }
        *held = pressed;
        let (channel, note) = button_assignment(button);
        let velocity = if pressed {
            PRESS_VELOCITY
        } else {
            RELEASE_VELOCITY
        };
        Ok(Some(MidiEvent::NoteOn {
            channel,
            note,
            velocity: U7::from_masked(velocity),
        }))
    }

    /// Key edges by ascending index, then the mode edge, then squeeze, left
    /// and right controllers.
    pub fn encode_sample(&mut self, sample: &ContinuousSample) -> Result<Vec<MidiEvent>> {
        let mut out = Vec::new();
        let mut edges = sample.button_edges.clone();
        edges.sort_by_key(|&(i, _)| i);
        for (i, pressed) in edges {
            out.extend(self.encode_button(Button::key(i)?, pressed)?);
        }
        if let Some(pressed) = sample.mode_edge {
            out.extend(self.encode_button(Button::Mode, pressed)?);
        }
        for axis in Axis::ALL {
            out.extend(self.encode_axis(axis, sample.value(axis))?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn cc(ch: u8, cc: u8, v: u8) -> MidiEvent {
        MidiEvent::control_change(ch, cc, v).unwrap()
    }

    fn note(ch: u8, n: u8, v: u8) -> MidiEvent {
        MidiEvent::note_on(ch, n, v).unwrap()
    }

    #[test]
    fn axis_examples() {
        let mut enc = Encoder::new(true);
        enc.encode_axis(Axis::Squeeze, 63).unwrap();
        assert_eq!(enc.state().last_sent(Axis::Squeeze), Some(63));
        assert_eq!(
            enc.encode_axis(Axis::Squeeze, 64).unwrap(),
            Some(cc(1, 16, 64))
        );
        assert_eq!(enc.encode_axis(Axis::Squeeze, 64).unwrap(), None);

        let mut enc = Encoder::new(false);
        assert_eq!(enc.encode_axis(Axis::LeftRotation, 0).unwrap(), None);
        assert_eq!(enc.state().last_sent(Axis::LeftRotation), None);
        assert_eq!(
            enc.encode_axis(Axis::LeftRotation, 1).unwrap(),
            Some(cc(2, 17, 1))
        );
        assert!(enc.encode_axis(Axis::RightRotation, 128).is_err());
    }

    #[test]
    fn button_examples() {
        let mut enc = Encoder::default();
        assert_eq!(
            enc.encode_button(Button::Key(0), true).unwrap(),
            Some(note(4, 60, 127))
        );
        enc.encode_button(Button::Key(9), true).unwrap();
        assert_eq!(
            enc.encode_button(Button::Key(9), false).unwrap(),
            Some(note(13, 69, 0))
        );
        assert_eq!(
            enc.encode_button(Button::Mode, true).unwrap(),
            Some(note(14, 70, 127))
        );
        enc.encode_button(Button::Key(4), true).unwrap();
        assert_eq!(enc.encode_button(Button::Key(4), true).unwrap(), None);
        assert!(enc.encode_button(Button::Key(10), true).is_err());
    }

    #[test]
    fn assignment_inverse_lookup() {
        for axis in Axis::ALL {
            let (ch, cc) = axis_assignment(axis);
            assert_eq!(axis_for(ch, cc), Some(axis));
        }
        let (ch2, _) = axis_assignment(Axis::LeftRotation);
        let (_, cc16) = axis_assignment(Axis::Squeeze);
        assert_eq!(axis_for(ch2, cc16), None);
        for i in 0..BUTTON_COUNT {
            let (ch, n) = button_assignment(Button::Key(i));
            assert_eq!((ch.get(), n.get()), (4 + i as u8, 60 + i as u8));
            assert_eq!(button_for(ch, n), Some(Button::Key(i)));
        }
        let (ch, n) = button_assignment(Button::Mode);
        assert_eq!((ch.get(), n.get()), (14, 70));
        assert_eq!(button_for(ch, n), Some(Button::Mode));
    }

    #[test]
    fn sample_examples() {
        let mut enc = Encoder::new(false);
        let quiet = ContinuousSample {
            values: [10, 5, 5],
            ..Default::default()
        };
        assert!(enc.encode_sample(&quiet).unwrap().is_empty());
        assert!(enc.encode_sample(&quiet).unwrap().is_empty());

        let s = ContinuousSample {
            values: [11, 5, 5],
            button_edges: vec![(0, true)],
            mode_edge: None,
        };
        assert_eq!(
            enc.encode_sample(&s).unwrap(),
            [note(4, 60, 127), cc(1, 16, 11)]
        );

        let s = ContinuousSample {
            values: [11, 6, 7],
            ..Default::default()
        };
        assert_eq!(enc.encode_sample(&s).unwrap(), [cc(2, 17, 6), cc(3, 18, 7)]);
    }

    /// Replays both encoders from scratch without going through
    /// `encode_sample`, keeping its own history.
    fn reference(samples: &[ContinuousSample], emit_initial: bool) -> Vec<MidiEvent> {
        let mut last: [Option<u8>; 3] = [None; 3];
        let mut held = [false; 11];
        let mut out = Vec::new();
        for s in samples {
            let mut edges: Vec<(usize, bool)> = s.button_edges.clone();
            edges.sort();
            if let Some(m) = s.mode_edge {
                edges.push((10, m));
            }
            for (i, p) in edges {
                if held[i] != p {
                    held[i] = p;
                    let v = if p { 127 } else { 0 };
                    out.push(if i == 10 {
                        note(14, 70, v)
                    } else {
                        note(4 + i as u8, 60 + i as u8, v)
                    });
                }
            }
            for (a, (slot, &v)) in last.iter_mut().zip(&s.values).enumerate() {
                let send = match *slot {
                    None => emit_initial,
                    Some(prev) => prev != v,
                };
                if slot.is_none() || send {
                    *slot = Some(v);
                }
                if send {
                    out.push(cc(1 + a as u8, 16 + a as u8, v));
                }
            }
        }
        out
    }

    fn arb_sample() -> impl Strategy<Value = ContinuousSample> {
        (
            prop::array::uniform3(0u8..4),
            prop::collection::btree_map(0usize..10, any::<bool>(), 0..3),
            prop::option::of(any::<bool>()),
        )
            .prop_map(|(values, edges, mode_edge)| ContinuousSample {
                values,
                button_edges: edges.into_iter().collect(),
                mode_edge,
            })
    }

    proptest! {
        #[test]
        fn matches_reference(samples in prop::collection::vec(arb_sample(), 0..40), init: bool) {
            let mut enc = Encoder::new(init);
            let mut got = Vec::new();
            for s in &samples {
                got.extend(enc.encode_sample(s).unwrap());
            }
            prop_assert_eq!(got, reference(&samples, init));
        }
    }
}

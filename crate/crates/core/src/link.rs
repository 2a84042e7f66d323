//! Serial MIDI link and the transmit queue in front of it.
//!
//! A 3-byte message occupies the wire for `3 * bits_per_byte / baud`
//! seconds, 960 us at 31250 baud with 10 bits per byte, which caps the link
//! at 1041 messages per second. When the firmware produces events faster
//! than that, note events wait in order and are never dropped, while a
//! controller that has not gone out yet is overwritten by its newer value.
//! If that newer value is the one the receiver already has, the pending
//! controller is withdrawn, so the wire never repeats a controller value.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;

use crate::event::{Channel, MidiEvent, U7};
use crate::{wire, Error, Result};

const US_PER_S: u64 = 1_000_000;
const MESSAGE_BYTES: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinkModel {
    baud: u32,
    bits_per_byte: u32,
}

impl Default for LinkModel {
    fn default() -> Self {
        Self::MIDI
    }
}

impl LinkModel {
    /// 31250 baud, start + 8 data + stop bits.
    pub const MIDI: LinkModel = LinkModel {
        baud: 31_250,
        bits_per_byte: 10,
    };

    /// The byte time must come out as a whole number of microseconds.
    pub fn new(baud: u32, bits_per_byte: u32) -> Result<Self> {
        if baud == 0 || bits_per_byte == 0 {
            return Err(Error::InvalidConfig(
                "baud and bits per byte must be nonzero",
            ));
        }
        if !(u64::from(bits_per_byte) * US_PER_S).is_multiple_of(u64::from(baud)) {
            return Err(Error::InvalidConfig(
                "baud must give a whole-microsecond byte time",
            ));
        }
        Ok(Self {
            baud,
            bits_per_byte,
        })
    }

    pub fn baud(&self) -> u32 {
        self.baud
    }

    pub fn bits_per_byte(&self) -> u32 {
        self.bits_per_byte
    }

    pub fn byte_time_us(&self) -> u64 {
        u64::from(self.bits_per_byte) * US_PER_S / u64::from(self.baud)
    }

    pub fn message_time_us(&self) -> u64 {
        MESSAGE_BYTES * self.byte_time_us()
    }

    /// Whole 3-byte messages per second.
    pub fn capacity_per_s(&self) -> u64 {
        u64::from(self.baud) / u64::from(self.bits_per_byte) / MESSAGE_BYTES
    }
}

/// One message on the wire. `t_us` is when its last bit has been sent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transmission {
    pub t_us: u64,
    pub event: MidiEvent,
    pub bytes: [u8; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LinkStats {
    pub sent: u64,
    /// Controller values replaced or withdrawn before they could be sent.
    pub coalesced: u64,
    pub peak_queue_depth: usize,
    /// Most transmissions lying entirely inside any one-second window.
    pub peak_msgs_per_s: u64,
    pub first_start_us: Option<u64>,
    pub last_end_us: Option<u64>,
}

impl LinkStats {
    /// Messages per second between the first start and the last completion.
    pub fn mean_msgs_per_s(&self) -> f64 {
        match (self.first_start_us, self.last_end_us) {
            (Some(a), Some(b)) if b > a => self.sent as f64 * US_PER_S as f64 / (b - a) as f64,
            _ => 0.0,
        }
    }
}

#[derive(Debug, Clone)]
struct CcSlot {
    channel: Channel,
    controller: U7,
    value: U7,
    ready_us: u64,
    seq: u64,
}

#[derive(Debug, Clone)]
pub struct TxQueue {
    link: LinkModel,
    notes: VecDeque<(u64, MidiEvent)>,
    slots: Vec<CcSlot>,
    next_seq: u64,
    next_free_us: u64,
    last_enqueue_us: Option<u64>,
    /// Last value that went out per `(channel, controller)`.
    on_wire: BTreeMap<(Channel, U7), U7>,
    recent_starts: VecDeque<u64>,
    stats: LinkStats,
}

enum Pick {
    Note,
    Cc(usize),
}

impl TxQueue {
    pub fn new(link: LinkModel) -> Self {
        Self {
            link,
            notes: VecDeque::new(),
            slots: Vec::new(),
            next_seq: 0,
            next_free_us: 0,
            last_enqueue_us: None,
            on_wire: BTreeMap::new(),
            recent_starts: VecDeque::new(),
            stats: LinkStats::default(),
        }
    }

    pub fn link(&self) -> &LinkModel {
        &self.link
    }

    pub fn stats(&self) -> LinkStats {
        self.stats
    }

    pub fn depth(&self) -> usize {
        self.notes.len() + self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.depth() == 0
    }

    pub fn enqueue(&mut self, event: MidiEvent, t_us: u64) -> Result<()> {
        if let Some(previous) = self.last_enqueue_us {
            if t_us < previous {
                return Err(Error::NonMonotonicTime {
                    previous,
                    got: t_us,
                });
            }
        }
        self.last_enqueue_us = Some(t_us);

        match event {
            MidiEvent::NoteOn { .. } => self.notes.push_back((t_us, event)),
            MidiEvent::ControlChange {
                channel,
                controller,
                value,
            } => {
                if let Some(i) = self
                    .slots
                    .iter()
                    .position(|s| s.channel == channel && s.controller == controller)
                {
                    self.stats.coalesced += 1;
                    if self.on_wire.get(&(channel, controller)) == Some(&value) {
                        self.slots.remove(i);
                    } else {
                        // keeps its place in line, carries the newest value
                        self.slots[i].value = value;
                    }
                } else {
                    self.slots.push(CcSlot {
                        channel,
                        controller,
                        value,
                        ready_us: t_us,
                        seq: self.next_seq,
                    });
                    self.next_seq += 1;
                }
            }
        }
        self.stats.peak_queue_depth = self.stats.peak_queue_depth.max(self.depth());
        Ok(())
    }

    /// Start time and choice of the next message, if any is pending.
    fn next_pick(&self) -> Option<(u64, Pick)> {
        let note_ready = self.notes.front().map(|&(t, _)| t);
        let cc = self
            .slots
            .iter()
            .enumerate()
            .min_by_key(|(_, s)| (s.ready_us, s.seq))
            .map(|(i, s)| (s.ready_us, i));
        let earliest = match (note_ready, cc) {
            (None, None) => return None,
            (Some(n), None) => n,
            (None, Some((c, _))) => c,
            (Some(n), Some((c, _))) => n.min(c),
        };
        let start = self.next_free_us.max(earliest);
        match (note_ready, cc) {
            (Some(n), _) if n <= start => Some((start, Pick::Note)),
            (_, Some((_, i))) => Some((start, Pick::Cc(i))),
            _ => unreachable!("the earliest pending item is ready at start"),
        }
    }

    /// Completion time of the next message, if the link were drained forever.
    pub fn next_completion_us(&self) -> Option<u64> {
        self.next_pick()
            .map(|(start, _)| start + self.link.message_time_us())
    }

    /// Sends every message whose transmission finishes by `now_us`. Ready
    /// notes go before ready controllers.
    pub fn drain(&mut self, now_us: u64) -> Vec<Transmission> {
        let mut out = Vec::new();
        let msg_time = self.link.message_time_us();
        while let Some((start, pick)) = self.next_pick() {
            let end = start + msg_time;
            if end > now_us {
                break;
            }
            let event = match pick {
                Pick::Note => self.notes.pop_front().map(|(_, e)| e),
                Pick::Cc(i) => {
                    let s = self.slots.remove(i);
                    self.on_wire.insert((s.channel, s.controller), s.value);
                    Some(MidiEvent::ControlChange {
                        channel: s.channel,
                        controller: s.controller,
                        value: s.value,
                    })
                }
            }
            .expect("picked item exists");
            self.next_free_us = end;
            self.record(start, end);
            out.push(Transmission {
                t_us: end,
                bytes: wire::serialize(&event),
                event,
            });
        }
        out
    }

    fn record(&mut self, start: u64, end: u64) {
        self.stats.sent += 1;
        self.stats.first_start_us.get_or_insert(start);
        self.stats.last_end_us = Some(end);
        self.recent_starts.push_back(start);
        let window_start = end.saturating_sub(US_PER_S);
        while self
            .recent_starts
            .front()
            .is_some_and(|&s| s < window_start)
        {
            self.recent_starts.pop_front();
        }
        self.stats.peak_msgs_per_s = self
            .stats
            .peak_msgs_per_s
            .max(self.recent_starts.len() as u64);
    }
}

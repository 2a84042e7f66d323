//! Batch drivers: trace → timed byte log, and bytes → state timeline.

use std::fmt::Write as _;

use accordiatron_core::reconstruct::ControllerState;
use accordiatron_core::wire::Parser;
use accordiatron_core::{Applied, Axis, Engine, LinkStats, MidiEvent, Reconstructor, Transmission};

use crate::bytelog;
use crate::config::{OutputFormat, RunConfig};
use crate::error::ShellError;
use crate::trace::TraceRecord;

#[derive(Debug, Clone, PartialEq)]
pub struct EncodeOutput {
    pub transmissions: Vec<Transmission>,
    pub stats: LinkStats,
}

impl EncodeOutput {
    pub fn to_log(&self) -> String {
        bytelog::format_log(&self.transmissions)
    }

    pub fn to_raw(&self) -> Vec<u8> {
        self.transmissions.iter().flat_map(|t| t.bytes).collect()
    }

    pub fn render(&self, format: OutputFormat) -> Vec<u8> {
        match format {
            OutputFormat::Log => self.to_log().into_bytes(),
            OutputFormat::Raw => self.to_raw(),
        }
    }
}

/// Replays a trace through sensor chain, encoder and link, then lets the
/// link run dry.
pub fn run_encode(trace: &[TraceRecord], config: &RunConfig) -> Result<EncodeOutput, ShellError> {
    let mut engine = Engine::new(config.sensor, config.link, config.emit_initial)?;
    let mut transmissions = Vec::new();
    for record in trace {
        transmissions.extend(engine.step(record.gesture, record.t_us())?);
    }
    transmissions.extend(engine.finish()?);
    Ok(EncodeOutput {
        transmissions,
        stats: engine.stats(),
    })
}

/// Bytes to decode, with or without link timestamps.
#[derive(Debug, Clone, PartialEq)]
pub enum DecodeInput {
    Raw(Vec<u8>),
    Timed(Vec<(u64, [u8; 3])>),
}

impl DecodeInput {
    /// A file that reads entirely as a byte log is taken as one; anything
    /// else is raw MIDI.
    pub fn detect(bytes: Vec<u8>) -> Self {
        match std::str::from_utf8(&bytes).ok().map(bytelog::parse_log) {
            Some(Ok(lines)) if !lines.is_empty() => DecodeInput::Timed(lines),
            _ => DecodeInput::Raw(bytes),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimelineEntry {
    pub t_us: Option<u64>,
    pub event: MidiEvent,
    pub state: ControllerState,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Timeline {
    pub entries: Vec<TimelineEntry>,
    pub foreign: u64,
    pub diagnostics: u64,
}

impl Timeline {
    pub fn final_state(&self) -> Option<&ControllerState> {
        self.entries.last().map(|e| &e.state)
    }

    /// Tab-separated, `#` header and trailer. Axis cells are
    /// `value:estimate`, or `-` before the first controller message.
    pub fn render(&self) -> String {
        let mut out = String::from("# t_us\tevent\tsqueeze\tleft\tright\tbuttons\tmode\n");
        for e in &self.entries {
            let t = e.t_us.map_or_else(|| "-".to_owned(), |t| t.to_string());
            let _ = write!(out, "{t}\t{}", e.event);
            for axis in Axis::ALL {
                match (e.state.value(axis), e.state.estimate(axis)) {
                    (Some(v), Some(p)) => {
                        let _ = write!(out, "\t{v}:{p:.4}");
                    }
                    _ => out.push_str("\t-"),
                }
            }
            let _ = writeln!(
                out,
                "\t{}\t{}",
                e.state.button_mask(),
                u8::from(e.state.mode)
            );
        }
        let _ = writeln!(
            out,
            "# events={} foreign={} diagnostics={}",
            self.entries.len(),
            self.foreign,
            self.diagnostics
        );
        out
    }
}

pub fn run_decode(input: &DecodeInput, config: &RunConfig) -> Result<Timeline, ShellError> {
    let mut parser = Parser::new();
    let mut rec = Reconstructor::new(config.sensor)?;
    let mut timeline = Timeline::default();

    let mut accept = |t_us: Option<u64>, event: MidiEvent, timeline: &mut Timeline| {
        if rec.apply(&event) != Applied::Foreign {
            timeline.entries.push(TimelineEntry {
                t_us,
                event,
                state: rec.state().clone(),
            });
        }
    };

    match input {
        DecodeInput::Raw(bytes) => {
            for &b in bytes {
                if let Some(event) = parser.feed(b) {
                    accept(None, event, &mut timeline);
                }
            }
        }
        DecodeInput::Timed(lines) => {
            for &(t_us, bytes) in lines {
                for b in bytes {
                    if let Some(event) = parser.feed(b) {
                        accept(Some(t_us), event, &mut timeline);
                    }
                }
            }
        }
    }
    timeline.foreign = rec.foreign_count();
    timeline.diagnostics = parser.diagnostics();
    Ok(timeline)
}

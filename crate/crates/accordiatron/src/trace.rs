//! Gesture trace files.
//!
//! CSV, UTF-8, LF line endings, with the exact header
//! `t_ms,squeeze,left,right,buttons,mode`. `buttons` is a bitmask (bit `i`
//! is key `i`), `mode` is 0 or 1, and `t_ms` never decreases.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use accordiatron_core::GestureState;

use crate::error::ShellError;

pub const HEADER: [&str; 6] = ["t_ms", "squeeze", "left", "right", "buttons", "mode"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub t_ms: u64,
    pub gesture: GestureState,
}

impl TraceRecord {
    pub fn t_us(&self) -> u64 {
        self.t_ms * 1000
    }
}

pub fn load_trace(path: impl AsRef<Path>) -> Result<Vec<TraceRecord>, ShellError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| ShellError::io(path, e))?;
    parse_trace(file)
}

pub fn parse_trace(input: impl Read) -> Result<Vec<TraceRecord>, ShellError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::None)
        .from_reader(input);
    let mut rows = reader.records();

    let header = match rows.next() {
        Some(row) => row.map_err(|e| csv_error(1, e))?,
        None => return Err(ShellError::trace(1, "missing header")),
    };
    if header.iter().ne(HEADER) {
        return Err(ShellError::trace(
            1,
            format!("expected header `{}`", HEADER.join(",")),
        ));
    }

    let mut out: Vec<TraceRecord> = Vec::new();
    for (idx, row) in rows.enumerate() {
        let line = idx as u64 + 2;
        let row = row.map_err(|e| csv_error(line, e))?;
        if row.len() != HEADER.len() {
            return Err(ShellError::trace(
                line,
                format!("expected {} fields, found {}", HEADER.len(), row.len()),
            ));
        }
        let record = parse_row(&row, line)?;
        if let Some(prev) = out.last() {
            if record.t_ms < prev.t_ms {
                return Err(ShellError::trace(
                    line,
                    format!("t_ms {} goes back from {}", record.t_ms, prev.t_ms),
                ));
            }
        }
        out.push(record);
    }
    Ok(out)
}

fn csv_error(line: u64, e: csv::Error) -> ShellError {
    let line = e.position().map_or(line, |p| p.line());
    ShellError::trace(line, e.to_string())
}

fn parse_row(row: &csv::StringRecord, line: u64) -> Result<TraceRecord, ShellError> {
    let field = |i: usize| row.get(i).unwrap_or_default();
    let t_ms = field(0)
        .parse::<u64>()
        .map_err(|_| ShellError::trace(line, format!("bad t_ms `{}`", field(0))))?;

    let mut gesture = GestureState::default();
    for (i, name) in [(1, "squeeze"), (2, "left"), (3, "right")] {
        let v: f64 = field(i)
            .parse()
            .map_err(|_| ShellError::trace(line, format!("bad {name} `{}`", field(i))))?;
        if !(0.0..=1.0).contains(&v) {
            return Err(ShellError::trace(
                line,
                format!("{name} {v} outside [0, 1]"),
            ));
        }
        match i {
            1 => gesture.squeeze = v,
            2 => gesture.left_rot = v,
            _ => gesture.right_rot = v,
        }
    }

    let mask: u16 = field(4)
        .parse()
        .map_err(|_| ShellError::trace(line, format!("bad buttons `{}`", field(4))))?;
    gesture
        .set_button_mask(mask)
        .map_err(|_| ShellError::trace(line, format!("buttons {mask} outside 0..=1023")))?;

    gesture.mode = match field(5) {
        "0" => false,
        "1" => true,
        other => return Err(ShellError::trace(line, format!("bad mode `{other}`"))),
    };
    Ok(TraceRecord { t_ms, gesture })
}

pub fn write_trace(records: &[TraceRecord], mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "{}", HEADER.join(","))?;
    for r in records {
        let g = &r.gesture;
        writeln!(
            out,
            "{},{:?},{:?},{:?},{},{}",
            r.t_ms,
            g.squeeze,
            g.left_rot,
            g.right_rot,
            g.button_mask(),
            u8::from(g.mode)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<Vec<TraceRecord>, ShellError> {
        parse_trace(s.as_bytes())
    }

    fn line_of(e: ShellError) -> u64 {
        match e {
            ShellError::Trace { line, .. } => line,
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn header_only_is_empty() {
        assert!(parse("t_ms,squeeze,left,right,buttons,mode\n")
            .unwrap()
            .is_empty());
    }

    #[test]
    fn zero_row() {
        let t = parse("t_ms,squeeze,left,right,buttons,mode\n0,0.0,0.0,0.0,0,0\n").unwrap();
        assert_eq!(
            t,
            [TraceRecord {
                t_ms: 0,
                gesture: GestureState::default()
            }]
        );
    }

    #[test]
    fn backwards_time_names_the_line() {
        let e =
            parse("t_ms,squeeze,left,right,buttons,mode\n10,0,0,0,0,0\n5,0,0,0,0,0\n").unwrap_err();
        assert_eq!(line_of(e), 3);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(line_of(parse("").unwrap_err()), 1);
        assert_eq!(
            line_of(parse("t,squeeze,left,right,buttons,mode\n").unwrap_err()),
            1
        );
        let h = "t_ms,squeeze,left,right,buttons,mode\n";
        for bad in [
            "0,1.5,0,0,0,0",
            "0,0,-0.1,0,0,0",
            "0,0,0,nan,0,0",
            "0,0,0,0,1024,0",
            "0,0,0,0,0,2",
            "-1,0,0,0,0,0",
            "0,0,0,0,0",
            "0,0,0,0,0,0,0",
        ] {
            let e = parse(&format!("{h}0,0,0,0,0,0\n{bad}\n")).unwrap_err();
            assert_eq!(line_of(e), 3, "{bad}");
        }
    }

    #[test]
    fn write_then_parse() {
        let mut g = GestureState {
            squeeze: 0.3,
            left_rot: 1.0,
            right_rot: 0.123456789,
            mode: true,
            ..Default::default()
        };
        g.set_button_mask(0b1000000011).unwrap();
        let records = vec![
            TraceRecord {
                t_ms: 0,
                gesture: GestureState::default(),
            },
            TraceRecord {
                t_ms: 7,
                gesture: g,
            },
        ];
        let mut buf = Vec::new();
        write_trace(&records, &mut buf).unwrap();
        assert_eq!(parse_trace(buf.as_slice()).unwrap(), records);
    }
}

//! Timed byte log: one message per line, `t_us HH HH HH # decoded`.

use std::fmt::Write as _;

use accordiatron_core::Transmission;

use crate::error::ShellError;

pub fn format_line(tx: &Transmission) -> String {
    let [a, b, c] = tx.bytes;
    format!("{} {a:02X} {b:02X} {c:02X} # {}", tx.t_us, tx.event)
}

pub fn format_log(transmissions: &[Transmission]) -> String {
    let mut out = String::new();
    for tx in transmissions {
        let _ = writeln!(out, "{}", format_line(tx));
    }
    out
}

/// Timestamps and bytes of a log. The decoded comment is ignored, so a log
/// with a hand-edited comment still parses to the same bytes.
pub fn parse_log(text: &str) -> Result<Vec<(u64, [u8; 3])>, ShellError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx as u64 + 1;
        let body = raw.split('#').next().unwrap_or_default().trim();
        if body.is_empty() {
            continue;
        }
        let err = |message: &str| ShellError::ByteLog {
            line,
            message: message.to_owned(),
        };
        let mut fields = body.split_ascii_whitespace();
        let t_us = fields
            .next()
            .and_then(|t| t.parse::<u64>().ok())
            .ok_or_else(|| err("bad timestamp"))?;
        let mut bytes = [0u8; 3];
        for b in &mut bytes {
            let field = fields.next().ok_or_else(|| err("expected three bytes"))?;
            if field.len() != 2 {
                return Err(err("bytes are two hex digits"));
            }
            *b = u8::from_str_radix(field, 16).map_err(|_| err("bad hex byte"))?;
        }
        if fields.next().is_some() {
            return Err(err("trailing fields"));
        }
        out.push((t_us, bytes));
    }
    Ok(out)
}

//! Run configuration, read from JSON.
//!
//! Every field is optional and unknown keys are rejected:
//!
//! ```json
//! {
//!   "squeeze": { "taper": "logarithmic", "gain": 1.0, "offset": 0.0 },
//!   "left":    { "taper": "linear" },
//!   "right":   { "gain": 1.2, "offset": -0.3 },
//!   "supply": 5.0,
//!   "adc_bits": 12,
//!   "retained_bits": 7,
//!   "debounce_ms": 5,
//!   "emit_initial": false,
//!   "baud": 31250,
//!   "output_format": "log"
//! }
//! ```

use std::path::Path;

use accordiatron_core::{AxisCalibration, LinkModel, SensorConfig, Taper};
use serde::{Deserialize, Serialize};

use crate::error::ShellError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    /// `t_us HH HH HH # decoded` lines.
    #[default]
    Log,
    /// Bare MIDI bytes.
    Raw,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub sensor: SensorConfig,
    pub emit_initial: bool,
    pub link: LinkModel,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            sensor: SensorConfig::default(),
            emit_initial: false,
            link: LinkModel::MIDI,
            output_format: OutputFormat::Log,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct AxisFile {
    taper: Option<TaperFile>,
    gain: Option<f64>,
    offset: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
enum TaperFile {
    Logarithmic,
    Linear,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    squeeze: Option<AxisFile>,
    left: Option<AxisFile>,
    right: Option<AxisFile>,
    supply: Option<f64>,
    adc_bits: Option<u32>,
    retained_bits: Option<u32>,
    debounce_ms: Option<u32>,
    emit_initial: Option<bool>,
    baud: Option<u32>,
    output_format: Option<OutputFormat>,
}

impl RunConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ShellError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| ShellError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, ShellError> {
        let file: ConfigFile =
            serde_json::from_str(text).map_err(|e| ShellError::Config(e.to_string()))?;
        let defaults = RunConfig::default();
        let mut sensor = defaults.sensor;

        for (slot, axis) in sensor
            .axes
            .iter_mut()
            .zip([file.squeeze, file.left, file.right])
        {
            let Some(axis) = axis else { continue };
            *slot = AxisCalibration {
                taper: match axis.taper {
                    Some(TaperFile::Logarithmic) => Taper::Logarithmic,
                    Some(TaperFile::Linear) => Taper::Linear,
                    None => slot.taper,
                },
                gain: axis.gain.unwrap_or(slot.gain),
                offset: axis.offset.unwrap_or(slot.offset),
            };
        }
        sensor.supply = file.supply.unwrap_or(sensor.supply);
        sensor.adc_bits = file.adc_bits.unwrap_or(sensor.adc_bits);
        sensor.retained_bits = file.retained_bits.unwrap_or(sensor.retained_bits);
        sensor.debounce_ms = file.debounce_ms.unwrap_or(sensor.debounce_ms);
        sensor
            .validate()
            .map_err(|e| ShellError::Config(e.to_string()))?;

        let link = match file.baud {
            Some(baud) => LinkModel::new(baud, defaults.link.bits_per_byte())
                .map_err(|e| ShellError::Config(e.to_string()))?,
            None => defaults.link,
        };

        Ok(RunConfig {
            sensor,
            emit_initial: file.emit_initial.unwrap_or(defaults.emit_initial),
            link,
            output_format: file.output_format.unwrap_or_default(),
        })
    }
}

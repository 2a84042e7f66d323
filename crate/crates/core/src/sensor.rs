//! Analog front end: potentiometer taper, op-amp range scaling, ADC
//! quantization, truncation to 7-bit MIDI values, and contact debouncing.

use alloc::vec::Vec;

use crate::gesture::{Axis, Button, GestureState, BUTTON_COUNT};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Taper {
    /// Normalized audio-taper pot, `log10(1 + 9p)`.
    Logarithmic,
    Linear,
}

/// Op-amp stage for one axis: `volts = gain * supply * x + offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisCalibration {
    pub taper: Taper,
    pub gain: f64,
    /// Volts.
    pub offset: f64,
}

impl AxisCalibration {
    pub const fn new(taper: Taper) -> Self {
        Self {
            taper,
            gain: 1.0,
            offset: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorConfig {
    /// Indexed by [`Axis::index`].
    pub axes: [AxisCalibration; 3],
    /// ADC reference, volts.
    pub supply: f64,
    pub adc_bits: u32,
    /// High-order ADC bits kept for the MIDI value.
    pub retained_bits: u32,
    pub debounce_ms: u32,
}

impl Default for SensorConfig {
    fn default() -> Self {
        Self {
            axes: [
                AxisCalibration::new(Taper::Logarithmic),
                AxisCalibration::new(Taper::Linear),
                AxisCalibration::new(Taper::Linear),
            ],
            supply: 5.0,
            adc_bits: 12,
            retained_bits: 7,
            debounce_ms: 5,
        }
    }
}

impl SensorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.supply.is_finite() && self.supply > 0.0) {
            return Err(Error::InvalidConfig("supply must be a positive voltage"));
        }
        if !(1..=24).contains(&self.adc_bits) {
            return Err(Error::InvalidConfig("adc_bits must be in 1..=24"));
        }
        if self.retained_bits == 0 || self.retained_bits > 7 {
            return Err(Error::InvalidConfig("retained_bits must be in 1..=7"));
        }
        if self.retained_bits > self.adc_bits {
            return Err(Error::InvalidConfig("retained_bits exceeds adc_bits"));
        }
        for cal in &self.axes {
            if !(cal.gain.is_finite() && cal.gain > 0.0) {
                return Err(Error::InvalidConfig("axis gain must be positive"));
            }
            if !cal.offset.is_finite() {
                return Err(Error::InvalidConfig("axis offset must be finite"));
            }
        }
        Ok(())
    }

    pub fn axis(&self, axis: Axis) -> &AxisCalibration {
        &self.axes[axis.index()]
    }

    pub fn max_code(&self) -> u32 {
        (1 << self.adc_bits) - 1
    }

    /// Largest value after truncation, 127 for the default 7 retained bits.
    pub fn max_value(&self) -> u8 {
        ((1u32 << self.retained_bits) - 1) as u8
    }

    pub fn debounce_us(&self) -> u64 {
        u64::from(self.debounce_ms) * 1000
    }

    /// Full chain for one axis: taper, voltage, ADC code, truncation.
    pub fn axis_value(&self, axis: Axis, position: f64) -> Result<u8> {
        let cal = self.axis(axis);
        let tapered = apply_taper(position, cal.taper)?;
        let volts = to_voltage(tapered, cal, self.supply);
        let code = adc_quantize(volts, self)?;
        to_midi_value(code, self)
    }
}

pub fn apply_taper(p: f64, kind: Taper) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::range("pot position", p));
    }
    Ok(match kind {
        Taper::Linear => p,
        // Exact at both ends; clamp guards the last ulp at p = 1.
        Taper::Logarithmic => libm::log10(1.0 + 9.0 * p).min(1.0),
    })
}

/// Op-amp output, clamped to the rails.
pub fn to_voltage(tapered: f64, cal: &AxisCalibration, supply: f64) -> f64 {
    // max/min rather than clamp so a NaN lands on the low rail
    (cal.gain * supply * tapered + cal.offset)
        .max(0.0)
        .min(supply)
}

/// Floor (mid-rise) quantizer over `[0, supply]`.
pub fn adc_quantize(volts: f64, config: &SensorConfig) -> Result<u32> {
    if !(0.0..=config.supply).contains(&volts) {
        return Err(Error::range("ADC input voltage", volts));
    }
    let max = config.max_code();
    let code = libm::floor(volts / config.supply * f64::from(max)) as u32;
    Ok(code.min(max))
}

/// Drops the low `adc_bits - retained_bits` bits of an ADC code.
pub fn to_midi_value(code: u32, config: &SensorConfig) -> Result<u8> {
    if code > config.max_code() {
        return Err(Error::range("ADC code", code));
    }
    Ok((code >> (config.adc_bits - config.retained_bits)) as u8)
}

/// One sampler tick: quantized axes plus debounced contact edges.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ContinuousSample {
    /// Indexed by [`Axis::index`].
    pub values: [u8; 3],
    /// `(key index, pressed)`, ascending by index.
    pub button_edges: Vec<(usize, bool)>,
    pub mode_edge: Option<bool>,
}

impl ContinuousSample {
    pub fn value(&self, axis: Axis) -> u8 {
        self.values[axis.index()]
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Contact {
    reported: bool,
    candidate: bool,
    since_us: u64,
}

impl Contact {
    fn observe(&mut self, level: bool, t_us: u64, window_us: u64) -> Option<bool> {
        if level != self.candidate {
            self.candidate = level;
            self.since_us = t_us;
        }
        if self.candidate != self.reported && t_us - self.since_us >= window_us {
            self.reported = self.candidate;
            return Some(self.reported);
        }
        None
    }

    fn deadline(&self, window_us: u64) -> Option<u64> {
        (self.candidate != self.reported).then_some(self.since_us + window_us)
    }
}

/// Samples gestures through the sensor chain. Owns the debounce state, so
/// one sampler follows one instrument over time.
///
/// All contacts start released.
#[derive(Debug, Clone)]
pub struct Sampler {
    config: SensorConfig,
    keys: [Contact; BUTTON_COUNT],
    mode: Contact,
    last_t_us: Option<u64>,
}

impl Sampler {
    pub fn new(config: SensorConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            keys: [Contact::default(); BUTTON_COUNT],
            mode: Contact::default(),
            last_t_us: None,
        })
    }

    pub fn config(&self) -> &SensorConfig {
        &self.config
    }

    /// A contact edge is reported once the new level has held for the
    /// debounce window. Timestamps must not go backwards.
    pub fn sample(&mut self, gesture: &GestureState, t_us: u64) -> Result<ContinuousSample> {
        gesture.validate()?;
        if let Some(previous) = self.last_t_us {
            if t_us < previous {
                return Err(Error::NonMonotonicTime {
                    previous,
                    got: t_us,
                });
            }
        }
        self.last_t_us = Some(t_us);

        let mut values = [0u8; 3];
        for axis in Axis::ALL {
            values[axis.index()] = self.config.axis_value(axis, gesture.axis(axis))?;
        }

        let window = self.config.debounce_us();
        let button_edges = self
            .keys
            .iter_mut()
            .enumerate()
            .filter_map(|(i, c)| {
                c.observe(gesture.button(Button::Key(i)), t_us, window)
                    .map(|pressed| (i, pressed))
            })
            .collect();
        let mode_edge = self.mode.observe(gesture.mode, t_us, window);

        Ok(ContinuousSample {
            values,
            button_edges,
            mode_edge,
        })
    }

    /// Earliest time at which a pending contact change becomes reportable,
    /// provided the contact levels stay as last sampled.
    pub fn next_deadline(&self) -> Option<u64> {
        let window = self.config.debounce_us();
        self.keys
            .iter()
            .chain(core::iter::once(&self.mode))
            .filter_map(|c| c.deadline(window))
            .min()
    }
}

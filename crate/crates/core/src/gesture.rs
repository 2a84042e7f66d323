//! Physical pose of the instrument.

use core::fmt;

use crate::{Error, Result};

/// Number of performance buttons, five per end panel.
pub const BUTTON_COUNT: usize = 10;

/// The three continuously sensed motions.
///
/// Increasing values mean opening the bellows (squeeze) or turning the end
/// panel clockwise as seen by the performer (rotations).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    /// Distance between the two end panels. 0 is fully closed.
    Squeeze,
    /// Rotation of the left hand panel against the linkage.
    LeftRotation,
    /// Rotation of the right hand panel against the linkage.
    RightRotation,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::Squeeze, Axis::LeftRotation, Axis::RightRotation];

    pub const fn index(self) -> usize {
        match self {
            Axis::Squeeze => 0,
            Axis::LeftRotation => 1,
            Axis::RightRotation => 2,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            Axis::Squeeze => "squeeze",
            Axis::LeftRotation => "left",
            Axis::RightRotation => "right",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A discrete contact: one of the ten performance keys or the mode button.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Button {
    Key(usize),
    Mode,
}

impl Button {
    pub fn key(index: usize) -> Result<Self> {
        if index < BUTTON_COUNT {
            Ok(Button::Key(index))
        } else {
            Err(Error::range("button index", index as f64))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GestureState {
    pub squeeze: f64,
    pub left_rot: f64,
    pub right_rot: f64,
    pub buttons: [bool; BUTTON_COUNT],
    pub mode: bool,
}

impl GestureState {
    pub fn axis(&self, axis: Axis) -> f64 {
        match axis {
            Axis::Squeeze => self.squeeze,
            Axis::LeftRotation => self.left_rot,
            Axis::RightRotation => self.right_rot,
        }
    }

    pub fn set_axis(&mut self, axis: Axis, value: f64) {
        match axis {
            Axis::Squeeze => self.squeeze = value,
            Axis::LeftRotation => self.left_rot = value,
            Axis::RightRotation => self.right_rot = value,
        }
    }

    pub fn button(&self, button: Button) -> bool {
        match button {
            Button::Key(i) => self.buttons[i],
            Button::Mode => self.mode,
        }
    }

    /// Bit `i` set when key `i` is down.
    pub fn button_mask(&self) -> u16 {
        self.buttons
            .iter()
            .enumerate()
            .fold(0, |mask, (i, &down)| mask | (u16::from(down) << i))
    }

    pub fn set_button_mask(&mut self, mask: u16) -> Result<()> {
        if mask >= 1 << BUTTON_COUNT {
            return Err(Error::range("button mask", mask));
        }
        for (i, b) in self.buttons.iter_mut().enumerate() {
            *b = mask & (1 << i) != 0;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        for axis in Axis::ALL {
            let v = self.axis(axis);
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::range(axis.name(), v));
            }
        }
        Ok(())
    }
}

//! The whole forward path behind one driver: gestures in, timed wire
//! messages out.

use alloc::vec::Vec;

use crate::gesture::GestureState;
use crate::link::{LinkModel, LinkStats, Transmission, TxQueue};
use crate::protocol::Encoder;
use crate::sensor::{Sampler, SensorConfig};
use crate::{Error, Result};

/// Sampler, encoder and transmit queue driven from a single clock.
///
/// Gestures are piecewise constant: the pose passed to [`Engine::step`]
/// holds until the next step. Debounce deadlines that fall between steps
/// are evaluated against the held pose, so a press that outlasts the
/// debounce window is reported even if no further gesture arrives.
#[derive(Debug, Clone)]
pub struct Engine {
    sampler: Sampler,
    encoder: Encoder,
    queue: TxQueue,
    current: Option<GestureState>,
    clock_us: Option<u64>,
}

impl Engine {
    pub fn new(config: SensorConfig, link: LinkModel, emit_initial: bool) -> Result<Self> {
        Ok(Self {
            sampler: Sampler::new(config)?,
            encoder: Encoder::new(emit_initial),
            queue: TxQueue::new(link),
            current: None,
            clock_us: None,
        })
    }

    pub fn stats(&self) -> LinkStats {
        self.queue.stats()
    }

    pub fn current(&self) -> Option<&GestureState> {
        self.current.as_ref()
    }

    /// Applies a new pose at `t_us` and returns everything the link finished
    /// sending up to `t_us`.
    pub fn step(&mut self, gesture: GestureState, t_us: u64) -> Result<Vec<Transmission>> {
        gesture.validate()?;
        let mut out = self.settle(t_us)?;
        self.sample_and_enqueue(&gesture, t_us)?;
        self.current = Some(gesture);
        // nothing enqueued at t_us can complete by t_us, but keep the clock honest
        out.extend(self.queue.drain(t_us));
        Ok(out)
    }

    /// Advances the clock without a new pose.
    pub fn settle(&mut self, t_us: u64) -> Result<Vec<Transmission>> {
        if let Some(previous) = self.clock_us {
            if t_us < previous {
                return Err(Error::NonMonotonicTime {
                    previous,
                    got: t_us,
                });
            }
        }
        self.clock_us = Some(t_us);

        let mut out = Vec::new();
        if let Some(held) = self.current {
            while let Some(deadline) = self.sampler.next_deadline().filter(|&d| d <= t_us) {
                out.extend(self.queue.drain(deadline));
                self.sample_and_enqueue(&held, deadline)?;
            }
        }
        out.extend(self.queue.drain(t_us));
        Ok(out)
    }

    /// Resolves pending debounces with the held pose and empties the queue.
    pub fn finish(&mut self) -> Result<Vec<Transmission>> {
        let mut out = Vec::new();
        while let Some(deadline) = self.sampler.next_deadline() {
            out.extend(self.settle(deadline)?);
        }
        out.extend(self.queue.drain(u64::MAX));
        Ok(out)
    }

    /// Next time at which [`Engine::settle`] would produce output or change
    /// state, if no new gesture arrives first.
    pub fn next_wakeup_us(&self) -> Option<u64> {
        let deadline = self.current.and(self.sampler.next_deadline());
        match (deadline, self.queue.next_completion_us()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    fn sample_and_enqueue(&mut self, gesture: &GestureState, t_us: u64) -> Result<()> {
        let sample = self.sampler.sample(gesture, t_us)?;
        for event in self.encoder.encode_sample(&sample)? {
            self.queue.enqueue(event, t_us)?;
        }
        Ok(())
    }
}

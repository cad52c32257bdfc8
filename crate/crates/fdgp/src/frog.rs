//! Continuous single-step jumping task.
//!
//! The agent senses how close it is to a target and picks a jump length.
//! Jumping exactly the remaining distance pays 1; overshoot is punished by
//! the amount flown past the target, mirrored around the peak.

use rand::Rng;

/// Sensor reading, jump payoff and optimum for the jumping task.
///
/// Distance `d` is uniform on `[0, 1]`; the sensed state is `x = 1 - d`.
#[derive(Debug, Clone, Copy, Default)]
pub struct FrogProblem;

impl FrogProblem {
    /// Draws a trial's sensed state.
    pub fn sample_state<R: Rng>(&self, rng: &mut R) -> f64 {
        let d = rng.gen_range(0.0..=1.0);
        1.0 - d
    }

    /// Reward for jumping `action` from sensed state `x`: a tent peaking
    /// at 1 where `x + action = 1`.
    pub fn payoff(&self, x: f64, action: f64) -> f64 {
        let reach = x + action;
        if reach <= 1.0 {
            reach
        } else {
            2.0 - reach
        }
    }

    /// The jump that earns payoff 1 from state `x`.
    pub fn optimal_action(&self, x: f64) -> f64 {
        1.0 - x
    }
}

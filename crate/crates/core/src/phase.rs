use std::fmt;
use std::ops::{Add, Neg, Sub};

/// A Clifford phase, stored as a number of quarter turns (multiples of pi/2).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase(u8);

impl Phase {
    pub const ZERO: Phase = Phase(0);
    pub const HALF_PI: Phase = Phase(1);
    pub const PI: Phase = Phase(2);
    pub const MINUS_HALF_PI: Phase = Phase(3);

    pub fn new(quarter_turns: i64) -> Self {
        Phase(quarter_turns.rem_euclid(4) as u8)
    }

    pub fn quarter_turns(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// `true` for 0 and pi.
    pub fn is_pauli(self) -> bool {
        self.0.is_multiple_of(2)
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        Phase((self.0 + 4 - rhs.0) % 4)
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase((4 - self.0) % 4)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_modulo_four() {
        assert_eq!(Phase::new(5), Phase::HALF_PI);
        assert_eq!(Phase::new(-1), Phase::MINUS_HALF_PI);
        assert_eq!(Phase::new(8).quarter_turns(), 0);
    }

    #[test]
    fn arithmetic_wraps() {
        assert_eq!(Phase::PI + Phase::PI, Phase::ZERO);
        assert_eq!(-Phase::HALF_PI, Phase::MINUS_HALF_PI);
        assert_eq!(Phase::ZERO - Phase::HALF_PI, Phase::MINUS_HALF_PI);
        assert!(Phase::PI.is_pauli());
        assert!(!Phase::HALF_PI.is_pauli());
    }
}

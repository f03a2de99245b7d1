use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pda::Pda;

/// Largest result, in bits, that [`state_bound`] will evaluate.
pub const MAX_BOUND_BITS: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `|Q1||Q2|(|Γ1|+|Γ2|+1)^(2k)`
    Displacement,
    /// `|Q1||Q2|(1+(|Γ1|+|Γ2|)·2D)^(8D)`
    Buffered,
}

/// Sizes entering the state bounds. Stack alphabets exclude the bottom
/// marker.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentSizes {
    pub states: [u64; 2],
    pub stack_symbols: [u64; 2],
}

impl ComponentSizes {
    pub fn of(m1: &Pda, m2: &Pda) -> Self {
        ComponentSizes {
            states: [m1.states().len() as u64, m2.states().len() as u64],
            stack_symbols: [m1.pushable_symbols() as u64, m2.pushable_symbols() as u64],
        }
    }
}

/// The closed-form state count of a product construction with gap bound
/// `k` or inner bound `D` as `parameter`.
pub fn state_bound(kind: BoundKind, sizes: ComponentSizes, parameter: u64) -> Result<BigUint> {
    let gamma = sizes.stack_symbols[0] + sizes.stack_symbols[1];
    let (base, exponent) = match kind {
        BoundKind::Displacement => (BigUint::from(gamma) + 1u32, parameter.checked_mul(2)),
        BoundKind::Buffered => (
            BigUint::from(gamma) * BigUint::from(parameter) * 2u32 + 1u32,
            parameter.checked_mul(8),
        ),
    };
    let exponent = exponent.ok_or(Error::Overflow(u64::MAX))?;
    let bits = base.bits().saturating_mul(exponent);
    if bits > MAX_BOUND_BITS || exponent > u64::from(u32::MAX) {
        return Err(Error::Overflow(bits));
    }
    let pairs = BigUint::from(sizes.states[0]) * BigUint::from(sizes.states[1]);
    Ok(pairs * base.pow(exponent as u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sizes(q: [u64; 2], g: [u64; 2]) -> ComponentSizes {
        ComponentSizes {
            states: q,
            stack_symbols: g,
        }
    }

    #[test]
    fn worked_values() {
        let s = sizes([2, 2], [1, 1]);
        assert_eq!(state_bound(BoundKind::Displacement, s, 1).unwrap(), 36u32.into());
        assert_eq!(state_bound(BoundKind::Displacement, s, 0).unwrap(), 4u32.into());
        let s = sizes([1, 1], [1, 1]);
        assert_eq!(state_bound(BoundKind::Buffered, s, 1).unwrap(), 390_625u32.into());
    }

    #[test]
    fn huge_parameters_overflow() {
        let s = sizes([3, 3], [5, 5]);
        assert!(matches!(
            state_bound(BoundKind::Buffered, s, 1 << 40),
            Err(Error::Overflow(_))
        ));
        assert!(matches!(
            state_bound(BoundKind::Displacement, s, u64::MAX),
            Err(Error::Overflow(_))
        ));
        assert!(state_bound(BoundKind::Buffered, s, 1000).is_ok());
    }
}

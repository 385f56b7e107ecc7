//! Cap sizes that make the capped stateless search conclusive.
//!
//! For a stateless system of dimension `d` with rule vectors `T` and root
//! vector `v`, let `L = ‖T‖∞ + ‖v‖∞ + 2`.  Any derivable root vector has a
//! derivation whose intermediate vectors stay below `H = L^(3d)!`, and a
//! capped search up to `B = H²` is therefore complete: a negative answer at
//! cap `B` is a genuine negative.  The numbers grow doubly fast, so `H` and
//! `B` are materialized exactly only while they fit in a few thousand bits
//! and are kept in symbolic base-exponent form beyond that.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::bvass::Bvas;

/// Threshold, in bits, under which bound values are materialized exactly.
const EXACT_BITS: u64 = 10_000;

/// A bound that is either materialized or kept as `base^exponent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundValue {
    Exact(BigUint),
    Power { base: BigUint, exponent: BigUint },
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Exact(v) => write!(f, "{v}"),
            BoundValue::Power { base, exponent } => write!(f, "{base}^{exponent}"),
        }
    }
}

/// The three ladder values: the norm bound `L`, the intermediate-vector
/// bound `H = L^(3d)!`, and the conclusive search cap `B = H²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundTriple {
    pub l: BigUint,
    pub h: BoundValue,
    pub b: BoundValue,
}

fn factorial(n: u64) -> BigUint {
    let mut out = BigUint::one();
    for k in 2..=n {
        out *= k;
    }
    out
}

/// Computes the bound ladder for a stateless system and root vector.
pub fn completeness_bounds(sys: &Bvas, root: &[u64]) -> BoundTriple {
    let rule_norm = sys
        .unary_rules
        .iter()
        .chain(sys.split_rules.iter())
        .flat_map(|v| v.iter())
        .map(|x| x.unsigned_abs())
        .max()
        .unwrap_or(0);
    let root_norm = root.iter().copied().max().unwrap_or(0);
    let l = BigUint::from(rule_norm) + BigUint::from(root_norm) + BigUint::from(2u32);
    let exponent = factorial(3 * sys.dimension as u64);
    let bits = l.bits().max(1);
    let fits = exponent
        .to_u64()
        .map(|e| e.checked_mul(bits).map(|total| total <= EXACT_BITS).unwrap_or(false))
        .unwrap_or(false);
    let (h, b) = if fits {
        let e = exponent.to_u64().expect("checked above");
        let mut h = BigUint::one();
        let mut base = l.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                h = &h * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        let b = &h * &h;
        (BoundValue::Exact(h), BoundValue::Exact(b))
    } else {
        (
            BoundValue::Power { base: l.clone(), exponent: exponent.clone() },
            BoundValue::Power { base: l.clone(), exponent: &exponent * 2u32 },
        )
    };
    BoundTriple { l, h, b }
}

/// Whether `base^exponent > limit`, without materializing the power.
pub fn pow_exceeds(base: &BigUint, exponent: &BigUint, limit: &BigUint) -> bool {
    if base.is_zero() {
        // 0^0 = 1, 0^k = 0 otherwise.
        let value = if exponent.is_zero() { BigUint::one() } else { BigUint::zero() };
        return value > *limit;
    }
    if base.is_one() {
        return BigUint::one() > *limit;
    }
    if exponent.is_zero() {
        return BigUint::one() > *limit;
    }
    // base ≥ 2^(bits-1), so (bits-1)·exponent ≥ bits(limit) already exceeds.
    let limit_bits = BigUint::from(limit.bits());
    if (base.bits() - 1) * exponent >= limit_bits {
        return true;
    }
    // The exponent is now small; square-and-multiply with early abort.
    let mut e = exponent.to_u64().expect("bounded by the bit comparison above");
    let mut acc = BigUint::one();
    let mut sq = base.clone();
    loop {
        if e & 1 == 1 {
            acc = &acc * &sq;
            if acc > *limit {
                return true;
            }
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        // The bit test above keeps the remaining exponent, and hence the
        // number of squarings, small.
        sq = &sq * &sq;
    }
    acc > *limit
}

/// Whether a search cap reaches a bound value.
pub fn cap_meets(cap: &BigUint, bound: &BoundValue) -> bool {
    match bound {
        BoundValue::Exact(v) => cap >= v,
        BoundValue::Power { base, exponent } => !pow_exceeds(base, exponent, cap),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn the_small_ladder_is_computed_exactly() {
        let sys = Bvas::new(1, vec![vec![-3]], vec![]).unwrap();
        let triple = completeness_bounds(&sys, &[2]);
        assert_eq!(triple.l, BigUint::from(7u32));
        assert_eq!(triple.h, BoundValue::Exact(BigUint::from(117_649u64)));
        assert_eq!(triple.b, BoundValue::Exact(BigUint::from(13_841_287_201u64)));
    }

    #[test]
    fn large_dimensions_stay_symbolic() {
        let sys = Bvas::new(4, vec![vec![-3, 0, 0, 0]], vec![]).unwrap();
        let triple = completeness_bounds(&sys, &[2, 0, 0, 0]);
        assert_eq!(triple.l, BigUint::from(7u32));
        match &triple.h {
            BoundValue::Power { base, exponent } => {
                assert_eq!(*base, BigUint::from(7u32));
                assert_eq!(*exponent, factorial(12));
            }
            BoundValue::Exact(_) => panic!("12! multiplications should not be materialized"),
        }
        assert!(!cap_meets(&BigUint::from(u64::MAX), &triple.h));
    }

    #[test]
    fn cap_comparison_is_tight() {
        let h = BoundValue::Power { base: BigUint::from(7u32), exponent: BigUint::from(6u32) };
        assert!(cap_meets(&BigUint::from(117_649u64), &h));
        assert!(!cap_meets(&BigUint::from(117_648u64), &h));
        let exact = BoundValue::Exact(BigUint::from(10u32));
        assert!(cap_meets(&BigUint::from(10u32), &exact));
        assert!(!cap_meets(&BigUint::from(9u32), &exact));
    }

    #[test]
    fn degenerate_bases_are_handled() {
        assert!(!pow_exceeds(&BigUint::zero(), &BigUint::from(5u32), &BigUint::zero()));
        assert!(pow_exceeds(&BigUint::zero(), &BigUint::zero(), &BigUint::zero()));
        assert!(!pow_exceeds(&BigUint::one(), &BigUint::from(1000u32), &BigUint::one()));
        let sys = Bvas::new(0, vec![], vec![]).unwrap();
        let triple = completeness_bounds(&sys, &[]);
        assert_eq!(triple.l, BigUint::from(2u32));
        assert_eq!(triple.h, BoundValue::Exact(BigUint::from(2u32).pow(1u32)));
    }
}

//! Integer helpers: gcd with the `(a, 0) = a` convention, divisor lists,
//! the symbol `chi_k(d) = i^{k(d-1)}`, the constant `D = k / (12, k)` and
//! the congruence classes `km = ±k (mod 12)` that decide which Hecke
//! operators exist for an index `m`.

use crate::modular::RootOfUnity;

/// Greatest common divisor of `|a|` and `|b|`, with `(a, 0) = |a|` and `(0, 0) = 0`.
pub fn gcd0(a: i64, b: i64) -> u64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// `chi_k(d) = i^{k(d-1)}`, returned as an exact fourth root of unity.
///
/// Defined for every integer `d`; it is a character on odd integers only.
pub fn chi_k(k: u32, d: i64) -> RootOfUnity {
    // i = e(6/24)
    let quarter_turns = (i64::from(k) * (d - 1)).rem_euclid(4);
    RootOfUnity::from_24ths(6 * quarter_turns)
}

/// `D = k / (12, k)`.
pub fn big_d(k: u32) -> u32 {
    k / gcd0(12, i64::from(k)) as u32
}

/// All positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors of 0 are not defined");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Which congruence an index `m` satisfies relative to the weight `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CongruenceClass {
    /// `km = k (mod 12)`
    Plus,
    /// `km = -k (mod 12)`
    Minus,
    /// both hold (only possible when `2k = 0 mod 12`, i.e. `k = 6`, `m` odd)
    Both,
    None,
}

impl CongruenceClass {
    pub fn admits_plus(self) -> bool {
        matches!(self, CongruenceClass::Plus | CongruenceClass::Both)
    }

    pub fn admits_minus(self) -> bool {
        matches!(self, CongruenceClass::Minus | CongruenceClass::Both)
    }
}

/// Classify `m` by `km = ±k (mod 12)`.
pub fn index_class(k: u32, m: u64) -> CongruenceClass {
    let k = u64::from(k);
    let km = (k * (m % 12)) % 12;
    let plus = km == k % 12;
    let minus = km == (12 - k % 12) % 12;
    match (plus, minus) {
        (true, true) => CongruenceClass::Both,
        (true, false) => CongruenceClass::Plus,
        (false, true) => CongruenceClass::Minus,
        (false, false) => CongruenceClass::None,
    }
}

/// Exact division `num / den` when it is an integer.
pub(crate) fn exact_div(num: i64, den: i64) -> Option<i64> {
    if den != 0 && num % den == 0 {
        Some(num / den)
    } else {
        None
    }
}

/// Validate a weight in `1..=11`.
pub fn check_weight(k: i64) -> crate::Result<u32> {
    if (1..=11).contains(&k) {
        Ok(k as u32)
    } else {
        Err(crate::Error::InvalidWeight(k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gcd_conventions() {
        assert_eq!(gcd0(7, 0), 7);
        assert_eq!(gcd0(-7, 0), 7);
        assert_eq!(gcd0(12, 18), 6);
        assert_eq!(gcd0(0, 0), 0);
        assert_eq!(gcd0(0, -5), 5);
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi_k(2, 3), RootOfUnity::ONE);
        assert_eq!(chi_k(3, 3), RootOfUnity::from_24ths(12));
        assert_eq!(chi_k(1, 1), RootOfUnity::ONE);
        assert_eq!(chi_k(1, 2), RootOfUnity::I);
        assert_eq!(chi_k(5, 13), RootOfUnity::ONE);
    }

    #[test]
    fn big_d_examples() {
        assert_eq!(big_d(2), 1);
        assert_eq!(big_d(5), 5);
        assert_eq!(big_d(6), 1);
        assert_eq!(big_d(8), 2);
        assert_eq!(big_d(9), 3);
    }

    #[test]
    fn class_examples() {
        assert_eq!(index_class(2, 7), CongruenceClass::Plus);
        assert_eq!(index_class(2, 5), CongruenceClass::Minus);
        assert_eq!(index_class(6, 3), CongruenceClass::Both);
        assert_eq!(index_class(6, 4), CongruenceClass::None);
        assert_eq!(index_class(2, 2), CongruenceClass::None);
        assert_eq!(index_class(5, 1), CongruenceClass::Plus);
        assert_eq!(index_class(5, 11), CongruenceClass::Minus);
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
        assert_eq!(divisors(97), vec![1, 97]);
    }

    proptest! {
        #[test]
        fn chi_multiplicative_on_odd(k in 1u32..=11, a in 0i64..500, b in 0i64..500) {
            let (d1, d2) = (2 * a + 1, 2 * b + 1);
            prop_assert_eq!(chi_k(k, d1 * d2), chi_k(k, d1) * chi_k(k, d2));
        }

        #[test]
        fn chi_real_when_expected(k in 1u32..=11, d in 1i64..10_000) {
            if k % 2 == 0 || d % 2 == 1 {
                prop_assert!(chi_k(k, d).is_real());
            }
        }

        #[test]
        fn gcd_divides(a in -10_000i64..10_000, b in -10_000i64..10_000) {
            let g = gcd0(a, b) as i64;
            if a != 0 && b != 0 {
                prop_assert_eq!(a % g, 0);
                prop_assert_eq!(b % g, 0);
            }
            if b == 0 {
                prop_assert_eq!(g, a.abs());
            }
        }

        #[test]
        fn weight_six_both_iff_odd(m in 1u64..100_000) {
            prop_assert_eq!(index_class(6, m) == CongruenceClass::Both, m % 2 == 1);
        }

        #[test]
        fn plus_minus_exclusive(k in 1u32..=11, m in 1u64..10_000) {
            if (2 * k) % 12 != 0 {
                prop_assert_ne!(index_class(k, m), CongruenceClass::Both);
            }
        }
    }
}

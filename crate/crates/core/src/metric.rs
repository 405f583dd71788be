//! Closed-form word length on the Heisenberg group for the generators
//! `{a, b, a⁻¹, b⁻¹}`, and the transition calculus on words.
//!
//! For `g = c^z b^y a^x` the distance `d(e, g)` splits into five cases
//! according to the sign of `zyx` and how `x²`, `y²`, `|xy|` compare with
//! `|z|`. Cases overlap on their boundaries; [`h3_norm`] evaluates them in
//! the fixed order I.1, I.2.1, I.2.2, II.1, II.2 and returns the first
//! applicable one. [`h3_cases`] returns every applicable case so callers
//! can confirm the overlaps agree.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{h3_inv, h3_mul, H3Element, Letter, Word, LETTER_A, LETTER_A_INV, LETTER_B, LETTER_B_INV};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseTag {
    I1,
    I21,
    I22,
    II1,
    II2,
}

impl CaseTag {
    pub const ALL: [CaseTag; 5] = [CaseTag::I1, CaseTag::I21, CaseTag::I22, CaseTag::II1, CaseTag::II2];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::I1 => "I1",
            CaseTag::I21 => "I21",
            CaseTag::I22 => "I22",
            CaseTag::II1 => "II1",
            CaseTag::II2 => "II2",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CaseTag::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::parse("case tag", s))
    }
}

/// Smallest `k >= 0` with `k² >= 4t`, i.e. `⌈2√t⌉`.
pub fn ceil_2sqrt(t: &BigInt) -> Result<BigInt> {
    if t.is_negative() {
        return Err(Error::NegativeInput(t.to_string()));
    }
    let four_t: BigInt = t * 4;
    let k = four_t.sqrt();
    if &k * &k < four_t {
        Ok(k + 1)
    } else {
        Ok(k)
    }
}

fn ceil_div(num: &BigInt, den: &BigInt) -> BigInt {
    // num >= 0, den > 0
    (num + den - BigInt::one()) / den
}

/// `⌈min(|z/x|, |z/y|)⌉` with `|z/0| = ∞`; `None` when `x = y = 0`.
fn ceil_min_ratio(x: &BigInt, y: &BigInt, z: &BigInt) -> Option<BigInt> {
    let az = z.abs();
    let qx = (!x.is_zero()).then(|| ceil_div(&az, &x.abs()));
    let qy = (!y.is_zero()).then(|| ceil_div(&az, &y.abs()));
    match (qx, qy) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    }
}

/// Every case whose side conditions hold for `g`, with its value, in
/// precedence order. Cases I.2.2 and II.2 are skipped when `x = y = 0`,
/// where their ratio term is undefined.
pub fn h3_cases(g: &H3Element) -> Vec<(CaseTag, BigInt)> {
    let (x, y, z) = (&g.x, &g.y, &g.z);
    let (ax, ay, az) = (x.abs(), y.abs(), z.abs());
    let sq = (x * x).max(y * y);
    let axy = &ax * &ay;
    let sign = z.signum() * y.signum() * x.signum();
    let mut out = Vec::new();

    if !sign.is_negative() {
        if sq <= az {
            let v = 2 * ceil_2sqrt(&az).expect("|z| >= 0") - &ax - &ay;
            out.push((CaseTag::I1, v));
        }
        if sq >= az {
            if axy >= az {
                out.push((CaseTag::I21, &ax + &ay));
            }
            if axy <= az {
                if let Some(q) = ceil_min_ratio(x, y, z) {
                    out.push((CaseTag::I22, 2 * q + (&ax - &ay).abs()));
                }
            }
        }
    }
    if !sign.is_positive() {
        let shifted = &az + &axy;
        if sq <= shifted {
            let v = 2 * ceil_2sqrt(&shifted).expect("non-negative") - &ax - &ay;
            out.push((CaseTag::II1, v));
        }
        if sq >= shifted {
            if let Some(q) = ceil_min_ratio(x, y, z) {
                out.push((CaseTag::II2, 2 * q + &ax + &ay));
            }
        }
    }
    out
}

/// `d(e, g)` together with the case that produced it.
pub fn h3_norm_with_case(g: &H3Element) -> (BigInt, CaseTag) {
    let (tag, v) = h3_cases(g)
        .into_iter()
        .next()
        .expect("every element falls under at least one case");
    (v, tag)
}

/// Word length `d(e, g)` for the generators `{a, b, a⁻¹, b⁻¹}`.
pub fn h3_norm(g: &H3Element) -> BigInt {
    h3_norm_with_case(g).0
}

/// Left-invariant distance `d(g, h) = |g⁻¹h|`.
pub fn h3_dist(g: &H3Element, h: &H3Element) -> BigInt {
    h3_norm(&h3_mul(&h3_inv(g), h))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransitionSign {
    Positive,
    Negative,
    Neutral,
}

fn transition_sign(first: Letter, second: Letter) -> TransitionSign {
    const POSITIVE: [(Letter, Letter); 4] = [
        (LETTER_A, LETTER_B),
        (LETTER_B, LETTER_A_INV),
        (LETTER_A_INV, LETTER_B_INV),
        (LETTER_B_INV, LETTER_A),
    ];
    if POSITIVE.contains(&(first, second)) {
        TransitionSign::Positive
    } else if POSITIVE.contains(&(second, first)) {
        TransitionSign::Negative
    } else {
        TransitionSign::Neutral
    }
}

/// Labels each adjacent pair `(w[p], w[p+1])`. The positive transitions are
/// `ab, bA, AB, Ba`; their reversals are negative; the rest are neutral.
pub fn classify_transitions(w: &Word) -> Vec<(usize, TransitionSign)> {
    w.letters()
        .windows(2)
        .enumerate()
        .map(|(p, pair)| (p, transition_sign(pair[0], pair[1])))
        .collect()
}

/// Swaps the letters of each transition starting at the given positions.
/// Positions must be distinct, in range, and pairwise at least two apart.
pub fn reverse_transitions(w: &Word, positions: &[usize]) -> Result<Word> {
    let mut sorted = positions.to_vec();
    sorted.sort_unstable();
    for &p in &sorted {
        if p + 1 >= w.len() {
            return Err(Error::PositionOutOfRange { position: p, len: w.len() });
        }
    }
    for pair in sorted.windows(2) {
        if pair[1] < pair[0] + 2 {
            return Err(Error::OverlappingPositions(pair[0], pair[1]));
        }
    }
    let mut letters = w.letters().to_vec();
    for p in sorted {
        letters.swap(p, p + 1);
    }
    Ok(Word::new(letters))
}

/// Whether `(a^i b^j a^-i b^-j)^n`, of length `2n(i+j)`, is strictly longer
/// than the word length of the element `c^{ijn}` it represents.
pub fn commutator_power_nongeodesic(i: u64, j: u64, n: u64) -> Result<bool> {
    if i == 0 || j == 0 || n == 0 {
        return Err(Error::InvalidInput("i, j and n must all be at least 1".into()));
    }
    let len = BigInt::from(2) * n * (BigInt::from(i) + j);
    let target = H3Element::new(0, 0, BigInt::from(i) * j * n);
    Ok(len > h3_norm(&target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{evaluate_word, Heisenberg};

    fn e(x: i64, y: i64, z: i64) -> H3Element {
        H3Element::new(x, y, z)
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn ceil_2sqrt_values() {
        let c = |t: i64| ceil_2sqrt(&BigInt::from(t)).unwrap();
        assert_eq!(c(0), BigInt::from(0));
        assert_eq!(c(1), BigInt::from(2));
        assert_eq!(c(5), BigInt::from(5));
        assert_eq!(c(4), BigInt::from(4));
        assert!(ceil_2sqrt(&BigInt::from(-1)).is_err());
    }

    #[test]
    fn ceil_2sqrt_is_minimal() {
        for t in 0..2000i64 {
            let k = ceil_2sqrt(&BigInt::from(t)).unwrap();
            assert!(&k * &k >= BigInt::from(4 * t));
            if k > BigInt::zero() {
                let km = &k - 1;
                assert!(&km * &km < BigInt::from(4 * t));
            }
        }
    }

    #[test]
    fn norm_examples() {
        assert_eq!(h3_norm(&e(5, 0, 0)), BigInt::from(5));
        assert_eq!(h3_norm_with_case(&e(5, 0, 0)).1, CaseTag::I21);
        assert_eq!(h3_norm_with_case(&e(0, 0, 1)), (BigInt::from(4), CaseTag::I1));
        assert_eq!(h3_norm(&e(3, 3, 6)), BigInt::from(6));
        assert_eq!(h3_norm(&e(1, 0, 4)), BigInt::from(7));
        assert_eq!(h3_norm(&e(0, 0, 0)), BigInt::from(0));
    }

    #[test]
    fn dist_examples() {
        let g = e(3, -2, 7);
        assert_eq!(h3_dist(&g, &g), BigInt::zero());
        assert_eq!(h3_dist(&H3Element::identity(), &H3Element::a()), BigInt::one());
        assert_eq!(h3_dist(&H3Element::b(), &H3Element::a()), BigInt::from(2));
    }

    #[test]
    fn huge_exponents_stay_exact() {
        let big = BigInt::from(10).pow(40);
        let g = H3Element::new(0, 0, &big * &big);
        // |z| = 10^80, 2⌈2·10^40⌉ = 4·10^40
        assert_eq!(h3_norm(&g), BigInt::from(4) * &big);
    }

    #[test]
    fn transitions() {
        assert_eq!(classify_transitions(&w("ab")), vec![(0, TransitionSign::Positive)]);
        assert_eq!(classify_transitions(&w("aa")), vec![(0, TransitionSign::Neutral)]);
        assert_eq!(classify_transitions(&w("ba")), vec![(0, TransitionSign::Negative)]);
        assert_eq!(classify_transitions(&w("aB")), vec![(0, TransitionSign::Negative)]);
        assert_eq!(classify_transitions(&w("aA")), vec![(0, TransitionSign::Neutral)]);
        assert!(classify_transitions(&w("a")).is_empty());
    }

    #[test]
    fn positive_transition_is_c_times_its_reversal() {
        let h3 = Heisenberg::new();
        for pair in ["ab", "bA", "AB", "Ba"] {
            let pos = evaluate_word(&h3, &w(pair)).unwrap();
            let rev = reverse_transitions(&w(pair), &[0]).unwrap();
            let neg = evaluate_word(&h3, &rev).unwrap();
            assert_eq!(classify_transitions(&rev)[0].1, TransitionSign::Negative);
            assert_eq!(pos, h3_mul(&H3Element::c(), &neg), "{pair}");
        }
    }

    #[test]
    fn reversal_examples() {
        let h3 = Heisenberg::new();
        let r = reverse_transitions(&w("abba"), &[0, 2]).unwrap();
        assert_eq!(r, w("baab"));
        assert_eq!(evaluate_word(&h3, &r).unwrap(), evaluate_word(&h3, &w("abba")).unwrap());
        assert_eq!(reverse_transitions(&w("ab"), &[]).unwrap(), w("ab"));
        assert_eq!(reverse_transitions(&w("ab"), &[0]).unwrap(), w("ba"));
        assert_eq!(
            reverse_transitions(&w("abab"), &[0, 1]),
            Err(Error::OverlappingPositions(0, 1))
        );
        assert_eq!(
            reverse_transitions(&w("ab"), &[1]),
            Err(Error::PositionOutOfRange { position: 1, len: 2 })
        );
    }

    #[test]
    fn commutator_powers() {
        assert!(commutator_power_nongeodesic(1, 1, 5).unwrap());
        assert!(!commutator_power_nongeodesic(1, 1, 1).unwrap());
        assert!(commutator_power_nongeodesic(2, 1, 4).unwrap());
        assert!(commutator_power_nongeodesic(0, 1, 1).is_err());
        // the commutator word really is c^{ij}
        let h3 = Heisenberg::new();
        assert_eq!(evaluate_word(&h3, &w("aabAAB")).unwrap(), e(0, 0, 2));
    }
}

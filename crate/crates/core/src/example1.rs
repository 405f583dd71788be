//! A class-3 nilpotent group on `a, b` with `c = [a,b]`, `g = [a,c]` and
//! `h = [b,c]`, where `g` and `h` are central. Every element has a unique
//! normal form `g^i h^j c^k b^l a^m`.
//!
//! Multiplication uses exponent polynomials obtained by collecting with the
//! rules `ab → bac`, `ac → cag`, `bc → cbh`. [`staircase_exponents`] is an
//! independent route to the same exponents for positive words.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{evaluate_word, parse_int_list, Group, Letter, Word};
use crate::group::{LETTER_A, LETTER_A_INV, LETTER_B, LETTER_B_INV};
use crate::oracle::CayleyOracle;

/// Largest `l` accepted by [`lemma_perm_check`].
pub const LEMMA_PERM_MAX: u32 = 7;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Ex1Element {
    #[serde(with = "crate::bigint_serde")]
    pub i: BigInt,
    #[serde(with = "crate::bigint_serde")]
    pub j: BigInt,
    #[serde(with = "crate::bigint_serde")]
    pub k: BigInt,
    #[serde(with = "crate::bigint_serde")]
    pub l: BigInt,
    #[serde(with = "crate::bigint_serde")]
    pub m: BigInt,
}

impl Ex1Element {
    pub fn new(
        i: impl Into<BigInt>,
        j: impl Into<BigInt>,
        k: impl Into<BigInt>,
        l: impl Into<BigInt>,
        m: impl Into<BigInt>,
    ) -> Self {
        Ex1Element {
            i: i.into(),
            j: j.into(),
            k: k.into(),
            l: l.into(),
            m: m.into(),
        }
    }

    pub fn identity() -> Self {
        Self::new(0, 0, 0, 0, 0)
    }

    pub fn a() -> Self {
        Self::new(0, 0, 0, 0, 1)
    }

    pub fn b() -> Self {
        Self::new(0, 0, 0, 1, 0)
    }

    pub fn c() -> Self {
        Self::new(0, 0, 1, 0, 0)
    }

    pub fn g() -> Self {
        Self::new(1, 0, 0, 0, 0)
    }

    pub fn h() -> Self {
        Self::new(0, 1, 0, 0, 0)
    }
}

impl fmt::Display for Ex1Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{},{}", self.i, self.j, self.k, self.l, self.m)
    }
}

impl FromStr for Ex1Element {
    type Err = Error;

    /// Parses `"i,j,k,l,m"`.
    fn from_str(s: &str) -> Result<Self> {
        let v = parse_int_list(s, "example1 element")?;
        match <[BigInt; 5]>::try_from(v) {
            Ok([i, j, k, l, m]) => Ok(Ex1Element { i, j, k, l, m }),
            Err(_) => Err(Error::parse("example1 element (expected i,j,k,l,m)", s)),
        }
    }
}

fn triangular(n: &BigInt) -> BigInt {
    // n(n+1)/2, exact for negative n too
    let prod: BigInt = n * (n + BigInt::from(1));
    prod.div_floor(&BigInt::from(2))
}

pub fn ex1_mul(u: &Ex1Element, v: &Ex1Element) -> Ex1Element {
    Ex1Element {
        i: &u.i + &v.i + &u.m * &v.k + &v.l * triangular(&u.m),
        j: &u.j + &v.j + &u.l * &v.k + &u.m * triangular(&v.l) + &u.l * &u.m * &v.l,
        k: &u.k + &v.k + &u.m * &v.l,
        l: &u.l + &v.l,
        m: &u.m + &v.m,
    }
}

pub fn ex1_inv(u: &Ex1Element) -> Ex1Element {
    // (g^i h^j c^k b^l a^m)⁻¹ = a^-m b^-l c^-k g^-i h^-j
    let parts = [
        Ex1Element::new(0, 0, 0, 0, -&u.m),
        Ex1Element::new(0, 0, 0, -&u.l, 0),
        Ex1Element::new(0, 0, -&u.k, 0, 0),
        Ex1Element::new(-&u.i, -&u.j, 0, 0, 0),
    ];
    parts.iter().fold(Ex1Element::identity(), |acc, p| ex1_mul(&acc, p))
}

/// The group with generators `a, A, b, B`.
#[derive(Clone, Debug)]
pub struct Example1 {
    generators: Vec<(Letter, Ex1Element)>,
}

impl Example1 {
    pub fn new() -> Self {
        Example1 {
            generators: vec![
                (LETTER_A, Ex1Element::new(0, 0, 0, 0, 1)),
                (LETTER_A_INV, Ex1Element::new(0, 0, 0, 0, -1)),
                (LETTER_B, Ex1Element::new(0, 0, 0, 1, 0)),
                (LETTER_B_INV, Ex1Element::new(0, 0, 0, -1, 0)),
            ],
        }
    }
}

impl Default for Example1 {
    fn default() -> Self {
        Self::new()
    }
}

impl Group for Example1 {
    type Element = Ex1Element;

    fn name(&self) -> &str {
        "example1"
    }

    fn identity(&self) -> Ex1Element {
        Ex1Element::identity()
    }

    fn mul(&self, g: &Ex1Element, h: &Ex1Element) -> Ex1Element {
        ex1_mul(g, h)
    }

    fn inv(&self, g: &Ex1Element) -> Ex1Element {
        ex1_inv(g)
    }

    fn generators(&self) -> &[(Letter, Ex1Element)] {
        &self.generators
    }

    fn default_radius(&self) -> u32 {
        8
    }
}

/// `(i, j, k)` of a positive word read as a lattice path with `b` a unit
/// step in x and `a` a unit step in y: `k` counts the unit squares under the
/// path, `j` sums the x-coordinates of their upper right corners and `i`
/// sums the y-coordinates.
pub fn staircase_exponents(w: &Word) -> Result<(BigInt, BigInt, BigInt)> {
    let (mut x, mut y) = (BigInt::zero(), BigInt::zero());
    let (mut i, mut j, mut k) = (BigInt::zero(), BigInt::zero(), BigInt::zero());
    for letter in w.iter() {
        match letter {
            LETTER_A => y += 1,
            LETTER_B => {
                x += 1;
                // new column x, squares with corners (x, 1..=y)
                k += &y;
                j += &x * &y;
                i += triangular(&y);
            }
            other => {
                return Err(Error::InvalidInput(format!(
                    "staircase exponents need a word over a and b only, found {other}"
                )))
            }
        }
    }
    Ok((i, j, k))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PermCheck {
    pub holds: bool,
    /// Words with `l` copies each of `a` and `b`.
    pub candidates: usize,
    /// Those with the same `k` as `(ab)^l`.
    pub same_k: usize,
    pub counterexample: Option<String>,
}

/// Among words with `l` letters `a` and `l` letters `b` whose `k` matches
/// `(ab)^l`, checks `(i − i₀) − (j − j₀) > 0` for all but `(ab)^l` itself.
pub fn lemma_perm_check(l: u32) -> Result<PermCheck> {
    if l == 0 || l > LEMMA_PERM_MAX {
        return Err(Error::InvalidInput(format!("l must be in 1..={LEMMA_PERM_MAX}, got {l}")));
    }
    let x_l = Word::new(vec![LETTER_A, LETTER_B]).repeat(l as usize);
    let (i0, j0, k0) = staircase_exponents(&x_l)?;
    let len = 2 * l;
    let mut report = PermCheck {
        holds: true,
        candidates: 0,
        same_k: 0,
        counterexample: None,
    };
    for mask in 0u32..(1 << len) {
        if mask.count_ones() != l {
            continue;
        }
        report.candidates += 1;
        let w: Word = (0..len)
            .map(|p| if mask >> p & 1 == 1 { LETTER_A } else { LETTER_B })
            .collect();
        let (i, j, k) = staircase_exponents(&w)?;
        if k != k0 {
            continue;
        }
        report.same_k += 1;
        if w == x_l {
            continue;
        }
        if (&i - &i0) - (&j - &j0) <= BigInt::zero() && report.counterexample.is_none() {
            report.holds = false;
            report.counterexample = Some(w.to_string());
        }
    }
    Ok(report)
}

/// `d(g, x̄^l) − d(e, x̄^l)` for `x = ab` and the central `g`, with
/// `d(e, x̄^l) = 2l` checked on the way.
pub fn eta_excess(oracle: &CayleyOracle<'_, Example1>, l: u32) -> Result<BigInt> {
    let x_l = evaluate_word(oracle.group(), &Word::new(vec![LETTER_A, LETTER_B]).repeat(l as usize))?;
    let base = oracle.norm_checked(&x_l)?;
    if base != 2 * l {
        return Err(Error::Invariant(format!("d(e, (ab)^{l}) = {base}, expected {}", 2 * l)));
    }
    let shifted = oracle.distance_checked(&Ex1Element::g(), &x_l)?;
    Ok(BigInt::from(shifted) - BigInt::from(base))
}

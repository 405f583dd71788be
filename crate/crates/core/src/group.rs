//! Exact group arithmetic: letters and words, the abstract group contract
//! used by the Cayley-graph oracle, the discrete Heisenberg group and
//! `Z^d` with a symmetric generating set.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A generator letter. Lowercase `a..z` names the `index`-th generator,
/// uppercase names its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    index: u8,
    inverse: bool,
}

impl Letter {
    pub const fn new(index: u8, inverse: bool) -> Self {
        assert!(index < 26);
        Letter { index, inverse }
    }

    pub fn index(self) -> u8 {
        self.index
    }

    pub fn is_inverse(self) -> bool {
        self.inverse
    }

    pub fn inverse(self) -> Self {
        Letter {
            index: self.index,
            inverse: !self.inverse,
        }
    }

    pub fn to_char(self) -> char {
        let c = (b'a' + self.index) as char;
        if self.inverse {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'a'..='z' => Ok(Letter::new(c as u8 - b'a', false)),
            'A'..='Z' => Ok(Letter::new(c as u8 - b'A', true)),
            _ => Err(Error::InvalidLetter(c)),
        }
    }
}

/// `a`, the first standard generator.
pub const LETTER_A: Letter = Letter::new(0, false);
/// `a⁻¹`, written `A`.
pub const LETTER_A_INV: Letter = Letter::new(0, true);
/// `b`, the second standard generator.
pub const LETTER_B: Letter = Letter::new(1, false);
/// `b⁻¹`, written `B`.
pub const LETTER_B_INV: Letter = Letter::new(1, true);

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A finite word over generator letters, written textually as e.g. `"abAB"`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = Letter> + '_ {
        self.0.iter().copied()
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn pop(&mut self) -> Option<Letter> {
        self.0.pop()
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len].to_vec())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// The first `len` letters of `self` repeated forever.
    pub fn cycle_prefix(&self, len: usize) -> Word {
        Word(self.0.iter().copied().cycle().take(len).collect())
    }

    pub fn repeat(&self, times: usize) -> Word {
        Word(self.0.repeat(times))
    }

    /// Whether `needle` occurs as a contiguous subword.
    pub fn contains(&self, needle: &Word) -> bool {
        needle.is_empty() || self.0.windows(needle.len()).any(|w| w == needle.0.as_slice())
    }

    /// The inverse word: letters reversed and each inverted.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars().map(Letter::from_char).collect::<Result<Vec<_>>>().map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Self {
        Word(letters)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// The contract the Cayley-graph machinery needs from a finitely generated
/// group with unique normal forms. Elements double as canonical map keys.
pub trait Group {
    type Element: Clone + Eq + Hash + fmt::Debug;

    fn name(&self) -> &str;
    fn identity(&self) -> Self::Element;
    fn mul(&self, g: &Self::Element, h: &Self::Element) -> Self::Element;
    fn inv(&self, g: &Self::Element) -> Self::Element;

    /// Symmetric generating set, in the order BFS explores it.
    fn generators(&self) -> &[(Letter, Self::Element)];

    /// Default BFS radius budget for this group.
    fn default_radius(&self) -> u32;

    fn letter_element(&self, letter: Letter) -> Result<&Self::Element> {
        self.generators()
            .iter()
            .find(|(l, _)| *l == letter)
            .map(|(_, e)| e)
            .ok_or_else(|| Error::UnknownLetter {
                letter: letter.to_char(),
                group: self.name().to_string(),
            })
    }

    fn alphabet(&self) -> Vec<Letter> {
        self.generators().iter().map(|(l, _)| *l).collect()
    }

    fn commutator(&self, g: &Self::Element, h: &Self::Element) -> Self::Element {
        // [g,h] = g⁻¹h⁻¹gh
        let gi = self.inv(g);
        let hi = self.inv(h);
        self.mul(&self.mul(&gi, &hi), &self.mul(g, h))
    }

    fn pow(&self, g: &Self::Element, n: i64) -> Self::Element {
        let base = if n < 0 { self.inv(g) } else { g.clone() };
        let mut acc = self.identity();
        for _ in 0..n.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        acc
    }
}

/// Left-to-right product of the letters of `w`.
pub fn evaluate_word<G: Group + ?Sized>(group: &G, w: &Word) -> Result<G::Element> {
    let mut acc = group.identity();
    for letter in w.iter() {
        acc = group.mul(&acc, group.letter_element(letter)?);
    }
    Ok(acc)
}

/// Elements of every prefix of `w`, from the empty prefix to `w` itself.
pub fn prefix_elements<G: Group + ?Sized>(group: &G, w: &Word) -> Result<Vec<G::Element>> {
    let mut out = Vec::with_capacity(w.len() + 1);
    let mut acc = group.identity();
    out.push(acc.clone());
    for letter in w.iter() {
        acc = group.mul(&acc, group.letter_element(letter)?);
        out.push(acc.clone());
    }
    Ok(out)
}

/// Element `c^z b^y a^x` of the discrete Heisenberg group, i.e. the
/// unitriangular matrix with `(1,2)`-entry `x`, `(2,3)`-entry `y` and
/// `(1,3)`-entry `z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct H3Element {
    #[serde(with = "crate::bigint_serde")]
    pub x: BigInt,
    #[serde(with = "crate::bigint_serde")]
    pub y: BigInt,
    #[serde(with = "crate::bigint_serde")]
    pub z: BigInt,
}

impl H3Element {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>, z: impl Into<BigInt>) -> Self {
        H3Element {
            x: x.into(),
            y: y.into(),
            z: z.into(),
        }
    }

    pub fn identity() -> Self {
        H3Element::new(0, 0, 0)
    }

    pub fn a() -> Self {
        H3Element::new(1, 0, 0)
    }

    pub fn b() -> Self {
        H3Element::new(0, 1, 0)
    }

    /// The central element `c = [a,b]`.
    pub fn c() -> Self {
        H3Element::new(0, 0, 1)
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    /// Upper-right 3x3 block as row-major entries `[[1,x,z],[0,1,y],[0,0,1]]`.
    pub fn to_matrix(&self) -> [[BigInt; 3]; 3] {
        let one = || BigInt::from(1);
        let zero = BigInt::zero;
        [
            [one(), self.x.clone(), self.z.clone()],
            [zero(), one(), self.y.clone()],
            [zero(), zero(), one()],
        ]
    }
}

impl fmt::Display for H3Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.x, self.y, self.z)
    }
}

impl FromStr for H3Element {
    type Err = Error;

    /// Parses `"x,y,z"`.
    fn from_str(s: &str) -> Result<Self> {
        let v = parse_int_list(s, "H3 element")?;
        match <[BigInt; 3]>::try_from(v) {
            Ok([x, y, z]) => Ok(H3Element { x, y, z }),
            Err(_) => Err(Error::parse("H3 element (expected x,y,z)", s)),
        }
    }
}

pub(crate) fn parse_int_list(s: &str, what: &'static str) -> Result<Vec<BigInt>> {
    s.split(',')
        .map(|t| t.trim().parse::<BigInt>().map_err(|_| Error::parse(what, s)))
        .collect()
}

pub fn h3_mul(g: &H3Element, h: &H3Element) -> H3Element {
    H3Element {
        x: &g.x + &h.x,
        y: &g.y + &h.y,
        z: &g.z + &h.z + &g.x * &h.y,
    }
}

pub fn h3_inv(g: &H3Element) -> H3Element {
    H3Element {
        x: -&g.x,
        y: -&g.y,
        z: &g.x * &g.y - &g.z,
    }
}

/// The discrete Heisenberg group with generators `a, A, b, B`.
#[derive(Clone, Debug)]
pub struct Heisenberg {
    generators: Vec<(Letter, H3Element)>,
}

impl Heisenberg {
    pub fn new() -> Self {
        Heisenberg {
            generators: vec![
                (LETTER_A, H3Element::new(1, 0, 0)),
                (LETTER_A_INV, H3Element::new(-1, 0, 0)),
                (LETTER_B, H3Element::new(0, 1, 0)),
                (LETTER_B_INV, H3Element::new(0, -1, 0)),
            ],
        }
    }
}

impl Default for Heisenberg {
    fn default() -> Self {
        Self::new()
    }
}

impl Group for Heisenberg {
    type Element = H3Element;

    fn name(&self) -> &str {
        "h3"
    }

    fn identity(&self) -> H3Element {
        H3Element::identity()
    }

    fn mul(&self, g: &H3Element, h: &H3Element) -> H3Element {
        h3_mul(g, h)
    }

    fn inv(&self, g: &H3Element) -> H3Element {
        h3_inv(g)
    }

    fn generators(&self) -> &[(Letter, H3Element)] {
        &self.generators
    }

    fn default_radius(&self) -> u32 {
        12
    }
}

/// A vector in `Z^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZdElement(pub Vec<BigInt>);

impl ZdElement {
    pub fn from_i64s(v: &[i64]) -> Self {
        ZdElement(v.iter().map(|&c| BigInt::from(c)).collect())
    }
}

impl fmt::Display for ZdElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// `Z^d` under addition with a finite symmetric generating set.
#[derive(Clone, Debug)]
pub struct ZdGroup {
    dim: usize,
    name: String,
    generators: Vec<(Letter, ZdElement)>,
}

impl ZdGroup {
    /// Builds the group from a generating list. Each generator `v` that is
    /// not the negation of an earlier one receives the next lowercase
    /// letter, and `-v` receives the uppercase form. The list must be closed
    /// under negation and must not contain zero.
    pub fn new(dim: usize, gens: &[Vec<i64>]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        let mut generators: Vec<(Letter, ZdElement)> = Vec::new();
        let mut next = 0u8;
        for g in gens {
            if g.len() != dim {
                return Err(Error::InvalidInput(format!(
                    "generator {g:?} does not have dimension {dim}"
                )));
            }
            if g.iter().all(|&c| c == 0) {
                return Err(Error::InvalidInput("zero is not a valid generator".into()));
            }
            let neg: Vec<i64> = g.iter().map(|c| -c).collect();
            if !gens.contains(&neg) {
                return Err(Error::NonSymmetricGenerators(format!("{g:?} has no negation")));
            }
            let elem = ZdElement::from_i64s(g);
            if generators.iter().any(|(_, e)| *e == elem) {
                continue;
            }
            let neg_elem = ZdElement::from_i64s(&neg);
            if generators.iter().any(|(_, e)| *e == neg_elem) {
                continue;
            }
            if next >= 26 {
                return Err(Error::InvalidInput("at most 26 generator pairs".into()));
            }
            generators.push((Letter::new(next, false), elem));
            generators.push((Letter::new(next, true), neg_elem));
            next += 1;
        }
        Ok(ZdGroup {
            dim,
            name: format!("z{dim}"),
            generators,
        })
    }

    /// `Z^d` with `±e_1, ..., ±e_d` named `a, A, b, B, ...`.
    pub fn standard(dim: usize) -> Result<Self> {
        let mut gens = Vec::new();
        for i in 0..dim {
            let mut e = vec![0; dim];
            e[i] = 1;
            gens.push(e.clone());
            e[i] = -1;
            gens.push(e);
        }
        Self::new(dim, &gens)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn parse_element(&self, s: &str) -> Result<ZdElement> {
        let v = parse_int_list(s, "Z^d element")?;
        if v.len() != self.dim {
            return Err(Error::parse("Z^d element (wrong dimension)", s));
        }
        Ok(ZdElement(v))
    }

    /// L1 norm; the word length for the standard generators only.
    pub fn l1_norm(g: &ZdElement) -> BigInt {
        g.0.iter().map(|c| c.abs()).sum()
    }
}

impl Group for ZdGroup {
    type Element = ZdElement;

    fn name(&self) -> &str {
        &self.name
    }

    fn identity(&self) -> ZdElement {
        ZdElement(vec![BigInt::zero(); self.dim])
    }

    fn mul(&self, g: &ZdElement, h: &ZdElement) -> ZdElement {
        ZdElement(g.0.iter().zip(&h.0).map(|(a, b)| a + b).collect())
    }

    fn inv(&self, g: &ZdElement) -> ZdElement {
        ZdElement(g.0.iter().map(|a| -a).collect())
    }

    fn generators(&self) -> &[(Letter, ZdElement)] {
        &self.generators
    }

    fn default_radius(&self) -> u32 {
        20
    }
}

//! Busemann points of the Heisenberg group: the four corner points and the
//! two integer families, their closed-form evaluation, the group action on
//! parameters, the standard geodesic families converging to them, and
//! window-based convergence checks.
//!
//! Points are written `corner:+-`, `a:+,m,n` and `b:-,m,l`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{evaluate_word, h3_inv, h3_mul, H3Element, Heisenberg, Letter, Word};
use crate::group::{LETTER_A, LETTER_A_INV, LETTER_B, LETTER_B_INV};
use crate::oracle::{horofunction_snapshot, WordMetric};

/// Extra agreeing probes required after the stabilisation time.
pub const CONVERGENCE_MARGIN: u64 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            '+' => Ok(Sign::Plus),
            '-' => Ok(Sign::Minus),
            _ => Err(Error::parse("sign", c.to_string())),
        }
    }

    fn times(self, v: &BigInt) -> BigInt {
        match self {
            Sign::Plus => v.clone(),
            Sign::Minus => -v,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A Busemann point of the Heisenberg group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BusemannPoint {
    /// `g ↦ −εa·x − εb·y`.
    Corner { ea: Sign, eb: Sign },
    /// Limit of `t ↦ c^m b^n a^{εt}`.
    AType { eps: Sign, m: BigInt, n: BigInt },
    /// Limit of `t ↦ c^{m+εtl} b^{εt} a^l`.
    BType { eps: Sign, m: BigInt, l: BigInt },
}

impl BusemannPoint {
    pub fn corner(ea: Sign, eb: Sign) -> Self {
        BusemannPoint::Corner { ea, eb }
    }

    pub fn a_type(eps: Sign, m: impl Into<BigInt>, n: impl Into<BigInt>) -> Self {
        BusemannPoint::AType {
            eps,
            m: m.into(),
            n: n.into(),
        }
    }

    pub fn b_type(eps: Sign, m: impl Into<BigInt>, l: impl Into<BigInt>) -> Self {
        BusemannPoint::BType {
            eps,
            m: m.into(),
            l: l.into(),
        }
    }

    pub fn corners() -> [BusemannPoint; 4] {
        [
            Self::corner(Sign::Plus, Sign::Plus),
            Self::corner(Sign::Minus, Sign::Plus),
            Self::corner(Sign::Plus, Sign::Minus),
            Self::corner(Sign::Minus, Sign::Minus),
        ]
    }

    pub fn is_corner(&self) -> bool {
        matches!(self, BusemannPoint::Corner { .. })
    }
}

impl fmt::Display for BusemannPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BusemannPoint::Corner { ea, eb } => write!(f, "corner:{ea}{eb}"),
            BusemannPoint::AType { eps, m, n } => write!(f, "a:{eps},{m},{n}"),
            BusemannPoint::BType { eps, m, l } => write!(f, "b:{eps},{m},{l}"),
        }
    }
}

impl FromStr for BusemannPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::parse("Busemann point", s);
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        if kind == "corner" {
            let mut chars = rest.chars();
            let (Some(a), Some(b), None) = (chars.next(), chars.next(), chars.next()) else {
                return Err(bad());
            };
            return Ok(Self::corner(
                Sign::from_char(a).map_err(|_| bad())?,
                Sign::from_char(b).map_err(|_| bad())?,
            ));
        }
        let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
        let [sign, m, p] = parts.as_slice() else {
            return Err(bad());
        };
        let mut sc = sign.chars();
        let eps = match (sc.next(), sc.next()) {
            (Some(c), None) => Sign::from_char(c).map_err(|_| bad())?,
            _ => return Err(bad()),
        };
        let m: BigInt = m.parse().map_err(|_| bad())?;
        let p: BigInt = p.parse().map_err(|_| bad())?;
        match kind {
            "a" => Ok(Self::a_type(eps, m, p)),
            "b" => Ok(Self::b_type(eps, m, p)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for BusemannPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BusemannPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `J(u, v) = 1` if `v ≠ 0` and `uv ≥ 0`, else `0`.
pub fn j_indicator(u: &BigInt, v: &BigInt) -> u8 {
    let uv = u * v;
    u8::from(!v.is_zero() && !uv.is_negative())
}

fn two_j(u: &BigInt, v: &BigInt) -> BigInt {
    BigInt::from(2 * j_indicator(u, v))
}

/// Value of the Busemann function `p` at `g`.
pub fn eval_point(p: &BusemannPoint, g: &H3Element) -> BigInt {
    let (i, j, k) = (&g.x, &g.y, &g.z);
    match p {
        BusemannPoint::Corner { ea, eb } => -ea.times(i) - eb.times(j),
        BusemannPoint::AType { eps, m, n } => {
            let jn = j - n;
            let v = &jn * i - (k - m);
            -eps.times(i) + jn.abs() - n.abs() + two_j(&eps.times(&jn), &v) - two_j(&-eps.times(n), m)
        }
        BusemannPoint::BType { eps, m, l } => {
            let il = i - l;
            let v = j * l - (k - m);
            -eps.times(j) + il.abs() - l.abs() + two_j(&-eps.times(&il), &v) - two_j(&eps.times(l), m)
        }
    }
}

/// The image `g·p` in closed form.
pub fn act(g: &H3Element, p: &BusemannPoint) -> BusemannPoint {
    let (x, y, z) = (&g.x, &g.y, &g.z);
    match p {
        BusemannPoint::Corner { .. } => p.clone(),
        BusemannPoint::AType { eps, m, n } => BusemannPoint::AType {
            eps: *eps,
            m: m + z + n * x,
            n: n + y,
        },
        BusemannPoint::BType { eps, m, l } => {
            let lx = l + x;
            BusemannPoint::BType {
                eps: *eps,
                m: m + z - y * &lx,
                l: lx,
            }
        }
    }
}

/// `x ↦ p(g⁻¹x) − p(g⁻¹)` on the window, straight from the definition of
/// the action on horofunctions.
pub fn act_via_definition(g: &H3Element, p: &BusemannPoint, window: &[H3Element]) -> Vec<(H3Element, BigInt)> {
    let gi = h3_inv(g);
    let base = eval_point(p, &gi);
    window
        .iter()
        .map(|x| (x.clone(), eval_point(p, &h3_mul(&gi, x)) - &base))
        .collect()
}

/// An eventually periodic infinite word `prefix · period^∞` over one of the
/// alphabets `{a^{εa}, b^{εb}}`, with both letters in the period.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwoLetterPattern {
    ea: Sign,
    eb: Sign,
    prefix: Word,
    period: Word,
}

impl TwoLetterPattern {
    pub fn new(prefix: Word, period: Word) -> Result<Self> {
        let sign_of = |l: Letter| if l.is_inverse() { Sign::Minus } else { Sign::Plus };
        let pick = |index: u8| period.iter().find(|l| l.index() == index).map(sign_of);
        let (Some(ea), Some(eb)) = (pick(0), pick(1)) else {
            return Err(Error::InvalidInput(format!(
                "period {period} must contain both an a-letter and a b-letter"
            )));
        };
        let a = if ea == Sign::Plus { LETTER_A } else { LETTER_A_INV };
        let b = if eb == Sign::Plus { LETTER_B } else { LETTER_B_INV };
        for l in prefix.iter().chain(period.iter()) {
            if l != a && l != b {
                return Err(Error::InvalidInput(format!(
                    "letter {l} is outside the alphabet {{{a}, {b}}}"
                )));
            }
        }
        Ok(TwoLetterPattern { ea, eb, prefix, period })
    }

    pub fn periodic(period: Word) -> Result<Self> {
        Self::new(Word::empty(), period)
    }

    pub fn signs(&self) -> (Sign, Sign) {
        (self.ea, self.eb)
    }

    pub fn prefix(&self) -> &Word {
        &self.prefix
    }

    pub fn period(&self) -> &Word {
        &self.period
    }

    /// The first `len` letters.
    pub fn word(&self, len: usize) -> Word {
        self.prefix
            .iter()
            .chain(self.period.letters().iter().copied().cycle())
            .take(len)
            .collect()
    }
}

impl fmt::Display for TwoLetterPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.prefix.is_empty() {
            write!(f, "{}", self.period)
        } else {
            write!(f, "{},{}", self.prefix, self.period)
        }
    }
}

/// Geodesic rays from the identity's neighbourhood whose limits exhaust the
/// Busemann points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum StandardPath {
    /// `t ↦ c^m b^n a^{εt}`.
    Gamma { eps: Sign, m: BigInt, n: BigInt },
    /// `t ↦ c^{m+εtl} b^{εt} a^l`.
    Lambda { eps: Sign, m: BigInt, l: BigInt },
    /// `t ↦` the first `t` letters of the pattern.
    TwoLetter(TwoLetterPattern),
}

impl StandardPath {
    pub fn gamma(eps: Sign, m: impl Into<BigInt>, n: impl Into<BigInt>) -> Self {
        StandardPath::Gamma {
            eps,
            m: m.into(),
            n: n.into(),
        }
    }

    pub fn lambda(eps: Sign, m: impl Into<BigInt>, l: impl Into<BigInt>) -> Self {
        StandardPath::Lambda {
            eps,
            m: m.into(),
            l: l.into(),
        }
    }

    pub fn point(&self, t: u64) -> H3Element {
        let t = BigInt::from(t);
        match self {
            StandardPath::Gamma { eps, m, n } => H3Element {
                x: eps.times(&t),
                y: n.clone(),
                z: m.clone(),
            },
            StandardPath::Lambda { eps, m, l } => {
                let et = eps.times(&t);
                H3Element {
                    x: l.clone(),
                    z: m + &et * l,
                    y: et,
                }
            }
            StandardPath::TwoLetter(p) => {
                let len = usize::try_from(&t).expect("path time fits in memory");
                evaluate_word(&Heisenberg::new(), &p.word(len)).expect("pattern letters are H3 generators")
            }
        }
    }

    pub fn points(&self, t_max: u64) -> Vec<H3Element> {
        match self {
            StandardPath::TwoLetter(p) => {
                let h3 = Heisenberg::new();
                crate::group::prefix_elements(&h3, &p.word(t_max as usize)).expect("pattern letters are H3 generators")
            }
            _ => (0..=t_max).map(|t| self.point(t)).collect(),
        }
    }
}

impl fmt::Display for StandardPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StandardPath::Gamma { eps, m, n } => write!(f, "gamma:{eps},{m},{n}"),
            StandardPath::Lambda { eps, m, l } => write!(f, "lambda:{eps},{m},{l}"),
            StandardPath::TwoLetter(p) => write!(f, "two:{p}"),
        }
    }
}

impl FromStr for StandardPath {
    type Err = Error;

    /// `gamma:+,m,n`, `lambda:-,m,l`, `two:<period>` or `two:<prefix>,<period>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::parse("standard path", s);
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "gamma" | "lambda" => {
                let tag = if kind == "gamma" { "a" } else { "b" };
                match format!("{tag}:{rest}").parse::<BusemannPoint>().map_err(|_| bad())? {
                    BusemannPoint::AType { eps, m, n } => Ok(StandardPath::Gamma { eps, m, n }),
                    BusemannPoint::BType { eps, m, l } => Ok(StandardPath::Lambda { eps, m, l }),
                    BusemannPoint::Corner { .. } => Err(bad()),
                }
            }
            "two" => {
                let pattern = match rest.split_once(',') {
                    Some((prefix, period)) => TwoLetterPattern::new(prefix.parse()?, period.parse()?)?,
                    None => TwoLetterPattern::periodic(rest.parse()?)?,
                };
                Ok(StandardPath::TwoLetter(pattern))
            }
            _ => Err(bad()),
        }
    }
}

pub fn limit_of_standard_path(path: &StandardPath) -> BusemannPoint {
    match path {
        StandardPath::Gamma { eps, m, n } => BusemannPoint::AType {
            eps: *eps,
            m: m.clone(),
            n: n.clone(),
        },
        StandardPath::Lambda { eps, m, l } => BusemannPoint::BType {
            eps: *eps,
            m: m.clone(),
            l: l.clone(),
        },
        StandardPath::TwoLetter(p) => {
            let (ea, eb) = p.signs();
            BusemannPoint::Corner { ea, eb }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub t: u64,
    pub x: H3Element,
    #[serde(with = "crate::bigint_serde")]
    pub expected: BigInt,
    #[serde(with = "crate::bigint_serde")]
    pub actual: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Convergence {
    /// Every probe `t >= time` agreed, and at least
    /// [`CONVERGENCE_MARGIN`] probes followed `time`.
    Stabilised { time: u64, probes: u64 },
    /// Too few agreeing probes at the end of the schedule.
    Failed { last_mismatch: Option<Mismatch> },
}

impl Convergence {
    pub fn is_stabilised(&self) -> bool {
        matches!(self, Convergence::Stabilised { .. })
    }
}

/// Probes `t = 0, 1, ..., t_max` and compares `ψ_{path(t)}` with `p` on the
/// window. Metric errors (budget exhaustion) are returned as `Err`, never as
/// a mismatch.
pub fn verify_convergence<M>(
    path: &StandardPath,
    p: &BusemannPoint,
    window: &[H3Element],
    t_max: u64,
    metric: &M,
) -> Result<Convergence>
where
    M: WordMetric<Element = H3Element> + ?Sized,
{
    let expected: Vec<BigInt> = window.iter().map(|x| eval_point(p, x)).collect();
    let identity = H3Element::identity();
    let mut last_mismatch = None;
    for (t, z) in path.points(t_max).into_iter().enumerate() {
        let snap = horofunction_snapshot(metric, &identity, &z, window)?;
        let bad = snap
            .entries()
            .iter()
            .zip(&expected)
            .find(|((_, actual), want)| actual != *want);
        if let Some(((x, actual), want)) = bad {
            last_mismatch = Some(Mismatch {
                t: t as u64,
                x: x.clone(),
                expected: want.clone(),
                actual: actual.clone(),
            });
        }
    }
    let time = last_mismatch.as_ref().map_or(0, |m| m.t + 1);
    let probes = (t_max + 1).saturating_sub(time);
    if probes > CONVERGENCE_MARGIN {
        Ok(Convergence::Stabilised { time, probes })
    } else {
        Ok(Convergence::Failed { last_mismatch })
    }
}

/// Thresholds past which `AType(+,m,n)` and `Corner(+,+)` agree on a window.
#[derive(Clone, Debug)]
pub struct WwThresholds {
    window: Vec<H3Element>,
    /// Least `N >= 0` such that every `n >= N` has a finite `M(n)`.
    pub n_min: BigInt,
}

impl WwThresholds {
    pub fn window(&self) -> &[H3Element] {
        &self.window
    }

    pub fn agrees(&self, m: &BigInt, n: &BigInt) -> bool {
        agree_on(&self.window, m, n)
    }

    /// Least `M >= 0` with agreement for every `m >= M`, or `None` if
    /// agreement fails for arbitrarily large `m`.
    pub fn m_threshold(&self, n: &BigInt) -> Option<BigInt> {
        m_threshold_on(&self.window, n)
    }

    /// `(N, M(N))`.
    pub fn summary(&self) -> (BigInt, BigInt) {
        let m = self.m_threshold(&self.n_min).expect("M(N) is finite by construction");
        (self.n_min.clone(), m)
    }
}

fn agree_on(window: &[H3Element], m: &BigInt, n: &BigInt) -> bool {
    let a = BusemannPoint::AType {
        eps: Sign::Plus,
        m: m.clone(),
        n: n.clone(),
    };
    let corner = BusemannPoint::corner(Sign::Plus, Sign::Plus);
    window.iter().all(|x| eval_point(&a, x) == eval_point(&corner, x))
}

fn m_threshold_on(window: &[H3Element], n: &BigInt) -> Option<BigInt> {
    // once m exceeds every |(j−n)i − k| all J-terms are frozen
    let bound = window
        .iter()
        .map(|g| ((&g.y - n) * &g.x - &g.z).abs())
        .max()
        .unwrap_or_else(BigInt::zero);
    let frozen = &bound + 1;
    if !agree_on(window, &frozen, n) {
        return None;
    }
    let mut m = bound;
    while !m.is_negative() {
        if !agree_on(window, &m, n) {
            return Some(m + 1);
        }
        m -= 1;
    }
    Some(BigInt::zero())
}

/// Exact thresholds for the radius-`R` window, `n` and `m` ranging over the
/// non-negative integers.
pub fn ww_limit_check(window_radius: u32) -> WwThresholds {
    let window = crate::oracle::h3_window(window_radius);
    // every n > R has a finite threshold: |j−n| − |n| = −j on the window
    let mut n_min = BigInt::from(window_radius) + BigInt::one();
    while n_min.is_positive() {
        let below = &n_min - BigInt::one();
        if m_threshold_on(&window, &below).is_none() {
            break;
        }
        n_min = below;
    }
    WwThresholds { window, n_min }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Separation {
    pub separate: bool,
    pub collisions: Vec<(BusemannPoint, BusemannPoint)>,
}

/// Do the points have pairwise distinct restrictions to the window?
pub fn points_separate(points: &[BusemannPoint], window: &[H3Element]) -> Separation {
    let mut seen: HashMap<Vec<BigInt>, &BusemannPoint> = HashMap::new();
    let mut collisions = Vec::new();
    for p in points {
        let key: Vec<BigInt> = window.iter().map(|x| eval_point(p, x)).collect();
        match seen.get(&key) {
            Some(q) if *q != p => collisions.push(((*q).clone(), p.clone())),
            Some(_) => {}
            None => {
                seen.insert(key, p);
            }
        }
    }
    Separation {
        separate: collisions.is_empty(),
        collisions,
    }
}

/// The four corners plus every `AType` and `BType` point with both signs
/// and parameters in `-bound..=bound`.
pub fn parameter_grid(bound: i64) -> Vec<BusemannPoint> {
    let mut out = BusemannPoint::corners().to_vec();
    for eps in Sign::BOTH {
        for m in -bound..=bound {
            for p in -bound..=bound {
                out.push(BusemannPoint::a_type(eps, m, p));
            }
        }
    }
    for eps in Sign::BOTH {
        for m in -bound..=bound {
            for p in -bound..=bound {
                out.push(BusemannPoint::b_type(eps, m, p));
            }
        }
    }
    out
}

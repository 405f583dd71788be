//! Brute-force ground truth over the Cayley graph: BFS balls, exact
//! distances, geodesic-word checks and enumeration, horofunction
//! snapshots and rejoin witnesses between geodesics.
//!
//! Nothing here knows any closed-form metric. A ball of radius `r` answers
//! distance queries exactly up to `2r`: if `r < d(e,g) <= 2r` then some
//! point `v` on a geodesic to `g` lies on the sphere of radius `r`, so
//! `d(e,g) = r + min_{|v| = r} d(e, v⁻¹g)`.

use std::collections::VecDeque;

use indexmap::IndexMap;
use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::group::{prefix_elements, Group, Heisenberg, H3Element, Word};
use crate::metric::h3_dist;

/// Upper bound on BFS radii.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_radius: u32,
}

impl Budget {
    pub fn new(max_radius: u32) -> Self {
        Budget { max_radius }
    }

    pub fn for_group<G: Group + ?Sized>(group: &G) -> Self {
        Budget {
            max_radius: group.default_radius(),
        }
    }

    fn check(&self, radius: u64) -> Result<()> {
        if radius > u64::from(self.max_radius) {
            Err(Error::BudgetExceeded {
                requested: radius,
                budget: self.max_radius,
            })
        } else {
            Ok(())
        }
    }
}

/// Every element within `radius` of the identity with its exact distance,
/// stored in BFS order (sphere by sphere, generators in group order).
#[derive(Clone, Debug)]
pub struct DistanceBall<E> {
    group: String,
    radius: u32,
    dist: IndexMap<E, u32>,
    // sphere r occupies dist indices layer_starts[r]..layer_starts[r+1]
    layer_starts: Vec<usize>,
}

impl<E: Clone + Eq + std::hash::Hash> DistanceBall<E> {
    pub fn group(&self) -> &str {
        &self.group
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn get(&self, g: &E) -> Option<u32> {
        self.dist.get(g).copied()
    }

    pub fn contains(&self, g: &E) -> bool {
        self.dist.contains_key(g)
    }

    /// `(element, distance)` pairs in BFS order.
    pub fn iter(&self) -> impl Iterator<Item = (&E, u32)> {
        self.dist.iter().map(|(e, d)| (e, *d))
    }

    pub fn elements(&self) -> impl Iterator<Item = &E> {
        self.dist.keys()
    }

    /// Elements at exactly distance `r`.
    pub fn sphere(&self, r: u32) -> impl Iterator<Item = &E> {
        let (lo, hi) = if r <= self.radius {
            (self.layer_starts[r as usize], self.layer_starts[r as usize + 1])
        } else {
            (0, 0)
        };
        (lo..hi).map(move |i| self.dist.get_index(i).expect("index in range").0)
    }

    /// Elements within distance `r`, a prefix of the BFS order.
    pub fn within(&self, r: u32) -> impl Iterator<Item = &E> {
        let hi = self.layer_starts[(r.min(self.radius) + 1) as usize];
        (0..hi).map(move |i| self.dist.get_index(i).expect("index in range").0)
    }

    /// `|B(r)|` for `r = 0..=radius`.
    pub fn cumulative_sizes(&self) -> Vec<usize> {
        self.layer_starts[1..].to_vec()
    }
}

/// Exact BFS ball of the given radius.
pub fn bfs_ball<G: Group + ?Sized>(group: &G, radius: u32, budget: Budget) -> Result<DistanceBall<G::Element>> {
    budget.check(radius.into())?;
    let mut dist: IndexMap<G::Element, u32> = IndexMap::new();
    dist.insert(group.identity(), 0);
    let mut layer_starts = vec![0, 1];
    let mut frontier = 0..1;
    for r in 1..=radius {
        for idx in frontier.clone() {
            let g = dist.get_index(idx).expect("frontier index").0.clone();
            for (_, s) in group.generators() {
                let h = group.mul(&g, s);
                dist.entry(h).or_insert(r);
            }
        }
        frontier = frontier.end..dist.len();
        layer_starts.push(dist.len());
    }
    Ok(DistanceBall {
        group: group.name().to_string(),
        radius,
        dist,
        layer_starts,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleDistance {
    Exact(u32),
    BeyondRadius,
}

/// BFS distance from the identity to `g`, or [`OracleDistance::BeyondRadius`]
/// when `g` is farther than `max_radius`.
pub fn oracle_dist<G: Group + ?Sized>(group: &G, g: &G::Element, max_radius: u32, budget: Budget) -> Result<OracleDistance> {
    budget.check(max_radius.into())?;
    let mut seen = std::collections::HashSet::new();
    let mut queue = VecDeque::new();
    let id = group.identity();
    seen.insert(id.clone());
    queue.push_back((id, 0u32));
    while let Some((h, d)) = queue.pop_front() {
        if &h == g {
            return Ok(OracleDistance::Exact(d));
        }
        if d == max_radius {
            continue;
        }
        for (_, s) in group.generators() {
            let next = group.mul(&h, s);
            if seen.insert(next.clone()) {
                queue.push_back((next, d + 1));
            }
        }
    }
    Ok(OracleDistance::BeyondRadius)
}

/// A BFS ball plus its group: exact distances up to twice the radius.
pub struct CayleyOracle<'g, G: Group + ?Sized> {
    group: &'g G,
    ball: DistanceBall<G::Element>,
    outer_inverses: Vec<G::Element>,
}

impl<'g, G: Group + ?Sized> CayleyOracle<'g, G> {
    pub fn new(group: &'g G, radius: u32, budget: Budget) -> Result<Self> {
        let ball = bfs_ball(group, radius, budget)?;
        Ok(Self::from_ball(group, ball))
    }

    pub fn from_ball(group: &'g G, ball: DistanceBall<G::Element>) -> Self {
        let outer_inverses = ball.sphere(ball.radius()).map(|v| group.inv(v)).collect();
        CayleyOracle {
            group,
            ball,
            outer_inverses,
        }
    }

    pub fn group(&self) -> &'g G {
        self.group
    }

    pub fn ball(&self) -> &DistanceBall<G::Element> {
        &self.ball
    }

    /// Largest distance this oracle can certify.
    pub fn reach(&self) -> u32 {
        2 * self.ball.radius()
    }

    /// Exact `d(e, g)` if it is at most [`reach`](Self::reach).
    pub fn norm(&self, g: &G::Element) -> Option<u32> {
        if let Some(d) = self.ball.get(g) {
            return Some(d);
        }
        let r = self.ball.radius();
        self.outer_inverses
            .iter()
            .filter_map(|vi| self.ball.get(&self.group.mul(vi, g)))
            .min()
            .map(|rest| r + rest)
    }

    pub fn distance(&self, g: &G::Element, h: &G::Element) -> Option<u32> {
        self.norm(&self.group.mul(&self.group.inv(g), h))
    }

    pub fn norm_checked(&self, g: &G::Element) -> Result<u32> {
        self.norm(g).ok_or(Error::BudgetExceeded {
            requested: u64::from(self.reach()) + 1,
            budget: self.ball.radius(),
        })
    }

    pub fn distance_checked(&self, g: &G::Element, h: &G::Element) -> Result<u32> {
        self.norm_checked(&self.group.mul(&self.group.inv(g), h))
    }

    /// Every prefix `p` of `w` satisfies `|p| = d(e, p̄)`.
    pub fn is_geodesic_word(&self, w: &Word) -> Result<bool> {
        if w.len() as u64 > u64::from(self.reach()) {
            return Err(Error::BudgetExceeded {
                requested: w.len() as u64,
                budget: self.ball.radius(),
            });
        }
        let prefixes = prefix_elements(self.group, w)?;
        for (len, p) in prefixes.iter().enumerate() {
            // |p| <= len <= reach, so the lookup always resolves
            if self.norm(p) != Some(len as u32) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Geodesic words from `from` to `to` in lexicographic order, at most `cap`.
    pub fn geodesic_words_between(&self, from: &G::Element, to: &G::Element, cap: usize) -> Result<Vec<Word>> {
        let total = self.distance_checked(from, to)?;
        let mut letters: Vec<_> = self.group.generators().to_vec();
        letters.sort_by_key(|(l, _)| *l);
        let mut out = Vec::new();
        let mut current = Word::empty();
        self.extend_geodesics(from, to, total, &letters, &mut current, &mut out, cap);
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_geodesics(
        &self,
        at: &G::Element,
        to: &G::Element,
        remaining: u32,
        letters: &[(crate::group::Letter, G::Element)],
        current: &mut Word,
        out: &mut Vec<Word>,
        cap: usize,
    ) {
        if out.len() >= cap {
            return;
        }
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        for (l, s) in letters {
            let next = self.group.mul(at, s);
            if self.distance(&next, to) == Some(remaining - 1) {
                current.push(*l);
                self.extend_geodesics(&next, to, remaining - 1, letters, current, out, cap);
                current.pop();
                if out.len() >= cap {
                    return;
                }
            }
        }
    }

    pub fn geodesic_words_to(&self, g: &G::Element, cap: usize) -> Result<Vec<Word>> {
        self.geodesic_words_between(&self.group.identity(), g, cap)
    }

    /// `ψ_z` restricted to `window`.
    pub fn snapshot(&self, z: &G::Element, window: &[G::Element]) -> Result<HorofunctionSnapshot<G::Element>> {
        horofunction_snapshot(self, &self.group.identity(), z, window)
    }
}

/// Is every prefix of `w` geodesic? Builds a ball just large enough.
pub fn is_geodesic_word<G: Group + ?Sized>(group: &G, w: &Word, budget: Budget) -> Result<bool> {
    let radius = (w.len() as u32).min(budget.max_radius);
    let oracle = CayleyOracle::new(group, radius, budget)?;
    oracle.is_geodesic_word(w)
}

/// All geodesic words representing `g`, lexicographically, truncated at `cap`.
pub fn geodesic_words_to<G: Group + ?Sized>(group: &G, g: &G::Element, cap: usize, budget: Budget) -> Result<Vec<Word>> {
    let d = match oracle_dist(group, g, budget.max_radius, budget)? {
        OracleDistance::Exact(d) => d,
        OracleDistance::BeyondRadius => {
            return Err(Error::BudgetExceeded {
                requested: u64::from(budget.max_radius) + 1,
                budget: budget.max_radius,
            })
        }
    };
    let oracle = CayleyOracle::new(group, d, budget)?;
    oracle.geodesic_words_to(g, cap)
}

/// A source of exact distances.
pub trait WordMetric {
    type Element;

    fn distance(&self, g: &Self::Element, h: &Self::Element) -> Result<BigInt>;
}

impl<G: Group + ?Sized> WordMetric for CayleyOracle<'_, G> {
    type Element = G::Element;

    fn distance(&self, g: &G::Element, h: &G::Element) -> Result<BigInt> {
        self.distance_checked(g, h).map(BigInt::from)
    }
}

/// Distances on the Heisenberg group from the closed-form word length.
#[derive(Clone, Copy, Debug, Default)]
pub struct H3FormulaMetric;

impl WordMetric for H3FormulaMetric {
    type Element = H3Element;

    fn distance(&self, g: &H3Element, h: &H3Element) -> Result<BigInt> {
        Ok(h3_dist(g, h))
    }
}

/// The function `ψ_z(x) = d(x,z) − d(e,z)` restricted to a finite window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HorofunctionSnapshot<E> {
    pub z: E,
    entries: Vec<(E, BigInt)>,
}

impl<E: PartialEq> HorofunctionSnapshot<E> {
    pub fn entries(&self) -> &[(E, BigInt)] {
        &self.entries
    }

    pub fn value(&self, x: &E) -> Option<&BigInt> {
        self.entries.iter().find(|(e, _)| e == x).map(|(_, v)| v)
    }

    pub fn values(&self) -> impl Iterator<Item = &BigInt> {
        self.entries.iter().map(|(_, v)| v)
    }

    /// Same values on the same window, ignoring which `z` produced them.
    pub fn same_restriction(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

pub fn horofunction_snapshot<M: WordMetric + ?Sized>(
    metric: &M,
    identity: &M::Element,
    z: &M::Element,
    window: &[M::Element],
) -> Result<HorofunctionSnapshot<M::Element>>
where
    M::Element: Clone,
{
    let base = metric.distance(identity, z)?;
    let entries = window
        .iter()
        .map(|x| Ok((x.clone(), metric.distance(x, z)? - &base)))
        .collect::<Result<Vec<_>>>()?;
    Ok(HorofunctionSnapshot { z: z.clone(), entries })
}

/// Searches for a geodesic word that follows `w1` for its first `n` letters,
/// then passes through a point `w2(s)` with `s >= n`, and ends on `w1`'s path
/// at `w1(len)`. Returns the shortest such word of length at most `horizon`,
/// preferring the earliest meeting point and then lexicographic order.
#[allow(clippy::needless_range_loop)]
pub fn rejoin_witness<G: Group + ?Sized>(
    group: &G,
    w1: &Word,
    w2: &Word,
    n: usize,
    horizon: usize,
    budget: Budget,
) -> Result<Option<Word>> {
    if w1.len() < horizon || w2.len() < horizon {
        return Err(Error::InvalidInput(format!(
            "both words need at least {horizon} letters"
        )));
    }
    if n > horizon {
        return Ok(None);
    }
    let oracle = CayleyOracle::new(group, horizon as u32, budget)?;
    let w1 = w1.prefix(horizon);
    let w2 = w2.prefix(horizon);
    for w in [&w1, &w2] {
        if !oracle.is_geodesic_word(w)? {
            return Err(Error::InvalidInput(format!("{w} is not a geodesic word")));
        }
    }
    let p1 = prefix_elements(group, &w1)?;
    let p2 = prefix_elements(group, &w2)?;
    for len in n..=horizon {
        for s in n..=len {
            let to_meet = oracle.distance(&p1[n], &p2[s]);
            if to_meet != Some((s - n) as u32) {
                continue;
            }
            if oracle.distance(&p2[s], &p1[len]) != Some((len - s) as u32) {
                continue;
            }
            let first = oracle.geodesic_words_between(&p1[n], &p2[s], 1)?;
            let second = oracle.geodesic_words_between(&p2[s], &p1[len], 1)?;
            let witness = w1.prefix(n).concat(&first[0]).concat(&second[0]);
            return Ok(Some(witness));
        }
    }
    Ok(None)
}

/// The radius-`r` ball of the Heisenberg group in BFS order.
pub fn h3_window(radius: u32) -> Vec<H3Element> {
    let h3 = Heisenberg::new();
    bfs_ball(&h3, radius, Budget::new(radius))
        .expect("budget equals radius")
        .elements()
        .cloned()
        .collect()
}

//! The projection `φ` to the free abelian quotient, the polytope
//! `P = conv(φ(S))` with its facets and facet alphabets, facet words and
//! their limits, and orbit/stabiliser checks on the Heisenberg boundary.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::boundary::{act, limit_of_standard_path, verify_convergence, BusemannPoint, Convergence, StandardPath, TwoLetterPattern};
use crate::error::{Error, Result};
use crate::example1::{Ex1Element, Example1};
use crate::group::{prefix_elements, Group, H3Element, Heisenberg, Letter, Word, ZdElement, ZdGroup};
use crate::oracle::{bfs_ball, Budget, CayleyOracle, WordMetric};

/// A group with a homomorphism `φ` onto `Z^N`.
pub trait Abelianized: Group {
    fn abelian_dim(&self) -> usize;
    fn phi(&self, g: &Self::Element) -> Vec<BigInt>;
}

impl Abelianized for Heisenberg {
    fn abelian_dim(&self) -> usize {
        2
    }

    /// `c^z b^y a^x ↦ (x, y)`.
    fn phi(&self, g: &H3Element) -> Vec<BigInt> {
        vec![g.x.clone(), g.y.clone()]
    }
}

impl Abelianized for Example1 {
    fn abelian_dim(&self) -> usize {
        2
    }

    /// `g^i h^j c^k b^l a^m ↦ (l, m)`.
    fn phi(&self, g: &Ex1Element) -> Vec<BigInt> {
        vec![g.l.clone(), g.m.clone()]
    }
}

impl Abelianized for ZdGroup {
    fn abelian_dim(&self) -> usize {
        self.dim()
    }

    fn phi(&self, g: &ZdElement) -> Vec<BigInt> {
        g.0.clone()
    }
}

/// `φ(s)` for each generator, in alphabet order.
pub fn project_generators<G: Abelianized + ?Sized>(group: &G) -> Vec<(Letter, Vec<BigInt>)> {
    group.generators().iter().map(|(l, s)| (*l, group.phi(s))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    /// `f` with `f ≡ 1` on the facet and `f < 1` on the rest of the hull.
    pub functional: Vec<BigRational>,
    pub vertices: Vec<Vec<BigInt>>,
}

impl Facet {
    pub fn eval(&self, p: &[BigInt]) -> BigRational {
        self.functional
            .iter()
            .zip(p)
            .map(|(f, x)| f * BigRational::from_integer(x.clone()))
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolytope {
    pub dim: usize,
    pub vertices: Vec<Vec<BigInt>>,
    pub facets: Vec<Facet>,
}

fn to_rational(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

fn rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = &row[c] / &pivot_row[c];
                for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                    *x -= &factor * p;
                }
            }
        }
        r += 1;
    }
    r
}

fn sub(p: &[BigInt], q: &[BigInt]) -> Vec<BigInt> {
    p.iter().zip(q).map(|(a, b)| a - b).collect()
}

fn dot(p: &[BigInt], q: &[BigInt]) -> BigInt {
    p.iter().zip(q).map(|(a, b)| a * b).sum()
}

/// Normal to the hyperplane through `pts` (exactly `dim` points), or `None`
/// if they are affinely dependent.
fn hyperplane_normal(pts: &[&Vec<BigInt>]) -> Option<Vec<BigInt>> {
    let n = match pts.len() {
        1 => vec![BigInt::one()],
        2 => {
            let d = sub(pts[1], pts[0]);
            vec![-&d[1], d[0].clone()]
        }
        3 => {
            let u = sub(pts[1], pts[0]);
            let v = sub(pts[2], pts[0]);
            vec![
                &u[1] * &v[2] - &u[2] * &v[1],
                &u[2] * &v[0] - &u[0] * &v[2],
                &u[0] * &v[1] - &u[1] * &v[0],
            ]
        }
        _ => unreachable!("dimension checked by caller"),
    };
    (!n.iter().all(Zero::is_zero)).then_some(n)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Convex hull of lattice points in dimension 1 to 3 by testing every
/// hyperplane through `N` of the points. The origin must be interior.
pub fn convex_hull(points: &[Vec<BigInt>]) -> Result<LatticePolytope> {
    let Some(first) = points.first() else {
        return Err(Error::InvalidInput("convex hull of no points".into()));
    };
    let dim = first.len();
    if !(1..=3).contains(&dim) {
        return Err(Error::UnsupportedDimension(dim));
    }
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::InvalidInput("points have mixed dimensions".into()));
    }
    let mut pts: Vec<Vec<BigInt>> = points.to_vec();
    pts.sort();
    pts.dedup();
    let diffs: Vec<Vec<BigRational>> = pts.iter().map(|p| to_rational(&sub(p, &pts[0]))).collect();
    let span = rank(&diffs);
    if span < dim {
        return Err(Error::DegenerateHull { span, dim });
    }

    let mut facets: Vec<Facet> = Vec::new();
    let mut seen: HashSet<Vec<BigRational>> = HashSet::new();
    for subset in subsets(pts.len(), dim) {
        let chosen: Vec<&Vec<BigInt>> = subset.iter().map(|&i| &pts[i]).collect();
        let Some(mut normal) = hyperplane_normal(&chosen) else {
            continue;
        };
        let mut offset = dot(&normal, chosen[0]);
        let mut values: Vec<BigInt> = pts.iter().map(|p| dot(&normal, p)).collect();
        if values.iter().all(|v| v >= &offset) {
            normal.iter_mut().for_each(|c| *c = -c.clone());
            values.iter_mut().for_each(|v| *v = -v.clone());
            offset = -offset;
        }
        if !values.iter().all(|v| v <= &offset) {
            continue;
        }
        if !offset.is_positive() {
            return Err(Error::OriginNotInterior);
        }
        let functional: Vec<BigRational> = normal
            .iter()
            .map(|c| BigRational::new(c.clone(), offset.clone()))
            .collect();
        if !seen.insert(functional.clone()) {
            continue;
        }
        let on_facet: Vec<Vec<BigInt>> = pts
            .iter()
            .zip(&values)
            .filter(|(_, v)| **v == offset)
            .map(|(p, _)| p.clone())
            .collect();
        facets.push(Facet {
            functional,
            vertices: on_facet,
        });
    }

    // a point is a vertex when its active facet normals have full rank
    let vertices: Vec<Vec<BigInt>> = pts
        .iter()
        .filter(|p| {
            let active: Vec<Vec<BigRational>> = facets
                .iter()
                .filter(|f| f.eval(p).is_one())
                .map(|f| f.functional.clone())
                .collect();
            rank(&active) == dim
        })
        .cloned()
        .collect();
    for f in &mut facets {
        f.vertices.retain(|p| vertices.contains(p));
    }
    facets.sort_by(|a, b| b.functional.cmp(&a.functional));
    Ok(LatticePolytope { dim, vertices, facets })
}

/// Generators `s` with `f(φ(s)) = 1`, in letter order.
pub fn facet_alphabet(facet: &Facet, projected: &[(Letter, Vec<BigInt>)]) -> Vec<Letter> {
    let mut v: Vec<Letter> = projected
        .iter()
        .filter(|(_, p)| facet.eval(p).is_one())
        .map(|(l, _)| *l)
        .collect();
    v.sort();
    v
}

/// The polytope of a group together with each facet's alphabet.
#[derive(Clone, Debug)]
pub struct GroupPolytope {
    pub polytope: LatticePolytope,
    pub alphabets: Vec<Vec<Letter>>,
}

pub fn group_polytope<G: Abelianized + ?Sized>(group: &G) -> Result<GroupPolytope> {
    let projected = project_generators(group);
    let points: Vec<Vec<BigInt>> = projected.iter().map(|(_, p)| p.clone()).collect();
    let polytope = convex_hull(&points)?;
    let alphabets = polytope.facets.iter().map(|f| facet_alphabet(f, &projected)).collect();
    Ok(GroupPolytope { polytope, alphabets })
}

/// Every word over `v` of length at most `max_len` is geodesic.
pub fn check_facet_words_geodesic<G: Group + ?Sized>(group: &G, v: &[Letter], max_len: usize, budget: Budget) -> Result<bool> {
    let radius = u32::try_from(max_len.div_ceil(2)).map_err(|_| Error::InvalidInput("length too large".into()))?;
    let oracle = CayleyOracle::new(group, radius, budget)?;
    let steps: Vec<G::Element> = v.iter().map(|l| group.letter_element(*l).cloned()).collect::<Result<_>>()?;
    let mut stack = vec![(group.identity(), 0usize)];
    while let Some((g, len)) = stack.pop() {
        if oracle.norm(&g) != Some(len as u32) {
            return Ok(false);
        }
        if len < max_len {
            for s in &steps {
                stack.push((group.mul(&g, s), len + 1));
            }
        }
    }
    Ok(true)
}

/// Every word over `v` up to `max_len`, shortest first, then in letter order.
fn shortlex_words(v: &[Letter], max_len: usize) -> Vec<Word> {
    let mut letters = v.to_vec();
    letters.sort();
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * letters.len());
        for w in &layer {
            for l in &letters {
                let mut x = w.clone();
                x.push(*l);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Words `x`, `y` over `v` with `g·x̄ = ȳ`. `x` is the first candidate in
/// shortlex order and `y` the first word in shortlex order with that value.
pub fn rearrange_search<G: Group + ?Sized>(group: &G, g: &G::Element, v: &[Letter], max_len: usize) -> Result<Option<(Word, Word)>> {
    let words = shortlex_words(v, max_len);
    let mut first: HashMap<G::Element, usize> = HashMap::new();
    let mut values = Vec::with_capacity(words.len());
    for (idx, w) in words.iter().enumerate() {
        let e = crate::group::evaluate_word(group, w)?;
        first.entry(e.clone()).or_insert(idx);
        values.push(e);
    }
    for (x, xv) in words.iter().zip(&values) {
        if let Some(&yi) = first.get(&group.mul(g, xv)) {
            return Ok(Some((x.clone(), words[yi].clone())));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleCommutator<E> {
    pub label: String,
    pub element: E,
}

/// Simple commutators of weight exactly `depth` over `v`: weight 1 is `v`
/// itself and weight `j+1` is `[c, s]` for `c` of weight `j`, `s` in `v`.
/// Duplicates and the identity are dropped.
pub fn simple_commutators<G: Group + ?Sized>(group: &G, v: &[Letter], depth: usize) -> Result<Vec<SimpleCommutator<G::Element>>> {
    if depth == 0 {
        return Err(Error::InvalidInput("commutator weight starts at 1".into()));
    }
    let mut letters = v.to_vec();
    letters.sort();
    let gens: Vec<(Letter, G::Element)> = letters
        .iter()
        .map(|l| group.letter_element(*l).map(|e| (*l, e.clone())))
        .collect::<Result<_>>()?;
    let mut layer: Vec<SimpleCommutator<G::Element>> = Vec::new();
    let mut seen = HashSet::new();
    for (l, e) in &gens {
        if seen.insert(e.clone()) {
            layer.push(SimpleCommutator {
                label: l.to_string(),
                element: e.clone(),
            });
        }
    }
    let id = group.identity();
    for _ in 1..depth {
        let mut next = Vec::new();
        let mut seen = HashSet::new();
        for c in &layer {
            for (l, s) in &gens {
                let e = group.commutator(&c.element, s);
                if e != id && seen.insert(e.clone()) {
                    next.push(SimpleCommutator {
                        label: format!("[{},{l}]", c.label),
                        element: e,
                    });
                }
            }
        }
        layer = next;
    }
    Ok(layer)
}

/// A word over `v` containing `x_c` and `y_c` as subwords for every simple
/// commutator `c` of weight `1..=depth`, built by appending each block not
/// already present, in commutator order.
pub fn build_facet_word<G: Group + ?Sized>(group: &G, v: &[Letter], depth: usize, max_len: usize) -> Result<Word> {
    let mut w = Word::empty();
    for weight in 1..=depth {
        for c in simple_commutators(group, v, weight)? {
            let (x, y) = rearrange_search(group, &c.element, v, max_len)?.ok_or_else(|| Error::SearchFailed {
                target: c.label.clone(),
                max_len,
            })?;
            for block in [x, y] {
                if !w.contains(&block) {
                    w = w.concat(&block);
                }
            }
        }
    }
    Ok(w)
}

/// Checks that every prefix of `w^∞` up to length `len` is geodesic.
pub fn periodic_word_is_geodesic<M, G>(group: &G, metric: &M, w: &Word, len: usize) -> Result<bool>
where
    G: Group + ?Sized,
    M: WordMetric<Element = G::Element> + ?Sized,
{
    let prefixes = prefix_elements(group, &w.cycle_prefix(len))?;
    let id = group.identity();
    for (t, p) in prefixes.iter().enumerate() {
        if metric.distance(&id, p)? != BigInt::from(t) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The Heisenberg boundary point that `w^∞` converges to, confirmed on the
/// window by [`verify_convergence`].
pub fn facet_limit_h3<M>(w: &Word, window: &[H3Element], t_max: u64, metric: &M) -> Result<BusemannPoint>
where
    M: WordMetric<Element = H3Element> + ?Sized,
{
    let h3 = Heisenberg::new();
    if !periodic_word_is_geodesic(&h3, metric, w, 4 * w.len())? {
        return Err(Error::InvalidInput(format!("({w})^∞ is not geodesic")));
    }
    let path = StandardPath::TwoLetter(TwoLetterPattern::periodic(w.clone())?);
    let point = limit_of_standard_path(&path);
    match verify_convergence(&path, &point, window, t_max, metric)? {
        Convergence::Stabilised { .. } => Ok(point),
        Convergence::Failed { last_mismatch } => Err(Error::Invariant(format!(
            "({w})^∞ did not stabilise to {point} by t = {t_max}: {last_mismatch:?}"
        ))),
    }
}

/// A window restriction of `ψ_{Λ(t)}` that stopped changing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableSnapshot<E> {
    pub time: u64,
    pub probes: u64,
    pub values: Vec<(E, BigInt)>,
}

/// Limit of `ψ` along `w^∞` on a window for groups without a closed-form
/// boundary: the snapshot at `t_max`, provided it already held for more than
/// [`CONVERGENCE_MARGIN`](crate::boundary::CONVERGENCE_MARGIN) probes.
pub fn facet_limit_snapshot<G: Group + ?Sized>(
    oracle: &CayleyOracle<'_, G>,
    w: &Word,
    window: &[G::Element],
    t_max: u64,
) -> Result<StableSnapshot<G::Element>> {
    let group = oracle.group();
    let path = prefix_elements(group, &w.cycle_prefix(t_max as usize))?;
    let id = group.identity();
    let mut snaps = Vec::with_capacity(path.len());
    for z in &path {
        snaps.push(crate::oracle::horofunction_snapshot(oracle, &id, z, window)?);
    }
    let last = snaps.last().expect("t_max + 1 snapshots");
    let time = snaps
        .iter()
        .rposition(|s| !s.same_restriction(last))
        .map_or(0, |t| t as u64 + 1);
    let probes = t_max + 1 - time;
    if probes <= crate::boundary::CONVERGENCE_MARGIN {
        return Err(Error::Invariant(format!(
            "window snapshot along ({w})^∞ still changing at t = {}",
            time - 1
        )));
    }
    Ok(StableSnapshot {
        time,
        probes,
        values: last.entries().to_vec(),
    })
}

/// Elements of the radius-`r` ball fixing `p`.
pub fn stabilizer_check(p: &BusemannPoint, ball_radius: u32) -> Result<Vec<H3Element>> {
    let h3 = Heisenberg::new();
    let ball = bfs_ball(&h3, ball_radius, Budget::for_group(&h3))?;
    Ok(ball.elements().filter(|g| act(g, p) == *p).cloned().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitClass {
    Singleton,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitEntry {
    pub point: BusemannPoint,
    pub orbit_size: usize,
    pub class: OrbitClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitCensus {
    pub ball_radius: u32,
    pub entries: Vec<OrbitEntry>,
    pub singletons: usize,
    /// Exactly the corners, and all four of them, are singletons.
    pub singletons_are_corners: bool,
    pub min_nonsingleton_orbit: Option<usize>,
}

/// Orbits of the grid points under the radius-`r` ball, at parameter level.
pub fn finite_orbit_census(grid: &[BusemannPoint], ball_radius: u32) -> Result<OrbitCensus> {
    let h3 = Heisenberg::new();
    let ball = bfs_ball(&h3, ball_radius, Budget::for_group(&h3))?;
    let entries: Vec<OrbitEntry> = grid
        .iter()
        .map(|p| {
            let orbit: HashSet<BusemannPoint> = ball.elements().map(|g| act(g, p)).collect();
            OrbitEntry {
                point: p.clone(),
                orbit_size: orbit.len(),
                class: if orbit.len() == 1 {
                    OrbitClass::Singleton
                } else {
                    OrbitClass::Unbounded
                },
            }
        })
        .collect();
    let singles: Vec<&BusemannPoint> = entries
        .iter()
        .filter(|e| e.class == OrbitClass::Singleton)
        .map(|e| &e.point)
        .collect();
    let corners_in_grid = grid.iter().filter(|p| p.is_corner()).count();
    let singletons_are_corners = singles.iter().all(|p| p.is_corner()) && corners_in_grid == 4 && singles.len() == 4;
    let min_nonsingleton_orbit = entries
        .iter()
        .filter(|e| e.class == OrbitClass::Unbounded)
        .map(|e| e.orbit_size)
        .min();
    Ok(OrbitCensus {
        ball_radius,
        singletons: singles.len(),
        entries,
        singletons_are_corners,
        min_nonsingleton_orbit,
    })
}

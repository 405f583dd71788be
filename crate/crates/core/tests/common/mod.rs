//! Independent oracles for the integration tests. Everything here works on
//! plain `i64` tuples and shares no code with the library apart from the
//! conversions at the edges.
#![allow(dead_code)]

pub mod props;

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use nilhoro::{Ex1Element, H3Element};

pub type H3 = (i64, i64, i64);
pub type Ex1 = (i64, i64, i64, i64, i64);

pub const H3_E: H3 = (0, 0, 0);
/// `a, A, b, B`.
pub const H3_GENS: [H3; 4] = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)];

pub fn h3(u: H3, v: H3) -> H3 {
    (u.0 + v.0, u.1 + v.1, u.2 + v.2 + u.0 * v.1)
}

pub fn h3_inverse(u: H3) -> H3 {
    (-u.0, -u.1, u.0 * u.1 - u.2)
}

pub fn to_h3(u: H3) -> H3Element {
    H3Element::new(u.0, u.1, u.2)
}

pub const EX1_E: Ex1 = (0, 0, 0, 0, 0);
pub const EX1_GENS: [Ex1; 4] = [(0, 0, 0, 0, 1), (0, 0, 0, 0, -1), (0, 0, 0, 1, 0), (0, 0, 0, -1, 0)];

fn tri(n: i64) -> i64 {
    n * (n + 1) / 2
}

/// Collection of `g^i h^j c^k b^l a^m` normal forms, written out as the
/// multiplication polynomials.
pub fn ex1(u: Ex1, v: Ex1) -> Ex1 {
    let (i, j, k, l, m) = u;
    let (i2, j2, k2, l2, m2) = v;
    (
        i + i2 + m * k2 + l2 * tri(m),
        j + j2 + l * k2 + m * tri(l2) + l * m * l2,
        k + k2 + m * l2,
        l + l2,
        m + m2,
    )
}

pub fn to_ex1(u: Ex1) -> Ex1Element {
    Ex1Element::new(u.0, u.1, u.2, u.3, u.4)
}

/// Distances from the identity out to `radius`.
pub fn ball<E: Copy + Eq + Hash>(id: E, gens: &[E], mul: fn(E, E) -> E, radius: u32) -> HashMap<E, u32> {
    let mut dist = HashMap::from([(id, 0)]);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        let d = dist[&g];
        if d == radius {
            continue;
        }
        for &s in gens {
            let h = mul(g, s);
            if let std::collections::hash_map::Entry::Vacant(slot) = dist.entry(h) {
                slot.insert(d + 1);
                queue.push_back(h);
            }
        }
    }
    dist
}

pub fn h3_ball(radius: u32) -> HashMap<H3, u32> {
    ball(H3_E, &H3_GENS, h3, radius)
}

pub fn ex1_ball(radius: u32) -> HashMap<Ex1, u32> {
    ball(EX1_E, &EX1_GENS, ex1, radius)
}

/// Ball elements in a fixed order.
pub fn sorted_keys<E: Copy + Ord>(b: &HashMap<E, u32>) -> Vec<E> {
    let mut v: Vec<E> = b.keys().copied().collect();
    v.sort();
    v
}

fn letter_index(c: char) -> usize {
    match c {
        'a' => 0,
        'A' => 1,
        'b' => 2,
        'B' => 3,
        _ => panic!("not a letter: {c}"),
    }
}

pub fn eval<E: Copy>(w: &str, id: E, gens: &[E; 4], mul: fn(E, E) -> E) -> E {
    w.chars().fold(id, |acc, c| mul(acc, gens[letter_index(c)]))
}

pub fn h3_word(w: &str) -> H3 {
    eval(w, H3_E, &H3_GENS, h3)
}

pub fn ex1_word(w: &str) -> Ex1 {
    eval(w, EX1_E, &EX1_GENS, ex1)
}

/// All words of length exactly `len` over `alphabet`.
pub fn words(alphabet: &[char], len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    for _ in 0..len {
        out = out
            .iter()
            .flat_map(|w| alphabet.iter().map(move |c| format!("{w}{c}")))
            .collect();
    }
    out
}

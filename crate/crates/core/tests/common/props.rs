//! Property checks shared by the proptest suite and the acceptance harness.
//! Each takes a runner so the caller picks the seed and case count.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use proptest::prelude::*;
use proptest::sample::select;
use proptest::test_runner::{TestCaseError, TestRunner};

use nilhoro::boundary::TwoLetterPattern;
use nilhoro::facet::facet_alphabet;
use nilhoro::metric::{classify_transitions, h3_cases, reverse_transitions, TransitionSign};
use nilhoro::{
    act, bfs_ball, convex_hull, eval_point, evaluate_word, h3_dist, h3_norm, Abelianized, Budget, BusemannPoint,
    CayleyOracle, Ex1Element, Example1, Group, H3Element, Heisenberg, Sign, Word, ZdElement, ZdGroup,
};

use super::{ex1, to_ex1};

pub type Property = fn(&mut TestRunner) -> Result<(), String>;

pub const ALL: &[(&str, Property)] = &[
    ("h3_group_axioms", h3_group_axioms),
    ("h3_matrix_model", h3_matrix_model),
    ("word_evaluation_is_a_homomorphism", word_evaluation_is_a_homomorphism),
    ("ex1_group_axioms", ex1_group_axioms),
    ("ex1_matches_polynomials", ex1_matches_polynomials),
    ("zd_group_axioms", zd_group_axioms),
    ("phi_homomorphism", phi_homomorphism),
    ("busemann_points_are_1_lipschitz", busemann_points_are_1_lipschitz),
    ("horofunctions_are_1_lipschitz", horofunctions_are_1_lipschitz),
    ("triangle_inequality", triangle_inequality),
    ("norm_symmetry", norm_symmetry),
    ("case_overlap_agreement", case_overlap_agreement),
    ("formula_matches_midpoint_oracle", formula_matches_midpoint_oracle),
    ("transition_reversal_invariance", transition_reversal_invariance),
    ("action_law", action_law),
    ("action_compatibility", action_compatibility),
    ("corner_fixation", corner_fixation),
    ("parameter_orbits_grow", parameter_orbits_grow),
    ("staircase_matches_product", staircase_matches_product),
    ("facet_functional_bound", facet_functional_bound),
    ("two_letter_prefixes_geodesic", two_letter_prefixes_geodesic),
];

fn run<S: Strategy>(
    runner: &mut TestRunner,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn h3_ball_vec(radius: u32) -> Vec<H3Element> {
    bfs_ball(&Heisenberg::new(), radius, Budget::new(radius))
        .expect("small ball")
        .elements()
        .cloned()
        .collect()
}

fn ex1_ball_vec(radius: u32) -> Vec<Ex1Element> {
    bfs_ball(&Example1::new(), radius, Budget::new(radius))
        .expect("small ball")
        .elements()
        .cloned()
        .collect()
}

fn h3_any(bound: i64) -> impl Strategy<Value = H3Element> {
    (-bound..=bound, -bound..=bound, -bound * bound..=bound * bound).prop_map(|(x, y, z)| H3Element::new(x, y, z))
}

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Plus), Just(Sign::Minus)]
}

fn point(bound: i64) -> impl Strategy<Value = BusemannPoint> {
    prop_oneof![
        (sign(), sign()).prop_map(|(a, b)| BusemannPoint::corner(a, b)),
        (sign(), -bound..=bound, -bound..=bound).prop_map(|(e, m, n)| BusemannPoint::a_type(e, m, n)),
        (sign(), -bound..=bound, -bound..=bound).prop_map(|(e, m, l)| BusemannPoint::b_type(e, m, l)),
    ]
}

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(select("aAbB".chars().collect::<Vec<_>>()), 0..=max_len)
        .prop_map(|cs| cs.into_iter().collect::<String>().parse().expect("letters"))
}

pub fn h3_group_axioms(runner: &mut TestRunner) -> Result<(), String> {
    let ball = h3_ball_vec(4);
    let h3 = Heisenberg::new();
    let e = h3.identity();
    run(runner, (select(ball.clone()), select(ball.clone()), select(ball)), |(g, h, k)| {
        prop_assert_eq!(h3.mul(&h3.mul(&g, &h), &k), h3.mul(&g, &h3.mul(&h, &k)));
        prop_assert_eq!(h3.mul(&g, &e), g.clone());
        prop_assert_eq!(h3.mul(&e, &g), g.clone());
        prop_assert!(h3.mul(&g, &h3.inv(&g)).is_identity());
        Ok(())
    })
}

fn matmul(p: &[[BigInt; 3]; 3], q: &[[BigInt; 3]; 3]) -> [[BigInt; 3]; 3] {
    std::array::from_fn(|r| std::array::from_fn(|c| (0..3).map(|k| &p[r][k] * &q[k][c]).sum()))
}

pub fn h3_matrix_model(runner: &mut TestRunner) -> Result<(), String> {
    let ball = h3_ball_vec(5);
    let h3 = Heisenberg::new();
    run(runner, (select(ball.clone()), select(ball)), |(g, h)| {
        prop_assert_eq!(h3.mul(&g, &h).to_matrix(), matmul(&g.to_matrix(), &h.to_matrix()));
        Ok(())
    })
}

pub fn word_evaluation_is_a_homomorphism(runner: &mut TestRunner) -> Result<(), String> {
    let h3 = Heisenberg::new();
    let ex = Example1::new();
    run(runner, (word(20), word(20)), |(u, v)| {
        let uv = u.concat(&v);
        let e = |w: &Word| evaluate_word(&h3, w).unwrap();
        prop_assert_eq!(e(&uv), h3.mul(&e(&u), &e(&v)));
        let f = |w: &Word| evaluate_word(&ex, w).unwrap();
        prop_assert_eq!(f(&uv), ex.mul(&f(&u), &f(&v)));
        Ok(())
    })
}

pub fn ex1_group_axioms(runner: &mut TestRunner) -> Result<(), String> {
    let ball = ex1_ball_vec(3);
    let ex = Example1::new();
    let e = ex.identity();
    let g = Ex1Element::g();
    run(runner, (select(ball.clone()), select(ball.clone()), select(ball)), |(x, y, z)| {
        prop_assert_eq!(ex.mul(&ex.mul(&x, &y), &z), ex.mul(&x, &ex.mul(&y, &z)));
        prop_assert_eq!(ex.mul(&x, &e), x.clone());
        prop_assert_eq!(ex.mul(&x, &ex.inv(&x)), e.clone());
        prop_assert_eq!(ex.mul(&ex.inv(&x), &x), e.clone());
        prop_assert_eq!(ex.mul(&g, &x), ex.mul(&x, &g));
        Ok(())
    })
}

pub fn ex1_matches_polynomials(runner: &mut TestRunner) -> Result<(), String> {
    let ex = Example1::new();
    let coord = || -6i64..=6;
    let elem = || (coord(), coord(), coord(), coord(), coord());
    run(runner, (elem(), elem()), |(u, v)| {
        prop_assert_eq!(ex.mul(&to_ex1(u), &to_ex1(v)), to_ex1(ex1(u, v)));
        Ok(())
    })
}

pub fn zd_group_axioms(runner: &mut TestRunner) -> Result<(), String> {
    let z3 = ZdGroup::standard(3).unwrap();
    let v = || prop::collection::vec(-50i64..=50, 3).prop_map(|c| ZdElement::from_i64s(&c));
    run(runner, (v(), v(), v()), |(g, h, k)| {
        prop_assert_eq!(z3.mul(&z3.mul(&g, &h), &k), z3.mul(&g, &z3.mul(&h, &k)));
        prop_assert_eq!(z3.mul(&g, &h), z3.mul(&h, &g));
        prop_assert_eq!(z3.mul(&g, &z3.inv(&g)), z3.identity());
        prop_assert_eq!(z3.mul(&g, &z3.identity()), g.clone());
        Ok(())
    })
}

fn add(u: Vec<BigInt>, v: Vec<BigInt>) -> Vec<BigInt> {
    u.into_iter().zip(v).map(|(a, b)| a + b).collect()
}

pub fn phi_homomorphism(runner: &mut TestRunner) -> Result<(), String> {
    let h3 = Heisenberg::new();
    let ex = Example1::new();
    let hb = h3_ball_vec(4);
    let eb = ex1_ball_vec(4);
    run(runner, (select(hb.clone()), select(hb), select(eb.clone()), select(eb)), |(g, h, x, y)| {
        prop_assert_eq!(h3.phi(&h3.mul(&g, &h)), add(h3.phi(&g), h3.phi(&h)));
        prop_assert_eq!(ex.phi(&ex.mul(&x, &y)), add(ex.phi(&x), ex.phi(&y)));
        Ok(())
    })
}

/// `|f(xs) − f(x)| ≤ 1` over every edge from `x` to `xs` with both ends in `window`.
fn lipschitz_on(window: &[H3Element], f: impl Fn(&H3Element) -> BigInt) -> Result<(), TestCaseError> {
    let h3 = Heisenberg::new();
    let set: std::collections::HashSet<&H3Element> = window.iter().collect();
    for x in window {
        let fx = f(x);
        for (_, s) in h3.generators() {
            let xs = h3.mul(x, s);
            if set.contains(&xs) {
                prop_assert!((f(&xs) - &fx).abs() <= BigInt::one(), "edge {} -> {}", x, xs);
            }
        }
    }
    Ok(())
}

pub fn busemann_points_are_1_lipschitz(runner: &mut TestRunner) -> Result<(), String> {
    let window = h3_ball_vec(6);
    run(runner, point(6), |p| {
        prop_assert_eq!(eval_point(&p, &H3Element::identity()), BigInt::from(0));
        lipschitz_on(&window, |x| eval_point(&p, x))
    })
}

pub fn horofunctions_are_1_lipschitz(runner: &mut TestRunner) -> Result<(), String> {
    let window = h3_ball_vec(4);
    run(runner, h3_any(40), |z| {
        let base = h3_norm(&z);
        let psi = |x: &H3Element| h3_dist(x, &z) - &base;
        prop_assert_eq!(psi(&H3Element::identity()), BigInt::from(0));
        lipschitz_on(&window, psi)
    })
}

pub fn triangle_inequality(runner: &mut TestRunner) -> Result<(), String> {
    let ball = h3_ball_vec(6);
    run(runner, (select(ball.clone()), select(ball.clone()), select(ball)), |(g, h, k)| {
        prop_assert!(h3_dist(&g, &k) <= h3_dist(&g, &h) + h3_dist(&h, &k));
        Ok(())
    })
}

pub fn norm_symmetry(runner: &mut TestRunner) -> Result<(), String> {
    let h3 = Heisenberg::new();
    run(runner, h3_any(1000), |g| {
        prop_assert_eq!(h3_norm(&g), h3_norm(&h3.inv(&g)));
        Ok(())
    })
}

pub fn case_overlap_agreement(runner: &mut TestRunner) -> Result<(), String> {
    run(runner, h3_any(1000), |g| {
        let cases = h3_cases(&g);
        prop_assert!(!cases.is_empty());
        for (tag, v) in &cases {
            prop_assert_eq!(v, &cases[0].1, "{:?} vs {:?} at {}", tag, cases[0].0, g);
        }
        Ok(())
    })
}

pub fn formula_matches_midpoint_oracle(runner: &mut TestRunner) -> Result<(), String> {
    let h3 = Heisenberg::new();
    let oracle = CayleyOracle::new(&h3, 7, Budget::new(7)).expect("radius 7 ball");
    run(runner, h3_any(7), |g| {
        if let Some(d) = oracle.norm(&g) {
            prop_assert_eq!(BigInt::from(d), h3_norm(&g));
        }
        Ok(())
    })
}

/// A reversal set with as many positive as negative transitions, taken from
/// a random choice of pairwise separated positions.
fn balanced_positions(w: &Word, mask: u32) -> Vec<usize> {
    let mut chosen: Vec<(usize, TransitionSign)> = Vec::new();
    for (p, s) in classify_transitions(w) {
        let free = chosen.last().is_none_or(|(q, _)| p >= q + 2);
        if mask >> p & 1 == 1 && free {
            chosen.push((p, s));
        }
    }
    let count = |t| chosen.iter().filter(|(_, s)| *s == t).count();
    let keep = count(TransitionSign::Positive).min(count(TransitionSign::Negative));
    let (mut pos, mut neg) = (0, 0);
    chosen
        .into_iter()
        .filter(|(_, s)| match s {
            TransitionSign::Positive => {
                pos += 1;
                pos <= keep
            }
            TransitionSign::Negative => {
                neg += 1;
                neg <= keep
            }
            TransitionSign::Neutral => true,
        })
        .map(|(p, _)| p)
        .collect()
}

pub fn transition_reversal_invariance(runner: &mut TestRunner) -> Result<(), String> {
    let h3 = Heisenberg::new();
    run(runner, (word(8), any::<u32>()), |(w, mask)| {
        let positions = balanced_positions(&w, mask);
        let r = reverse_transitions(&w, &positions).unwrap();
        let (g, h) = (evaluate_word(&h3, &w).unwrap(), evaluate_word(&h3, &r).unwrap());
        prop_assert_eq!(&g, &h, "{} vs {}", w, r);
        let len = BigInt::from(w.len());
        prop_assert_eq!(h3_norm(&g) == len, h3_norm(&h) == len);
        Ok(())
    })
}

pub fn action_law(runner: &mut TestRunner) -> Result<(), String> {
    let ball = h3_ball_vec(4);
    let h3 = Heisenberg::new();
    run(runner, (select(ball.clone()), select(ball), point(6)), |(g, h, p)| {
        prop_assert_eq!(act(&g, &act(&h, &p)), act(&h3.mul(&g, &h), &p));
        Ok(())
    })
}

pub fn action_compatibility(runner: &mut TestRunner) -> Result<(), String> {
    let ball = h3_ball_vec(5);
    let h3 = Heisenberg::new();
    run(runner, (select(ball.clone()), select(ball), point(3)), |(g, x, p)| {
        let gi = h3.inv(&g);
        let expected = eval_point(&p, &h3.mul(&gi, &x)) - eval_point(&p, &gi);
        prop_assert_eq!(eval_point(&act(&g, &p), &x), expected);
        Ok(())
    })
}

pub fn corner_fixation(runner: &mut TestRunner) -> Result<(), String> {
    run(runner, (h3_any(1000), sign(), sign()), |(g, a, b)| {
        let c = BusemannPoint::corner(a, b);
        prop_assert_eq!(act(&g, &c), c);
        Ok(())
    })
}

pub fn parameter_orbits_grow(runner: &mut TestRunner) -> Result<(), String> {
    run(runner, (sign(), -20i64..=20, -20i64..=20, 1usize..=30), |(eps, m, n, k)| {
        let a_orbit: std::collections::HashSet<BusemannPoint> = (0..=k as i64)
            .map(|t| act(&H3Element::new(0, t, 0), &BusemannPoint::a_type(eps, m, n)))
            .collect();
        let b_orbit: std::collections::HashSet<BusemannPoint> = (0..=k as i64)
            .map(|t| act(&H3Element::new(t, 0, 0), &BusemannPoint::b_type(eps, m, n)))
            .collect();
        prop_assert_eq!(a_orbit.len(), k + 1);
        prop_assert_eq!(b_orbit.len(), k + 1);
        Ok(())
    })
}

pub fn staircase_matches_product(runner: &mut TestRunner) -> Result<(), String> {
    let ex = Example1::new();
    let positive = prop::collection::vec(select(vec!['a', 'b']), 0..=40)
        .prop_map(|cs| cs.into_iter().collect::<String>());
    run(runner, positive, |s| {
        let w: Word = s.parse().unwrap();
        let g = evaluate_word(&ex, &w).unwrap();
        let (i, j, k) = nilhoro::example1::staircase_exponents(&w).unwrap();
        prop_assert_eq!((g.i.clone(), g.j.clone(), g.k.clone()), (i, j, k));
        prop_assert_eq!(g.l, BigInt::from(s.matches('b').count()));
        prop_assert_eq!(g.m, BigInt::from(s.matches('a').count()));
        Ok(())
    })
}

pub fn facet_functional_bound(runner: &mut TestRunner) -> Result<(), String> {
    let gens = prop::collection::vec(prop::collection::vec(-3i64..=3, 2), 2..=5);
    run(runner, gens, |half| {
        let mut all: Vec<Vec<i64>> = Vec::new();
        for v in half.into_iter().filter(|v| v.iter().any(|&c| c != 0)) {
            let neg: Vec<i64> = v.iter().map(|c| -c).collect();
            if !all.contains(&v) {
                all.push(v);
                all.push(neg);
            }
        }
        let Ok(z) = ZdGroup::new(2, &all) else {
            return Err(TestCaseError::reject("degenerate generating set"));
        };
        let projected: Vec<_> = z.generators().iter().map(|(l, s)| (*l, z.phi(s))).collect();
        let points: Vec<Vec<BigInt>> = projected.iter().map(|(_, p)| p.clone()).collect();
        let Ok(hull) = convex_hull(&points) else {
            return Err(TestCaseError::reject("flat hull"));
        };
        for facet in &hull.facets {
            let on: Vec<_> = projected
                .iter()
                .filter(|(_, p)| {
                    let v = facet.eval(p);
                    v.is_one()
                })
                .map(|(l, _)| *l)
                .collect();
            for (_, p) in &projected {
                prop_assert!(facet.eval(p) <= num_rational::BigRational::one());
            }
            prop_assert_eq!(facet_alphabet(facet, &projected), on);
            prop_assert!(!facet.vertices.is_empty());
        }
        Ok(())
    })
}

pub fn two_letter_prefixes_geodesic(runner: &mut TestRunner) -> Result<(), String> {
    let h3 = Heisenberg::new();
    let pattern = (sign(), sign(), prop::collection::vec(any::<bool>(), 2..=8)).prop_filter_map(
        "period must use both letters",
        |(ea, eb, bits)| {
            let a = if ea == Sign::Plus { 'a' } else { 'A' };
            let b = if eb == Sign::Plus { 'b' } else { 'B' };
            let period: String = bits.iter().map(|&x| if x { a } else { b }).collect();
            TwoLetterPattern::periodic(period.parse().ok()?).ok()
        },
    );
    run(runner, (pattern, 0usize..=60), |(p, len)| {
        let w = p.word(len);
        prop_assert_eq!(h3_norm(&evaluate_word(&h3, &w).unwrap()), BigInt::from(len));
        Ok(())
    })
}

//! Named verification suites producing deterministic reports.

use std::time::Instant;

use num_bigint::BigInt;
use serde::Serialize;

use crate::boundary::{
    act, act_via_definition, eval_point, limit_of_standard_path, parameter_grid, points_separate, verify_convergence,
    ww_limit_check, BusemannPoint, Sign, StandardPath, TwoLetterPattern,
};
use crate::error::{Error, Result};
use crate::example1::{eta_excess, lemma_perm_check, staircase_exponents, Ex1Element, Example1};
use crate::facet::{
    build_facet_word, check_facet_words_geodesic, facet_limit_h3, facet_limit_snapshot, finite_orbit_census,
    group_polytope,
};
use crate::group::{evaluate_word, Group, H3Element, Heisenberg, Letter, Word, LETTER_A, LETTER_A_INV, LETTER_B, LETTER_B_INV};
use crate::metric::{h3_cases, h3_norm};
use crate::oracle::{bfs_ball, h3_window, Budget, CayleyOracle, H3FormulaMetric};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub status: CheckStatus,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Metric,
    Boundary,
    Facets,
    Example1,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Metric => "metric",
            Suite::Boundary => "boundary",
            Suite::Facets => "facets",
            Suite::Example1 => "example1",
            Suite::All => "all",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Suite::Metric, Suite::Boundary, Suite::Facets, Suite::Example1, Suite::All]
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::parse("suite", s))
    }
}

/// Budgets for the suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    /// BFS radius for the formula comparison.
    pub radius: u32,
    /// Window radius for boundary checks.
    pub window: u32,
    /// Longest word for geodesic enumeration.
    pub max_len: usize,
    /// Last path time probed for convergence.
    pub t_max: u64,
    /// BFS radius for the class-3 group.
    pub ex1_radius: u32,
    /// Largest power of `ab` in the η check.
    pub eta_max: u32,
    pub timing: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            radius: 10,
            window: 4,
            max_len: 12,
            t_max: 40,
            ex1_radius: 8,
            eta_max: 3,
            timing: false,
        }
    }
}

struct Recorder {
    checks: Vec<Check>,
}

impl Recorder {
    fn new() -> Self {
        Recorder { checks: Vec::new() }
    }

    fn eq<T: ToString + PartialEq>(&mut self, id: &str, expected: T, actual: T) {
        let status = if expected == actual { CheckStatus::Pass } else { CheckStatus::Fail };
        self.checks.push(Check {
            id: id.to_string(),
            status,
            expected: expected.to_string(),
            actual: actual.to_string(),
        });
    }

    /// Records `f`'s outcome; budget errors get their own status and any
    /// other error fails the check.
    fn run<T: ToString + PartialEq>(&mut self, id: &str, expected: T, f: impl FnOnce() -> Result<T>) {
        match f() {
            Ok(actual) => self.eq(id, expected, actual),
            Err(e) => self.checks.push(Check {
                id: id.to_string(),
                status: if matches!(e, Error::BudgetExceeded { .. }) {
                    CheckStatus::BudgetExceeded
                } else {
                    CheckStatus::Fail
                },
                expected: expected.to_string(),
                actual: e.to_string(),
            }),
        }
    }
}

pub fn run_suite(suite: Suite, config: &SuiteConfig) -> SuiteReport {
    let start = Instant::now();
    let mut rec = Recorder::new();
    match suite {
        Suite::Metric => metric_suite(&mut rec, config),
        Suite::Boundary => boundary_suite(&mut rec, config),
        Suite::Facets => facets_suite(&mut rec, config),
        Suite::Example1 => example1_suite(&mut rec, config),
        Suite::All => {
            metric_suite(&mut rec, config);
            boundary_suite(&mut rec, config);
            facets_suite(&mut rec, config);
            example1_suite(&mut rec, config);
        }
    }
    let pass = rec.checks.iter().all(|c| c.status == CheckStatus::Pass);
    SuiteReport {
        suite: suite.name().to_string(),
        checks: rec.checks,
        pass,
        wall_time_ms: config.timing.then(|| start.elapsed().as_millis()),
    }
}

fn two_letter_alphabets() -> [[Letter; 2]; 4] {
    [
        [LETTER_A, LETTER_B],
        [LETTER_A_INV, LETTER_B],
        [LETTER_A, LETTER_B_INV],
        [LETTER_A_INV, LETTER_B_INV],
    ]
}

fn letters_str(v: &[Letter]) -> String {
    v.iter().map(|l| l.to_char()).collect()
}

fn metric_suite(rec: &mut Recorder, cfg: &SuiteConfig) {
    let h3 = Heisenberg::new();
    let budget = Budget::new(cfg.radius.max(h3.default_radius()));
    rec.run("metric.formula_vs_bfs", 0usize, || {
        let ball = bfs_ball(&h3, cfg.radius, budget)?;
        Ok(ball.iter().filter(|(g, d)| h3_norm(g) != BigInt::from(*d)).count())
    });
    rec.run("metric.case_overlaps_agree", 0usize, || {
        let ball = bfs_ball(&h3, cfg.radius, budget)?;
        Ok(ball
            .elements()
            .filter(|g| {
                let cases = h3_cases(g);
                cases.iter().any(|(_, v)| *v != cases[0].1)
            })
            .count())
    });
    for pair in two_letter_alphabets() {
        let unit = Word::new(pair.to_vec());
        rec.run(&format!("metric.power_length.{}", letters_str(&pair)), "2n for n <= 6".to_string(), || {
            for n in 0..=6 {
                let g = evaluate_word(&h3, &unit.repeat(n))?;
                let d = h3_norm(&g);
                if d != BigInt::from(2 * n) {
                    return Ok(format!("d = {d} at n = {n}"));
                }
            }
            Ok("2n for n <= 6".to_string())
        });
        rec.run(
            &format!("metric.two_letter_words_geodesic.{}", letters_str(&pair)),
            true,
            || check_facet_words_geodesic(&h3, &pair, cfg.max_len, budget),
        );
    }
}

fn boundary_suite(rec: &mut Recorder, cfg: &SuiteConfig) {
    let window = h3_window(cfg.window);
    let mut paths: Vec<StandardPath> = Vec::new();
    for eps in Sign::BOTH {
        for m in -2i64..=2 {
            for p in -2i64..=2 {
                paths.push(StandardPath::gamma(eps, m, p));
                paths.push(StandardPath::lambda(eps, m, p));
            }
        }
    }
    for pat in ["ab", "ba", "Ab", "bA", "aB", "Ba", "AB", "BA", "abba", "aabab"] {
        paths.push(StandardPath::TwoLetter(
            TwoLetterPattern::periodic(pat.parse().expect("literal word")).expect("two-letter literal"),
        ));
    }
    rec.run("boundary.convergence", format!("{} of {}", paths.len(), paths.len()), || {
        let mut ok = 0;
        for path in &paths {
            let p = limit_of_standard_path(path);
            if verify_convergence(path, &p, &window, cfg.t_max, &H3FormulaMetric)?.is_stabilised() {
                ok += 1;
            }
        }
        Ok(format!("{ok} of {}", paths.len()))
    });

    let grid = parameter_grid(3);
    let act_window = h3_window(5);
    let gens: Vec<H3Element> = Heisenberg::new().generators().iter().map(|(_, g)| g.clone()).collect();
    let mut bad = 0usize;
    for s in &gens {
        for p in &grid {
            let image = act(s, p);
            bad += act_via_definition(s, p, &act_window)
                .iter()
                .filter(|(x, v)| *v != eval_point(&image, x))
                .count();
        }
    }
    rec.eq("boundary.action_matches_definition", 0, bad);
    let ball4 = h3_window(4);
    let moved = ball4
        .iter()
        .flat_map(|g| BusemannPoint::corners().map(|c| act(g, &c) != c))
        .filter(|m| *m)
        .count();
    rec.eq("boundary.corners_fixed", 0, moved);

    rec.run("boundary.finite_orbits", "4 corner singletons, others >= 9".to_string(), || {
        let census = finite_orbit_census(&grid, 4)?;
        Ok(
            if census.singletons_are_corners && census.min_nonsingleton_orbit.is_some_and(|m| m >= 9) {
                "4 corner singletons, others >= 9".to_string()
            } else {
                format!("{} singletons, min other orbit {:?}", census.singletons, census.min_nonsingleton_orbit)
            },
        )
    });

    let ww = ww_limit_check(cfg.window);
    let mut disagreements = 0usize;
    for n in 8..=24i64 {
        for m in (100..=160i64).chain([1_000_000]) {
            if !ww.agrees(&BigInt::from(m), &BigInt::from(n)) {
                disagreements += 1;
            }
        }
    }
    rec.eq("boundary.ww_grid", 0, disagreements);

    let sep = points_separate(&grid, &h3_window(cfg.window.max(10)));
    rec.eq("boundary.grid_points_separate", 0, sep.collisions.len());
}

fn facets_suite(rec: &mut Recorder, cfg: &SuiteConfig) {
    let h3 = Heisenberg::new();
    let budget = Budget::new(cfg.radius.max(h3.default_radius()));
    match group_polytope(&h3) {
        Ok(gp) => {
            rec.eq("facets.vertex_count", 4, gp.polytope.vertices.len());
            rec.eq("facets.facet_count", 4, gp.polytope.facets.len());
            let mut names: Vec<String> = gp.alphabets.iter().map(|v| letters_str(v)).collect();
            names.sort();
            rec.eq("facets.alphabets", "AB,Ab,aB,ab".to_string(), names.join(","));
            for v in &gp.alphabets {
                let name = letters_str(v);
                rec.run(&format!("facets.words_geodesic.{name}"), true, || {
                    check_facet_words_geodesic(&h3, v, cfg.max_len, budget)
                });
                rec.run(&format!("facets.limit.{name}"), true, || {
                    let w = build_facet_word(&h3, v, 2, 8)?;
                    let p = facet_limit_h3(&w, &h3_window(cfg.window), cfg.t_max, &H3FormulaMetric)?;
                    let sign = |l: Letter| if l.is_inverse() { Sign::Minus } else { Sign::Plus };
                    Ok(p == BusemannPoint::corner(sign(v[0]), sign(v[1])))
                });
            }
        }
        Err(e) => rec.eq("facets.polytope", "square".to_string(), e.to_string()),
    }
    rec.run("facets.word_ab", "abba".to_string(), || {
        Ok(build_facet_word(&h3, &[LETTER_A, LETTER_B], 2, 8)?.to_string())
    });
}

fn example1_suite(rec: &mut Recorder, cfg: &SuiteConfig) {
    let ex = Example1::new();
    let mut mismatches = 0usize;
    for len in 0..=10u32 {
        for mask in 0u32..(1 << len) {
            let w: Word = (0..len)
                .map(|p| if mask >> p & 1 == 1 { LETTER_A } else { LETTER_B })
                .collect();
            let prod = evaluate_word(&ex, &w).expect("a and b are generators");
            let stair = staircase_exponents(&w).expect("positive word");
            if (prod.i, prod.j, prod.k) != stair {
                mismatches += 1;
            }
        }
    }
    rec.eq("example1.staircase_vs_product", 0, mismatches);
    for l in 1..=5 {
        rec.run(&format!("example1.perm_check.{l}"), true, || Ok(lemma_perm_check(l)?.holds));
    }
    let budget = Budget::new(cfg.ex1_radius.max(ex.default_radius()));
    match CayleyOracle::new(&ex, cfg.ex1_radius, budget) {
        Ok(oracle) => {
            for l in 1..=cfg.eta_max {
                rec.run(&format!("example1.eta_excess.{l}"), true, || Ok(eta_excess(&oracle, l)? >= BigInt::from(2)));
            }
            rec.run("example1.facet_limit_at_g", "0".to_string(), || {
                let w = build_facet_word(&ex, &[LETTER_A, LETTER_B], 3, 8)?;
                let window = [Ex1Element::identity(), Ex1Element::g()];
                let t_max = u64::from(oracle.reach());
                let snap = facet_limit_snapshot(&oracle, &w, &window, t_max)?;
                Ok(snap.values[1].1.to_string())
            });
        }
        Err(e) => rec.eq("example1.ball", "built".to_string(), e.to_string()),
    }
}

//! Word-ball enumeration and derived-series approximation.

use crate::error::{Error, Result};
use crate::orbitals::GroupSpec;
use crate::plmap::{Interval, PLMap};
use serde::Serialize;
use std::collections::HashMap;

pub const DEFAULT_BALL_CAP: usize = 20_000;

/// The deduplicated set of group elements expressible as words of length at
/// most `radius`, with one witnessing word per element.
///
/// Words use the alphabet `a1..an` for the generators and `A1..An` for
/// their inverses; the set is closed under inverse and contains the
/// identity (empty word).
#[derive(Clone, Debug)]
pub struct WordBall {
    radius: usize,
    elements: Vec<PLMap>,
    words: HashMap<PLMap, String>,
}

impl WordBall {
    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Elements in canonical (breakpoint-lexicographic) order.
    pub fn elements(&self) -> &[PLMap] {
        &self.elements
    }

    pub fn word_for(&self, element: &PLMap) -> Option<&str> {
        self.words.get(element).map(|s| s.as_str())
    }

    pub fn contains(&self, element: &PLMap) -> bool {
        self.words.contains_key(element)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Breadth-first closure of the generators under right multiplication,
/// deduplicated by canonical form.
pub fn ball(group: &GroupSpec, radius: usize) -> Result<WordBall> {
    ball_with_cap(group, radius, DEFAULT_BALL_CAP)
}

pub fn ball_with_cap(group: &GroupSpec, radius: usize, cap: usize) -> Result<WordBall> {
    let mut alphabet: Vec<(PLMap, String)> = Vec::new();
    for (i, g) in group.generators().iter().enumerate() {
        alphabet.push((g.clone(), format!("a{}", i + 1)));
        alphabet.push((g.inverse(), format!("A{}", i + 1)));
    }
    let mut words: HashMap<PLMap, String> = HashMap::new();
    words.insert(PLMap::identity(), String::new());
    let mut frontier = vec![PLMap::identity()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for e in &frontier {
            for (g, letter) in &alphabet {
                let prod = e.compose(g);
                if !words.contains_key(&prod) {
                    if words.len() >= cap {
                        return Err(Error::CapExceeded(cap));
                    }
                    let mut w = words[e].clone();
                    if !w.is_empty() {
                        w.push(' ');
                    }
                    w.push_str(letter);
                    words.insert(prod.clone(), w);
                    next.push(prod);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    let mut elements: Vec<PLMap> = words.keys().cloned().collect();
    elements.sort();
    Ok(WordBall {
        radius,
        elements,
        words,
    })
}

pub const DEFAULT_COMMUTATOR_CAP: usize = 20_000;

/// Iterated-commutator approximation of the derived series: level 0 is the
/// ball itself (identity dropped), level k the pairwise commutators of
/// level k-1, deduplicated.
pub fn derived_generators(ball: &WordBall, level: usize) -> Result<Vec<PLMap>> {
    let mut current: Vec<PLMap> = ball
        .elements()
        .iter()
        .filter(|e| !e.is_identity())
        .cloned()
        .collect();
    for _ in 0..level {
        current = commutator_step(&current, DEFAULT_COMMUTATOR_CAP)?;
        if current.is_empty() {
            break;
        }
    }
    Ok(current)
}

/// Pairwise commutators of a set, identity removed, deduplicated and
/// canonically sorted. Pairs with disjoint supports commute and are skipped.
fn commutator_step(elements: &[PLMap], cap: usize) -> Result<Vec<PLMap>> {
    let supports: Vec<Vec<Interval>> = elements.iter().map(|e| e.support()).collect();
    let mut seen: std::collections::HashSet<PLMap> = std::collections::HashSet::new();
    for i in 0..elements.len() {
        for j in i + 1..elements.len() {
            if disjoint_supports(&supports[i], &supports[j]) {
                continue;
            }
            let fg = elements[i].compose(&elements[j]);
            let gf = elements[j].compose(&elements[i]);
            if fg == gf {
                continue;
            }
            // [f,g] = (gf)^-1 (fg)
            let c = gf.inverse().compose(&fg);
            if seen.insert(c) && seen.len() >= cap {
                return Err(Error::CapExceeded(cap));
            }
        }
    }
    let mut out: Vec<PLMap> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

fn disjoint_supports(a: &[Interval], b: &[Interval]) -> bool {
    a.iter().all(|x| b.iter().all(|y| x.is_disjoint(y)))
}

/// Evidence about the derived length gathered from a word ball.
///
/// A nontrivial iterated commutator at level k proves derived length
/// >= k+1; an empty computed level is consistent with (not proof of)
/// solvability at that length, at this radius.
#[derive(Clone, Debug, Serialize)]
pub struct DerivedReport {
    pub lower_bound: usize,
    pub vanishing_level: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<PLMap>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_note: Option<String>,
    pub radius: usize,
}

const MAX_DERIVED_LEVEL: usize = 12;

/// Largest level set carried into the pairwise commutator step. Bigger sets
/// are thinned first; thinning keeps the lower bound sound (every sampled
/// element still lies in the corresponding derived subgroup) at the cost of
/// possibly weakening it.
const LEVEL_CAP: usize = 200;

/// Thin a canonically sorted element set to at most `cap` elements,
/// round-robin across support-hull strata so that elements of every depth
/// survive.
fn stratified_sample(elements: Vec<PLMap>, cap: usize) -> Vec<PLMap> {
    if elements.len() <= cap {
        return elements;
    }
    let mut buckets: std::collections::BTreeMap<(crate::rational::Rat, crate::rational::Rat), Vec<PLMap>> =
        std::collections::BTreeMap::new();
    for e in elements {
        let supp = e.support();
        let hull = (
            supp.first().unwrap().left.clone(),
            supp.last().unwrap().right.clone(),
        );
        buckets.entry(hull).or_default().push(e);
    }
    let mut groups: Vec<Vec<PLMap>> = buckets.into_values().collect();
    groups.sort_by_key(|g| {
        let supp = g[0].support();
        (
            &supp.last().unwrap().right - &supp.first().unwrap().left,
            supp.first().unwrap().left.clone(),
        )
    });
    let mut out = Vec::with_capacity(cap);
    let mut idx = 0usize;
    'fill: loop {
        let mut took = false;
        for g in &groups {
            if let Some(e) = g.get(idx) {
                out.push(e.clone());
                took = true;
                if out.len() >= cap {
                    break 'fill;
                }
            }
        }
        if !took {
            break;
        }
        idx += 1;
    }
    out.sort();
    out
}

/// Complexity ceiling for one level set: total bit length of all breakpoint
/// coordinates. Iterated commutators of non-solvable groups blow up both in
/// breakpoint count and coefficient size; past this budget the iteration
/// stops and no vanishing level is claimed.
const LEVEL_COST_BUDGET: u64 = 120_000;

fn level_cost(elements: &[PLMap]) -> u64 {
    elements
        .iter()
        .map(|e| {
            e.breakpoints()
                .iter()
                .map(|(x, y)| {
                    x.numer().bits() + x.denom().bits() + y.numer().bits() + y.denom().bits()
                })
                .sum::<u64>()
        })
        .sum()
}

pub fn derived_length_bounds(group: &GroupSpec, radius: usize) -> Result<DerivedReport> {
    assert!(radius >= 1);
    let ball = ball(group, radius)?;
    let mut current: Vec<PLMap> = ball
        .elements()
        .iter()
        .filter(|e| !e.is_identity())
        .cloned()
        .collect();
    let mut level = 0usize;
    let mut witness: Option<PLMap> = None;
    let mut truncated = false;
    while !current.is_empty() && level < MAX_DERIVED_LEVEL {
        current = stratified_sample(current, LEVEL_CAP);
        witness = Some(current[0].clone());
        if level_cost(&current) > LEVEL_COST_BUDGET {
            // the nonempty level still counts toward the lower bound
            level += 1;
            truncated = true;
            break;
        }
        current = commutator_step(&current, DEFAULT_COMMUTATOR_CAP)?;
        level += 1;
    }
    let vanishing_level = if !truncated && current.is_empty() {
        Some(level)
    } else {
        None
    };
    let lower_bound = if witness.is_some() { level } else { 0 };
    let witness_note = witness.as_ref().map(|_| {
        format!(
            "nontrivial iterated commutator at level {}: derived length >= {}",
            lower_bound.saturating_sub(1),
            lower_bound
        )
    });
    Ok(DerivedReport {
        lower_bound,
        vanishing_level,
        witness,
        witness_note,
        radius,
    })
}

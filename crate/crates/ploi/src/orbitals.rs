//! Group supports, signed orbitals, end realization, transition chains,
//! and balancedness verdicts for finitely generated subgroups.

use crate::plmap::{End, Interval, PLMap};
use crate::words;
use serde::{Deserialize, Serialize};

/// A pair (orbital, signature): an element together with one of its orbitals.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct SignedOrbital {
    pub orbital: Interval,
    pub signature: PLMap,
}

impl SignedOrbital {
    pub fn new(orbital: Interval, signature: PLMap) -> Self {
        debug_assert!(signature.support().contains(&orbital));
        SignedOrbital { orbital, signature }
    }
}

/// A finitely generated subgroup, described by its generators.
/// Identity generators are dropped and duplicates removed on construction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupSpec {
    label: String,
    generators: Vec<PLMap>,
}

impl GroupSpec {
    pub fn new(label: impl Into<String>, generators: Vec<PLMap>) -> Self {
        let mut gens: Vec<PLMap> = Vec::new();
        for g in generators {
            if !g.is_identity() && !gens.contains(&g) {
                gens.push(g);
            }
        }
        GroupSpec {
            label: label.into(),
            generators: gens,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn generators(&self) -> &[PLMap] {
        &self.generators
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }
}

/// All signed orbitals of the given elements.
pub fn signed_orbitals(elements: &[PLMap]) -> Vec<SignedOrbital> {
    let mut out = Vec::new();
    for e in elements {
        for orb in e.support() {
            out.push(SignedOrbital::new(orb, e.clone()));
        }
    }
    out
}

/// Connected components of the union of generator supports, left to right.
///
/// Every element of the group is a word in the generators, so its support
/// lies in this union; conversely each generator's support is contained in
/// the group support. Components are therefore exactly the group orbitals.
pub fn group_orbitals(group: &GroupSpec) -> Vec<Interval> {
    components_of_union(group.generators())
}

/// Connected components of the union of the supports of `elements`.
pub fn components_of_union(elements: &[PLMap]) -> Vec<Interval> {
    let mut intervals: Vec<Interval> = elements.iter().flat_map(|g| g.support()).collect();
    intervals.sort();
    let mut out: Vec<Interval> = Vec::new();
    for iv in intervals {
        match out.last_mut() {
            // merge only on genuine overlap: a shared endpoint is fixed by
            // every generator and separates components
            Some(last) if iv.left < last.right => {
                if iv.right > last.right {
                    last.right = iv.right;
                }
            }
            _ => out.push(iv),
        }
    }
    out
}

/// True iff some orbital of `h` is contained in `a` and has the named end
/// equal to `a`'s.
pub fn realizes_end(h: &PLMap, a: &Interval, end: End) -> bool {
    h.support()
        .iter()
        .any(|orb| a.contains_interval(orb) && a.shares_end(orb, end))
}

/// True iff `h` has `a` itself as an orbital.
pub fn realizes_orbital(h: &PLMap, a: &Interval) -> bool {
    h.support().contains(a)
}

/// Overlapping but non-nested orbitals: with s = (a,b) and t = (c,d),
/// a transition chain of length two requires a < c < b < d (either order).
pub fn is_transition_chain(s: &SignedOrbital, t: &SignedOrbital) -> bool {
    let strict = |p: &Interval, q: &Interval| {
        p.left < q.left && q.left < p.right && p.right < q.right
    };
    strict(&s.orbital, &t.orbital) || strict(&t.orbital, &s.orbital)
}

/// All transition chains of length two among the signed orbitals of the
/// given elements, sorted for deterministic output.
pub fn find_transition_chains(elements: &[PLMap]) -> Vec<(SignedOrbital, SignedOrbital)> {
    let orbs = signed_orbitals(elements);
    let mut out = Vec::new();
    for i in 0..orbs.len() {
        for j in i + 1..orbs.len() {
            if is_transition_chain(&orbs[i], &orbs[j]) {
                let (a, b) = if orbs[i] <= orbs[j] {
                    (orbs[i].clone(), orbs[j].clone())
                } else {
                    (orbs[j].clone(), orbs[i].clone())
                };
                out.push((a, b));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Outcome of the bounded balance scan.
///
/// `BalancedUpToRadius` only asserts that the scan found no witness at the
/// given radius; it never claims balancedness of the full group. A witness
/// pairs the element orbital realizing exactly one end with the group
/// orbital whose end it realizes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum BalanceVerdict {
    BalancedUpToRadius {
        radius: usize,
    },
    ImbalancedWitness {
        radius: usize,
        witness: (SignedOrbital, Interval),
        note: String,
    },
}

impl BalanceVerdict {
    pub fn is_balanced(&self) -> bool {
        matches!(self, BalanceVerdict::BalancedUpToRadius { .. })
    }
}

const PAIR_SCAN_CAP: usize = 2000;

/// Scan the word ball for one-end realizations: the group's own orbitals
/// against every ball element, and the orbitals of every pair-generated
/// subgroup against short words in the pair. The subset-size bound (pairs)
/// and radius make this a semi-decision.
pub fn balance_check(group: &GroupSpec, radius: usize) -> BalanceVerdict {
    assert!(radius >= 1);
    let ball = match words::ball(group, radius) {
        Ok(b) => b,
        Err(_) => {
            return BalanceVerdict::BalancedUpToRadius { radius };
        }
    };
    let group_orbs = group_orbitals(group);
    for h in ball.elements() {
        for a in &group_orbs {
            if let Some(w) = one_end_witness(h, a) {
                return imbalanced(radius, w, a.clone());
            }
        }
    }
    // bounded subgroup scan: subgroups generated by pairs of ball elements,
    // probed with words of length <= 2 in the pair
    let elems = ball.elements();
    let mut scanned = 0usize;
    'outer: for i in 0..elems.len() {
        for j in i + 1..elems.len() {
            if scanned >= PAIR_SCAN_CAP {
                break 'outer;
            }
            scanned += 1;
            let g = &elems[i];
            let h = &elems[j];
            let orbs = components_of_union(&[g.clone(), h.clone()]);
            let mut probes = vec![g.clone(), h.clone(), g.inverse(), h.inverse()];
            let letters = probes.clone();
            for a in &letters {
                for b in &letters {
                    let p = a.compose(b);
                    if !p.is_identity() && !probes.contains(&p) {
                        probes.push(p);
                    }
                }
            }
            for e in &probes {
                for a in &orbs {
                    if let Some(w) = one_end_witness(e, a) {
                        return imbalanced(radius, w, a.clone());
                    }
                }
            }
        }
    }
    BalanceVerdict::BalancedUpToRadius { radius }
}

fn imbalanced(radius: usize, witness: SignedOrbital, group_orbital: Interval) -> BalanceVerdict {
    BalanceVerdict::ImbalancedWitness {
        radius,
        witness: (witness, group_orbital),
        note: "imbalanced: the group contains a copy of Thompson's group F \
               (no embedding is constructed)"
            .into(),
    }
}

/// If `h` realizes exactly one end of `a`, return the signed orbital doing so.
fn one_end_witness(h: &PLMap, a: &Interval) -> Option<SignedOrbital> {
    let supp = h.support();
    let left = supp
        .iter()
        .find(|o| a.contains_interval(o) && a.shares_end(o, End::Left));
    let right = supp
        .iter()
        .find(|o| a.contains_interval(o) && a.shares_end(o, End::Right));
    match (left, right) {
        (Some(o), None) | (None, Some(o)) => Some(SignedOrbital::new(o.clone(), h.clone())),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{alpha1, alpha2, bump};
    use crate::rational::rat;

    fn iv(a: (i64, i64), b: (i64, i64)) -> Interval {
        Interval::new(rat(a.0, a.1), rat(b.0, b.1))
    }

    fn group(gens: Vec<PLMap>) -> GroupSpec {
        GroupSpec::new("test", gens)
    }

    #[test]
    fn group_orbital_components() {
        let w2 = group(vec![alpha1(), alpha2()]);
        assert_eq!(group_orbitals(&w2), vec![iv((0, 1), (1, 1))]);
        let disj = group(vec![alpha2(), alpha2().conjugate(&alpha1())]);
        assert_eq!(
            group_orbitals(&disj),
            vec![iv((1, 4), (1, 2)), iv((1, 2), (3, 4))]
        );
        assert!(group_orbitals(&group(vec![PLMap::identity()])).is_empty());
    }

    #[test]
    fn end_realization() {
        let whole = iv((0, 1), (1, 1));
        assert!(realizes_end(&alpha1(), &whole, End::Left));
        assert!(realizes_end(&alpha1(), &whole, End::Right));
        assert!(!realizes_end(&alpha2(), &whole, End::Left));
        assert!(!realizes_end(&PLMap::identity(), &whole, End::Left));
    }

    #[test]
    fn transition_chain_predicate() {
        let s = SignedOrbital::new(iv((1, 8), (1, 2)), bump(&iv((1, 8), (1, 2))));
        let t = SignedOrbital::new(iv((1, 4), (3, 4)), bump(&iv((1, 4), (3, 4))));
        assert!(is_transition_chain(&s, &t));
        assert!(is_transition_chain(&t, &s));
        assert!(!is_transition_chain(&s, &s));
        // touching at an endpoint is not a transition chain
        let u = SignedOrbital::new(iv((1, 4), (1, 2)), alpha2());
        let v = SignedOrbital::new(iv((1, 2), (3, 4)), bump(&iv((1, 2), (3, 4))));
        assert!(!is_transition_chain(&u, &v));
        // nesting is not a transition chain
        let w = SignedOrbital::new(iv((0, 1), (1, 1)), alpha1());
        assert!(!is_transition_chain(&u, &w));
    }

    #[test]
    fn chains_in_w2_ball_absent() {
        let w2 = group(vec![alpha1(), alpha2()]);
        let ball = words::ball(&w2, 3).unwrap();
        assert!(find_transition_chains(ball.elements()).is_empty());
    }

    #[test]
    fn chain_fixture_found() {
        let a = bump(&iv((1, 8), (1, 2)));
        let b = bump(&iv((1, 4), (3, 4)));
        let chains = find_transition_chains(&[a, b]);
        assert_eq!(chains.len(), 1);
        assert!(find_transition_chains(&[]).is_empty());
    }

    #[test]
    fn balance_witness_fixture() {
        let g = group(vec![alpha1(), bump(&iv((0, 1), (1, 2)))]);
        let verdict = balance_check(&g, 1);
        match verdict {
            BalanceVerdict::ImbalancedWitness { witness, .. } => {
                assert_eq!(witness.1, iv((0, 1), (1, 1)));
            }
            _ => panic!("expected imbalance witness"),
        }
    }

    #[test]
    fn balanced_fixtures() {
        assert!(balance_check(&group(vec![alpha1()]), 2).is_balanced());
        assert!(balance_check(&group(vec![PLMap::identity()]), 1).is_balanced());
        assert!(balance_check(&group(vec![alpha1(), alpha2()]), 2).is_balanced());
    }
}

//! Towers: chains of signed orbitals under strict orbital inclusion,
//! maximal-height search over word balls, exemplary checks, and per-orbital
//! depth/height within a finite element set.

use crate::error::{Error, Result};
use crate::orbitals::{signed_orbitals, GroupSpec, SignedOrbital};
use crate::plmap::{Interval, PLMap};
use crate::words;
use serde::Serialize;

/// A chain of signed orbitals, innermost first, strictly nested, with
/// exactly one signature per orbital.
#[derive(Clone, Debug, Serialize)]
pub struct Tower {
    entries: Vec<SignedOrbital>,
}

impl Tower {
    pub fn new(entries: Vec<SignedOrbital>) -> Result<Self> {
        for w in entries.windows(2) {
            if !w[1].orbital.properly_contains(&w[0].orbital) {
                return Err(Error::Other(format!(
                    "tower entries not strictly nested: {} vs {}",
                    w[0].orbital, w[1].orbital
                )));
            }
        }
        Ok(Tower { entries })
    }

    pub fn empty() -> Self {
        Tower { entries: vec![] }
    }

    pub fn entries(&self) -> &[SignedOrbital] {
        &self.entries
    }

    pub fn height(&self) -> usize {
        self.entries.len()
    }
}

/// Distinct orbitals of the elements with a canonical signature each:
/// when several signatures share an orbital, the lexicographically
/// smallest breakpoint list wins.
fn canonical_signed_orbitals(elements: &[PLMap]) -> Vec<SignedOrbital> {
    let mut all = signed_orbitals(elements);
    all.sort();
    all.dedup_by(|b, a| {
        // keep the first (smallest signature) per orbital
        a.orbital == b.orbital
    });
    all
}

/// A tower of maximal height over all signed orbitals of the elements:
/// longest-path search on the strict-containment DAG of distinct orbitals.
pub fn max_tower(elements: &[PLMap]) -> Tower {
    let nodes = canonical_signed_orbitals(elements);
    let chain = longest_chain(&nodes);
    Tower::new(chain).expect("longest chain is nested")
}

/// Longest strict-containment chain, innermost first. Nodes must have
/// distinct orbitals.
fn longest_chain(nodes: &[SignedOrbital]) -> Vec<SignedOrbital> {
    let mut order: Vec<usize> = (0..nodes.len()).collect();
    // proper containment strictly increases width, so width order is
    // topological for the containment DAG
    order.sort_by_key(|&i| {
        let o = &nodes[i].orbital;
        (&o.right - &o.left, o.left.clone())
    });
    let mut best_len = vec![0usize; nodes.len()];
    let mut parent = vec![usize::MAX; nodes.len()];
    let mut best = 0usize;
    let mut best_at = usize::MAX;
    for (pos, &i) in order.iter().enumerate() {
        best_len[i] = 1;
        for &j in &order[..pos] {
            if nodes[i].orbital.properly_contains(&nodes[j].orbital) && best_len[j] + 1 > best_len[i]
            {
                best_len[i] = best_len[j] + 1;
                parent[i] = j;
            }
        }
        if best_len[i] > best {
            best = best_len[i];
            best_at = i;
        }
    }
    let mut chain = Vec::new();
    let mut cur = best_at;
    while cur != usize::MAX {
        chain.push(nodes[cur].clone());
        cur = parent[cur];
    }
    chain.reverse();
    chain
}

/// A tower is exemplary when for every nested pair (A,g) < (B,h), no
/// orbital of g contains an end of B and no orbital of g inside B shares
/// an end with B.
pub fn is_exemplary(tower: &Tower) -> bool {
    let entries = tower.entries();
    for i in 0..entries.len() {
        for j in i + 1..entries.len() {
            let g = &entries[i].signature;
            let outer = &entries[j].orbital;
            for orb in g.support() {
                if orb.contains(&outer.left) || orb.contains(&outer.right) {
                    return false;
                }
                if outer.contains_interval(&orb)
                    && (orb.left == outer.left || orb.right == outer.right)
                {
                    return false;
                }
            }
        }
    }
    true
}

/// A height lower bound with a tower certificate from a word ball.
///
/// The height only bounds the group's depth from below; by the depth =
/// derived length correspondence for solvable groups, a solvable group
/// containing this tower has derived length >= height.
#[derive(Clone, Debug, Serialize)]
pub struct DepthReport {
    pub height: usize,
    pub witness: Tower,
    pub radius: usize,
    pub exemplary: bool,
    pub note: String,
}

pub fn depth_lower_bound(group: &GroupSpec, radius: usize) -> Result<DepthReport> {
    assert!(radius >= 1);
    let ball = words::ball(group, radius)?;
    let witness = max_tower(ball.elements());
    let height = witness.height();
    let exemplary = is_exemplary(&witness);
    Ok(DepthReport {
        height,
        exemplary,
        radius,
        note: format!(
            "tower of height {} found at radius {}; if the group is solvable \
             its derived length is >= {}",
            height, radius, height
        ),
        witness,
    })
}

/// Longest strict chain of element orbitals from `a` upward (outward),
/// `a` included.
pub fn orbital_depth(a: &Interval, elements: &[PLMap]) -> Result<usize> {
    chain_length(a, elements, true)
}

/// Longest strict chain of element orbitals from `a` downward (inward),
/// `a` included.
pub fn orbital_height(a: &Interval, elements: &[PLMap]) -> Result<usize> {
    chain_length(a, elements, false)
}

fn chain_length(a: &Interval, elements: &[PLMap], upward: bool) -> Result<usize> {
    let mut orbitals: Vec<Interval> = elements.iter().flat_map(|e| e.support()).collect();
    orbitals.sort();
    orbitals.dedup();
    if !orbitals.contains(a) {
        return Err(Error::NotElementOrbital(a.clone()));
    }
    // memoized longest chain by recursion over the finite orbital set
    fn go(
        cur: &Interval,
        orbitals: &[Interval],
        upward: bool,
        memo: &mut std::collections::HashMap<Interval, usize>,
    ) -> usize {
        if let Some(&v) = memo.get(cur) {
            return v;
        }
        let mut best = 1;
        for o in orbitals {
            let step = if upward {
                o.properly_contains(cur)
            } else {
                cur.properly_contains(o)
            };
            if step {
                best = best.max(1 + go(o, orbitals, upward, memo));
            }
        }
        memo.insert(cur.clone(), best);
        best
    }
    let mut memo = std::collections::HashMap::new();
    Ok(go(a, &orbitals, upward, &mut memo))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{alpha1, alpha2, bump, w_generators};
    use crate::orbitals::GroupSpec;
    use crate::rational::rat;

    fn iv(a: (i64, i64), b: (i64, i64)) -> Interval {
        Interval::new(rat(a.0, a.1), rat(b.0, b.1))
    }

    #[test]
    fn max_tower_alpha_pair() {
        let t = max_tower(&[alpha1(), alpha2()]);
        assert_eq!(t.height(), 2);
        assert_eq!(t.entries()[0].orbital, iv((1, 4), (1, 2)));
        assert_eq!(t.entries()[0].signature, alpha2());
        assert_eq!(t.entries()[1].orbital, iv((0, 1), (1, 1)));
        assert_eq!(t.entries()[1].signature, alpha1());
    }

    #[test]
    fn max_tower_disjoint_and_empty() {
        let t = max_tower(&[alpha2(), alpha2().conjugate(&alpha1())]);
        assert_eq!(t.height(), 1);
        assert_eq!(max_tower(&[]).height(), 0);
    }

    #[test]
    fn exemplary_checks() {
        let t = max_tower(&[alpha1(), alpha2()]);
        assert!(is_exemplary(&t));
        let single = max_tower(&[alpha2()]);
        assert!(is_exemplary(&single));
        // inner signature orbital shares end 1/2 of the outer orbital (0,1/2)
        let outer = bump(&iv((0, 1), (1, 2)));
        let inner = bump(&iv((1, 4), (1, 2)));
        let tower = Tower::new(vec![
            SignedOrbital::new(iv((1, 4), (1, 2)), inner),
            SignedOrbital::new(iv((0, 1), (1, 2)), outer),
        ])
        .unwrap();
        assert!(!is_exemplary(&tower));
    }

    #[test]
    fn depth_reports() {
        let r = depth_lower_bound(&w_generators(3), 3).unwrap();
        assert_eq!(r.height, 3);
        assert!(r.exemplary);
        let c = depth_lower_bound(&GroupSpec::new("c", vec![alpha2()]), 5).unwrap();
        assert_eq!(c.height, 1);
        let t = depth_lower_bound(&GroupSpec::new("t", vec![PLMap::identity()]), 1).unwrap();
        assert_eq!(t.height, 0);
    }

    #[test]
    fn per_orbital_depth_height() {
        let whole = iv((0, 1), (1, 1));
        let inner = iv((1, 4), (1, 2));
        let elems = [alpha1(), alpha2()];
        assert_eq!(orbital_depth(&whole, &elems).unwrap(), 1);
        assert_eq!(orbital_depth(&inner, &elems).unwrap(), 2);
        assert_eq!(orbital_height(&whole, &[alpha1()]).unwrap(), 1);
        assert_eq!(orbital_height(&whole, &elems).unwrap(), 2);
        assert!(orbital_depth(&iv((1, 3), (2, 3)), &elems).is_err());
    }
}

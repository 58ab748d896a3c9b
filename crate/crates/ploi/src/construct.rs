//! Named generator constructions: the maps α₁ and α₂, affine rescaling,
//! one-orbital bumps, the β_k family, the iterated wreath generators W_n,
//! truncated G_n generator families, and membership in Thompson's group F.

use crate::orbitals::GroupSpec;
use crate::plmap::{Interval, PLMap};
use crate::rational::{rat, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

/// Finite stand-in for the infinite wreath-sum index range: `level` nesting
/// steps and conjugate exponents `-width..=width` at the top layer.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TruncationParams {
    pub level: usize,
    pub width: i64,
}

/// α₁: slope 2 on [0,1/4], translation by 1/4 on [1/4,1/2], slope 1/2 after.
pub fn alpha1() -> PLMap {
    PLMap::from_breakpoints(vec![
        (rat(0, 1), rat(0, 1)),
        (rat(1, 4), rat(1, 2)),
        (rat(1, 2), rat(3, 4)),
        (rat(1, 1), rat(1, 1)),
    ])
    .expect("alpha1 table")
}

/// α₂: the rescale of α₁ into (1/4,1/2), identity elsewhere.
pub fn alpha2() -> PLMap {
    PLMap::from_breakpoints(vec![
        (rat(0, 1), rat(0, 1)),
        (rat(1, 4), rat(1, 4)),
        (rat(5, 16), rat(3, 8)),
        (rat(3, 8), rat(7, 16)),
        (rat(1, 2), rat(1, 2)),
        (rat(1, 1), rat(1, 1)),
    ])
    .expect("alpha2 table")
}

/// Conjugate `f` by the affine map taking [0,1] onto the closure of `a`:
/// the result acts as the rescaled `f` on `a` and is the identity off it.
pub fn scale_into(f: &PLMap, a: &Interval) -> PLMap {
    let width = &a.right - &a.left;
    let phi = |x: &Rat| &a.left + &(&width * x);
    let mut points = vec![(Rat::zero(), Rat::zero())];
    if !a.left.is_zero() {
        points.push((a.left.clone(), a.left.clone()));
    }
    for (x, y) in f.breakpoints() {
        if !x.is_zero() && !x.is_one() {
            points.push((phi(x), phi(y)));
        }
    }
    if !a.right.is_one() {
        points.push((a.right.clone(), a.right.clone()));
    }
    points.push((Rat::one(), Rat::one()));
    PLMap::from_breakpoints(points).expect("affine rescale is a homeomorphism")
}

/// A one-orbital right-moving map with orbital exactly `a` (the α₁ profile).
pub fn bump(a: &Interval) -> PLMap {
    scale_into(&alpha1(), a)
}

/// β_k = α₂ conjugated by α₁^k; β₀ = α₂.
pub fn beta(k: i64) -> PLMap {
    alpha2().conjugate(&alpha1().power(k))
}

/// Generators of the iterated wreath product W_n: α₁ together with the
/// rescale chain α_i = scale_into(α_{i-1}, (1/4,1/2)), so each support sits
/// in one fundamental domain of the previous generator.
pub fn w_generators(n: usize) -> GroupSpec {
    assert!(n >= 1, "w_generators requires n >= 1");
    let inner = Interval::new(rat(1, 4), rat(1, 2));
    let mut gens = vec![alpha1()];
    for _ in 1..n {
        gens.push(scale_into(gens.last().unwrap(), &inner));
    }
    GroupSpec::new(format!("w:{}", n), gens)
}

/// Generators of a finite truncation of G_n.
///
/// The nested family S(1) = {α₂}, S(k) = {h rescaled into (1/4,1/2) twice}
/// ∪ {α₂} places every deeper support inside (5/16,3/8), one fundamental
/// domain of α₂; the output conjugates S(level) by powers of α₁ in
/// `-width..=width`, which have pairwise disjoint supports.
pub fn gn_generators(p: TruncationParams) -> GroupSpec {
    let label = format!("g:{}:{}", p.level, p.width);
    if p.level == 0 {
        return GroupSpec::new(label, vec![]);
    }
    let inner = Interval::new(rat(1, 4), rat(1, 2));
    let mut layer = vec![alpha2()];
    for _ in 1..p.level {
        let mut next: Vec<PLMap> = layer
            .iter()
            .map(|h| scale_into(&scale_into(h, &inner), &inner))
            .collect();
        next.push(alpha2());
        layer = next;
    }
    let mut gens = Vec::new();
    for k in -p.width..=p.width {
        let conj = alpha1().power(k);
        for g in &layer {
            gens.push(g.conjugate(&conj));
        }
    }
    GroupSpec::new(label, gens)
}

/// True iff every slope is an integer power of 2 and every breakpoint
/// coordinate is dyadic — membership in Thompson's group F.
pub fn f_membership(f: &PLMap) -> bool {
    let power_of_two = |n: &BigInt| {
        n.is_positive() && {
            let m = n.magnitude();
            (m & &(m - 1u32)).bits() == 0
        }
    };
    let pow2_ratio = |r: &Rat| {
        (r.numer().is_one() && power_of_two(r.denom()))
            || (r.denom().is_one() && power_of_two(r.numer()))
    };
    f.slopes().iter().all(|s| pow2_ratio(s))
        && f.breakpoints()
            .iter()
            .all(|(x, y)| power_of_two(x.denom()) && power_of_two(y.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: (i64, i64), b: (i64, i64)) -> Interval {
        Interval::new(rat(a.0, a.1), rat(b.0, b.1))
    }

    #[test]
    fn alpha2_is_shrunk_alpha1() {
        assert_eq!(scale_into(&alpha1(), &iv((1, 4), (1, 2))), alpha2());
        assert_eq!(scale_into(&PLMap::identity(), &iv((1, 4), (1, 2))), PLMap::identity());
    }

    #[test]
    fn scale_into_support() {
        let f = scale_into(&alpha1(), &iv((5, 16), (3, 8)));
        assert_eq!(f.support(), vec![iv((5, 16), (3, 8))]);
    }

    #[test]
    fn bump_profile() {
        let a = iv((1, 8), (1, 2));
        let b = bump(&a);
        assert_eq!(b.support(), vec![a.clone()]);
        assert_eq!(b.end_slopes(&a).unwrap(), (rat(2, 1), rat(1, 2)));
        assert_eq!(bump(&iv((0, 1), (1, 1))), alpha1());
    }

    #[test]
    fn beta_family() {
        assert_eq!(beta(0), alpha2());
        assert_eq!(beta(1).support(), vec![iv((1, 2), (3, 4))]);
        for i in -3..=3i64 {
            for j in -3..=3i64 {
                if i != j {
                    assert!(beta(i).commutator(&beta(j)).is_identity());
                }
            }
        }
    }

    #[test]
    fn w_generator_nesting() {
        let w = w_generators(3);
        assert_eq!(w.generators().len(), 3);
        assert_eq!(w.generators()[1], alpha2());
        // support of each deeper generator sits in one fundamental domain
        // [a, a·prev) of the previous generator
        for pair in w.generators().windows(2) {
            let prev = &pair[0];
            let supp = pair[1].support();
            assert_eq!(supp.len(), 1);
            let a = supp[0].left.clone();
            let top = prev.eval(&a).unwrap();
            assert!(top > a);
            assert!(supp[0].right <= top);
        }
    }

    #[test]
    fn gn_level_one_is_betas() {
        let g = gn_generators(TruncationParams { level: 1, width: 1 });
        let gens = g.generators();
        assert_eq!(gens.len(), 3);
        for (i, k) in (-1..=1i64).enumerate() {
            assert_eq!(gens[i], beta(k));
        }
        for a in gens {
            for b in gens {
                if a != b {
                    assert!(a.commutator(b).is_identity());
                }
            }
        }
    }

    #[test]
    fn gn_level_two_nesting() {
        let g = gn_generators(TruncationParams { level: 2, width: 0 });
        let gens = g.generators();
        assert_eq!(gens.len(), 2);
        let deep = gens.iter().find(|g| **g != alpha2()).unwrap();
        let supp = deep.support();
        assert_eq!(supp.len(), 1);
        assert!(iv((5, 16), (3, 8)).contains_interval(&supp[0]));
    }

    #[test]
    fn f_membership_checks() {
        assert!(f_membership(&alpha1()));
        assert!(f_membership(&alpha2()));
        assert!(f_membership(&PLMap::identity()));
        for g in gn_generators(TruncationParams { level: 2, width: 1 }).generators() {
            assert!(f_membership(g));
        }
        // slope 3 on the first piece
        let bad = PLMap::from_breakpoints(vec![
            (rat(0, 1), rat(0, 1)),
            (rat(1, 4), rat(3, 4)),
            (rat(1, 1), rat(1, 1)),
        ])
        .unwrap();
        assert!(!f_membership(&bad));
    }
}

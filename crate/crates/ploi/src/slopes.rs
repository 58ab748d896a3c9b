//! The end-slope homomorphism, its image lattice, controllers and c-forms.
//!
//! Slopes of maps with rational breakpoints are rational, so the slope
//! homomorphism is represented multiplicatively: a map goes to the exact
//! pair (slope at the left end of A, slope at the right end of A), and the
//! image subgroup of the positive rationals squared is analyzed via
//! prime-exponent vectors and integer row reduction. No logarithms are
//! ever taken.

use crate::error::{Error, Result};
use crate::orbitals::{group_orbitals, GroupSpec};
use crate::plmap::{Interval, PLMap};
use crate::rational::Rat;
use crate::words;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

/// Multiplicative pair of end slopes; the pair of a product is the
/// componentwise product of pairs.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SlopePair {
    pub left: Rat,
    pub right: Rat,
}

impl SlopePair {
    pub fn one() -> Self {
        SlopePair {
            left: Rat::one(),
            right: Rat::one(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.left.is_one() && self.right.is_one()
    }

    pub fn mul(&self, other: &SlopePair) -> SlopePair {
        SlopePair {
            left: &self.left * &other.left,
            right: &self.right * &other.right,
        }
    }

    pub fn invert(&self) -> SlopePair {
        SlopePair {
            left: self.left.recip(),
            right: self.right.recip(),
        }
    }
}

/// End slopes of `h` on `A` as a multiplicative pair.
/// Requires `h` to fix both ends of `A`.
pub fn phi(h: &PLMap, a: &Interval) -> Result<SlopePair> {
    let (left, right) = h.end_slopes(a)?;
    Ok(SlopePair { left, right })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum LatticeKind {
    Trivial,
    Cyclic,
    HigherRank,
}

/// Rank analysis of the subgroup of slope pairs generated by a group on an
/// orbital. `imbalanced` flags a lattice vector supported on exactly one
/// of the two slope components.
#[derive(Clone, Debug, Serialize)]
pub struct LatticeVerdict {
    pub rank: usize,
    pub kind: LatticeKind,
    pub generator: Option<SlopePair>,
    pub imbalanced: bool,
}

/// Prime factorization of a positive rational as prime -> exponent.
fn factor_rational(r: &Rat) -> BTreeMap<BigInt, i64> {
    assert!(r.is_positive(), "slopes are positive");
    let mut out = BTreeMap::new();
    factor_into(r.numer(), 1, &mut out);
    factor_into(r.denom(), -1, &mut out);
    out
}

fn factor_into(n: &BigInt, sign: i64, out: &mut BTreeMap<BigInt, i64>) {
    let mut n = n.abs();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        while (&n % &p).is_zero() {
            *out.entry(p.clone()).or_insert(0) += sign;
            n = &n / &p;
        }
        p += 1;
    }
    if !n.is_one() {
        *out.entry(n).or_insert(0) += sign;
    }
}

/// Exponent-vector coordinates for a set of slope pairs: the first half of
/// each vector is the left slope over the shared prime basis, the second
/// half the right slope.
struct ExponentBasis {
    primes: Vec<BigInt>,
}

impl ExponentBasis {
    fn for_pairs(pairs: &[SlopePair]) -> Self {
        let mut primes: Vec<BigInt> = pairs
            .iter()
            .flat_map(|p| {
                factor_rational(&p.left)
                    .into_keys()
                    .chain(factor_rational(&p.right).into_keys())
            })
            .collect();
        primes.sort();
        primes.dedup();
        ExponentBasis { primes }
    }

    fn dim(&self) -> usize {
        2 * self.primes.len()
    }

    fn vector(&self, pair: &SlopePair) -> Option<Vec<i128>> {
        let mut v = vec![0i128; self.dim()];
        for (half, slope) in [(0, &pair.left), (1, &pair.right)] {
            for (p, e) in factor_rational(slope) {
                let idx = self.primes.binary_search(&p).ok()?;
                v[half * self.primes.len() + idx] = e as i128;
            }
        }
        Some(v)
    }

    fn pair(&self, v: &[i128]) -> SlopePair {
        let k = self.primes.len();
        let build = |coords: &[i128]| {
            let mut r = Rat::one();
            for (p, &e) in self.primes.iter().zip(coords) {
                let base = Rat::new(p.clone(), BigInt::one());
                r = r * base.pow(e.to_i64().expect("small exponent"));
            }
            r
        };
        SlopePair {
            left: build(&v[..k]),
            right: build(&v[k..]),
        }
    }
}

/// In-place integer row reduction (Hermite style). Returns the nonzero
/// reduced rows; their count is the lattice rank.
fn row_reduce(mut rows: Vec<Vec<i128>>) -> Vec<Vec<i128>> {
    if rows.is_empty() {
        return rows;
    }
    let cols = rows[0].len();
    let mut pivot = 0usize;
    for col in 0..cols {
        if pivot >= rows.len() {
            break;
        }
        // gcd-eliminate the column at and below the pivot row
        loop {
            let min_row = (pivot..rows.len())
                .filter(|&r| rows[r][col] != 0)
                .min_by_key(|&r| rows[r][col].unsigned_abs());
            let Some(m) = min_row else { break };
            rows.swap(pivot, m);
            let p = rows[pivot][col];
            let mut cleared = true;
            for r in pivot + 1..rows.len() {
                let q = rows[r][col] / p;
                if q != 0 {
                    for c in 0..cols {
                        rows[r][c] -= q * rows[pivot][c];
                    }
                }
                if rows[r][col] != 0 {
                    cleared = false;
                }
            }
            if cleared {
                break;
            }
        }
        if rows[pivot][col] != 0 {
            if rows[pivot][col] < 0 {
                for c in 0..cols {
                    rows[pivot][c] = -rows[pivot][c];
                }
            }
            pivot += 1;
        }
    }
    rows.truncate(pivot);
    rows
}

fn lattice_rank(vectors: &[Vec<i128>]) -> usize {
    row_reduce(vectors.to_vec()).len()
}

/// Analyze the slope-pair lattice of the group's generators on orbital `a`.
pub fn image_lattice(group: &GroupSpec, a: &Interval) -> Result<LatticeVerdict> {
    if !group_orbitals(group).contains(a) {
        return Err(Error::NotGroupOrbital(a.clone()));
    }
    let pairs: Vec<SlopePair> = group
        .generators()
        .iter()
        .map(|g| phi(g, a))
        .collect::<Result<_>>()?;
    Ok(lattice_of_pairs(&pairs))
}

/// Lattice analysis of an explicit set of slope pairs.
pub fn lattice_of_pairs(pairs: &[SlopePair]) -> LatticeVerdict {
    let basis = ExponentBasis::for_pairs(pairs);
    let vectors: Vec<Vec<i128>> = pairs
        .iter()
        .map(|p| basis.vector(p).expect("own basis"))
        .collect();
    let reduced = row_reduce(vectors.clone());
    let rank = reduced.len();
    let kind = match rank {
        0 => LatticeKind::Trivial,
        1 => LatticeKind::Cyclic,
        _ => LatticeKind::HigherRank,
    };
    let generator = if rank == 1 {
        Some(basis.pair(&reduced[0]))
    } else {
        None
    };
    // one-sided vector exists iff projecting away either half loses rank
    let k = basis.primes.len();
    let halves: Vec<Vec<i128>> = vectors.iter().map(|v| v[..k].to_vec()).collect();
    let other: Vec<Vec<i128>> = vectors.iter().map(|v| v[k..].to_vec()).collect();
    let imbalanced = rank > 0 && (lattice_rank(&halves) < rank || lattice_rank(&other) < rank);
    LatticeVerdict {
        rank,
        kind,
        generator,
        imbalanced,
    }
}

/// Search the word ball for an element whose slope pair generates the
/// (cyclic) image lattice on `a`. Such an element realizes both ends of `a`.
pub fn find_controller(group: &GroupSpec, a: &Interval, radius: usize) -> Result<PLMap> {
    let verdict = image_lattice(group, a)?;
    match verdict.kind {
        LatticeKind::Trivial => return Err(Error::LatticeNotCyclic("Trivial")),
        LatticeKind::HigherRank => return Err(Error::LatticeNotCyclic("HigherRank")),
        LatticeKind::Cyclic => {}
    }
    let gen_pair = verdict.generator.expect("cyclic has generator");
    let gen_inv = gen_pair.invert();
    let ball = words::ball(group, radius)?;
    for e in ball.elements() {
        if let Ok(p) = phi(e, a) {
            if p == gen_pair || p == gen_inv {
                return Ok(e.clone());
            }
        }
    }
    Err(Error::RadiusExhausted(radius))
}

/// Decomposition h = c^k · residue with the residue identity near both
/// ends of `A` (it realizes neither end).
#[derive(Clone, Debug, Serialize)]
pub struct CForm {
    pub exponent: i64,
    pub residue: PLMap,
}

/// Solve h = c^k · g° on orbital `a`. Errors if the slope pair of `h` is
/// not a power of the controller's pair.
pub fn c_form(h: &PLMap, c: &PLMap, a: &Interval) -> Result<CForm> {
    let ph = phi(h, a)?;
    let pc = phi(c, a)?;
    let pairs = [ph.clone(), pc.clone()];
    let basis = ExponentBasis::for_pairs(&pairs);
    let vh = basis.vector(&ph).expect("own basis");
    let vc = basis.vector(&pc).expect("own basis");
    let exponent: i64 = if vh.iter().all(|&x| x == 0) {
        0
    } else {
        let i = vc
            .iter()
            .position(|&x| x != 0)
            .ok_or(Error::NotControllerPower)?;
        if vh[i] % vc[i] != 0 {
            return Err(Error::NotControllerPower);
        }
        let k = vh[i] / vc[i];
        if vh.iter().zip(&vc).any(|(&a, &b)| a != k * b) {
            return Err(Error::NotControllerPower);
        }
        k as i64
    };
    let residue = c.power(-exponent).compose(h);
    debug_assert!(phi(&residue, a).map(|p| p.is_one()).unwrap_or(false));
    Ok(CForm { exponent, residue })
}

/// A controller is consistent when its end slopes sit on opposite sides of
/// 1 (it moves points the same way near both ends).
pub fn is_consistent_controller(c: &PLMap, a: &Interval) -> Result<bool> {
    let p = phi(c, a)?;
    let one = Rat::one();
    Ok((p.left > one && p.right < one) || (p.left < one && p.right > one))
}

/// Does the controller have `a` itself as an orbital?
pub fn controller_realizes(c: &PLMap, a: &Interval) -> bool {
    c.support().contains(a)
}

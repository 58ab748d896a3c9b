//! Constructive classification of solvable subgroups: structure
//! expressions (iterated wreath products of Z and bounded direct sums),
//! one-bump decomposition with certificates, and the end-to-end
//! classification pipeline that reports obstructions as results.

use crate::error::{Error, Result};
use crate::orbitals::{self, components_of_union, BalanceVerdict, GroupSpec};
use crate::plmap::{Interval, PLMap};
use crate::rational::{rat, Rat};
use crate::slopes::{self, LatticeKind, SlopePair};
use crate::split;
use crate::towers;
use crate::words;
use serde::Serialize;
use std::fmt;

/// Isomorphism type built from Z by wreathing on top and finite direct sums.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub enum StructureExpr {
    Trivial,
    /// Z wreath the inner group (inner group in the bottom).
    WreathZ(Box<StructureExpr>),
    BoundedSum(Vec<StructureExpr>),
}

pub fn expr_derived_length(e: &StructureExpr) -> usize {
    match e {
        StructureExpr::Trivial => 0,
        StructureExpr::WreathZ(inner) => {
            let d = expr_derived_length(inner);
            if d == 0 {
                1
            } else {
                d + 1
            }
        }
        StructureExpr::BoundedSum(kids) => kids.iter().map(expr_derived_length).max().unwrap_or(0),
    }
}

/// Index of the smallest member of the canonical solvable family the
/// expression embeds into; equals the derived length.
pub fn embedding_target(e: &StructureExpr) -> usize {
    expr_derived_length(e)
}

impl StructureExpr {
    pub fn derived_length(&self) -> usize {
        expr_derived_length(self)
    }

    /// Flatten nested sums, drop trivial summands, collapse singleton sums,
    /// and sort summands canonically.
    pub fn normalize(self) -> StructureExpr {
        match self {
            StructureExpr::Trivial => StructureExpr::Trivial,
            StructureExpr::WreathZ(inner) => StructureExpr::WreathZ(Box::new(inner.normalize())),
            StructureExpr::BoundedSum(kids) => {
                let mut flat: Vec<StructureExpr> = Vec::new();
                for k in kids {
                    match k.normalize() {
                        StructureExpr::Trivial => {}
                        StructureExpr::BoundedSum(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                flat.sort_by_key(|e| (expr_derived_length(e), e.to_string()));
                match flat.len() {
                    0 => StructureExpr::Trivial,
                    1 => flat.pop().unwrap(),
                    _ => StructureExpr::BoundedSum(flat),
                }
            }
        }
    }
}

impl fmt::Display for StructureExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureExpr::Trivial => write!(f, "1"),
            StructureExpr::WreathZ(inner) => write!(f, "Wr[{}]", inner),
            StructureExpr::BoundedSum(kids) => {
                write!(f, "Sum[")?;
                for (i, k) in kids.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}", k)?;
                }
                write!(f, "]")
            }
        }
    }
}

/// One node of the decomposition certificate: the orbital, the controller
/// acting on it, and for each nested piece the controller power that
/// conjugated it into the fundamental domain.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitalNode {
    pub orbital: Interval,
    pub controller: PLMap,
    pub conjugations: Vec<(Interval, i64)>,
    pub children: Vec<OrbitalNode>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionCert {
    pub expr: StructureExpr,
    pub roots: Vec<OrbitalNode>,
    pub radius: usize,
}

const MAX_NEST: usize = 32;
const FD_ITER_CAP: usize = 500;

/// Decompose a set of generators, each with exactly one orbital. Strict mode
/// (`repair = false`) requires exactly one generator per maximal orbital;
/// repair mode replaces the generators on each maximal orbital by a
/// controller plus residues with smaller support.
pub fn one_bump_decompose(group: &GroupSpec, radius: usize) -> Result<DecompositionCert> {
    assert!(radius >= 1);
    for g in group.generators() {
        let n = g.support().len();
        if n != 1 {
            return Err(Error::MultiOrbitalGenerator(n));
        }
    }
    let ball = words::ball(group, radius)?;
    if let Some((s, t)) = orbitals::find_transition_chains(ball.elements()).into_iter().next() {
        return Err(Error::TransitionChainObstruction(s.orbital, t.orbital));
    }
    // distinct generators must not share an orbital, even after
    // ball-bounded conjugation
    let gens = group.generators();
    for i in 0..gens.len() {
        for j in 0..gens.len() {
            if i == j {
                continue;
            }
            let oi = &gens[i].support()[0];
            let oj = &gens[j].support()[0];
            for c in ball.elements() {
                if &oi.image_under(c) == oj {
                    return Err(Error::SharedOrbital(oj.clone()));
                }
            }
        }
    }
    match orbitals::balance_check(group, radius) {
        BalanceVerdict::ImbalancedWitness { witness, .. } => {
            return Err(Error::ImbalanceFound(witness.1));
        }
        BalanceVerdict::BalancedUpToRadius { .. } => {}
    }
    let (expr, roots) = decompose_core(group.generators(), false, MAX_NEST)?;
    Ok(DecompositionCert {
        expr: expr.normalize(),
        roots,
        radius,
    })
}

fn decompose_core(
    elements: &[PLMap],
    repair: bool,
    guard: usize,
) -> Result<(StructureExpr, Vec<OrbitalNode>)> {
    if guard == 0 {
        return Err(Error::Other("orbital nesting guard exceeded".into()));
    }
    let mut elems: Vec<PLMap> = elements
        .iter()
        .filter(|e| !e.is_identity())
        .cloned()
        .collect();
    elems.sort();
    elems.dedup();
    if elems.is_empty() {
        return Ok((StructureExpr::Trivial, vec![]));
    }
    for e in &elems {
        let n = e.support().len();
        if n != 1 {
            return Err(Error::MultiOrbitalGenerator(n));
        }
    }
    let comps = components_of_union(&elems);
    let mut exprs = Vec::new();
    let mut roots = Vec::new();
    for a in comps {
        let mut tops: Vec<PLMap> = Vec::new();
        let mut rest: Vec<PLMap> = Vec::new();
        for e in &elems {
            let orb = &e.support()[0];
            if orb == &a {
                tops.push(e.clone());
            } else if a.contains_interval(orb) {
                rest.push(e.clone());
            }
        }
        if tops.is_empty() {
            return Err(Error::NoMatchingElement(a.clone()));
        }
        let controller = if repair {
            repair_controller(&tops, &a)?
        } else {
            if tops.len() > 1 {
                return Err(Error::SharedOrbital(a.clone()));
            }
            tops[0].clone()
        };
        let controller = orient_right(&controller, &a);
        if repair {
            // replace the other carriers of this orbital by their residues
            for h in &tops {
                if *h == controller || *h == controller.inverse() {
                    continue;
                }
                let form = slopes::c_form(h, &controller, &a)?;
                rest.extend(form.residue.one_bump_factors());
            }
        }
        rest.sort();
        rest.dedup();
        rest.retain(|e| !e.is_identity());

        let (inner_expr, conjugations, children) = if rest.is_empty() {
            (StructureExpr::Trivial, vec![], vec![])
        } else {
            let rest_orbs: Vec<Interval> =
                rest.iter().map(|e| e.support().into_iter().next().unwrap()).collect();
            // a nested orbital reaching an end of `a` would be an imbalance
            for orb in &rest_orbs {
                if orb.left == a.left || orb.right == a.right {
                    return Err(Error::ImbalanceFound(a.clone()));
                }
            }
            let fd_left = rest_orbs.iter().map(|o| o.left.clone()).min().unwrap();
            let fd_right = controller.eval(&fd_left).expect("point in domain");
            let mut conjugated: Vec<PLMap> = Vec::new();
            let mut conjugations: Vec<(Interval, i64)> = Vec::new();
            for (e, orb) in rest.iter().zip(&rest_orbs) {
                let k = fd_exponent(orb, &fd_left, &fd_right, &controller)?;
                conjugated.push(e.conjugate(&controller.power(k)));
                conjugations.push((orb.clone(), k));
            }
            conjugated.sort();
            conjugated.dedup();
            let (child_expr, child_roots) = decompose_core(&conjugated, repair, guard - 1)?;
            verify_wreath_disjointness(&conjugated, &controller)?;
            (child_expr, conjugations, child_roots)
        };
        exprs.push(StructureExpr::WreathZ(Box::new(inner_expr)));
        roots.push(OrbitalNode {
            orbital: a.clone(),
            controller,
            conjugations,
            children,
        });
    }
    let expr = if exprs.len() == 1 {
        exprs.pop().unwrap()
    } else {
        StructureExpr::BoundedSum(exprs)
    };
    Ok((expr, roots))
}

/// Pick an element with this orbital whose slope pair generates the (cyclic)
/// image lattice; single pieces are tried first, then products of two.
fn repair_controller(tops: &[PLMap], a: &Interval) -> Result<PLMap> {
    let pairs: Vec<SlopePair> = tops.iter().map(|t| slopes::phi(t, a)).collect::<Result<_>>()?;
    let verdict = slopes::lattice_of_pairs(&pairs);
    match verdict.kind {
        LatticeKind::Trivial => return Err(Error::LatticeNotCyclic("Trivial")),
        LatticeKind::HigherRank => return Err(Error::LatticeNotCyclic("HigherRank")),
        LatticeKind::Cyclic => {}
    }
    if verdict.imbalanced {
        return Err(Error::ImbalanceFound(a.clone()));
    }
    let gen = verdict.generator.expect("cyclic lattice has a generator");
    let gen_inv = gen.invert();
    let matches = |c: &PLMap| -> bool {
        if !slopes::controller_realizes(c, a) {
            return false;
        }
        match slopes::phi(c, a) {
            Ok(p) => p == gen || p == gen_inv,
            Err(_) => false,
        }
    };
    for t in tops {
        if matches(t) {
            return Ok(t.clone());
        }
    }
    for t in tops {
        for u in tops {
            let p = t.compose(u);
            if matches(&p) {
                return Ok(p);
            }
        }
    }
    Err(Error::NoMatchingElement(a.clone()))
}

/// Orient a one-orbital map so that it moves interior points rightward.
fn orient_right(c: &PLMap, a: &Interval) -> PLMap {
    let mid = (&a.left + &a.right) * rat(1, 2);
    if c.eval(&mid).expect("point in domain") > mid {
        c.clone()
    } else {
        c.inverse()
    }
}

/// Controller power conjugating an orbital into the fundamental domain
/// [fd_left, fd_right); errors when the orbital straddles a translate of
/// the domain boundary.
fn fd_exponent(orb: &Interval, fd_left: &Rat, fd_right: &Rat, c: &PLMap) -> Result<i64> {
    let c_inv = c.inverse();
    let mut k: i64 = 0;
    let mut p = orb.left.clone();
    let mut iter = 0usize;
    while &p < fd_left {
        p = c.eval(&p).expect("point in domain");
        k += 1;
        iter += 1;
        if iter > FD_ITER_CAP {
            return Err(Error::Other(
                "fundamental-domain conjugation did not terminate".into(),
            ));
        }
    }
    loop {
        let prev = c_inv.eval(&p).expect("point in domain");
        if &prev >= fd_left {
            p = prev;
            k -= 1;
        } else {
            break;
        }
        iter += 1;
        if iter > FD_ITER_CAP {
            return Err(Error::Other(
                "fundamental-domain conjugation did not terminate".into(),
            ));
        }
    }
    // now orb.left lands in [fd_left, fd_right); the right end must follow
    let q = c.power(k).eval(&orb.right).expect("point in domain");
    if &q > fd_right {
        return Err(Error::FundamentalDomainCrossing(fd_right.clone()));
    }
    Ok(k)
}

/// The wreath structure requires the conjugated bottom supports and their
/// controller translates to stay pairwise disjoint; verify on a window.
fn verify_wreath_disjointness(conjugated: &[PLMap], controller: &PLMap) -> Result<()> {
    let orbs: Vec<Interval> = conjugated
        .iter()
        .map(|e| e.support().into_iter().next().unwrap())
        .collect();
    let hull = Interval::new(
        orbs.iter().map(|o| o.left.clone()).min().unwrap(),
        orbs.iter().map(|o| o.right.clone()).max().unwrap(),
    );
    for m in -2i64..=2 {
        for n in (m + 1)..=2 {
            let im = hull.image_under(&controller.power(m));
            let inn = hull.image_under(&controller.power(n));
            if !im.is_disjoint(&inn) {
                return Err(Error::Other(format!(
                    "wreath verification failed: translates {} and {} of {} meet",
                    m, n, hull
                )));
            }
        }
    }
    Ok(())
}

/// Final pipeline outcome: either a structure expression with certificate,
/// or a concrete obstruction.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status")]
pub enum Outcome {
    Classified {
        expression: String,
        expr: StructureExpr,
        derived_length: usize,
        embedding_target: usize,
        cert: DecompositionCert,
    },
    Obstructed {
        kind: String,
        detail: String,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub group: String,
    pub radius: usize,
    pub outcome: Outcome,
    pub tower_height: usize,
    pub derived_lower_bound: Option<usize>,
}

impl ClassificationReport {
    pub fn is_classified(&self) -> bool {
        matches!(self.outcome, Outcome::Classified { .. })
    }
}

/// Classify the group at the given truncation radius. Obstructions
/// (transition chains, imbalance, failed decomposition) are reported in the
/// outcome, not as errors; errors are reserved for resource caps and
/// malformed input.
pub fn classification_report(group: &GroupSpec, radius: usize) -> Result<ClassificationReport> {
    assert!(radius >= 1);
    let ball = words::ball(group, radius)?;
    let tower_height = towers::max_tower(ball.elements()).height();

    let outcome = if let Some((s, t)) =
        orbitals::find_transition_chains(ball.elements()).into_iter().next()
    {
        Outcome::Obstructed {
            kind: "transition-chain".into(),
            detail: format!(
                "orbitals {} and {} overlap without nesting",
                s.orbital, t.orbital
            ),
        }
    } else {
        match orbitals::balance_check(group, radius) {
            BalanceVerdict::ImbalancedWitness { witness, note, .. } => Outcome::Obstructed {
                kind: "imbalance".into(),
                detail: format!(
                    "orbital {} realizes one end of {}; {}",
                    witness.0.orbital, witness.1, note
                ),
            },
            BalanceVerdict::BalancedUpToRadius { .. } => {
                let gamma = split::gamma_g(group, radius)?;
                match decompose_core(&gamma.pieces, true, MAX_NEST) {
                    Ok((expr, roots)) => {
                        let expr = expr.normalize();
                        let derived_length = expr_derived_length(&expr);
                        Outcome::Classified {
                            expression: expr.to_string(),
                            derived_length,
                            embedding_target: embedding_target(&expr),
                            cert: DecompositionCert {
                                expr: expr.clone(),
                                roots,
                                radius,
                            },
                            expr,
                        }
                    }
                    Err(Error::TransitionChainObstruction(x, y)) => Outcome::Obstructed {
                        kind: "transition-chain".into(),
                        detail: format!("orbitals {} and {} overlap without nesting", x, y),
                    },
                    Err(Error::ImbalanceFound(x)) => Outcome::Obstructed {
                        kind: "imbalance".into(),
                        detail: format!("one end of {} is realized alone", x),
                    },
                    Err(e @ Error::LatticeNotCyclic(_))
                    | Err(e @ Error::NoMatchingElement(_))
                    | Err(e @ Error::FundamentalDomainCrossing(_))
                    | Err(e @ Error::SharedOrbital(_))
                    | Err(e @ Error::NotControllerPower) => Outcome::Obstructed {
                        kind: "decomposition".into(),
                        detail: e.to_string(),
                    },
                    Err(e) => return Err(e),
                }
            }
        }
    };
    // derived-series evidence is only worth computing for groups that
    // classify; obstructed groups need not be solvable and their iterated
    // commutators can blow up
    let derived_lower_bound = if matches!(outcome, Outcome::Classified { .. }) {
        words::derived_length_bounds(group, radius)
            .ok()
            .map(|r| r.lower_bound)
    } else {
        None
    };
    if let Outcome::Classified { derived_length, .. } = &outcome {
        if tower_height > *derived_length {
            return Err(Error::Other(format!(
                "inconsistent classification: tower height {} exceeds derived length {}",
                tower_height, derived_length
            )));
        }
        if let Some(lb) = derived_lower_bound {
            if lb > *derived_length {
                return Err(Error::Other(format!(
                    "inconsistent classification: commutator bound {} exceeds derived length {}",
                    lb, derived_length
                )));
            }
        }
    }
    Ok(ClassificationReport {
        group: group.label().to_string(),
        radius,
        outcome,
        tower_height,
        derived_lower_bound,
    })
}

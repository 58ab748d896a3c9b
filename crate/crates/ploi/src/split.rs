//! Split-group machinery: truncated one-orbital piece sets, G-depth tags,
//! depth-ordered product rewriting, first-orbital dominance, and the
//! search that collapses a product of pieces to a single group element
//! with a prescribed orbital.

use crate::error::{Error, Result};
use crate::orbitals::GroupSpec;
use crate::plmap::{Interval, PLMap};
use crate::towers;
use crate::words;
use serde::Serialize;

/// A radius-bounded truncation of the one-orbital piece set of a group:
/// each piece equals some ball element on its single orbital and is the
/// identity elsewhere.
#[derive(Clone, Debug, Serialize)]
pub struct GammaSet {
    pub pieces: Vec<PLMap>,
    pub source_radius: usize,
}

/// A one-orbital piece tagged with the depth of its orbital in the
/// truncation. Pieces with identical orbitals carry identical depths.
#[derive(Clone, Debug, Serialize)]
pub struct DepthTaggedPiece {
    pub piece: PLMap,
    pub orbital: Interval,
    pub g_depth: usize,
}

/// One-bump factors of every ball element, deduplicated and sorted.
pub fn gamma_g(group: &GroupSpec, radius: usize) -> Result<GammaSet> {
    assert!(radius >= 1);
    let ball = words::ball(group, radius)?;
    let mut pieces: Vec<PLMap> = ball
        .elements()
        .iter()
        .flat_map(|e| e.one_bump_factors())
        .collect();
    pieces.sort();
    pieces.dedup();
    Ok(GammaSet {
        pieces,
        source_radius: radius,
    })
}

/// Tag every piece with the depth of its orbital among the set's orbitals.
/// Depth is a function of the orbital alone, so equal orbitals always get
/// equal tags.
pub fn tag_depths(set: &GammaSet) -> Vec<DepthTaggedPiece> {
    tag_depths_of(&set.pieces, &set.pieces)
}

/// Tag `pieces` with orbital depths computed within `universe`.
pub fn tag_depths_of(pieces: &[PLMap], universe: &[PLMap]) -> Vec<DepthTaggedPiece> {
    pieces
        .iter()
        .map(|p| {
            let supp = p.support();
            assert_eq!(supp.len(), 1, "gamma pieces have exactly one orbital");
            let orbital = supp.into_iter().next().unwrap();
            let g_depth =
                towers::orbital_depth(&orbital, universe).expect("piece orbital is in universe");
            DepthTaggedPiece {
                piece: p.clone(),
                orbital,
                g_depth,
            }
        })
        .collect()
}

/// Rewrite a product of pieces into an equal product with nondecreasing
/// depths. A swap replaces (deep, shallow) by (shallow, deep^shallow);
/// when their orbitals intersect the deeper must be contained in the
/// shallower, else a transition-chain obstruction is reported.
pub fn split_form(product: &[DepthTaggedPiece]) -> Result<Vec<DepthTaggedPiece>> {
    let mut prod: Vec<DepthTaggedPiece> = product.to_vec();
    loop {
        let mut swapped = false;
        for i in 0..prod.len().saturating_sub(1) {
            let (a, b) = (&prod[i], &prod[i + 1]);
            if a.g_depth <= b.g_depth {
                continue;
            }
            if a.orbital.overlaps(&b.orbital) && !b.orbital.contains_interval(&a.orbital) {
                return Err(Error::TransitionChainObstruction(
                    a.orbital.clone(),
                    b.orbital.clone(),
                ));
            }
            let conjugated = DepthTaggedPiece {
                piece: a.piece.conjugate(&b.piece),
                orbital: a.orbital.image_under(&b.piece),
                g_depth: a.g_depth,
            };
            let shallow = b.clone();
            prod[i] = shallow;
            prod[i + 1] = conjugated;
            swapped = true;
        }
        if !swapped {
            return Ok(prod);
        }
    }
}

/// True iff the closure of every later orbital is contained in the first
/// piece's orbital; the composite of such a product has support exactly
/// the first orbital.
pub fn first_orbital_dominant(product: &[PLMap]) -> bool {
    let mut orbitals = product.iter().map(|p| {
        let s = p.support();
        assert_eq!(s.len(), 1, "entries must be one-orbital");
        s.into_iter().next().unwrap()
    });
    let Some(first) = orbitals.next() else {
        return false;
    };
    orbitals.all(|o| first.contains_closure(&o))
}

pub fn composite(product: &[PLMap]) -> PLMap {
    product
        .iter()
        .fold(PLMap::identity(), |acc, p| acc.compose(p))
}

/// One step of the collapse search, for the trace log.
#[derive(Clone, Debug, Serialize)]
pub struct TraceStep {
    pub step: String,
    pub product_len: usize,
    pub leading_orbital: Option<Interval>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitSearchOutcome {
    pub element: PLMap,
    pub trace: Vec<TraceStep>,
}

const SEARCH_ITERATION_CAP: usize = 10_000;

/// Search for a ball element of the group whose orbital is exactly `a`,
/// starting from a product of one-orbital pieces whose composite has
/// orbital `a`. The product is repeatedly depth-ordered, pruned to the
/// leading orbital, and collapsed; the leading orbital may shrink at most
/// `max_depth` times before the search reports budget exhaustion.
pub fn split_stable_search(
    a: &Interval,
    product: &[PLMap],
    group: &GroupSpec,
    radius: usize,
    max_depth: usize,
) -> Result<SplitSearchOutcome> {
    if !composite(product).support().contains(a) {
        return Err(Error::Other(format!(
            "composite of the product does not have orbital {}",
            a
        )));
    }
    let ball = words::ball(group, radius)?;
    let gamma = gamma_g(group, radius)?;
    let mut universe = gamma.pieces.clone();
    universe.extend(product.iter().cloned());
    universe.sort();
    universe.dedup();

    let mut trace: Vec<TraceStep> = Vec::new();
    let mut prod = tag_depths_of(product, &universe);
    let mut shrinks = 0usize;
    let mut prev_leading: Option<Interval> = None;

    let find_in_ball = |orb: &Interval| -> Result<PLMap> {
        ball.elements()
            .iter()
            .find(|e| e.support().contains(orb))
            .cloned()
            .ok_or_else(|| Error::NoMatchingElement(orb.clone()))
    };

    for _ in 0..SEARCH_ITERATION_CAP {
        // 1. singleton shortcut
        if prod.len() <= 1 {
            trace.push(TraceStep {
                step: "singleton".into(),
                product_len: prod.len(),
                leading_orbital: prod.first().map(|p| p.orbital.clone()),
            });
            let element = find_in_ball(a)?;
            return Ok(SplitSearchOutcome { element, trace });
        }
        // 2. depth-order the product
        prod = split_form(&prod)?;
        trace.push(TraceStep {
            step: "depth-order".into(),
            product_len: prod.len(),
            leading_orbital: Some(prod[0].orbital.clone()),
        });
        // 3. leading orbital must meet A
        let leading = prod[0].orbital.clone();
        if leading.is_disjoint(a) {
            prod.remove(0);
            trace.push(TraceStep {
                step: "drop-disjoint-leader".into(),
                product_len: prod.len(),
                leading_orbital: None,
            });
            continue;
        }
        if let Some(prev) = &prev_leading {
            if *prev != leading && prev.properly_contains(&leading) {
                shrinks += 1;
                if shrinks > max_depth {
                    return Err(Error::BudgetExhausted(max_depth));
                }
            }
        }
        prev_leading = Some(leading.clone());
        // 4. drop pieces disjoint from the leading orbital
        let before = prod.len();
        prod.retain(|p| !p.orbital.is_disjoint(&leading));
        if prod.len() < before {
            trace.push(TraceStep {
                step: "prune-disjoint".into(),
                product_len: prod.len(),
                leading_orbital: Some(leading.clone()),
            });
            continue;
        }
        // enforce containment in the leading orbital
        for p in &prod[1..] {
            if p.orbital != leading && !leading.contains_interval(&p.orbital) {
                return Err(Error::TransitionChainObstruction(
                    leading.clone(),
                    p.orbital.clone(),
                ));
            }
        }
        // 5. count leading-orbital pieces
        let s = prod.iter().filter(|p| p.orbital == leading).count();
        trace.push(TraceStep {
            step: format!("count-leading s={}", s),
            product_len: prod.len(),
            leading_orbital: Some(leading.clone()),
        });
        if s == 1 {
            // first-orbital dominance: the composite has support = leading = A
            let element = find_in_ball(&leading)?;
            return Ok(SplitSearchOutcome { element, trace });
        }
        // 6. collapse the first two equal-orbital pieces
        let t = prod[0].piece.compose(&prod[1].piece);
        let tail: Vec<DepthTaggedPiece> = prod[2..].to_vec();
        if t.is_identity() {
            prod = tail;
            trace.push(TraceStep {
                step: "collapse-cancel".into(),
                product_len: prod.len(),
                leading_orbital: Some(leading.clone()),
            });
            continue;
        }
        let mut factors: Vec<PLMap> = t
            .one_bump_factors()
            .into_iter()
            .filter(|f| {
                let orb = f.support().into_iter().next().unwrap();
                !orb.is_disjoint(a)
            })
            .collect();
        for f in &factors {
            if !universe.contains(f) {
                universe.push(f.clone());
                universe.sort();
            }
        }
        factors.sort();
        let mut new_prod = tag_depths_of(&factors, &universe);
        new_prod.extend(tail);
        prod = new_prod;
        trace.push(TraceStep {
            step: "collapse".into(),
            product_len: prod.len(),
            leading_orbital: Some(leading.clone()),
        });
    }
    Err(Error::Other("search iteration cap exceeded".into()))
}

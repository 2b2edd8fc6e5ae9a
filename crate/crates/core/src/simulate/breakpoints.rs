use std::collections::{BTreeMap, HashSet};

use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::exact_poly::{isolate_positive_roots, IsolatedRoot, RatPoly, SturmChain};
use crate::scalar::Rational;
use crate::tree::SeedPair;

/// Symbolic enumeration doubles the number of path polynomials per level.
pub const DEFAULT_BREAKPOINT_LEVEL_CAP: u32 = 12;

/// Final isolating-interval width, as a power of two.
const REFINE_BITS: u32 = 48;

/// A positive β at which some node's difference child `prev - β·curr` changes sign.
///
/// Breakpoints are generally irrational, so the exact value is carried as a
/// squarefree rational polynomial plus an isolating interval `(lo, hi]` that
/// contains exactly one of its roots.
#[derive(Clone, Debug, PartialEq)]
pub struct Breakpoint {
    pub lo: Rational,
    pub hi: Rational,
    /// The breakpoint itself when it is rational.
    pub exact: Option<Rational>,
    pub beta_approx: f64,
    /// Level of the child whose value vanishes at this β.
    pub level: u32,
    /// Squarefree polynomial in β with this breakpoint as a root.
    pub polynomial: RatPoly,
    /// Signed path polynomials whose absolute values form the parent state.
    pub origin_prev: RatPoly,
    pub origin_curr: RatPoly,
}

impl Breakpoint {
    /// Halves the isolating interval.
    pub fn bisect(&mut self) {
        let sturm = SturmChain::new(&self.polynomial);
        let mut root = IsolatedRoot {
            lo: self.lo.clone(),
            hi: self.hi.clone(),
        };
        root.bisect(&sturm);
        self.lo = root.lo;
        self.hi = root.hi;
    }

    /// `|prev(β)| - β·|curr(β)|` for the origin state.
    pub fn origin_gap(&self, beta: &Rational) -> Rational {
        self.origin_prev.eval(beta).abs() - beta * self.origin_curr.eval(beta).abs()
    }
}

fn sign_normalized(p: RatPoly) -> RatPoly {
    match p.coeffs().last() {
        Some(lead) if lead.is_negative() => p.neg(),
        _ => p,
    }
}

struct Candidate {
    poly: usize,
    root: IsolatedRoot,
    level: u32,
    origin: (RatPoly, RatPoly),
}

/// Every candidate kink of `β ↦ S[level](β)` on `β > 0`, sorted ascending.
///
/// Along each sign path, `x[k]` is a polynomial in β. A node `(P, Q)` at level
/// `k` has children `P ± βQ`; the absolute value of a child is non-smooth only
/// where that child vanishes. Roots of all children up to `level` are
/// collected, deduplicated exactly (shared roots are detected through the gcd
/// of their polynomials), and isolated into disjoint intervals.
pub fn breakpoints(seed: &SeedPair<Rational>, level: u32, level_cap: u32) -> Result<Vec<Breakpoint>> {
    if level > level_cap {
        return Err(Error::LevelCap {
            requested: level,
            cap: level_cap,
        });
    }
    let beta = RatPoly::x();
    let mut states: HashSet<(RatPoly, RatPoly)> = HashSet::new();
    states.insert((
        RatPoly::constant(seed.x0().clone()),
        RatPoly::constant(seed.x1().clone()),
    ));
    // child polynomial -> (first level, parent state)
    let mut children: BTreeMap<RatPoly, (u32, (RatPoly, RatPoly))> = BTreeMap::new();
    for k in 1..=level {
        let mut next = HashSet::with_capacity(states.len() * 2);
        for (p, q) in &states {
            let scaled = beta.mul(q);
            for child in [p.add(&scaled), p.sub(&scaled)] {
                let child = sign_normalized(child);
                if child.degree().unwrap_or(0) >= 1 {
                    children
                        .entry(child.clone())
                        .or_insert_with(|| (k, (p.clone(), q.clone())));
                }
                next.insert((q.clone(), child));
            }
        }
        states = next;
    }

    let mut polys: Vec<(RatPoly, SturmChain)> = Vec::new();
    let mut cands: Vec<Candidate> = Vec::new();
    for (child, (lvl, origin)) in children {
        let (sf, sturm, roots) = isolate_positive_roots(&child);
        if roots.is_empty() {
            continue;
        }
        let idx = polys.len();
        polys.push((sf, sturm));
        cands.extend(roots.into_iter().map(|root| Candidate {
            poly: idx,
            root,
            level: lvl,
            origin: origin.clone(),
        }));
    }

    merge_shared_roots(&mut cands, &polys);

    let width = Rational::new(1.into(), num_bigint::BigInt::from(1u8) << REFINE_BITS);
    Ok(cands
        .into_iter()
        .map(|mut c| {
            let (poly, sturm) = &polys[c.poly];
            while c.root.width() > width {
                c.root.bisect(sturm);
            }
            let exact = c.root.rational_root(poly);
            let approx = exact.as_ref().unwrap_or(&c.root.midpoint()).to_f64().unwrap_or(f64::NAN);
            Breakpoint {
                exact,
                beta_approx: approx,
                lo: c.root.lo,
                hi: c.root.hi,
                level: c.level,
                polynomial: poly.clone(),
                origin_prev: c.origin.0,
                origin_curr: c.origin.1,
            }
        })
        .collect())
}

/// Resolves overlapping isolating intervals until all are disjoint: equal roots
/// are merged (keeping the earliest level), distinct ones are refined apart.
fn merge_shared_roots(cands: &mut Vec<Candidate>, polys: &[(RatPoly, SturmChain)]) {
    loop {
        cands.sort_by(|a, b| a.root.lo.cmp(&b.root.lo).then(a.level.cmp(&b.level)));
        let Some(i) = (1..cands.len()).find(|&i| cands[i - 1].root.hi > cands[i].root.lo) else {
            return;
        };
        let (a, b) = (&cands[i - 1], &cands[i]);
        let lo = (&a.root.lo).max(&b.root.lo).clone();
        let hi = (&a.root.hi).min(&b.root.hi).clone();
        let g = polys[a.poly].0.gcd(&polys[b.poly].0);
        let shared = g.degree().unwrap_or(0) >= 1 && SturmChain::new(&g).count(&lo, &hi) >= 1;
        if shared {
            let drop = if b.level < a.level { i - 1 } else { i };
            cands.remove(drop);
        } else {
            for j in [i - 1, i] {
                let sturm = &polys[cands[j].poly].1;
                cands[j].root.bisect(sturm);
            }
        }
    }
}

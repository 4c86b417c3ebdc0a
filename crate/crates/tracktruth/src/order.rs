//! Plausibility preorders over the worlds of a space.
//!
//! A [`Preorder`] is a reflexive, transitive relation stored as one bit row
//! per world (`rows[s]` bit `t` set means `s ⪯ t`, "s is at least as
//! plausible as t"). Besides the relation it carries a *domain*: revision by
//! world elimination shrinks the carrier set, and the restricted relation is
//! still a preorder on what is left. Totality is a stored flag, recomputed
//! after every derivation rather than assumed.
//!
//! Minimal elements follow the comparability-relative reading: `s` is minimal
//! in `X` when it is below every element of `X` it is comparable with. On
//! total orders this is the familiar "below everything"; on partial ones it
//! leaves mutually incomparable elements all minimal, which is exactly what
//! the generalised revision methods need.

use crate::error::{Error, Result};
use crate::sets::{WorldId, WorldSet};
use crate::space::EpistemicSpace;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Preorder {
    n: usize,
    domain: WorldSet,
    /// Bit `t` of `rows[s]` encodes `s ⪯ t`. Rows are masked to the domain;
    /// rows of worlds outside the domain are zero.
    rows: Vec<u64>,
    total: bool,
}

impl Preorder {
    /// The everything-equally-plausible order on `n` worlds.
    pub fn flat(n: usize) -> Preorder {
        let domain = WorldSet::full(n);
        Preorder {
            n,
            domain,
            rows: vec![domain.bits(); n],
            total: true,
        }
    }

    /// Builds from a level assignment: `s ⪯ t` iff `levels[s] <= levels[t]`.
    pub fn from_levels(levels: &[usize]) -> Preorder {
        let n = levels.len();
        let domain = WorldSet::full(n);
        let rows = levels
            .iter()
            .map(|&ls| {
                let mut row = 0u64;
                for (t, &lt) in levels.iter().enumerate() {
                    if ls <= lt {
                        row |= 1 << t;
                    }
                }
                row
            })
            .collect();
        Preorder {
            n,
            domain,
            rows,
            total: true,
        }
    }

    /// Builds a total order from plausibility layers, most plausible first.
    /// The layers must partition `0..n`.
    pub fn from_layers(n: usize, layers: &[Vec<WorldId>]) -> Result<Preorder> {
        let mut levels = vec![usize::MAX; n];
        let mut seen = 0usize;
        for (rank, layer) in layers.iter().enumerate() {
            for &w in layer {
                if w.0 >= n {
                    return Err(Error::WorldOutOfRange(w.0, n));
                }
                if levels[w.0] != usize::MAX {
                    return Err(Error::BadLayers(format!(
                        "world {} appears in more than one layer",
                        w.0
                    )));
                }
                levels[w.0] = rank;
                seen += 1;
            }
        }
        if seen != n {
            return Err(Error::BadLayers(format!(
                "{seen} of {n} worlds placed in layers"
            )));
        }
        Ok(Preorder::from_levels(&levels))
    }

    /// Builds the smallest preorder containing the given `a ⪯ b` pairs:
    /// reflexive closure plus transitive closure.
    pub fn from_pairs(n: usize, pairs: &[(WorldId, WorldId)]) -> Result<Preorder> {
        let mut rows = vec![0u64; n];
        for (s, row) in rows.iter_mut().enumerate() {
            *row |= 1 << s;
        }
        for &(a, b) in pairs {
            if a.0 >= n {
                return Err(Error::WorldOutOfRange(a.0, n));
            }
            if b.0 >= n {
                return Err(Error::WorldOutOfRange(b.0, n));
            }
            rows[a.0] |= 1 << b.0;
        }
        // Warshall closure.
        for k in 0..n {
            for s in 0..n {
                if rows[s] & (1 << k) != 0 {
                    rows[s] |= rows[k];
                }
            }
        }
        let mut order = Preorder {
            n,
            domain: WorldSet::full(n),
            rows,
            total: false,
        };
        order.recompute_total();
        Ok(order)
    }

    /// Wraps an explicit relation, checking reflexivity and transitivity on
    /// the given domain.
    pub fn from_rows(n: usize, rows: Vec<u64>, domain: WorldSet) -> Result<Preorder> {
        let mask = domain.bits();
        let mut masked = rows;
        for (s, row) in masked.iter_mut().enumerate() {
            if !domain.contains(WorldId(s)) {
                *row = 0;
            } else {
                *row &= mask;
            }
        }
        let mut order = Preorder {
            n,
            domain,
            rows: masked,
            total: false,
        };
        if !order.is_reflexive() {
            return Err(Error::NotReflexive);
        }
        if !order.is_transitive() {
            return Err(Error::NotTransitive);
        }
        order.recompute_total();
        Ok(order)
    }

    pub fn world_count(&self) -> usize {
        self.n
    }

    /// The carrier set the relation currently lives on.
    pub fn domain(&self) -> WorldSet {
        self.domain
    }

    pub fn is_total(&self) -> bool {
        self.total
    }

    /// `s ⪯ t`: s is at least as plausible as t.
    pub fn le(&self, s: WorldId, t: WorldId) -> bool {
        self.rows[s.0] & (1 << t.0) != 0
    }

    /// `s ≺ t`: strictly more plausible.
    pub fn lt(&self, s: WorldId, t: WorldId) -> bool {
        self.le(s, t) && !self.le(t, s)
    }

    /// `s ≃ t`: equally plausible.
    pub fn equiv(&self, s: WorldId, t: WorldId) -> bool {
        self.le(s, t) && self.le(t, s)
    }

    /// `s ∼ t`: comparable one way or the other.
    pub fn comparable(&self, s: WorldId, t: WorldId) -> bool {
        self.le(s, t) || self.le(t, s)
    }

    pub fn row(&self, s: WorldId) -> u64 {
        self.rows[s.0]
    }

    pub(crate) fn recompute_total(&mut self) {
        let ids: Vec<WorldId> = self.domain.iter().collect();
        self.total = ids
            .iter()
            .all(|&s| ids.iter().all(|&t| self.comparable(s, t)));
    }

    pub fn is_reflexive(&self) -> bool {
        self.domain.iter().all(|s| self.le(s, s))
    }

    pub fn is_transitive(&self) -> bool {
        // s ⪯ t forces row(t) ⊆ row(s).
        self.domain.iter().all(|s| {
            WorldSet::from_bits(self.rows[s.0])
                .iter()
                .all(|t| self.rows[t.0] & !self.rows[s.0] == 0)
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !self.is_reflexive() {
            return Err(Error::NotReflexive);
        }
        if !self.is_transitive() {
            return Err(Error::NotTransitive);
        }
        Ok(())
    }

    /// Minimal elements of `xs` under the restriction of the relation to
    /// `xs`: those below every comparable member of `xs`.
    pub fn min_of(&self, xs: WorldSet) -> WorldSet {
        let xs = xs.intersect(self.domain);
        let mut out = WorldSet::EMPTY;
        'outer: for s in xs.iter() {
            for t in xs.iter() {
                if self.le(t, s) && !self.le(s, t) {
                    continue 'outer;
                }
            }
            out.insert(s);
        }
        out
    }

    /// Minimal elements of the whole current domain.
    pub fn minima(&self) -> WorldSet {
        self.min_of(self.domain)
    }

    /// The relation intersected with `keep × keep`; totality recomputed.
    pub fn restricted_to(&self, keep: WorldSet) -> Preorder {
        let domain = self.domain.intersect(keep);
        let mask = domain.bits();
        let rows = (0..self.n)
            .map(|s| {
                if domain.contains(WorldId(s)) {
                    self.rows[s] & mask
                } else {
                    0
                }
            })
            .collect();
        let mut order = Preorder {
            n: self.n,
            domain,
            rows,
            total: false,
        };
        order.recompute_total();
        order
    }

    /// Restriction to an observable's extension.
    pub fn restrict(&self, space: &EpistemicSpace, p: crate::sets::ObsId) -> Preorder {
        self.restricted_to(space.extension(p))
    }

    /// Restriction to the complement of an observable's extension.
    pub fn restrict_complement(&self, space: &EpistemicSpace, p: crate::sets::ObsId) -> Preorder {
        self.restricted_to(space.all_worlds().minus(space.extension(p)))
    }

    /// For total orders: the plausibility layers, most plausible first.
    pub fn layers(&self) -> Option<Vec<Vec<WorldId>>> {
        if !self.total {
            return None;
        }
        let mut remaining = self.domain;
        let mut layers = Vec::new();
        while !remaining.is_empty() {
            let layer = self.min_of(remaining);
            layers.push(layer.iter().collect());
            remaining = remaining.minus(layer);
        }
        Some(layers)
    }

    /// All strictly related pairs `(a, b)` with `a ⪯ b`, `a ≠ b`.
    pub fn related_pairs(&self) -> Vec<(WorldId, WorldId)> {
        let mut out = Vec::new();
        for s in self.domain.iter() {
            for t in self.domain.iter() {
                if s != t && self.le(s, t) {
                    out.push((s, t));
                }
            }
        }
        out
    }
}

impl std::fmt::Debug for Preorder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if let Some(layers) = self.layers() {
            let rendered: Vec<String> = layers
                .iter()
                .map(|layer| {
                    let ids: Vec<String> = layer.iter().map(|w| w.0.to_string()).collect();
                    format!("[{}]", ids.join(" "))
                })
                .collect();
            write!(f, "Preorder({})", rendered.join(" < "))
        } else {
            write!(f, "Preorder(pairs: {:?})", self.related_pairs())
        }
    }
}

/// An epistemic space together with a prior plausibility order over it.
#[derive(Debug, Clone)]
pub struct PlausibilitySpace {
    pub space: EpistemicSpace,
    pub order: Preorder,
}

impl PlausibilitySpace {
    pub fn new(space: EpistemicSpace, order: Preorder) -> Result<Self> {
        if order.world_count() != space.world_count() {
            return Err(Error::DimensionMismatch {
                order: order.world_count(),
                space: space.world_count(),
            });
        }
        order.validate()?;
        Ok(PlausibilitySpace { space, order })
    }
}

/// Iterator over every total preorder (weak order) on `n` worlds.
///
/// A weak order is an ordered partition into plausibility levels, encoded as
/// a dense level assignment: a function `world -> level` whose image is
/// exactly `0..k` for some `k`. Enumeration is by lexicographic level tuple,
/// so the flat order comes first and the output order is stable.
pub struct TotalPreorders {
    n: usize,
    levels: Vec<usize>,
    done: bool,
}

impl Iterator for TotalPreorders {
    type Item = Preorder;

    fn next(&mut self) -> Option<Preorder> {
        loop {
            if self.done {
                return None;
            }
            let dense = {
                let max = self.levels.iter().copied().max().unwrap_or(0);
                (0..=max).all(|l| self.levels.contains(&l))
            };
            let item = if dense {
                Some(Preorder::from_levels(&self.levels))
            } else {
                None
            };
            // Advance the odometer in base n.
            let mut i = self.n;
            loop {
                if i == 0 {
                    self.done = true;
                    break;
                }
                i -= 1;
                if self.levels[i] + 1 < self.n {
                    self.levels[i] += 1;
                    for l in &mut self.levels[i + 1..] {
                        *l = 0;
                    }
                    break;
                }
            }
            if let Some(order) = item {
                return Some(order);
            }
        }
    }
}

/// Every total preorder on the worlds of `space`, or an error when the space
/// exceeds `bound` worlds (the count grows like the ordered Bell numbers).
pub fn enumerate_total_preorders(space: &EpistemicSpace, bound: usize) -> Result<TotalPreorders> {
    let n = space.world_count();
    if n > bound {
        return Err(Error::EnumerationBound { count: n, bound });
    }
    Ok(TotalPreorders {
        n,
        levels: vec![0; n],
        done: false,
    })
}

/// Every preorder (total or not) on the worlds of `space`. Brute force over
/// off-diagonal edge sets with a transitivity filter; practical only for very
/// small spaces, hence the tighter default bound.
pub fn enumerate_preorders(space: &EpistemicSpace, bound: usize) -> Result<Vec<Preorder>> {
    let n = space.world_count();
    if n > bound {
        return Err(Error::EnumerationBound { count: n, bound });
    }
    // The edge-set counter below needs n(n-1) < 64 bits.
    if n > 8 {
        return Err(Error::EnumerationBound { count: n, bound: 8 });
    }
    let off_diag: Vec<(usize, usize)> = (0..n)
        .flat_map(|s| (0..n).filter(move |&t| t != s).map(move |t| (s, t)))
        .collect();
    let mut out = Vec::new();
    for choice in 0u64..(1u64 << off_diag.len()) {
        let mut rows = vec![0u64; n];
        for (s, row) in rows.iter_mut().enumerate() {
            *row |= 1 << s;
        }
        for (bit, &(s, t)) in off_diag.iter().enumerate() {
            if choice & (1 << bit) != 0 {
                rows[s] |= 1 << t;
            }
        }
        if let Ok(order) = Preorder::from_rows(n, rows, WorldSet::full(n)) {
            out.push(order);
        }
    }
    Ok(out)
}

//! Point sets of an ordinal space.
//!
//! A set is stored as a covering list of intervals `(lower, upper]` (the first
//! one starts at the bottom), each carrying a bitmask of the CB-ranks it keeps.
//! This fragment is closed under every Boolean operation and under closure.
//! Inside one interval a limit point is approached only by points of the same
//! interval, which is what makes closure a per-piece mask operation.

use serde::{Deserialize, Serialize};

use super::{Ordinal, SpectrumSpace};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub upper: Ordinal,
    pub mask: u64,
}

#[derive(Clone, Debug)]
pub struct PointSet {
    space: SpectrumSpace,
    pieces: Vec<Piece>,
}

/// External form of one nonempty piece.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceJson {
    pub lower: Option<Ordinal>,
    pub upper: Ordinal,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_ge: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranks: Option<Vec<u32>>,
}

fn low_bits_cleared(mask: u64, from: u32) -> u64 {
    if from >= 64 {
        0
    } else {
        mask & !((1u64 << from) - 1)
    }
}

/// Mask after topological closure inside one piece.
fn closed_mask(mask: u64, present: u64) -> u64 {
    if mask == 0 {
        0
    } else {
        low_bits_cleared(present, mask.trailing_zeros())
    }
}

impl PointSet {
    fn build(space: &SpectrumSpace, raw: Vec<Piece>) -> PointSet {
        let bound = space.bound();
        let mut out: Vec<(Option<Ordinal>, Piece, u64)> = Vec::new();
        let mut prev: Option<Ordinal> = None;
        for mut piece in raw {
            if piece.upper > bound {
                piece.upper = bound.clone();
            }
            if prev.as_ref().is_some_and(|p| piece.upper <= *p) {
                continue;
            }
            let present = space.present_ranks(prev.as_ref(), &piece.upper);
            piece.mask &= present;
            let lower = prev.replace(piece.upper.clone());
            if let Some((_, last, last_present)) = out.last_mut() {
                let common = *last_present & present;
                if last.mask & common == piece.mask & common {
                    last.mask |= piece.mask;
                    last.upper = piece.upper;
                    *last_present |= present;
                    continue;
                }
            }
            out.push((lower, piece, present));
        }
        if prev.as_ref() != Some(&bound) {
            let present = space.present_ranks(prev.as_ref(), &bound);
            match out.last_mut() {
                Some((_, last, _)) if last.mask == 0 => last.upper = bound.clone(),
                _ => out.push((
                    prev,
                    Piece {
                        upper: bound,
                        mask: 0,
                    },
                    present,
                )),
            }
        }
        PointSet {
            space: space.clone(),
            pieces: out.into_iter().map(|(_, p, _)| p).collect(),
        }
    }

    pub fn empty(space: &SpectrumSpace) -> PointSet {
        PointSet::build(space, vec![])
    }

    pub fn full(space: &SpectrumSpace) -> PointSet {
        PointSet::build(
            space,
            vec![Piece {
                upper: space.bound(),
                mask: u64::MAX,
            }],
        )
    }

    /// Points of `(lower, upper]` (or `[0, upper]`) whose CB-rank is in `mask`.
    pub fn interval_ranks(
        space: &SpectrumSpace,
        lower: Option<&Ordinal>,
        upper: &Ordinal,
        mask: u64,
    ) -> PointSet {
        let mut raw = Vec::new();
        if let Some(l) = lower {
            if l >= upper {
                return PointSet::empty(space);
            }
            raw.push(Piece {
                upper: l.clone(),
                mask: 0,
            });
        }
        raw.push(Piece {
            upper: upper.clone(),
            mask,
        });
        PointSet::build(space, raw)
    }

    /// The clopen interval `(lower, upper]`.
    pub fn interval(space: &SpectrumSpace, lower: Option<&Ordinal>, upper: &Ordinal) -> PointSet {
        PointSet::interval_ranks(space, lower, upper, u64::MAX)
    }

    pub fn singleton(space: &SpectrumSpace, p: &Ordinal) -> Result<PointSet> {
        let rank = space.cb_rank(p)?;
        Ok(PointSet::interval_ranks(
            space,
            p.block_base().as_ref(),
            p,
            1 << rank,
        ))
    }

    pub fn from_points<'a>(
        space: &SpectrumSpace,
        points: impl IntoIterator<Item = &'a Ordinal>,
    ) -> Result<PointSet> {
        let mut s = PointSet::empty(space);
        for p in points {
            s = s.union(&PointSet::singleton(space, p)?)?;
        }
        Ok(s)
    }

    /// `{p : CB-rank(p) ≥ j}`.
    pub fn rank_at_least(space: &SpectrumSpace, j: u32) -> PointSet {
        PointSet::build(
            space,
            vec![Piece {
                upper: space.bound(),
                mask: low_bits_cleared(u64::MAX, j),
            }],
        )
    }

    /// `{p : CB-rank(p) = j}`.
    pub fn rank_exactly(space: &SpectrumSpace, j: u32) -> PointSet {
        let mask = if j < 64 { 1u64 << j } else { 0 };
        PointSet::build(
            space,
            vec![Piece {
                upper: space.bound(),
                mask,
            }],
        )
    }

    pub fn space(&self) -> &SpectrumSpace {
        &self.space
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Pieces paired with their lower bounds and present-rank masks.
    pub fn pieces_with_bounds(&self) -> impl Iterator<Item = (Option<&Ordinal>, &Piece, u64)> {
        let mut prev: Option<&Ordinal> = None;
        self.pieces.iter().map(move |p| {
            let lower = prev;
            prev = Some(&p.upper);
            (lower, p, self.space.present_ranks(lower, &p.upper))
        })
    }

    fn zip_with(&self, other: &PointSet, op: impl Fn(u64, u64) -> u64) -> Result<PointSet> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        let (mut i, mut j) = (0, 0);
        let mut raw = Vec::new();
        while i < self.pieces.len() && j < other.pieces.len() {
            let (a, b) = (&self.pieces[i], &other.pieces[j]);
            let upper = a.upper.clone().min(b.upper.clone());
            raw.push(Piece {
                upper: upper.clone(),
                mask: op(a.mask, b.mask),
            });
            if a.upper == upper {
                i += 1;
            }
            if b.upper == upper {
                j += 1;
            }
        }
        Ok(PointSet::build(&self.space, raw))
    }

    fn map_masks(&self, op: impl Fn(u64, u64) -> u64) -> PointSet {
        let raw = self
            .pieces_with_bounds()
            .map(|(_, p, present)| Piece {
                upper: p.upper.clone(),
                mask: op(p.mask, present),
            })
            .collect();
        PointSet::build(&self.space, raw)
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersect(&self, other: &PointSet) -> Result<PointSet> {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &PointSet) -> Result<PointSet> {
        self.zip_with(other, |a, b| a & !b)
    }

    /// Complement in the space. Total: the rank-mask fragment represents
    /// open sets as well as closed ones.
    pub fn complement(&self) -> PointSet {
        self.map_masks(|m, present| present & !m)
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.iter().all(|p| p.mask == 0)
    }

    pub fn is_subset(&self, other: &PointSet) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    /// Equality as sets of points.
    pub fn same_points(&self, other: &PointSet) -> bool {
        self.space == other.space
            && self.difference(other).is_ok_and(|d| d.is_empty())
            && other.difference(self).is_ok_and(|d| d.is_empty())
    }

    pub fn contains(&self, p: &Ordinal) -> bool {
        if !self.space.contains(p) {
            return false;
        }
        let rank = p.least_exponent();
        self.pieces
            .iter()
            .find(|piece| *p <= piece.upper)
            .is_some_and(|piece| rank < 64 && piece.mask & (1 << rank) != 0)
    }

    pub fn closure(&self) -> PointSet {
        self.map_masks(closed_mask)
    }

    pub fn is_closed(&self) -> bool {
        self.pieces_with_bounds()
            .all(|(_, p, present)| closed_mask(p.mask, present) == p.mask)
    }

    pub fn is_open(&self) -> bool {
        self.complement().is_closed()
    }

    pub fn is_clopen(&self) -> bool {
        self.pieces_with_bounds()
            .all(|(_, p, present)| p.mask == 0 || p.mask == present)
    }

    /// Whether the closure is the whole space: every piece must keep its
    /// isolated points.
    pub fn is_dense(&self) -> bool {
        self.pieces_with_bounds()
            .all(|(_, p, present)| present == 0 || p.mask & 1 != 0)
    }

    /// Highest CB-rank of a point in the set.
    pub fn max_rank(&self) -> Option<u32> {
        self.pieces
            .iter()
            .filter(|p| p.mask != 0)
            .map(|p| 63 - p.mask.leading_zeros())
            .max()
    }

    /// Least point of the set strictly above `after` (`None` = from the bottom).
    pub fn next_point(&self, after: Option<&Ordinal>) -> Option<Ordinal> {
        for (lower, piece, _) in self.pieces_with_bounds() {
            if piece.mask == 0 || after.is_some_and(|a| piece.upper <= *a) {
                continue;
            }
            let start = match (lower, after) {
                (None, a) => a,
                (l, None) => l,
                (Some(l), Some(a)) => Some(l.max(a)),
            };
            let best = (0..64)
                .filter(|j| piece.mask & (1u64 << j) != 0)
                .map(|j| Ordinal::next_of_rank(start, j))
                .filter(|c| *c <= piece.upper)
                .min();
            if best.is_some() {
                return best;
            }
        }
        None
    }

    pub fn first_point(&self) -> Option<Ordinal> {
        self.next_point(None)
    }

    /// Points in increasing order.
    pub fn points(&self) -> impl Iterator<Item = Ordinal> + '_ {
        let mut cur: Option<Ordinal> = None;
        let mut started = false;
        std::iter::from_fn(move || {
            let next = if started {
                self.next_point(cur.as_ref())
            } else {
                self.first_point()
            };
            started = true;
            cur = next.clone();
            next
        })
    }

    /// Number of points, or `None` when infinite.
    pub fn count(&self) -> Option<u64> {
        let mut total = 0u64;
        for (lower, piece, _) in self.pieces_with_bounds() {
            for j in 0..64u32 {
                if piece.mask & (1 << j) != 0 {
                    total += count_rank_points(lower, &piece.upper, j)?;
                }
            }
        }
        Some(total)
    }

    /// Maximal runs `[a, b]` of finite points (`b = None` for an unbounded run).
    pub fn finite_runs(&self) -> Vec<(u64, Option<u64>)> {
        let mut runs: Vec<(u64, Option<u64>)> = Vec::new();
        for (lower, piece, _) in self.pieces_with_bounds() {
            if piece.mask & 1 == 0 {
                continue;
            }
            let start = match lower {
                None => 0,
                Some(l) => match l.as_finite() {
                    Some(k) => k + 1,
                    None => continue,
                },
            };
            let end = piece.upper.as_finite();
            match runs.last_mut() {
                Some((_, b)) if b.is_some_and(|b| b + 1 == start) => *b = end,
                _ => runs.push((start, end)),
            }
        }
        runs
    }

    pub fn to_json_pieces(&self) -> Vec<PieceJson> {
        self.pieces_with_bounds()
            .filter(|(_, p, _)| p.mask != 0)
            .map(|(lower, p, present)| {
                let low = p.mask.trailing_zeros();
                let upward = low_bits_cleared(present, low) == p.mask;
                PieceJson {
                    lower: lower.cloned(),
                    upper: p.upper.clone(),
                    rank_ge: (upward && low > 0).then_some(low),
                    ranks: (!upward)
                        .then(|| (0..64).filter(|j| p.mask & (1u64 << j) != 0).collect()),
                }
            })
            .collect()
    }

    pub fn from_json_pieces(space: &SpectrumSpace, pieces: &[PieceJson]) -> Result<PointSet> {
        let mut s = PointSet::empty(space);
        for pj in pieces {
            let mask = match (&pj.ranks, pj.rank_ge) {
                (Some(r), _) => r
                    .iter()
                    .filter(|&&j| j < 64)
                    .fold(0u64, |m, &j| m | (1 << j)),
                (None, Some(j)) => low_bits_cleared(u64::MAX, j),
                (None, None) => u64::MAX,
            };
            if !space.contains(&pj.upper) && pj.upper != space.bound() {
                return Err(Error::OutsideSpace(pj.upper.clone()));
            }
            s = s.union(&PointSet::interval_ranks(
                space,
                pj.lower.as_ref(),
                &pj.upper,
                mask,
            ))?;
        }
        Ok(s)
    }
}

/// Number of points of CB-rank exactly `j` in `(lower, upper]`.
fn count_rank_points(lower: Option<&Ordinal>, upper: &Ordinal, j: u32) -> Option<u64> {
    let hi = upper.floor_to(j).shift_down(j)?;
    match lower {
        None => {
            let n = hi.as_finite()?;
            Some(if j == 0 { n + 1 } else { n })
        }
        Some(l) => {
            let lo = l.floor_to(j).shift_down(j)?;
            if lo >= hi {
                return Some(0);
            }
            lo.left_sub(&hi)?.as_finite()
        }
    }
}

impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        self.same_points(other)
    }
}

impl Serialize for PointSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_pieces().serialize(s)
    }
}

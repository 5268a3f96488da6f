//! Order type of a closed point set.
//!
//! A closed set in the mask representation is, piece by piece, the multiples
//! of `ω^m` inside `(c, d]` for `m` the least rank kept. Dividing by `ω^m` turns
//! each piece into an interval of ordinals, so the whole set is order-isomorphic
//! to an initial segment `[0, λ']`.

use super::{Ordinal, PointSet, SpectrumSpace};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
struct Block {
    rank: u32,
    /// First point of the piece, already divided by `ω^rank`.
    start: Ordinal,
    /// Last point of the piece, divided by `ω^rank`.
    end: Ordinal,
    /// Index of the first point in the whole set.
    offset: Ordinal,
}

/// Order isomorphism between a closed nonempty set and `[0, λ']`.
#[derive(Clone, Debug)]
pub struct OrderIso {
    blocks: Vec<Block>,
    last: Ordinal,
}

impl OrderIso {
    pub fn new(set: &PointSet) -> Result<OrderIso> {
        if !set.is_closed() {
            return Err(Error::UnsupportedShape(
                "order type of a non-closed set".into(),
            ));
        }
        let mut blocks = Vec::new();
        let mut offset = Ordinal::zero();
        for (lower, piece, _) in set.pieces_with_bounds() {
            if piece.mask == 0 {
                continue;
            }
            let rank = piece.mask.trailing_zeros();
            let Some(first) = set.next_point(lower).filter(|p| *p <= piece.upper) else {
                continue;
            };
            let start = first.shift_down(rank).ok_or_else(shape)?;
            let end = piece
                .upper
                .floor_to(rank)
                .shift_down(rank)
                .ok_or_else(shape)?;
            let len = start.left_sub(&end).ok_or_else(shape)?.succ();
            blocks.push(Block {
                rank,
                start,
                end,
                offset: offset.clone(),
            });
            offset = offset.add(&len);
        }
        let last = offset
            .pred()
            .ok_or(Error::UnsupportedShape("empty or unbounded set".into()))?;
        Ok(OrderIso { blocks, last })
    }

    /// `λ'`, the order type of the set minus one.
    pub fn last_index(&self) -> &Ordinal {
        &self.last
    }

    pub fn index_of(&self, p: &Ordinal) -> Option<Ordinal> {
        for b in &self.blocks {
            let Some(x) = p.shift_down(b.rank) else {
                continue;
            };
            if x >= b.start && x <= b.end {
                return Some(b.offset.add(&b.start.left_sub(&x)?));
            }
        }
        None
    }

    pub fn point_at(&self, i: &Ordinal) -> Option<Ordinal> {
        let b = self.blocks.iter().rev().find(|b| b.offset <= *i)?;
        let x = b.start.add(&b.offset.left_sub(i)?);
        (x <= b.end).then(|| x.shift_up(b.rank))
    }

    /// The space `[0, λ']` the set is homeomorphic to.
    pub fn target_space(&self) -> SpectrumSpace {
        SpectrumSpace::interval(self.last.clone())
    }
}

fn shape() -> Error {
    Error::UnsupportedShape("closed piece with irregular bounds".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn rank_one_points_of_omega_squared() {
        let s = SpectrumSpace::interval(o("w^2"));
        let set = PointSet::rank_at_least(&s, 1);
        let iso = OrderIso::new(&set).unwrap();
        assert_eq!(iso.last_index(), &o("w"));
        assert_eq!(iso.index_of(&o("w")), Some(o("0")));
        assert_eq!(iso.index_of(&o("w*3")), Some(o("2")));
        assert_eq!(iso.index_of(&o("w^2")), Some(o("w")));
        assert_eq!(iso.point_at(&o("4")), Some(o("w*5")));
        assert_eq!(iso.point_at(&o("w")), Some(o("w^2")));
    }

    #[test]
    fn tail_segment() {
        let s = SpectrumSpace::interval(o("w^2"));
        let set = PointSet::interval(&s, Some(&o("w*2+3")), &o("w^2"));
        let iso = OrderIso::new(&set).unwrap();
        assert_eq!(iso.last_index(), &o("w^2"));
        assert_eq!(iso.index_of(&o("w*2+4")), Some(o("0")));
        assert_eq!(iso.index_of(&o("w*3")), Some(o("w")));
        assert_eq!(iso.point_at(&o("w+1")), Some(o("w*3+1")));
    }

    #[test]
    fn two_blocks() {
        let s = SpectrumSpace::interval(o("w^2"));
        let set = PointSet::interval(&s, None, &o("3"))
            .union(&PointSet::interval(&s, Some(&o("w*5")), &o("w*6")))
            .unwrap();
        let iso = OrderIso::new(&set).unwrap();
        assert_eq!(iso.last_index(), &o("w"));
        assert_eq!(iso.index_of(&o("w*6")), Some(o("w")));
        assert_eq!(iso.index_of(&o("w*5+2")), Some(o("5")));
        assert_eq!(iso.point_at(&o("3")), Some(o("3")));
        assert_eq!(iso.point_at(&o("4")), Some(o("w*5+1")));
    }
}

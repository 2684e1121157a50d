use std::collections::BTreeMap;

use serde::Serialize;

use super::SurfaceError;
use crate::numeric::{LadderParams, QuadExt};

/// Edge `edge` (0..6, counter-clockwise, edge `i` pointing in direction
/// `i·60°`) of hexagon `hexagon`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EdgeRef {
    pub hexagon: usize,
    pub edge: u8,
}

impl EdgeRef {
    pub fn new(hexagon: usize, edge: u8) -> Self {
        EdgeRef {
            hexagon,
            edge: edge % 6,
        }
    }

    /// The same hexagon rotated by 2π/3.
    pub fn rotated(self) -> Self {
        EdgeRef::new(self.hexagon, self.edge + 2)
    }
}

/// A semi-regular hexagon: all angles 2π/3, even edges of one length and
/// odd edges of another.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hexagon {
    pub index: usize,
    pub edge_lengths: [QuadExt; 6],
}

impl Hexagon {
    /// Area in ladder units. A semi-regular hexagon with sides `a, b` has
    /// Euclidean area `√3/4·(a² + 4ab + b²)` and the chart scales area by
    /// `√3/2`.
    pub fn ladder_area(&self) -> QuadExt {
        let (a, b) = (&self.edge_lengths[0], &self.edge_lengths[1]);
        let f = a.field();
        (a * a + (a * b).mul_int(4) + b * b) * f.ratio(1, 2)
    }
}

/// The ladder surface after the shear-and-scale chart, as a chain of
/// semi-regular hexagons. Hexagon 0 is the degenerate one with side lengths
/// `1, 0`; hexagon `n ≥ 1` has sides `λⁿ` (even, glued upward) and `λⁿ⁻¹`
/// (odd, glued downward). Each edge is glued to the parallel, oppositely
/// oriented edge of a neighbouring hexagon.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HexagonChart {
    pub hexagons: Vec<Hexagon>,
    gluing: BTreeMap<EdgeRef, EdgeRef>,
}

pub fn hexagon_chart(params: &LadderParams, depth: usize) -> Result<HexagonChart, SurfaceError> {
    if depth < 2 {
        return Err(SurfaceError::DepthTooSmall(depth));
    }
    let f = params.field();
    let hexagons: Vec<Hexagon> = (0..=depth)
        .map(|n| {
            let (up, down) = if n == 0 {
                (f.one(), f.zero())
            } else {
                (params.lambda_pow(n as i64), params.lambda_pow(n as i64 - 1))
            };
            let edge_lengths =
                std::array::from_fn(|i| if i % 2 == 0 { up.clone() } else { down.clone() });
            Hexagon {
                index: n,
                edge_lengths,
            }
        })
        .collect();
    let mut gluing = BTreeMap::new();
    for n in 0..depth {
        for i in (0..6).step_by(2) {
            let lower = EdgeRef::new(n, i);
            let upper = EdgeRef::new(n + 1, i + 3);
            gluing.insert(lower, upper);
            gluing.insert(upper, lower);
        }
    }
    Ok(HexagonChart { hexagons, gluing })
}

impl HexagonChart {
    pub fn depth(&self) -> usize {
        self.hexagons.len() - 1
    }

    pub fn partner(&self, e: EdgeRef) -> Option<EdgeRef> {
        self.gluing.get(&e).copied()
    }

    pub fn length(&self, e: EdgeRef) -> &QuadExt {
        &self.hexagons[e.hexagon].edge_lengths[e.edge as usize]
    }

    /// `(down, up)` side lengths of hexagon `n`.
    pub fn alternating_lengths(&self, n: usize) -> (&QuadExt, &QuadExt) {
        let h = &self.hexagons[n];
        (&h.edge_lengths[1], &h.edge_lengths[0])
    }

    pub fn glued_pairs(&self) -> impl Iterator<Item = (EdgeRef, EdgeRef)> + '_ {
        self.gluing.iter().filter(|(a, b)| a < b).map(|(a, b)| (*a, *b))
    }

    /// Edges of positive length left unglued: the upward edges of the last
    /// hexagon.
    pub fn frontier(&self) -> Vec<EdgeRef> {
        self.hexagons
            .iter()
            .flat_map(|h| (0..6).map(move |i| EdgeRef::new(h.index, i)))
            .filter(|e| !self.length(*e).is_zero() && !self.gluing.contains_key(e))
            .collect()
    }

    /// Re-pairs two glued edges with each other's partners.
    pub fn swap_partners(&mut self, a: EdgeRef, b: EdgeRef) {
        let (pa, pb) = match (self.partner(a), self.partner(b)) {
            (Some(pa), Some(pb)) => (pa, pb),
            _ => return,
        };
        self.gluing.insert(a, pb);
        self.gluing.insert(pb, a);
        self.gluing.insert(b, pa);
        self.gluing.insert(pa, b);
    }

    /// Sum of hexagon areas in ladder units.
    pub fn ladder_area(&self) -> QuadExt {
        let f = self.hexagons[0].edge_lengths[0].field();
        self.hexagons.iter().fold(f.zero(), |acc, h| acc + h.ladder_area())
    }
}

/// Whether rotating every hexagon by 2π/3 (shifting its edge list by two)
/// is compatible with the gluing: edge lengths are preserved, the gluing is
/// a fixed-point-free involution pairing equal, opposite edges, and
/// `glue(rot(e)) = rot(glue(e))` for every glued edge.
pub fn check_rotation_symmetry(chart: &HexagonChart) -> bool {
    let lengths_invariant = chart.hexagons.iter().all(|h| {
        (0..6).all(|i| h.edge_lengths[i] == h.edge_lengths[(i + 2) % 6])
    });
    lengths_invariant
        && chart.gluing.iter().all(|(&e, &g)| {
            e != g
                && chart.partner(g) == Some(e)
                && chart.length(e) == chart.length(g)
                && (e.edge + 3) % 6 == g.edge
                && chart.partner(e.rotated()) == Some(g.rotated())
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::solve_lambda;
    use crate::surface::area;

    #[test]
    fn edge_lengths() {
        let p = solve_lambda(2, 1).unwrap();
        let chart = hexagon_chart(&p, 6).unwrap();
        let f = p.field();
        assert_eq!(chart.alternating_lengths(0), (&f.zero(), &f.one()));
        for n in 1..=6 {
            let (down, up) = chart.alternating_lengths(n);
            assert_eq!(down, &p.lambda_pow(n as i64 - 1));
            assert_eq!(up, &p.lambda_pow(n as i64));
            if n > 1 {
                let (prev_down, prev_up) = chart.alternating_lengths(n - 1);
                assert_eq!(down, &(prev_down * &p.lambda));
                assert_eq!(up, &(prev_up * &p.lambda));
            }
        }
    }

    #[test]
    fn gluing_is_fixed_point_free_involution() {
        let p = solve_lambda(2, 1).unwrap();
        let chart = hexagon_chart(&p, 5).unwrap();
        for (a, b) in chart.glued_pairs() {
            assert_ne!(a, b);
            assert_eq!(chart.partner(b), Some(a));
            assert_eq!(b.hexagon, a.hexagon + 1);
        }
        assert_eq!(chart.glued_pairs().count(), 15);
        let frontier = chart.frontier();
        assert_eq!(frontier.len(), 3);
        assert!(frontier.iter().all(|e| e.hexagon == 5 && e.edge % 2 == 0));
    }

    #[test]
    fn rotation_symmetry_and_mutation() {
        let p = solve_lambda(2, 1).unwrap();
        let chart = hexagon_chart(&p, 6).unwrap();
        assert!(check_rotation_symmetry(&chart));
        assert!(check_rotation_symmetry(&hexagon_chart(&p, 2).unwrap()));
        let mut bad = chart.clone();
        bad.swap_partners(EdgeRef::new(1, 0), EdgeRef::new(1, 2));
        assert!(!check_rotation_symmetry(&bad));
    }

    #[test]
    fn hexagon_areas_reproduce_surface_area() {
        for (k, l) in [(2, 1), (3, 1), (5, 2)] {
            let p = solve_lambda(k, l).unwrap();
            let depth = 12;
            let chart = hexagon_chart(&p, depth).unwrap();
            // tail: hexagons n > depth scale by λ² each
            let f = p.field();
            let lam_sq = p.lambda.pow(2);
            let next = chart.hexagons[depth].ladder_area() * &lam_sq;
            let tail = next / (f.one() - &lam_sq);
            assert_eq!(chart.ladder_area() + tail, area(&p), "({k},{l})");
        }
    }
}

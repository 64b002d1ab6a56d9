//! Hexagonal lattice geometry: cell layout, base-station positions,
//! nearest-cell membership, hop distance, neighborhoods and location-area
//! partitioning.
//!
//! Cells are pointy-top hexagons laid out rows x cols in odd-row offset
//! order and addressed internally by axial coordinates `(q, r)`. Every cell
//! has its base station at the hexagon centroid, so adjacent base stations
//! are exactly `sqrt(3) * cell_radius` apart.

use std::collections::BTreeSet;
use std::fmt;

use crate::Error;

/// Axial hex coordinate. The implicit cube coordinate is `s = -q - r`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HexCoord {
    pub q: i32,
    pub r: i32,
}

impl HexCoord {
    pub fn new(q: i32, r: i32) -> Self {
        Self { q, r }
    }

    /// Third cube coordinate; `q + r + s == 0` always holds.
    pub fn s(&self) -> i32 {
        -self.q - self.r
    }

    /// Number of cell-to-cell moves needed to reach `other`.
    pub fn hop_distance(&self, other: HexCoord) -> u32 {
        let dq = self.q - other.q;
        let dr = self.r - other.r;
        ((dq.abs() + dr.abs() + (dq + dr).abs()) / 2) as u32
    }

    /// The six adjacent lattice coordinates.
    pub fn neighbors(&self) -> [HexCoord; 6] {
        const DIRS: [(i32, i32); 6] = [(1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1)];
        DIRS.map(|(dq, dr)| HexCoord::new(self.q + dq, self.r + dr))
    }
}

/// Index of a cell within its grid, dense in `[0, cell_count)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellId(pub u32);

impl CellId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Index of a location area; each cell belongs to exactly one.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LaId(pub u32);

impl fmt::Display for LaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A position in the plane, in the same length units as `cell_radius`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: Point) -> f64 {
        self.distance_squared(other).sqrt()
    }

    pub fn distance_squared(&self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

/// Immutable cell layout shared by every run that uses it.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    coords: Vec<HexCoord>,
    bs_positions: Vec<Point>,
    rows: u32,
    cols: u32,
    cell_radius: f64,
    coverage_radius: f64,
    la_size: u32,
}

impl Grid {
    /// Build a rows x cols grid of pointy-top hexagonal cells.
    ///
    /// Cell IDs are assigned row-major starting at 0. `coverage_radius` is a
    /// multiplier on `cell_radius`: a point is in coverage iff some base
    /// station lies within `coverage_radius * cell_radius` of it.
    pub fn build(
        rows: u32,
        cols: u32,
        cell_radius: f64,
        coverage_radius: f64,
        la_size: u32,
    ) -> Result<Grid, Error> {
        if rows == 0 || cols == 0 {
            return Err(Error::Config(format!(
                "grid dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if !cell_radius.is_finite() || cell_radius <= 0.0 {
            return Err(Error::Config(format!(
                "cell_radius must be positive and finite, got {cell_radius}"
            )));
        }
        if !coverage_radius.is_finite() || coverage_radius <= 0.0 {
            return Err(Error::Config(format!(
                "coverage_radius must be positive and finite, got {coverage_radius}"
            )));
        }
        if la_size == 0 {
            return Err(Error::Config("la_size must be at least 1".into()));
        }
        let mut coords = Vec::with_capacity((rows * cols) as usize);
        let mut bs_positions = Vec::with_capacity(coords.capacity());
        for row in 0..rows as i32 {
            for col in 0..cols as i32 {
                // odd-row offset -> axial
                let coord = HexCoord::new(col - row / 2, row);
                coords.push(coord);
                bs_positions.push(axial_centroid(coord, cell_radius));
            }
        }
        Ok(Grid {
            coords,
            bs_positions,
            rows,
            cols,
            cell_radius,
            coverage_radius,
            la_size,
        })
    }

    pub fn cell_count(&self) -> u32 {
        self.coords.len() as u32
    }

    pub fn cells(&self) -> impl Iterator<Item = CellId> + '_ {
        (0..self.cell_count()).map(CellId)
    }

    pub fn rows(&self) -> u32 {
        self.rows
    }

    pub fn cols(&self) -> u32 {
        self.cols
    }

    pub fn cell_radius(&self) -> f64 {
        self.cell_radius
    }

    pub fn coverage_radius(&self) -> f64 {
        self.coverage_radius
    }

    pub fn la_size(&self) -> u32 {
        self.la_size
    }

    /// Maximum base-station distance at which a point is still in coverage.
    pub fn coverage_limit(&self) -> f64 {
        self.coverage_radius * self.cell_radius
    }

    /// In-circle radius of one hexagonal cell.
    pub fn in_radius(&self) -> f64 {
        3f64.sqrt() / 2.0 * self.cell_radius
    }

    pub fn coord(&self, cell: CellId) -> HexCoord {
        self.coords[cell.index()]
    }

    pub fn bs_position(&self, cell: CellId) -> Point {
        self.bs_positions[cell.index()]
    }

    /// Hop distance between two cells of this grid.
    pub fn hop_between(&self, a: CellId, b: CellId) -> u32 {
        self.coord(a).hop_distance(self.coord(b))
    }

    /// The cell whose base station is closest to `pos`, or `None` when every
    /// base station is farther than the coverage limit. Ties break toward the
    /// smallest cell ID.
    pub fn nearest_cell(&self, pos: Point) -> Option<CellId> {
        let mut best_d2 = f64::INFINITY;
        let mut best = CellId(0);
        for (i, bs) in self.bs_positions.iter().enumerate() {
            let d2 = pos.distance_squared(*bs);
            if d2 < best_d2 {
                best_d2 = d2;
                best = CellId(i as u32);
            }
        }
        let limit = self.coverage_limit();
        (best_d2 <= limit * limit).then_some(best)
    }

    /// `nearest_cell` with a shortcut: a point strictly inside the inscribed
    /// circle of `hint`'s hexagon cannot be closer to any other base station,
    /// so the full scan is skipped. Result is identical to `nearest_cell`.
    pub fn nearest_cell_hint(&self, pos: Point, hint: Option<CellId>) -> Option<CellId> {
        if let Some(cell) = hint {
            let d2 = pos.distance_squared(self.bs_positions[cell.index()]);
            let inner = self.in_radius();
            let limit = self.coverage_limit();
            if d2 < inner * inner && d2 <= limit * limit {
                return Some(cell);
            }
        }
        self.nearest_cell(pos)
    }

    /// All cells of the grid within `d` hops of `center`, `center` included.
    pub fn cells_within(&self, center: CellId, d: u32) -> BTreeSet<CellId> {
        let origin = self.coord(center);
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| origin.hop_distance(**c) <= d)
            .map(|(i, _)| CellId(i as u32))
            .collect()
    }

    /// Location area of a cell: IDs are partitioned contiguously in blocks of
    /// `la_size`.
    pub fn la_of(&self, cell: CellId) -> LaId {
        LaId(cell.0 / self.la_size)
    }

    pub fn la_count(&self) -> u32 {
        self.cell_count().div_ceil(self.la_size)
    }

    /// Cells belonging to one location area, in ID order.
    pub fn la_cells(&self, la: LaId) -> impl Iterator<Item = CellId> + '_ {
        let start = la.0 * self.la_size;
        let end = (start + self.la_size).min(self.cell_count());
        (start..end).map(CellId)
    }

    /// Axis-aligned bounding box of the base-station positions.
    pub fn bounding_box(&self) -> (Point, Point) {
        let mut min = Point::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &self.bs_positions {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        (min, max)
    }
}

/// Centroid of the pointy-top hexagon at axial `coord`.
fn axial_centroid(coord: HexCoord, cell_radius: f64) -> Point {
    let sqrt3 = 3f64.sqrt();
    Point::new(
        sqrt3 * cell_radius * (coord.q as f64 + coord.r as f64 / 2.0),
        1.5 * cell_radius * coord.r as f64,
    )
}

#[cfg(test)]
mod tests {
    use std::collections::{HashMap, VecDeque};

    use proptest::prelude::*;

    use super::*;

    fn default_grid() -> Grid {
        Grid::build(4, 7, 1.0, 2.0, 7).unwrap()
    }

    /// Shortest-path oracle: BFS over the adjacency graph built from base
    /// station geometry (adjacent iff centers are ~sqrt(3)*R apart).
    fn bfs_distances(grid: &Grid, from: CellId) -> HashMap<CellId, u32> {
        let adjacency_limit = 2.0 * grid.cell_radius(); // sqrt(3)*R < 2R < 3R
        let mut dist = HashMap::new();
        dist.insert(from, 0);
        let mut queue = VecDeque::from([from]);
        while let Some(cell) = queue.pop_front() {
            let d = dist[&cell];
            for other in grid.cells() {
                if other != cell
                    && !dist.contains_key(&other)
                    && grid.bs_position(cell).distance(grid.bs_position(other)) < adjacency_limit
                {
                    dist.insert(other, d + 1);
                    queue.push_back(other);
                }
            }
        }
        dist
    }

    #[test]
    fn default_layout_has_28_cells() {
        let grid = default_grid();
        assert_eq!(grid.cell_count(), 28);
    }

    #[test]
    fn single_cell_grid_bs_at_origin() {
        let grid = Grid::build(1, 1, 1.0, 2.0, 1).unwrap();
        assert_eq!(grid.cell_count(), 1);
        assert_eq!(grid.bs_position(CellId(0)), Point::new(0.0, 0.0));
    }

    #[test]
    fn adjacent_bs_spacing_is_sqrt3_times_radius() {
        let grid = Grid::build(2, 2, 1.0, 2.0, 4).unwrap();
        assert_eq!(grid.cell_count(), 4);
        let expected = 3f64.sqrt();
        for a in grid.cells() {
            for b in grid.cells() {
                if a != b && grid.hop_between(a, b) == 1 {
                    let d = grid.bs_position(a).distance(grid.bs_position(b));
                    assert!((d - expected).abs() < 1e-12, "spacing {d} between {a} and {b}");
                }
            }
        }
    }

    #[test]
    fn bad_configs_are_rejected() {
        assert!(Grid::build(0, 7, 1.0, 2.0, 7).is_err());
        assert!(Grid::build(4, 0, 1.0, 2.0, 7).is_err());
        assert!(Grid::build(4, 7, 0.0, 2.0, 7).is_err());
        assert!(Grid::build(4, 7, -1.0, 2.0, 7).is_err());
        assert!(Grid::build(4, 7, 1.0, 0.0, 7).is_err());
        assert!(Grid::build(4, 7, 1.0, 2.0, 0).is_err());
        assert!(Grid::build(4, 7, f64::NAN, 2.0, 7).is_err());
    }

    #[test]
    fn nearest_cell_at_bs_is_that_cell() {
        let grid = default_grid();
        for cell in grid.cells() {
            assert_eq!(grid.nearest_cell(grid.bs_position(cell)), Some(cell));
        }
    }

    #[test]
    fn nearest_cell_tie_breaks_to_smaller_id() {
        let grid = Grid::build(1, 2, 1.0, 2.0, 2).unwrap();
        let a = grid.bs_position(CellId(0));
        let b = grid.bs_position(CellId(1));
        // a.x == 0 and the midpoint halves b.x exactly, so the tie is exact.
        let mid = Point::new((a.x + b.x) / 2.0, a.y);
        assert_eq!(
            mid.distance_squared(a),
            mid.distance_squared(b),
            "tie construction must be exact"
        );
        assert_eq!(grid.nearest_cell(mid), Some(CellId(0)));
    }

    #[test]
    fn out_of_coverage_returns_none() {
        let grid = default_grid();
        assert_eq!(grid.nearest_cell(Point::new(-100.0, -100.0)), None);
        // Just past the limit below the corner base station.
        let p = Point::new(0.0, -(grid.coverage_limit() + 1e-9));
        assert_eq!(grid.nearest_cell(p), None);
        let p = Point::new(0.0, -(grid.coverage_limit() - 1e-9));
        assert_eq!(grid.nearest_cell(p), Some(CellId(0)));
    }

    #[test]
    fn nearest_cell_hint_matches_full_scan() {
        let grid = default_grid();
        let mut k = 0u32;
        for i in 0..400 {
            for j in 0..200 {
                let p = Point::new(-3.0 + i as f64 * 0.045, -3.0 + j as f64 * 0.06);
                let hint = Some(CellId(k % grid.cell_count()));
                k = k.wrapping_add(1);
                assert_eq!(grid.nearest_cell_hint(p, hint), grid.nearest_cell(p));
            }
        }
    }

    #[test]
    fn hop_distance_basics() {
        let c = HexCoord::new(3, -2);
        assert_eq!(c.hop_distance(c), 0);
        for n in c.neighbors() {
            assert_eq!(c.hop_distance(n), 1);
        }
        assert_eq!(HexCoord::new(0, 0).hop_distance(HexCoord::new(2, -1)), 2);
    }

    #[test]
    fn hop_distance_matches_bfs_on_default_grid() {
        let grid = default_grid();
        for a in grid.cells() {
            let dist = bfs_distances(&grid, a);
            for b in grid.cells() {
                assert_eq!(grid.hop_between(a, b), dist[&b], "pair {a}->{b}");
            }
        }
    }

    #[test]
    fn cells_within_counts() {
        let grid = Grid::build(9, 9, 1.0, 2.0, 9).unwrap();
        let center = CellId(4 * 9 + 4);
        assert_eq!(grid.cells_within(center, 0), BTreeSet::from([center]));
        assert_eq!(grid.cells_within(center, 1).len(), 7);
        assert_eq!(grid.cells_within(center, 2).len(), 19);
        assert!(grid.cells_within(center, 1).contains(&center));
    }

    #[test]
    fn cells_within_clips_at_boundary() {
        let grid = default_grid();
        let corner = CellId(0);
        assert!(grid.cells_within(corner, 1).len() <= 7);
        assert!(grid.cells_within(corner, 2).len() <= 19);
        assert_eq!(grid.cells_within(corner, 100).len(), 28);
    }

    #[test]
    fn la_partition() {
        let all_in_one = Grid::build(4, 7, 1.0, 2.0, 28).unwrap();
        for cell in all_in_one.cells() {
            assert_eq!(all_in_one.la_of(cell), LaId(0));
        }

        let singletons = Grid::build(4, 7, 1.0, 2.0, 1).unwrap();
        for cell in singletons.cells() {
            assert_eq!(singletons.la_of(cell).0, cell.0);
        }

        let grid = default_grid();
        assert_eq!(grid.la_count(), 4);
        for la in 0..4 {
            assert_eq!(grid.la_cells(LaId(la)).count(), 7);
        }
        // Total and surjective.
        let mut seen = vec![0u32; grid.la_count() as usize];
        for cell in grid.cells() {
            seen[grid.la_of(cell).0 as usize] += 1;
        }
        assert!(seen.iter().all(|&n| n > 0));

        let ragged = Grid::build(4, 7, 1.0, 2.0, 5).unwrap();
        assert_eq!(ragged.la_count(), 6);
        assert_eq!(ragged.la_cells(LaId(5)).count(), 3);
    }

    proptest! {
        #[test]
        fn hop_distance_is_a_metric(
            (aq, ar) in (-50i32..50, -50i32..50),
            (bq, br) in (-50i32..50, -50i32..50),
            (cq, cr) in (-50i32..50, -50i32..50),
        ) {
            let a = HexCoord::new(aq, ar);
            let b = HexCoord::new(bq, br);
            let c = HexCoord::new(cq, cr);
            prop_assert_eq!(a.hop_distance(b), b.hop_distance(a));
            prop_assert_eq!(a.hop_distance(b) == 0, a == b);
            prop_assert!(a.hop_distance(c) <= a.hop_distance(b) + b.hop_distance(c));
        }

        #[test]
        fn cube_coordinates_sum_to_zero(q in -1000i32..1000, r in -1000i32..1000) {
            let c = HexCoord::new(q, r);
            prop_assert_eq!(c.q + c.r + c.s(), 0);
        }

        #[test]
        fn ball_size_never_exceeds_the_lattice_count(
            rows in 1u32..12,
            cols in 1u32..12,
            cell in 0u32..144,
            d in 0u32..6,
        ) {
            let grid = Grid::build(rows, cols, 1.0, 2.0, 3).unwrap();
            let cell = CellId(cell % grid.cell_count());
            let ball = grid.cells_within(cell, d);
            prop_assert!(ball.contains(&cell));
            prop_assert!(ball.len() as u32 <= 3 * d * d + 3 * d + 1);
        }
    }
}

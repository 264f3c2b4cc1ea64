//! Scene and mask data model for the fixed 60×60 world.

use std::fmt;

/// Side length of every world.
pub const SIDE: usize = 60;
/// Number of cells in a world.
pub const CELLS: usize = SIDE * SIDE;

/// A cell position. Both components are in `0..SIDE`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coord {
    pub row: usize,
    pub col: usize,
}

impl Coord {
    /// Panics if either component is outside the world.
    pub const fn new(row: usize, col: usize) -> Self {
        assert!(row < SIDE && col < SIDE, "coordinate outside the 60x60 world");
        Coord { row, col }
    }

    pub const fn try_new(row: usize, col: usize) -> Option<Self> {
        if row < SIDE && col < SIDE {
            Some(Coord { row, col })
        } else {
            None
        }
    }

    pub const fn from_index(index: usize) -> Self {
        Coord::new(index / SIDE, index % SIDE)
    }

    /// Row-major index.
    pub const fn index(self) -> usize {
        self.row * SIDE + self.col
    }

    pub fn manhattan(self, other: Coord) -> usize {
        self.row.abs_diff(other.row) + self.col.abs_diff(other.col)
    }

    pub fn is_adjacent(self, other: Coord) -> bool {
        self.manhattan(other) == 1
    }

    /// 4-neighbors inside the world, in the order up, down, left, right.
    pub fn neighbors(self) -> impl Iterator<Item = Coord> {
        let Coord { row, col } = self;
        [
            (row.checked_sub(1), Some(col)),
            (Some(row + 1), Some(col)),
            (Some(row), col.checked_sub(1)),
            (Some(row), Some(col + 1)),
        ]
        .into_iter()
        .filter_map(|(r, c)| Coord::try_new(r?, c?))
    }

    /// The 3×3 neighborhood (including self), clipped at the borders.
    pub fn window(self) -> impl Iterator<Item = Coord> {
        let rows = self.row.saturating_sub(1)..=(self.row + 1).min(SIDE - 1);
        let cols = self.col.saturating_sub(1)..=(self.col + 1).min(SIDE - 1);
        rows.flat_map(move |r| cols.clone().map(move |c| Coord { row: r, col: c }))
    }

    pub fn all() -> impl Iterator<Item = Coord> {
        (0..CELLS).map(Coord::from_index)
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellKind {
    Free,
    Obstacle,
    Start,
    Goal,
}

impl CellKind {
    pub fn is_traversable(self) -> bool {
        self != CellKind::Obstacle
    }
}

impl fmt::Display for CellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            CellKind::Free => "Free",
            CellKind::Obstacle => "Obstacle",
            CellKind::Start => "Start",
            CellKind::Goal => "Goal",
        };
        f.write_str(name)
    }
}

/// Row-major 60×60 array.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Grid<T> {
    cells: Vec<T>,
}

impl<T: Clone> Grid<T> {
    pub fn filled(value: T) -> Self {
        Grid {
            cells: vec![value; CELLS],
        }
    }
}

impl<T> Grid<T> {
    /// Returns `None` unless `cells.len() == CELLS`.
    pub fn from_vec(cells: Vec<T>) -> Option<Self> {
        (cells.len() == CELLS).then_some(Grid { cells })
    }

    pub fn from_fn(mut f: impl FnMut(Coord) -> T) -> Self {
        Grid {
            cells: Coord::all().map(&mut f).collect(),
        }
    }

    pub fn as_slice(&self) -> &[T] {
        &self.cells
    }

    pub fn into_vec(self) -> Vec<T> {
        self.cells
    }

    pub fn iter(&self) -> impl Iterator<Item = (Coord, &T)> {
        self.cells
            .iter()
            .enumerate()
            .map(|(i, v)| (Coord::from_index(i), v))
    }
}

impl<T> std::ops::Index<Coord> for Grid<T> {
    type Output = T;
    fn index(&self, c: Coord) -> &T {
        &self.cells[c.index()]
    }
}

impl<T> std::ops::IndexMut<Coord> for Grid<T> {
    fn index_mut(&mut self, c: Coord) -> &mut T {
        &mut self.cells[c.index()]
    }
}

impl<T: fmt::Debug> fmt::Debug for Grid<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid").field("side", &SIDE).finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SceneError {
    #[error("start and goal coincide at {0}")]
    StartIsGoal(Coord),
    #[error("marker {kind} cannot be placed on an obstacle at {at}")]
    MarkerOnObstacle { kind: CellKind, at: Coord },
    #[error("expected exactly one {0} cell")]
    MissingOrDuplicateMarker(CellKind),
}

/// A 60×60 world with exactly one start and one goal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scene {
    cells: Grid<CellKind>,
    start: Coord,
    goal: Coord,
}

impl Scene {
    /// Builds a scene from an obstacle layout. `obstacles` must not cover
    /// `start` or `goal`.
    pub fn new(obstacles: &Grid<bool>, start: Coord, goal: Coord) -> Result<Self, SceneError> {
        if start == goal {
            return Err(SceneError::StartIsGoal(start));
        }
        for (kind, at) in [(CellKind::Start, start), (CellKind::Goal, goal)] {
            if obstacles[at] {
                return Err(SceneError::MarkerOnObstacle { kind, at });
            }
        }
        let mut cells = Grid::from_fn(|c| {
            if obstacles[c] {
                CellKind::Obstacle
            } else {
                CellKind::Free
            }
        });
        cells[start] = CellKind::Start;
        cells[goal] = CellKind::Goal;
        Ok(Scene { cells, start, goal })
    }

    /// Obstacle-free scene.
    pub fn open(start: Coord, goal: Coord) -> Result<Self, SceneError> {
        Scene::new(&Grid::filled(false), start, goal)
    }

    /// Validates a raw cell grid and locates its markers.
    pub fn from_cells(cells: Grid<CellKind>) -> Result<Self, SceneError> {
        let find = |kind| {
            let mut hits = cells.iter().filter(|(_, k)| **k == kind).map(|(c, _)| c);
            match (hits.next(), hits.next()) {
                (Some(c), None) => Ok(c),
                _ => Err(SceneError::MissingOrDuplicateMarker(kind)),
            }
        };
        let start = find(CellKind::Start)?;
        let goal = find(CellKind::Goal)?;
        Ok(Scene { cells, start, goal })
    }

    pub fn start(&self) -> Coord {
        self.start
    }

    pub fn goal(&self) -> Coord {
        self.goal
    }

    pub fn cells(&self) -> &Grid<CellKind> {
        &self.cells
    }

    pub fn kind(&self, c: Coord) -> CellKind {
        self.cells[c]
    }

    pub fn is_obstacle(&self, c: Coord) -> bool {
        self.cells[c] == CellKind::Obstacle
    }

    pub fn obstacle_count(&self) -> usize {
        self.cells
            .as_slice()
            .iter()
            .filter(|k| **k == CellKind::Obstacle)
            .count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PathError {
    #[error("path is empty")]
    Empty,
    #[error("path starts at {found}, expected {expected}")]
    WrongStart { expected: Coord, found: Coord },
    #[error("path ends at {found}, expected {expected}")]
    WrongEnd { expected: Coord, found: Coord },
    #[error("cells {0} and {1} are not 4-neighbors")]
    NotAdjacent(Coord, Coord),
    #[error("path crosses an obstacle at {0}")]
    ThroughObstacle(Coord),
    #[error("path visits {0} twice")]
    Repeated(Coord),
}

/// An ordered start→goal walk through free cells.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AnswerPath {
    cells: Vec<Coord>,
}

impl AnswerPath {
    pub fn new(scene: &Scene, cells: Vec<Coord>) -> Result<Self, PathError> {
        check_path(scene, &cells)?;
        Ok(AnswerPath { cells })
    }

    pub fn cells(&self) -> &[Coord] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Number of moves.
    pub fn cost(&self) -> usize {
        self.cells.len().saturating_sub(1)
    }

    /// Path cells as a mask.
    pub fn to_mask(&self) -> PathMask {
        let mut mask = PathMask::none();
        for &c in &self.cells {
            mask.set(c, true);
        }
        mask
    }
}

/// Checks every path invariant against `scene`.
pub fn check_path(scene: &Scene, cells: &[Coord]) -> Result<(), PathError> {
    let (first, last) = match (cells.first(), cells.last()) {
        (Some(f), Some(l)) => (*f, *l),
        _ => return Err(PathError::Empty),
    };
    if first != scene.start() {
        return Err(PathError::WrongStart {
            expected: scene.start(),
            found: first,
        });
    }
    if last != scene.goal() {
        return Err(PathError::WrongEnd {
            expected: scene.goal(),
            found: last,
        });
    }
    let mut seen = Grid::filled(false);
    for (i, &c) in cells.iter().enumerate() {
        if scene.is_obstacle(c) {
            return Err(PathError::ThroughObstacle(c));
        }
        if std::mem::replace(&mut seen[c], true) {
            return Err(PathError::Repeated(c));
        }
        if i > 0 && !cells[i - 1].is_adjacent(c) {
            return Err(PathError::NotAdjacent(cells[i - 1], c));
        }
    }
    Ok(())
}

/// 60×60 "allowed" grid.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathMask {
    allowed: Grid<bool>,
}

impl PathMask {
    pub fn all() -> Self {
        PathMask {
            allowed: Grid::filled(true),
        }
    }

    pub fn none() -> Self {
        PathMask {
            allowed: Grid::filled(false),
        }
    }

    pub fn from_grid(allowed: Grid<bool>) -> Self {
        PathMask { allowed }
    }

    pub fn allowed(&self, c: Coord) -> bool {
        self.allowed[c]
    }

    pub fn set(&mut self, c: Coord, value: bool) {
        self.allowed[c] = value;
    }

    pub fn grid(&self) -> &Grid<bool> {
        &self.allowed
    }

    pub fn count(&self) -> usize {
        self.allowed.as_slice().iter().filter(|a| **a).count()
    }

    pub fn is_subset_of(&self, other: &PathMask) -> bool {
        self.allowed
            .as_slice()
            .iter()
            .zip(other.allowed.as_slice())
            .all(|(a, b)| !*a || *b)
    }

    /// Binary dilation with the 3×3 structuring element.
    pub fn dilated(&self) -> PathMask {
        PathMask {
            allowed: Grid::from_fn(|c| c.window().any(|n| self.allowed[n])),
        }
    }

    /// Renders allowed cells as 255 and the rest as 0.
    pub fn to_gray(&self) -> GrayImage {
        GrayImage::from_fn(|c| if self.allowed[c] { 255 } else { 0 })
    }
}

/// 60×60 8-bit grayscale image.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    pixels: Grid<u8>,
}

impl GrayImage {
    pub fn filled(value: u8) -> Self {
        GrayImage {
            pixels: Grid::filled(value),
        }
    }

    pub fn from_fn(f: impl FnMut(Coord) -> u8) -> Self {
        GrayImage {
            pixels: Grid::from_fn(f),
        }
    }

    /// Returns `None` unless `pixels.len() == CELLS`.
    pub fn from_vec(pixels: Vec<u8>) -> Option<Self> {
        Grid::from_vec(pixels).map(|pixels| GrayImage { pixels })
    }

    pub fn get(&self, c: Coord) -> u8 {
        self.pixels[c]
    }

    pub fn set(&mut self, c: Coord, value: u8) {
        self.pixels[c] = value;
    }

    pub fn as_slice(&self) -> &[u8] {
        self.pixels.as_slice()
    }

    pub fn sum(&self) -> u64 {
        self.as_slice().iter().map(|&p| u64::from(p)).sum()
    }
}

/// Renders the answer as path = 255 on 0.
pub fn render_answer(path: &AnswerPath) -> GrayImage {
    path.to_mask().to_gray()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neighbor_order_is_up_down_left_right() {
        let n: Vec<_> = Coord::new(5, 5).neighbors().collect();
        assert_eq!(
            n,
            vec![
                Coord::new(4, 5),
                Coord::new(6, 5),
                Coord::new(5, 4),
                Coord::new(5, 6)
            ]
        );
        assert_eq!(Coord::new(0, 0).neighbors().count(), 2);
        assert_eq!(Coord::new(59, 30).neighbors().count(), 3);
    }

    #[test]
    fn window_clips_at_borders() {
        assert_eq!(Coord::new(0, 0).window().count(), 4);
        assert_eq!(Coord::new(0, 10).window().count(), 6);
        assert_eq!(Coord::new(30, 30).window().count(), 9);
    }

    #[test]
    fn scene_rejects_bad_markers() {
        let c = Coord::new(3, 3);
        assert_eq!(Scene::open(c, c), Err(SceneError::StartIsGoal(c)));
        let mut obstacles = Grid::filled(false);
        obstacles[c] = true;
        assert!(matches!(
            Scene::new(&obstacles, c, Coord::new(0, 0)),
            Err(SceneError::MarkerOnObstacle { kind: CellKind::Start, .. })
        ));
    }

    #[test]
    fn path_validation() {
        let scene = Scene::open(Coord::new(0, 0), Coord::new(0, 2)).unwrap();
        let good = vec![Coord::new(0, 0), Coord::new(0, 1), Coord::new(0, 2)];
        assert!(AnswerPath::new(&scene, good).is_ok());
        let jump = vec![Coord::new(0, 0), Coord::new(0, 2)];
        assert!(matches!(
            AnswerPath::new(&scene, jump),
            Err(PathError::NotAdjacent(..))
        ));
        let back = vec![
            Coord::new(0, 0),
            Coord::new(0, 1),
            Coord::new(0, 0),
            Coord::new(0, 1),
            Coord::new(0, 2),
        ];
        assert!(matches!(
            AnswerPath::new(&scene, back),
            Err(PathError::Repeated(_))
        ));
        assert_eq!(AnswerPath::new(&scene, vec![]), Err(PathError::Empty));
    }

    #[test]
    fn render_two_cell_path() {
        let scene = Scene::open(Coord::new(0, 0), Coord::new(0, 1)).unwrap();
        let path = AnswerPath::new(&scene, vec![Coord::new(0, 0), Coord::new(0, 1)]).unwrap();
        let img = render_answer(&path);
        assert_eq!(img.as_slice().iter().filter(|&&p| p == 255).count(), 2);
        assert_eq!(img.sum(), 255 * 2);
        assert!(img.as_slice().iter().all(|&p| p == 0 || p == 255));
    }
}

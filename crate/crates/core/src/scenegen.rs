//! Procedural scene generation for the five scenario families.
//!
//! Each scene index draws from its own SplitMix64 stream, so scenes can be
//! produced in any order (or in parallel) with identical results.

use std::fmt;

use crate::grid::{AnswerPath, Coord, Grid, Scene, CELLS, SIDE};
use crate::planner::{bfs_shortest, space_from_scene};
use crate::rng::Rng64;

/// Regeneration attempts before a scene is declared unsolvable.
pub const MAX_RETRIES: u32 = 100;
pub const DEFAULT_FRACTION: f64 = 0.10;
pub const MAX_FRACTION: f64 = 0.25;

const RETRY_MIX: u64 = 0xD1B5_4A32_D192_ED03;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScenarioId(u8);

impl ScenarioId {
    pub const ALL: [ScenarioId; 5] = [
        ScenarioId(1),
        ScenarioId(2),
        ScenarioId(3),
        ScenarioId(4),
        ScenarioId(5),
    ];

    pub fn new(id: u8) -> Option<Self> {
        (1..=5).contains(&id).then_some(ScenarioId(id))
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GenError {
    #[error("scenario {scenario}, scene {index}: no solvable layout after {MAX_RETRIES} retries")]
    Unsolvable { scenario: ScenarioId, index: u32 },
    #[error("scene index {index} out of range for count {count}")]
    IndexOutOfRange { index: u32, count: u32 },
    #[error("invalid generator config: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenConfig {
    pub scenario: ScenarioId,
    pub count: u32,
    pub seed: u64,
    pub random_obstacle_fraction: f64,
}

impl GenConfig {
    pub fn new(scenario: ScenarioId, count: u32, seed: u64) -> Self {
        GenConfig {
            scenario,
            count,
            seed,
            random_obstacle_fraction: DEFAULT_FRACTION,
        }
    }

    pub fn with_fraction(mut self, fraction: f64) -> Self {
        self.random_obstacle_fraction = fraction;
        self
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if self.count == 0 {
            return Err(GenError::InvalidConfig("count must be positive".into()));
        }
        let f = self.random_obstacle_fraction;
        if !(0.0..=MAX_FRACTION).contains(&f) {
            return Err(GenError::InvalidConfig(format!(
                "random obstacle fraction {f} outside [0, {MAX_FRACTION}]"
            )));
        }
        Ok(())
    }

    pub fn random_obstacle_count(&self) -> usize {
        (self.random_obstacle_fraction * CELLS as f64).floor() as usize
    }

    /// Initial RNG state for `(scenario, index, retry)`.
    pub fn stream_seed(&self, index: u32, retry: u32) -> u64 {
        self.seed
            ^ (u64::from(self.scenario.get()) << 32)
            ^ u64::from(index)
            ^ u64::from(retry).wrapping_mul(RETRY_MIX)
    }
}

fn wall_row(g: &mut Grid<bool>, row: usize, cols: impl IntoIterator<Item = usize>) {
    for col in cols {
        g[Coord::new(row, col)] = true;
    }
}

fn wall_col(g: &mut Grid<bool>, col: usize, rows: impl IntoIterator<Item = usize>) {
    for row in rows {
        g[Coord::new(row, col)] = true;
    }
}

fn block(g: &mut Grid<bool>, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) {
    for r in rows {
        wall_row(g, r, cols.clone());
    }
}

fn outside(range: std::ops::Range<usize>) -> impl Fn(&usize) -> bool {
    move |i| !range.contains(i)
}

/// Fixed obstacles shared by every scene of a scenario.
///
/// 1. Vertical walls at cols 20 and 40, each with two 4-cell gaps.
/// 2. A solid 20×20 block over rows/cols 20..40.
/// 3. Horizontal walls at rows 15, 30, 45 with 4-cell gaps alternating
///    between cols 5..9 and 50..54.
/// 4. 10×10 blocks centered on the four quadrant centers.
/// 5. Concentric rectangles at margins 8, 18, 28; one 4-cell gap each, on
///    the top, bottom, top side respectively.
pub fn fixed_layout(scenario: ScenarioId) -> Grid<bool> {
    let mut g = Grid::filled(false);
    match scenario.get() {
        1 => {
            let gaps_20 = |r: &usize| !(8..12).contains(r) && !(38..42).contains(r);
            let gaps_40 = |r: &usize| !(18..22).contains(r) && !(48..52).contains(r);
            wall_col(&mut g, 20, (0..SIDE).filter(gaps_20));
            wall_col(&mut g, 40, (0..SIDE).filter(gaps_40));
        }
        2 => block(&mut g, 20..40, 20..40),
        3 => {
            wall_row(&mut g, 15, (0..SIDE).filter(outside(5..9)));
            wall_row(&mut g, 30, (0..SIDE).filter(outside(50..54)));
            wall_row(&mut g, 45, (0..SIDE).filter(outside(5..9)));
        }
        4 => {
            for r0 in [10, 40] {
                for c0 in [10, 40] {
                    block(&mut g, r0..r0 + 10, c0..c0 + 10);
                }
            }
        }
        5 => {
            for (i, m) in [8usize, 18, 28].into_iter().enumerate() {
                let (lo, hi) = (m, SIDE - 1 - m);
                let gap = outside(28..32);
                let (top_gap, bottom_gap) = (i % 2 == 0, i % 2 == 1);
                wall_row(&mut g, lo, (lo..=hi).filter(|c| !top_gap || gap(c)));
                wall_row(&mut g, hi, (lo..=hi).filter(|c| !bottom_gap || gap(c)));
                wall_col(&mut g, lo, lo..=hi);
                wall_col(&mut g, hi, lo..=hi);
            }
        }
        _ => unreachable!("ScenarioId is always 1..=5"),
    }
    g
}

fn draw_scene(config: &GenConfig, fixed: &Grid<bool>, rng: &mut Rng64) -> Scene {
    let mut obstacles = fixed.clone();
    let mut placed = 0;
    while placed < config.random_obstacle_count() {
        let c = Coord::from_index(rng.below(CELLS as u64) as usize);
        if !obstacles[c] {
            obstacles[c] = true;
            placed += 1;
        }
    }
    // Start and goal are drawn independently from the free-cell list; a
    // coinciding pair is redrawn as a whole.
    let free: Vec<Coord> = Coord::all().filter(|&c| !obstacles[c]).collect();
    let n = free.len() as u64;
    let (start, goal) = loop {
        let s = free[rng.below(n) as usize];
        let g = free[rng.below(n) as usize];
        if s != g {
            break (s, g);
        }
    };
    Scene::new(&obstacles, start, goal).expect("markers drawn from distinct free cells")
}

/// Generates scene `index` of `config` and its BFS shortest-path answer.
pub fn generate_scene(config: &GenConfig, index: u32) -> Result<(Scene, AnswerPath), GenError> {
    config.validate()?;
    if index >= config.count {
        return Err(GenError::IndexOutOfRange {
            index,
            count: config.count,
        });
    }
    let fixed = fixed_layout(config.scenario);
    for retry in 0..=MAX_RETRIES {
        let mut rng = Rng64::new(config.stream_seed(index, retry));
        let scene = draw_scene(config, &fixed, &mut rng);
        let answer = bfs_shortest(&space_from_scene(&scene));
        if answer.found {
            let path = AnswerPath::new(&scene, answer.path).expect("BFS paths are valid");
            return Ok((scene, path));
        }
    }
    Err(GenError::Unsolvable {
        scenario: config.scenario,
        index,
    })
}

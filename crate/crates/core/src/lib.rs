//! Grid motion-planning toolkit for measuring how much a learned route mask
//! cuts A* search effort.
//!
//! - [`grid`]: the 60×60 scene model, answer paths, masks, gray images.
//! - [`codec`]: canonical RGB/PNG and `SCENE1` text codecs.
//! - [`scenegen`] / [`dataset`]: seeded scenario generation and dataset IO.
//! - [`planner`]: expansion-counting A*, the BFS oracle, masked planning.
//! - [`maskpipe`]: encoder output → gray → dilate → threshold → mask.
//! - [`bench`]: baseline vs. pruned comparison and report emitters.

pub mod bench;
pub mod codec;
pub mod dataset;
pub mod grid;
pub mod maskpipe;
pub mod par;
pub mod planner;
pub mod rng;
pub mod scenegen;

pub use grid::{AnswerPath, CellKind, Coord, GrayImage, Grid, PathMask, Scene, CELLS, SIDE};
pub use maskpipe::{MaskVector, Predictor};
pub use par::Execution;
pub use planner::{astar, astar_traced, bfs_shortest, masked_plan, space_from_scene, PlanResult, SearchSpace};
pub use scenegen::{generate_scene, GenConfig, ScenarioId};

//! Iteration-instrumented A* and the BFS oracle.
//!
//! An iteration is one node expansion: a node taken off the open list and
//! closed. Both searches stop as soon as the goal is taken off the list, and
//! that final pop is counted.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use crate::grid::{Coord, Grid, PathMask, Scene};

/// Which cells a search may enter, plus its endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpace {
    traversable: Grid<bool>,
    start: Coord,
    goal: Coord,
}

impl SearchSpace {
    /// Forces `start` and `goal` to be traversable.
    pub fn new(mut traversable: Grid<bool>, start: Coord, goal: Coord) -> Self {
        traversable[start] = true;
        traversable[goal] = true;
        SearchSpace {
            traversable,
            start,
            goal,
        }
    }

    pub fn start(&self) -> Coord {
        self.start
    }

    pub fn goal(&self) -> Coord {
        self.goal
    }

    pub fn is_traversable(&self, c: Coord) -> bool {
        self.traversable[c]
    }

    pub fn traversable(&self) -> &Grid<bool> {
        &self.traversable
    }

    pub fn traversable_count(&self) -> usize {
        self.traversable.as_slice().iter().filter(|t| **t).count()
    }
}

/// Every non-obstacle cell is traversable.
pub fn space_from_scene(scene: &Scene) -> SearchSpace {
    SearchSpace::new(
        Grid::from_fn(|c| !scene.is_obstacle(c)),
        scene.start(),
        scene.goal(),
    )
}

/// Intersects the scene's free cells with `mask`; the endpoints are always
/// admitted and obstacles always excluded.
pub fn overlap(scene: &Scene, mask: &PathMask) -> SearchSpace {
    SearchSpace::new(
        Grid::from_fn(|c| !scene.is_obstacle(c) && mask.allowed(c)),
        scene.start(),
        scene.goal(),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanResult {
    pub found: bool,
    /// Start→goal cells; empty when nothing was found.
    pub path: Vec<Coord>,
    pub iterations: u64,
    pub fallback_used: bool,
}

impl PlanResult {
    fn not_found(iterations: u64) -> Self {
        PlanResult {
            found: false,
            path: Vec::new(),
            iterations,
            fallback_used: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct OpenEntry {
    f: u32,
    g: u32,
    at: Coord,
}

// BinaryHeap is a max-heap, so "greater" means "popped first": lower f, then
// higher g, then lower row, then lower col.
impl Ord for OpenEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .cmp(&self.f)
            .then(self.g.cmp(&other.g))
            .then(other.at.row.cmp(&self.at.row))
            .then(other.at.col.cmp(&self.at.col))
    }
}

impl PartialOrd for OpenEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn walk_back(parent: &Grid<Option<Coord>>, goal: Coord) -> Vec<Coord> {
    let mut path = vec![goal];
    let mut cur = goal;
    while let Some(p) = parent[cur] {
        path.push(p);
        cur = p;
    }
    path.reverse();
    path
}

/// A* with the Manhattan heuristic on the 4-connected unit-cost grid.
///
/// Ties on `f` go to the larger `g`, then the smaller row, then the smaller
/// column. Entries made stale by a cheaper rediscovery are discarded without
/// counting as iterations.
pub fn astar(space: &SearchSpace) -> PlanResult {
    astar_visit(space, |_| {})
}

/// One node expansion, in the order A* performed them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Expansion {
    pub at: Coord,
    pub g: u32,
    pub f: u32,
}

/// [`astar`] plus the full expansion sequence.
pub fn astar_traced(space: &SearchSpace) -> (PlanResult, Vec<Expansion>) {
    let mut trace = Vec::new();
    let result = astar_visit(space, |e| trace.push(e));
    (result, trace)
}

fn astar_visit(space: &SearchSpace, mut on_expand: impl FnMut(Expansion)) -> PlanResult {
    let (start, goal) = (space.start, space.goal);
    let h = |c: Coord| c.manhattan(goal) as u32;

    let mut g_best = Grid::filled(u32::MAX);
    let mut closed = Grid::filled(false);
    let mut parent: Grid<Option<Coord>> = Grid::filled(None);
    let mut open = BinaryHeap::new();
    let mut iterations = 0u64;

    g_best[start] = 0;
    open.push(OpenEntry {
        f: h(start),
        g: 0,
        at: start,
    });

    while let Some(OpenEntry { f, g, at }) = open.pop() {
        if closed[at] || g > g_best[at] {
            continue;
        }
        closed[at] = true;
        iterations += 1;
        on_expand(Expansion { at, g, f });
        if at == goal {
            return PlanResult {
                found: true,
                path: walk_back(&parent, goal),
                iterations,
                fallback_used: false,
            };
        }
        for n in at.neighbors() {
            if !space.traversable[n] || closed[n] {
                continue;
            }
            let ng = g + 1;
            if ng < g_best[n] {
                g_best[n] = ng;
                parent[n] = Some(at);
                open.push(OpenEntry {
                    f: ng + h(n),
                    g: ng,
                    at: n,
                });
            }
        }
    }
    PlanResult::not_found(iterations)
}

/// Breadth-first search with neighbor order up, down, left, right.
pub fn bfs_shortest(space: &SearchSpace) -> PlanResult {
    let (start, goal) = (space.start, space.goal);
    let mut seen = Grid::filled(false);
    let mut parent: Grid<Option<Coord>> = Grid::filled(None);
    let mut queue = VecDeque::from([start]);
    let mut iterations = 0u64;
    seen[start] = true;

    while let Some(at) = queue.pop_front() {
        iterations += 1;
        if at == goal {
            return PlanResult {
                found: true,
                path: walk_back(&parent, goal),
                iterations,
                fallback_used: false,
            };
        }
        for n in at.neighbors() {
            if space.traversable[n] && !seen[n] {
                seen[n] = true;
                parent[n] = Some(at);
                queue.push_back(n);
            }
        }
    }
    PlanResult::not_found(iterations)
}

/// Runs A* inside the mask. If the mask disconnects start from goal, A* is
/// rerun on the unmasked scene and both phases' iterations are charged.
pub fn masked_plan(scene: &Scene, mask: &PathMask) -> PlanResult {
    let pruned = astar(&overlap(scene, mask));
    if pruned.found {
        return pruned;
    }
    let full = astar(&space_from_scene(scene));
    if !full.found {
        return pruned;
    }
    PlanResult {
        found: true,
        path: full.path,
        iterations: pruned.iterations + full.iterations,
        fallback_used: true,
    }
}

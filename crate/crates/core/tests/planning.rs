use std::collections::VecDeque;

use maskplan::grid::{AnswerPath, Coord, Grid, PathMask, Scene, CELLS};
use maskplan::maskpipe::{overlap, MaskVector, Predictor};
use maskplan::planner::{astar, astar_traced, bfs_shortest, masked_plan, space_from_scene, SearchSpace};
use maskplan::scenegen::{generate_scene, GenConfig, ScenarioId};
use proptest::prelude::*;

/// Unit-cost shortest distance by plain BFS over the space's traversable flags.
fn oracle_distance(space: &SearchSpace) -> Option<usize> {
    let mut dist = vec![usize::MAX; CELLS];
    let (s, g) = (space.start().index(), space.goal().index());
    dist[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(i) = q.pop_front() {
        for n in Coord::from_index(i).neighbors() {
            let j = n.index();
            if space.is_traversable(n) && dist[j] == usize::MAX {
                dist[j] = dist[i] + 1;
                q.push_back(j);
            }
        }
    }
    (dist[g] != usize::MAX).then_some(dist[g])
}

fn scenes(per_scenario: u32, seed: u64) -> impl Iterator<Item = (Scene, AnswerPath)> {
    ScenarioId::ALL.into_iter().flat_map(move |k| {
        let cfg = GenConfig::new(k, per_scenario, seed);
        (0..per_scenario).map(move |i| generate_scene(&cfg, i).unwrap())
    })
}

#[test]
fn astar_matches_bfs_on_generated_scenes() {
    for (scene, answer) in scenes(200, 77) {
        let space = space_from_scene(&scene);
        let a = astar(&space);
        let b = bfs_shortest(&space);
        assert!(a.found && b.found);
        assert_eq!(a.path.len(), b.path.len());
        assert_eq!(a.path.len(), answer.len());
        assert!(a.iterations >= a.path.len() as u64);
        AnswerPath::new(&scene, a.path).unwrap();
    }
}

fn arb_space() -> impl Strategy<Value = SearchSpace> {
    (
        prop::collection::vec(prop::bool::weighted(0.3), CELLS),
        0..CELLS,
        0..CELLS,
    )
        .prop_filter("distinct endpoints", |(_, s, g)| s != g)
        .prop_map(|(blocked, s, g)| {
            let free = Grid::from_vec(blocked.into_iter().map(|b| !b).collect()).unwrap();
            SearchSpace::new(free, Coord::from_index(s), Coord::from_index(g))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn astar_is_optimal_on_random_spaces(space in arb_space()) {
        let a = astar(&space);
        let d = oracle_distance(&space);
        prop_assert_eq!(a.found, d.is_some());
        if let Some(d) = d {
            prop_assert_eq!(a.path.len(), d + 1);
            prop_assert!(a.iterations >= a.path.len() as u64);
            prop_assert_eq!(bfs_shortest(&space).path.len(), d + 1);
        } else {
            prop_assert!(a.path.is_empty());
        }
        prop_assert_eq!(astar(&space), a);
    }
}

#[test]
fn space_from_scene_counts() {
    let scene = Scene::open(Coord::new(0, 0), Coord::new(59, 59)).unwrap();
    assert_eq!(space_from_scene(&scene).traversable_count(), 3600);
    let (scene, _) = generate_scene(&GenConfig::new(ScenarioId::new(2).unwrap(), 1, 0).with_fraction(0.0), 0).unwrap();
    assert_eq!(space_from_scene(&scene).traversable_count(), 3200);
    for (scene, _) in scenes(20, 3) {
        assert_eq!(space_from_scene(&scene).traversable_count(), CELLS - scene.obstacle_count());
    }
}

#[test]
fn overlap_never_opens_obstacles_and_keeps_the_answer() {
    for (scene, answer) in scenes(40, 8) {
        for mask in [PathMask::all(), answer.to_mask(), answer.to_mask().dilated()] {
            let space = overlap(&scene, &mask);
            for c in Coord::all() {
                if scene.is_obstacle(c) {
                    assert!(!space.is_traversable(c));
                }
            }
            for &c in answer.cells() {
                assert!(space.is_traversable(c));
            }
        }
        assert_eq!(overlap(&scene, &PathMask::all()), space_from_scene(&scene));
    }
}

#[test]
fn answer_corridor_search_is_no_worse_than_plain() {
    for (scene, answer) in scenes(40, 21) {
        let plain = astar(&space_from_scene(&scene));
        let r = masked_plan(&scene, &answer.to_mask());
        assert!(r.found && !r.fallback_used);
        assert_eq!(r.path.len(), answer.len());
        assert!(r.iterations <= plain.iterations);
        // A simple chain: at most every path cell is expanded.
        assert!(r.iterations <= answer.len() as u64);
    }
}

#[test]
fn fallback_recovers_from_empty_masks() {
    for (scene, _) in scenes(40, 4) {
        let r = masked_plan(&scene, &PathMask::none());
        assert!(r.found);
        let adjacent = scene.start().is_adjacent(scene.goal());
        assert_eq!(r.fallback_used, !adjacent);
        let plain = astar(&space_from_scene(&scene));
        assert_eq!(r.path.len(), plain.path.len());
        if !adjacent {
            assert_eq!(r.iterations, 1 + plain.iterations);
        }
    }
}

/// For a consistent heuristic, the nodes A* must expand are those with
/// `f < C*`; shrinking the search space can only shrink that set. Expansions
/// at exactly `f = C*` depend on tie-breaking and are not monotone.
#[test]
fn pruning_is_monotone_below_the_optimal_cost() {
    let mut compared = 0;
    for (scene, answer) in scenes(60, 13) {
        let masks: Vec<PathMask> = [0u32, 1, 2, 4]
            .iter()
            .map(|&r| Predictor::Oracle { radius: r }.predict(Some(&answer), 0).unwrap())
            .chain(std::iter::once(PathMask::all()))
            .collect();
        for pair in masks.windows(2) {
            assert!(pair[0].is_subset_of(&pair[1]));
            let (ra, ta) = astar_traced(&overlap(&scene, &pair[0]));
            let (rb, tb) = astar_traced(&overlap(&scene, &pair[1]));
            assert!(ra.found && rb.found);
            assert_eq!(ra.path.len(), rb.path.len());
            let cstar = (ra.path.len() - 1) as u32;
            let below = |t: &[maskplan::planner::Expansion]| {
                t.iter().filter(|e| e.f < cstar).map(|e| e.at).collect::<Vec<_>>()
            };
            let (ba, bb) = (below(&ta), below(&tb));
            assert!(ba.len() <= bb.len());
            assert!(ba.iter().all(|c| bb.contains(c)));
            compared += 1;
        }
    }
    assert_eq!(compared, 5 * 60 * 4);
}

#[test]
fn planning_is_deterministic() {
    for (scene, answer) in scenes(10, 55) {
        let m = answer.to_mask().dilated();
        assert_eq!(masked_plan(&scene, &m), masked_plan(&scene, &m));
        assert_eq!(astar(&space_from_scene(&scene)), astar(&space_from_scene(&scene)));
    }
}

#[test]
fn file_predictor_mask_flows_into_planning() {
    let dir = tempfile::tempdir().unwrap();
    let (scene, answer) = scenes(1, 9).next().unwrap();
    // Encoder-style target: +1 on the path, -1 elsewhere.
    let target: Vec<f64> = (0..CELLS)
        .map(|i| if answer.cells().contains(&Coord::from_index(i)) { 1.0 } else { -1.0 })
        .collect();
    let v = MaskVector::new(target).unwrap();
    maskplan::maskpipe::write_mask_file(&v, &dir.path().join("mask_00000.txt")).unwrap();
    let mask = Predictor::FromFiles(dir.path().into()).predict(None, 0).unwrap();
    assert_eq!(mask, answer.to_mask().dilated());
    let r = masked_plan(&scene, &mask);
    assert!(r.found && !r.fallback_used);
    assert_eq!(r.path.len(), answer.len());

    assert!(matches!(
        Predictor::FromFiles(dir.path().into()).predict(None, 1),
        Err(maskplan::maskpipe::MaskError::MissingMaskFile { index: 1, .. })
    ));
}

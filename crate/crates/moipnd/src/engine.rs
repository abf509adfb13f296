//! Complete nondominated-set enumeration.
//!
//! Both entry points share one recursion. At level `q >= 2` the engine
//! sweeps an upper bound on objective `f_q` from unbounded downward:
//! it solves the level-`q-1` subproblem under the current bounds, unions
//! the result, tightens the bound to one below the largest `f_q` value
//! seen in that result, and repeats until the subproblem is infeasible.
//! Level 1 is a single lexicographic solve ([`crate::lexsolver`]), the
//! unit counted by `ip_count`.
//!
//! [`solve_basic`] always recurses. [`solve_improved`] additionally keeps
//! every solved subproblem, keyed by level and bounds, and consults that
//! store before each solve below the top level. A stored subproblem whose
//! bounds are coordinatewise no tighter (strictly looser somewhere) is a
//! relaxation of the query: an infeasible relaxation proves the query
//! infeasible, and a solved relaxation whose vectors all satisfy the
//! query's bounds has exactly the query's answer. Either way the solve,
//! and every solve beneath it, is skipped; results are identical.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::ipsolver::{Backend, SolveError};
use crate::lexsolver::{self, BoundVector, LexOutcome};
use crate::model::{NDSet, Problem};

/// Identity of a subproblem below the top level: the recursion level `q`
/// in `1..=k-1` plus the bounds on objectives `q+1..=k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubproblemKey {
    level: usize,
    bounds: BoundVector,
}

impl SubproblemKey {
    /// Builds a key; `bounds` slots below `level` must be unbounded, since
    /// the subproblem enumerates those objectives itself.
    pub fn new(level: usize, bounds: BoundVector) -> Self {
        assert!(
            level >= 1 && level < bounds.len(),
            "level must lie in 1..=k-1"
        );
        assert!(
            (0..level).all(|slot| bounds.get(slot).is_none()),
            "enumerated objectives cannot carry bounds"
        );
        SubproblemKey { level, bounds }
    }

    /// The recursion level `q`.
    pub fn level(&self) -> usize {
        self.level
    }

    /// The bound slots (full objective width).
    pub fn bounds(&self) -> &BoundVector {
        &self.bounds
    }
}

impl fmt::Display for SubproblemKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.level)?;
        for slot in self.level..self.bounds.len() {
            match self.bounds.get(slot) {
                Some(b) => write!(f, ", {b}")?,
                None => write!(f, ", inf")?,
            }
        }
        write!(f, ")")
    }
}

/// Result of a subproblem: its nondominated set, or infeasibility.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubproblemOutcome {
    /// Nondominated set of the bounded subproblem (full-width vectors).
    Solved(NDSet),
    /// No feasible point satisfies the bounds.
    Infeasible,
}

/// One stored subproblem.
#[derive(Clone, Debug)]
pub struct CacheEntry {
    /// The solved subproblem's identity.
    pub key: SubproblemKey,
    /// What solving it produced.
    pub outcome: SubproblemOutcome,
    /// Monotone insertion counter; newer entries are scanned first.
    pub insertion_index: u64,
}

/// Store of solved subproblems for one top-level run.
#[derive(Debug, Default)]
pub struct Cache {
    entries: Vec<CacheEntry>,
    exact: HashMap<SubproblemKey, usize>,
}

impl Cache {
    /// An empty store.
    pub fn new() -> Self {
        Cache::default()
    }

    /// Number of stored subproblems.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// True iff nothing is stored.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Stores a solved subproblem.
    pub fn insert(&mut self, key: SubproblemKey, outcome: SubproblemOutcome) {
        if let SubproblemOutcome::Solved(nd) = &outcome {
            debug_assert!(
                nd.iter().all(|v| key.bounds.satisfied_by(v)),
                "stored vectors must satisfy the key's bounds"
            );
        }
        let index = self.entries.len();
        self.entries.push(CacheEntry {
            key: key.clone(),
            outcome,
            insertion_index: index as u64,
        });
        self.exact.insert(key, index);
    }

    /// All entries in insertion order.
    pub fn entries(&self) -> &[CacheEntry] {
        &self.entries
    }

    fn lookup_exact(&self, key: &SubproblemKey) -> Option<&CacheEntry> {
        self.exact.get(key).map(|&i| &self.entries[i])
    }
}

/// What a cache consultation concluded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CacheAnswer {
    /// The stored set is exactly the query's nondominated set.
    Reuse(NDSet),
    /// The query is infeasible, certified without solving.
    ProvenInfeasible,
    /// Nothing usable; the query must be solved.
    Miss,
}

/// [`find_usable_relaxation`]'s full answer.
#[derive(Clone, Debug)]
pub struct RelaxationLookup {
    /// The conclusion.
    pub answer: CacheAnswer,
    /// The certifying entry's key, when the answer is not a miss.
    pub source: Option<SubproblemKey>,
    /// How many stored relaxations of the query were examined.
    pub relaxations_examined: u64,
}

/// True iff `a` poses the same-level subproblem with coordinatewise
/// weaker bounds, strictly weaker in at least one slot (absent bounds
/// count as weaker than any finite bound).
pub fn is_relaxation(a: &SubproblemKey, b: &SubproblemKey) -> bool {
    if a.level != b.level || a.bounds.len() != b.bounds.len() {
        return false;
    }
    let mut strictly_weaker = false;
    for (wa, wb) in a.bounds.iter().zip(b.bounds.iter()) {
        match (wa, wb) {
            (None, None) => {}
            (None, Some(_)) => strictly_weaker = true,
            (Some(_), None) => return false,
            (Some(la), Some(lb)) => {
                if la < lb {
                    return false;
                }
                if la > lb {
                    strictly_weaker = true;
                }
            }
        }
    }
    strictly_weaker
}

/// Consults the store for `key`: an exact hit answers directly; otherwise
/// stored relaxations are scanned newest-first. Per entry, infeasibility
/// is checked before reuse: an infeasible relaxation proves `key`
/// infeasible, and a solved relaxation whose every vector satisfies
/// `key`'s bounds is adopted verbatim. All relaxations are examined
/// before concluding a miss.
pub fn find_usable_relaxation(cache: &Cache, key: &SubproblemKey) -> RelaxationLookup {
    if let Some(entry) = cache.lookup_exact(key) {
        let answer = match &entry.outcome {
            SubproblemOutcome::Solved(nd) => CacheAnswer::Reuse(nd.clone()),
            SubproblemOutcome::Infeasible => CacheAnswer::ProvenInfeasible,
        };
        return RelaxationLookup {
            answer,
            source: Some(entry.key.clone()),
            relaxations_examined: 0,
        };
    }

    let mut examined = 0;
    for entry in cache.entries.iter().rev() {
        if !is_relaxation(&entry.key, key) {
            continue;
        }
        examined += 1;
        match &entry.outcome {
            SubproblemOutcome::Infeasible => {
                return RelaxationLookup {
                    answer: CacheAnswer::ProvenInfeasible,
                    source: Some(entry.key.clone()),
                    relaxations_examined: examined,
                };
            }
            SubproblemOutcome::Solved(nd) => {
                if nd.iter().all(|v| key.bounds.satisfied_by(v)) {
                    return RelaxationLookup {
                        answer: CacheAnswer::Reuse(nd.clone()),
                        source: Some(entry.key.clone()),
                        relaxations_examined: examined,
                    };
                }
            }
        }
    }

    RelaxationLookup {
        answer: CacheAnswer::Miss,
        source: None,
        relaxations_examined: examined,
    }
}

/// The bound for the next sweep iteration at `level` (a 1-based objective
/// index): one below the largest value of objective `level` in `nd_star`.
pub fn next_bound(nd_star: &NDSet, level: usize) -> i64 {
    assert!(!nd_star.is_empty(), "the loop terminates before emptiness");
    assert!(level >= 1, "objective indices are 1-based");
    nd_star
        .max_coordinate(level - 1)
        .expect("nonempty set has a maximum")
        - 1
}

/// Counters for one top-level run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    /// Base-level lexicographic solves, the headline cost unit.
    pub ip_count: u64,
    /// Single-objective solver invocations inside those.
    pub raw_scalar_solves: u64,
    /// Subproblems answered by adopting a stored set.
    pub cache_reuses: u64,
    /// Subproblems proven infeasible from a stored entry.
    pub infeasible_shortcuts: u64,
    /// Stored relaxations examined across all consultations.
    pub relaxations_examined: u64,
    /// Sweep iterations per recursion level (levels `2..=k`).
    pub per_level_iterations: BTreeMap<usize, u64>,
}

/// One step of a run, in execution order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEvent {
    /// A keyed subproblem is posed (before any store consultation).
    Subproblem {
        /// The posed subproblem.
        key: SubproblemKey,
    },
    /// A keyed subproblem was actually solved.
    Solved {
        /// The solved subproblem.
        key: SubproblemKey,
        /// Its outcome.
        outcome: SubproblemOutcome,
    },
    /// A keyed subproblem adopted a stored set instead of solving.
    Reused {
        /// The posed subproblem.
        key: SubproblemKey,
        /// The certifying stored key.
        source: SubproblemKey,
        /// The adopted set.
        nd: NDSet,
    },
    /// A keyed subproblem was proven infeasible from a stored entry.
    ProvenInfeasible {
        /// The posed subproblem.
        key: SubproblemKey,
        /// The certifying stored key.
        source: SubproblemKey,
    },
    /// A sweep at `level` tightened its bound on objective `level`.
    BoundUpdate {
        /// The sweeping level (1-based objective index).
        level: usize,
        /// The new upper bound.
        bound: i64,
    },
}

/// Enumerates the complete nondominated set by plain recursion.
pub fn solve_basic(p: &Problem, backend: Backend) -> Result<(NDSet, SolveStats), SolveError> {
    let (nd, stats, _) = Engine::new(p, backend, false, false).run()?;
    Ok((nd, stats))
}

/// [`solve_basic`] with the solved-subproblem store consulted before
/// every solve below the top level. The returned set is always identical;
/// only the work differs.
pub fn solve_improved(p: &Problem, backend: Backend) -> Result<(NDSet, SolveStats), SolveError> {
    let (nd, stats, _) = Engine::new(p, backend, true, false).run()?;
    Ok((nd, stats))
}

/// [`solve_basic`] plus the event trace.
pub fn solve_basic_traced(
    p: &Problem,
    backend: Backend,
) -> Result<(NDSet, SolveStats, Vec<TraceEvent>), SolveError> {
    let (nd, stats, trace) = Engine::new(p, backend, false, true).run()?;
    Ok((nd, stats, trace.expect("tracing was requested")))
}

/// [`solve_improved`] plus the event trace.
pub fn solve_improved_traced(
    p: &Problem,
    backend: Backend,
) -> Result<(NDSet, SolveStats, Vec<TraceEvent>), SolveError> {
    let (nd, stats, trace) = Engine::new(p, backend, true, true).run()?;
    Ok((nd, stats, trace.expect("tracing was requested")))
}

/// Solves one keyed subproblem from scratch, with no store. This is the
/// ground truth that store consultations are tested against.
pub fn solve_subproblem(
    p: &Problem,
    key: &SubproblemKey,
    backend: Backend,
) -> Result<SubproblemOutcome, SolveError> {
    assert_eq!(
        key.bounds.len(),
        p.num_objectives(),
        "key width must match the problem"
    );
    Engine::new(p, backend, false, false).solve_at(key.level, key.bounds())
}

struct Engine<'a> {
    problem: &'a Problem,
    backend: Backend,
    cache: Option<Cache>,
    stats: SolveStats,
    trace: Option<Vec<TraceEvent>>,
}

impl<'a> Engine<'a> {
    fn new(problem: &'a Problem, backend: Backend, cached: bool, traced: bool) -> Self {
        Engine {
            problem,
            backend,
            cache: cached.then(Cache::new),
            stats: SolveStats::default(),
            trace: traced.then(Vec::new),
        }
    }

    fn run(mut self) -> Result<(NDSet, SolveStats, Option<Vec<TraceEvent>>), SolveError> {
        let k = self.problem.num_objectives();
        let outcome = self.solve_at(k, &BoundVector::unbounded(k))?;
        let nd = match outcome {
            SubproblemOutcome::Solved(nd) => nd,
            SubproblemOutcome::Infeasible => NDSet::new(),
        };
        Ok((nd, self.stats, self.trace))
    }

    fn emit(&mut self, event: TraceEvent) {
        if let Some(trace) = &mut self.trace {
            trace.push(event);
        }
    }

    /// Solves the level-`level` subproblem under `bounds`. Levels below
    /// the top are keyed: they are posed to the store first (when one is
    /// active) and stored after an actual solve.
    fn solve_at(
        &mut self,
        level: usize,
        bounds: &BoundVector,
    ) -> Result<SubproblemOutcome, SolveError> {
        let k = self.problem.num_objectives();
        if level >= k {
            debug_assert_eq!(level, k);
            // The top level is unkeyed; with one objective it is also the
            // base case.
            return if k == 1 {
                self.solve_base(bounds)
            } else {
                self.solve_sweep(level, bounds)
            };
        }

        let key = SubproblemKey::new(level, bounds.clone());
        self.emit(TraceEvent::Subproblem { key: key.clone() });

        if let Some(cache) = &self.cache {
            let lookup = find_usable_relaxation(cache, &key);
            self.stats.relaxations_examined += lookup.relaxations_examined;
            match lookup.answer {
                CacheAnswer::Reuse(nd) => {
                    self.stats.cache_reuses += 1;
                    self.emit(TraceEvent::Reused {
                        key,
                        source: lookup.source.expect("hits carry their source"),
                        nd: nd.clone(),
                    });
                    return Ok(SubproblemOutcome::Solved(nd));
                }
                CacheAnswer::ProvenInfeasible => {
                    self.stats.infeasible_shortcuts += 1;
                    self.emit(TraceEvent::ProvenInfeasible {
                        key,
                        source: lookup.source.expect("hits carry their source"),
                    });
                    return Ok(SubproblemOutcome::Infeasible);
                }
                CacheAnswer::Miss => {}
            }
        }

        let outcome = if level == 1 {
            self.solve_base(bounds)?
        } else {
            self.solve_sweep(level, bounds)?
        };
        self.emit(TraceEvent::Solved {
            key: key.clone(),
            outcome: outcome.clone(),
        });
        if let Some(cache) = &mut self.cache {
            cache.insert(key, outcome.clone());
        }
        Ok(outcome)
    }

    /// One lexicographic solve: the recursion's base and `ip_count` unit.
    fn solve_base(&mut self, bounds: &BoundVector) -> Result<SubproblemOutcome, SolveError> {
        let result = lexsolver::solve_lex(self.problem, bounds, self.backend)?;
        self.stats.ip_count += 1;
        self.stats.raw_scalar_solves += u64::from(result.scalar_solves);
        Ok(match result.outcome {
            LexOutcome::Found(v) => SubproblemOutcome::Solved(NDSet::singleton(v)),
            LexOutcome::Infeasible => SubproblemOutcome::Infeasible,
        })
    }

    /// The level-`level` sweep: bound objective `level` from unbounded
    /// downward until the child subproblem goes infeasible.
    fn solve_sweep(
        &mut self,
        level: usize,
        bounds: &BoundVector,
    ) -> Result<SubproblemOutcome, SolveError> {
        debug_assert!(level >= 2);
        debug_assert!(
            bounds.get(level - 1).is_none(),
            "the swept objective starts unbounded"
        );
        let mut nd = NDSet::new();
        let mut current = bounds.clone();
        loop {
            *self.stats.per_level_iterations.entry(level).or_insert(0) += 1;
            match self.solve_at(level - 1, &current)? {
                SubproblemOutcome::Infeasible => break,
                SubproblemOutcome::Solved(star) => {
                    let bound = next_bound(&star, level);
                    nd.union_with(&star);
                    self.emit(TraceEvent::BoundUpdate { level, bound });
                    current = current.with_bound(level - 1, bound);
                }
            }
        }
        if nd.is_empty() {
            Ok(SubproblemOutcome::Infeasible)
        } else {
            debug_assert!(
                nd.is_pairwise_nondominated((level + 1).min(self.problem.num_objectives())),
                "sweep unions stay nondominated through the child-pinned prefix"
            );
            Ok(SubproblemOutcome::Solved(nd))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::build_point_instance;
    use crate::model::ObjectiveVector;

    const BACKENDS: [Backend; 2] = [Backend::Enum, Backend::Bb];

    fn ov(values: &[i64]) -> ObjectiveVector {
        ObjectiveVector::new(values.to_vec())
    }

    fn key(level: usize, bounds: &[Option<i64>]) -> SubproblemKey {
        SubproblemKey::new(level, BoundVector::from_bounds(bounds.to_vec()))
    }

    fn nd(vectors: &[&[i64]]) -> NDSet {
        let mut set = NDSet::new();
        for v in vectors {
            set.union_with(&NDSet::singleton(ov(v)));
        }
        set
    }

    #[test]
    fn relaxation_requires_weaker_bounds_same_level() {
        let a = key(1, &[None, None, Some(15), Some(12)]);
        let b = key(1, &[None, None, Some(14), Some(12)]);
        assert!(is_relaxation(&a, &b));
        assert!(!is_relaxation(&b, &a));
    }

    #[test]
    fn relaxation_is_irreflexive() {
        let a = key(1, &[None, Some(10), Some(15), None]);
        assert!(!is_relaxation(&a, &a));
    }

    #[test]
    fn relaxation_never_crosses_levels() {
        let a = key(1, &[None, None, Some(15), Some(12)]);
        let b = key(2, &[None, None, Some(15), Some(12)]);
        assert!(!is_relaxation(&a, &b));
        assert!(!is_relaxation(&b, &a));
    }

    #[test]
    fn absent_bounds_are_weaker_than_any_finite_bound() {
        let a = key(2, &[None, None, Some(10), None]);
        let b = key(2, &[None, None, Some(10), Some(13)]);
        assert!(is_relaxation(&a, &b));
        assert!(!is_relaxation(&b, &a));
    }

    #[test]
    fn solved_relaxation_with_vectors_inside_bounds_is_adopted() {
        let mut cache = Cache::new();
        cache.insert(
            key(2, &[None, None, Some(10), None]),
            SubproblemOutcome::Solved(nd(&[&[15, 16, 7, 12], &[16, 15, 10, 13]])),
        );
        let query = key(2, &[None, None, Some(10), Some(13)]);
        let lookup = find_usable_relaxation(&cache, &query);
        assert_eq!(
            lookup.answer,
            CacheAnswer::Reuse(nd(&[&[15, 16, 7, 12], &[16, 15, 10, 13]]))
        );
        assert_eq!(lookup.source, Some(key(2, &[None, None, Some(10), None])));
        assert_eq!(lookup.relaxations_examined, 1);
    }

    #[test]
    fn infeasible_relaxation_proves_the_query_infeasible() {
        let mut cache = Cache::new();
        cache.insert(
            key(1, &[None, Some(10), Some(15), None]),
            SubproblemOutcome::Infeasible,
        );
        let query = key(1, &[None, Some(10), Some(15), Some(13)]);
        let lookup = find_usable_relaxation(&cache, &query);
        assert_eq!(lookup.answer, CacheAnswer::ProvenInfeasible);
        assert_eq!(
            lookup.source,
            Some(key(1, &[None, Some(10), Some(15), None]))
        );
    }

    #[test]
    fn stored_vector_outside_the_query_bounds_blocks_reuse() {
        let mut cache = Cache::new();
        cache.insert(
            key(1, &[None, None, Some(15), Some(12)]),
            SubproblemOutcome::Solved(nd(&[&[15, 16, 7, 12]])),
        );
        let query = key(1, &[None, Some(15), Some(15), Some(12)]);
        let lookup = find_usable_relaxation(&cache, &query);
        assert_eq!(lookup.answer, CacheAnswer::Miss);
        assert_eq!(lookup.source, None);
        assert_eq!(lookup.relaxations_examined, 1);
    }

    #[test]
    fn exact_hits_answer_without_scanning() {
        let mut cache = Cache::new();
        let stored = key(1, &[None, Some(15), Some(14), Some(12)]);
        cache.insert(
            stored.clone(),
            SubproblemOutcome::Solved(nd(&[&[19, 15, 14, 11]])),
        );
        let lookup = find_usable_relaxation(&cache, &stored);
        assert_eq!(lookup.answer, CacheAnswer::Reuse(nd(&[&[19, 15, 14, 11]])));
        assert_eq!(lookup.source, Some(stored));
        assert_eq!(lookup.relaxations_examined, 0);
    }

    #[test]
    fn next_bound_reads_the_swept_objective() {
        let star = nd(&[&[11, 19, 12, 14], &[12, 11, 11, 13]]);
        assert_eq!(next_bound(&star, 4), 13);
        assert_eq!(next_bound(&star, 2), 18);
        assert_eq!(next_bound(&nd(&[&[5]]), 1), 4);
    }

    #[test]
    fn key_display_shows_level_and_trailing_bounds() {
        let k = key(2, &[None, None, Some(10), None]);
        assert_eq!(k.to_string(), "(2, 10, inf)");
        let k = key(1, &[None, Some(15), Some(14), Some(12)]);
        assert_eq!(k.to_string(), "(1, 15, 14, 12)");
    }

    #[test]
    fn direct_subproblem_solves_match_the_published_examples() {
        let p = crate::testutil::quad_problem();
        let cases: Vec<(SubproblemKey, SubproblemOutcome)> = vec![
            (
                key(2, &[None, None, Some(10), None]),
                SubproblemOutcome::Solved(nd(&[&[15, 16, 7, 12], &[16, 15, 10, 13]])),
            ),
            (
                key(1, &[None, Some(10), Some(15), None]),
                SubproblemOutcome::Infeasible,
            ),
            (
                key(1, &[None, None, Some(15), Some(12)]),
                SubproblemOutcome::Solved(nd(&[&[15, 16, 7, 12]])),
            ),
            (
                key(1, &[None, Some(15), Some(15), Some(12)]),
                SubproblemOutcome::Solved(nd(&[&[17, 13, 15, 11]])),
            ),
        ];
        for (k, expected) in cases {
            let got = solve_subproblem(&p, &k, Backend::Enum).unwrap();
            assert_eq!(got, expected, "subproblem {k}");
        }
    }

    #[test]
    fn single_objective_instances_need_exactly_one_solve() {
        let p = build_point_instance(&[ov(&[7]), ov(&[3]), ov(&[9])]).unwrap();
        for backend in BACKENDS {
            let (nd_set, stats) = solve_basic(&p, backend).unwrap();
            assert_eq!(nd_set.iter().collect::<Vec<_>>(), vec![&ov(&[3])]);
            assert_eq!(stats.ip_count, 1);
            assert_eq!(stats.raw_scalar_solves, 1);
            assert!(stats.per_level_iterations.is_empty());
        }
    }

    #[test]
    fn two_objective_instances_never_reuse() {
        let p = build_point_instance(&[ov(&[1, 9]), ov(&[5, 5]), ov(&[9, 1]), ov(&[9, 9])])
            .unwrap();
        let (nd_basic, stats_basic) = solve_basic(&p, Backend::Enum).unwrap();
        let (nd_improved, stats_improved) = solve_improved(&p, Backend::Enum).unwrap();
        assert_eq!(nd_basic, nd_improved);
        assert_eq!(nd_basic.len(), 3);
        assert_eq!(stats_basic.ip_count, stats_improved.ip_count);
        assert_eq!(stats_improved.cache_reuses, 0);
        // 3 feasible sweeps plus the closing infeasible one.
        assert_eq!(stats_basic.ip_count, 4);
        assert_eq!(stats_basic.per_level_iterations.get(&2), Some(&4));
    }

    #[test]
    fn infeasible_instances_cost_one_lexicographic_solve() {
        use crate::model::{Constraint, Problem, Sense};
        let p = Problem::new(
            vec![vec![1, 0], vec![0, 1]],
            vec![Constraint::integral(&[0, 0], Sense::Eq, 1)],
            vec![(0, 1), (0, 1)],
        )
        .unwrap();
        for backend in BACKENDS {
            for solve in [solve_basic, solve_improved] {
                let (nd_set, stats) = solve(&p, backend).unwrap();
                assert!(nd_set.is_empty());
                assert_eq!(stats.ip_count, 1);
                assert_eq!(stats.raw_scalar_solves, 1);
            }
        }
    }

    #[test]
    fn improved_matches_basic_on_random_instances() {
        use crate::instances::{generate_random, GeneratorConfig};
        for seed in 0..6 {
            let p = generate_random(&GeneratorConfig {
                cols: 6,
                rows: 3,
                objectives: 3,
                coeff_max: 10,
                seed,
            })
            .unwrap();
            let (nd_basic, stats_basic) = solve_basic(&p, Backend::Enum).unwrap();
            let (nd_improved, stats_improved) = solve_improved(&p, Backend::Enum).unwrap();
            assert_eq!(nd_basic, nd_improved, "seed {seed}");
            assert!(
                stats_improved.ip_count <= stats_basic.ip_count,
                "seed {seed}: {} > {}",
                stats_improved.ip_count,
                stats_basic.ip_count
            );
        }
    }

    #[test]
    fn trace_bound_updates_decrease_strictly_within_a_sweep() {
        let p = build_point_instance(&[ov(&[1, 9]), ov(&[5, 5]), ov(&[9, 1])]).unwrap();
        let (_, _, trace) = solve_basic_traced(&p, Backend::Enum).unwrap();
        let bounds: Vec<i64> = trace
            .iter()
            .filter_map(|e| match e {
                TraceEvent::BoundUpdate { level: 2, bound } => Some(*bound),
                _ => None,
            })
            .collect();
        assert_eq!(bounds, vec![8, 4, 0]);
    }

    #[test]
    fn reuse_events_carry_their_certifying_source() {
        let p = crate::testutil::quad_problem();
        let (_, stats, trace) = solve_improved_traced(&p, Backend::Enum).unwrap();
        assert!(stats.cache_reuses + stats.infeasible_shortcuts > 0);
        for event in &trace {
            match event {
                TraceEvent::Reused { key, source, nd } => {
                    assert!(
                        source == key || is_relaxation(source, key),
                        "source {source} must certify {key}"
                    );
                    assert!(nd.iter().all(|v| key.bounds().satisfied_by(v)));
                }
                TraceEvent::ProvenInfeasible { key, source } => {
                    assert!(source == key || is_relaxation(source, key));
                }
                _ => {}
            }
        }
    }

    #[test]
    fn stats_serialize_to_json_with_per_level_map() {
        let mut stats = SolveStats::default();
        stats.ip_count = 7;
        stats.per_level_iterations.insert(2, 5);
        let json = serde_json::to_string(&stats).unwrap();
        assert!(json.contains("\"ip_count\":7"), "{json}");
        assert!(json.contains("\"per_level_iterations\":{\"2\":5}"), "{json}");
    }
}

//! Exact three-valued solving on a bounded counter window.
//!
//! The game graph restricted to a box of counter values is finite, so the
//! Reacher attractor of the objective can be computed backwards. Successors
//! that leave the box are resolved by a [`BoundaryPolicy`]; running both
//! policies brackets the true winning region, and [`certain_region`] keeps only
//! the verdicts on which they agree.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{precondition, GameError, Result};
use crate::game::{
    is_enabled, step_counters, Configuration, GameInstance, Objective, Player, Semantics,
};

/// Inclusive per-dimension counter bounds.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Window {
    bounds: Vec<(i64, i64)>,
}

impl Window {
    pub fn new(bounds: Vec<(i64, i64)>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(GameError::Window(
                "window needs at least one dimension".into(),
            ));
        }
        if let Some((lo, hi)) = bounds.iter().find(|(lo, hi)| lo > hi) {
            return Err(GameError::Window(format!("empty range {lo}:{hi}")));
        }
        Ok(Window { bounds })
    }

    pub fn uniform(dimension: usize, lo: i64, hi: i64) -> Result<Self> {
        Window::new(vec![(lo, hi); dimension])
    }

    pub fn bounds(&self) -> &[(i64, i64)] {
        &self.bounds
    }

    pub fn dimension(&self) -> usize {
        self.bounds.len()
    }

    pub fn contains(&self, counters: &[i64]) -> bool {
        counters.len() == self.bounds.len()
            && counters
                .iter()
                .zip(&self.bounds)
                .all(|(x, (lo, hi))| lo <= x && x <= hi)
    }

    /// Number of counter vectors in the window.
    pub fn volume(&self) -> usize {
        self.bounds
            .iter()
            .map(|(lo, hi)| (hi - lo + 1) as usize)
            .product()
    }

    /// Sets every lower bound to 0 when the semantics keeps counters nonnegative.
    pub fn forced_for(&self, semantics: Semantics) -> Result<Window> {
        if !semantics.is_nonnegative() {
            return Ok(self.clone());
        }
        if let Some((_, hi)) = self.bounds.iter().find(|(_, hi)| *hi < 0) {
            return Err(GameError::Window(format!(
                "upper bound {hi} is negative under {semantics} semantics"
            )));
        }
        Window::new(self.bounds.iter().map(|&(_, hi)| (0, hi)).collect())
    }

    /// Default window for an instance, widened to cover its initial and
    /// objective vectors.
    pub fn default_for(game: &GameInstance) -> Window {
        let d = game.dimension();
        let (lo, hi) = match (d, game.semantics) {
            (1, Semantics::Z) => (-16, 16),
            (1, _) => (0, 32),
            (2, _) => (0, 12),
            _ => (0, 6),
        };
        Window {
            bounds: vec![(lo, hi); d],
        }
        .covering(game)
    }

    /// Smallest enlargement containing the initial and objective vectors.
    pub fn covering(&self, game: &GameInstance) -> Window {
        let mut bounds = self.bounds.clone();
        let mut cover = |v: &[i64]| {
            for (b, &x) in bounds.iter_mut().zip(v) {
                b.0 = b.0.min(x);
                b.1 = b.1.max(x);
            }
        };
        cover(&game.initial.counters);
        match &game.objective {
            Objective::SingleConfig(c) => cover(&c.counters),
            Objective::LocationsAtZero(_) | Objective::AxisZero(_) => {
                cover(&vec![0; game.dimension()])
            }
        }
        Window { bounds }
    }

    /// Returns the window translated by `-offset`.
    pub fn shifted(&self, offset: &[i64]) -> Window {
        Window {
            bounds: self
                .bounds
                .iter()
                .zip(offset)
                .map(|(&(lo, hi), &o)| (lo - o, hi - o))
                .collect(),
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (lo, hi)) in self.bounds.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{lo}:{hi}")?;
        }
        Ok(())
    }
}

impl FromStr for Window {
    type Err = GameError;

    /// Parses `lo:hi[,lo:hi]*`.
    fn from_str(s: &str) -> Result<Self> {
        let bounds = s
            .split(',')
            .map(|part| {
                let (lo, hi) = part
                    .split_once(':')
                    .ok_or_else(|| GameError::Window(format!("expected lo:hi, got `{part}`")))?;
                let parse = |t: &str| {
                    t.trim()
                        .parse::<i64>()
                        .map_err(|_| GameError::Window(format!("bad bound `{t}`")))
                };
                Ok((parse(lo)?, parse(hi)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Window::new(bounds)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryPolicy {
    /// Leaving the window never reaches the objective.
    Pessimistic,
    /// Leaving the window counts as a Reacher win.
    Optimistic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Win,
    Lose,
    Unknown,
}

impl Verdict {
    pub fn is_certain(self) -> bool {
        self != Verdict::Unknown
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Verdict::Win => "win",
            Verdict::Lose => "lose",
            Verdict::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Dense indexing of `locations × window`, location-major, counters in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Grid {
    window: Window,
    num_locations: usize,
    block: usize,
}

impl Grid {
    fn new(window: Window, num_locations: usize) -> Self {
        let block = window.volume();
        Grid {
            window,
            num_locations,
            block,
        }
    }

    fn len(&self) -> usize {
        self.block * self.num_locations
    }

    fn offset(&self, counters: &[i64]) -> Option<usize> {
        if !self.window.contains(counters) {
            return None;
        }
        let mut off = 0usize;
        for (x, (lo, hi)) in counters.iter().zip(&self.window.bounds) {
            off = off * (hi - lo + 1) as usize + (x - lo) as usize;
        }
        Some(off)
    }

    fn index(&self, config: &Configuration) -> Option<usize> {
        if config.location >= self.num_locations {
            return None;
        }
        self.offset(&config.counters)
            .map(|off| config.location * self.block + off)
    }

    fn config(&self, index: usize) -> Configuration {
        let location = index / self.block;
        let mut off = index % self.block;
        let mut counters = vec![0; self.window.dimension()];
        for (slot, (lo, hi)) in counters.iter_mut().zip(&self.window.bounds).rev() {
            let width = (hi - lo + 1) as usize;
            *slot = lo + (off % width) as i64;
            off /= width;
        }
        Configuration { location, counters }
    }
}

/// Three-valued classification of every in-window configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionResult {
    grid: Grid,
    verdicts: Vec<Verdict>,
    /// Attractor rank of each Win configuration (0 on the objective).
    ranks: Vec<Option<u32>>,
}

impl RegionResult {
    pub fn window(&self) -> &Window {
        &self.grid.window
    }

    /// `None` when the configuration lies outside the window.
    pub fn verdict(&self, config: &Configuration) -> Option<Verdict> {
        self.grid.index(config).map(|i| self.verdicts[i])
    }

    pub fn rank(&self, config: &Configuration) -> Option<u32> {
        self.grid.index(config).and_then(|i| self.ranks[i])
    }

    pub fn len(&self) -> usize {
        self.verdicts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verdicts.is_empty()
    }

    pub fn count(&self, verdict: Verdict) -> usize {
        self.verdicts.iter().filter(|&&v| v == verdict).count()
    }

    /// All in-window configurations with their verdicts, sorted by location
    /// then counters.
    pub fn iter(&self) -> impl Iterator<Item = (Configuration, Verdict)> + '_ {
        self.verdicts
            .iter()
            .enumerate()
            .map(|(i, &v)| (self.grid.config(i), v))
    }

    #[cfg(test)]
    pub(crate) fn set_verdict(&mut self, config: &Configuration, verdict: Verdict) {
        let i = self.grid.index(config).expect("in window");
        self.verdicts[i] = verdict;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Succ {
    In(u32),
    /// Outside the window but in the objective set.
    OutObjective,
    Out,
}

/// The windowed game graph.
struct Arena {
    grid: Grid,
    owner: Vec<Player>,
    objective: Vec<bool>,
    start: Vec<usize>,
    succ: Vec<Succ>,
}

impl Arena {
    fn build(game: &GameInstance, window: &Window) -> Result<Arena> {
        let window = check_window(game, window)?;
        let grid = Grid::new(window, game.system.num_locations());
        let adjacency = game.system.adjacency();
        let n = grid.len();
        let mut objective = Vec::with_capacity(n);
        let mut start = Vec::with_capacity(n + 1);
        let mut succ = Vec::new();
        for idx in 0..n {
            start.push(succ.len());
            let config = grid.config(idx);
            objective.push(game.objective.contains(&config));
            for &e in &adjacency[config.location] {
                let edge = &game.system.edges[e];
                if !is_enabled(game.semantics, &config, edge) {
                    continue;
                }
                let next = Configuration {
                    location: edge.dst,
                    counters: step_counters(game.semantics, &config.counters, &edge.label),
                };
                succ.push(match grid.index(&next) {
                    Some(j) => Succ::In(j as u32),
                    None if game.objective.contains(&next) => Succ::OutObjective,
                    None => Succ::Out,
                });
            }
        }
        start.push(succ.len());
        let owner = (0..game.system.num_locations())
            .map(|q| game.system.owner(q))
            .collect();
        Ok(Arena {
            grid,
            owner,
            objective,
            start,
            succ,
        })
    }

    fn owner_of(&self, idx: usize) -> Player {
        self.owner[idx / self.grid.block]
    }

    fn succs(&self, idx: usize) -> &[Succ] {
        &self.succ[self.start[idx]..self.start[idx + 1]]
    }

    fn out_wins(policy: BoundaryPolicy, s: Succ) -> bool {
        match s {
            Succ::In(_) => false,
            Succ::OutObjective => true,
            Succ::Out => policy == BoundaryPolicy::Optimistic,
        }
    }

    /// Layered backward attractor; returns the rank of every Win configuration.
    fn attractor(&self, policy: BoundaryPolicy) -> Vec<Option<u32>> {
        let n = self.grid.len();
        // predecessor lists, one entry per edge
        let mut pred_start = vec![0usize; n + 1];
        for s in &self.succ {
            if let Succ::In(j) = s {
                pred_start[*j as usize + 1] += 1;
            }
        }
        for i in 0..n {
            pred_start[i + 1] += pred_start[i];
        }
        let mut fill = pred_start.clone();
        let mut preds = vec![0u32; pred_start[n]];
        for i in 0..n {
            for s in self.succs(i) {
                if let Succ::In(j) = s {
                    preds[fill[*j as usize]] = i as u32;
                    fill[*j as usize] += 1;
                }
            }
        }

        let mut rank: Vec<Option<u32>> = vec![None; n];
        let mut remaining = vec![0usize; n];
        let mut layer0 = Vec::new();
        let mut layer1 = Vec::new();
        for i in 0..n {
            let succs = self.succs(i);
            if self.objective[i] {
                rank[i] = Some(0);
                layer0.push(i);
                continue;
            }
            let owner = self.owner_of(i);
            if succs.is_empty() {
                if owner == Player::Opponent {
                    rank[i] = Some(0);
                    layer0.push(i);
                }
                continue;
            }
            let out_win = succs.iter().filter(|&&s| Self::out_wins(policy, s)).count();
            remaining[i] = succs.len() - out_win;
            let wins = match owner {
                Player::Reacher => out_win > 0,
                Player::Opponent => remaining[i] == 0,
            };
            if wins {
                rank[i] = Some(1);
                layer1.push(i);
            }
        }

        let mut layers = vec![layer0, layer1];
        let mut k = 0;
        while k < layers.len() {
            let mut next = Vec::new();
            for &c in &layers[k] {
                for &p in &preds[pred_start[c]..pred_start[c + 1]] {
                    let p = p as usize;
                    if rank[p].is_some() {
                        continue;
                    }
                    let wins = match self.owner_of(p) {
                        Player::Reacher => true,
                        Player::Opponent => {
                            remaining[p] -= 1;
                            remaining[p] == 0
                        }
                    };
                    if wins {
                        rank[p] = Some(k as u32 + 1);
                        next.push(p);
                    }
                }
            }
            if !next.is_empty() {
                if k + 1 < layers.len() {
                    layers[k + 1].extend(next);
                } else {
                    layers.push(next);
                }
            }
            k += 1;
        }
        rank
    }

    /// The one-round attractor operator applied to `win`.
    fn local_rule(&self, policy: BoundaryPolicy, win: &[bool], i: usize) -> bool {
        if self.objective[i] {
            return true;
        }
        let succs = self.succs(i);
        let succ_wins = |s: &Succ| match s {
            Succ::In(j) => win[*j as usize],
            other => Self::out_wins(policy, *other),
        };
        match self.owner_of(i) {
            Player::Reacher => succs.iter().any(succ_wins),
            Player::Opponent => succs.is_empty() || succs.iter().all(succ_wins),
        }
    }
}

fn check_window(game: &GameInstance, window: &Window) -> Result<Window> {
    if window.dimension() != game.dimension() {
        return Err(GameError::Window(format!(
            "window has {} dimensions, game has {}",
            window.dimension(),
            game.dimension()
        )));
    }
    let window = window.forced_for(game.semantics)?;
    if !window.contains(&game.initial.counters) {
        return Err(GameError::Window(format!(
            "window {window} does not contain the initial vector {:?}",
            game.initial.counters
        )));
    }
    let objective_vector = match &game.objective {
        Objective::SingleConfig(c) => c.counters.clone(),
        Objective::LocationsAtZero(_) | Objective::AxisZero(_) => vec![0; game.dimension()],
    };
    if !window.contains(&objective_vector) {
        return Err(GameError::Window(format!(
            "window {window} does not contain the objective vector {objective_vector:?}"
        )));
    }
    Ok(window)
}

fn from_ranks(grid: Grid, ranks: Vec<Option<u32>>) -> RegionResult {
    let verdicts = ranks
        .iter()
        .map(|r| {
            if r.is_some() {
                Verdict::Win
            } else {
                Verdict::Lose
            }
        })
        .collect();
    RegionResult {
        grid,
        verdicts,
        ranks,
    }
}

/// Least-fixpoint attractor of the objective within `window` under one policy.
/// Every verdict is Win or Lose.
pub fn solve_bounded(
    game: &GameInstance,
    window: &Window,
    policy: BoundaryPolicy,
) -> Result<RegionResult> {
    let arena = Arena::build(game, window)?;
    let ranks = arena.attractor(policy);
    Ok(from_ranks(arena.grid, ranks))
}

/// Verdicts both policies agree on; Unknown elsewhere. Win/Lose verdicts hold
/// in the unbounded game.
pub fn certain_region(game: &GameInstance, window: &Window) -> Result<RegionResult> {
    let arena = Arena::build(game, window)?;
    let pess = arena.attractor(BoundaryPolicy::Pessimistic);
    let opt = arena.attractor(BoundaryPolicy::Optimistic);
    let verdicts = pess
        .iter()
        .zip(&opt)
        .map(|(p, o)| match (p.is_some(), o.is_some()) {
            (true, _) => Verdict::Win,
            (false, false) => Verdict::Lose,
            (false, true) => Verdict::Unknown,
        })
        .collect();
    Ok(RegionResult {
        grid: arena.grid,
        verdicts,
        ranks: pess,
    })
}

/// Whether one more attractor round under `policy` leaves `region` unchanged.
pub fn is_attractor_fixpoint(
    game: &GameInstance,
    region: &RegionResult,
    policy: BoundaryPolicy,
) -> Result<bool> {
    let arena = Arena::build(game, region.window())?;
    if arena.grid != region.grid {
        return Err(precondition("region was computed for a different game"));
    }
    if region.verdicts.contains(&Verdict::Unknown) {
        return Ok(false);
    }
    let win: Vec<bool> = region.verdicts.iter().map(|&v| v == Verdict::Win).collect();
    Ok((0..win.len()).all(|i| arena.local_rule(policy, &win, i) == win[i]))
}

/// Per-configuration edge choices for one player.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PositionalStrategy {
    pub choices: BTreeMap<Configuration, usize>,
}

impl PositionalStrategy {
    pub fn get(&self, config: &Configuration) -> Option<usize> {
        self.choices.get(config).copied()
    }

    pub fn len(&self) -> usize {
        self.choices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }
}

/// Reacher: on every non-objective certain-Win Reacher configuration, the
/// first edge whose successor is Win with a strictly smaller rank. Opponent:
/// on every certain-Lose Opponent configuration, the first edge staying in the
/// certain-Lose region.
pub fn extract_strategy(
    game: &GameInstance,
    region: &RegionResult,
    player: Player,
) -> PositionalStrategy {
    let mut choices = BTreeMap::new();
    for (config, verdict) in region.iter() {
        if game.owner(config.location) != player {
            continue;
        }
        let wanted = match player {
            Player::Reacher => Verdict::Win,
            Player::Opponent => Verdict::Lose,
        };
        if verdict != wanted || (player == Player::Reacher && game.is_objective(&config)) {
            continue;
        }
        let own_rank = region.rank(&config);
        let pick = game.enabled_edges(&config).into_iter().find(|&e| {
            let next = game.step(&config, e).expect("enabled edge");
            match (player, region.verdict(&next)) {
                (Player::Reacher, Some(Verdict::Win)) => region.rank(&next) < own_rank,
                (Player::Reacher, None) => game.is_objective(&next),
                (Player::Opponent, Some(Verdict::Lose)) => true,
                _ => false,
            }
        });
        if let Some(e) = pick {
            choices.insert(config, e);
        }
    }
    PositionalStrategy { choices }
}

#[derive(Debug, Clone, Copy)]
pub enum Mover<'a> {
    Strategy(&'a PositionalStrategy),
    /// Seeded uniform choice among enabled edges.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlayStatus {
    ReachedObjective,
    /// The player to move had no enabled edge and loses.
    Deadlock(Player),
    StepLimit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Play {
    pub configs: Vec<Configuration>,
    pub status: PlayStatus,
}

impl Play {
    pub fn reacher_wins(&self) -> bool {
        matches!(
            self.status,
            PlayStatus::ReachedObjective | PlayStatus::Deadlock(Player::Opponent)
        )
    }
}

/// Plays the game from `start`. A strategy without an entry for the current
/// configuration falls back to a seeded random move.
pub fn simulate(
    game: &GameInstance,
    reacher: Mover<'_>,
    opponent: Mover<'_>,
    start: &Configuration,
    max_steps: usize,
    seed: u64,
) -> Play {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut configs = vec![start.clone()];
    let mut current = start.clone();
    for _ in 0..=max_steps {
        if game.is_objective(&current) {
            return Play {
                configs,
                status: PlayStatus::ReachedObjective,
            };
        }
        if configs.len() > max_steps {
            break;
        }
        let owner = game.owner(current.location);
        let enabled = game.enabled_edges(&current);
        if enabled.is_empty() {
            return Play {
                configs,
                status: PlayStatus::Deadlock(owner),
            };
        }
        let mover = match owner {
            Player::Reacher => reacher,
            Player::Opponent => opponent,
        };
        let chosen = match mover {
            Mover::Strategy(s) => s.get(&current).filter(|e| enabled.contains(e)),
            Mover::Random => None,
        };
        let edge = chosen.unwrap_or_else(|| *enabled.choose(&mut rng).expect("non-empty"));
        current = game.step(&current, edge).expect("enabled edge");
        configs.push(current.clone());
    }
    Play {
        configs,
        status: PlayStatus::StepLimit,
    }
}

/// Pairs `(winning, losing)` at one location where the losing configuration has
/// the smaller counter, i.e. counterexamples to downward closure.
pub fn check_downward_closure(
    game: &GameInstance,
    region: &RegionResult,
) -> Result<Vec<(Configuration, Configuration)>> {
    let zero_single = matches!(&game.objective, Objective::SingleConfig(c) if c.counters == [0]);
    if game.semantics != Semantics::NonBlockingVass || game.dimension() != 1 || !zero_single {
        return Err(precondition(
            "downward closure applies to one-dimensional non-blocking VASS with a zero objective",
        ));
    }
    let mut by_location: BTreeMap<usize, Vec<(i64, Verdict)>> = BTreeMap::new();
    for (c, v) in region.iter() {
        by_location
            .entry(c.location)
            .or_default()
            .push((c.counters[0], v));
    }
    let mut violations = Vec::new();
    for (q, column) in by_location {
        for &(x, v) in &column {
            if v != Verdict::Win {
                continue;
            }
            for &(y, w) in &column {
                if y < x && w == Verdict::Lose {
                    violations.push((
                        Configuration::new(q, vec![x]),
                        Configuration::new(q, vec![y]),
                    ));
                }
            }
        }
    }
    Ok(violations)
}

/// One line per in-window configuration: `config <loc> <x…> win|lose|unknown`.
pub fn region_dump(game: &GameInstance, region: &RegionResult) -> String {
    let mut out = String::new();
    for (c, v) in region.iter() {
        out.push_str("config ");
        out.push_str(game.system.name(c.location));
        for x in &c.counters {
            out.push(' ');
            out.push_str(&x.to_string());
        }
        out.push(' ');
        out.push_str(v.keyword());
        out.push('\n');
    }
    out
}

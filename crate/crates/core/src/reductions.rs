//! Winner-preserving transformations between counter reachability games.
//!
//! Each construction takes a [`GameInstance`] in its precondition class and
//! returns a new instance plus a map from source configurations to target
//! configurations. Original locations keep their indices wherever the target
//! contains them; gadget locations are appended after them with fresh names.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{precondition, GameError, Result};
use crate::game::{Configuration, CounterSystem, GameInstance, Objective, Player, Semantics};

/// How source configurations map to target configurations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigMap {
    /// Counters unchanged, location `q` becomes `locations[q]`.
    Relabel(Vec<usize>),
    /// Location unchanged, counters minus the offset.
    Shift(Vec<i64>),
    /// Nonnegative value `x` at `q` goes to `(plus[q], x)`, negative to `(minus[q], -x)`.
    SignSplit { plus: Vec<usize>, minus: Vec<usize> },
    /// First map, then second map.
    Composed(Box<ConfigMap>, Box<ConfigMap>),
}

impl ConfigMap {
    fn identity(n: usize) -> ConfigMap {
        ConfigMap::Relabel((0..n).collect())
    }

    pub fn compose(first: ConfigMap, second: ConfigMap) -> ConfigMap {
        ConfigMap::Composed(Box::new(first), Box::new(second))
    }

    pub fn apply(&self, config: &Configuration) -> Configuration {
        match self {
            ConfigMap::Composed(first, second) => second.apply(&first.apply(config)),
            ConfigMap::Relabel(map) => {
                Configuration::new(map[config.location], config.counters.clone())
            }
            ConfigMap::Shift(offset) => Configuration::new(
                config.location,
                config
                    .counters
                    .iter()
                    .zip(offset)
                    .map(|(x, o)| x - o)
                    .collect(),
            ),
            ConfigMap::SignSplit { plus, minus } => {
                let x = config.counters[0];
                if x >= 0 {
                    Configuration::new(plus[config.location], vec![x])
                } else {
                    Configuration::new(minus[config.location], vec![-x])
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionOutput {
    pub game: GameInstance,
    pub config_map: ConfigMap,
    /// `(gadget role, generated location name)` in creation order.
    pub fresh_names: Vec<(String, String)>,
    /// Deviations and choices applied, one sentence each.
    pub notes: Vec<String>,
}

impl ReductionOutput {
    pub fn map_config(&self, config: &Configuration) -> Configuration {
        self.config_map.apply(config)
    }

    fn identity(game: &GameInstance) -> ReductionOutput {
        ReductionOutput {
            config_map: ConfigMap::identity(game.system.num_locations()),
            game: game.clone(),
            fresh_names: Vec::new(),
            notes: Vec::new(),
        }
    }
}

pub fn map_config(output: &ReductionOutput, config: &Configuration) -> Configuration {
    output.map_config(config)
}

/// Which reading of the two gadgets with conflicting descriptions to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum GadgetVariant {
    /// Follow the drawn gadgets (default).
    #[default]
    Figure,
    /// Follow the enumerated edge lists literally.
    Align,
}

impl FromStr for GadgetVariant {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "figure" => Ok(GadgetVariant::Figure),
            "align" => Ok(GadgetVariant::Align),
            other => Err(GameError::Usage(format!("unknown variant `{other}`"))),
        }
    }
}

impl fmt::Display for GadgetVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GadgetVariant::Figure => "figure",
            GadgetVariant::Align => "align",
        })
    }
}

/// Appends fresh locations to a system while keeping names unique.
struct Builder {
    system: CounterSystem,
    taken: HashSet<String>,
    fresh_names: Vec<(String, String)>,
}

impl Builder {
    /// Starts from a copy of the source locations (without edges).
    fn with_locations(source: &CounterSystem) -> Builder {
        let mut system = CounterSystem::new(source.dimension);
        system.locations = source.locations.clone();
        Builder {
            taken: source.locations.iter().map(|l| l.name.clone()).collect(),
            system,
            fresh_names: Vec::new(),
        }
    }

    /// Starts empty; source names are still reserved.
    fn empty(source: &CounterSystem) -> Builder {
        let mut b = Builder::with_locations(source);
        b.system.locations.clear();
        b
    }

    fn fresh(&mut self, role: impl Into<String>, base: impl Into<String>, owner: Player) -> usize {
        let base = base.into();
        let mut name = base.clone();
        while self.taken.contains(&name) {
            name.push('_');
        }
        self.taken.insert(name.clone());
        self.fresh_names.push((role.into(), name.clone()));
        self.system.add_location(name, owner)
    }

    fn edge(&mut self, src: usize, label: Vec<i64>, dst: usize) {
        self.system.add_edge(src, label, dst);
    }

    fn finish(
        self,
        semantics: Semantics,
        objective: Objective,
        initial: Configuration,
        config_map: ConfigMap,
        notes: Vec<String>,
    ) -> Result<ReductionOutput> {
        let game = GameInstance::new(self.system, semantics, objective, initial)?;
        Ok(ReductionOutput {
            game,
            config_map,
            fresh_names: self.fresh_names,
            notes,
        })
    }
}

fn single_objective(game: &GameInstance) -> Result<&Configuration> {
    match &game.objective {
        Objective::SingleConfig(c) => Ok(c),
        _ => Err(precondition("objective must be a single configuration")),
    }
}

fn require_semantics(game: &GameInstance, semantics: Semantics) -> Result<()> {
    if game.semantics != semantics {
        return Err(precondition(format!(
            "expected {semantics} semantics, got {}",
            game.semantics
        )));
    }
    Ok(())
}

fn require_dimension(game: &GameInstance, d: usize) -> Result<()> {
    if game.dimension() != d {
        return Err(precondition(format!(
            "expected dimension {d}, got {}",
            game.dimension()
        )));
    }
    Ok(())
}

fn require_reacher_objective(game: &GameInstance, value: Option<i64>) -> Result<Configuration> {
    let target = single_objective(game)?.clone();
    if game.owner(target.location) != Player::Reacher {
        return Err(precondition(
            "objective location must be owned by Reacher (normalize it first)",
        ));
    }
    if let Some(v) = value {
        if target.counters != [v] {
            return Err(precondition(format!("objective counter value must be {v}")));
        }
    }
    Ok(target)
}

fn require_short_range(game: &GameInstance) -> Result<()> {
    if !game.system.is_short_range() {
        return Err(precondition("counter system must be short-ranged"));
    }
    Ok(())
}

fn unit(d: usize, i: usize, value: i64) -> Vec<i64> {
    let mut v = vec![0; d];
    v[i] = value;
    v
}

/// Makes the objective location Reacher-owned by routing every edge into it
/// through a fresh Reacher location with a single zero edge onwards.
pub fn normalize_reacher_objective(game: &GameInstance) -> Result<ReductionOutput> {
    let target = single_objective(game)?.clone();
    let qf = target.location;
    if game.owner(qf) == Player::Reacher {
        return Ok(ReductionOutput::identity(game));
    }
    let src = &game.system;
    let mut b = Builder::with_locations(src);
    let goal = b.fresh("q_f'", format!("goal.{}", src.name(qf)), Player::Reacher);
    for e in &src.edges {
        let dst = if e.dst == qf { goal } else { e.dst };
        b.edge(e.src, e.label.clone(), dst);
    }
    b.edge(goal, vec![0; src.dimension], qf);
    let mut relabel: Vec<usize> = (0..src.num_locations()).collect();
    relabel[qf] = goal;
    let map = ConfigMap::Relabel(relabel);
    let initial = map.apply(&game.initial);
    let notes = vec![format!(
        "objective location {} is Opponent-owned; its incoming edges now enter Reacher location {} first",
        src.name(qf),
        b.system.name(goal)
    )];
    b.finish(
        game.semantics,
        Objective::SingleConfig(Configuration::new(goal, target.counters)),
        initial,
        map,
        notes,
    )
}

/// Under integer semantics, translates initial and objective vectors so that
/// the objective vector becomes zero.
pub fn shift_objective_to_zero(game: &GameInstance) -> Result<ReductionOutput> {
    require_semantics(game, Semantics::Z)?;
    let target = single_objective(game)?.clone();
    if target.counters.iter().all(|&x| x == 0) {
        return Ok(ReductionOutput::identity(game));
    }
    let map = ConfigMap::Shift(target.counters.clone());
    let initial = map.apply(&game.initial);
    let objective = map.apply(&target);
    let out = GameInstance::new(
        game.system.clone(),
        game.semantics,
        Objective::SingleConfig(objective),
        initial,
    )?;
    Ok(ReductionOutput {
        game: out,
        config_map: map,
        fresh_names: Vec::new(),
        notes: vec![format!("shifted counters by {:?}", target.counters)],
    })
}

/// Replaces every edge whose label has a component of absolute value `m >= 2`
/// by a chain of `m` unit steps through fresh locations owned by the source's
/// owner.
pub fn split_to_short_range(game: &GameInstance) -> Result<ReductionOutput> {
    let src = &game.system;
    let mut b = Builder::with_locations(src);
    for (ei, e) in src.edges.iter().enumerate() {
        let m = e.label.iter().map(|x| x.abs()).max().unwrap_or(0);
        if m <= 1 {
            b.edge(e.src, e.label.clone(), e.dst);
            continue;
        }
        let owner = src.owner(e.src);
        let step = |k: i64| -> Vec<i64> {
            e.label
                .iter()
                .map(|&v| if k <= v.abs() { v.signum() } else { 0 })
                .collect()
        };
        let mut prev = e.src;
        for k in 1..m {
            let mid = b.fresh(format!("chain[{ei}][{k}]"), format!("mid.{ei}.{k}"), owner);
            b.edge(prev, step(k), mid);
            prev = mid;
        }
        b.edge(prev, step(m), e.dst);
    }
    b.finish(
        game.semantics,
        game.objective.clone(),
        game.initial.clone(),
        ConfigMap::identity(src.num_locations()),
        Vec::new(),
    )
}

/// VASS to integer semantics: edges that may decrement go through a test
/// location whose owner can punish a negative counter via the check gadgets.
pub fn vass_to_z(game: &GameInstance, variant: GadgetVariant) -> Result<ReductionOutput> {
    require_semantics(game, Semantics::Vass)?;
    let target = require_reacher_objective(game, None)?;
    let src = &game.system;
    let d = src.dimension;
    let mut b = Builder::with_locations(src);

    let mut test = vec![None; src.edges.len()];
    for (ei, e) in src.edges.iter().enumerate() {
        if e.label.iter().any(|&x| x < 0) {
            let owner = src.owner(e.src).adversary();
            test[ei] = Some(b.fresh(format!("test_e[{ei}]"), format!("test.{ei}"), owner));
        }
    }
    let check = b.fresh("check", "chk", Player::Reacher);
    let check_i: Vec<usize> = (1..=d)
        .map(|i| b.fresh(format!("check_{i}"), format!("chk.{i}"), Player::Reacher))
        .collect();
    let bottom = b.fresh("bot", "bot", Player::Reacher);

    for (ei, e) in src.edges.iter().enumerate() {
        let Some(t) = test[ei] else {
            b.edge(e.src, e.label.clone(), e.dst);
            continue;
        };
        b.edge(e.src, e.label.clone(), t);
        b.edge(t, vec![0; d], e.dst);
        match src.owner(e.src) {
            Player::Reacher => b.edge(t, vec![0; d], check),
            Player::Opponent => {
                for (i, &ci) in check_i.iter().enumerate() {
                    let entry = match variant {
                        GadgetVariant::Figure => unit(d, i, 1),
                        GadgetVariant::Align => vec![0; d],
                    };
                    b.edge(t, entry, ci);
                }
            }
        }
    }
    for i in 0..d {
        b.edge(check, unit(d, i, -1), check);
    }
    for (i, &ci) in check_i.iter().enumerate() {
        for j in (0..d).filter(|&j| j != i) {
            b.edge(ci, unit(d, j, -1), ci);
        }
        for j in 0..d {
            b.edge(ci, unit(d, j, 1), ci);
        }
    }
    b.edge(
        target.location,
        target.counters.iter().map(|x| -x).collect(),
        bottom,
    );
    b.edge(bottom, vec![0; d], bottom);
    b.edge(check, vec![0; d], bottom);
    for &ci in &check_i {
        b.edge(ci, vec![0; d], bottom);
    }

    let notes = vec![match variant {
        GadgetVariant::Figure => {
            "check_i entry edges increment coordinate i (drawn gadget)".to_string()
        }
        GadgetVariant::Align => {
            "check_i entry edges carry the zero label (edge list as enumerated)".to_string()
        }
    }];
    b.finish(
        Semantics::Z,
        Objective::SingleConfig(Configuration::new(bottom, vec![0; d])),
        game.initial.clone(),
        ConfigMap::identity(src.num_locations()),
        notes,
    )
}

/// Two-dimensional VASS with an axis-zero objective to a single objective
/// `(⊥, (0,0))`.
pub fn axis_zero_to_single(game: &GameInstance) -> Result<ReductionOutput> {
    require_dimension(game, 2)?;
    require_semantics(game, Semantics::Vass)?;
    let Objective::AxisZero(qz) = &game.objective else {
        return Err(precondition("objective must be axiszero"));
    };
    if qz.is_empty() {
        return Err(precondition("axiszero location set is empty"));
    }
    if qz.iter().any(|&q| game.owner(q) != Player::Reacher) {
        return Err(precondition("axiszero locations must be Reacher-owned"));
    }
    let src = &game.system;
    let mut b = Builder::with_locations(src);
    let zero1 = b.fresh("empty_1", "zero.1", Player::Reacher);
    let zero2 = b.fresh("empty_2", "zero.2", Player::Reacher);
    let bottom = b.fresh("bot", "bot", Player::Reacher);
    for e in &src.edges {
        b.edge(e.src, e.label.clone(), e.dst);
    }
    for &q in qz {
        b.edge(q, vec![0, 0], zero1);
        b.edge(q, vec![0, 0], zero2);
    }
    b.edge(zero1, vec![-1, 0], zero1);
    b.edge(zero2, vec![0, -1], zero2);
    b.edge(zero1, vec![0, 0], bottom);
    b.edge(zero2, vec![0, 0], bottom);
    b.edge(bottom, vec![0, 0], bottom);
    b.finish(
        Semantics::Vass,
        Objective::SingleConfig(Configuration::new(bottom, vec![0, 0])),
        game.initial.clone(),
        ConfigMap::identity(src.num_locations()),
        Vec::new(),
    )
}

/// One-dimensional integer semantics to VASS: a plus copy for nonnegative
/// values and a mirrored minus copy for nonpositive ones, with guarded
/// crossings at zero.
pub fn z_to_vass(game: &GameInstance) -> Result<ReductionOutput> {
    require_dimension(game, 1)?;
    require_semantics(game, Semantics::Z)?;
    require_short_range(game)?;
    let target = require_reacher_objective(game, Some(0))?;
    let src = &game.system;
    let n = src.num_locations();
    let mut b = Builder::empty(src);
    let plus: Vec<usize> = (0..n)
        .map(|q| {
            b.fresh(
                format!("{}_+", src.name(q)),
                format!("plus.{}", src.name(q)),
                src.owner(q),
            )
        })
        .collect();
    let minus: Vec<usize> = (0..n)
        .map(|q| {
            b.fresh(
                format!("{}_-", src.name(q)),
                format!("minus.{}", src.name(q)),
                src.owner(q),
            )
        })
        .collect();
    let mut cross = vec![None; src.edges.len()];
    for (ei, e) in src.edges.iter().enumerate() {
        if e.label[0].abs() == 1 {
            let owner = src.owner(e.src).adversary();
            cross[ei] = Some(b.fresh(format!("q_e[{ei}]"), format!("edge.{ei}"), owner));
        }
    }
    let no = b.fresh("no", "no", Player::Reacher);
    let bottom = b.fresh("bot", "bot", Player::Reacher);

    for e in &src.edges {
        b.edge(plus[e.src], e.label.clone(), plus[e.dst]);
        b.edge(minus[e.src], vec![-e.label[0]], minus[e.dst]);
    }
    for (ei, e) in src.edges.iter().enumerate() {
        let Some(qe) = cross[ei] else { continue };
        // +1 leaves the minus copy at zero into the plus copy, -1 the reverse
        let (from, to) = if e.label[0] == 1 {
            (minus[e.src], plus[e.dst])
        } else {
            (plus[e.src], minus[e.dst])
        };
        b.edge(from, vec![0], qe);
        match src.owner(e.src) {
            Player::Reacher => b.edge(qe, vec![0], bottom),
            Player::Opponent => b.edge(qe, vec![-1], no),
        }
        b.edge(qe, vec![1], to);
    }
    b.edge(no, vec![-1], no);
    b.edge(no, vec![0], bottom);
    b.edge(plus[target.location], vec![0], bottom);
    b.edge(minus[target.location], vec![0], bottom);
    b.edge(bottom, vec![0], bottom);

    let map = ConfigMap::SignSplit { plus, minus };
    let initial = map.apply(&game.initial);
    b.finish(
        Semantics::Vass,
        Objective::SingleConfig(Configuration::new(bottom, vec![0])),
        initial,
        map,
        Vec::new(),
    )
}

/// One-dimensional non-blocking VASS with objective value 1 to VASS with
/// objective value 0. Each decrement asks Opponent to declare whether the
/// counter is zero; Reacher can check the declaration.
pub fn nbvass_one_to_vass_zero(
    game: &GameInstance,
    variant: GadgetVariant,
) -> Result<ReductionOutput> {
    require_dimension(game, 1)?;
    require_semantics(game, Semantics::NonBlockingVass)?;
    require_short_range(game)?;
    let target = require_reacher_objective(game, Some(1))?;
    let src = &game.system;
    let mut b = Builder::with_locations(src);
    let mut gadget = vec![None; src.edges.len()];
    for (ei, e) in src.edges.iter().enumerate() {
        if e.label[0] == -1 {
            let qe = b.fresh(format!("q_e[{ei}]"), format!("edge.{ei}"), Player::Opponent);
            let pos = b.fresh(
                format!("q_e^>0[{ei}]"),
                format!("gt0.{ei}"),
                Player::Reacher,
            );
            let zero = b.fresh(
                format!("q_e^=0[{ei}]"),
                format!("eq0.{ei}"),
                Player::Reacher,
            );
            gadget[ei] = Some((qe, pos, zero));
        }
    }
    let no = b.fresh("no", "no", Player::Reacher);
    let bottom = b.fresh("bot", "bot", Player::Reacher);

    for (ei, e) in src.edges.iter().enumerate() {
        let Some((qe, pos, zero)) = gadget[ei] else {
            b.edge(e.src, e.label.clone(), e.dst);
            continue;
        };
        b.edge(e.src, vec![0], qe);
        b.edge(qe, vec![0], pos);
        b.edge(qe, vec![0], zero);
        b.edge(zero, vec![0], e.dst);
        b.edge(pos, vec![-1], e.dst);
        b.edge(pos, vec![0], bottom);
        match variant {
            GadgetVariant::Figure => b.edge(zero, vec![-1], no),
            GadgetVariant::Align => b.edge(zero, vec![-1], bottom),
        }
    }
    b.edge(no, vec![-1], no);
    b.edge(no, vec![0], bottom);
    b.edge(target.location, vec![-1], bottom);
    b.edge(bottom, vec![0], bottom);

    let notes = vec![match variant {
        GadgetVariant::Figure => "zero-declaration punishment routes through `no` (drawn gadget)".to_string(),
        GadgetVariant::Align => {
            "zero-declaration punishment goes straight to `bot` (edge list as enumerated; unsound for counter values >= 2)"
                .to_string()
        }
    }];
    b.finish(
        Semantics::Vass,
        Objective::SingleConfig(Configuration::new(bottom, vec![0])),
        game.initial.clone(),
        ConfigMap::identity(src.num_locations()),
        notes,
    )
}

/// One-dimensional VASS with objective value 0 to non-blocking VASS with
/// objective value 1. A decrement that the VASS would disable lets the
/// adversary win through a `no` location.
pub fn vass_zero_to_nbvass_one(game: &GameInstance) -> Result<ReductionOutput> {
    require_dimension(game, 1)?;
    require_semantics(game, Semantics::Vass)?;
    let target = require_reacher_objective(game, Some(0))?;
    let src = &game.system;
    let mut b = Builder::with_locations(src);
    let mut split = vec![None; src.edges.len()];
    for (ei, e) in src.edges.iter().enumerate() {
        if e.label[0] < 0 {
            let owner = src.owner(e.src).adversary();
            split[ei] = Some(b.fresh(format!("q_e[{ei}]"), format!("edge.{ei}"), owner));
        }
    }
    let negative_from = |p: Player| {
        src.edges
            .iter()
            .any(|e| e.label[0] < 0 && src.owner(e.src) == p)
    };
    let no_r = negative_from(Player::Reacher).then(|| b.fresh("no_R", "no.R", Player::Reacher));
    let no_o = negative_from(Player::Opponent).then(|| b.fresh("no_O", "no.O", Player::Reacher));
    let bottom = b.fresh("bot", "bot", Player::Reacher);

    for (ei, e) in src.edges.iter().enumerate() {
        let Some(qe) = split[ei] else {
            b.edge(e.src, e.label.clone(), e.dst);
            continue;
        };
        let v = e.label[0];
        b.edge(e.src, vec![0], qe);
        b.edge(qe, vec![v], e.dst);
        let punish = match src.owner(e.src) {
            Player::Reacher => no_r,
            Player::Opponent => no_o,
        };
        b.edge(qe, vec![v + 1], punish.expect("created when needed"));
    }
    if let Some(no_r) = no_r {
        b.edge(no_r, vec![-1], no_r);
        b.edge(no_r, vec![0], bottom);
    }
    if let Some(no_o) = no_o {
        b.edge(no_o, vec![1], bottom);
    }
    b.edge(target.location, vec![1], bottom);
    b.edge(bottom, vec![0], bottom);
    b.finish(
        Semantics::NonBlockingVass,
        Objective::SingleConfig(Configuration::new(bottom, vec![1])),
        game.initial.clone(),
        ConfigMap::identity(src.num_locations()),
        Vec::new(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reduction {
    NormalizeReacherObjective,
    ShiftObjectiveToZero,
    SplitToShortRange,
    VassToZ,
    AxisZeroToSingle,
    ZToVass,
    NbvassOneToVassZero,
    VassZeroToNbvassOne,
}

impl Reduction {
    pub const ALL: [Reduction; 8] = [
        Reduction::NormalizeReacherObjective,
        Reduction::ShiftObjectiveToZero,
        Reduction::SplitToShortRange,
        Reduction::VassToZ,
        Reduction::AxisZeroToSingle,
        Reduction::ZToVass,
        Reduction::NbvassOneToVassZero,
        Reduction::VassZeroToNbvassOne,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Reduction::NormalizeReacherObjective => "normalize",
            Reduction::ShiftObjectiveToZero => "shift",
            Reduction::SplitToShortRange => "split",
            Reduction::VassToZ => "vass-to-z",
            Reduction::AxisZeroToSingle => "axis-zero",
            Reduction::ZToVass => "z-to-vass",
            Reduction::NbvassOneToVassZero => "nb1-to-vass0",
            Reduction::VassZeroToNbvassOne => "vass0-to-nb1",
        }
    }

    /// Whether the construction expects a Reacher-owned single objective.
    pub fn needs_reacher_objective(self) -> bool {
        matches!(
            self,
            Reduction::VassToZ
                | Reduction::ZToVass
                | Reduction::NbvassOneToVassZero
                | Reduction::VassZeroToNbvassOne
        )
    }

    pub fn apply(self, game: &GameInstance, variant: GadgetVariant) -> Result<ReductionOutput> {
        match self {
            Reduction::NormalizeReacherObjective => normalize_reacher_objective(game),
            Reduction::ShiftObjectiveToZero => shift_objective_to_zero(game),
            Reduction::SplitToShortRange => split_to_short_range(game),
            Reduction::VassToZ => vass_to_z(game, variant),
            Reduction::AxisZeroToSingle => axis_zero_to_single(game),
            Reduction::ZToVass => z_to_vass(game),
            Reduction::NbvassOneToVassZero => nbvass_one_to_vass_zero(game, variant),
            Reduction::VassZeroToNbvassOne => vass_zero_to_nbvass_one(game),
        }
    }
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Reduction {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.replace('_', "-");
        Reduction::ALL
            .into_iter()
            .find(|r| r.name() == key)
            .ok_or_else(|| {
                let names: Vec<_> = Reduction::ALL.iter().map(|r| r.name()).collect();
                GameError::Usage(format!(
                    "unknown reduction `{s}` (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

//! Threshold fixpoint for zero-reachability on one-dimensional non-blocking
//! VASS games.
//!
//! Winning regions are downward closed in the counter value, so a location is
//! summarised by the largest winning value `M_q`. The tables are computed by
//! Jacobi iteration from below; values are clamped at a cap so every run
//! terminates, and the status tells which answers remain sound.
//!
//! Reacher wins from `(q_0, x_0)` iff he can force a configuration `(q, 0)`
//! with `q` in `Q_Z`, the set of locations from which `(q, 0)` is winning:
//! any winning play to `(q_f, 0)` passes only through such locations when it
//! hits zero, and conversely reaching `Q_Z × {0}` lets Reacher continue with
//! the strategy witnessing membership.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{precondition, GameError, Result};
use crate::game::{Configuration, CounterSystem, GameInstance, Objective, Player, Semantics};
use crate::oracle::Verdict;

/// Largest winning counter value at a location.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    /// No counter value wins.
    Bottom,
    /// Exactly the values `0..=n` win.
    Finite(u64),
    /// Every counter value wins.
    Top,
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bottom => f.write_str("bottom"),
            Value::Finite(n) => write!(f, "{n}"),
            Value::Top => f.write_str("top"),
        }
    }
}

impl Value {
    /// Whether counter value `x` is covered.
    pub fn admits(self, x: i64) -> bool {
        match self {
            Value::Bottom => false,
            Value::Finite(n) => x >= 0 && (x as u64) <= n,
            Value::Top => true,
        }
    }
}

/// Threshold at the source of an edge labelled `v` given threshold `m` at its target.
pub fn transfer(m: Value, v: i64) -> Value {
    match m {
        Value::Finite(n) => {
            let t = n as i128 - v as i128;
            if t >= 0 {
                Value::Finite(t as u64)
            } else {
                Value::Bottom
            }
        }
        other => other,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueTable {
    values: Vec<Value>,
}

impl ValueTable {
    pub fn get(&self, location: usize) -> Value {
        self.values[location]
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    /// One `value <loc> bottom|<n>|top` line per location.
    pub fn dump(&self, system: &CounterSystem) -> String {
        let mut out = String::new();
        for (q, v) in self.values.iter().enumerate() {
            out.push_str(&format!("value {} {v}\n", system.name(q)));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixpointParams {
    pub cap: u64,
    pub max_rounds: u64,
    /// Number of cap doublings attempted after a saturated run.
    pub escalation: u32,
}

impl FixpointParams {
    pub fn default_for(system: &CounterSystem, x0: u64) -> FixpointParams {
        let n = system.num_locations() as u64;
        let cap = x0 + n * (1 + system.max_abs_label().unsigned_abs());
        FixpointParams {
            cap,
            max_rounds: n * (cap + 2),
            escalation: 3,
        }
    }

    fn doubled(self) -> FixpointParams {
        FixpointParams {
            cap: self.cap.saturating_mul(2),
            max_rounds: self.max_rounds.saturating_mul(2),
            escalation: self.escalation,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FixpointStatus {
    /// Stable table, nothing clamped: the true least fixpoint.
    ExactFixpoint,
    /// The query is covered; a sound Reacher win.
    EarlyYes,
    /// Clamped or out of rounds: only lower bounds are known.
    CapSaturated,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixpointResult {
    pub table: ValueTable,
    pub status: FixpointStatus,
    pub rounds: u64,
    pub clamped: bool,
}

fn require_one_dimensional(system: &CounterSystem) -> Result<()> {
    if system.dimension != 1 {
        return Err(precondition(format!(
            "fixpoint needs dimension 1, got {}",
            system.dimension
        )));
    }
    Ok(())
}

fn check_locations(system: &CounterSystem, set: &BTreeSet<usize>) -> Result<()> {
    match set.iter().find(|&&q| q >= system.num_locations()) {
        Some(q) => Err(precondition(format!("location index {q} out of range"))),
        None => Ok(()),
    }
}

/// Initial table: `Finite(0)` on the objective set, `Bottom` elsewhere.
pub fn initial_table(system: &CounterSystem, objective_set: &BTreeSet<usize>) -> ValueTable {
    ValueTable {
        values: (0..system.num_locations())
            .map(|q| {
                if objective_set.contains(&q) {
                    Value::Finite(0)
                } else {
                    Value::Bottom
                }
            })
            .collect(),
    }
}

/// One Jacobi sweep. Returns the new table and whether any value was clamped.
pub fn apply_round(system: &CounterSystem, table: &ValueTable, cap: u64) -> (ValueTable, bool) {
    let mut clamped = false;
    let values = (0..system.num_locations())
        .map(|q| {
            let succ = system
                .outgoing(q)
                .map(|(_, e)| transfer(table.get(e.dst), e.label[0]));
            let candidate = match system.owner(q) {
                Player::Reacher => succ.max(),
                Player::Opponent => Some(succ.min().unwrap_or(Value::Top)),
            };
            let mut v = table.get(q).max(candidate.unwrap_or(Value::Bottom));
            if let Value::Finite(n) = v {
                if n > cap {
                    v = Value::Finite(cap);
                    clamped = true;
                }
            }
            v
        })
        .collect();
    (ValueTable { values }, clamped)
}

fn iterate(
    system: &CounterSystem,
    objective_set: &BTreeSet<usize>,
    params: FixpointParams,
    done: impl Fn(&ValueTable) -> bool,
) -> FixpointResult {
    let mut table = initial_table(system, objective_set);
    let mut clamped = false;
    let mut rounds = 0;
    loop {
        if done(&table) {
            return FixpointResult {
                table,
                status: FixpointStatus::EarlyYes,
                rounds,
                clamped,
            };
        }
        if rounds >= params.max_rounds {
            return FixpointResult {
                table,
                status: FixpointStatus::CapSaturated,
                rounds,
                clamped,
            };
        }
        let (next, c) = apply_round(system, &table, params.cap);
        rounds += 1;
        clamped |= c;
        if next == table {
            let status = if clamped {
                FixpointStatus::CapSaturated
            } else {
                FixpointStatus::ExactFixpoint
            };
            return FixpointResult {
                table,
                status,
                rounds,
                clamped,
            };
        }
        table = next;
    }
}

/// Iterates until the query is covered, the table is stable, or the round
/// budget runs out.
pub fn nb_fixpoint(
    system: &CounterSystem,
    objective_set: &BTreeSet<usize>,
    query: &Configuration,
    params: FixpointParams,
) -> Result<FixpointResult> {
    require_one_dimensional(system)?;
    check_locations(system, objective_set)?;
    if query.location >= system.num_locations()
        || query.counters.len() != 1
        || query.counters[0] < 0
    {
        return Err(precondition(
            "query must be a configuration with a nonnegative counter",
        ));
    }
    let x0 = query.counters[0];
    if params.cap < x0 as u64 {
        return Err(GameError::Usage(format!(
            "cap {} is below the queried value {x0}",
            params.cap
        )));
    }
    Ok(iterate(system, objective_set, params, |t| {
        t.get(query.location).admits(x0)
    }))
}

/// Retries saturated runs with doubled cap and round budget.
pub fn nb_fixpoint_escalating(
    system: &CounterSystem,
    objective_set: &BTreeSet<usize>,
    query: &Configuration,
    params: FixpointParams,
) -> Result<FixpointResult> {
    let mut p = params;
    let mut result = nb_fixpoint(system, objective_set, query, p)?;
    for _ in 0..params.escalation {
        if result.status != FixpointStatus::CapSaturated {
            break;
        }
        p = p.doubled();
        result = nb_fixpoint(system, objective_set, query, p)?;
    }
    Ok(result)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QzResult {
    /// Locations `q` where `(q, 0)` is winning.
    pub members: BTreeSet<usize>,
    /// Locations the saturated run could not classify.
    pub undetermined: BTreeSet<usize>,
    pub rounds: u64,
}

/// Locations from which `(q, 0)` wins the game with objective `(q_f, 0)`.
pub fn compute_qz(system: &CounterSystem, q_f: usize) -> Result<QzResult> {
    compute_qz_with(system, q_f, FixpointParams::default_for(system, 0))
}

pub fn compute_qz_with(
    system: &CounterSystem,
    q_f: usize,
    params: FixpointParams,
) -> Result<QzResult> {
    require_one_dimensional(system)?;
    let objective: BTreeSet<usize> = [q_f].into();
    check_locations(system, &objective)?;
    let all_zero = |t: &ValueTable| t.values().iter().all(|v| v.admits(0));
    let mut p = params;
    let mut result = iterate(system, &objective, p, all_zero);
    for _ in 0..params.escalation {
        if result.status != FixpointStatus::CapSaturated {
            break;
        }
        p = p.doubled();
        result = iterate(system, &objective, p, all_zero);
    }
    let (members, rest): (BTreeSet<usize>, BTreeSet<usize>) =
        (0..system.num_locations()).partition(|&q| result.table.get(q).admits(0));
    let undetermined = match result.status {
        FixpointStatus::CapSaturated => rest,
        _ => BTreeSet::new(),
    };
    Ok(QzResult {
        members,
        undetermined,
        rounds: result.rounds,
    })
}

/// VASS game on `Q_Z` where leaving `Q_Z` is redirected to a sink `bot`
/// that can never show the value 0. `initial` is given in source indices.
pub fn build_qz_vass(
    system: &CounterSystem,
    qz: &BTreeSet<usize>,
    initial: &Configuration,
) -> Result<GameInstance> {
    require_one_dimensional(system)?;
    check_locations(system, qz)?;
    if !qz.contains(&initial.location) {
        return Err(precondition("initial location must belong to Q_Z"));
    }
    let mut index = vec![None; system.num_locations()];
    let mut out = CounterSystem::new(1);
    for &q in qz {
        index[q] = Some(out.add_location(system.name(q), system.owner(q)));
    }
    let mut bot_name = String::from("bot");
    while system.location_index(&bot_name).is_some() {
        bot_name.push('_');
    }
    let bot = out.add_location(bot_name, Player::Reacher);
    for e in &system.edges {
        let Some(src) = index[e.src] else { continue };
        match index[e.dst] {
            Some(dst) => out.add_edge(src, e.label.clone(), dst),
            None => out.add_edge(src, vec![1], bot),
        };
    }
    out.add_edge(bot, vec![0], bot);
    let locations = (0..out.num_locations()).collect();
    let start = Configuration::new(
        index[initial.location].expect("checked"),
        initial.counters.clone(),
    );
    GameInstance::new(
        out,
        Semantics::Vass,
        Objective::LocationsAtZero(locations),
        start,
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub verdict: Verdict,
    pub qz: QzResult,
    pub stage: FixpointResult,
    /// Rounds of both stages together.
    pub rounds: u64,
}

/// Decides whether Reacher reaches `(q_f, 0)` from the initial configuration
/// of a one-dimensional non-blocking VASS game.
pub fn decide_nbvass_zero(game: &GameInstance, params: FixpointParams) -> Result<Decision> {
    if game.dimension() != 1 {
        return Err(precondition("dimension must be 1"));
    }
    if game.semantics != Semantics::NonBlockingVass {
        return Err(precondition("semantics must be nbvass"));
    }
    let q_f = match &game.objective {
        Objective::SingleConfig(c) if c.counters == [0] => c.location,
        _ => {
            return Err(precondition(
                "objective must be a single configuration with value 0",
            ))
        }
    };
    let mut qz_params = FixpointParams::default_for(&game.system, 0);
    qz_params.escalation = params.escalation;
    let qz = compute_qz_with(&game.system, q_f, qz_params)?;
    let stage = nb_fixpoint_escalating(&game.system, &qz.members, &game.initial, params)?;
    let verdict = match stage.status {
        FixpointStatus::EarlyYes => Verdict::Win,
        FixpointStatus::ExactFixpoint if qz.undetermined.is_empty() => Verdict::Lose,
        _ => Verdict::Unknown,
    };
    Ok(Decision {
        verdict,
        rounds: qz.rounds + stage.rounds,
        qz,
        stage,
    })
}

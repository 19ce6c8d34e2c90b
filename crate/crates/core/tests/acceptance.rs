//! Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use crg_core::fixpoint::{decide_nbvass_zero, FixpointParams};
use crg_core::harness::{
    default_params, verify_instance, verify_reduction, TrialOutcome, VerificationReport,
};
use crg_core::io::{generate, parse, serialize, GenParams, ObjectiveKind};
use crg_core::oracle::{
    certain_region, check_downward_closure, extract_strategy, is_attractor_fixpoint, region_dump,
    simulate, solve_bounded, BoundaryPolicy, Mover, Verdict, Window,
};
use crg_core::reductions::{GadgetVariant, Reduction};
use crg_core::{
    validate_instance, Configuration, CounterSystem, GameInstance, Objective, Player, Semantics,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.1?}, limit {limit:?}"))
}

fn report_ok(r: &VerificationReport) -> Result<(), String> {
    ensure(r.disagreements == 0, || r.render())?;
    ensure(r.agreements > 0, || {
        format!("{}: every trial was skipped", r.reduction)
    })
}

fn summary(r: &VerificationReport) -> String {
    let wins = r
        .records
        .iter()
        .filter(|t| t.outcome == TrialOutcome::Agree && t.source_verdict == Verdict::Win)
        .count();
    format!(
        "{} {}: {} agree ({wins} win, {} lose) / {} skipped / {} disagree",
        r.reduction,
        r.variant,
        r.agreements,
        r.agreements - wins,
        r.skipped_unknown,
        r.disagreements
    )
}

fn c1_oracle_integrity() -> Outcome {
    let start = Instant::now();
    let mut instances = 0;
    let mut plays = 0usize;
    for (sem, lo, hi) in [
        (Semantics::Z, -16, 16),
        (Semantics::Vass, 0, 32),
        (Semantics::NonBlockingVass, 0, 32),
    ] {
        let mut p = GenParams::new(1, sem);
        p.num_locations = 1..=5;
        let window = Window::uniform(1, lo, hi).unwrap();
        for seed in 0..200 {
            let g = generate(&p, seed).map_err(|e| e.to_string())?;
            let pess = solve_bounded(&g, &window, BoundaryPolicy::Pessimistic)
                .map_err(|e| e.to_string())?;
            let opt = solve_bounded(&g, &window, BoundaryPolicy::Optimistic)
                .map_err(|e| e.to_string())?;
            for ((c, a), (_, b)) in pess.iter().zip(opt.iter()) {
                ensure(a != Verdict::Win || b == Verdict::Win, || {
                    format!("{sem} seed {seed}: bracketing fails at {c:?}")
                })?;
            }
            for (region, policy) in [
                (&pess, BoundaryPolicy::Pessimistic),
                (&opt, BoundaryPolicy::Optimistic),
            ] {
                let fix = is_attractor_fixpoint(&g, region, policy).map_err(|e| e.to_string())?;
                ensure(fix, || {
                    format!("{sem} seed {seed}: {policy:?} region is not a fixpoint")
                })?;
            }
            let certain = certain_region(&g, &window).map_err(|e| e.to_string())?;
            let strategy = extract_strategy(&g, &certain, Player::Reacher);
            let budget = certain.len() + 1;
            for (c, v) in certain.iter() {
                if v != Verdict::Win {
                    continue;
                }
                for k in 0..100u64 {
                    let play = simulate(
                        &g,
                        Mover::Strategy(&strategy),
                        Mover::Random,
                        &c,
                        budget,
                        seed * 1000 + k,
                    );
                    plays += 1;
                    ensure(play.reacher_wins(), || {
                        format!(
                            "{sem} seed {seed}: strategy loses from {c:?} ({:?})",
                            play.status
                        )
                    })?;
                }
            }
            instances += 1;
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{instances} instances, {plays} plays won"))
}

fn c2_vass_to_z() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for d in [1usize, 2] {
        let mut p = default_params(Reduction::VassToZ, d);
        p.num_locations = 1..=4;
        let window = Window::uniform(d, 0, 8).unwrap();
        let r = verify_reduction(
            Reduction::VassToZ,
            GadgetVariant::Figure,
            &p,
            100,
            Some(&window),
            2000,
        )
        .map_err(|e| e.to_string())?;
        report_ok(&r)?;
        for t in &r.records {
            let (q, e) = t.source_size;
            let (q2, e2) = t.target_size;
            ensure(q2 <= d + 2 + q + e, || {
                format!("d={d} seed {:?}: |Q'| = {q2} too large", t.seed)
            })?;
            ensure(e2 <= (d + 2) * e + 2 * d * (d + 1) + 2, || {
                format!("d={d} seed {:?}: |E'| = {e2} too large", t.seed)
            })?;
        }
        parts.push(format!("d={d} {}", summary(&r)));
    }
    within(start, Duration::from_secs(180))?;
    Ok(parts.join("; "))
}

fn c3_axis_zero() -> Outcome {
    let mut p = default_params(Reduction::AxisZeroToSingle, 2);
    p.num_locations = 1..=4;
    let window = Window::uniform(2, 0, 6).unwrap();
    let r = verify_reduction(
        Reduction::AxisZeroToSingle,
        GadgetVariant::Figure,
        &p,
        100,
        Some(&window),
        3000,
    )
    .map_err(|e| e.to_string())?;
    report_ok(&r)?;
    ensure(r.records.iter().all(|t| t.target_short_range), || {
        "short range lost".into()
    })?;
    Ok(summary(&r))
}

fn c4_z_to_vass() -> Outcome {
    let mut p = default_params(Reduction::ZToVass, 1);
    p.num_locations = 1..=4;
    p.value_bound = 4;
    let window = Window::uniform(1, -12, 12).unwrap();
    let r = verify_reduction(
        Reduction::ZToVass,
        GadgetVariant::Figure,
        &p,
        100,
        Some(&window),
        4000,
    )
    .map_err(|e| e.to_string())?;
    report_ok(&r)?;
    ensure(r.records.iter().all(|t| t.target_short_range), || {
        "short range lost".into()
    })?;
    for seed in 4000..4100 {
        let g = generate(&p, seed).map_err(|e| e.to_string())?;
        let out = Reduction::ZToVass
            .apply(&g, GadgetVariant::Figure)
            .map_err(|e| e.to_string())?;
        ensure(
            out.game.semantics == Semantics::Vass && validate_instance(&out.game).is_empty(),
            || format!("seed {seed}: target is not a valid VASS instance"),
        )?;
        ensure(out.game.initial.counters[0] >= 0, || {
            format!("seed {seed}: negative initial counter")
        })?;
    }
    Ok(summary(&r))
}

/// Reacher raises the counter to 2 before a decrement and then needs value 1.
fn crafted_value_two() -> GameInstance {
    let mut s = CounterSystem::new(1);
    let st = s.add_location("s", Player::Reacher);
    let p = s.add_location("p", Player::Reacher);
    let f = s.add_location("f", Player::Reacher);
    s.add_edge(st, vec![1], p);
    s.add_edge(p, vec![-1], f);
    s.add_edge(f, vec![0], f);
    GameInstance::new(
        s,
        Semantics::NonBlockingVass,
        Objective::SingleConfig(Configuration::new(f, vec![1])),
        Configuration::new(st, vec![1]),
    )
    .unwrap()
}

fn c5_nonblocking() -> Outcome {
    let mut parts = Vec::new();

    let mut p = default_params(Reduction::NbvassOneToVassZero, 1);
    p.value_bound = 4;
    let window = Window::uniform(1, 0, 16).unwrap();
    let r = verify_reduction(
        Reduction::NbvassOneToVassZero,
        GadgetVariant::Figure,
        &p,
        100,
        Some(&window),
        5000,
    )
    .map_err(|e| e.to_string())?;
    report_ok(&r)?;
    parts.push(summary(&r));

    let mut p = default_params(Reduction::VassZeroToNbvassOne, 1);
    p.label_bound = 3;
    p.value_bound = 5;
    let window = Window::uniform(1, 0, 20).unwrap();
    let r = verify_reduction(
        Reduction::VassZeroToNbvassOne,
        GadgetVariant::Figure,
        &p,
        100,
        Some(&window),
        6000,
    )
    .map_err(|e| e.to_string())?;
    report_ok(&r)?;
    parts.push(summary(&r));

    let crafted = crafted_value_two();
    let window = Window::uniform(1, 0, 8).unwrap();
    let fig = verify_instance(
        Reduction::NbvassOneToVassZero,
        GadgetVariant::Figure,
        &crafted,
        Some(&window),
        None,
    )
    .map_err(|e| e.to_string())?;
    ensure(fig.outcome == TrialOutcome::Agree, || {
        format!("figure variant on crafted instance: {fig:?}")
    })?;
    let align = verify_instance(
        Reduction::NbvassOneToVassZero,
        GadgetVariant::Align,
        &crafted,
        Some(&window),
        None,
    )
    .map_err(|e| e.to_string())?;
    ensure(align.outcome == TrialOutcome::Disagree, || {
        format!("align variant on crafted instance did not disagree: {align:?}")
    })?;
    parts.push(format!(
        "align variant on crafted instance: source {} vs target {}",
        align.source_verdict.keyword(),
        align.target_verdict.keyword()
    ));
    Ok(parts.join("; "))
}

fn nb_zero_params(label_bound: i64) -> GenParams {
    let mut p = GenParams::new(1, Semantics::NonBlockingVass);
    p.num_locations = 1..=4;
    p.label_bound = label_bound;
    p.objective_value = Some(vec![0]);
    p
}

fn c6_downward_closure() -> Outcome {
    let window = Window::uniform(1, 0, 24).unwrap();
    let mut wins = 0;
    for seed in 0..200 {
        let p = nb_zero_params(1 + (seed % 2) as i64);
        let g = generate(&p, seed).map_err(|e| e.to_string())?;
        let region = certain_region(&g, &window).map_err(|e| e.to_string())?;
        wins += region.count(Verdict::Win);
        let bad = check_downward_closure(&g, &region).map_err(|e| e.to_string())?;
        ensure(bad.is_empty(), || format!("seed {seed}: {:?}", bad[0]))?;
    }
    Ok(format!(
        "200 instances, {wins} certain-Win configurations, no violations"
    ))
}

fn c7_fixpoint_vs_oracle() -> Outcome {
    let mut agree = 0;
    let mut skipped = 0;
    for seed in 0..300u64 {
        let p = nb_zero_params(1 + (seed % 2) as i64);
        let g = generate(&p, 70_000 + seed).map_err(|e| e.to_string())?;
        let window = Window::uniform(1, 0, 24).unwrap();
        let region = certain_region(&g, &window).map_err(|e| e.to_string())?;
        for q in 0..g.system.num_locations() {
            for x0 in 0..=8i64 {
                let mut h = g.clone();
                h.initial = Configuration::new(q, vec![x0]);
                let params = FixpointParams::default_for(&h.system, x0 as u64);
                let d = decide_nbvass_zero(&h, params).map_err(|e| e.to_string())?;
                let o = region.verdict(&h.initial).unwrap();
                if !d.verdict.is_certain() || !o.is_certain() {
                    skipped += 1;
                    continue;
                }
                ensure(d.verdict == o, || {
                    format!(
                        "unsound answer, seed {}: ({q},{x0}) fixpoint {} vs oracle {}\n{}",
                        70_000 + seed,
                        d.verdict.keyword(),
                        o.keyword(),
                        serialize(&h)
                    )
                })?;
                agree += 1;
            }
        }
    }
    ensure(agree > 0, || "no query was certain on both sides".into())?;
    Ok(format!(
        "{agree} agreeing queries, {skipped} skipped, 0 unsound"
    ))
}

fn c8_exponential() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for n in 3..=6u32 {
        let label = 1i64 << n;
        let mut s = CounterSystem::new(1);
        let q0 = s.add_location("q0", Player::Reacher);
        let qf = s.add_location("qf", Player::Reacher);
        s.add_edge(q0, vec![label], qf);
        s.add_edge(qf, vec![-1], qf);
        let g = GameInstance::new(
            s,
            Semantics::NonBlockingVass,
            Objective::SingleConfig(Configuration::new(qf, vec![0])),
            Configuration::new(q0, vec![0]),
        )
        .unwrap();
        let d = decide_nbvass_zero(&g, FixpointParams::default_for(&g.system, 0))
            .map_err(|e| e.to_string())?;
        ensure(d.verdict == Verdict::Win, || {
            format!("n={n}: verdict {}", d.verdict.keyword())
        })?;
        let r = d.rounds as i64;
        ensure(label <= r && r <= label + 2, || {
            format!("n={n}: {r} rounds")
        })?;
        parts.push(format!("n={n}: {r}"));
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!("rounds {}", parts.join(", ")))
}

fn c9_determinism() -> Outcome {
    let mut p = GenParams::new(1, Semantics::Vass);
    p.num_locations = 1..=5;
    for seed in 0..50 {
        let a = serialize(&generate(&p, seed).unwrap());
        let b = serialize(&generate(&p, seed).unwrap());
        ensure(a == b, || format!("seed {seed}: generated files differ"))?;
        let g = parse(&a).map_err(|e| e.to_string())?;
        let w = Window::default_for(&g);
        let d1 = region_dump(&g, &certain_region(&g, &w).unwrap());
        let d2 = region_dump(&g, &certain_region(&g, &w).unwrap());
        ensure(d1 == d2, || format!("seed {seed}: region dumps differ"))?;
    }
    for reduction in Reduction::ALL {
        let p = default_params(reduction, 1);
        let run = || {
            verify_reduction(reduction, GadgetVariant::Figure, &p, 10, None, 99).map(|r| r.render())
        };
        let (a, b) = (
            run().map_err(|e| e.to_string())?,
            run().map_err(|e| e.to_string())?,
        );
        ensure(a == b, || format!("{reduction}: reports differ"))?;
        let g = generate(&p, 5).unwrap();
        let o1 = serialize(
            &reduction
                .apply(&g, GadgetVariant::Figure)
                .map_err(|e| e.to_string())?
                .game,
        );
        let o2 = serialize(
            &reduction
                .apply(&g, GadgetVariant::Figure)
                .map_err(|e| e.to_string())?
                .game,
        );
        ensure(o1 == o2, || format!("{reduction}: outputs differ"))?;
    }
    let mut count = 0;
    for (i, (d, sem, kind)) in [
        (1, Semantics::Z, ObjectiveKind::Single),
        (2, Semantics::Vass, ObjectiveKind::AxisZero),
        (1, Semantics::NonBlockingVass, ObjectiveKind::ZeroSet),
        (3, Semantics::Vass, ObjectiveKind::SingleReacher),
    ]
    .into_iter()
    .enumerate()
    {
        let mut p = GenParams::new(d, sem);
        p.objective_kind = kind;
        p.label_bound = 3;
        for seed in 0..250 {
            let g = generate(&p, 1000 * i as u64 + seed).unwrap();
            let text = serialize(&g);
            let back = parse(&text).map_err(|e| e.to_string())?;
            ensure(back == g && serialize(&back) == text, || {
                format!("roundtrip fails:\n{text}")
            })?;
            count += 1;
        }
    }
    Ok(format!("byte-identical reruns; {count} roundtrips"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 oracle integrity", c1_oracle_integrity),
        ("2 vass-to-z equivalence and size bounds", c2_vass_to_z),
        ("3 axis-zero equivalence", c3_axis_zero),
        ("4 z-to-vass equivalence", c4_z_to_vass),
        ("5 non-blocking equivalences", c5_nonblocking),
        ("6 downward closure", c6_downward_closure),
        ("7 fixpoint pipeline vs oracle", c7_fixpoint_vs_oracle),
        ("8 exponential example", c8_exponential),
        ("9 determinism and roundtrip", c9_determinism),
    ];
    let suite = Instant::now();
    let mut failed = 0;
    for (name, run) in criteria {
        let t = Instant::now();
        match run() {
            Ok(detail) => println!("PASS criterion {name} ({:.2?}): {detail}", t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name} ({:.2?}): {why}", t.elapsed());
            }
        }
    }
    println!(
        "acceptance: {} of 9 criteria passed in {:.1?}",
        9 - failed,
        suite.elapsed()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

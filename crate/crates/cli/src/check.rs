//! Property suites over seeded random models. Each case prints one row
//! `CHECK <suite> <case-id> PASS|FAIL <detail>`.

use clap::ValueEnum;
use fzm_core::approx::{
    approximate_function, quotient_by_signature, signatures, WitnessSynthesizer,
};
use fzm_core::fixtures::{fork, loop_and_chain};
use fzm_core::games::{
    bisim_game, bisim_wins, ef_wins, BisimConfig, EfLimits, Player, WinningSets,
};
use fzm_core::metrics::{
    behavioural_distance_with_depth, depth_tables, game_distance_table, kantorovich_step, ValueGrid,
};
use fzm_core::random::{fol_pool, random_modal, random_model, ModelParams};
use fzm_core::semantics::{
    eval_fol, eval_modal, eval_modal_all, standard_translation, Assignment, StateFunction,
};
use fzm_core::transforms::{locality_check, partial_unravel, unravel, LocalFormula};
use fzm_core::{disjoint_union, Depth, DistanceTable, FolFormula, Model, Truth};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{CheckArgs, CliError, Suite};

const DELTA: Truth = Truth::ratio_const(1, 100);
const APPROX_EPS: Truth = Truth::ratio_const(1, 20);

type Case = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

struct Ctx<'a> {
    args: &'a CheckArgs,
    params: ModelParams,
}

impl Ctx<'_> {
    /// Independent stream per (suite, case).
    fn rng(&self, suite: Suite, case: usize) -> ChaCha8Rng {
        let tag = suite as u64 + 1;
        ChaCha8Rng::seed_from_u64(
            self.args
                .seed
                .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .wrapping_add(tag << 40)
                .wrapping_add(case as u64),
        )
    }
}

pub fn run(args: &CheckArgs) -> Result<(), CliError> {
    if args.max_states == 0 || args.denominator == 0 || !(0.0..=1.0).contains(&args.density) {
        return Err(CliError::Usage(
            "need --max-states ≥ 1, --denominator ≥ 1 and --density in [0,1]".into(),
        ));
    }
    let ctx = Ctx {
        args,
        params: ModelParams {
            max_states: args.max_states,
            atoms: args.atoms,
            density: args.density,
            denominator: args.denominator,
        },
    };
    let suites: Vec<Suite> = match args.suite {
        Some(s) => vec![s],
        None => Suite::value_variants().to_vec(),
    };
    let mut total = (0usize, 0usize);
    let mut summary = Vec::new();
    for suite in suites {
        let name = suite.to_possible_value().unwrap().get_name().to_string();
        let (mut pass, mut fail) = (0, 0);
        for (case, result) in cases(&ctx, suite) {
            match result {
                Ok(detail) => {
                    pass += 1;
                    println!("CHECK {name} {case} PASS {detail}");
                }
                Err(detail) => {
                    fail += 1;
                    println!("CHECK {name} {case} FAIL {detail}");
                }
            }
        }
        summary.push(format!("SUMMARY {name} pass={pass} fail={fail}"));
        total.0 += pass;
        total.1 += fail;
    }
    for line in summary {
        println!("{line}");
    }
    println!("TOTAL pass={} fail={}", total.0, total.1);
    if total.1 > 0 {
        Err(CliError::Failure(format!("{} checks failed", total.1)))
    } else {
        Ok(())
    }
}

fn cases(ctx: &Ctx, suite: Suite) -> Vec<(String, Case)> {
    if suite == Suite::Noninvariance {
        return (0..=4)
            .map(|n| (format!("loop-chain-{n}"), loop_chain(n)))
            .collect();
    }
    let mut out = Vec::new();
    if suite == Suite::Games {
        out.push(("fork".to_string(), fork_games()));
    }
    for i in 0..ctx.args.models {
        let mut rng = ctx.rng(suite, i);
        let case = format!("m{i}");
        let n = ctx.args.max_depth;
        let result = match suite {
            Suite::Ef => ef_case(ctx, &mut rng),
            _ => {
                let m = random_model(&mut rng, &ctx.params);
                match suite {
                    Suite::Coincidence => coincidence(&m, n),
                    Suite::Pseudometric => pseudometric(&m, n),
                    Suite::Invariance => invariance(&m, n, &mut rng),
                    Suite::Approximation => approximation(&m, n, &mut rng),
                    Suite::Locality => locality(&m, n, &mut rng),
                    Suite::Translation => translation(&m, n, &mut rng),
                    Suite::ZeroDistance => zero_distance(&m, n, &mut rng, &ctx.params),
                    Suite::Games => games(&m, &mut rng, &ctx.params),
                    Suite::Ef | Suite::Noninvariance => unreachable!(),
                }
            }
        };
        out.push((case, result));
    }
    out
}

fn coincidence(m: &Model, depth: usize) -> Case {
    let ds = depth_tables(m, depth);
    let mut synth = WitnessSynthesizer::new(m, depth);
    for n in 0..=depth {
        let game = game_distance_table(m, Depth::Bounded(n));
        ensure(game.same_values(&ds[n]), || {
            format!("game distance differs at depth {n}")
        })?;
        if n > 0 {
            let k = kantorovich_step(m, &ds[n - 1]);
            ensure(k.same_values(&ds[n]), || {
                format!("Kantorovich distance differs at depth {n}")
            })?;
        }
        for a in 0..m.num_states() {
            for b in 0..m.num_states() {
                let phi = synth.witness(a, b, n, DELTA);
                let v = eval_modal_all(m, &phi).map_err(|e| e.to_string())?;
                let gap = v.get(a).abs_diff(v.get(b));
                let d = ds[n].get(a, b);
                ensure(
                    phi.rank() <= n && gap <= d && gap.saturating_add(DELTA) >= d,
                    || {
                        format!(
                            "witness for ({},{}) at depth {n} separates by {gap}, distance {d}",
                            m.state_name(a),
                            m.state_name(b)
                        )
                    },
                )?;
            }
        }
    }
    Ok(format!(
        "states={} depth<={depth} game=kantorovich=logical",
        m.num_states()
    ))
}

fn axioms(d: &DistanceTable) -> Result<(), String> {
    let n = d.size();
    for a in 0..n {
        ensure(d.get(a, a).is_zero(), || format!("d({a},{a}) > 0"))?;
        for b in 0..n {
            ensure(d.get(a, b) == d.get(b, a), || {
                format!("asymmetric at ({a},{b})")
            })?;
            for c in 0..n {
                ensure(
                    d.get(a, c) <= d.get(a, b).saturating_add(d.get(b, c)),
                    || format!("triangle inequality fails at ({a},{b},{c})"),
                )?;
            }
        }
    }
    Ok(())
}

fn pseudometric(m: &Model, depth: usize) -> Case {
    let depth = depth.max(1);
    let ds = depth_tables(m, depth);
    let (d, k) = behavioural_distance_with_depth(m);
    for t in ds.iter().chain([&d]) {
        axioms(t)?;
    }
    for n in 0..depth {
        ensure(ds[n].pointwise_le(&ds[n + 1]), || {
            format!("d_{n} exceeds d_{}", n + 1)
        })?;
    }
    ensure(ds[depth].pointwise_le(&d), || {
        format!("d_{depth} exceeds d")
    })?;
    Ok(format!(
        "states={} depth<={depth} stable-at={k}",
        m.num_states()
    ))
}

fn invariance(m: &Model, depth: usize, rng: &mut ChaCha8Rng) -> Case {
    let ds = depth_tables(m, depth);
    let count = 5;
    for _ in 0..count {
        let rank = rng.gen_range(0..=depth);
        let size = rng.gen_range(1..=14);
        let phi = random_modal(rng, m.atoms(), rank, size, 12);
        let v = eval_modal_all(m, &phi).map_err(|e| e.to_string())?;
        for a in 0..m.num_states() {
            for b in 0..m.num_states() {
                ensure(v.get(a).abs_diff(v.get(b)) <= ds[rank].get(a, b), || {
                    format!(
                        "rank-{rank} formula separates ({},{}) beyond d_{rank}",
                        m.state_name(a),
                        m.state_name(b)
                    )
                })?;
            }
        }
    }
    Ok(format!("formulas={count}"))
}

fn approximation(m: &Model, depth: usize, rng: &mut ChaCha8Rng) -> Case {
    let ds = depth_tables(m, depth);
    for (n, d) in ds.iter().enumerate() {
        let x0 = rng.gen_range(0..m.num_states());
        let c = Truth::ratio(rng.gen_range(0..=12), 12);
        let f = StateFunction::new(
            (0..m.num_states())
                .map(|x| c.truncated_sub(d.get(x0, x)))
                .collect(),
        );
        let phi = approximate_function(m, &f, n, APPROX_EPS).map_err(|e| e.to_string())?;
        let err = eval_modal_all(m, &phi)
            .map_err(|e| e.to_string())?
            .sup_distance(&f);
        ensure(phi.rank() <= n && err <= APPROX_EPS, || {
            format!("depth {n}: rank {} error {err}", phi.rank())
        })?;
    }
    Ok(format!("depth<={depth} eps={APPROX_EPS}"))
}

fn locality(m: &Model, depth: usize, rng: &mut ChaCha8Rng) -> Case {
    for k in 0..=depth {
        let phi = random_modal(rng, m.atoms(), k, 12, 12);
        let st = standard_translation(&phi, "x");
        for a in 0..m.num_states() {
            let r =
                locality_check(m, LocalFormula::Modal(&phi), a, k).map_err(|e| e.to_string())?;
            ensure(r.equal(), || {
                format!(
                    "radius {k} at {}: {} vs {}",
                    m.state_name(a),
                    r.full,
                    r.local
                )
            })?;
            if !st.free_vars().is_empty() {
                let r =
                    locality_check(m, LocalFormula::Fol(&st), a, k).map_err(|e| e.to_string())?;
                ensure(r.equal(), || {
                    format!(
                        "translated, radius {k} at {}: {} vs {}",
                        m.state_name(a),
                        r.full,
                        r.local
                    )
                })?;
            }
        }
    }
    Ok(format!("radius<={depth}"))
}

fn translation(m: &Model, depth: usize, rng: &mut ChaCha8Rng) -> Case {
    let count = 5;
    for _ in 0..count {
        let rank = rng.gen_range(0..=depth);
        let phi = random_modal(rng, m.atoms(), rank, 14, 12);
        let st = standard_translation(&phi, "x");
        for a in 0..m.num_states() {
            let modal = eval_modal(m, &phi, a).map_err(|e| e.to_string())?;
            let fol = eval_fol(m, &st, &Assignment::single("x", a)).map_err(|e| e.to_string())?;
            ensure(modal == fol, || {
                format!("at {}: {modal} vs {fol}", m.state_name(a))
            })?;
        }
    }
    Ok(format!("formulas={count}"))
}

fn ef_case(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Case {
    let params = ModelParams {
        max_states: ctx.params.max_states.min(4),
        ..ctx.params
    };
    let m = random_model(rng, &params);
    let n = random_model(rng, &params);
    let (a, b) = (
        rng.gen_range(0..m.num_states()),
        rng.gen_range(0..n.num_states()),
    );
    let grid = ValueGrid::of_values(m.constants().chain(n.constants()));
    let mut found = Vec::new();
    for rounds in 0..=ctx.args.max_depth.min(2) {
        let mut least = None;
        for eps in grid.points() {
            let out = ef_wins(&m, &n, &[a], &[b], eps, rounds, EfLimits::default())
                .map_err(|e| e.to_string())?;
            if out.winner == Player::Duplicator {
                least = Some(eps);
                break;
            }
        }
        let Some(eps) = least else {
            found.push(format!("r{rounds}=none"));
            continue;
        };
        for phi in fol_pool(m.atoms(), &["x".to_string()], rounds) {
            let va = eval_fol(&m, &phi, &Assignment::single("x", a)).map_err(|e| e.to_string())?;
            let vb = eval_fol(&n, &phi, &Assignment::single("x", b)).map_err(|e| e.to_string())?;
            ensure(va.abs_diff(vb) <= eps, || {
                format!(
                    "{} rounds at ε={eps}: {} differs by {}",
                    rounds,
                    show_fol(&phi),
                    va.abs_diff(vb)
                )
            })?;
        }
        found.push(format!("r{rounds}={eps}"));
    }
    Ok(found.join(" "))
}

fn show_fol(phi: &FolFormula) -> String {
    fzm_core::syntax::print_fol(phi)
}

fn root_distance(m: &Model, a: usize, other: &Model, b: usize, depth: Depth) -> Truth {
    let (u, inj) = disjoint_union(m, other).expect("same atoms");
    let d = match depth {
        Depth::Bounded(n) => depth_tables(&u, n).pop().unwrap(),
        Depth::Unbounded => behavioural_distance_with_depth(&u).0,
    };
    d.get(inj.left[a], inj.right[b])
}

fn zero_distance(m: &Model, depth: usize, rng: &mut ChaCha8Rng, params: &ModelParams) -> Case {
    let other = random_model(rng, params);
    let (u, inj) = disjoint_union(m, &other).map_err(|e| e.to_string())?;
    for a in 0..m.num_states() {
        let d = root_distance(m, a, &u, inj.left[a], Depth::Unbounded);
        ensure(d.is_zero(), || {
            format!("injection of {} at distance {d}", m.state_name(a))
        })?;
        for k in 0..=depth {
            let tree = unravel(m, a, k).map_err(|e| e.to_string())?;
            let d = root_distance(m, a, &tree.model, tree.root, Depth::Bounded(k));
            ensure(d.is_zero(), || {
                format!(
                    "unravelling of {} to depth {k} at distance {d}",
                    m.state_name(a)
                )
            })?;
        }
        let p = partial_unravel(m, a, 1).map_err(|e| e.to_string())?;
        let d = root_distance(m, a, &p.model, p.root, Depth::Unbounded);
        ensure(d.is_zero(), || {
            format!("partial unravelling of {} at distance {d}", m.state_name(a))
        })?;
    }
    let ds = depth_tables(m, depth);
    for n in 0..=depth {
        let sigs = signatures(m, n);
        for a in 0..m.num_states() {
            for b in 0..m.num_states() {
                ensure(sigs[a] != sigs[b] || ds[n].get(a, b).is_zero(), || {
                    format!("equal depth-{n} signatures at distance {}", ds[n].get(a, b))
                })?;
            }
        }
        let q = quotient_by_signature(m, n);
        for a in 0..m.num_states() {
            let d = root_distance(m, a, &q.model, q.projection[a], Depth::Bounded(n));
            ensure(d.is_zero(), || {
                format!(
                    "projection of {} at depth {n} at distance {d}",
                    m.state_name(a)
                )
            })?;
        }
    }
    Ok(format!("states={} depth<={depth}", m.num_states()))
}

fn games(m: &Model, rng: &mut ChaCha8Rng, params: &ModelParams) -> Case {
    let other = random_model(rng, params);
    let (u, inj) = disjoint_union(m, &other).map_err(|e| e.to_string())?;
    for a in 0..m.num_states() {
        for eps in [Truth::ratio(1, 100), Truth::ratio(1, 1000)] {
            let g = bisim_game(&u, inj.left[a], inj.left[a], eps, Depth::Unbounded);
            ensure(g.winner() == Player::Duplicator, || {
                format!("{} against itself at ε={eps}", m.state_name(a))
            })?;
            let g = bisim_wins(
                m,
                &u,
                m.state_name(a),
                u.state_name(inj.left[a]),
                eps,
                Depth::Unbounded,
            )
            .map_err(|e| e.to_string())?;
            ensure(g.winner() == Player::Duplicator, || {
                format!("injection of {} at ε={eps}", m.state_name(a))
            })?;
        }
    }
    let n = m.num_states();
    let grid = ValueGrid::of_model(m).with_midpoints();
    let e1 = grid[rng.gen_range(0..grid.len())];
    let e2 = grid[rng.gen_range(0..grid.len())];
    let w1 = WinningSets::solve(m, e1, Depth::Unbounded);
    let w2 = WinningSets::solve(m, e2, Depth::Unbounded);
    let w12 = WinningSets::solve(m, e1.saturating_add(e2), Depth::Unbounded);
    ensure(w1.stabilized_at().is_some_and(|k| k <= n * n), || {
        "winning sets did not stabilise".into()
    })?;
    for k in 0..w1.max_depth() {
        let shrinks = w1
            .level(k)
            .iter()
            .zip(w1.level(k + 1))
            .all(|(x, y)| *x || !*y);
        ensure(shrinks, || format!("winning set grows from depth {k}"))?;
    }
    for a in 0..n {
        for b in 0..n {
            let c1 = BisimConfig::new(a, b);
            if w1.wins_unbounded(c1) && e1 <= e2 {
                ensure(w2.wins_unbounded(c1), || {
                    format!("not monotone in ε at ({a},{b})")
                })?;
            }
            for c in 0..n {
                if w1.wins_unbounded(c1) && w2.wins_unbounded(BisimConfig::new(b, c)) {
                    ensure(w12.wins_unbounded(BisimConfig::new(a, c)), || {
                        format!("strategies do not compose at ({a},{b},{c})")
                    })?;
                }
            }
        }
    }
    Ok(format!("eps={e1},{e2}"))
}

fn fork_games() -> Case {
    let m = fork();
    let win = |eps| bisim_game(&m, 0, 3, eps, Depth::Bounded(2)).winner();
    ensure(win(Truth::ratio(1, 5)) == Player::Duplicator, || {
        "Spoiler wins at ε=1/5".into()
    })?;
    ensure(win(Truth::ratio(19, 100)) == Player::Spoiler, || {
        "Duplicator wins at ε=19/100".into()
    })?;
    ensure(
        bisim_game(&m, 0, 3, Truth::ZERO, Depth::Bounded(0)).winner() == Player::Duplicator,
        || "Spoiler wins with no rounds".into(),
    )?;
    Ok("s1,s4 depth 2: Duplicator at 1/5, Spoiler at 19/100".into())
}

fn loop_chain(n: usize) -> Case {
    let m = loop_and_chain(n + 1);
    let d = depth_tables(&m, n).pop().unwrap();
    ensure(d.get(0, 1).is_zero(), || {
        format!("d_{n}(loop, c0) = {}", d.get(0, 1))
    })?;
    let rxx = FolFormula::rel("x", "x");
    let at = |s| eval_fol(&m, &rxx, &Assignment::single("x", s)).unwrap();
    let gap = at(0).abs_diff(at(1));
    ensure(gap == Truth::ONE, || format!("R(x,x) gap {gap}"))?;
    Ok(format!("d_{n}=0 R(x,x): loop=1 c0=0"))
}

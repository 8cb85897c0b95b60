use std::fs;
use std::io::Read;
use std::path::Path;

use fzm_core::approx::{
    approximate_function, quotient_by_signature, signature, ApproxError, WitnessSynthesizer,
};
use fzm_core::games::{
    bisim_game, bisim_wins, ef_wins, game_trace, EfLimits, GameOutcome, ScriptMove, Side,
    SpoilerMove,
};
use fzm_core::metrics::{
    behavioural_distance_with_depth, depth_distance, game_distance_table, kantorovich_step,
    kantorovich_table,
};
use fzm_core::model::{LEFT_TAG, RIGHT_TAG};
use fzm_core::semantics::{eval_fol, eval_modal, standard_translation, Assignment};
use fzm_core::syntax::{
    parse_fol, parse_modal, parse_model, parse_state_function, print_fol, print_modal, print_model,
};
use fzm_core::transforms::{
    locality_check, neighbourhood_restrict, partial_unravel, unravel, LocalFormula,
};
use fzm_core::{disjoint_union, Depth, DistanceTable, Model, StateId, Truth};

use crate::{
    check, ApproximateArgs, Cli, CliError, Command, DepthArg, DistanceArgs, EvalArgs, GameArgs,
    LocalityArgs, MethodArg, SignatureArgs, TransformArgs, TransformOp, TranslateArgs,
};

type Result<T> = std::result::Result<T, CliError>;

pub fn run(cli: &Cli) -> Result<()> {
    let out = Output { exact: cli.exact };
    match &cli.command {
        Command::Eval(a) => eval(&out, a),
        Command::Distance(a) => distance(&out, a),
        Command::Game(a) => game(a),
        Command::Check(a) => check::run(a),
        Command::Transform(a) => transform(a),
        Command::Translate(a) => translate(a),
        Command::Approximate(a) => approximate(a),
        Command::Signature(a) => sig(a),
        Command::Locality(a) => locality(&out, a),
    }
}

struct Output {
    exact: bool,
}

impl Output {
    /// `1/5 (0.2)`, or just the rational when the decimal adds nothing.
    fn truth(&self, v: Truth) -> String {
        let exact = v.to_string();
        let dec = v.to_decimal();
        if self.exact || dec == exact {
            exact
        } else {
            format!("{exact} ({dec})")
        }
    }
}

fn load_model(path: &Path) -> Result<Model> {
    let src = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    parse_model(&src).map_err(|e| CliError::Usage(format!("{}:{e}", path.display())))
}

fn state(m: &Model, name: &str) -> Result<StateId> {
    m.require_state(name).map_err(CliError::usage)
}

fn depth_of(d: &DepthArg) -> Depth {
    match d.depth {
        Some(n) if !d.unbounded => Depth::Bounded(n),
        _ => Depth::Unbounded,
    }
}

fn eval(out: &Output, args: &EvalArgs) -> Result<()> {
    let m = load_model(&args.model)?;
    let states: Vec<StateId> = match &args.state {
        Some(s) => vec![state(&m, s)?],
        None => (0..m.num_states()).collect(),
    };
    let values: Vec<Truth> = if args.fol {
        let phi = parse_fol(&args.formula).map_err(CliError::usage)?;
        if let Some(v) = phi.free_vars().into_iter().find(|v| *v != args.var) {
            return Err(CliError::Usage(format!(
                "free variable `{v}` is not bound (use --var)"
            )));
        }
        states
            .iter()
            .map(|&s| eval_fol(&m, &phi, &Assignment::single(args.var.as_str(), s)))
            .collect::<std::result::Result<_, _>>()
            .map_err(CliError::usage)?
    } else {
        let phi = parse_modal(&args.formula).map_err(CliError::usage)?;
        states
            .iter()
            .map(|&s| eval_modal(&m, &phi, s))
            .collect::<std::result::Result<_, _>>()
            .map_err(CliError::usage)?
    };
    if args.state.is_some() {
        println!("{}", out.truth(values[0]));
    } else {
        for (s, v) in states.iter().zip(values) {
            println!("{} {}", m.state_name(*s), out.truth(v));
        }
    }
    Ok(())
}

fn kantorovich_unbounded(m: &Model) -> DistanceTable {
    let mut d = kantorovich_table(m, 0);
    loop {
        let next = kantorovich_step(m, &d);
        if next.same_values(&d) {
            return next;
        }
        d = next;
    }
}

fn distance(out: &Output, args: &DistanceArgs) -> Result<()> {
    let m = load_model(&args.model)?;
    let depth = depth_of(&args.depth);
    let table = match (args.method, depth) {
        (MethodArg::Recurrence, Depth::Bounded(n)) => depth_distance(&m, n),
        (MethodArg::Recurrence, Depth::Unbounded) => behavioural_distance_with_depth(&m).0,
        (MethodArg::Game, d) => game_distance_table(&m, d),
        (MethodArg::Kantorovich, Depth::Bounded(n)) => kantorovich_table(&m, n),
        (MethodArg::Kantorovich, Depth::Unbounded) => kantorovich_unbounded(&m),
    };
    let (a, b) = match (&args.a, &args.b) {
        (Some(a), Some(b)) => (state(&m, a)?, state(&m, b)?),
        _ => {
            print!("{}", table.render());
            return Ok(());
        }
    };
    let d = table.get(a, b);
    println!("{}", out.truth(d));
    if args.witness {
        // the unbounded distance is reached at a finite depth
        let n = match depth {
            Depth::Bounded(n) => n,
            Depth::Unbounded => behavioural_distance_with_depth(&m).1,
        };
        let mut synth = WitnessSynthesizer::new(&m, n);
        let phi = synth.witness(a, b, n, args.delta);
        let gap = eval_modal(&m, &phi, a)
            .map_err(CliError::usage)?
            .abs_diff(eval_modal(&m, &phi, b).map_err(CliError::usage)?);
        println!("witness: {}", print_modal(&phi));
        println!("gap: {}", out.truth(gap));
    }
    Ok(())
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|w| !w.is_empty())
}

fn game(args: &GameArgs) -> Result<()> {
    let left = load_model(&args.model)?;
    let right = match &args.model_b {
        Some(p) => Some(load_model(p)?),
        None => None,
    };
    if args.ef {
        return ef_game(args, &left, right.as_ref().unwrap_or(&left));
    }
    let depth = depth_of(&args.depth);
    let outcome = match &right {
        Some(r) => {
            bisim_wins(&left, r, &args.a, &args.b, args.epsilon, depth).map_err(CliError::usage)?
        }
        None => bisim_game(
            &left,
            state(&left, &args.a)?,
            state(&left, &args.b)?,
            args.epsilon,
            depth,
        ),
    };
    println!("{}", outcome.winner());
    if args.trace {
        let text = match args.script.as_deref() {
            Some("-") => {
                let mut s = String::new();
                std::io::stdin()
                    .read_to_string(&mut s)
                    .map_err(CliError::usage)?;
                s
            }
            Some(s) => s.to_string(),
            None => String::new(),
        };
        let tagged = right.is_some();
        let script = split_list(&text)
            .map(|tok| script_move(&outcome, tagged, tok))
            .collect::<Result<Vec<_>>>()?;
        let transcript = game_trace(&outcome, &script).map_err(CliError::usage)?;
        print!("{transcript}");
    }
    Ok(())
}

/// Parses `L:name` / `R:name` into a move of the losing player.
fn script_move(outcome: &GameOutcome, tagged: bool, tok: &str) -> Result<ScriptMove> {
    let (side, name) = match tok.split_once(':') {
        Some(("L", n)) => (Side::Left, n),
        Some(("R", n)) => (Side::Right, n),
        _ => {
            return Err(CliError::Usage(format!(
                "bad script move `{tok}`, expected L:state or R:state"
            )))
        }
    };
    let full = match (tagged, side) {
        (false, _) => name.to_string(),
        (true, Side::Left) => format!("{name}{LEFT_TAG}"),
        (true, Side::Right) => format!("{name}{RIGHT_TAG}"),
    };
    let target = outcome
        .arena()
        .state_id(&full)
        .ok_or_else(|| CliError::Usage(format!("unknown state `{name}`")))?;
    Ok(match outcome.winner() {
        fzm_core::games::Player::Duplicator => ScriptMove::Spoiler(SpoilerMove { side, target }),
        fzm_core::games::Player::Spoiler => ScriptMove::Reply(target),
    })
}

fn ef_game(args: &GameArgs, left: &Model, right: &Model) -> Result<()> {
    let rounds = args
        .depth
        .depth
        .ok_or_else(|| CliError::Usage("the EF game needs --depth".into()))?;
    let a = split_list(&args.a)
        .map(|s| state(left, s))
        .collect::<Result<Vec<_>>>()?;
    let b = split_list(&args.b)
        .map(|s| state(right, s))
        .collect::<Result<Vec<_>>>()?;
    let out = ef_wins(
        left,
        right,
        &a,
        &b,
        args.epsilon,
        rounds,
        EfLimits::default(),
    )
    .map_err(CliError::usage)?;
    println!("{}", out.winner);
    Ok(())
}

fn need<T: Copy>(v: Option<T>, flag: &str, op: &str) -> Result<T> {
    v.ok_or_else(|| CliError::Usage(format!("--op {op} needs --{flag}")))
}

fn transform(args: &TransformArgs) -> Result<()> {
    let m = load_model(&args.model)?;
    let root = || -> Result<StateId> {
        let name = args
            .root
            .as_deref()
            .ok_or_else(|| CliError::Usage("this operation needs --root".into()))?;
        state(&m, name)
    };
    let result = match args.op {
        TransformOp::Unravel => {
            unravel(&m, root()?, need(args.depth, "depth", "unravel")?)
                .map_err(CliError::usage)?
                .model
        }
        TransformOp::PartialUnravel => {
            partial_unravel(&m, root()?, need(args.depth, "depth", "partial-unravel")?)
                .map_err(CliError::usage)?
                .model
        }
        TransformOp::Restrict => {
            neighbourhood_restrict(&m, &[root()?], need(args.radius, "radius", "restrict")?)
        }
        TransformOp::Quotient => {
            quotient_by_signature(&m, need(args.depth, "depth", "quotient")?).model
        }
        TransformOp::Union => {
            let path = args
                .model_b
                .as_ref()
                .ok_or_else(|| CliError::Usage("--op union needs --model-b".into()))?;
            disjoint_union(&m, &load_model(path)?)
                .map_err(CliError::usage)?
                .0
        }
    };
    print!("{}", print_model(&result));
    Ok(())
}

fn translate(args: &TranslateArgs) -> Result<()> {
    let phi = parse_modal(&args.formula).map_err(CliError::usage)?;
    println!("{}", print_fol(&standard_translation(&phi, &args.var)));
    Ok(())
}

fn approximate(args: &ApproximateArgs) -> Result<()> {
    let m = load_model(&args.model)?;
    let src = fs::read_to_string(&args.fun)
        .map_err(|e| CliError::Usage(format!("{}: {e}", args.fun.display())))?;
    let f = parse_state_function(&m, &src)
        .map_err(|e| CliError::Usage(format!("{}:{e}", args.fun.display())))?;
    if args.epsilon.is_zero() {
        return Err(CliError::Usage("--epsilon must be positive".into()));
    }
    let phi = approximate_function(&m, &f, args.depth, args.epsilon).map_err(|e| match e {
        ApproxError::NotNonExpansive { .. } => CliError::Failure(e.to_string()),
        ApproxError::Arity { .. } => CliError::usage(e),
    })?;
    println!("{}", print_modal(&phi));
    Ok(())
}

fn sig(args: &SignatureArgs) -> Result<()> {
    let m = load_model(&args.model)?;
    println!("{}", signature(&m, state(&m, &args.state)?, args.depth));
    Ok(())
}

fn locality(out: &Output, args: &LocalityArgs) -> Result<()> {
    let m = load_model(&args.model)?;
    let a = state(&m, &args.state)?;
    let report = if args.fol {
        let phi = parse_fol(&args.formula).map_err(CliError::usage)?;
        locality_check(&m, LocalFormula::Fol(&phi), a, args.radius)
    } else {
        let phi = parse_modal(&args.formula).map_err(CliError::usage)?;
        locality_check(&m, LocalFormula::Modal(&phi), a, args.radius)
    }
    .map_err(CliError::usage)?;
    println!("full: {}", out.truth(report.full));
    println!("local: {}", out.truth(report.local));
    println!("equal: {}", report.equal());
    Ok(())
}

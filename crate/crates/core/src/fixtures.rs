//! Small hand-built models used by tests, examples and the `check` harness.

use crate::model::Model;
use crate::truth::Truth;

/// Text of the two-fork example model: `s1` branches to `s2`/`s3` with weight
/// 1/2 each, `s4` branches to `s5` (2/5) and `s6` (3/10).
pub const FORK_TEXT: &str = "\
atoms: p
states: s1 s2 s3 s4 s5 s6
val s1 p 1
val s2 p 1
val s3 p 9/10
val s4 p 1
val s5 p 4/5
val s6 p 9/10
edge s1 s2 1/2
edge s1 s3 1/2
edge s4 s5 2/5
edge s4 s6 3/10
";

pub fn fork() -> Model {
    crate::syntax::parse_model(FORK_TEXT).expect("fork model parses")
}

/// One state `loop` with `R(loop, loop) = 1` and no atoms.
pub fn self_loop() -> Model {
    Model::builder()
        .states(["loop"])
        .edge("loop", "loop", Truth::ONE)
        .build()
        .unwrap()
}

/// A chain `c0 -> c1 -> ... -> c{edges}` of weight-1 edges and no atoms.
pub fn chain(edges: usize) -> Model {
    let mut b = Model::builder().states((0..=edges).map(|i| format!("c{i}")));
    for i in 0..edges {
        b.set_edge_id(i, i + 1, Truth::ONE);
    }
    b.build().unwrap()
}

/// The loop and a chain with `edges` edges in one model; state 0 is `loop`,
/// state 1 is the chain head `c0`.
pub fn loop_and_chain(edges: usize) -> Model {
    let mut b = Model::builder().states(["loop"]);
    b.set_edge_id(0, 0, Truth::ONE);
    let base = b.num_states();
    for i in 0..=edges {
        b.add_state(format!("c{i}")).unwrap();
    }
    for i in 0..edges {
        b.set_edge_id(base + i, base + i + 1, Truth::ONE);
    }
    b.build().unwrap()
}

//! Graphviz output for games and dependency graphs.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::atl::{FormulaArena, Phi};
use crate::edg::{build_graph, Configuration, Edge, Encoder};
use crate::error::ModelError;
use crate::game::{reachable_states, GameStructure, MoveVectors};

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn state_label(game: &dyn GameStructure, q: &[i64]) -> String {
    let vars = game.variable_names();
    let parts: Vec<String> = vars.iter().zip(q).map(|(v, x)| format!("{v}={x}")).collect();
    format!("({})", parts.join(", "))
}

/// The reachable part of `game`: one node per state, one edge per distinct successor,
/// labelled with the move vectors leading there unless `moves` is false.
pub fn cgs_dot(game: &dyn GameStructure, moves: bool, limit: usize) -> Result<String, ModelError> {
    let states = reachable_states(game, limit)?;
    let index: std::collections::HashMap<&[i64], usize> =
        states.iter().enumerate().map(|(i, (q, _))| (q.as_slice(), i)).collect();
    let mut out = String::from("digraph cgs {\n");
    for (i, (q, _)) in states.iter().enumerate() {
        let shape = if i == 0 { ", peripheries=2" } else { "" };
        writeln!(out, "  s{i} [label={}{shape}];", quote(&state_label(game, q))).unwrap();
    }
    for (i, (q, table)) in states.iter().enumerate() {
        let mut by_target: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for v in MoveVectors::new(&table.counts) {
            let j = index[table.successor(&v).as_slice()];
            let names: Vec<String> = v.iter().enumerate().map(|(a, &m)| game.move_name(q, a, m)).collect();
            by_target.entry(j).or_default().push(format!("({})", names.join(", ")));
        }
        for (j, vectors) in by_target {
            if moves {
                writeln!(out, "  s{i} -> s{j} [label={}];", quote(&vectors.join("\n"))).unwrap();
            } else {
                writeln!(out, "  s{i} -> s{j};").unwrap();
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}

/// The dependency graph of `phi` at the initial state. Hyper-edges go through a join point,
/// negation edges are dashed.
pub fn edg_dot(game: &dyn GameStructure, phi: &Phi, limit: usize) -> Result<String, ModelError> {
    let mut arena = FormulaArena::new();
    let f = arena.add(phi);
    let enc = Encoder::new(game, &arena);
    let edg = build_graph(&enc, enc.root(f), limit)?;

    let label = |c: Configuration| {
        let q = enc.state(c.state());
        let formula = arena.render(c.formula(), game);
        match &c {
            Configuration::Pair(..) => format!("⟨{}, {formula}⟩", state_label(game, &q)),
            Configuration::Triple(_, v, _) => {
                let moves: Vec<String> = v
                    .0
                    .iter()
                    .enumerate()
                    .map(|(a, m)| m.map_or("_".to_string(), |m| game.move_name(&q, a, m as usize)))
                    .collect();
                format!("⟨{}, ({}), {formula}⟩", state_label(game, &q), moves.join(", "))
            }
        }
    };

    let mut out = String::from("digraph edg {\n");
    for &c in &edg.configs {
        let extra = if c == edg.root { ", peripheries=2" } else { "" };
        writeln!(out, "  c{} [label={}{extra}];", c.0, quote(&label(enc.configuration(c)))).unwrap();
    }
    for (i, e) in edg.edges.iter().enumerate() {
        match e {
            Edge::Hyper { source, targets, .. } => {
                if targets.is_empty() {
                    writeln!(out, "  e{i} [shape=box, label=\"∅\", width=0.2, height=0.2];").unwrap();
                } else {
                    writeln!(out, "  e{i} [shape=point];").unwrap();
                }
                writeln!(out, "  c{} -> e{i} [arrowhead=none];", source.0).unwrap();
                for t in targets {
                    writeln!(out, "  e{i} -> c{};", t.0).unwrap();
                }
            }
            Edge::Negation { source, target } => {
                writeln!(out, "  c{} -> c{} [style=dashed];", source.0, target.0).unwrap();
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}

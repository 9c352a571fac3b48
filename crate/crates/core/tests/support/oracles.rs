//! Random Java-subset programs and brute-force dependence oracles.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use warnsift_core::context::ast::SourceUnit;
use warnsift_core::context::pdg::Dpg;
use warnsift_core::context::{lower_to_ir, parse_java_subset, IrFunction};

const VARS: [&str; 4] = ["a", "b", "c", "d"];
const OPS: [&str; 4] = ["+", "-", "*", "/"];
const CMPS: [&str; 4] = ["<", "==", "!=", ">="];

fn operand(rng: &mut ChaCha8Rng) -> String {
    if rng.gen_bool(0.75) {
        VARS[rng.gen_range(0..4)].to_string()
    } else {
        rng.gen_range(0..10).to_string()
    }
}

fn stmt(rng: &mut ChaCha8Rng, depth: usize, indent: usize, out: &mut Vec<String>) {
    let pad = "    ".repeat(indent);
    let v = VARS[rng.gen_range(0..4)];
    match rng.gen_range(0..if depth == 0 { 5 } else { 8 }) {
        0 | 1 => {
            let (x, y) = (operand(rng), operand(rng));
            out.push(format!("{pad}{v} = {x} {} {y};", OPS[rng.gen_range(0..4)]));
        }
        2 => out.push(format!("{pad}{v} = {};", operand(rng))),
        3 => out.push(format!("{pad}sink({});", operand(rng))),
        4 => out.push(format!("{pad}{v} = source({});", operand(rng))),
        5 | 6 => {
            let (x, y) = (VARS[rng.gen_range(0..4)], operand(rng));
            let cmp = CMPS[rng.gen_range(0..4)];
            out.push(format!("{pad}if ({x} {cmp} {y}) {{"));
            for _ in 0..rng.gen_range(1..3) {
                stmt(rng, depth - 1, indent + 1, out);
            }
            if rng.gen_bool(0.5) {
                out.push(format!("{pad}}} else {{"));
                stmt(rng, depth - 1, indent + 1, out);
            }
            out.push(format!("{pad}}}"));
        }
        _ => {
            let x = VARS[rng.gen_range(0..4)];
            out.push(format!("{pad}while ({x} < {}) {{", operand(rng)));
            for _ in 0..rng.gen_range(1..3) {
                stmt(rng, depth - 1, indent + 1, out);
            }
            out.push(format!("{pad}}}"));
        }
    }
}

/// Source of a class whose single method `m` has a random body, one
/// statement per line.
pub fn random_source(rng: &mut ChaCha8Rng) -> String {
    let mut body = Vec::new();
    for _ in 0..rng.gen_range(1..7) {
        stmt(rng, 2, 2, &mut body);
    }
    format!(
        "class R {{\n    int m(int a, int b, int c, int d) {{\n{}\n        return a;\n    }}\n}}\n",
        body.join("\n")
    )
}

/// A random program lowered to at most `max_len` instructions.
pub fn random_function(rng: &mut ChaCha8Rng, max_len: usize) -> (SourceUnit, IrFunction) {
    loop {
        let src = random_source(rng);
        let unit = parse_java_subset(&src).expect("generated source parses");
        let f = lower_to_ir(&unit, &unit.methods[0]).expect("generated source lowers");
        if f.len() <= max_len {
            return (unit, f);
        }
    }
}

/// Data edges by path enumeration: `(d, u)` iff `u` reads a variable
/// defined at `d` and some control-flow path from `d` reaches `u` without
/// passing another definition of that variable.
pub fn data_edges_by_paths(f: &IrFunction) -> BTreeSet<(usize, usize)> {
    let n = f.len();
    let mut edges = BTreeSet::new();
    for d in 0..n {
        for var in &f.instructions[d].defs {
            let mut seen = vec![false; n];
            let mut stack: Vec<usize> = f.successors(d);
            while let Some(x) = stack.pop() {
                if seen[x] {
                    continue;
                }
                seen[x] = true;
                if f.instructions[x].uses.contains(var) {
                    edges.insert((d, x));
                }
                if !f.instructions[x].defs.contains(var) {
                    stack.extend(f.successors(x));
                }
            }
        }
    }
    edges
}

/// Reachability matrix of the dependence graph by Floyd–Warshall.
pub fn reachability(g: &Dpg, n: usize) -> Vec<Vec<bool>> {
    let mut r = vec![vec![false; n]; n];
    for &(a, b) in g.data_edges.iter().chain(&g.control_edges) {
        r[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                for j in 0..n {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    r
}

/// Slice by closure: the criterion, every instruction reaching it and every
/// instruction it reaches.
pub fn slice_by_closure(g: &Dpg, f: &IrFunction, lines: &BTreeSet<u32>) -> BTreeSet<usize> {
    let n = f.len();
    let r = reachability(g, n);
    let crit: Vec<usize> = (0..n).filter(|i| lines.contains(&f.instructions[*i].source_line)).collect();
    (0..n)
        .filter(|&i| crit.contains(&i) || crit.iter().any(|&c| r[i][c] || r[c][i]))
        .collect()
}

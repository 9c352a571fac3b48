//! Program dependence graph over an [`IrFunction`].

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use super::ir::IrFunction;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Dpg {
    pub nodes: Vec<usize>,
    /// `(from, to)`: `to` reads a value defined at `from`.
    pub data_edges: BTreeSet<(usize, usize)>,
    /// `(from, to)`: whether `to` executes depends on the branch at `from`.
    pub control_edges: BTreeSet<(usize, usize)>,
}

impl Dpg {
    /// Sources of edges into `n`.
    pub fn predecessors(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        self.data_edges
            .iter()
            .chain(self.control_edges.iter())
            .filter(move |e| e.1 == n)
            .map(|e| e.0)
    }

    pub fn successors(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        self.data_edges
            .iter()
            .chain(self.control_edges.iter())
            .filter(move |e| e.0 == n)
            .map(|e| e.1)
    }
}

/// Definitions reaching the entry of each instruction, by iterative
/// dataflow over the control-flow graph.
pub fn reaching_definitions(f: &IrFunction) -> Vec<BTreeSet<usize>> {
    let n = f.len();
    let mut defs_of: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for ins in &f.instructions {
        for d in &ins.defs {
            defs_of.entry(d.as_str()).or_default().push(ins.index);
        }
    }
    let mut preds = vec![Vec::new(); n];
    for i in 0..n {
        for s in f.successors(i) {
            preds[s].push(i);
        }
    }
    let mut inn: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut out: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..n {
            let mut entry = BTreeSet::new();
            for &p in &preds[i] {
                entry.extend(out[p].iter().copied());
            }
            let ins = &f.instructions[i];
            let mut exit: BTreeSet<usize> = entry
                .iter()
                .copied()
                .filter(|d| f.instructions[*d].defs.is_disjoint(&ins.defs))
                .collect();
            if !ins.defs.is_empty() {
                exit.insert(i);
            }
            if entry != inn[i] || exit != out[i] {
                inn[i] = entry;
                out[i] = exit;
                changed = true;
            }
        }
    }
    inn
}

pub fn build_pdg(f: &IrFunction) -> Dpg {
    let reaching = reaching_definitions(f);
    let mut g = Dpg {
        nodes: (0..f.len()).collect(),
        ..Dpg::default()
    };
    for ins in &f.instructions {
        for &d in &reaching[ins.index] {
            if !f.instructions[d].defs.is_disjoint(&ins.uses) {
                g.data_edges.insert((d, ins.index));
            }
        }
        if let Some(guard) = ins.guard {
            g.control_edges.insert((guard, ins.index));
        }
    }
    g
}

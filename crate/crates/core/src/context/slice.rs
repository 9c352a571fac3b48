//! Bidirectional slicing over the dependence graph.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use super::ir::IrFunction;
use super::pdg::Dpg;
use super::ContextError;

fn closure<I: Iterator<Item = usize>>(
    start: &BTreeSet<usize>,
    mut next: impl FnMut(usize) -> I,
) -> BTreeSet<usize> {
    let mut seen = start.clone();
    let mut stack: Vec<usize> = start.iter().copied().collect();
    while let Some(n) = stack.pop() {
        for m in next(n) {
            if seen.insert(m) {
                stack.push(m);
            }
        }
    }
    seen
}

/// Instructions in the slice: the criterion (every instruction on a
/// criterion line), everything it transitively depends on, and everything
/// transitively depending on it. Data and control edges are followed in
/// both directions.
pub fn slice_indices(
    g: &Dpg,
    f: &IrFunction,
    criterion_lines: &BTreeSet<u32>,
) -> Result<BTreeSet<usize>, ContextError> {
    let criterion: BTreeSet<usize> = f
        .instructions
        .iter()
        .filter(|i| criterion_lines.contains(&i.source_line))
        .map(|i| i.index)
        .collect();
    if criterion.is_empty() {
        return Err(ContextError::EmptyCriterion);
    }
    let mut backward = closure(&criterion, |n| g.predecessors(n));
    let forward = closure(&criterion, |n| g.successors(n));
    backward.extend(forward);
    Ok(backward)
}

/// Canonical IR text of the slice, in program order.
pub fn warning_aware_slice(
    g: &Dpg,
    f: &IrFunction,
    criterion_lines: &BTreeSet<u32>,
) -> Result<String, ContextError> {
    Ok(f.render_canonical(&slice_indices(g, f, criterion_lines)?))
}

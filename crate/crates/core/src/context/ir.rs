//! Typed three-address IR in the style of Jimple.
//!
//! Each instruction performs one operation and defines at most one
//! variable. Compiler temporaries are named `$stackN`. Field locations are
//! tracked as pseudo-variables `base.field` (or `Class.field` for statics)
//! so that loads and stores take part in reaching definitions.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write as _;

pub const TEMP_PREFIX: &str = "$stack";

pub fn is_temp(name: &str) -> bool {
    name.starts_with(TEMP_PREFIX)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InstrKind {
    Assign,
    Unary,
    Binary,
    Invoke,
    FieldAccess,
    ArrayOp,
    Branch,
    Label,
    Return,
    Nop,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Operand {
    Var(String),
    Const(String),
}

impl Operand {
    pub fn var(&self) -> Option<&str> {
        match self {
            Operand::Var(v) => Some(v),
            Operand::Const(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvokeMode {
    Virtual,
    Static,
    Special,
}

impl InvokeMode {
    fn keyword(self) -> &'static str {
        match self {
            InvokeMode::Virtual => "virtualinvoke",
            InvokeMode::Static => "staticinvoke",
            InvokeMode::Special => "specialinvoke",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldRef {
    Instance { base: String, field: String },
    Static { class: String, field: String },
}

impl FieldRef {
    /// Pseudo-variable naming the field location.
    pub fn location(&self) -> String {
        match self {
            FieldRef::Instance { base, field } => format!("{base}.{field}"),
            FieldRef::Static { class, field } => format!("{class}.{field}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Op {
    Copy {
        dst: String,
        src: Operand,
    },
    New {
        dst: String,
        class: String,
    },
    /// `op` is one of `neg`, `not`, `compl`, `lengthof`, `(T)` or
    /// `instanceof T`.
    Unary {
        dst: String,
        op: String,
        src: Operand,
    },
    Binary {
        dst: String,
        lhs: Operand,
        op: String,
        rhs: Operand,
    },
    Invoke {
        dst: Option<String>,
        mode: InvokeMode,
        receiver: Option<String>,
        /// Declared type of the receiver, or the class of a static call.
        owner: Option<String>,
        method: String,
        args: Vec<Operand>,
    },
    FieldLoad {
        dst: String,
        field: FieldRef,
    },
    FieldStore {
        field: FieldRef,
        src: Operand,
    },
    ArrayLoad {
        dst: String,
        array: String,
        index: Operand,
    },
    ArrayStore {
        array: String,
        index: Operand,
        src: Operand,
    },
    NewArray {
        dst: String,
        elem: String,
        size: Operand,
    },
    /// Jump to `target` when `lhs cmp rhs` holds.
    If {
        lhs: Operand,
        cmp: String,
        rhs: Operand,
        target: u32,
    },
    Goto {
        target: u32,
    },
    Label {
        id: u32,
    },
    Return {
        value: Option<Operand>,
    },
    Throw {
        value: Operand,
    },
    Nop,
}

impl Op {
    pub fn kind(&self) -> InstrKind {
        match self {
            Op::Copy { .. } | Op::New { .. } => InstrKind::Assign,
            Op::Unary { .. } => InstrKind::Unary,
            Op::Binary { .. } => InstrKind::Binary,
            Op::Invoke { .. } => InstrKind::Invoke,
            Op::FieldLoad { .. } | Op::FieldStore { .. } => InstrKind::FieldAccess,
            Op::ArrayLoad { .. } | Op::ArrayStore { .. } | Op::NewArray { .. } => InstrKind::ArrayOp,
            Op::If { .. } | Op::Goto { .. } => InstrKind::Branch,
            Op::Label { .. } => InstrKind::Label,
            Op::Return { .. } | Op::Throw { .. } => InstrKind::Return,
            Op::Nop => InstrKind::Nop,
        }
    }

    fn def_use(&self) -> (Option<String>, Vec<String>) {
        let mut uses = Vec::new();
        let operand = |o: &Operand, uses: &mut Vec<String>| {
            if let Operand::Var(v) = o {
                uses.push(v.clone());
            }
        };
        let def = match self {
            Op::Copy { dst, src } | Op::Unary { dst, src, .. } => {
                operand(src, &mut uses);
                Some(dst.clone())
            }
            Op::New { dst, .. } => Some(dst.clone()),
            Op::Binary { dst, lhs, rhs, .. } => {
                operand(lhs, &mut uses);
                operand(rhs, &mut uses);
                Some(dst.clone())
            }
            Op::Invoke { dst, receiver, args, .. } => {
                uses.extend(receiver.iter().cloned());
                for a in args {
                    operand(a, &mut uses);
                }
                dst.clone()
            }
            Op::FieldLoad { dst, field } => {
                if let FieldRef::Instance { base, .. } = field {
                    uses.push(base.clone());
                }
                uses.push(field.location());
                Some(dst.clone())
            }
            Op::FieldStore { field, src } => {
                if let FieldRef::Instance { base, .. } = field {
                    uses.push(base.clone());
                }
                operand(src, &mut uses);
                Some(field.location())
            }
            Op::ArrayLoad { dst, array, index } => {
                uses.push(array.clone());
                operand(index, &mut uses);
                Some(dst.clone())
            }
            Op::ArrayStore { array, index, src } => {
                uses.push(array.clone());
                operand(index, &mut uses);
                operand(src, &mut uses);
                Some(array.clone())
            }
            Op::NewArray { dst, size, .. } => {
                operand(size, &mut uses);
                Some(dst.clone())
            }
            Op::If { lhs, rhs, .. } => {
                operand(lhs, &mut uses);
                operand(rhs, &mut uses);
                None
            }
            Op::Return { value } => {
                if let Some(v) = value {
                    operand(v, &mut uses);
                }
                None
            }
            Op::Throw { value } => {
                operand(value, &mut uses);
                None
            }
            Op::Goto { .. } | Op::Label { .. } | Op::Nop => None,
        };
        (def, uses)
    }

    /// Renders the instruction, passing every local variable name through
    /// `name`. Temporaries and `this` are passed through too; the callback
    /// decides what to rename.
    pub fn render_with(&self, name: &mut dyn FnMut(&str) -> String) -> String {
        let opnd = |o: &Operand, name: &mut dyn FnMut(&str) -> String| match o {
            Operand::Var(v) => name(v),
            Operand::Const(c) => c.clone(),
        };
        let mut s = String::new();
        match self {
            Op::Copy { dst, src } => {
                let d = name(dst);
                let _ = write!(s, "{d} = {}", opnd(src, name));
            }
            Op::New { dst, class } => {
                let _ = write!(s, "{} = new {class}", name(dst));
            }
            Op::Unary { dst, op, src } => {
                let d = name(dst);
                let v = opnd(src, name);
                if let Some(ty) = op.strip_prefix("instanceof ") {
                    let _ = write!(s, "{d} = {v} instanceof {ty}");
                } else {
                    let _ = write!(s, "{d} = {op} {v}");
                }
            }
            Op::Binary { dst, lhs, op, rhs } => {
                let d = name(dst);
                let l = opnd(lhs, name);
                let r = opnd(rhs, name);
                let _ = write!(s, "{d} = {l} {op} {r}");
            }
            Op::Invoke {
                dst,
                mode,
                receiver,
                owner,
                method,
                args,
            } => {
                if let Some(d) = dst {
                    let d = name(d);
                    let _ = write!(s, "{d} = ");
                }
                s.push_str(mode.keyword());
                s.push(' ');
                if let Some(r) = receiver {
                    s.push_str(&name(r));
                    s.push('.');
                }
                match owner {
                    Some(o) => {
                        let _ = write!(s, "<{o}: {method}>");
                    }
                    None => s.push_str(method),
                }
                s.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        s.push_str(", ");
                    }
                    s.push_str(&opnd(a, name));
                }
                s.push(')');
            }
            Op::FieldLoad { dst, field } => {
                let d = name(dst);
                let _ = write!(s, "{d} = {}", render_field(field, name));
            }
            Op::FieldStore { field, src } => {
                let f = render_field(field, name);
                let _ = write!(s, "{f} = {}", opnd(src, name));
            }
            Op::ArrayLoad { dst, array, index } => {
                let d = name(dst);
                let a = name(array);
                let _ = write!(s, "{d} = {a}[{}]", opnd(index, name));
            }
            Op::ArrayStore { array, index, src } => {
                let a = name(array);
                let i = opnd(index, name);
                let _ = write!(s, "{a}[{i}] = {}", opnd(src, name));
            }
            Op::NewArray { dst, elem, size } => {
                let d = name(dst);
                let _ = write!(s, "{d} = newarray ({elem})[{}]", opnd(size, name));
            }
            Op::If { lhs, cmp, rhs, target } => {
                let l = opnd(lhs, name);
                let r = opnd(rhs, name);
                let _ = write!(s, "if {l} {cmp} {r} goto label{target}");
            }
            Op::Goto { target } => {
                let _ = write!(s, "goto label{target}");
            }
            Op::Label { id } => {
                let _ = write!(s, "label{id}:");
            }
            Op::Return { value: None } => s.push_str("return"),
            Op::Return { value: Some(v) } => {
                let _ = write!(s, "return {}", opnd(v, name));
            }
            Op::Throw { value } => {
                let _ = write!(s, "throw {}", opnd(value, name));
            }
            Op::Nop => s.push_str("nop"),
        }
        s
    }
}

fn render_field(field: &FieldRef, name: &mut dyn FnMut(&str) -> String) -> String {
    match field {
        FieldRef::Instance { base, field } => format!("{}.<{field}>", name(base)),
        FieldRef::Static { class, field } => format!("<{class}: {field}>"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrInstruction {
    pub index: usize,
    pub kind: InstrKind,
    pub defs: BTreeSet<String>,
    pub uses: BTreeSet<String>,
    pub source_line: u32,
    pub op: Op,
    /// Innermost branch whose outcome decides whether this instruction
    /// executes (structural control dependence).
    pub guard: Option<usize>,
}

impl IrInstruction {
    pub fn new(index: usize, op: Op, source_line: u32, guard: Option<usize>) -> Self {
        let (def, uses) = op.def_use();
        IrInstruction {
            index,
            kind: op.kind(),
            defs: def.into_iter().collect(),
            uses: uses.into_iter().collect(),
            source_line,
            op,
            guard,
        }
    }

    /// Jimple-like text with the original variable names.
    pub fn render(&self) -> String {
        self.op.render_with(&mut |n| n.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum IrError {
    #[error("instruction at position {position} carries index {index}")]
    BadIndex { position: usize, index: usize },
    #[error("jump to undefined label{0}")]
    MissingLabel(u32),
    #[error("guard of instruction {0} is not a branch")]
    BadGuard(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrFunction {
    pub name: String,
    pub params: Vec<String>,
    pub instructions: Vec<IrInstruction>,
    labels: BTreeMap<u32, usize>,
}

impl IrFunction {
    pub fn new(
        name: impl Into<String>,
        params: Vec<String>,
        instructions: Vec<IrInstruction>,
    ) -> Result<Self, IrError> {
        let mut labels = BTreeMap::new();
        for (pos, ins) in instructions.iter().enumerate() {
            if ins.index != pos {
                return Err(IrError::BadIndex {
                    position: pos,
                    index: ins.index,
                });
            }
            if let Op::Label { id } = ins.op {
                labels.insert(id, pos);
            }
            if let Some(g) = ins.guard {
                if g >= instructions.len() || instructions[g].kind != InstrKind::Branch {
                    return Err(IrError::BadGuard(pos));
                }
            }
        }
        for ins in &instructions {
            if let Op::If { target, .. } | Op::Goto { target } = ins.op {
                if !labels.contains_key(&target) {
                    return Err(IrError::MissingLabel(target));
                }
            }
        }
        Ok(IrFunction {
            name: name.into(),
            params,
            instructions,
            labels,
        })
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// Control-flow successors of instruction `i`.
    pub fn successors(&self, i: usize) -> Vec<usize> {
        let n = self.instructions.len();
        let fall = if i + 1 < n { Some(i + 1) } else { None };
        match self.instructions[i].op {
            Op::If { target, .. } => {
                let t = self.labels[&target];
                let mut s: Vec<usize> = fall.into_iter().collect();
                if !s.contains(&t) {
                    s.push(t);
                }
                s
            }
            Op::Goto { target } => alloc::vec![self.labels[&target]],
            Op::Return { .. } | Op::Throw { .. } => Vec::new(),
            _ => fall.into_iter().collect(),
        }
    }

    /// Renders the selected instructions (in program order, one per line)
    /// with locals renamed `v0`, `v1`, … in order of first appearance.
    pub fn render_canonical(&self, selected: &BTreeSet<usize>) -> String {
        let mut renamer = Renamer::default();
        let mut out = String::new();
        for &i in selected {
            let line = self.instructions[i].op.render_with(&mut |n| renamer.name(n));
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    pub fn render_all(&self) -> String {
        let all: BTreeSet<usize> = (0..self.len()).collect();
        self.render_canonical(&all)
    }
}

/// Assigns `v0`, `v1`, … to locals in first-use order; temporaries and
/// `this` keep their names.
#[derive(Default)]
pub struct Renamer {
    map: BTreeMap<String, String>,
}

impl Renamer {
    pub fn name(&mut self, n: &str) -> String {
        if is_temp(n) || n == "this" {
            return n.to_string();
        }
        let next = self.map.len();
        self.map
            .entry(n.to_string())
            .or_insert_with(|| format!("v{next}"))
            .clone()
    }
}

//! Lowering of method bodies to the three-address IR.
//!
//! Nested expressions are flattened through fresh `$stackN` temporaries in
//! evaluation order; the outermost computation of an assignment writes its
//! target directly. Conditions become `if … goto` jumps, loops become
//! label/jump structures, and every instruction emitted inside a guarded
//! region records the innermost guarding branch.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::ast::*;
use super::ir::*;
use super::LowerError;

enum Rhs {
    Operand(Operand),
    New { class: String, args: Vec<Operand> },
    Unary { op: String, src: Operand },
    Binary { lhs: Operand, op: String, rhs: Operand },
    Invoke {
        mode: InvokeMode,
        receiver: Option<String>,
        owner: Option<String>,
        method: String,
        args: Vec<Operand>,
    },
    FieldLoad(FieldRef),
    ArrayLoad { array: String, index: Operand },
    NewArray { elem: String, size: Operand },
}

struct Loop {
    cont: u32,
    end: u32,
}

struct Lowerer<'a> {
    unit: &'a SourceUnit,
    method: &'a MethodDecl,
    types: BTreeMap<String, String>,
    temps: u32,
    labels: u32,
    out: Vec<IrInstruction>,
    guard: Option<usize>,
    loops: Vec<Loop>,
}

type LResult<T> = Result<T, LowerError>;

fn erase_generics(ty: &str) -> String {
    let mut out = String::new();
    let mut depth = 0;
    for ch in ty.chars() {
        match ch {
            '<' => depth += 1,
            '>' => depth -= 1,
            _ if depth == 0 => out.push(ch),
            _ => {}
        }
    }
    out
}

fn negate(cmp: &str) -> Option<&'static str> {
    Some(match cmp {
        "==" => "!=",
        "!=" => "==",
        "<" => ">=",
        ">=" => "<",
        ">" => "<=",
        "<=" => ">",
        _ => return None,
    })
}

fn comparison(cmp: &str) -> Option<&'static str> {
    negate(cmp).and_then(negate)
}

/// Lowers one method of `unit`. Methods without a body lower to a single
/// `nop`.
pub fn lower_to_ir(unit: &SourceUnit, method: &MethodDecl) -> Result<IrFunction, LowerError> {
    let mut l = Lowerer {
        unit,
        method,
        types: BTreeMap::new(),
        temps: 0,
        labels: 0,
        out: Vec::new(),
        guard: None,
        loops: Vec::new(),
    };
    for p in &method.params {
        l.types.insert(p.name.clone(), p.type_name.clone());
    }
    l.types.insert("this".to_string(), unit.class_name.clone());
    if let Some(body) = &method.body {
        for s in body {
            l.stmt(s)?;
        }
    }
    if l.out.is_empty() {
        l.emit(Op::Nop, method.lines.0);
    }
    let params = method.params.iter().map(|p| p.name.clone()).collect();
    IrFunction::new(method.name.clone(), params, l.out)
        .map_err(|e| LowerError::new(method.lines.0, format!("{e}")))
}

impl<'a> Lowerer<'a> {
    fn emit(&mut self, op: Op, line: u32) -> usize {
        let line = line.clamp(self.method.lines.0, self.method.lines.1);
        let index = self.out.len();
        self.out.push(IrInstruction::new(index, op, line, self.guard));
        index
    }

    fn temp(&mut self) -> String {
        let t = format!("{TEMP_PREFIX}{}", self.temps);
        self.temps += 1;
        t
    }

    fn label(&mut self) -> u32 {
        let id = self.labels;
        self.labels += 1;
        id
    }

    fn is_local(&self, name: &str) -> bool {
        self.types.contains_key(name)
    }

    /// Reassigns the guard of instructions in `from..to` that sit directly
    /// under the current guard.
    fn reguard(&mut self, from: usize, to: usize, guard: usize) {
        let outer = self.guard;
        for ins in &mut self.out[from..to] {
            if ins.guard == outer {
                ins.guard = Some(guard);
            }
        }
    }

    fn with_guard<T>(&mut self, guard: Option<usize>, f: impl FnOnce(&mut Self) -> LResult<T>) -> LResult<T> {
        let saved = self.guard;
        if guard.is_some() {
            self.guard = guard;
        }
        let r = f(self);
        self.guard = saved;
        r
    }

    // ---- statements ----

    fn stmt(&mut self, s: &Stmt) -> LResult<()> {
        match &s.kind {
            StmtKind::Local { ty, vars } => {
                for d in vars {
                    self.types.insert(d.name.clone(), ty.clone());
                    if let Some(init) = &d.init {
                        self.lower_into(&d.name, init)?;
                    }
                }
            }
            StmtKind::Expr(e) => self.expr_stmt(e)?,
            StmtKind::Block(stmts) => {
                for s in stmts {
                    self.stmt(s)?;
                }
            }
            StmtKind::If { cond, then, otherwise } => {
                let else_label = self.label();
                let br = self.branch(cond, false, else_label)?;
                match otherwise {
                    None => {
                        self.with_guard(Some(br), |l| l.stmt(then))?;
                        self.emit(Op::Label { id: else_label }, s.line);
                    }
                    Some(other) => {
                        let end = self.label();
                        self.with_guard(Some(br), |l| {
                            l.stmt(then)?;
                            l.emit(Op::Goto { target: end }, s.line);
                            l.emit(Op::Label { id: else_label }, other.line);
                            l.stmt(other)
                        })?;
                        self.emit(Op::Label { id: end }, s.line);
                    }
                }
            }
            StmtKind::While { cond, body } => {
                let head = self.label();
                let end = self.label();
                self.emit(Op::Label { id: head }, s.line);
                let start = self.out.len();
                let br = self.branch(cond, false, end)?;
                self.reguard(start, br, br);
                self.loops.push(Loop { cont: head, end });
                self.with_guard(Some(br), |l| {
                    l.stmt(body)?;
                    l.emit(Op::Goto { target: head }, s.line);
                    Ok(())
                })?;
                self.loops.pop();
                self.emit(Op::Label { id: end }, s.line);
            }
            StmtKind::DoWhile { body, cond } => {
                let head = self.label();
                let cont = self.label();
                let end = self.label();
                self.emit(Op::Label { id: head }, s.line);
                let start = self.out.len();
                self.loops.push(Loop { cont, end });
                self.stmt(body)?;
                self.loops.pop();
                self.emit(Op::Label { id: cont }, cond.line);
                let br = self.branch(cond, true, head)?;
                self.reguard(start, br, br);
                self.emit(Op::Label { id: end }, cond.line);
            }
            StmtKind::For { init, cond, update, body } => {
                for i in init {
                    self.stmt(i)?;
                }
                let head = self.label();
                let cont = self.label();
                let end = self.label();
                self.emit(Op::Label { id: head }, s.line);
                let start = self.out.len();
                let br = match cond {
                    Some(c) => {
                        let br = self.branch(c, false, end)?;
                        self.reguard(start, br, br);
                        Some(br)
                    }
                    None => None,
                };
                self.loops.push(Loop { cont, end });
                self.with_guard(br, |l| {
                    l.stmt(body)?;
                    l.emit(Op::Label { id: cont }, s.line);
                    for u in update {
                        l.expr_stmt(u)?;
                    }
                    l.emit(Op::Goto { target: head }, s.line);
                    Ok(())
                })?;
                self.loops.pop();
                self.emit(Op::Label { id: end }, s.line);
            }
            StmtKind::ForEach { ty, var, iterable, body } => {
                let coll = self.var_operand(iterable)?;
                let owner = self.types.get(&coll).map(|t| erase_generics(t));
                let iter = self.temp();
                self.types.insert(iter.clone(), "Iterator".to_string());
                self.emit(
                    Op::Invoke {
                        dst: Some(iter.clone()),
                        mode: InvokeMode::Virtual,
                        receiver: Some(coll),
                        owner,
                        method: "iterator".to_string(),
                        args: Vec::new(),
                    },
                    iterable.line,
                );
                let head = self.label();
                let end = self.label();
                self.emit(Op::Label { id: head }, s.line);
                let has_next = self.temp();
                let start = self.out.len();
                self.emit(
                    Op::Invoke {
                        dst: Some(has_next.clone()),
                        mode: InvokeMode::Virtual,
                        receiver: Some(iter.clone()),
                        owner: Some("Iterator".to_string()),
                        method: "hasNext".to_string(),
                        args: Vec::new(),
                    },
                    s.line,
                );
                let br = self.emit(
                    Op::If {
                        lhs: Operand::Var(has_next),
                        cmp: "==".to_string(),
                        rhs: Operand::Const("0".to_string()),
                        target: end,
                    },
                    s.line,
                );
                self.reguard(start, br, br);
                self.types.insert(var.clone(), ty.clone());
                self.loops.push(Loop { cont: head, end });
                self.with_guard(Some(br), |l| {
                    l.emit(
                        Op::Invoke {
                            dst: Some(var.clone()),
                            mode: InvokeMode::Virtual,
                            receiver: Some(iter.clone()),
                            owner: Some("Iterator".to_string()),
                            method: "next".to_string(),
                            args: Vec::new(),
                        },
                        s.line,
                    );
                    l.stmt(body)?;
                    l.emit(Op::Goto { target: head }, s.line);
                    Ok(())
                })?;
                self.loops.pop();
                self.emit(Op::Label { id: end }, s.line);
            }
            StmtKind::Return(value) => {
                let value = match value {
                    Some(e) => Some(self.operand(e)?),
                    None => None,
                };
                self.emit(Op::Return { value }, s.line);
            }
            StmtKind::Throw(e) => {
                let value = self.operand(e)?;
                self.emit(Op::Throw { value }, s.line);
            }
            StmtKind::Break | StmtKind::Continue => {
                let target = match (self.loops.last(), &s.kind) {
                    (Some(l), StmtKind::Break) => l.end,
                    (Some(l), _) => l.cont,
                    (None, _) => return Err(LowerError::new(s.line, "jump outside of a loop")),
                };
                self.emit(Op::Goto { target }, s.line);
            }
            StmtKind::Empty => {
                self.emit(Op::Nop, s.line);
            }
        }
        Ok(())
    }

    /// Emits a conditional jump to `target` taken when `cond` evaluates to
    /// `when`; returns the jump's index.
    fn branch(&mut self, cond: &Expr, when: bool, target: u32) -> LResult<usize> {
        match &cond.kind {
            ExprKind::Unary { op, expr } if op == "!" => self.branch(expr, !when, target),
            ExprKind::Binary { op, lhs, rhs } if comparison(op).is_some() => {
                let l = self.operand(lhs)?;
                let r = self.operand(rhs)?;
                let cmp = if when { comparison(op) } else { negate(op) }.unwrap_or("==");
                Ok(self.emit(
                    Op::If {
                        lhs: l,
                        cmp: cmp.to_string(),
                        rhs: r,
                        target,
                    },
                    cond.line,
                ))
            }
            _ => {
                let c = self.operand(cond)?;
                Ok(self.emit(
                    Op::If {
                        lhs: c,
                        cmp: if when { "!=" } else { "==" }.to_string(),
                        rhs: Operand::Const("0".to_string()),
                        target,
                    },
                    cond.line,
                ))
            }
        }
    }

    fn expr_stmt(&mut self, e: &Expr) -> LResult<()> {
        match &e.kind {
            ExprKind::Assign { op, target, value } => {
                self.assign(target, op, value, e.line)?;
            }
            ExprKind::IncDec { target, increment, .. } => {
                self.inc_dec(target, *increment, false, e.line)?;
            }
            ExprKind::Call { .. } => {
                if let Rhs::Invoke {
                    mode,
                    receiver,
                    owner,
                    method,
                    args,
                } = self.rhs(e)?
                {
                    self.emit(
                        Op::Invoke {
                            dst: None,
                            mode,
                            receiver,
                            owner,
                            method,
                            args,
                        },
                        e.line,
                    );
                }
            }
            _ => {
                self.operand(e)?;
            }
        }
        Ok(())
    }

    // ---- expressions ----

    fn materialize(&mut self, rhs: Rhs, dst: &str, line: u32) {
        let dst = dst.to_string();
        let op = match rhs {
            Rhs::Operand(src) => Op::Copy { dst, src },
            Rhs::New { class, args } => {
                self.types.insert(dst.clone(), class.clone());
                self.emit(
                    Op::New {
                        dst: dst.clone(),
                        class: class.clone(),
                    },
                    line,
                );
                Op::Invoke {
                    dst: None,
                    mode: InvokeMode::Special,
                    receiver: Some(dst),
                    owner: Some(erase_generics(&class)),
                    method: "<init>".to_string(),
                    args,
                }
            }
            Rhs::Unary { op, src } => {
                if let Some(ty) = op.strip_prefix('(').and_then(|o| o.strip_suffix(')')) {
                    self.types.insert(dst.clone(), ty.to_string());
                }
                Op::Unary { dst, op, src }
            }
            Rhs::Binary { lhs, op, rhs } => Op::Binary { dst, lhs, op, rhs },
            Rhs::Invoke {
                mode,
                receiver,
                owner,
                method,
                args,
            } => Op::Invoke {
                dst: Some(dst),
                mode,
                receiver,
                owner,
                method,
                args,
            },
            Rhs::FieldLoad(field) => {
                if let FieldRef::Instance { base, field: f } = &field {
                    if base == "this" {
                        if let Some(fd) = self.unit.field(f) {
                            self.types.insert(dst.clone(), fd.type_name.clone());
                        }
                    }
                }
                Op::FieldLoad { dst, field }
            }
            Rhs::ArrayLoad { array, index } => Op::ArrayLoad { dst, array, index },
            Rhs::NewArray { elem, size } => Op::NewArray { dst, elem, size },
        };
        self.emit(op, line);
    }

    fn lower_into(&mut self, dst: &str, e: &Expr) -> LResult<()> {
        let rhs = self.rhs(e)?;
        self.materialize(rhs, dst, e.line);
        Ok(())
    }

    fn operand(&mut self, e: &Expr) -> LResult<Operand> {
        match self.rhs(e)? {
            Rhs::Operand(o) => Ok(o),
            rhs => {
                let t = self.temp();
                self.materialize(rhs, &t, e.line);
                Ok(Operand::Var(t))
            }
        }
    }

    /// Like [`Self::operand`] but always yields a variable.
    fn var_operand(&mut self, e: &Expr) -> LResult<String> {
        match self.operand(e)? {
            Operand::Var(v) => Ok(v),
            c => {
                let t = self.temp();
                self.emit(Op::Copy { dst: t.clone(), src: c }, e.line);
                Ok(t)
            }
        }
    }

    /// Dotted path of an expression naming a class (`Integer`,
    /// `java.io.File`), if it does.
    fn class_ref(&self, e: &Expr) -> Option<String> {
        fn path(l: &Lowerer<'_>, e: &Expr) -> Option<String> {
            match &e.kind {
                ExprKind::Name(n) if !l.is_local(n) && l.unit.field(n).is_none() => Some(n.clone()),
                ExprKind::Field { base, name } => path(l, base).map(|p| format!("{p}.{name}")),
                _ => None,
            }
        }
        let p = path(self, e)?;
        let last = p.rsplit('.').next().unwrap_or(&p);
        // `CONSTANT_CASE` names are static fields, not classes.
        let constant = last.len() > 1
            && last.chars().all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_');
        let upper = last.chars().next().is_some_and(|c| c.is_ascii_uppercase());
        (upper && !(constant && p.contains('.'))).then_some(p)
    }

    fn field_ref(&mut self, base: &Expr, name: &str) -> LResult<FieldRef> {
        if let Some(class) = self.class_ref(base) {
            return Ok(FieldRef::Static {
                class,
                field: name.to_string(),
            });
        }
        let base = self.var_operand(base)?;
        Ok(FieldRef::Instance {
            base,
            field: name.to_string(),
        })
    }

    /// Resolves a bare name that is not a local.
    fn implicit_field(&self, name: &str) -> FieldRef {
        match self.unit.field(name) {
            Some(f) if f.is_static() => FieldRef::Static {
                class: self.unit.class_name.clone(),
                field: name.to_string(),
            },
            _ => FieldRef::Instance {
                base: "this".to_string(),
                field: name.to_string(),
            },
        }
    }

    fn type_of(&self, var: &str) -> Option<String> {
        self.types.get(var).map(|t| erase_generics(t))
    }

    fn rhs(&mut self, e: &Expr) -> LResult<Rhs> {
        Ok(match &e.kind {
            ExprKind::Literal(l) => Rhs::Operand(Operand::Const(l.text.clone())),
            ExprKind::This => Rhs::Operand(Operand::Var("this".to_string())),
            ExprKind::Name(n) => {
                if self.is_local(n) {
                    Rhs::Operand(Operand::Var(n.clone()))
                } else if let Some(f) = self.unit.field(n) {
                    match (&f.init_literal, f.is_static() && f.is_final()) {
                        // Compile-time constants are inlined.
                        (Some(lit), true) => Rhs::Operand(Operand::Const(lit.text.clone())),
                        _ => Rhs::FieldLoad(self.implicit_field(n)),
                    }
                } else if n.chars().next().is_some_and(|c| c.is_ascii_uppercase()) {
                    Rhs::Operand(Operand::Const(n.clone()))
                } else {
                    Rhs::FieldLoad(self.implicit_field(n))
                }
            }
            ExprKind::Field { base, name } => {
                if name == "class" {
                    let class = self.class_ref(base).unwrap_or_else(|| "?".to_string());
                    return Ok(Rhs::Operand(Operand::Const(format!("class \"{class}\""))));
                }
                if name == "length" && self.class_ref(base).is_none() {
                    let src = self.operand(base)?;
                    return Ok(Rhs::Unary {
                        op: "lengthof".to_string(),
                        src,
                    });
                }
                Rhs::FieldLoad(self.field_ref(base, name)?)
            }
            ExprKind::Call {
                receiver,
                is_super,
                name,
                args,
            } => {
                let (mode, recv, owner) = match receiver {
                    None if *is_super => (InvokeMode::Special, Some("this".to_string()), None),
                    None => {
                        let is_static = self.unit.methods.iter().any(|m| &m.name == name && m.is_static());
                        if is_static || self.method.is_static() && !self.unit.methods.iter().any(|m| &m.name == name) {
                            (InvokeMode::Static, None, Some(self.unit.class_name.clone()))
                        } else {
                            (
                                InvokeMode::Virtual,
                                Some("this".to_string()),
                                Some(self.unit.class_name.clone()),
                            )
                        }
                    }
                    Some(r) => match self.class_ref(r) {
                        Some(class) => (InvokeMode::Static, None, Some(class)),
                        None => {
                            let v = self.var_operand(r)?;
                            let owner = self.type_of(&v);
                            (InvokeMode::Virtual, Some(v), owner)
                        }
                    },
                };
                let mut ops = Vec::with_capacity(args.len());
                for a in args {
                    ops.push(self.operand(a)?);
                }
                Rhs::Invoke {
                    mode,
                    receiver: recv,
                    owner,
                    method: name.clone(),
                    args: ops,
                }
            }
            ExprKind::New { class, args } => {
                let mut ops = Vec::with_capacity(args.len());
                for a in args {
                    ops.push(self.operand(a)?);
                }
                Rhs::New {
                    class: class.clone(),
                    args: ops,
                }
            }
            ExprKind::NewArray { elem, sizes } => {
                if sizes.len() != 1 {
                    return Err(LowerError::new(e.line, "multi-dimensional allocation is not supported"));
                }
                let size = self.operand(&sizes[0])?;
                Rhs::NewArray {
                    elem: elem.clone(),
                    size,
                }
            }
            ExprKind::Index { array, index } => {
                let array = self.var_operand(array)?;
                let index = self.operand(index)?;
                Rhs::ArrayLoad { array, index }
            }
            ExprKind::Unary { op, expr } => match (op.as_str(), &expr.kind) {
                ("-", ExprKind::Literal(l)) if matches!(l.kind, LitKind::Int | LitKind::Float) => {
                    Rhs::Operand(Operand::Const(format!("-{}", l.text)))
                }
                ("+", _) => return self.rhs(expr),
                _ => {
                    let src = self.operand(expr)?;
                    let op = match op.as_str() {
                        "-" => "neg",
                        "!" => "not",
                        _ => "compl",
                    };
                    Rhs::Unary {
                        op: op.to_string(),
                        src,
                    }
                }
            },
            ExprKind::Binary { op, lhs, rhs } => {
                let l = self.operand(lhs)?;
                let r = self.operand(rhs)?;
                Rhs::Binary {
                    lhs: l,
                    op: op.clone(),
                    rhs: r,
                }
            }
            ExprKind::Cast { ty, expr } => {
                let src = self.operand(expr)?;
                Rhs::Unary {
                    op: format!("({ty})"),
                    src,
                }
            }
            ExprKind::InstanceOf { expr, ty } => {
                let src = self.operand(expr)?;
                Rhs::Unary {
                    op: format!("instanceof {ty}"),
                    src,
                }
            }
            ExprKind::Ternary { cond, then, otherwise } => {
                let t = self.temp();
                let else_label = self.label();
                let end = self.label();
                let br = self.branch(cond, false, else_label)?;
                self.with_guard(Some(br), |l| {
                    l.lower_into(&t, then)?;
                    l.emit(Op::Goto { target: end }, e.line);
                    l.emit(Op::Label { id: else_label }, otherwise.line);
                    l.lower_into(&t, otherwise)
                })?;
                self.emit(Op::Label { id: end }, e.line);
                Rhs::Operand(Operand::Var(t))
            }
            ExprKind::Assign { op, target, value } => {
                Rhs::Operand(self.assign(target, op, value, e.line)?)
            }
            ExprKind::IncDec {
                target,
                increment,
                prefix,
            } => Rhs::Operand(self.inc_dec(target, *increment, !*prefix, e.line)?),
        })
    }

    /// Lowers `target op= value` and returns an operand holding the
    /// assigned value.
    fn assign(&mut self, target: &Expr, op: &str, value: &Expr, line: u32) -> LResult<Operand> {
        match &target.kind {
            ExprKind::Name(n) if self.is_local(n) => {
                if op.is_empty() {
                    self.lower_into(n, value)?;
                } else {
                    let v = self.operand(value)?;
                    self.emit(
                        Op::Binary {
                            dst: n.clone(),
                            lhs: Operand::Var(n.clone()),
                            op: op.to_string(),
                            rhs: v,
                        },
                        line,
                    );
                }
                Ok(Operand::Var(n.clone()))
            }
            ExprKind::Name(_) | ExprKind::Field { .. } => {
                let field = match &target.kind {
                    ExprKind::Name(n) => self.implicit_field(n),
                    ExprKind::Field { base, name } => self.field_ref(base, name)?,
                    _ => unreachable!(),
                };
                let src = self.compound(op, value, line, |l| {
                    let t = l.temp();
                    l.emit(
                        Op::FieldLoad {
                            dst: t.clone(),
                            field: field.clone(),
                        },
                        line,
                    );
                    Operand::Var(t)
                })?;
                self.emit(
                    Op::FieldStore {
                        field,
                        src: src.clone(),
                    },
                    line,
                );
                Ok(src)
            }
            ExprKind::Index { array, index } => {
                let array = self.var_operand(array)?;
                let index = self.operand(index)?;
                let src = self.compound(op, value, line, |l| {
                    let t = l.temp();
                    l.emit(
                        Op::ArrayLoad {
                            dst: t.clone(),
                            array: array.clone(),
                            index: index.clone(),
                        },
                        line,
                    );
                    Operand::Var(t)
                })?;
                self.emit(
                    Op::ArrayStore {
                        array,
                        index,
                        src: src.clone(),
                    },
                    line,
                );
                Ok(src)
            }
            _ => Err(LowerError::new(line, "invalid assignment target")),
        }
    }

    /// Value to store for `op=`: the plain value, or `current op value`
    /// computed into a temporary.
    fn compound(
        &mut self,
        op: &str,
        value: &Expr,
        line: u32,
        load: impl FnOnce(&mut Self) -> Operand,
    ) -> LResult<Operand> {
        if op.is_empty() {
            return self.operand(value);
        }
        let current = load(self);
        let v = self.operand(value)?;
        let t = self.temp();
        self.emit(
            Op::Binary {
                dst: t.clone(),
                lhs: current,
                op: op.to_string(),
                rhs: v,
            },
            line,
        );
        Ok(Operand::Var(t))
    }

    /// `x++`, `--x` and friends. With `keep_old` the operand returned holds
    /// the value before the update.
    fn inc_dec(&mut self, target: &Expr, increment: bool, keep_old: bool, line: u32) -> LResult<Operand> {
        let op = if increment { "+" } else { "-" };
        let one = Expr {
            kind: ExprKind::Literal(Literal {
                kind: LitKind::Int,
                text: "1".to_string(),
            }),
            line,
        };
        if keep_old {
            let old = self.operand(target)?;
            let saved = match old {
                Operand::Var(v) if self.is_local(&v) => {
                    let t = self.temp();
                    self.emit(
                        Op::Copy {
                            dst: t.clone(),
                            src: Operand::Var(v),
                        },
                        line,
                    );
                    Operand::Var(t)
                }
                other => other,
            };
            self.assign(target, op, &one, line)?;
            Ok(saved)
        } else {
            self.assign(target, op, &one, line)
        }
    }
}

//! Syntax tree for the supported Java subset.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq)]
pub struct SourceUnit {
    pub class_name: String,
    /// Byte range and line span of the class declaration.
    pub class_span: (usize, usize),
    pub class_lines: (u32, u32),
    pub fields: Vec<FieldDecl>,
    pub methods: Vec<MethodDecl>,
    /// The full source the unit was parsed from.
    pub source: String,
}

impl SourceUnit {
    /// Verbatim text of the class declaration.
    pub fn class_text(&self) -> &str {
        &self.source[self.class_span.0..self.class_span.1]
    }

    pub fn field(&self, name: &str) -> Option<&FieldDecl> {
        self.fields.iter().find(|f| f.name == name)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FieldDecl {
    pub modifiers: Vec<String>,
    pub type_name: String,
    pub name: String,
    /// Initializer source text, if any.
    pub initializer: Option<String>,
    pub init_literal: Option<Literal>,
    pub lines: (u32, u32),
    /// Byte range of the whole declaration statement; declarators sharing a
    /// statement share the range.
    pub span: (usize, usize),
}

impl FieldDecl {
    pub fn is_static(&self) -> bool {
        self.modifiers.iter().any(|m| m == "static")
    }

    pub fn is_final(&self) -> bool {
        self.modifiers.iter().any(|m| m == "final")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Param {
    pub type_name: String,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MethodDecl {
    pub name: String,
    pub modifiers: Vec<String>,
    /// `None` for constructors.
    pub return_type: Option<String>,
    pub params: Vec<Param>,
    /// `None` for abstract or native methods.
    pub body: Option<Vec<Stmt>>,
    pub lines: (u32, u32),
    pub span: (usize, usize),
}

impl MethodDecl {
    pub fn is_constructor(&self) -> bool {
        self.return_type.is_none()
    }

    pub fn is_static(&self) -> bool {
        self.modifiers.iter().any(|m| m == "static")
    }

    pub fn param_types(&self) -> Vec<String> {
        self.params.iter().map(|p| p.type_name.clone()).collect()
    }

    pub fn contains_line(&self, line: u32) -> bool {
        self.lines.0 <= line && line <= self.lines.1
    }

    /// Verbatim declaration text within `source`.
    pub fn text<'a>(&self, source: &'a str) -> &'a str {
        &source[self.span.0..self.span.1]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LitKind {
    Int,
    Float,
    Str,
    Char,
    Bool,
    Null,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Literal {
    pub kind: LitKind,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub line: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Literal(Literal),
    Name(String),
    This,
    Field {
        base: Box<Expr>,
        name: String,
    },
    Call {
        receiver: Option<Box<Expr>>,
        /// `super.m(..)` calls.
        is_super: bool,
        name: String,
        args: Vec<Expr>,
    },
    New {
        class: String,
        args: Vec<Expr>,
    },
    NewArray {
        elem: String,
        sizes: Vec<Expr>,
    },
    Index {
        array: Box<Expr>,
        index: Box<Expr>,
    },
    Unary {
        op: String,
        expr: Box<Expr>,
    },
    Binary {
        op: String,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    /// `target op= value`; `op` is empty for plain assignment.
    Assign {
        op: String,
        target: Box<Expr>,
        value: Box<Expr>,
    },
    IncDec {
        target: Box<Expr>,
        increment: bool,
        prefix: bool,
    },
    Cast {
        ty: String,
        expr: Box<Expr>,
    },
    InstanceOf {
        expr: Box<Expr>,
        ty: String,
    },
    Ternary {
        cond: Box<Expr>,
        then: Box<Expr>,
        otherwise: Box<Expr>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Declarator {
    pub name: String,
    pub init: Option<Expr>,
    pub line: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub line: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StmtKind {
    Local {
        ty: String,
        vars: Vec<Declarator>,
    },
    Expr(Expr),
    Block(Vec<Stmt>),
    If {
        cond: Expr,
        then: Box<Stmt>,
        otherwise: Option<Box<Stmt>>,
    },
    While {
        cond: Expr,
        body: Box<Stmt>,
    },
    DoWhile {
        body: Box<Stmt>,
        cond: Expr,
    },
    For {
        init: Vec<Stmt>,
        cond: Option<Expr>,
        update: Vec<Expr>,
        body: Box<Stmt>,
    },
    ForEach {
        ty: String,
        var: String,
        iterable: Expr,
        body: Box<Stmt>,
    },
    Return(Option<Expr>),
    Throw(Expr),
    Break,
    Continue,
    Empty,
}

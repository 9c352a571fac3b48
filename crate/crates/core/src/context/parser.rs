//! Recursive-descent parser for the Java subset.
//!
//! Supported: one top-level class with fields, methods and constructors;
//! local declarations, expression statements, `if`/`else`, `while`,
//! `do`/`while`, `for`, enhanced `for`, `return`, `throw`, `break` and
//! `continue`; the usual unary, binary, ternary, assignment, cast,
//! `instanceof`, call, field, array and allocation expressions. Generic type
//! arguments are accepted in type positions. Nested or anonymous classes,
//! initializer blocks, lambdas, method references, `switch`, `try` and
//! `synchronized` are rejected with a [`ParseError`].

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::ast::*;
use super::lexer::{tokenize, Token, TokenKind};
use super::ParseError;

const MODIFIERS: &[&str] = &[
    "public",
    "protected",
    "private",
    "static",
    "final",
    "abstract",
    "native",
    "synchronized",
    "transient",
    "volatile",
    "strictfp",
    "default",
];

const PRIMITIVES: &[&str] = &[
    "int", "long", "short", "byte", "char", "boolean", "float", "double", "void",
];

const RESERVED: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
    "continue", "default", "do", "double", "else", "enum", "extends", "final", "finally", "float",
    "for", "goto", "if", "implements", "import", "instanceof", "int", "interface", "long",
    "native", "new", "package", "private", "protected", "public", "return", "short", "static",
    "strictfp", "super", "switch", "synchronized", "this", "throw", "throws", "transient", "try",
    "void", "volatile", "while", "true", "false", "null",
];

const UNSUPPORTED_STATEMENTS: &[&str] =
    &["switch", "try", "synchronized", "class", "interface", "enum", "assert"];

const ASSIGN_OPS: &[&str] = &["=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<="];

fn is_reserved(s: &str) -> bool {
    RESERVED.contains(&s)
}

fn precedence(op: &str) -> Option<u8> {
    Some(match op {
        "||" => 1,
        "&&" => 2,
        "|" => 3,
        "^" => 4,
        "&" => 5,
        "==" | "!=" => 6,
        "<" | ">" | "<=" | ">=" | "instanceof" => 7,
        "<<" | ">>" | ">>>" => 8,
        "+" | "-" => 9,
        "*" | "/" | "%" => 10,
        _ => return None,
    })
}

/// Parses a Java compilation unit holding a single top-level class.
pub fn parse_java_subset(source: &str) -> Result<SourceUnit, ParseError> {
    let tokens = tokenize(source)?;
    let mut p = Parser {
        src: source,
        toks: tokens,
        pos: 0,
    };
    p.compilation_unit()
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Token {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.kind != TokenKind::Eof {
            self.pos += 1;
        }
        t
    }

    fn at(&self, text: &str) -> bool {
        self.peek().is(text)
    }

    fn eat(&mut self, text: &str) -> bool {
        if self.at(text) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.peek().line, message)
    }

    fn expect(&mut self, text: &str) -> PResult<Token> {
        if self.at(text) {
            Ok(self.bump())
        } else {
            let found = match self.peek().kind {
                TokenKind::Eof => "end of input".to_string(),
                _ => format!("`{}`", self.peek().text),
            };
            Err(self.err(format!("expected `{text}`, found {found}")))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        let t = self.peek();
        if t.kind == TokenKind::Ident && !is_reserved(&t.text) {
            Ok(self.bump().text)
        } else {
            Err(self.err(format!("expected identifier, found `{}`", t.text)))
        }
    }

    fn qualified_name(&mut self) -> PResult<String> {
        let mut name = self.ident()?;
        while self.at(".") && self.peek_at(1).kind == TokenKind::Ident && !self.peek_at(1).is("class") {
            self.bump();
            name.push('.');
            name.push_str(&self.ident()?);
        }
        Ok(name)
    }

    /// Adjacent tokens, with no whitespace between them.
    fn glued(&self, k: usize) -> bool {
        self.peek_at(k).end == self.peek_at(k + 1).start
    }

    fn skip_annotation(&mut self) -> PResult<()> {
        self.expect("@")?;
        if self.at("interface") {
            return Err(self.err("annotation type declarations are not supported"));
        }
        self.qualified_name()?;
        if self.at("(") {
            self.skip_balanced("(", ")")?;
        }
        Ok(())
    }

    fn skip_balanced(&mut self, open: &str, close: &str) -> PResult<()> {
        self.expect(open)?;
        let mut depth = 1;
        while depth > 0 {
            let t = self.bump();
            if t.kind == TokenKind::Eof {
                return Err(ParseError::new(t.line, format!("unbalanced `{open}`")));
            }
            if t.is(open) {
                depth += 1;
            } else if t.is(close) {
                depth -= 1;
            }
        }
        Ok(())
    }

    fn modifiers(&mut self) -> PResult<Vec<String>> {
        let mut mods = Vec::new();
        loop {
            if self.at("@") {
                self.skip_annotation()?;
            } else if MODIFIERS.contains(&self.peek().text.as_str()) && self.peek().kind == TokenKind::Ident {
                mods.push(self.bump().text);
            } else {
                return Ok(mods);
            }
        }
    }

    fn compilation_unit(&mut self) -> PResult<SourceUnit> {
        if self.eat("package") {
            self.qualified_name()?;
            self.expect(";")?;
        }
        while self.eat("import") {
            self.eat("static");
            self.ident()?;
            while self.eat(".") {
                if !self.eat("*") {
                    self.ident()?;
                }
            }
            self.expect(";")?;
        }
        while self.eat(";") {}
        let start_tok = self.peek().clone();
        self.modifiers()?;
        for kw in ["interface", "enum", "record"] {
            if self.at(kw) {
                return Err(self.err(format!("`{kw}` declarations are not supported")));
            }
        }
        self.expect("class")?;
        let class_name = self.ident()?;
        if self.at("<") {
            self.type_args()?;
        }
        if self.eat("extends") {
            self.parse_type()?;
        }
        if self.eat("implements") {
            self.parse_type()?;
            while self.eat(",") {
                self.parse_type()?;
            }
        }
        self.expect("{")?;
        let mut fields = Vec::new();
        let mut methods = Vec::new();
        while !self.at("}") {
            if self.peek().kind == TokenKind::Eof {
                return Err(self.err("unexpected end of input in class body"));
            }
            self.member(&class_name, &mut fields, &mut methods)?;
        }
        let close = self.bump();
        while self.eat(";") {}
        if self.peek().kind != TokenKind::Eof {
            return Err(self.err("only one top-level class per file is supported"));
        }
        Ok(SourceUnit {
            class_name,
            class_span: (start_tok.start, close.end),
            class_lines: (start_tok.line, close.line),
            fields,
            methods,
            source: self.src.to_string(),
        })
    }

    fn member(
        &mut self,
        class_name: &str,
        fields: &mut Vec<FieldDecl>,
        methods: &mut Vec<MethodDecl>,
    ) -> PResult<()> {
        if self.eat(";") {
            return Ok(());
        }
        let start = self.peek().clone();
        let modifiers = self.modifiers()?;
        for kw in ["class", "interface", "enum", "record"] {
            if self.at(kw) {
                return Err(self.err("nested type declarations are not supported"));
            }
        }
        if self.at("{") {
            return Err(self.err("initializer blocks are not supported"));
        }
        if self.at("<") {
            self.type_args()?;
        }
        let is_ctor = self.peek().text == class_name && self.peek_at(1).is("(");
        let return_type = if is_ctor { None } else { Some(self.parse_type()?) };
        let name = self.ident()?;
        if self.at("(") {
            let params = self.params()?;
            while self.at("[") {
                self.expect("[")?;
                self.expect("]")?;
            }
            if self.eat("throws") {
                self.qualified_name()?;
                while self.eat(",") {
                    self.qualified_name()?;
                }
            }
            let (body, end) = if self.at(";") {
                (None, self.bump())
            } else {
                let (stmts, close) = self.block()?;
                (Some(stmts), close)
            };
            methods.push(MethodDecl {
                name,
                modifiers,
                return_type,
                params,
                body,
                lines: (start.line, end.line),
                span: (start.start, end.end),
            });
            return Ok(());
        }
        let ty = return_type.ok_or_else(|| self.err("expected `(` after constructor name"))?;
        let mut declarators = Vec::new();
        let mut var = name;
        loop {
            let mut var_ty = ty.clone();
            while self.at("[") {
                self.expect("[")?;
                self.expect("]")?;
                var_ty.push_str("[]");
            }
            let (initializer, init_literal) = if self.eat("=") {
                let begin = self.peek().start;
                let lit = if self.at("{") {
                    self.skip_balanced("{", "}")?;
                    None
                } else {
                    literal_of(&self.expr()?)
                };
                let end = self.toks[self.pos - 1].end;
                (Some(self.src[begin..end].to_string()), lit)
            } else {
                (None, None)
            };
            declarators.push((var, var_ty, initializer, init_literal));
            if self.eat(",") {
                var = self.ident()?;
            } else {
                break;
            }
        }
        let semi = self.expect(";")?;
        for (name, type_name, initializer, init_literal) in declarators {
            fields.push(FieldDecl {
                modifiers: modifiers.clone(),
                type_name,
                name,
                initializer,
                init_literal,
                lines: (start.line, semi.line),
                span: (start.start, semi.end),
            });
        }
        Ok(())
    }

    fn params(&mut self) -> PResult<Vec<Param>> {
        self.expect("(")?;
        let mut params = Vec::new();
        if self.eat(")") {
            return Ok(params);
        }
        loop {
            self.modifiers()?;
            let mut type_name = self.parse_type()?;
            if self.eat("...") {
                type_name.push_str("[]");
            }
            let name = self.ident()?;
            while self.at("[") {
                self.expect("[")?;
                self.expect("]")?;
                type_name.push_str("[]");
            }
            params.push(Param { type_name, name });
            if !self.eat(",") {
                break;
            }
        }
        self.expect(")")?;
        Ok(params)
    }

    fn type_args(&mut self) -> PResult<String> {
        self.expect("<")?;
        let mut out = String::from("<");
        if self.eat(">") {
            out.push('>');
            return Ok(out);
        }
        loop {
            if self.eat("?") {
                out.push('?');
                for kw in ["extends", "super"] {
                    if self.eat(kw) {
                        out.push(' ');
                        out.push_str(kw);
                        out.push(' ');
                        out.push_str(&self.parse_type()?);
                    }
                }
            } else {
                out.push_str(&self.parse_type()?);
                // Type parameter bounds on generic methods.
                while self.eat("extends") || self.eat("&") {
                    self.parse_type()?;
                }
            }
            if self.eat(",") {
                out.push(',');
            } else {
                break;
            }
        }
        self.expect(">")?;
        out.push('>');
        Ok(out)
    }

    fn parse_type(&mut self) -> PResult<String> {
        let t = self.peek();
        let mut name = if t.kind == TokenKind::Ident && PRIMITIVES.contains(&t.text.as_str()) {
            self.bump().text
        } else {
            self.ident()?
        };
        loop {
            if self.at("<") {
                name.push_str(&self.type_args()?);
            }
            if self.at(".") && self.peek_at(1).kind == TokenKind::Ident && !is_reserved(&self.peek_at(1).text) {
                self.bump();
                name.push('.');
                name.push_str(&self.ident()?);
            } else {
                break;
            }
        }
        while self.at("[") && self.peek_at(1).is("]") {
            self.bump();
            self.bump();
            name.push_str("[]");
        }
        Ok(name)
    }

    fn try_type(&mut self) -> Option<String> {
        let save = self.pos;
        match self.parse_type() {
            Ok(t) => Some(t),
            Err(_) => {
                self.pos = save;
                None
            }
        }
    }

    fn block(&mut self) -> PResult<(Vec<Stmt>, Token)> {
        self.expect("{")?;
        let mut stmts = Vec::new();
        while !self.at("}") {
            if self.peek().kind == TokenKind::Eof {
                return Err(self.err("unexpected end of input in block"));
            }
            stmts.push(self.stmt()?);
        }
        let close = self.bump();
        Ok((stmts, close))
    }

    /// Recognizes `Type name` at the cursor without consuming it.
    fn local_decl_ahead(&mut self, allow_colon: bool) -> Option<String> {
        let save = self.pos;
        let ty = self.try_type();
        let ok = ty.is_some()
            && self.peek().kind == TokenKind::Ident
            && !is_reserved(&self.peek().text)
            && {
                let next = self.peek_at(1);
                next.is("=") || next.is(";") || next.is(",") || next.is("[") || (allow_colon && next.is(":"))
            };
        self.pos = save;
        if ok {
            ty
        } else {
            None
        }
    }

    fn local_decl(&mut self, line: u32) -> PResult<Stmt> {
        let ty = self.parse_type()?;
        let mut vars = Vec::new();
        loop {
            let var_line = self.peek().line;
            let name = self.ident()?;
            while self.at("[") {
                self.expect("[")?;
                self.expect("]")?;
            }
            let init = if self.eat("=") {
                if self.at("{") {
                    return Err(self.err("array initializers are not supported"));
                }
                Some(self.expr()?)
            } else {
                None
            };
            vars.push(Declarator {
                name,
                init,
                line: var_line,
            });
            if !self.eat(",") {
                break;
            }
        }
        Ok(Stmt {
            kind: StmtKind::Local { ty, vars },
            line,
        })
    }

    fn paren_expr(&mut self) -> PResult<Expr> {
        self.expect("(")?;
        let e = self.expr()?;
        self.expect(")")?;
        Ok(e)
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        let line = self.peek().line;
        let head = self.peek().text.clone();
        let stmt = |kind| Ok(Stmt { kind, line });
        if self.peek().kind == TokenKind::Ident && UNSUPPORTED_STATEMENTS.contains(&head.as_str()) {
            return Err(self.err(format!("`{head}` statements are not supported")));
        }
        match head.as_str() {
            "{" if self.peek().kind == TokenKind::Punct => {
                let (stmts, _) = self.block()?;
                stmt(StmtKind::Block(stmts))
            }
            ";" if self.peek().kind == TokenKind::Punct => {
                self.bump();
                stmt(StmtKind::Empty)
            }
            "if" => {
                self.bump();
                let cond = self.paren_expr()?;
                let then = Box::new(self.stmt()?);
                let otherwise = if self.eat("else") {
                    Some(Box::new(self.stmt()?))
                } else {
                    None
                };
                stmt(StmtKind::If { cond, then, otherwise })
            }
            "while" => {
                self.bump();
                let cond = self.paren_expr()?;
                let body = Box::new(self.stmt()?);
                stmt(StmtKind::While { cond, body })
            }
            "do" => {
                self.bump();
                let body = Box::new(self.stmt()?);
                self.expect("while")?;
                let cond = self.paren_expr()?;
                self.expect(";")?;
                stmt(StmtKind::DoWhile { body, cond })
            }
            "for" => {
                self.bump();
                self.for_stmt(line)
            }
            "return" => {
                self.bump();
                let value = if self.at(";") { None } else { Some(self.expr()?) };
                self.expect(";")?;
                stmt(StmtKind::Return(value))
            }
            "throw" => {
                self.bump();
                let value = self.expr()?;
                self.expect(";")?;
                stmt(StmtKind::Throw(value))
            }
            "break" | "continue" => {
                self.bump();
                if !self.at(";") {
                    return Err(self.err("labeled jumps are not supported"));
                }
                self.bump();
                stmt(if head == "break" {
                    StmtKind::Break
                } else {
                    StmtKind::Continue
                })
            }
            "final" | "@" => {
                self.modifiers()?;
                let s = self.local_decl(line)?;
                self.expect(";")?;
                Ok(s)
            }
            _ => {
                if self.peek().kind == TokenKind::Ident && self.peek_at(1).is(":") {
                    return Err(self.err("labeled statements are not supported"));
                }
                if self.local_decl_ahead(false).is_some() {
                    let s = self.local_decl(line)?;
                    self.expect(";")?;
                    return Ok(s);
                }
                let e = self.expr()?;
                self.expect(";")?;
                stmt(StmtKind::Expr(e))
            }
        }
    }

    fn for_stmt(&mut self, line: u32) -> PResult<Stmt> {
        self.expect("(")?;
        self.modifiers()?;
        if self.local_decl_ahead(true).is_some() {
            let save = self.pos;
            let ty = self.parse_type()?;
            let var = self.ident()?;
            if self.eat(":") {
                let iterable = self.expr()?;
                self.expect(")")?;
                let body = Box::new(self.stmt()?);
                return Ok(Stmt {
                    kind: StmtKind::ForEach { ty, var, iterable, body },
                    line,
                });
            }
            self.pos = save;
        }
        let mut init = Vec::new();
        if !self.at(";") {
            if self.local_decl_ahead(false).is_some() {
                let l = self.peek().line;
                init.push(self.local_decl(l)?);
            } else {
                loop {
                    let e = self.expr()?;
                    init.push(Stmt {
                        line: e.line,
                        kind: StmtKind::Expr(e),
                    });
                    if !self.eat(",") {
                        break;
                    }
                }
            }
        }
        self.expect(";")?;
        let cond = if self.at(";") { None } else { Some(self.expr()?) };
        self.expect(";")?;
        let mut update = Vec::new();
        if !self.at(")") {
            loop {
                update.push(self.expr()?);
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect(")")?;
        let body = Box::new(self.stmt()?);
        Ok(Stmt {
            kind: StmtKind::For { init, cond, update, body },
            line,
        })
    }

    // ---- expressions ----

    pub fn expr(&mut self) -> PResult<Expr> {
        let lhs = self.ternary()?;
        if let Some((op, n)) = self.assign_op() {
            if !matches!(
                lhs.kind,
                ExprKind::Name(_) | ExprKind::Field { .. } | ExprKind::Index { .. }
            ) {
                return Err(self.err("invalid assignment target"));
            }
            self.pos += n;
            let value = self.expr()?;
            let op = op.trim_end_matches('=').to_string();
            return Ok(Expr {
                line: lhs.line,
                kind: ExprKind::Assign {
                    op,
                    target: Box::new(lhs),
                    value: Box::new(value),
                },
            });
        }
        if self.at("->") {
            return Err(self.err("lambda expressions are not supported"));
        }
        Ok(lhs)
    }

    fn assign_op(&self) -> Option<(String, usize)> {
        let t = self.peek();
        if t.kind != TokenKind::Punct {
            return None;
        }
        if ASSIGN_OPS.contains(&t.text.as_str()) {
            return Some((t.text.clone(), 1));
        }
        if t.is(">") && self.peek_at(1).is(">") && self.glued(0) {
            if self.peek_at(2).is("=") && self.glued(1) {
                return Some((">>=".to_string(), 3));
            }
            if self.peek_at(2).is(">") && self.glued(1) && self.peek_at(3).is("=") && self.glued(2) {
                return Some((">>>=".to_string(), 4));
            }
        }
        None
    }

    /// Binary operator at the cursor and how many tokens it spans.
    fn binary_op(&self) -> Option<(String, usize)> {
        let t = self.peek();
        if t.is("instanceof") {
            return Some(("instanceof".to_string(), 1));
        }
        if t.kind != TokenKind::Punct {
            return None;
        }
        if t.is(">") {
            if self.assign_op().is_some() {
                return None;
            }
            if self.glued(0) && self.peek_at(1).is("=") {
                return Some((">=".to_string(), 2));
            }
            if self.glued(0) && self.peek_at(1).is(">") {
                if self.glued(1) && self.peek_at(2).is(">") {
                    return Some((">>>".to_string(), 3));
                }
                return Some((">>".to_string(), 2));
            }
            return Some((">".to_string(), 1));
        }
        precedence(&t.text).map(|_| (t.text.clone(), 1))
    }

    fn ternary(&mut self) -> PResult<Expr> {
        let cond = self.binary(1)?;
        if self.eat("?") {
            let then = self.expr()?;
            self.expect(":")?;
            let otherwise = self.ternary()?;
            return Ok(Expr {
                line: cond.line,
                kind: ExprKind::Ternary {
                    cond: Box::new(cond),
                    then: Box::new(then),
                    otherwise: Box::new(otherwise),
                },
            });
        }
        Ok(cond)
    }

    fn binary(&mut self, min_prec: u8) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        while let Some((op, n)) = self.binary_op() {
            let prec = precedence(&op).unwrap_or(0);
            if prec < min_prec {
                break;
            }
            self.pos += n;
            let line = lhs.line;
            if op == "instanceof" {
                self.eat("final");
                let ty = self.parse_type()?;
                if self.peek().kind == TokenKind::Ident && !is_reserved(&self.peek().text) {
                    return Err(self.err("pattern matching is not supported"));
                }
                lhs = Expr {
                    line,
                    kind: ExprKind::InstanceOf { expr: Box::new(lhs), ty },
                };
            } else {
                let rhs = self.binary(prec + 1)?;
                lhs = Expr {
                    line,
                    kind: ExprKind::Binary {
                        op,
                        lhs: Box::new(lhs),
                        rhs: Box::new(rhs),
                    },
                };
            }
        }
        Ok(lhs)
    }

    fn starts_operand(t: &Token) -> bool {
        match t.kind {
            TokenKind::Int | TokenKind::Float | TokenKind::Str | TokenKind::Char => true,
            TokenKind::Ident => !matches!(t.text.as_str(), "instanceof"),
            TokenKind::Punct => matches!(t.text.as_str(), "(" | "!" | "~"),
            TokenKind::Eof => false,
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        let t = self.peek().clone();
        if t.kind == TokenKind::Punct {
            match t.text.as_str() {
                "+" | "-" | "!" | "~" => {
                    self.bump();
                    let e = self.unary()?;
                    return Ok(Expr {
                        line: t.line,
                        kind: ExprKind::Unary {
                            op: t.text,
                            expr: Box::new(e),
                        },
                    });
                }
                "++" | "--" => {
                    self.bump();
                    let e = self.unary()?;
                    return Ok(Expr {
                        line: t.line,
                        kind: ExprKind::IncDec {
                            target: Box::new(e),
                            increment: t.text == "++",
                            prefix: true,
                        },
                    });
                }
                "(" => {
                    if let Some(cast) = self.try_cast()? {
                        return Ok(cast);
                    }
                }
                _ => {}
            }
        }
        let primary = self.primary()?;
        self.postfix(primary)
    }

    fn try_cast(&mut self) -> PResult<Option<Expr>> {
        let save = self.pos;
        let line = self.bump().line;
        if let Some(ty) = self.try_type() {
            if self.eat(")") {
                let primitive = PRIMITIVES.contains(&ty.split('[').next().unwrap_or(""));
                let next = self.peek();
                let operand = if primitive {
                    Self::starts_operand(next) || next.is("-") || next.is("+")
                } else {
                    Self::starts_operand(next)
                };
                if operand {
                    let e = self.unary()?;
                    return Ok(Some(Expr {
                        line,
                        kind: ExprKind::Cast { ty, expr: Box::new(e) },
                    }));
                }
            }
        }
        self.pos = save;
        Ok(None)
    }

    fn args(&mut self) -> PResult<Vec<Expr>> {
        self.expect("(")?;
        let mut args = Vec::new();
        if self.eat(")") {
            return Ok(args);
        }
        loop {
            args.push(self.expr()?);
            if !self.eat(",") {
                break;
            }
        }
        self.expect(")")?;
        Ok(args)
    }

    fn primary(&mut self) -> PResult<Expr> {
        let t = self.peek().clone();
        let line = t.line;
        let lit = |kind, text: String| Expr {
            line,
            kind: ExprKind::Literal(Literal { kind, text }),
        };
        match t.kind {
            TokenKind::Int => {
                self.bump();
                return Ok(lit(LitKind::Int, t.text));
            }
            TokenKind::Float => {
                self.bump();
                return Ok(lit(LitKind::Float, t.text));
            }
            TokenKind::Str => {
                self.bump();
                return Ok(lit(LitKind::Str, t.text));
            }
            TokenKind::Char => {
                self.bump();
                return Ok(lit(LitKind::Char, t.text));
            }
            TokenKind::Eof => return Err(self.err("unexpected end of input in expression")),
            _ => {}
        }
        match t.text.as_str() {
            "(" if t.kind == TokenKind::Punct => {
                self.bump();
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            "true" | "false" => {
                self.bump();
                Ok(lit(LitKind::Bool, t.text))
            }
            "null" => {
                self.bump();
                Ok(lit(LitKind::Null, t.text))
            }
            "this" => {
                self.bump();
                if self.at("(") {
                    return Err(self.err("explicit constructor calls are not supported"));
                }
                Ok(Expr {
                    line,
                    kind: ExprKind::This,
                })
            }
            "super" => {
                self.bump();
                if self.at("(") {
                    return Err(self.err("explicit constructor calls are not supported"));
                }
                self.expect(".")?;
                let name_tok = self.peek().clone();
                let name = self.ident()?;
                if self.at("(") {
                    let args = self.args()?;
                    Ok(Expr {
                        line: name_tok.line,
                        kind: ExprKind::Call {
                            receiver: None,
                            is_super: true,
                            name,
                            args,
                        },
                    })
                } else {
                    Ok(Expr {
                        line,
                        kind: ExprKind::Field {
                            base: Box::new(Expr {
                                line,
                                kind: ExprKind::This,
                            }),
                            name,
                        },
                    })
                }
            }
            "new" => {
                self.bump();
                let mut class = self.qualified_name()?;
                if self.at("<") {
                    self.type_args()?;
                }
                if self.at("[") {
                    let mut sizes = Vec::new();
                    while self.at("[") && !self.peek_at(1).is("]") {
                        self.bump();
                        sizes.push(self.expr()?);
                        self.expect("]")?;
                    }
                    let mut extra = 0;
                    while self.at("[") {
                        self.bump();
                        self.expect("]")?;
                        extra += 1;
                    }
                    if self.at("{") || sizes.is_empty() {
                        return Err(self.err("array initializers are not supported"));
                    }
                    for _ in 0..extra {
                        class.push_str("[]");
                    }
                    return Ok(Expr {
                        line,
                        kind: ExprKind::NewArray { elem: class, sizes },
                    });
                }
                let args = self.args()?;
                if self.at("{") {
                    return Err(self.err("anonymous classes are not supported"));
                }
                Ok(Expr {
                    line,
                    kind: ExprKind::New { class, args },
                })
            }
            _ if t.kind == TokenKind::Ident && (!is_reserved(&t.text) || PRIMITIVES.contains(&t.text.as_str())) => {
                self.bump();
                if self.at("->") {
                    return Err(self.err("lambda expressions are not supported"));
                }
                if self.at("(") {
                    let args = self.args()?;
                    return Ok(Expr {
                        line,
                        kind: ExprKind::Call {
                            receiver: None,
                            is_super: false,
                            name: t.text,
                            args,
                        },
                    });
                }
                Ok(Expr {
                    line,
                    kind: ExprKind::Name(t.text),
                })
            }
            _ => Err(self.err(format!("unexpected `{}` in expression", t.text))),
        }
    }

    fn postfix(&mut self, mut e: Expr) -> PResult<Expr> {
        loop {
            if self.at(".") {
                self.bump();
                if self.at("<") {
                    self.type_args()?;
                }
                let name_tok = self.peek().clone();
                let name = if name_tok.is("class") {
                    self.bump().text
                } else {
                    self.ident()?
                };
                if self.at("(") {
                    let args = self.args()?;
                    e = Expr {
                        line: name_tok.line,
                        kind: ExprKind::Call {
                            receiver: Some(Box::new(e)),
                            is_super: false,
                            name,
                            args,
                        },
                    };
                } else {
                    e = Expr {
                        line: e.line,
                        kind: ExprKind::Field { base: Box::new(e), name },
                    };
                }
            } else if self.at("[") {
                self.bump();
                let index = self.expr()?;
                self.expect("]")?;
                e = Expr {
                    line: e.line,
                    kind: ExprKind::Index {
                        array: Box::new(e),
                        index: Box::new(index),
                    },
                };
            } else if self.at("++") || self.at("--") {
                let op = self.bump();
                e = Expr {
                    line: e.line,
                    kind: ExprKind::IncDec {
                        target: Box::new(e),
                        increment: op.text == "++",
                        prefix: false,
                    },
                };
            } else if self.at("::") {
                return Err(self.err("method references are not supported"));
            } else {
                return Ok(e);
            }
        }
    }
}

fn literal_of(e: &Expr) -> Option<Literal> {
    match &e.kind {
        ExprKind::Literal(l) => Some(l.clone()),
        ExprKind::Unary { op, expr } if op == "-" => match &expr.kind {
            ExprKind::Literal(l) if matches!(l.kind, LitKind::Int | LitKind::Float) => Some(Literal {
                kind: l.kind,
                text: format!("-{}", l.text),
            }),
            _ => None,
        },
        _ => None,
    }
}

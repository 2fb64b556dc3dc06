//! Recursive-descent parser for programs and formulas.
//!
//! Expressions are parsed through a unified grammar and classified as
//! arithmetic or boolean afterwards: a boolean in integer position is
//! embedded (it evaluates to 0 or 1), while an integer in boolean position
//! is an error. Comparison sugar `>`, `<=`, `>=`, `!=` is desugared onto
//! `<`, `=`, and negation.
//!
//! Grammar sketch:
//!
//! ```text
//! cmd    := atom (';' cmd)?                    trailing ';' allowed
//! atom   := skip | id ':=' expr | assume f | assert f
//!         | if bexpr then '{' cmd '}' else '{' cmd '}'
//!         | while bexpr do '{' cmd '}'
//! f      := basic (',' basic)*
//! basic  := 'A' expr | 'B' bexpr ('=>' 'A' expr)?
//! conj   := cmp ('&&' cmp)*
//! cmp    := arith (('<'|'>'|'<='|'>='|'='|'!=') arith)?
//! arith  := mul (('+'|'-') mul)*
//! mul    := unary ('*' unary)*
//! unary  := '!' unary | '-' unary | int | id | '(' conj ')'
//! ```

use std::fmt;

use super::{BasicFormula, BinOp, BoolExpr, Cmd, Expr, Formula};

/// Position-tagged parse failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at line {}, column {}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

const RESERVED: &[&str] = &[
    "skip", "if", "then", "else", "while", "do", "assume", "assert", "A", "B",
];

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Punct(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, col, msg: msg.into() })
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let mut line = 1usize;
    let mut col = 1usize;

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if let Some(ch) = c {
                if ch == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump!();
            }
            '/' => {
                bump!();
                if chars.peek() == Some(&'/') {
                    while let Some(&ch) = chars.peek() {
                        if ch == '\n' {
                            break;
                        }
                        bump!();
                    }
                } else {
                    return err(tl, tc, "unexpected character '/'");
                }
            }
            '0'..='9' => {
                let mut s = String::new();
                while let Some(&ch) = chars.peek() {
                    if ch.is_ascii_digit() {
                        s.push(ch);
                        bump!();
                    } else {
                        break;
                    }
                }
                match s.parse::<i64>() {
                    Ok(n) => out.push(Token { tok: Tok::Int(n), line: tl, col: tc }),
                    Err(_) => return err(tl, tc, format!("integer literal '{s}' out of range")),
                }
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut s = String::new();
                while let Some(&ch) = chars.peek() {
                    if ch.is_ascii_alphanumeric() || ch == '_' {
                        s.push(ch);
                        bump!();
                    } else {
                        break;
                    }
                }
                out.push(Token { tok: Tok::Ident(s), line: tl, col: tc });
            }
            _ => {
                bump!();
                macro_rules! two {
                    ($want:expr) => {
                        chars.peek() == Some(&$want)
                    };
                }
                let punct: &'static str = match c {
                    ';' => ";",
                    ',' => ",",
                    '(' => "(",
                    ')' => ")",
                    '{' => "{",
                    '}' => "}",
                    '+' => "+",
                    '-' => "-",
                    '*' => "*",
                    '<' => {
                        if two!('=') {
                            bump!();
                            "<="
                        } else {
                            "<"
                        }
                    }
                    '>' => {
                        if two!('=') {
                            bump!();
                            ">="
                        } else {
                            ">"
                        }
                    }
                    '=' => {
                        if two!('>') {
                            bump!();
                            "=>"
                        } else {
                            "="
                        }
                    }
                    '!' => {
                        if two!('=') {
                            bump!();
                            "!="
                        } else {
                            "!"
                        }
                    }
                    ':' => {
                        if two!('=') {
                            bump!();
                            ":="
                        } else {
                            return err(tl, tc, "expected ':=' after ':'");
                        }
                    }
                    '&' => {
                        if two!('&') {
                            bump!();
                            "&&"
                        } else {
                            return err(tl, tc, "expected '&&' after '&'");
                        }
                    }
                    other => return err(tl, tc, format!("unexpected character '{other}'")),
                };
                out.push(Token { tok: Tok::Punct(punct), line: tl, col: tc });
            }
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

/// Result of the unified expression grammar before classification.
enum PVal {
    Arith(Expr),
    Boolish(BoolExpr),
}

impl PVal {
    fn into_expr(self) -> Expr {
        match self {
            PVal::Arith(e) => e,
            PVal::Boolish(b) => Expr::embed(b),
        }
    }

    fn into_bool(self, line: usize, col: usize) -> Result<BoolExpr, ParseError> {
        match self {
            PVal::Boolish(b) => Ok(b),
            PVal::Arith(_) => err(
                line,
                col,
                "expected a boolean expression (a comparison, '!', or '&&')",
            ),
        }
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn at_punct(&self, p: &str) -> bool {
        matches!(&self.peek().tok, Tok::Punct(q) if *q == p)
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn expect_punct(&mut self, p: &'static str) -> Result<(), ParseError> {
        let t = self.next();
        match t.tok {
            Tok::Punct(q) if q == p => Ok(()),
            other => err(t.line, t.col, format!("expected '{p}', found {}", describe(&other))),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) if s == kw => Ok(()),
            other => err(t.line, t.col, format!("expected '{kw}', found {}", describe(other))),
        }
    }

    // Unified expression grammar.

    fn conj(&mut self) -> Result<PVal, ParseError> {
        let (l, c) = (self.peek().line, self.peek().col);
        let mut acc = self.cmp()?;
        while self.at_punct("&&") {
            self.next();
            let lhs = acc.into_bool(l, c)?;
            let (rl, rc) = (self.peek().line, self.peek().col);
            let rhs = self.cmp()?.into_bool(rl, rc)?;
            acc = PVal::Boolish(BoolExpr::and(lhs, rhs));
        }
        Ok(acc)
    }

    fn cmp(&mut self) -> Result<PVal, ParseError> {
        let lhs = self.arith()?;
        let op = match &self.peek().tok {
            Tok::Punct(p @ ("<" | ">" | "<=" | ">=" | "=" | "!=")) => *p,
            _ => return Ok(lhs),
        };
        self.next();
        let rhs = self.arith()?;
        let (a, b) = (lhs.into_expr(), rhs.into_expr());
        let be = match op {
            "<" => BoolExpr::Lt(a, b),
            ">" => BoolExpr::Lt(b, a),
            "<=" => !BoolExpr::Lt(b, a),
            ">=" => !BoolExpr::Lt(a, b),
            "=" => BoolExpr::Eq(a, b),
            "!=" => !BoolExpr::Eq(a, b),
            _ => unreachable!(),
        };
        Ok(PVal::Boolish(be))
    }

    fn arith(&mut self) -> Result<PVal, ParseError> {
        let mut acc = self.mul()?;
        loop {
            let op = match &self.peek().tok {
                Tok::Punct("+") => BinOp::Add,
                Tok::Punct("-") => BinOp::Sub,
                _ => break,
            };
            self.next();
            let rhs = self.mul()?;
            acc = PVal::Arith(Expr::bin(op, acc.into_expr(), rhs.into_expr()));
        }
        Ok(acc)
    }

    fn mul(&mut self) -> Result<PVal, ParseError> {
        let mut acc = self.unary()?;
        while self.at_punct("*") {
            self.next();
            let rhs = self.unary()?;
            acc = PVal::Arith(Expr::bin(BinOp::Mul, acc.into_expr(), rhs.into_expr()));
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<PVal, ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Punct("!") => {
                self.next();
                let (l, c) = (self.peek().line, self.peek().col);
                let inner = self.unary()?.into_bool(l, c)?;
                Ok(PVal::Boolish(!inner))
            }
            Tok::Punct("-") => {
                self.next();
                let inner = self.unary()?.into_expr();
                Ok(PVal::Arith(match inner {
                    Expr::Num(n) => Expr::Num(-n),
                    e => Expr::bin(BinOp::Sub, Expr::Num(0), e),
                }))
            }
            Tok::Int(n) => {
                self.next();
                Ok(PVal::Arith(Expr::Num(*n)))
            }
            Tok::Ident(name) => {
                if RESERVED.contains(&name.as_str()) {
                    return err(t.line, t.col, format!("'{name}' is a reserved word"));
                }
                self.next();
                Ok(PVal::Arith(Expr::Var(name.clone())))
            }
            Tok::Punct("(") => {
                self.next();
                let v = self.conj()?;
                self.expect_punct(")")?;
                Ok(v)
            }
            other => err(t.line, t.col, format!("expected an expression, found {}", describe(other))),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        Ok(self.conj()?.into_expr())
    }

    fn bool_expr(&mut self) -> Result<BoolExpr, ParseError> {
        let (l, c) = (self.peek().line, self.peek().col);
        self.conj()?.into_bool(l, c)
    }

    // Formulas.

    fn basic_formula(&mut self) -> Result<BasicFormula, ParseError> {
        let t = self.peek().clone();
        if self.at_keyword("A") {
            self.next();
            Ok(BasicFormula::Agree(self.expr()?))
        } else if self.at_keyword("B") {
            self.next();
            let b = self.bool_expr()?;
            if self.at_punct("=>") {
                self.next();
                self.expect_keyword("A")?;
                Ok(BasicFormula::CondAgree(b, self.expr()?))
            } else {
                Ok(BasicFormula::Both(b))
            }
        } else {
            err(t.line, t.col, format!("expected 'A' or 'B', found {}", describe(&t.tok)))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut basics = vec![self.basic_formula()?];
        while self.at_punct(",") {
            self.next();
            basics.push(self.basic_formula()?);
        }
        Ok(Formula::new(basics))
    }

    // Commands.

    fn block(&mut self) -> Result<Cmd, ParseError> {
        self.expect_punct("{")?;
        let c = self.cmd()?;
        self.expect_punct("}")?;
        Ok(c)
    }

    fn atom_cmd(&mut self) -> Result<Cmd, ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Ident(name) => {
                if name == "skip" {
                    self.next();
                    Ok(Cmd::Skip)
                } else if name == "assume" {
                    self.next();
                    Ok(Cmd::Assume(self.formula()?))
                } else if name == "assert" {
                    self.next();
                    Ok(Cmd::Assert(self.formula()?))
                } else if name == "if" {
                    self.next();
                    let b = self.bool_expr()?;
                    self.expect_keyword("then")?;
                    let c1 = self.block()?;
                    self.expect_keyword("else")?;
                    let c0 = self.block()?;
                    Ok(Cmd::ite(b, c1, c0))
                } else if name == "while" {
                    self.next();
                    let b = self.bool_expr()?;
                    self.expect_keyword("do")?;
                    let body = self.block()?;
                    Ok(Cmd::while_do(b, body))
                } else if RESERVED.contains(&name.as_str()) {
                    err(t.line, t.col, format!("unexpected '{name}' at start of a command"))
                } else {
                    let name = name.clone();
                    self.next();
                    self.expect_punct(":=")?;
                    Ok(Cmd::Assign(name, self.expr()?))
                }
            }
            other => err(t.line, t.col, format!("expected a command, found {}", describe(other))),
        }
    }

    fn cmd(&mut self) -> Result<Cmd, ParseError> {
        let first = self.atom_cmd()?;
        if self.at_punct(";") {
            self.next();
            // Trailing separator before a closing brace or end of input.
            if self.at_punct("}") || matches!(self.peek().tok, Tok::Eof) {
                return Ok(first);
            }
            let rest = self.cmd()?;
            return Ok(Cmd::seq(first, rest));
        }
        Ok(first)
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Int(n) => format!("'{n}'"),
        Tok::Punct(p) => format!("'{p}'"),
        Tok::Eof => "end of input".to_string(),
    }
}

fn finish<T>(p: &mut Parser, v: T) -> Result<T, ParseError> {
    let t = p.peek();
    match t.tok {
        Tok::Eof => Ok(v),
        ref other => err(t.line, t.col, format!("expected end of input, found {}", describe(other))),
    }
}

/// Parses a complete program.
pub fn parse_program(src: &str) -> Result<Cmd, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let c = p.cmd()?;
    finish(&mut p, c)
}

/// Parses a formula, e.g. `A x + 1, B y < z => A y`.
pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let f = p.formula()?;
    finish(&mut p, f)
}

/// Parses a single integer expression (booleans embed).
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.expr()?;
    finish(&mut p, e)
}

/// Parses a single boolean expression.
pub fn parse_bool(src: &str) -> Result<BoolExpr, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let b = p.bool_expr()?;
    finish(&mut p, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_assignment_chain() {
        let c = parse_program("x := 1; y := x + 2 * 3; skip").unwrap();
        let expected = Cmd::seq(
            Cmd::assign("x", Expr::Num(1)),
            Cmd::seq(
                Cmd::assign(
                    "y",
                    Expr::bin(
                        BinOp::Add,
                        Expr::var("x"),
                        Expr::bin(BinOp::Mul, Expr::Num(2), Expr::Num(3)),
                    ),
                ),
                Cmd::Skip,
            ),
        );
        assert_eq!(c, expected);
    }

    #[test]
    fn desugars_comparisons() {
        assert_eq!(
            parse_bool("x > 0").unwrap(),
            BoolExpr::Lt(Expr::Num(0), Expr::var("x"))
        );
        assert_eq!(
            parse_bool("x <= y").unwrap(),
            !BoolExpr::Lt(Expr::var("y"), Expr::var("x"))
        );
        assert_eq!(
            parse_bool("x != y").unwrap(),
            !BoolExpr::Eq(Expr::var("x"), Expr::var("y"))
        );
    }

    #[test]
    fn embeds_parenthesized_booleans() {
        let e = parse_expr("(x < y) + 1").unwrap();
        assert_eq!(
            e,
            Expr::bin(
                BinOp::Add,
                Expr::embed(BoolExpr::Lt(Expr::var("x"), Expr::var("y"))),
                Expr::Num(1)
            )
        );
    }

    #[test]
    fn rejects_arithmetic_in_guard_position() {
        let e = parse_program("if x then { skip } else { skip }").unwrap_err();
        assert!(e.msg.contains("boolean"));
    }

    #[test]
    fn rejects_not_on_arithmetic() {
        assert!(parse_bool("!x").is_err());
    }

    #[test]
    fn parses_conditional_formulas() {
        let f = parse_formula("A seed, B 0 < secret => A seed * 2").unwrap();
        assert_eq!(f.basics().len(), 2);
        match &f.basics()[1] {
            BasicFormula::CondAgree(b, e) => {
                assert_eq!(*b, BoolExpr::Lt(Expr::Num(0), Expr::var("secret")));
                assert_eq!(*e, Expr::bin(BinOp::Mul, Expr::var("seed"), Expr::Num(2)));
            }
            other => panic!("expected conditional agreement, got {other:?}"),
        }
    }

    #[test]
    fn parses_annotated_branching_program() {
        let src = "\
// Branch on a secret, then overwrite.
assume A public;
if 0 < secret then {
  public := public + 1;
} else {
  skip;
};
y := 0;
assert A y
";
        let c = parse_program(src).unwrap();
        let vars = c.vars();
        assert!(vars.contains("public") && vars.contains("secret") && vars.contains("y"));
    }

    #[test]
    fn trailing_semicolon_and_comments_ok() {
        assert!(parse_program("x := 1;").is_ok());
        assert!(parse_program("x := 1; // done").is_ok());
        assert!(parse_program("while x < 3 do { x := x + 1; }").is_ok());
    }

    #[test]
    fn reserved_words_are_not_variables() {
        assert!(parse_program("if := 1").is_err());
        assert!(parse_program("x := then").is_err());
    }

    #[test]
    fn negative_literals() {
        assert_eq!(parse_expr("-5").unwrap(), Expr::Num(-5));
        assert_eq!(
            parse_expr("-x").unwrap(),
            Expr::bin(BinOp::Sub, Expr::Num(0), Expr::var("x"))
        );
    }

    #[test]
    fn comparisons_do_not_associate() {
        assert!(parse_bool("x < y < z").is_err());
    }

    #[test]
    fn error_carries_position() {
        let e = parse_program("x :=\n  @").unwrap_err();
        assert_eq!((e.line, e.col), (2, 3));
    }
}

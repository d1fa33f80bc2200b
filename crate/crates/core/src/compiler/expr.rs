use num_bigint::BigInt;

use super::CompileError;
use crate::Polynomial;

/// Parsed polynomial expression over integer literals and `x1, x2, ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyExpr {
    Int(BigInt),
    Var(usize),
    Neg(Box<PolyExpr>),
    Add(Box<PolyExpr>, Box<PolyExpr>),
    Sub(Box<PolyExpr>, Box<PolyExpr>),
    Mul(Box<PolyExpr>, Box<PolyExpr>),
    Pow(Box<PolyExpr>, u32),
}

impl PolyExpr {
    /// Largest variable index mentioned, 0 if none.
    pub fn max_var(&self) -> usize {
        match self {
            PolyExpr::Int(_) => 0,
            PolyExpr::Var(i) => *i,
            PolyExpr::Neg(a) | PolyExpr::Pow(a, _) => a.max_var(),
            PolyExpr::Add(a, b) | PolyExpr::Sub(a, b) | PolyExpr::Mul(a, b) => {
                a.max_var().max(b.max_var())
            }
        }
    }

    pub fn expand(&self, vars: usize) -> Polynomial {
        match self {
            PolyExpr::Int(c) => Polynomial::constant(vars, c.clone()),
            PolyExpr::Var(i) => Polynomial::var(vars, *i),
            PolyExpr::Neg(a) => -&a.expand(vars),
            PolyExpr::Add(a, b) => &a.expand(vars) + &b.expand(vars),
            PolyExpr::Sub(a, b) => &a.expand(vars) - &b.expand(vars),
            PolyExpr::Mul(a, b) => &a.expand(vars) * &b.expand(vars),
            PolyExpr::Pow(a, e) => a.expand(vars).pow(*e),
        }
    }
}

/// Parses and expands. The variable count is the largest index mentioned.
pub fn parse_poly(text: &str) -> Result<Polynomial, CompileError> {
    let expr = parse_poly_expr(text)?;
    Ok(expr.expand(expr.max_var()))
}

// expr  := term (('+' | '-') term)*
// term  := unary ('*' unary)*
// unary := '-' unary | power
// power := atom ('^' literal)*
// atom  := integer | 'x' index | '(' expr ')'
pub fn parse_poly_expr(text: &str) -> Result<PolyExpr, CompileError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> CompileError {
        CompileError::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits")
    }

    fn expr(&mut self) -> Result<PolyExpr, CompileError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = PolyExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = PolyExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<PolyExpr, CompileError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            lhs = PolyExpr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<PolyExpr, CompileError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(PolyExpr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<PolyExpr, CompileError> {
        let mut base = self.atom()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let position = self.pos;
            let lit = self.digits();
            if lit.is_empty() {
                return Err(CompileError::ExponentNotLiteral { position });
            }
            let e: u32 = lit.parse().map_err(|_| CompileError::Syntax {
                position,
                message: "exponent too large".into(),
            })?;
            base = PolyExpr::Pow(Box::new(base), e);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<PolyExpr, CompileError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'x') => {
                self.pos += 1;
                let position = self.pos;
                let lit = self.digits();
                let index: usize = lit.parse().map_err(|_| CompileError::Syntax {
                    position,
                    message: "expected a variable index".into(),
                })?;
                if index == 0 {
                    return Err(CompileError::Syntax {
                        position,
                        message: "variable indices start at 1".into(),
                    });
                }
                Ok(PolyExpr::Var(index))
            }
            Some(c) if c.is_ascii_digit() => {
                let lit = self.digits();
                Ok(PolyExpr::Int(lit.parse().expect("digits parse")))
            }
            Some(_) => Err(self.error("expected a number, variable or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

//! Arithmetic expressions over named variables with forward-mode gradients.

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("unexpected character {0:?} at offset {1}")]
    BadChar(char, usize),
    #[error("unexpected token at offset {0}")]
    Unexpected(usize),
    #[error("unexpected end of input")]
    Eof,
    #[error("unknown variable or constant {0:?}")]
    UnknownName(String),
    #[error("unknown function {0:?}")]
    UnknownFunction(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
    Sinh,
    Cosh,
    Tanh,
}

impl Func {
    fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "ln" | "log" => Func::Ln,
            "sqrt" => Func::Sqrt,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "tanh" => Func::Tanh,
            _ => return None,
        })
    }

    // value and derivative
    fn apply<T: Real>(self, x: T) -> (T, T) {
        match self {
            Func::Sin => (x.sin(), x.cos()),
            Func::Cos => (x.cos(), -x.sin()),
            Func::Exp => (x.exp(), x.exp()),
            Func::Ln => (x.ln(), x.recip()),
            Func::Sqrt => {
                let r = x.sqrt();
                (r, T::lit(0.5) / r)
            }
            Func::Sinh => (x.sinh(), x.cosh()),
            Func::Cosh => (x.cosh(), x.sinh()),
            Func::Tanh => {
                let t = x.tanh();
                (t, T::one() - t * t)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_digit() || chars[i].1 == '.') {
                i += 1;
            }
            // exponent part
            if i < chars.len() && matches!(chars[i].1, 'e' | 'E') {
                let mut j = i + 1;
                if j < chars.len() && matches!(chars[j].1, '+' | '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].1.is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].1.is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().map(|c| c.1).collect();
            let v = text.parse().map_err(|_| ExprError::BadChar(c, pos))?;
            out.push((Tok::Num(v), pos));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().map(|c| c.1).collect()), pos));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), pos));
            i += 1;
        } else {
            return Err(ExprError::BadChar(c, pos));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(usize::MAX, |t| t.1)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat('^') {
            return Ok(Expr::Pow(Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let at = self.offset();
        let tok = self.peek().cloned().ok_or(ExprError::Eof)?;
        self.pos += 1;
        match tok {
            Tok::Num(v) => Ok(Expr::Const(v)),
            Tok::Op('(') => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.unexpected());
                }
                Ok(e)
            }
            Tok::Ident(name) => {
                if self.eat('(') {
                    let f = Func::parse(&name).ok_or(ExprError::UnknownFunction(name))?;
                    let arg = self.expr()?;
                    if !self.eat(')') {
                        return Err(self.unexpected());
                    }
                    return Ok(Expr::Call(f, Box::new(arg)));
                }
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    return Ok(Expr::Var(i));
                }
                match name.as_str() {
                    "pi" => Ok(Expr::Const(std::f64::consts::PI)),
                    "e" => Ok(Expr::Const(std::f64::consts::E)),
                    _ => Err(ExprError::UnknownName(name)),
                }
            }
            Tok::Op(_) => Err(ExprError::Unexpected(at)),
        }
    }

    fn unexpected(&self) -> ExprError {
        if self.pos >= self.toks.len() {
            ExprError::Eof
        } else {
            ExprError::Unexpected(self.offset())
        }
    }
}

impl Expr {
    pub fn parse(src: &str, vars: &[String]) -> Result<Self, ExprError> {
        let mut p = Parser {
            toks: lex(src)?,
            pos: 0,
            vars,
        };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(p.unexpected());
        }
        Ok(e)
    }

    pub fn eval<T: Real>(&self, x: &[T]) -> T {
        match self {
            Expr::Const(c) => T::lit(*c),
            Expr::Var(i) => x[*i],
            Expr::Neg(a) => -a.eval(x),
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => a.eval(x) / b.eval(x),
            Expr::Pow(a, b) => match b.as_integer() {
                Some(n) => a.eval(x).powi(n),
                None => a.eval(x).powf(b.eval(x)),
            },
            Expr::Call(f, a) => f.apply(a.eval(x)).0,
        }
    }

    fn as_integer(&self) -> Option<i32> {
        match self {
            Expr::Const(c) if c.fract() == 0.0 && c.abs() < 1e6 => Some(*c as i32),
            Expr::Neg(a) => a.as_integer().map(|n| -n),
            _ => None,
        }
    }

    /// Value and gradient by forward-mode differentiation.
    pub fn eval_grad<T: Real>(&self, x: &[T]) -> (T, Vec<T>) {
        let n = x.len();
        let zero = || vec![T::zero(); n];
        match self {
            Expr::Const(c) => (T::lit(*c), zero()),
            Expr::Var(i) => {
                let mut g = zero();
                g[*i] = T::one();
                (x[*i], g)
            }
            Expr::Neg(a) => {
                let (v, g) = a.eval_grad(x);
                (-v, g.into_iter().map(|d| -d).collect())
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let s = if matches!(self, Expr::Add(..)) {
                    T::one()
                } else {
                    -T::one()
                };
                let (va, ga) = a.eval_grad(x);
                let (vb, gb) = b.eval_grad(x);
                (va + s * vb, ga.iter().zip(&gb).map(|(&p, &q)| p + s * q).collect())
            }
            Expr::Mul(a, b) => {
                let (va, ga) = a.eval_grad(x);
                let (vb, gb) = b.eval_grad(x);
                (va * vb, ga.iter().zip(&gb).map(|(&p, &q)| p * vb + va * q).collect())
            }
            Expr::Div(a, b) => {
                let (va, ga) = a.eval_grad(x);
                let (vb, gb) = b.eval_grad(x);
                let v = va / vb;
                (v, ga.iter().zip(&gb).map(|(&p, &q)| (p - v * q) / vb).collect())
            }
            Expr::Pow(a, b) => {
                let (va, ga) = a.eval_grad(x);
                if let Some(k) = b.as_integer() {
                    let d = if k == 0 {
                        T::zero()
                    } else {
                        T::lit(k as f64) * va.powi(k - 1)
                    };
                    return (va.powi(k), ga.into_iter().map(|p| p * d).collect());
                }
                let (vb, gb) = b.eval_grad(x);
                let v = va.powf(vb);
                let ln = va.ln();
                (
                    v,
                    ga.iter().zip(&gb).map(|(&p, &q)| v * (q * ln + vb * p / va)).collect(),
                )
            }
            Expr::Call(f, a) => {
                let (va, ga) = a.eval_grad(x);
                let (v, d) = f.apply(va);
                (v, ga.into_iter().map(|p| p * d).collect())
            }
        }
    }
}

//! Recursive-descent parser for the small arithmetic grammar over the
//! variable `X`. Supported: `+ - * / ^` (integer exponents), unary minus,
//! parentheses, decimal and scientific literals, and the functions
//! `sin cos tanh exp sqrt abs`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tanh,
    Exp,
    Sqrt,
    Abs,
}

impl Func {
    pub fn apply(self, v: f64) -> f64 {
        match self {
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Tanh => v.tanh(),
            Func::Exp => v.exp(),
            Func::Sqrt => v.sqrt(),
            Func::Abs => v.abs(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        match name {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "tanh" => Some(Func::Tanh),
            "exp" => Some(Func::Exp),
            "sqrt" => Some(Func::Sqrt),
            "abs" => Some(Func::Abs),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Expr::Num(c) => *c,
            Expr::Var => x,
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => a.eval(x) / b.eval(x),
            Expr::Neg(a) => -a.eval(x),
            Expr::Pow(a, n) => a.eval(x).powi(*n),
            Expr::Call(f, a) => f.apply(a.eval(x)),
        }
    }

    /// Coefficients (ascending degree) when the expression is a polynomial
    /// in `X`, `None` otherwise. Degrees above 64 are left as expressions.
    pub fn as_polynomial(&self) -> Option<Vec<f64>> {
        const MAX_DEGREE: usize = 64;
        fn add(a: &[f64], b: &[f64], sign: f64) -> Vec<f64> {
            let n = a.len().max(b.len());
            (0..n)
                .map(|i| {
                    a.get(i).copied().unwrap_or(0.0) + sign * b.get(i).copied().unwrap_or(0.0)
                })
                .collect()
        }
        fn mul(a: &[f64], b: &[f64]) -> Option<Vec<f64>> {
            if a.len() + b.len() - 2 > MAX_DEGREE {
                return None;
            }
            let mut out = vec![0.0; a.len() + b.len() - 1];
            for (i, &ai) in a.iter().enumerate() {
                for (j, &bj) in b.iter().enumerate() {
                    out[i + j] += ai * bj;
                }
            }
            Some(out)
        }
        match self {
            Expr::Num(c) => Some(vec![*c]),
            Expr::Var => Some(vec![0.0, 1.0]),
            Expr::Add(a, b) => Some(add(&a.as_polynomial()?, &b.as_polynomial()?, 1.0)),
            Expr::Sub(a, b) => Some(add(&a.as_polynomial()?, &b.as_polynomial()?, -1.0)),
            Expr::Mul(a, b) => mul(&a.as_polynomial()?, &b.as_polynomial()?),
            Expr::Div(a, b) => {
                let num = a.as_polynomial()?;
                let den = b.as_polynomial()?;
                // Only division by a nonzero constant stays polynomial.
                if den.len() == 1 && den[0] != 0.0 {
                    Some(num.iter().map(|c| c / den[0]).collect())
                } else {
                    None
                }
            }
            Expr::Neg(a) => Some(a.as_polynomial()?.iter().map(|c| -c).collect()),
            Expr::Pow(a, n) => {
                if *n < 0 {
                    return None;
                }
                let base = a.as_polynomial()?;
                let mut out = vec![1.0];
                for _ in 0..*n {
                    out = mul(&out, &base)?;
                }
                Some(out)
            }
            Expr::Call(_, _) => None,
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self { src: src.as_bytes(), pos: 0 }
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

    fn err(&self, expected: &str) -> Error {
        Error::Parse { offset: self.pos, expected: expected.into() }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let n = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    /// Exponents are literal (optionally negated) integers.
    fn exponent(&mut self) -> Result<i32> {
        let mut neg = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            neg = true;
        }
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {}
            _ => return Err(self.err("integer exponent")),
        }
        let (value, len) = self.scan_number(self.pos)?;
        if value.fract() != 0.0 || value.abs() > i32::MAX as f64 {
            return Err(Error::NonIntegerExponent { offset: start });
        }
        self.pos += len;
        let n = value as i32;
        Ok(if neg { -n } else { n })
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let (value, len) = self.scan_number(self.pos)?;
                self.pos += len;
                Ok(Expr::Num(value))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self
                    .src
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if name == "X" {
                    return Ok(Expr::Var);
                }
                if let Some(func) = Func::from_name(name) {
                    if self.peek() != Some(b'(') {
                        return Err(self.err("'('"));
                    }
                    self.pos += 1;
                    let arg = self.expr()?;
                    if self.peek() != Some(b')') {
                        return Err(self.err("')'"));
                    }
                    self.pos += 1;
                    return Ok(Expr::Call(func, Box::new(arg)));
                }
                self.pos = start;
                Err(self.err("'X' or one of sin, cos, tanh, exp, sqrt, abs"))
            }
            _ => Err(self.err("number, 'X', function, '(' or '-'")),
        }
    }

    /// Scans a decimal or scientific literal starting at `at`; returns the
    /// value and its byte length without consuming it.
    fn scan_number(&self, at: usize) -> Result<(f64, usize)> {
        let mut end = at;
        while self.src.get(end).is_some_and(|c| c.is_ascii_digit()) {
            end += 1;
        }
        if self.src.get(end) == Some(&b'.') {
            end += 1;
            while self.src.get(end).is_some_and(|c| c.is_ascii_digit()) {
                end += 1;
            }
        }
        if matches!(self.src.get(end), Some(b'e') | Some(b'E')) {
            let mut exp_end = end + 1;
            if matches!(self.src.get(exp_end), Some(b'+') | Some(b'-')) {
                exp_end += 1;
            }
            if self.src.get(exp_end).is_some_and(|c| c.is_ascii_digit()) {
                while self.src.get(exp_end).is_some_and(|c| c.is_ascii_digit()) {
                    exp_end += 1;
                }
                end = exp_end;
            }
        }
        if end == at {
            return Err(Error::Parse { offset: at, expected: "number".into() });
        }
        let text = std::str::from_utf8(&self.src[at..end]).unwrap();
        let value: f64 = text
            .parse()
            .map_err(|_| Error::Parse { offset: at, expected: "number".into() })?;
        Ok((value, end - at))
    }
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut parser = Parser::new(text);
    let expr = parser.expr()?;
    if parser.peek().is_some() {
        return Err(parser.err("end of input or operator"));
    }
    Ok(expr)
}

/// Formats polynomial coefficients back into parseable source text.
pub fn format_polynomial(coeffs: &[f64]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (i, &c) in coeffs.iter().enumerate() {
        if c == 0.0 && coeffs.len() > 1 {
            continue;
        }
        let term = match i {
            0 => format!("{c}"),
            1 => format!("{c}*X"),
            _ => format!("{c}*X^{i}"),
        };
        parts.push(term);
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, term) in parts.iter().enumerate() {
        if i == 0 {
            out.push_str(term);
        } else if let Some(rest) = term.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(term);
        }
    }
    out
}

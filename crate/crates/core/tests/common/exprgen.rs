//! Random expression trees and a string interpreter that evaluates source
//! text directly, without building a tree.

use heatgraph::expr::{BinOp, Expr, Func};
use proptest::prelude::*;

pub fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0u32..1000).prop_map(|n| Expr::num(f64::from(n))),
        (0.0f64..100.0).prop_map(Expr::num),
        Just(Expr::Var),
    ];
    leaf.prop_recursive(5, 40, 3, |inner| {
        let op = prop_oneof![
            Just(BinOp::Add),
            Just(BinOp::Sub),
            Just(BinOp::Mul),
            Just(BinOp::Div),
            Just(BinOp::Pow),
        ];
        prop_oneof![
            inner.clone().prop_map(Expr::negated),
            (op, inner.clone(), inner.clone()).prop_map(|(o, a, b)| Expr::bin(o, a, b)),
            (prop::sample::select(Func::ALL.to_vec()), prop::collection::vec(inner, 2)).prop_map(|(f, mut args)| {
                args.truncate(f.arity());
                Expr::call(f, args)
            }),
        ]
    })
}

/// Evaluates `src` at `r` in one pass; `None` on syntax or domain errors.
pub fn interpret(src: &str, r: f64) -> Option<f64> {
    let mut p = Interp { s: src.as_bytes(), i: 0, r };
    let v = p.sum()?;
    p.skip_ws();
    (p.i == p.s.len()).then_some(v)
}

struct Interp<'a> {
    s: &'a [u8],
    i: usize,
    r: f64,
}

impl Interp<'_> {
    fn skip_ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.i).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Option<f64> {
        let mut acc = self.product()?;
        loop {
            if self.eat(b'+') {
                acc += self.product()?;
            } else if self.eat(b'-') {
                acc -= self.product()?;
            } else {
                return Some(acc);
            }
        }
    }

    fn product(&mut self) -> Option<f64> {
        let mut acc = self.signed()?;
        loop {
            if self.eat(b'*') {
                acc *= self.signed()?;
            } else if self.eat(b'/') {
                let d = self.signed()?;
                if d == 0.0 {
                    return None;
                }
                acc /= d;
            } else {
                return Some(acc);
            }
        }
    }

    /// Negation binds looser than `^`, which takes a signed exponent.
    fn signed(&mut self) -> Option<f64> {
        if self.eat(b'-') {
            return Some(-self.signed()?);
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let exp = self.signed()?;
            return pow(base, exp);
        }
        Some(base)
    }

    fn atom(&mut self) -> Option<f64> {
        if self.eat(b'(') {
            let v = self.sum()?;
            return self.eat(b')').then_some(v);
        }
        let c = self.peek()?;
        if c.is_ascii_digit() || c == b'.' {
            let start = self.i;
            while self.i < self.s.len() && (self.s[self.i].is_ascii_digit() || self.s[self.i] == b'.') {
                self.i += 1;
            }
            return std::str::from_utf8(&self.s[start..self.i]).ok()?.parse().ok();
        }
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_alphabetic() {
            self.i += 1;
        }
        let name = std::str::from_utf8(&self.s[start..self.i]).ok()?;
        if name == "r" {
            return Some(self.r);
        }
        if !self.eat(b'(') {
            return None;
        }
        let mut args = vec![self.sum()?];
        while self.eat(b',') {
            args.push(self.sum()?);
        }
        if !self.eat(b')') {
            return None;
        }
        match (name, args.as_slice()) {
            ("exp", [x]) => Some(x.exp()),
            ("log", [x]) => (*x > 0.0).then(|| x.ln()),
            ("sqrt", [x]) => (*x >= 0.0).then(|| x.sqrt()),
            ("abs", [x]) => Some(x.abs()),
            ("min", [x, y]) => Some(x.min(*y)),
            ("max", [x, y]) => Some(x.max(*y)),
            ("pow", [x, y]) => pow(*x, *y),
            ("fact", [x]) => fact(*x),
            _ => None,
        }
    }
}

fn pow(x: f64, y: f64) -> Option<f64> {
    if x == 0.0 && y < 0.0 {
        return None;
    }
    let v = x.powf(y);
    (!v.is_nan()).then_some(v)
}

fn fact(x: f64) -> Option<f64> {
    if !(x >= 0.0 && x.is_finite() && x == x.floor()) {
        return None;
    }
    let n = x as u64;
    let mut acc = 1.0f64;
    for k in 2..=n {
        acc *= k as f64;
        if acc.is_infinite() {
            break;
        }
    }
    Some(acc)
}

/// Parse and evaluation cases: source, `r`, expected value.
pub const GOLDEN: [(&str, i64, f64); 20] = [
    ("2^-r", 3, 0.125),
    ("1/(r*r)", 2, 0.25),
    ("max(1, r-1)", 0, 1.0),
    ("2^-r/(1+abs(2 - r))", 4, 0.0625 / 3.0),
    ("-2^2", 0, -4.0),
    ("2^3^2", 0, 512.0),
    ("1-2-3", 0, -4.0),
    ("8/4/2", 0, 1.0),
    ("2*3+4", 0, 10.0),
    (" 1 +  2 * r ", 3, 7.0),
    ("--r", 2, 2.0),
    ("-r^2", 3, -9.0),
    ("(r+1)*(r-1)", 4, 15.0),
    ("fact(5)", 0, 120.0),
    ("1/fact(r)^2", 3, 1.0 / 36.0),
    ("pow(2, 10)", 0, 1024.0),
    ("sqrt(16) + exp(0) + log(1)", 0, 5.0),
    ("min(3, r)", 1, 1.0),
    ("abs(-3)*r", -2, -6.0),
    ("4^r", 2, 16.0),
];

/// Inputs whose evaluation must fail: source, `r`.
pub const DOMAIN_ERRORS: [(&str, i64); 5] =
    [("log(0)", 0), ("1/(r-1)", 1), ("fact(-1)", 0), ("sqrt(r)", -1), ("0^-1", 0)];

/// Inputs that must not parse.
pub const SYNTAX_ERRORS: [&str; 5] = ["(1", "1+", "sin(r)", "max(1)", "r r"];

pub fn same(a: f64, b: f64) -> bool {
    a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan())
}

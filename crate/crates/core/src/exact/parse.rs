//! Text grammar for polynomials and polynomial ring descriptions.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := power (('*' | '/') power | power)*
//! power  := atom ('^' integer)?
//! atom   := integer | variable | '(' expr ')'
//! ```
//! An identifier that is not a variable is split greedily into variable names,
//! so `xy` reads as `x*y` in `Q[x,y]`.

use std::sync::Arc;

use num_bigint::BigInt;

use super::poly::{PolyRing, Polynomial};
use super::scalar::Field;
use crate::error::{invalid, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Num(text.parse().expect("digits")));
        } else if c.is_ascii_lowercase() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_ascii_lowercase() || chars[i].is_ascii_digit() || chars[i] == '_')
            {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(invalid(format!("unexpected character '{c}' in \"{s}\"")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    ring: &'a Arc<PolyRing>,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, msg: &str) -> crate::error::Error {
        invalid(format!("{msg} in \"{}\"", self.src))
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = if self.eat('-') {
            self.term()?.neg()
        } else {
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('('))
        )
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.power()?);
            } else if self.eat('/') {
                let d = self.power()?;
                if !d.is_constant() {
                    return Err(self.err("division by a non-constant"));
                }
                acc = acc.scale(&d.lc().inv());
            } else if self.starts_atom() {
                acc = acc.mul(&self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| self.err("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => Err(self.err("expected integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let c = self
                    .ring
                    .field
                    .from_ratio(&n, &BigInt::from(1))
                    .expect("unit denominator");
                Ok(self.ring.constant(c))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                self.identifier(&name)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("missing ')'"));
                }
                Ok(e)
            }
            _ => Err(self.err("unexpected end of expression")),
        }
    }

    fn identifier(&self, name: &str) -> Result<Polynomial> {
        if let Some(i) = self.ring.var_index(name) {
            return Ok(self.ring.var(i));
        }
        let mut acc = self.ring.one();
        let mut rest = name;
        while !rest.is_empty() {
            let best = self
                .ring
                .vars
                .iter()
                .enumerate()
                .filter(|(_, v)| rest.starts_with(v.as_str()))
                .max_by_key(|(_, v)| v.len());
            match best {
                Some((i, v)) => {
                    acc = acc.mul(&self.ring.var(i));
                    rest = &rest[v.len()..];
                }
                None => return Err(self.err(&format!("unknown variable '{name}'"))),
            }
        }
        Ok(acc)
    }
}

pub fn parse_poly(ring: &Arc<PolyRing>, s: &str) -> Result<Polynomial> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(invalid("empty polynomial"));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        ring,
        src: s,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Parses `Q[x,y]` or `F5[x,y]` (p prime).
pub fn parse_poly_ring(s: &str) -> Result<Arc<PolyRing>> {
    let s = s.trim();
    let open = s.find('[').ok_or_else(|| invalid(format!("not a polynomial ring: {s}")))?;
    if !s.ends_with(']') {
        return Err(invalid(format!("not a polynomial ring: {s}")));
    }
    let field = match &s[..open] {
        "Q" | "QQ" => Field::Rational,
        f if f.starts_with('F') => {
            let p: u64 = f[1..]
                .parse()
                .map_err(|_| invalid(format!("bad field {f}")))?;
            if !is_prime(p) {
                return Err(invalid(format!("F{p}: polynomial rings need a prime field")));
            }
            Field::Prime(p)
        }
        f => return Err(invalid(format!("unknown field {f}"))),
    };
    let vars: Vec<String> = s[open + 1..s.len() - 1]
        .split(',')
        .map(|v| v.trim().to_string())
        .collect();
    for v in &vars {
        let ok = v.chars().next().is_some_and(|c| c.is_ascii_lowercase())
            && v.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit());
        if !ok {
            return Err(invalid(format!("bad variable name '{v}'")));
        }
    }
    let mut sorted = vars.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != vars.len() {
        return Err(invalid("repeated variable"));
    }
    let refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    Ok(PolyRing::new(&refs, field))
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn juxtaposed_variables_split() {
        let r = parse_poly_ring("Q[x,y]").unwrap();
        assert_eq!(r.parse("xy").unwrap(), r.parse("x*y").unwrap());
        assert_eq!(r.parse("2x^2y").unwrap(), r.parse("2*x^2*y").unwrap());
        assert!(r.parse("xz").is_err());
    }

    #[test]
    fn prime_field_ring() {
        let r = parse_poly_ring("F5[x]").unwrap();
        assert_eq!(r.parse("6x + 1/2").unwrap().to_string(), "x + 3");
        assert!(parse_poly_ring("F6[x]").is_err());
    }
}

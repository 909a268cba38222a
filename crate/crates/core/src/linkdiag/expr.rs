use std::fmt;

use super::{mirror, parse_pd, torus_link, unknot, whitehead_double, ClaspSign, DiagramError, LinkDiagram};

/// Knot-family expression: `torus(2,5)`, `double(torus(2,3), t=2, clasp=+)`,
/// `mirror(...)`, `unknot`, or a PD literal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuilderExpr {
    Unknot,
    Torus { m: i64 },
    Double { companion: Box<BuilderExpr>, t: i64, clasp: ClaspSign },
    Mirror(Box<BuilderExpr>),
    Pd(LinkDiagram),
}

impl BuilderExpr {
    pub fn build(&self) -> Result<LinkDiagram, DiagramError> {
        match self {
            BuilderExpr::Unknot => Ok(unknot()),
            BuilderExpr::Torus { m } => torus_link(2, *m),
            BuilderExpr::Double { companion, t, clasp } => whitehead_double(&companion.build()?, *t, *clasp),
            BuilderExpr::Mirror(e) => Ok(mirror(&e.build()?)),
            BuilderExpr::Pd(d) => Ok(d.clone()),
        }
    }

    /// `Some(n)` when the expression is the torus knot T(2,2n+1).
    pub fn as_torus_knot_n(&self) -> Option<i64> {
        match self {
            BuilderExpr::Torus { m } if m % 2 == 1 && *m >= 1 => Some((m - 1) / 2),
            _ => None,
        }
    }

    /// `Some((n, t))` for the positive double D_+(T(2,2n+1), t).
    pub fn as_positive_double_of_torus(&self) -> Option<(i64, i64)> {
        match self {
            BuilderExpr::Double { companion, t, clasp: ClaspSign::Positive } => {
                companion.as_torus_knot_n().map(|n| (n, *t))
            }
            _ => None,
        }
    }

    /// Upper bound on the 4-ball genus known from the construction, if any.
    pub fn genus_bound(&self) -> Option<i64> {
        match self {
            BuilderExpr::Unknot => Some(0),
            BuilderExpr::Torus { m } if m % 2 == 1 => Some((m.abs() - 1) / 2),
            // Whitehead doubles bound a genus-one Seifert surface
            BuilderExpr::Double { .. } => Some(1),
            BuilderExpr::Mirror(e) => e.genus_bound(),
            _ => None,
        }
    }
}

impl fmt::Display for BuilderExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuilderExpr::Unknot => write!(f, "unknot"),
            BuilderExpr::Torus { m } => write!(f, "torus(2,{m})"),
            BuilderExpr::Double { companion, t, clasp } => write!(f, "double({companion}, t={t}, clasp={clasp})"),
            BuilderExpr::Mirror(e) => write!(f, "mirror({e})"),
            BuilderExpr::Pd(d) => write!(f, "{d}"),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<BuilderExpr, DiagramError> {
    let mut p = ExprParser { s: text, pos: 0 };
    let e = p.expr()?;
    p.ws();
    if p.pos != p.s.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

struct ExprParser<'a> {
    s: &'a str,
    pos: usize,
}

impl ExprParser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, DiagramError> {
        Err(DiagramError::Syntax { pos: self.pos, msg: msg.to_string() })
    }

    fn ws(&mut self) {
        while self.rest().starts_with(|c: char| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn rest(&self) -> &str {
        &self.s[self.pos..]
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), DiagramError> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(&format!("expected `{tok}`"))
        }
    }

    fn ident(&mut self) -> String {
        self.ws();
        let n = self.rest().find(|c: char| !c.is_ascii_alphanumeric() && c != '_').unwrap_or(self.rest().len());
        let id = self.rest()[..n].to_string();
        self.pos += n;
        id
    }

    fn int(&mut self) -> Result<i64, DiagramError> {
        self.ws();
        let mut n = 0;
        let r = self.rest();
        if r.starts_with(['-', '+']) {
            n += 1;
        }
        n += r[n..].find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len() - n);
        let v = r[..n].parse::<i64>().or_else(|_| self.err("expected an integer"))?;
        self.pos += n;
        Ok(v)
    }

    fn expr(&mut self) -> Result<BuilderExpr, DiagramError> {
        self.ws();
        if self.rest().starts_with("PD") {
            let text = self.rest();
            let end = matching_close(text).ok_or(DiagramError::Syntax { pos: self.pos, msg: "unterminated PD literal".into() })?;
            let d = parse_pd(&text[..end])?;
            self.pos += end;
            return Ok(BuilderExpr::Pd(d));
        }
        let start = self.pos;
        match self.ident().as_str() {
            "unknot" => Ok(BuilderExpr::Unknot),
            "torus" => {
                self.expect("(")?;
                let two = self.int()?;
                self.expect(",")?;
                let m = self.int()?;
                self.expect(")")?;
                if two != 2 {
                    return self.err("only torus(2, m) is supported");
                }
                Ok(BuilderExpr::Torus { m })
            }
            "mirror" => {
                self.expect("(")?;
                let e = self.expr()?;
                self.expect(")")?;
                Ok(BuilderExpr::Mirror(Box::new(e)))
            }
            "double" => {
                self.expect("(")?;
                let companion = self.expr()?;
                self.expect(",")?;
                let save = self.pos;
                if !(self.ident() == "t" && self.eat("=")) {
                    self.pos = save;
                }
                let t = self.int()?;
                let mut clasp = ClaspSign::Positive;
                if self.eat(",") {
                    let save = self.pos;
                    if !(self.ident() == "clasp" && self.eat("=")) {
                        self.pos = save;
                    }
                    clasp = if self.eat("+") {
                        ClaspSign::Positive
                    } else if self.eat("-") {
                        ClaspSign::Negative
                    } else {
                        return self.err("expected clasp sign `+` or `-`");
                    };
                }
                self.expect(")")?;
                Ok(BuilderExpr::Double { companion: Box::new(companion), t, clasp })
            }
            _ => {
                self.pos = start;
                self.err("expected unknot, torus(...), double(...), mirror(...) or PD[...]")
            }
        }
    }
}

fn matching_close(text: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in text.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i + 1);
                }
            }
            _ => {}
        }
    }
    None
}

//! Text syntax for zero-locus specifications.
//!
//! ```text
//! spec    := ambient ':' cut
//! ambient := factor ('x' factor)*
//! factor  := 'Gr(' int ',' int ')' | 'P' int
//! cut     := (term ('+' term)*)?
//! term    := item ('*' item)*            ints multiply, bundles tensor
//! item    := int | atom
//! atom    := primary ('(' int-list ')')*  trailing lists twist by O(d)
//! primary := 'O(' int-list ')' | 'R' idx | 'Q' idx
//!          | 'dual(' cut ')' | 'wedge' int '(' cut ')' | 'sym' int '(' cut ')'
//!          | '(' cut ')'
//! ```
//!
//! Factor indices are 1-based. `#` starts a comment running to end of line.

use std::fmt;

use crate::bundle::{AmbientSpace, BundleExpr, Factor, Taut, ZeroLocusSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    LParen,
    RParen,
    Comma,
    Colon,
    Plus,
    Star,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Int(i) => write!(f, "'{i}'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::Comma => write!(f, "','"),
            Tok::Colon => write!(f, "':'"),
            Tok::Plus => write!(f, "'+'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, column, message: message.into() }
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            ':' => Some(Tok::Colon),
            '+' => Some(Tok::Plus),
            '*' => Some(Tok::Star),
            _ => None,
        };
        if let Some(t) = single {
            out.push(Token { tok: t, line: l0, column: c0 });
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let v = s.parse::<i64>().map_err(|_| err(l0, c0, format!("integer '{s}' out of range")))?;
            col += i - start;
            out.push(Token { tok: Tok::Int(v), line: l0, column: c0 });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line: l0, column: c0 });
            continue;
        }
        return Err(err(l0, c0, format!("unknown token '{c}'")));
    }
    out.push(Token { tok: Tok::Eof, line, column: col });
    Ok(out)
}

/// Splits identifiers like `wedge2` or `P6` into a word and a number.
fn split_ident(s: &str) -> (&str, Option<&str>) {
    match s.find(|c: char| c.is_ascii_digit()) {
        Some(i) if s[i..].chars().all(|c| c.is_ascii_digit()) => (&s[..i], Some(&s[i..])),
        _ => (s, None),
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    ambient: Option<AmbientSpace>,
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

    fn expect(&mut self, want: Tok) -> Result<Token, ParseError> {
        let t = self.next();
        if t.tok != want {
            return Err(err(t.line, t.column, format!("expected {want}, found {}", t.tok)));
        }
        Ok(t)
    }

    fn int(&mut self) -> Result<(i64, Token), ParseError> {
        let t = self.next();
        match t.tok {
            Tok::Int(v) => Ok((v, t)),
            _ => Err(err(t.line, t.column, format!("expected an integer, found {}", t.tok))),
        }
    }

    fn int_list(&mut self) -> Result<Vec<i64>, ParseError> {
        self.expect(Tok::LParen)?;
        let mut v = vec![self.int()?.0];
        while self.peek().tok == Tok::Comma {
            self.next();
            v.push(self.int()?.0);
        }
        self.expect(Tok::RParen)?;
        Ok(v)
    }

    fn factor(&mut self) -> Result<Factor, ParseError> {
        let t = self.next();
        let name = match &t.tok {
            Tok::Ident(s) => s.clone(),
            other => return Err(err(t.line, t.column, format!("expected a factor 'Gr(k,n)' or 'P<d>', found {other}"))),
        };
        if name == "Gr" {
            self.expect(Tok::LParen)?;
            let (k, kt) = self.int()?;
            self.expect(Tok::Comma)?;
            let (n, _) = self.int()?;
            self.expect(Tok::RParen)?;
            if k <= 0 {
                return Err(err(kt.line, kt.column, "k must be positive"));
            }
            if k >= n {
                return Err(err(kt.line, kt.column, "k must be < n"));
            }
            return Ok(Factor { k: k as usize, n: n as usize });
        }
        match split_ident(&name) {
            ("P", Some(d)) => {
                let d: usize = d.parse().map_err(|_| err(t.line, t.column, "projective dimension out of range"))?;
                if d == 0 {
                    return Err(err(t.line, t.column, "projective space must have positive dimension"));
                }
                Ok(Factor { k: 1, n: d + 1 })
            }
            _ => Err(err(t.line, t.column, format!("unknown token '{name}'"))),
        }
    }

    fn spec(&mut self) -> Result<ZeroLocusSpec, ParseError> {
        let mut factors = vec![self.factor()?];
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::Ident(s) if s == "x" => {
                    self.next();
                    factors.push(self.factor()?);
                }
                Tok::Colon => break,
                other => return Err(err(t.line, t.column, format!("expected 'x' or ':', found {other}"))),
            }
        }
        self.expect(Tok::Colon)?;
        let ambient = AmbientSpace::new(factors).expect("factors validated while parsing");
        self.ambient = Some(ambient.clone());
        let cut = if self.peek().tok == Tok::Eof { BundleExpr::zero() } else { self.sum()? };
        let t = self.peek().clone();
        if t.tok != Tok::Eof {
            return Err(err(t.line, t.column, format!("unexpected {}", t.tok)));
        }
        Ok(ZeroLocusSpec { ambient, cut })
    }

    fn sum(&mut self) -> Result<BundleExpr, ParseError> {
        let mut terms = vec![self.term()?];
        while self.peek().tok == Tok::Plus {
            self.next();
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { BundleExpr::Sum(terms) })
    }

    fn term(&mut self) -> Result<BundleExpr, ParseError> {
        let start = self.peek().clone();
        let mut mult: u64 = 1;
        let mut atoms = Vec::new();
        loop {
            let t = self.peek().clone();
            if let Tok::Int(v) = t.tok {
                self.next();
                if v < 0 {
                    return Err(err(t.line, t.column, "multiplicities must be non-negative"));
                }
                mult = mult.checked_mul(v as u64).ok_or_else(|| err(t.line, t.column, "multiplicity too large"))?;
            } else {
                atoms.push(self.atom()?);
            }
            if self.peek().tok != Tok::Star {
                break;
            }
            self.next();
        }
        if atoms.is_empty() {
            return Err(err(start.line, start.column, "a term needs at least one bundle"));
        }
        let body = if atoms.len() == 1 { atoms.pop().unwrap() } else { BundleExpr::Tensor(atoms) };
        if mult == 1 {
            Ok(body)
        } else {
            let m = u32::try_from(mult).map_err(|_| err(start.line, start.column, "multiplicity too large"))?;
            Ok(BundleExpr::Multiple(m, Box::new(body)))
        }
    }

    fn arity(&self) -> usize {
        self.ambient.as_ref().map_or(0, |a| a.len())
    }

    fn twist_list(&mut self) -> Result<Vec<i64>, ParseError> {
        let t = self.peek().clone();
        let d = self.int_list()?;
        if d.len() != self.arity() {
            return Err(err(
                t.line,
                t.column,
                format!("twist has {} entries but the ambient has {} factors", d.len(), self.arity()),
            ));
        }
        Ok(d)
    }

    fn atom(&mut self) -> Result<BundleExpr, ParseError> {
        let mut e = self.primary()?;
        while self.peek().tok == Tok::LParen {
            let d = self.twist_list()?;
            e = BundleExpr::Twist(Box::new(e), d);
        }
        Ok(e)
    }

    fn parenthesized(&mut self) -> Result<BundleExpr, ParseError> {
        self.expect(Tok::LParen)?;
        let e = self.sum()?;
        self.expect(Tok::RParen)?;
        Ok(e)
    }

    fn primary(&mut self) -> Result<BundleExpr, ParseError> {
        let t = self.peek().clone();
        let name = match &t.tok {
            Tok::LParen => return self.parenthesized(),
            Tok::Ident(s) => s.clone(),
            other => return Err(err(t.line, t.column, format!("expected a bundle, found {other}"))),
        };
        self.next();
        match split_ident(&name) {
            ("O", None) => {
                let d = self.twist_list()?;
                Ok(BundleExpr::Line(d))
            }
            ("dual", None) => Ok(BundleExpr::Dual(Box::new(self.parenthesized()?))),
            (kind @ ("R" | "Q"), Some(idx)) => {
                let i: usize = idx.parse().unwrap_or(0);
                if i == 0 || i > self.arity() {
                    return Err(err(
                        t.line,
                        t.column,
                        format!("factor index {idx} out of range 1..={}", self.arity()),
                    ));
                }
                let taut = if kind == "R" { Taut::R } else { Taut::Q };
                Ok(BundleExpr::Taut(taut, i - 1))
            }
            (kind @ ("wedge" | "sym"), Some(q)) => {
                let q: usize = q.parse().map_err(|_| err(t.line, t.column, "power out of range"))?;
                let inner = Box::new(self.parenthesized()?);
                Ok(if kind == "wedge" { BundleExpr::Wedge(q, inner) } else { BundleExpr::Sym(q, inner) })
            }
            _ => Err(err(t.line, t.column, format!("unknown token '{name}'"))),
        }
    }
}

/// Parses a specification `ambient : cut`.
pub fn parse(text: &str) -> Result<ZeroLocusSpec, ParseError> {
    let toks = lex(text)?;
    Parser { toks, pos: 0, ambient: None }.spec()
}

/// Parses a bundle expression over a known ambient.
pub fn parse_expr(text: &str, ambient: &AmbientSpace) -> Result<BundleExpr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, ambient: Some(ambient.clone()) };
    let e = p.sum()?;
    let t = p.peek().clone();
    if t.tok != Tok::Eof {
        return Err(err(t.line, t.column, format!("unexpected {}", t.tok)));
    }
    Ok(e)
}

fn join_ints(d: &[i64]) -> String {
    d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Renders an expression so that [`parse_expr`] returns the same tree.
pub fn render_expr(e: &BundleExpr) -> String {
    match e {
        BundleExpr::Line(d) => format!("O({})", join_ints(d)),
        BundleExpr::Taut(Taut::R, i) => format!("R{}", i + 1),
        BundleExpr::Taut(Taut::Q, i) => format!("Q{}", i + 1),
        BundleExpr::Dual(x) => format!("dual({})", render_expr(x)),
        BundleExpr::Wedge(q, x) => format!("wedge{q}({})", render_expr(x)),
        BundleExpr::Sym(q, x) => format!("sym{q}({})", render_expr(x)),
        BundleExpr::Twist(x, d) => {
            let inner = match **x {
                BundleExpr::Sum(_) | BundleExpr::Tensor(_) | BundleExpr::Multiple(..) => {
                    format!("({})", render_expr(x))
                }
                _ => render_expr(x),
            };
            format!("{inner}({})", join_ints(d))
        }
        BundleExpr::Tensor(v) if v.is_empty() => "()".to_string(),
        BundleExpr::Tensor(v) => v
            .iter()
            .map(|x| match x {
                BundleExpr::Sum(_) | BundleExpr::Tensor(_) | BundleExpr::Multiple(..) => {
                    format!("({})", render_expr(x))
                }
                _ => render_expr(x),
            })
            .collect::<Vec<_>>()
            .join(" * "),
        BundleExpr::Sum(v) => v
            .iter()
            .map(|x| match x {
                BundleExpr::Sum(_) => format!("({})", render_expr(x)),
                _ => render_expr(x),
            })
            .collect::<Vec<_>>()
            .join(" + "),
        BundleExpr::Multiple(k, x) => match **x {
            BundleExpr::Sum(_) | BundleExpr::Multiple(..) => format!("{k}*({})", render_expr(x)),
            _ => format!("{k}*{}", render_expr(x)),
        },
    }
}

/// Renders a specification in the text syntax.
pub fn render(spec: &ZeroLocusSpec) -> String {
    let cut = render_expr(&spec.cut);
    if cut.is_empty() {
        format!("{}:", spec.ambient)
    } else {
        format!("{}: {}", spec.ambient, cut)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_typical_specs() {
        let s = parse("Gr(2,9): dual(Q1)(1) + O(1)").unwrap();
        assert_eq!(s.ambient.dim(), 14);
        assert_eq!(s.cut_rank().unwrap(), 8);
        let s = parse("Gr(2,6) x Gr(4,6): dual(R1) * wedge2(dual(R2))").unwrap();
        assert_eq!(s.cut_rank().unwrap(), 12);
        let s = parse("Gr(2,5) x P6: O(1,1)+O(0,2)").unwrap();
        assert_eq!(s.ambient.factors()[1], Factor { k: 1, n: 7 });
        assert_eq!(s.cut_rank().unwrap(), 2);
        let s = parse("Gr(2,8): 4*O(1)").unwrap();
        assert_eq!(s.cut_rank().unwrap(), 4);
    }

    #[test]
    fn empty_cut() {
        let s = parse("Gr(2,5):").unwrap();
        assert_eq!(s.cut_rank().unwrap(), 0);
    }

    #[test]
    fn k_not_less_than_n() {
        let e = parse("Gr(5,3): O(1)").unwrap_err();
        assert_eq!((e.line, e.column), (1, 4));
        assert!(e.message.contains("k must be < n"));
    }

    #[test]
    fn twist_arity() {
        let e = parse("Gr(2,5) x P3: O(1)").unwrap_err();
        assert!(e.message.contains("twist has 1 entries"));
        assert_eq!(e.column, 16);
        let e = parse("Gr(2,5): R1(1,2)").unwrap_err();
        assert!(e.message.contains("twist"));
    }

    #[test]
    fn unknown_token_position() {
        let e = parse("Gr(2,5):\n  foo(1)").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = parse("Gr(2,5): R1 $").unwrap_err();
        assert_eq!(e.column, 13);
        let e = parse("Gr(2,5): R2").unwrap_err();
        assert!(e.message.contains("out of range"));
    }

    #[test]
    fn round_trip() {
        for text in [
            "Gr(2,9): dual(Q1)(1) + O(1)",
            "Gr(2,6) x Gr(4,6): dual(R1) * wedge2(dual(R2))",
            "Gr(3,8): 2*wedge2(dual(R1)) + O(1)",
            "P3 x P1 x P1: O(2,1,1)",
            "Gr(2,5): (R1 + Q1)(1) * sym3(Q1) + 2*(3*R1)",
            "Gr(2,5):",
        ] {
            let s = parse(text).unwrap();
            let again = parse(&render(&s)).unwrap();
            assert_eq!(s, again, "{text} -> {}", render(&s));
        }
    }
}

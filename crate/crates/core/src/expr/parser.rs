//! Recursive-descent parser for information statements.
//!
//! ```text
//! stmt        := [constraints "=>"] ineq
//! constraints := eq { "," eq }
//! eq          := linexpr "=" "0"
//! ineq        := linexpr ("<=" | ">=") linexpr
//! linexpr     := ["+"|"-"] sterm { ("+"|"-") sterm }
//! sterm       := [coef "*"] quant | coef
//! coef        := INT ["/" INT] | DECIMAL
//! quant       := "H" "(" varlist ["|" varlist] ")"
//!              | "I" "(" varlist ":" varlist ["|" varlist] ")"
//! varlist     := IDENT { "," IDENT }
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use super::ast::{Inequality, InfoExpr, Quantity, Relation, Statement, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at column {column}: {message}")]
pub struct ParseError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Decimal(BigRational),
    LParen,
    RParen,
    Comma,
    Bar,
    Colon,
    Plus,
    Minus,
    Star,
    Slash,
    Eq,
    Le,
    Ge,
    Implies,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(i) => format!("number `{i}`"),
            Tok::Decimal(d) => format!("number `{d}`"),
            Tok::End => "end of input".into(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Bar => "|",
            Tok::Colon => ":",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Eq => "=",
            Tok::Le => "<=",
            Tok::Ge => ">=",
            Tok::Implies => "=>",
            _ => "?",
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let two: String = chars[i..chars.len().min(i + 2)].iter().collect();
        let tok = match two.as_str() {
            "<=" => Some(Tok::Le),
            ">=" => Some(Tok::Ge),
            "=>" => Some(Tok::Implies),
            _ => None,
        };
        if let Some(tok) = tok {
            out.push((tok, col));
            i += 2;
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '|' => Some(Tok::Bar),
            ':' => Some(Tok::Colon),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((tok, col));
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                i += 1;
                let frac_start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i == frac_start {
                    return Err(err(i + 1, "expected digits after decimal point"));
                }
                let lit: String = chars[start..i].iter().collect();
                let value = crate::number::parse_rational(&lit).map_err(|e| err(col, &e.to_string()))?;
                out.push((Tok::Decimal(value), col));
            } else {
                let lit: String = chars[start..i].iter().collect();
                out.push((Tok::Int(lit.parse().unwrap()), col));
            }
            continue;
        }
        return Err(err(col, &format!("unexpected character `{c}`")));
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

fn err(column: usize, message: &str) -> ParseError {
    ParseError {
        column,
        message: message.to_string(),
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Self {
            toks: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        err(
            self.column(),
            &format!("expected {wanted}, found {}", self.peek().describe()),
        )
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{}`", t.symbol())))
        }
    }

    fn statement(&mut self) -> Result<Statement, ParseError> {
        let mut constraints = Vec::new();
        loop {
            let lhs = self.linexpr()?;
            match self.peek() {
                Tok::Eq => {
                    self.bump();
                    let col = self.column();
                    match self.bump() {
                        Tok::Int(z) if z.is_zero() => {}
                        _ => return Err(err(col, "constraints must have the form `expr = 0`")),
                    }
                    constraints.push(lhs);
                    if self.eat(&Tok::Comma) {
                        continue;
                    }
                    self.expect(Tok::Implies)?;
                    let goal = self.inequality()?;
                    return self.finish(Statement { constraints, goal });
                }
                Tok::Le | Tok::Ge => {
                    if !constraints.is_empty() {
                        return Err(self.unexpected("`=`"));
                    }
                    let goal = self.inequality_rest(lhs)?;
                    return self.finish(Statement { constraints, goal });
                }
                _ => return Err(self.unexpected("`<=`, `>=` or `=`")),
            }
        }
    }

    fn finish<T>(&mut self, value: T) -> Result<T, ParseError> {
        if *self.peek() == Tok::End {
            Ok(value)
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    fn inequality(&mut self) -> Result<Inequality, ParseError> {
        let lhs = self.linexpr()?;
        self.inequality_rest(lhs)
    }

    fn inequality_rest(&mut self, lhs: InfoExpr) -> Result<Inequality, ParseError> {
        let relation = match self.bump() {
            Tok::Le => Relation::Le,
            Tok::Ge => Relation::Ge,
            _ => {
                self.pos -= 1;
                return Err(self.unexpected("`<=` or `>=`"));
            }
        };
        let rhs = self.linexpr()?;
        Ok(Inequality { lhs, relation, rhs })
    }

    fn linexpr(&mut self) -> Result<InfoExpr, ParseError> {
        let mut terms = Vec::new();
        let mut negative = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        loop {
            let mut term = self.signed_term()?;
            if negative {
                term.coef = -term.coef;
            }
            terms.push(term);
            negative = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => break,
            };
            self.bump();
        }
        Ok(InfoExpr { terms })
    }

    fn signed_term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Tok::Int(_) | Tok::Decimal(_) => {
                let coef = self.coef()?;
                if self.eat(&Tok::Star) {
                    let quantity = self.quantity()?;
                    Ok(Term {
                        coef,
                        quantity: Some(quantity),
                    })
                } else {
                    Ok(Term { coef, quantity: None })
                }
            }
            Tok::Ident(_) => Ok(Term {
                coef: BigRational::one(),
                quantity: Some(self.quantity()?),
            }),
            _ => Err(self.unexpected("a term")),
        }
    }

    fn coef(&mut self) -> Result<BigRational, ParseError> {
        match self.bump() {
            Tok::Decimal(d) => Ok(d),
            Tok::Int(num) => {
                if !self.eat(&Tok::Slash) {
                    return Ok(BigRational::from_integer(num));
                }
                let col = self.column();
                match self.bump() {
                    Tok::Int(den) if den.is_zero() => Err(err(col, "zero denominator")),
                    Tok::Int(den) => Ok(BigRational::new(num, den)),
                    _ => {
                        self.pos -= 1;
                        Err(self.unexpected("an integer denominator"))
                    }
                }
            }
            _ => unreachable!("coef called on a non-number"),
        }
    }

    fn quantity(&mut self) -> Result<Quantity, ParseError> {
        let col = self.column();
        let kind = match self.bump() {
            Tok::Ident(name) if name == "H" || name == "I" => name,
            Tok::Ident(name) => {
                return Err(err(
                    col,
                    &format!("expected `H(` or `I(`, found identifier `{name}`"),
                ))
            }
            _ => {
                self.pos -= 1;
                return Err(self.unexpected("`H(` or `I(`"));
            }
        };
        self.expect(Tok::LParen)?;
        let q = if kind == "H" {
            let of = self.varlist()?;
            let given = self.condition()?;
            Quantity::Entropy { of, given }
        } else {
            let left = self.varlist()?;
            self.expect(Tok::Colon)?;
            let right = self.varlist()?;
            let given = self.condition()?;
            Quantity::MutualInfo { left, right, given }
        };
        self.expect(Tok::RParen)?;
        Ok(q)
    }

    fn condition(&mut self) -> Result<Vec<String>, ParseError> {
        if self.eat(&Tok::Bar) {
            self.varlist()
        } else {
            Ok(Vec::new())
        }
    }

    fn varlist(&mut self) -> Result<Vec<String>, ParseError> {
        let mut vars = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Ident(name) => {
                    self.bump();
                    vars.push(name);
                }
                _ if vars.is_empty() => return Err(self.unexpected("a variable (empty variable list)")),
                _ => return Err(self.unexpected("a variable")),
            }
            if !self.eat(&Tok::Comma) {
                return Ok(vars);
            }
        }
    }
}

/// Parses a full statement, e.g.
/// `I(A:B)=0, I(A:B|C)=0 => I(C:D) <= I(C:D|A) + I(C:D|B)`.
pub fn parse_stmt(text: &str) -> Result<Statement, ParseError> {
    Parser::new(text)?.statement()
}

/// Parses a bare linear expression such as `I(C:D) - 2*H(A|B)`.
pub fn parse_expr(text: &str) -> Result<InfoExpr, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.linexpr()?;
    p.finish(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ast::Relation;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn unconditional_statement() {
        let s = parse_stmt("I(A:B|C) >= 0").unwrap();
        assert!(s.constraints.is_empty());
        assert_eq!(s.goal.relation, Relation::Ge);
        assert_eq!(s.goal.lhs.terms.len(), 1);
        assert_eq!(
            s.goal.lhs.terms[0].quantity,
            Some(Quantity::mutual_info(["A"], ["B"], ["C"]))
        );
        assert_eq!(s.variables(), ["A", "B", "C"]);
    }

    #[test]
    fn conditional_statement() {
        let s = parse_stmt("I(A:B)=0, I(A:B|C)=0 => I(C:D) <= I(C:D|A) + I(C:D|B)").unwrap();
        assert_eq!(s.constraints.len(), 2);
        assert_eq!(s.goal.relation, Relation::Le);
        assert_eq!(s.goal.rhs.terms.len(), 2);
        assert_eq!(s.variables(), ["A", "B", "C", "D"]);
    }

    #[test]
    fn coefficients() {
        let s = parse_stmt("2*H(A|B) - 1/3*I(C:D) >= 0").unwrap();
        let coefs: Vec<_> = s.goal.lhs.terms.iter().map(|t| t.coef.clone()).collect();
        assert_eq!(coefs, [q(2, 1), q(-1, 3)]);
        let e = parse_expr("-0.25*H(X1,Y_2) + 3").unwrap();
        assert_eq!(e.terms[0].coef, q(-1, 4));
        assert_eq!(e.terms[1].quantity, None);
        assert_eq!(e.constant_part(), q(3, 1));
    }

    #[test]
    fn errors_carry_columns() {
        let e = parse_stmt("H() >= 0").unwrap_err();
        assert_eq!(e.column, 3);
        assert!(e.message.contains("empty variable list"));
        assert_eq!(parse_stmt("I(A:B) >= ").unwrap_err().column, 11);
        assert!(parse_stmt("I(A:B) = 1 => H(A) >= 0").is_err());
        assert!(parse_stmt("I(A|B) >= 0").is_err());
        assert!(parse_stmt("X(A) >= 0").is_err());
        assert!(parse_stmt("H(A) >= 0 extra").is_err());
        assert!(parse_stmt("1/0*H(A) >= 0").is_err());
        assert!(parse_stmt("H(A) $ 0").is_err());
        assert!(parse_stmt("I(A:B)=0 => ").is_err());
        assert!(parse_expr("H(A) >= 0").is_err());
    }

    #[test]
    fn whitespace_is_insignificant() {
        assert_eq!(
            parse_stmt("I ( A : B | C ) >= 0").unwrap(),
            parse_stmt("I(A:B|C)>=0").unwrap()
        );
    }

    #[test]
    fn print_round_trip() {
        for text in [
            "I(A:B)=0, I(A:B|C)=0 => I(C:D) <= I(C:D|A) + I(C:D|B)",
            "2*H(A|B) - 1/3*I(C:D) >= 0",
            "-H(A) + 0.5 - 7*I(A,B:C,D|E) <= -2",
            "H(A) = 0 => H(A,B) <= H(B)",
        ] {
            let s = parse_stmt(text).unwrap();
            let printed = s.to_string();
            assert_eq!(parse_stmt(&printed).unwrap(), s, "{text} -> {printed}");
        }
    }
}

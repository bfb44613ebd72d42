use num_complex::Complex64;
use thiserror::Error;

use super::ast::FreeExpr;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("syntax error at offset {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

fn err<T>(pos: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(f64),
    ImagUnit,
    Var(usize),
    Adjoint,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Inv,
    Exp,
    Eof,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut lx = Lexer {
            src: src.as_bytes(),
            pos: 0,
        };
        let mut out = Vec::new();
        loop {
            lx.skip_ws();
            let start = lx.pos;
            let Some(&b) = lx.src.get(lx.pos) else {
                out.push((Tok::Eof, start));
                return Ok(out);
            };
            let tok = match b {
                b'+' => {
                    lx.pos += 1;
                    Tok::Plus
                }
                b'-' => {
                    lx.pos += 1;
                    Tok::Minus
                }
                b'*' => {
                    lx.pos += 1;
                    Tok::Star
                }
                b'^' => {
                    lx.pos += 1;
                    Tok::Caret
                }
                b'(' => {
                    lx.pos += 1;
                    Tok::LParen
                }
                b')' => {
                    lx.pos += 1;
                    Tok::RParen
                }
                b'\'' => {
                    lx.pos += 1;
                    Tok::Adjoint
                }
                b'0'..=b'9' => lx.number(start)?,
                b'a'..=b'z' | b'A'..=b'Z' => lx.word(start)?,
                other => return err(start, format!("unexpected character `{}`", other as char)),
            };
            out.push((tok, start));
        }
    }

    fn skip_ws(&mut self) {
        while self
            .src
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_whitespace())
        {
            self.pos += 1;
        }
    }

    fn number(&mut self, start: usize) -> Result<Tok, ParseError> {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            if !self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                return err(self.pos, "expected digits after decimal point");
            }
            while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                self.pos += 1;
            }
        }
        if matches!(self.src.get(self.pos), Some(b'e') | Some(b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            if !self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                // Not an exponent after all (e.g. `2*exp(...)` split oddly);
                // numbers never run straight into names in this grammar.
                self.pos = mark;
            } else {
                while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    self.pos += 1;
                }
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        match text.parse::<f64>() {
            Ok(v) => Ok(Tok::Number(v)),
            Err(_) => err(start, format!("invalid number literal `{text}`")),
        }
    }

    fn word(&mut self, start: usize) -> Result<Tok, ParseError> {
        while self
            .src
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_alphabetic())
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii letters");
        match name {
            "i" => Ok(Tok::ImagUnit),
            "inv" => Ok(Tok::Inv),
            "exp" => Ok(Tok::Exp),
            "x" => {
                let digits_start = self.pos;
                while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    self.pos += 1;
                }
                if digits_start == self.pos {
                    return err(start, "expected variable index after `x`");
                }
                let text =
                    std::str::from_utf8(&self.src[digits_start..self.pos]).expect("ascii digits");
                match text.parse::<usize>() {
                    Ok(ix) => Ok(Tok::Var(ix)),
                    Err(_) => err(digits_start, format!("invalid variable index `{text}`")),
                }
            }
            other => err(start, format!("unknown name `{other}`")),
        }
    }
}

struct Parser {
    tokens: Vec<(Tok, usize)>,
    idx: usize,
    arity: usize,
}

/// Parse a free expression over `x1..x{arity}`.
///
/// Returns the normalized AST; see the module docs for the grammar.
pub fn parse(src: &str, arity: usize) -> Result<FreeExpr, ParseError> {
    let tokens = Lexer::tokens(src)?;
    let mut p = Parser {
        tokens,
        idx: 0,
        arity,
    };
    let e = p.expr()?;
    match p.peek() {
        Tok::Eof => Ok(e),
        other => err(p.pos(), format!("unexpected trailing `{other:?}`")),
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.idx].0
    }

    fn pos(&self) -> usize {
        self.tokens[self.idx].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.idx].0.clone();
        if self.idx + 1 < self.tokens.len() {
            self.idx += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            err(self.pos(), format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<FreeExpr, ParseError> {
        let mut terms = Vec::new();
        let negate_first = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let first = self.term()?;
        terms.push(if negate_first {
            FreeExpr::negated(first)
        } else {
            first
        });
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    terms.push(self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    let t = self.term()?;
                    terms.push(FreeExpr::negated(t));
                }
                _ => break,
            }
        }
        Ok(FreeExpr::sum(terms))
    }

    fn term(&mut self) -> Result<FreeExpr, ParseError> {
        let mut factors = vec![self.factor()?];
        while *self.peek() == Tok::Star {
            self.bump();
            factors.push(self.factor()?);
        }
        Ok(FreeExpr::product(factors))
    }

    fn factor(&mut self) -> Result<FreeExpr, ParseError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Tok::Number(v) if v.fract() == 0.0 && v >= 0.0 && v <= u32::MAX as f64 => {
                    Ok(FreeExpr::power(base, v as u32))
                }
                _ => err(pos, "expected unsigned integer exponent after `^`"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<FreeExpr, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Number(v) => Ok(FreeExpr::real(v)),
            Tok::ImagUnit => Ok(FreeExpr::constant(Complex64::new(0.0, 1.0))),
            Tok::Var(ix) => {
                if ix == 0 || ix > self.arity {
                    return err(
                        pos,
                        format!("variable x{ix} out of range for arity {}", self.arity),
                    );
                }
                if *self.peek() == Tok::Adjoint {
                    self.bump();
                    Ok(FreeExpr::AdjVar(ix))
                } else {
                    Ok(FreeExpr::Var(ix))
                }
            }
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "closing `)`")?;
                Ok(e)
            }
            Tok::Inv => {
                self.expect(Tok::LParen, "`(` after `inv`")?;
                let e = self.expr()?;
                self.expect(Tok::RParen, "closing `)`")?;
                Ok(FreeExpr::Inv(Box::new(e)))
            }
            Tok::Exp => {
                self.expect(Tok::LParen, "`(` after `exp`")?;
                let inner_pos = self.pos();
                let e = self.expr()?;
                self.expect(Tok::RParen, "closing `)`")?;
                match const_eval(&e) {
                    Some(v) => Ok(FreeExpr::constant(v.exp())),
                    None => err(
                        inner_pos,
                        "exp is only permitted on constant subexpressions",
                    ),
                }
            }
            other => err(pos, format!("unexpected `{other:?}`")),
        }
    }
}

/// Evaluate a constant subtree to a scalar; `None` when variables appear or
/// a constant inverse is singular.
fn const_eval(e: &FreeExpr) -> Option<Complex64> {
    match e {
        FreeExpr::Const(c) => Some(*c),
        FreeExpr::Var(_) | FreeExpr::AdjVar(_) => None,
        FreeExpr::Sum(terms) => terms
            .iter()
            .map(const_eval)
            .try_fold(Complex64::new(0.0, 0.0), |acc, t| Some(acc + t?)),
        FreeExpr::Prod(factors) => factors
            .iter()
            .map(const_eval)
            .try_fold(Complex64::new(1.0, 0.0), |acc, f| Some(acc * f?)),
        FreeExpr::Scale(c, inner) => Some(c * const_eval(inner)?),
        FreeExpr::Inv(inner) => {
            let v = const_eval(inner)?;
            (v.norm() > 1e-300).then(|| v.inv())
        }
        FreeExpr::Series { .. } => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_variable() {
        assert_eq!(parse("x1", 1).unwrap(), FreeExpr::Var(1));
        assert_eq!(parse("x3'", 3).unwrap(), FreeExpr::AdjVar(3));
    }

    #[test]
    fn variable_out_of_range() {
        let e = parse("x2", 1).unwrap_err();
        assert!(e.message.contains("out of range"), "{e}");
        assert!(parse("x0", 1).is_err());
    }

    #[test]
    fn complex_literals_fold() {
        assert_eq!(parse("2+3*i", 1).unwrap(), FreeExpr::Const(c(2.0, 3.0)));
        assert_eq!(parse("i*i", 1).unwrap(), FreeExpr::Const(c(-1.0, 0.0)));
    }

    #[test]
    fn exp_folds_on_constants_only() {
        let e = parse("exp(i*0.7)", 1).unwrap();
        match e {
            FreeExpr::Const(v) => {
                assert!((v - c(0.7f64.cos(), 0.7f64.sin())).norm() < 1e-15);
            }
            other => panic!("expected folded constant, got {other:?}"),
        }
        let bad = parse("exp(x1)", 1).unwrap_err();
        assert!(bad.message.contains("constant"), "{bad}");
    }

    #[test]
    fn mobius_expression_structure() {
        let e = parse("exp(i*0.7)*x1*inv(1 + x1 - exp(i*0.7)*x1)", 1).unwrap();
        // e^{0.7i}·(x1·inv(...)) as a scale of a two-factor product
        match &e {
            FreeExpr::Scale(coeff, body) => {
                assert!((coeff - c(0.7f64.cos(), 0.7f64.sin())).norm() < 1e-15);
                match &**body {
                    FreeExpr::Prod(fs) => {
                        assert_eq!(fs.len(), 2);
                        assert_eq!(fs[0], FreeExpr::Var(1));
                        assert!(matches!(fs[1], FreeExpr::Inv(_)));
                    }
                    other => panic!("expected product, got {other:?}"),
                }
            }
            other => panic!("expected scaled product, got {other:?}"),
        }
    }

    #[test]
    fn powers_expand_to_products() {
        assert_eq!(
            parse("x1^3", 1).unwrap(),
            FreeExpr::Prod(vec![FreeExpr::Var(1); 3])
        );
        assert_eq!(parse("x1^0", 1).unwrap(), FreeExpr::Const(c(1.0, 0.0)));
        assert_eq!(parse("2^3", 1).unwrap(), FreeExpr::Const(c(8.0, 0.0)));
    }

    #[test]
    fn error_positions_point_at_offender() {
        let e = parse("x1 + @", 1).unwrap_err();
        assert_eq!(e.pos, 5);
        let e = parse("inv(x1", 1).unwrap_err();
        assert!(e.message.contains("closing"));
    }

    #[test]
    fn round_trip_corpus() {
        let sources = [
            "x1",
            "x1'",
            "-x1",
            "x1*x2 - x2*x1",
            "1 + x1 - 0.5*x2",
            "exp(i*0.7)*x1*inv(1 + x1 - exp(i*0.7)*x1)",
            "(x1 + x2)*(x1 - x2)",
            "2+3*i",
            "x1^4 + 0.25*x2^2",
            "inv(1 - x1*x1)",
            "x1*x1' + x2'*x2",
            "1e-3*x1 + 2.5e2",
        ];
        for src in sources {
            let ast = parse(src, 2).unwrap();
            let printed = ast.to_string();
            let reparsed = parse(&printed, 2)
                .unwrap_or_else(|e| panic!("printed `{printed}` failed to parse: {e}"));
            assert_eq!(ast, reparsed, "round trip of `{src}` via `{printed}`");
        }
    }

    // Random raw trees (not yet normalized) exercise the smart constructors
    // plus the printer: normalize, print, re-parse, compare.
    fn arb_expr(depth: u32) -> BoxedStrategy<FreeExpr> {
        let leaf = prop_oneof![
            (1usize..=2).prop_map(FreeExpr::Var),
            (1usize..=2).prop_map(FreeExpr::AdjVar),
            (-3i32..=3, -3i32..=3)
                .prop_map(|(a, b)| FreeExpr::constant(c(a as f64 / 2.0, b as f64 / 2.0))),
        ];
        if depth == 0 {
            return leaf.boxed();
        }
        let sub = arb_expr(depth - 1);
        prop_oneof![
            leaf,
            prop::collection::vec(sub.clone(), 1..=3).prop_map(FreeExpr::sum),
            prop::collection::vec(sub.clone(), 1..=3).prop_map(FreeExpr::product),
            (sub.clone(), -2i32..=2).prop_map(|(e, k)| FreeExpr::scaled(c(k as f64, 0.5), e)),
            sub.prop_map(|e| FreeExpr::Inv(Box::new(e))),
        ]
        .boxed()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]
        #[test]
        fn print_parse_round_trip(e in arb_expr(3)) {
            let printed = e.to_string();
            let reparsed = parse(&printed, 2)
                .unwrap_or_else(|err| panic!("printed `{printed}` failed: {err}"));
            prop_assert_eq!(e, reparsed);
        }
    }
}

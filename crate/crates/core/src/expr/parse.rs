use thiserror::Error;

use super::{BinOp, Func, Node};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("`{name}` at offset {offset} takes {expected} argument(s), got {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
        offset: usize,
    },
}

impl ParseError {
    /// Byte offset into the source text where the error was detected.
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownIdentifier { offset, .. }
            | ParseError::Arity { offset, .. } => *offset,
        }
    }
}

pub(super) fn parse(text: &str) -> Result<Node, ParseError> {
    if let Some(pos) = text.bytes().position(|b| !b.is_ascii()) {
        return Err(syntax(pos, "non-ASCII character"));
    }
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    if p.at_end() {
        return Err(syntax(p.pos, "empty expression"));
    }
    let node = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(syntax(
            p.pos,
            format!("unexpected `{}`", p.src[p.pos] as char),
        ));
    }
    Ok(node)
}

fn syntax(offset: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        offset,
        message: message.into(),
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected `{}`", c as char)))
        }
    }

    fn unexpected(&mut self, what: &str) -> ParseError {
        match self.peek() {
            None => syntax(self.pos, format!("unexpected end of input, {what}")),
            Some(c) => syntax(self.pos, format!("unexpected `{}`, {what}", c as char)),
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(b'+') => BinOp::Add,
                Some(b'-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = Node::binary(op, lhs, self.term()?);
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(b'*') => BinOp::Mul,
                Some(b'/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = Node::binary(op, lhs, self.unary()?);
        }
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        if self.eat(b'-') {
            Ok(Node::neg(self.unary()?))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.primary()?;
        if self.eat(b'^') {
            Ok(Node::binary(BinOp::Pow, base, self.unary()?))
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<Node, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            _ => Err(self.unexpected("expected a number, identifier or `(`")),
        }
    }

    fn number(&mut self) -> Result<Node, ParseError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.src.get(p.pos).is_some_and(u8::is_ascii_digit) {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            return Err(syntax(start, "malformed number"));
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                // Not an exponent; leave `e` for the caller to reject.
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse::<f64>()
            .map(Node::Const)
            .map_err(|_| syntax(start, "malformed number"))
    }

    fn identifier(&mut self) -> Result<Node, ParseError> {
        let start = self.pos;
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        match name {
            "x" => return Ok(Node::Var),
            "e" => return Ok(Node::Const(std::f64::consts::E)),
            "pi" => return Ok(Node::Const(std::f64::consts::PI)),
            _ => {}
        }
        let func = Func::from_name(name);
        if func.is_none() && name != "pow" {
            return Err(ParseError::UnknownIdentifier {
                name: name.to_owned(),
                offset: start,
            });
        }
        self.expect(b'(')?;
        let mut args = vec![self.expr()?];
        while self.eat(b',') {
            args.push(self.expr()?);
        }
        self.expect(b')')?;
        let expected = if func.is_some() { 1 } else { 2 };
        if args.len() != expected {
            return Err(ParseError::Arity {
                name: name.to_owned(),
                expected,
                found: args.len(),
                offset: start,
            });
        }
        let mut args = args.into_iter();
        let first = args.next().expect("at least one argument");
        Ok(match func {
            Some(f) => Node::call(f, first),
            None => Node::binary(BinOp::Pow, first, args.next().expect("two arguments")),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Node {
        parse(s).unwrap()
    }

    #[test]
    fn variable() {
        assert_eq!(p("x"), Node::Var);
        assert_eq!(p("  x "), Node::Var);
    }

    #[test]
    fn precedence_shape() {
        let expected = Node::binary(
            BinOp::Add,
            Node::binary(
                BinOp::Mul,
                Node::Const(2.0),
                Node::binary(BinOp::Pow, Node::Var, Node::Const(2.0)),
            ),
            Node::call(Func::Sin, Node::Var),
        );
        assert_eq!(p("2*x^2 + sin(x)"), expected);
    }

    #[test]
    fn power_is_right_associative_and_binds_tighter_than_negation() {
        assert_eq!(
            p("x^2^3"),
            Node::binary(
                BinOp::Pow,
                Node::Var,
                Node::binary(BinOp::Pow, Node::Const(2.0), Node::Const(3.0))
            )
        );
        assert_eq!(
            p("-x^2"),
            Node::neg(Node::binary(BinOp::Pow, Node::Var, Node::Const(2.0)))
        );
        assert_eq!(
            p("x^-1"),
            Node::binary(BinOp::Pow, Node::Var, Node::neg(Node::Const(1.0)))
        );
    }

    #[test]
    fn subtraction_is_left_associative() {
        assert_eq!(
            p("x-1-2"),
            Node::binary(
                BinOp::Sub,
                Node::binary(BinOp::Sub, Node::Var, Node::Const(1.0)),
                Node::Const(2.0)
            )
        );
    }

    #[test]
    fn numbers_and_constants() {
        assert_eq!(p("1.5e-3"), Node::Const(1.5e-3));
        assert_eq!(p(".5"), Node::Const(0.5));
        assert_eq!(p("pi"), Node::Const(std::f64::consts::PI));
        assert_eq!(
            p("pow(x, 3)"),
            Node::binary(BinOp::Pow, Node::Var, Node::Const(3.0))
        );
    }

    #[test]
    fn unbalanced_paren_reports_offset() {
        let err = parse("ln(").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { offset: 3, .. }), "{err}");
        assert_eq!(parse("(x + 1").unwrap_err().offset(), 6);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse("foo(x)"),
            Err(ParseError::UnknownIdentifier { offset: 0, .. })
        ));
        assert!(matches!(
            parse("1 + y"),
            Err(ParseError::UnknownIdentifier { offset: 4, .. })
        ));
        assert!(matches!(
            parse("sin(x, 2)"),
            Err(ParseError::Arity {
                expected: 1,
                found: 2,
                ..
            })
        ));
        assert!(matches!(
            parse("pow(x)"),
            Err(ParseError::Arity {
                expected: 2,
                found: 1,
                ..
            })
        ));
        assert!(parse("").is_err());
        assert!(parse("x x").is_err());
        assert!(parse("2*").is_err());
        assert!(parse("x²").is_err());
        assert_eq!(parse("1 + )").unwrap_err().offset(), 4);
    }
}

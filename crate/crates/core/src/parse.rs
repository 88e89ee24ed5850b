//! Prolog-convention term parser.
//!
//! Identifiers starting with an uppercase letter or `_` are variables;
//! all others are function symbols. `f(a,b)` is a binary application and
//! a bare lowercase identifier is a constant. Whitespace between tokens
//! is insignificant.

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermAst {
    Var(String),
    App(String, Vec<TermAst>),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("parse error at offset {offset}: expected {expected}")]
pub struct ParseError {
    pub offset: usize,
    pub expected: String,
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn err<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.pos,
            expected: expected.to_string(),
        })
    }

    fn identifier(&mut self) -> Result<String, ParseError> {
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {}
            _ => return self.err("identifier"),
        }
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(std::str::from_utf8(&self.input[start..self.pos])
            .expect("ascii identifier")
            .to_string())
    }

    fn term(&mut self) -> Result<TermAst, ParseError> {
        self.skip_ws();
        let first = match self.peek() {
            Some(c) => c,
            None => return self.err("term"),
        };
        let name = self.identifier()?;
        if first.is_ascii_uppercase() || first == b'_' {
            return Ok(TermAst::Var(name));
        }
        self.skip_ws();
        if self.peek() != Some(b'(') {
            return Ok(TermAst::App(name, Vec::new()));
        }
        self.pos += 1;
        let mut args = vec![self.term()?];
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                    args.push(self.term()?);
                }
                Some(b')') => {
                    self.pos += 1;
                    return Ok(TermAst::App(name, args));
                }
                _ => return self.err("`,` or `)`"),
            }
        }
    }
}

pub fn parse_term(text: &str) -> Result<TermAst, ParseError> {
    let mut p = Parser {
        input: text.as_bytes(),
        pos: 0,
    };
    let ast = p.term()?;
    p.skip_ws();
    if p.pos != p.input.len() {
        return p.err("end of input");
    }
    Ok(ast)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_application() {
        assert_eq!(
            parse_term("f(X)").unwrap(),
            TermAst::App("f".into(), vec![TermAst::Var("X".into())])
        );
    }

    #[test]
    fn parses_bare_variable_and_constant() {
        assert_eq!(parse_term("X").unwrap(), TermAst::Var("X".into()));
        assert_eq!(parse_term("_x").unwrap(), TermAst::Var("_x".into()));
        assert_eq!(parse_term("a").unwrap(), TermAst::App("a".into(), vec![]));
    }

    #[test]
    fn unclosed_parenthesis() {
        let err = parse_term("f(").unwrap_err();
        assert_eq!(err.offset, 2);
    }

    #[test]
    fn whitespace_is_insignificant() {
        assert_eq!(
            parse_term(" f ( X , g ( a ) ) ").unwrap(),
            parse_term("f(X,g(a))").unwrap()
        );
    }

    #[test]
    fn trailing_garbage_is_rejected() {
        assert!(parse_term("f(X))").is_err());
        assert!(parse_term("f(X) junk").is_err());
        assert!(parse_term("").is_err());
        assert!(parse_term("1f").is_err());
    }
}

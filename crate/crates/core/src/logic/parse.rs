//! Recursive-descent parser for the concrete formula syntax.
//!
//! ```text
//! iff     := implies ("<->" implies)*        left-associative
//! implies := or ("->" implies)?              right-associative
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "~" unary | primary
//! primary := letter | "true" | "false" | "(" iff ")"
//! ```

use super::alphabet::{is_identifier, Alphabet};
use super::formula::Formula;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    End,
}

fn describe(token: &Token) -> String {
    match token {
        Token::Ident(s) => format!("letter `{s}`"),
        Token::True => "`true`".into(),
        Token::False => "`false`".into(),
        Token::Not => "`~`".into(),
        Token::And => "`&`".into(),
        Token::Or => "`|`".into(),
        Token::Implies => "`->`".into(),
        Token::Iff => "`<->`".into(),
        Token::LParen => "`(`".into(),
        Token::RParen => "`)`".into(),
        Token::End => "end of input".into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let token = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '~' => Token::Not,
            '&' => Token::And,
            '|' => Token::Or,
            '(' => Token::LParen,
            ')' => Token::RParen,
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Token::Implies
            }
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                i += 2;
                Token::Iff
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i + 1 < chars.len() && (chars[i + 1].is_ascii_alphanumeric() || chars[i + 1] == '_') {
                    i += 1;
                }
                let word: String = chars[start..=i].iter().collect();
                match word.as_str() {
                    "true" => Token::True,
                    "false" => Token::False,
                    _ => {
                        debug_assert!(is_identifier(&word));
                        Token::Ident(word)
                    }
                }
            }
            other => {
                return Err(Error::Syntax { pos: start, message: format!("unexpected character `{other}`") })
            }
        };
        tokens.push((token, start));
        i += 1;
    }
    tokens.push((Token::End, chars.len()));
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    at: usize,
    alphabet: Option<&'a Alphabet>,
    // position of the first constant seen, if any
    constant_at: Option<usize>,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.at].0
    }

    fn pos(&self) -> usize {
        self.tokens[self.at].1
    }

    fn bump(&mut self) -> (Token, usize) {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> Error {
        Error::Syntax { pos: self.pos(), message: format!("expected {expected}, found {}", describe(self.peek())) }
    }

    fn iff(&mut self) -> Result<Formula> {
        let mut left = self.implies()?;
        while *self.peek() == Token::Iff {
            self.bump();
            let right = self.implies()?;
            left = Formula::Iff(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn implies(&mut self) -> Result<Formula> {
        let left = self.or()?;
        if *self.peek() == Token::Implies {
            self.bump();
            let right = self.implies()?;
            return Ok(Formula::Implies(Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut left = self.and()?;
        while *self.peek() == Token::Or {
            self.bump();
            let right = self.and()?;
            left = Formula::Or(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut left = self.unary()?;
        while *self.peek() == Token::And {
            self.bump();
            let right = self.unary()?;
            left = Formula::And(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula> {
        if *self.peek() == Token::Not {
            self.bump();
            let inner = self.unary()?;
            return Ok(Formula::Not(Box::new(inner)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Token::Ident(name) => {
                let pos = self.pos();
                if let Some(alphabet) = self.alphabet {
                    if !alphabet.contains(&name) {
                        return Err(Error::UnknownLetter { letter: name, pos });
                    }
                }
                self.bump();
                Ok(Formula::Atom(name))
            }
            Token::True | Token::False => {
                let (t, pos) = self.bump();
                self.constant_at.get_or_insert(pos);
                Ok(if t == Token::True { Formula::Top } else { Formula::Bottom })
            }
            Token::LParen => {
                self.bump();
                let inner = self.iff()?;
                if *self.peek() != Token::RParen {
                    return Err(self.unexpected("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected("a letter, constant, `~` or `(`")),
        }
    }
}

fn parse_with(text: &str, alphabet: Option<&Alphabet>) -> Result<Formula> {
    let mut parser = Parser { tokens: tokenize(text)?, at: 0, alphabet, constant_at: None };
    let formula = parser.iff()?;
    if *parser.peek() != Token::End {
        return Err(parser.unexpected("an operator or end of input"));
    }
    if let Some(pos) = parser.constant_at {
        if !formula.is_constant() {
            return Err(Error::NestedConstant { pos });
        }
    }
    Ok(formula)
}

/// Parses `text`, requiring every letter to belong to `alphabet`.
pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Formula> {
    parse_with(text, Some(alphabet))
}

/// Parses `text` without restricting the letters.
pub fn parse_unchecked(text: &str) -> Result<Formula> {
    parse_with(text, None)
}

impl std::str::FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_unchecked(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(s: &str) -> Box<Formula> {
        Box::new(Formula::atom(s))
    }

    #[test]
    fn reads_the_grammar() {
        let bf = Alphabet::parse("b f").unwrap();
        assert_eq!(
            parse("b & (b -> f)", &bf).unwrap(),
            Formula::And(atom("b"), Box::new(Formula::Implies(atom("b"), atom("f"))))
        );
        assert_eq!(parse("true", &bf).unwrap(), Formula::Top);
        assert_eq!(parse("(false)", &bf).unwrap(), Formula::Bottom);
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse_unchecked("~a & b | c -> d -> e <-> f <-> g").unwrap();
        let lhs = Formula::Or(Box::new(Formula::And(Box::new(Formula::Not(atom("a"))), atom("b"))), atom("c"));
        let imp = Formula::Implies(Box::new(lhs), Box::new(Formula::Implies(atom("d"), atom("e"))));
        let expected = Formula::Iff(Box::new(Formula::Iff(Box::new(imp), atom("f"))), atom("g"));
        assert_eq!(f, expected);
    }

    #[test]
    fn rejects_nested_constants() {
        let bf = Alphabet::parse("b f").unwrap();
        assert_eq!(parse("b & true", &bf), Err(Error::NestedConstant { pos: 4 }));
        assert!(matches!(parse("~false", &bf), Err(Error::NestedConstant { .. })));
    }

    #[test]
    fn reports_positions() {
        let bf = Alphabet::parse("b f").unwrap();
        assert_eq!(parse("b & x", &bf), Err(Error::UnknownLetter { letter: "x".into(), pos: 4 }));
        assert!(matches!(parse("b & ", &bf), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse("(b", &bf), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse("b f", &bf), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse("b $ f", &bf), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse("b - f", &bf), Err(Error::Syntax { pos: 2, .. })));
    }

    #[test]
    fn printer_round_trips() {
        for text in [
            "a -> b -> c",
            "(a -> b) -> c",
            "a & (b | c)",
            "~(a & b) <-> ~~c",
            "a <-> (b <-> c)",
            "(a <-> b) <-> c",
            "a | b & c -> ~d",
            "a & b & c",
            "a & (b & c)",
        ] {
            let f = parse_unchecked(text).unwrap();
            let printed = f.to_string();
            assert_eq!(parse_unchecked(&printed).unwrap(), f, "{text} printed as {printed}");
        }
        assert_eq!(parse_unchecked("a & (b & c)").unwrap().to_string(), "a & (b & c)");
        assert_eq!(parse_unchecked("((a)) -> (b -> c)").unwrap().to_string(), "a -> b -> c");
    }
}

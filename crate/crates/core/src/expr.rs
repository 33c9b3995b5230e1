//! Parser for class expressions.
//!
//! ```text
//! expr    := term ('+' term)*
//! term    := factor+
//! factor  := atom ('^2')?
//! atom    := word | '(' expr ')'
//! word    := ('Q^' int)* 'x_' int
//! ```
//!
//! Juxtaposed factors multiply. Whitespace is ignored. All words in one
//! expression must share the base `x_n`.

use thiserror::Error;

use crate::dl::Element;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExprError {
    #[error("unexpected {found} at offset {at}")]
    Unexpected { at: usize, found: String },
    #[error("expected a number at offset {0}")]
    Number(usize),
    #[error("mixed base classes x_{0} and x_{1}")]
    MixedBase(u32, u32),
    #[error("base class x_0 is not allowed")]
    ZeroBase,
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    n: Option<u32>,
}

pub fn parse_class(text: &str) -> Result<Element, ExprError> {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = Parser { chars, pos: 0, n: None };
    let tree = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(p.unexpected());
    }
    let n = p.n.ok_or(ExprError::Unexpected { at: 0, found: "end of input".into() })?;
    Ok(tree.eval(n))
}

enum Node {
    Word(Vec<u32>),
    Sum(Vec<Node>),
    Prod(Vec<Node>),
    Square(Box<Node>),
}

impl Node {
    fn eval(&self, n: u32) -> Element {
        match self {
            Node::Word(upper) => Element::from_upper(n, upper),
            Node::Sum(parts) => parts.iter().fold(Element::zero(n), |acc, p| acc.add(&p.eval(n))),
            Node::Prod(parts) => parts.iter().fold(Element::unit(n), |acc, p| acc.mul(&p.eval(n))),
            Node::Square(inner) => inner.eval(n).square(),
        }
    }
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn unexpected(&self) -> ExprError {
        let found = match self.peek() {
            Some(c) => format!("'{c}'"),
            None => "end of input".into(),
        };
        ExprError::Unexpected { at: self.pos, found }
    }

    fn eat(&mut self, s: &str) -> bool {
        let s: Vec<char> = s.chars().collect();
        if self.chars[self.pos..].starts_with(&s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u32, ExprError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| ExprError::Number(start))
    }

    fn expr(&mut self) -> Result<Node, ExprError> {
        let mut parts = vec![self.term()?];
        while self.eat("+") {
            parts.push(self.term()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Node::Sum(parts) })
    }

    fn term(&mut self) -> Result<Node, ExprError> {
        let mut parts = vec![self.factor()?];
        while matches!(self.peek(), Some('Q' | 'x' | '(')) {
            parts.push(self.factor()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Node::Prod(parts) })
    }

    fn factor(&mut self) -> Result<Node, ExprError> {
        let mut node = self.atom()?;
        while self.eat("^") {
            let at = self.pos;
            if self.number()? != 2 {
                return Err(ExprError::Unexpected { at, found: "exponent other than 2".into() });
            }
            node = Node::Square(Box::new(node));
        }
        Ok(node)
    }

    fn atom(&mut self) -> Result<Node, ExprError> {
        if self.eat("(") {
            let inner = self.expr()?;
            if !self.eat(")") {
                return Err(self.unexpected());
            }
            return Ok(inner);
        }
        let mut upper = Vec::new();
        while self.eat("Q^") {
            upper.push(self.number()?);
        }
        if !self.eat("x_") {
            return Err(self.unexpected());
        }
        let n = self.number()?;
        if n == 0 {
            return Err(ExprError::ZeroBase);
        }
        match self.n {
            Some(m) if m != n => return Err(ExprError::MixedBase(m, n)),
            _ => self.n = Some(n),
        }
        Ok(Node::Word(upper))
    }
}

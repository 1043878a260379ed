//! Lexer and recursive-descent parsers for formulas and nested sequents.

use crate::error::{Error, Result};
use crate::formula::{Direction, Formula};
use crate::sequent::{GentzenSequent, Name, SeqTree};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    False,
    Dia,
    BDia,
    Box,
    BBox,
    Tilde,
    Arrow,
    Bar,
    Amp,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Turnstile,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("atom `{s}`"),
        Tok::False => "`false`".into(),
        Tok::Dia => "`dia`".into(),
        Tok::BDia => "`bdia`".into(),
        Tok::Box => "`box`".into(),
        Tok::BBox => "`bbox`".into(),
        Tok::Tilde => "`~`".into(),
        Tok::Arrow => "`->`".into(),
        Tok::Bar => "`|`".into(),
        Tok::Amp => "`&`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::LBracket => "`[`".into(),
        Tok::RBracket => "`]`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Turnstile => "`|-`".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'a'..=b'z' => {
                while i < bytes.len()
                    && matches!(bytes[i], b'a'..=b'z' | b'0'..=b'9' | b'_')
                {
                    i += 1;
                }
                let word = &text[start..i];
                out.push((
                    match word {
                        "false" => Tok::False,
                        "dia" => Tok::Dia,
                        "bdia" => Tok::BDia,
                        "box" => Tok::Box,
                        "bbox" => Tok::BBox,
                        _ => Tok::Ident(word.to_string()),
                    },
                    start,
                ));
                continue;
            }
            b'~' => Tok::Tilde,
            b'&' => Tok::Amp,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b',' => Tok::Comma,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'|' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) != Some(&b'>') => {
                i += 1;
                Tok::Turnstile
            }
            b'|' => Tok::Bar,
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(Error::parse(i, format!("unexpected character {ch:?}")));
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Parser> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
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

    fn expect(&mut self, t: &Tok) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.unexpected(&describe(t)))
        }
    }

    fn unexpected(&self, wanted: &str) -> Error {
        Error::parse(
            self.offset(),
            format!("expected {wanted}, found {}", describe(self.peek())),
        )
    }

    fn formula(&mut self) -> Result<Formula> {
        let left = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let right = self.formula()?;
            Ok(Formula::imp(left, right))
        } else {
            Ok(left)
        }
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut acc = self.conjunction()?;
        while self.eat(&Tok::Bar) {
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut acc = self.unary()?;
        while self.eat(&Tok::Amp) {
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::Dia => {
                self.bump();
                Ok(Formula::dia(self.unary()?))
            }
            Tok::BDia => {
                self.bump();
                Ok(Formula::bdia(self.unary()?))
            }
            Tok::Box => {
                self.bump();
                Ok(Formula::boxed(self.unary()?))
            }
            Tok::BBox => {
                self.bump();
                Ok(Formula::bbox(self.unary()?))
            }
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::False => {
                self.bump();
                Ok(Formula::bottom())
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::atom(&name))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(&Tok::RParen)?;
                Ok(inner)
            }
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn nesting_ahead(&self) -> Option<Direction> {
        if self.peek() != &Tok::LParen
            || self.peek_at(2) != &Tok::RParen
            || self.peek_at(3) != &Tok::LBracket
        {
            return None;
        }
        match self.peek_at(1) {
            Tok::Ident(s) if s == "f" => Some(Direction::Forward),
            Tok::Ident(s) if s == "b" => Some(Direction::Backward),
            _ => None,
        }
    }

    /// Parses one component and its nestings into `tree`, below `parent`.
    fn sequent(&mut self, tree: &mut Option<SeqTree>, parent: Option<(Name, Direction)>) -> Result<()> {
        let mut label = GentzenSequent::default();
        if self.peek() != &Tok::Turnstile {
            loop {
                label.antecedent.insert(self.formula()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(&Tok::Turnstile)?;
        let mut nestings = Vec::new();
        let mut first = true;
        while !matches!(self.peek(), Tok::End | Tok::RBracket) {
            if !first {
                self.expect(&Tok::Comma)?;
            }
            first = false;
            if let Some(d) = self.nesting_ahead() {
                for _ in 0..4 {
                    self.bump();
                }
                // Remember where the nested text starts; it is parsed once this
                // component's label is complete so names follow pre-order.
                let start = self.pos;
                self.skip_bracketed()?;
                nestings.push((d, start));
            } else {
                label.consequent.insert(self.formula()?);
            }
        }
        let me = match (tree.as_mut(), parent) {
            (None, _) => {
                *tree = Some(SeqTree::new(label));
                Name(0)
            }
            (Some(t), Some((p, d))) => t.add_child(p, d, label)?,
            (Some(_), None) => unreachable!("only the root lacks a parent"),
        };
        let resume = self.pos;
        for (d, start) in nestings {
            self.pos = start;
            self.sequent(tree, Some((me, d)))?;
            self.expect(&Tok::RBracket)?;
        }
        self.pos = resume;
        Ok(())
    }

    fn skip_bracketed(&mut self) -> Result<()> {
        let mut depth = 1usize;
        loop {
            match self.bump() {
                Tok::LBracket => depth += 1,
                Tok::RBracket => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(());
                    }
                }
                Tok::End => return Err(Error::parse(self.offset(), "unclosed `[`")),
                _ => {}
            }
        }
    }

    fn finish(&self) -> Result<()> {
        if self.peek() == &Tok::End {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }
}

pub(crate) fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Parses the textual nested-sequent notation, e.g.
/// `p, q |- r, (f)[s |- ], (b)[|- t]`. Names are assigned in pre-order
/// starting from 0 at the root.
pub(crate) fn parse_sequent(text: &str) -> Result<SeqTree> {
    let mut p = Parser::new(text)?;
    let mut tree = None;
    p.sequent(&mut tree, None)?;
    p.finish()?;
    Ok(tree.expect("root is always created"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn turnstile_and_bar_are_distinguished() {
        let toks: Vec<Tok> = lex("p | q |- r").unwrap().into_iter().map(|t| t.0).collect();
        assert_eq!(toks[1], Tok::Bar);
        assert_eq!(toks[3], Tok::Turnstile);
    }

    #[test]
    fn parenthesised_f_is_a_formula_without_bracket() {
        let t = parse_sequent("|- (f) -> b").unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.to_string(), "|- f -> b");
    }

    #[test]
    fn nested_names_follow_pre_order() {
        let t = parse_sequent("a |- (f)[b |- (b)[c |- ]], (f)[d |- ]").unwrap();
        let labels: Vec<String> = t
            .names()
            .map(|n| t.label(n).unwrap().to_string())
            .collect();
        assert_eq!(labels, vec!["a |-", "b |-", "c |-", "d |-"]);
    }

    #[test]
    fn reports_unclosed_nesting() {
        assert!(parse_sequent("|- (f)[p |-").is_err());
        assert!(parse_sequent("p").is_err());
        assert!(parse_sequent("|- p,").is_err());
    }
}

//! RELAX NG compact syntax, restricted to what the built-in grammar uses.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{Datatype, DatatypeSpec, Pattern, PatternGraph};

const DATAFILE_RNC: &str = include_str!("datafile.rnc");

/// The built-in grammar as compact-syntax text.
pub fn compact_syntax() -> &'static str {
    DATAFILE_RNC
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct CompactSyntaxError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Literal(String),
    Punct(char),
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, CompactSyntaxError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                line += 1;
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            '#' => {
                while chars.next_if(|&c| c != '\n').is_some() {}
            }
            '"' => {
                chars.next();
                let mut lit = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some('\n') | None => {
                            return Err(CompactSyntaxError {
                                line,
                                message: "unterminated string literal".into(),
                            })
                        }
                        Some(c) => lit.push(c),
                    }
                }
                out.push((Tok::Literal(lit), line));
            }
            '=' | ',' | '|' | '&' | '?' | '+' | '*' | '(' | ')' | '{' | '}' => {
                chars.next();
                out.push((Tok::Punct(c), line));
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut ident = String::new();
                while let Some(c) =
                    chars.next_if(|&c| c.is_alphanumeric() || matches!(c, '_' | '.' | '-' | ':'))
                {
                    ident.push(c);
                }
                out.push((Tok::Ident(ident), line));
            }
            other => {
                return Err(CompactSyntaxError {
                    line,
                    message: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn line(&self) -> usize {
        self.toks
            .get(self.pos)
            .or(self.toks.last())
            .map_or(1, |t| t.1)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, CompactSyntaxError> {
        Err(CompactSyntaxError {
            line: self.line(),
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn peek_punct(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Punct(c))
    }

    fn expect_punct(&mut self, c: char) -> Result<(), CompactSyntaxError> {
        if self.peek_punct(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {c:?}"))
        }
    }

    fn ident(&mut self) -> Result<String, CompactSyntaxError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected identifier"),
        }
    }

    fn grammar(&mut self) -> Result<PatternGraph, CompactSyntaxError> {
        let mut definitions = BTreeMap::new();
        let mut start = None;
        while self.peek().is_some() {
            let name = self.ident()?;
            self.expect_punct('=')?;
            let body = self.pattern()?;
            if name == "start" {
                if start.replace(body).is_some() {
                    return self.err("duplicate start");
                }
            } else if definitions.insert(name.clone(), body).is_some() {
                return self.err(format!("duplicate definition of {name}"));
            }
        }
        match start {
            Some(start) => Ok(PatternGraph { definitions, start }),
            None => self.err("no start pattern"),
        }
    }

    fn pattern(&mut self) -> Result<Pattern, CompactSyntaxError> {
        let first = self.particle()?;
        let op = match self.peek() {
            Some(Tok::Punct(c @ (',' | '|' | '&'))) => *c,
            _ => return Ok(first),
        };
        let join: fn(Pattern, Pattern) -> Pattern = match op {
            ',' => Pattern::group,
            '|' => Pattern::choice,
            _ => Pattern::interleave,
        };
        let mut acc = first;
        while self.peek_punct(op) {
            self.pos += 1;
            let next = self.particle()?;
            acc = join(acc, next);
        }
        if matches!(self.peek(), Some(Tok::Punct(',' | '|' | '&'))) {
            return self.err("mixed operators need parentheses");
        }
        Ok(acc)
    }

    fn particle(&mut self) -> Result<Pattern, CompactSyntaxError> {
        let p = self.primary()?;
        Ok(match self.peek() {
            Some(Tok::Punct('?')) => {
                self.pos += 1;
                Pattern::optional(p)
            }
            Some(Tok::Punct('+')) => {
                self.pos += 1;
                Pattern::one_or_more(p)
            }
            Some(Tok::Punct('*')) => {
                self.pos += 1;
                Pattern::zero_or_more(p)
            }
            _ => p,
        })
    }

    fn braced(&mut self) -> Result<Pattern, CompactSyntaxError> {
        self.expect_punct('{')?;
        let p = self.pattern()?;
        self.expect_punct('}')?;
        Ok(p)
    }

    fn primary(&mut self) -> Result<Pattern, CompactSyntaxError> {
        match self.peek().cloned() {
            Some(Tok::Punct('(')) => {
                self.pos += 1;
                let p = self.pattern()?;
                self.expect_punct(')')?;
                Ok(p)
            }
            Some(Tok::Literal(s)) => {
                self.pos += 1;
                Ok(Pattern::Value(s))
            }
            Some(Tok::Ident(word)) => {
                self.pos += 1;
                match word.as_str() {
                    "element" => {
                        let name = self.ident()?;
                        Ok(Pattern::element(name, self.braced()?))
                    }
                    "attribute" => {
                        let name = self.ident()?;
                        Ok(Pattern::attribute(name, self.braced()?))
                    }
                    "text" => Ok(Pattern::Text),
                    "empty" => Ok(Pattern::Empty),
                    "notAllowed" => Ok(Pattern::NotAllowed),
                    w if w.contains(':') => self.datatype(w),
                    _ => Ok(Pattern::NamedRef(word)),
                }
            }
            _ => self.err("expected a pattern"),
        }
    }

    fn datatype(&mut self, name: &str) -> Result<Pattern, CompactSyntaxError> {
        let base = match name {
            "xsd:string" => Datatype::String,
            "xsd:nonNegativeInteger" => Datatype::NonNegativeInteger,
            "xsd:hexBinary" => Datatype::HexBinary,
            "xsd:token" => Datatype::Token,
            other => return self.err(format!("unsupported datatype {other}")),
        };
        let mut spec = DatatypeSpec::plain(base);
        if self.peek_punct('{') {
            self.pos += 1;
            while !self.peek_punct('}') {
                let param = self.ident()?;
                self.expect_punct('=')?;
                let Some(Tok::Literal(value)) = self.peek().cloned() else {
                    return self.err("expected parameter value");
                };
                self.pos += 1;
                if param != "pattern" {
                    return self.err(format!("unsupported facet {param}"));
                }
                spec.regex_facet = Some(value);
            }
            self.pos += 1;
        }
        Ok(Pattern::Data(spec))
    }
}

/// Parses compact-syntax grammar text into a [`PatternGraph`].
pub fn parse_compact(src: &str) -> Result<PatternGraph, CompactSyntaxError> {
    let toks = lex(src)?;
    Parser { toks, pos: 0 }.grammar()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::grammar::loose_data_attribs;
    use crate::schema::polymake_schema;

    fn substitute(p: &mut Pattern, name: &str, with: &Pattern) -> usize {
        match p {
            Pattern::NamedRef(n) if n == name => {
                *p = with.clone();
                1
            }
            Pattern::Choice(a, b) | Pattern::Group(a, b) | Pattern::Interleave(a, b) => {
                substitute(a, name, with) + substitute(b, name, with)
            }
            Pattern::OneOrMore(a)
            | Pattern::Element { content: a, .. }
            | Pattern::Attribute { content: a, .. } => substitute(a, name, with),
            _ => 0,
        }
    }

    #[test]
    fn built_in_text_parses_to_the_built_in_graph() {
        let mut parsed = parse_compact(compact_syntax()).unwrap();
        let built = polymake_schema();
        // LooseData is the one production that relaxes TopAttribs.
        let loose = parsed.definitions.get_mut("LooseData").unwrap();
        assert_eq!(
            substitute(loose, "TopAttribs", &loose_data_attribs()),
            1,
            "LooseData refers to TopAttribs exactly once"
        );
        for (name, p) in &built.definitions {
            assert_eq!(parsed.definitions.get(name), Some(p), "{name}");
        }
        assert_eq!(parsed, built);
    }

    #[test]
    fn text_opens_with_start_and_ends_with_tuple() {
        let text = compact_syntax();
        assert!(text.starts_with("start = TopObject | LooseData\n"));
        assert!(text.ends_with("Tuple = element t { TupleContents }\n"));
        assert!(text.contains("Complex = Vector | Matrix | Tuple\n"));
    }

    #[test]
    fn rejects_mixed_operators() {
        assert!(parse_compact("start = a, b | c").is_err());
        assert!(parse_compact("start = (a, b) | c").is_ok());
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_compact("start = A\n\nA = element a { @ }").unwrap_err();
        assert_eq!(err.line, 3);
    }
}

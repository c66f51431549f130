//! Minimal s-expression reader used to re-parse exported KiCad footprints.

use super::InterchangeError;

#[derive(Debug, Clone, PartialEq)]
pub enum Sexpr {
    Atom(String),
    List(Vec<Sexpr>),
}

impl Sexpr {
    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexpr::Atom(s) => Some(s),
            Sexpr::List(_) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexpr]> {
        match self {
            Sexpr::List(items) => Some(items),
            Sexpr::Atom(_) => None,
        }
    }

    /// First atom of a list, i.e. the node tag.
    pub fn tag(&self) -> Option<&str> {
        self.as_list()?.first()?.as_atom()
    }

    /// Child lists with the given tag.
    pub fn children<'a>(&'a self, tag: &'a str) -> impl Iterator<Item = &'a Sexpr> + 'a {
        self.as_list()
            .unwrap_or(&[])
            .iter()
            .filter(move |c| c.tag() == Some(tag))
    }
}

/// Parses one top-level s-expression. Quoted atoms lose their quotes.
pub fn parse(text: &str) -> Result<Sexpr, InterchangeError> {
    let mut tokens = tokenize(text)?;
    tokens.reverse();
    let expr = parse_expr(&mut tokens)?;
    if let Some(extra) = tokens.pop() {
        return Err(InterchangeError::Sexpr(format!(
            "trailing token {extra:?} after top-level expression"
        )));
    }
    Ok(expr)
}

#[derive(Debug)]
enum Token {
    Open,
    Close,
    Atom(String),
}

fn tokenize(text: &str) -> Result<Vec<Token>, InterchangeError> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '(' => {
                chars.next();
                tokens.push(Token::Open);
            }
            ')' => {
                chars.next();
                tokens.push(Token::Close);
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some(ch) => s.push(ch),
                        None => {
                            return Err(InterchangeError::Sexpr(
                                "unterminated string".to_string(),
                            ))
                        }
                    }
                }
                tokens.push(Token::Atom(s));
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            _ => {
                let mut s = String::new();
                while let Some(&ch) = chars.peek() {
                    if ch == '(' || ch == ')' || ch == '"' || ch.is_whitespace() {
                        break;
                    }
                    s.push(ch);
                    chars.next();
                }
                tokens.push(Token::Atom(s));
            }
        }
    }
    Ok(tokens)
}

fn parse_expr(tokens: &mut Vec<Token>) -> Result<Sexpr, InterchangeError> {
    match tokens.pop() {
        Some(Token::Atom(s)) => Ok(Sexpr::Atom(s)),
        Some(Token::Open) => {
            let mut items = Vec::new();
            loop {
                match tokens.last() {
                    Some(Token::Close) => {
                        tokens.pop();
                        return Ok(Sexpr::List(items));
                    }
                    Some(_) => items.push(parse_expr(tokens)?),
                    None => {
                        return Err(InterchangeError::Sexpr("unbalanced '('".to_string()));
                    }
                }
            }
        }
        Some(Token::Close) => Err(InterchangeError::Sexpr("unexpected ')'".to_string())),
        None => Err(InterchangeError::Sexpr("empty input".to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested_lists_and_strings() {
        let e = parse(r#"(pad "A1" smd circle (at 1.0 -2.0) (size 0.5 0.5))"#).unwrap();
        assert_eq!(e.tag(), Some("pad"));
        let at: Vec<&Sexpr> = e.children("at").collect();
        assert_eq!(at.len(), 1);
        assert_eq!(at[0].as_list().unwrap()[1].as_atom(), Some("1.0"));
    }

    #[test]
    fn rejects_unbalanced_input() {
        assert!(parse("(a (b)").is_err());
        assert!(parse("(a))").is_err());
        assert!(parse("").is_err());
    }
}

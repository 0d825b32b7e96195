use std::fmt;

use super::{ParseError, Pos};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Number(String),
    Punct(char),
    Newline,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Number(s) => write!(f, "number `{s}`"),
            Tok::Punct(c) => write!(f, "`{c}`"),
            Tok::Newline => f.write_str("end of line"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

const PUNCT: &str = "+-*/^()[]{},;=";

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Splits model text into tokens. Newlines are significant only outside
/// parentheses and brackets; `#` starts a comment.
pub fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut depth = 0usize;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            if depth == 0 {
                out.push(Token { tok: Tok::Newline, pos });
            }
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
        let start = i;
        let tok = if is_ident_start(c) {
            i += 1;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|n| n.is_ascii_digit())) {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && matches!(chars[i], 'e' | 'E') {
                let mut j = i + 1;
                if j < chars.len() && matches!(chars[j], '+' | '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s: String = chars[start..i].iter().collect();
            if s.matches('.').count() > 1 {
                return Err(ParseError::at(pos, format!("malformed number `{s}`")));
            }
            Tok::Number(s)
        } else if PUNCT.contains(c) {
            match c {
                '(' | '[' => depth += 1,
                ')' | ']' => depth = depth.saturating_sub(1),
                _ => {}
            }
            i += 1;
            Tok::Punct(c)
        } else {
            return Err(ParseError::at(pos, format!("unexpected character `{c}`")));
        };
        col += i - start;
        out.push(Token { tok, pos });
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, col },
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn numbers_identifiers_and_punctuation() {
        assert_eq!(
            toks("x' + 1.5e-3*u_x"),
            vec![
                Tok::Ident("x'".into()),
                Tok::Punct('+'),
                Tok::Number("1.5e-3".into()),
                Tok::Punct('*'),
                Tok::Ident("u_x".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn newlines_inside_brackets_are_dropped() {
        assert_eq!(toks("(a\nb)\n").iter().filter(|t| **t == Tok::Newline).count(), 1);
    }

    #[test]
    fn comments_are_skipped_and_positions_tracked() {
        let t = lex("# note\n  y").unwrap();
        let y = t.iter().find(|t| t.tok == Tok::Ident("y".into())).unwrap();
        assert_eq!((y.pos.line, y.pos.col), (2, 3));
    }

    #[test]
    fn stray_character_is_an_error() {
        let e = lex("a $ b").unwrap_err();
        assert_eq!((e.pos.line, e.pos.col), (1, 3));
    }
}

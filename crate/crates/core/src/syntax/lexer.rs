use super::span::{ParseError, Pos, SourceSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Lambda,
    Arrow,
    LParen,
    RParen,
    Colon,
    Dot,
    Comma,
    At,
    Newline,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Lambda => "`\\`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Comma => "`,`".into(),
            Tok::At => "`@`".into(),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub start: Pos,
    pub end: Pos,
}

fn ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '\'' | '′' | '*' | '□')
}

/// Splits `src` into tokens. `#` starts a comment running to the end of the line.
pub fn lex(src: &str, file: Option<&str>) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let mut pos = Pos { line: 1, col: 1 };
    let advance = |c: char, pos: &mut Pos| {
        if c == '\n' {
            pos.line += 1;
            pos.col = 1;
        } else {
            pos.col += 1;
        }
    };
    while let Some(&c) = chars.peek() {
        let start = pos;
        let single = |tok: Tok| Some(tok);
        let tok = match c {
            '\n' => single(Tok::Newline),
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    advance(c, &mut pos);
                }
                continue;
            }
            c if c.is_whitespace() => None,
            '\\' | 'λ' => single(Tok::Lambda),
            '→' => single(Tok::Arrow),
            '(' => single(Tok::LParen),
            ')' => single(Tok::RParen),
            ':' => single(Tok::Colon),
            '.' => single(Tok::Dot),
            ',' => single(Tok::Comma),
            '@' => single(Tok::At),
            '-' => {
                chars.next();
                advance(c, &mut pos);
                if chars.peek() == Some(&'>') {
                    chars.next();
                    advance('>', &mut pos);
                    out.push(Token {
                        tok: Tok::Arrow,
                        start,
                        end: pos,
                    });
                    continue;
                }
                return Err(ParseError::syntax(
                    SourceSpan::new(file.map(str::to_string), start, pos),
                    "expected `->`",
                ));
            }
            c if ident_char(c) => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if !ident_char(c) {
                        break;
                    }
                    name.push(if c == '′' { '\'' } else { c });
                    chars.next();
                    advance(c, &mut pos);
                }
                if name == "□" {
                    name = crate::spec::BOX.to_string();
                }
                out.push(Token {
                    tok: Tok::Ident(name),
                    start,
                    end: pos,
                });
                continue;
            }
            other => {
                chars.next();
                advance(other, &mut pos);
                return Err(ParseError::syntax(
                    SourceSpan::new(file.map(str::to_string), start, pos),
                    format!("unexpected character `{other}`"),
                ));
            }
        };
        chars.next();
        advance(c, &mut pos);
        if let Some(tok) = tok {
            out.push(Token { tok, start, end: pos });
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        start: pos,
        end: pos,
    });
    Ok(out)
}

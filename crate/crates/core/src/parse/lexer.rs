use super::ParseError;

#[derive(Clone, PartialEq, Debug)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Str(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Colon,
    ColonColon,
    ColonEq,
    Dot,
    Eq,
    FatArrow,
    Arrow,
    Plus,
    Star,
    Backslash,
    BigLambda,
    At,
    Bar,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Str(s) => format!("{s:?}"),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", symbol(other)),
        }
    }
}

fn symbol(t: &Tok) -> &'static str {
    match t {
        Tok::LParen => "(",
        Tok::RParen => ")",
        Tok::LBrack => "[",
        Tok::RBrack => "]",
        Tok::LBrace => "{",
        Tok::RBrace => "}",
        Tok::Comma => ",",
        Tok::Semi => ";",
        Tok::Colon => ":",
        Tok::ColonColon => "::",
        Tok::ColonEq => ":=",
        Tok::Dot => ".",
        Tok::Eq => "=",
        Tok::FatArrow => "=>",
        Tok::Arrow => "->",
        Tok::Plus => "+",
        Tok::Star => "*",
        Tok::Backslash => "\\",
        Tok::BigLambda => "/\\",
        Tok::At => "@",
        Tok::Bar => "|",
        _ => "?",
    }
}

#[derive(Clone, Debug)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\'' || c == '?'
}

pub fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, col, msg: String| ParseError { line, col, msg };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let adv = |n: usize, i: &mut usize, line: &mut usize, col: &mut usize| {
            for _ in 0..n {
                if chars[*i] == '\n' {
                    *line += 1;
                    *col = 1;
                } else {
                    *col += 1;
                }
                *i += 1;
            }
        };
        if c.is_whitespace() {
            adv(1, &mut i, &mut line, &mut col);
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                adv(1, &mut i, &mut line, &mut col);
            }
            continue;
        }
        let next = chars.get(i + 1).copied();
        let (tok, n) = if is_ident_start(c) {
            let mut j = i;
            while j < chars.len() && is_ident_char(chars[j]) {
                j += 1;
            }
            (Tok::Ident(chars[i..j].iter().collect()), j - i)
        } else if c.is_ascii_digit() || (c == '-' && next.is_some_and(|d| d.is_ascii_digit())) {
            let mut j = i + 1;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let text: String = chars[i..j].iter().collect();
            let n: i64 = text
                .parse()
                .map_err(|_| err(l0, c0, format!("integer literal `{text}` out of range")))?;
            (Tok::Int(n), j - i)
        } else if c == '"' {
            let mut j = i + 1;
            let mut s = String::new();
            loop {
                match chars.get(j) {
                    None | Some('\n') => return Err(err(l0, c0, "unterminated string literal".into())),
                    Some('"') => break,
                    Some('\\') => {
                        let e = chars.get(j + 1).copied();
                        s.push(match e {
                            Some('n') => '\n',
                            Some('t') => '\t',
                            Some('"') => '"',
                            Some('\\') => '\\',
                            _ => return Err(err(l0, c0, "bad escape in string literal".into())),
                        });
                        j += 2;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        j += 1;
                    }
                }
            }
            (Tok::Str(s), j + 1 - i)
        } else {
            match (c, next) {
                ('/', Some('\\')) => (Tok::BigLambda, 2),
                (':', Some(':')) => (Tok::ColonColon, 2),
                (':', Some('=')) => (Tok::ColonEq, 2),
                ('=', Some('>')) => (Tok::FatArrow, 2),
                ('-', Some('>')) => (Tok::Arrow, 2),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('[', _) => (Tok::LBrack, 1),
                (']', _) => (Tok::RBrack, 1),
                ('{', _) => (Tok::LBrace, 1),
                ('}', _) => (Tok::RBrace, 1),
                (',', _) => (Tok::Comma, 1),
                (';', _) => (Tok::Semi, 1),
                (':', _) => (Tok::Colon, 1),
                ('.', _) => (Tok::Dot, 1),
                ('=', _) => (Tok::Eq, 1),
                ('+', _) => (Tok::Plus, 1),
                ('*', _) => (Tok::Star, 1),
                ('\\', _) => (Tok::Backslash, 1),
                ('@', _) => (Tok::At, 1),
                ('|', _) => (Tok::Bar, 1),
                _ => return Err(err(l0, c0, format!("unexpected character `{c}`"))),
            }
        };
        adv(n, &mut i, &mut line, &mut col);
        out.push(Spanned { tok, line: l0, col: c0 });
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_symbols_and_literals() {
        let toks: Vec<Tok> = lex("/\\X::proc. \\x:Int@X. -3@X // c\n\"a\\\"b\" ->{A}")
            .unwrap()
            .into_iter()
            .map(|s| s.tok)
            .collect();
        assert_eq!(toks[0], Tok::BigLambda);
        assert!(toks.contains(&Tok::Int(-3)));
        assert!(toks.contains(&Tok::Str("a\"b".into())));
        assert!(toks.contains(&Tok::Arrow));
        assert_eq!(*toks.last().unwrap(), Tok::Eof);
    }

    #[test]
    fn reports_position() {
        let e = lex("main =\n  $").unwrap_err();
        assert_eq!((e.line, e.col), (2, 3));
    }
}

use super::{Diagnostic, DiagnosticKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(super) enum Tok {
    Ident(String),
    Nat(u64),
    Punct(char),
    Eof,
}

#[derive(Clone, Debug)]
pub(super) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

const PUNCT: &[char] = &['{', '}', '(', ')', ',', ';', '/', '=', '+', '-', '*', '^'];

pub(super) fn tokenize(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);

    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            chars.next();
            col += 1;
        } else if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                chars.next();
                col += 1;
            }
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_alphanumeric() || c == '_' || c == '\'' {
                    s.push(c);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            out.push(Token {
                tok: Tok::Ident(s),
                line: tl,
                col: tc,
            });
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&c) = chars.peek().filter(|c| c.is_ascii_digit()) {
                s.push(c);
                chars.next();
                col += 1;
            }
            let n = s.parse().map_err(|_| Diagnostic {
                line: tl,
                col: tc,
                kind: DiagnosticKind::Lexical,
                message: format!("number `{s}` is too large"),
            })?;
            out.push(Token {
                tok: Tok::Nat(n),
                line: tl,
                col: tc,
            });
        } else if PUNCT.contains(&c) {
            chars.next();
            col += 1;
            out.push(Token {
                tok: Tok::Punct(c),
                line: tl,
                col: tc,
            });
        } else {
            return Err(Diagnostic {
                line: tl,
                col: tc,
                kind: DiagnosticKind::Lexical,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_count_characters() {
        let toks = tokenize("# комментарий\n  κ(x)").unwrap();
        assert_eq!(toks[0].tok, Tok::Ident("κ".into()));
        assert_eq!((toks[0].line, toks[0].col), (2, 3));
        assert_eq!((toks[1].line, toks[1].col), (2, 4));
    }

    #[test]
    fn rejects_stray_characters() {
        let err = tokenize("kind K {\n  op f@2;").unwrap_err();
        assert_eq!((err.line, err.col, err.kind), (2, 7, DiagnosticKind::Lexical));
    }
}

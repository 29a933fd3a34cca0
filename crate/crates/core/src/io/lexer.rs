use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Num(u64),
    Ident(String),
    Str(String),
    Sym(char),
    End,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Num(n) => format!("number {n}"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Str(s) => format!("string \"{s}\""),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::End => "end of input".to_string(),
        }
    }
}

/// 1-based line and column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Pos {
    pub line: usize,
    pub column: usize,
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut pos = Pos { line: 1, column: 1 };
    let advance = |c: char, pos: &mut Pos| {
        if c == '\n' {
            pos.line += 1;
            pos.column = 1;
        } else {
            pos.column += 1;
        }
    };
    while let Some(&c) = chars.peek() {
        let start = pos;
        if c.is_whitespace() {
            chars.next();
            advance(c, &mut pos);
        } else if c.is_ascii_digit() {
            let mut digits = String::new();
            while let Some(&d) = chars.peek() {
                if !d.is_ascii_alphanumeric() && d != '_' {
                    break;
                }
                digits.push(d);
                chars.next();
                advance(d, &mut pos);
            }
            let n = digits
                .parse::<u64>()
                .map_err(|_| ParseError::syntax(start, format!("malformed number `{digits}`")))?;
            out.push((Tok::Num(n), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut word = String::new();
            while let Some(&d) = chars.peek() {
                if !d.is_ascii_alphanumeric() && d != '_' {
                    break;
                }
                word.push(d);
                chars.next();
                advance(d, &mut pos);
            }
            out.push((Tok::Ident(word), start));
        } else if c == '"' {
            chars.next();
            advance(c, &mut pos);
            let mut s = String::new();
            loop {
                match chars.next() {
                    Some('"') => {
                        advance('"', &mut pos);
                        break;
                    }
                    Some('\n') | None => return Err(ParseError::syntax(start, "unterminated string")),
                    Some(d) => {
                        s.push(d);
                        advance(d, &mut pos);
                    }
                }
            }
            out.push((Tok::Str(s), start));
        } else if ",;()!&|-".contains(c) {
            chars.next();
            advance(c, &mut pos);
            out.push((Tok::Sym(c), start));
        } else {
            return Err(ParseError::syntax(start, format!("unexpected character `{c}`")));
        }
    }
    out.push((Tok::End, pos));
    Ok(out)
}

pub(crate) struct Cursor {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Cursor {
    pub(crate) fn new(text: &str) -> Result<Cursor, ParseError> {
        Ok(Cursor {
            toks: tokenize(text)?,
            at: 0,
        })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    pub(crate) fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    pub(crate) fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    pub(crate) fn at_end(&self) -> bool {
        *self.peek() == Tok::End
    }

    pub(crate) fn unexpected(&self, wanted: &str) -> ParseError {
        ParseError::syntax(self.pos(), format!("expected {wanted}, found {}", self.peek().describe()))
    }

    pub(crate) fn eat_sym(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{c}`")))
        }
    }

    pub(crate) fn keyword(&mut self, word: &str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Ident(w) if w == word => {
                self.bump();
                Ok(())
            }
            _ => Err(self.unexpected(&format!("`{word}`"))),
        }
    }

    pub(crate) fn number(&mut self, what: &str) -> Result<u64, ParseError> {
        match *self.peek() {
            Tok::Num(n) => {
                self.bump();
                Ok(n)
            }
            _ => Err(self.unexpected(what)),
        }
    }

    pub(crate) fn ident(&mut self, what: &str) -> Result<(String, Pos), ParseError> {
        let pos = self.pos();
        match self.peek() {
            Tok::Ident(w) => {
                let w = w.clone();
                self.bump();
                Ok((w, pos))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    /// A possibly empty comma-separated list of numbers.
    pub(crate) fn number_list(&mut self) -> Result<Vec<u64>, ParseError> {
        let mut out = Vec::new();
        if let Tok::Num(_) = self.peek() {
            out.push(self.number("a number")?);
            while self.eat_sym(',') {
                out.push(self.number("a number")?);
            }
        }
        Ok(out)
    }

    pub(crate) fn optional_string(&mut self) -> Option<String> {
        match self.peek() {
            Tok::Str(s) => {
                let s = s.clone();
                self.bump();
                Some(s)
            }
            _ => None,
        }
    }
}

use std::collections::HashSet;

use super::{GenDecl, GroupBody, GroupDecl, Item, OmegaDecl, ParseError, ParseErrorKind, Pos, Ref, Rule, SpecFile};

const KEYWORDS: [&str; 6] = ["omega", "group", "grigorchuk", "gen", "swap", "id"];

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Name(String),
    Str(String),
    Sym(char),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Name(n) => format!("`{n}`"),
            Tok::Str(s) => format!("string {s:?}"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        match c {
            c if c.is_whitespace() => {
                bump!();
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump!();
                }
            }
            '"' => {
                bump!();
                let mut s = String::new();
                loop {
                    match bump!() {
                        Some('"') => break,
                        Some('\n') | None => return Err(ParseError::new(pos, ParseErrorKind::UnterminatedString)),
                        Some(c) => s.push(c),
                    }
                }
                out.push((Tok::Str(s), pos));
            }
            '=' | '(' | ')' | '{' | '}' | ',' | '*' => {
                bump!();
                out.push((Tok::Sym(c), pos));
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut s = String::new();
                while chars.peek().is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_') {
                    s.push(bump!().unwrap());
                }
                out.push((Tok::Name(s), pos));
            }
            other => {
                return Err(ParseError::new(pos, ParseErrorKind::UnexpectedChar(other)));
            }
        }
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &(Tok, Pos) {
        &self.toks[self.at]
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected<T>(&self, expected: &str) -> Result<T, ParseError> {
        let (tok, pos) = self.peek();
        Err(ParseError::new(
            *pos,
            ParseErrorKind::Expected {
                expected: expected.into(),
                found: tok.describe(),
            },
        ))
    }

    fn sym(&mut self, c: char) -> Result<Pos, ParseError> {
        match self.peek() {
            (Tok::Sym(d), pos) if *d == c => {
                let pos = *pos;
                self.next();
                Ok(pos)
            }
            _ => self.unexpected(&format!("`{c}`")),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<Pos, ParseError> {
        match self.peek() {
            (Tok::Name(n), pos) if n == kw => {
                let pos = *pos;
                self.next();
                Ok(pos)
            }
            _ => self.unexpected(&format!("`{kw}`")),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().0, Tok::Name(n) if n == kw)
    }

    fn name(&mut self) -> Result<(String, Pos), ParseError> {
        match self.peek().clone() {
            (Tok::Name(n), pos) if !KEYWORDS.contains(&n.as_str()) => {
                if n.starts_with(|c: char| c.is_ascii_digit()) {
                    return Err(ParseError::new(pos, ParseErrorKind::BadName(n)));
                }
                self.next();
                Ok((n, pos))
            }
            (Tok::Name(n), pos) => Err(ParseError::new(pos, ParseErrorKind::ReservedWord(n))),
            _ => self.unexpected("a name"),
        }
    }

    fn omega_string(&mut self) -> Result<(String, Pos), ParseError> {
        match self.peek().clone() {
            (Tok::Str(s), pos) => {
                if let Some((i, c)) = s.char_indices().find(|&(_, c)| !matches!(c, 'b' | 'c' | 'd')) {
                    let pos = Pos {
                        line: pos.line,
                        col: pos.col + 1 + s[..i].chars().count(),
                    };
                    return Err(ParseError::new(pos, ParseErrorKind::BadOmegaLetter(c)));
                }
                self.next();
                Ok((s, pos))
            }
            _ => self.unexpected("a quoted string"),
        }
    }

    fn omega_decl(&mut self) -> Result<OmegaDecl, ParseError> {
        let pos = self.keyword("omega")?;
        let (name, _) = self.name()?;
        self.sym('=')?;
        let (prefix, _) = self.omega_string()?;
        self.sym('(')?;
        let (cycle, cycle_pos) = self.omega_string()?;
        if cycle.is_empty() {
            return Err(ParseError::new(cycle_pos, ParseErrorKind::EmptyCycle));
        }
        self.sym(')')?;
        self.sym('*')?;
        Ok(OmegaDecl {
            name,
            prefix,
            cycle,
            pos,
        })
    }

    fn reference(&mut self) -> Result<Ref, ParseError> {
        if self.at_keyword("id") {
            let (_, pos) = self.next();
            return Ok(Ref::Id { pos });
        }
        let (name, pos) = self.name()?;
        Ok(Ref::Name { name, pos })
    }

    fn gen_decl(&mut self) -> Result<GenDecl, ParseError> {
        let pos = self.keyword("gen")?;
        let (name, _) = self.name()?;
        self.sym('=')?;
        let rule = if self.at_keyword("swap") {
            self.next();
            Rule::Swap
        } else {
            self.sym('(')?;
            let left = self.reference()?;
            self.sym(',')?;
            let right = self.reference()?;
            self.sym(')')?;
            Rule::Pair(left, right)
        };
        Ok(GenDecl { name, rule, pos })
    }

    fn group_decl(&mut self) -> Result<GroupDecl, ParseError> {
        let pos = self.keyword("group")?;
        let (name, _) = self.name()?;
        let body = match self.peek().0 {
            Tok::Sym('=') => {
                self.next();
                self.keyword("grigorchuk")?;
                self.sym('(')?;
                let (omega, omega_pos) = self.name()?;
                self.sym(')')?;
                GroupBody::Family { omega, omega_pos }
            }
            Tok::Sym('{') => {
                self.next();
                let mut gens = vec![self.gen_decl()?];
                while self.at_keyword("gen") {
                    gens.push(self.gen_decl()?);
                }
                self.sym('}')?;
                GroupBody::Explicit { gens }
            }
            _ => return self.unexpected("`=` or `{`"),
        };
        Ok(GroupDecl { name, body, pos })
    }

    fn file(&mut self) -> Result<SpecFile, ParseError> {
        let mut items = Vec::new();
        loop {
            match &self.peek().0 {
                Tok::Eof => break,
                Tok::Name(n) if n == "omega" => items.push(Item::Omega(self.omega_decl()?)),
                Tok::Name(n) if n == "group" => items.push(Item::Group(self.group_decl()?)),
                _ => return self.unexpected("`omega` or `group`"),
            }
        }
        Ok(SpecFile { items })
    }
}

fn check_names(file: &SpecFile) -> Result<(), ParseError> {
    let mut top = HashSet::new();
    let omegas: HashSet<&str> = file
        .items
        .iter()
        .filter_map(|item| match item {
            Item::Omega(o) => Some(o.name.as_str()),
            Item::Group(_) => None,
        })
        .collect();
    for item in &file.items {
        let (name, pos) = match item {
            Item::Omega(o) => (&o.name, o.pos),
            Item::Group(g) => (&g.name, g.pos),
        };
        if !top.insert(name.as_str()) {
            return Err(ParseError::new(pos, ParseErrorKind::Duplicate(name.clone())));
        }
        match item {
            Item::Omega(_) => {}
            Item::Group(g) => match &g.body {
                GroupBody::Family { omega, omega_pos } => {
                    if !omegas.contains(omega.as_str()) {
                        return Err(ParseError::new(*omega_pos, ParseErrorKind::Unresolved(omega.clone())));
                    }
                }
                GroupBody::Explicit { gens } => {
                    let mut names = HashSet::new();
                    for gen in gens {
                        if !names.insert(gen.name.as_str()) {
                            return Err(ParseError::new(gen.pos, ParseErrorKind::Duplicate(gen.name.clone())));
                        }
                    }
                    for gen in gens {
                        if let Rule::Pair(l, r) = &gen.rule {
                            for rf in [l, r] {
                                if let Ref::Name { name, pos } = rf {
                                    if !names.contains(name.as_str()) {
                                        return Err(ParseError::new(*pos, ParseErrorKind::Unresolved(name.clone())));
                                    }
                                }
                            }
                        }
                    }
                }
            },
        }
    }
    Ok(())
}

pub fn parse(text: &str) -> Result<SpecFile, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let file = p.file()?;
    check_names(&file)?;
    Ok(file)
}

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::GrammarError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn symbol(self) -> char {
        match self {
            Direction::Forward => '/',
            Direction::Backward => '\\',
        }
    }
}

/// A CCG syntactic category: an atom such as `NP`, or a slash category
/// `result/argument` (forward) or `result\argument` (backward).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Syntax {
    Atomic(Arc<str>),
    Slash {
        result: Arc<Syntax>,
        direction: Direction,
        argument: Arc<Syntax>,
    },
}

impl Syntax {
    pub fn atom(name: &str) -> Syntax {
        Syntax::Atomic(Arc::from(name))
    }

    pub fn slash(result: Syntax, direction: Direction, argument: Syntax) -> Syntax {
        Syntax::Slash {
            result: Arc::new(result),
            direction,
            argument: Arc::new(argument),
        }
    }

    pub fn forward(result: Syntax, argument: Syntax) -> Syntax {
        Syntax::slash(result, Direction::Forward, argument)
    }

    pub fn backward(result: Syntax, argument: Syntax) -> Syntax {
        Syntax::slash(result, Direction::Backward, argument)
    }

    pub fn is_slash(&self) -> bool {
        matches!(self, Syntax::Slash { .. })
    }

    /// `(result, argument)` when this is a slash in the given direction.
    pub fn split(&self, dir: Direction) -> Option<(&Syntax, &Syntax)> {
        match self {
            Syntax::Slash {
                result,
                direction,
                argument,
            } if *direction == dir => Some((result, argument)),
            _ => None,
        }
    }

    fn atoms<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Syntax::Atomic(a) => out.push(a),
            Syntax::Slash {
                result, argument, ..
            } => {
                result.atoms(out);
                argument.atoms(out);
            }
        }
    }

    /// Parses `(S\NP)/NP`-style text. Unparenthesized slashes associate to
    /// the left.
    pub fn parse(text: &str, inventory: &SyntaxInventory) -> Result<Syntax, GrammarError> {
        let mut p = SyntaxParser {
            chars: text.char_indices().collect(),
            pos: 0,
            end: text.len(),
        };
        let syn = p.parse_expr()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.error("trailing characters in category"));
        }
        let mut atoms = Vec::new();
        syn.atoms(&mut atoms);
        for a in atoms {
            if !inventory.contains(a) {
                return Err(GrammarError::UnknownAtom(a.to_string()));
            }
        }
        Ok(syn)
    }
}

impl fmt::Display for Syntax {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn part(s: &Syntax, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if s.is_slash() {
                write!(f, "({})", s)
            } else {
                write!(f, "{}", s)
            }
        }
        match self {
            Syntax::Atomic(a) => f.write_str(a),
            Syntax::Slash {
                result,
                direction,
                argument,
            } => {
                part(result, f)?;
                write!(f, "{}", direction.symbol())?;
                part(argument, f)
            }
        }
    }
}

struct SyntaxParser {
    chars: Vec<(usize, char)>,
    pos: usize,
    end: usize,
}

impl SyntaxParser {
    fn offset(&self) -> usize {
        self.chars.get(self.pos).map(|c| c.0).unwrap_or(self.end)
    }

    fn error(&self, message: &str) -> GrammarError {
        GrammarError::Syntax {
            offset: self.offset(),
            message: message.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn parse_expr(&mut self) -> Result<Syntax, GrammarError> {
        let mut left = self.parse_primary()?;
        loop {
            self.skip_ws();
            let direction = match self.peek() {
                Some('/') => Direction::Forward,
                Some('\\') => Direction::Backward,
                _ => return Ok(left),
            };
            self.pos += 1;
            let right = self.parse_primary()?;
            left = Syntax::slash(left, direction, right);
        }
    }

    fn parse_primary(&mut self) -> Result<Syntax, GrammarError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.parse_expr()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_alphanumeric() || c == '_' => {
                let mut name = String::new();
                while let Some(c) = self.peek().filter(|c| c.is_alphanumeric() || *c == '_') {
                    name.push(c);
                    self.pos += 1;
                }
                Ok(Syntax::atom(&name))
            }
            _ => Err(self.error("expected a category")),
        }
    }
}

/// The declared atomic categories. `S`, `N`, `NP` and `PP` are built in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntaxInventory {
    atoms: BTreeSet<String>,
}

pub const BUILTIN_ATOMS: [&str; 4] = ["S", "N", "NP", "PP"];

impl Default for SyntaxInventory {
    fn default() -> Self {
        SyntaxInventory {
            atoms: BUILTIN_ATOMS.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl SyntaxInventory {
    pub fn contains(&self, atom: &str) -> bool {
        self.atoms.contains(atom)
    }

    pub fn declare(&mut self, atom: &str) {
        self.atoms.insert(atom.to_string());
    }

    /// Declared atoms beyond the built-in ones.
    pub fn extra_atoms(&self) -> impl Iterator<Item = &str> {
        self.atoms
            .iter()
            .map(|s| s.as_str())
            .filter(|a| !BUILTIN_ATOMS.contains(a))
    }
}

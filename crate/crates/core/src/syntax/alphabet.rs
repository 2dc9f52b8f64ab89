use std::fmt;

use crate::error::{Error, Result};

/// Index of a letter in its [`Alphabet`].
///
/// In proposition-basis mode the index doubles as a bit mask: bit `j` is set
/// iff the `j`-th proposition belongs to the letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(pub usize);

const MAX_PROPS: usize = 12;
const RESERVED: &[&str] = &["mu", "nu", "top", "ff", "tt", "O", "alphabet", "props"];

/// A finite, ordered alphabet, optionally generated as the powerset of a
/// proposition basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<String>,
    props: Option<Vec<String>>,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl Alphabet {
    /// Plain alphabet of named letters, in the given order.
    pub fn new<I, S>(letters: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        if letters.is_empty() {
            return Err(Error::Alphabet("alphabet must be nonempty".into()));
        }
        for (i, l) in letters.iter().enumerate() {
            if !is_identifier(l) || RESERVED.contains(&l.as_str()) {
                return Err(Error::Alphabet(format!("`{l}` is not a valid letter name")));
            }
            if letters[..i].contains(l) {
                return Err(Error::Alphabet(format!("duplicate letter `{l}`")));
            }
        }
        Ok(Alphabet { letters, props: None })
    }

    /// Powerset alphabet over a proposition basis: one letter per subset,
    /// ordered by binary counting over the basis.
    pub fn powerset<I, S>(props: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let props: Vec<String> = props.into_iter().map(Into::into).collect();
        if props.len() > MAX_PROPS {
            return Err(Error::Alphabet(format!("at most {MAX_PROPS} propositions are supported")));
        }
        for (i, p) in props.iter().enumerate() {
            if !is_identifier(p) || RESERVED.contains(&p.as_str()) {
                return Err(Error::Alphabet(format!("`{p}` is not a valid proposition name")));
            }
            if props[..i].contains(p) {
                return Err(Error::Alphabet(format!("duplicate proposition `{p}`")));
            }
        }
        let letters = (0..1usize << props.len())
            .map(|mask| {
                let members: Vec<&str> =
                    props.iter().enumerate().filter(|(j, _)| mask >> j & 1 == 1).map(|(_, p)| p.as_str()).collect();
                format!("{{{}}}", members.join(","))
            })
            .collect();
        Ok(Alphabet { letters, props: Some(props) })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.letters.len()).map(Letter)
    }

    pub fn name(&self, letter: Letter) -> &str {
        &self.letters[letter.0]
    }

    pub fn names(&self) -> &[String] {
        &self.letters
    }

    pub fn letter(&self, name: &str) -> Option<Letter> {
        self.letters.iter().position(|l| l == name).map(Letter)
    }

    pub fn contains(&self, letter: Letter) -> bool {
        letter.0 < self.letters.len()
    }

    pub fn props(&self) -> Option<&[String]> {
        self.props.as_deref()
    }

    pub fn is_powerset(&self) -> bool {
        self.props.is_some()
    }

    pub fn prop_index(&self, name: &str) -> Option<usize> {
        self.props.as_ref()?.iter().position(|p| p == name)
    }

    /// Letter made of exactly the given propositions.
    pub fn letter_of_props<'a, I>(&self, props: I) -> Result<Letter>
    where
        I: IntoIterator<Item = &'a str>,
    {
        if !self.is_powerset() {
            return Err(Error::NotPowerset);
        }
        let mut mask = 0;
        for p in props {
            let j = self.prop_index(p).ok_or_else(|| Error::Alphabet(format!("undeclared proposition `{p}`")))?;
            mask |= 1 << j;
        }
        Ok(Letter(mask))
    }

    /// Whether proposition number `prop` holds in `letter` (powerset mode).
    pub fn holds(&self, letter: Letter, prop: usize) -> bool {
        letter.0 >> prop & 1 == 1
    }

    /// Header line in the file format: `alphabet a b ;` or `props P Q ;`.
    pub fn header(&self) -> String {
        match &self.props {
            Some(props) if props.is_empty() => "props ;".to_string(),
            Some(props) => format!("props {} ;", props.join(" ")),
            None => format!("alphabet {} ;", self.letters.join(" ")),
        }
    }

    /// Re-reads an `n`-letter alphabet as the powerset of `log2 n`
    /// propositions `p0, p1, ...`, keeping letter indices. Requires `n` to be
    /// a power of two.
    pub fn binary_encoding(&self) -> Result<Alphabet> {
        if self.is_powerset() {
            return Ok(self.clone());
        }
        let n = self.len();
        if !n.is_power_of_two() {
            return Err(Error::Alphabet(format!("cannot encode {n} letters as a powerset (not a power of two)")));
        }
        let k = n.trailing_zeros() as usize;
        Alphabet::powerset((0..k).map(|j| format!("p{j}")))
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.header())
    }
}

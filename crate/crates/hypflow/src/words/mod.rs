//! Group presentations, word reduction, exact geodesic lengths, and the
//! brute-force ball oracle for the bundled presentation families.

mod ball;
mod pack;
mod reduce;

pub use ball::{Ball, BallOptions, SphereSummary, NO_ELEMENT};
pub use reduce::NormalTracker;

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use reduce::RewriteTables;

/// A signed generator letter. Encoded as an integer in `0..2g` with the
/// inverse pairing `i <-> i ^ 1`, so `s1 < s1^-1 < s2 < s2^-1 < ...` under
/// the natural order.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter(pub u8);

impl Letter {
    pub fn new(generator_index: u8, inverted: bool) -> Self {
        Letter(generator_index * 2 + inverted as u8)
    }

    pub fn generator_index(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn inverted(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}{}", self.generator_index() + 1, if self.inverted() { "'" } else { "" })
    }
}

/// A finite sequence of letters. Reduction status is a property, not an
/// invariant.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn repeat(&self, n: usize) -> Word {
        let mut v = Vec::with_capacity(self.len() * n);
        for _ in 0..n {
            v.extend_from_slice(&self.0);
        }
        Word(v)
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    /// Renders using the presentation's generator names, e.g. `s1 s2^-1`.
    pub fn display(&self, p: &Presentation) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|l| p.letter_token(*l))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses a whitespace-separated list of generator tokens; `1` or an
    /// empty string denote the empty word.
    pub fn parse(text: &str, p: &Presentation) -> Result<Word> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "1" {
                continue;
            }
            letters.extend(p.parse_token(tok)?);
        }
        Ok(Word(letters))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word[")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l:?}")?;
        }
        write!(f, "]")
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    FreeProduct,
    Dehn,
    Free,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::FreeProduct => write!(f, "free-product"),
            Family::Dehn => write!(f, "dehn"),
            Family::Free => write!(f, "free"),
        }
    }
}

/// A finite presentation from one of the supported families.
pub struct Presentation {
    names: Vec<String>,
    torsion: Vec<Option<u32>>,
    relators: Vec<Word>,
    family: Family,
    tables: OnceLock<RewriteTables>,
}

impl Presentation {
    pub fn new(
        names: Vec<String>,
        torsion: Vec<Option<u32>>,
        relators: Vec<Word>,
        family: Family,
    ) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidData("presentation has no generators".into()));
        }
        if names.len() > 8 {
            return Err(Error::InvalidData(
                "at most 8 generators are supported".into(),
            ));
        }
        if torsion.len() != names.len() {
            return Err(Error::InvalidData(
                "torsion table length does not match generator count".into(),
            ));
        }
        let p = Presentation {
            names,
            torsion,
            relators,
            family,
            tables: OnceLock::new(),
        };
        for r in &p.relators {
            if r.is_empty() {
                return Err(Error::InvalidData("empty relator".into()));
            }
            if free_reduce(r).len() != r.len() {
                return Err(Error::InvalidData(format!(
                    "relator {} is not freely reduced",
                    r.display(&p)
                )));
            }
        }
        if p.family == Family::FreeProduct {
            let expected: Vec<Word> = p
                .torsion
                .iter()
                .enumerate()
                .filter_map(|(i, t)| {
                    t.map(|n| Word(vec![Letter::new(i as u8, false); n as usize]))
                })
                .collect();
            if p.relators != expected {
                return Err(Error::InvalidData(
                    "free-product relators must be exactly the torsion relators".into(),
                ));
            }
        }
        Ok(p)
    }

    /// The free product Z/p * Z/q on generators `a`, `b`.
    pub fn free_product(p: u32, q: u32) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidOrder(p));
        }
        if q < 2 {
            return Err(Error::InvalidOrder(q));
        }
        let relators = vec![
            Word(vec![Letter::new(0, false); p as usize]),
            Word(vec![Letter::new(1, false); q as usize]),
        ];
        Presentation::new(
            vec!["s1".into(), "s2".into()],
            vec![Some(p), Some(q)],
            relators,
            Family::FreeProduct,
        )
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn alphabet_size(&self) -> usize {
        self.names.len() * 2
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn torsion(&self) -> &[Option<u32>] {
        &self.torsion
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.alphabet_size() as u8).map(Letter)
    }

    pub fn letter_token(&self, l: Letter) -> String {
        let name = &self.names[l.generator_index()];
        if l.inverted() {
            format!("{name}^-1")
        } else {
            name.clone()
        }
    }

    /// Parses a single token like `s2`, `s2^-1`, or `s2^3` into letters.
    pub fn parse_token(&self, tok: &str) -> Result<Vec<Letter>> {
        let (base, exp) = match tok.split_once('^') {
            Some((b, e)) => {
                let exp: i32 = e.parse().map_err(|_| {
                    Error::InvalidData(format!("bad exponent in token `{tok}`"))
                })?;
                (b, exp)
            }
            None => (tok, 1),
        };
        let gi = self
            .names
            .iter()
            .position(|n| n == base)
            .ok_or_else(|| Error::InvalidData(format!("unknown generator `{base}`")))?;
        let letter = Letter::new(gi as u8, exp < 0);
        Ok(vec![letter; exp.unsigned_abs() as usize])
    }

    pub fn parse_file(text: &str) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut torsion_decl: Vec<(String, u32)> = Vec::new();
        let mut relator_lines: Vec<(usize, String)> = Vec::new();
        let mut family = None;
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(ln + 1, 1, "expected `key: value`"))?;
            let rest = rest.trim();
            match key.trim() {
                "generators" => {
                    names = rest.split_whitespace().map(str::to_string).collect();
                }
                "torsion" => {
                    let mut it = rest.split_whitespace();
                    let (name, order) = (it.next(), it.next());
                    match (name, order) {
                        (Some(n), Some(o)) => {
                            let o: u32 = o.parse().map_err(|_| {
                                Error::parse(ln + 1, 1, "torsion order must be an integer")
                            })?;
                            torsion_decl.push((n.to_string(), o));
                        }
                        _ => return Err(Error::parse(ln + 1, 1, "expected `torsion: s N`")),
                    }
                }
                "relator" => relator_lines.push((ln + 1, rest.to_string())),
                "family" => {
                    family = Some(match rest {
                        "free-product" => Family::FreeProduct,
                        "dehn" => Family::Dehn,
                        "free" => Family::Free,
                        other => {
                            return Err(Error::parse(
                                ln + 1,
                                1,
                                format!("unknown family `{other}`"),
                            ))
                        }
                    });
                }
                other => return Err(Error::parse(ln + 1, 1, format!("unknown key `{other}`"))),
            }
        }
        let family =
            family.ok_or_else(|| Error::parse(text.lines().count(), 1, "missing `family:`"))?;
        if names.is_empty() {
            return Err(Error::parse(1, 1, "missing `generators:`"));
        }
        let mut torsion = vec![None; names.len()];
        for (n, o) in torsion_decl {
            let gi = names
                .iter()
                .position(|x| *x == n)
                .ok_or_else(|| Error::InvalidData(format!("torsion for unknown generator {n}")))?;
            torsion[gi] = Some(o);
        }
        // Temporary presentation used only to parse relator words.
        let proto = Presentation {
            names: names.clone(),
            torsion: torsion.clone(),
            relators: Vec::new(),
            family,
            tables: OnceLock::new(),
        };
        let mut relators = Vec::new();
        for (_ln, text) in relator_lines {
            relators.push(Word::parse(&text, &proto)?);
        }
        if family == Family::FreeProduct && relators.is_empty() {
            relators = torsion
                .iter()
                .enumerate()
                .filter_map(|(i, t)| {
                    t.map(|n| Word(vec![Letter::new(i as u8, false); n as usize]))
                })
                .collect();
        }
        Presentation::new(names, torsion, relators, family)
    }

    pub fn to_file(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("generators: {}\n", self.names.join(" ")));
        for (i, t) in self.torsion.iter().enumerate() {
            if let Some(o) = t {
                out.push_str(&format!("torsion: {} {}\n", self.names[i], o));
            }
        }
        for r in &self.relators {
            out.push_str(&format!("relator: {}\n", r.display(self)));
        }
        out.push_str(&format!("family: {}\n", self.family));
        out
    }

    pub(crate) fn rewrite_tables(&self) -> &RewriteTables {
        self.tables.get_or_init(|| RewriteTables::build(self))
    }

    fn require_reducible(&self) -> Result<()> {
        match self.family {
            Family::FreeProduct | Family::Dehn => Ok(()),
            Family::Free if self.relators.is_empty() => Ok(()),
            Family::Free => Err(Error::UnsupportedPresentation(
                "family `free` with nonempty relators".into(),
            )),
        }
    }
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Presentation({}; {} relators; {})",
            self.names.join(","),
            self.relators.len(),
            self.family
        )
    }
}

/// Cancels adjacent letter-inverse pairs until none remain.
pub fn free_reduce(w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in &w.0 {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}

/// Rewrites `w` to a Dehn-reduced word for the same group element: no
/// subword longer than half of any cyclic relator conjugate remains, and in
/// the free-product case every syllable is in least-length coset form.
///
/// Letters are folded in from the left, so this agrees with
/// [`multiply_normal`] by construction.
pub fn dehn_reduce(w: &Word, p: &Presentation) -> Result<Word> {
    p.require_reducible()?;
    match p.family() {
        Family::FreeProduct => Ok(reduce::syllable_normal_form(w, p)),
        Family::Free => Ok(free_reduce(w)),
        Family::Dehn => {
            let mut t = NormalTracker::new(p)?;
            for &l in &w.0 {
                t.push(l);
            }
            Ok(t.into_word())
        }
    }
}

/// Exact geodesic length `d_S(o, x)` of the element represented by `w`.
pub fn geodesic_length(w: &Word, p: &Presentation) -> Result<usize> {
    p.require_reducible()?;
    match p.family() {
        Family::FreeProduct => Ok(reduce::freeproduct_geodesic_length(w, p)),
        Family::Free => Ok(free_reduce(w).len()),
        Family::Dehn => {
            let r = dehn_reduce(w, p)?;
            Ok(reduce::geodesic_reduce(r, p).len())
        }
    }
}

/// A geodesic representative of the element of `w` (not canonical).
pub fn geodesic_representative(w: &Word, p: &Presentation) -> Result<Word> {
    p.require_reducible()?;
    match p.family() {
        Family::FreeProduct => Ok(reduce::syllable_normal_form(w, p)),
        Family::Free => Ok(free_reduce(w)),
        Family::Dehn => {
            let r = dehn_reduce(w, p)?;
            Ok(reduce::geodesic_reduce(r, p))
        }
    }
}

/// Multiplies a reduced word by one letter, touching only a bounded suffix
/// window. Equivalent to `dehn_reduce(w . a)`.
pub fn multiply_normal(w: &Word, a: Letter, p: &Presentation) -> Result<Word> {
    p.require_reducible()?;
    let mut t = NormalTracker::resume(w.clone(), p)?;
    t.push(a);
    Ok(t.into_word())
}

/// Canonical equality key for the element of `w`: the lexicographically
/// least geodesic representative.
pub fn canonical_key(w: &Word, p: &Presentation) -> Result<Word> {
    p.require_reducible()?;
    match p.family() {
        Family::FreeProduct => Ok(reduce::syllable_normal_form(w, p)),
        Family::Free => Ok(free_reduce(w)),
        Family::Dehn => {
            let r = dehn_reduce(w, p)?;
            Ok(reduce::canonical_geodesic(r, p))
        }
    }
}

/// Result of a stable translation length run.
#[derive(Debug, Clone, Serialize)]
pub struct StableLength {
    pub value: f64,
    /// `(n, geodesic_length(w^n) / n)` samples at the doubling powers.
    pub samples: Vec<(u32, f64)>,
    /// Largest increase of `len(n)/n` along consecutive samples; the
    /// sequence should be non-increasing up to boundary effects.
    pub monotonicity_defect: f64,
}

/// Approximates the stable translation length `lim geodesic_length(w^n)/n`
/// by doubling `n` up to `n_max`.
pub fn stable_length(w: &Word, p: &Presentation, n_max: u32) -> Result<StableLength> {
    if n_max < 2 {
        return Err(Error::InvalidData("stable_length requires n_max >= 2".into()));
    }
    p.require_reducible()?;
    let mut samples = Vec::new();
    let mut n = 1u32;
    while n <= n_max {
        let len = geodesic_length(&w.repeat(n as usize), p)?;
        samples.push((n, len as f64 / n as f64));
        if n == n_max {
            break;
        }
        n = (n * 2).min(n_max);
    }
    let mut defect = 0.0f64;
    for pair in samples.windows(2) {
        defect = defect.max(pair[1].1 - pair[0].1);
    }
    Ok(StableLength {
        value: samples.last().unwrap().1,
        samples,
        monotonicity_defect: defect,
    })
}

/// Exhaustive breadth-first enumeration of the ball of radius `r`; the
/// ground-truth oracle the rest of the crate validates against.
pub fn bfs_ball(p: &Presentation, r: u32) -> Result<Ball> {
    Ball::build(p, r, &BallOptions::default())
}

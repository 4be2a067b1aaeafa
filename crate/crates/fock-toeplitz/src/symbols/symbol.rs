use std::collections::BTreeMap;
use std::path::Path;

use rug::Rational;
use serde::{Deserialize, Serialize};

use super::geometry::{parse_decimal, Disc, DiscRelation, Point};
use super::region::{Arrangement, RegionSet};
use crate::bigarith::BigReal;
use crate::error::{Error, Result};

/// One weighted disc indicator w·χ_D.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub disc: Disc,
    pub weight: Rational,
}

impl Term {
    pub fn new(disc: Disc, weight: Rational) -> Self {
        Term { disc, weight }
    }

    /// `[x, y, radius, weight]` as decimal strings.
    pub fn parse(fields: [&str; 4]) -> Result<Self> {
        let [x, y, r, w] = fields;
        Ok(Term { disc: Disc::parse(x, y, r)?, weight: parse_decimal(w)? })
    }
}

/// Finite sum of weighted open-disc indicators. Weights add where discs overlap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symbol {
    terms: Vec<Term>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRecord {
    center: [String; 2],
    radius: String,
    weight: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SymbolRecord {
    terms: Vec<TermRecord>,
}

impl Symbol {
    pub fn new(terms: Vec<Term>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Domain("a symbol needs at least one term".into()));
        }
        if let Some(t) = terms.iter().find(|t| t.weight.cmp0().is_eq()) {
            return Err(Error::Domain(format!("zero weight on {}", t.disc)));
        }
        Ok(Symbol { terms })
    }

    /// Rows of `[x, y, radius, weight]` decimal strings.
    pub fn from_decimal_terms(rows: &[[&str; 4]]) -> Result<Self> {
        Symbol::new(rows.iter().map(|r| Term::parse(*r)).collect::<Result<_>>()?)
    }

    /// Indicator of a single disc with the given weight.
    pub fn disc(disc: Disc, weight: Rational) -> Result<Self> {
        Symbol::new(vec![Term::new(disc, weight)])
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: SymbolRecord =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("symbol JSON: {e}")))?;
        let terms = record
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| {
                Term::parse([&t.center[0], &t.center[1], &t.radius, &t.weight])
                    .map_err(|e| Error::Config(format!("symbol term {i}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Symbol::new(terms).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Symbol::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let record = SymbolRecord {
            terms: self
                .terms
                .iter()
                .map(|t| TermRecord {
                    center: [rational_to_decimal(&t.disc.center().x), rational_to_decimal(&t.disc.center().y)],
                    radius: rational_to_decimal(t.disc.radius()),
                    weight: rational_to_decimal(&t.weight),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&record).expect("symbol serializes")
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn discs(&self) -> impl Iterator<Item = &Disc> {
        self.terms.iter().map(|t| &t.disc)
    }

    /// Sum of weights of the open discs containing `z`.
    pub fn evaluate(&self, z: &Point) -> Rational {
        self.terms.iter().filter(|t| t.disc.contains_point(z)).fold(Rational::new(), |acc, t| acc + &t.weight)
    }

    pub fn evaluate_f64(&self, x: f64, y: f64) -> f64 {
        self.evaluate(&Point::from_f64(x, y)).to_f64()
    }

    pub fn negated(&self) -> Symbol {
        Symbol { terms: self.terms.iter().map(|t| Term::new(t.disc.clone(), Rational::from(-&t.weight))).collect() }
    }

    pub fn scaled(&self, factor: &Rational) -> Result<Symbol> {
        Symbol::new(self.terms.iter().map(|t| Term::new(t.disc.clone(), Rational::from(factor * &t.weight))).collect())
    }

    /// Image of the symbol under z ↦ s·z + t (weights unchanged).
    pub fn transformed(&self, scale: &Rational, shift: &Point) -> Symbol {
        Symbol {
            terms: self.terms.iter().map(|t| Term::new(t.disc.transformed(scale, shift), t.weight.clone())).collect(),
        }
    }

    /// Pointwise sum of two symbols.
    pub fn plus(&self, other: &Symbol) -> Result<Symbol> {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Symbol::from_map(merge(terms.into_iter().map(|t| (t.disc, t.weight))))
    }

    fn from_map(map: BTreeMap<Disc, Rational>) -> Result<Symbol> {
        Symbol::new(map.into_iter().map(|(d, w)| Term::new(d, w)).collect())
    }

    /// Max over the support of |z| (closed discs).
    pub fn support_radius(&self, prec: u32) -> BigReal {
        self.discs().map(|d| d.outer_modulus(prec)).fold(BigReal::zero(prec), |a, b| a.max(&b))
    }

    pub fn arrangement(&self) -> Arrangement {
        classify(&merged_discs(&self.terms))
    }

    /// sup|V|: exact for disjoint/laminar arrangements, Σ|w| otherwise.
    pub fn sup_abs(&self) -> Rational {
        match self.cells() {
            Ok(forest) => forest.cells.iter().map(|c| Rational::from(c.value.abs_ref())).max().unwrap_or_default(),
            Err(_) => self.terms.iter().fold(Rational::new(), |acc, t| acc + Rational::from(t.weight.abs_ref())),
        }
    }

    /// Laminar cell structure; fails on a properly overlapping pair.
    pub fn cells(&self) -> Result<CellForest> {
        let merged = merge(self.terms.iter().map(|t| (t.disc.clone(), t.weight.clone())));
        let mut discs: Vec<(Disc, Rational)> = merged.into_iter().collect();
        // outermost first
        discs.sort_by(|a, b| b.0.radius().cmp(a.0.radius()).then_with(|| a.0.cmp(&b.0)));
        let mut cells: Vec<Cell> = Vec::with_capacity(discs.len());
        for (disc, weight) in discs {
            let mut parent: Option<usize> = None;
            for (j, cell) in cells.iter().enumerate() {
                match disc.relation(&cell.disc) {
                    DiscRelation::Inside => {
                        if parent.is_none_or(|p| cells[p].disc.radius() > cell.disc.radius()) {
                            parent = Some(j);
                        }
                    }
                    DiscRelation::Disjoint => {}
                    _ => {
                        return Err(Error::UnsupportedArrangement {
                            first: cell.disc.to_string(),
                            second: disc.to_string(),
                        })
                    }
                }
            }
            let value = match parent {
                Some(p) => Rational::from(&cells[p].value + &weight),
                None => weight,
            };
            let index = cells.len();
            if let Some(p) = parent {
                cells[p].children.push(index);
            }
            cells.push(Cell { disc, value, parent, children: Vec::new() });
        }
        Ok(CellForest { cells })
    }

    /// Supports of V₊ and V₋, the essential negative support, and the value bounds.
    pub fn decompose(&self) -> Result<Decomposition> {
        let forest = self.cells()?;
        let positive = forest.region_where(|v| v.cmp0().is_gt());
        let negative = forest.region_where(|v| v.cmp0().is_lt());
        let values = |sign: std::cmp::Ordering| {
            let mut vals: Vec<Rational> = forest
                .cells
                .iter()
                .filter(|c| c.value.cmp0() == sign)
                .map(|c| Rational::from(c.value.abs_ref()))
                .collect();
            vals.sort();
            (vals.first().cloned(), vals.last().cloned())
        };
        let (tau_plus, sigma_plus) = values(std::cmp::Ordering::Greater);
        let (tau_minus, sigma_minus) = values(std::cmp::Ordering::Less);
        let positive_part = forest.synthesize(|v| if v.cmp0().is_gt() { v.clone() } else { Rational::new() });
        let negative_part = forest.synthesize(|v| if v.cmp0().is_lt() { Rational::from(-v) } else { Rational::new() });
        Ok(Decomposition {
            essential_negative_support: negative.clone(),
            positive_support: positive,
            negative_support: negative,
            bounds: SymbolBounds { tau_plus, sigma_plus, tau_minus, sigma_minus },
            positive_part,
            negative_part,
        })
    }

    /// V ± ε|V| on every cell.
    pub fn epsilon_tilt(&self, epsilon: &Rational) -> Result<(Symbol, Symbol)> {
        if epsilon.cmp0().is_le() || *epsilon >= 1 {
            return Err(Error::Domain(format!("tilt parameter must lie in (0, 1), got {}", epsilon.to_f64())));
        }
        let forest = self.cells()?;
        let tilt = |sign: i32| {
            move |v: &Rational| {
                let bump = Rational::from(epsilon * Rational::from(v.abs_ref()));
                if sign > 0 {
                    Rational::from(v + &bump)
                } else {
                    Rational::from(v - &bump)
                }
            }
        };
        let plus = forest.synthesize(tilt(1)).ok_or_else(|| Error::Domain("tilt vanished".into()))?;
        let minus = forest.synthesize(tilt(-1)).ok_or_else(|| Error::Domain("tilt vanished".into()))?;
        Ok((plus, minus))
    }
}

/// Exact decimal when the denominator divides a power of ten, else 40 significant digits.
pub fn rational_to_decimal(r: &Rational) -> String {
    let mut den = r.denom().clone();
    let (mut twos, mut fives) = (0u32, 0u32);
    while den.is_divisible_u(2) {
        den /= 2;
        twos += 1;
    }
    while den.is_divisible_u(5) {
        den /= 5;
        fives += 1;
    }
    if den != 1 {
        return BigReal::from_rational(r, 160).to_decimal_digits(40);
    }
    let places = twos.max(fives);
    if places == 0 {
        return r.numer().to_string();
    }
    let scaled = Rational::from(r * Rational::from(rug::Integer::from(rug::Integer::u_pow_u(10, places))));
    let n = scaled.numer().clone();
    let negative = n < 0;
    let digits = n.abs().to_string();
    let digits = format!("{:0>width$}", digits, width = places as usize + 1);
    let split = digits.len() - places as usize;
    let body = format!("{}.{}", &digits[..split], &digits[split..]);
    let body = body.trim_end_matches('0').trim_end_matches('.').to_string();
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

fn merge(terms: impl Iterator<Item = (Disc, Rational)>) -> BTreeMap<Disc, Rational> {
    let mut map: BTreeMap<Disc, Rational> = BTreeMap::new();
    for (d, w) in terms {
        *map.entry(d).or_default() += w;
    }
    map.retain(|_, w| w.cmp0().is_ne());
    map
}

fn merged_discs(terms: &[Term]) -> Vec<Disc> {
    let mut discs: Vec<Disc> = terms.iter().map(|t| t.disc.clone()).collect();
    discs.sort();
    discs.dedup();
    discs
}

pub(crate) fn classify(discs: &[Disc]) -> Arrangement {
    let mut nested = false;
    for (i, a) in discs.iter().enumerate() {
        for b in &discs[i + 1..] {
            match a.relation(b) {
                DiscRelation::Disjoint | DiscRelation::Equal => {}
                DiscRelation::Inside | DiscRelation::Contains => nested = true,
                DiscRelation::Overlap => return Arrangement::General,
            }
        }
    }
    if nested {
        Arrangement::Laminar
    } else {
        Arrangement::PairwiseDisjoint
    }
}

/// A disc minus its child discs, carrying the constant symbol value there.
#[derive(Clone, Debug)]
pub struct Cell {
    pub disc: Disc,
    pub value: Rational,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CellForest {
    pub cells: Vec<Cell>,
}

impl CellForest {
    /// Indicator of the union of cells whose value satisfies `keep`.
    pub fn region_where(&self, keep: impl Fn(&Rational) -> bool) -> RegionSet {
        let mut coeffs: BTreeMap<Disc, i64> = BTreeMap::new();
        for cell in self.cells.iter().filter(|c| keep(&c.value)) {
            *coeffs.entry(cell.disc.clone()).or_default() += 1;
            for &ch in &cell.children {
                *coeffs.entry(self.cells[ch].disc.clone()).or_default() -= 1;
            }
        }
        RegionSet::from_indicator(coeffs.into_iter().filter(|(_, c)| *c != 0).collect())
    }

    /// Symbol taking value `f(v)` on each cell of value `v`; `None` if identically zero.
    pub fn synthesize(&self, f: impl Fn(&Rational) -> Rational) -> Option<Symbol> {
        let mut weights: BTreeMap<Disc, Rational> = BTreeMap::new();
        for cell in &self.cells {
            let v = f(&cell.value);
            if v.cmp0().is_eq() {
                continue;
            }
            *weights.entry(cell.disc.clone()).or_default() += &v;
            for &ch in &cell.children {
                *weights.entry(self.cells[ch].disc.clone()).or_default() -= &v;
            }
        }
        weights.retain(|_, w| w.cmp0().is_ne());
        (!weights.is_empty()).then(|| Symbol::from_map(weights).expect("nonempty"))
    }
}

/// Essential infima and suprema of w± over Ω±; `None` for an empty part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolBounds {
    pub tau_plus: Option<Rational>,
    pub sigma_plus: Option<Rational>,
    pub tau_minus: Option<Rational>,
    pub sigma_minus: Option<Rational>,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub positive_support: RegionSet,
    pub negative_support: RegionSet,
    /// Closure of {V < 0}; for piecewise-constant symbols equal to `negative_support`.
    pub essential_negative_support: RegionSet,
    pub bounds: SymbolBounds,
    /// V₊ ≥ 0, absent when V ≤ 0.
    pub positive_part: Option<Symbol>,
    /// V₋ ≥ 0, absent when V ≥ 0.
    pub negative_part: Option<Symbol>,
}

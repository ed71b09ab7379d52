//! JSON documents read and written by the command line.

use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use incps::freealg::{Alphabet, Derivation, Generator, Poly, Relation, Word};
use incps::freeness::Report;
use incps::nc::Partition;
use incps::ncb::BPartition;
use incps::state::{CumulantSpec, MomentSource, State};
use incps::{Complex64, Dual};
use serde::{Deserialize, Serialize};

/// A complex number as `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct C(pub f64, pub f64);

impl From<Complex64> for C {
    fn from(z: Complex64) -> Self {
        C(z.re, z.im)
    }
}

impl From<C> for Complex64 {
    fn from(c: C) -> Self {
        Complex64::new(c.0, c.1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualJson {
    pub body: C,
    pub soul: C,
}

impl From<Dual> for DualJson {
    fn from(d: Dual) -> Self {
        DualJson { body: d.body.into(), soul: d.soul.into() }
    }
}

impl From<DualJson> for Dual {
    fn from(d: DualJson) -> Self {
        Dual::new(d.body.into(), d.soul.into())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationJson {
    Free,
    Idempotent,
    Involution,
}

impl From<Relation> for RelationJson {
    fn from(r: Relation) -> Self {
        match r {
            Relation::Free => RelationJson::Free,
            Relation::Idempotent => RelationJson::Idempotent,
            Relation::Involution => RelationJson::Involution,
        }
    }
}

impl From<RelationJson> for Relation {
    fn from(r: RelationJson) -> Self {
        match r {
            RelationJson::Free => Relation::Free,
            RelationJson::Idempotent => Relation::Idempotent,
            RelationJson::Involution => Relation::Involution,
        }
    }
}

/// A generator: a bare name is a free generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GeneratorJson {
    Name(String),
    Full { name: String, relation: RelationJson },
}

pub fn alphabet_to_json(a: &Alphabet) -> Vec<GeneratorJson> {
    a.generators()
        .iter()
        .map(|g| match g.relation {
            Relation::Free => GeneratorJson::Name(g.name.clone()),
            r => GeneratorJson::Full { name: g.name.clone(), relation: r.into() },
        })
        .collect()
}

pub fn alphabet_from_json(gens: &[GeneratorJson]) -> Result<Arc<Alphabet>> {
    let gens = gens
        .iter()
        .map(|g| match g {
            GeneratorJson::Name(n) => Generator::new(n.clone(), Relation::Free),
            GeneratorJson::Full { name, relation } => Generator::new(name.clone(), (*relation).into()),
        })
        .collect();
    Ok(Arc::new(Alphabet::new(gens)?))
}

fn letters_from_names(a: &Alphabet, names: &[String]) -> Result<Vec<usize>> {
    Ok(names.iter().map(|n| a.index_of(n)).collect::<incps::Result<Vec<_>>>()?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentJson {
    pub word: Vec<String>,
    pub body: C,
    pub soul: C,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub alphabet: Vec<GeneratorJson>,
    pub degree: usize,
    pub moments: Vec<MomentJson>,
}

impl StateJson {
    /// Every nonempty word of the table, in shortlex order.
    pub fn from_state(s: &State) -> Self {
        let a = s.alphabet();
        let moments = s
            .table()
            .iter()
            .filter(|(w, _)| !w.is_empty())
            .map(|(w, v)| MomentJson { word: a.names(w.letters()), body: v.body.into(), soul: v.soul.into() })
            .collect();
        StateJson { alphabet: alphabet_to_json(a), degree: s.degree(), moments }
    }

    /// Words are normalized on input; a word given twice is an error.
    pub fn to_state(&self) -> Result<State> {
        let a = alphabet_from_json(&self.alphabet)?;
        let mut entries: Vec<(Word, Dual)> = Vec::with_capacity(self.moments.len());
        for m in &self.moments {
            let w = a.normalize(&letters_from_names(&a, &m.word)?);
            if entries.iter().any(|(u, _)| *u == w) {
                bail!("word {} appears twice", a.format_word(&w));
            }
            entries.push((w, Dual::new(m.body.into(), m.soul.into())));
        }
        let s = State::new(a, self.degree, entries)?;
        if !s.is_complete() {
            bail!(incps::Error::IncompleteInput(format!("the table does not cover every word up to degree {}", self.degree)));
        }
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CumulantJson {
    pub tuple: Vec<String>,
    pub body: C,
    pub soul: C,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecJson {
    pub alphabet: Vec<GeneratorJson>,
    pub degree: usize,
    pub cumulants: Vec<CumulantJson>,
}

impl SpecJson {
    pub fn from_spec(s: &CumulantSpec) -> Self {
        let a = s.alphabet();
        let cumulants = s
            .entries()
            .iter()
            .map(|(t, v)| CumulantJson { tuple: a.names(t), body: v.body.into(), soul: v.soul.into() })
            .collect();
        SpecJson { alphabet: alphabet_to_json(a), degree: s.degree(), cumulants }
    }

    pub fn to_spec(&self) -> Result<CumulantSpec> {
        let a = alphabet_from_json(&self.alphabet)?;
        let entries = self
            .cumulants
            .iter()
            .map(|c| Ok((letters_from_names(&a, &c.tuple)?, Dual::new(c.body.into(), c.soul.into()))))
            .collect::<Result<Vec<_>>>()?;
        Ok(CumulantSpec::new(a, self.degree, entries)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionJson {
    pub n: usize,
    pub blocks: Vec<Vec<i64>>,
}

impl From<&Partition> for PartitionJson {
    fn from(p: &Partition) -> Self {
        PartitionJson { n: p.n(), blocks: p.blocks().iter().map(|b| b.iter().map(|&x| x as i64).collect()).collect() }
    }
}

impl From<&BPartition> for PartitionJson {
    fn from(p: &BPartition) -> Self {
        PartitionJson { n: p.n(), blocks: p.blocks() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub check: String,
    pub pass: bool,
    pub max_violation: f64,
    pub witness: Option<Vec<String>>,
    pub tolerance: f64,
}

impl From<&Report> for ReportJson {
    fn from(r: &Report) -> Self {
        ReportJson {
            check: r.check.clone(),
            pass: r.pass,
            max_violation: r.max_violation,
            witness: r.witness.clone(),
            tolerance: r.tolerance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub word: Vec<String>,
    pub coeff: C,
}

pub fn poly_from_json(a: &Arc<Alphabet>, terms: &[TermJson]) -> Result<Poly> {
    let terms = terms
        .iter()
        .map(|t| Ok((letters_from_names(a, &t.word)?, Complex64::from(t.coeff))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::from_terms(a, terms))
}

/// A derivation given by the images of the generators; missing generators
/// map to zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivationJson {
    pub images: std::collections::BTreeMap<String, Vec<TermJson>>,
}

impl DerivationJson {
    pub fn to_derivation(&self, a: &Arc<Alphabet>) -> Result<Derivation> {
        for name in self.images.keys() {
            a.index_of(name)?;
        }
        let images = a
            .generators()
            .iter()
            .map(|g| match self.images.get(&g.name) {
                Some(t) => poly_from_json(a, t),
                None => Ok(Poly::zero(a)),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Derivation::new(a, images)?)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| incps::Error::Parse(format!("{}: {e}", path.display())).into())
}

pub fn read_state(path: &Path) -> Result<State> {
    read_json::<StateJson>(path)?.to_state()
}

pub fn read_spec(path: &Path) -> Result<CumulantSpec> {
    read_json::<SpecJson>(path)?.to_spec()
}

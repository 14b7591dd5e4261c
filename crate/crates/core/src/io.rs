//! JSON forms of systems, functions, dilation elements and kernels.
//!
//! Rationals are strings in lowest terms (`"2/3"`, `"1"`); words are the
//! per-factor symbol strings joined by `|`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::cocycle::{Cocycle, CocycleMode};
use crate::cylinder::{CylinderFunction, ShiftSystem};
use crate::dilation::DilationElement;
use crate::error::{Error, Result};
use crate::kernels::FiniteKernel;
use crate::lattice::LatticeElement;
use crate::scalar::{format_rational, parse_rational};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorDescription {
    pub alphabet: usize,
}

/// A cylinder function: its depth and one entry per word of that depth.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionDescription {
    pub depth: Vec<usize>,
    pub table: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDescription {
    pub factors: Vec<FactorDescription>,
    #[serde(default)]
    pub mode: CocycleMode,
    pub generators: Vec<FunctionDescription>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementDescription {
    pub level: Vec<i64>,
    #[serde(rename = "fn")]
    pub func: FunctionDescription,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelDescription {
    #[serde(rename = "Z")]
    pub z: Vec<String>,
    #[serde(rename = "X")]
    pub x: Vec<String>,
    pub pi: BTreeMap<String, String>,
    pub rows: BTreeMap<String, Vec<String>>,
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

impl FunctionDescription {
    pub fn from_function(f: &CylinderFunction<Rational>) -> Self {
        FunctionDescription {
            depth: f.depth().to_vec(),
            table: f
                .entries()
                .map(|(w, v)| (w.to_string(), format_rational(v)))
                .collect(),
        }
    }

    /// Every word of the stated depth must appear exactly once.
    pub fn to_function(&self, system: &ShiftSystem) -> Result<CylinderFunction<Rational>> {
        if self.depth.len() != system.rank() {
            return Err(Error::RankMismatch {
                expected: system.rank(),
                found: self.depth.len(),
            });
        }
        let len = system.table_len(&self.depth)?;
        if self.table.len() != len {
            return Err(Error::TableShape {
                depth: self.depth.clone(),
                len: self.table.len(),
                expected: len,
            });
        }
        let mut values: HashMap<usize, Rational> = HashMap::with_capacity(len);
        for (key, value) in &self.table {
            let word = system.parse_word(key)?;
            if word.lengths() != self.depth {
                return Err(Error::Parse(format!(
                    "table key {key:?} does not have depth {:?}",
                    self.depth
                )));
            }
            let v = parse_rational(value)?;
            if values
                .insert(system.index_of(&self.depth, &word), v)
                .is_some()
            {
                return Err(Error::Parse(format!("duplicate table key {key:?}")));
            }
        }
        let table = (0..len)
            .map(|i| values.remove(&i).expect("all keys seen"))
            .collect();
        CylinderFunction::new(system.clone(), self.depth.clone(), table)
    }
}

impl SystemDescription {
    pub fn parse(text: &str) -> Result<Self> {
        from_json(text)
    }

    pub fn from_cocycle(cocycle: &Cocycle<Rational>) -> Self {
        SystemDescription {
            factors: cocycle
                .system()
                .alphabets()
                .iter()
                .map(|&alphabet| FactorDescription { alphabet })
                .collect(),
            mode: cocycle.mode(),
            generators: cocycle
                .generators()
                .iter()
                .map(FunctionDescription::from_function)
                .collect(),
        }
    }

    pub fn system(&self) -> Result<ShiftSystem> {
        ShiftSystem::new(self.factors.iter().map(|f| f.alphabet).collect())
    }

    pub fn to_cocycle(&self) -> Result<Cocycle<Rational>> {
        let system = self.system()?;
        let generators = self
            .generators
            .iter()
            .map(|g| g.to_function(&system))
            .collect::<Result<Vec<_>>>()?;
        Cocycle::new(system, generators, self.mode)
    }
}

impl ElementDescription {
    pub fn from_element(e: &DilationElement<Rational>) -> Self {
        ElementDescription {
            level: e.level().coords().to_vec(),
            func: FunctionDescription::from_function(e.func()),
        }
    }

    pub fn to_element(&self, system: &ShiftSystem) -> Result<DilationElement<Rational>> {
        DilationElement::new(
            LatticeElement::new(self.level.clone()),
            self.func.to_function(system)?,
        )
    }
}

impl KernelDescription {
    pub fn parse(text: &str) -> Result<Self> {
        from_json(text)
    }

    pub fn from_kernel(k: &FiniteKernel<Rational>) -> Self {
        let (z, x) = (k.z_labels(), k.x_labels());
        KernelDescription {
            z: z.to_vec(),
            x: x.to_vec(),
            pi: z
                .iter()
                .zip(k.pi())
                .map(|(zl, &i)| (zl.clone(), x[i].clone()))
                .collect(),
            rows: x
                .iter()
                .zip(k.rows())
                .map(|(xl, row)| (xl.clone(), row.iter().map(format_rational).collect()))
                .collect(),
        }
    }

    pub fn to_kernel(&self) -> Result<FiniteKernel<Rational>> {
        let x_index: HashMap<&str, usize> = self
            .x
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let mut pi = Vec::with_capacity(self.z.len());
        for z in &self.z {
            let target = self
                .pi
                .get(z)
                .ok_or_else(|| Error::InvalidKernel(format!("pi has no image for {z}")))?;
            let i = x_index
                .get(target.as_str())
                .ok_or_else(|| Error::InvalidKernel(format!("pi({z}) = {target} is not in X")))?;
            pi.push(*i);
        }
        if self.pi.len() != self.z.len() {
            return Err(Error::InvalidKernel("pi has labels outside Z".into()));
        }
        let mut rows = Vec::with_capacity(self.x.len());
        for x in &self.x {
            let row = self
                .rows
                .get(x)
                .ok_or_else(|| Error::InvalidKernel(format!("no row for {x}")))?;
            rows.push(
                row.iter()
                    .map(|v| parse_rational(v))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        if self.rows.len() != self.x.len() {
            return Err(Error::InvalidKernel("rows has labels outside X".into()));
        }
        FiniteKernel::new(self.z.clone(), self.x.clone(), pi, rows)
    }
}

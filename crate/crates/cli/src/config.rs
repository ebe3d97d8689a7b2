//! Group, generating-set and kernel configuration.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use curv_core::group::{DihedralExtension, FiniteGroup, IntMatrix};
use curv_core::{CurvError, Family, GeneratingSet, GroupSpec, KernelSpec, Result};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteConfig {
    pub table: Vec<Vec<u32>>,
    #[serde(default)]
    pub names: Option<Vec<String>>,
}

impl FiniteConfig {
    fn build(self) -> Result<FiniteGroup> {
        FiniteGroup::from_table(self.table, self.names)
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyConfig {
    Free { rank: usize },
    FreeAbelian { rank: usize },
    #[serde(alias = "heis3")]
    Heisenberg3,
    #[serde(alias = "infinite_dihedral")]
    Dinf,
    Finite(FiniteConfig),
    Product { left: Box<FamilyConfig>, right: Box<FamilyConfig> },
    FiniteByDihedral {
        finite: FiniteConfig,
        action_a: Vec<u32>,
        action_b: Vec<u32>,
        a_square: u32,
        b_square: u32,
    },
    Matrix { generators: Vec<Vec<Vec<i64>>> },
    /// Any command-line shorthand, e.g. `{"family": "shorthand", "name": "s3xz"}`.
    Shorthand { name: String },
}

impl FamilyConfig {
    fn build(self) -> Result<Family> {
        Ok(match self {
            FamilyConfig::Free { rank } => Family::free(rank)?,
            FamilyConfig::FreeAbelian { rank } => Family::free_abelian(rank)?,
            FamilyConfig::Heisenberg3 => Family::Heisenberg3,
            FamilyConfig::Dinf => Family::InfiniteDihedral,
            FamilyConfig::Finite(f) => Family::Finite(Arc::new(f.build()?)),
            FamilyConfig::Product { left, right } => Family::product(left.build()?, right.build()?),
            FamilyConfig::FiniteByDihedral { finite, action_a, action_b, a_square, b_square } => {
                let ext =
                    DihedralExtension::new(Arc::new(finite.build()?), action_a, action_b, a_square, b_square)?;
                Family::FiniteByDihedral(Arc::new(ext))
            }
            FamilyConfig::Matrix { generators } => Family::integer_matrix(
                generators.iter().map(|m| IntMatrix::from_rows(m)).collect::<Result<_>>()?,
            )?,
            FamilyConfig::Shorthand { name } => shorthand(&name)?,
        })
    }
}

#[derive(Debug, Deserialize)]
pub struct GroupConfig {
    #[serde(flatten)]
    pub family: FamilyConfig,
    /// Element literals; the family's standard generators when absent.
    #[serde(default)]
    pub generators: Option<Vec<String>>,
}

fn parse_err(path: &Path, e: impl std::fmt::Display) -> CurvError {
    CurvError::Config(format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| parse_err(path, e))
}

fn is_toml(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("toml"))
}

fn load_file<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = read(path)?;
    if is_toml(path) {
        toml::from_str(&text).map_err(|e| parse_err(path, e))
    } else {
        serde_json::from_str(&text).map_err(|e| parse_err(path, e))
    }
}

/// `free:2`, `zn:3`, `heis3`, `dinf`, `z2xdinf`, `s3`, `s3xz`, `sl2z`.
pub fn shorthand(name: &str) -> Result<Family> {
    let rank = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| CurvError::Config(format!("bad rank in group shorthand {name:?}")))
    };
    let s3 = || Family::Finite(Arc::new(FiniteGroup::symmetric3()));
    match name.split_once(':') {
        Some(("free", k)) => Family::free(rank(k)?),
        Some(("zn" | "z", k)) => Family::free_abelian(rank(k)?),
        Some(_) => Err(CurvError::Config(format!("unknown group shorthand {name:?}"))),
        None => match name {
            "heis3" | "heisenberg" => Ok(Family::Heisenberg3),
            "dinf" => Ok(Family::InfiniteDihedral),
            "z2xdinf" => Ok(Family::FiniteByDihedral(Arc::new(DihedralExtension::z2_times_dinf()))),
            "s3" => Ok(s3()),
            "s3xz" => Ok(Family::product(s3(), Family::free_abelian(1)?)),
            "sl2z" => Family::integer_matrix(vec![
                IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]])?,
                IntMatrix::from_rows(&[vec![1, 0], vec![1, 1]])?,
            ]),
            _ => Err(CurvError::Config(format!("unknown group shorthand {name:?}"))),
        },
    }
}

fn with_literals(family: Family, literals: Option<&[String]>) -> Result<GroupSpec> {
    match literals {
        None => GroupSpec::standard(family),
        Some(lits) => {
            let gens = lits.iter().map(|l| family.parse(l)).collect::<Result<Vec<_>>>()?;
            GroupSpec::new(family, gens)
        }
    }
}

/// A shorthand, or a path to a JSON/TOML group file.
pub fn load_group(arg: &str) -> Result<GroupSpec> {
    let path = Path::new(arg);
    if path.is_file() {
        let cfg: GroupConfig = load_file(path)?;
        let generators = cfg.generators;
        return with_literals(cfg.family.build()?, generators.as_deref());
    }
    with_literals(shorthand(arg)?, None)
}

/// Replaces the generating set with the JSON list of literals in `path`.
pub fn load_genset(spec: &GroupSpec, path: &Path) -> Result<GroupSpec> {
    let lits: Vec<String> = load_file(path)?;
    let family = spec.family();
    let gens = lits.iter().map(|l| family.parse(l)).collect::<Result<Vec<_>>>()?;
    Ok(spec.with_generators(GeneratingSet::new(family, gens)?))
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Image {
    Index(u32),
    Name(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct KernelConfig {
    quotient: FiniteConfig,
    /// generator literal → quotient element (index or name)
    images: BTreeMap<String, Image>,
}

pub fn load_kernel(spec: &GroupSpec, path: &Path) -> Result<KernelSpec> {
    let cfg: KernelConfig = load_file(path)?;
    let quotient = cfg.quotient.build()?;
    let pairs = cfg
        .images
        .into_iter()
        .map(|(lit, img)| {
            let q = match img {
                Image::Index(i) => i,
                Image::Name(n) => quotient
                    .lookup(&n)
                    .ok_or_else(|| CurvError::Config(format!("{n:?} is not an element of the quotient")))?,
            };
            Ok((spec.parse(&lit)?, q))
        })
        .collect::<Result<Vec<_>>>()?;
    KernelSpec::from_pairs(spec, quotient, pairs)
}

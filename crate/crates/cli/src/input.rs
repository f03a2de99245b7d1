//! Resolving `--pair`, `--blocks`, `--grammar` and `--pda` selectors into
//! loaded artifacts. Selectors take a corpus name or a file path.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;

use isl_core::blocks::{component_pdas, JointSpec};
use isl_core::corpus::{self, ExampleBundle};
use isl_core::grammar::Cfg;
use isl_core::machine::SearchLimits;
use isl_core::pda::{self, Pda};

#[derive(Args, Debug, Clone, Default)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Corpus example with a machine pair (pair and block examples).
    #[arg(long, value_name = "NAME")]
    pub pair: Option<String>,
    /// Block-counting spec: corpus name or blocks-v1 file.
    #[arg(long, value_name = "NAME|FILE")]
    pub blocks: Option<String>,
    /// Grammar: corpus name, cfg-v1 file, or a text file of `A -> ...` rules.
    #[arg(long, value_name = "NAME|FILE")]
    pub grammar: Option<String>,
    /// pda-v1 file; give it twice for a machine pair.
    #[arg(long, value_name = "FILE", num_args = 1)]
    pub pda: Vec<PathBuf>,
}

pub enum Input {
    Pair {
        name: String,
        m1: Pda,
        m2: Pda,
        bundle: Option<Box<ExampleBundle>>,
    },
    Blocks {
        name: String,
        spec: JointSpec,
        m1: Pda,
        m2: Pda,
    },
    Grammar {
        name: String,
        cfg: Cfg,
    },
    Single(Pda),
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn file_stem(path: &str) -> String {
    Path::new(path)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.to_string())
}

fn load_pda(path: &Path) -> Result<Pda> {
    let pda = Pda::from_json(&read(path)?).with_context(|| format!("loading {}", path.display()))?;
    if pda.name().is_empty() {
        return Ok(pda.with_name(file_stem(&path.to_string_lossy())));
    }
    Ok(pda)
}

impl Source {
    pub fn resolve(&self) -> Result<Input> {
        if let Some(name) = &self.pair {
            let bundle = corpus::get(name)?;
            let (m1, m2) = bundle
                .machines()
                .map(|(a, b)| (a.clone(), b.clone()))
                .with_context(|| format!("{name} has no machine pair"))?;
            return Ok(Input::Pair {
                name: name.clone(),
                m1,
                m2,
                bundle: Some(Box::new(bundle)),
            });
        }
        if let Some(sel) = &self.blocks {
            let (name, spec) = if corpus::list().contains(&sel.as_str()) {
                let bundle = corpus::get(sel)?;
                let spec = bundle
                    .spec()
                    .cloned()
                    .with_context(|| format!("{sel} is not a block example"))?;
                (sel.clone(), spec)
            } else {
                let spec = JointSpec::from_json(&read(Path::new(sel))?).with_context(|| format!("loading {sel}"))?;
                (file_stem(sel), spec)
            };
            let (m1, m2) = component_pdas(&spec, &name)?;
            return Ok(Input::Blocks { name, spec, m1, m2 });
        }
        if let Some(sel) = &self.grammar {
            if corpus::list().contains(&sel.as_str()) {
                let bundle = corpus::get(sel)?;
                let cfg = bundle
                    .grammar()
                    .cloned()
                    .with_context(|| format!("{sel} is not a grammar example"))?;
                return Ok(Input::Grammar { name: sel.clone(), cfg });
            }
            let text = read(Path::new(sel))?;
            let cfg = if text.trim_start().starts_with('{') {
                Cfg::from_json(&text)
            } else {
                Cfg::parse(&text)
            }
            .with_context(|| format!("loading {sel}"))?;
            return Ok(Input::Grammar {
                name: file_stem(sel),
                cfg,
            });
        }
        match self.pda.as_slice() {
            [one] => Ok(Input::Single(load_pda(one)?)),
            [a, b] => {
                let (m1, m2) = (load_pda(a)?, load_pda(b)?);
                Ok(Input::Pair {
                    name: format!("{}+{}", m1.name(), m2.name()),
                    m1,
                    m2,
                    bundle: None,
                })
            }
            [] => bail!("no input selected"),
            _ => bail!("--pda takes one or two files"),
        }
    }
}

impl Input {
    pub fn name(&self) -> String {
        match self {
            Input::Pair { name, .. } | Input::Blocks { name, .. } | Input::Grammar { name, .. } => name.clone(),
            Input::Single(m) => m.name().to_string(),
        }
    }

    pub fn machine_pair(&self) -> Result<(&Pda, &Pda)> {
        match self {
            Input::Pair { m1, m2, .. } | Input::Blocks { m1, m2, .. } => Ok((m1, m2)),
            _ => bail!("this command needs a machine pair (--pair, --blocks, or --pda twice)"),
        }
    }

    /// The family word of size `n`: the corpus family for pair examples,
    /// `n` copies of each block's first symbol for block specs.
    pub fn family_word(&self, n: usize) -> Result<String> {
        match self {
            Input::Pair { bundle: Some(b), .. } => b.family_word(n).context("example has no word family"),
            Input::Blocks { spec, .. } => Ok(spec.alphabets().iter().map(|a| a[0].to_string().repeat(n)).collect()),
            _ => bail!("no word family for this input; pass --word"),
        }
    }

    pub fn default_sizes(&self) -> Vec<usize> {
        match self {
            Input::Pair { bundle: Some(b), .. } => b.sizes.clone(),
            _ => (1..=5).collect(),
        }
    }

    /// Membership in the intersection, decided without the machines where
    /// an independent definition exists.
    pub fn oracle_language(&self, max_len: usize, limits: SearchLimits) -> Result<BTreeSet<String>> {
        Ok(match self {
            Input::Pair { bundle: Some(b), .. } => b.oracle_language(max_len),
            Input::Pair { m1, m2, .. } => {
                let a = pda::enumerate_language(m1, max_len, limits)?;
                let b = pda::enumerate_language(m2, max_len, limits)?;
                a.intersection(&b).cloned().collect()
            }
            Input::Blocks { spec, .. } => corpus::block_language(spec, max_len),
            Input::Grammar { .. } | Input::Single(_) => bail!("no intersection oracle for this input"),
        })
    }
}

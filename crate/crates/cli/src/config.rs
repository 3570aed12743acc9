use std::fmt;
use std::str::FromStr;

use clap::ValueEnum;
use ilproof::interpolation::InterpolationLimits;
use ilproof::interpolation::FixpointLimits;
use ilproof::search::{Logic, SearchLimits};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LogicArg {
    Il,
    Ilp,
}

impl From<LogicArg> for Logic {
    fn from(l: LogicArg) -> Logic {
        match l {
            LogicArg::Il => Logic::Il,
            LogicArg::Ilp => Logic::Ilp,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

/// Resource limits, written on the command line as `key=value` pairs
/// separated by commas, e.g. `max_nodes=50000,witness_cap=3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_nodes: usize,
    pub max_orderings: Option<usize>,
    pub max_depth: Option<usize>,
    /// `None` means size(φ)+1.
    pub fixpoint_cap: Option<usize>,
    pub witness_cap: usize,
    pub template_cap: usize,
    pub simplify_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        let search = SearchLimits::default();
        let interp = InterpolationLimits::default();
        Limits {
            max_nodes: search.max_nodes,
            max_orderings: search.max_orderings,
            max_depth: search.max_depth,
            fixpoint_cap: interp.fixpoint_cap,
            witness_cap: 5,
            template_cap: interp.template_cap,
            simplify_cap: interp.simplify_cap,
        }
    }
}

impl Limits {
    pub fn search(&self) -> SearchLimits {
        SearchLimits {
            max_nodes: self.max_nodes,
            max_orderings: self.max_orderings,
            max_depth: self.max_depth,
        }
    }

    pub fn fixpoint(&self) -> FixpointLimits {
        FixpointLimits {
            cap: self.fixpoint_cap,
            search: self.search(),
        }
    }

    pub fn interpolation(&self) -> InterpolationLimits {
        InterpolationLimits {
            search: self.search(),
            fixpoint_cap: self.fixpoint_cap,
            template_cap: self.template_cap,
            simplify_cap: self.simplify_cap,
        }
    }
}

impl FromStr for Limits {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, String> {
        let mut l = Limits::default();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got `{part}`"))?;
            let n: usize = value
                .trim()
                .parse()
                .map_err(|_| format!("`{value}` is not a nonnegative integer"))?;
            match key.trim() {
                "max_nodes" => l.max_nodes = n,
                "max_orderings" => l.max_orderings = Some(n),
                "max_depth" => l.max_depth = Some(n),
                "fixpoint_cap" => l.fixpoint_cap = Some(n),
                "witness_cap" => l.witness_cap = n,
                "template_cap" => l.template_cap = n,
                "simplify_cap" => l.simplify_cap = n,
                other => return Err(format!("unknown limit `{other}`")),
            }
        }
        Ok(l)
    }
}

impl fmt::Display for Limits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |o: Option<usize>| o.map_or("none".to_string(), |n| n.to_string());
        write!(
            f,
            "max_nodes={},max_orderings={},max_depth={},fixpoint_cap={},witness_cap={},template_cap={},simplify_cap={}",
            self.max_nodes,
            opt(self.max_orderings),
            opt(self.max_depth),
            opt(self.fixpoint_cap),
            self.witness_cap,
            self.template_cap,
            self.simplify_cap
        )
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Config {
    pub logic: Logic,
    pub limits: Limits,
    pub format: Format,
    pub sugar: bool,
}

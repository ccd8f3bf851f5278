//! Command dispatch and reports. A report is plain data; its text view is
//! rendered from the JSON form so the two can never disagree.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bbw::{cohomology, CohomologyTable};
use crate::bundle::ZeroLocusSpec;
use crate::hodge::{classify_partial, hodge_numbers, vanishing_middle, HodgeDiamond, HodgeOptions, Structure};
use crate::numerology::{self, CandidateTriple, Family, ProductCandidate};
use crate::{chow, dsl, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Hodge,
    Chi,
    Euler,
    Bbw,
    Enumerate,
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "hodge" => Command::Hodge,
            "chi" => Command::Chi,
            "euler" => Command::Euler,
            "bbw" => Command::Bbw,
            "enumerate" => Command::Enumerate,
            _ => return Err(Error::Invalid(format!("unknown command '{s}'"))),
        })
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub raw_intervals: bool,
    /// Bundle for `chi`, in the cut syntax; the structure sheaf by default.
    pub twist: Option<String>,
    /// `chi` of `Ω^p` instead of a twist.
    pub omega: Option<usize>,
    /// Family tag for `enumerate`: a family name, `products` or `all`.
    pub family: Option<String>,
    pub max_k: i64,
    pub max_l: i64,
    pub max_factors: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            raw_intervals: false,
            twist: None,
            omega: None,
            family: None,
            max_k: 12,
            max_l: 12,
            max_factors: 6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Outcome {
    Hodge {
        #[serde(flatten)]
        diamond: HodgeDiamond,
        structures: Vec<Structure>,
        /// `χ(Ω^p)` for every `p`
        #[serde(with = "crate::json_int::vec_i64")]
        chi: Vec<i64>,
        #[serde(with = "crate::json_int::i64")]
        euler_top: i64,
        /// `Σ (-1)^{p+q} h^{p,q}`, present when the diamond is exact
        #[serde(with = "crate::json_int::opt_i64", default)]
        euler_diamond: Option<i64>,
        /// middle diagonal entry minus the ambient's, when defined
        #[serde(with = "crate::json_int::opt_i64", default)]
        vanishing_middle: Option<i64>,
    },
    Chi {
        bundle: String,
        #[serde(with = "crate::json_int::i64")]
        value: i64,
    },
    Euler {
        #[serde(with = "crate::json_int::i64")]
        value: i64,
    },
    Bbw {
        bundle: String,
        cohomology: CohomologyTable,
        #[serde(with = "crate::json_int::i64")]
        euler: i64,
    },
    Enumerate {
        candidates: Vec<CandidateTriple>,
        surfaces: Vec<CandidateTriple>,
        products: Vec<ProductCandidate>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    /// Rules the engine was allowed to use.
    pub rules: Vec<String>,
    /// Assumptions actually used, and stages that were dropped.
    pub assumptions: Vec<String>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: Command,
    pub spec: Option<String>,
    pub result: Outcome,
    pub metadata: Metadata,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(s: &str) -> Result<Report> {
        serde_json::from_str(s).map_err(|e| Error::Invalid(format!("malformed report: {e}")))
    }

    /// Human-readable view, computed from the JSON form.
    pub fn to_text(&self) -> String {
        let r = Report::from_json(&self.to_json()).expect("reports round-trip");
        r.render()
    }

    fn render(&self) -> String {
        let mut out = String::new();
        if let Some(s) = &self.spec {
            let _ = writeln!(out, "{s}");
        }
        match &self.result {
            Outcome::Hodge { diamond, structures, chi, euler_top, euler_diamond, vanishing_middle } => {
                let _ = writeln!(out, "dimension {}", diamond.dim());
                out.push_str(&diamond.render());
                let chis: Vec<String> = chi.iter().map(i64::to_string).collect();
                let _ = writeln!(out, "chi(Omega^p), p = 0..{}: {}", diamond.dim(), chis.join(" "));
                let _ = writeln!(out, "topological Euler characteristic: {euler_top}");
                if let Some(e) = euler_diamond {
                    let _ = writeln!(out, "alternating sum of the diamond: {e}");
                }
                if let Some(v) = vanishing_middle {
                    let _ = writeln!(out, "middle vanishing part: {v}");
                }
                for s in structures {
                    match (s.level, s.cy_k) {
                        (Some(_), Some(k)) => {
                            let _ = writeln!(out, "weight {}: {k}-Calabi-Yau type", s.weight);
                        }
                        (None, _) => {
                            let _ = writeln!(out, "weight {}: undetermined", s.weight);
                        }
                        _ => {}
                    }
                }
                let open = diamond.undetermined();
                if !open.is_empty() {
                    let cells: Vec<String> = open.iter().map(|(p, q)| format!("h^{{{p},{q}}}")).collect();
                    let _ = writeln!(out, "undetermined: {}", cells.join(", "));
                }
            }
            Outcome::Chi { bundle, value } => {
                let _ = writeln!(out, "chi({bundle}) = {value}");
            }
            Outcome::Euler { value } => {
                let _ = writeln!(out, "e = {value}");
            }
            Outcome::Bbw { bundle, cohomology, euler } => {
                let _ = writeln!(out, "cohomology of {bundle}");
                if cohomology.entries.is_empty() {
                    let _ = writeln!(out, "  all groups vanish");
                }
                for (d, pieces) in &cohomology.entries {
                    let total: u64 = pieces.iter().map(|p| p.multiplicity * p.dim).sum();
                    let _ = writeln!(out, "  H^{d}: dimension {total}");
                    for p in pieces {
                        let w: Vec<String> = p.weights.iter().map(ToString::to_string).collect();
                        let _ = writeln!(out, "    {} x {} (dim {})", p.multiplicity, w.join(" ⊗ "), p.dim);
                    }
                }
                let _ = writeln!(out, "Euler characteristic: {euler}");
            }
            Outcome::Enumerate { candidates, surfaces, products } => {
                for c in candidates {
                    let _ = writeln!(out, "candidate {c}");
                }
                for c in surfaces {
                    let _ = writeln!(out, "surface {c}");
                }
                for c in products {
                    let _ = writeln!(out, "product {c}");
                }
                if candidates.is_empty() && surfaces.is_empty() && products.is_empty() {
                    let _ = writeln!(out, "no solutions in range");
                }
            }
        }
        for a in &self.metadata.assumptions {
            let _ = writeln!(out, "assumption: {a}");
        }
        for n in &self.metadata.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}

/// Parses and runs one command.
pub fn run(command: Command, spec_text: Option<&str>, opts: &RunOptions) -> Result<Report> {
    let spec = match (command, spec_text) {
        (Command::Enumerate, _) => None,
        (_, Some(t)) => Some(dsl::parse(t)?),
        (_, None) => return Err(Error::Invalid("a specification is required".into())),
    };
    run_spec(command, spec.as_ref(), opts)
}

/// Runs one command on an already parsed specification.
pub fn run_spec(command: Command, spec: Option<&ZeroLocusSpec>, opts: &RunOptions) -> Result<Report> {
    let mut meta = Metadata::default();
    let need = || spec.ok_or_else(|| Error::Invalid("a specification is required".into()));
    let result = match command {
        Command::Hodge => {
            let spec = need()?;
            meta.rules = vec!["exact Euler characteristics".into()];
            if opts.raw_intervals {
                meta.notes.push("raw intervals: each row from its own spectral sequences only".into());
            } else {
                meta.rules.push("maximal rank of isolated d1 differentials for a generic section".into());
                meta.rules.push("Hodge symmetry and Serre duality".into());
                meta.rules.push("Hard Lefschetz inequalities".into());
                if spec.ample_divisor_base().is_some() {
                    meta.rules.push("Lefschetz hyperplane theorem".into());
                }
            }
            meta.notes.push("computed for a general section".into());
            let res = hodge_numbers(spec, &HodgeOptions { raw_intervals: opts.raw_intervals, ..Default::default() })?;
            meta.assumptions = res.log.clone();
            let d = res.diamond;
            let euler_top = chow::euler_top(spec)?;
            if let Some(e) = d.euler() {
                if e != euler_top {
                    return Err(Error::Consistency(format!("diamond gives e = {e}, Gauss-Bonnet gives {euler_top}")));
                }
            }
            let vanishing = if d.dim() % 2 == 0 { vanishing_middle(&d, &spec.ambient).ok() } else { None };
            Outcome::Hodge {
                structures: classify_partial(&d),
                chi: res.chi,
                euler_top,
                euler_diamond: d.euler(),
                vanishing_middle: vanishing,
                diamond: d,
            }
        }
        Command::Chi => {
            let spec = need()?;
            match opts.omega {
                Some(p) => Outcome::Chi { bundle: format!("Omega^{p}"), value: chow::hrr_chi_omega(spec, p)? },
                None => {
                    let twist = match &opts.twist {
                        Some(t) => dsl::parse_expr(t, &spec.ambient)?,
                        None => crate::BundleExpr::trivial(spec.ambient.len()),
                    };
                    Outcome::Chi { bundle: twist.to_string(), value: chow::hrr_chi(spec, &twist)? }
                }
            }
        }
        Command::Euler => Outcome::Euler { value: chow::euler_top(need()?)? },
        Command::Bbw => {
            let spec = need()?;
            meta.notes.push("the bundle is the part after ':', on the whole ambient".into());
            let table = cohomology(&spec.cut, &spec.ambient)?;
            let euler = table.euler_char();
            Outcome::Bbw { bundle: spec.cut.to_string(), cohomology: table, euler }
        }
        Command::Enumerate => {
            if opts.max_k < 1 || opts.max_l < 1 {
                return Err(Error::Invalid("bounds must be at least 1".into()));
            }
            let tag = opts.family.as_deref().unwrap_or("all");
            let fams: Vec<Family> = match tag.to_ascii_lowercase().as_str() {
                "all" => Family::ALL.to_vec(),
                "products" => Vec::new(),
                _ => vec![tag.parse()?],
            };
            let mut candidates = Vec::new();
            let mut surfaces = Vec::new();
            for f in fams {
                candidates.extend(numerology::enumerate(f, opts.max_k, opts.max_l));
                surfaces.extend(numerology::surfaces(f, opts.max_k, opts.max_l));
            }
            let products = if matches!(tag.to_ascii_lowercase().as_str(), "all" | "products") {
                numerology::enumerate_products(opts.max_factors, opts.max_k, opts.max_l)
            } else {
                Vec::new()
            };
            meta.notes.push("candidates satisfy the numerical criterion only".into());
            Outcome::Enumerate { candidates, surfaces, products }
        }
    };
    Ok(Report { command, spec: spec.map(|s| s.to_string()), result, metadata: meta })
}

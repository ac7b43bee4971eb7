use std::fmt;
use std::str::FromStr;

use hodgelab::{Backend, Rational};
use rayon::prelude::*;

use crate::checks::{self, Outcome};
use crate::error::CliError;
use crate::report::{Case, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CampaignName {
    Lemma21,
    Prop22,
    Prop23,
    Lemma31,
    AlphaOmega,
    Prop41,
    Prop42,
    Lemma43,
    Lemma44,
    Lemma48,
    Prop411,
    Cor412,
    Eq7,
    Lemma55,
}

use CampaignName::*;

/// How a campaign uses its dimension list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dims {
    /// Even dimensions in the range.
    Even(usize, usize),
    Any(usize, usize),
    Only(usize),
    /// The campaign lives on a fixed 3-dimensional space.
    Three,
}

impl CampaignName {
    pub const ALL: [CampaignName; 14] = [
        Lemma21, Prop22, Prop23, Lemma31, AlphaOmega, Prop41, Prop42, Lemma43, Lemma44, Lemma48, Prop411,
        Cor412, Eq7, Lemma55,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Lemma21 => "lemma-2.1",
            Prop22 => "prop-2.2",
            Prop23 => "prop-2.3",
            Lemma31 => "lemma-3.1",
            AlphaOmega => "alpha-omega",
            Prop41 => "prop-4.1",
            Prop42 => "prop-4.2",
            Lemma43 => "lemma-4.3",
            Lemma44 => "lemma-4.4",
            Lemma48 => "lemma-4.8",
            Prop411 => "prop-4.11",
            Cor412 => "cor-4.12",
            Eq7 => "eq-7",
            Lemma55 => "lemma-5.5",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Lemma21 => "bidegree type of the antisymmetrisation on each tensor type",
            Prop22 => "injectivity of the antisymmetrisation off the diagonal, and the contraction identity",
            Prop23 => "L* recursion for P_k and the evaluation on primitive forms",
            Lemma31 => "type of the holomorphic Q tensor and the S-tensor J law",
            AlphaOmega => "P_{p-1}(Ω, JΩ) against α_Ω",
            Prop41 => "explicit expansion of the adjoint wedge on 2-forms",
            Prop42 => "spectral decomposition of skew endomorphisms and moment recovery",
            Lemma43 => "spectrum of the splitting operator Q",
            Lemma44 => "completing a rank-4 compatible 2-form in dimension 6",
            Lemma48 => "complex frame star identities and transition invariants",
            Prop411 => "complex obstruction system and the symmetric/skew splitting",
            Cor412 => "forced vanishing of real solutions to the obstruction system",
            Eq7 => "polarisation of F²•η = 0 and the bracket consequence",
            Lemma55 => "kernel of the constrained-torsion system",
        }
    }

    fn dims(self) -> Dims {
        match self {
            Lemma21 | Prop22 | Prop23 | Lemma31 | AlphaOmega => Dims::Even(2, 8),
            Eq7 | Lemma55 => Dims::Even(4, 8),
            Prop41 => Dims::Any(2, 8),
            Prop42 => Dims::Any(1, 8),
            Lemma43 => Dims::Any(1, 8),
            Lemma44 => Dims::Only(6),
            Lemma48 | Prop411 | Cor412 => Dims::Three,
        }
    }

    pub fn default_dims(self) -> Vec<usize> {
        match self.dims() {
            Dims::Even(..) => vec![4, 6, 8],
            Dims::Any(..) => vec![4, 6, 8],
            Dims::Only(n) => vec![n],
            Dims::Three => vec![3],
        }
    }

    pub fn default_backend(self) -> Backend {
        if self.float_only() {
            Backend::Float
        } else {
            Backend::Exact
        }
    }

    fn float_only(self) -> bool {
        matches!(self, Prop42 | Lemma44 | Lemma48 | Prop411 | Cor412)
    }

    /// Campaigns whose cases do not depend on the seed list.
    fn seedless(self) -> bool {
        matches!(self, Lemma43 | Eq7 | Lemma55)
    }
}

impl fmt::Display for CampaignName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CampaignName {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        CampaignName::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| {
                let known: Vec<_> = CampaignName::ALL.iter().map(|c| c.as_str()).collect();
                CliError::Usage(format!("unknown campaign '{s}' (known: {})", known.join(", ")))
            })
    }
}

/// `a..b` and `a..=b` are inclusive ranges; otherwise a comma-separated list.
pub fn parse_seeds(s: &str) -> Result<Vec<u64>, CliError> {
    let bad = || CliError::Usage(format!("bad seed list '{s}'"));
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
    if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    let seeds = s.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
    if seeds.is_empty() {
        return Err(bad());
    }
    Ok(seeds)
}

pub fn parse_backend(s: &str) -> Result<Backend, CliError> {
    match s {
        "exact" => Ok(Backend::Exact),
        "float" => Ok(Backend::Float),
        _ => Err(CliError::Usage(format!("unknown backend '{s}' (expected exact or float)"))),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Campaign {
    pub name: CampaignName,
    pub dims: Vec<usize>,
    pub seeds: Vec<u64>,
    pub backend: Backend,
}

/// One independent case of a campaign.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Unit {
    dim: usize,
    seed: Option<u64>,
    tag: Option<String>,
    p: usize,
    q: usize,
}

impl Campaign {
    /// Validates the parameters against the campaign's registry entry.
    pub fn new(
        name: CampaignName,
        dims: Option<Vec<usize>>,
        seeds: Vec<u64>,
        backend: Option<Backend>,
    ) -> Result<Self, CliError> {
        let backend = backend.unwrap_or(name.default_backend());
        if name.float_only() && backend == Backend::Exact {
            return Err(CliError::Usage(format!("{name} runs on the float backend only")));
        }
        let mut dims = dims.unwrap_or_else(|| name.default_dims());
        dims.sort_unstable();
        dims.dedup();
        if dims.is_empty() {
            return Err(CliError::Usage("empty dimension list".into()));
        }
        for &n in &dims {
            let ok = match name.dims() {
                Dims::Even(lo, hi) => n % 2 == 0 && (lo..=hi).contains(&n),
                Dims::Any(lo, hi) => (lo..=hi).contains(&n),
                Dims::Only(m) => n == m,
                Dims::Three => n == 3,
            };
            if !ok {
                return Err(CliError::Usage(format!("{name} does not support dimension {n}")));
            }
        }
        let mut seeds = seeds;
        seeds.sort_unstable();
        seeds.dedup();
        if seeds.is_empty() && !name.seedless() {
            return Err(CliError::Usage("empty seed list".into()));
        }
        Ok(Campaign {
            name,
            dims,
            seeds,
            backend,
        })
    }

    fn units(&self) -> Vec<Unit> {
        let unit = |dim, seed, tag: Option<String>| Unit {
            dim,
            seed,
            tag,
            p: 0,
            q: 0,
        };
        let mut out = Vec::new();
        for &n in &self.dims {
            match self.name {
                Lemma43 => out.extend((1..=n).map(|r| Unit { p: r, ..unit(n, None, Some(format!("rank{r}"))) })),
                Eq7 | Lemma55 => out.push(unit(n, None, None)),
                Prop22 => {
                    let top = 3.min(n / 2);
                    for p in 1..=top {
                        for q in (1..=top).filter(|&q| q != p) {
                            out.push(Unit { p, q, ..unit(n, None, Some(format!("rank-p{p}-q{q}"))) });
                        }
                    }
                    out.extend(self.seeds.iter().map(|&s| unit(n, Some(s), Some("contraction".into()))));
                }
                Lemma44 => {
                    for &s in &self.seeds {
                        out.push(unit(n, Some(s), Some("literal".into())));
                        out.push(unit(n, Some(s), Some("normalized".into())));
                    }
                }
                _ => out.extend(self.seeds.iter().map(|&s| unit(n, Some(s), None))),
            }
        }
        out
    }

    fn run_unit(&self, u: &Unit) -> hodgelab::Result<Outcome> {
        let exact = self.backend == Backend::Exact;
        let n = u.dim;
        let seed = u.seed.unwrap_or(0);
        macro_rules! generic {
            ($f:ident ( $($arg:expr),* )) => {
                if exact { checks::$f::<Rational>($($arg),*) } else { checks::$f::<f64>($($arg),*) }
            };
        }
        match self.name {
            Lemma21 => generic!(lemma_2_1(n, seed)),
            Prop22 if u.seed.is_none() => generic!(prop_2_2_rank(n, u.p, u.q)),
            Prop22 => generic!(prop_2_2_contraction(n, seed)),
            Prop23 => generic!(prop_2_3(n, seed)),
            Lemma31 => generic!(lemma_3_1(n, seed)),
            AlphaOmega => generic!(alpha_omega(n, seed)),
            Prop41 => generic!(prop_4_1(n, seed)),
            Prop42 => checks::prop_4_2(n, seed),
            Lemma43 => generic!(lemma_4_3(n, u.p)),
            Lemma44 if u.tag.as_deref() == Some("literal") => checks::lemma_4_4_literal(seed),
            Lemma44 => checks::lemma_4_4_normalized(seed),
            Lemma48 => checks::lemma_4_8(seed),
            Prop411 => checks::prop_4_11(seed),
            Cor412 => checks::cor_4_12(seed),
            Eq7 => generic!(eq_7(n)),
            Lemma55 => generic!(lemma_5_5(n)),
        }
    }

    fn case_id(&self, u: &Unit) -> String {
        let mut id = format!("{}/n{}", self.name, u.dim);
        if let Some(s) = u.seed {
            id.push_str(&format!("/s{s}"));
        }
        if let Some(t) = &u.tag {
            id.push('/');
            id.push_str(t);
        }
        id
    }

    /// Runs every case, in parallel, and reports them in (dim, seed) order.
    pub fn run(&self) -> Report {
        let cases: Vec<Case> = self
            .units()
            .par_iter()
            .map(|u| {
                let id = self.case_id(u);
                match self.run_unit(u) {
                    Ok(o) => Case {
                        id,
                        pass: o.pass,
                        residual: o.residual,
                        seed: u.seed,
                        value: o.value,
                        error: None,
                        ill_conditioned: false,
                    },
                    Err(e) => Case {
                        id,
                        pass: false,
                        residual: 0.0,
                        seed: u.seed,
                        value: None,
                        ill_conditioned: matches!(e, hodgelab::Error::IllConditionedSpectrum(_)),
                        error: Some(e.to_string()),
                    },
                }
            })
            .collect();
        Report::new(self.name.as_str(), self.backend, self.dims.clone(), cases)
    }
}

//! Acceptance suite: one PASS/FAIL line per criterion, with its tolerance and
//! time limit. Exits nonzero when a verdict differs from the expected one.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hodgelab::frames::{obstruction_kernel, random_transition};
use hodgelab::{sample, Rational};
use hodgelab_cli::checks::{self, Outcome};
use rayon::prelude::*;

type R = hodgelab::Result<Outcome>;

struct Tally {
    cases: usize,
    failed: Vec<String>,
    worst: f64,
    notes: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            cases: 0,
            failed: Vec::new(),
            worst: 0.0,
            notes: Vec::new(),
        }
    }

    fn add(&mut self, label: String, r: R) {
        self.cases += 1;
        match r {
            Ok(o) => {
                self.worst = self.worst.max(o.residual);
                if !o.pass {
                    self.failed.push(format!("{label} (residual {:.3e})", o.residual));
                }
            }
            Err(e) => self.failed.push(format!("{label}: {e}")),
        }
    }

    fn extend(&mut self, results: Vec<(String, R)>) {
        for (label, r) in results {
            self.add(label, r);
        }
    }

    fn pass(&self) -> bool {
        self.failed.is_empty()
    }
}

fn par<T: Sync, F>(items: &[T], label: impl Fn(&T) -> String + Sync, f: F) -> Vec<(String, R)>
where
    F: Fn(&T) -> R + Sync,
{
    items.par_iter().map(|x| (label(x), f(x))).collect()
}

fn pairs(dims: &[usize], seeds: std::ops::RangeInclusive<u64>) -> Vec<(usize, u64)> {
    dims.iter().flat_map(|&n| seeds.clone().map(move |s| (n, s))).collect()
}

fn lbl(name: &'static str) -> impl Fn(&(usize, u64)) -> String + Sync {
    move |(n, s)| format!("{name} n={n} seed={s}")
}

struct Criterion {
    number: u32,
    title: &'static str,
    tolerance: &'static str,
    limit: Duration,
    /// False for a criterion that is known to be unattainable as stated.
    expected: bool,
    run: fn() -> Tally,
}

fn stab_expansion() -> Tally {
    let mut t = Tally::new();
    let triples = pairs(&[4, 6, 8], 1..=170);
    t.extend(par(&triples, lbl("stab"), |&(n, s)| checks::prop_4_1::<Rational>(n, s)));
    t.notes.push(format!("{} triples", triples.len()));
    t
}

fn lstar_identities() -> Tally {
    let mut t = Tally::new();
    t.extend(par(&pairs(&[4, 6, 8], 1..=60), lbl("P_k"), |&(n, s)| checks::prop_2_3::<Rational>(n, s)));
    t
}

fn antisymmetrisation() -> Tally {
    let mut t = Tally::new();
    let dims = [4usize, 6, 8];
    t.extend(par(&pairs(&dims, 1..=8), lbl("types"), |&(n, s)| checks::lemma_2_1::<Rational>(n, s)));
    let mut shapes = Vec::new();
    for &n in &dims {
        for p in 1..=3usize.min(n / 2) {
            for q in (1..=3usize.min(n / 2)).filter(|&q| q != p) {
                shapes.push((n, p, q));
            }
        }
    }
    t.extend(
        shapes
            .par_iter()
            .map(|&(n, p, q)| (format!("rank n={n} p={p} q={q}"), checks::prop_2_2_rank::<Rational>(n, p, q)))
            .collect(),
    );
    t.extend(par(&pairs(&dims, 1..=8), lbl("contraction"), |&(n, s)| {
        checks::prop_2_2_contraction::<Rational>(n, s)
    }));
    t.notes.push(format!("{} rank checks", shapes.len()));
    t
}

fn splitting_spectrum() -> Tally {
    let mut t = Tally::new();
    for rank in [2usize, 4] {
        let r = checks::lemma_4_3::<Rational>(6, rank);
        if let Ok(o) = &r {
            t.notes.push(format!("rank {rank}: {} basis forms", o.value.unwrap_or(0)));
        }
        t.add(format!("Q spectrum rank {rank}"), r);
    }
    t
}

fn harmonic_decomposition() -> Tally {
    let mut t = Tally::new();
    let inputs: Vec<(usize, u64)> = (1..=100u64).map(|s| (1 + (s as usize - 1) % 8, s)).collect();
    t.extend(par(&inputs, lbl("spectral"), |&(n, s)| checks::prop_4_2(n, s)));
    let seeds: Vec<u64> = (1..=20).collect();
    let normalized = par(&seeds, |s| format!("half patch seed={s}"), |&s| checks::lemma_4_4_normalized(s));
    let ok = normalized.iter().all(|(_, r)| matches!(r, Ok(o) if o.pass));
    t.notes.push(format!("α′+½⋆(α′∧α′) squares to −I on all 20: {ok}"));
    t.extend(normalized);
    let literal = par(&seeds, |s| format!("literal patch seed={s}"), |&s| checks::lemma_4_4_literal(s));
    let worst = literal
        .iter()
        .filter_map(|(_, r)| r.as_ref().ok().map(|o| o.residual))
        .fold(0.0, f64::max);
    t.notes.push(format!(
        "α′+⋆(α′∧α′) has C² = −4 on ker α′, so |C²+I| reaches {worst:.3}"
    ));
    t.extend(literal);
    t
}

fn frame_suite() -> Tally {
    let mut t = Tally::new();
    let seeds: Vec<u64> = (1..=200).collect();
    t.extend(par(&seeds, |s| format!("frame seed={s}"), |&s| checks::lemma_4_8(s)));
    let transitions: Vec<u64> = (1..=100).collect();
    t.extend(par(&transitions, |s| format!("transition seed={s}"), |&s| {
        let dim = obstruction_kernel(&random_transition(&mut sample::rng(s)), true)?;
        Ok(Outcome {
            pass: dim == 0,
            residual: 0.0,
            value: Some(dim as i64),
        })
    }));
    t
}

fn torsion_kernel() -> Tally {
    let mut t = Tally::new();
    for n in [4usize, 6, 8] {
        let start = Instant::now();
        let r = checks::lemma_5_5::<Rational>(n);
        let took = start.elapsed().as_secs_f64();
        if let Ok(o) = &r {
            t.notes.push(format!("2k={n}: dim {} ({took:.2}s)", o.value.unwrap_or(-1)));
        }
        t.add(format!("torsion kernel n={n}"), r);
    }
    t
}

fn holomorphic_tensors() -> Tally {
    let mut t = Tally::new();
    let cases = pairs(&[4, 6, 8], 1..=10);
    t.extend(par(&cases, lbl("Q type"), |&(n, s)| checks::lemma_3_1::<Rational>(n, s)));
    t.extend(par(&cases, lbl("alpha"), |&(n, s)| checks::alpha_omega::<Rational>(n, s)));
    t
}

fn run_cli(args: &[&str], out: &std::path::Path) -> Vec<u8> {
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--json", out.to_str().expect("utf-8 path")]);
    let o = Command::new(env!("CARGO_BIN_EXE_hodgelab"))
        .args(&full)
        .output()
        .expect("binary runs");
    assert!(o.status.code().is_some());
    std::fs::read(out).unwrap_or_default()
}

fn determinism() -> Tally {
    let mut t = Tally::new();
    let dir = tempfile::tempdir().expect("tempdir");
    let runs: [&[&str]; 5] = [
        &["verify", "prop-4.1", "--dim", "4,6,8", "--seeds", "1..40"],
        &["verify", "prop-4.2", "--seeds", "1..40"],
        &["verify", "lemma-4.8", "--seeds", "1..40"],
        &["verify", "prop-2.3", "--dim", "4,6", "--seeds", "1..8", "--backend", "float"],
        &["verify", "lemma-5.5"],
    ];
    for args in runs {
        let a = run_cli(args, &dir.path().join("a.json"));
        let b = run_cli(args, &dir.path().join("b.json"));
        let same = !a.is_empty() && a == b;
        t.add(
            args[1].to_string(),
            Ok(Outcome {
                pass: same,
                residual: 0.0,
                value: None,
            }),
        );
    }
    t
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { number: 1, title: "adjoint wedge expansion on 2-forms, dims 4/6/8", tolerance: "exact", limit: Duration::from_secs(10), expected: true, run: stab_expansion },
        Criterion { number: 2, title: "L* recursion and primitive evaluation, r,s ≤ 3", tolerance: "exact", limit: Duration::from_secs(30), expected: true, run: lstar_identities },
        Criterion { number: 3, title: "antisymmetrisation types, rank and nullspace", tolerance: "exact", limit: Duration::from_secs(60), expected: true, run: antisymmetrisation },
        Criterion { number: 4, title: "splitting operator spectrum on R^6", tolerance: "exact", limit: Duration::from_secs(5), expected: true, run: splitting_spectrum },
        Criterion { number: 5, title: "spectral decomposition, moments, symplectic candidate and patch", tolerance: "1e-8 / 1e-6", limit: Duration::from_secs(10), expected: false, run: harmonic_decomposition },
        Criterion { number: 6, title: "complex frame identities and real obstruction kernel", tolerance: "1e-9", limit: Duration::from_secs(10), expected: true, run: frame_suite },
        Criterion { number: 7, title: "constrained torsion kernel at 2k = 6, 8", tolerance: "exact", limit: Duration::from_secs(120), expected: true, run: torsion_kernel },
        Criterion { number: 8, title: "holomorphic Q type and α_Ω identity, p = 2, 3", tolerance: "exact", limit: Duration::from_secs(60), expected: true, run: holomorphic_tensors },
        Criterion { number: 9, title: "byte-identical reports across runs", tolerance: "bytes", limit: Duration::from_secs(60), expected: true, run: determinism },
    ];
    let mut surprises = 0;
    for c in &criteria {
        let start = Instant::now();
        let t = (c.run)();
        let took = start.elapsed();
        let in_time = took <= c.limit;
        let pass = t.pass() && in_time;
        let mut line = format!(
            "criterion {}: {} | {} | tol {} | limit {}s | {:.2}s | {} cases, max residual {:.2e}",
            c.number,
            if pass { "PASS" } else { "FAIL" },
            c.title,
            c.tolerance,
            c.limit.as_secs(),
            took.as_secs_f64(),
            t.cases,
            t.worst
        );
        if !t.notes.is_empty() {
            line.push_str(&format!(" | {}", t.notes.join("; ")));
        }
        if !t.failed.is_empty() {
            let shown: Vec<_> = t.failed.iter().take(3).cloned().collect();
            line.push_str(&format!(" | {} failing, e.g. {}", t.failed.len(), shown.join(", ")));
        }
        if !in_time {
            line.push_str(" | over time limit");
        }
        if pass != c.expected {
            surprises += 1;
            line.push_str(" | UNEXPECTED");
        } else if !pass {
            line.push_str(" | known failure");
        }
        println!("{line}");
    }
    if surprises == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! The subcommands, as functions from inputs to output text and an exit
//! status. Nothing here touches the process; `main` does the I/O.

use std::fmt::Write as _;

use torus_rigidity::{
    build_witness, check_equivariance, decide_almost, decide_cyclic, decide_factor,
    decide_nonaffine, Certificate, DecisionReport, Error, MatrixAction, Mode, RationalSubspace,
    WitnessSpec,
};

use crate::document::{
    format_f64, from_text, to_text, ActionDocument, DecisionDocument, Invalid, SystemPair,
    SystemPairDocument, VerificationDocument, WitnessBody, WitnessDocument,
};

/// Process exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Invalid = 2,
    Precondition = 3,
    NoWitness = 4,
    VerificationFailed = 5,
    SourceTooLarge = 6,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }
}

/// What a command produced: text for the primary output and a status.
/// On failure `output` holds the diagnostic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: Status,
    pub output: String,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Self {
            status: Status::Success,
            output,
        }
    }

    fn fail(status: Status, message: impl Into<String>) -> Self {
        Self {
            status,
            output: message.into(),
        }
    }
}

impl From<Invalid> for Outcome {
    fn from(e: Invalid) -> Self {
        Outcome::fail(Status::Invalid, e.0)
    }
}

pub fn parse_pair(text: &str) -> Result<SystemPair, Invalid> {
    from_text::<SystemPairDocument>(text)?.validate()
}

fn vector_text<T: std::fmt::Display>(v: &[T]) -> String {
    let items: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", items.join(", "))
}

fn subspace_text(w: &RationalSubspace) -> String {
    let rows: Vec<String> = w.integer_basis().iter().map(|v| vector_text(v)).collect();
    format!("[{}]", rows.join(", "))
}

fn analyze_action(out: &mut String, role: &str, a: &MatrixAction) {
    let ks: Vec<String> = a.k_indices().iter().map(u64::to_string).collect();
    let f = a.finite_orbit_characters();
    let g = a.gamma_rho();
    let w = a.finite_orbit_subspace();
    let _ = writeln!(out, "{role}: T^{}, rank {}", a.dim(), a.rank());
    let _ = writeln!(out, "  k: {}", ks.join(", "));
    let _ = writeln!(out, "  ergodic: {}", f.rank() == 0);
    if f.rank() > 0 && f.is_full_rank() {
        let _ = writeln!(out, "  F: full, rank {} {}", f.rank(), f);
    } else {
        let _ = writeln!(out, "  F: rank {} {}", f.rank(), f);
    }
    let rows: Vec<String> = g.basis_i64().iter().map(|r| vector_text(r)).collect();
    let _ = writeln!(out, "  Gamma: index {} [{}]", g.index(), rows.join(", "));
    let _ = writeln!(out, "  finite-orbit subspace: rank {} {}", w.rank(), subspace_text(&w));
}

/// Summary of both actions of a pair document.
pub fn analyze(text: &str) -> Outcome {
    let pair = match parse_pair(text) {
        Ok(p) => p,
        Err(e) => return e.into(),
    };
    let mut out = String::new();
    analyze_action(&mut out, "source", &pair.source);
    analyze_action(&mut out, "target", &pair.target);
    Outcome::ok(out)
}

fn precondition(e: Error) -> Outcome {
    Outcome::fail(Status::Precondition, format!("precondition failed: {e}"))
}

pub fn run_decision(pair: &SystemPair, mode: Mode) -> Result<DecisionReport, Outcome> {
    let result = match mode {
        Mode::Exact => decide_nonaffine(&pair.source, &pair.target),
        Mode::Almost => decide_almost(&pair.source, &pair.target),
        Mode::Cyclic => {
            if pair.source.rank() != 1 {
                return Err(Outcome::fail(
                    Status::Precondition,
                    format!("cyclic mode needs rank 1, the document has rank {}", pair.source.rank()),
                ));
            }
            decide_cyclic(&pair.source.generators()[0], &pair.target.generators()[0])
        }
        Mode::Factor => match &pair.factor {
            Some(theta) => decide_factor(&pair.source, &pair.target, theta),
            None => {
                return Err(Outcome::fail(
                    Status::Precondition,
                    "factor mode needs a factor_matrix in the document",
                ))
            }
        },
    };
    result.map_err(precondition)
}

pub fn decide(text: &str, mode: Mode) -> Outcome {
    let pair = match parse_pair(text) {
        Ok(p) => p,
        Err(e) => return e.into(),
    };
    match run_decision(&pair, mode) {
        Ok(report) => Outcome::ok(to_text(&DecisionDocument::from_report(&report))),
        Err(o) => o,
    }
}

/// Decides in exact mode and, on a positive answer, emits the witness.
pub fn witness(text: &str) -> Outcome {
    let pair = match parse_pair(text) {
        Ok(p) => p,
        Err(e) => return e.into(),
    };
    let report = match run_decision(&pair, Mode::Exact) {
        Ok(r) => r,
        Err(o) => return o,
    };
    if !report.exists_nonaffine {
        return Outcome::fail(
            Status::NoWitness,
            format!(
                "no non-affine equivariant map exists; certificate: {}",
                report.certificate.name()
            ),
        );
    }
    debug_assert!(matches!(report.certificate, Certificate::Exists { .. }));
    match build_witness(&pair.source, &pair.target, &report) {
        Ok(w) => Outcome::ok(to_text(&WitnessDocument {
            rank: pair.source.rank(),
            source: ActionDocument::from_action(&pair.source),
            target: ActionDocument::from_action(&pair.target),
            witness: WitnessBody::from_parts(w.parts()),
        })),
        Err(e) => precondition(e),
    }
}

/// A parsed witness document.
pub struct LoadedWitness {
    pub source: MatrixAction,
    pub target: MatrixAction,
    pub witness: WitnessSpec,
}

pub fn load_witness(text: &str) -> Result<LoadedWitness, Invalid> {
    let doc: WitnessDocument = from_text(text)?;
    if doc.rank == 0 {
        return Err(Invalid("rank must be positive".into()));
    }
    let source = doc.source.to_action("source", doc.rank)?;
    let target = doc.target.to_action("target", doc.rank)?;
    let witness = WitnessSpec::new(doc.witness.to_parts()?)
        .map_err(|e| Invalid(format!("witness: {e}")))?;
    if witness.source_dim() != source.dim() || witness.target_dim() != target.dim() {
        return Err(Invalid("witness dimensions do not match the actions".into()));
    }
    if witness.parts().reps.iter().chain(&witness.parts().subgroup).any(|g| g.len() != doc.rank) {
        return Err(Invalid("witness exponent vectors do not match the rank".into()));
    }
    Ok(LoadedWitness {
        source,
        target,
        witness,
    })
}

pub fn verify(text: &str, samples: usize, seed: u64, tol: f64) -> Outcome {
    let loaded = match load_witness(text) {
        Ok(l) => l,
        Err(e) => return e.into(),
    };
    let report = match check_equivariance(
        &loaded.witness,
        &loaded.source,
        &loaded.target,
        samples,
        seed,
        tol,
    ) {
        Ok(r) => r,
        Err(e) => return Outcome::fail(Status::Invalid, format!("witness: {e}")),
    };
    Outcome {
        status: if report.pass {
            Status::Success
        } else {
            Status::VerificationFailed
        },
        output: to_text(&VerificationDocument::from_report(&report)),
    }
}

/// `f` on a regular grid of `T^1` (`K` rows) or `T^2` (`K²` rows, first
/// coordinate outermost), as CSV with a header.
pub fn sample_map(text: &str, grid: usize) -> Outcome {
    let loaded = match load_witness(text) {
        Ok(l) => l,
        Err(e) => return e.into(),
    };
    let w = &loaded.witness;
    let m = w.source_dim();
    if m > 2 {
        return Outcome::fail(
            Status::SourceTooLarge,
            format!("grid sampling needs a source of dimension at most 2, found {m}"),
        );
    }
    let mut out = String::new();
    let header: Vec<String> = (1..=m)
        .map(|i| format!("x{i}"))
        .chain((1..=w.target_dim()).map(|i| format!("f{i}")))
        .collect();
    let _ = writeln!(out, "{}", header.join(","));
    let points: Vec<Vec<f64>> = if m == 1 {
        (0..grid).map(|i| vec![i as f64 / grid as f64]).collect()
    } else {
        (0..grid)
            .flat_map(|i| (0..grid).map(move |j| vec![i as f64 / grid as f64, j as f64 / grid as f64]))
            .collect()
    };
    for x in points {
        let row: Vec<String> = x.iter().chain(&w.eval_f(&x)).map(|&v| format_f64(v)).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    Outcome::ok(out)
}

//! The optimal bounds against earlier ones, row by row over a grid.

use revpinsker::bounds::{
    corollary1_bound, renyi_bound, sason_chi2_bound, sason_renyi_bound, simic_kl_bound, theorem1_bound, tv_cap,
    verdu_kl_bound,
};
use revpinsker::generator::{chi2_generator, kl_generator};
use revpinsker::grid::{default_grid, grid, GridPoint};
use revpinsker::{ClassParams, ExtendedReal};

use crate::record::{format_extended, CSV_DIGITS};
use crate::{parse_weights, value_name, CliError, ComparatorArg, CompareArgs, OutputRecord, Status};

/// Relative slack when checking `prior >= new`, for bounds that agree in
/// closed form but are evaluated along different paths.
const DOMINANCE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparator {
    /// Relative entropy from ratio extremes alone, against the `δ`-free bound.
    Simic,
    SasonChi2,
    /// Rényi bound at `m = 0` against the same bound using `m > 0`.
    SasonRenyi,
    /// Relative entropy with `m = 0`.
    Verdu,
}

impl Comparator {
    pub const ALL: [Comparator; 4] = [
        Comparator::Simic,
        Comparator::SasonChi2,
        Comparator::SasonRenyi,
        Comparator::Verdu,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Comparator::Simic => "simic",
            Comparator::SasonChi2 => "sason-chi2",
            Comparator::SasonRenyi => "sason-renyi",
            Comparator::Verdu => "verdu",
        }
    }
}

impl From<ComparatorArg> for Vec<Comparator> {
    fn from(arg: ComparatorArg) -> Self {
        match arg {
            ComparatorArg::Simic => vec![Comparator::Simic],
            ComparatorArg::SasonChi2 => vec![Comparator::SasonChi2],
            ComparatorArg::SasonRenyi => vec![Comparator::SasonRenyi],
            ComparatorArg::Verdu => vec![Comparator::Verdu],
            ComparatorArg::All => Comparator::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub comparator: Comparator,
    pub params: ClassParams,
    pub new_bound: ExtendedReal,
    pub prior_bound: ExtendedReal,
}

impl CompareRow {
    /// `prior / new`; `inf` when the new bound is zero and the prior is not.
    pub fn ratio(&self) -> ExtendedReal {
        let (new, prior) = (self.new_bound.to_f64(), self.prior_bound.to_f64());
        if new == 0.0 {
            return if prior == 0.0 {
                ExtendedReal::Finite(1.0)
            } else {
                ExtendedReal::PosInf
            };
        }
        ExtendedReal::from_f64(prior / new).unwrap_or(ExtendedReal::PosInf)
    }

    pub fn dominates(&self) -> bool {
        let new = self.new_bound.to_f64();
        self.prior_bound.to_f64() >= new - DOMINANCE_SLACK * new.abs()
    }
}

/// `"default"` or `"<m list>:<M list>:<cap fractions>"`.
pub fn parse_grid(spec: &str) -> Result<Vec<GridPoint>, CliError> {
    if spec == "default" {
        return Ok(default_grid());
    }
    let parts: Vec<&str> = spec.split(':').collect();
    let [lows, highs, fractions] = parts[..] else {
        return Err(CliError::Parse(format!(
            "grid {spec:?} is not \"default\" or m:M:fractions"
        )));
    };
    Ok(grid(
        &parse_weights(lows)?,
        &parse_weights(highs)?,
        &parse_weights(fractions)?,
    )?)
}

pub fn compare_rows(
    points: &[GridPoint],
    comparators: Vec<Comparator>,
    alpha: f64,
) -> Result<Vec<CompareRow>, CliError> {
    let kl = kl_generator();
    let chi2 = chi2_generator();
    let mut rows = Vec::new();
    for comparator in comparators {
        let mut last_extremes = None;
        for point in points {
            let params = point.params;
            let (m, big_m) = (params.m(), params.big_m());
            let interior = m > 0.0 && params.delta() > 0.0;
            let row = match comparator {
                Comparator::Simic => {
                    if !interior || last_extremes == Some((m, big_m)) {
                        continue;
                    }
                    last_extremes = Some((m, big_m));
                    let cap = tv_cap(m, big_m)?;
                    let big_m_f = big_m.finite().ok_or(revpinsker::Error::UnboundedM)?;
                    CompareRow {
                        comparator,
                        params: params.with_delta(cap)?,
                        new_bound: corollary1_bound(&kl, m, big_m)?,
                        prior_bound: ExtendedReal::from_f64(simic_kl_bound(1.0 / big_m_f, 1.0 / m)?)?,
                    }
                }
                Comparator::SasonChi2 => {
                    if params.delta() == 0.0 {
                        continue;
                    }
                    CompareRow {
                        comparator,
                        params,
                        new_bound: theorem1_bound(&chi2, &params)?,
                        prior_bound: ExtendedReal::from_f64(sason_chi2_bound(&params)?)?,
                    }
                }
                Comparator::SasonRenyi => {
                    if !interior {
                        continue;
                    }
                    CompareRow {
                        comparator,
                        params,
                        new_bound: renyi_bound(alpha, &params)?,
                        prior_bound: sason_renyi_bound(alpha, params.delta(), big_m)?,
                    }
                }
                Comparator::Verdu => {
                    if params.delta() == 0.0 {
                        continue;
                    }
                    CompareRow {
                        comparator,
                        params,
                        new_bound: theorem1_bound(&kl, &params)?,
                        prior_bound: verdu_kl_bound(params.delta(), big_m)?,
                    }
                }
            };
            rows.push(row);
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[CompareRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["comparator", "m", "M", "delta", "new_bound", "prior_bound", "ratio"])
        .expect("in-memory write");
    for r in rows {
        let f = |x: ExtendedReal| format_extended(x, CSV_DIGITS);
        w.write_record([
            r.comparator.id().to_string(),
            f(ExtendedReal::Finite(r.params.m())),
            f(r.params.big_m()),
            f(ExtendedReal::Finite(r.params.delta())),
            f(r.new_bound),
            f(r.prior_bound),
            f(r.ratio()),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

/// Per-comparator row count and smallest ratio.
pub fn summary(args: &CompareArgs, rows: &[CompareRow]) -> OutputRecord {
    let mut record = OutputRecord::new("compare");
    record
        .input("grid", &args.grid)
        .input("comparator", value_name(args.comparator))
        .input("alpha", args.alpha);
    for c in Comparator::ALL {
        let mine: Vec<&CompareRow> = rows.iter().filter(|r| r.comparator == c).collect();
        if mine.is_empty() {
            continue;
        }
        let min_ratio = mine
            .iter()
            .map(|r| r.ratio())
            .fold(ExtendedReal::PosInf, |a, b| if b < a { b } else { a });
        record
            .result(&format!("{}.rows", c.id()), mine.len() as f64)
            .result(&format!("{}.min_ratio", c.id()), min_ratio);
    }
    record.status = if rows.iter().all(CompareRow::dominates) {
        Status::Pass
    } else {
        Status::Fail
    };
    record
}

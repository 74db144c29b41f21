//! Subcommand implementations.

use std::path::Path;

use num_traits::{Signed, Zero};

use pdc_core::approx::Codifferential;
use pdc_core::audit::{run_audit, AuditConfig};
use pdc_core::conditions::{self, CheckKind, Classification, Verdict};
use pdc_core::dcfunc::{NormalizedDC, PolyhedralDC};
use pdc_core::oracle::{self, GridSpec};
use pdc_core::rational::{format_decimal, int, parse_rational, ratio, Rational};

use pdc_cli::instance::InstanceFile;
use pdc_cli::report::{format_polytope, format_vector, Report};
use pdc_cli::CliError;

use crate::{Representation, WhichCheck};

fn parse_vector(text: &str, what: &str) -> Result<Vec<Rational>, CliError> {
    text.split(',')
        .map(|part| parse_rational(part.trim()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::usage(format!("{what}: {e}")))
}

fn point_budget() -> Result<u64, CliError> {
    match std::env::var("PDC_POINT_BUDGET") {
        Ok(text) => text
            .parse()
            .map_err(|_| CliError::usage(format!("PDC_POINT_BUDGET is not a number: {text:?}"))),
        Err(_) => Ok(oracle::DEFAULT_POINT_BUDGET),
    }
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn eval(
    file: &Path,
    delta: &str,
    active: bool,
    direction: Option<&str>,
) -> Result<u8, CliError> {
    let f = InstanceFile::load(file)?.to_function()?;
    let delta = parse_vector(delta, "--delta")?;
    let value = f.eval(&delta)?;
    println!("{value}");
    if active {
        let (plus, minus) = f.active_sets(&delta)?;
        let join = |v: Vec<usize>| {
            v.iter().map(usize::to_string).collect::<Vec<_>>().join(", ")
        };
        println!("active.plus = {{{}}}", join(plus));
        println!("active.minus = {{{}}}", join(minus));
    }
    if let Some(direction) = direction {
        let direction = parse_vector(direction, "--direction")?;
        println!("derivative = {}", f.directional_derivative(&delta, &direction)?);
    }
    Ok(0)
}

pub fn show(file: &Path, which: Representation) -> Result<u8, CliError> {
    let file = InstanceFile::load(file)?;
    let h = file.to_function()?.normalize();
    let cd = Codifferential::from_normalized(&h);
    println!("offset = {}", h.offset());
    match which {
        Representation::Codifferential => {
            println!("lower = {}", format_polytope(&cd.lower));
            println!("upper = {}", format_polytope(&cd.upper));
        }
        Representation::UpperCoexhauster => {
            for (k, member) in cd.upper_coexhauster().members.iter().enumerate() {
                println!("member {} = {}", k + 1, format_polytope(member));
            }
        }
        Representation::LowerCoexhauster => {
            for (k, member) in cd.lower_coexhauster().members.iter().enumerate() {
                println!("member {} = {}", k + 1, format_polytope(member));
            }
        }
    }
    Ok(0)
}

fn run_checker(kind: CheckKind, h: &NormalizedDC) -> Result<Verdict, CliError> {
    let verdict = match kind {
        CheckKind::BoundedBelow => conditions::bounded_below(h),
        CheckKind::BoundedAbove => conditions::bounded_above(h),
        CheckKind::MinCondition => conditions::min_condition(h),
        CheckKind::MaxCondition => conditions::max_condition(h),
    }?;
    Ok(verdict)
}

pub fn check(
    file: &Path,
    which: WhichCheck,
    oracle: bool,
    out: Option<&Path>,
) -> Result<u8, CliError> {
    let file = InstanceFile::load(file)?;
    let f = file.to_function()?;
    let h = f.normalize();
    let fun = h.function();

    let kinds: &[CheckKind] = match which {
        WhichCheck::All => &CheckKind::ALL,
        WhichCheck::Min | WhichCheck::Max => {
            // Both sign checks run so the stationarity classification can
            // be reported alongside the requested one.
            &[CheckKind::MinCondition, CheckKind::MaxCondition]
        }
        WhichCheck::BoundedBelow => &[CheckKind::BoundedBelow],
        WhichCheck::BoundedAbove => &[CheckKind::BoundedAbove],
    };

    let mut report = Report::new();
    report.echo_instance(file.label.as_deref(), &f);
    report.push("normalization.offset", h.offset());

    let mut verdicts = Vec::new();
    for &kind in kinds {
        let verdict = run_checker(kind, &h)?;
        report.push_verdict(fun, &verdict);
        verdicts.push(verdict);
    }

    let find = |kind: CheckKind| verdicts.iter().find(|v| v.check == kind);
    let min = find(CheckKind::MinCondition);
    let max = find(CheckKind::MaxCondition);
    if let (Some(min), Some(max)) = (min, max) {
        if h.offset().is_zero() {
            let classification = match (min.holds, max.holds) {
                (true, true) => Classification::Both,
                (true, false) => Classification::InfStationarySufficient,
                (false, true) => Classification::SupStationarySufficient,
                (false, false) => Classification::Inconclusive,
            };
            report.push_stationarity(classification);
        } else {
            report.push("stationarity.skipped", "nonzero normalization offset");
        }
    }

    if oracle {
        push_oracle_section(&mut report, fun, &verdicts)?;
    }

    print!("{}", report.human());
    if let Some(path) = out {
        std::fs::write(path, report.machine())
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?;
    }

    let requested_holds = match which {
        WhichCheck::All => verdicts.iter().all(|v| v.holds),
        WhichCheck::Min => min.expect("computed above").holds,
        WhichCheck::Max => max.expect("computed above").holds,
        WhichCheck::BoundedBelow | WhichCheck::BoundedAbove => verdicts[0].holds,
    };
    Ok(if requested_holds { 0 } else { 1 })
}

fn push_oracle_section(
    report: &mut Report,
    fun: &PolyhedralDC,
    verdicts: &[Verdict],
) -> Result<(), CliError> {
    let grid = GridSpec::new(int(5), ratio(1, 4), fun.dimension())?
        .with_point_budget(point_budget()?);
    report.push("oracle.grid.radius", "5");
    report.push("oracle.grid.step", "1/4");
    let (min_value, min_at) = oracle::grid_min(fun, &grid)?;
    let (max_value, max_at) = oracle::grid_max(fun, &grid)?;
    report.push("oracle.lattice.min", &min_value);
    report.push("oracle.lattice.argmin", format_vector(&min_at));
    report.push("oracle.lattice.max", &max_value);
    report.push("oracle.lattice.argmax", format_vector(&max_at));
    let falling = oracle::sample_recession(fun, 64);
    let mirrored = PolyhedralDC::new(
        fun.dimension(),
        fun.minus_pieces().to_vec(),
        fun.plus_pieces().to_vec(),
    )?;
    let rising = oracle::sample_recession(&mirrored, 64);
    let describe = |d: &Option<Vec<Rational>>| match d {
        None => "none".to_string(),
        Some(d) => format_vector(d),
    };
    report.push("oracle.recession.falling", describe(&falling));
    report.push("oracle.recession.rising", describe(&rising));

    let mut consistent = true;
    for v in verdicts {
        if !v.holds {
            continue;
        }
        consistent &= match v.check {
            CheckKind::MinCondition => !min_value.is_negative(),
            CheckKind::MaxCondition => !max_value.is_positive(),
            CheckKind::BoundedBelow => falling.is_none(),
            CheckKind::BoundedAbove => rising.is_none(),
        };
    }
    report.push("oracle.consistent", consistent);
    Ok(())
}

pub fn plot(file: &Path, range: &str, step: &str, out: Option<&Path>) -> Result<u8, CliError> {
    let f = InstanceFile::load(file)?.to_function()?;
    if f.dimension() > 2 {
        return Err(CliError::usage(format!(
            "plot supports dimensions 1 and 2, instance has {}",
            f.dimension()
        )));
    }
    let trimmed = range.trim().trim_start_matches('[').trim_end_matches(']');
    let bounds = parse_vector(trimmed, "--range")?;
    let [lo, hi] = bounds.as_slice() else {
        return Err(CliError::usage("--range must be \"lo,hi\""));
    };
    let step = parse_rational(step.trim())
        .map_err(|e| CliError::usage(format!("--step: {e}")))?;
    if !step.is_positive() {
        return Err(CliError::usage("--step must be positive"));
    }
    if lo >= hi {
        return Err(CliError::usage("--range must have lo < hi"));
    }
    let span = (hi - lo) / &step;
    if !span.is_integer() {
        return Err(CliError::usage("--step must divide the range evenly"));
    }
    let per_axis: u64 = span
        .to_integer()
        .try_into()
        .map_err(|_| CliError::usage("--range/--step produce too many points"))?;
    let coordinate = |k: u64| lo + &step * int(k as i64);

    let mut rows = String::new();
    let mut write_row = |point: &[Rational]| -> Result<(), CliError> {
        let value = f.eval(point)?;
        let mut cells: Vec<String> = point.iter().map(format_decimal).collect();
        cells.push(format_decimal(&value));
        rows.push_str(&cells.join(","));
        rows.push('\n');
        Ok(())
    };
    if f.dimension() == 1 {
        for k in 0..=per_axis {
            write_row(&[coordinate(k)])?;
        }
    } else {
        for k1 in 0..=per_axis {
            for k2 in 0..=per_axis {
                write_row(&[coordinate(k1), coordinate(k2)])?;
            }
        }
    }
    write_or_print(out, &rows)?;
    Ok(0)
}

pub fn audit(count: usize, seed: &str, out: Option<&Path>) -> Result<u8, CliError> {
    if count == 0 {
        return Err(CliError::usage("--count must be at least 1"));
    }
    let mut config = AuditConfig::new(count, seed);
    config.point_budget = point_budget()?;
    let summary = run_audit(&config)?;

    let mut table = String::from(
        "index dim plus minus below above min max routes oracle witness implication\n",
    );
    let yn = |v: Option<bool>| match v {
        Some(true) => "yes",
        Some(false) => "no",
        None => "?",
    };
    let ok = |v: bool| if v { "ok" } else { "FAIL" };
    for i in &summary.instances {
        let [below, above, min, max] = i.holds;
        table.push_str(&format!(
            "{} {} {} {} {} {} {} {} {} {} {} {}\n",
            i.index + 1,
            i.dimension,
            i.plus_count,
            i.minus_count,
            yn(below),
            yn(above),
            yn(min),
            yn(max),
            ok(i.routes_agree),
            ok(i.oracle_consistent),
            ok(i.witnesses_verified),
            ok(i.implications_hold),
        ));
    }
    table.push_str(&format!("audit.count = {}\n", summary.instances.len()));
    table.push_str(&format!("audit.seed = {}\n", summary.seed_label));
    table.push_str(&format!("audit.disagreements = {}\n", summary.disagreements()));
    table.push_str(&format!(
        "audit.oracle_violations = {}\n",
        summary.oracle_violations()
    ));
    table.push_str(&format!("audit.witness_failures = {}\n", summary.witness_failures()));
    table.push_str(&format!(
        "audit.implication_failures = {}\n",
        summary.implication_failures()
    ));

    print!("{table}");
    if let Some(path) = out {
        std::fs::write(path, &table)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(if summary.disagreements() == 0 { 0 } else { 1 })
}

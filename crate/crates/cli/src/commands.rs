//! One function per subcommand. Each returns the document to emit and
//! whether the run counts as a pass.

use std::fmt::Write as _;
use std::fs;

use serde_json::{json, Value};
use tourney_core::analysis::{
    check_fairness, check_futility, check_honesty, check_rounds_honesty, check_symmetry, discrete_map_polytope,
    standard_samples, PropertyReport, Sample, STANDARD_SEED,
};
use tourney_core::engine::{exact_win_vector, simulate};
use tourney_core::polytope::{
    arc_flow_membership, classes_csv, corner_sequences, corners_csv, enumerate_digraphs, graph_vector,
    hull_membership, permutation_classes, Membership, Sense, MAX_PERMUTATION_N,
};
use tourney_core::rational::{format_rational, to_f64};
use tourney_core::{DoublyMonotonic, Error, Rational, Result, WinVector};

use crate::args::{Command, Format, Goal, OutputArgs, Property};
use crate::build::{build, load_matrix, parse_list, Subject};

/// Above this size the hull cross-check in `member` is skipped.
const HULL_CHECK_MAX_N: usize = 7;

const DISPLAY_NOTE: &str = "decimal fields are display-only; exact values are the num/den strings";

pub struct Outcome {
    pub passed: bool,
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn decimals(v: &[Rational]) -> Vec<f64> {
    v.iter().map(to_f64).collect()
}

fn emit(format: Format, json: Value, csv: Option<String>) -> Result<String> {
    match format {
        Format::Json => serde_json::to_string_pretty(&json).map(|s| s + "\n").map_err(|e| Error::Format(e.to_string())),
        Format::Csv => csv.ok_or_else(|| Error::InvalidArgument("this command has no CSV form".into())),
    }
}

pub fn run(command: &Command) -> Result<Outcome> {
    let (out, body, passed) = match command {
        Command::Eval { subject, out } => {
            let s = build(subject)?;
            let p = s.require_matrix(subject.matrix.as_deref())?;
            let r = exact_win_vector(s.tournament.as_ref(), &p)?;
            let v = r.win_vector.components();
            let json = json!({
                "command": "eval",
                "seed": null,
                "tournament": s.describe(),
                "matrix": p.to_json(),
                "win_vector": strings(v),
                "win_vector_decimal": decimals(v),
                "states_visited": r.states_visited,
                "leaf_count": r.leaf_count,
                "note": DISPLAY_NOTE,
            });
            let mut csv = String::from("player,probability,decimal\n");
            for (k, x) in v.iter().enumerate() {
                let _ = writeln!(csv, "{},{},{}", k + 1, format_rational(x), to_f64(x));
            }
            (out, emit(out.format, json, Some(csv))?, true)
        }
        Command::Simulate { subject, trials, seed, compare_exact, out } => {
            let s = build(subject)?;
            let p = s.require_matrix(subject.matrix.as_deref())?;
            let r = simulate(s.tournament.as_ref(), &p, *trials, *seed)?;
            let mut json = json!({
                "command": "simulate",
                "seed": seed,
                "trials": trials,
                "tournament": s.describe(),
                "matrix": p.to_json(),
                "counts": r.counts,
                "empirical": r.empirical,
                "standard_errors": r.standard_errors,
                "note": DISPLAY_NOTE,
            });
            if *compare_exact {
                let exact = exact_win_vector(s.tournament.as_ref(), &p)?.win_vector;
                json["exact"] = json!(strings(exact.components()));
                json["linf_gap"] = json!(r.linf_to(&exact.to_f64()));
            }
            let mut csv = String::from("player,count,empirical,standard_error\n");
            for k in 0..s.n {
                let _ = writeln!(csv, "{},{},{},{}", k + 1, r.counts[k], r.empirical[k], r.standard_errors[k]);
            }
            (out, emit(out.format, json, Some(csv))?, true)
        }
        Command::Corners { n, out } => {
            let rows = corner_sequences(*n)?
                .into_iter()
                .map(|c| {
                    let v = graph_vector(&c.digraph())?;
                    Ok(json!({ "sequence": c.one_based(), "vector": strings(v.components()) }))
                })
                .collect::<Result<Vec<_>>>()?;
            let json = json!({ "command": "corners", "seed": null, "n": n, "count": rows.len(), "corners": rows });
            let csv = if out.format == Format::Csv { Some(corners_csv(*n)?) } else { None };
            (out, emit(out.format, json, csv)?, true)
        }
        Command::Digraphs { n, out } => {
            let graphs = enumerate_digraphs(*n)?;
            let mut rows = Vec::with_capacity(graphs.len());
            let mut csv = String::from("arcs,vector\n");
            for g in &graphs {
                let v = graph_vector(g)?;
                let arcs: Vec<String> = g.arcs().iter().map(|(i, j, m)| format!("{}>{}x{m}", i + 1, j + 1)).collect();
                let _ = writeln!(csv, "\"{}\",\"{}\"", arcs.join(" "), strings(v.components()).join(" "));
                rows.push(json!({ "digraph": g, "vector": strings(v.components()) }));
            }
            let json = json!({ "command": "digraphs", "seed": null, "n": n, "count": rows.len(), "digraphs": rows });
            (out, emit(out.format, json, Some(csv))?, true)
        }
        Command::Member { n, x, out } => {
            let values = parse_list(x)?;
            if let Some(n) = n {
                if *n != values.len() {
                    return Err(Error::SizeMismatch { expected: *n, actual: values.len() });
                }
            }
            (out, emit(out.format, member(&values)?, None)?, true)
        }
        Command::Check { subject, properties, seed, out } => {
            let s = build(subject)?;
            let seed = seed.unwrap_or(STANDARD_SEED);
            let mut samples = standard_samples(s.n, seed)?;
            let input = s.matrix(subject.matrix.as_deref())?;
            if let Some(m) = &input {
                samples.push(Sample::new("input", m.clone()));
            }
            let reports = check(&s, properties, &samples)?;
            let passed = reports.iter().all(PropertyReport::passed);
            let json = json!({
                "command": "check",
                "seed": seed,
                "tournament": s.describe(),
                "input_matrix": input.map(|m| m.to_json()),
                "samples": samples,
                "passed": passed,
                "reports": reports,
            });
            let mut csv = String::from("property,subject,verdict,samples_checked,states_checked,violations\n");
            for r in &reports {
                let verdict = serde_json::to_value(r.verdict).map_err(|e| Error::Format(e.to_string()))?;
                let _ = writeln!(
                    csv,
                    "{},\"{}\",{},{},{},{}",
                    r.property,
                    r.subject,
                    verdict.as_str().unwrap_or_default(),
                    r.samples_checked,
                    r.states_checked,
                    r.violations
                );
            }
            (out, emit(out.format, json, Some(csv))?, passed)
        }
        Command::ProbeMap { matrix, objective, sense, out } => {
            let p = load_matrix(matrix, None)?;
            let weights = parse_list(objective)?;
            let polytope = discrete_map_polytope(&p)?;
            let sense = match sense {
                Goal::Max => Sense::Maximize,
                Goal::Min => Sense::Minimize,
            };
            let best = polytope.optimize(&weights, sense)?;
            let json = json!({
                "command": "probe-map",
                "seed": null,
                "matrix": p.to_json(),
                "objective": strings(&weights),
                "sense": if sense == Sense::Maximize { "max" } else { "min" },
                "grid_size": polytope.grid_size(),
                "num_vars": polytope.num_vars(),
                "num_constraints": polytope.num_constraints(),
                "value": format_rational(&best.value),
                "value_decimal": to_f64(&best.value),
                "at_base": strings(best.at_base.components()),
                "note": DISPLAY_NOTE,
            });
            (out, emit(out.format, json, None)?, true)
        }
        Command::Table1 { n, out } => {
            if *n == 0 || *n > MAX_PERMUTATION_N {
                return Err(Error::Guard(format!("table1 supports 1 <= n <= {MAX_PERMUTATION_N}")));
            }
            let classes = permutation_classes(*n)?;
            let csv = classes_csv(&classes);
            let json = json!({ "command": "table1", "seed": null, "n": n, "classes": classes });
            (out, emit(out.format, json, Some(csv))?, true)
        }
    };
    write(out, &body)?;
    Ok(Outcome { passed })
}

fn write(out: &OutputArgs, body: &str) -> Result<()> {
    match &out.output {
        Some(path) => fs::write(path, body).map_err(|e| Error::Format(format!("{}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn member(values: &[Rational]) -> Result<Value> {
    let x = match WinVector::new(values.to_vec()) {
        Ok(x) => x,
        Err(e) => {
            return Ok(json!({
                "command": "member",
                "seed": null,
                "x": strings(values),
                "member": false,
                "reason": e.to_string(),
            }))
        }
    };
    let mut json = json!({ "command": "member", "seed": null, "n": x.n(), "x": strings(values) });
    match arc_flow_membership(&x)? {
        Membership::Member(flow) => {
            json["member"] = json!(true);
            json["arc_flow"] = json!(flow);
        }
        Membership::NonMember(cert) => {
            json["member"] = json!(false);
            json["certificate"] = json!(strings(&cert.multipliers));
        }
    }
    if x.n() <= HULL_CHECK_MAX_N {
        let hull = hull_membership(&x)?;
        json["hull_member"] = json!(hull.is_member());
        if let Membership::Member(w) = hull {
            let terms: Vec<Value> = w
                .iter()
                .map(|(c, l)| json!({ "corner": strings(c.components()), "weight": format_rational(l) }))
                .collect();
            json["hull_witness"] = json!(terms);
        }
    }
    Ok(json)
}

fn check(s: &Subject, requested: &[Property], samples: &[Sample]) -> Result<Vec<PropertyReport>> {
    let mut properties = requested.to_vec();
    if properties.is_empty() {
        properties = vec![Property::Symmetry, Property::Honesty, Property::Fairness];
        if s.rounds.is_some() {
            properties.push(Property::RoundsHonesty);
        }
    }
    let t = s.tournament.as_ref();
    properties
        .iter()
        .map(|p| match p {
            Property::Symmetry => check_symmetry(t, samples),
            Property::Honesty => check_honesty(t, samples, false),
            Property::StrictHonesty => check_honesty(t, samples, true),
            Property::Futility => check_futility(t, samples),
            Property::Fairness => {
                let monotonic: Vec<DoublyMonotonic> =
                    samples.iter().filter_map(|x| DoublyMonotonic::new(x.matrix.clone()).ok()).collect();
                check_fairness(t, &monotonic)
            }
            Property::RoundsHonesty => match &s.rounds {
                Some(r) => check_rounds_honesty(r.as_ref(), samples),
                None => Err(Error::InvalidArgument("rounds-honesty needs a rounds tournament".into())),
            },
        })
        .collect()
}

use jacverify::algebra::parse_polynomial;
use jacverify::combinatorics::{enumerate_compositions, Composition, LevelLabeling};
use jacverify::fern::{z_fern, FernLabeling};
use jacverify::generators::{cross_check_generators, extract_generators, DLinearSpec};
use jacverify::ideal::{membership, verify_fern_lemmas, verify_main_theorem, MembershipSolver};
use jacverify::identities::{
    all_identity2_instances, cayley_hamilton_numeric, check_instance, relation_report, sweep_identity1,
    sweep_identity2, IdentityInstance, IdentityKind, IdentityOutcome, IdentitySweepReport,
};
use jacverify::involution::{pairs, verify_involution, InvolutionContext, InvolutionReport, Variant};
use jacverify::inverse::{coefficient_c, inverse_series, verify_inverse};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Command, Dims, InstanceArgs};
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl Status {
    fn from_pass(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Info => "info",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Fail => 1,
            _ => 0,
        }
    }
}

/// Result of one subcommand in both output forms.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub json: Value,
    pub text: String,
}

/// Side files requested by a subcommand, written after the main report.
pub type SideFiles = Vec<(std::path::PathBuf, Value)>;

fn envelope(command: &str, status: Status, checked: usize, failures: usize, report: impl Serialize) -> Result<Value, CliError> {
    Ok(json!({
        "command": command,
        "status": status.label(),
        "checked": checked,
        "failures": failures,
        "report": serde_json::to_value(report)?,
    }))
}

fn headline(status: Status, command: &str, detail: &str) -> String {
    format!("{} {command}: {detail}\n", status.label().to_uppercase())
}

pub fn parse_list<T: std::str::FromStr>(what: &str, text: &str) -> Result<Vec<T>, CliError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|p| p.trim().parse::<T>().map_err(|_| CliError::Usage(format!("bad {what} '{text}'"))))
        .collect()
}

fn composition(what: &str, text: &str) -> Result<Composition, CliError> {
    Ok(Composition::new(parse_list(what, text)?))
}

fn required<T: Clone>(value: &Option<T>, flag: &str) -> Result<T, CliError> {
    value.clone().ok_or_else(|| CliError::Usage(format!("--{flag} is required without --all")))
}

fn spec(dims: &Dims) -> Result<DLinearSpec, CliError> {
    Ok(DLinearSpec::new(dims.d, dims.n)?)
}

pub fn run(command: &Command, seed: u64) -> Result<(Outcome, SideFiles), CliError> {
    let mut side = SideFiles::new();
    let outcome = match command {
        Command::Gens { dims } => gens(dims)?,
        Command::CrossCheck { dims } => {
            let r = cross_check_generators(spec(dims)?)?;
            let status = Status::from_pass(r.passed());
            let mut text = headline(status, "cross-check", &format!("{} keys, {} mismatches", r.keys_checked, r.mismatches.len()));
            for m in &r.mismatches {
                text += &format!("  J_({},{}): determinant {} vs formula {}\n", m.key.k, m.key.alpha, m.from_determinant, m.from_formula);
            }
            let json = envelope("cross-check", status, r.keys_checked, r.mismatches.len(), &r)?;
            Outcome { status, json, text }
        }
        Command::Z { dims, u0, uk, nu, k } => {
            let labeling = match (nu.trim().is_empty(), k) {
                (true, Some(k)) => LevelLabeling::empty(*k),
                _ => LevelLabeling::parse(nu)?,
            };
            let fl = FernLabeling::new(dims.d, dims.n, *u0, *uk, labeling.clone());
            let z = z_fern(&fl)?;
            let json = json!({"d": dims.d, "n": dims.n, "u0": u0, "uk": uk, "nu": labeling.to_string(), "poly": z.to_string()});
            Outcome { status: Status::Info, json, text: format!("{z}\n") }
        }
        Command::Identity1 { dims, inst } => identity(dims, inst, None, IdentityKind::Identity1)?,
        Command::Identity2 { dims, inst, beta } => identity(dims, inst, beta.as_deref(), IdentityKind::Identity2)?,
        Command::Relation { d, alpha1, alpha2, u, all } => relation(*d, alpha1, alpha2, *u, *all)?,
        Command::Involution { dims, inst, variant, beta, dump } => {
            let variant = if *variant == 1 { Variant::Tau1 } else { Variant::Tau2 };
            let (outcome, dump_value) = involution(dims, inst, variant, beta.as_deref(), dump.is_some())?;
            if let (Some(path), Some(v)) = (dump, dump_value) {
                side.push((path.clone(), v));
            }
            outcome
        }
        Command::Inverse { dims, nmax, coeff } => inverse(dims, *nmax, coeff.as_deref())?,
        Command::Member { dims, poly } => {
            let s = spec(dims)?;
            let gens = extract_generators(s)?;
            let p = parse_polynomial(poly, s.n)?;
            let cert = membership(&gens, &p)?;
            let status = Status::from_pass(cert.is_member() && cert.verify(&gens));
            let mut text = String::from(if cert.is_member() { "member\n" } else { "non-member\n" });
            for (key, c) in &cert.combination {
                text += &format!("  ({c}) * J_({},{})\n", key.k, key.alpha);
            }
            text += &format!("residual: {}\n", cert.residual);
            Outcome { status, json: serde_json::to_value(cert.to_json())?, text }
        }
        Command::Echelon { dims, degree } => {
            let gens = extract_generators(spec(dims)?)?;
            let solver = MembershipSolver::new(&gens, *degree);
            let rows: Vec<String> = solver.echelon_rows().iter().map(|r| r.to_string()).collect();
            let mut text = format!(
                "degree {degree}: rank {} of {} rows x {} columns\n",
                solver.rank(),
                solver.row_count(),
                solver.column_count()
            );
            for r in &rows {
                text += &format!("  {r}\n");
            }
            let json = json!({
                "d": dims.d,
                "n": dims.n,
                "degree": degree,
                "rows": solver.row_count(),
                "columns": solver.column_count(),
                "rank": solver.rank(),
                "echelon": rows,
            });
            Outcome { status: Status::Info, json, text }
        }
        Command::FernLemmas { d } => {
            let r = verify_fern_lemmas(*d)?;
            let status = Status::from_pass(r.passed());
            let mut text = headline(
                status,
                "fern-lemmas",
                &format!("d={} cases {}, failures {}, rank {} of {} rows x {} columns", r.d, r.cases.len(), r.failures, r.rank, r.rows, r.columns),
            );
            for c in &r.cases {
                let verdict = if c.certificate.member && c.certificate_valid { "member" } else { "NOT CERTIFIED" };
                text += &format!("  (u0,u2)=({},{}) nu={}: {verdict}\n", c.u0, c.u2, c.nu);
            }
            let json = envelope("fern-lemmas", status, r.cases.len(), r.failures, &r)?;
            Outcome { status, json, text }
        }
        Command::VerifyTheorem { d, big_n } => {
            let r = verify_main_theorem(*d, big_n)?;
            let status = Status::from_pass(r.passed());
            let mut text = headline(
                status,
                "verify-theorem",
                &format!("d={} checked {}, exceptional {}, failures {}", r.d, r.checked, r.exceptional, r.failures),
            );
            for e in &r.entries {
                let verdict = match (e.certificate.member, e.exceptional) {
                    (true, _) => "member",
                    (false, true) => "non-member (exceptional)",
                    (false, false) => "NON-MEMBER",
                };
                text += &format!("  i={} alpha={} N={}: {verdict}\n", e.i, e.alpha, e.t_degree);
            }
            let json = envelope("verify-theorem", status, r.checked, r.failures, &r)?;
            Outcome { status, json, text }
        }
        Command::CayleyHamilton { n, trials } => {
            let r = cayley_hamilton_numeric(*n, *trials, seed)?;
            let status = Status::from_pass(r.passed());
            let failures = r.symbolic_failures + r.direct_failures;
            let text = headline(status, "cayley-hamilton", &format!("n={} trials {}, seed {}, failures {failures}", r.n, r.trials, r.seed));
            let json = envelope("cayley-hamilton", status, r.trials, failures, &r)?;
            Outcome { status, json, text }
        }
    };
    Ok((outcome, side))
}

fn gens(dims: &Dims) -> Result<Outcome, CliError> {
    let gens = extract_generators(spec(dims)?)?;
    let mut entries = Vec::new();
    let mut text = String::new();
    for (key, p) in gens.nonunit() {
        entries.push(json!({"k": key.k, "alpha": key.alpha, "poly": p.to_string()}));
        text += &format!("J_({},{}) = {p}\n", key.k, key.alpha);
    }
    let json = json!({"d": dims.d, "n": dims.n, "generators": entries});
    Ok(Outcome { status: Status::Info, json, text })
}

fn outcome_line(o: &IdentityOutcome) -> String {
    let beta = o.instance.beta.as_ref().map(|b| format!(" beta={}", join(b))).unwrap_or_default();
    format!(
        "  alpha={} u0={} un={}{beta}: {}\n",
        o.instance.alpha,
        o.instance.u0,
        o.instance.un,
        if o.zero { "0".to_string() } else { o.lhs.clone() }
    )
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn identity(dims: &Dims, inst: &InstanceArgs, beta: Option<&str>, kind: IdentityKind) -> Result<Outcome, CliError> {
    let name = match kind {
        IdentityKind::Identity1 => "identity1",
        IdentityKind::Identity2 => "identity2",
    };
    let report: IdentitySweepReport = if inst.all {
        if beta.is_some() || inst.alpha.is_some() {
            return Err(CliError::Usage("--all sweeps every instance; drop --alpha/--beta".into()));
        }
        match kind {
            IdentityKind::Identity1 => sweep_identity1(dims.d, dims.n)?,
            IdentityKind::Identity2 => sweep_identity2(dims.d, dims.n)?,
        }
    } else {
        let alpha = composition("alpha", &required(&inst.alpha, "alpha")?)?;
        let (u0, un) = (required(&inst.u0, "u0")?, required(&inst.un, "un")?);
        let instance = match kind {
            IdentityKind::Identity1 => IdentityInstance::identity1(dims.d, dims.n, alpha, u0, un),
            IdentityKind::Identity2 => {
                let beta = parse_list("beta", beta.ok_or_else(|| CliError::Usage("--beta is required".into()))?)?;
                IdentityInstance::identity2(dims.d, dims.n, alpha, u0, un, beta)
            }
        };
        let gens = extract_generators(spec(dims)?)?;
        let outcome = check_instance(&instance, &gens)?;
        IdentitySweepReport {
            d: dims.d,
            n: dims.n,
            kind,
            checked: 1,
            failures: usize::from(!outcome.zero),
            outcomes: vec![outcome],
        }
    };
    let status = Status::from_pass(report.passed());
    let mut text = headline(status, name, &format!("d={} n={} checked {}, failures {}", report.d, report.n, report.checked, report.failures));
    for o in &report.outcomes {
        if !inst.all || !o.zero {
            text += &outcome_line(o);
        }
    }
    let json = envelope(name, status, report.checked, report.failures, &report)?;
    Ok(Outcome { status, json, text })
}

fn relation(d: u32, alpha1: &Option<String>, alpha2: &Option<String>, u: Option<usize>, all: bool) -> Result<Outcome, CliError> {
    let gens = extract_generators(DLinearSpec::new(d, 2)?)?;
    let report = if all {
        relation_report(&gens, None)?
    } else {
        let a1 = composition("alpha1", &required(alpha1, "alpha1")?)?;
        let a2 = composition("alpha2", &required(alpha2, "alpha2")?)?;
        let u = required(&u, "u")?;
        relation_report(&gens, Some((&a1, &a2, u)))?
    };
    // a triple holds if some v vanishes under the literal or the reoriented reading
    let unsatisfied = report
        .entries
        .chunks(2)
        .filter(|pair| !pair.iter().any(|e| e.zero || e.reoriented_zero))
        .count();
    let status = Status::from_pass(report.complete() && unsatisfied == 0);
    let mut text = headline(
        status,
        "relation",
        &format!(
            "d={d} triples {}, unsatisfied {unsatisfied}, v zero across grid {:?}, reoriented {:?}",
            report.triples, report.v_zero_across_grid, report.reoriented_v_zero_across_grid
        ),
    );
    for e in &report.entries {
        let show = |zero: bool, diff: &str| if zero { "0".to_string() } else { diff.to_string() };
        text += &format!(
            "  alpha1={} alpha2={} u={} v={}: {} | reoriented: {}\n",
            e.alpha1,
            e.alpha2,
            e.u,
            e.v,
            show(e.zero, &e.difference),
            show(e.reoriented_zero, &e.reoriented_difference)
        );
    }
    let json = envelope("relation", status, report.triples, unsatisfied, &report)?;
    Ok(Outcome { status, json, text })
}

fn involution(
    dims: &Dims,
    inst: &InstanceArgs,
    variant: Variant,
    beta: Option<&str>,
    want_dump: bool,
) -> Result<(Outcome, Option<Value>), CliError> {
    let beta: Option<Vec<usize>> = beta.map(|b| parse_list("beta", b)).transpose()?;
    let mut reports: Vec<InvolutionReport> = Vec::new();
    let mut dump = None;
    if inst.all {
        if beta.is_some() || want_dump || inst.alpha.is_some() {
            return Err(CliError::Usage("--all cannot be combined with --alpha, --beta or --dump".into()));
        }
        let n = dims.n;
        for alpha in enumerate_compositions(n as u32 * (dims.d - 1), n) {
            for u0 in 1..=n {
                for un in 1..=n {
                    let ctx = InvolutionContext::new(dims.d, n, alpha.clone(), u0, un)?;
                    reports.push(verify_involution(&ctx, variant, None)?);
                }
            }
        }
        if variant == Variant::Tau2 {
            for i2 in all_identity2_instances(dims.d, n) {
                let ctx = InvolutionContext::new(dims.d, n, i2.alpha.clone(), i2.u0, i2.un)?;
                reports.push(verify_involution(&ctx, variant, i2.beta.as_deref())?);
            }
        }
    } else {
        let alpha = composition("alpha", &required(&inst.alpha, "alpha")?)?;
        let ctx = InvolutionContext::new(dims.d, dims.n, alpha, required(&inst.u0, "u0")?, required(&inst.un, "un")?)?;
        reports.push(verify_involution(&ctx, variant, beta.as_deref())?);
        if want_dump {
            dump = Some(serde_json::to_value(pairs(&ctx, variant, beta.as_deref())?)?);
        }
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    let states: usize = reports.iter().map(|r| r.states).sum();
    let status = Status::from_pass(failed == 0);
    let name = match variant {
        Variant::Tau1 => "I1",
        Variant::Tau2 => "I2",
    };
    let mut text = headline(
        status,
        "involution",
        &format!("{name} d={} n={} sets {}, states {states}, failing sets {failed}", dims.d, dims.n, reports.len()),
    );
    for r in &reports {
        if inst.all && r.passed() {
            continue;
        }
        let beta = r.beta.as_ref().map(|b| format!(" beta={}", join(b))).unwrap_or_default();
        text += &format!(
            "  alpha={} u0={} un={}{beta}: states {} (domain {}, image {}), counterexamples {}, signed sum {}\n",
            r.context.alpha,
            r.context.u0,
            r.context.un,
            r.states,
            r.domain_side,
            r.image_side,
            r.failures.len(),
            r.signed_sum
        );
        for c in &r.failures {
            text += &format!("    {}: {}\n", c.reason, c.state);
        }
    }
    let json = envelope("involution", status, reports.len(), failed, &reports)?;
    Ok((Outcome { status, json, text }, dump))
}

fn inverse(dims: &Dims, nmax: u32, coeff: Option<&str>) -> Result<Outcome, CliError> {
    let s = spec(dims)?;
    if let Some(c) = coeff {
        let parts: Vec<u32> = parse_list("coeff", c)?;
        if parts.len() != s.n + 2 {
            return Err(CliError::Usage(format!("--coeff needs i, {} alpha parts and N", s.n)));
        }
        let (i, big_n) = (parts[0] as usize, parts[s.n + 1]);
        if big_n > nmax {
            return Err(CliError::Usage(format!("N={big_n} exceeds --Nmax {nmax}")));
        }
        let alpha = Composition::new(parts[1..=s.n].to_vec());
        let value = coefficient_c(s, i, &alpha, big_n)?;
        let json = json!({"d": s.d, "n": s.n, "i": i, "alpha": alpha, "N": big_n, "coeff": value.to_string()});
        return Ok(Outcome { status: Status::Info, json, text: format!("{value}\n") });
    }
    let series = inverse_series(s, nmax);
    let report = verify_inverse(s, nmax)?;
    let status = Status::from_pass(report.passed());
    let mut text = headline(
        status,
        "inverse",
        &format!("d={} n={} Nmax={nmax} f(g) {} g(f) {}", s.d, s.n, ok(report.f_of_g_ok), ok(report.g_of_f_ok)),
    );
    for (i, g) in series.components.iter().enumerate() {
        text += &format!("g_{} = {g}\n", i + 1);
    }
    let json = json!({
        "command": "inverse",
        "status": status.label(),
        "d": s.d,
        "n": s.n,
        "Nmax": nmax,
        "components": series.components.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        "report": serde_json::to_value(&report)?,
    });
    Ok(Outcome { status, json, text })
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

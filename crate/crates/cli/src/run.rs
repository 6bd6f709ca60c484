use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use chevcalc::calculus::{
    audit_csv, lemma3, lemma5, lemma7, lemma9, length_audit, theorem2_verify, Calculus, CalculusError, Lemma,
};
use chevcalc::chevalley::{steinberg_suite, symbolic_commutator_checks, ChevalleyError, Coverage, Representation};
use chevcalc::par::Exec;
use chevcalc::ring::{parse_ring, Elem, FiniteRing, Ideal, RingError, RingSpec};
use chevcalc::roots::{RootData, RootError, RootId};
use chevcalc::subgroups::{
    ambient_table, commutator_width, enumerate_elementary, normality_decompose, random_element, verify_theorem_3c,
    verify_theorem_4c, verify_theorem_8c, width_csv, GroupDescriptor, NormalityContext, SubgroupError,
    SubgroupLevel, DEFAULT_ORDER_CAP, DEFAULT_PAIR_CAP,
};

use crate::config::{Command, ExperimentConfig, RepChoice};
use crate::CliError;

/// Random group elements in the normality check are products of this many
/// root unipotents.
const NORMALITY_STEPS: usize = 12;

/// Result of one command before it is wrapped into a report.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub payload: Value,
    /// False when a verification inside the command failed.
    pub verified: bool,
    /// Native CSV rendering, for commands that have one.
    pub csv: Option<String>,
}

impl Outcome {
    fn new(payload: Value, verified: bool) -> Self {
        Outcome { payload, verified, csv: None }
    }
}

impl From<SubgroupError> for CliError {
    fn from(e: SubgroupError) -> Self {
        match e {
            SubgroupError::OrderCapExceeded { .. } => CliError::CapExceeded(e.to_string()),
            SubgroupError::NotASubgroup(_) => CliError::Failure(e.to_string()),
            SubgroupError::Chevalley(c) => c.into(),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<CalculusError> for CliError {
    fn from(e: CalculusError) -> Self {
        match e {
            CalculusError::Root(r) => r.into(),
            CalculusError::Ring(r) => r.into(),
            CalculusError::Chevalley(c) => c.into(),
            other => CliError::Failure(other.to_string()),
        }
    }
}

impl From<ChevalleyError> for CliError {
    fn from(e: ChevalleyError) -> Self {
        match e {
            ChevalleyError::UnsupportedRepresentation(_) | ChevalleyError::Parse(_) => CliError::Config(e.to_string()),
            other => CliError::Failure(other.to_string()),
        }
    }
}

impl From<RingError> for CliError {
    fn from(e: RingError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<RootError> for CliError {
    fn from(e: RootError) -> Self {
        CliError::Config(e.to_string())
    }
}

fn exec(cfg: &ExperimentConfig) -> Exec {
    if cfg.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    }
}

fn cap(cfg: &ExperimentConfig) -> usize {
    cfg.cap.unwrap_or(DEFAULT_ORDER_CAP)
}

fn finite_ring(cfg: &ExperimentConfig) -> Result<Arc<FiniteRing>, CliError> {
    let text = cfg
        .ring
        .as_deref()
        .ok_or_else(|| CliError::Config(format!("{} needs --ring", cfg.command.name())))?;
    match parse_ring(text)? {
        RingSpec::Finite(r) => Ok(r),
        RingSpec::Poly(_) => Err(CliError::Config(format!("{} needs a finite ring, got `{text}`", cfg.command.name()))),
    }
}

fn representation(cfg: &ExperimentConfig) -> Result<Arc<Representation>, CliError> {
    let data = RootData::parse(&cfg.system)?;
    let rep = match cfg.representation {
        RepChoice::Default => Representation::default_for(data)?,
        RepChoice::Natural => Representation::natural(data)?,
        RepChoice::Adjoint => Representation::adjoint(data)?,
    };
    Ok(Arc::new(rep))
}

fn descriptor(cfg: &ExperimentConfig) -> Result<GroupDescriptor, CliError> {
    Ok(GroupDescriptor::new(representation(cfg)?, finite_ring(cfg)?)?)
}

fn ideals(cfg: &ExperimentConfig, ring: &Arc<FiniteRing>) -> Result<Vec<Ideal>, CliError> {
    Ok(cfg
        .ideals
        .iter()
        .map(|g| Ideal::parse(ring.clone(), g))
        .collect::<Result<_, _>>()?)
}

fn two_ideals(cfg: &ExperimentConfig, ring: &Arc<FiniteRing>) -> Result<(Ideal, Ideal), CliError> {
    let mut list = ideals(cfg, ring)?;
    if list.len() != 2 {
        return Err(CliError::Config(format!("{} needs exactly two --ideal flags", cfg.command.name())));
    }
    let b = list.pop().expect("two ideals");
    let a = list.pop().expect("two ideals");
    Ok((a, b))
}

fn element(cfg: &ExperimentConfig, ring: &FiniteRing) -> Result<Elem, CliError> {
    let s = cfg
        .s
        .as_deref()
        .ok_or_else(|| CliError::Config(format!("{} needs --s", cfg.command.name())))?;
    Ok(ring.parse_elem(s)?)
}

fn root_pair(cfg: &ExperimentConfig, calc: &Calculus) -> Result<(RootId, RootId), CliError> {
    let phi = &calc.data().phi;
    let alpha = match &cfg.alpha {
        Some(t) => phi.parse_root(t)?,
        None => phi.simple(0),
    };
    let beta = match &cfg.beta {
        Some(t) => phi.parse_root(t)?,
        None => phi.simple(1),
    };
    Ok((alpha, beta))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialise")
}

/// Dispatches one configuration to the library.
pub fn execute(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    match cfg.command {
        Command::Roots => roots(cfg),
        Command::Constants => constants(cfg),
        Command::Steinberg => steinberg(cfg),
        Command::Conjcalc => conjcalc(cfg),
        Command::Commcalc => commcalc(cfg),
        Command::Relcalc => relcalc(cfg),
        Command::Audit => audit(cfg),
        Command::Verify3c | Command::Verify4c => verify_ideal_pair(cfg),
        Command::Width => width(cfg),
        Command::Normality => normality(cfg),
        Command::Thm2 => thm2(cfg),
        Command::Thm8 => thm8(cfg),
    }
}

fn roots(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let data = RootData::parse(&cfg.system)?;
    let phi = &data.phi;
    let list: Vec<Value> = phi
        .ids()
        .map(|id| {
            let r = phi.root(id);
            json!({
                "index": id.index(),
                "coords": r.coords,
                "length": r.length,
                "height": phi.height(id),
                "norm": phi.norm(id),
            })
        })
        .collect();
    Ok(Outcome::new(
        json!({
            "system": phi.name(),
            "rank": phi.rank(),
            "cartan_matrix": phi.cartan_matrix(),
            "i_phi": phi.i_phi(),
            "count": phi.len(),
            "positive": phi.num_positive(),
            "roots": list,
        }),
        true,
    ))
}

fn constants(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let data = RootData::parse(&cfg.system)?;
    let phi = &data.phi;
    let mut pairs = Vec::new();
    for a in phi.ids() {
        for b in phi.ids() {
            if a == b || a == phi.neg(b) {
                continue;
            }
            let terms: Vec<Value> = data
                .consts
                .commutator(a, b)
                .iter()
                .map(|t| json!({"i": t.i, "j": t.j, "root": phi.format_root(t.root), "coeff": t.coeff}))
                .collect();
            pairs.push(json!({
                "alpha": phi.format_root(a),
                "beta": phi.format_root(b),
                "n": data.consts.n(a, b),
                "terms": terms,
            }));
        }
    }
    Ok(Outcome::new(json!({"system": phi.name(), "max_i": data.consts.max_i(), "pairs": pairs}), true))
}

fn steinberg(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let rep = representation(cfg)?;
    let ring = finite_ring(cfg)?;
    let coverage = match cfg.samples {
        Some(per_relation) => Coverage::Sampled { per_relation, seed: cfg.seed },
        None => Coverage::Exhaustive,
    };
    let report = steinberg_suite(&rep, &ring, coverage, exec(cfg));
    let mut csv = String::from("relation,instance,pass\n");
    for i in &report.instances {
        csv.push_str(&format!("{},\"{}\",{}\n", i.relation, i.instance, i.pass));
    }
    let failing: Vec<&_> = report.instances.iter().filter(|i| !i.pass).collect();
    let payload = json!({
        "representation": report.representation,
        "ring": report.ring,
        "coverage": report.coverage,
        "total": report.total,
        "failures": report.failures,
        "failing_instances": to_value(&failing),
    });
    Ok(Outcome { payload, verified: report.failures == 0, csv: Some(csv) })
}

fn conjcalc(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let calc = Calculus::new(&cfg.system)?;
    let (alpha, beta) = root_pair(cfg, &calc)?;
    let cert = lemma3(&calc, alpha, beta, cfg.h.unwrap_or(0), cfg.p.unwrap_or(0), cfg.q.unwrap_or(0))?;
    let ok = cert.oracle_checked && cert.within_bound();
    Ok(Outcome::new(to_value(&cert), ok))
}

fn commcalc(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let calc = Calculus::new(&cfg.system)?;
    if cfg.alpha.is_none() && cfg.beta.is_none() {
        let checks = symbolic_commutator_checks(calc.representation(), exec(cfg));
        let failures = checks.iter().filter(|c| !c.pass).count();
        let mut lengths: BTreeMap<usize, usize> = BTreeMap::new();
        for c in &checks {
            *lengths.entry(c.length).or_insert(0) += 1;
        }
        let payload = json!({
            "system": calc.system(),
            "pairs": checks.len(),
            "failures": failures,
            "length_counts": lengths,
            "checks": to_value(&checks),
        });
        return Ok(Outcome::new(payload, failures == 0));
    }
    let (alpha, beta) = root_pair(cfg, &calc)?;
    let cert = lemma5(
        &calc,
        alpha,
        beta,
        cfg.k.unwrap_or(0),
        cfg.m.unwrap_or(0),
        cfg.p.unwrap_or(0),
        cfg.q.unwrap_or(0),
    )?;
    let ok = cert.oracle_checked && cert.within_bound();
    Ok(Outcome::new(to_value(&cert), ok))
}

fn relcalc(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let calc = Calculus::new(&cfg.system)?;
    let (alpha, beta) = root_pair(cfg, &calc)?;
    let markers: Vec<&str> = cfg.ideals.iter().filter_map(|g| g.first().map(String::as_str)).collect();
    let (k, p, q) = (cfg.k.unwrap_or(0), cfg.p.unwrap_or(0), cfg.q.unwrap_or(0));
    let cert = match markers.as_slice() {
        [] => lemma7(&calc, alpha, beta, k, p, q, "A")?,
        [a] => lemma7(&calc, alpha, beta, k, p, q, a)?,
        [a, b] => lemma9(&calc, alpha, beta, k, cfg.m.unwrap_or(0), p, q, (a, b))?,
        _ => return Err(CliError::Config("relcalc takes at most two ideal markers".into())),
    };
    let ok = cert.oracle_checked;
    Ok(Outcome::new(to_value(&cert), ok))
}

fn audit(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let calc = Calculus::new(&cfg.system)?;
    if let Some(text) = &cfg.ring {
        match parse_ring(text)? {
            RingSpec::Poly(_) => {}
            RingSpec::Finite(_) => {
                return Err(CliError::Config("the audit runs over the localised polynomial ring".into()));
            }
        }
    }
    let grid: Vec<u32> = (0..=cfg.grid.unwrap_or(2)).collect();
    let rows = length_audit(&calc, &[Lemma::L3, Lemma::L4, Lemma::L5, Lemma::L6], &grid, exec(cfg))?;
    let ok = rows.iter().all(|r| r.oracle_failures == 0 && (r.empirical as u64) < r.paper_bound);
    let payload = json!({"system": calc.system(), "grid": grid, "rows": to_value(&rows)});
    Ok(Outcome { payload, verified: ok, csv: Some(audit_csv(&rows)) })
}

fn verify_ideal_pair(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let desc = descriptor(cfg)?;
    let (a, b) = two_ideals(cfg, desc.ring())?;
    let report = if cfg.command == Command::Verify3c {
        verify_theorem_3c(&desc, &a, &b, cap(cfg), exec(cfg))?
    } else {
        verify_theorem_4c(&desc, &a, &b, cap(cfg))?
    };
    Ok(Outcome::new(to_value(&report), report.passed()))
}

fn width(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let desc = descriptor(cfg)?;
    let levels = ideals(cfg, desc.ring())?;
    if levels.len() > 2 {
        return Err(CliError::Config("width takes at most two ideals".into()));
    }
    let ambient = ambient_table(&desc, cap(cfg), exec(cfg))?;
    let sub = |i: usize| match levels.get(i) {
        Some(ideal) => enumerate_elementary(&desc, &SubgroupLevel::Relative(ideal.clone()), cap(cfg), exec(cfg)),
        None => Ok(ambient.clone()),
    };
    let (x, y) = (sub(0)?, sub(1)?);
    let report = commutator_width(&ambient, &x, &y, cfg.pair_cap.unwrap_or(DEFAULT_PAIR_CAP), cfg.seed, exec(cfg))?;
    let csv = width_csv(&report);
    Ok(Outcome { payload: to_value(&report), verified: true, csv: Some(csv) })
}

fn normality(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let desc = descriptor(cfg)?;
    let ctx = NormalityContext::new(&desc, cap(cfg), exec(cfg))?;
    let roots: Vec<RootId> = desc.system().ids().collect();
    let ring = desc.ring().clone();
    let samples = cfg.samples.unwrap_or(100);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut failures = 0;
    let mut partitions_ok = true;
    let mut lengths: BTreeMap<usize, usize> = BTreeMap::new();
    let mut example = None;
    for _ in 0..samples {
        let g = random_element(&desc, rng.gen(), NORMALITY_STEPS);
        let alpha = roots[rng.gen_range(0..roots.len())];
        let xi = Elem(rng.gen_range(1..ring.size()) as u16);
        let dec = normality_decompose(&ctx, &g, alpha, xi)?;
        failures += usize::from(!dec.oracle_checked);
        partitions_ok &= dec.partition_sums_to_one;
        *lengths.entry(dec.word.len()).or_insert(0) += 1;
        if example.is_none() {
            example = Some(json!({
                "alpha": desc.system().format_root(alpha),
                "xi": ring.label(xi),
                "provenance": dec.provenance_text(),
                "decomposition": to_value(&dec),
            }));
        }
    }
    let payload = json!({
        "group": desc.label(),
        "charts": to_value(&ctx.charts()),
        "samples": samples,
        "failures": failures,
        "partitions_sum_to_one": partitions_ok,
        "word_lengths": lengths,
        "example": example,
    });
    Ok(Outcome::new(payload, failures == 0 && partitions_ok))
}

fn thm2(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let ring = finite_ring(cfg)?;
    let s = element(cfg, &ring)?;
    let report = theorem2_verify(
        &cfg.system,
        &ring,
        s,
        cfg.p.unwrap_or(1),
        cfg.k.unwrap_or(1),
        cfg.r.unwrap_or(2),
        cap(cfg),
        exec(cfg),
    )?;
    Ok(Outcome::new(to_value(&report), report.holds()))
}

fn thm8(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let desc = descriptor(cfg)?;
    let s = element(cfg, desc.ring())?;
    let report = verify_theorem_8c(&desc, s, cap(cfg), exec(cfg))?;
    Ok(Outcome::new(to_value(&report), report.passed()))
}

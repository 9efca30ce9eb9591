//! Verification suites and the versioned report they produce.

use crate::characters::{
    adams_psi, character_total, det_map, gamma_hom, h_map, hom1_test, iota_p, lift_cyclic_unit, tr_map, CharacterTable, OrbitRecord,
};
use crate::class_space::ClassSplitting;
use crate::coleman::{eigen_residual, norm_series, project_series, TruncSeries};
use crate::error::{Error, Result};
use crate::group_ring::{GroupRingElem, TermRecord};
use crate::groups::{FiniteGroup, GroupKind, GroupTable, MAX_TABLE_ORDER};
use crate::k1::{adams_tilde, eigenspace_compare, exp_class, project_to_eigenspace, K1Class, NormContext};
use crate::padic::{is_odd_prime, Modulus};
use crate::unipotent::{
    central_series_checks, commutator_pairing, delta_gamma, family_rank, kernel_generators, relation_failures, wedge_identity_check,
    GradedTensor,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    ExpLog,
    Gamma,
    Norm,
    Eigenspace,
    Coleman,
    Hom,
    Sk1,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::ExpLog => "exp-log",
            Suite::Gamma => "gamma",
            Suite::Norm => "norm",
            Suite::Eigenspace => "eigenspace",
            Suite::Coleman => "coleman",
            Suite::Hom => "hom",
            Suite::Sk1 => "sk1",
        }
    }

    fn needs_group_ring(self) -> bool {
        matches!(self, Suite::Gamma | Suite::Norm | Suite::Eigenspace | Suite::Hom)
    }

    /// Whether the suite has anything to check on this carrier.
    pub fn applies_to(self, g: &FiniteGroup) -> bool {
        match self {
            Suite::Hom => g.is_abelian(),
            Suite::Sk1 => matches!(g.kind(), GroupKind::Unitriangular { .. }),
            _ => true,
        }
    }

    /// Every suite that applies to the carrier, in canonical order.
    pub fn applicable(g: &FiniteGroup) -> Vec<Suite> {
        use clap::ValueEnum;
        Suite::value_variants().iter().copied().filter(|s| s.applies_to(g)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub carrier: String,
    pub prime: u64,
    pub precision: u32,
    pub degree: usize,
    pub max_level: u32,
    pub suites: Vec<Suite>,
    pub seed: u64,
    pub samples: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            carrier: "C(3,2)".into(),
            prime: 3,
            precision: 4,
            degree: 30,
            max_level: 2,
            suites: vec![],
            seed: 0,
            samples: 20,
        }
    }
}

fn config_error(location: &str, message: impl Into<String>) -> Error {
    Error::Config { location: location.into(), message: message.into() }
}

impl RunConfig {
    /// Checks the configuration and returns the parsed carrier.
    pub fn validate(&self) -> Result<FiniteGroup> {
        if !is_odd_prime(self.prime) {
            return Err(config_error("--prime", format!("{} is not an odd prime", self.prime)));
        }
        if self.precision < 2 {
            return Err(config_error("--precision", "precision must be at least 2"));
        }
        if Modulus::new(self.prime, self.precision + 4).is_err() {
            return Err(config_error("--precision", format!("p^{} exceeds the residue budget", self.precision + 4)));
        }
        let g = FiniteGroup::parse(&self.carrier).map_err(|e| config_error("--carrier", e.to_string()))?;
        if g.prime() != self.prime {
            return Err(config_error("--carrier", format!("carrier prime {} differs from --prime {}", g.prime(), self.prime)));
        }
        if self.suites.iter().any(|s| s.needs_group_ring()) && g.order() as usize > MAX_TABLE_ORDER {
            return Err(config_error("--carrier", format!("order {} exceeds the group-ring limit {MAX_TABLE_ORDER}", g.order())));
        }
        if self.suites.contains(&Suite::Coleman) {
            let p = self.prime as usize;
            if self.degree < p {
                return Err(config_error("--degree", format!("degree {} is below p", self.degree)));
            }
            if self.max_level > 0 {
                let needed = self.precision as usize * p.pow(self.max_level - 1) * (p - 1);
                if self.degree < needed {
                    return Err(config_error("--max-level", format!("level {} needs degree {needed}", self.max_level)));
                }
            }
        }
        if self.samples == 0 {
            return Err(config_error("--samples", "at least one sample is needed"));
        }
        Ok(g)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    pub name: String,
    pub anchor: String,
    pub status: Status,
    /// worst p-adic valuation of the residual over all samples
    pub residual_valuation: Option<u32>,
    pub required_valuation: Option<u32>,
    pub samples: usize,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelValue {
    pub level: u32,
    pub value: Vec<u64>,
    /// valuation of `Norm(F(ε_level − 1)) − F(ε_{level−1} − 1)`
    pub tower_residual: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColemanRow {
    pub series: String,
    pub coefficients: Vec<u64>,
    pub eigen_residual: u32,
    pub levels: Vec<LevelValue>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetRow {
    pub unit: Vec<TermRecord>,
    pub det: Vec<OrbitRecord>,
    pub h: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub config: RunConfig,
    pub records: Vec<CheckRecord>,
    pub coleman_table: Vec<ColemanRow>,
    pub det_table: Vec<DetRow>,
    pub summary: Summary,
}

impl Report {
    fn assemble(config: &RunConfig, records: Vec<CheckRecord>, coleman_table: Vec<ColemanRow>, det_table: Vec<DetRow>) -> Self {
        let mut summary = Summary { total: records.len(), ..Default::default() };
        for r in &records {
            match r.status {
                Status::Pass => summary.passed += 1,
                Status::Fail => summary.failed += 1,
                Status::Error => summary.errors += 1,
            }
        }
        Report { schema_version: SCHEMA_VERSION, config: config.clone(), records, coleman_table, det_table, summary }
    }

    pub fn success(&self) -> bool {
        self.summary.failed == 0 && self.summary.errors == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    /// One row per check record.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(vec![]);
        w.write_record(["suite", "name", "anchor", "status", "residual_valuation", "required_valuation", "samples", "witness"]).unwrap();
        for r in &self.records {
            let status = match r.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::Error => "error",
            };
            let opt = |v: Option<u32>| v.map(|x| x.to_string()).unwrap_or_default();
            w.write_record([
                r.suite.as_str(),
                r.name.as_str(),
                r.anchor.as_str(),
                status,
                &opt(r.residual_valuation),
                &opt(r.required_valuation),
                &r.samples.to_string(),
                r.witness.as_deref().unwrap_or(""),
            ])
            .unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }
}

/// Accumulates samples for one check.
struct Check {
    suite: &'static str,
    name: &'static str,
    anchor: &'static str,
    required: Option<u32>,
    worst: Option<u32>,
    ok: bool,
    samples: usize,
    witness: Option<String>,
    error: Option<String>,
}

impl Check {
    fn new(suite: Suite, name: &'static str, anchor: &'static str, required: Option<u32>) -> Self {
        Check { suite: suite.name(), name, anchor, required, worst: None, ok: true, samples: 0, witness: None, error: None }
    }

    /// A residual valuation; the sample passes when it meets the requirement.
    fn residual(&mut self, v: u32, witness: impl FnOnce() -> String) {
        self.samples += 1;
        self.worst = Some(self.worst.map_or(v, |w| w.min(v)));
        if self.required.is_some_and(|r| v < r) && self.ok {
            self.ok = false;
            self.witness = Some(witness());
        }
    }

    fn truth(&mut self, holds: bool, witness: impl FnOnce() -> String) {
        self.samples += 1;
        if !holds && self.ok {
            self.ok = false;
            self.witness = Some(witness());
        }
    }

    fn run(&mut self, body: impl FnOnce(&mut Self) -> Result<()>) {
        if let Err(e) = body(self) {
            self.error = Some(e.to_string());
        }
    }

    fn finish(self) -> CheckRecord {
        let status = if self.error.is_some() {
            Status::Error
        } else if self.ok {
            Status::Pass
        } else {
            Status::Fail
        };
        CheckRecord {
            suite: self.suite.into(),
            name: self.name.into(),
            anchor: self.anchor.into(),
            status,
            residual_valuation: self.worst,
            required_valuation: self.required,
            samples: self.samples,
            witness: self.error.or(self.witness),
        }
    }
}

fn suite_rng(config: &RunConfig, suite: Suite) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(config.seed ^ ((suite as u64 + 1) << 32))
}

fn describe_unit(u: &GroupRingElem) -> String {
    serde_json::to_string(&u.to_records()).unwrap()
}

struct SuiteOutput {
    records: Vec<CheckRecord>,
    coleman_table: Vec<ColemanRow>,
    det_table: Vec<DetRow>,
}

impl SuiteOutput {
    fn checks(checks: Vec<Check>) -> Self {
        SuiteOutput { records: checks.into_iter().map(Check::finish).collect(), coleman_table: vec![], det_table: vec![] }
    }
}

fn exp_log_suite(config: &RunConfig) -> SuiteOutput {
    let mut rng = suite_rng(config, Suite::ExpLog);
    let md = Modulus::new(config.prime, config.precision).unwrap();
    let p = md.p();
    let mut round = Check::new(Suite::ExpLog, "log-exp-round-trip", "log(exp(pa)) = pa", Some(config.precision - 1));
    round.run(|c| {
        for _ in 0..config.samples {
            let a = rng.gen_range(0..md.modulus());
            let back = md.log_1p(md.exp_p(a))?;
            c.residual(md.val(md.sub(back, md.mul(p, a))), || format!("a = {a}"));
        }
        Ok(())
    });
    let mut teich = Check::new(Suite::ExpLog, "teichmuller-root", "teich(a)^(p-1) = 1 and teich(a) = a mod p", None);
    teich.run(|c| {
        for a in (1..p).chain((0..config.samples).map(|_| rng.gen_range(1..md.modulus())).filter(|a| a % p != 0)) {
            let w = md.teichmuller(a)?;
            c.truth(md.pow(w, p - 1) == 1 && w % p == a % p, || format!("a = {a}"));
        }
        Ok(())
    });
    SuiteOutput::checks(vec![round, teich])
}

struct RingContext {
    table: Arc<GroupTable>,
    md: Modulus,
}

fn ring_context(config: &RunConfig, g: &FiniteGroup) -> RingContext {
    RingContext { table: GroupTable::of_group(g), md: Modulus::new(config.prime, config.precision).unwrap() }
}

fn gamma_suite(config: &RunConfig, g: &FiniteGroup) -> SuiteOutput {
    let mut rng = suite_rng(config, Suite::Gamma);
    let RingContext { table, md } = ring_context(config, g);
    let q = config.precision - 1;
    let mut exp = Check::new(Suite::Gamma, "gamma-of-exp", "Γ∘exp(p·) = p − Φ", Some(q));
    exp.run(|c| {
        for _ in 0..config.samples {
            let a = GroupRingElem::random(&table, md, &mut rng);
            let lhs = exp_class(&a).gamma().clone();
            let rhs = a.to_ab().p_minus_phi().with_precision(q)?;
            c.residual(lhs.sub(&rhs)?.valuation(), || describe_unit(&a));
        }
        Ok(())
    });
    let mut additive = Check::new(Suite::Gamma, "gamma-additive", "Γ(xy) = Γ(x) + Γ(y)", Some(q));
    let mut adams = Check::new(Suite::Gamma, "gamma-adams", "Γ∘Φ̃ = Φ∘Γ", Some(q));
    let mut reduction = Check::new(Suite::Gamma, "adams-mod-p", "Φ̃(x) mod p = (x mod p)^p", None);
    let mut units = Vec::new();
    for _ in 0..config.samples {
        units.push(GroupRingElem::random_unit(&table, md, &mut rng));
    }
    additive.run(|c| {
        for pair in units.windows(2) {
            let x = K1Class::new(pair[0].clone())?;
            let y = K1Class::new(pair[1].clone())?;
            let diff = x.mul(&y)?.gamma().sub(&x.gamma().add(y.gamma())?)?;
            c.residual(diff.valuation(), || describe_unit(&pair[0]));
        }
        Ok(())
    });
    adams.run(|c| {
        for u in &units {
            let x = K1Class::new(u.clone())?;
            let t = adams_tilde(&x)?;
            c.residual(t.gamma().sub(&x.gamma().phi())?.valuation(), || describe_unit(u));
        }
        Ok(())
    });
    reduction.run(|c| {
        for u in &units {
            let x = K1Class::new(u.clone())?;
            let t = adams_tilde(&x)?;
            c.truth(t.reduce_mod_p() == x.reduce_mod_p().pow(md.p()), || describe_unit(u));
        }
        Ok(())
    });
    let mut kernel = Check::new(Suite::Gamma, "gamma-kernel", "Γ vanishes on group elements and Teichmüller constants", Some(q));
    kernel.run(|c| {
        for i in 0..table.order() {
            let x = K1Class::group_element(&table, md, i);
            c.residual(x.gamma().valuation(), || table.describe(i));
        }
        for a in 1..md.p() {
            let x = K1Class::teichmuller(&table, md, a)?;
            c.residual(x.gamma().valuation(), || format!("teich({a})"));
        }
        Ok(())
    });
    let mut omega = Check::new(Suite::Gamma, "omega-exactness", "ω∘(p − Φ) is trivial", None);
    omega.run(|c| {
        let identity = table.ab_of(0);
        for _ in 0..config.samples {
            let a = GroupRingElem::random(&table, md, &mut rng).to_ab();
            c.truth(a.p_minus_phi().omega() == identity, || format!("{:?}", a.coeffs()));
        }
        Ok(())
    });
    SuiteOutput::checks(vec![exp, additive, adams, reduction, kernel, omega])
}

fn norm_suite(config: &RunConfig, g: &FiniteGroup) -> SuiteOutput {
    let mut rng = suite_rng(config, Suite::Norm);
    let RingContext { table, md } = ring_context(config, g);
    let q = config.precision - 1;
    let mut tr = Check::new(Suite::Norm, "norm-gamma", "Γ∘N_G = tr′∘Γ", Some(q));
    let mut exp = Check::new(Suite::Norm, "norm-exp", "N_G(exp(pa)) = exp(p·can(tr(a)))", Some(q));
    let mut modp = Check::new(Suite::Norm, "norm-mod-p", "can∘N(x) = x^[G:φG] over F_p", None);
    let ctx = match NormContext::new(&table) {
        Ok(c) => c,
        Err(e) => {
            for c in [&mut tr, &mut exp, &mut modp] {
                c.error = Some(e.to_string());
            }
            return SuiteOutput::checks(vec![tr, exp, modp]);
        }
    };
    let index = md.p().pow(ctx.d);
    tr.run(|c| {
        for _ in 0..config.samples {
            let u = GroupRingElem::random_unit(&table, md, &mut rng);
            let x = K1Class::new(u.clone())?;
            let n = ctx.norm(&x)?;
            c.residual(n.gamma().sub(&ctx.tr_prime(x.gamma()))?.valuation(), || describe_unit(&u));
        }
        Ok(())
    });
    exp.run(|c| {
        for _ in 0..config.samples {
            let a = GroupRingElem::random(&table, md, &mut rng);
            let lhs = ctx.norm(&exp_class(&a))?;
            let rhs = exp_class(&ctx.trace(&a));
            let v = lhs.gamma().sub(rhs.gamma())?.valuation().min(lhs.ab_image().distance(rhs.ab_image()));
            c.residual(v, || describe_unit(&a));
        }
        Ok(())
    });
    modp.run(|c| {
        let mdp = md.with_precision(1)?;
        let mut inputs: Vec<GroupRingElem> = (0..table.order()).map(|i| GroupRingElem::basis(&table, mdp, i)).collect();
        inputs.extend((0..config.samples).map(|_| GroupRingElem::random_unit(&table, mdp, &mut rng)));
        for u in inputs {
            let lifted = K1Class::new(u.with_precision(2)?)?;
            let n = ctx.norm(&lifted)?.reduce_mod_p();
            c.truth(n == lifted.reduce_mod_p().pow(index), || describe_unit(&u));
        }
        Ok(())
    });
    SuiteOutput::checks(vec![tr, exp, modp])
}

fn eigenspace_suite(config: &RunConfig, g: &FiniteGroup) -> SuiteOutput {
    let mut rng = suite_rng(config, Suite::Eigenspace);
    let RingContext { table, md } = ring_context(config, g);
    let mut basic = Check::new(Suite::Eigenspace, "eigen-basic", "group elements and Teichmüller constants satisfy N_G(x) = Φ̃(x)^(p^(d-1))", None);
    let mut proj = Check::new(Suite::Eigenspace, "projection-eigen", "projected units satisfy N_G(x) = Φ̃(x)^(p^(d-1))", None);
    let mut same = Check::new(Suite::Eigenspace, "projection-reduction", "projection preserves the class mod p", None);
    let mut lift = Check::new(Suite::Eigenspace, "projection-lift-independent", "projection depends only on the class mod p", None);
    let mut idem = Check::new(Suite::Eigenspace, "projection-idempotent", "projection is idempotent", None);
    let ctx = match NormContext::new(&table) {
        Ok(c) => c,
        Err(e) => {
            let mut out = vec![basic, proj, same, lift, idem];
            for c in out.iter_mut() {
                c.error = Some(e.to_string());
            }
            return SuiteOutput::checks(out);
        }
    };
    basic.run(|c| {
        for i in 0..table.order() {
            let cmp = eigenspace_compare(&K1Class::group_element(&table, md, i), &ctx)?;
            c.truth(cmp.holds, || table.describe(i));
        }
        for a in 1..md.p() {
            let cmp = eigenspace_compare(&K1Class::teichmuller(&table, md, a)?, &ctx)?;
            c.truth(cmp.holds, || format!("teich({a})"));
        }
        Ok(())
    });
    let units: Vec<GroupRingElem> = (0..config.samples).map(|_| GroupRingElem::random_unit(&table, md, &mut rng)).collect();
    let mut projected = Vec::new();
    proj.run(|c| {
        for u in &units {
            let x = K1Class::new(u.clone())?;
            let y = project_to_eigenspace(&x)?;
            let cmp = eigenspace_compare(&y, &ctx)?;
            c.truth(cmp.holds, || describe_unit(u));
            projected.push((x, y));
        }
        Ok(())
    });
    same.run(|c| {
        for (x, y) in &projected {
            c.truth(x.reduce_mod_p() == y.reduce_mod_p(), || describe_unit(x.representative()));
        }
        Ok(())
    });
    lift.run(|c| {
        for (x, y) in &projected {
            let shift = GroupRingElem::random(&table, md, &mut rng).scale(md.p());
            let other = K1Class::new(x.representative().add(&shift)?)?;
            c.truth(project_to_eigenspace(&other)? == *y, || describe_unit(x.representative()));
        }
        Ok(())
    });
    idem.run(|c| {
        for (_, y) in &projected {
            c.truth(project_to_eigenspace(y)? == *y, || describe_unit(y.representative()));
        }
        Ok(())
    });
    SuiteOutput::checks(vec![basic, proj, same, lift, idem])
}

fn coleman_rows(config: &RunConfig, rng: &mut ChaCha8Rng) -> Result<(Vec<(String, TruncSeries)>, Vec<ColemanRow>)> {
    let md = Modulus::new(config.prime, config.precision)?;
    let n = config.degree;
    let mut inputs = vec![
        ("1+T".to_string(), TruncSeries::generator(md, n)),
        ("teich(2)".to_string(), TruncSeries::constant(md, n, md.teichmuller(2)?)),
        ("teich(2)(1+T)".to_string(), TruncSeries::generator(md, n).scale(md.teichmuller(2)?)),
        ("1+p".to_string(), TruncSeries::constant(md, n, 1 + md.p())),
    ];
    for k in 0..config.samples.min(5) {
        let mut c: Vec<u64> = (0..n).map(|_| rng.gen_range(0..md.p())).collect();
        c[0] = rng.gen_range(1..md.p());
        let f = TruncSeries::from_coeffs(md, n, &c);
        inputs.push((format!("projected-lift-{k}"), project_series(&f)?));
    }
    let mut rows = Vec::new();
    for (label, f) in &inputs {
        let er = eigen_residual(f)?;
        let mut levels = Vec::new();
        let mut prev = None;
        for level in 0..=config.max_level {
            let v = f.evaluate_cyclotomic(level)?;
            let tower_residual = match &prev {
                Some(lower) if level >= 2 => Some(v.norm_to(level - 1).sub(lower)?.valuation()),
                _ => None,
            };
            levels.push(LevelValue { level, value: v.coeffs().to_vec(), tower_residual });
            prev = Some(v);
        }
        rows.push(ColemanRow { series: label.clone(), coefficients: f.coeffs().to_vec(), eigen_residual: er.residual_valuation, levels });
    }
    Ok((inputs, rows))
}

fn coleman_suite(config: &RunConfig) -> SuiteOutput {
    let mut rng = suite_rng(config, Suite::Coleman);
    let m = config.precision;
    let mut norm = Check::new(Suite::Coleman, "norm-of-generator", "N(1+T) = (1+T)^p", Some(m));
    let mut eigen = Check::new(Suite::Coleman, "eigen-residual", "N(f) = Φ̃(f) for 1+T, Teichmüller constants and their products", Some(m));
    let mut non = Check::new(Suite::Coleman, "eigen-rejects-1+p", "N(1+p) ≠ Φ̃(1+p)", None);
    let mut tower = Check::new(Suite::Coleman, "tower-compatibility", "Norm(F(ε_n − 1)) = F(ε_(n−1) − 1)", Some(m.saturating_sub(2).max(1)));
    let mut table = Vec::new();
    let md = Modulus::new(config.prime, m).unwrap();
    norm.run(|c| {
        let f = TruncSeries::generator(md, config.degree);
        let want = TruncSeries::generator_power(md, config.degree, md.p());
        c.residual(norm_series(&f)?.sub(&want)?.valuation(), || "1+T".into());
        Ok(())
    });
    match coleman_rows(config, &mut rng) {
        Ok((_, rows)) => {
            for row in &rows {
                if row.series == "1+p" {
                    non.truth(row.eigen_residual < m, || row.series.clone());
                } else if !row.series.starts_with("projected") {
                    eigen.residual(row.eigen_residual, || row.series.clone());
                }
                if row.series != "1+p" {
                    for lv in &row.levels {
                        if let Some(r) = lv.tower_residual {
                            tower.residual(r, || format!("{} at level {}", row.series, lv.level));
                        }
                    }
                }
            }
            table = rows;
        }
        Err(e) => {
            for c in [&mut eigen, &mut non, &mut tower] {
                c.error = Some(e.to_string());
            }
        }
    }
    let mut out = SuiteOutput::checks(vec![norm, eigen, non, tower]);
    out.coleman_table = table;
    out
}

/// `(unit, DET, h)` rows for a cyclic or abelian carrier.
fn det_rows(config: &RunConfig, g: &FiniteGroup, rng: &mut ChaCha8Rng) -> Result<Vec<DetRow>> {
    let RingContext { table, md } = ring_context(config, g);
    let chars = CharacterTable::new(&table)?;
    let cyclic_exponent = match g.kind() {
        GroupKind::Cyclic { exponents } if exponents.len() == 1 => Some(exponents[0]),
        _ => None,
    };
    let big = cyclic_exponent.map(|n| {
        let k = config.precision.max(n + 1);
        (k, GroupTable::of_group(&FiniteGroup::cyclic(config.prime, k).unwrap()))
    });
    let big_chars = big.as_ref().map(|(_, t)| CharacterTable::new(t)).transpose()?;
    let mut rows = Vec::new();
    let mut inputs = vec![GroupRingElem::one(&table, md), GroupRingElem::scalar(&table, md, md.teichmuller(2)?)];
    inputs.extend((0..config.samples.min(5)).map(|_| GroupRingElem::random_unit(&table, md, rng)));
    for u in inputs {
        let det = det_map(&chars, &u)?;
        let h = match (&big, &big_chars) {
            (Some((k, t)), Some(bc)) => Some(h_map(&det_map(bc, &lift_cyclic_unit(&u, *k, t)?)?)?),
            _ => None,
        };
        rows.push(DetRow { unit: u.to_records(), det: det.to_records(), h });
    }
    Ok(rows)
}

fn hom_suite(config: &RunConfig, g: &FiniteGroup) -> SuiteOutput {
    let mut rng = suite_rng(config, Suite::Hom);
    let RingContext { table, md } = ring_context(config, g);
    let q = config.precision - 1;
    let m = config.precision;
    let mut mult = Check::new(Suite::Hom, "det-multiplicative", "DET(uv) = DET(u)DET(v)", Some(m));
    let mut adams = Check::new(Suite::Hom, "det-adams", "DET∘Φ̃ = ψ_p∘DET", Some(q));
    let mut norm = Check::new(Suite::Hom, "det-norm", "DET(N_G u)(χ) = Π_ψ DET(u)(χψ)", Some(q));
    let mut log = Check::new(Suite::Hom, "det-gamma", "TR∘Γ = Γ_Hom∘DET", Some(q));
    let mut hom1 = Check::new(Suite::Hom, "hom1-membership", "DET(u)^p / ψ_p DET(u) = 1 mod p", None);
    let mut orth = Check::new(Suite::Hom, "orthogonality", "Σ_χ f(χ) = |G|·a_e", Some(m));
    let mut hcheck = Check::new(Suite::Hom, "h-map", "h(DET(u)) = 1", None);
    let all = |checks: &mut [&mut Check], e: &Error| {
        for c in checks.iter_mut() {
            c.error = Some(e.to_string());
        }
    };
    let setup = CharacterTable::new(&table).and_then(|c| Ok((c, NormContext::new(&table)?)));
    let (chars, ctx) = match setup {
        Ok(x) => x,
        Err(e) => {
            all(&mut [&mut mult, &mut adams, &mut norm, &mut log, &mut hom1, &mut orth, &mut hcheck], &e);
            return SuiteOutput::checks(vec![mult, adams, norm, log, hom1, orth, hcheck]);
        }
    };
    let units: Vec<GroupRingElem> = (0..config.samples).map(|_| GroupRingElem::random_unit(&table, md, &mut rng)).collect();
    mult.run(|c| {
        for pair in units.windows(2) {
            let lhs = det_map(&chars, &pair[0].mul(&pair[1])?)?;
            let rhs = det_map(&chars, &pair[0])?.mul(&det_map(&chars, &pair[1])?)?;
            c.residual(lhs.sub(&rhs)?.valuation(), || describe_unit(&pair[0]));
        }
        Ok(())
    });
    adams.run(|c| {
        for u in &units {
            let x = K1Class::new(u.clone())?;
            let lhs = det_map(&chars, adams_tilde(&x)?.representative())?;
            let rhs = adams_psi(&det_map(&chars, u)?);
            c.residual(lhs.sub(&rhs)?.valuation(), || describe_unit(u));
        }
        Ok(())
    });
    norm.run(|c| {
        for u in &units {
            let x = K1Class::new(u.clone())?;
            let lhs = det_map(&chars, ctx.norm(&x)?.representative())?;
            let rhs = iota_p(&det_map(&chars, u)?)?;
            c.residual(lhs.sub(&rhs)?.valuation(), || describe_unit(u));
        }
        Ok(())
    });
    log.run(|c| {
        for u in &units {
            let x = K1Class::new(u.clone())?;
            let lhs = tr_map(&chars, x.gamma())?;
            let rhs = gamma_hom(&det_map(&chars, u)?)?;
            c.residual(lhs.sub(&rhs)?.valuation(), || describe_unit(u));
        }
        Ok(())
    });
    hom1.run(|c| {
        for u in &units {
            c.truth(hom1_test(&det_map(&chars, u)?)?, || describe_unit(u));
        }
        Ok(())
    });
    orth.run(|c| {
        for _ in 0..config.samples {
            let a = GroupRingElem::random(&table, md, &mut rng);
            let total = character_total(&det_map(&chars, &a)?);
            let want = md.mul(table.order() as u64, a.coeffs()[0]);
            c.residual(md.val(md.sub(total, want)), || describe_unit(&a));
        }
        Ok(())
    });
    let mut det_table = Vec::new();
    hcheck.run(|c| {
        det_table = det_rows(config, g, &mut rng)?;
        for row in &det_table {
            if let Some(h) = row.h {
                c.truth(h == 1, || serde_json::to_string(&row.unit).unwrap());
            }
        }
        Ok(())
    });
    let mut out = SuiteOutput::checks(vec![mult, adams, norm, log, hom1, orth, hcheck]);
    out.det_table = det_table;
    out
}

fn sk1_suite(g: &FiniteGroup) -> SuiteOutput {
    let mut relations = Check::new(Suite::Sk1, "root-relations", "root-group and commutation relations", None);
    let mut series = Check::new(Suite::Sk1, "central-series", "G^(m) is the product of roots of gap > m, normally generated by gap m+1 roots, with central layers", None);
    let mut pairing = Check::new(Suite::Sk1, "pairing-matches-commutators", "δ∘γ on basis pairs equals the matrix commutator", None);
    let mut kernel = Check::new(Suite::Sk1, "kernel-generators", "kernel generators map to zero and are independent", None);
    let mut wedge = Check::new(Suite::Sk1, "wedge-identities", "[A,BD] = E, [C,BD] = E^-1, [AC,BD] = 1", None);
    let GroupKind::Unitriangular { d, n } = g.kind().clone() else {
        let e = Error::LayerMismatch(format!("{} is not a unitriangular carrier", g.label()));
        let mut out = vec![relations, series, pairing, kernel, wedge];
        for c in out.iter_mut() {
            c.error = Some(e.to_string());
        }
        return SuiteOutput::checks(out);
    };
    let p = g.prime();
    relations.run(|c| {
        let fails = relation_failures(g)?;
        c.truth(fails.is_empty(), || fails.join("; "));
        Ok(())
    });
    series.run(|c| {
        for s in central_series_checks(g)? {
            c.truth(s.root_product && s.generated_by_roots && s.central_quotient, || format!("{s:?}"));
        }
        Ok(())
    });
    pairing.run(|c| {
        for m in 1..d.saturating_sub(1) {
            for i in 1..=d - m {
                for k in 1..d {
                    let t = GradedTensor::basis(d, m, p.pow(n), i, k);
                    c.truth(delta_gamma(&t)? == commutator_pairing(g, m, i, k)?, || format!("m={m} i={i} k={k}"));
                }
            }
        }
        Ok(())
    });
    kernel.run(|c| {
        for m in 1..d.saturating_sub(1) {
            let ks = kernel_generators(d, p, n, m);
            for t in &ks {
                c.truth(delta_gamma(t)?.is_zero(), || format!("m={m} {:?}", t.terms()));
            }
            c.truth(family_rank(p, n, &ks) == ks.len(), || format!("m={m} dependent family"));
        }
        Ok(())
    });
    wedge.run(|c| {
        for m in 1..d.saturating_sub(1) {
            for i in 1..d - m {
                let w = wedge_identity_check(g, m, i)?;
                c.truth(w.holds, || format!("m={m} i={i}: {}", w.failures.join("; ")));
            }
        }
        Ok(())
    });
    SuiteOutput::checks(vec![relations, series, pairing, kernel, wedge])
}

fn run_one(config: &RunConfig, g: &FiniteGroup, suite: Suite) -> SuiteOutput {
    match suite {
        Suite::ExpLog => exp_log_suite(config),
        Suite::Gamma => gamma_suite(config, g),
        Suite::Norm => norm_suite(config, g),
        Suite::Eigenspace => eigenspace_suite(config, g),
        Suite::Coleman => coleman_suite(config),
        Suite::Hom => hom_suite(config, g),
        Suite::Sk1 => sk1_suite(g),
    }
}

/// Runs the selected suites in parallel and assembles the report in selection order.
pub fn run_suite(config: &RunConfig) -> Result<Report> {
    let g = config.validate()?;
    let outputs: Vec<SuiteOutput> = std::thread::scope(|s| {
        let g = &g;
        let handles: Vec<_> = config.suites.iter().map(|&suite| s.spawn(move || run_one(config, g, suite))).collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    });
    let mut records = Vec::new();
    let mut coleman_table = Vec::new();
    let mut det_table = Vec::new();
    for o in outputs {
        records.extend(o.records);
        coleman_table.extend(o.coleman_table);
        det_table.extend(o.det_table);
    }
    Ok(Report::assemble(config, records, coleman_table, det_table))
}

/// Only the Coleman table: per series, eigen residual and values `F(ε_n − 1)`.
pub fn coleman_table(config: &RunConfig) -> Result<Report> {
    let mut c = config.clone();
    c.suites = vec![Suite::Coleman];
    c.validate()?;
    let mut rng = suite_rng(&c, Suite::Coleman);
    let (_, rows) = coleman_rows(&c, &mut rng)?;
    Ok(Report::assemble(&c, vec![], rows, vec![]))
}

/// Only the determinant table: per unit, its character values and `h`.
pub fn det_table(config: &RunConfig) -> Result<Report> {
    let mut c = config.clone();
    c.suites = vec![Suite::Hom];
    let g = c.validate()?;
    let mut rng = suite_rng(&c, Suite::Hom);
    let rows = det_rows(&c, &g, &mut rng)?;
    Ok(Report::assemble(&c, vec![], vec![], rows))
}

/// Residual valuation of two class functions at the splitting modulus; exposed for examples.
pub fn normal_form_distance(splitting: &ClassSplitting, a: &crate::group_ring::AbQuotElem, b: &crate::group_ring::AbQuotElem) -> Result<u32> {
    Ok(splitting.normal_form(&a.sub(b)?).valuation())
}

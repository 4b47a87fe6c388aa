use plrs::ensemble::{count_omega_by_z, omega_cardinality, ConditionalCheck, OmegaWalker};
use plrs::scalar::{ratio_string, ratio_to_f64, sqrt_ratio_f64};
use plrs::verify::{build_report, gaussian_diagnostics, GaussianTable, TheoremReport};
use plrs::zeckendorf::{parse_blocks, raw_value, remove_second_to_last_block, IllegalReason};
use plrs::{
    decompose, is_legal, stats_from_polynomial, summand_polynomial, BigRational, BigUint, Block,
    BlockCatalog, Decomposition, Ensemble, Error, Legality, MomentTable, RecurrenceSpec, Scalar,
    SequenceTable,
};
use serde::Serialize;

use crate::args::{Command, Format, ScalarKind};
use crate::render::{join, json, Table};

/// Why a run did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, bad input, or a request outside what can be computed.
    Usage(String),
    /// The computation ran and a checked property does not hold.
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BoundViolated { .. }
            | Error::NoThresholdInRange { .. }
            | Error::NonPositiveC(_) => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

/// Rendered output, plus the failed check if there was one.
pub struct Outcome {
    pub text: String,
    pub failed: Option<String>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, failed: None }
    }
}

pub struct Context {
    pub spec: RecurrenceSpec,
    pub format: Format,
    pub cap: u64,
    pub precision: u32,
}

impl Context {
    fn table(&self, n: usize) -> SequenceTable {
        SequenceTable::with_terms(self.spec.clone(), n)
    }

    fn render<T: Serialize>(&self, table: &Table, value: &T) -> String {
        match self.format {
            Format::Table => table.aligned(),
            Format::Csv => table.csv(),
            Format::Json => json(value),
        }
    }
}

pub fn execute(ctx: &Context, command: &Command) -> Result<Outcome, Failure> {
    match command {
        Command::Seq { n } => seq(ctx, *n),
        Command::Blocks => blocks(ctx),
        Command::Decompose { m } => decompose_cmd(ctx, m),
        Command::Validate { digits } => validate(ctx, digits),
        Command::Enumerate { n } => enumerate(ctx, *n),
        Command::Poly { n } => poly(ctx, *n),
        Command::Stats { n } => stats(ctx, *n),
        Command::Zdist { n, empirical } => zdist(ctx, *n, *empirical),
        Command::Identities { n, enumerate } => identities(ctx, *n, *enumerate),
        Command::Verify { n_max, scalar } => match scalar {
            ScalarKind::Hp => verify::<plrs::HpFloat>(ctx, *n_max, "hp"),
            ScalarKind::F64 => verify::<f64>(ctx, *n_max, "f64"),
            ScalarKind::Exact => verify::<BigRational>(ctx, *n_max, "exact"),
        },
        Command::Gauss { n_list } => gauss(ctx, n_list),
        Command::Sample { n, samples, seed } => sample(ctx, *n, *samples, *seed),
    }
}

fn require_positive(n: usize) -> Result<(), Failure> {
    if n == 0 {
        return Err(Failure::Usage("n must be at least 1".into()));
    }
    Ok(())
}

#[derive(Serialize)]
struct SeqJson {
    spec: String,
    terms: Vec<String>,
}

fn seq(ctx: &Context, n: usize) -> Result<Outcome, Failure> {
    let table = ctx.table(n);
    let terms: Vec<String> = table.terms()[..n].iter().map(BigUint::to_string).collect();
    let mut out = Table::new(&["n", "H_n"]);
    for (i, h) in terms.iter().enumerate() {
        out.push(vec![(i + 1).to_string(), h.clone()]);
    }
    Ok(Outcome::ok(ctx.render(
        &out,
        &SeqJson {
            spec: ctx.spec.to_string(),
            terms,
        },
    )))
}

#[derive(Serialize)]
struct BlockJson {
    kind: &'static str,
    size: u64,
    length: usize,
    coefficients: Vec<u32>,
}

impl BlockJson {
    fn new(block: &Block) -> Self {
        let kind = match block.kind() {
            plrs::BlockKind::Type1 => "type1",
            plrs::BlockKind::Type2 => "type2",
        };
        BlockJson {
            kind,
            size: block.size(),
            length: block.len(),
            coefficients: block.coefficients().to_vec(),
        }
    }
}

#[derive(Serialize)]
struct BlocksJson {
    spec: String,
    size: u64,
    length: usize,
    type1: Vec<BlockJson>,
    type2: Vec<BlockJson>,
}

fn blocks(ctx: &Context) -> Result<Outcome, Failure> {
    let catalog = BlockCatalog::new(&ctx.spec);
    let mut out = Table::new(&["kind", "size", "length", "block"]);
    for block in catalog.type2_blocks().iter().chain(catalog.type1_blocks()) {
        let kind = if block.kind() == plrs::BlockKind::Type1 {
            "type1"
        } else {
            "type2"
        };
        out.push(vec![
            kind.into(),
            block.size().to_string(),
            block.len().to_string(),
            block.to_string(),
        ]);
    }
    let value = BlocksJson {
        spec: ctx.spec.to_string(),
        size: ctx.spec.size(),
        length: ctx.spec.length(),
        type1: catalog.type1_blocks().iter().map(BlockJson::new).collect(),
        type2: catalog.type2_blocks().iter().map(BlockJson::new).collect(),
    };
    Ok(Outcome::ok(ctx.render(&out, &value)))
}

#[derive(Serialize)]
struct DecomposeJson {
    spec: String,
    m: String,
    coefficients: Vec<u32>,
    indices: Vec<usize>,
    blocks: String,
    summands: u64,
    /// The second-to-last block removed, with its size; absent for fewer
    /// than two blocks.
    reduced: Option<ReducedJson>,
}

#[derive(Serialize)]
struct ReducedJson {
    coefficients: Vec<u32>,
    value: String,
    removed_size: usize,
}

fn decompose_cmd(ctx: &Context, m: &str) -> Result<Outcome, Failure> {
    let m: BigUint = m
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("{m:?} is not a positive integer")))?;
    let table = ctx.table(2);
    let d = decompose(&table, &m)?;
    let catalog = BlockCatalog::new(&ctx.spec);
    let parse = parse_blocks(&catalog, &d)?;
    let indices = d.term_indices();
    let reduced = match remove_second_to_last_block(&catalog, &d) {
        Ok((r, t)) => Some(ReducedJson {
            value: raw_value(&table, r.coefficients()).to_string(),
            coefficients: r.into_coefficients(),
            removed_size: t,
        }),
        Err(_) => None,
    };
    let label = if ctx.spec == RecurrenceSpec::fibonacci() {
        "F"
    } else {
        "H"
    };
    let text = match ctx.format {
        Format::Table => format!(
            "coefficients: {d}\n{label}-indices: {}; blocks {parse}; K={}\n",
            join(&indices, ","),
            d.summand_count()
        ),
        Format::Csv => {
            let mut out = Table::new(&["m", "coefficients", "indices", "blocks", "summands"]);
            out.push(vec![
                m.to_string(),
                d.to_string(),
                join(&indices, " "),
                parse.to_string(),
                d.summand_count().to_string(),
            ]);
            out.csv()
        }
        Format::Json => json(&DecomposeJson {
            spec: ctx.spec.to_string(),
            m: m.to_string(),
            coefficients: d.coefficients().to_vec(),
            indices,
            blocks: parse.to_string(),
            summands: d.summand_count(),
            reduced,
        }),
    };
    Ok(Outcome::ok(text))
}

#[derive(Serialize)]
struct ValidateJson {
    spec: String,
    coefficients: Vec<u32>,
    legal: bool,
    position: Option<usize>,
    reason: Option<String>,
    value: Option<String>,
    blocks: Option<String>,
}

fn validate(ctx: &Context, digits: &str) -> Result<Outcome, Failure> {
    let d: Decomposition = digits.parse()?;
    let verdict = is_legal(&ctx.spec, d.coefficients());
    let mut report = ValidateJson {
        spec: ctx.spec.to_string(),
        coefficients: d.coefficients().to_vec(),
        legal: verdict.is_legal(),
        position: None,
        reason: None,
        value: None,
        blocks: None,
    };
    let failed = match verdict {
        Legality::Legal => {
            let catalog = BlockCatalog::new(&ctx.spec);
            report.value = Some(raw_value(&ctx.table(d.len()), d.coefficients()).to_string());
            report.blocks = Some(parse_blocks(&catalog, &d)?.to_string());
            None
        }
        Legality::Illegal { position, reason } => {
            report.position = Some(position);
            report.reason = Some(reason_code(reason).into());
            Some(format!("illegal at position {position}: {reason}"))
        }
    };
    let text = match ctx.format {
        Format::Table => match (&report.value, &report.blocks, &failed) {
            (Some(value), Some(blocks), _) => format!("legal; value {value}; blocks {blocks}\n"),
            (_, _, Some(message)) => format!("{message}\n"),
            _ => unreachable!("legal strings carry a value"),
        },
        Format::Csv => {
            let mut out = Table::new(&[
                "coefficients",
                "legal",
                "position",
                "reason",
                "value",
                "blocks",
            ]);
            let opt = |v: &Option<String>| v.clone().unwrap_or_default();
            out.push(vec![
                d.to_string(),
                report.legal.to_string(),
                report.position.map(|p| p.to_string()).unwrap_or_default(),
                opt(&report.reason),
                opt(&report.value),
                opt(&report.blocks),
            ]);
            out.csv()
        }
        Format::Json => json(&report),
    };
    Ok(Outcome { text, failed })
}

fn reason_code(reason: IllegalReason) -> &'static str {
    match reason {
        IllegalReason::Empty => "empty",
        IllegalReason::LeadingZero => "leading_zero",
        IllegalReason::ExceedsCoefficient => "exceeds_coefficient",
        IllegalReason::FullPrefix => "full_prefix",
    }
}

#[derive(Serialize)]
struct ElementJson {
    value: String,
    coefficients: Vec<u32>,
    summands: u64,
}

#[derive(Serialize)]
struct EnumerateJson {
    spec: String,
    n: usize,
    count: u64,
    elements: Vec<ElementJson>,
}

fn enumerate(ctx: &Context, n: usize) -> Result<Outcome, Failure> {
    require_positive(n)?;
    let table = ctx.table(n + 1);
    let size = omega_cardinality(&table, n);
    if size > BigUint::from(ctx.cap) {
        return Err(Error::CapExceeded {
            count: size.to_string(),
            cap: ctx.cap,
        }
        .into());
    }
    let catalog = BlockCatalog::new(&ctx.spec);
    let mut walker = OmegaWalker::new(&catalog, n);
    let mut elements = Vec::new();
    while walker.advance() {
        elements.push(ElementJson {
            value: raw_value(&table, walker.coefficients()).to_string(),
            coefficients: walker.coefficients().to_vec(),
            summands: walker.summand_count(),
        });
    }
    let mut out = Table::new(&["value", "coefficients", "summands"]);
    for e in &elements {
        out.push(vec![
            e.value.clone(),
            join(&e.coefficients, " "),
            e.summands.to_string(),
        ]);
    }
    let value = EnumerateJson {
        spec: ctx.spec.to_string(),
        n,
        count: elements.len() as u64,
        elements,
    };
    Ok(Outcome::ok(ctx.render(&out, &value)))
}

#[derive(Serialize)]
struct PolyJson {
    spec: String,
    n: usize,
    cardinality: String,
    /// `coeffs[k]`: elements with exactly `k` summands.
    coeffs: Vec<String>,
}

fn poly(ctx: &Context, n: usize) -> Result<Outcome, Failure> {
    require_positive(n)?;
    let p = summand_polynomial(&ctx.spec, n);
    let coeffs: Vec<String> = p.coeffs().iter().map(BigUint::to_string).collect();
    let mut out = Table::new(&["k", "count"]);
    for (k, c) in coeffs.iter().enumerate() {
        out.push(vec![k.to_string(), c.clone()]);
    }
    let value = PolyJson {
        spec: ctx.spec.to_string(),
        n,
        cardinality: p.cardinality().to_string(),
        coeffs,
    };
    Ok(Outcome::ok(ctx.render(&out, &value)))
}

#[derive(Serialize)]
struct StatsJson {
    spec: String,
    n: usize,
    cardinality: String,
    mean: String,
    second_moment: String,
    variance: String,
    third_central: String,
    fourth_central: String,
    skewness_squared: Option<String>,
    excess_kurtosis: Option<String>,
    approx: StatsApprox,
}

#[derive(Serialize)]
struct StatsApprox {
    mean: f64,
    variance: f64,
    skewness: Option<f64>,
    excess_kurtosis: Option<f64>,
}

fn stats(ctx: &Context, n: usize) -> Result<Outcome, Failure> {
    require_positive(n)?;
    let s = stats_from_polynomial(&summand_polynomial(&ctx.spec, n))?;
    let value = StatsJson {
        spec: ctx.spec.to_string(),
        n,
        cardinality: s.cardinality.to_string(),
        mean: ratio_string(&s.mean),
        second_moment: ratio_string(&s.second_moment),
        variance: ratio_string(&s.variance),
        third_central: ratio_string(&s.third_central),
        fourth_central: ratio_string(&s.fourth_central),
        skewness_squared: s.skewness_squared().as_ref().map(ratio_string),
        excess_kurtosis: s.excess_kurtosis().as_ref().map(ratio_string),
        approx: StatsApprox {
            mean: ratio_to_f64(&s.mean),
            variance: ratio_to_f64(&s.variance),
            skewness: s.skewness(),
            excess_kurtosis: s.excess_kurtosis().as_ref().map(ratio_to_f64),
        },
    };
    let mut out = Table::new(&["quantity", "exact", "approx"]);
    let row = |name: &str, exact: &str, approx: Option<f64>| {
        vec![
            name.to_string(),
            exact.to_string(),
            approx.map(|v| format!("{v:.12}")).unwrap_or_default(),
        ]
    };
    out.push(row("cardinality", &value.cardinality, None));
    out.push(row("mean", &value.mean, Some(value.approx.mean)));
    out.push(row(
        "second_moment",
        &value.second_moment,
        Some(ratio_to_f64(&s.second_moment)),
    ));
    out.push(row(
        "variance",
        &value.variance,
        Some(value.approx.variance),
    ));
    out.push(row(
        "third_central",
        &value.third_central,
        Some(ratio_to_f64(&s.third_central)),
    ));
    out.push(row(
        "fourth_central",
        &value.fourth_central,
        Some(ratio_to_f64(&s.fourth_central)),
    ));
    out.push(row("skewness", "", value.approx.skewness));
    out.push(row(
        "excess_kurtosis",
        value.excess_kurtosis.as_deref().unwrap_or(""),
        value.approx.excess_kurtosis,
    ));
    Ok(Outcome::ok(ctx.render(&out, &value)))
}

#[derive(Serialize)]
struct ZRowJson {
    t: usize,
    length: usize,
    probability: String,
    empirical: Option<String>,
}

#[derive(Serialize)]
struct ZdistJson {
    spec: String,
    n: usize,
    rows: Vec<ZRowJson>,
    non_increasing: bool,
    zero_bound: bool,
    empirical_agrees: Option<bool>,
}

fn zdist(ctx: &Context, n: usize, empirical: bool) -> Result<Outcome, Failure> {
    let table = ctx.table(n + 1);
    let catalog = BlockCatalog::new(&ctx.spec);
    // The cap of 0 skips the enumeration.
    let cap = if empirical { ctx.cap } else { 0 };
    if empirical {
        count_omega_by_z(&catalog, n, cap)?;
    }
    let z = plrs::ensemble::z_distribution(&table, &catalog, n, cap)?;
    let rows: Vec<ZRowJson> = z
        .probs
        .iter()
        .enumerate()
        .map(|(t, p)| ZRowJson {
            t,
            length: z.lengths[t],
            probability: ratio_string(p),
            empirical: z.empirical.as_ref().map(|e| ratio_string(&e[t])),
        })
        .collect();
    let mut out = Table::new(&["t", "length", "probability", "empirical"]);
    for r in &rows {
        out.push(vec![
            r.t.to_string(),
            r.length.to_string(),
            r.probability.clone(),
            r.empirical.clone().unwrap_or_default(),
        ]);
    }
    let value = ZdistJson {
        spec: ctx.spec.to_string(),
        n,
        non_increasing: z.is_non_increasing(),
        zero_bound: z.zero_bound_holds(),
        empirical_agrees: z.empirical_agrees(),
        rows,
    };
    let failed =
        (!value.non_increasing || !value.zero_bound || value.empirical_agrees == Some(false))
            .then(|| format!("Z_{n} distribution check failed"));
    Ok(Outcome {
        text: ctx.render(&out, &value),
        failed,
    })
}

#[derive(Serialize)]
struct ConditionalJson {
    t: usize,
    lhs_mean: String,
    rhs_mean: String,
    lhs_second: String,
    rhs_second: String,
    holds: bool,
}

impl ConditionalJson {
    fn new(c: &ConditionalCheck) -> Self {
        ConditionalJson {
            t: c.t,
            lhs_mean: ratio_string(&c.lhs_mean),
            rhs_mean: ratio_string(&c.rhs_mean),
            lhs_second: ratio_string(&c.lhs_second),
            rhs_second: ratio_string(&c.rhs_second),
            holds: c.holds(),
        }
    }
}

#[derive(Serialize)]
struct IdentitiesJson {
    spec: String,
    n: usize,
    mean: String,
    mean_by_z: String,
    second: String,
    second_by_z: String,
    holds: bool,
    conditionals: Option<Vec<ConditionalJson>>,
}

fn identities(ctx: &Context, n: usize, enumerate: bool) -> Result<Outcome, Failure> {
    let ensemble = Ensemble::new(&ctx.spec, n);
    let check = ensemble.identity_check(n)?;
    let conditionals = if enumerate {
        let tally = ensemble.tally(n, ctx.cap)?;
        let rows = (0..ctx.spec.size() as usize)
            .filter(|&t| tally.by_z.get(t).is_some_and(|s| s.count > 0))
            .map(|t| {
                plrs::ensemble::conditional_from_tally(
                    &tally,
                    ensemble.catalog(),
                    ensemble.moments(),
                    t,
                )
                .map(|c| ConditionalJson::new(&c))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Some(rows)
    } else {
        None
    };
    let value = IdentitiesJson {
        spec: ctx.spec.to_string(),
        n,
        mean: ratio_string(&check.mean),
        mean_by_z: ratio_string(&check.mean_by_z),
        second: ratio_string(&check.second),
        second_by_z: ratio_string(&check.second_by_z),
        holds: check.holds(),
        conditionals,
    };
    let mut out = Table::new(&["identity", "lhs", "rhs", "holds"]);
    out.push(vec![
        "E[K]".into(),
        value.mean_by_z.clone(),
        value.mean.clone(),
        (check.mean == check.mean_by_z).to_string(),
    ]);
    out.push(vec![
        "E[K^2]".into(),
        value.second_by_z.clone(),
        value.second.clone(),
        (check.second == check.second_by_z).to_string(),
    ]);
    for c in value.conditionals.iter().flatten() {
        let same_mean = c.lhs_mean == c.rhs_mean;
        let same_second = c.lhs_second == c.rhs_second;
        out.push(vec![
            format!("E[K|Z={}]", c.t),
            c.lhs_mean.clone(),
            c.rhs_mean.clone(),
            same_mean.to_string(),
        ]);
        out.push(vec![
            format!("E[K^2|Z={}]", c.t),
            c.lhs_second.clone(),
            c.rhs_second.clone(),
            same_second.to_string(),
        ]);
    }
    let all = value.holds && value.conditionals.iter().flatten().all(|c| c.holds);
    let failed = (!all).then(|| format!("moment identities fail at n = {n}"));
    Ok(Outcome {
        text: ctx.render(&out, &value),
        failed,
    })
}

#[derive(Serialize)]
struct GrowthJson {
    a_est: String,
    a_exact: String,
    b_est: String,
    convergence_gap: String,
    f_shrinks: bool,
}

#[derive(Serialize)]
struct ThresholdJson {
    n: usize,
    bound: String,
    failures: Vec<usize>,
}

#[derive(Serialize)]
struct CandidateJson {
    term: String,
    value: String,
}

#[derive(Serialize)]
struct ConstantJson {
    value: String,
    argmin: String,
    exact: Option<String>,
    candidates: Vec<CandidateJson>,
}

#[derive(Serialize)]
struct SlopeJson {
    c_est: String,
    gap: String,
    tolerance: f64,
    consistent: bool,
}

#[derive(Serialize)]
struct VerdictJson {
    n: usize,
    mean: String,
    variance: String,
    c_n: String,
    margin: String,
    pass: bool,
}

#[derive(Serialize)]
struct GaussianRowJson {
    n: usize,
    skewness: f64,
    excess_kurtosis: f64,
    skewness_squared: String,
    excess_kurtosis_exact: String,
}

#[derive(Serialize)]
struct GaussianJson {
    rows: Vec<GaussianRowJson>,
    trend_holds: bool,
}

#[derive(Serialize)]
struct GaussJson {
    spec: String,
    #[serde(flatten)]
    gaussian: GaussianJson,
}

impl GaussianJson {
    fn new(table: &GaussianTable) -> Self {
        GaussianJson {
            rows: table
                .rows
                .iter()
                .map(|r| GaussianRowJson {
                    n: r.n,
                    skewness: r.skewness,
                    excess_kurtosis: r.excess_kurtosis,
                    skewness_squared: ratio_string(&r.skewness_squared),
                    excess_kurtosis_exact: ratio_string(&r.excess_kurtosis_exact),
                })
                .collect(),
            trend_holds: table.trend_holds(),
        }
    }
}

#[derive(Serialize)]
struct VerifyJson {
    spec: String,
    n_max: usize,
    scalar: &'static str,
    precision: u32,
    size: u64,
    length: usize,
    growth: GrowthJson,
    threshold: ThresholdJson,
    c: ConstantJson,
    slope: SlopeJson,
    all_pass: bool,
    first_violation: Option<usize>,
    verdicts: Vec<VerdictJson>,
    gaussian: GaussianJson,
}

fn verify_json<T: Scalar>(
    report: &TheoremReport<T>,
    scalar: &'static str,
    precision: u32,
) -> VerifyJson {
    let g = &report.growth;
    VerifyJson {
        spec: report.spec.to_string(),
        n_max: report.n_max,
        scalar,
        precision,
        size: report.size,
        length: report.length,
        growth: GrowthJson {
            a_est: g.a_est.to_decimal_string(),
            a_exact: ratio_string(&g.a_exact),
            b_est: g.b_est.to_decimal_string(),
            convergence_gap: g.convergence_gap.to_decimal_string(),
            f_shrinks: g.f_shrinks(),
        },
        threshold: ThresholdJson {
            n: report.threshold.n,
            bound: report.threshold.bound.to_decimal_string(),
            failures: report.threshold.failures.clone(),
        },
        c: ConstantJson {
            value: report.constant.c.to_decimal_string(),
            argmin: report.constant.argmin.to_string(),
            exact: report.constant.exact.as_ref().map(ratio_string),
            candidates: report
                .constant
                .candidates
                .iter()
                .map(|(term, value)| CandidateJson {
                    term: term.to_string(),
                    value: value.to_decimal_string(),
                })
                .collect(),
        },
        slope: SlopeJson {
            c_est: ratio_string(&report.slope_c_est),
            gap: ratio_string(&report.slope_gap),
            tolerance: report.slope_tolerance(),
            consistent: report.slope_consistent(),
        },
        all_pass: report.all_pass(),
        first_violation: report.first_violation().map(|v| v.n),
        verdicts: report
            .verdicts
            .iter()
            .map(|v| VerdictJson {
                n: v.n,
                mean: ratio_string(&v.mean),
                variance: ratio_string(&v.variance),
                c_n: v.c_n.to_decimal_string(),
                margin: v.margin.to_decimal_string(),
                pass: v.pass,
            })
            .collect(),
        gaussian: GaussianJson::new(&report.gaussian),
    }
}

fn verify<T: Scalar>(
    ctx: &Context,
    n_max: usize,
    scalar: &'static str,
) -> Result<Outcome, Failure> {
    let ensemble = Ensemble::new(&ctx.spec, n_max);
    let report = build_report::<T>(&ensemble, n_max, ctx.precision)?;
    let value = verify_json(&report, scalar, ctx.precision);
    let failed = match report.first_violation() {
        Some(v) => Some(format!("variance bound violated at n = {}", v.n)),
        None if !report.slope_consistent() => {
            Some("variance slope estimate is below c".to_string())
        }
        None => None,
    };
    let text = match ctx.format {
        Format::Json => json(&value),
        Format::Csv | Format::Table => {
            let mut out = Table::new(&["n", "mean", "variance", "c*n", "margin", "pass"]);
            for v in &value.verdicts {
                out.push(vec![
                    v.n.to_string(),
                    v.mean.clone(),
                    v.variance.clone(),
                    v.c_n.clone(),
                    v.margin.clone(),
                    v.pass.to_string(),
                ]);
            }
            if ctx.format == Format::Csv {
                out.csv()
            } else {
                let mut text = format!(
                    "spec {}  S={}  L={}  n_max={}\na_est = {}  (gap {})\nN = {}  c = {}  ({})\nslope estimate = {}  (tolerance {:e})\n",
                    value.spec,
                    value.size,
                    value.length,
                    value.n_max,
                    value.growth.a_est,
                    value.growth.convergence_gap,
                    value.threshold.n,
                    value.c.value,
                    value.c.argmin,
                    ratio_to_f64(&report.slope_c_est),
                    value.slope.tolerance,
                );
                text += &out.aligned();
                match &failed {
                    None => text += "all variance bounds hold\n",
                    Some(message) => text += &format!("{message}\n"),
                }
                text
            }
        }
    };
    Ok(Outcome { text, failed })
}

fn gauss(ctx: &Context, n_list: &[usize]) -> Result<Outcome, Failure> {
    let n_max = n_list
        .iter()
        .copied()
        .max()
        .ok_or_else(|| Failure::Usage("--n-list is empty".into()))?;
    let moments = MomentTable::compute(&ctx.spec, n_max);
    let table = gaussian_diagnostics(&moments, n_list)?;
    let value = GaussJson {
        spec: ctx.spec.to_string(),
        gaussian: GaussianJson::new(&table),
    };
    let mut out = Table::new(&["n", "skewness", "excess_kurtosis"]);
    for r in &value.gaussian.rows {
        out.push(vec![
            r.n.to_string(),
            format!("{:.12}", r.skewness),
            format!("{:.12}", r.excess_kurtosis),
        ]);
    }
    let mut text = ctx.render(&out, &value);
    if ctx.format == Format::Table {
        text += if value.gaussian.trend_holds {
            "trend holds\n"
        } else {
            "trend does not hold\n"
        };
    }
    Ok(Outcome::ok(text))
}

#[derive(Serialize)]
struct DrawJson {
    value: String,
    summands: u64,
}

#[derive(Serialize)]
struct SampleJson {
    spec: String,
    n: usize,
    seed: u64,
    samples: usize,
    sample_mean: String,
    exact_mean: String,
    standard_error: f64,
    z_score: f64,
    draws: Vec<DrawJson>,
}

fn sample(ctx: &Context, n: usize, samples: usize, seed: u64) -> Result<Outcome, Failure> {
    require_positive(n)?;
    if samples == 0 {
        return Err(Failure::Usage("--samples must be at least 1".into()));
    }
    let table = ctx.table(n + 1);
    let mut sampler = plrs::sample_uniform(&table, n, samples, seed);
    let mut draws = Vec::with_capacity(samples);
    while let Some(m) = sampler.next_value() {
        let d = decompose(&table, &m)?;
        draws.push(DrawJson {
            value: m.to_string(),
            summands: d.summand_count(),
        });
    }
    let stats = stats_from_polynomial(&summand_polynomial(&ctx.spec, n))?;
    let total: u64 = draws.iter().map(|d| d.summands).sum();
    let sample_mean = BigRational::new(total.into(), (samples as u64).into());
    let se =
        sqrt_ratio_f64(&(&stats.variance / BigRational::from_integer((samples as u64).into())));
    let z = ratio_to_f64(&(&sample_mean - &stats.mean)) / se;
    let value = SampleJson {
        spec: ctx.spec.to_string(),
        n,
        seed,
        samples,
        sample_mean: ratio_string(&sample_mean),
        exact_mean: ratio_string(&stats.mean),
        standard_error: se,
        z_score: z,
        draws,
    };
    let text = match ctx.format {
        Format::Json => json(&value),
        Format::Csv => {
            let mut out = Table::new(&["index", "value", "summands"]);
            for (i, d) in value.draws.iter().enumerate() {
                out.push(vec![i.to_string(), d.value.clone(), d.summands.to_string()]);
            }
            out.csv()
        }
        Format::Table => format!(
            "n = {n}  samples = {samples}  seed = {seed}\nsample mean = {:.9}\nexact mean  = {:.9}\nstandard error = {:.3e}  z = {:.3}\n",
            ratio_to_f64(&sample_mean),
            ratio_to_f64(&stats.mean),
            se,
            z
        ),
    };
    Ok(Outcome::ok(text))
}

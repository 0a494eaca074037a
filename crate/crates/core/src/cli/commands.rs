use std::fmt::Write;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CliError, Command, IrrepSelection, JobSpec};
use crate::pigroup::{classify_case, GroupCase, GroupChain};
use crate::reptheory::{
    character_table, irrep_matrices, splitting_multiplicities, CharacterTable, IrrepMatrices, SplittingMultiplicities,
    DEFAULT_SEED,
};
use crate::spinstats::{
    build_symmetrized_states, statistical_weights, verify_s_pm, ModelSpace, SpinError, SpinSign, SpinSystem,
    WeightTable,
};
use crate::tunneling::{splitting_report, SplittingReport, TunnelingModel};

pub const REPORT_SCHEMA: &str = "nrmsym-report/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrrepInfo {
    pub label: String,
    pub dim: usize,
    /// One value per conjugacy class.
    pub characters: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSizes {
    pub r: Vec<usize>,
    pub q: Vec<usize>,
    pub p: Vec<usize>,
}

/// Whether an irreducible representation of dimension `d·f/p` could fit in
/// `P`: it needs a group of order at least `(d·f/p)²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub irrep: String,
    pub dim: usize,
    pub states: usize,
    pub required_order: usize,
    pub p_order: usize,
    pub exceeds_p: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub r_order: usize,
    pub q_order: usize,
    pub p_order: usize,
    pub case: GroupCase,
    pub cosets_r_in_q: usize,
    pub cosets_q_in_p: usize,
    pub cosets_r_in_p: usize,
    pub class_sizes: ClassSizes,
    pub point_group_irreps: Vec<IrrepInfo>,
    pub bounds: Vec<BoundCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitSummary {
    pub q_irreps: Vec<IrrepInfo>,
    pub splitting: SplittingMultiplicities,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifiedState {
    pub label: String,
    pub mu: usize,
    pub sign: SpinSign,
    pub residual: f64,
    pub energy: f64,
    pub level_energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfiguration {
    /// `non-rigid` or `rigid`.
    pub name: String,
    pub q_order: usize,
    /// Number of `F_t` terms in the sum.
    pub terms: usize,
    pub model_dim: usize,
    pub states: Vec<VerifiedState>,
    /// Levels `(λ, μ)` with no spin partner of either sign.
    pub forbidden: Vec<(String, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub spin_dim: usize,
    pub configurations: Vec<VerifyConfiguration>,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportBody {
    Group(GroupSummary),
    Split(SplitSummary),
    Spectrum(SplittingReport),
    Weights(WeightTable),
    Verify(VerifySummary),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub name: String,
    pub result: ReportBody,
}

struct Context {
    chain: GroupChain,
    rtable: CharacterTable,
    qtable: CharacterTable,
}

fn context(job: &JobSpec) -> Result<Context, CliError> {
    let chain = GroupChain::new(job.frame.clone(), &job.point_group, &job.feasible, job.options.cap)?;
    let mut rtable = character_table(chain.r())?;
    rtable.relabel(&job.options.relabel_r)?;
    let mut qtable = character_table(chain.q())?;
    qtable.relabel(&job.options.relabel_q)?;
    Ok(Context { chain, rtable, qtable })
}

fn irrep_infos(table: &CharacterTable) -> Vec<IrrepInfo> {
    (0..table.num_irreps())
        .map(|l| IrrepInfo {
            label: table.labels()[l].clone(),
            dim: table.dims()[l],
            characters: table.characters()[l].clone(),
        })
        .collect()
}

fn gamma_index(job: &JobSpec, ctx: &Context) -> Result<Option<usize>, CliError> {
    let table = &ctx.rtable;
    Ok(match &job.irrep {
        None => None,
        Some(IrrepSelection::Label(label)) => Some(table.index_of(label)?),
        Some(IrrepSelection::Index(i)) if *i < table.num_irreps() => Some(*i),
        Some(IrrepSelection::Index(i)) => {
            return Err(CliError::Validation(format!(
                "irrep index {i} out of range (the point group has {})",
                table.num_irreps()
            )))
        }
        Some(IrrepSelection::Characters(row)) => {
            if row.len() != table.group().num_classes() {
                return Err(CliError::Validation(format!(
                    "character row has {} entries, the point group has {} classes",
                    row.len(),
                    table.group().num_classes()
                )));
            }
            let row: Vec<Complex64> = row.iter().map(|&v| v.into()).collect();
            Some(table.find_by_characters(&row)?)
        }
    })
}

fn gamma(job: &JobSpec, ctx: &Context) -> Result<IrrepMatrices, CliError> {
    let index = gamma_index(job, ctx)?
        .ok_or_else(|| CliError::Validation("this command needs an 'irrep' selection".into()))?;
    Ok(irrep_matrices(ctx.chain.r(), &ctx.rtable.labels()[index], &ctx.rtable)?)
}

fn model(job: &JobSpec, ctx: &Context, gamma: IrrepMatrices) -> Result<TunnelingModel, CliError> {
    let dec = ctx.chain.r_in_q().clone();
    if let Some(scale) = job.options.random_seed_scale {
        if !job.seed_blocks.is_empty() {
            return Err(CliError::Validation(
                "give either seed_blocks or options.random_seed_scale, not both".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(job.options.seed.unwrap_or(DEFAULT_SEED));
        return Ok(TunnelingModel::with_random_seeds(dec, gamma, job.e0, scale, &mut rng)?);
    }
    let q = ctx.chain.q();
    let blocks = job
        .seed_blocks
        .iter()
        .map(|(element, matrix)| {
            q.index_of(element)
                .map(|i| (i, matrix.clone()))
                .ok_or_else(|| CliError::Validation(format!("seed element {element} is not in the tunneling group")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TunnelingModel::from_element_blocks(dec, gamma, job.e0, &blocks)?)
}

fn group_summary(job: &JobSpec, ctx: &Context) -> Result<GroupSummary, CliError> {
    let chain = &ctx.chain;
    let (r, q, p) = (chain.r().order(), chain.q().order(), chain.p().order());
    let cosets = q / r;
    let selected: Vec<usize> = match gamma_index(job, ctx)? {
        Some(i) => vec![i],
        None => (0..ctx.rtable.num_irreps()).collect(),
    };
    let bounds = selected
        .into_iter()
        .map(|l| {
            let dim = ctx.rtable.dims()[l];
            let states = dim * cosets;
            BoundCheck {
                irrep: ctx.rtable.labels()[l].clone(),
                dim,
                states,
                required_order: states * states,
                p_order: p,
                exceeds_p: states * states > p,
            }
        })
        .collect();
    Ok(GroupSummary {
        r_order: r,
        q_order: q,
        p_order: p,
        case: classify_case(chain.q()),
        cosets_r_in_q: cosets,
        cosets_q_in_p: p / q,
        cosets_r_in_p: p / r,
        class_sizes: ClassSizes {
            r: chain.r().class_sizes(),
            q: chain.q().class_sizes(),
            p: chain.p().class_sizes(),
        },
        point_group_irreps: irrep_infos(&ctx.rtable),
        bounds,
    })
}

fn verify_configuration(
    name: &str,
    chain: &GroupChain,
    qtable: &CharacterTable,
    model: &TunnelingModel,
    spin: &SpinSystem,
) -> Result<VerifyConfiguration, CliError> {
    let space = ModelSpace::new(chain, model.irrep(), spin.clone())?;
    let m = splitting_multiplicities(qtable, model.dec(), model.irrep())?;
    let mut states = Vec::new();
    let mut forbidden = Vec::new();
    for (l, label) in qtable.labels().iter().enumerate() {
        for mu in 1..=m.multiplicities[l] {
            let pair = match build_symmetrized_states(chain, model, qtable, &space, label, mu, 1) {
                Ok(pair) => pair,
                Err(SpinError::ZeroVector { .. }) => {
                    forbidden.push((label.clone(), mu));
                    continue;
                }
                Err(e) => return Err(e.into()),
            };
            for state in [pair.plus, pair.minus].into_iter().flatten() {
                let report = verify_s_pm(&state.vector, &space)?;
                if report.sign != state.sign {
                    return Err(CliError::Numerical(format!(
                        "{label} level {mu} built as {} but transforms as {}",
                        state.sign.symbol(),
                        report.label()
                    )));
                }
                states.push(VerifiedState {
                    label: label.clone(),
                    mu,
                    sign: state.sign,
                    residual: report.residual,
                    energy: state.energy,
                    level_energy: pair.level_energy,
                });
            }
        }
    }
    Ok(VerifyConfiguration {
        name: name.to_string(),
        q_order: chain.q().order(),
        terms: space.q_coset_representatives().len(),
        model_dim: space.dim(),
        states,
        forbidden,
    })
}

fn verify_summary(job: &JobSpec, ctx: &Context) -> Result<VerifySummary, CliError> {
    let gamma = gamma(job, ctx)?;
    let spin = SpinSystem::new(job.frame.clone(), job.options.include_spectator_spins);
    let nonrigid = model(job, ctx, gamma.clone())?;
    let rigid_chain = ctx.chain.rigid()?;
    let rigid = TunnelingModel::new(rigid_chain.r_in_q().clone(), gamma, job.e0, Default::default())?;
    let configurations = vec![
        verify_configuration("non-rigid", &ctx.chain, &ctx.qtable, &nonrigid, &spin)?,
        verify_configuration("rigid", &rigid_chain, &ctx.rtable, &rigid, &spin)?,
    ];
    let max_residual = configurations
        .iter()
        .flat_map(|c| c.states.iter().map(|s| s.residual))
        .fold(0.0, f64::max);
    Ok(VerifySummary {
        spin_dim: spin.dim(),
        configurations,
        max_residual,
    })
}

/// Runs one command on a validated job.
pub fn run_command(command: Command, job: &JobSpec) -> Result<Report, CliError> {
    let ctx = context(job)?;
    let result = match command {
        Command::Group => ReportBody::Group(group_summary(job, &ctx)?),
        Command::Split => {
            let gamma = gamma(job, &ctx)?;
            ReportBody::Split(SplitSummary {
                q_irreps: irrep_infos(&ctx.qtable),
                splitting: splitting_multiplicities(&ctx.qtable, ctx.chain.r_in_q(), &gamma)?,
            })
        }
        Command::Spectrum => {
            let gamma = gamma(job, &ctx)?;
            let model = model(job, &ctx, gamma)?;
            ReportBody::Spectrum(splitting_report(
                &model,
                &ctx.qtable,
                job.options.cluster_tol,
                job.options.hermiticity_threshold,
            )?)
        }
        Command::Weights => {
            let spin = SpinSystem::new(job.frame.clone(), job.options.include_spectator_spins);
            ReportBody::Weights(statistical_weights(&ctx.qtable, &spin)?)
        }
        Command::Verify => ReportBody::Verify(verify_summary(job, &ctx)?),
    };
    Ok(Report {
        schema: REPORT_SCHEMA.to_string(),
        name: job.name.clone(),
        result,
    })
}

fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:>w$}"))
            .collect();
        out.push_str(padded.join("  ").trim_end());
        out.push('\n');
    };
    line(headers.to_vec(), &mut out);
    line(widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().iter().map(String::as_str).collect(), &mut out);
    for row in rows {
        line(row.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

fn complex(z: Complex64) -> String {
    let clean = |x: f64| if x.abs() < 1e-10 { 0.0 } else { x };
    let (re, im) = (clean(z.re), clean(z.im));
    if im == 0.0 {
        format!("{re:.4}")
    } else {
        format!("{re:.4}{im:+.4}i")
    }
}

fn case_name(case: GroupCase) -> &'static str {
    match case {
        GroupCase::CaseA => "A (no permutation-inversions)",
        GroupCase::CaseB => "B (half permutation-inversions)",
        GroupCase::Unsupported => "unsupported",
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl Report {
    /// Plain-text rendering.
    pub fn render(&self) -> String {
        let mut out = String::new();
        if !self.name.is_empty() {
            let _ = writeln!(out, "{}", self.name);
        }
        match &self.result {
            ReportBody::Group(g) => render_group(&mut out, g),
            ReportBody::Split(s) => render_split(&mut out, s),
            ReportBody::Spectrum(s) => render_spectrum(&mut out, s),
            ReportBody::Weights(w) => render_weights(&mut out, w),
            ReportBody::Verify(v) => render_verify(&mut out, v),
        }
        out
    }
}

fn sizes(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn render_group(out: &mut String, g: &GroupSummary) {
    let _ = writeln!(out, "|R| = {}  |Q| = {}  |P| = {}", g.r_order, g.q_order, g.p_order);
    let _ = writeln!(out, "case: {}", case_name(g.case));
    let _ = writeln!(
        out,
        "cosets: R in Q = {}, Q in P = {}, R in P = {}",
        g.cosets_r_in_q, g.cosets_q_in_p, g.cosets_r_in_p
    );
    let _ = writeln!(out, "class sizes R: {}", sizes(&g.class_sizes.r));
    let _ = writeln!(out, "class sizes Q: {}", sizes(&g.class_sizes.q));
    let _ = writeln!(out, "class sizes P: {}", sizes(&g.class_sizes.p));
    let _ = writeln!(out, "\npoint-group irreps:");
    let rows: Vec<Vec<String>> = g
        .point_group_irreps
        .iter()
        .map(|i| {
            let mut row = vec![i.label.clone(), i.dim.to_string()];
            row.extend(i.characters.iter().map(|&z| complex(z)));
            row
        })
        .collect();
    let mut headers = vec!["irrep".to_string(), "dim".to_string()];
    headers.extend((1..=g.class_sizes.r.len()).map(|k| format!("K{k}")));
    let headers: Vec<&str> = headers.iter().map(String::as_str).collect();
    out.push_str(&table(&headers, &rows));
    let _ = writeln!(out, "\nirreducibility bound (d·f/p)² against |P|:");
    let rows: Vec<Vec<String>> = g
        .bounds
        .iter()
        .map(|b| {
            vec![
                b.irrep.clone(),
                b.dim.to_string(),
                b.states.to_string(),
                b.required_order.to_string(),
                b.p_order.to_string(),
                yes_no(b.exceeds_p).to_string(),
            ]
        })
        .collect();
    out.push_str(&table(&["irrep", "dim", "states", "needed", "|P|", "exceeds"], &rows));
}

fn render_split(out: &mut String, s: &SplitSummary) {
    let m = &s.splitting;
    let _ = writeln!(
        out,
        "Γ = {} (dim {}), {} cosets, {} states",
        m.subgroup_irrep,
        m.subgroup_dim,
        m.num_cosets,
        m.induced_dim()
    );
    let rows: Vec<Vec<String>> = (0..m.labels.len())
        .filter(|&l| m.multiplicities[l] > 0)
        .map(|l| vec![m.labels[l].clone(), m.dims[l].to_string(), m.multiplicities[l].to_string()])
        .collect();
    out.push_str(&table(&["irrep", "dim", "M"], &rows));
    let _ = writeln!(out, "levels: {}", m.num_levels());
}

fn render_spectrum(out: &mut String, s: &SplittingReport) {
    let _ = writeln!(out, "E0 = {}  cluster tolerance = {:e}", s.e0, s.cluster_tolerance);
    let rows: Vec<Vec<String>> = s
        .clusters
        .iter()
        .map(|c| {
            let assigned: Vec<String> = c.assigned.iter().map(|(l, mu)| format!("{l}[{mu}]")).collect();
            vec![format!("{:.12}", c.mean_energy), c.degeneracy.to_string(), assigned.join(" ")]
        })
        .collect();
    out.push_str(&table(&["energy", "degeneracy", "levels"], &rows));
    let _ = writeln!(
        out,
        "expected degeneracies: {}  observed: {}  matched: {}",
        sizes(&s.expected_degeneracies),
        sizes(&s.observed_degeneracies()),
        yes_no(s.matched)
    );
    if s.accidental_degeneracies > 0 {
        let _ = writeln!(out, "accidental degeneracies: {}", s.accidental_degeneracies);
    }
    let _ = writeln!(
        out,
        "residuals: hermiticity {:e}  commutant {:e}  cross-sector {:e}",
        s.residuals.hermiticity, s.residuals.commutant, s.residuals.block_offdiagonal
    );
}

fn render_weights(out: &mut String, w: &WeightTable) {
    let _ = writeln!(
        out,
        "case {}  spin dimension {}{}",
        case_name(w.case),
        w.spin_dim,
        if w.include_spectators { "" } else { " (spectators excluded)" }
    );
    let case_b = w.case == GroupCase::CaseB;
    let rows: Vec<Vec<String>> = w
        .entries
        .iter()
        .map(|e| {
            let mut row = vec![e.label.clone(), e.dim.to_string()];
            row.push(e.multiplicity.for_sign(SpinSign::Plus).to_string());
            if case_b {
                row.push(e.multiplicity.for_sign(SpinSign::Minus).to_string());
            }
            row.push(e.weight.to_string());
            row.push(if e.missing { "missing".into() } else { "-".into() });
            row
        })
        .collect();
    let headers: &[&str] = if case_b {
        &["irrep", "dim", "m+", "m-", "weight", "note"]
    } else {
        &["irrep", "dim", "m", "weight", "note"]
    };
    out.push_str(&table(headers, &rows));
}

fn render_verify(out: &mut String, v: &VerifySummary) {
    let _ = writeln!(out, "spin dimension {}", v.spin_dim);
    for c in &v.configurations {
        let _ = writeln!(
            out,
            "\n{}: |Q| = {}, {} term(s), model dimension {}",
            c.name, c.q_order, c.terms, c.model_dim
        );
        let rows: Vec<Vec<String>> = c
            .states
            .iter()
            .map(|s| {
                vec![
                    s.label.clone(),
                    s.mu.to_string(),
                    s.sign.symbol().to_string(),
                    format!("{:.12}", s.energy),
                    format!("{:.3e}", s.residual),
                ]
            })
            .collect();
        out.push_str(&table(&["irrep", "μ", "sign", "energy", "residual"], &rows));
        if !c.forbidden.is_empty() {
            let f: Vec<String> = c.forbidden.iter().map(|(l, mu)| format!("{l}[{mu}]")).collect();
            let _ = writeln!(out, "no spin partner: {}", f.join(" "));
        }
    }
    let _ = writeln!(out, "\nmax residual {:e}", v.max_residual);
}

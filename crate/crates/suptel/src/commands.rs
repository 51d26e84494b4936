use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use suptel_core::cancellation::{pair_check, pairing_radius, pole_removability_report};
use suptel_core::lattice::{
    mcmc_sampler, partition_scalar, partition_vector_truncated, partition_zeta, subset_from_config,
    MeasureSampler, ModelParams, TruncatedSampler,
};
use suptel_core::rational::{self, Rational};
use suptel_core::telescoping::{
    default_tolerance, gf_coefficients, identity_report, lhs_partial_sum, rhs_binomial,
};
use suptel_core::verblunsky::{
    loop_product_real, mc_variance, moment_partition_sum, szego_mean_check, xhat_variance_exact,
    VarianceTarget,
};
use suptel_core::{Beta, Error, IntegerSubset, Result};

use crate::cli::{
    GfArgs, McKind, MomentsArgs, Oracle, PartitionArgs, ResiduesArgs, SampleArgs, VerifyArgs,
    ZetaArgs,
};
use crate::output::{
    decimal, estimate_json, exact, exact_json, float_cell, float_json, subset_json, Report,
};
use crate::parse::exact_number;

const BINARY64: &str = "binary64";

fn with_decimal(cells: &mut Vec<String>, approx: bool, values: &[&Rational]) {
    if approx {
        cells.extend(values.iter().map(|v| decimal(v)));
    }
}

pub fn verify(a: &VerifyArgs, approx: bool) -> Result<Report> {
    let beta = Beta::parse(&a.beta)?;
    let tol = match &a.tol {
        Some(t) => exact_number(t)?,
        None if a.n <= 1 => default_tolerance(&a.windows)
            .ok_or_else(|| Error::Argument("empty window schedule".into()))?,
        None => return Err(Error::Argument("--tol is required for n >= 2".into())),
    };
    let report = identity_report(a.n, &beta, &a.windows, &tol)?;
    let mut out = Report::new(
        "verify",
        json!({ "n": a.n, "beta": beta.to_string(), "M": a.windows, "tol": exact(&tol) }),
    );
    let mut columns = vec!["M", "lhs", "rhs", "abs_err", "abs_err_decimal"];
    if approx {
        columns.extend(["lhs_decimal", "rhs_decimal"]);
    }
    out.columns(&columns);
    for row in &report.rows {
        let mut cells = vec![
            row.window.to_string(),
            exact(&row.lhs),
            exact(&row.rhs),
            exact(&row.abs_err),
            decimal(&row.abs_err),
        ];
        with_decimal(&mut cells, approx, &[&row.lhs, &row.rhs]);
        out.row(
            cells,
            json!({
                "M": row.window,
                "lhs": exact_json(&row.lhs, approx),
                "rhs": exact_json(&row.rhs, approx),
                "abs_err": exact(&row.abs_err),
                "abs_err_decimal": decimal(&row.abs_err),
            }),
        );
    }
    out.field("n", json!(a.n));
    out.field("beta", json!(beta.to_string()));
    out.field("tol", json!(exact(&tol)));
    out.field("strictly_decreasing", json!(report.strictly_decreasing()));
    out.summary("tol", exact(&tol));
    out.summary("strictly decreasing", report.strictly_decreasing().to_string());
    out.verdict = Some(report.pass);
    Ok(out)
}

pub fn residues(a: &ResiduesArgs, approx: bool) -> Result<Report> {
    if let Some(text) = &a.subset {
        return pair(a, text, approx);
    }
    let n = a.n.ok_or_else(|| Error::Argument("--n is required".into()))?;
    let window = a.window.ok_or_else(|| Error::Argument("--M is required".into()))?;
    let table = pole_removability_report(n, window)?;
    let mut out = Report::new("residues", json!({ "n": n, "M": window }));
    let mut columns = vec!["q", "residue", "reflection_lemma", "gap_lemma"];
    if approx {
        columns.push("residue_decimal");
    }
    out.columns(&columns);
    for row in &table.rows {
        let mut cells = vec![
            row.q.to_string(),
            exact(&row.residue),
            row.reflection_lemma.to_string(),
            row.gap_lemma.to_string(),
        ];
        with_decimal(&mut cells, approx, &[&row.residue]);
        out.row(
            cells,
            json!({
                "q": row.q,
                "residue": exact_json(&row.residue, approx),
                "reflection_lemma": row.reflection_lemma,
                "gap_lemma": row.gap_lemma,
                "zero": row.residue.is_zero(),
            }),
        );
    }
    let covered = table.rows.iter().filter(|r| r.covered()).count();
    out.field("n", json!(n));
    out.field("M", json!(window));
    out.summary("poles covered by a lemma", format!("{covered} of {window}"));
    out.verdict = Some(table.pass);
    Ok(out)
}

fn pair(a: &ResiduesArgs, text: &str, approx: bool) -> Result<Report> {
    let set: IntegerSubset = text.parse()?;
    let q = a.q.ok_or_else(|| Error::Argument("--q is required with --subset".into()))?;
    let d = match (a.d, a.window) {
        (Some(d), _) => d,
        (None, Some(window)) => pairing_radius(&set, q, window)?.ok_or_else(|| {
            Error::Argument(format!("q = {q} is in neither lemma range for M = {window}; pass --d"))
        })?,
        (None, None) => return Err(Error::Argument("pass --d, or --M to pick d by regime".into())),
    };
    let report = pair_check(&set, q, d)?;
    let mut out = Report::new("residues", json!({ "subset": set.to_string(), "q": q, "d": d, "M": a.window }));
    out.columns(&["S", "q", "d", "R_d(S)", "L(S)", "L(R)", "C_q(S)", "C_q(R)", "sign_flip"]);
    out.row(
        vec![
            report.set.to_string(),
            q.to_string(),
            d.to_string(),
            report.reflected.to_string(),
            report.components.to_string(),
            report.reflected_components.to_string(),
            exact(&report.residue),
            exact(&report.reflected_residue),
            report.sign_flip.to_string(),
        ],
        json!({
            "set": report.set.to_string(),
            "set_intervals": subset_json(&report.set),
            "reflected": report.reflected.to_string(),
            "reflected_intervals": subset_json(&report.reflected),
            "q": q,
            "d": d,
            "components": report.components,
            "reflected_components": report.reflected_components,
            "residue": exact_json(&report.residue, approx),
            "reflected_residue": exact_json(&report.reflected_residue, approx),
            "sign_flip": report.sign_flip,
        }),
    );
    out.verdict = Some(report.sign_flip);
    Ok(out)
}

pub fn partition(a: &PartitionArgs, approx: bool) -> Result<Report> {
    let beta = Beta::parse(&a.beta)?;
    let xs = a.x.iter().map(|x| rational::parse_rational(x)).collect::<Result<Vec<_>>>()?;
    let mut out = Report::new(
        "partition",
        json!({
            "beta": beta.to_string(),
            "x": xs.iter().map(exact).collect::<Vec<_>>(),
            "N": a.max_size,
            "M": a.window,
        }),
    );
    let mut columns = vec!["species", "x", "truncated", "truncated_f64", "closed_form", "gap"];
    if approx {
        columns.push("truncated_decimal");
    }
    out.columns(&columns);
    let mut closed_product = 1.0;
    for (k, x) in xs.iter().enumerate() {
        let params = ModelParams::new(beta.clone(), x.clone(), a.window, a.max_size)?;
        let z = partition_scalar(&params)?;
        closed_product *= z.closed_form;
        let mut cells = vec![
            (k + 1).to_string(),
            exact(x),
            exact(&z.truncated_exact),
            float_cell(z.truncated),
            float_cell(z.closed_form),
            float_cell(z.gap),
        ];
        with_decimal(&mut cells, approx, &[&z.truncated_exact]);
        out.row(
            cells,
            json!({
                "species": k + 1,
                "x": exact(x),
                "truncated": exact_json(&z.truncated_exact, approx),
                "truncated_f64": float_json(z.truncated, "binary64 rounding of the exact truncation"),
                "closed_form": float_json(z.closed_form, "binary64 pow of (1 - x)^(-1/beta)"),
                "gap": float_json(z.gap, "truncation gap |Z_{N,M} - (1 - x)^(-1/beta)|"),
            }),
        );
    }
    if xs.len() > 1 {
        let product = partition_vector_truncated(&beta, &xs, a.max_size as usize, a.window)?;
        let product_f64 = rational::to_f64(&product);
        out.field("product_truncated", exact_json(&product, approx));
        out.field("product_closed_form", float_json(closed_product, BINARY64));
        out.summary("product truncated", exact(&product));
        out.summary("product truncated f64", float_cell(product_f64));
        out.summary("product closed form", float_cell(closed_product));
    }
    Ok(out)
}

pub fn zeta(a: &ZetaArgs) -> Result<Report> {
    let z = partition_zeta(a.beta, a.primes, a.max_size, a.window)?;
    let mut out = Report::new(
        "zeta",
        json!({ "beta": float_json(a.beta, "user input"), "K": a.primes, "N": a.max_size, "M": a.window }),
    );
    out.columns(&["K", "largest_prime", "truncated", "reference", "gap"]);
    out.row(
        vec![
            a.primes.to_string(),
            z.largest_prime.to_string(),
            float_cell(z.truncated),
            float_cell(z.reference),
            float_cell(z.gap),
        ],
        json!({
            "K": a.primes,
            "largest_prime": z.largest_prime,
            "truncated": float_json(z.truncated, "binary64 product of compensated per-prime sums"),
            "reference": float_json(z.reference, "Euler-Maclaurin zeta, relative error below 1e-12"),
            "gap": float_json(z.gap, "truncation gap in (K, N, M)"),
        }),
    );
    if let Some(tol) = a.tol {
        out.field("tol", float_json(tol, "user input"));
        out.summary("tol", tol.to_string());
        out.verdict = Some(z.gap <= tol);
    }
    Ok(out)
}

pub fn sample(a: &SampleArgs, seed: u64) -> Result<Report> {
    let beta = Beta::parse(&a.beta)?;
    let x = rational::parse_rational(&a.x)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws: Vec<IntegerSubset> = Vec::with_capacity(a.count);
    let mut out = Report::new(
        "sample",
        json!({
            "beta": beta.to_string(),
            "x": exact(&x),
            "count": a.count,
            "M": a.window,
            "N": a.max_size,
            "mcmc": a.mcmc,
            "steps": a.steps,
            "tail_tol": float_json(a.tail_tol, "user input"),
        }),
    );
    out.seed = Some(seed);
    if a.mcmc {
        let params = ModelParams::new(beta, x, a.window, a.max_size.unwrap_or(a.window))?;
        let steps = a.steps.unwrap_or(1000 * a.count as u64).max(a.count as u64);
        let stride = (steps / a.count.max(1) as u64).max(1);
        let mut stream = mcmc_sampler(&params, steps, rng);
        for (step, config) in (&mut stream).enumerate() {
            if (step as u64 + 1).is_multiple_of(stride) && draws.len() < a.count {
                draws.push(subset_from_config(&config));
            }
        }
        out.summary("sampler", "metropolis");
        out.summary("steps", steps.to_string());
        out.summary("acceptance rate", format!("{:.4}", stream.metropolis().acceptance_rate()));
        out.field("sampler", json!("metropolis"));
        out.field("acceptance_rate", float_json(stream.metropolis().acceptance_rate(), BINARY64));
    } else if let Some(cap) = a.max_size {
        let params = ModelParams::new(beta, x, a.window, cap)?;
        let sampler = TruncatedSampler::new(&params);
        draws.extend((0..a.count).map(|_| sampler.sample(&mut rng)));
        out.summary("sampler", "exact, truncated law");
        out.field("sampler", json!("exact-truncated"));
    } else {
        let params = ModelParams::new(beta, x, a.window, 0)?;
        let mut sampler = MeasureSampler::new(&params, a.tail_tol)?;
        for _ in 0..a.count {
            draws.push(sampler.sample(&mut rng)?);
        }
        out.summary("sampler", "exact, window enlarged per size");
        out.field("sampler", json!("exact-measure"));
    }
    out.columns(&["draw", "subset", "length", "components"]);
    for (i, s) in draws.iter().enumerate() {
        out.row(
            vec![i.to_string(), s.to_string(), s.total_length().to_string(), s.components().to_string()],
            json!({
                "draw": i,
                "subset": subset_json(s),
                "text": s.to_string(),
                "length": s.total_length(),
            }),
        );
    }
    Ok(out)
}

pub fn moments(a: &MomentsArgs, seed: Option<u64>, approx: bool) -> Result<Report> {
    let beta = Beta::parse(&a.beta)?;
    let rhs = rhs_binomial(a.n, &beta);
    let mut out = Report::new(
        "moments",
        json!({
            "n": a.n,
            "beta": beta.to_string(),
            "k": a.k,
            "mc": a.mc.map(|m| format!("{m:?}").to_lowercase()),
            "samples": a.samples,
            "k_max": a.k_max,
        }),
    );
    out.seed = seed;
    out.columns(&["quantity", "value", "target", "match"]);
    let oracles = if a.oracle.is_empty() && a.mc.is_none() {
        vec![Oracle::Binomial, Oracle::Partition]
    } else {
        a.oracle.clone()
    };
    let mut pass = true;
    for oracle in oracles {
        let (name, value, target) = match oracle {
            Oracle::Binomial => {
                let c = gf_coefficients(&beta, a.n as usize).pop().unwrap_or_else(Rational::zero);
                ("binomial (series coefficient)", c, rhs.clone())
            }
            Oracle::Partition => ("partition sum", moment_partition_sum(a.n, &beta), rhs.clone()),
            Oracle::Xhat => {
                let lhs = lhs_partial_sum(a.n, a.k.max(1), &beta)?;
                ("E|xhat_n|^2, k factors", xhat_variance_exact(a.n, a.k, &beta)?, lhs)
            }
            Oracle::Loop => {
                let lhs = lhs_partial_sum(a.n, a.k.max(1), &beta)?;
                let c = loop_product_real(&beta, a.k, a.n)?.coeff(a.n as usize);
                ("loop product c_n, k factors", c, lhs)
            }
        };
        let ok = value == target;
        pass &= ok;
        out.row(
            vec![name.to_string(), exact(&value), exact(&target), ok.to_string()],
            json!({
                "quantity": format!("{oracle:?}").to_lowercase(),
                "value": exact_json(&value, approx),
                "target": exact_json(&target, approx),
                "match": ok,
            }),
        );
    }
    if let Some(kind) = a.mc {
        let seed = seed.ok_or_else(|| Error::Argument("Monte Carlo needs a seed".into()))?;
        let beta_f = beta.to_f64();
        let rhs_f = rational::to_f64(&rhs);
        match kind {
            McKind::X | McKind::Xhat => {
                let target = if kind == McKind::X { VarianceTarget::X } else { VarianceTarget::Xhat };
                let mc = mc_variance(target, a.n as usize, beta_f, a.samples, seed, a.k_max)?;
                let ok = (mc.estimate - rhs_f).abs() <= 3.0 * mc.stderr;
                pass &= ok;
                let name = if kind == McKind::X { "MC E|x_n|^2" } else { "MC E|xhat_n|^2" };
                out.row(
                    vec![
                        name.to_string(),
                        format!("{} +- {}", float_cell(mc.estimate), float_cell(mc.stderr)),
                        exact(&rhs),
                        ok.to_string(),
                    ],
                    json!({
                        "quantity": format!("mc_{kind:?}").to_lowercase(),
                        "value": estimate_json(mc.estimate, mc.stderr),
                        "target": exact_json(&rhs, approx),
                        "match": ok,
                        "criterion": "|estimate - target| <= 3 stderr",
                        "k_max": mc.k_max,
                        "tail": float_json(mc.tail, "exact truncation bias of the k_max-factor product, binary64"),
                    }),
                );
                if kind == McKind::Xhat {
                    out.summary("k_max", mc.k_max.to_string());
                    out.summary("truncation tail", float_cell(mc.tail));
                }
            }
            McKind::Szego => {
                let r = szego_mean_check(a.n as usize, beta_f, a.samples, seed)?;
                pass &= r.pass;
                let target = beta.value() / (beta.value() + rational::int(1));
                for (name, est, se) in [
                    ("MC E[exp(-n|f_n|^2)]", r.gff_estimate, r.gff_stderr),
                    ("MC E[(1-|alpha_n|^2)^n]", r.verblunsky_estimate, r.verblunsky_stderr),
                ] {
                    let ok = (est - r.expected).abs() <= 3.0 * se;
                    out.row(
                        vec![
                            name.to_string(),
                            format!("{} +- {}", float_cell(est), float_cell(se)),
                            exact(&target),
                            ok.to_string(),
                        ],
                        json!({
                            "quantity": name,
                            "value": estimate_json(est, se),
                            "target": exact_json(&target, approx),
                            "match": ok,
                            "criterion": "|estimate - target| <= 3 stderr",
                        }),
                    );
                }
            }
        }
    }
    out.field("rhs", exact_json(&rhs, approx));
    out.summary("binom(1/beta + n - 1, n)", exact(&rhs));
    out.verdict = Some(pass);
    Ok(out)
}

pub fn gf(a: &GfArgs, approx: bool) -> Result<Report> {
    let beta = Beta::parse(&a.beta)?;
    let coeffs = gf_coefficients(&beta, a.degree);
    let mut out = Report::new("gf", json!({ "beta": beta.to_string(), "N": a.degree }));
    let mut columns = vec!["n", "c_n", "binomial", "match"];
    if approx {
        columns.push("c_n_decimal");
    }
    out.columns(&columns);
    let mut pass = true;
    for (n, c) in coeffs.iter().enumerate() {
        let rhs = rhs_binomial(n as u64, &beta);
        let ok = *c == rhs;
        pass &= ok;
        let mut cells = vec![n.to_string(), exact(c), exact(&rhs), ok.to_string()];
        with_decimal(&mut cells, approx, &[c]);
        out.row(cells, json!({ "n": n, "c_n": exact_json(c, approx), "match": ok }));
    }
    out.verdict = Some(pass);
    Ok(out)
}

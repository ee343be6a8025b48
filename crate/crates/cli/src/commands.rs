use std::collections::BTreeMap;

use anyhow::{anyhow, bail, ensure, Context, Result};
use serde_json::{json, Value};

use pullback_core::algebra::{format_rational, int, parse_rational, PiPower};
use pullback_core::arch::{self, ArchContext};
use pullback_core::hecke::{self, EvaluationPoint, Number, SatakeData};
use pullback_core::ktype::{self, HCParameter, KTypeVector};
use pullback_core::lfactors::{self, CharacterInfo, CnInput, DirichletCharacter, LMethod, LValue};
use pullback_core::verify::{self, Suite, VerifyOptions};
use pullback_core::{Rational, Scalar};

use crate::config::{IntList, Rat, RatList, Settings};
use crate::output::{text, Cell, Report, Table};
use crate::{
    ArchArgs, AssemblyArgs, BlattnerArgs, CharacterArgs, Command, ConstantsArgs, DirichletArgs, GaussArgs,
    LfactorCommand, LocalArgs, MethodArgs, SatakeArgs, VerifyArgs, VolumeArgs, ZetaArgs,
};

pub fn dispatch(cfg: &Settings, command: Command) -> Result<Report> {
    match command {
        Command::Blattner(a) => blattner(cfg, a),
        Command::Satake(a) => satake(cfg, a),
        Command::Zeta(a) => zeta(cfg, a),
        Command::Lfactor(LfactorCommand::Local(a)) => lfactor_local(cfg, a),
        Command::Lfactor(LfactorCommand::Dirichlet(a)) => lfactor_dirichlet(cfg, a),
        Command::Lfactor(LfactorCommand::Assembly(a)) => lfactor_assembly(cfg, a),
        Command::Gauss(a) => gauss(cfg, a),
        Command::Volume(a) => volume(cfg, a),
        Command::Arch(a) => arch_cmd(cfg, a),
        Command::Constants(a) => constants(cfg, a),
        Command::Verify(a) => verify_cmd(cfg, a),
    }
}

fn r(q: &Rational) -> String {
    format_rational(q)
}

fn rats(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn joined(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

/// A float derived from an exact value, with a relative rounding bound.
fn rounded(x: f64) -> Value {
    json!({ "value": x, "error_bound": 4.0 * f64::EPSILON * x.abs() })
}

fn lvalue_json(v: &LValue) -> Value {
    json!({ "re": v.re, "im": v.im, "error_bound": v.error_bound })
}

fn parse_pi_power(s: &str) -> Result<PiPower> {
    let s = s.trim();
    let (coeff, rest) = match s.find("pi") {
        None => (s, None),
        Some(i) => (s[..i].trim_end_matches('*').trim(), Some(&s[i + 2..])),
    };
    let coeff = if coeff.is_empty() { int(1) } else { parse_rational(coeff)? };
    let exp = match rest.map(str::trim) {
        None => 0,
        Some("") => 1,
        Some(e) => e
            .strip_prefix('^')
            .ok_or_else(|| anyhow!("expected pi^e in {s:?}"))?
            .trim()
            .parse()
            .with_context(|| format!("bad exponent in {s:?}"))?,
    };
    Ok(PiPower::new(coeff, exp))
}

fn blattner(cfg: &Settings, a: BlattnerArgs) -> Result<Report> {
    let IntList(l) = cfg.require(a.lambda, "lambda")?;
    let lambda = HCParameter::new(l)?;
    if !ktype::parity_condition(&lambda) {
        bail!(
            "parity condition violated: consecutive entries of lambda = ({}) must differ by odd numbers",
            joined(lambda.as_slice())
        );
    }
    let n = lambda.n();
    let weight = match cfg.pick(a.weight, "weight")? {
        None => KTypeVector::scalar(n, lambda.as_slice()[0] + 1),
        Some(IntList(w)) if w.len() == 1 => KTypeVector::scalar(n, w[0]),
        Some(IntList(w)) if w.len() == n => KTypeVector::new(w)?,
        Some(IntList(w)) => bail!("weight has {} entries, expected 1 or {n}", w.len()),
    };
    let rep = ktype::blattner_report(&lambda, &weight)?;
    let minimal = ktype::hc_to_minimal_ktype(&lambda);
    let mut table = Table::new(vec!["lambda", "ktype", "minimal_ktype", "multiplicity"]);
    table.push(vec![
        text(joined(&rep.lambda)),
        text(joined(&rep.ktype)),
        text(joined(minimal.as_slice())),
        Cell::Int(rep.multiplicity),
    ]);
    let json = json!({
        "lambda": rep.lambda,
        "ktype": rep.ktype,
        "minimal_ktype": minimal.as_slice(),
        "multiplicity": rep.multiplicity,
    });
    Ok(Report { command: "blattner", json, table, ok: true })
}

fn satake(cfg: &Settings, a: SatakeArgs) -> Result<Report> {
    let n = cfg.get(a.n, "n", 1usize)?;
    let q = cfg.get(a.q, "q", 2u64)?;
    let depth = cfg.get(a.depth, "depth", 6usize)?;
    ensure!(n >= 1, "n must be at least 1");
    let series = hecke::rationality_series(n, q, depth)?;
    let volumes = hecke::cartan_volume_series(n, q, depth)?;

    let mut table = Table::new(vec!["series", "degree", "monomial", "coefficient"]);
    let mut coefficients = Vec::new();
    let mut invariant = true;
    for (d, c) in series.coeffs().iter().enumerate() {
        invariant &= hecke::is_weyl_invariant(c, n);
        for (e, coeff) in c.terms() {
            table.push(vec![text("rationality"), Cell::Int(d as i128), text(e.iter().map(i32::to_string).collect::<Vec<_>>().join(",")), text(r(coeff))]);
        }
        coefficients.push(json!({ "degree": d, "terms": hecke::laurent_to_json(c) }));
    }
    for (d, c) in volumes.coeffs().iter().enumerate() {
        table.push(vec![text("volume"), Cell::Int(d as i128), text(""), text(r(c))]);
    }
    let json = json!({
        "n": n,
        "q": q,
        "depth": depth,
        "rationality": coefficients,
        "weyl_invariant": invariant,
        "volumes": rats(volumes.coeffs()),
        "volumes_positive_integers": hecke::all_positive_integers(&volumes),
    });
    Ok(Report { command: "satake", json, table, ok: invariant })
}

fn number_json(x: &Number, error_bound: f64) -> Value {
    json!({
        "exact": x.as_exact().map(r),
        "value": x.to_f64(),
        "error_bound": error_bound,
    })
}

fn zeta(cfg: &Settings, a: ZetaArgs) -> Result<Report> {
    let n = cfg.get(a.n, "n", 1usize)?;
    let q = cfg.get(a.q, "q", 2u64)?;
    let RatList(alphas) = cfg.get(a.alphas, "alphas", RatList(vec![int(1); n]))?;
    let Rat(chi) = cfg.get(a.chi, "chi", Rat(int(1)))?;
    let Rat(s) = cfg.get(a.s, "s", Rat(int(2)))?;
    let depth = cfg.get(a.depth, "depth", 24usize)?;
    ensure!(alphas.len() == n, "expected {n} Satake parameters, got {}", alphas.len());

    let sd = SatakeData::new(q, alphas, chi)?;
    let point = EvaluationPoint::new(s.clone());
    let c = hecke::zeta_variable(&sd, &point);
    let series = hecke::unramified_zeta_series(&sd, &point, depth)?;
    let closed = hecke::unramified_zeta_closed(&sd, &point)?;
    let closed_err = if closed.is_exact() { 0.0 } else { 16.0 * f64::EPSILON * closed.to_f64().abs() };
    let difference = (series.value.to_f64() - closed.to_f64()).abs();
    let agree = difference <= series.tail_bound + closed_err;

    let mut table = Table::new(vec!["route", "exact", "value", "error_bound"]);
    for (name, v, e) in [("series", &series.value, series.tail_bound), ("closed", &closed, closed_err)] {
        table.push(vec![
            text(name),
            text(v.as_exact().map(r).unwrap_or_default()),
            Cell::Float(v.to_f64()),
            Cell::Float(e),
        ]);
    }
    let json = json!({
        "n": n,
        "q": q,
        "alphas": rats(&sd.alphas),
        "chi": r(&sd.chi),
        "s": r(&s),
        "depth": depth,
        "zeta_variable": number_json(&c, if c.is_exact() { 0.0 } else { 4.0 * f64::EPSILON * c.to_f64().abs() }),
        "series": number_json(&series.value, series.tail_bound),
        "closed": number_json(&closed, closed_err),
        "tail_bound": series.tail_bound,
        "difference": { "value": difference, "error_bound": closed_err },
        "agree": agree,
    });
    Ok(Report { command: "zeta", json, table, ok: agree })
}

fn lfactor_local(cfg: &Settings, a: LocalArgs) -> Result<Report> {
    let q = cfg.require(a.q, "q")?;
    let RatList(alphas) = cfg.require(a.alphas, "alphas")?;
    let Rat(chi) = cfg.get(a.chi, "chi", Rat(int(1)))?;
    let sd = SatakeData::new(q, alphas, chi)?;
    let factor = lfactors::standard_lfactor(&sd);
    let value = match cfg.pick(a.s, "s")? {
        Some(s) => Some((s, factor.eval_s(s)?)),
        None => None,
    };
    let mut table = Table::new(vec!["power", "coefficient"]);
    for (i, c) in factor.denominator.coeffs().iter().enumerate() {
        table.push(vec![Cell::Int(i as i128), text(r(c))]);
    }
    let json = json!({
        "q": q,
        "alphas": rats(&sd.alphas),
        "chi": r(&sd.chi),
        "degree": factor.degree(),
        "denominator": rats(factor.denominator.coeffs()),
        "value": value.map(|(s, v)| json!({ "s": s, "exact": r(&v), "approx": rounded(Scalar::to_f64(&v)) })),
    });
    Ok(Report { command: "lfactor-local", json, table, ok: true })
}

fn character(cfg: &Settings, a: CharacterArgs, default_modulus: Option<u64>) -> Result<DirichletCharacter> {
    let modulus = match default_modulus {
        Some(d) => cfg.get(a.modulus, "modulus", d)?,
        None => cfg.require(a.modulus, "modulus")?,
    };
    match cfg.pick(a.images, "images")? {
        None => Ok(DirichletCharacter::trivial(modulus)),
        Some(IntList(v)) => {
            let images = v
                .into_iter()
                .map(|x| u64::try_from(x).map_err(|_| anyhow!("character images must be nonnegative")))
                .collect::<Result<_>>()?;
            Ok(DirichletCharacter::new(modulus, images)?)
        }
    }
}

fn method(cfg: &Settings, a: &MethodArgs, default_bound: u64) -> Result<LMethod> {
    let name = cfg.get(a.method.clone(), "method", "hurwitz".to_string())?;
    Ok(match name.as_str() {
        "hurwitz" => LMethod::Hurwitz { terms: cfg.get(a.terms, "terms", 32usize)? },
        "euler" => LMethod::EulerTruncated { primes_up_to: cfg.get(a.prime_bound, "prime_bound", default_bound)? },
        other => bail!("unknown method '{other}', expected hurwitz or euler"),
    })
}

fn lvalue_table(rows: &[(&str, LValue)]) -> Table {
    let mut t = Table::new(vec!["quantity", "re", "im", "error_bound"]);
    for (name, v) in rows {
        t.push(vec![text(*name), Cell::Float(v.re), Cell::Float(v.im), Cell::Float(v.error_bound)]);
    }
    t
}

fn lfactor_dirichlet(cfg: &Settings, a: DirichletArgs) -> Result<Report> {
    let chi = character(cfg, a.character, None)?;
    let m = method(cfg, &a.method, 10_000)?;
    let s = cfg.get(a.s, "s", 2.0f64)?;
    let IntList(omit) = cfg.get(a.omit, "omit", IntList(Vec::new()))?;
    let omit = omit
        .into_iter()
        .map(|p| u64::try_from(p).ok().filter(|&p| lfactors::is_prime(p)).ok_or_else(|| anyhow!("{p} is not a prime")))
        .collect::<Result<Vec<_>>>()?;
    let v = lfactors::partial_l_omit(&chi, s, &omit, m)?;
    let json = json!({
        "character": CharacterInfo::from(&chi),
        "s": s,
        "omit": omit,
        "method": m,
        "value": lvalue_json(&v),
    });
    Ok(Report { command: "lfactor-dirichlet", json, table: lvalue_table(&[("L", v)]), ok: true })
}

fn lfactor_assembly(cfg: &Settings, a: AssemblyArgs) -> Result<Report> {
    let IntList(k) = cfg.require(a.k, "k")?;
    let kvec = KTypeVector::new(k)?;
    let r_val = cfg.require(a.r, "r")?;
    let level_n = cfg.get(a.level, "level", 1u64)?;
    ensure!(level_n >= 1, "level must be positive");
    let chi = character(cfg, a.character, Some(1))?;
    let prime_bound = cfg.get(a.method.prime_bound, "prime_bound", 50u64)?;
    let m = method(cfg, &a.method, prime_bound)?;
    let level = lfactors::level_factorization(level_n);
    let siegel_volume = cfg.pick(a.siegel_volume, "siegel_volume")?.map(|s| parse_pi_power(&s)).transpose()?;

    let table_path = cfg.pick(a.table, "table")?;
    let trivial = cfg.flag(a.trivial_table, "trivial_table")?;
    let (source, satake_table) = match table_path {
        Some(path) => {
            let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            let entries: Vec<SatakeData> =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            let mut map = BTreeMap::new();
            for e in entries {
                if map.insert(e.q, e).is_some() {
                    bail!("duplicate Satake data in {}", path.display());
                }
            }
            (path.display().to_string(), map)
        }
        None if trivial => {
            let map = lfactors::primes_up_to(prime_bound)
                .into_iter()
                .map(|p| Ok((p, SatakeData::trivial(kvec.n(), p)?)))
                .collect::<Result<_>>()?;
            ("trivial".to_string(), map)
        }
        None => bail!("supply Satake data with --table FILE or pass --trivial-table"),
    };

    let input = CnInput {
        kvec: kvec.clone(),
        r: r_val,
        satake_table,
        chi: chi.clone(),
        level: level.clone(),
        prime_bound,
        method: m,
        siegel_volume,
    };
    let v = lfactors::c_n_assembly(&input)?;
    let table = lvalue_table(&[
        ("numerator", v.numerator),
        ("denominator_r_plus_2", v.denominators[0]),
        ("denominator_2r", v.denominators[1]),
        ("denominator_2r_plus_2", v.denominators[2]),
        ("value", v.value),
    ]);
    let json = json!({
        "k": kvec.as_slice(),
        "r": r_val,
        "level": level_n,
        "character": CharacterInfo::from(&chi),
        "prime_bound": prime_bound,
        "satake_table": source,
        "prefactor": v.prefactor.to_string(),
        "c_krn": r(&v.c_krn),
        "numerator": lvalue_json(&v.numerator),
        "denominators": v.denominators.iter().map(lvalue_json).collect::<Vec<_>>(),
        "value": lvalue_json(&v.value),
    });
    Ok(Report { command: "lfactor-assembly", json, table, ok: true })
}

fn gauss(cfg: &Settings, a: GaussArgs) -> Result<Report> {
    let modulus: u64 = cfg.require(a.modulus, "modulus")?;
    let chars = match cfg.pick(a.images, "images")? {
        Some(images) => vec![character(cfg, CharacterArgs { modulus: Some(modulus), images: Some(images) }, None)?],
        None => DirichletCharacter::all(modulus),
    };
    let primitive_only = cfg.flag(a.primitive_only, "primitive_only")?;
    let mut table = Table::new(vec![
        "images", "conductor", "primitive", "parity", "order", "re", "im", "norm_squared", "error_bound",
    ]);
    let mut entries = Vec::new();
    for chi in chars.iter().filter(|c| !primitive_only || c.is_primitive()) {
        let g = lfactors::gauss_sum(chi);
        // Each of the N terms carries a rounding error of a few ulps.
        let err = 4.0 * f64::EPSILON * modulus as f64;
        let info = CharacterInfo::from(chi);
        let ints: Vec<i64> = chi.images().iter().map(|&x| x as i64).collect();
        table.push(vec![
            text(joined(&ints)),
            Cell::Int(info.conductor as i128),
            Cell::Bool(info.primitive),
            Cell::Int(info.parity as i128),
            Cell::Int(info.order as i128),
            Cell::Float(g.re),
            Cell::Float(g.im),
            Cell::Float(g.norm_sqr()),
            Cell::Float(err),
        ]);
        entries.push(json!({
            "character": info,
            "gauss_sum": { "re": g.re, "im": g.im, "error_bound": err },
            "norm_squared": { "value": g.norm_sqr(), "error_bound": 2.0 * err * g.norm() + err * err },
        }));
    }
    let json = json!({ "modulus": modulus, "characters": entries });
    Ok(Report { command: "gauss", json, table, ok: true })
}

fn volume(cfg: &Settings, a: VolumeArgs) -> Result<Report> {
    let n = cfg.get(a.n, "n", 2usize)?;
    let level_n = cfg.require(a.level, "level")?;
    ensure!(n >= 1, "n must be at least 1");
    ensure!(level_n >= 1, "level must be positive");
    let mut table = Table::new(vec!["p", "m", "order", "volume"]);
    let mut rows = Vec::new();
    let mut total = int(1);
    for (p, m) in lfactors::level_factorization(level_n) {
        let order = lfactors::sp_order_mod(n, p, m)?;
        let vol = lfactors::principal_congruence_volume(n, p, m)?;
        total *= vol.clone();
        table.push(vec![Cell::Int(p as i128), Cell::Int(m as i128), text(order.to_string()), text(r(&vol))]);
        rows.push(json!({ "p": p, "m": m, "order": order.to_string(), "volume": r(&vol) }));
    }
    let siegel = arch::siegel_volume(n);
    let json = json!({
        "n": n,
        "level": level_n,
        "factors": rows,
        "volume": r(&total),
        "siegel_volume": { "exact": siegel.to_string(), "approx": rounded(siegel.to_f64()) },
    });
    Ok(Report { command: "volume", json, table, ok: true })
}

fn arch_cmd(cfg: &Settings, a: ArchArgs) -> Result<Report> {
    let IntList(k) = cfg.require(a.k, "k")?;
    let ctx = ArchContext::new(KTypeVector::new(k)?)?;
    let ak = arch::a_k(&ctx);
    let dual_route = arch::composed_route(&ctx)? == ak.rational;
    let mut table = Table::new(vec!["r", "z", "a_k"]);
    let mut values = Vec::new();
    for rr in arch::critical_points(&ctx) {
        let v = ak.eval_integer(rr - 1)?;
        table.push(vec![Cell::Int(rr as i128), Cell::Int(rr as i128 - 1), text(r(&v))]);
        values.push(json!({ "r": rr, "z": rr - 1, "a_k": r(&v) }));
    }
    let b = match cfg.pick(a.s, "s")? {
        None => None,
        Some(Rat(s)) => {
            let v = arch::b_lambda_general(&ctx)?.eval_s(&s, ctx.n)?;
            let (re, im) = v.to_complex();
            let err = 8.0 * f64::EPSILON * re.hypot(im);
            Some(json!({
                "s": r(&s),
                "phase": v.constant.phase,
                "pi_power": v.constant.value.to_string(),
                "two_exp": r(&v.two_exp),
                "re": re,
                "im": im,
                "error_bound": err,
            }))
        }
    };
    let json = json!({
        "k": ctx.kvec.as_slice(),
        "lambda": ctx.lambda.as_slice(),
        "n": ctx.n,
        "phase": ctx.phase(),
        "a_k": {
            "two_exp": format!("{}*z + {}", r(&ak.two_exp_z), r(&ak.two_exp_const)),
            "rational": ak.rational.to_string(),
        },
        "dual_route": dual_route,
        "critical_values": values,
        "b_lambda": b,
    });
    Ok(Report { command: "arch", json, table, ok: dual_route })
}

fn constants(cfg: &Settings, a: ConstantsArgs) -> Result<Report> {
    let IntList(k) = cfg.get(a.k, "k", IntList(vec![10, 10]))?;
    let kvec = KTypeVector::new(k)?;
    let ctx = ArchContext::new(kvec.clone())?;
    let top = ctx.k_j(ctx.n) - ctx.n as i64;
    let r_min = cfg.get(a.r_min, "r_min", 1)?;
    let r_max = cfg.get(a.r_max, "r_max", top)?;
    ensure!(r_min <= r_max, "empty range: r_min = {r_min} > r_max = {r_max}");
    let level_n = cfg.get(a.level, "level", 1u64)?;
    ensure!(level_n >= 1, "level must be positive");
    let level = lfactors::level_factorization(level_n);
    let volume = match cfg.pick(a.siegel_volume, "siegel_volume")? {
        Some(s) => parse_pi_power(&s)?,
        None => arch::siegel_volume(ctx.n),
    };
    let ak = arch::a_k(&ctx);

    let mut table = Table::new(vec!["r", "a_k", "c_krn"]);
    let mut rows = Vec::new();
    for rr in (r_min..=r_max).filter(|&rr| arch::is_critical(&ctx, rr)) {
        let a_val = ak.eval_integer(rr - 1)?;
        let c = arch::c_krn_n_with_volume(&kvec, rr, &level, &volume)?;
        table.push(vec![Cell::Int(rr as i128), text(r(&a_val)), text(r(&c))]);
        rows.push(json!({ "r": rr, "a_k": r(&a_val), "c_krn": r(&c) }));
    }
    ensure!(
        !rows.is_empty(),
        "empty critical range: no r in [{r_min}, {r_max}] with 1 <= r <= {top} and r = {top} mod 2"
    );
    let json = json!({
        "k": kvec.as_slice(),
        "n": ctx.n,
        "level": level_n,
        "siegel_volume": volume.to_string(),
        "rows": rows,
    });
    Ok(Report { command: "constants", json, table, ok: true })
}

fn verify_cmd(cfg: &Settings, a: VerifyArgs) -> Result<Report> {
    let suite: Suite = cfg.get(a.suite, "suite", "all".to_string())?.parse()?;
    let opts = VerifyOptions {
        seed: cfg.get(a.seed, "seed", 7u64)?,
        tolerance: cfg.pick(a.tolerance, "tolerance")?,
        mc_budget: cfg.get(a.mc_budget, "mc_budget", verify::MC_BUDGET)?,
    };
    ensure!(opts.mc_budget > 0, "mc-budget must be positive");
    let report = verify::run(suite, &opts);
    let mut table = Table::new(vec![
        "suite", "name", "estimate", "error_bound", "reference", "relative_difference", "tolerance", "passed",
    ]);
    for c in &report.checks {
        table.push(vec![
            text(c.suite),
            text(c.name.clone()),
            Cell::Float(c.estimate),
            Cell::Float(c.error_bound),
            Cell::Float(c.reference),
            Cell::Float(c.relative_difference),
            Cell::Float(c.tolerance),
            Cell::Bool(c.passed),
        ]);
    }
    let ok = report.passed;
    Ok(Report { command: "verify", json: serde_json::to_value(&report)?, table, ok })
}

use std::io::Read;
use std::sync::Arc;

use metahecke::cocycle::{
    commutator_block_diagonal, commutator_field_torus, sigma_diagonal, BlockTorusElem, TorusBlock, TorusBlockJson,
};
use metahecke::hecke::{AlgebraId, HeckeElement};
use metahecke::hilbert::{hilbert_symbol_unramified_routes, ElemJson, ExtKind};
use metahecke::hmodules::{induce, reducibility_point, CharacterPoint};
use metahecke::scalar::{format_rational, parse_rational, RatFunc};
use metahecke::typeparams::{
    closed_form_solution, invariants_n0_d0_s0, l0_from_green, scan_w0, solve_congruence, w0_equals_w0prime,
    CoverFamily, ScanBounds, TypeParams,
};
use metahecke::{CoverParams, Extension, FiniteField, LocalField, LocalFieldElem, MuN};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::output::{domain, envelope, max_q, CliError};
use crate::{
    AlgebraArgs, Command, CommutatorArgs, CongruenceArgs, CoverArgs, Family, FieldArgs, FlavorArg, GreenArgs,
    HeckeMulArgs, HilbertArgs, InduceArgs, ReducibilityArgs, ScanArgs, TorusInput, TypeArgs,
};

pub fn run(cmd: &Command, seed: u64) -> Result<Value, CliError> {
    let name = cmd.name();
    match cmd {
        Command::Hilbert(a) => envelope(name, seed, a, &hilbert(a)?),
        Command::Commutator(a) => commutator(a, seed).and_then(|r| envelope(name, seed, a, &r)),
        Command::Congruence(a) => envelope(name, seed, a, &congruence(a)?),
        Command::Params(a) => envelope(name, seed, a, &params(a)?),
        Command::W0check(a) => envelope(name, seed, a, &w0check(a)?),
        Command::GreenL0(a) => envelope(name, seed, a, &green(a)?),
        Command::HeckeMul(a) => envelope(name, seed, a, &hecke_mul(a)?),
        Command::Induce(a) => envelope(name, seed, a, &induce_cmd(a)?),
        Command::Reducibility(a) => envelope(name, seed, a, &reducibility(a)?),
        Command::ScanW0(a) => envelope(name, seed, a, &scan(a)?),
    }
}

fn base_field(f: &FieldArgs, n: u32) -> Result<LocalField, CliError> {
    let res = FiniteField::with_bound(f.p, f.k, max_q()?)?;
    Ok(LocalField::new(Arc::new(res), n)?)
}

fn cover(a: &CoverArgs) -> Result<CoverParams, CliError> {
    let fixed = |what: &str| CliError::Input(format!("--{what} is fixed by the {:?} family", a.cover.unwrap()));
    Ok(match a.cover {
        Some(Family::Kp) => {
            if a.d.is_some() {
                return Err(fixed("d"));
            }
            CoverParams::kp(a.n, a.c.unwrap_or(0))?
        }
        Some(Family::Savin) => {
            if a.c.is_some() {
                return Err(fixed("c"));
            }
            if a.d.is_some() {
                return Err(fixed("d"));
            }
            CoverParams::savin(a.n)?
        }
        None => match (a.c, a.d) {
            (Some(c), Some(d)) => CoverParams::new(a.n, c, d)?,
            _ => return Err(CliError::Input("give --cover kp|savin, or both --c and --d".into())),
        },
    })
}

fn cover_json(p: &CoverParams) -> Value {
    json!({ "n": p.n, "c": p.c, "d": p.d, "twist": p.twist(), "kp": p.is_kp(), "savin": p.is_savin() })
}

fn hilbert(a: &HilbertArgs) -> Result<Value, CliError> {
    let k = base_field(&a.field, a.n)?;
    let x = k.from_json(a.x)?;
    if a.f <= 1 {
        let y = k.from_json(a.y)?;
        let s = k.hilbert_symbol(&x, &y)?;
        return Ok(json!({ "q": k.q(), "n": a.n, "exponent": s.e }));
    }
    let ext = Extension::unramified_with_bound(&k, a.f, max_q()?)?;
    let y = ext.field.from_json(a.y)?;
    let r = hilbert_symbol_unramified_routes(&x, &y, &ext)?;
    Ok(json!({
        "q": k.q(),
        "q_ext": ext.field.q(),
        "n": a.n,
        "exponent": r.in_extension.e,
        "routes": { "in_extension": r.in_extension.e, "via_norm": r.via_norm.e },
        "agree": r.in_extension == r.via_norm,
    }))
}

#[derive(Serialize)]
struct Routes {
    field_torus: u32,
    block_diagonal: u32,
    sigma_difference: u32,
    agree: bool,
}

fn diagonal_routes(
    k: &LocalField,
    p: &CoverParams,
    x: &[LocalFieldElem],
    y: &[LocalFieldElem],
) -> Result<Routes, CliError> {
    let ft = commutator_field_torus(&BlockTorusElem::diagonal(k, x), &BlockTorusElem::diagonal(k, y), p)?;
    // a 1×1 block commutes with everything up to (x, y)^{2c}
    let blocks = x
        .iter()
        .zip(y)
        .map(|(a, b)| Ok(k.hilbert_symbol(a, b)?.scale(2 * p.c())))
        .collect::<Result<Vec<MuN>, CliError>>()?;
    let bd = commutator_block_diagonal(&blocks, x, y, k, p)?;
    let sd = sigma_diagonal(x, y, k, p)?.add(sigma_diagonal(y, x, k, p)?.neg());
    Ok(Routes {
        field_torus: ft.e,
        block_diagonal: bd.e,
        sigma_difference: sd.e,
        agree: ft == bd && bd == sd,
    })
}

fn elems(k: &LocalField, xs: &[ElemJson]) -> Result<Vec<LocalFieldElem>, CliError> {
    xs.iter().map(|&j| Ok(k.from_json(j)?)).collect()
}

fn torus(k: &LocalField, blocks: &[TorusBlockJson], bound: u32) -> Result<BlockTorusElem, CliError> {
    let mut out = Vec::with_capacity(blocks.len());
    for b in blocks {
        let ext = match b.kind {
            ExtKind::Unramified => Extension::unramified_with_bound(k, b.degree, bound)?,
            ExtKind::Ramified => Extension::ramified(k, b.degree)?,
        };
        let u = ext.field.from_json(b.elem)?;
        out.push(TorusBlock { ext: Arc::new(ext), u });
    }
    Ok(BlockTorusElem { blocks: out })
}

fn read_input(path: &std::path::Path) -> Result<String, CliError> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    }
    Ok(text)
}

fn commutator(a: &CommutatorArgs, seed: u64) -> Result<Value, CliError> {
    let p = cover(&a.cover)?;
    let k = base_field(&a.field, p.n)?;
    if let Some(path) = &a.input {
        let input: TorusInput =
            serde_json::from_str(&read_input(path)?).map_err(|e| CliError::Input(format!("bad torus input: {e}")))?;
        let bound = max_q()?;
        let (u, v) = (torus(&k, &input.u, bound)?, torus(&k, &input.v, bound)?);
        let c = commutator_field_torus(&u, &v, &p)?;
        return Ok(json!({ "cover": cover_json(&p), "q": k.q(), "commutator": c.e }));
    }
    if let Some(count) = a.random {
        if a.t == 0 {
            return Err(CliError::Input("--t must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = k.q() as i64 - 1;
        let draw = |rng: &mut ChaCha8Rng| -> Vec<LocalFieldElem> {
            (0..a.t)
                .map(|_| k.elem(rng.gen_range(-3..=3), rng.gen_range(0..h)))
                .collect()
        };
        let mut disagreements = Vec::new();
        for i in 0..count {
            let (x, y) = (draw(&mut rng), draw(&mut rng));
            let r = diagonal_routes(&k, &p, &x, &y)?;
            if !r.agree {
                disagreements
                    .push(json!({ "index": i, "x": elems_json(&k, &x), "y": elems_json(&k, &y), "routes": r }));
            }
        }
        return Ok(json!({
            "cover": cover_json(&p),
            "q": k.q(),
            "checked": count,
            "disagreements": disagreements,
            "agree": disagreements.is_empty(),
        }));
    }
    let (Some(xs), Some(ys)) = (&a.x, &a.y) else {
        return Err(CliError::Input("give --x and --y, --input, or --random".into()));
    };
    if xs.len() != ys.len() {
        return Err(CliError::Input(format!(
            "--x has {} entries, --y has {}",
            xs.len(),
            ys.len()
        )));
    }
    let r = diagonal_routes(&k, &p, &elems(&k, xs)?, &elems(&k, ys)?)?;
    Ok(json!({ "cover": cover_json(&p), "q": k.q(), "commutator": r.field_torus, "routes": r }))
}

fn elems_json(k: &LocalField, xs: &[LocalFieldElem]) -> Vec<ElemJson> {
    xs.iter().map(|x| k.to_json(x)).collect()
}

fn congruence(a: &CongruenceArgs) -> Result<Value, CliError> {
    let p = cover(&a.cover)?;
    let lat = solve_congruence(&p, &a.l, &a.r)?;
    let family = if p.is_savin() {
        Some(CoverFamily::Savin)
    } else if p.is_kp() {
        Some(CoverFamily::Kp)
    } else {
        None
    };
    let mut out = json!({ "cover": cover_json(&p), "hnf": lat.basis, "index": lat.det() });
    if let Some(f) = family {
        let closed = closed_form_solution(&p, &a.l, &a.r, f)?;
        out["family"] = json!(f);
        out["agree"] = json!(closed == lat);
        out["closed_form"] = json!(closed.basis);
    }
    Ok(out)
}

fn type_params(a: &TypeArgs) -> Result<(TypeParams, Vec<String>), CliError> {
    let p = cover(&a.cover)?;
    let tp = match a.m0 {
        Some(m0) => TypeParams::new(p, a.r0, m0, a.l0, a.t, a.f)?,
        None => TypeParams {
            f: a.f,
            ..TypeParams::for_invariants(p, a.r0, a.l0, a.t)?
        },
    };
    let warnings = tp.divisibility_issues();
    Ok((tp, warnings))
}

fn params(a: &TypeArgs) -> Result<Value, CliError> {
    let (tp, warnings) = type_params(a)?;
    let inv = invariants_n0_d0_s0(&tp)?;
    Ok(json!({
        "cover": cover_json(&tp.cover),
        "n0": inv.n0,
        "d0": inv.d0,
        "s0": inv.s0,
        "s_star": format!("1/{}", 2 * inv.n0),
        "warnings": warnings,
    }))
}

fn w0check(a: &TypeArgs) -> Result<Value, CliError> {
    let (tp, warnings) = type_params(a)?;
    let cmp = w0_equals_w0prime(&tp)?;
    Ok(json!({
        "cover": cover_json(&tp.cover),
        "equal": cmp.equal,
        "index": cmp.index,
        "t0": cmp.t0.basis,
        "w0prime": cmp.w0prime.basis,
        "warnings": warnings,
    }))
}

fn green(a: &GreenArgs) -> Result<Value, CliError> {
    // the character lives on F_{q^m0}^×, so the field cap applies to q^m0
    let bound = max_q()? as u64;
    if a.q.checked_pow(a.m0).is_none_or(|big| big > bound) {
        return Err(domain(
            "field",
            format!("q^m0 = {}^{} exceeds the field bound {bound}", a.q, a.m0),
        ));
    }
    let g = l0_from_green(a.q, a.m0, a.n, a.xi)?;
    Ok(json!({ "o": g.o, "l": g.l }))
}

fn algebra(a: &AlgebraArgs) -> Result<AlgebraId, CliError> {
    if a.t == 0 {
        return Err(CliError::Input("--t must be positive".into()));
    }
    if a.s == 0 {
        return Err(CliError::Input("--s must be positive".into()));
    }
    let flavor = a.flavor.unwrap_or(if a.s == 1 {
        FlavorArg::Affine
    } else {
        FlavorArg::Twisted
    });
    match flavor {
        FlavorArg::Twisted => Ok(AlgebraId::twisted(a.t, a.s)),
        _ if a.s != 1 => Err(CliError::Input(format!("--s {} needs the twisted algebra", a.s))),
        FlavorArg::Affine => Ok(AlgebraId::affine(a.t)),
        FlavorArg::Finite => Ok(AlgebraId::finite(a.t)),
    }
}

fn hecke_mul(a: &HeckeMulArgs) -> Result<Value, CliError> {
    let alg = algebra(&a.alg)?;
    let lhs = HeckeElement::parse_word(alg, &a.lhs)?;
    let rhs = HeckeElement::parse_word(alg, &a.rhs)?;
    let prod = lhs.multiply(&rhs)?;
    Ok(json!({ "algebra": alg, "product": prod.to_word_map(), "terms": prod.to_json() }))
}

fn induce_cmd(a: &InduceArgs) -> Result<Value, CliError> {
    let alg = algebra(&a.alg)?;
    let x = a.x.iter().map(|s| RatFunc::parse(s)).collect::<Result<Vec<_>, _>>()?;
    let zval = a.zval.as_deref().map(RatFunc::parse).transpose()?;
    let m = induce(alg, CharacterPoint::new(x, zval))?;
    let mut out = json!({ "module": m.to_json(), "failed_relation": m.failed_relation() });
    if let Some(spec) = &a.specialize {
        let raw = spec.trim();
        let v = parse_rational(raw.strip_prefix("v=").unwrap_or(raw))?;
        let sm = m.specialize(&v)?;
        let subspace = sm.invariant_subspace().map(|b| {
            b.iter()
                .map(|row| row.iter().map(format_rational).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        });
        out["specialized"] = json!({
            "v": format_rational(&v),
            "irreducible": sm.is_irreducible(),
            "algebra_dimension": sm.algebra_dimension(),
            "constituents": sm.one_dim_constituents()?,
            "invariant_subspace": subspace,
        });
    }
    Ok(out)
}

fn reducibility(a: &ReducibilityArgs) -> Result<Value, CliError> {
    let (tp, warnings) = type_params(&a.params)?;
    let v = parse_rational(&a.v)?;
    let mut out = serde_json::to_value(reducibility_point(&tp, &v)?).expect("report serializes");
    out["warnings"] = json!(warnings);
    Ok(out)
}

fn scan(a: &ScanArgs) -> Result<Value, CliError> {
    let rows = scan_w0(ScanBounds {
        n_max: a.n_max,
        t_max: a.t_max,
        r0_max: a.r0_max,
    })?;
    let nontrivial = rows.iter().filter(|r| r.index != 1).count();
    let family_failures = rows.iter().filter(|r| (r.kp || r.savin) && r.index != 1).count();
    Ok(json!({
        "rows": rows,
        "summary": {
            "total": rows.len(),
            "index_one": rows.len() - nontrivial,
            "nontrivial": nontrivial,
            "family_failures": family_failures,
        },
    }))
}

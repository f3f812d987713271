//! Subcommand runners: parse inputs, call into the library, and package the
//! JSON result (plus CSV for the sequence-valued reports).

use crate::{
    resolve_cap, CheckArgs, CriteriaArgs, EntropyArgs, KahaneArgs, NormArgs, RunOutput, XiArgs,
};
use pf_core::algebra::element_from_json;
use pf_core::error::{Error, Result};
use pf_core::group::GroupSpec;
use pf_core::pnorm::{pf_norm, BoydOptions, PExponent};
use pf_core::rademacher::kahane_constant_scan;
use pf_core::suite::run_suite;
use pf_core::walk::{
    avez_entropy, criteria_report, furstenberg_entropy, harmonic_measure, speed, xi_function,
    AvezOptions, Measure,
};
use serde_json::json;

fn parse_group(s: &str) -> Result<GroupSpec> {
    s.parse()
}

/// `srw`, `lazy:<q>`, or a path to a measure JSON file
/// `{"terms":[{"word":"a","mass":0.25}, ...]}`.
fn parse_measure(spec: &GroupSpec, s: &str) -> Result<Measure> {
    if s == "srw" {
        return Measure::srw(spec);
    }
    if let Some(q) = s.strip_prefix("lazy:") {
        let q: f64 = q
            .parse()
            .map_err(|_| Error::structural(format!("invalid lazy mass in {s:?}")))?;
        return Measure::lazy(spec, q);
    }
    let text = std::fs::read_to_string(s)
        .map_err(|e| Error::structural(format!("cannot read measure file {s:?}: {e}")))?;
    #[derive(serde::Deserialize)]
    struct TermFile {
        word: String,
        mass: f64,
    }
    #[derive(serde::Deserialize)]
    struct MeasureFile {
        terms: Vec<TermFile>,
    }
    let file: MeasureFile = serde_json::from_str(&text)
        .map_err(|e| Error::structural(format!("measure file parse error: {e}")))?;
    let terms = file
        .terms
        .into_iter()
        .map(|t| Ok((spec.parse_word(&t.word)?, t.mass)))
        .collect::<Result<Vec<_>>>()?;
    Measure::new(spec.clone(), terms)
}

pub(crate) fn norm(args: &NormArgs) -> Result<RunOutput> {
    let spec = parse_group(&args.group)?;
    let text = std::fs::read_to_string(&args.element)
        .map_err(|e| Error::structural(format!("cannot read element file {:?}: {e}", args.element)))?;
    let f = element_from_json(&text)?;
    if f.spec() != &spec {
        return Err(Error::structural(format!(
            "--group {} does not match the element file's group {}",
            spec,
            f.spec()
        )));
    }
    let p = PExponent::new(args.p)?;
    if !p.is_interior() {
        return Err(Error::precondition("norm estimation needs p in (1, oo)"));
    }
    let cap = resolve_cap(args.mem_cap);
    let opts = BoydOptions {
        restarts: args.restarts,
        tol: args.tol,
        max_iter: args.max_iter,
        seed: args.seed,
    };
    let est = pf_norm(&f, &p, args.radius, args.amplify, &opts, cap)?;
    let mem = est_ball_bytes(&spec, args.radius, f.dim() * args.amplify);
    let result = serde_json::to_value(&est).expect("estimate serializes");
    Ok(RunOutput::json(result, mem))
}

fn est_ball_bytes(spec: &GroupSpec, radius: usize, block: usize) -> usize {
    // six working vectors of ball_len * block complex entries
    let mut len = 1u128;
    if let GroupSpec::Free { rank } = spec {
        for n in 1..=radius {
            len += pf_core::group::free_sphere_size(*rank, n);
        }
    }
    (len as usize).saturating_mul(block * 16 * 6)
}

pub(crate) fn entropy(args: &EntropyArgs) -> Result<RunOutput> {
    let spec = parse_group(&args.group)?;
    let mu = parse_measure(&spec, &args.measure)?;
    let cap = resolve_cap(args.mem_cap);
    let avez = avez_entropy(
        &mu,
        &AvezOptions {
            n_max: args.nmax,
            mc_samples: args.mc_samples,
            seed: args.seed,
            cap,
        },
    )?;
    let sp = speed(&mu, args.speed_n)?;
    let furstenberg = if matches!(spec, GroupSpec::Free { rank } if rank >= 2)
        && mu.is_nearest_neighbor()
    {
        let nu = harmonic_measure(&mu)?;
        Some(furstenberg_entropy(&mu, &nu)?)
    } else {
        None
    };
    let scale = if args.bits { 1.0 / std::f64::consts::LN_2 } else { 1.0 };
    let units = if args.bits { "bits" } else { "nats" };
    let h_raw: Vec<serde_json::Value> = avez
        .h_raw
        .iter()
        .map(|&(n, h)| json!([n, h * scale]))
        .collect();
    let h_over_n: Vec<serde_json::Value> = avez
        .h_over_n
        .iter()
        .map(|&(n, h)| json!([n, h * scale]))
        .collect();
    let speed_seq: Vec<serde_json::Value> = sp
        .sequence
        .iter()
        .map(|&(n, v)| json!([n, v]))
        .collect();
    let mut csv = String::from("series,n,value\n");
    for &(n, h) in &avez.h_raw {
        csv.push_str(&format!("H_n,{n},{}\n", h * scale));
    }
    for &(n, h) in &avez.h_over_n {
        csv.push_str(&format!("H_n_over_n,{n},{}\n", h * scale));
    }
    for &(n, v) in &sp.sequence {
        csv.push_str(&format!("speed,{n},{v}\n"));
    }
    // criteria intervals from the estimated (h, ell) with the computed
    // boundary entropy as h_X; the boundary here is the full Poisson
    // boundary, so interval (iii) is empty by maximality
    let criteria = match furstenberg {
        Some(h_x) if avez.extrapolated_h > 0.0 && sp.extrapolated > 0.0 => criteria_report(
            spec.num_generators(),
            avez.extrapolated_h,
            sp.extrapolated,
            h_x,
            2.0,
        )
        .ok()
        .map(|rep| serde_json::to_value(&rep).expect("report serializes")),
        _ => None,
    };
    let result = json!({
        "units": units,
        "avez": {
            "h_raw": h_raw,
            "h_over_n": h_over_n,
            "extrapolated_h": avez.extrapolated_h * scale,
            "aitken_h_over_n": avez.aitken_h_over_n.map(|v| v * scale),
            "fekete_upper": avez.fekete_upper * scale,
            "exact_n_max": avez.exact_n_max,
            "diagnostics": {
                "ratio_nonincreasing": avez.ratio_nonincreasing,
                "max_subadditivity_defect": avez.max_subadditivity_defect * scale,
            },
            "mc": avez.mc.as_ref().map(|mc| json!({
                "samples": mc.samples,
                "biased_low": mc.biased_low,
                "estimates": mc.estimates.iter().map(|&(n, h)| json!([n, h * scale])).collect::<Vec<_>>(),
            })),
        },
        "speed": {
            "sequence": speed_seq,
            "final_value": sp.final_value,
            "extrapolated": sp.extrapolated,
            "method": sp.method,
            "n_max": sp.n_max,
        },
        "furstenberg_h": furstenberg.map(|h| h * scale),
        "criteria_intervals": criteria,
    });
    let mem = avez.h_raw.len() * 200; // coarse: dominated by the power supports
    Ok(RunOutput {
        result,
        csv: Some(csv),
        mem_estimate: mem.max(1 << 20),
        invariant_failure: false,
    })
}

pub(crate) fn xi(args: &XiArgs) -> Result<RunOutput> {
    let spec = parse_group(&args.group)?;
    let mu = parse_measure(&spec, &args.measure)?;
    let (lo, hi) = parse_range(&args.lengths)?;
    let nu = harmonic_measure(&mu)?;
    let mut rows = Vec::new();
    let mut csv = String::from("length,word,value\n");
    let mut word = String::new();
    for n in 0..=hi {
        if word.len() < n {
            // extend the alternating geodesic a b a b ...
            word.push(if n % 2 == 1 { 'a' } else { 'b' });
        }
        if n < lo {
            continue;
        }
        let g = spec.parse_word(&word[..n])?;
        let value = xi_function(&g, &nu)?;
        rows.push(json!({ "length": n, "word": &word[..n], "value": value }));
        csv.push_str(&format!("{n},{},{value}\n", &word[..n]));
    }
    let result = json!({
        "first_letter_masses": nu.first_letter_masses(),
        "samples": rows,
    });
    Ok(RunOutput {
        result,
        csv: Some(csv),
        mem_estimate: 1 << 16,
        invariant_failure: false,
    })
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = s.split("..").collect();
    if parts.len() != 2 {
        return Err(Error::structural(format!(
            "invalid length range {s:?}; expected lo..hi"
        )));
    }
    let lo: usize = parts[0]
        .parse()
        .map_err(|_| Error::structural(format!("invalid range start in {s:?}")))?;
    let hi: usize = parts[1]
        .parse()
        .map_err(|_| Error::structural(format!("invalid range end in {s:?}")))?;
    if lo > hi {
        return Err(Error::precondition("empty length range"));
    }
    Ok((lo, hi))
}

pub(crate) fn criteria(args: &CriteriaArgs) -> Result<RunOutput> {
    let spec = parse_group(&args.group)?;
    let rank = match spec {
        GroupSpec::Free { rank } => rank,
        _ => return Err(Error::precondition("criteria are stated for free groups")),
    };
    let mu = parse_measure(&spec, &args.measure)?;
    let cap = resolve_cap(args.mem_cap);
    let (h, h_source) = match args.h {
        Some(h) => (h, "override".to_string()),
        None => {
            let rep = avez_entropy(
                &mu,
                &AvezOptions {
                    n_max: args.nmax,
                    mc_samples: 0,
                    seed: args.seed,
                    cap,
                },
            )?;
            (rep.extrapolated_h, format!("richardson(nmax={})", args.nmax))
        }
    };
    let (ell, ell_source) = match args.ell {
        Some(e) => (e, "override".to_string()),
        None => {
            let rep = speed(&mu, 2000)?;
            (rep.extrapolated, rep.method)
        }
    };
    let rep = criteria_report(rank, h, ell, args.hx, args.p)?;
    let result = json!({
        "inputs": { "h": h, "h_source": h_source, "ell": ell, "ell_source": ell_source,
                     "h_x": args.hx, "p": args.p, "rank": rank },
        "criteria": serde_json::to_value(&rep).expect("report serializes"),
    });
    Ok(RunOutput::json(result, 1 << 20))
}

pub(crate) fn kahane(args: &KahaneArgs) -> Result<RunOutput> {
    let rep = kahane_constant_scan(args.dim, args.n, args.p, args.trials, args.seed)?;
    let result = serde_json::to_value(&rep).expect("report serializes");
    let mem = args.trials * (args.n + 8);
    Ok(RunOutput::json(result, mem))
}

pub(crate) fn check(args: &CheckArgs) -> Result<RunOutput> {
    let outcomes = run_suite(&args.suite, args.seed)?;
    let all_passed = outcomes.iter().all(|o| o.passed);
    let result = json!({
        "suite": args.suite,
        "outcomes": serde_json::to_value(&outcomes).expect("outcomes serialize"),
        "all_passed": all_passed,
    });
    Ok(RunOutput {
        result,
        csv: None,
        mem_estimate: 1 << 20,
        invariant_failure: !all_passed,
    })
}

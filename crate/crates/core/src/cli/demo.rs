use std::io::Write;

use super::{io, sig15, CliError, EXIT_FAILED, EXIT_OK};
use crate::constructions::{
    lift_umeb, meb8, umeb_2x3_type1, umeb_2x3_type2, umeb_2x3x3_first, umeb_2x3x3_second, xy_vectors, LabeledBasis,
};
use crate::entanglement::EntanglementPredicate;
use crate::qstate::inner;
use crate::verify::{full_report, match_sets, mub_overlap, SearchConfig, SearchVerdict};

const DEMO_TOL: f64 = 1e-12;

struct Checks(Vec<(String, bool)>);

impl Checks {
    fn add(&mut self, name: impl Into<String>, ok: bool) {
        self.0.push((name.into(), ok));
    }
}

fn demo_predicates(b: &LabeledBasis) -> Vec<EntanglementPredicate> {
    ["strict", "ghz2", "cut1"].iter().filter_map(|n| EntanglementPredicate::parse(n, b.shape()).ok()).collect()
}

fn describe_verdict(v: &SearchVerdict) -> String {
    match v {
        SearchVerdict::ComplementEmpty => "complement empty".into(),
        SearchVerdict::NoMeStateFound { min_defect } => format!("no ME state in complement (min defect {})", sig15(*min_defect)),
        SearchVerdict::MeStateFound { .. } => "ME state found in complement".into(),
    }
}

/// Rebuilds every construction, prints a summary and a PASS/FAIL table.
pub fn cmd_demo(cfg: &SearchConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let mut checks = Checks(Vec::new());
    let bases = [meb8(), umeb_2x3_type1(), umeb_2x3_type2(), umeb_2x3x3_first(), umeb_2x3x3_second()];

    for b in &bases {
        let report = full_report(b, &demo_predicates(b), cfg)?;
        writeln!(out, "== {} ({} vectors, dims {:?})", b.name(), b.len(), b.shape().dims()).map_err(io)?;
        writeln!(out, "orthonormal: {} (max residual {:.3e})", report.orthonormality.holds, report.orthonormality.max_residual)
            .map_err(io)?;
        for s in &report.entanglement {
            writeln!(out, "maximally entangled under {}: {} (max residual {:.3e})", s.predicate, s.all_hold, s.max_residual)
                .map_err(io)?;
        }
        let c = &report.completeness;
        let word = if c.complete { "complete" } else { "incomplete" };
        writeln!(out, "{}: {word} (rank {}/{})", b.name(), c.rank, c.total).map_err(io)?;
        for r in &report.unextendibility {
            writeln!(out, "complement under {}: {}", r.predicate, describe_verdict(&r.verdict)).map_err(io)?;
        }
        for c in &report.claims {
            writeln!(out, "claim {}: {}", c.claim, if c.verified { "verified" } else { "NOT verified" }).map_err(io)?;
            checks.add(format!("{} {}", b.name(), c.claim), c.verified);
        }
        if let Some(cut) = EntanglementPredicate::parse("cut1", b.shape()).ok().filter(|_| b.shape().len() == 3 && !report.completeness.complete) {
            if let Some(r) = report.search_for(&cut) {
                let found = matches!(r.verdict, SearchVerdict::MeStateFound { .. });
                checks.add(format!("{} complement holds a {cut} witness", b.name()), found);
            }
        }
    }

    let (x, y) = xy_vectors();
    let xy_ok = (x.norm() - 1.0).abs() < DEMO_TOL && (y.norm() - 1.0).abs() < DEMO_TOL && inner(&x, &y)?.norm() < DEMO_TOL;
    writeln!(out, "x, y orthonormal: {xy_ok}").map_err(io)?;
    checks.add("x, y orthonormal", xy_ok);

    for (base, target) in [(&bases[1], &bases[3]), (&bases[2], &bases[4])] {
        let lifted = lift_umeb(base, 3)?;
        let m = match_sets(&lifted.kets(), &target.kets())?;
        writeln!(out, "lift({}) vs {}: max matching distance {:e}", base.name(), target.name(), m.max_distance).map_err(io)?;
        checks.add(format!("lift({}) = {}", base.name(), target.name()), m.max_distance < DEMO_TOL);
    }

    let (first, second) = (&bases[3], &bases[4]);
    let phi = first.get("phi0,0").expect("label present").ket();
    let psi = second.get("psi0,0").expect("label present").ket();
    let overlap = inner(phi, psi)?.norm();
    writeln!(out, "overlap(φ00,ψ00) = {}", sig15(overlap)).map_err(io)?;
    checks.add("overlap(φ00,ψ00) = 1/sqrt(6)", (overlap - 1.0 / 6f64.sqrt()).abs() < DEMO_TOL);
    let mub = mub_overlap(first, second)?;
    writeln!(
        out,
        "{} vs {}: {} (target {}, max deviation {})",
        mub.set_a,
        mub.set_b,
        if mub.unbiased { "unbiased" } else { "not unbiased" },
        sig15(mub.target),
        sig15(mub.max_deviation)
    )
    .map_err(io)?;
    checks.add("tripartite sets are not unbiased", !mub.unbiased);

    writeln!(out).map_err(io)?;
    for (name, ok) in &checks.0 {
        writeln!(out, "{} {name}", if *ok { "PASS" } else { "FAIL" }).map_err(io)?;
    }
    Ok(if checks.0.iter().all(|(_, ok)| *ok) { EXIT_OK } else { EXIT_FAILED })
}

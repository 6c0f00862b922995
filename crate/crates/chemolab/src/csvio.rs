//! CSV emitters for norm series, residual series, and sweep atlases. Columns
//! are documented in SCHEMA.md at the workspace root. Every file starts with
//! a `# config = {...}` comment embedding the resolved configuration.

use std::fmt::Write as _;

use chemolab_core::diagnostics::{IdentityResidual, SweepAtlas};
use chemolab_core::dynamics::NormSample;

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// One-line comment embedding the resolved config for reproducibility.
pub fn config_comment(config_json_line: &str) -> String {
    format!("# config = {config_json_line}\n")
}

/// Norm series rows: t, mass, one column per configured p, linf, dt.
pub fn norms_csv(series: &[NormSample], p_list: &[f64]) -> String {
    let mut out = String::new();
    out.push('t');
    out.push_str(",mass");
    for p in p_list {
        let _ = write!(out, ",lp_{p}");
    }
    out.push_str(",linf,dt\n");
    for s in series {
        let _ = write!(out, "{},{}", num(s.t), num(s.mass));
        for v in &s.lp {
            let _ = write!(out, ",{}", num(*v));
        }
        let _ = writeln!(out, ",{},{}", num(s.linf), num(s.dt));
    }
    out
}

/// Residual rows: t, lhs, rhs, rel_residual.
pub fn residuals_csv(residuals: &[IdentityResidual]) -> String {
    let mut out = String::from("t,lhs,rhs,rel_residual\n");
    for r in residuals {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            num(r.t),
            num(r.lhs),
            num(r.rhs),
            num(r.rel_residual)
        );
    }
    out
}

/// Atlas rows: one record per grid point. The consistency column is emitted
/// when `compare_theory` is set.
pub fn atlas_csv(atlas: &SweepAtlas, compare_theory: bool) -> String {
    let mut out = String::new();
    out.push_str("n,m,a,b,alpha,beta,eta,sign,mass,verdict,h1_holds,h2_holds,h1_margin,h2_margin,remark_condition,refined,t_final,max_linf,step_count");
    if compare_theory {
        out.push_str(",consistency");
    }
    out.push('\n');
    for r in &atlas.records {
        let p = &r.params;
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            p.n,
            num(p.m),
            num(p.a),
            num(p.b),
            num(p.alpha),
            num(p.beta),
            num(p.eta),
            p.sign.as_str(),
            num(r.mass),
            r.verdict.as_str(),
            r.h1_holds,
            r.h2_holds,
            num(r.h1_margin),
            num(r.h2_margin),
            r.remark_condition_holds
                .map_or("n/a".to_string(), |b| b.to_string()),
            r.refined,
            num(r.t_final),
            num(r.max_linf),
            r.step_count,
        );
        if compare_theory {
            let _ = write!(out, ",{}", r.consistency.as_str());
        }
        out.push('\n');
    }
    out
}

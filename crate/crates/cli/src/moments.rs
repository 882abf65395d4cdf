//! `qmoments moments`: tables of moment values, cross-checked across the
//! requested methods at every grid point.

use qmoments_core::qlaguerre::{self, QLagParams};
use qmoments_core::{classical, format_rational, qhermite, ApproxValue, QResult, Rational};

use crate::config::{Family, RunConfig};
use crate::report::{gather_rows, Point, ReportRow};

pub enum Value {
    Exact(Rational),
    Certified(ApproxValue),
}

/// Turns the results of several methods at one point into rows. The first
/// exact value is the reference; every other value must agree with it
/// (exactly, or within its certified bound).
pub fn cross_rows(point: &Point, results: Vec<(&str, QResult<Value>)>) -> Vec<ReportRow> {
    let reference = results.iter().find_map(|(m, r)| match r {
        Ok(Value::Exact(v)) => Some((*m, v.clone())),
        _ => None,
    });
    results
        .into_iter()
        .map(|(method, r)| {
            let mut p = point.clone();
            p.method = method.to_string();
            match (r, &reference) {
                (Err(e), _) => p.error(&e),
                (Ok(Value::Exact(v)), Some((rm, rv))) if &v != rv => {
                    p.mismatch(&v, None, format!("differs from {rm} = {}", format_rational(rv)))
                }
                (Ok(Value::Exact(v)), _) => p.exact(&v),
                (Ok(Value::Certified(a)), Some((rm, rv))) if !a.contains(rv) => {
                    let details = format!("{rm} = {} lies outside the certified interval", format_rational(rv));
                    p.mismatch(&a.value, Some(&a.bound), details)
                }
                (Ok(Value::Certified(a)), _) => p.certified(&a),
            }
        })
        .collect()
}

enum Task {
    /// one (q, α, k, N) point with the N-indexed methods
    Grid { q: Rational, alpha: u64, k: u64, n: u64 },
    /// one randomisation parameter for the z/λ/K-indexed methods
    Randomized { q: Rational, alpha: u64, k: u64, param: Param },
}

#[derive(Clone)]
enum Param {
    Z(Rational),
    Lambda(Rational),
    BigK(u64),
}

impl Param {
    fn label(&self) -> String {
        match self {
            Param::Z(z) => format!("z={}", format_rational(z)),
            Param::Lambda(l) => format!("lambda={}", format_rational(l)),
            Param::BigK(k) => format!("K={k}"),
        }
    }
}

const GRID_METHODS: [&str; 5] = ["residue", "hyper", "hooksum", "schur", "formula"];

fn is_grid_method(m: &str) -> bool {
    GRID_METHODS.contains(&m)
}

pub fn run(config: &RunConfig) -> Vec<ReportRow> {
    let family = config.family.expect("moments always has a family");
    let grid_methods: Vec<&str> = config.methods.iter().map(String::as_str).filter(|m| is_grid_method(m)).collect();
    let random_methods: Vec<&str> = config.methods.iter().map(String::as_str).filter(|m| !is_grid_method(m)).collect();

    let qs: Vec<Rational> = match family {
        Family::ClassicalGue | Family::ClassicalLue => vec![Rational::from_integer(1.into())],
        _ => config.q.clone(),
    };
    let alphas: Vec<u64> = match family {
        Family::QLaguerre | Family::ClassicalLue => config.alpha.iter().collect(),
        _ => vec![0],
    };

    let mut tasks = Vec::new();
    for q in &qs {
        for &alpha in &alphas {
            for k in config.k.iter() {
                if !grid_methods.is_empty() {
                    for n in config.n.iter() {
                        tasks.push(Task::Grid { q: q.clone(), alpha, k, n });
                    }
                }
                let mut params = Vec::new();
                if random_methods.iter().any(|m| *m == "bigqjacobi" || *m == "randomized-hyper") {
                    params.extend(config.z.iter().flatten().cloned().map(Param::Z));
                }
                if random_methods.contains(&"randomized") {
                    params.extend(config.lambda.iter().flatten().cloned().map(Param::Lambda));
                }
                if random_methods.contains(&"qhahn") {
                    params.extend(config.big_k.iter().flat_map(|s| s.iter()).map(Param::BigK));
                }
                for param in params {
                    tasks.push(Task::Randomized { q: q.clone(), alpha, k, param });
                }
            }
        }
    }

    let policy = config.policy();
    gather_rows(config, tasks, |task| match task {
        Task::Grid { q, alpha, k, n } => {
            let mut point = Point::new(family.name(), "").k(*k).n(n);
            if matches!(family, Family::QHermite | Family::QLaguerre) {
                point = point.q(q);
            }
            if matches!(family, Family::QLaguerre | Family::ClassicalLue) {
                point = point.alpha(*alpha);
            }
            let results = grid_methods
                .iter()
                .map(|&m| (m, grid_value(family, m, *k, *n, *alpha, q).map(Value::Exact)))
                .collect();
            cross_rows(&point, results)
        }
        Task::Randomized { q, alpha, k, param } => {
            let mut point = Point::new(family.name(), "").k(*k).n(param.label()).q(q);
            if family == Family::QLaguerre {
                point = point.alpha(*alpha);
            }
            let results = random_methods
                .iter()
                .filter(|&&m| matches!((m, param), ("bigqjacobi" | "randomized-hyper", Param::Z(_))
                    | ("randomized", Param::Lambda(_))
                    | ("qhahn", Param::BigK(_))))
                .map(|&m| {
                    let v = match (m, param) {
                        ("bigqjacobi", Param::Z(z)) => QLagParams::new(*alpha, q.clone())
                            .and_then(|p| qlaguerre::m_ql_randomized_bigqjacobi(*k, z, &p))
                            .map(Value::Exact),
                        ("randomized-hyper", Param::Z(z)) => QLagParams::new(*alpha, q.clone())
                            .and_then(|p| qlaguerre::m_ql_randomized_hyper(*k, z, &p, &policy))
                            .map(Value::Certified),
                        ("randomized", Param::Lambda(l)) => qhermite::m_qh_randomized(*k, l, q).map(Value::Exact),
                        ("qhahn", Param::BigK(bk)) => qhermite::m_qh_randomized_qhahn(*k, *bk, q).map(Value::Exact),
                        _ => unreachable!("filtered above"),
                    };
                    (m, v)
                })
                .collect();
            cross_rows(&point, results)
        }
    })
}

fn grid_value(family: Family, method: &str, k: u64, n: u64, alpha: u64, q: &Rational) -> QResult<Rational> {
    match (family, method) {
        (Family::QHermite, "residue") => qhermite::m_qh_residue(k, n, q),
        (Family::QHermite, "hyper") => qhermite::m_qh_hyper(k, n, q),
        (Family::QLaguerre, m) => {
            let p = QLagParams::new(alpha, q.clone())?;
            match m {
                "hyper" => qlaguerre::m_ql_hyper(k, n, &p),
                "hooksum" => qlaguerre::m_ql_hooksum(k, n, &p),
                _ => qlaguerre::m_ql_schur(k, n, &p),
            }
        }
        (Family::ClassicalGue, _) => classical::gue_moment(k, n),
        (Family::ClassicalLue, "formula") => classical::lue_moment(k, n, alpha),
        (Family::ClassicalLue, _) => classical::lue_moment_schur(k, n, alpha),
        (f, m) => unreachable!("method {m} was validated for {}", f.name()),
    }
}

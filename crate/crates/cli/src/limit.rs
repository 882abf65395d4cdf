//! `qmoments limit`: follows a q-moment along q → 1 and compares it with
//! the classical GUE/LUE moment it degenerates to.

use num_traits::Signed;
use qmoments_core::qlaguerre::{self, QLagParams};
use qmoments_core::{classical, format_rational, qhermite, QResult, Rational};

use crate::config::{Family, RunConfig};
use crate::report::{gather, Point, ReportRow};

pub fn run(config: &RunConfig) -> Vec<ReportRow> {
    let family = config.family.expect("limit always has a family");
    let (k, n, alpha) = (config.k.start, config.n.start, config.alpha.start);

    let (target_family, target) = match family {
        Family::QHermite => ("classical-gue", classical::gue_moment(k, n)),
        _ => ("classical-lue", classical::lue_moment(k, n, alpha)),
    };
    let mut target_point = Point::new(target_family, "formula").k(k).n(n);
    if family == Family::QLaguerre {
        target_point = target_point.alpha(alpha);
    }
    let target = match target {
        Ok(t) => t,
        Err(e) => return vec![target_point.error(&e)],
    };
    let mut rows = vec![target_point.exact(&target)];

    let values: Vec<QResult<Rational>> = gather(config, config.q.clone(), |q| match family {
        Family::QHermite => qhermite::m_qh_hyper(k, n, q),
        _ => QLagParams::new(alpha, q.clone()).and_then(|p| qlaguerre::m_ql_hyper(k, n, &p)),
    });

    let last = config.q.len() - 1;
    let mut prev: Option<Rational> = None;
    for (i, (q, value)) in config.q.iter().zip(values).enumerate() {
        let mut point = Point::new(family.name(), "").k(k).n(n).q(q);
        if family == Family::QLaguerre {
            point = point.alpha(alpha);
        }
        let value = match value {
            Ok(v) => v,
            Err(e) => {
                rows.push(point.error(&e));
                prev = None;
                continue;
            }
        };
        let mut vp = point.clone();
        vp.method = "hyper".into();
        rows.push(vp.exact(&value));

        let err = (&value - &target).abs();
        let mut ep = point;
        ep.method = "abs-error".into();
        let mut problems = Vec::new();
        if let Some(p) = &prev {
            if err >= *p {
                problems.push(format!("error did not decrease (previous {})", format_rational(p)));
            }
        }
        if i == last {
            let relative = &err / target.abs();
            if relative >= config.threshold {
                problems.push(format!(
                    "final relative error {} is not below {}",
                    format_rational(&relative),
                    format_rational(&config.threshold)
                ));
            }
        }
        rows.push(if problems.is_empty() { ep.exact(&err) } else { ep.mismatch(&err, None, problems.join("; ")) });
        prev = Some(err);
    }
    rows
}

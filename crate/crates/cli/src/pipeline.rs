use std::collections::BTreeMap;
use std::time::Instant;

use manin::bialg::{
    coboundary_delta, coisotropy_classify, mcybe_check, schouten, CoisotropyVerdict, McybeVerdict,
    SubalgebraSpec,
};
use manin::coeff::{Bindings, Scalar};
use manin::contraction::{contract, lambda_family, ContractionError};
use manin::doubles::{
    assemble_double, catalog, catalog_entries, extended_poincare11, kappa_twisted, poincare21,
    skew_reduce, transport, CaseData, CatalogEntry, DoubleCase, LimitCase, ManinTriple,
    ObstructionCase, Parametric, SpacetimeTable,
};
use manin::liealg::{Constraint, LieAlgebra, LinearMap, SymmetricForm};
use manin::plgroup::{
    extended_chart, extended_rep, jacobi_poisson, numeric_r, poincare21_chart, poincare21_rep,
    poisson_fit, Chart, MatrixRep, PoissonTable,
};
use manin::stachura::{classify, invariants_mu_p};
use manin::tensor::Bivector;
use rayon::prelude::*;

use crate::render;
use crate::report::{Check, Status};
use crate::triplefile::LoadedTriple;

#[derive(Debug, Clone)]
pub struct Opts {
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
    pub params: Vec<(String, Scalar)>,
}

impl Default for Opts {
    fn default() -> Self {
        Opts {
            seed: 0,
            samples: 100,
            tol: 1e-9,
            params: Vec::new(),
        }
    }
}

impl Opts {
    fn numeric_params(&self) -> Result<Vec<(String, f64)>, String> {
        self.params
            .iter()
            .map(|(k, v)| {
                v.substitute_numeric(&Bindings::new())
                    .map(|x| (k.clone(), x))
                    .map_err(|e| format!("parameter {k}: {e}"))
            })
            .collect()
    }
}

pub struct TransportSpec {
    pub label: String,
    pub triple: ManinTriple,
    pub map: LinearMap,
    pub constraints: Vec<Constraint>,
}

/// Recorded values the pipeline compares against; absent slots downgrade the
/// matching step to a display-only pass or a skip.
pub struct Expectations {
    pub pairing: Option<SymmetricForm>,
    pub r_skew: Option<Bivector>,
    pub delta: Vec<(usize, Bivector)>,
    pub verdict: Option<String>,
    pub lorentz: Option<Vec<usize>>,
    pub mcybe: Option<String>,
    pub class: Option<String>,
    pub catalog_ref: Option<&'static CatalogEntry>,
}

pub struct DoubleSubject {
    pub name: String,
    pub triple: ManinTriple,
    pub target: Option<LieAlgebra>,
    pub transports: Vec<TransportSpec>,
    pub exp: Expectations,
}

pub fn catalog_subject(entry: &'static CatalogEntry) -> DoubleSubject {
    let c = entry.as_double().expect("double entry");
    DoubleSubject {
        name: entry.id.to_string(),
        triple: c.primary().triple.clone(),
        target: Some(c.target.clone()),
        transports: c
            .realizations
            .iter()
            .map(|r| TransportSpec {
                label: r.label.to_string(),
                triple: r.triple.clone(),
                map: r.map.clone(),
                constraints: r.constraints.clone(),
            })
            .collect(),
        exp: Expectations {
            pairing: Some(c.expected_pairing.clone()),
            r_skew: Some(c.expected_r_skew.clone()),
            delta: c.expected_delta.clone(),
            verdict: Some(c.expected_verdict.to_string()),
            lorentz: Some(c.lorentz.clone()),
            mcybe: Some("quasitriangular".to_string()),
            class: c.expected_class.map(str::to_string),
            catalog_ref: Some(entry),
        },
    }
}

pub fn file_subject(name: &str, loaded: LoadedTriple) -> DoubleSubject {
    let n2 = 2 * loaded.triple.dim();
    let target = match (&loaded.map, n2) {
        (Some(_), 6) => Some(poincare21()),
        (Some(_), 4) => Some(extended_poincare11()),
        _ => None,
    };
    let transports = match loaded.map {
        Some(map) => vec![TransportSpec {
            label: String::new(),
            triple: loaded.triple.clone(),
            map,
            constraints: loaded.constraints.clone(),
        }],
        None => Vec::new(),
    };
    let catalog_ref = loaded
        .expected_id
        .as_deref()
        .and_then(|id| catalog(id).ok());
    DoubleSubject {
        name: loaded
            .expected_id
            .clone()
            .unwrap_or_else(|| name.to_string()),
        triple: loaded.triple,
        target,
        transports,
        exp: Expectations {
            pairing: loaded.pairing,
            r_skew: loaded.r_skew,
            delta: loaded.delta,
            verdict: loaded.verdict,
            lorentz: loaded.lorentz,
            mcybe: loaded.mcybe,
            class: loaded.class,
            catalog_ref,
        },
    }
}

fn push_timed(checks: &mut Vec<Check>, t0: Instant, mut c: Check) {
    c.elapsed_ms = t0.elapsed().as_secs_f64() * 1e3;
    checks.push(c);
}

/// assemble -> jacobi -> pairing invariance -> transport -> skew_reduce ->
/// cocommutator -> coisotropy -> mCYBE -> class witness -> spacetime.
pub fn double_checks(subject: &DoubleSubject, opts: &Opts) -> Vec<Check> {
    let mut checks = Vec::new();
    let exp = &subject.exp;

    let t0 = Instant::now();
    let dbl = match assemble_double(&subject.triple) {
        Ok(d) => {
            push_timed(
                &mut checks,
                t0,
                Check::outcome(
                    "assemble",
                    true,
                    "factors close and the cocycle condition holds".into(),
                    format!("double of dimension {}", d.dim()),
                ),
            );
            d
        }
        Err(e) => {
            push_timed(
                &mut checks,
                t0,
                Check::outcome(
                    "assemble",
                    false,
                    "factors close and the cocycle condition holds".into(),
                    e.to_string(),
                ),
            );
            return checks;
        }
    };

    let t0 = Instant::now();
    let viols = dbl.algebra().jacobi_check();
    push_timed(
        &mut checks,
        t0,
        Check::outcome(
            "jacobi",
            viols.is_empty(),
            "no violations".into(),
            if viols.is_empty() {
                "none".into()
            } else {
                format!("{} violations, first {:?}", viols.len(), viols[0])
            },
        ),
    );

    let t0 = Instant::now();
    let pv = dbl.pairing().invariance_violations(dbl.algebra());
    push_timed(
        &mut checks,
        t0,
        Check::outcome(
            "pairing",
            pv.is_empty(),
            "ad-invariant".into(),
            if pv.is_empty() {
                "invariant".into()
            } else {
                format!("{} violations", pv.len())
            },
        ),
    );

    let Some(target) = &subject.target else {
        checks.push(Check::skip("transport", "no kinematical map"));
        return checks;
    };
    let names = target.names();

    let mut transported = None;
    for spec in &subject.transports {
        let t0 = Instant::now();
        let name = if spec.label.is_empty() {
            "transport".to_string()
        } else {
            format!("transport[{}]", spec.label)
        };
        let expected = "isomorphism onto the kinematical constants with the recorded pairing";
        let outcome = assemble_double(&spec.triple)
            .map_err(|e| e.to_string())
            .and_then(|d| {
                transport(&d, &spec.map, target, &spec.constraints).map_err(|e| e.to_string())
            });
        match outcome {
            Ok(tr) => {
                let pairing_ok = exp
                    .pairing
                    .as_ref()
                    .map(|p| p.upper_triangle() == tr.pairing.upper_triangle())
                    .unwrap_or(true);
                let actual = if pairing_ok {
                    "intertwines; pairing matches".to_string()
                } else {
                    format!(
                        "intertwines; pairing differs: {}",
                        render::pairing_entries(&tr.pairing, names)
                    )
                };
                push_timed(
                    &mut checks,
                    t0,
                    Check::outcome(name, pairing_ok, expected.into(), actual),
                );
                if transported.is_none() {
                    transported = Some(tr);
                }
            }
            Err(e) => {
                push_timed(
                    &mut checks,
                    t0,
                    Check::outcome(name, false, expected.into(), e),
                );
            }
        }
    }

    let Some(tr) = transported else {
        checks.push(Check::skip("skew_reduce", "transport unavailable"));
        return checks;
    };

    let t0 = Instant::now();
    let skew = match skew_reduce(target, &tr.r_mixed) {
        Ok(skew) => {
            let ok = exp
                .r_skew
                .as_ref()
                .map(|e| skew.sub(e).is_zero())
                .unwrap_or(true);
            push_timed(
                &mut checks,
                t0,
                Check::outcome(
                    "skew_reduce",
                    ok,
                    exp.r_skew
                        .as_ref()
                        .map(|e| e.display(names))
                        .unwrap_or_else(|| "-".into()),
                    skew.display(names),
                ),
            );
            skew
        }
        Err(e) => {
            push_timed(
                &mut checks,
                t0,
                Check::outcome(
                    "skew_reduce",
                    false,
                    "symmetric part spanned by invariant tensors".into(),
                    e.to_string(),
                ),
            );
            return checks;
        }
    };

    let t0 = Instant::now();
    let delta = coboundary_delta(target, &skew);
    if exp.delta.is_empty() {
        push_timed(&mut checks, t0, Check::skip("delta", "no recorded rows"));
    } else {
        let mut ok = true;
        let mut want = Vec::new();
        let mut got = Vec::new();
        for (i, row) in &exp.delta {
            let computed = delta.row(*i);
            if !computed.sub(row).is_zero() {
                ok = false;
            }
            want.push(format!("delta({}) = {}", names[*i], row.display(names)));
            got.push(format!("delta({}) = {}", names[*i], computed.display(names)));
        }
        push_timed(
            &mut checks,
            t0,
            Check::outcome("delta", ok, want.join("; "), got.join("; ")),
        );
    }

    let t0 = Instant::now();
    let verdict_label = match &exp.lorentz {
        None => {
            push_timed(
                &mut checks,
                t0,
                Check::skip("coisotropy", "no isotropy subalgebra recorded"),
            );
            exp.verdict.clone()
        }
        Some(lz) => match SubalgebraSpec::new(target, lz) {
            Err(e) => {
                push_timed(
                    &mut checks,
                    t0,
                    Check::outcome(
                        "coisotropy",
                        false,
                        "isotropy generators close under the bracket".into(),
                        e.to_string(),
                    ),
                );
                exp.verdict.clone()
            }
            Ok(spec) => {
                let verdict = coisotropy_classify(&delta, &spec);
                let actual = match &verdict {
                    CoisotropyVerdict::Neither(w) => format!(
                        "neither: delta({}) contains {}*{}^{}",
                        names[w.generator], w.coefficient, names[w.term.0], names[w.term.1]
                    ),
                    other => other.label().to_string(),
                };
                let ok = exp
                    .verdict
                    .as_deref()
                    .map(|e| e == verdict.label())
                    .unwrap_or(true);
                push_timed(
                    &mut checks,
                    t0,
                    Check::outcome(
                        "coisotropy",
                        ok,
                        exp.verdict.clone().unwrap_or_else(|| "-".into()),
                        actual,
                    ),
                );
                Some(verdict.label().to_string())
            }
        },
    };

    let t0 = Instant::now();
    let verdict = mcybe_check(target, &skew);
    let ok = exp
        .mcybe
        .as_deref()
        .map(|e| e == verdict.to_string())
        .unwrap_or(true);
    push_timed(
        &mut checks,
        t0,
        Check::outcome(
            "mcybe",
            ok,
            exp.mcybe.clone().unwrap_or_else(|| "-".into()),
            verdict.to_string(),
        ),
    );

    let t0 = Instant::now();
    match (&exp.class, exp.catalog_ref) {
        (Some(want), Some(entry)) => {
            let refcase = entry.as_double();
            let matches_ref = refcase
                .map(|c| skew.sub(&c.expected_r_skew).is_zero())
                .unwrap_or(false);
            if !matches_ref {
                push_timed(
                    &mut checks,
                    t0,
                    Check::outcome(
                        "class",
                        false,
                        want.clone(),
                        format!("r-matrix differs from catalog entry {}", entry.id),
                    ),
                );
            } else {
                let actual = classify(entry)
                    .map_err(|e| e.to_string())
                    .and_then(|cl| {
                        let (mu, p) = invariants_mu_p(&refcase.unwrap().expected_r_skew)
                            .map_err(|e| e.to_string())?;
                        Ok((cl, mu, p))
                    });
                match actual {
                    Ok((cl, mu, p)) => push_timed(
                        &mut checks,
                        t0,
                        Check::outcome(
                            "class",
                            cl.label() == want,
                            want.clone(),
                            format!("class {}; mu = {}, p = {}", cl.label(), mu, p),
                        ),
                    ),
                    Err(e) => push_timed(
                        &mut checks,
                        t0,
                        Check::outcome("class", false, want.clone(), e),
                    ),
                }
            }
        }
        _ => push_timed(
            &mut checks,
            t0,
            Check::skip("class", "no orbit classification recorded"),
        ),
    }

    let t0 = Instant::now();
    match verdict_label.as_deref() {
        Some("neither") => push_timed(
            &mut checks,
            t0,
            Check::skip("spacetime", "projection does not close (open orbit)"),
        ),
        None => push_timed(
            &mut checks,
            t0,
            Check::skip("spacetime", "no isotropy subalgebra recorded"),
        ),
        Some(verdict) => {
            let input = match exp.catalog_ref.and_then(|e| e.as_double()) {
                Some(c) if skew.sub(&c.expected_r_skew).is_zero() => FitInput {
                    target_dim: c.target.dim(),
                    verdict: c.expected_verdict,
                    parametric: c.parametric.as_ref(),
                    stored: c.spacetime.as_ref(),
                    r_skew: &c.expected_r_skew,
                },
                _ => FitInput {
                    target_dim: target.dim(),
                    verdict,
                    parametric: None,
                    stored: None,
                    r_skew: &skew,
                },
            };
            match fit(&input, opts) {
                Ok(out) => {
                    let ok = out.max_err < opts.tol && out.jacobi <= opts.tol;
                    push_timed(
                        &mut checks,
                        t0,
                        Check::outcome(
                            "spacetime",
                            ok,
                            out.expected_rendered.unwrap_or_else(|| "-".into()),
                            format!(
                                "{} [max err {}, jacobi {}, fit residual {}]",
                                out.fitted_rendered,
                                render::residual(out.max_err),
                                render::residual(out.jacobi),
                                render::residual(out.table.residual)
                            ),
                        ),
                    );
                }
                Err(e) => push_timed(
                    &mut checks,
                    t0,
                    Check::outcome("spacetime", false, "polynomial bracket table".into(), e),
                ),
            }
        }
    }

    checks
}

pub struct FitInput<'a> {
    pub target_dim: usize,
    pub verdict: &'a str,
    pub parametric: Option<&'a Parametric>,
    pub stored: Option<&'a SpacetimeTable>,
    pub r_skew: &'a Bivector,
}

pub struct FitRow {
    pub pair: (String, String),
    pub expected: Option<String>,
    pub actual: String,
    pub err: f64,
}

pub struct FitOutcome {
    pub table: PoissonTable,
    pub rows: Vec<FitRow>,
    pub fitted_rendered: String,
    pub expected_rendered: Option<String>,
    pub max_err: f64,
    pub jacobi: f64,
}

fn chart_rep(dim: usize) -> Result<(Chart, MatrixRep), String> {
    match dim {
        6 => Ok((poincare21_chart(), poincare21_rep())),
        4 => Ok((extended_chart(), extended_rep())),
        other => Err(format!("no group chart for dimension {other}")),
    }
}

/// Samples the Sklyanin brackets and fits the reduced-coordinate table.
/// Parametric cases evaluate at their recorded point unless overridden.
pub fn fit(input: &FitInput, opts: &Opts) -> Result<FitOutcome, String> {
    let (chart, rep) = chart_rep(input.target_dim)?;
    let empty = Bindings::new();
    let mut bindings = Bindings::new();
    let r_sym = match input.parametric {
        Some(fam) => {
            let a = fam
                .dd_point
                .0
                .substitute_numeric(&empty)
                .map_err(|e| e.to_string())?;
            let b = fam
                .dd_point
                .1
                .substitute_numeric(&empty)
                .map_err(|e| e.to_string())?;
            bindings.set(fam.alpha, a);
            bindings.set(fam.beta, b);
            fam.r.clone()
        }
        None => input.r_skew.clone(),
    };
    for (k, v) in opts.numeric_params()? {
        bindings.set(&k, v);
    }
    let r_num = numeric_r(&r_sym, &bindings).map_err(|e| e.to_string())?;
    let table = poisson_fit(&r_num, &chart, &rep, input.verdict, opts.samples, opts.seed)
        .map_err(|e| e.to_string())?;
    let jacobi = jacobi_poisson(&table);

    let mut expected_vecs: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
    if let Some(stored) = input.stored {
        let fitted_coords: Vec<&str> = table.coords.iter().map(String::as_str).collect();
        if stored.coords != fitted_coords {
            return Err(format!(
                "stored coordinates {:?} do not match the chart {:?}",
                stored.coords, fitted_coords
            ));
        }
        for (a, b, terms) in &stored.brackets {
            let (u, v, sign) = if a < b { (*a, *b, 1.0) } else { (*b, *a, -1.0) };
            let entry = expected_vecs
                .entry((u, v))
                .or_insert_with(|| vec![0.0; table.monomials.len()]);
            for t in terms {
                let idx = table
                    .monomials
                    .iter()
                    .position(|m| *m == t.powers)
                    .ok_or_else(|| "stored term beyond the fitted degree".to_string())?;
                entry[idx] += sign
                    * t.coeff
                        .substitute_numeric(&bindings)
                        .map_err(|e| e.to_string())?;
            }
        }
    }

    let zero = vec![0.0; table.monomials.len()];
    let compare = input.stored.is_some();
    let mut rows = Vec::new();
    let mut max_err: f64 = 0.0;
    let mut seen: Vec<(usize, usize)> = Vec::new();
    for (u, v, fitted) in &table.brackets {
        seen.push((*u, *v));
        let expected = expected_vecs.get(&(*u, *v)).unwrap_or(&zero);
        let err = fitted
            .iter()
            .zip(expected)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if compare {
            max_err = max_err.max(err);
        }
        if fitted.iter().all(|&x| x == 0.0) && expected.iter().all(|&x| x == 0.0) {
            continue;
        }
        rows.push(FitRow {
            pair: (table.coords[*u].clone(), table.coords[*v].clone()),
            expected: compare.then(|| render::polynomial(&table.coords, &table.monomials, expected)),
            actual: render::polynomial(&table.coords, &table.monomials, fitted),
            err,
        });
    }
    for ((u, v), expected) in &expected_vecs {
        if seen.contains(&(*u, *v)) {
            continue;
        }
        let err = expected.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        max_err = max_err.max(err);
        rows.push(FitRow {
            pair: (table.coords[*u].clone(), table.coords[*v].clone()),
            expected: Some(render::polynomial(&table.coords, &table.monomials, expected)),
            actual: "0".into(),
            err,
        });
    }

    let line = |f: &dyn Fn(&FitRow) -> Option<String>| -> Vec<String> {
        rows.iter()
            .filter_map(|r| f(r).map(|p| format!("{{{}, {}}} = {}", r.pair.0, r.pair.1, p)))
            .collect()
    };
    let fitted_rendered = line(&|r| Some(r.actual.clone())).join("; ");
    let expected_rendered = if compare {
        Some(line(&|r| r.expected.clone()).join("; "))
    } else {
        None
    };
    Ok(FitOutcome {
        table,
        rows,
        fitted_rendered,
        expected_rendered,
        max_err,
        jacobi,
    })
}

/// family Jacobi -> quasitriangularity -> recorded limit -> divergence guard
/// -> twisted-form multiple.
pub fn limit_checks(l: &LimitCase, opts: &Opts) -> Vec<Check> {
    let _ = opts;
    let mut checks = Vec::new();
    let fam = lambda_family();
    let names = fam.names();

    let t0 = Instant::now();
    let viols = fam.jacobi_check();
    push_timed(
        &mut checks,
        t0,
        Check::outcome(
            "family",
            viols.is_empty(),
            "curvature family satisfies Jacobi".into(),
            if viols.is_empty() {
                "holds for symbolic Lambda".into()
            } else {
                format!("{} violations", viols.len())
            },
        ),
    );

    let t0 = Instant::now();
    let verdict = mcybe_check(&fam, &l.r);
    push_timed(
        &mut checks,
        t0,
        Check::outcome(
            "mcybe",
            matches!(verdict, McybeVerdict::Quasitriangular),
            "quasitriangular".into(),
            verdict.to_string(),
        ),
    );

    let t0 = Instant::now();
    let limit_name = format!("limit[k={}]", l.rescale);
    match contract(&l.r, l.rescale, &l.scale) {
        Ok(b) => push_timed(
            &mut checks,
            t0,
            Check::outcome(
                limit_name,
                b.sub(&l.expected_limit).is_zero(),
                l.expected_limit.display(names),
                b.display(names),
            ),
        ),
        Err(e) => push_timed(
            &mut checks,
            t0,
            Check::outcome(limit_name, false, l.expected_limit.display(names), e.to_string()),
        ),
    }

    let t0 = Instant::now();
    if l.rescale > 0 {
        let outcome = contract(&l.r, 0, &l.scale);
        let ok = matches!(outcome, Err(ContractionError::Divergent(_)));
        push_timed(
            &mut checks,
            t0,
            Check::outcome(
                "divergence",
                ok,
                "divergent without rescaling".into(),
                match outcome {
                    Err(e) => e.to_string(),
                    Ok(b) => format!("finite: {}", b.display(names)),
                },
            ),
        );
    } else {
        push_timed(
            &mut checks,
            t0,
            Check::skip("divergence", "finite without rescaling"),
        );
    }

    let t0 = Instant::now();
    match &l.kappa_constant {
        Some(k) => {
            let target = kappa_twisted().scale(k);
            push_timed(
                &mut checks,
                t0,
                Check::outcome(
                    "kappa",
                    l.expected_limit.sub(&target).is_zero(),
                    format!("{} * twisted form", k),
                    l.expected_limit.display(names),
                ),
            );
        }
        None => push_timed(
            &mut checks,
            t0,
            Check::skip("kappa", "limit is not recorded as a multiple of the twisted form"),
        ),
    }

    checks
}

pub fn obstruction_checks(o: &ObstructionCase) -> Vec<Check> {
    let mut checks = Vec::new();
    let t0 = Instant::now();
    match o.algebra.invariant_symmetric_forms() {
        Ok(forms) => {
            let ok = forms.identically_degenerate == Some(true);
            push_timed(
                &mut checks,
                t0,
                Check::outcome(
                    "invariant_forms",
                    ok,
                    "no nondegenerate invariant symmetric form".into(),
                    format!(
                        "solution space dimension {}; determinant vanishes identically: {}",
                        forms.dim(),
                        match forms.identically_degenerate {
                            Some(b) => b.to_string(),
                            None => "undecided".to_string(),
                        }
                    ),
                ),
            );
        }
        Err(e) => push_timed(
            &mut checks,
            t0,
            Check::outcome(
                "invariant_forms",
                false,
                "no nondegenerate invariant symmetric form".into(),
                e.to_string(),
            ),
        ),
    }
    checks
}

pub fn verify_entry(entry: &'static CatalogEntry, opts: &Opts) -> Vec<Check> {
    match &entry.data {
        CaseData::Double(_) => double_checks(&catalog_subject(entry), opts),
        CaseData::Limit(l) => limit_checks(l, opts),
        CaseData::FormObstruction(o) => obstruction_checks(o),
    }
}

/// Every catalog entry, in catalog order; the per-entry pipelines run in
/// parallel and the merged list is deterministic.
pub fn verify_all(opts: &Opts) -> Vec<Check> {
    let entries = catalog_entries();
    let per_entry: Vec<Vec<Check>> = entries
        .par_iter()
        .map(|e| verify_entry(e, opts))
        .collect();
    entries
        .iter()
        .zip(per_entry)
        .flat_map(|(e, checks)| {
            checks.into_iter().map(move |mut c| {
                c.name = format!("{}/{}", e.id, c.name);
                c
            })
        })
        .collect()
}

/// The coisotropy verdict of a catalog double, with the witness generator
/// when the projection fails.
pub fn case_verdict(c: &DoubleCase) -> (CoisotropyVerdict, String) {
    let delta = coboundary_delta(&c.target, &c.expected_r_skew);
    let spec = SubalgebraSpec::new(&c.target, &c.lorentz).expect("catalog isotropy closes");
    let verdict = coisotropy_classify(&delta, &spec);
    let names = c.target.names();
    let text = match &verdict {
        CoisotropyVerdict::Neither(w) => format!(
            "neither: delta({}) contains {}*{}^{}",
            names[w.generator], w.coefficient, names[w.term.0], names[w.term.1]
        ),
        other => other.label().to_string(),
    };
    (verdict, text)
}

/// Case r-matrix with user parameter substitutions; parametric families are
/// engaged only when a parameter is supplied.
pub fn case_r_with_params(c: &DoubleCase, params: &[(String, Scalar)]) -> Result<Bivector, String> {
    let mut r = if params.is_empty() {
        c.expected_r_skew.clone()
    } else {
        match &c.parametric {
            Some(fam) => fam.r.clone(),
            None => c.expected_r_skew.clone(),
        }
    };
    for (k, v) in params {
        r = r.substitute_param(k, v).map_err(|e| format!("parameter {k}: {e}"))?;
    }
    Ok(r)
}

pub fn schouten_checks(alg: &LieAlgebra, r: &Bivector, expect_qt: bool) -> Vec<Check> {
    let mut checks = Vec::new();
    let t0 = Instant::now();
    let s = schouten(alg, r);
    push_timed(
        &mut checks,
        t0,
        Check {
            name: "schouten".into(),
            status: Status::Pass,
            expected: "-".into(),
            actual: s.display(alg.names()),
            elapsed_ms: 0.0,
        },
    );
    let t0 = Instant::now();
    let verdict = mcybe_check(alg, r);
    let ok = !expect_qt || matches!(verdict, McybeVerdict::Quasitriangular);
    push_timed(
        &mut checks,
        t0,
        Check::outcome(
            "mcybe",
            ok,
            if expect_qt {
                "quasitriangular".into()
            } else {
                "-".into()
            },
            verdict.to_string(),
        ),
    );
    checks
}

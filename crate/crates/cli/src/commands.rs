use std::fs;

use qes_core::aim::{
    aim_eigenvalues, matching_digits, qes_certificate_numeric, AimConfig, AimError, AimResult,
    Representation,
};
use qes_core::asymptotics::Potential;
use qes_core::decatic::{
    solve_state, table_row, verify, wavefunction, DecaticError, Parity, QesSolution, Sign,
    TableRowSpec, TABLE_ROWS,
};
use qes_core::numerics::{
    parse_rational, BigDecimal, ExtendedScalar, Number, OrderedScalar, Rational, Scalar,
};
use qes_core::polyode::{
    determinant_conditions, necessary_degrees, polynomial_solutions, OdeCoefficients,
    OdeCoefficientsJson,
};
use serde_json::{json, Value};

use crate::output::{Failure, Report, EXIT_NO_CONVERGENCE, EXIT_NO_SOLUTION};
use crate::{AimArgs, ConditionsArgs, ExactArgs, ParityArg, PlotArgs, PotentialArgs, ReprArg};
use crate::{SignArg, TableArgs};

/// Depth of the fixed-energy termination check reported next to AIM roots.
const CERTIFICATE_DEPTH: usize = 6;

fn rational(name: &str, s: &str) -> Result<Rational, Failure> {
    parse_rational(s).map_err(|e| Failure::parse(format!("--{name}: {e}")))
}

fn ext(name: &str, s: &str) -> Result<ExtendedScalar, Failure> {
    ExtendedScalar::parse(s).map_err(|e| Failure::parse(format!("--{name}: {e}")))
}

fn leading(s: &str) -> Result<Rational, Failure> {
    let a = rational("a", s)?;
    if a <= Rational::from_integer(0.into()) {
        return Err(Failure::parse(format!("--a must be positive, got {a}")));
    }
    Ok(a)
}

fn potential(p: &PotentialArgs) -> Result<Potential, Failure> {
    Potential::new(
        leading(&p.a)?,
        ext("b", &p.b)?,
        ext("c", &p.c)?,
        ext("d", &p.d)?,
        ext("e", &p.e)?,
    )
    .map_err(Failure::parse)
}

fn potential_strings(v: &Potential) -> Vec<String> {
    vec![
        v.a().to_string(),
        v.b().to_string(),
        v.c().to_string(),
        v.d().to_string(),
        v.e().to_string(),
    ]
}

fn tolerance(digits: u32, precision: u32) -> BigDecimal {
    BigDecimal::parse(&format!("1e-{digits}"), precision).expect("literal")
}

fn parity(p: ParityArg) -> Parity {
    match p {
        ParityArg::Even => Parity::Even,
        ParityArg::Odd => Parity::Odd,
    }
}

fn decatic_failure(e: DecaticError) -> Failure {
    match e {
        DecaticError::NoRealSolution => Failure::no_solution(e),
        e => Failure::parse(e),
    }
}

pub fn exact(args: &ExactArgs) -> Result<Report, Failure> {
    let a = leading(&args.a)?;
    let b = ext("b", &args.b)?;
    let c = ext("c", &args.c)?;
    let sols = solve_state(&a, &b, &c, parity(args.parity), args.n, args.digits)
        .map_err(decatic_failure)?;
    let rows = sols
        .iter()
        .map(|s| {
            let show = |n: &Number| n.display(s.digits);
            vec![
                s.degree.to_string(),
                s.parity.to_string(),
                s.is_exact().to_string(),
                show(&s.energy),
                s.d.to_string(),
                show(&s.e),
                (0..=s.degree)
                    .map(|k| show(&s.chi.coeff(k)))
                    .collect::<Vec<_>>()
                    .join(";"),
            ]
        })
        .collect();
    let json = serde_json::to_value(&sols).map_err(Failure::parse)?;
    let report = Report::new(
        json,
        vec!["state", "parity", "exact", "E", "d", "e", "chi_coefficients"],
        rows,
    );
    if sols.is_empty() {
        return Ok(report.with_exit(EXIT_NO_SOLUTION, "no real solution"));
    }
    Ok(report)
}

fn aim_config(
    x0: Rational,
    iters: usize,
    precision: u32,
    digits: u32,
    window: (BigDecimal, BigDecimal),
    repr: ReprArg,
) -> AimConfig {
    AimConfig {
        x0,
        max_iters: iters,
        precision,
        energy_window: window,
        convergence_tol: tolerance(digits, precision),
        representation: match repr {
            ReprArg::Full => Representation::FullBivariate,
            ReprArg::Truncated => Representation::TaylorTruncated,
        },
    }
}

fn aim_failure(e: AimError) -> Failure {
    match e {
        AimError::EmptyWindow => Failure::no_solution(e),
        e => Failure::parse(e),
    }
}

pub fn aim(args: &AimArgs) -> Result<Report, Failure> {
    let v = potential(&args.potential)?;
    let window = |name: &str, s: &str| {
        BigDecimal::parse(s, args.precision).map_err(|e| Failure::parse(format!("--{name}: {e}")))
    };
    let cfg = aim_config(
        rational("x0", &args.x0)?,
        args.iters,
        args.precision,
        args.digits,
        (window("emin", &args.emin)?, window("emax", &args.emax)?),
        args.representation,
    );
    let res = aim_eigenvalues(&v, &cfg, args.count).map_err(aim_failure)?;
    let threshold = tolerance(args.digits, args.precision);
    let mut rows = Vec::new();
    let mut eigen = Vec::new();
    let mut certs = Vec::new();
    for (i, ev) in res.eigenvalues.iter().enumerate() {
        let value = ev.value.to_string_trimmed(args.digits + 2);
        let iterations = ev.trace.estimates.last().map(|e| e.0).unwrap_or(0);
        let cert =
            qes_certificate_numeric(&v, &ev.value, CERTIFICATE_DEPTH, args.precision, &threshold);
        rows.push(vec![
            i.to_string(),
            value.clone(),
            ev.trace.digits_agreed.to_string(),
            iterations.to_string(),
            ev.trace.converged.to_string(),
            cert.terminated.to_string(),
        ]);
        eigen.push(json!({
            "index": i,
            "value": value,
            "digits_converged": ev.trace.digits_agreed,
            "iterations": iterations,
            "converged": ev.trace.converged,
        }));
        certs.push(json!({
            "index": i,
            "terminated": cert.terminated,
            "witness": cert.witness,
        }));
    }
    let json = json!({
        "potential": potential_strings(&v),
        "x0": cfg.x0.to_string(),
        "iterations_used": res.iterations_used,
        "eigenvalues": eigen,
        "certificates": certs,
    });
    let report = Report::new(
        json,
        vec!["index", "E", "digits_converged", "iterations", "converged", "qes_certificate"],
        rows,
    );
    if !res.eigenvalues.iter().any(|e| e.trace.converged) {
        return Ok(report.with_exit(EXIT_NO_CONVERGENCE, "no eigenvalue converged"));
    }
    Ok(report)
}

fn join(v: &[ExtendedScalar]) -> String {
    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(";")
}

pub fn conditions(args: &ConditionsArgs) -> Result<Report, Failure> {
    let text = fs::read_to_string(&args.file)
        .map_err(|e| Failure::parse(format!("{}: {e}", args.file.display())))?;
    let raw: OdeCoefficientsJson = serde_json::from_str(&text)
        .map_err(|e| Failure::parse(format!("{}: {e}", args.file.display())))?;
    let ode = OdeCoefficients::from_json(&raw).map_err(Failure::parse)?;
    let degrees = necessary_degrees(&ode, args.nmax);
    let mut rows = Vec::new();
    let mut dets = Vec::new();
    for n in 1..=args.nmax.min(2) {
        let d = determinant_conditions(&ode, n);
        let all_zero = d.iter().all(|x| x.is_zero());
        rows.push(vec!["determinants".into(), n.to_string(), join(&d)]);
        dets.push(json!({
            "degree": n,
            "values": d.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "all_zero": all_zero,
        }));
    }
    let mut sols = Vec::new();
    for &n in &degrees {
        rows.push(vec!["admissible".into(), n.to_string(), String::new()]);
        for s in polynomial_solutions(&ode, n).map_err(Failure::parse)? {
            rows.push(vec!["solution".into(), n.to_string(), join(&s.coeffs)]);
            sols.push(json!({
                "degree": n,
                "coefficients": s.coeffs.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            }));
        }
    }
    let found = !sols.is_empty();
    let report = Report::new(
        json!({
            "nmax": args.nmax,
            "admissible_degrees": degrees,
            "determinants": dets,
            "solutions": sols,
        }),
        vec!["kind", "degree", "values"],
        rows,
    );
    if degrees.is_empty() {
        let note = format!("no admissible degree ≤ {}", args.nmax);
        return Ok(report.with_exit(EXIT_NO_SOLUTION, note));
    }
    if !found {
        let note = format!("no polynomial solution of degree ≤ {}", args.nmax);
        return Ok(report.with_exit(EXIT_NO_SOLUTION, note));
    }
    Ok(report)
}

/// One block of reference AIM eigenvalues.
struct Block {
    coeffs: [&'static str; 5],
    reference: [&'static str; 6],
    /// Index of the level known in closed form.
    exact: Option<usize>,
}

const BLOCKS: [Block; 4] = [
    Block {
        coeffs: ["0.04", "0.877", "5.5", "-7.5", "2"],
        reference: [
            "1.342322779564646216",
            "5.136482243202476766",
            "11.304205821188349432",
            "19.577677092617956963",
            "29.438055052333889749",
            "40.723083272298272621",
        ],
        exact: None,
    },
    Block {
        coeffs: ["0.04", "0.877", "5.5", "-7.5", "-2"],
        reference: [
            "0.135429448914739200",
            "2.708255201038304023",
            "8.719471783294745896",
            "16.684057789758348655",
            "26.234813143437435201",
            "37.249467272037347758",
        ],
        exact: None,
    },
    Block {
        coeffs: ["0.01", "0.1", "1.0", "3.250", "12.5625"],
        reference: [
            "3.75",
            "11.653048680350115469",
            "20.358948672177131878",
            "29.850701419298223478",
            "40.098623827649000672",
            "51.071414767832192856",
        ],
        exact: Some(0),
    },
    Block {
        coeffs: ["0.01", "0.1", "1.0", "3.050", "11.5625"],
        reference: [
            "3.611850704712528538",
            "11.25",
            "19.713587721031462373",
            "28.983552585573622185",
            "39.026595688356661175",
            "49.808260402594522700",
        ],
        exact: Some(1),
    },
];

pub fn table(args: &TableArgs) -> Result<Report, Failure> {
    match args.which {
        1 | 2 => closed_form_table(args),
        5 => aim_table(args),
        w => Err(Failure::parse(format!("unknown table {w}; expected 1, 2 or 5"))),
    }
}

fn closed_form_table(args: &TableArgs) -> Result<Report, Failure> {
    let mu = rational("mu", &args.mu)?;
    let k = rational("k", &args.k)?;
    let sign = match args.sign {
        SignArg::Plus => Sign::Plus,
        SignArg::Minus => Sign::Minus,
    };
    let mut rows = Vec::new();
    let mut out = Vec::new();
    for row in 1..=TABLE_ROWS {
        let spec = TableRowSpec {
            table: args.which,
            row,
            mu: mu.clone(),
            k: k.clone(),
            sign,
        };
        let r = table_row(&spec).map_err(Failure::parse)?;
        let verified = verify(&r.potential, &Number::Exact(r.energy.clone()), &r.chi()).exact_zero;
        let coeffs = potential_strings(&r.potential);
        let decimal = r.energy.to_decimal(40).to_string_trimmed(20);
        let mut line = vec![row.to_string()];
        line.extend(coeffs.iter().cloned());
        line.extend([r.energy.to_string(), decimal.clone(), verified.to_string()]);
        rows.push(line);
        out.push(json!({
            "row": row,
            "potential": coeffs,
            "E": r.energy.to_string(),
            "E_decimal": decimal,
            "verified": verified,
        }));
    }
    Ok(Report::new(
        Value::Array(out),
        vec!["row", "a", "b", "c", "d", "e", "E", "E_decimal", "verified"],
        rows,
    ))
}

fn aim_table(args: &TableArgs) -> Result<Report, Failure> {
    let window = (BigDecimal::from_i64(-50), BigDecimal::from_i64(200));
    let cfg = aim_config(
        Rational::from_integer(0.into()),
        args.iters,
        args.precision,
        args.digits,
        window,
        ReprArg::Truncated,
    );
    let count = args.count.clamp(1, 6);
    let results: Vec<Result<AimResult, AimError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = BLOCKS
            .iter()
            .map(|b| {
                let cfg = &cfg;
                scope.spawn(move || {
                    let v = Potential::parse(b.coeffs).expect("literal");
                    aim_eigenvalues(&v, cfg, count)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker")).collect()
    });
    let mut rows = Vec::new();
    let mut out = Vec::new();
    for (b, res) in BLOCKS.iter().zip(results) {
        let res = res.map_err(aim_failure)?;
        let label = b.coeffs.join(" ");
        for (n, ev) in res.eigenvalues.iter().enumerate() {
            let reference = BigDecimal::parse(b.reference[n], args.precision).expect("literal");
            let matched = matching_digits(&ev.value, &reference);
            let value = ev.value.to_string_trimmed(args.digits + 2);
            let iterations = ev.trace.estimates.last().map(|e| e.0).unwrap_or(0);
            let exact = b.exact == Some(n);
            rows.push(vec![
                label.clone(),
                n.to_string(),
                value.clone(),
                b.reference[n].to_string(),
                exact.to_string(),
                matched.to_string(),
                iterations.to_string(),
                ev.trace.converged.to_string(),
            ]);
            out.push(json!({
                "potential": b.coeffs,
                "n": n,
                "E": value,
                "reference": b.reference[n],
                "reference_exact": exact,
                "digits_matched": matched,
                "iterations": iterations,
                "converged": ev.trace.converged,
            }));
        }
    }
    Ok(Report::new(
        Value::Array(out),
        vec![
            "potential",
            "n",
            "E",
            "reference",
            "reference_exact",
            "digits_matched",
            "iterations",
            "converged",
        ],
        rows,
    ))
}

fn matching_state(v: &Potential, sols: Vec<QesSolution>, digits: u32) -> Option<QesSolution> {
    let tol = tolerance(digits, digits + 10);
    let target = v.e().to_decimal(digits + 10);
    sols.into_iter().find(|s| {
        if &s.d != v.d() {
            return false;
        }
        match &s.e {
            Number::Exact(e) => e == v.e(),
            Number::Approx(e) => {
                let scale = target.abs().max(BigDecimal::one());
                e.sub(&target).abs() <= tol.mul(&scale)
            }
        }
    })
}

pub fn plot_data(args: &PlotArgs) -> Result<Report, Failure> {
    let v = potential(&args.potential)?;
    let xmin = rational("xmin", &args.xmin)?;
    let xmax = rational("xmax", &args.xmax)?;
    if args.samples == 0 {
        return Err(Failure::parse("--samples must be at least 1"));
    }
    if xmax < xmin {
        return Err(Failure::parse("--xmax must not be below --xmin"));
    }
    let work = args.digits + 10;
    let wave = match args.state {
        None => None,
        Some(n) => {
            let sols = solve_state(v.a(), v.b(), v.c(), Parity::of(n), n, work)
                .map_err(decatic_failure)?;
            let sol = matching_state(&v, sols, args.digits).ok_or_else(|| {
                Failure::no_solution(format!("the potential has no state with a degree-{n} factor"))
            })?;
            Some(wavefunction(&sol))
        }
    };
    let steps = Rational::from_integer((args.samples.max(2) - 1).into());
    let mut rows = Vec::new();
    let mut out = Vec::new();
    for i in 0..args.samples {
        let x = &xmin + (&xmax - &xmin) * Rational::from_integer(i.into()) / &steps;
        let xd = BigDecimal::from_rational(&x, work);
        let vx = v.eval(&xd, work).to_string_trimmed(args.digits);
        let psi = wave.as_ref().map(|w| w.eval(&xd, work).to_string_trimmed(args.digits));
        let xs = xd.to_string_trimmed(args.digits);
        rows.push(vec![xs.clone(), vx.clone(), psi.clone().unwrap_or_default()]);
        out.push(json!({ "x": xs, "V": vx, "psi": psi }));
    }
    Ok(Report::new(Value::Array(out), vec!["x", "V", "psi"], rows))
}

//! Batch front end: `build`, `verify`, `example`, `partition`.
//!
//! Exit codes: 0 when everything passes, 1 when a verification fails (the
//! report is still written), 2 for usage, configuration and I/O errors.

pub mod args;
pub mod serialize;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use serde_json::{json, Value};
use thiserror::Error;

use susybi::builder::{build_dual_polynomials, build_eigenfunction, build_inhomogeneity, potential_series};
use susybi::examples::{
    bessel_superpotential, morse_chi_closed, morse_psi_closed, morse_second_order_rhs,
    singular_chi_closed, singular_inhomogeneity_identities, singular_psi_closed, MorseConfig,
    SingularConfig,
};
use susybi::partition::{discontinuity_report, partition_z};
use susybi::verify::run_suite;
use susybi::{
    build_system, hamiltonian_apply, BiorthogonalSystem, Coefficient, LaurentSeries, Ring, SectorSign,
    Superpotential,
};

use args::{Cli, Command, ExampleArgs, Format, Model, Output, PartitionArgs, RingArg, SystemArgs, VerifyArgs};

/// Overrides the float-ring precision (decimal digits).
pub const PRECISION_ENV: &str = "SUSYBI_PRECISION";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] susybi::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// Rendered output plus whether every check in it passed.
struct Outcome {
    text: String,
    pass: bool,
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let (result, dest) = match &cli.command {
        Command::Build(a) => (cmd_build(a), &a.out),
        Command::Verify(a) => (cmd_verify(a), &a.system.out),
        Command::Example(a) => (cmd_example(a), &a.out),
        Command::Partition(a) => (cmd_partition(a), &a.out),
    };
    let written = result.and_then(|o| emit(&o.text, dest, out).map(|_| o.pass));
    match written {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn emit(text: &str, dest: &Output, out: &mut dyn Write) -> Result<(), CliError> {
    match &dest.output {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn float_ring() -> Result<Ring, CliError> {
    match std::env::var(PRECISION_ENV) {
        Ok(v) => {
            let digits: u32 = v
                .trim()
                .parse()
                .ok()
                .filter(|&d| d >= 1)
                .ok_or_else(|| CliError::Usage(format!("{PRECISION_ENV} must be a positive integer, got {v:?}")))?;
            Ok(Ring::float_digits(digits))
        }
        Err(_) => Ok(Ring::default_float()),
    }
}

fn ring_of(r: RingArg) -> Result<Ring, CliError> {
    match r {
        RingArg::Rational => Ok(Ring::Rational),
        RingArg::Float => float_ring(),
    }
}

fn parse_list(ring: Ring, s: &str) -> Result<Vec<Coefficient>, CliError> {
    s.split(',').map(|x| ring.parse(x).map_err(CliError::from)).collect()
}

fn convert(ring: Ring, c: &Coefficient) -> Coefficient {
    match c.as_rational() {
        Some(q) => ring.from_rational(q),
        None => c.clone(),
    }
}

fn potential_of(a: &SystemArgs, ring: Ring) -> Result<Superpotential, CliError> {
    let order = a.order.unwrap_or(a.levels + a.depth + 2);
    if let Some(list) = &a.upsilon {
        let ups = parse_list(ring, list)?;
        return Ok(if a.truncated { Superpotential::truncated(ups)? } else { Superpotential::polynomial(ups)? });
    }
    match a.model {
        Some(Model::Morse) => {
            let mu = ring.parse(&a.mu)?;
            Ok(MorseConfig::new(mu, a.levels, a.depth)?.potential())
        }
        Some(Model::Singular) => Ok(Superpotential::singular(ring, order)?),
        Some(Model::Bessel) => {
            let b = bessel_superpotential(order)?;
            let ups = b.potential.coefficients().iter().map(|c| convert(ring, c)).collect();
            Ok(Superpotential::truncated(ups)?)
        }
        None => Err(CliError::Usage("either --model or --upsilon is required".into())),
    }
}

fn system_of(a: &SystemArgs) -> Result<BiorthogonalSystem, CliError> {
    let ring = ring_of(a.ring)?;
    let u = potential_of(a, ring)?;
    let nu = ring.parse(&a.nu)?;
    Ok(build_system(&u, &nu, a.levels, a.depth)?)
}

fn cmd_build(a: &SystemArgs) -> Result<Outcome, CliError> {
    let sys = system_of(a)?;
    let text = match a.out.format.unwrap_or(Format::Json) {
        Format::Json => serialize::to_json(&sys),
        Format::Csv => serialize::to_csv(&sys)?,
    };
    Ok(Outcome { text, pass: true })
}

fn apply_perturbation(sys: &mut BiorthogonalSystem, arg: &str) -> Result<(), CliError> {
    let bad = || CliError::Usage(format!("--perturb expects n:j:plus|minus, got {arg:?}"));
    let parts: Vec<&str> = arg.split(':').collect();
    let [n, j, s] = parts[..] else { return Err(bad()) };
    let n: usize = n.parse().map_err(|_| bad())?;
    let j: usize = j.parse().map_err(|_| bad())?;
    let s = match s {
        "plus" | "+" => SectorSign::Plus,
        "minus" | "-" => SectorSign::Minus,
        _ => return Err(bad()),
    };
    let ring = sys.ring();
    let level = sys.levels.get_mut(n).ok_or_else(|| CliError::Usage(format!("no level {n}")))?;
    let c = level.chi.get_mut(s).c.get_mut(j).ok_or_else(|| CliError::Usage(format!("no c_{{{n},{j}}}")))?;
    *c = &*c + &ring.one();
    Ok(())
}

fn cmd_verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    let mut sys = system_of(&a.system)?;
    if let Some(p) = &a.perturb {
        apply_perturbation(&mut sys, p)?;
    }
    let reports = run_suite(&sys, a.window)?;
    let pass = reports.iter().all(|r| r.passed());
    let text = match a.system.out.format.unwrap_or(Format::Json) {
        Format::Json => {
            let doc = json!({
                "scope": sys.scope(),
                "status": if pass { "pass" } else { "fail" },
                "reports": reports,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("plain data");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["check_name", "status", "worst_defect", "failure_count"])?;
            for r in &reports {
                let status = if r.passed() { "pass" } else { "fail" };
                w.write_record([
                    r.check_name.clone(),
                    status.into(),
                    r.worst_defect.to_string(),
                    r.failure_count.to_string(),
                ])?;
            }
            csv_text(w)?
        }
    };
    Ok(Outcome { text, pass })
}

fn csv_text(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("utf-8 fields"))
}

fn strs(cs: &[Coefficient]) -> Vec<String> {
    cs.iter().map(ToString::to_string).collect()
}

/// Example output: a JSON document plus a flat `(n, sector, kind, exponent, value)` table.
struct Table {
    json: Value,
    rows: Vec<[String; 5]>,
    pass: bool,
}

impl Table {
    fn series(&mut self, n: usize, s: &str, kind: &str, first_exp: i64, cs: &[Coefficient]) {
        for (i, c) in cs.iter().enumerate() {
            self.rows.push([n.to_string(), s.into(), kind.into(), (first_exp + i as i64).to_string(), c.to_string()]);
        }
    }

    fn scalar(&mut self, n: usize, s: &str, kind: &str, value: String) {
        self.rows.push([n.to_string(), s.into(), kind.into(), String::new(), value]);
    }

    fn check(&mut self, n: usize, kind: &str, ok: bool) {
        self.pass &= ok;
        self.scalar(n, "", kind, ok.to_string());
    }

    fn render(self, format: Format) -> Result<Outcome, CliError> {
        let text = match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("plain data");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["n", "sector", "kind", "exponent", "value"])?;
                for r in &self.rows {
                    w.write_record(r)?;
                }
                csv_text(w)?
            }
        };
        Ok(Outcome { text, pass: self.pass })
    }
}

fn example_morse(a: &ExampleArgs, t: &mut Table) -> Result<(), CliError> {
    let ring = Ring::Rational;
    let cfg = MorseConfig::new(ring.parse(&a.mu)?, a.n, a.depth)?;
    let u = cfg.potential();
    let zero = ring.zero();
    let mut levels = Vec::new();
    for n in 0..=cfg.n_max {
        let psi = morse_psi_closed(n, &cfg.mu, cfg.depth);
        let duals = morse_chi_closed(n, &cfg.mu);
        let chi_rec = build_dual_polynomials(n, &u, &zero)?;
        let lam_rec = build_inhomogeneity(n, &chi_rec, &u)?;
        let psi_rec = build_eigenfunction(n, &u, &zero, cfg.depth)?;
        let mut recursion = chi_rec == duals.chi && psi_rec == psi;
        let mut lambda_ok = true;
        let mut second_order = true;
        for s in SectorSign::BOTH {
            let lam = duals.lambda.get(s);
            recursion &= lam_rec.get(s).lambda == vec![lam.clone()];
            // λ = ±μ c_{n,n}
            let c_nn = duals.chi.get(s).c[n].clone();
            let signed = &(&cfg.mu * &c_nn) * &ring.int(s.signum());
            lambda_ok &= *lam == signed;
            let chi = duals.chi.get(s).as_series();
            let n2 = ring.int((n * n) as i64);
            let lhs = hamiltonian_apply(&chi, &u, &zero, s, false)?.sub(&chi.scale(&n2)?)?;
            second_order &= lhs == morse_second_order_rhs(n, s, lam, &cfg.mu);

            let name = s.name();
            t.series(n, name, "chi", -(n as i64), &duals.chi.get(s).c);
            t.scalar(n, name, "lambda", lam.to_string());
            t.series(n, name, "psi", n as i64, &psi.get(s).a);
        }
        t.check(n, "matches_recursion", recursion);
        t.check(n, "lambda_is_signed_c_nn", lambda_ok);
        t.check(n, "second_order_form", second_order);
        levels.push(json!({
            "n": n,
            "chi": { "plus": strs(&duals.chi.plus.c), "minus": strs(&duals.chi.minus.c) },
            "lambda": { "plus": duals.lambda.plus.to_string(), "minus": duals.lambda.minus.to_string() },
            "psi": { "plus": strs(&psi.plus.a), "minus": strs(&psi.minus.a), "depth": cfg.depth },
            "matches_recursion": recursion,
            "lambda_is_signed_c_nn": lambda_ok,
            "second_order_form": second_order,
        }));
    }
    t.json = json!({ "model": "morse", "mu": cfg.mu.to_string(), "levels": levels });
    Ok(())
}

fn example_singular(a: &ExampleArgs, t: &mut Table) -> Result<(), CliError> {
    let ring = Ring::Rational;
    let cfg = SingularConfig::new(ring.parse(&a.nu)?, a.n, a.depth)?;
    let u = cfg.potential()?;
    let order = u.order();
    let mut levels = Vec::new();
    for n in 0..=cfg.n_max {
        let rec = build_eigenfunction(n, &u, &cfg.nu, cfg.depth)?;
        let mut entry = json!({ "n": n });
        let mut psi_ok = true;
        for s in SectorSign::BOTH {
            let psi = singular_psi_closed(n, &cfg.nu, s, cfg.depth)?;
            psi_ok &= psi == *rec.get(s);
            t.series(n, s.name(), "psi", n as i64, &psi.a);
            entry["psi"][s.name()] = json!(strs(&psi.a));
        }
        t.check(n, "psi_matches_recursion", psi_ok);
        entry["psi_matches_recursion"] = json!(psi_ok);

        if cfg.nu.is_zero() {
            let duals = singular_chi_closed(n, ring)?;
            let chi_rec = build_dual_polynomials(n, &u, &cfg.nu)?;
            let chi_ok = chi_rec == duals.chi;
            let identities = singular_inhomogeneity_identities(n, order)?;
            for s in SectorSign::BOTH {
                t.series(n, s.name(), "chi", -(n as i64), &duals.chi.get(s).c);
                entry["chi"][s.name()] = json!(strs(&duals.chi.get(s).c));
            }
            let (_, deriv) = duals.chi.minus.as_series().boundary_values()?;
            let gamma = duals.plus_at_one_gamma.as_ref().map(ToString::to_string);
            t.scalar(n, "plus", "chi_at_one", duals.plus_at_one.to_string());
            if let Some(g) = &gamma {
                t.scalar(n, "plus", "chi_at_one_gamma", g.clone());
            }
            t.scalar(n, "minus", "two_chi_prime_at_one", deriv.mul_int(2).to_string());
            t.check(n, "chi_matches_recursion", chi_ok);
            t.check(n, "identities", identities.passed());
            entry["chi_plus_at_one"] = json!(duals.plus_at_one.to_string());
            entry["chi_plus_at_one_gamma"] = json!(gamma);
            entry["two_chi_minus_prime_at_one"] = json!(deriv.mul_int(2).to_string());
            entry["chi_matches_recursion"] = json!(chi_ok);
            entry["identities"] = serde_json::to_value(&identities).expect("plain data");
        }
        levels.push(entry);
    }
    t.json = json!({
        "model": "singular",
        "nu": cfg.nu.to_string(),
        "K": order,
        "levels": levels,
    });
    Ok(())
}

fn example_bessel(a: &ExampleArgs, t: &mut Table) -> Result<(), CliError> {
    let order = a.depth.max(2);
    let b = bessel_superpotential(order)?;
    let ring = Ring::Rational;
    let z2 = LaurentSeries::monomial(ring.one(), 2).truncate(order as i64);
    let v_plus = potential_series(&b.potential, SectorSign::Plus)?;
    let v_plus_ok = v_plus == z2 && v_plus.trunc_order() == Some(order as i64);
    let v_minus: Vec<Coefficient> = (1..=order as i64).map(|e| b.v_minus.coeff(e).unwrap_or_else(|| ring.zero())).collect();
    t.series(0, "", "upsilon", 1, b.potential.coefficients());
    t.series(0, "minus", "v", 1, &v_minus);
    t.check(0, "v_plus_is_z2", v_plus_ok);
    t.json = json!({
        "model": "bessel",
        "K": order,
        "upsilon": strs(b.potential.coefficients()),
        "v_minus": strs(&v_minus),
        "v_plus_is_z2": v_plus_ok,
    });
    Ok(())
}

fn cmd_example(a: &ExampleArgs) -> Result<Outcome, CliError> {
    let mut t = Table { json: Value::Null, rows: Vec::new(), pass: true };
    match a.model {
        Model::Morse => example_morse(a, &mut t)?,
        Model::Singular => example_singular(a, &mut t)?,
        Model::Bessel => example_bessel(a, &mut t)?,
    }
    t.json["status"] = json!(if t.pass { "pass" } else { "fail" });
    t.render(a.out.format.unwrap_or(Format::Json))
}

fn cmd_partition(a: &PartitionArgs) -> Result<Outcome, CliError> {
    let format = a.out.format.unwrap_or(Format::Csv);
    let text = match (&a.nu, &a.nu_ladder) {
        (Some(nu), _) => {
            let r = partition_z(*nu, a.tol)?;
            match format {
                Format::Json => serde_json::to_string_pretty(&r).expect("plain data") + "\n",
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.serialize(r)?;
                    csv_text(w)?
                }
            }
        }
        (None, Some(ladder)) => {
            let rep = discontinuity_report(ladder, a.tol)?;
            match format {
                Format::Json => serde_json::to_string_pretty(&rep).expect("plain data") + "\n",
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["eps", "z", "limit", "deviation", "z0", "jump"])?;
                    for row in &rep.rows {
                        w.write_record([row.eps, row.z, rep.limit, row.deviation, rep.z0, rep.jump].map(|x| x.to_string()))?;
                    }
                    csv_text(w)?
                }
            }
        }
        (None, None) => return Err(CliError::Usage("partition needs --nu or --nu-ladder".into())),
    };
    Ok(Outcome { text, pass: true })
}

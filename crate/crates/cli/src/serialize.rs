//! JSON and CSV forms of a [`BiorthogonalSystem`]. Every coefficient is a
//! string ("p/q" for rationals), so documents are exact and byte-stable.

use serde::{Deserialize, Serialize};
use susybi::builder::Level;
use susybi::{
    BiorthogonalSystem, Coefficient, DualPolynomial, Eigenfunction, Inhomogeneity, Ring,
    SectorPair, SectorSign, Superpotential,
};

use crate::CliError;

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct PairDoc {
    pub plus: Vec<String>,
    pub minus: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct LambdaDoc {
    pub plus: Vec<String>,
    pub minus: Vec<String>,
    /// `null` when Λ is exact.
    pub trunc_order: Option<i64>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct PsiDoc {
    pub plus: Vec<String>,
    pub minus: Vec<String>,
    pub depth: usize,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct LevelDoc {
    pub n: usize,
    pub chi: PairDoc,
    pub lambda: LambdaDoc,
    pub psi: PsiDoc,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct MetaDoc {
    #[serde(rename = "K")]
    pub k: usize,
    pub trunc_policy: String,
    pub exact_potential: bool,
    pub ring: String,
    /// Binary precision for the float ring.
    pub precision_bits: Option<u32>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct SystemDoc {
    pub nu: String,
    pub upsilon: Vec<String>,
    pub levels: Vec<LevelDoc>,
    pub meta: MetaDoc,
}

fn strings(cs: &[Coefficient]) -> Vec<String> {
    cs.iter().map(ToString::to_string).collect()
}

pub fn to_doc(sys: &BiorthogonalSystem) -> SystemDoc {
    let ring = sys.ring();
    SystemDoc {
        nu: sys.nu.to_string(),
        upsilon: strings(sys.potential.coefficients()),
        levels: sys
            .levels
            .iter()
            .map(|l| LevelDoc {
                n: l.n,
                chi: PairDoc { plus: strings(&l.chi.plus.c), minus: strings(&l.chi.minus.c) },
                lambda: LambdaDoc {
                    plus: strings(&l.lambda.plus.lambda),
                    minus: strings(&l.lambda.minus.lambda),
                    trunc_order: l.lambda.plus.trunc_order,
                },
                psi: PsiDoc {
                    plus: strings(&l.psi.plus.a),
                    minus: strings(&l.psi.minus.a),
                    depth: sys.depth,
                },
            })
            .collect(),
        meta: MetaDoc {
            k: sys.potential.order(),
            trunc_policy: "pessimistic".into(),
            exact_potential: sys.potential.is_exact(),
            ring: ring.kind().to_string(),
            precision_bits: match ring {
                Ring::Rational => None,
                Ring::Float { prec } => Some(prec),
            },
        },
    }
}

pub fn to_json(sys: &BiorthogonalSystem) -> String {
    let mut s = serde_json::to_string_pretty(&to_doc(sys)).expect("plain data");
    s.push('\n');
    s
}

fn parse_all(ring: Ring, xs: &[String]) -> Result<Vec<Coefficient>, CliError> {
    xs.iter().map(|x| ring.parse(x).map_err(CliError::from)).collect()
}

pub fn from_doc(doc: &SystemDoc) -> Result<BiorthogonalSystem, CliError> {
    let ring = match (doc.meta.ring.as_str(), doc.meta.precision_bits) {
        ("rational", _) => Ring::Rational,
        ("float", Some(prec)) => Ring::Float { prec },
        (r, _) => return Err(CliError::Usage(format!("unknown ring {r:?} in document"))),
    };
    let ups = parse_all(ring, &doc.upsilon)?;
    let potential = if doc.meta.exact_potential {
        Superpotential::polynomial(ups)?
    } else {
        Superpotential::truncated(ups)?
    };
    let depth = doc.levels.first().map_or(0, |l| l.psi.depth);
    let mut levels = Vec::with_capacity(doc.levels.len());
    for (i, l) in doc.levels.iter().enumerate() {
        if l.n != i {
            return Err(CliError::Usage(format!("level {i} listed as n = {}", l.n)));
        }
        let n = l.n;
        let pair = |plus: &[String], minus: &[String]| -> Result<_, CliError> {
            Ok(SectorPair::new(parse_all(ring, plus)?, parse_all(ring, minus)?))
        };
        let chi = pair(&l.chi.plus, &l.chi.minus)?;
        let lam = pair(&l.lambda.plus, &l.lambda.minus)?;
        let psi = pair(&l.psi.plus, &l.psi.minus)?;
        let s = |x: &SectorPair<Vec<Coefficient>>, s: SectorSign| x.get(s).clone();
        levels.push(Level {
            n,
            chi: SectorPair::new(
                DualPolynomial { level: n, sector: SectorSign::Plus, c: s(&chi, SectorSign::Plus) },
                DualPolynomial { level: n, sector: SectorSign::Minus, c: s(&chi, SectorSign::Minus) },
            ),
            lambda: SectorPair::new(
                Inhomogeneity {
                    level: n,
                    sector: SectorSign::Plus,
                    lambda: s(&lam, SectorSign::Plus),
                    trunc_order: l.lambda.trunc_order,
                    ring,
                },
                Inhomogeneity {
                    level: n,
                    sector: SectorSign::Minus,
                    lambda: s(&lam, SectorSign::Minus),
                    trunc_order: l.lambda.trunc_order,
                    ring,
                },
            ),
            psi: SectorPair::new(
                Eigenfunction { level: n, sector: SectorSign::Plus, a: s(&psi, SectorSign::Plus) },
                Eigenfunction { level: n, sector: SectorSign::Minus, a: s(&psi, SectorSign::Minus) },
            ),
        });
    }
    Ok(BiorthogonalSystem {
        nu: ring.parse(&doc.nu)?,
        potential,
        max_level: levels.len().saturating_sub(1),
        depth,
        levels,
    })
}

pub fn from_json(text: &str) -> Result<BiorthogonalSystem, CliError> {
    let doc: SystemDoc = serde_json::from_str(text).map_err(|e| CliError::Usage(e.to_string()))?;
    from_doc(&doc)
}

/// One `(n, sector, kind, exponent, value)` row per stored coefficient.
pub fn to_csv(sys: &BiorthogonalSystem) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "sector", "kind", "exponent", "value"])?;
    for l in &sys.levels {
        let n = l.n as i64;
        for s in SectorSign::BOTH {
            let rows = l.chi.get(s).c.iter().enumerate().map(|(j, c)| ("chi", j as i64 - n, c));
            let lam = l.lambda.get(s).lambda.iter().enumerate().map(|(k, c)| ("lambda", k as i64 + 1, c));
            let psi = l.psi.get(s).a.iter().enumerate().map(|(j, c)| ("psi", n + j as i64, c));
            for (kind, e, c) in rows.chain(lam).chain(psi) {
                w.write_record([l.n.to_string(), s.name().into(), kind.into(), e.to_string(), c.to_string()])?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}

//! The eight ImEx methods used in the experiments.
//!
//! Rational coefficients are entered as exact fractions (the text is kept for
//! audit); closed-form irrational and published decimal coefficients carry
//! their defining expression.

use std::ops::{Add, Neg, Sub};

use serde::Serialize;

use super::tableau::{classify, Classification, Coef, ImexTableau};
use crate::error::{Error, Result};

/// Exact rational used to derive dependent coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Ratio(i128, i128);

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl Ratio {
    fn new(num: i128, den: i128) -> Self {
        let g = gcd(num, den).max(1) * den.signum();
        Self(num / g, den / g)
    }
}

impl Add for Ratio {
    type Output = Ratio;
    fn add(self, o: Ratio) -> Ratio {
        Ratio::new(self.0 * o.1 + o.0 * self.1, self.1 * o.1)
    }
}

impl Sub for Ratio {
    type Output = Ratio;
    fn sub(self, o: Ratio) -> Ratio {
        self + (-o)
    }
}

impl Neg for Ratio {
    type Output = Ratio;
    fn neg(self) -> Ratio {
        Ratio(-self.0, self.1)
    }
}

impl From<Ratio> for Coef {
    fn from(r: Ratio) -> Coef {
        let exact = if r.1 == 1 {
            r.0.to_string()
        } else {
            format!("{}/{}", r.0, r.1)
        };
        Coef::new(exact, r.0 as f64 / r.1 as f64)
    }
}

fn r(num: i128, den: i128) -> Ratio {
    Ratio::new(num, den)
}

fn z() -> Coef {
    Coef::zero()
}

fn rows<const S: usize>(m: [[Coef; S]; S]) -> Vec<Vec<Coef>> {
    m.into_iter().map(|row| row.into_iter().collect()).collect()
}

fn q(num: i128, den: i128) -> Coef {
    r(num, den).into()
}

fn ssp2_222() -> ImexTableau {
    let g = 1.0 - 1.0 / 2f64.sqrt();
    let gamma = || Coef::new("1 - 1/sqrt(2)", g);
    ImexTableau::new(
        "SSP2-ImEx(2,2,2)",
        2,
        rows([[z(), z()], [q(1, 1), z()]]),
        vec![q(1, 2), q(1, 2)],
        vec![z(), q(1, 1)],
        rows([
            [gamma(), z()],
            [Coef::new("sqrt(2) - 1", 2f64.sqrt() - 1.0), gamma()],
        ]),
        vec![q(1, 2), q(1, 2)],
        vec![gamma(), Coef::new("1/sqrt(2)", 1.0 / 2f64.sqrt())],
    )
    .expect("registered tableau")
}

fn ssp2_332() -> ImexTableau {
    let third = || q(1, 3);
    ImexTableau::new(
        "SSP2-ImEx(3,3,2)",
        2,
        rows([
            [z(), z(), z()],
            [q(1, 2), z(), z()],
            [q(1, 2), q(1, 2), z()],
        ]),
        vec![third(), third(), third()],
        vec![z(), q(1, 2), q(1, 1)],
        rows([
            [q(1, 4), z(), z()],
            [z(), q(1, 4), z()],
            [third(), third(), third()],
        ]),
        vec![third(), third(), third()],
        vec![q(1, 4), q(1, 4), q(1, 1)],
    )
    .expect("registered tableau")
}

fn agsa_342() -> ImexTableau {
    let at21 = r(-139833537, 38613965);
    let at31 = r(85870407, 49798258);
    let at32 = r(-121251843, 1756367063);
    let bt2 = r(1, 6);
    let bt3 = r(2, 3);
    let bt1 = r(1, 1) - bt2 - bt3;

    let c1 = r(168999711, 74248304);
    let gamma = r(202439144, 118586105);
    let a21 = r(44004295, 24775207);
    let a31 = r(-6418119, 169001713);
    let a32 = r(-748951821, 1043823139);
    let a33 = r(12015439, 183058594);
    let b2 = r(1, 3);
    let b3 = r(0, 1);
    let b1 = r(1, 1) - gamma - b2 - b3;

    let at = rows([
        [z(), z(), z(), z()],
        [at21.into(), z(), z(), z()],
        [at31.into(), at32.into(), z(), z()],
        [bt1.into(), bt2.into(), bt3.into(), z()],
    ]);
    let a = rows([
        [c1.into(), z(), z(), z()],
        [a21.into(), gamma.into(), z(), z()],
        [a31.into(), a32.into(), a33.into(), z()],
        [b1.into(), b2.into(), b3.into(), gamma.into()],
    ]);
    let ct = vec![z(), at21.into(), (at31 + at32).into(), q(1, 1)];
    let c = vec![
        c1.into(),
        (a21 + gamma).into(),
        (a31 + a32 + a33).into(),
        q(1, 1),
    ];
    ImexTableau::new(
        "AGSA(3,4,2)",
        2,
        at,
        vec![bt1.into(), bt2.into(), bt3.into(), z()],
        ct,
        a,
        vec![b1.into(), b2.into(), b3.into(), gamma.into()],
        c,
    )
    .expect("registered tableau")
}

fn ssp3_343() -> ImexTableau {
    let alpha = 0.241694260788;
    let beta = 0.0604235651970;
    let eta = 0.12915286960590;
    let al = || Coef::new("0.241694260788", alpha);
    let weights = || vec![z(), q(1, 6), q(1, 6), q(2, 3)];
    ImexTableau::new(
        "SSP3-ImEx(3,4,3)",
        3,
        rows([
            [z(), z(), z(), z()],
            [z(), z(), z(), z()],
            [z(), q(1, 1), z(), z()],
            [z(), q(1, 4), q(1, 4), z()],
        ]),
        weights(),
        vec![z(), z(), q(1, 1), q(1, 2)],
        rows([
            [al(), z(), z(), z()],
            [Coef::new("-0.241694260788", -alpha), al(), z(), z()],
            [z(), Coef::new("1 - 0.241694260788", 1.0 - alpha), al(), z()],
            [
                Coef::new("0.0604235651970", beta),
                Coef::new("0.12915286960590", eta),
                Coef::new(
                    "1/2 - 0.0604235651970 - 0.12915286960590 - 0.241694260788",
                    0.5 - beta - eta - alpha,
                ),
                al(),
            ],
        ]),
        weights(),
        vec![al(), z(), q(1, 1), q(1, 2)],
    )
    .expect("registered tableau")
}

fn ars_222() -> ImexTableau {
    let g = 1.0 - 1.0 / 2f64.sqrt();
    let d = 1.0 - 1.0 / (2.0 * g);
    let gamma = || Coef::new("1 - 1/sqrt(2)", g);
    let one_minus_gamma = || Coef::new("1/sqrt(2)", 1.0 / 2f64.sqrt());
    let delta = || Coef::new("1 - 1/(2 - sqrt(2))", d);
    let one_minus_delta = || Coef::new("1/(2 - sqrt(2))", 1.0 / (2.0 * g));
    ImexTableau::new(
        "ARS(2,2,2)",
        2,
        rows([
            [z(), z(), z()],
            [gamma(), z(), z()],
            [delta(), one_minus_delta(), z()],
        ]),
        vec![delta(), one_minus_delta(), z()],
        vec![z(), gamma(), q(1, 1)],
        rows([
            [z(), z(), z()],
            [z(), gamma(), z()],
            [z(), one_minus_gamma(), gamma()],
        ]),
        vec![z(), one_minus_gamma(), gamma()],
        vec![z(), gamma(), q(1, 1)],
    )
    .expect("registered tableau")
}

fn ars_443() -> ImexTableau {
    let bt = || vec![q(1, 4), q(7, 4), q(3, 4), q(-7, 4), z()];
    let b = || vec![z(), q(3, 2), q(-3, 2), q(1, 2), q(1, 2)];
    let at = rows([
        [z(), z(), z(), z(), z()],
        [q(1, 2), z(), z(), z(), z()],
        [q(11, 18), q(1, 18), z(), z(), z()],
        [q(5, 6), q(-5, 6), q(1, 2), z(), z()],
        [q(1, 4), q(7, 4), q(3, 4), q(-7, 4), z()],
    ]);
    let a = rows([
        [z(), z(), z(), z(), z()],
        [z(), q(1, 2), z(), z(), z()],
        [z(), q(1, 6), q(1, 2), z(), z()],
        [z(), q(-1, 2), q(1, 2), q(1, 2), z()],
        [z(), q(3, 2), q(-3, 2), q(1, 2), q(1, 2)],
    ]);
    let c = || vec![z(), q(1, 2), q(2, 3), q(1, 2), q(1, 1)];
    ImexTableau::new("ARS(4,4,3)", 3, at, bt(), c(), a, b(), c()).expect("registered tableau")
}

fn ark3_2_4l2sa() -> ImexTableau {
    let g = r(1767732205903, 4055673282236);
    let b = || -> Vec<Coef> {
        vec![
            q(1471266399579, 7840856788654),
            q(-4482444167858, 7529755066697),
            q(11266239266428, 11593286722821),
            g.into(),
        ]
    };
    let a = ark3_rows_implicit(g, &b());
    let c = || vec![z(), q(1767732205903, 2027836641118), q(3, 5), q(1, 1)];
    ImexTableau::new("ARK3(2)4L[2]SA", 3, ark3_rows_explicit(), b(), c(), a, b(), c())
        .expect("registered tableau")
}

fn ark3_rows_explicit() -> Vec<Vec<Coef>> {
    rows([
        [z(), z(), z(), z()],
        [q(1767732205903, 2027836641118), z(), z(), z()],
        [
            q(5535828885825, 10492691773637),
            q(788022342437, 10882634858940),
            z(),
            z(),
        ],
        [
            q(6485989280629, 16251701735622),
            q(-4246266847089, 9704473918619),
            q(10755448449292, 10357097424841),
            z(),
        ],
    ])
}

fn ark3_rows_implicit(g: Ratio, b: &[Coef]) -> Vec<Vec<Coef>> {
    rows([
        [z(), z(), z(), z()],
        [g.into(), g.into(), z(), z()],
        [
            q(2746238789719, 10658868560708),
            q(-640167445237, 6845629431997),
            g.into(),
            z(),
        ],
        [b[0].clone(), b[1].clone(), b[2].clone(), b[3].clone()],
    ])
}

fn ark4_3_6l2sa() -> ImexTableau {
    let b = || {
        vec![
            q(82889, 524892),
            z(),
            q(15625, 83664),
            q(69875, 102672),
            q(-2260, 8211),
            q(1, 4),
        ]
    };
    let at = rows([
        [z(), z(), z(), z(), z(), z()],
        [q(1, 2), z(), z(), z(), z(), z()],
        [q(13861, 62500), q(6889, 62500), z(), z(), z(), z()],
        [
            q(-116923316275, 2393684061468),
            q(-2731218467317, 15368042101831),
            q(9408046702089, 11113171139209),
            z(),
            z(),
            z(),
        ],
        [
            q(-451086348788, 2902428689909),
            q(-2682348792572, 7519795681897),
            q(12662868775082, 11960479115383),
            q(3355817975965, 11060851509271),
            z(),
            z(),
        ],
        [
            q(647845179188, 3216320057751),
            q(73281519250, 8382639484533),
            q(552539513391, 3454668386233),
            q(3354512671639, 8306763924573),
            q(4040, 17871),
            z(),
        ],
    ]);
    let a = rows([
        [z(), z(), z(), z(), z(), z()],
        [q(1, 4), q(1, 4), z(), z(), z(), z()],
        [q(8611, 62500), q(-1743, 31250), q(1, 4), z(), z(), z()],
        [
            q(5012029, 34652500),
            q(-654441, 2922500),
            q(174375, 388108),
            q(1, 4),
            z(),
            z(),
        ],
        [
            q(15267082809, 155376265600),
            q(-71443401, 120774400),
            q(730878875, 902184768),
            q(2285395, 8070912),
            q(1, 4),
            z(),
        ],
        {
            let b = b();
            [
                b[0].clone(),
                b[1].clone(),
                b[2].clone(),
                b[3].clone(),
                b[4].clone(),
                b[5].clone(),
            ]
        },
    ]);
    let c = || {
        vec![
            z(),
            q(1, 2),
            q(83, 250),
            q(31, 50),
            q(17, 20),
            q(1, 1),
        ]
    };
    ImexTableau::new("ARK4(3)6L[2]SA", 4, at, b(), c(), a, b(), c()).expect("registered tableau")
}

/// All registered methods, in the order type I then type II.
pub fn registry() -> Vec<ImexTableau> {
    vec![
        ssp2_222(),
        ssp2_332(),
        agsa_342(),
        ssp3_343(),
        ars_222(),
        ars_443(),
        ark3_2_4l2sa(),
        ark4_3_6l2sa(),
    ]
}

/// Short command-line aliases, e.g. `ars222` or `ark436`.
fn alias(name: &str) -> String {
    name.chars()
        .filter(|c| c.is_ascii_alphanumeric())
        .collect::<String>()
        .to_ascii_lowercase()
}

/// Looks a method up by its full name or by its alphanumeric alias
/// (`"ARS(4,4,3)"`, `"ars443"`, `"ssp2imex222"`, `"ark436l2sa"` …).
pub fn find_method(name: &str) -> Result<ImexTableau> {
    let key = alias(name);
    registry()
        .into_iter()
        .find(|t| {
            let full = alias(&t.name);
            full == key || full.replace("imex", "") == key
        })
        .ok_or_else(|| Error::UnknownMethod(name.to_string()))
}

#[derive(Debug, Clone, Serialize)]
pub struct RegistryEntry {
    #[serde(flatten)]
    pub tableau: ImexTableau,
    pub classification: Classification,
}

/// The registry with computed classifications, as pretty JSON.
pub fn registry_json() -> Result<String> {
    let entries = registry()
        .into_iter()
        .map(|t| {
            let classification = classify(&t)?;
            Ok(RegistryEntry {
                tableau: t,
                classification,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(serde_json::to_string_pretty(&entries)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imex::tableau::ImexType;

    #[test]
    fn ratio_arithmetic_reduces() {
        assert_eq!(r(2, 4), Ratio(1, 2));
        assert_eq!(r(1, -2), Ratio(-1, 2));
        assert_eq!(r(1, 1) - r(1, 6) - r(2, 3), r(1, 6));
        assert_eq!(Coef::from(r(-3, 2)).exact, "-3/2");
    }

    #[test]
    fn lookup_by_alias() {
        assert_eq!(find_method("ars443").unwrap().name, "ARS(4,4,3)");
        assert_eq!(find_method("SSP2-ImEx(2,2,2)").unwrap().name, "SSP2-ImEx(2,2,2)");
        assert_eq!(find_method("ssp2222").unwrap().name, "SSP2-ImEx(2,2,2)");
        assert_eq!(find_method("ark436l2sa").unwrap().name, "ARK4(3)6L[2]SA");
        assert!(matches!(find_method("rk4"), Err(Error::UnknownMethod(_))));
    }

    #[test]
    fn all_eight_present_with_expected_types() {
        let reg = registry();
        assert_eq!(reg.len(), 8);
        for (i, t) in reg.iter().enumerate() {
            let kind = classify(t).unwrap().kind;
            assert_eq!(kind, if i < 4 { ImexType::I } else { ImexType::II }, "{}", t.name);
        }
    }

    #[test]
    fn json_keeps_exact_strings() {
        let json = registry_json().unwrap();
        assert!(json.contains("-139833537/38613965"));
        assert!(json.contains("1 - 1/sqrt(2)"));
        assert!(json.contains("0.241694260788"));
    }
}

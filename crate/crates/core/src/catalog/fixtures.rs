//! Reference functions, looked up by name. Each one re-checks its known
//! properties when loaded.
//!
//! | name | function |
//! |------|----------|
//! | `appendixA_R` | 8-bit quadratic APN function with a recursive chain of APN trims (table form) |
//! | `appendixA_R_uni` | the same function as a polynomial over `F_2^8` mod `0x11d` |
//! | `G1`..`G4` | 7-bit quadratic APN functions over `F_2^7` mod `0x83` |
//! | `T6` | `(x^3, 0) + (x^16 + x, Tr(x)) y` over `F_2^5 x F_2` |
//! | `T8_1`..`T8_4` | `(G_i(x), 0) + (x, Tr(x)) y` |
//! | `goldN`, `goldN_I` | `x^(2^I + 1)` over `F_2^N` (default modulus, `I = 1` if omitted) |
//! | `edelpott_1.2`, `edelpott_2.1` | `x^3 + g^11 x^6 + g x^9` and `x^3 + g x^24 + x^10` over `F_2^6` mod `0x5b` |
//! | `edelpott_2.6` | alias of `T6` |

use crate::catalog::format::parse_function;
use crate::catalog::FunctionRecord;
use crate::error::{Error, Result};
use crate::extension::{linear_matrix, ExtensionSpec};
use crate::field::FieldSpec;
use crate::gf2::GF2Matrix;
use crate::vbf::Vbf;

const APPENDIX_A_R: &str = "lut id=appendixA_R n=8 m=8:
00 79 b2 e1 39 c7 70 a4 36 c0 22 fe 5e 2f b1 ea
b9 f8 1d 76 28 ee 77 9b 0a c4 08 ec ca 83 33 50
1e 1d 70 59 b5 31 20 8e 58 d4 90 36 a2 a9 91 b0
8d b6 f5 e4 8e 32 0d 9b 4e fa 90 0e 1c 2f 39 20
8e 26 1f 9d ba 95 d0 d5 a6 81 91 9c c3 63 0f 85
fc 6c 7b c1 60 77 1c 21 51 4e 70 45 9c 04 46 f4
2f fd 62 9a 89 dc 3f 40 77 2a 9c eb 80 5a 90 60
77 9d 2c ec 79 14 d9 9e aa cf 57 18 f5 17 f3 3b
46 bf d8 0b 0b 75 6e 3a 9c ea a4 f8 80 71 43 98
eb 2a 63 88 0e 48 7d 11 b4 fa 9a fe 00 c9 d5 36
ef 6c ad 04 30 34 89 a7 45 49 a1 87 cb 40 d4 75
68 d3 3c ad 1f 23 b0 a6 47 73 b5 ab 61 d2 68 f1
d1 f9 6c 6e 91 3e d7 52 15 b2 0e 83 04 24 e4 ee
b7 a7 1c 26 5f c8 0f b2 f6 69 fb 4e 4f 57 b9 8b
c7 95 a6 de 15 c0 8f 70 73 ae b4 43 f0 aa cc bc
8b e1 fc bc f1 1c 7d ba ba 5f 6b a4 91 f3 bb f3
";

const APPENDIX_A_R_UNI: &str = "uni id=appendixA_R_uni n=8 mod=0x11d:
(g^157,1) (g^237,2) (g^169,3) (g^56,4) (g^43,5) (g^11,6) (g^154,8) (g^89,9)
(g^155,10) (g^221,12) (g^157,16) (g^5,17) (g^245,18) (g^32,20) (g^127,24)
(g^49,32) (g^81,33) (g^4,34) (g^146,36) (g^223,40) (g^44,48) (g^70,64)
(g^127,65) (g^113,66) (g^52,68) (g^253,72) (g^209,80) (g^239,96) (g^43,128)
(g^4,129) (g^99,130) (g^89,132) (g^26,136) (g^47,144) (g^220,160) (g^253,192)
";

const G_TERMS: [&str; 4] = [
    "uni id=G1 n=7 mod=0x83:
(g^92,96) (g^50,80) (g^27,72) (g^28,68) (0x01,66) (g^97,65) (g^60,48)
(g^88,40) (g^123,36) (g^43,34) (g^32,33) (g^26,24) (g^100,20) (g^115,18)
(g^85,17) (g^111,12) (g^28,10) (g^93,9) (g^113,6) (g^53,5) (g^10,3)
",
    "uni id=G2 n=7 mod=0x83:
(g^68,96) (g^3,80) (g^58,72) (g^39,68) (g^43,66) (g^96,65) (g^118,48)
(g^102,40) (g^61,36) (g^69,34) (g^59,33) (g^110,24) (g^99,20) (g^53,18)
(g^63,17) (g^55,12) (g^98,10) (g^31,9) (g^57,6) (g^69,5) (g^87,3)
",
    "uni id=G3 n=7 mod=0x83:
(g^71,96) (g^46,80) (g^15,72) (g^126,68) (g^44,65) (g^38,48)
(g^104,40) (0x01,36) (g^73,34) (g^83,33) (g^38,24) (g^3,20) (g^120,18)
(g^34,17) (g^78,12) (g^108,10) (g^28,9) (g^113,6) (g^100,5) (g^70,3)
",
    "uni id=G4 n=7 mod=0x83:
(g^71,96) (g^20,80) (g^125,72) (g^40,68) (g^71,66) (g^75,65) (g^113,48)
(g^100,40) (g^29,36) (g^62,34) (g^40,33) (g^97,24) (g^22,20) (g^111,18)
(g^106,17) (g^86,12) (g^29,10) (g,9) (g^64,6) (g^51,5) (g^16,3)
",
];

const EDEL_POTT_1_2: &str = "uni id=edelpott_1.2 n=6 mod=0x5b: (0x01,3) (g^11,6) (g,9)";
const EDEL_POTT_2_1: &str = "uni id=edelpott_2.1 n=6 mod=0x5b: (0x01,3) (g,24) (0x01,10)";

/// Properties a fixture must have; `None` means not recorded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Expected {
    pub degree: Option<u32>,
    pub apn: bool,
    pub linearity: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub record: FunctionRecord,
    pub function: Vbf,
    pub expected: Expected,
}

/// Names of the fixed fixtures (the `gold` family is open-ended).
pub const NAMES: [&str; 14] = [
    "appendixA_R",
    "appendixA_R_uni",
    "G1",
    "G2",
    "G3",
    "G4",
    "T6",
    "T8_1",
    "T8_2",
    "T8_3",
    "T8_4",
    "edelpott_1.2",
    "edelpott_2.1",
    "edelpott_2.6",
];

fn parsed(text: &str) -> Result<FunctionRecord> {
    Ok(parse_function(text)?)
}

/// The 7-bit function `G_i`, `i` in `1..=4`.
pub fn g(i: usize) -> Result<Vbf> {
    let text = G_TERMS
        .get(i.wrapping_sub(1))
        .ok_or_else(|| Error::Usage(format!("no fixture G{i}")))?;
    parsed(text)?.to_vbf()
}

pub fn appendix_a_r() -> Result<Vbf> {
    parsed(APPENDIX_A_R)?.to_vbf()
}

/// `x^(2^i + 1)` over the default field of degree `n`.
pub fn gold(n: usize, i: usize) -> Result<Vbf> {
    let field = FieldSpec::standard(n)?;
    let e = 1u64.checked_shl(i as u32).map(|p| p + 1).filter(|&e| e < 1 << n);
    let e = e.ok_or(Error::ExponentOutOfRange { exponent: i as u64, n })?;
    Vbf::from_univariate(&field, &[(1, e)])
}

/// `(x^3, 0) + (x^16 + x, Tr(x)) y` over `F_2^5 x F_2`.
pub fn t6() -> Result<Vbf> {
    let field = FieldSpec::standard(5)?;
    let g = gold(5, 1)?;
    let l = linear_matrix(5, |x| field.pow(x, 16) ^ x);
    ExtensionSpec::zero_r(g, l, field.trace_vector())?.build()
}

/// `(G_i(x), 0) + (x, Tr(x)) y` with the trace of `F_2^7` mod `0x83`.
pub fn t8(i: usize) -> Result<Vbf> {
    let field = FieldSpec::new(7, 0x83)?;
    ExtensionSpec::zero_r(g(i)?, GF2Matrix::identity(7), field.trace_vector())?.build()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn parse_gold(name: &str) -> Option<(usize, usize)> {
    let rest = name.strip_prefix("gold")?;
    let (n, i) = match rest.split_once('_') {
        Some((n, i)) => (n.parse().ok()?, i.parse().ok()?),
        None => (rest.parse().ok()?, 1),
    };
    Some((n, i))
}

fn build(name: &str) -> Result<(FunctionRecord, Vbf, Expected)> {
    let quad_apn = |lin| Expected { degree: Some(2), apn: true, linearity: lin };
    let from_text = |text: &str, expected| -> Result<(FunctionRecord, Vbf, Expected)> {
        let rec = parsed(text)?;
        let f = rec.to_vbf()?;
        Ok((rec, f, expected))
    };
    let from_vbf = |f: Vbf, expected| Ok((FunctionRecord::from_vbf(name, &f), f, expected));
    match name {
        "appendixA_R" => from_text(APPENDIX_A_R, quad_apn(None)),
        "appendixA_R_uni" => from_text(APPENDIX_A_R_UNI, quad_apn(None)),
        "G1" | "G2" | "G3" | "G4" => {
            let i: usize = name[1..].parse().expect("matched digit");
            from_text(G_TERMS[i - 1], quad_apn(Some(16)))
        }
        "T6" | "edelpott_2.6" => from_vbf(t6()?, quad_apn(Some(32))),
        "T8_1" | "T8_2" | "T8_3" | "T8_4" => {
            from_vbf(t8(name[3..].parse().expect("matched digit"))?, quad_apn(Some(128)))
        }
        "edelpott_1.2" => from_text(EDEL_POTT_1_2, quad_apn(None)),
        "edelpott_2.1" => from_text(EDEL_POTT_2_1, quad_apn(None)),
        _ => {
            let (n, i) = parse_gold(name).ok_or_else(|| Error::Usage(format!("unknown fixture '{name}'")))?;
            let f = gold(n, i)?;
            let apn = gcd(i, n) == 1;
            let linearity = apn.then(|| if !n.is_multiple_of(2) { 1u64 << n.div_ceil(2) } else { 1u64 << ((n + 2) / 2) });
            let degree = if i == 0 { 1 } else { 2 };
            from_vbf(f, Expected { degree: Some(degree), apn, linearity })
        }
    }
}

/// Loads a fixture and checks its recorded properties.
pub fn fixture(name: &str) -> Result<Fixture> {
    let (mut record, function, expected) = build(name)?;
    if record.id.is_empty() {
        record.id = name.to_string();
    }
    let check = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(Error::Invariant(format!("fixture {name} failed its {what} check")))
        }
    };
    if let Some(d) = expected.degree {
        check(function.degree() == d, "degree")?;
    }
    check(function.is_apn()? == expected.apn, "APN")?;
    if let Some(l) = expected.linearity {
        check(function.linearity() == l, "linearity")?;
    }
    Ok(Fixture { name: name.to_string(), record, function, expected })
}

//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fail.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use escher::arith::{div_by_rational, mul, negate};
use escher::cxe::{pseudo_cmp, CxE, PseudoCmp, Window};
use escher::expr::Session;
use escher::hyper::{hyper_apply, HyperRank};
use escher::laws::{fuzz_law_with, run_suite, Addition, Ops};
use escher::numeric::Numeric;
use escher::plot::{render, PlotSpec, BLACK, BLUE, RED};
use escher::rank0::{kis, sik, sik_by_cases, TieBreak};
use escher::scalar::{ExactScalar, PrecisionConfig};
use escher::{ackermann, ackermann_mod};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, detail: String) -> Check {
    let took = start.elapsed();
    ensure(took < limit, || {
        format!("{detail}; took {took:?}, limit {limit:?}")
    })?;
    Ok(format!("{detail}; {took:.2?}"))
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn rand_rational<R: Rng>(rng: &mut R, span: i64, max_den: i64) -> BigRational {
    ratio(
        rng.gen_range(-span * max_den..=span * max_den),
        rng.gen_range(1..=max_den),
    )
}

/// A point of `E`, real or stigmareal, with a rational part.
fn rand_escherian<R: Rng>(rng: &mut R) -> CxE {
    let re = rand_rational(rng, 20, 6);
    let t = if rng.gen_bool(0.5) { 0 } else { 1 };
    CxE::from_rationals(re, ratio(t, 1))
}

/// Any `CxE`: a polynomial real part in `P` of degree at most 1 and an
/// arbitrary rational `t`, with extra weight on the two real bands.
fn rand_cxe<R: Rng>(rng: &mut R) -> CxE {
    let mut coeffs = vec![rand_rational(rng, 20, 6)];
    if rng.gen_bool(0.25) {
        coeffs.push(rand_rational(rng, 2, 4));
    }
    let t = match rng.gen_range(0..4) {
        0 => ratio(0, 1),
        1 => ratio(1, 1),
        _ => ratio(rng.gen_range(0..24), 12),
    };
    CxE::new(
        ExactScalar::from_coeffs(coeffs),
        ExactScalar::from_rational(t),
    )
    .unwrap()
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let closed = |m: u32, n: u64| -> BigInt {
        let n = BigInt::from(n);
        match m {
            0 => n + 1,
            1 => n + 2,
            2 => n * 2 + 3,
            _ => (BigInt::from(1) << (u32::try_from(&n).unwrap() + 3)) - 3,
        }
    };
    let printed = [
        [1, 2, 3, 4, 5, 6],
        [2, 3, 4, 5, 6, 7],
        [3, 5, 7, 9, 11, 13],
        [5, 13, 29, 61, 125, 253],
    ];
    let printed_mod = [
        [4, 5, 6, 7, 8, 9],
        [5, 6, 7, 8, 9, 10],
        [6, 8, 10, 12, 14, 16],
        [8, 16, 32, 64, 128, 256],
    ];
    for m in 0..4u32 {
        for n in 0..6u64 {
            let got = ackermann(m, n).map_err(|e| e.to_string())?;
            let want = BigInt::from(printed[m as usize][n as usize]);
            ensure(got == want && got == closed(m, n), || {
                format!("A({m},{n}) = {got}, table {want}")
            })?;
            let got = ackermann_mod(m, n + 3).map_err(|e| e.to_string())?;
            let want = BigInt::from(printed_mod[m as usize][n as usize]);
            ensure(got == want, || {
                format!("A'({m},{}) = {got}, table {want}", n + 3)
            })?;
        }
    }
    within(start, Duration::from_secs(1), "48 cells exact".into())
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let cfg = PrecisionConfig::default();
    let two = Numeric::from_i64(2);
    let op = |m: u32, a: &Numeric, b: i64| -> Result<Numeric, String> {
        hyper_apply(HyperRank::new(m).unwrap(), a, &Numeric::from_i64(b), &cfg)
            .map_err(|e| e.to_string())
    };
    for m in 0..4u32 {
        for n in 3..=8u64 {
            let a = ackermann_mod(m, n).map_err(|e| e.to_string())?;
            let t = op(m, &two, n as i64)?;
            ensure(t.as_integer() == Some(a.clone()), || {
                format!("A'({m},{n}) = {a} but 2 o{m} {n} = {t}")
            })?;
        }
        let lhs = op(m, &two, 4)?;
        let rhs = op(m + 1, &two, 3)?;
        ensure(lhs == rhs, || {
            format!("2 o{m} 4 = {lhs} vs 2 o{} 3 = {rhs}", m + 1)
        })?;
        let inner = op(m, &two, 2)?;
        let v = op(m + 1, &inner, 1)?;
        ensure(v == Numeric::from_i64(4), || {
            format!("(2 o{m} 2) o{} 1 = {v}", m + 1)
        })?;
    }
    within(
        start,
        Duration::from_secs(1),
        "24 bridge cells and 8 identities exact".into(),
    )
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let cfg = PrecisionConfig::default();
    let reports = run_suite(42, 1000, &cfg);
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.id.as_str())
        .collect();
    ensure(failed.is_empty(), || {
        format!("failing laws: {}", failed.join(", "))
    })?;
    let flipped = Ops {
        tie: TieBreak::LowerBand,
        addition: Addition::Reduced,
    };
    let r = fuzz_law_with("21.3S", 1, 0, flipped, &cfg).map_err(|e| e.to_string())?;
    ensure(!r.passed(), || {
        "21.3S still passes with the flipped tie-break".into()
    })?;
    let naive = Ops {
        tie: TieBreak::FirstOperand,
        addition: Addition::Naive,
    };
    let r = fuzz_law_with("15.3", 1000, 42, naive, &cfg).map_err(|e| e.to_string())?;
    ensure(!r.passed(), || {
        "15.3 still passes with naive addition".into()
    })?;
    let naive_failures = r.failed;
    within(
        start,
        Duration::from_secs(60),
        format!(
            "{} laws x 1000 trials pass; flipped tie-break fails 21.3S; naive addition fails 15.3 on {naive_failures}/1000",
            reports.len()
        ),
    )
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let cfg = PrecisionConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10_000 {
        let (x, z) = (rand_cxe(&mut rng), rand_cxe(&mut rng));
        let d = sik(&z, &x, &cfg).map_err(|e| format!("sik({z}, {x}): {e}"))?;
        let back = kis(&x, &d, &cfg).map_err(|e| e.to_string())?;
        ensure(back.contains(&z), || {
            format!("x = {x}, z = {z}: kis(x, z sik x) = {back}")
        })?;
    }
    for _ in 0..10_000 {
        let (x, z) = (rand_escherian(&mut rng), rand_escherian(&mut rng));
        let a = sik(&z, &x, &cfg).map_err(|e| e.to_string())?;
        let b = sik_by_cases(&z, &x, &cfg).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("{z} sik {x}: {a} vs {b}"))?;
    }
    within(
        start,
        Duration::from_secs(10),
        "2 x 10^4 pairs exact".into(),
    )
}

fn criterion_5() -> Check {
    let cfg = PrecisionConfig::default();
    let cmp = |a: &CxE, b: &CxE| pseudo_cmp(a, b, &cfg).map_err(|e| e.to_string());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut pairs = 0;
    while pairs < 100 {
        let (p, q) = (
            rand_rational(&mut rng, 20, 6),
            rand_rational(&mut rng, 20, 6),
        );
        if p == q {
            continue;
        }
        pairs += 1;
        let (a, b) = if p < q { (p, q) } else { (q, p) };
        let a = CxE::rational(a);
        let b = CxE::rational(b);
        let (sa, sb) = (a.stigma().unwrap(), b.stigma().unwrap());
        for x in [&a, &b, &sa, &sb] {
            ensure(cmp(x, x)? == PseudoCmp::PseudoEqual, || {
                format!("{x} not pseudoequal to itself")
            })?;
            let s = x.stigma().unwrap();
            ensure(cmp(x, &s)? == PseudoCmp::PseudoEqual, || {
                format!("{x} not pseudoequal to its stigma")
            })?;
            for y in [&a, &b, &sa, &sb] {
                let (xy, yx) = (cmp(x, y)?, cmp(y, x)?);
                ensure(xy == yx.reverse(), || {
                    format!("antisymmetry fails for {x}, {y}")
                })?;
                if xy != PseudoCmp::PseudoEqual {
                    ensure(cmp(&s, y)? == xy.reverse(), || {
                        format!("stigma does not invert {x} vs {y}")
                    })?;
                }
            }
        }
        let cycle = [&a, &b, &sa, &sb, &a];
        for w in cycle.windows(2) {
            ensure(cmp(w[0], w[1])? == PseudoCmp::PseudoLess, || {
                format!("cycle breaks at {} < {}", w[0], w[1])
            })?;
        }
    }
    Ok("100 real pairs: reflexive, x ~ s(x), antisymmetric, inverted by stigma, 4-cycle".into())
}

fn criterion_6() -> Check {
    let s0 = CxE::zero().stigma().unwrap();
    let n = negate(&s0).map_err(|e| e.to_string())?;
    ensure(n == s0, || format!("-s(0) = {n}"))?;
    ensure(s0.to_string() == "s(0)", || format!("printed as {s0}"))?;
    ensure(s0.re().is_zero() && s0.im().is_one(), || {
        format!("embedding of s(0) is ({:?}, {:?})", s0.re(), s0.im())
    })?;
    let sq = mul(&s0, &s0).map_err(|e| e.to_string())?;
    ensure(sq.im().is_zero(), || format!("s(0) * s(0) = {sq}"))?;
    Ok(format!("-s(0) = s(0); s(0) * s(0) = {sq}"))
}

fn criterion_7() -> Check {
    let s6 = CxE::integer(6).stigma().unwrap();
    let three = ratio(3, 1);
    let set = div_by_rational(&s6, &three).map_err(|e| e.to_string())?;
    let want: Vec<CxE> = [1, 3, 5]
        .iter()
        .map(|k| CxE::from_rationals(ratio(2, 1), ratio(*k, 3)))
        .collect();
    ensure(
        set.len() == 3 && want.iter().all(|w| set.contains(w)),
        || format!("got {set}"),
    )?;
    ensure(set.principal() == &want[0], || {
        format!("principal {}", set.principal())
    })?;
    for w in set.members() {
        let back = mul(w, &CxE::integer(3)).map_err(|e| e.to_string())?;
        ensure(back == s6, || format!("{w} * 3 = {back}"))?;
    }
    Ok(format!("s(6) / 3 = {set}"))
}

fn criterion_8() -> Check {
    let cfg = PrecisionConfig::default();
    let window = Window::from_ints(-3, 3, 0, 2).map_err(|e| e.to_string())?;
    let spec = |w: Window| PlotSpec {
        center: CxE::zero(),
        window: w,
        width: 64,
        height: 64,
        band_marks: false,
    };
    let a = render(&spec(window.clone()), &cfg).map_err(|e| e.to_string())?;
    let b = render(&spec(window.shifted_t(&ratio(1, 1))), &cfg).map_err(|e| e.to_string())?;
    for (i, (p, q)) in a.pixels.iter().zip(&b.pixels).enumerate() {
        let ok = match *p {
            BLUE => *q == RED,
            RED => *q == BLUE,
            _ => true,
        };
        ensure(ok, || format!("pixel {i} does not invert"))?;
    }
    let black: Vec<(usize, usize)> = (0..64)
        .flat_map(|row| (0..64).map(move |col| (col, row)))
        .filter(|&(c, r)| a.get(c, r) == BLACK)
        .collect();
    // re = 0 is column 32; t = 1 is row 31, t = 0 is row 63
    ensure(black == [(32, 31), (32, 63)], || {
        format!("black cells {black:?}")
    })?;
    let again = render(&spec(window), &cfg).map_err(|e| e.to_string())?;
    ensure(a.to_ppm() == again.to_ppm(), || {
        "repeated render differs".into()
    })?;
    Ok("64x64 inversion holds; black cells (32,31) and (32,63); output stable".into())
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut session = Session::default();
    for _ in 0..1000 {
        let mut coeffs: Vec<BigRational> = (0..rng.gen_range(1..=3))
            .map(|_| rand_rational(&mut rng, 50, 9))
            .collect();
        if coeffs.len() > 1 && rng.gen_bool(0.3) {
            coeffs[0] = ratio(0, 1);
        }
        let t = match rng.gen_range(0..3) {
            0 => ratio(0, 1),
            1 => ratio(1, 1),
            _ => ratio(rng.gen_range(0..36), 18),
        };
        let v = CxE::new(
            ExactScalar::from_coeffs(coeffs),
            ExactScalar::from_rational(t),
        )
        .unwrap();
        let printed = v.to_string();
        let out = session
            .eval_line(&printed)
            .map_err(|e| format!("`{printed}`: {e}"))?;
        let got = out.value.as_ref().and_then(|x| x.principal()).cloned();
        ensure(got.as_ref() == Some(&v), || {
            format!("`{printed}` came back as {}", out.text)
        })?;
    }
    let out = session
        .eval_line("7 - 3 kis 2")
        .map_err(|e| e.to_string())?;
    ensure(out.text == "5", || format!("7 - 3 kis 2 = {}", out.text))?;
    Ok("1000 canonical values round-trip; 7 - 3 kis 2 = 5".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("Ackermann tables", criterion_1),
        ("Ackermann-tower bridge", criterion_2),
        ("law suite and negative controls", criterion_3),
        ("closure and sik forms", criterion_4),
        ("pseudoorder", criterion_5),
        ("stigma zero", criterion_6),
        ("division branches", criterion_7),
        ("region plot", criterion_8),
        ("parser round-trip", criterion_9),
    ];
    let mut all = true;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                all = false;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

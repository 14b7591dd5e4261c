//! Acceptance criteria, one line each. Exact checks use rationals with no
//! tolerance; the circle criteria use the stated floating point bounds.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dilator_core::circle::{
    solenoid_expectation, solenoid_suite, unit_samples, CircleClass, MonomialIndex,
    PiecewiseLinearCocycle, SolenoidMode,
};
use dilator_core::interaction::compare_suite;
use dilator_core::io::{ElementDescription, KernelDescription};
use dilator_core::kernels::PointIndex;
use dilator_core::{
    Cocycle, CocycleMode, CylinderFunction, Dilation, ExactCocycle, ExactSystem, Rational, Scalar,
    ShiftSystem, Status,
};

const EXACT_DEPTH: usize = 3;
const WORD_BOUND: u32 = 2;
const CIRCLE_TOL: f64 = 1e-9;
const VANISH_TOL: f64 = 1e-12;
const RUNTIME_LIMIT: Duration = Duration::from_secs(30);

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn binary() -> ShiftSystem {
    ShiftSystem::full_shift(2).unwrap()
}

fn depth_one(w0: Rational, w1: Rational, mode: CocycleMode) -> ExactCocycle {
    let g = CylinderFunction::new(binary(), vec![1], vec![w0, w1]).unwrap();
    Cocycle::new(binary(), vec![g], mode).unwrap()
}

fn fair() -> ExactCocycle {
    Cocycle::fair(&binary())
}

fn biased() -> ExactCocycle {
    depth_one(q(1, 3), q(2, 3), CocycleMode::Strict)
}

fn references() -> [(&'static str, ExactSystem); 2] {
    [
        ("fair", ExactSystem::new(fair())),
        ("biased", ExactSystem::new(biased())),
    ]
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn first_failure(report: &dilator_core::VerificationReport) -> String {
    match report.failures().next() {
        Some(c) => format!("{} {:?} failed: {:?}", c.check, c.parameters, c.witness),
        None => "no failure".into(),
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut instances = 0;
    for (name, is) in references() {
        for report in [
            is.axiom_suite(EXACT_DEPTH, WORD_BOUND),
            is.partial_action_suite(EXACT_DEPTH, WORD_BOUND),
        ] {
            ensure(
                report.all_ok(),
                format!("{name}: {}", first_failure(&report)),
            )?;
            instances += report.instances();
        }
        for family in [
            "partial_rep_left",
            "partial_rep_right",
            "multiplicative",
            "decomposition_independence",
        ] {
            let n = is.axiom_suite(1, 1).named(family).count();
            ensure(n > 0, format!("{name}: family {family} missing"))?;
        }
    }
    let elapsed = start.elapsed();
    ensure(
        elapsed < RUNTIME_LIMIT,
        format!(
            "took {:.1}s, limit {}s",
            elapsed.as_secs_f64(),
            RUNTIME_LIMIT.as_secs()
        ),
    )?;
    Ok(format!(
        "{instances} exact instances in {:.1}s",
        elapsed.as_secs_f64()
    ))
}

fn criterion_2() -> Outcome {
    let mut mutants = 0;
    for (name, cocycle) in [("fair", fair()), ("biased", biased())] {
        for (factor, g) in cocycle.generators().iter().enumerate() {
            for idx in 0..g.table().len() {
                let mut table = g.table().to_vec();
                table[idx] = table[idx].clone() * q(2, 1);
                let mutated = CylinderFunction::new(binary(), g.depth().to_vec(), table).unwrap();
                let broken = cocycle.clone().with_generator(factor, mutated).unwrap();
                let is = ExactSystem::new(broken);
                let validation = is.validation();
                let flagged = validation
                    .failures()
                    .any(|c| c.check == "normalization" && c.witness.is_some());
                ensure(
                    flagged,
                    format!("{name} entry {idx}: validate did not flag"),
                )?;
                let report = is.axiom_suite(2, 1);
                let witnessed = report.failures().any(|c| c.witness.is_some());
                ensure(witnessed, format!("{name} entry {idx}: no axiom failure"))?;
                mutants += 1;
            }
        }
    }
    Ok(format!(
        "{mutants} mutants flagged by validate and the axiom suite"
    ))
}

fn criterion_3() -> Outcome {
    let families = [
        "dilation_law",
        "admissible_commute",
        "admissible_unit",
        "restriction_residual",
        "induced_map",
        "restriction_ranges",
    ];
    let mut instances = 0;
    for (name, is) in references() {
        let report = Dilation::new(&is).dilation_suite(EXACT_DEPTH, WORD_BOUND);
        ensure(
            report.all_ok(),
            format!("{name}: {}", first_failure(&report)),
        )?;
        for family in families {
            let n: usize = report.named(family).map(|c| c.instances).sum();
            ensure(n > 0, format!("{name}: no instances of {family}"))?;
        }
        instances += report.instances();
    }
    Ok(format!("six families, {instances} exact instances"))
}

fn criterion_4() -> Outcome {
    for (name, is) in references() {
        let report = Dilation::new(&is).faithfulness(4, EXACT_DEPTH);
        ensure(
            report.checks[0].status == Status::Certificate,
            format!("{name}: no certificate"),
        )?;
    }
    let relaxed = ExactSystem::new(depth_one(q(0, 1), q(1, 1), CocycleMode::Relaxed));
    let dilation = Dilation::new(&relaxed);
    let report = dilation.faithfulness(4, EXACT_DEPTH);
    let entry = &report.checks[0];
    ensure(entry.status == Status::Witness, "relaxed: no witness")?;
    // recompute F(b*b) from the serialized witness
    let witness = entry.witness.as_ref().ok_or("relaxed: witness missing")?;
    let desc: ElementDescription =
        serde_json::from_value(witness["b"].clone()).map_err(|e| e.to_string())?;
    let b = desc.to_element(&binary()).map_err(|e| e.to_string())?;
    ensure(
        !b.is_zero() && b.is_positive(),
        "witness is not a nonzero positive element",
    )?;
    let value = dilation
        .expectation(&b.conj().checked_mul(&b).unwrap())
        .map_err(|e| e.to_string())?;
    ensure(value.is_zero(), "F(b*b) does not vanish")?;
    Ok(format!(
        "certificates for fair and biased; witness b = (level {:?}, {})",
        desc.level,
        serde_json::to_string(&desc.func.table).unwrap()
    ))
}

fn criterion_5() -> Outcome {
    let mut instances = 0;
    for (name, is) in references() {
        let report = Dilation::new(&is).fiber_suite(3, EXACT_DEPTH);
        ensure(
            report.all_ok(),
            format!("{name}: {}", first_failure(&report)),
        )?;
        instances += report.instances();
    }
    Ok(format!("levels 0..=3, {instances} exact instances"))
}

const KERNEL: &str = r#"{"Z":["z1","z2","z3"], "X":["x1","x2"],
    "pi":{"z1":"x1","z2":"x1","z3":"x2"},
    "rows":{"x1":["2/3","1/3","0"], "x2":["0","0","1"]}}"#;

fn criterion_6() -> Outcome {
    let desc = KernelDescription::parse(KERNEL).map_err(|e| e.to_string())?;
    let k = desc.to_kernel().map_err(|e| e.to_string())?;
    ensure(
        KernelDescription::from_kernel(&k) == desc,
        "kernel -> json round trip",
    )?;
    let back = dilator_core::FiniteKernel::from_map(
        k.z_labels().to_vec(),
        k.x_labels().to_vec(),
        k.pi().to_vec(),
        |b| k.apply(b),
    )
    .map_err(|e| e.to_string())?;
    ensure(back == k, "kernel -> map -> kernel")?;
    for n in 0..27i64 {
        let b: Vec<Rational> = (0..3).map(|i| q((n / 3i64.pow(i)) % 3 - 1, 1)).collect();
        ensure(back.apply(&b) == k.apply(&b), "map -> kernel -> map")?;
    }
    ensure(
        k.conditional_expectation_report().all_ok(),
        "not a conditional expectation",
    )?;
    let f = k.faithfulness_and_index().map_err(|e| e.to_string())?;
    let expected = vec![
        PointIndex::Finite(q(3, 2)),
        PointIndex::Finite(q(3, 1)),
        PointIndex::Finite(q(1, 1)),
    ];
    ensure(f.faithful && f.index == expected, format!("got {f:?}"))?;
    for (w, i) in k.weights().iter().zip(&f.index) {
        ensure(
            *i == PointIndex::Finite(q(1, 1) / w.clone()),
            "index is not 1/ω",
        )?;
    }

    let degenerate = KERNEL.replace(r#"["2/3","1/3","0"]"#, r#"["1","0","0"]"#);
    let k = KernelDescription::parse(&degenerate)
        .and_then(|d| d.to_kernel())
        .map_err(|e| e.to_string())?;
    let f = k.faithfulness_and_index().map_err(|e| e.to_string())?;
    let z = f.witness.ok_or("zero-weight kernel reported faithful")?;
    let b: Vec<Rational> = (0..3).map(|i| q((i == z) as i64, 1)).collect();
    let bb: Vec<Rational> = b.iter().map(|v| v.clone() * v.clone()).collect();
    ensure(
        !f.faithful && k.apply(&bb).iter().all(|v| *v == q(0, 1)),
        "witness not verified",
    )?;
    Ok(format!(
        "round trips exact; index (3/2, 3, 1); witness 1[{}]",
        k.z_labels()[z]
    ))
}

fn criterion_7() -> Outcome {
    let monomials = MonomialIndex::enumerate(5, 2);
    let report = solenoid_suite(&monomials, 64, CIRCLE_TOL, 2);
    ensure(report.all_ok(), first_failure(&report))?;
    let delta = MonomialIndex::delta(1);
    let mut worst = 0.0f64;
    for x in unit_samples(64) {
        for mode in [SolenoidMode::Sum, SolenoidMode::ClosedForm] {
            let v = solenoid_expectation(&delta, x, mode, 2).map_err(|e| e.to_string())?;
            worst = worst.max(v.norm());
        }
    }
    ensure(worst <= VANISH_TOL, format!("|F(b_δ1)| reaches {worst:e}"))?;
    for (name, class) in [
        ("w1", CircleClass::IndexFinite),
        ("w2", CircleClass::FaithfulNotIndexFinite),
        ("w3", CircleClass::NotFaithful),
    ] {
        let got = PiecewiseLinearCocycle::preset(name).unwrap().classify();
        ensure(got == class, format!("{name} classified as {got}"))?;
    }
    Ok(format!(
        "{} monomials x 64 samples; max |F(b_δ1)| = {worst:.1e}; w1/w2/w3 classified",
        monomials.len()
    ))
}

fn criterion_8() -> Outcome {
    let [(_, fair), (_, biased)] = references();
    let mut instances = 0;
    for (a, b) in [(&fair, &biased), (&biased, &fair)] {
        let report = compare_suite(a, b, 2, WORD_BOUND);
        ensure(report.all_ok(), first_failure(&report))?;
        instances += report.instances();
    }
    Ok(format!("{instances} exact instances, both directions"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("exact axiom conformance", criterion_1),
        ("mutation sensitivity", criterion_2),
        ("dilation law", criterion_3),
        ("faithfulness dichotomy", criterion_4),
        ("fiber-measure consistency", criterion_5),
        ("kernel round trips", criterion_6),
        ("solenoid", criterion_7),
        ("uniqueness cross-check", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

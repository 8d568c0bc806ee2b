//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use breuil::abelian::{a_span_k_basis, cokernel, image_k_span, image_rank, kernel};
use breuil::cyclotomic::{verify_b_sum, verify_t_congruence};
use breuil::decomposition::{jordan_holder, mf_membership};
use breuil::linalg::{contains, intersect};
use breuil::monodromy::solve_monodromy;
use breuil::random::random_morphism;
use breuil::simples::{enumerate_simples, lyndon_count, make_simple, SimpleDescriptor};
use breuil::tame::{inertia_weights, rational_character_identity, weight_vector, SystemS};
use breuil::{hom, AVec, BreuilModule, GlobalParams, Morphism};
use common::*;
use num_bigint::BigUint;

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const MAX_H: usize = 4;
const OBJECTS_PER_SET: usize = 200;
const JH_OBJECTS_PER_SET: usize = 12;
const CONJUGATIONS: usize = 20;

fn simples_up_to(params: GlobalParams, max_h: usize) -> Vec<SimpleDescriptor> {
    (1..=max_h).flat_map(|h| enumerate_simples(params, h).unwrap()).collect()
}

fn sample(p: u32, e: u32, r: u32) -> Vec<BreuilModule> {
    random_objects(params(p, e, r), OBJECTS_PER_SET, 3, 0xacce97 + u64::from(p * 100 + e * 10 + r))
}

fn simple_classification() -> Outcome {
    for &(p, e, r) in &PARAM_SETS {
        let params = params(p, e, r);
        let er = params.er();
        let mut objects = Vec::new();
        for h in 1..=MAX_H {
            let listed: Vec<Vec<usize>> = enumerate_simples(params, h).unwrap().iter().map(|d| d.digits().to_vec()).collect();
            let brute: Vec<Vec<usize>> = brute_force_classes(er, h).into_iter().collect();
            ensure!(listed == brute, "({p},{e},{r}) h = {h}: enumeration differs from rotation classing");
            ensure!(
                BigUint::from(listed.len()) == lyndon_count(er as u64 + 1, h as u64),
                "({p},{e},{r}) h = {h}: count differs from the necklace formula"
            );
            for d in enumerate_simples(params, h).unwrap() {
                objects.push((d.clone(), make_simple(&d).unwrap()));
            }
        }
        for (i, (dx, x)) in objects.iter().enumerate() {
            for (j, (dy, y)) in objects.iter().enumerate() {
                let dim = hom(x, y).unwrap().len();
                let expected = usize::from(i == j);
                ensure!(dim == expected, "({p},{e},{r}): dim Hom({:?}, {:?}) = {dim}", dx.digits(), dy.digits());
            }
        }
        // End over F_{p^f} with h | f
        for h in 1..=MAX_H {
            for f in [h, 2 * h] {
                let big = GlobalParams::new(p, e, r, f as u32).unwrap();
                for d in enumerate_simples(big, h).unwrap() {
                    let m = make_simple(&d).unwrap();
                    let dim = hom(&m, &m).unwrap().len();
                    ensure!(dim == h, "({p},{e},{r}) f = {f}: dim End({:?}) = {dim}", d.digits());
                }
            }
        }
    }
    Ok(())
}

fn serre_bound() -> Outcome {
    for &(p, e, r) in &PARAM_SETS {
        let er = params(p, e, r).er();
        for (k, m) in sample(p, e, r).iter().enumerate() {
            ensure!(m.is_valid(), "({p},{e},{r}) object {k} is not valid");
            let w = inertia_weights(m).map_err(|err| format!("({p},{e},{r}) object {k}: {err}"))?;
            ensure!(w.weights.iter().flatten().all(|&x| x <= er), "({p},{e},{r}) object {k}: weight above {er}");
            ensure!(w.total_level() == m.rank(), "({p},{e},{r}) object {k}: levels do not add up to the rank");
        }
    }
    Ok(())
}

fn inclusion(x: &BreuilModule, s: &BreuilModule, offset: usize) -> Morphism {
    let a = s.ring();
    let cols: Vec<AVec> = (0..x.rank()).map(|j| a.vec_unit(s.rank(), offset + j)).collect();
    morphism(x, s, breuil::AMatrix::from_columns(&cols, s.rank()))
}

fn projection(s: &BreuilModule, y: &BreuilModule, offset: usize) -> Morphism {
    let a = s.ring();
    let mut f = a.mat_zero(y.rank(), s.rank());
    for i in 0..y.rank() {
        f.set(i, offset + i, a.one());
    }
    morphism(s, y, f)
}

fn check_exactness(f: &Morphism) -> Outcome {
    let (src, tgt) = (f.source(), f.target());
    let ring = tgt.ring();
    let field = ring.field().clone();
    let dim = tgt.rank() * ring.ep();
    let units: Vec<AVec> = (0..src.rank()).map(|j| ring.vec_unit(src.rank(), j)).collect();
    let image = image_k_span(f, &a_span_k_basis(src, &units));
    let image_fil = image_k_span(f, &src.fil_k_basis());
    let meet = intersect(field.as_ref(), &tgt.fil_k_basis(), &image, dim);
    ensure!(
        image_fil.len() == meet.len() && contains(field.as_ref(), &meet, &image_fil, dim),
        "f(Fil X) differs from Fil Y ∩ f(X)"
    );
    let ep = ring.ep();
    let snf = ring.smith_normal_form(f.matrix());
    ensure!(snf.exponents.iter().all(|&a| a == 0 || a == ep), "Smith exponents {:?}", snf.exponents);
    let (k, _) = kernel(f).map_err(|e| e.to_string())?;
    let (c, _) = cokernel(f).map_err(|e| e.to_string())?;
    ensure!(k.is_valid() && c.is_valid(), "kernel or cokernel fails validation");
    let rho = image_rank(f).map_err(|e| e.to_string())?;
    ensure!(k.rank() + rho == src.rank() && c.rank() + rho == tgt.rank(), "ranks are not additive");
    Ok(())
}

fn abelian_category() -> Outcome {
    for &(p, e, r) in &PARAM_SETS {
        let objs = random_objects(params(p, e, r), 24, 3, 0xab + u64::from(p * e * r));
        let mut g = rng(u64::from(p + e + r));
        for pair in objs.chunks(2) {
            let (x, y) = (&pair[0], &pair[1]);
            let s = x.direct_sum(y).unwrap();
            let endo = random_morphism(&s, &s, &mut g).unwrap();
            let into = inclusion(x, &s, 0);
            let onto = projection(&s, y, x.rank());
            let onto_x = projection(&s, x, 0);
            let compositions = [
                endo.clone(),
                into.clone(),
                onto.clone(),
                into.then(&endo).unwrap(),
                endo.then(&onto).unwrap(),
                into.then(&endo).unwrap().then(&onto).unwrap(),
                endo.then(&endo).unwrap().then(&onto_x).unwrap(),
                onto.then(&inclusion(y, &s, x.rank())).unwrap().then(&endo).unwrap(),
            ];
            for (k, f) in compositions.iter().enumerate() {
                check_exactness(f).map_err(|err| format!("({p},{e},{r}) composition {k}: {err}"))?;
            }
        }
    }
    Ok(())
}

fn structure_theorems() -> Outcome {
    for &(p, e, r) in &PARAM_SETS {
        for (k, m) in sample(p, e, r).iter().enumerate() {
            let c = mf_membership(m).map_err(|err| err.to_string())?;
            ensure!(
                c.fil_splits == c.adapted_basis_in_image && c.fil_splits == c.monodromy_vanishes_on_image,
                "({p},{e},{r}) object {k}: criteria disagree {c:?}"
            );
            if e * r == 1 {
                ensure!(c.all(), "({p},{e},{r}) object {k} fails the criteria");
            }
        }
    }
    let (ring, fil, frob) = ramified_datum();
    let sols = solve_monodromy(&ring, &fil, &frob).map_err(|err| err.to_string())?;
    ensure!(sols.dimension() == Some(0), "monodromy is not unique: {:?}", sols.dimension());
    let n = sols.particular.ok_or("no monodromy found")?;
    let m = BreuilModule::validated(ring.clone(), fil, frob, n).map_err(|err| err.to_string())?;
    let p = ring.p();
    let e = m.params().e as usize;
    // N(e_2) = -u^{p(e-1)} (e_1 + u e_2)
    let e2 = ring.vec_unit(2, 1);
    let target = ring.vec_scale(
        ring.field().from_int(-1),
        &ring.vec_shift_up(&ring.vec_add(&ring.vec_unit(2, 0), &ring.vec_shift_up(&e2, 1)), p * (e - 1)),
    );
    ensure!(m.monodromy_apply(&e2) == target, "N(e_2) = {:?}", m.monodromy_apply(&e2));
    let c = mf_membership(&m).map_err(|err| err.to_string())?;
    ensure!(!c.fil_splits && !c.adapted_basis_in_image && !c.monodromy_vanishes_on_image, "ramified object passes {c:?}");
    Ok(())
}

fn tame_identities() -> Outcome {
    for &(p, e, r) in &PARAM_SETS {
        let params = params(p, e, r);
        for d in simples_up_to(params, MAX_H) {
            let h = d.period();
            let w = weight_vector(&d).map_err(|err| err.to_string())?;
            let q = (p as u128).pow(h as u32) - 1;
            for i in 0..h {
                ensure!(
                    p as u128 * w.s[i] == w.s[(i + 1) % h] + w.m[i] as u128 * q,
                    "({p},{e},{r}) {:?}: recursion fails at i = {i}",
                    d.digits()
                );
            }
            ensure!(rational_character_identity(&d).map_err(|err| err.to_string())?, "({p},{e},{r}) {:?}: rational identity fails", d.digits());
        }
    }
    Ok(())
}

fn system_s() -> Outcome {
    for &(p, e, r) in &PARAM_SETS {
        let sign: i8 = if r % 2 == 0 { 1 } else { -1 };
        for d in simples_up_to(params(p, e, r), 3) {
            let h = d.period();
            let sys = SystemS::new(&d, sign).map_err(|err| err.to_string())?;
            let sols = sys.solutions().map_err(|err| err.to_string())?;
            let ph = (p as u128).pow(h as u32);
            ensure!(sols.len() as u128 == ph, "({p},{e},{r}) {:?}: {} solutions", d.digits(), sols.len());
            let f = &sys.field;
            let target = f.pow(f.from_int(i64::from(sign)), h as u128);
            let mut keys: Vec<u128> = sols.iter().map(|s| f.to_index(s.eps)).collect();
            keys.sort_unstable();
            keys.dedup();
            ensure!(keys.len() == sols.len(), "({p},{e},{r}) {:?}: repeated solutions", d.digits());
            for s in &sols {
                ensure!(s.eps.is_zero() || f.pow(s.eps, ph - 1) == target, "eps^(p^h-1) differs from the sign power");
                ensure!(sys.satisfies(&sys.components(s)), "({p},{e},{r}) {:?}: recurrence fails", d.digits());
            }
            for a in &sols {
                for b in &sols {
                    let diff = sys.difference(a, b);
                    ensure!(sys.satisfies(&sys.components(&diff)), "({p},{e},{r}) {:?}: difference is not a solution", d.digits());
                    ensure!(keys.binary_search(&f.to_index(diff.eps)).is_ok(), "difference left the solution set");
                }
            }
        }
    }
    Ok(())
}

fn jordan_holder_invariance() -> Outcome {
    for &(p, e, r) in &PARAM_SETS {
        let mut g = rng(0x1a + u64::from(p * e * r));
        for (k, m) in sample(p, e, r).iter().enumerate() {
            let jh = jordan_holder(m).map_err(|err| format!("({p},{e},{r}) object {k}: {err}"))?;
            let periods: usize = jh.factors.iter().map(|f| f.period()).sum();
            ensure!(periods == m.rank(), "({p},{e},{r}) object {k}: periods sum to {periods}");
            if k >= JH_OBJECTS_PER_SET {
                continue;
            }
            let base = jh.multiset();
            for _ in 0..CONJUGATIONS {
                let q = m.random_fil_automorphism(&mut g);
                let moved = m.conjugate(&q).map_err(|err| err.to_string())?;
                let other = jordan_holder(&moved).map_err(|err| err.to_string())?.multiset();
                ensure!(other == base, "({p},{e},{r}) object {k}: {base:?} became {other:?}");
            }
        }
    }
    Ok(())
}

fn cyclotomic_congruences() -> Outcome {
    for p in (3..=31u32).filter(|&n| breuil::params::is_prime(u64::from(n))) {
        ensure!(verify_t_congruence(p).map_err(|err| err.to_string())?, "p = {p}: (X-1)^(p(p-1)) is not -p^p");
        ensure!(verify_b_sum(p).map_err(|err| err.to_string())?, "p = {p}: b_i do not sum to -1");
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("simple classification", simple_classification),
        ("inertia weights bounded by er", serre_bound),
        ("abelian category", abelian_category),
        ("structure theorems", structure_theorems),
        ("tame character identities", tame_identities),
        ("system (S)", system_s),
        ("Jordan-Hölder invariance", jordan_holder_invariance),
        ("cyclotomic congruences", cyclotomic_congruences),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS {} {name} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use hallq::quiver::examples::{a2, a3, a3_fold, kronecker};
use hallq::sweep::SweepOutcome;
use hallq::{DimVector, Result, Workbench};

struct Case {
    label: &'static str,
    wb: Workbench,
    max_total: u32,
}

fn cases() -> Vec<Case> {
    vec![
        Case { label: "A2 q=2", wb: Workbench::new(a2(), 2, 1).unwrap(), max_total: 4 },
        Case { label: "A2 q=3", wb: Workbench::new(a2(), 3, 1).unwrap(), max_total: 3 },
        Case { label: "Kronecker q=2", wb: Workbench::new(kronecker(), 2, 1).unwrap(), max_total: 3 },
        Case { label: "A3-fold q=2", wb: Workbench::new(a3_fold(), 2, 1).unwrap(), max_total: 3 },
    ]
}

struct Verdict {
    ok: bool,
    detail: String,
}

fn summarize<'a>(
    parts: impl IntoIterator<Item = (&'a str, Result<SweepOutcome>)>,
) -> Verdict {
    let mut ok = true;
    let mut details = Vec::new();
    for (label, r) in parts {
        match r {
            Ok(s) => {
                ok &= s.passed();
                details.push(format!("{label}: {}/{}", s.instances - s.failures.len() as u64, s.instances));
                for f in s.failures.iter().take(3) {
                    eprintln!("  [{label}] failure {:?}: {} vs {}", f.inputs, f.lhs, f.rhs);
                }
            }
            Err(e) => {
                ok = false;
                details.push(format!("{label}: error {e}"));
            }
        }
    }
    Verdict { ok, detail: details.join("; ") }
}

fn sweep_all(cases: &[Case], f: impl Fn(&Workbench, u32) -> Result<SweepOutcome>) -> Verdict {
    summarize(cases.iter().map(|c| (c.label, f(&c.wb, c.max_total))))
}

fn orbit_sanity(cases: &[Case]) -> Verdict {
    let mut ok = true;
    let mut notes = Vec::new();
    let mut expect = |label: &str, got: Vec<String>, want: Vec<String>| {
        ok &= got == want;
        notes.push(format!("{label}: {}", got.join(",")));
    };
    for p in [2, 3, 5] {
        let wb = Workbench::new(a2(), p, 1).unwrap();
        let n = wb.classes(&wb.dim(vec![1, 1]).unwrap()).unwrap().len();
        expect(&format!("A2 (1,1) q={p} orbits"), vec![n.to_string()], vec!["2".into()]);
    }
    let wb = &cases[2].wb;
    let n = wb.classes(&wb.dim(vec![1, 1]).unwrap()).unwrap().len();
    expect("Kronecker (1,1) q=2 orbits", vec![n.to_string()], vec!["4".into()]);
    let wb = &cases[3].wb;
    let mut auts: Vec<String> = wb
        .classes(&wb.dim(vec![1, 1, 1]).unwrap())
        .unwrap()
        .iter()
        .map(|c| wb.aut_order(c).unwrap().to_string())
        .collect();
    auts.sort();
    expect("A3-fold (1,1,1) q=2 aut orders", auts, vec!["1".into(), "3".into()]);
    let sweep = summarize(cases.iter().map(|c| (c.label, c.wb.sweep_orbits(c.max_total))));
    Verdict { ok: ok && sweep.ok, detail: format!("{}; invariants {}", notes.join("; "), sweep.detail) }
}

fn shift(cases: &[Case]) -> Verdict {
    let picks = [0usize, 2, 3];
    summarize(picks.iter().map(|&k| {
        let c = &cases[k];
        (c.label, c.wb.sweep_shift(500, 8, 20 + k as u64).map(|s| {
            assert!(s.instances >= 500);
            s
        }))
    }))
}

fn serre(cases: &[Case]) -> Verdict {
    let picks = [0usize, 1, 3];
    summarize(picks.iter().map(|&k| (cases[k].label, cases[k].wb.sweep_serre())))
}

/// Multisets of vectors from `parts` summing to `target`.
fn partitions(target: &[u32], parts: &[Vec<u32>]) -> u64 {
    fn rec(rest: &mut Vec<u32>, parts: &[Vec<u32>], from: usize) -> u64 {
        if rest.iter().all(|&x| x == 0) {
            return 1;
        }
        let mut total = 0;
        for k in from..parts.len() {
            if parts[k].iter().zip(rest.iter()).all(|(a, b)| a <= b) {
                for (r, a) in rest.iter_mut().zip(&parts[k]) {
                    *r -= a;
                }
                total += rec(rest, parts, k);
                for (r, a) in rest.iter_mut().zip(&parts[k]) {
                    *r += a;
                }
            }
        }
        total
    }
    rec(&mut target.to_vec(), parts, 0)
}

fn folding(cases: &[Case]) -> Verdict {
    let folded = &cases[3].wb;
    let unfolded = Workbench::new(a3(), 2, 2).unwrap();
    let roots: Vec<Vec<u32>> =
        vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 0], vec![0, 1, 1], vec![1, 1, 1]];
    let root_orbits: Vec<Vec<u32>> = vec![vec![1, 0, 1], vec![0, 1, 0], vec![1, 2, 1], vec![1, 1, 1]];

    let mut ok = true;
    println!("  fold dim   | A3 classes at q=4 | Kostant | A3-fold classes at q=2 | stable partitions");
    for a in 0..=2u32 {
        for b in 0..=4u32 {
            if 2 * a + b == 0 || 2 * a + b > 4 {
                continue;
            }
            let v = vec![a, b, a];
            let d: DimVector = unfolded.dim(v.clone()).unwrap();
            let un = unfolded.classes(&d).unwrap().len() as u64;
            let fd = folded.dim(v.clone()).unwrap();
            let fo = folded.classes(&fd).unwrap().len() as u64;
            let k = partitions(&v, &roots);
            let ks = partitions(&v, &root_orbits);
            ok &= un == k && fo == ks;
            println!("  {:<10} | {:>17} | {:>7} | {:>22} | {:>17}", d.to_string(), un, k, fo, ks);
        }
    }

    let max = 3;
    let checks: Vec<(&str, Result<SweepOutcome>)> = vec![
        ("unfolded green", unfolded.sweep_green(max)),
        ("unfolded bialgebra", unfolded.sweep_bialgebra(max)),
        ("unfolded rp", unfolded.sweep_riedtmann_peng(max)),
        ("unfolded euler", unfolded.sweep_euler(max)),
        ("unfolded phi", unfolded.sweep_phi(max)),
        ("folded green", folded.sweep_green(max)),
        ("folded bialgebra", folded.sweep_bialgebra(max)),
        ("folded rp", folded.sweep_riedtmann_peng(max)),
        ("folded euler", folded.sweep_euler(max)),
        ("folded phi", folded.sweep_phi(max)),
    ];
    let v = summarize(checks);
    Verdict { ok: ok && v.ok, detail: format!("class counts match partitions: {ok}; {}", v.detail) }
}

fn main() -> ExitCode {
    let cases = cases();
    let criteria: Vec<(&str, Box<dyn Fn(&[Case]) -> Verdict>)> = vec![
        ("Green raw identity", Box::new(|c| sweep_all(c, |wb, m| wb.sweep_green(m)))),
        ("bialgebra identity and agreement with Green", Box::new(|c| sweep_all(c, |wb, m| wb.sweep_bialgebra(m)))),
        ("Riedtmann-Peng and Ext integrality", Box::new(|c| sweep_all(c, |wb, m| wb.sweep_riedtmann_peng(m)))),
        ("Euler form with Ext from fibers", Box::new(|c| sweep_all(c, |wb, m| wb.sweep_euler(m)))),
        ("Phi compatibility (mult and comult)", Box::new(|c| sweep_all(c, |wb, m| wb.sweep_phi(m)))),
        (
            "function-level Green identity",
            Box::new(|c| {
                let picks = [0usize, 1, 3];
                summarize(picks.iter().map(|&k| (c[k].label, c[k].wb.sweep_green_fn(c[k].max_total))))
            }),
        ),
        ("shift identity", Box::new(shift)),
        ("orbit sanity", Box::new(orbit_sanity)),
        ("quantum Serre relations", Box::new(serre)),
        ("folding consistency", Box::new(folding)),
    ];

    let mut results = BTreeMap::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run(&cases);
        let status = if v.ok { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {status}: {name} [{}] ({:.1}s)",
            k + 1,
            v.detail,
            start.elapsed().as_secs_f64()
        );
        results.insert(k + 1, v.ok);
    }
    if results.values().all(|&ok| ok) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

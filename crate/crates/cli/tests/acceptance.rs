//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! fails. Runs without the libtest harness so the lines are always shown.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use causal_cli::census::{beta_csv, check_golden, golden_path, run_census, table_csv, Golden};
use causal_cli::commands::fixed_csv;
use causal_core::causal::{lemma3_slice, lemma3_triangulation, prism_slice, stack_slices, validate_slice};
use causal_core::census::{
    count_fixed_boundaries, estimate_beta, subadditivity_witness, CensusConfig, CensusTable, FixedTable, Strategy,
};
use causal_core::midsection::{dual_graph, euler_identity_check, midsection, reassemble_4d, subdivide_4d};
use causal_core::reconstruct::{reconstruct, ReconstructError};
use causal_core::{fixtures, CausalSlice, Colour};
use proptest::strategy::{Strategy as _, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

/// Census volume for the exhaustive criteria.
const VMAX: usize = 14;
/// Volume cap of the fixed-boundary table.
const FIXED_VMAX: usize = 38;

type Outcome = Result<String, String>;

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../golden")
}

fn golden(name: &str, text: &str) -> Result<&'static str, String> {
    let path = golden_dir().join(name);
    match check_golden(&path, text).map_err(|e| e.to_string())? {
        Golden::Written(_) => Ok("golden written"),
        Golden::Matched(_) => Ok("golden matched"),
        Golden::Differs(p) => Err(format!("differs from {}", p.display())),
    }
}

struct Corpus {
    direct: CensusTable,
    census_slices: Vec<CausalSlice>,
    /// Named 3-dimensional fixture slices.
    fixtures3: Vec<(&'static str, CausalSlice)>,
    prism4: CausalSlice,
}

impl Corpus {
    fn build() -> Corpus {
        let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
        let direct = run_census(Strategy::Direct, CensusConfig::new(VMAX, 0), jobs);
        let census_slices = direct
            .all_representatives()
            .map(|k| validate_slice(k, false).expect("census slices are valid"))
            .collect();
        let prism = |b| prism_slice(b, None).expect("fixture base");
        Corpus {
            direct,
            census_slices,
            fixtures3: vec![
                ("prism over sigma_T", prism(&fixtures::sigma_t())),
                ("prism over torus7", prism(&fixtures::torus7())),
                ("prism over octahedron", prism(&fixtures::octahedron())),
                ("lemma3 over sigma_T", lemma3_slice(&fixtures::sigma_t()).expect("degree 3")),
            ],
            prism4: prism(&fixtures::boundary_4simplex()),
        }
    }

    fn slices3(&self) -> impl Iterator<Item = &CausalSlice> {
        self.census_slices.iter().chain(self.fixtures3.iter().map(|(_, s)| s))
    }
}

fn round_trip(c: &Corpus) -> Outcome {
    let mut n = 0;
    for s in c.slices3().chain([&c.prism4]) {
        let back = reconstruct(&midsection(s)).map_err(|e| format!("V={}: {e}", s.volume()))?;
        ensure(back.complex().canonical_form() == s.complex().canonical_form(), || {
            format!("V={}: reconstruction differs", s.volume())
        })?;
        n += 1;
    }
    Ok(format!("{n} slices ({} census up to V={VMAX}, 5 fixtures)", c.census_slices.len()))
}

fn lemma3_counts() -> Outcome {
    let spheres = proptest::collection::vec(0usize..64, 0..8).prop_map(|c| fixtures::stellar_sphere(&c));
    let pair = (spheres.clone(), spheres);
    let mut runner = TestRunner::new_with_rng(
        Config::with_cases(24),
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let cases = 24;
    for _ in 0..cases {
        let (a, b) = pair.new_tree(&mut runner).map_err(|e| e.to_string())?.current();
        let sa = lemma3_slice(&a).map_err(|e| e.to_string())?;
        ensure(sa.volume() == a.facets().len() + 10, || {
            format!("|Sigma|={} gives volume {}", a.facets().len(), sa.volume())
        })?;
        let t = lemma3_triangulation(&a, &b).map_err(|e| e.to_string())?;
        ensure(t.volume() == a.facets().len() + b.facets().len() + 20, || {
            format!("glued volume {} for {} + {}", t.volume(), a.facets().len(), b.facets().len())
        })?;
    }
    Ok(format!("{cases} random sphere pairs"))
}

fn euler_identity(c: &Corpus) -> Outcome {
    for s in c.slices3() {
        let r = euler_identity_check(s).map_err(|e| e.to_string())?;
        ensure(r.holds(), || format!("V={}: {r:?}", s.volume()))?;
    }
    let torus = &c.fixtures3[1].1;
    let r = euler_identity_check(torus).map_err(|e| e.to_string())?;
    ensure(r.dual_red == 0 && r.red_boundary == 0 && r.blue_boundary == 0, || format!("torus: {r:?}"))?;
    Ok(format!("{} slices, torus prism all 0", c.census_slices.len() + c.fixtures3.len()))
}

fn counting_identities(c: &Corpus) -> Outcome {
    for s in c.slices3() {
        let m = midsection(s);
        let v = s.volume();
        ensure(m.cells().len() == v, || format!("V={v}: {} cells", m.cells().len()))?;
        for colour in [Colour::Red, Colour::Blue] {
            let g = dual_graph(&m, colour).map_err(|e| e.to_string())?;
            ensure(2 * g.edges == 3 * g.triangles + 2 * g.quadrangles, || format!("V={v} {colour}: 2E mismatch"))?;
            ensure(g.faces == s.boundary(colour).vertex_count(), || format!("V={v} {colour}: F mismatch"))?;
            ensure(g.connected, || format!("V={v} {colour}: dual graph disconnected"))?;
            ensure(g.degrees_ok(), || format!("V={v} {colour}: degree outside 2..3"))?;
        }
    }
    Ok(format!("{} slices, both colours", c.census_slices.len() + c.fixtures3.len()))
}

fn strategy_equivalence(c: &Corpus) -> Outcome {
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let maps = run_census(Strategy::Midsection, CensusConfig::new(VMAX, 0), jobs);
    ensure(c.direct.complete && maps.complete, || "partial table".into())?;
    ensure(c.direct.same_classes(&maps), || "class sets differ".into())?;
    ensure(maps.stats.rejected.obstruction > 0, || "no obstructed candidate was filtered".into())?;
    let mut notes = Vec::new();
    for t in [&c.direct, &maps] {
        let name = golden_path(std::path::Path::new(""), t.strategy, 0, VMAX);
        notes.push(golden(name.to_str().expect("ascii"), &table_csv(t))?);
    }
    let counts: Vec<String> = c.direct.counts().iter().filter(|(_, n)| **n > 0).map(|(v, n)| format!("{v}:{n}")).collect();
    Ok(format!(
        "V<={VMAX} [{}], {} filtered ({} obstructions), {}",
        counts.join(" "),
        maps.stats.rejected.filtered(),
        maps.stats.rejected.obstruction,
        notes.join(", ")
    ))
}

fn subadditivity(c: &Corpus) -> Outcome {
    let s = fixtures::sigma_t();
    let table: FixedTable = count_fixed_boundaries(&c.direct, &s, &s, FIXED_VMAX);
    let t0 = stack_slices(vec![prism_slice(&s, None).map_err(|e| e.to_string())?], &[]).map_err(|e| e.to_string())?;
    let v0 = t0.volume();

    // injective gluing on every exact pair
    let checks = subadditivity_witness(&table, &t0, VMAX);
    for ch in &checks {
        ensure(ch.holds(), || format!("{ch:?}"))?;
    }
    // and the inequality on every tabulated triple
    let counts: BTreeMap<usize, u64> = table.counts();
    let mut triples = 0;
    for (&v1, &n1) in counts.iter().filter(|(_, n)| **n > 0) {
        for (&v2, &n2) in counts.iter().filter(|(_, n)| **n > 0) {
            if let Some(&n) = counts.get(&(v1 + v2 + v0)) {
                ensure(n1 * n2 <= n, || format!("N({v1})N({v2}) = {} > N({}) = {n}", n1 * n2, v1 + v2 + v0))?;
                triples += 1;
            }
        }
    }
    let g1 = golden(&format!("fixed_sigma_t_s{VMAX}_v{FIXED_VMAX}.csv"), &fixed_csv(&table))?;
    let beta = estimate_beta(&counts, v0).map_err(|e| e.to_string())?;
    let g2 = golden(&format!("beta_sigma_t_s{VMAX}_v{FIXED_VMAX}.csv"), &beta_csv(&beta))?;
    Ok(format!(
        "V0={v0}, {} witnessed pairs, {triples} tabulated triples, beta >= {:.4}, {g1}, {g2}",
        checks.len(),
        beta.lower_bound()
    ))
}

fn obstruction(c: &Corpus) -> Outcome {
    match reconstruct(&fixtures::fig4()) {
        Err(ReconstructError::Obstruction(..)) => {}
        other => return Err(format!("fig4 gave {other:?}")),
    }
    let mut n = 0;
    for s in c.slices3().chain([&c.prism4]) {
        reconstruct(&midsection(s)).map_err(|e| format!("valid slice rejected: {e}"))?;
        n += 1;
    }
    Ok(format!("fig4 rejected, {n} valid slices accepted"))
}

fn subdivision(c: &Corpus) -> Outcome {
    let s = midsection(&c.prism4);
    let sub = subdivide_4d(&s).map_err(|e| e.to_string())?;
    let prisms = s.cells().iter().filter(|cell| cell.corners().len() == 6).count();
    let tets = s.cells().len() - prisms;
    let n = sub.tets().len();
    ensure(n == tets + 3 * prisms, || format!("{n} != {tets} + 3*{prisms}"))?;
    ensure(n <= 3 * c.prism4.volume(), || format!("{n} > 3*{}", c.prism4.volume()))?;
    let back = reassemble_4d(&sub).map_err(|e| e.to_string())?;
    ensure(back.canonical_form() == s.canonical_form(), || "reassembly differs".into())?;
    Ok(format!("{n} = {tets} + 3*{prisms} <= 3*{}, reassembled", c.prism4.volume()))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let corpus = Corpus::build();
    let criteria: [(&str, &dyn Fn() -> Outcome); 8] = [
        ("round-trip bijection", &|| round_trip(&corpus)),
        ("construction counts", &lemma3_counts),
        ("Euler identity", &|| euler_identity(&corpus)),
        ("counting identities", &|| counting_identities(&corpus)),
        ("strategy equivalence", &|| strategy_equivalence(&corpus)),
        ("subadditivity", &|| subadditivity(&corpus)),
        ("obstruction detection", &|| obstruction(&corpus)),
        ("4D subdivision bound", &|| subdivision(&corpus)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (tag, detail) = match check() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} {} {name}: {detail} ({:.1}s)", i + 1, t.elapsed().as_secs_f64());
    }
    println!("acceptance: {}/8 passed in {:.1}s", 8 - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

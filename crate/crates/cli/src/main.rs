use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use bicx::bicomplex::{Bicomplex, BicomplexKind};
use bicx::chain::{ChainComplex, ChainKind};
use bicx::doc::{self, Object};
use bicx::linalg;
use bicx::model::{self, LiftingProblem, StructureId};
use bicx::multi::{MultiMap, Multicomplex};
use bicx::spectral;
use bicx::twisted::{self, TwistedComplex, TwistedMap};
use bicx::verify;
use bicx::RingSpec;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "bicx",
    version,
    about = "Exact homological algebra of bicomplexes and twisted complexes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a document.
    Check { file: PathBuf },
    /// Homology of a chain complex, or of the total complex.
    Homology { file: PathBuf },
    /// Dimensions of H^h(H^v) (fields only).
    E2 { file: PathBuf },
    /// Pages of the spectral sequence of the column filtration (fields only).
    Ss {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_page: usize,
    },
    /// Tensor product of two objects of the same kind.
    Tensor {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate the (trivial) fibration and weak equivalence criteria of a map.
    Classify {
        mapfile: PathBuf,
        #[arg(long, value_parser = parse_structure)]
        structure: StructureId,
        /// Also test the right lifting property against the generators.
        #[arg(long)]
        rlp: bool,
    },
    /// Solve the lifting problem stored as i.json, g.json, u.json, f.json in a directory.
    Lift {
        squaredir: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Cartan-Eilenberg resolution of a chain complex; writes the augmentation map.
    CeResolve {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Emit a generator object.
    Gen {
        kind: GenKind,
        #[arg(allow_negative_numbers = true)]
        p: i32,
        #[arg(allow_negative_numbers = true)]
        q: i32,
        #[arg(short, default_value_t = 1)]
        r: usize,
        /// Truncation parameter for `truncated-boundary`.
        #[arg(short, long)]
        s: Option<usize>,
        #[arg(long, default_value = "Z")]
        ring: RingSpec,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the verification suite.
    VerifyPaper {
        #[arg(long, default_value_t = 5)]
        max_p: i32,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        ring: Option<RingSpec>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Sphere,
    Disc,
    HBoundary,
    VBoundary,
    TwistedDisc,
    TwistedBoundary,
    TruncatedBoundary,
    /// Chain complex `k^r` in degree `q`; `p` is ignored.
    ChainSphere,
    /// Chain complex `k^r → k^r` in degrees `q, q-1`; `p` is ignored.
    ChainDisc,
}

fn parse_structure(s: &str) -> Result<StructureId, String> {
    s.parse().map_err(|e: bicx::Error| e.to_string())
}

/// Errors in how the tool was invoked, as opposed to failed checks.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(Usage(msg.into()))
}

fn load(path: &Path) -> anyhow::Result<Object> {
    if !path.exists() {
        return Err(usage(format!("no such file: {}", path.display())));
    }
    doc::load(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(obj: &Object, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => doc::save(p, obj)?,
        None => print!("{}", doc::serialize(obj)),
    }
    Ok(())
}

fn multi_of(obj: &Object) -> anyhow::Result<&Multicomplex> {
    obj.as_multi().ok_or_else(|| {
        usage(format!(
            "expected a bicomplex or twisted complex, got a {}",
            obj.kind_name()
        ))
    })
}

fn describe(obj: &Object) -> String {
    let sup = match obj {
        Object::Chain(c) => c.support().map(|(a, b)| format!("degrees {a}..{b}")),
        _ => obj
            .as_multi()
            .and_then(|m| m.support())
            .map(|s| format!("p {}..{}, q {}..{}", s.pmin, s.pmax, s.qmin, s.qmax)),
    };
    format!(
        "{} over {}, {}",
        obj.kind_name(),
        obj.ring(),
        sup.unwrap_or_else(|| "zero".into())
    )
}

fn print_homology(c: &ChainComplex) {
    let h = c.homology();
    if h.is_empty() {
        println!("  acyclic");
    }
    for (n, m) in h {
        println!("  H_{n} = {}", m.describe(c.ring()));
    }
}

fn cmd_homology(obj: &Object) -> anyhow::Result<()> {
    let tot = match obj {
        Object::Chain(c) => c.clone(),
        _ => multi_of(obj)?.tot(),
    };
    println!("{}", describe(obj));
    println!(
        "total ranks: {}",
        tot.ranks()
            .iter()
            .map(|(n, r)| format!("{n}:{r}"))
            .collect::<Vec<_>>()
            .join(" ")
    );
    println!("homology:");
    print_homology(&tot);
    Ok(())
}

fn print_table(t: &std::collections::BTreeMap<bicx::Bidegree, usize>) {
    if t.is_empty() {
        println!("  0");
    }
    for (b, d) in t {
        println!("  {b}: {d}");
    }
}

fn cmd_e2(obj: &Object) -> anyhow::Result<()> {
    let t = match obj {
        Object::Bicomplex(x) => x.e2()?,
        Object::Twisted(x) => x.vertical_homology()?.e2()?,
        _ => {
            return Err(usage(format!(
                "e2 needs a bicomplex or twisted complex, got a {}",
                obj.kind_name()
            )))
        }
    };
    println!("E2 = H^h(H^v):");
    print_table(&t);
    Ok(())
}

fn cmd_ss(obj: &Object, max_page: usize) -> anyhow::Result<()> {
    let ss = spectral::pages(multi_of(obj)?, max_page)?;
    for r in 1..=max_page.max(1) {
        println!("page {r}:");
        print_table(ss.page(r));
        if let Some(ds) = ss.differentials.get(&r) {
            for (b, m) in ds {
                let t = bicx::Bidegree::new(b.p - r as i32, b.q + r as i32 - 1);
                println!("  d^{r} {b} -> {t}: rank {}", linalg::rank(m));
            }
        }
    }
    println!("stable from page {}", ss.stable_page);
    println!("E-infinity:");
    print_table(ss.e_infinity());
    Ok(())
}

fn cmd_tensor(a: &Object, b: &Object) -> anyhow::Result<Object> {
    if a.ring() != b.ring() {
        bail!("rings differ: {} and {}", a.ring(), b.ring());
    }
    Ok(match (a, b) {
        (Object::Chain(x), Object::Chain(y)) => Object::Chain(x.tensor(y)),
        (Object::Bicomplex(x), Object::Bicomplex(y)) => Object::Bicomplex(x.tensor(y)),
        (Object::Twisted(x), Object::Twisted(y)) => Object::Twisted(x.tensor(y)),
        (Object::Bicomplex(x), Object::Twisted(y)) => Object::Twisted(twisted::embed_bicomplex(x).tensor(y)),
        (Object::Twisted(x), Object::Bicomplex(y)) => Object::Twisted(x.tensor(&twisted::embed_bicomplex(y))),
        _ => {
            return Err(usage(format!(
                "cannot tensor a {} with a {}",
                a.kind_name(),
                b.kind_name()
            )))
        }
    })
}

fn map_for(obj: &Object, s: StructureId) -> anyhow::Result<MultiMap> {
    match (obj, s) {
        (Object::BicomplexMap(f), _) => Ok(f.as_multi().clone()),
        (Object::TwistedMap(f), StructureId::TotalTwisted) => Ok(f.as_multi().clone()),
        (Object::TwistedMap(_), _) => Err(usage(format!("structure {} needs a bicomplex map", s.name()))),
        _ => Err(usage(format!(
            "classify needs a map of bicomplexes or twisted complexes, got a {}",
            obj.kind_name()
        ))),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_classify(obj: &Object, s: StructureId, rlp: bool) -> anyhow::Result<()> {
    let f = map_for(obj, s)?;
    let r = model::classify_map(&f, s)?;
    println!("structure: {}", s.name());
    println!("weak equivalence: {}", r.is_weq.map_or("undecided", yes_no));
    println!("fibration: {}", r.is_fibration);
    println!("trivial fibration: {}", r.is_trivial_fibration);
    println!("evidence:");
    for e in &r.evidence {
        println!("  {}", e.condition);
    }
    if rlp {
        let rep = model::rlp_report(&f, s)?;
        println!("rlp against I: {}", rep.rlp_i);
        println!("rlp against J: {}", rep.rlp_j);
        for e in rep.entries.iter().filter(|e| !e.liftable) {
            println!("  no lift against {}", e.generator);
        }
    }
    Ok(())
}

fn cmd_lift(dir: &Path, out: Option<&Path>) -> anyhow::Result<bool> {
    if !dir.is_dir() {
        return Err(usage(format!("not a directory: {}", dir.display())));
    }
    let get = |name: &str| -> anyhow::Result<MultiMap> {
        let obj = load(&dir.join(format!("{name}.json")))?;
        obj.as_multimap()
            .cloned()
            .ok_or_else(|| anyhow!("{name}.json is a {}, expected a map", obj.kind_name()))
    };
    let p = LiftingProblem {
        i: get("i")?,
        g: get("g")?,
        u: get("u")?,
        f: get("f")?,
    };
    match model::solve_lift(&p)? {
        Some(h) => {
            println!("lift exists");
            let twisted_case = [&p.i, &p.g, &p.u, &p.f]
                .iter()
                .any(|m| m.source().max_index() > 1 || m.target().max_index() > 1);
            let obj = if twisted_case {
                Object::TwistedMap(TwistedMap::from_multi(h)?)
            } else {
                Object::BicomplexMap(bicx::bicomplex::BicomplexMap::from_multi(h)?)
            };
            emit(&obj, out)?;
            Ok(true)
        }
        None => {
            println!("no lift");
            Ok(false)
        }
    }
}

fn cmd_ce(obj: &Object, out: Option<&Path>) -> anyhow::Result<()> {
    let y = match obj {
        Object::Chain(c) => c.clone(),
        Object::Bicomplex(b) if b.support().is_none_or(|s| s.pmin == 0 && s.pmax == 0) => b.ev0(),
        _ => {
            return Err(usage(format!(
                "ce-resolve needs a chain complex, got a {}",
                obj.kind_name()
            )))
        }
    };
    let (p, eps) = model::ce_resolution(&y)?;
    let s = p.support();
    eprintln!(
        "resolution: {} cells, columns {}",
        p.ranks().values().sum::<usize>(),
        s.map_or("none".into(), |s| format!("{}..{}", s.pmin, s.pmax))
    );
    emit(&Object::BicomplexMap(eps), out)
}

fn cmd_gen(
    kind: GenKind,
    p: i32,
    q: i32,
    r: usize,
    s: Option<usize>,
    ring: RingSpec,
) -> anyhow::Result<Object> {
    let bi = |k: BicomplexKind| -> anyhow::Result<Object> {
        Ok(Object::Bicomplex(Bicomplex::standard(ring, &k)?))
    };
    let repeat = |x: TwistedComplex| -> anyhow::Result<Object> {
        let mut acc = Multicomplex::zero(ring);
        for _ in 0..r {
            acc = acc.direct_sum(x.as_multi());
        }
        Ok(Object::Twisted(TwistedComplex::from_multi(acc)?))
    };
    match kind {
        GenKind::Sphere => bi(BicomplexKind::Sphere { p, q, r }),
        GenKind::Disc => bi(BicomplexKind::Disc { p, q, r }),
        GenKind::HBoundary => bi(BicomplexKind::HBoundary { p, q, r }),
        GenKind::VBoundary => bi(BicomplexKind::VBoundary { p, q, r }),
        GenKind::TwistedDisc => repeat(twisted::twisted_disc(ring, p, q)?),
        GenKind::TwistedBoundary => repeat(twisted::twisted_boundary(ring, p, q)?),
        GenKind::TruncatedBoundary => {
            let s = s.ok_or_else(|| usage("truncated-boundary needs -s"))?;
            repeat(twisted::truncated_boundary(ring, p, q, s)?)
        }
        GenKind::ChainSphere => Ok(Object::Chain(ChainComplex::standard(
            ring,
            &ChainKind::Sphere { n: q, r },
        )?)),
        GenKind::ChainDisc => Ok(Object::Chain(ChainComplex::standard(
            ring,
            &ChainKind::Disc { n: q, r },
        )?)),
    }
}

/// Exit status: 0 on success, 1 when a check fails.
fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let ok = |b: bool| if b { ExitCode::SUCCESS } else { ExitCode::from(1) };
    match cli.command {
        Command::Check { file } => {
            let obj = load(&file)?;
            println!("valid {}", describe(&obj));
        }
        Command::Homology { file } => cmd_homology(&load(&file)?)?,
        Command::E2 { file } => cmd_e2(&load(&file)?)?,
        Command::Ss { file, max_page } => cmd_ss(&load(&file)?, max_page)?,
        Command::Tensor { a, b, output } => {
            let t = cmd_tensor(&load(&a)?, &load(&b)?)?;
            emit(&t, output.as_deref())?;
        }
        Command::Classify {
            mapfile,
            structure,
            rlp,
        } => cmd_classify(&load(&mapfile)?, structure, rlp)?,
        Command::Lift { squaredir, output } => return Ok(ok(cmd_lift(&squaredir, output.as_deref())?)),
        Command::CeResolve { file, output } => cmd_ce(&load(&file)?, output.as_deref())?,
        Command::Gen {
            kind,
            p,
            q,
            r,
            s,
            ring,
            output,
        } => {
            let obj = cmd_gen(kind, p, q, r, s, ring).map_err(|e| usage(format!("{e:#}")))?;
            emit(&obj, output.as_deref())?;
        }
        Command::VerifyPaper { max_p, seed, ring } => {
            if max_p < 0 {
                return Err(usage("--max-p must be non-negative"));
            }
            let opts = verify::Options {
                max_p,
                seed,
                ring,
                ..verify::Options::default()
            };
            let start = Instant::now();
            let report = verify::run(&opts);
            print!("{report}");
            eprintln!("finished in {:.1} s", start.elapsed().as_secs_f64());
            if let Some(c) = report.first_failure() {
                eprintln!("first failing check: {}", c.name);
            }
            return Ok(ok(report.passed()));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

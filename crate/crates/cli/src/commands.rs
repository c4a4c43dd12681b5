use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use hanoi_core::acceptance::{run_criterion, Options, Scale, CRITERIA};
use hanoi_core::decomposition::{
    lift_through_minor, sierpinski_decomposition, validate, TreeDecomposition,
};
use hanoi_core::fractal::{
    build_sierpinski, embed_hanoi_minor, verify_minor_model, verify_subdivision, MinorModel,
    SubdivisionWitness, S5_OCTAHEDRON_JSON,
};
use hanoi_core::graph::{diameter, parse_edge_list, write_edge_list};
use hanoi_core::pegsets::{build_g4, build_intersection_graph, is_automorphism};
use hanoi_core::separators::{
    fairness_csv, hanoi_level_separator, recursive_balance, recursive_separator, verify_c_separator,
    vertex_expansion, DrawModel, EndgameStrategy, SeparatorFile,
};
use hanoi_core::setfamilies::{
    build_ds, build_kneser, central_mass_fraction, kk_trials, kk_trials_csv, slice_experiment,
    slice_experiment_csv, tensor_product,
};
use hanoi_core::state_space::build_hanoi;
use hanoi_core::{Error, Graph};
use num_rational::Ratio;

use crate::args::{
    AcceptanceArgs, AnalyzeCommand, Command, Draw, Family, Format, GenerateArgs, ReportFormat,
    Strategy, VerifyArgs, VerifyKind,
};
use crate::output::{CliError, CliResult, Output};

pub fn run(cmd: &Command, seed: u64) -> CliResult<Output> {
    match cmd {
        Command::Generate(a) => generate(a),
        Command::Verify(a) => verify(a),
        Command::Analyze(a) => analyze(a, seed),
        Command::Acceptance(a) => acceptance(a, seed),
    }
}

fn need(v: Option<usize>, flag: &str) -> CliResult<usize> {
    v.ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Parses `5`, `3,5,7` or the inclusive range `3..9`.
pub fn parse_list(s: &str) -> CliResult<Vec<usize>> {
    let bad = |e: std::num::ParseIntError| CliError::Usage(format!("`{s}`: {e}"));
    if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (a.trim().parse().map_err(bad)?, b.trim().parse().map_err(bad)?);
        if a > b {
            return Err(CliError::Usage(format!("empty range `{s}`")));
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(|t| t.trim().parse().map_err(bad)).collect()
}

/// Parses `0.75` or `3/4` exactly.
pub fn parse_ratio(s: &str) -> CliResult<Ratio<u64>> {
    let bad = || CliError::Usage(format!("`{s}` is not a decimal or num/den"));
    if let Some((a, b)) = s.split_once('/') {
        let (a, b): (u64, u64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        if b == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(a, b));
    }
    let (int, frac) = s.trim().split_once('.').unwrap_or((s.trim(), ""));
    if frac.len() > 18 || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let den = 10u64.pow(frac.len() as u32);
    let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
    let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
    Ok(Ratio::new(int * den + frac, den))
}

/// `K<m>`, `C<m>`, `P<m>` or an edge-list file.
fn named_graph(spec: &str) -> CliResult<Graph> {
    let sized = |rest: &str| rest.parse::<usize>().ok().filter(|&m| m >= 1);
    let mut chars = spec.chars();
    let g = match (chars.next(), sized(chars.as_str())) {
        (Some('K'), Some(m)) => Some(Graph::complete(m)),
        (Some('C'), Some(m)) if m >= 3 => Some(Graph::cycle(m)),
        (Some('P'), Some(m)) => Some(Graph::path(m)),
        _ => None,
    };
    match g {
        Some(g) => Ok(g),
        None => Ok(parse_edge_list(&read(Path::new(spec))?)?.0),
    }
}

struct Built {
    graph: Graph,
    name: String,
    labels: String,
}

struct FamilyParams<'a> {
    pegs: Option<usize>,
    disks: Option<usize>,
    level: Option<usize>,
    n: Option<usize>,
    k: Option<usize>,
    r: Option<usize>,
    left: Option<&'a str>,
    right: Option<&'a str>,
}

fn build(family: Family, p: &FamilyParams) -> CliResult<Built> {
    Ok(match family {
        Family::Hanoi => {
            let (pegs, disks) = (need(p.pegs, "pegs")?, need(p.disks, "disks")?);
            let h = build_hanoi(pegs, disks)?;
            Built { labels: h.label_csv(), name: format!("hanoi(p={pegs},n={disks})"), graph: h.graph }
        }
        Family::Sierpinski => {
            let level = need(p.level.or(p.disks), "level")?;
            let s = build_sierpinski(level)?;
            let mut labels = String::from("id,vertex\n");
            for v in 0..s.graph.vertex_count() {
                writeln!(labels, "{},{}", v + 1, s.key(v)).unwrap();
            }
            Built { labels, name: format!("sierpinski(n={level})"), graph: s.graph }
        }
        Family::Ipn => {
            let g = build_intersection_graph(need(p.pegs, "pegs")?, need(p.disks, "disks")?)?;
            Built { labels: g.label_csv(), name: g.family_name(), graph: g.graph }
        }
        Family::G4 => {
            let g = build_g4(need(p.disks, "disks")?)?;
            Built { labels: g.label_csv(), name: g.family_name(), graph: g.graph }
        }
        Family::Kneser => {
            let (n, k) = (need(p.n, "n")?, need(p.k, "k")?);
            let g = build_kneser(n, k)?;
            Built { labels: g.label_csv(), name: format!("kneser(n={n},k={k})"), graph: g.graph }
        }
        Family::Ds => {
            let n = need(p.n, "n")?;
            if p.r.is_none() && n % 2 == 0 {
                return Err(Error::Parameter(format!("ds needs odd n without --r, got {n}")).into());
            }
            let r = p.r.unwrap_or((n.max(1) - 1) / 2);
            let g = build_ds(n, r)?;
            Built { labels: g.label_csv(), name: format!("ds(n={n},r={r})"), graph: g.graph }
        }
        Family::Tensor => {
            let (l, r) = (
                p.left.ok_or_else(|| CliError::Usage("missing --left".into()))?,
                p.right.ok_or_else(|| CliError::Usage("missing --right".into()))?,
            );
            let prod = tensor_product(&named_graph(l)?, &named_graph(r)?)?;
            let mut labels = String::from("id,left,right\n");
            for v in 0..prod.graph.vertex_count() {
                let (a, b) = prod.pair(v);
                writeln!(labels, "{},{},{}", v + 1, a + 1, b + 1).unwrap();
            }
            Built { labels, name: format!("tensor({l},{r})"), graph: prod.graph }
        }
    })
}

fn graph_json(b: &Built) -> String {
    let labels: Vec<&str> = b
        .labels
        .lines()
        .skip(1)
        .map(|l| l.split_once(',').map_or("", |(_, rest)| rest))
        .collect();
    let edges: Vec<[usize; 2]> = b.graph.edges().map(|(u, v)| [u + 1, v + 1]).collect();
    let doc = serde_json::json!({
        "family": b.name,
        "vertices": b.graph.vertex_count(),
        "edges": edges,
        "labels": labels,
    });
    serde_json::to_string(&doc).expect("graph serializes") + "\n"
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".labels.csv");
    PathBuf::from(s)
}

fn generate(a: &GenerateArgs) -> CliResult<Output> {
    let params = FamilyParams {
        pegs: a.pegs,
        disks: a.disks,
        level: a.level,
        n: a.n,
        k: a.k,
        r: a.r,
        left: a.left.as_deref(),
        right: a.right.as_deref(),
    };
    let built = build(a.family, &params)?;
    let mut out = Output::default();
    let body = match a.format {
        Format::Edgelist => write_edge_list(&built.graph, &built.name),
        Format::Json => graph_json(&built),
    };
    match &a.out {
        Some(path) => {
            out.file(path.clone(), body);
            out.file(sidecar(path), built.labels.clone());
        }
        None => out.stdout = body,
    }
    if let Some(path) = &a.decomposition {
        let t = match a.family {
            Family::Sierpinski => sierpinski_decomposition(need(a.level.or(a.disks), "level")?)?.1,
            Family::Hanoi if a.pegs == Some(3) => {
                let n = need(a.disks, "disks")?;
                let (s, t) = sierpinski_decomposition(n + 1)?;
                lift_through_minor(&t, &embed_hanoi_minor(&s)?)?
            }
            _ => {
                return Err(Error::Unsupported("--decomposition needs sierpinski or hanoi with 3 pegs".into()).into())
            }
        };
        out.file(path.clone(), t.to_json());
    }
    if let Some(path) = &a.separator {
        if a.family != Family::Hanoi {
            return Err(Error::Unsupported("--separator needs hanoi".into()).into());
        }
        let (p, n) = (need(a.pegs, "pegs")?, need(a.disks, "disks")?);
        let x = hanoi_level_separator(p, n)?;
        let sep = verify_c_separator(&built.graph, &x, recursive_balance(p)).map_err(|v| {
            Error::InvalidInput(format!("level separator failed its own check: {}", v[0]))
        })?;
        out.file(path.clone(), sep.to_json());
    }
    if let Some(path) = &a.witness {
        if a.family != Family::Sierpinski || a.level.or(a.disks) != Some(5) {
            return Err(Error::Unsupported("--witness is shipped for sierpinski level 5 only".into()).into());
        }
        out.file(path.clone(), S5_OCTAHEDRON_JSON);
    }
    Ok(out)
}

fn verify(a: &VerifyArgs) -> CliResult<Output> {
    let (g, _) = parse_edge_list(&read(&a.graph)?)?;
    let text = read(&a.witness)?;
    let violations: Vec<String>;
    let mut summary = String::new();
    match a.kind {
        VerifyKind::Decomposition => {
            let t = if text.trim_start().starts_with('{') {
                TreeDecomposition::from_json(&text)?
            } else {
                TreeDecomposition::from_pace(&text)?
            };
            match validate(&g, &t) {
                Ok(w) => {
                    violations = Vec::new();
                    summary = format!("width={w}");
                }
                Err(v) => violations = v.iter().map(|x| x.to_string()).collect(),
            }
        }
        VerifyKind::Separator => match SeparatorFile::from_json(&text)?.verify(&g)? {
            Ok(sep) => {
                violations = Vec::new();
                summary = format!(
                    "separator={} sides={},{} balance={}",
                    sep.separator.len(),
                    sep.side_a.len(),
                    sep.side_b.len(),
                    sep.balance
                );
            }
            Err(v) => violations = v.iter().map(|x| x.to_string()).collect(),
        },
        VerifyKind::Minor => {
            let m = MinorModel::from_json(g, &text)?;
            violations = verify_minor_model(&m).violations.iter().map(|x| x.to_string()).collect();
            summary = format!("pattern vertices={}", m.pattern.vertex_count());
        }
        VerifyKind::Subdivision => {
            let w = SubdivisionWitness::from_json(&text)?;
            violations = verify_subdivision(&g, &w).iter().map(|x| x.to_string()).collect();
            summary = format!("branch vertices={} paths={}", w.branch.len(), w.paths.len());
        }
    }
    let mut out = Output::default();
    if violations.is_empty() {
        out.stdout = format!("pass {summary}\n");
    } else {
        for v in &violations {
            writeln!(out.stdout, "violation: {v}").unwrap();
        }
        writeln!(out.stdout, "fail: {} violations", violations.len()).unwrap();
        out.failed = true;
    }
    Ok(out)
}

fn decimal(num: u128, den: u128) -> String {
    format!("{:.6}", num as f64 / den as f64)
}

fn family_rows(
    family: Family,
    pegs: Option<usize>,
    disks: Option<&str>,
    n: Option<&str>,
    k: Option<usize>,
) -> CliResult<Vec<(usize, Built)>> {
    let (list, uses_n) = match family {
        Family::Kneser | Family::Ds => (n, true),
        _ => (disks, false),
    };
    let list = list.ok_or_else(|| {
        CliError::Usage(format!("missing --{}", if uses_n { "n" } else { "disks" }))
    })?;
    if family == Family::Tensor {
        return Err(Error::Unsupported("tensor products are not analyzed by size list".into()).into());
    }
    parse_list(list)?
        .into_iter()
        .map(|x| {
            let params = FamilyParams {
                pegs,
                disks: (!uses_n).then_some(x),
                level: None,
                n: uses_n.then_some(x),
                k,
                r: None,
                left: None,
                right: None,
            };
            Ok((x, build(family, &params)?))
        })
        .collect()
}

fn analyze(cmd: &AnalyzeCommand, seed: u64) -> CliResult<Output> {
    let mut out = Output::default();
    match cmd {
        AnalyzeCommand::Fairness { pegs, disks, strategy, draw } => {
            if *pegs != 3 {
                return Err(Error::Unsupported(format!("endgame removals are defined for 3 pegs, got {pegs}")).into());
            }
            let strategy = match strategy {
                Strategy::TwoState => EndgameStrategy::TwoState,
                Strategy::ThreeState => EndgameStrategy::ThreeState,
            };
            let model = match draw {
                Draw::WithReplacement => DrawModel::WithReplacement,
                Draw::WithoutReplacement => DrawModel::WithoutReplacement,
            };
            out.stdout = fairness_csv(strategy, &parse_list(disks)?, model)?;
        }
        AnalyzeCommand::Separators { pegs, disks } => {
            out.stdout = String::from("n,level,size,bound,verified\n");
            for n in parse_list(disks)? {
                let g = build_hanoi(*pegs, n)?.graph;
                let tree = recursive_separator(*pegs, n)?;
                let ok = tree.verify(&g).is_empty();
                out.failed |= !ok;
                for (i, (size, bound)) in tree.level_sizes().iter().zip(tree.level_bounds()).enumerate() {
                    writeln!(out.stdout, "{n},{},{size},{bound},{ok}", i + 1).unwrap();
                }
            }
        }
        AnalyzeCommand::Diameter { family, pegs, disks, n, k } => {
            out.stdout = String::from("family,vertices,edges,diameter\n");
            for (_, b) in family_rows(*family, *pegs, disks.as_deref(), n.as_deref(), *k)? {
                let d = diameter(&b.graph).map_or("inf".to_string(), |d| d.to_string());
                writeln!(out.stdout, "{},{},{},{d}", b.name, b.graph.vertex_count(), b.graph.edge_count()).unwrap();
            }
        }
        AnalyzeCommand::Expansion { family, pegs, disks, n, k } => {
            out.stdout = String::from("family,vertices,expansion_num,expansion_den,expansion\n");
            for (_, b) in family_rows(*family, *pegs, disks.as_deref(), n.as_deref(), *k)? {
                let e = vertex_expansion(&b.graph)?;
                let (num, den) = (*e.numer(), *e.denom());
                writeln!(
                    out.stdout,
                    "{},{},{num},{den},{}",
                    b.name,
                    b.graph.vertex_count(),
                    decimal(num as u128, den as u128)
                )
                .unwrap();
            }
        }
        AnalyzeCommand::Kk { trials, n } => {
            let rows = kk_trials(*trials, *n, seed)?;
            out.failed = rows.iter().any(|t| !t.check.holds);
            out.stdout = kk_trials_csv(&rows);
        }
        AnalyzeCommand::Mass { beta, n } => {
            let beta = parse_ratio(beta)?;
            out.stdout = String::from("n,beta,fraction_num,fraction_den,fraction\n");
            for n in parse_list(n)? {
                let f = central_mass_fraction(n, beta)?;
                writeln!(
                    out.stdout,
                    "{n},{}/{},{},{},{}",
                    beta.numer(),
                    beta.denom(),
                    f.numer(),
                    f.denom(),
                    decimal(*f.numer(), *f.denom())
                )
                .unwrap();
            }
        }
        AnalyzeCommand::Transitivity { pegs, disks } => {
            out.stdout = String::from("pegs,disks,vertices,swaps,automorphisms,orbit\n");
            for n in parse_list(disks)? {
                let g = build_intersection_graph(*pegs, n)?;
                let (mut swaps, mut autos) = (0, 0);
                for i in 0..n {
                    for j in i + 1..n {
                        swaps += 1;
                        autos += is_automorphism(&g.graph, &g.swap_permutation(i, j)?) as usize;
                    }
                }
                let orbit = g.orbit(0)?.len();
                writeln!(out.stdout, "{pegs},{n},{},{swaps},{autos},{orbit}", g.pegsets.len()).unwrap();
            }
        }
        AnalyzeCommand::Slice { n, trials } => {
            out.stdout = slice_experiment_csv(&slice_experiment(*n, *trials, seed)?);
        }
    }
    Ok(out)
}

/// Criterion 14 is exhaustive by nature and is left out of quick runs.
const QUICK_SKIP: [u8; 1] = [14];

fn acceptance(a: &AcceptanceArgs, seed: u64) -> CliResult<Output> {
    let witness = a.witness.as_deref().map(read).transpose()?;
    let opts = Options {
        scale: if a.quick { Scale::Quick } else { Scale::Full },
        seed,
        witness,
    };
    for &id in &a.criteria {
        if !CRITERIA.iter().any(|c| c.0 == id) {
            return Err(CliError::Usage(format!("no criterion {id}")));
        }
    }
    let ids: Vec<u8> = CRITERIA
        .iter()
        .map(|c| c.0)
        .filter(|id| a.criteria.is_empty() || a.criteria.contains(id))
        .filter(|id| !(a.quick && a.criteria.is_empty() && QUICK_SKIP.contains(id)))
        .collect();
    let results = ids
        .iter()
        .map(|&id| run_criterion(id, &opts))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Output {
        failed: results.iter().any(|r| !r.passed),
        ..Output::default()
    };
    match a.format {
        ReportFormat::Json => {
            out.stdout = serde_json::to_string_pretty(&results).expect("results serialize") + "\n";
        }
        ReportFormat::Text => {
            for r in &results {
                writeln!(
                    out.stdout,
                    "criterion {:>2}  {}  {} ({} ms)\n    {}",
                    r.id,
                    if r.passed { "PASS" } else { "FAIL" },
                    r.title,
                    r.elapsed_ms,
                    r.detail
                )
                .unwrap();
            }
            let passed = results.iter().filter(|r| r.passed).count();
            writeln!(out.stdout, "passed {passed}/{}", results.len()).unwrap();
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!(parse_list("3..6").unwrap(), vec![3, 4, 5, 6]);
        assert_eq!(parse_list("3,5, 9").unwrap(), vec![3, 5, 9]);
        assert_eq!(parse_list("7").unwrap(), vec![7]);
        assert!(parse_list("6..3").is_err());
        assert!(parse_list("x").is_err());
    }

    #[test]
    fn ratios() {
        assert_eq!(parse_ratio("0.75").unwrap(), Ratio::new(3, 4));
        assert_eq!(parse_ratio("3/4").unwrap(), Ratio::new(3, 4));
        assert_eq!(parse_ratio("1").unwrap(), Ratio::new(1, 1));
        assert!(parse_ratio("0.7e").is_err());
        assert!(parse_ratio("1/0").is_err());
    }

    #[test]
    fn named_graphs() {
        assert_eq!(named_graph("K4").unwrap().edge_count(), 6);
        assert_eq!(named_graph("C5").unwrap().edge_count(), 5);
        assert_eq!(named_graph("P3").unwrap().edge_count(), 2);
        assert!(named_graph("no-such-file").is_err());
    }
}

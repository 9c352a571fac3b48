//! Regenerates the bundled mini-corpus under
//! `tests/fixtures/minicorpus` (or the directory given as the first
//! argument).
//!
//! Each fixture repository is a series of bug-fixing commit pairs. A pair
//! touches one class: its buggy checkout and both analyzer reports are
//! written, with the warnings the fix removes absent from the fixed report
//! and every surviving warning shifted by the lines the fix inserted. Some
//! pairs revisit a class from an earlier pair so that duplicates and label
//! promotion occur; a few are merges or carry non-fix messages and must be
//! skipped. A separate `filter/` tree holds one unseen class and its
//! report.
//!
//! `cargo run -p warnsift --example gen_minicorpus`

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use warnsift::manifest::{Manifest, PairEntry};
use warnsift_core::context::{build_context, parse_java_subset};
use warnsift_core::{Category, WarningRecord};

const SEED: u64 = 20_240_611;
const REPOS: [(&str, &str); 6] = [
    ("acme-http", "com.acme.http"),
    ("orbit-cache", "io.orbit.cache"),
    ("ledger-core", "org.ledger.core"),
    ("pixel-io", "net.pixel.io"),
    ("tally-batch", "dev.tally.batch"),
    ("quill-docs", "org.quill.docs"),
];
const PAIRS_PER_REPO: usize = 9;

const NOUNS: [&str; 16] = [
    "session", "record", "entry", "token", "buffer", "header", "payload", "config", "account",
    "invoice", "request", "segment", "profile", "cursor", "ticket", "channel",
];
const VERBS: [&str; 12] = [
    "load", "resolve", "fetch", "parse", "render", "apply", "merge", "compute", "lookup",
    "collect", "decode", "refresh",
];
const CLASS_STEMS: [&str; 12] = [
    "Store", "Manager", "Loader", "Resolver", "Service", "Registry", "Handler", "Builder",
    "Reader", "Index", "Gateway", "Tracker",
];

fn pick<'a>(rng: &mut ChaCha8Rng, xs: &[&'a str]) -> &'a str {
    xs[rng.gen_range(0..xs.len())]
}

fn cap(s: &str) -> String {
    let mut c = s.chars();
    c.next().map_or_else(String::new, |f| f.to_uppercase().chain(c).collect())
}

/// Warning kinds. The first four are defects the fix removes; the rest
/// survive the fix. Two survivors share a rule with a defect kind but
/// guard or release correctly, which the analyzer still reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    NullDeref,
    StreamLeak,
    IgnoredReturn,
    IntMultiply,
    GuardedNull,
    ClosedStream,
    DefaultEncoding,
    DeadStore,
    ExposeRep,
    StringConcatLoop,
    BoxedCompare,
}

const BUGS: [Kind; 4] = [Kind::NullDeref, Kind::StreamLeak, Kind::IgnoredReturn, Kind::IntMultiply];
const BENIGN: [Kind; 7] = [
    Kind::GuardedNull,
    Kind::ClosedStream,
    Kind::DefaultEncoding,
    Kind::DeadStore,
    Kind::ExposeRep,
    Kind::StringConcatLoop,
    Kind::BoxedCompare,
];

/// One method carrying one warning.
#[derive(Clone, Debug)]
struct Method {
    name: String,
    lines: Vec<String>,
    /// Offset of the warned line within `lines`.
    warn_at: usize,
    rule: &'static str,
    category: Category,
    rank: u8,
    confidence: u8,
    /// Message with `{class}` and `{method}` still to be filled in.
    message: String,
}

fn method(rng: &mut ChaCha8Rng, kind: Kind, used: &mut Vec<String>) -> Method {
    let noun = pick(rng, &NOUNS);
    let mut name = format!("{}{}", pick(rng, &VERBS), cap(noun));
    while used.contains(&name) {
        name = format!("{}{}{}", pick(rng, &VERBS), cap(noun), cap(pick(rng, &NOUNS)));
    }
    used.push(name.clone());
    let n = rng.gen_range(2..40);
    let v = noun.to_string();
    let (body, warn_at, rule, category, rank, confidence, message): (Vec<String>, usize, _, _, u8, u8, String) =
        match kind {
            Kind::NullDeref => (
                vec![
                    format!("public int {name}(String key) {{"),
                    format!("    String {v} = null;"),
                    format!("    if (key.length() > {n}) {{"),
                    format!("        {v} = lookup.get(key);"),
                    "    }".into(),
                    format!("    return {v}.length();"),
                    "}".into(),
                ],
                5,
                "NP_NULL_ON_SOME_PATH",
                Category::Correctness,
                rng.gen_range(5..9),
                rng.gen_range(1..3),
                format!("Possible null pointer dereference of {v} in {{class}}.{{method}}(String)"),
            ),
            Kind::GuardedNull => (
                vec![
                    format!("public int {name}(String key) {{"),
                    format!("    String {v} = lookup.get(key);"),
                    format!("    if ({v} != null) {{"),
                    format!("        return {v}.length();"),
                    "    }".into(),
                    format!("    return {n};"),
                    "}".into(),
                ],
                3,
                "NP_NULL_ON_SOME_PATH",
                Category::Correctness,
                rng.gen_range(5..9),
                rng.gen_range(2..4),
                format!("Possible null pointer dereference of {v} in {{class}}.{{method}}(String)"),
            ),
            Kind::StreamLeak => (
                vec![
                    format!("public String {name}(String path) throws IOException {{"),
                    "    BufferedReader reader = new BufferedReader(new FileReader(path));".into(),
                    "    String line = reader.readLine();".into(),
                    "    if (line == null) {".into(),
                    "        return \"\";".into(),
                    "    }".into(),
                    "    reader.close();".into(),
                    format!("    return line.substring({}).trim();", n % 3),
                    "}".into(),
                ],
                1,
                "OBL_UNSATISFIED_OBLIGATION",
                Category::Experimental,
                rng.gen_range(12..17),
                rng.gen_range(1..3),
                "Method {class}.{method}(String) may fail to clean up java.io.Reader".into(),
            ),
            Kind::ClosedStream => (
                vec![
                    format!("public String {name}(String path) throws IOException {{"),
                    "    BufferedReader reader = new BufferedReader(new FileReader(path));".into(),
                    "    String line = reader.readLine();".into(),
                    "    reader.close();".into(),
                    "    if (line == null) {".into(),
                    "        return \"\";".into(),
                    "    }".into(),
                    "    return line.trim();".into(),
                    "}".into(),
                ],
                1,
                "OBL_UNSATISFIED_OBLIGATION",
                Category::Experimental,
                rng.gen_range(12..17),
                rng.gen_range(2..4),
                "Method {class}.{method}(String) may fail to clean up java.io.Reader".into(),
            ),
            Kind::IgnoredReturn => (
                vec![
                    format!("public String {name}(String {v}) {{"),
                    format!("    {v}.replace(' ', '_');"),
                    format!("    lookup.put({v}, \"{noun}\");"),
                    format!("    return {v};"),
                    "}".into(),
                ],
                1,
                "RV_RETURN_VALUE_IGNORED",
                Category::Correctness,
                rng.gen_range(9..13),
                1,
                "Return value of String.replace(char, char) ignored in {class}.{method}(String)".into(),
            ),
            Kind::IntMultiply => (
                vec![
                    format!("public long {name}(int seconds) {{"),
                    "    long total = seconds * 1000;".into(),
                    format!("    count += {n};"),
                    "    return total + count;".into(),
                    "}".into(),
                ],
                1,
                "ICAST_INTEGER_MULTIPLY_CAST_TO_LONG",
                Category::Style,
                rng.gen_range(14..18),
                rng.gen_range(1..3),
                "Result of integer multiplication cast to long in {class}.{method}(int)".into(),
            ),
            Kind::DefaultEncoding => (
                vec![
                    format!("public byte[] {name}(String {v}) {{"),
                    format!("    byte[] raw = {v}.getBytes();"),
                    format!("    count += raw.length + {n};"),
                    "    return raw;".into(),
                    "}".into(),
                ],
                1,
                "DM_DEFAULT_ENCODING",
                Category::I18n,
                rng.gen_range(17..20),
                rng.gen_range(1..3),
                "Found reliance on default encoding in {class}.{method}(String): String.getBytes()".into(),
            ),
            Kind::DeadStore => (
                vec![
                    format!("public int {name}(int limit) {{"),
                    format!("    int {v} = limit * {n};"),
                    format!("    {v} = limit + count;"),
                    format!("    return {v};"),
                    "}".into(),
                ],
                1,
                "DLS_DEAD_LOCAL_STORE",
                Category::Style,
                rng.gen_range(15..20),
                rng.gen_range(2..4),
                format!("Dead store to {v} in {{class}}.{{method}}(int)"),
            ),
            Kind::ExposeRep => (
                vec![
                    format!("public String[] {name}() {{"),
                    "    count++;".into(),
                    "    return names;".into(),
                    "}".into(),
                ],
                2,
                "EI_EXPOSE_REP",
                Category::MaliciousCode,
                rng.gen_range(16..20),
                rng.gen_range(2..4),
                "{class}.{method}() may expose internal representation by returning {class}.names".into(),
            ),
            Kind::StringConcatLoop => (
                vec![
                    format!("public String {name}(String[] parts) {{"),
                    "    String out = \"\";".into(),
                    "    for (int i = 0; i < parts.length; i++) {".into(),
                    "        out = out + parts[i];".into(),
                    "    }".into(),
                    "    return out;".into(),
                    "}".into(),
                ],
                3,
                "SBSC_USE_STRINGBUFFER_CONCATENATION",
                Category::Performance,
                rng.gen_range(17..21),
                rng.gen_range(2..4),
                "{class}.{method}(String[]) concatenates strings using + in a loop".into(),
            ),
            Kind::BoxedCompare => (
                vec![
                    format!("public boolean {name}(Integer left, Integer right) {{"),
                    format!("    count += {n};"),
                    "    return left == right;".into(),
                    "}".into(),
                ],
                2,
                "RC_REF_COMPARISON",
                Category::BadPractice,
                rng.gen_range(10..16),
                rng.gen_range(1..3),
                "Suspicious comparison of Integer references in {class}.{method}(Integer, Integer)".into(),
            ),
        };
    Method {
        name,
        lines: body,
        warn_at,
        rule,
        category,
        rank,
        confidence,
        message,
    }
}

fn benign(rng: &mut ChaCha8Rng, used: &mut Vec<String>) -> Method {
    let kind = *BENIGN.choose(rng).unwrap();
    method(rng, kind, used)
}

/// Analyzer-style path of a class, e.g. `com/acme/http/Store.java`.
fn analyzer_path(package: &str, class: &str) -> String {
    format!("{}/{class}.java", package.replace('.', "/"))
}

struct ClassFile {
    package: String,
    name: String,
    methods: Vec<Method>,
}

/// A warning placed in a rendered class and the method carrying it.
struct Placed {
    record: WarningRecord,
    method: usize,
}

impl ClassFile {
    /// Source text and one warning per method, in method order.
    fn render(&self) -> (String, Vec<Placed>) {
        let mut lines = vec![
            format!("package {};", self.package),
            String::new(),
            "import java.io.BufferedReader;".into(),
            "import java.io.FileReader;".into(),
            "import java.io.IOException;".into(),
            "import java.util.HashMap;".into(),
            "import java.util.Map;".into(),
            String::new(),
            format!("public class {} {{", self.name),
            "    private final Map<String, String> lookup = new HashMap<>();".into(),
            "    private String[] names = new String[4];".into(),
            "    private int count;".into(),
        ];
        let mut placed = Vec::new();
        for (i, m) in self.methods.iter().enumerate() {
            lines.push(String::new());
            let first = lines.len() as u32 + 1;
            for l in &m.lines {
                lines.push(format!("    {l}"));
            }
            let line = first + m.warn_at as u32;
            let message = m
                .message
                .replace("{class}", &format!("{}.{}", self.package, self.name))
                .replace("{method}", &m.name);
            placed.push(Placed {
                record: WarningRecord {
                    rule: m.rule.to_string(),
                    category: m.category,
                    rank: m.rank,
                    confidence: m.confidence,
                    message,
                    class_name: format!("{}.{}", self.package, self.name),
                    method_name: Some(m.name.clone()),
                    source_path: analyzer_path(&self.package, &self.name),
                    line_start: Some(line),
                    line_end: Some(line),
                },
                method: i,
            });
        }
        lines.push("}".into());
        let mut text = lines.join("\n");
        text.push('\n');
        (text, placed)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// A report in the analyzer's own layout: class and method elements with
/// nested line ranges, then the primary source line.
fn report_xml(records: &[WarningRecord]) -> String {
    let mut s = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<BugCollection version=\"4.8.3\" sequence=\"0\" timestamp=\"0\">\n");
    for w in records {
        let file = w.source_path.rsplit('/').next().unwrap_or(&w.source_path);
        let line = w.line_start.unwrap_or(1);
        let _ = writeln!(
            s,
            "  <BugInstance type=\"{}\" priority=\"{}\" rank=\"{}\" abbrev=\"{}\" category=\"{}\">",
            w.rule,
            w.confidence,
            w.rank,
            w.rule.split('_').next().unwrap_or(""),
            w.category.as_str()
        );
        let _ = writeln!(s, "    <ShortMessage>{}</ShortMessage>", escape(&w.rule.replace('_', " ").to_lowercase()));
        let _ = writeln!(s, "    <LongMessage>{}</LongMessage>", escape(&w.message));
        let _ = writeln!(s, "    <Class classname=\"{}\" primary=\"true\">", w.class_name);
        let _ = writeln!(
            s,
            "      <SourceLine classname=\"{}\" sourcefile=\"{file}\" sourcepath=\"{}\"/>",
            w.class_name, w.source_path
        );
        s.push_str("    </Class>\n");
        if let Some(m) = &w.method_name {
            let _ = writeln!(s, "    <Method classname=\"{}\" name=\"{m}\" primary=\"true\">", w.class_name);
            let _ = writeln!(
                s,
                "      <SourceLine classname=\"{}\" start=\"{}\" end=\"{}\" sourcefile=\"{file}\" sourcepath=\"{}\"/>",
                w.class_name,
                line.saturating_sub(1).max(1),
                line + 2,
                w.source_path
            );
            s.push_str("    </Method>\n");
        }
        let _ = write!(
            s,
            "    <SourceLine classname=\"{}\" primary=\"true\" sourcefile=\"{file}\" sourcepath=\"{}\"",
            w.class_name, w.source_path
        );
        if let (Some(a), Some(b)) = (w.line_start, w.line_end) {
            let _ = write!(s, " start=\"{a}\" end=\"{b}\"");
        }
        s.push_str("/>\n  </BugInstance>\n");
    }
    s.push_str("</BugCollection>\n");
    s
}

fn write(path: &Path, text: &str) {
    std::fs::create_dir_all(path.parent().unwrap()).unwrap();
    std::fs::write(path, text).unwrap();
}

fn check_parses(text: &str, placed: &[Placed]) {
    let unit = parse_java_subset(text).unwrap_or_else(|e| panic!("generated class does not parse: {e}\n{text}"));
    for p in placed {
        let ctx = build_context(&unit, &p.record).expect("generated class lowers");
        assert!(!ctx.slice_fallback, "criterion missed for {:?}", p.record);
    }
}

fn commit_id(rng: &mut ChaCha8Rng) -> String {
    format!("{:07x}", rng.gen_range(0..0x1000_0000u32))
}

const FIX_MESSAGES: [&str; 6] = [
    "fix null pointer dereference in {m}",
    "Fix resource leak when reading {n} files",
    "fix bug in {m} handling",
    "Fix issue #{k}: wrong {n} totals",
    "fix defect in {n} conversion",
    "Fix error when {n} is empty",
];
const OTHER_MESSAGES: [&str; 3] = ["refactor: rename {n} variables", "fix typo in {n} docs", "bump version to 1.{k}"];

fn message(rng: &mut ChaCha8Rng, templates: &[&str], m: &str) -> String {
    pick(rng, templates)
        .replace("{m}", m)
        .replace("{n}", pick(rng, &NOUNS))
        .replace("{k}", &rng.gen_range(10..400).to_string())
}

/// Removes the bug methods' warnings and shifts later lines by the lines
/// the fix inserts.
fn fixed_side(placed: &[Placed], removed: &[usize], shift: u32) -> Vec<WarningRecord> {
    let first_fix = placed
        .iter()
        .filter(|p| removed.contains(&p.method))
        .filter_map(|p| p.record.line_start)
        .min()
        .unwrap_or(u32::MAX);
    placed
        .iter()
        .filter(|p| !removed.contains(&p.method))
        .map(|p| {
            let mut w = p.record.clone();
            if w.line_start.is_some_and(|l| l > first_fix) {
                w.line_start = w.line_start.map(|l| l + shift);
                w.line_end = w.line_end.map(|l| l + shift);
            }
            w
        })
        .collect()
}

/// An untouched class whose warnings appear in both reports but lie
/// outside the changed files.
fn bystander(rng: &mut ChaCha8Rng, package: &str) -> Vec<WarningRecord> {
    let mut used = Vec::new();
    let class = ClassFile {
        package: package.to_string(),
        name: "Constants".into(),
        methods: (0..2).map(|_| benign(rng, &mut used)).collect(),
    };
    class.render().1.into_iter().map(|p| p.record).collect()
}

fn main() {
    let out: PathBuf = std::env::args()
        .nth(1)
        .map_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/minicorpus"), PathBuf::from);
    if out.exists() {
        std::fs::remove_dir_all(&out).unwrap();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut manifest = Manifest::default();
    for (repo, package) in REPOS {
        let mut classes: Vec<ClassFile> = Vec::new();
        for k in 0..PAIRS_PER_REPO {
            let revisit = !classes.is_empty() && rng.gen_bool(0.2);
            let idx = if revisit {
                rng.gen_range(0..classes.len())
            } else {
                let mut name = format!("{}{}", cap(pick(&mut rng, &NOUNS)), pick(&mut rng, &CLASS_STEMS));
                while classes.iter().any(|c| c.name == name) {
                    name = format!("{}{}", cap(pick(&mut rng, &NOUNS)), pick(&mut rng, &CLASS_STEMS));
                }
                classes.push(ClassFile {
                    package: package.to_string(),
                    name,
                    methods: Vec::new(),
                });
                classes.len() - 1
            };
            let class = &mut classes[idx];
            let mut used: Vec<String> = class.methods.iter().map(|m| m.name.clone()).collect();
            let fresh = if revisit { rng.gen_range(2..4) } else { rng.gen_range(8..12) };
            for _ in 0..fresh {
                class.methods.push(benign(&mut rng, &mut used));
            }
            let bugs = if rng.gen_bool(0.15) { 0 } else { 1 };
            let mut removed: Vec<usize> = Vec::new();
            for _ in 0..bugs {
                let kind = *BUGS.choose(&mut rng).unwrap();
                let at = rng.gen_range(0..=class.methods.len());
                class.methods.insert(at, method(&mut rng, kind, &mut used));
                removed.push(at);
            }
            // A revisit sometimes also fixes an older, previously surviving
            // warning, which promotes its earlier occurrences.
            if revisit && rng.gen_bool(0.5) {
                let old: Vec<usize> = (0..class.methods.len()).filter(|i| !removed.contains(i)).collect();
                removed.push(*old.choose(&mut rng).unwrap());
            }
            let (text, placed) = class.render();
            check_parses(&text, &placed);

            // Fixes are not consecutive commits, so each pair has its own parent.
            let buggy = commit_id(&mut rng);
            let fixed = commit_id(&mut rng);
            let repo_path = format!("src/main/java/{}", analyzer_path(package, &class.name));
            write(&out.join(format!("repos/{repo}/{buggy}/{repo_path}")), &text);

            let mut buggy_report: Vec<WarningRecord> = placed.iter().map(|p| p.record.clone()).collect();
            let mut fixed_report = fixed_side(&placed, &removed, 2);
            let others = bystander(&mut rng, package);
            buggy_report.extend(others.iter().cloned());
            fixed_report.extend(others);
            if rng.gen_bool(0.2) {
                buggy_report.push(WarningRecord {
                    rule: "NOISE_NULL_DEREFERENCE".into(),
                    category: Category::Noise,
                    rank: 20,
                    confidence: 3,
                    message: "Bogus warning about a null pointer dereference".into(),
                    line_start: placed[0].record.line_start,
                    line_end: placed[0].record.line_end,
                    ..placed[0].record.clone()
                });
            }
            write(&out.join(format!("reports/{repo}/{buggy}.xml")), &report_xml(&buggy_report));
            write(&out.join(format!("reports/{repo}/{fixed}.xml")), &report_xml(&fixed_report));

            let first_bug = removed.first().map_or("update", |&i| class.methods[i].name.as_str()).to_string();
            let (parents, commit_message) = match k {
                4 if repo == "ledger-core" => (2, format!("Merge branch 'fix-{}'", pick(&mut rng, &NOUNS))),
                _ if rng.gen_bool(0.08) => (1, message(&mut rng, &OTHER_MESSAGES, &first_bug)),
                _ => (1, message(&mut rng, &FIX_MESSAGES, &first_bug)),
            };
            manifest.pairs.push(PairEntry {
                repo_id: repo.to_string(),
                fixed_commit: fixed.clone(),
                buggy_commit: buggy.clone(),
                parents,
                commit_message,
                changed_files: vec![repo_path],
                buggy_report: format!("reports/{repo}/{buggy}.xml").into(),
                fixed_report: format!("reports/{repo}/{fixed}.xml").into(),
                buggy_sources: format!("repos/{repo}/{buggy}").into(),
            });

            // The fixed class drops the removed methods' defects; later
            // revisits see only the surviving methods.
            let mut keep = 0;
            class.methods.retain(|_| {
                keep += 1;
                !removed.contains(&(keep - 1))
            });
        }
    }
    let json = serde_json::to_string_pretty(&manifest).unwrap();
    write(&out.join("manifest.json"), &(json + "\n"));

    // An unseen class for the filter stage.
    let mut used = Vec::new();
    let mut methods: Vec<Method> = (0..8).map(|_| benign(&mut rng, &mut used)).collect();
    for kind in BUGS {
        let at = rng.gen_range(0..=methods.len());
        methods.insert(at, method(&mut rng, kind, &mut used));
    }
    let class = ClassFile {
        package: "org.sample.app".into(),
        name: "OrderBook".into(),
        methods,
    };
    let (text, placed) = class.render();
    check_parses(&text, &placed);
    write(&out.join("filter/src/main/java/org/sample/app/OrderBook.java"), &text);
    let records: Vec<WarningRecord> = placed.into_iter().map(|p| p.record).collect();
    write(&out.join("filter/report.xml"), &report_xml(&records));
    println!("wrote {} commit pairs to {}", manifest.pairs.len(), out.display());
}

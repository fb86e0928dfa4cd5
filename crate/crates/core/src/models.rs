//! Generators for the case-study models and their query families, as LCGS source text.

/// One model with one query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub name: String,
    pub model: String,
    pub formula: String,
}

impl Query {
    fn new(name: impl Into<String>, model: &str, formula: impl Into<String>) -> Self {
        Query {
            name: name.into(),
            model: model.to_string(),
            formula: formula.into(),
        }
    }
}

/// `n` cowboys `p1..pn` in a circle, each of whom may shoot any other living cowboy; a
/// cowboy dies after `bullets` hits.
pub fn standoff(n: usize, bullets: usize) -> String {
    assert!(n >= 2);
    let mut s = format!("const bullets = {bullets};\n\n");
    for i in 1..=n {
        let others: Vec<usize> = (1..=n).filter(|&j| j != i).collect();
        let hits: Vec<String> = others.iter().map(|j| format!(" - p{j}.shoot_{i}")).collect();
        s += &format!("template cowboy{i}\n");
        s += "    health : [0 .. bullets] init bullets;\n";
        s += &format!("    health' = max(health{}, 0);\n", hits.concat());
        s += "    label alive = health > 0;\n";
        s += "    [wait] 1;\n";
        for j in &others {
            s += &format!("    [shoot_{j}] health > 0 && p{j}.health > 0;\n");
        }
        s += "endtemplate\n\n";
    }
    for i in 1..=n {
        s += &format!("player p{i} = cowboy{i};\n");
    }
    s
}

/// MS1, MS2 and MS3 for a standoff.
pub fn standoff_queries(n: usize, bullets: usize) -> Vec<Query> {
    let model = standoff(n, bullets);
    let odd: Vec<String> = (1..=n).step_by(2).map(|i| format!("p{i}")).collect();
    vec![
        Query::new(format!("MS1({n},{bullets})"), &model, "<<p1>> G p1.alive"),
        Query::new(format!("MS2({n},{bullets})"), &model, "<<p1>> F !p1.alive"),
        Query::new(
            format!("MS3({n},{bullets})"),
            &model,
            format!("<<{}>> G p1.alive", odd.join(", ")),
        ),
    ]
}

/// Four robots `p1..p4` starting in the corners of an `n × n` grid, each heading for the
/// opposite corner. Robots ending a step on the same cell are wrecked and stop moving.
pub fn robots(n: usize) -> String {
    assert!(n >= 2);
    let m = n - 1;
    let corners = [((0, 0), (m, m)), ((m, m), (0, 0)), ((0, m), (m, 0)), ((m, 0), (0, m))];
    let next_x = |i: usize| format!("(p{i}.x + p{i}.right - p{i}.left)");
    let next_y = |i: usize| format!("(p{i}.y + p{i}.up - p{i}.down)");
    let mut s = format!("const size = {n};\n\n");
    for (k, &((sx, sy), (tx, ty))) in corners.iter().enumerate() {
        let i = k + 1;
        let collisions: Vec<String> = (1..=4)
            .filter(|&j| j != i)
            .map(|j| format!("({} == {} && {} == {})", next_x(i), next_x(j), next_y(i), next_y(j)))
            .collect();
        s += &format!("template robot{i}\n");
        s += &format!("    x : [0 .. size - 1] init {sx};\n");
        s += &format!("    x' = x + p{i}.right - p{i}.left;\n");
        s += &format!("    y : [0 .. size - 1] init {sy};\n");
        s += &format!("    y' = y + p{i}.up - p{i}.down;\n");
        s += "    hit : [0 .. 1] init 0;\n";
        s += &format!("    hit' = max(hit, {});\n", collisions.join(" || "));
        s += &format!("    label at_target = x == {tx} && y == {ty};\n");
        s += &format!("    label at_home = x == {sx} && y == {sy};\n");
        s += "    label crashed = hit > 0;\n";
        s += "    [wait] 1;\n";
        s += "    [left] hit == 0 && x > 0;\n";
        s += "    [right] hit == 0 && x < size - 1;\n";
        s += "    [down] hit == 0 && y > 0;\n";
        s += "    [up] hit == 0 && y < size - 1;\n";
        s += "endtemplate\n\n";
    }
    for i in 1..=4 {
        s += &format!("player p{i} = robot{i};\n");
    }
    s
}

/// RC1, RC3 and RC4 for the robot grid.
pub fn robot_queries(n: usize) -> Vec<Query> {
    let model = robots(n);
    let all = "p1.at_target && p2.at_target && p3.at_target && p4.at_target";
    vec![
        Query::new(
            format!("RC1({n})"),
            &model,
            "<<p1, p2, p3>> F (p1.at_target && p2.at_target)",
        ),
        Query::new(format!("RC3({n})"), &model, format!("<<p1, p2, p3, p4>> F ({all})")),
        Query::new(
            format!("RC4({n})"),
            &model,
            "<<p1, p3, p4>> F (p1.at_target && !p1.crashed)",
        ),
    ]
}

/// `n` girls `g1..gn` in a circle, each knowing one secret. A girl may call a neighbour;
/// both learn everything the other knew. The `counter` player tallies calls up to `cap + 1`.
pub fn gossip(n: usize, cap: usize) -> String {
    assert!(n >= 3);
    let right = |i: usize| i % n + 1;
    let left = |i: usize| (i + n - 2) % n + 1;
    // 1 when girls i and right(i) talk this step
    let link = |i: usize| format!("(g{i}.call_right || g{}.call_left)", right(i));
    let talk = |i: usize, j: usize| if j == right(i) { link(i) } else { link(j) };
    let knows = |i: usize, j: usize| {
        if i == j {
            "1".to_string()
        } else {
            format!("g{i}.s{j}")
        }
    };

    let mut s = format!("const cap = {cap};\n\n");
    for i in 1..=n {
        s += &format!("template girl{i}\n");
        for j in (1..=n).filter(|&j| j != i) {
            s += &format!("    s{j} : [0 .. 1] init 0;\n");
            let mut terms = vec![format!("s{j}")];
            for k in [left(i), right(i)] {
                terms.push(format!("{} * {}", talk(i, k), knows(k, j)));
            }
            s += &format!("    s{j}' = max({});\n", terms.join(", "));
        }
        let all: Vec<String> = (1..=n).filter(|&j| j != i).map(|j| format!("s{j} == 1")).collect();
        s += &format!("    label knows_all = {};\n", all.join(" && "));
        s += "    [wait] 1;\n    [call_left] 1;\n    [call_right] 1;\n";
        s += "endtemplate\n\n";
    }
    let links: Vec<String> = (1..=n).map(link).collect();
    let knows_all = |i: usize| {
        let bits: Vec<String> = (1..=n).filter(|&j| j != i).map(|j| format!("g{i}.s{j} == 1")).collect();
        format!("({})", bits.join(" && "))
    };
    let everyone: Vec<String> = (1..=n).map(knows_all).collect();
    s += "template tally\n";
    s += "    calls : [0 .. cap + 1] init 0;\n";
    s += &format!("    calls' = min(calls + {}, cap + 1);\n", links.join(" + "));
    s += "    label few_calls = calls <= cap;\n";
    s += "    label many_calls = calls > cap;\n";
    s += &format!("    label all_know_all = {};\n", everyone.join(" && "));
    s += "    [tick] 1;\n";
    s += "endtemplate\n\n";
    for i in 1..=n {
        s += &format!("player g{i} = girl{i};\n");
    }
    s += "player counter = tally;\n";
    s
}

/// GG1, GG5 and GG6 for circular gossip with at most 10 calls.
pub fn gossip_queries(n: usize) -> Vec<Query> {
    let model = gossip(n, 10);
    let girls: Vec<String> = (1..=n).map(|i| format!("g{i}")).collect();
    let mut everyone = girls.clone();
    everyone.push("counter".into());
    vec![
        Query::new(
            format!("GG1({n})"),
            &model,
            format!("<<{}>> (counter.few_calls U counter.all_know_all)", everyone.join(", ")),
        ),
        Query::new(format!("GG5({n})"), &model, "<<>> F counter.many_calls"),
        Query::new(format!("GG6({n})"), &model, "<<g1>> (counter.few_calls U g1.knows_all)"),
    ]
}

/// A walker on `0..=n` that may step forward or, from 0 only, jump straight to `n`.
pub fn shortcut_line(n: usize) -> String {
    format!(
        "template walk\n\
         \x20   pos : [0 .. {n}] init 0;\n\
         \x20   pos' = min(pos + walker.step + walker.jump * {n}, {n});\n\
         \x20   label goal = pos == {n};\n\
         \x20   [step] 1;\n\
         \x20   [jump] pos == 0;\n\
         endtemplate\n\n\
         player walker = walk;\n"
    )
}

pub const SHORTCUT_QUERY: &str = "<<walker>> F walker.goal";

/// The query families at desk scale.
pub fn suite() -> Vec<Query> {
    let mut out = Vec::new();
    for (n, b) in [(3, 1), (3, 2), (4, 1)] {
        out.extend(standoff_queries(n, b));
    }
    out.extend(robot_queries(3));
    out.extend(gossip_queries(3));
    out
}

//! Recipe trees that wire constructors, expansions and compositions, with
//! the claimed result checked after execution.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;

use crate::algebraic::{bush_oa, projective_oa, q4_oa, sylvester_oa2, sylvester_oa3};
use crate::array::{has_strength, project_columns, verify_large_set, verify_strength, LargeSet, LevelProfile};
use crate::array::SymbolMatrix;
use crate::combin::binomial;
use crate::compose::{cosets_strength1, describe_large_set_failure, juxtapose, kronecker, permute_columns, zero_sum};
use crate::diffmatrix::{develop_chai1, develop_chai2, dm_for};
use crate::error::{Error, Result};
use crate::expand::{expand_shift, find_resolvable_projection, ResolvableProjection};
use crate::fixtures::fixture;
use crate::gf::prime_power;
use crate::io::Artifact;

/// Default verification budget in counting operations.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Leaf {
    /// Strength-one cosets over a profile.
    Cosets(LevelProfile),
    /// `OA(s^t, t+1, s, t)`.
    ZeroSum { s: u32, t: usize },
    Sylvester2 { n: u32, k: usize },
    Sylvester3 { n: u32, k: usize },
    Projective { q: u64, n: usize, k: usize },
    Bush { q: u64, t: usize, k: usize },
    Q4 { q: u64, k: usize },
    Chai1 { v: u64 },
    /// The 29-column development restricted to its passing columns.
    Chai2 { v: u64 },
    Fixture(String),
    FullFactorial(LevelProfile),
}

impl fmt::Display for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Leaf::Cosets(p) => write!(f, "cosets({p})"),
            Leaf::ZeroSum { s, t } => write!(f, "zero-sum(s={s},t={t})"),
            Leaf::Sylvester2 { n, k } => write!(f, "sylvester2(n={n},k={k})"),
            Leaf::Sylvester3 { n, k } => write!(f, "sylvester3(n={n},k={k})"),
            Leaf::Projective { q, n, k } => write!(f, "projective(q={q},n={n},k={k})"),
            Leaf::Bush { q, t, k } => write!(f, "bush(q={q},t={t},k={k})"),
            Leaf::Q4 { q, k } => write!(f, "q4t3(q={q},k={k})"),
            Leaf::Chai1 { v } => write!(f, "chai1(v={v})"),
            Leaf::Chai2 { v } => write!(f, "chai2(v={v}, passing columns)"),
            Leaf::Fixture(name) => write!(f, "fixture({name})"),
            Leaf::FullFactorial(p) => write!(f, "full-factorial({p})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Leaf(Leaf),
    Expand(Box<Node>),
    /// Column selection on an array, or a column permutation on a large set.
    Project(Box<Node>, Vec<usize>),
    Juxtapose(Box<Node>, Box<Node>),
    Kronecker(Box<Node>, Box<Node>),
}

impl Node {
    pub fn leaf(l: Leaf) -> Node {
        Node::Leaf(l)
    }

    pub fn expand(self) -> Node {
        Node::Expand(Box::new(self))
    }

    pub fn project(self, columns: Vec<usize>) -> Node {
        Node::Project(Box::new(self), columns)
    }

    pub fn juxtapose(self, other: Node) -> Node {
        Node::Juxtapose(Box::new(self), Box::new(other))
    }

    pub fn kronecker(self, other: Node) -> Node {
        Node::Kronecker(Box::new(self), Box::new(other))
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Leaf(l) => write!(f, "{l}"),
            Node::Expand(n) => write!(f, "expand({n})"),
            Node::Project(n, c) => write!(f, "project({n}, {c:?})"),
            Node::Juxtapose(a, b) => write!(f, "juxtapose({a}, {b})"),
            Node::Kronecker(a, b) => write!(f, "kronecker({a}, {b})"),
        }
    }
}

/// Claimed run count, profile (compared as a multiset) and strength.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claim {
    pub runs: BigUint,
    pub profile: LevelProfile,
    pub strength: usize,
    /// Whether the result is a large set rather than a single array.
    pub large_set: bool,
}

impl Claim {
    pub fn oa(runs: BigUint, profile: LevelProfile, strength: usize) -> Claim {
        Claim { runs, profile, strength, large_set: false }
    }

    pub fn loa(runs: BigUint, profile: LevelProfile, strength: usize) -> Claim {
        Claim { runs, profile, strength, large_set: true }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.large_set { "LOA" } else { "OA" };
        write!(f, "{kind}({}, {}, {})", self.runs, self.profile.notation(), self.strength)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionPlan {
    pub label: String,
    pub root: Node,
    pub claim: Claim,
}

impl fmt::Display for ConstructionPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} := {} claiming {}", self.label, self.root, self.claim)
    }
}

/// Intermediate value of a plan node.
#[derive(Clone, Debug)]
pub enum Value {
    Oa { array: SymbolMatrix, projection: Option<ResolvableProjection> },
    Loa(LargeSet),
}

#[derive(Clone, Debug)]
struct Shape {
    runs: BigUint,
    profile: LevelProfile,
    strength: usize,
    large_set: bool,
}

fn pow(base: u64, exp: usize) -> BigUint {
    BigUint::from(base).pow(exp as u32)
}

fn ops(runs: &BigUint, k: usize, t: usize) -> BigUint {
    runs * BigUint::from(binomial(k as u64, t as u64))
}

fn uniform(s: u64, k: usize) -> Result<LevelProfile> {
    LevelProfile::uniform(s as u32, k)
}

fn leaf_shape(l: &Leaf) -> Result<Shape> {
    let oa = |runs: BigUint, profile: LevelProfile, strength| Shape { runs, profile, strength, large_set: false };
    Ok(match l {
        Leaf::Cosets(p) => {
            let n = p.levels().iter().fold(1u64, |a, &s| a.lcm(&(s as u64)));
            Shape { runs: BigUint::from(n), profile: p.clone(), strength: 1, large_set: true }
        }
        Leaf::ZeroSum { s, t } => oa(pow(*s as u64, *t), uniform(*s as u64, t + 1)?, *t),
        Leaf::Sylvester2 { n, k } => oa(pow(2, *n as usize), uniform(2, *k)?, 2),
        Leaf::Sylvester3 { n, k } => oa(pow(2, *n as usize + 1), uniform(2, *k)?, 3),
        Leaf::Projective { q, n, k } => oa(pow(*q, *n), uniform(*q, *k)?, 2),
        Leaf::Bush { q, t, k } => oa(pow(*q, *t), uniform(*q, *k)?, *t),
        Leaf::Q4 { q, k } => oa(pow(*q, 4), uniform(*q, *k)?, 3),
        Leaf::Chai1 { v } => oa(pow(*v, 3), uniform(*v, 13)?, 2),
        Leaf::Chai2 { v } => oa(pow(*v, 4), uniform(*v, 29)?, 2),
        Leaf::Fixture(name) => {
            let f = fixture(name)?;
            oa(BigUint::from(f.array.runs()), f.array.profile().clone(), f.array.strength())
        }
        Leaf::FullFactorial(p) => oa(p.universe_size(), p.clone(), p.k()),
    })
}

/// Output shape and accumulated verification cost of a node.
fn shape(node: &Node) -> Result<(Shape, BigUint)> {
    match node {
        Node::Leaf(l) => {
            let s = leaf_shape(l)?;
            let universe = s.profile.universe_size();
            let cost = if s.large_set {
                ops(&universe, s.profile.k(), s.strength)
            } else {
                ops(&s.runs, s.profile.k(), s.strength)
            };
            Ok((s, cost))
        }
        Node::Expand(inner) => {
            let (s, c) = shape(inner)?;
            let universe = s.profile.universe_size();
            let cost = c + ops(&universe, s.profile.k(), s.strength);
            Ok((Shape { large_set: true, ..s }, cost))
        }
        Node::Project(inner, columns) => {
            let (s, c) = shape(inner)?;
            let profile = s.profile.project(columns)?;
            let strength = s.strength.min(columns.len());
            Ok((Shape { profile, strength, ..s }, c))
        }
        Node::Juxtapose(a, b) => {
            let (sa, ca) = shape(a)?;
            let (sb, cb) = shape(b)?;
            let mut levels = sa.profile.levels().to_vec();
            if let (Some(x), Some(y)) = (levels.first_mut(), sb.profile.levels().first()) {
                *x += y;
            }
            let profile = LevelProfile::new(levels)?;
            let strength = sa.strength.min(sb.strength);
            let cost = ca + cb + ops(&profile.universe_size(), profile.k(), strength);
            Ok((Shape { runs: sa.runs + sb.runs, profile, strength, large_set: true }, cost))
        }
        Node::Kronecker(a, b) => {
            let (sa, ca) = shape(a)?;
            let (sb, cb) = shape(b)?;
            let ma = sa.profile.universe_size() / &sa.runs;
            let mb = sb.profile.universe_size() / &sb.runs;
            let runs = ma.lcm(&mb) * &sa.runs * &sb.runs;
            let profile = sa.profile.concat(&sb.profile);
            let strength = (sa.strength + sb.strength + 1).min(profile.k());
            let cost = ca + cb + ops(&runs, profile.k(), strength);
            Ok((Shape { runs, profile, strength, large_set: false }, cost))
        }
    }
}

/// Estimated counting operations needed to execute and verify `plan`.
pub fn plan_cost(plan: &ConstructionPlan) -> Result<BigUint> {
    let (s, cost) = shape(&plan.root)?;
    let extra = if s.strength == plan.claim.strength {
        BigUint::default()
    } else if plan.claim.large_set {
        ops(&s.profile.universe_size(), s.profile.k(), plan.claim.strength)
    } else {
        ops(&s.runs, s.profile.k(), plan.claim.strength)
    };
    Ok(cost + extra)
}

fn at(node: &Node, e: Error) -> Error {
    match e {
        Error::AtNode { .. } => e,
        other => Error::AtNode { node: node.to_string(), source: Box::new(other) },
    }
}

fn projected(array: SymbolMatrix, columns: Vec<usize>) -> Result<Value> {
    let projection = ResolvableProjection::new(&array, columns)?;
    Ok(Value::Oa { array, projection: Some(projection) })
}

fn run_leaf(l: &Leaf) -> Result<Value> {
    let oa = |(array, projection): (SymbolMatrix, ResolvableProjection)| Value::Oa {
        array,
        projection: Some(projection),
    };
    Ok(match l {
        Leaf::Cosets(p) => Value::Loa(cosets_strength1(p)?),
        Leaf::ZeroSum { s, t } => projected(zero_sum(*s, *t)?, (0..*t).collect())?,
        Leaf::Sylvester2 { n, k } => oa(sylvester_oa2(*n, *k)?),
        Leaf::Sylvester3 { n, k } => oa(sylvester_oa3(*n, *k)?),
        Leaf::Projective { q, n, k } => oa(projective_oa(*q, *n, *k)?),
        Leaf::Bush { q, t, k } => oa(bush_oa(*q, *t, *k)?),
        Leaf::Q4 { q, k } => oa(q4_oa(*q, *k)?),
        Leaf::Chai1 { v } => oa(develop_chai1(&dm_for(*v)?)?),
        Leaf::Chai2 { v } => {
            let dev = develop_chai2(&dm_for(*v)?)?;
            if let Some(d) = &dev.projection_defect {
                return Err(Error::Verification(format!("columns 0..4 are not a full factorial: {d}")));
            }
            let keep = dev.passing_columns();
            let array = project_columns(&dev.array, &keep)?.with_strength(2)?;
            projected(array, vec![0, 1, 2, 3])?
        }
        Leaf::Fixture(name) => {
            let f = fixture(name)?;
            if !has_strength(&f.array, f.array.strength()) {
                return Err(Error::Verification(format!("fixture {name} fails strength {}", f.array.strength())));
            }
            let projection = f.projection()?;
            Value::Oa { array: f.array, projection: Some(projection) }
        }
        Leaf::FullFactorial(p) => {
            let array = SymbolMatrix::full_factorial(p.clone())?;
            let k = array.k();
            projected(array, (0..k).collect())?
        }
    })
}

fn as_large_set(v: Value, node: &Node) -> Result<LargeSet> {
    match v {
        Value::Loa(l) => Ok(l),
        Value::Oa { .. } => Err(at(node, Error::Precondition("expected a large set; wrap the array in expand".into()))),
    }
}

fn check_large_set(l: &LargeSet, t: usize) -> Result<()> {
    let report = verify_large_set(l, t)?;
    if !report.passed() {
        return Err(Error::Verification(describe_large_set_failure(&report)));
    }
    Ok(())
}

fn run(node: &Node) -> Result<Value> {
    let result = match node {
        Node::Leaf(l) => run_leaf(l),
        Node::Expand(inner) => match run(inner)? {
            Value::Loa(_) => Err(Error::Precondition("input is already a large set".into())),
            Value::Oa { array, projection } => (|| {
                let projection = match projection {
                    Some(p) => p,
                    None => find_resolvable_projection(&array)?
                        .ok_or_else(|| Error::Precondition("no resolvable projection exists".into()))?,
                };
                let l = expand_shift(&array, &projection)?;
                check_large_set(&l, array.strength())?;
                Ok(Value::Loa(l))
            })(),
        },
        Node::Project(inner, columns) => match run(inner)? {
            Value::Loa(l) => permute_columns(&l, columns).map(Value::Loa),
            Value::Oa { array, projection } => project_columns(&array, columns).map(|array| {
                let projection = projection.and_then(|p| {
                    let cols: Option<Vec<usize>> =
                        p.columns.iter().map(|c| columns.iter().position(|x| x == c)).collect();
                    cols.map(|columns| ResolvableProjection { columns, level_product: p.level_product })
                });
                Value::Oa { array, projection }
            }),
        },
        Node::Juxtapose(a, b) => {
            let la = as_large_set(run(a)?, a)?;
            let lb = as_large_set(run(b)?, b)?;
            juxtapose(&la, &lb).map(Value::Loa)
        }
        Node::Kronecker(a, b) => {
            let la = as_large_set(run(a)?, a)?;
            let lb = as_large_set(run(b)?, b)?;
            kronecker(&la, &lb).map(|array| Value::Oa { array, projection: None })
        }
    };
    result.map_err(|e| at(node, e))
}

/// Executes a plan tree without budget or claim checks.
pub fn execute_node(node: &Node) -> Result<Value> {
    run(node)
}

/// Runs `plan`, then checks run count, profile multiset and strength
/// against the claim. Plans whose estimated cost exceeds `budget` fail with
/// [`Error::BudgetExceeded`] before any work is done.
pub fn execute_plan(plan: &ConstructionPlan, budget: u64) -> Result<Artifact> {
    let cost = plan_cost(plan)?;
    if cost > BigUint::from(budget) {
        return Err(Error::BudgetExceeded(format!("{} needs about {cost} operations, budget is {budget}", plan.label)));
    }
    let claim = &plan.claim;
    let mismatch = |what: String| at(&plan.root, Error::Verification(format!("claim {claim} not met: {what}")));
    match run(&plan.root)? {
        Value::Oa { array, .. } => {
            if claim.large_set {
                return Err(mismatch("result is a single array".into()));
            }
            check_shape(claim, BigUint::from(array.runs()), array.profile()).map_err(mismatch)?;
            let array = if array.strength() == claim.strength {
                array
            } else {
                if claim.strength > array.k() {
                    return Err(mismatch(format!("strength {} exceeds {} columns", claim.strength, array.k())));
                }
                let report = verify_strength(&array, claim.strength)?;
                if let Some(f) = report.failures.first() {
                    return Err(mismatch(format!("strength {}: {f}", claim.strength)));
                }
                array.with_strength(claim.strength)?
            };
            Ok(Artifact::Oa(array))
        }
        Value::Loa(l) => {
            if !claim.large_set {
                return Err(mismatch("result is a large set".into()));
            }
            check_shape(claim, BigUint::from(l.runs()), l.profile()).map_err(mismatch)?;
            if l.strength() != claim.strength {
                check_large_set(&l, claim.strength).map_err(|e| mismatch(e.to_string()))?;
            }
            Ok(Artifact::Loa(l))
        }
    }
}

fn check_shape(claim: &Claim, runs: BigUint, profile: &LevelProfile) -> std::result::Result<(), String> {
    if runs != claim.runs {
        return Err(format!("{runs} runs"));
    }
    if profile.signature() != claim.profile.signature() {
        return Err(format!("profile {}", profile.notation()));
    }
    Ok(())
}

/// Theorem parameters, e.g. `v=4,k=5`.
pub type Params = BTreeMap<String, u64>;

pub fn parse_params(text: &str) -> Result<Params> {
    let mut out = Params::new();
    for field in text.split(',').map(str::trim).filter(|f| !f.is_empty()) {
        let (k, v) = field
            .split_once('=')
            .ok_or_else(|| Error::Precondition(format!("parameter `{field}` is not of the form key=value")))?;
        let value = v
            .trim()
            .parse()
            .map_err(|_| Error::Precondition(format!("parameter `{k}` has non-integer value `{v}`")))?;
        if out.insert(k.trim().to_string(), value).is_some() {
            return Err(Error::Precondition(format!("parameter `{k}` given twice")));
        }
    }
    Ok(out)
}

/// Recipe ids with their parameter keys and constraints.
pub const THEOREMS: &[(&str, &str, &str)] = &[
    ("v1+v3-2", "v,k", "v >= 4, v != 2 mod 4, 5 <= k <= 28"),
    ("doublev3-2", "v,k", "v >= 4, v != 2 mod 4, 5 <= k <= 29"),
    ("v1+q4-3", "v,k1,q,k2", "v >= 2, k1 >= 3, q prime power >= 3, 4 <= k2 <= q^2+1"),
    ("v12n-4", "v,k1,n,k2|k2p", "v >= 2, k1 >= 3, n >= 2, n <= k2 <= 2^n-1 or n+1 <= k2p <= 2^n"),
    ("qn2n-com", "q,m,k1,n,k2|k2p", "q prime power, 2 <= m <= k1 <= (q^m-1)/(q-1), n >= 2, n <= k2 <= 2^n-1 or n+1 <= k2p <= 2^n"),
    ("qn2v32=5", "q,m,k1,v,k2,family", "q prime power, 2 <= m <= k1 <= (q^m-1)/(q-1), v >= 4, v != 2 mod 4, family=3 with 4 <= k2 <= 13 or family=4 with 4 <= k2 <= 29"),
    ("qn2q43=6", "p,k1,q,n,k2", "p, q prime powers >= 3, 4 <= k1 <= p^2+1, 2 <= n <= k2 <= (q^n-1)/(q-1)"),
    ("qn3q43=7", "p,k1,q,k2", "p, q prime powers >= 3, 4 <= k1 <= p^2+1, 3 <= k2 <= q+1"),
    ("q3323=7", "q,k1,n,k2|k2p", "q a power of 2, n >= 2, 3 <= k1 <= q+2, n <= k2 <= 2^n-1 or n+1 <= k2p <= 2^n"),
    ("t-1q43=t+3", "s,t,q,k", "s, t >= 2, q prime power >= 3, 4 <= k <= q^2+1"),
    ("qt2n2-3", "q,t,k1,n,k2|k2p", "q prime power, n >= 2, 1 <= t <= k1 <= q+1, n <= k2 <= 2^n-1 or n+1 <= k2p <= 2^n"),
    ("tt-1n2-3", "s,t,n,k1|k1p", "s, t, n >= 2, n <= k1 <= 2^n-1 or n+1 <= k1p <= 2^n"),
    ("qtp43", "p,k1,q,t,k2", "p, q prime powers >= 3, 4 <= k1 <= p^2+1, 2 <= t <= k2 <= q+1"),
];

struct Args<'a> {
    id: &'a str,
    constraints: &'a str,
    params: &'a Params,
}

impl Args<'_> {
    fn fail(&self, msg: impl fmt::Display) -> Error {
        Error::Precondition(format!("{}: {msg}; constraints: {}", self.id, self.constraints))
    }

    fn get(&self, key: &str) -> Result<u64> {
        self.params.get(key).copied().ok_or_else(|| self.fail(format!("missing parameter `{key}`")))
    }

    fn need(&self, ok: bool, what: &str) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(self.fail(format!("{what} violated")))
        }
    }

    /// Exactly one of the two alternative keys; `true` when `primed` is given.
    fn either(&self, plain: &str, primed: &str) -> Result<(u64, bool)> {
        match (self.params.get(plain), self.params.get(primed)) {
            (Some(&v), None) => Ok((v, false)),
            (None, Some(&v)) => Ok((v, true)),
            _ => Err(self.fail(format!("give exactly one of `{plain}` and `{primed}`"))),
        }
    }

    fn prime_power(&self, name: &str, q: u64, min: u64) -> Result<()> {
        self.need(q >= min && prime_power(q).is_some(), &format!("{name} prime power >= {min}"))
    }

    fn dm_order(&self, v: u64) -> Result<()> {
        self.need(v >= 4 && v % 4 != 2, "v >= 4, v != 2 mod 4")
    }
}

fn cosets(v: u64, k: usize) -> Result<Node> {
    Ok(Node::leaf(Leaf::Cosets(uniform(v, k)?)))
}

/// Columns `{0, 1, 6}` plus the first `k - 3` others, ascending.
pub fn chai1_columns(k: usize) -> Vec<usize> {
    let mut cols = vec![0, 1, 6];
    cols.extend((0..13).filter(|c| ![0, 1, 6].contains(c)).take(k.saturating_sub(3)));
    cols.sort_unstable();
    cols
}

/// LOA(v^3, k, v, 2): the 13-column development cut to `k` columns that
/// keep the projection `{0, 1, 6}`.
pub fn chai1_loa(v: u64, k: usize) -> Node {
    let cols = chai1_columns(k);
    let leaf = Node::leaf(Leaf::Chai1 { v });
    if k == 13 {
        leaf.expand()
    } else {
        leaf.project(cols).expand()
    }
}

/// LOA(v^4, k, v, 2) from the first `k` passing columns of the 29-column
/// development.
pub fn chai2_loa(v: u64, k: usize) -> Node {
    Node::leaf(Leaf::Chai2 { v }).project((0..k).collect()).expand()
}

fn lcm_pow(a: u64, x: u64, b: u64, y: u64) -> BigUint {
    pow(a, x as usize).lcm(&pow(b, y as usize))
}

fn groups(parts: &[(u64, u64)]) -> Result<LevelProfile> {
    let g: Vec<(u32, usize)> = parts.iter().filter(|p| p.1 > 0).map(|&(s, k)| (s as u32, k as usize)).collect();
    LevelProfile::from_groups(&g)
}

/// Builds the plan for a recipe id. Parameters outside the stated
/// constraints are rejected with the constraints echoed.
pub fn plan_theorem(id: &str, params: &Params) -> Result<ConstructionPlan> {
    let &(id, keys, constraints) = THEOREMS
        .iter()
        .find(|t| t.0 == id)
        .ok_or_else(|| Error::Unknown { kind: "theorem", name: id.to_string() })?;
    let a = Args { id, constraints, params };
    let allowed: Vec<&str> = keys.split([',', '|']).collect();
    if let Some(bad) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(a.fail(format!("unknown parameter `{bad}` (expected {keys})")));
    }
    let (root, runs, profile, strength) = match id {
        "v1+v3-2" => {
            let (v, k) = (a.get("v")?, a.get("k")?);
            a.dm_order(v)?;
            a.need((5..=28).contains(&k), "5 <= k <= 28")?;
            let k_ = k as usize;
            let (l2, runs, cols) = if k <= 13 {
                (chai1_loa(v, k_), pow(v, k_ + 1), 2 * k - 2)
            } else {
                (chai2_loa(v, k_ + 1), pow(v, k_ + 2), 2 * k - 1)
            };
            (cosets(v, k_ - 2)?.kronecker(l2), runs, groups(&[(v, cols)])?, 4)
        }
        "doublev3-2" => {
            let (v, k) = (a.get("v")?, a.get("k")?);
            a.dm_order(v)?;
            a.need((5..=29).contains(&k), "5 <= k <= 29")?;
            let k_ = k as usize;
            let (l, runs) =
                if k <= 13 { (chai1_loa(v, k_), pow(v, k_ + 3)) } else { (chai2_loa(v, k_), pow(v, k_ + 4)) };
            (l.clone().kronecker(l), runs, groups(&[(v, 2 * k)])?, 5)
        }
        "v1+q4-3" => {
            let (v, k1, q, k2) = (a.get("v")?, a.get("k1")?, a.get("q")?, a.get("k2")?);
            a.need(v >= 2, "v >= 2")?;
            a.need(k1 >= 3, "k1 >= 3")?;
            a.prime_power("q", q, 3)?;
            a.need((4..=q * q + 1).contains(&k2), "4 <= k2 <= q^2+1")?;
            let h = lcm_pow(v, k1 - 3, q, k2 - 4);
            let root = cosets(v, k1 as usize - 2)?.kronecker(Node::leaf(Leaf::Q4 { q, k: k2 as usize }).expand());
            (root, BigUint::from(v) * pow(q, 4) * h, groups(&[(v, k1 - 2), (q, k2)])?, 5)
        }
        "v12n-4" => {
            let (v, k1, n) = (a.get("v")?, a.get("k1")?, a.get("n")?);
            let (k2, primed) = a.either("k2", "k2p")?;
            a.need(v >= 2, "v >= 2")?;
            a.need(k1 >= 3, "k1 >= 3")?;
            a.need((2..=10).contains(&n), "2 <= n <= 10")?;
            let l1 = cosets(v, k1 as usize - 2)?;
            let (l2, runs, t) = if primed {
                a.need(n < k2 && k2 <= 1 << n, "n+1 <= k2p <= 2^n")?;
                let h = lcm_pow(v, k1 - 3, 2, k2 - n - 1);
                (Leaf::Sylvester3 { n: n as u32, k: k2 as usize }, pow(2, n as usize + 1) * v * h, 5)
            } else {
                a.need(n <= k2 && k2 < 1 << n, "n <= k2 <= 2^n-1")?;
                let h = lcm_pow(v, k1 - 3, 2, k2 - n);
                (Leaf::Sylvester2 { n: n as u32, k: k2 as usize }, pow(2, n as usize) * v * h, 4)
            };
            (l1.kronecker(Node::leaf(l2).expand()), runs, groups(&[(v, k1 - 2), (2, k2)])?, t)
        }
        "qn2n-com" => {
            let (q, m, k1, n) = (a.get("q")?, a.get("m")?, a.get("k1")?, a.get("n")?);
            let (k2, primed) = a.either("k2", "k2p")?;
            a.prime_power("q", q, 2)?;
            a.need(m >= 2 && m <= k1 && k1 <= (q.pow(m as u32) - 1) / (q - 1), "2 <= m <= k1 <= (q^m-1)/(q-1)")?;
            a.need((2..=10).contains(&n), "2 <= n <= 10")?;
            let l1 = Node::leaf(Leaf::Projective { q, n: m as usize, k: k1 as usize }).expand();
            let (l2, runs, t) = if primed {
                a.need(n < k2 && k2 <= 1 << n, "n+1 <= k2p <= 2^n")?;
                let h = lcm_pow(q, k1 - m, 2, k2 - n - 1);
                (Leaf::Sylvester3 { n: n as u32, k: k2 as usize }, pow(2, n as usize + 1) * pow(q, m as usize) * h, 6)
            } else {
                a.need(n <= k2 && k2 < 1 << n, "n <= k2 <= 2^n-1")?;
                let h = lcm_pow(q, k1 - m, 2, k2 - n);
                (Leaf::Sylvester2 { n: n as u32, k: k2 as usize }, pow(2, n as usize) * pow(q, m as usize) * h, 5)
            };
            (l1.kronecker(Node::leaf(l2).expand()), runs, groups(&[(q, k1), (2, k2)])?, t)
        }
        "qn2v32=5" => {
            let (q, m, k1, v, k2, family) =
                (a.get("q")?, a.get("m")?, a.get("k1")?, a.get("v")?, a.get("k2")?, a.get("family")?);
            a.prime_power("q", q, 2)?;
            a.need(m >= 2 && m <= k1 && k1 <= (q.pow(m as u32) - 1) / (q - 1), "2 <= m <= k1 <= (q^m-1)/(q-1)")?;
            a.dm_order(v)?;
            let l1 = Node::leaf(Leaf::Projective { q, n: m as usize, k: k1 as usize }).expand();
            let (l2, runs) = match family {
                3 => {
                    a.need((4..=13).contains(&k2), "4 <= k2 <= 13")?;
                    (chai1_loa(v, k2 as usize), pow(q, m as usize) * pow(v, 3) * lcm_pow(q, k1 - m, v, k2 - 3))
                }
                4 => {
                    a.need((4..=29).contains(&k2), "4 <= k2 <= 29")?;
                    (chai2_loa(v, k2 as usize), pow(q, m as usize) * pow(v, 4) * lcm_pow(q, k1 - m, v, k2 - 4))
                }
                _ => return Err(a.fail("family must be 3 or 4")),
            };
            (l1.kronecker(l2), runs, groups(&[(q, k1), (v, k2)])?, 5)
        }
        "qn2q43=6" => {
            let (p, k1, q, n, k2) = (a.get("p")?, a.get("k1")?, a.get("q")?, a.get("n")?, a.get("k2")?);
            a.prime_power("p", p, 3)?;
            a.prime_power("q", q, 3)?;
            a.need((4..=p * p + 1).contains(&k1), "4 <= k1 <= p^2+1")?;
            a.need(n >= 2 && n <= k2 && k2 <= (q.pow(n as u32) - 1) / (q - 1), "2 <= n <= k2 <= (q^n-1)/(q-1)")?;
            let l1 = Node::leaf(Leaf::Q4 { q: p, k: k1 as usize }).expand();
            let l2 = Node::leaf(Leaf::Projective { q, n: n as usize, k: k2 as usize }).expand();
            let runs = pow(p, 4) * pow(q, n as usize) * lcm_pow(p, k1 - 4, q, k2 - n);
            (l1.kronecker(l2), runs, groups(&[(p, k1), (q, k2)])?, 6)
        }
        "qn3q43=7" => {
            let (p, k1, q, k2) = (a.get("p")?, a.get("k1")?, a.get("q")?, a.get("k2")?);
            a.prime_power("p", p, 3)?;
            a.prime_power("q", q, 3)?;
            a.need((4..=p * p + 1).contains(&k1), "4 <= k1 <= p^2+1")?;
            a.need((3..=q + 1).contains(&k2), "3 <= k2 <= q+1")?;
            let l1 = Node::leaf(Leaf::Q4 { q: p, k: k1 as usize }).expand();
            let l2 = Node::leaf(Leaf::Bush { q, t: 3, k: k2 as usize }).expand();
            let runs = pow(p, 4) * pow(q, 3) * lcm_pow(p, k1 - 4, q, k2 - 3);
            (l1.kronecker(l2), runs, groups(&[(p, k1), (q, k2)])?, 7)
        }
        "q3323=7" => {
            let (q, k1, n) = (a.get("q")?, a.get("k1")?, a.get("n")?);
            let (k2, primed) = a.either("k2", "k2p")?;
            a.need(q >= 2 && q.is_power_of_two(), "q a power of 2")?;
            a.need((3..=q + 2).contains(&k1), "3 <= k1 <= q+2")?;
            a.need((2..=10).contains(&n), "2 <= n <= 10")?;
            let l1 = Node::leaf(Leaf::Bush { q, t: 3, k: k1 as usize }).expand();
            let (l2, runs, t) = if primed {
                a.need(n < k2 && k2 <= 1 << n, "n+1 <= k2p <= 2^n")?;
                let h = lcm_pow(q, k1 - 3, 2, k2 - n - 1);
                (Leaf::Sylvester3 { n: n as u32, k: k2 as usize }, pow(2, n as usize + 1) * pow(q, 3) * h, 7)
            } else {
                a.need(n <= k2 && k2 < 1 << n, "n <= k2 <= 2^n-1")?;
                let h = lcm_pow(q, k1 - 3, 2, k2 - n);
                (Leaf::Sylvester2 { n: n as u32, k: k2 as usize }, pow(2, n as usize) * pow(q, 3) * h, 6)
            };
            (l1.kronecker(Node::leaf(l2).expand()), runs, groups(&[(q, k1), (2, k2)])?, t)
        }
        "t-1q43=t+3" => {
            let (s, t, q, k) = (a.get("s")?, a.get("t")?, a.get("q")?, a.get("k")?);
            a.need(s >= 2 && t >= 2, "s, t >= 2")?;
            a.prime_power("q", q, 3)?;
            a.need((4..=q * q + 1).contains(&k), "4 <= k <= q^2+1")?;
            let l1 = Node::leaf(Leaf::ZeroSum { s: s as u32, t: t as usize - 1 }).expand();
            let l2 = Node::leaf(Leaf::Q4 { q, k: k as usize }).expand();
            let runs = pow(q, 4) * pow(s, t as usize - 1) * lcm_pow(s, 1, q, k - 4);
            (l1.kronecker(l2), runs, groups(&[(q, k), (s, t)])?, t as usize + 3)
        }
        "qt2n2-3" => {
            let (q, t, k1, n) = (a.get("q")?, a.get("t")?, a.get("k1")?, a.get("n")?);
            let (k2, primed) = a.either("k2", "k2p")?;
            a.prime_power("q", q, 2)?;
            a.need(t >= 1 && t <= k1 && k1 <= q + 1, "1 <= t <= k1 <= q+1")?;
            a.need((2..=10).contains(&n), "2 <= n <= 10")?;
            let l1 = if t == 1 {
                cosets(q, k1 as usize)?
            } else {
                Node::leaf(Leaf::Bush { q, t: t as usize, k: k1 as usize }).expand()
            };
            let (l2, runs, strength) = if primed {
                a.need(n < k2 && k2 <= 1 << n, "n+1 <= k2p <= 2^n")?;
                let h = lcm_pow(q, k1 - t, 2, k2 - n - 1);
                (Leaf::Sylvester3 { n: n as u32, k: k2 as usize }, pow(2, n as usize + 1) * pow(q, t as usize) * h, t + 4)
            } else {
                a.need(n <= k2 && k2 < 1 << n, "n <= k2 <= 2^n-1")?;
                let h = lcm_pow(q, k1 - t, 2, k2 - n);
                (Leaf::Sylvester2 { n: n as u32, k: k2 as usize }, pow(2, n as usize) * pow(q, t as usize) * h, t + 3)
            };
            (l1.kronecker(Node::leaf(l2).expand()), runs, groups(&[(q, k1), (2, k2)])?, strength as usize)
        }
        "tt-1n2-3" => {
            let (s, t, n) = (a.get("s")?, a.get("t")?, a.get("n")?);
            let (k1, primed) = a.either("k1", "k1p")?;
            a.need(s >= 2 && t >= 2 && n >= 2, "s, t, n >= 2")?;
            a.need(n <= 10, "n <= 10")?;
            let l1 = Node::leaf(Leaf::ZeroSum { s: s as u32, t: t as usize - 1 }).expand();
            let (l2, runs, strength) = if primed {
                a.need(n < k1 && k1 <= 1 << n, "n+1 <= k1p <= 2^n")?;
                let h = lcm_pow(s, 1, 2, k1 - n - 1);
                (Leaf::Sylvester3 { n: n as u32, k: k1 as usize }, pow(2, n as usize + 1) * pow(s, t as usize - 1) * h, t + 3)
            } else {
                a.need(n <= k1 && k1 < 1 << n, "n <= k1 <= 2^n-1")?;
                let h = lcm_pow(s, 1, 2, k1 - n);
                (Leaf::Sylvester2 { n: n as u32, k: k1 as usize }, pow(2, n as usize) * pow(s, t as usize - 1) * h, t + 2)
            };
            (l1.kronecker(Node::leaf(l2).expand()), runs, groups(&[(2, k1), (s, t)])?, strength as usize)
        }
        "qtp43" => {
            let (p, k1, q, t, k2) = (a.get("p")?, a.get("k1")?, a.get("q")?, a.get("t")?, a.get("k2")?);
            a.prime_power("p", p, 3)?;
            a.prime_power("q", q, 3)?;
            a.need((4..=p * p + 1).contains(&k1), "4 <= k1 <= p^2+1")?;
            a.need(t >= 2 && t <= k2 && k2 <= q + 1, "2 <= t <= k2 <= q+1")?;
            let l1 = Node::leaf(Leaf::Q4 { q: p, k: k1 as usize }).expand();
            let l2 = Node::leaf(Leaf::Bush { q, t: t as usize, k: k2 as usize }).expand();
            let runs = pow(p, 4) * pow(q, t as usize) * lcm_pow(p, k1 - 4, q, k2 - t);
            (l1.kronecker(l2), runs, groups(&[(p, k1), (q, k2)])?, t as usize + 4)
        }
        _ => unreachable!("id taken from THEOREMS"),
    };
    let label = format!(
        "{id}({})",
        params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
    );
    Ok(ConstructionPlan { label, root, claim: Claim::oa(runs, profile, strength) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(text: &str) -> Params {
        parse_params(text).unwrap()
    }

    #[test]
    fn degenerate_plan() {
        let profile = LevelProfile::uniform(2, 3).unwrap();
        let plan = ConstructionPlan {
            label: "ff".into(),
            root: Node::leaf(Leaf::FullFactorial(profile.clone())),
            claim: Claim::oa(BigUint::from(8u32), profile, 3),
        };
        assert!(matches!(execute_plan(&plan, DEFAULT_BUDGET).unwrap(), Artifact::Oa(_)));
    }

    #[test]
    fn claims_follow_the_formulas() {
        let p = plan_theorem("qt2n2-3", &params("q=3,t=2,k1=3,n=2,k2=3")).unwrap();
        assert_eq!(p.claim.runs, BigUint::from(4u32 * 9 * 6));
        assert_eq!(p.claim.strength, 5);
        let p = plan_theorem("v1+q4-3", &params("v=2,k1=3,q=3,k2=4")).unwrap();
        assert_eq!(p.claim.runs, BigUint::from(162u32));
        let p = plan_theorem("doublev3-2", &params("v=4,k=5")).unwrap();
        assert_eq!(p.claim.runs, BigUint::from(65536u32));
        assert_eq!(p.claim.profile.k(), 10);
    }

    #[test]
    fn small_recipes_execute() {
        for (id, text) in [
            ("qt2n2-3", "q=3,t=2,k1=3,n=2,k2=3"),
            ("v1+q4-3", "v=2,k1=3,q=3,k2=4"),
            ("tt-1n2-3", "s=2,t=2,n=2,k1=3"),
            ("tt-1n2-3", "s=2,t=2,n=2,k1p=4"),
            ("v12n-4", "v=2,k1=4,n=2,k2=3"),
            ("qn2n-com", "q=2,m=2,k1=3,n=2,k2p=3"),
        ] {
            let plan = plan_theorem(id, &params(text)).unwrap();
            execute_plan(&plan, DEFAULT_BUDGET).unwrap_or_else(|e| panic!("{plan}: {e}"));
        }
    }

    #[test]
    fn constraints_are_echoed() {
        let e = plan_theorem("doublev3-2", &params("v=6,k=5")).unwrap_err().to_string();
        assert!(e.contains("constraints"), "{e}");
        assert!(plan_theorem("doublev3-2", &params("v=4,k=30")).is_err());
        assert!(plan_theorem("v12n-4", &params("v=2,k1=4,n=2,k2=3,k2p=3")).is_err());
        assert!(plan_theorem("nope", &params("")).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let plan = plan_theorem("doublev3-2", &params("v=4,k=5")).unwrap();
        assert!(matches!(execute_plan(&plan, 1000).unwrap_err(), Error::BudgetExceeded(_)));
    }
}

//! Wave systems: dataflow nets of bounded channels and looping workers.
//!
//! A [`NetSpec`] names places (channels with a capacity) and transitions (an
//! [`OpKind`] reading an ordered list of input places and writing the result to
//! every output place). Sources feed input streams into places and sinks drain
//! output streams from places. The `k`-th values of all streams form wave `k`.
//!
//! Only marked graphs are accepted: every place has exactly one writer and one
//! reader, and the transition graph is acyclic. [`validate`] reports every
//! violation; [`run`] executes a valid net with one thread per transition,
//! source and sink, and [`oracle_eval`] computes the same waves sequentially.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::thread;

use thiserror::Error;

use crate::sync::BoundedChannel;

pub const DEFAULT_CAPACITY: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpKind {
    Add,
    Sub,
    Mul,
    Sin,
    Exp,
    Id,
}

impl OpKind {
    pub const ALL: [OpKind; 6] = [
        OpKind::Add,
        OpKind::Sub,
        OpKind::Mul,
        OpKind::Sin,
        OpKind::Exp,
        OpKind::Id,
    ];

    pub fn arity(self) -> usize {
        match self {
            OpKind::Add | OpKind::Sub | OpKind::Mul => 2,
            OpKind::Sin | OpKind::Exp | OpKind::Id => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OpKind::Add => "add",
            OpKind::Sub => "sub",
            OpKind::Mul => "mul",
            OpKind::Sin => "sin",
            OpKind::Exp => "exp",
            OpKind::Id => "id",
        }
    }

    /// Applies the op to `args`, which must hold exactly `arity()` values in
    /// declared input order.
    pub fn apply(self, args: &[f64]) -> f64 {
        debug_assert_eq!(args.len(), self.arity());
        match self {
            OpKind::Add => args[0] + args[1],
            OpKind::Sub => args[0] - args[1],
            OpKind::Mul => args[0] * args[1],
            OpKind::Sin => args[0].sin(),
            OpKind::Exp => args[0].exp(),
            OpKind::Id => args[0],
        }
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown op `{0}`")]
pub struct UnknownOp(pub String);

impl FromStr for OpKind {
    type Err = UnknownOp;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        OpKind::ALL
            .into_iter()
            .find(|op| op.name() == s)
            .ok_or_else(|| UnknownOp(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaceSpec {
    pub id: String,
    pub capacity: usize,
}

impl PlaceSpec {
    pub fn new(id: impl Into<String>, capacity: usize) -> Self {
        Self {
            id: id.into(),
            capacity,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionSpec {
    pub name: String,
    pub op: OpKind,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

impl TransitionSpec {
    pub fn new(name: impl Into<String>, op: OpKind, inputs: &[&str], outputs: &[&str]) -> Self {
        Self {
            name: name.into(),
            op,
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            outputs: outputs.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// A wave-system net.
///
/// Equality is structural: places compare as a set (declaration order is
/// irrelevant), transitions compare in declaration order.
#[derive(Debug, Clone, Default)]
pub struct NetSpec {
    pub places: Vec<PlaceSpec>,
    pub transitions: Vec<TransitionSpec>,
    /// Input stream name → places it feeds, in write order.
    pub sources: BTreeMap<String, Vec<String>>,
    /// Output stream name → the place it drains.
    pub sinks: BTreeMap<String, String>,
}

impl PartialEq for NetSpec {
    fn eq(&self, other: &Self) -> bool {
        fn sorted(places: &[PlaceSpec]) -> Vec<&PlaceSpec> {
            let mut v: Vec<_> = places.iter().collect();
            v.sort_by(|a, b| (&a.id, a.capacity).cmp(&(&b.id, b.capacity)));
            v
        }
        sorted(&self.places) == sorted(&other.places)
            && self.transitions == other.transitions
            && self.sources == other.sources
            && self.sinks == other.sinks
    }
}

impl NetSpec {
    pub fn place(&self, id: &str) -> Option<&PlaceSpec> {
        self.places.iter().find(|p| p.id == id)
    }

    /// Copy of the net with every place capacity set to `capacity`.
    pub fn with_uniform_capacity(&self, capacity: usize) -> NetSpec {
        let mut net = self.clone();
        for place in &mut net.places {
            place.capacity = capacity;
        }
        net
    }
}

/// One structural problem found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetDiagnostic {
    #[error("place `{0}` is declared more than once")]
    DuplicatePlace(String),
    #[error("transition `{0}` is declared more than once")]
    DuplicateTransition(String),
    #[error("place `{0}` has capacity 0")]
    ZeroCapacity(String),
    #[error("{owner} refers to unknown place `{place}`")]
    UnknownPlace { owner: String, place: String },
    #[error("transition `{transition}` applies `{op}` (arity {expected}) to {found} inputs")]
    ArityMismatch {
        transition: String,
        op: OpKind,
        expected: usize,
        found: usize,
    },
    #[error("{owner} has no output places")]
    NoOutputs { owner: String },
    #[error("place `{place}` has {count} writers, expected exactly one")]
    WriterCount { place: String, count: usize },
    #[error("place `{place}` has {count} readers, expected exactly one")]
    ReaderCount { place: String, count: usize },
    #[error("transitions {} form a cycle", .0.join(", "))]
    Cycle(Vec<String>),
}

/// Reports every structural violation in `net`. An empty list means valid.
pub fn validate(net: &NetSpec) -> Vec<NetDiagnostic> {
    let mut diags = Vec::new();

    let mut seen = BTreeSet::new();
    for place in &net.places {
        if !seen.insert(place.id.as_str()) {
            diags.push(NetDiagnostic::DuplicatePlace(place.id.clone()));
        }
        if place.capacity == 0 {
            diags.push(NetDiagnostic::ZeroCapacity(place.id.clone()));
        }
    }
    let known = seen;

    let mut names = BTreeSet::new();
    for t in &net.transitions {
        if !names.insert(t.name.as_str()) {
            diags.push(NetDiagnostic::DuplicateTransition(t.name.clone()));
        }
        if t.inputs.len() != t.op.arity() {
            diags.push(NetDiagnostic::ArityMismatch {
                transition: t.name.clone(),
                op: t.op,
                expected: t.op.arity(),
                found: t.inputs.len(),
            });
        }
        if t.outputs.is_empty() {
            diags.push(NetDiagnostic::NoOutputs {
                owner: format!("transition `{}`", t.name),
            });
        }
    }
    for (stream, places) in &net.sources {
        if places.is_empty() {
            diags.push(NetDiagnostic::NoOutputs {
                owner: format!("source `{stream}`"),
            });
        }
    }

    // (owner, place, writes?) for every arc touching a place
    let mut arcs: Vec<(String, &str, bool)> = Vec::new();
    for t in &net.transitions {
        let owner = format!("transition `{}`", t.name);
        arcs.extend(t.inputs.iter().map(|p| (owner.clone(), p.as_str(), false)));
        arcs.extend(t.outputs.iter().map(|p| (owner.clone(), p.as_str(), true)));
    }
    for (stream, places) in &net.sources {
        let owner = format!("source `{stream}`");
        arcs.extend(places.iter().map(|p| (owner.clone(), p.as_str(), true)));
    }
    for (stream, p) in &net.sinks {
        arcs.push((format!("sink `{stream}`"), p.as_str(), false));
    }
    let mut writers: HashMap<&str, usize> = HashMap::new();
    let mut readers: HashMap<&str, usize> = HashMap::new();
    for (owner, place, writes) in arcs {
        if !known.contains(place) {
            diags.push(NetDiagnostic::UnknownPlace {
                owner,
                place: place.to_string(),
            });
        } else if writes {
            *writers.entry(place).or_default() += 1;
        } else {
            *readers.entry(place).or_default() += 1;
        }
    }

    for id in &known {
        let w = writers.get(id).copied().unwrap_or(0);
        if w != 1 {
            diags.push(NetDiagnostic::WriterCount {
                place: id.to_string(),
                count: w,
            });
        }
        let r = readers.get(id).copied().unwrap_or(0);
        if r != 1 {
            diags.push(NetDiagnostic::ReaderCount {
                place: id.to_string(),
                count: r,
            });
        }
    }

    if let Err(cycle) = transition_order(net) {
        diags.push(NetDiagnostic::Cycle(cycle));
    }
    diags
}

/// Topological order of transition indices (Kahn's algorithm, ties broken by
/// declaration order), or the names of the transitions left on cycles.
fn transition_order(net: &NetSpec) -> Result<Vec<usize>, Vec<String>> {
    let mut writer_of: HashMap<&str, Vec<usize>> = HashMap::new();
    for (i, t) in net.transitions.iter().enumerate() {
        for p in &t.outputs {
            writer_of.entry(p.as_str()).or_default().push(i);
        }
    }
    let n = net.transitions.len();
    let mut successors = vec![Vec::new(); n];
    let mut indegree = vec![0usize; n];
    for (j, t) in net.transitions.iter().enumerate() {
        for p in &t.inputs {
            for &i in writer_of.get(p.as_str()).map(Vec::as_slice).unwrap_or(&[]) {
                successors[i].push(j);
                indegree[j] += 1;
            }
        }
    }
    let mut ready: VecDeque<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(i) = ready.pop_front() {
        order.push(i);
        for &j in &successors[i] {
            indegree[j] -= 1;
            if indegree[j] == 0 {
                ready.push_back(j);
            }
        }
    }
    if order.len() == n {
        Ok(order)
    } else {
        Err((0..n)
            .filter(|&i| indegree[i] > 0)
            .map(|i| net.transitions[i].name.clone())
            .collect())
    }
}

/// The eleven-place wave system computing `x = u + sin(v·v)` and
/// `y = exp(sin(u - v))`: places `c0..c10`, six compute transitions.
pub fn fig1_net() -> NetSpec {
    NetSpec {
        places: (0..11)
            .map(|i| PlaceSpec::new(format!("c{i}"), DEFAULT_CAPACITY))
            .collect(),
        transitions: vec![
            TransitionSpec::new("mult", OpKind::Mul, &["c0", "c1"], &["c4"]),
            TransitionSpec::new("minus", OpKind::Sub, &["c2", "c3"], &["c5"]),
            TransitionSpec::new("sinus", OpKind::Sin, &["c4"], &["c7"]),
            TransitionSpec::new("sinus2", OpKind::Sin, &["c5"], &["c8"]),
            TransitionSpec::new("plus", OpKind::Add, &["c6", "c7"], &["c9"]),
            TransitionSpec::new("expo", OpKind::Exp, &["c8"], &["c10"]),
        ],
        sources: BTreeMap::from([
            ("u".to_string(), vec!["c2".to_string(), "c6".to_string()]),
            (
                "v".to_string(),
                vec!["c0".to_string(), "c1".to_string(), "c3".to_string()],
            ),
        ]),
        sinks: BTreeMap::from([
            ("x".to_string(), "c9".to_string()),
            ("y".to_string(), "c10".to_string()),
        ]),
    }
}

/// The default fig1 input streams: `u_i = i²`, `v_i = i + 1`.
pub fn fig1_inputs(waves: usize) -> BTreeMap<String, Vec<f64>> {
    let u = (0..waves).map(|i| (i * i) as f64).collect();
    let v = (0..waves).map(|i| (i + 1) as f64).collect();
    BTreeMap::from([("u".to_string(), u), ("v".to_string(), v)])
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("a pipeline needs at least one stage")]
    NoStages,
    #[error("stage {index} is `{op}`, which is not unary")]
    NotUnary { index: usize, op: OpKind },
}

/// Linear net `x → p1 → t1 → p2 → ... → t_k → p_(k+1) → y`.
pub fn pipeline_net(stages: &[OpKind]) -> Result<NetSpec, PipelineError> {
    if stages.is_empty() {
        return Err(PipelineError::NoStages);
    }
    if let Some((index, &op)) = stages.iter().enumerate().find(|(_, op)| op.arity() != 1) {
        return Err(PipelineError::NotUnary { index, op });
    }
    let place = |i: usize| format!("p{i}");
    Ok(NetSpec {
        places: (1..=stages.len() + 1)
            .map(|i| PlaceSpec::new(place(i), DEFAULT_CAPACITY))
            .collect(),
        transitions: stages
            .iter()
            .enumerate()
            .map(|(i, &op)| TransitionSpec {
                name: format!("t{}", i + 1),
                op,
                inputs: vec![place(i + 1)],
                outputs: vec![place(i + 2)],
            })
            .collect(),
        sources: BTreeMap::from([("x".to_string(), vec![place(1)])]),
        sinks: BTreeMap::from([("y".to_string(), place(stages.len() + 1))]),
    })
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RunError {
    #[error("invalid net: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<NetDiagnostic>),
    #[error("no input stream for source `{0}`")]
    MissingStream(String),
    #[error("source `{stream}` has {len} values, {waves} waves requested")]
    ShortStream {
        stream: String,
        len: usize,
        waves: usize,
    },
}

/// Sink outputs of a concurrent run next to the sequential oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub waves: usize,
    pub outputs: BTreeMap<String, Vec<f64>>,
    pub oracle: BTreeMap<String, Vec<f64>>,
    pub max_abs_deviation: f64,
}

impl RunReport {
    /// True when every output value has the same bit pattern as its oracle.
    pub fn bitwise_equal(&self) -> bool {
        self.outputs.len() == self.oracle.len()
            && self.outputs.iter().all(|(name, values)| {
                self.oracle.get(name).is_some_and(|expected| {
                    values.len() == expected.len()
                        && values
                            .iter()
                            .zip(expected)
                            .all(|(a, b)| a.to_bits() == b.to_bits())
                })
            })
    }
}

fn check_inputs(
    net: &NetSpec,
    inputs: &BTreeMap<String, Vec<f64>>,
    waves: usize,
) -> Result<Vec<usize>, RunError> {
    let diags = validate(net);
    if !diags.is_empty() {
        return Err(RunError::Invalid(diags));
    }
    for stream in net.sources.keys() {
        let values = inputs
            .get(stream)
            .ok_or_else(|| RunError::MissingStream(stream.clone()))?;
        if values.len() < waves {
            return Err(RunError::ShortStream {
                stream: stream.clone(),
                len: values.len(),
                waves,
            });
        }
    }
    Ok(transition_order(net).expect("validated nets are acyclic"))
}

/// Sequential ground truth: per wave, evaluates every transition once in
/// topological order.
#[allow(clippy::needless_range_loop)]
pub fn oracle_eval(
    net: &NetSpec,
    inputs: &BTreeMap<String, Vec<f64>>,
    waves: usize,
) -> Result<BTreeMap<String, Vec<f64>>, RunError> {
    let order = check_inputs(net, inputs, waves)?;
    let mut outputs: BTreeMap<String, Vec<f64>> = net
        .sinks
        .keys()
        .map(|name| (name.clone(), Vec::with_capacity(waves)))
        .collect();
    let mut value: HashMap<&str, f64> = HashMap::new();
    let mut args = Vec::with_capacity(2);
    for wave in 0..waves {
        for (stream, places) in &net.sources {
            let v = inputs[stream][wave];
            for p in places {
                value.insert(p, v);
            }
        }
        for &i in &order {
            let t = &net.transitions[i];
            args.clear();
            args.extend(t.inputs.iter().map(|p| value[p.as_str()]));
            let v = t.op.apply(&args);
            for p in &t.outputs {
                value.insert(p, v);
            }
        }
        for (name, p) in &net.sinks {
            outputs.get_mut(name).unwrap().push(value[p.as_str()]);
        }
    }
    Ok(outputs)
}

/// Runs `net` for `waves` waves with one thread per transition, per source
/// and per sink, all communicating through one [`BoundedChannel`] per place.
pub fn run(
    net: &NetSpec,
    inputs: &BTreeMap<String, Vec<f64>>,
    waves: usize,
) -> Result<RunReport, RunError> {
    check_inputs(net, inputs, waves)?;

    let channels: HashMap<&str, Arc<BoundedChannel<f64>>> = net
        .places
        .iter()
        .map(|p| {
            let ch = BoundedChannel::new(p.capacity).expect("validated capacity");
            (p.id.as_str(), Arc::new(ch))
        })
        .collect();
    let wire = |ids: &[String]| -> Vec<Arc<BoundedChannel<f64>>> {
        ids.iter()
            .map(|id| Arc::clone(&channels[id.as_str()]))
            .collect()
    };

    let outputs = thread::scope(|scope| {
        for t in &net.transitions {
            let ins = wire(&t.inputs);
            let outs = wire(&t.outputs);
            let op = t.op;
            scope.spawn(move || {
                let mut args = Vec::with_capacity(ins.len());
                for _ in 0..waves {
                    args.clear();
                    args.extend(ins.iter().map(|ch| ch.recv()));
                    let v = op.apply(&args);
                    for ch in &outs {
                        ch.send(v);
                    }
                }
            });
        }
        for (stream, places) in &net.sources {
            let outs = wire(places);
            let values = &inputs[stream][..waves];
            scope.spawn(move || {
                for &v in values {
                    for ch in &outs {
                        ch.send(v);
                    }
                }
            });
        }
        let drains: Vec<_> = net
            .sinks
            .iter()
            .map(|(name, place)| {
                let ch = Arc::clone(&channels[place.as_str()]);
                let handle = scope.spawn(move || (0..waves).map(|_| ch.recv()).collect::<Vec<_>>());
                (name.clone(), handle)
            })
            .collect();
        drains
            .into_iter()
            .map(|(name, h)| (name, h.join().expect("sink worker panicked")))
            .collect::<BTreeMap<_, _>>()
    });

    let oracle = oracle_eval(net, inputs, waves)?;
    let max_abs_deviation = outputs
        .iter()
        .flat_map(|(name, values)| values.iter().zip(&oracle[name]).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max);
    Ok(RunReport {
        waves,
        outputs,
        oracle,
        max_abs_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn passthrough() -> NetSpec {
        NetSpec {
            places: vec![PlaceSpec::new("p0", 10)],
            transitions: vec![],
            sources: BTreeMap::from([("v".into(), vec!["p0".into()])]),
            sinks: BTreeMap::from([("x".into(), "p0".into())]),
        }
    }

    #[test]
    fn op_names_round_trip() {
        for op in OpKind::ALL {
            assert_eq!(op.name().parse::<OpKind>().unwrap(), op);
        }
        assert_eq!("cos".parse::<OpKind>(), Err(UnknownOp("cos".into())));
        assert_eq!(OpKind::Sub.apply(&[2.0, 5.0]), -3.0);
    }

    #[test]
    fn fig1_shape() {
        let net = fig1_net();
        assert_eq!(net.places.len(), 11);
        assert_eq!(net.transitions.len(), 6);
        assert!(net.places.iter().all(|p| p.capacity == 10));
        assert_eq!(validate(&net), vec![]);
    }

    #[test]
    fn fig1_mutations_are_rejected() {
        let mut removed = fig1_net();
        removed.places.retain(|p| p.id != "c7");
        assert!(validate(&removed)
            .iter()
            .any(|d| matches!(d, NetDiagnostic::UnknownPlace { place, .. } if place == "c7")));

        let mut doubled = fig1_net();
        doubled.sinks.insert("z".into(), "c4".into());
        assert!(validate(&doubled).contains(&NetDiagnostic::ReaderCount {
            place: "c4".into(),
            count: 2
        }));

        let mut arity = fig1_net();
        arity.transitions[2].inputs.push("c5".into());
        let diags = validate(&arity);
        assert!(diags.contains(&NetDiagnostic::ArityMismatch {
            transition: "sinus".into(),
            op: OpKind::Sin,
            expected: 1,
            found: 2
        }));

        let mut back_edge = fig1_net();
        back_edge.places.push(PlaceSpec::new("back", 10));
        back_edge.transitions[4].outputs.push("back".into());
        back_edge.transitions[0].op = OpKind::Id;
        back_edge.transitions[0].inputs = vec!["back".into()];
        back_edge
            .sources
            .get_mut("v")
            .unwrap()
            .retain(|p| p != "c0" && p != "c1");
        let diags = validate(&back_edge);
        assert!(diags.iter().any(|d| matches!(d, NetDiagnostic::Cycle(names)
            if names.contains(&"mult".to_string()) && names.contains(&"plus".to_string()))));
    }

    #[test]
    fn duplicate_and_capacity_diagnostics() {
        let mut net = passthrough();
        net.places.push(PlaceSpec::new("p0", 0));
        let diags = validate(&net);
        assert!(diags.contains(&NetDiagnostic::DuplicatePlace("p0".into())));
        assert!(diags.contains(&NetDiagnostic::ZeroCapacity("p0".into())));
    }

    #[test]
    fn dangling_place_reports_missing_writer_and_reader() {
        let mut net = passthrough();
        net.places.push(PlaceSpec::new("lonely", 3));
        let diags = validate(&net);
        assert!(diags.contains(&NetDiagnostic::WriterCount {
            place: "lonely".into(),
            count: 0
        }));
        assert!(diags.contains(&NetDiagnostic::ReaderCount {
            place: "lonely".into(),
            count: 0
        }));
    }

    #[test]
    fn passthrough_echoes_input() {
        let inputs = BTreeMap::from([("v".to_string(), vec![1.5, -2.0, 3.25])]);
        let report = run(&passthrough(), &inputs, 3).unwrap();
        assert_eq!(report.outputs["x"], vec![1.5, -2.0, 3.25]);
        assert!(report.bitwise_equal());
        assert_eq!(report.max_abs_deviation, 0.0);
    }

    #[test]
    fn run_rejects_bad_requests() {
        let mut bad = passthrough();
        bad.sinks.clear();
        assert!(matches!(
            run(&bad, &BTreeMap::new(), 1),
            Err(RunError::Invalid(_))
        ));
        assert_eq!(
            run(&passthrough(), &BTreeMap::new(), 1),
            Err(RunError::MissingStream("v".into()))
        );
        let short = BTreeMap::from([("v".to_string(), vec![1.0])]);
        assert_eq!(
            run(&passthrough(), &short, 2),
            Err(RunError::ShortStream {
                stream: "v".into(),
                len: 1,
                waves: 2
            })
        );
    }

    #[test]
    fn fig1_first_rows() {
        let out = oracle_eval(&fig1_net(), &fig1_inputs(8), 8).unwrap();
        assert_eq!(out["x"][0], 1f64.sin());
        assert_eq!(out["y"][0], (-1f64).sin().exp());
        assert_eq!(out["y"][7], 41f64.sin().exp());
        assert!((out["x"][2] - 4.412_118_485_241_756).abs() < 1e-12);
    }

    #[test]
    fn pipeline_shapes() {
        let net = pipeline_net(&[OpKind::Sin, OpKind::Exp]).unwrap();
        // M → p1 → T1 → p2 → T2 → p3 → display
        assert_eq!(net.places.len(), 3);
        assert_eq!(net.transitions.len(), 2);
        assert_eq!(validate(&net), vec![]);
        let xs: Vec<f64> = (0..12).map(|i| f64::from(i) * 0.7 - 3.0).collect();
        let inputs = BTreeMap::from([("x".to_string(), xs.clone())]);
        let report = run(&net, &inputs, xs.len()).unwrap();
        let want: Vec<f64> = xs.iter().map(|x| x.sin().exp()).collect();
        assert_eq!(report.outputs["y"], want);

        let id = pipeline_net(&[OpKind::Id]).unwrap();
        assert_eq!(run(&id, &inputs, 12).unwrap().outputs["y"], xs);

        assert_eq!(pipeline_net(&[]), Err(PipelineError::NoStages));
        assert_eq!(
            pipeline_net(&[OpKind::Sin, OpKind::Add]),
            Err(PipelineError::NotUnary {
                index: 1,
                op: OpKind::Add
            })
        );
    }

    #[test]
    fn waves_stay_aligned_through_fanout() {
        // a and b reconverge at `sub`; misalignment would make some difference nonzero
        let net = NetSpec {
            places: ["a", "b", "a2", "b2", "b3", "d"]
                .map(|id| PlaceSpec::new(id, 1))
                .to_vec(),
            transitions: vec![
                TransitionSpec::new("ida", OpKind::Id, &["a"], &["a2"]),
                TransitionSpec::new("idb", OpKind::Id, &["b"], &["b2"]),
                TransitionSpec::new("idb2", OpKind::Id, &["b2"], &["b3"]),
                TransitionSpec::new("sub", OpKind::Sub, &["a2", "b3"], &["d"]),
            ],
            sources: BTreeMap::from([("w".into(), vec!["a".into(), "b".into()])]),
            sinks: BTreeMap::from([("d".into(), "d".into())]),
        };
        let tags: Vec<f64> = (0..500).map(f64::from).collect();
        let report = run(&net, &BTreeMap::from([("w".into(), tags)]), 500).unwrap();
        assert!(report.outputs["d"].iter().all(|&d| d == 0.0));
    }
}

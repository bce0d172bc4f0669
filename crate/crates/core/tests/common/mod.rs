#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wavesys::wavenet::{NetSpec, OpKind, PlaceSpec, TransitionSpec};

/// Random valid wave-system net with at most `max_transitions` transitions.
///
/// Transitions are appended in an order where every input place already has a
/// writer, so the result is acyclic; every place is consumed exactly once and
/// whatever is left open at the end is drained by a sink.
pub fn random_net(seed: u64, max_transitions: usize) -> NetSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut net = NetSpec::default();
    let mut open: Vec<String> = Vec::new();

    let new_place = |net: &mut NetSpec, rng: &mut ChaCha8Rng| {
        let id = format!("p{}", net.places.len());
        net.places
            .push(PlaceSpec::new(id.clone(), rng.gen_range(1..=10)));
        id
    };

    for s in 0..rng.gen_range(1..=3) {
        let fan = rng.gen_range(1..=3);
        let places: Vec<String> = (0..fan).map(|_| new_place(&mut net, &mut rng)).collect();
        open.extend(places.iter().cloned());
        net.sources.insert(format!("s{s}"), places);
    }

    for t in 0..rng.gen_range(0..=max_transitions) {
        let op = *OpKind::ALL.choose(&mut rng).unwrap();
        open.shuffle(&mut rng);
        while open.len() < op.arity() {
            let id = new_place(&mut net, &mut rng);
            let stream = net.sources.keys().next().unwrap().clone();
            net.sources.get_mut(&stream).unwrap().push(id.clone());
            open.push(id);
        }
        let inputs: Vec<String> = open.drain(..op.arity()).collect();
        let outputs: Vec<String> = (0..rng.gen_range(1..=2))
            .map(|_| new_place(&mut net, &mut rng))
            .collect();
        open.extend(outputs.iter().cloned());
        net.transitions.push(TransitionSpec {
            name: format!("t{t}"),
            op,
            inputs,
            outputs,
        });
    }

    for (k, place) in open.into_iter().enumerate() {
        net.sinks.insert(format!("k{k}"), place);
    }
    net
}

/// Values in [-1, 1) for every source stream of `net`.
pub fn random_inputs(net: &NetSpec, waves: usize, seed: u64) -> BTreeMap<String, Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    net.sources
        .keys()
        .map(|name| {
            let values = (0..waves).map(|_| rng.gen_range(-1.0..1.0)).collect();
            (name.clone(), values)
        })
        .collect()
}

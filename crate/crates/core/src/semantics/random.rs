//! Seeded random frames inside a class: random explicit relations over the
//! requested indices (identity default), then monotone repair until every
//! class condition holds.

use super::{check_frame_class, DefaultPolicy, FrameClass, FrameSpec, Model, Relation, WorldSet};
use crate::formula::Formula;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug)]
pub struct RandomFrameConfig {
    pub worlds: usize,
    /// Probability of each pair in a fresh explicit relation.
    pub density: f64,
}

impl Default for RandomFrameConfig {
    fn default() -> Self {
        RandomFrameConfig { worlds: 4, density: 0.3 }
    }
}

pub fn random_frame(class: &FrameClass, cfg: RandomFrameConfig, indices: &[Formula], seed: u64) -> FrameSpec {
    random_frame_for(std::slice::from_ref(class), cfg, indices, seed)
}

/// A random frame belonging to every class in `classes`.
pub fn random_frame_for(classes: &[FrameClass], cfg: RandomFrameConfig, indices: &[Formula], seed: u64) -> FrameSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = cfg.worlds.max(1);
    let mut frame = FrameSpec::new((0..n as u64).collect(), DefaultPolicy::Identity).expect("nonempty");
    for idx in indices {
        let mut rel = Relation::empty(n);
        for x in 0..n {
            for y in 0..n {
                if rng.gen_bool(cfg.density) {
                    rel.insert(x, y);
                }
            }
        }
        frame.set_relation(idx.clone(), rel);
    }
    loop {
        let mut changed = false;
        for class in classes {
            changed |= repair_once(&mut frame, class, &mut rng);
        }
        if !changed {
            break;
        }
    }
    for class in classes {
        debug_assert!(check_frame_class(&frame, class).map(|c| c.holds).unwrap_or(false), "{class}");
    }
    frame
}

fn add(frame: &mut FrameSpec, idx: &Formula, x: usize, y: usize) -> bool {
    let rel = frame.relation_mut(idx).expect("explicit");
    if rel.contains(x, y) {
        return false;
    }
    rel.insert(x, y);
    true
}

fn make_serial(frame: &mut FrameSpec, idx: &Formula, rng: &mut ChaCha8Rng) -> bool {
    let n = frame.len();
    let mut changed = false;
    for x in 0..n {
        if frame.explicit()[idx].row(x).is_empty() {
            let y = rng.gen_range(0..n);
            changed |= add(frame, idx, x, y);
        }
    }
    changed
}

fn give_common_successors(frame: &mut FrameSpec, b: &Formula, rng: &mut ChaCha8Rng) -> bool {
    let n = frame.len();
    let nb = Formula::not(b.clone());
    let (eb, enb) = (frame.explicit().contains_key(b), frame.explicit().contains_key(&nb));
    let mut changed = false;
    for x in 0..n {
        let s1 = frame.resolve(b).successors(n, x);
        let s2 = frame.resolve(&nb).successors(n, x);
        if s1.intersects(&s2) {
            continue;
        }
        // A policy-resolved side is the identity here, which forces y = x.
        let y = if eb && enb { rng.gen_range(0..n) } else { x };
        if eb {
            changed |= add(frame, b, x, y);
        }
        if enb {
            changed |= add(frame, &nb, x, y);
        }
    }
    changed
}

fn close_transitive(frame: &mut FrameSpec, c: &Formula) -> bool {
    let n = frame.len();
    let bc = Formula::boxed(c.clone());
    if !frame.explicit().contains_key(&bc) {
        return false;
    }
    let mut changed = false;
    if !frame.explicit().contains_key(c) {
        frame.set_relation(c.clone(), Relation::from_policy(n, DefaultPolicy::Identity));
        changed = true;
    }
    loop {
        let outer = frame.explicit()[&bc].clone();
        let mut inner = frame.explicit()[c].clone();
        let mut grew = false;
        for x in 0..n {
            let mut row: WorldSet = inner.row(x).clone();
            for y in outer.row(x).iter() {
                row.union_with(inner.row(y));
            }
            if &row != inner.row(x) {
                *inner.row_mut(x) = row;
                grew = true;
            }
        }
        if !grew {
            return changed;
        }
        frame.set_relation(c.clone(), inner);
        changed = true;
    }
}

fn repair_once(frame: &mut FrameSpec, class: &FrameClass, rng: &mut ChaCha8Rng) -> bool {
    let explicit: Vec<Formula> = frame.explicit().keys().cloned().collect();
    let mut changed = false;
    match class {
        FrameClass::N => {}
        FrameClass::NP => {
            if frame.explicit().contains_key(&Formula::bot()) {
                changed |= make_serial(frame, &Formula::bot(), rng);
            }
        }
        FrameClass::Serial => {
            for idx in &explicit {
                changed |= make_serial(frame, idx, rng);
            }
        }
        FrameClass::ND => {
            for idx in &explicit {
                changed |= give_common_successors(frame, idx, rng);
                if let Some(inner) = idx.not_arg() {
                    changed |= give_common_successors(frame, inner, rng);
                }
            }
        }
        FrameClass::Transitive => {
            for idx in &explicit {
                if let Some(c) = idx.box_arg() {
                    changed |= close_transitive(frame, c);
                }
            }
        }
        FrameClass::GammaTransitive(gamma) => {
            for f in gamma {
                if let Some(c) = f.box_arg().and_then(Formula::box_arg) {
                    changed |= close_transitive(frame, c);
                }
            }
        }
    }
    changed
}

/// A model on `frame` with each variable true at each world with probability 1/2.
pub fn random_model(frame: FrameSpec, vars: &[Formula], seed: u64) -> Model {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = frame.len();
    let mut m = Model::new(frame);
    for v in vars {
        let mut s = WorldSet::empty(n);
        for x in 0..n {
            if rng.gen_bool(0.5) {
                s.insert(x);
            }
        }
        m.set_valuation(v.clone(), s);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn generated_frames_belong_to_their_classes() {
        let indices = [parse("false"), parse("p"), parse("~p"), parse("[]p"), parse("[][]p"), parse("~~p")];
        let classes = [
            vec![FrameClass::NP],
            vec![FrameClass::ND],
            vec![FrameClass::Serial],
            vec![FrameClass::Transitive],
            vec![FrameClass::NP, FrameClass::Transitive],
            vec![FrameClass::ND, FrameClass::Transitive],
        ];
        for cs in &classes {
            for seed in 0..50 {
                let cfg = RandomFrameConfig { worlds: 1 + (seed as usize % 5), density: 0.25 };
                let f = random_frame_for(cs, cfg, &indices, seed);
                for c in cs {
                    assert!(check_frame_class(&f, c).unwrap().holds, "{c} seed {seed}");
                }
            }
        }
    }

    #[test]
    fn same_seed_same_frame() {
        let idx = [parse("p"), parse("~p")];
        let a = random_frame(&FrameClass::ND, RandomFrameConfig::default(), &idx, 9);
        let b = random_frame(&FrameClass::ND, RandomFrameConfig::default(), &idx, 9);
        assert_eq!(a, b);
    }
}

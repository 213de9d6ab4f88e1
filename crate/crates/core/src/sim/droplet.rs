use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeSet, BinaryHeap};

use super::height_line::HeightLine;
use super::points::PointSet;

/// Totally ordered `f64` for use in ordered collections.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Key(pub f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// One PNG height line evolving in continuous time.
///
/// An up-step at position `x` and time `s` is stored by `c = x + s`, a
/// down-step by `d = x - s`; both labels are constant along the motion. A
/// down-step `d` immediately left of an up-step `c` meets it at time
/// `(c - d) / 2`, position `(c + d) / 2`.
#[derive(Debug, Clone)]
pub(crate) struct LineState {
    base: i64,
    ups: BTreeSet<Key>,
    downs: BTreeSet<Key>,
    collisions: BinaryHeap<Reverse<(Key, Key, Key)>>,
}

enum Neighbor {
    Up(f64),
    Down(f64),
}

impl LineState {
    pub fn new(base: i64) -> Self {
        Self {
            base,
            ups: BTreeSet::new(),
            downs: BTreeSet::new(),
            collisions: BinaryHeap::new(),
        }
    }

    pub fn is_flat(&self) -> bool {
        self.ups.is_empty()
    }

    /// Nearest step strictly left of position `x` at time `s`, by label.
    fn left_of(&self, x: f64, s: f64) -> Option<Neighbor> {
        let up = self.ups.range(..Key(x + s)).next_back().map(|k| k.0);
        let down = self.downs.range(..Key(x - s)).next_back().map(|k| k.0);
        match (up, down) {
            (Some(c), Some(d)) if c - s > d + s => Some(Neighbor::Up(c)),
            (_, Some(d)) => Some(Neighbor::Down(d)),
            (Some(c), None) => Some(Neighbor::Up(c)),
            (None, None) => None,
        }
    }

    /// Nearest step strictly right of position `x` at time `s`, by label.
    fn right_of(&self, x: f64, s: f64) -> Option<Neighbor> {
        use std::ops::Bound::{Excluded, Unbounded};
        let up = self
            .ups
            .range((Excluded(Key(x + s)), Unbounded))
            .next()
            .map(|k| k.0);
        let down = self
            .downs
            .range((Excluded(Key(x - s)), Unbounded))
            .next()
            .map(|k| k.0);
        match (up, down) {
            (Some(c), Some(d)) if d + s < c - s => Some(Neighbor::Down(d)),
            (Some(c), _) => Some(Neighbor::Up(c)),
            (None, Some(d)) => Some(Neighbor::Down(d)),
            (None, None) => None,
        }
    }

    fn schedule(&mut self, d: f64, c: f64) {
        self.collisions
            .push(Reverse((Key(0.5 * (c - d)), Key(d), Key(c))));
    }

    /// Adds an island of zero width at `x` at time `s`.
    pub fn nucleate(&mut self, x: f64, s: f64) {
        let (c, d) = (x + s, x - s);
        if let Some(Neighbor::Down(dl)) = self.left_of(x, s) {
            self.schedule(dl, c);
        }
        if let Some(Neighbor::Up(cr)) = self.right_of(x, s) {
            self.schedule(d, cr);
        }
        self.ups.insert(Key(c));
        self.downs.insert(Key(d));
    }

    /// Time of the next annihilation, discarding pairs of which one step has
    /// already gone.
    pub fn next_collision(&mut self) -> Option<f64> {
        while let Some(Reverse((time, d, c))) = self.collisions.peek() {
            if self.downs.contains(d) && self.ups.contains(c) {
                return Some(time.0);
            }
            self.collisions.pop();
        }
        None
    }

    /// Performs the next annihilation and returns its space-time point.
    pub fn collide(&mut self) -> Option<(f64, f64)> {
        self.next_collision()?;
        let Reverse((time, d, c)) = self.collisions.pop()?;
        self.downs.remove(&d);
        self.ups.remove(&c);
        let (x, s) = (0.5 * (c.0 + d.0), time.0);
        if let (Some(Neighbor::Down(dl)), Some(Neighbor::Up(cr))) =
            (self.left_of(x, s), self.right_of(x, s))
        {
            self.schedule(dl, cr);
        }
        Some((x, s))
    }

    /// Height at `x` at time `s` (upper semi-continuous).
    pub fn height(&self, x: f64, s: f64) -> i64 {
        let ups = self.ups.range(..=Key(x + s)).count();
        let downs = self.downs.range(..Key(x - s)).count();
        self.base + ups as i64 - downs as i64
    }

    /// Runs annihilations up to (excluding) `until`, calling `on_collision`
    /// for each.
    pub fn advance(&mut self, until: f64, mut on_collision: impl FnMut(f64, f64)) {
        while let Some(time) = self.next_collision() {
            if time >= until {
                break;
            }
            let (x, s) = self.collide().expect("pending collision");
            on_collision(x, s);
        }
    }

    pub fn to_height_line(&self, t: f64) -> HeightLine {
        let ups = self.ups.iter().map(|k| k.0 - t).collect();
        let downs = self.downs.iter().map(|k| k.0 + t).collect();
        HeightLine::new(self.base, ups, downs, t).expect("PNG dynamics keeps the line admissible")
    }
}

/// Drives a line at level `base` by nucleations in time order up to time `t`,
/// returning the final profile and the annihilation events.
pub(crate) fn evolve_line(
    base: i64,
    nucleations: &[(f64, f64)],
    t: f64,
) -> (HeightLine, Vec<(f64, f64)>) {
    let mut line = LineState::new(base);
    let mut annihilations = Vec::new();
    for &(x, s) in nucleations {
        line.advance(s, |x, s| annihilations.push((x, s)));
        line.nucleate(x, s);
    }
    line.advance(t, |x, s| annihilations.push((x, s)));
    (line.to_height_line(t), annihilations)
}

/// Height profile `h(., t)` of the PNG droplet nucleated at `points`, by
/// event-driven evolution.
pub fn simulate_droplet(points: &PointSet) -> HeightLine {
    evolve_line(0, &points.space_time(), points.horizon()).0
}

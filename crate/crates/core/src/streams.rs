//! Random-stream isolation. Every (subsystem, slot) pair reads from its own
//! window of a ChaCha keystream derived from the run seed, so whether one
//! subsystem draws in a slot never shifts what any other subsystem (or any
//! later slot) sees. Paired runs of different variants therefore share every
//! draw they have in common.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// 32-bit words reserved per subsystem per slot.
const SLOT_STRIDE_WORDS: u128 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    AcDisturbance = 1,
    GwDisturbance,
    FadeUpBeacon,
    FadeDownBeacon,
    FadeUpComm,
    FadeDownComm,
    CcrFades,
    BeamWander,
    Positioning,
    GwGimbal,
    AcGimbal,
    GwFsm,
    AcFsm,
    GwQuadcell,
    AcQuadcell,
    GwFpa,
    AcFpa,
}

#[derive(Debug, Clone)]
pub struct StreamSet {
    root: ChaCha8Rng,
}

impl StreamSet {
    pub fn new(seed: u64) -> Self {
        Self {
            root: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&self, subsystem: Subsystem, slot: u64) -> ChaCha8Rng {
        let mut rng = self.root.clone();
        rng.set_stream(subsystem as u64);
        rng.set_word_pos(slot as u128 * SLOT_STRIDE_WORDS);
        rng
    }
}

const SUBSYSTEM_SLOTS: usize = Subsystem::AcFpa as usize + 1;

/// Lazily opened generators for one slot. Repeated requests for the same
/// subsystem continue the same generator.
pub struct SlotRngs<'a> {
    streams: &'a StreamSet,
    slot: u64,
    open: [Option<ChaCha8Rng>; SUBSYSTEM_SLOTS],
}

impl<'a> SlotRngs<'a> {
    pub fn new(streams: &'a StreamSet, slot: u64) -> Self {
        Self {
            streams,
            slot,
            open: Default::default(),
        }
    }

    pub fn get(&mut self, s: Subsystem) -> &mut ChaCha8Rng {
        let (streams, slot) = (self.streams, self.slot);
        self.open[s as usize].get_or_insert_with(|| streams.rng(s, slot))
    }

    /// Two distinct generators at once.
    pub fn pair(&mut self, a: Subsystem, b: Subsystem) -> (&mut ChaCha8Rng, &mut ChaCha8Rng) {
        assert_ne!(a, b, "pair requires distinct subsystems");
        self.get(a);
        self.get(b);
        let [x, y] = self
            .open
            .get_disjoint_mut([a as usize, b as usize])
            .expect("distinct indices");
        (x.as_mut().expect("opened"), y.as_mut().expect("opened"))
    }
}

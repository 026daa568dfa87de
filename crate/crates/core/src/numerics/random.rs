use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Deterministic random stream identified by `(seed, stream_id)`.
///
/// Each pair selects a distinct ChaCha keystream, so streams with different
/// ids never overlap. A stream is owned by one sampler at a time; parallel
/// work forks child streams with [`RandomStream::fork`].
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha12Rng,
}

impl RandomStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Child stream `index` of this stream. Depends only on
    /// `(seed, stream_id, index)`, never on how much of `self` was consumed.
    pub fn fork(&self, index: u64) -> RandomStream {
        let key = splitmix64(self.seed ^ splitmix64(self.stream_id.wrapping_add(0x5851_f42d_4c95_7f2d)));
        RandomStream::new(key, index)
    }

    /// Uniform draw on the open interval (0, 1).
    pub fn open01(&mut self) -> f64 {
        loop {
            let bits = self.rng.next_u64() >> 11;
            if bits != 0 {
                return bits as f64 * (1.0 / (1u64 << 53) as f64);
            }
        }
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

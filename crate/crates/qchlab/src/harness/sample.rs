//! Deterministic low-discrepancy sampling of the chart box, with rejection
//! on the declared singular locus.

use crate::error::{Error, Result};
use crate::frame::Locus;
use crate::point::{Box4, Point4};

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

fn halton(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// `n` points of a seeded Halton sequence inside the box, skipping points
/// excluded by the locus. The same (box, seed, n) always yields the same
/// list.
pub fn sample_points(box4: Box4, seed: u64, n: usize, locus: &Locus) -> Result<Vec<Point4>> {
    let offset = splitmix64(seed) % 1_000_000 + 16;
    let ranges = box4.ranges();
    let mut out = Vec::with_capacity(n);
    let mut tried = 0usize;
    let mut rejected = 0usize;
    let budget = 1000 + 200 * n;
    let bases = [2u64, 3, 5, 7];
    while out.len() < n {
        if tried >= budget {
            return Err(Error::SamplingExhausted { rejected, tried });
        }
        let i = offset + tried as u64;
        tried += 1;
        let mut c = [0.0; 4];
        for (a, b) in bases.iter().enumerate() {
            c[a] = ranges[a][0] + (ranges[a][1] - ranges[a][0]) * halton(i, *b);
        }
        let p = Point4::new(c[0], c[1], c[2], c[3]);
        if locus.is_excluded(p) {
            rejected += 1;
            if tried > 200 && rejected * 100 > tried * 99 {
                return Err(Error::SamplingExhausted { rejected, tried });
            }
            continue;
        }
        out.push(p);
    }
    Ok(out)
}

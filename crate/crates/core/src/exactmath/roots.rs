use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use super::number::{pow2, Rational};
use super::poly::Poly;

/// Isolating intervals are refined to width `2^-32` unless asked otherwise.
pub const DEFAULT_ISOLATION_WIDTH_LOG2: i64 = -32;

/// Sturm sequence of the square-free part of a polynomial.
///
/// With zeros skipped, the variation count `V(x)` equals `V(x+)`, so
/// `V(a) - V(b)` is the number of distinct real roots in `(a, b]` for any
/// `a < b`, roots at the endpoints included.
#[derive(Clone, Debug)]
pub struct SturmChain {
    chain: Vec<Poly>,
}

impl SturmChain {
    pub fn new(p: &Poly) -> Self {
        let s = p.square_free_part();
        let mut chain = vec![s.clone()];
        if s.is_constant() {
            return SturmChain { chain };
        }
        let mut prev = s.clone();
        let mut cur = s.derivative();
        while !cur.is_zero() {
            chain.push(cur.clone());
            let r = prev.rem(&cur).expect("nonzero divisor");
            prev = cur;
            cur = -&r;
        }
        SturmChain { chain }
    }

    /// The square-free polynomial the chain was built from.
    pub fn base(&self) -> &Poly {
        &self.chain[0]
    }

    fn variations(signs: impl Iterator<Item = Ordering>) -> usize {
        let mut last = Ordering::Equal;
        let mut count = 0;
        for s in signs.filter(|s| *s != Ordering::Equal) {
            if last != Ordering::Equal && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Sign variations at `x`; `None` stands for `-inf` when `below` and
    /// `+inf` otherwise.
    fn variations_at(&self, x: Option<&Rational>, below: bool) -> usize {
        match x {
            Some(x) => Self::variations(self.chain.iter().map(|p| p.eval(x).cmp(&Rational::zero()))),
            None => Self::variations(self.chain.iter().map(|p| {
                let lead = p.leading().map_or(Ordering::Equal, |c| c.cmp(&Rational::zero()));
                if below && p.deg() % 2 == 1 {
                    lead.reverse()
                } else {
                    lead
                }
            })),
        }
    }

    /// Distinct real roots in `(lo, hi]`; `None` bounds are infinite.
    pub fn count(&self, lo: Option<&Rational>, hi: Option<&Rational>) -> usize {
        let a = self.variations_at(lo, true);
        let b = self.variations_at(hi, false);
        a.saturating_sub(b)
    }

    pub fn count_real(&self) -> usize {
        self.count(None, None)
    }
}

/// Distinct real roots of `p` in `(lo, hi]`.
pub fn count_distinct_roots(p: &Poly, lo: Option<&Rational>, hi: Option<&Rational>) -> usize {
    if p.is_constant() {
        return 0;
    }
    SturmChain::new(p).count(lo, hi)
}

/// Real roots of `p` in `(lo, hi]`, counted with multiplicity.
pub fn count_roots_with_multiplicity(p: &Poly, lo: Option<&Rational>, hi: Option<&Rational>) -> usize {
    p.square_free_decomposition().iter().enumerate().map(|(k, f)| (k + 1) * count_distinct_roots(f, lo, hi)).sum()
}

/// All roots real and simple.
pub fn has_real_simple_roots(p: &Poly) -> bool {
    if p.is_zero() {
        return false;
    }
    p.is_square_free() && count_distinct_roots(p, None, None) == p.deg()
}

/// One real root: either exactly `lo == hi`, or the only root of the
/// polynomial in the open interval `(lo, hi)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatedRoot {
    pub lo: Rational,
    pub hi: Rational,
    pub multiplicity: usize,
}

impl IsolatedRoot {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }
}

/// Real roots in increasing order with pairwise disjoint isolating intervals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RootSet {
    pub roots: Vec<IsolatedRoot>,
}

impl RootSet {
    pub fn distinct(&self) -> usize {
        self.roots.len()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.roots.iter().map(|r| r.multiplicity).collect()
    }
}

fn cauchy_bound(p: &Poly) -> Rational {
    let lc = p.leading().expect("nonzero").abs();
    let m = p.coeffs()[..p.deg()].iter().map(|c| c.abs() / &lc).max().unwrap_or_else(Rational::zero);
    m + Rational::one()
}

/// Bisects `(lo, hi)` holding exactly one root of the chain's square-free base
/// until it is exact or narrower than `width`.
fn refine(chain: &SturmChain, mut lo: Rational, mut hi: Rational, width: &Rational) -> (Rational, Rational) {
    let two = Rational::from_integer(2.into());
    let s = chain.base();
    while lo != hi && &(&hi - &lo) > width {
        let mid = (&lo + &hi) / &two;
        if s.eval(&mid).is_zero() {
            return (mid.clone(), mid);
        }
        if chain.count(Some(&lo), Some(&mid)) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

pub fn isolate_real_roots(p: &Poly) -> RootSet {
    isolate_real_roots_with(p, &pow2(DEFAULT_ISOLATION_WIDTH_LOG2))
}

/// Isolates every real root of `p` and refines each interval to at most
/// `width`. Multiplicities come from the square-free decomposition.
pub fn isolate_real_roots_with(p: &Poly, width: &Rational) -> RootSet {
    if p.is_constant() {
        return RootSet::default();
    }
    let chain = SturmChain::new(p);
    let s = chain.base().clone();
    let b = cauchy_bound(&s);
    let two = Rational::from_integer(2.into());

    // (lo, hi] intervals still holding more than one root
    let mut pending = vec![(-b.clone(), b)];
    let mut found: Vec<(Rational, Rational)> = Vec::new();
    while let Some((lo, hi)) = pending.pop() {
        match chain.count(Some(&lo), Some(&hi)) {
            0 => {}
            1 => {
                if s.eval(&hi).is_zero() {
                    found.push((hi.clone(), hi));
                } else {
                    found.push((lo, hi));
                }
            }
            _ => {
                let mid = (&lo + &hi) / &two;
                pending.push((lo, mid.clone()));
                pending.push((mid, hi));
            }
        }
    }
    found.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));

    let factors: Vec<SturmChain> = p.square_free_decomposition().iter().map(SturmChain::new).collect();
    let roots = found
        .into_iter()
        .map(|(lo, hi)| {
            let (lo, hi) = refine(&chain, lo, hi, width);
            let multiplicity = factors
                .iter()
                .position(|f| if lo == hi { f.base().eval(&lo).is_zero() } else { f.count(Some(&lo), Some(&hi)) == 1 })
                .map_or(1, |k| k + 1);
            IsolatedRoot { lo, hi, multiplicity }
        })
        .collect();
    RootSet { roots }
}

/// Cauchy index of `q / p` over the whole real line: the number of poles
/// where it jumps from `−∞` to `+∞` minus those where it jumps back.
/// Equals `V(−∞) − V(+∞)` on the remainder sequence `p, q, −rem(p, q), …`.
pub fn cauchy_index(q: &Poly, p: &Poly) -> i64 {
    let mut chain = vec![p.clone(), q.clone()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let r = chain[n - 2].rem(&chain[n - 1]).expect("nonzero divisor");
        chain.push(-&r);
    }
    let at = |below: bool| {
        SturmChain::variations(chain.iter().map(|f| {
            let lead = f.leading().map_or(Ordering::Equal, |c| c.cmp(&Rational::zero()));
            if below && f.deg() % 2 == 1 {
                lead.reverse()
            } else {
                lead
            }
        })) as i64
    };
    at(true) - at(false)
}

/// Strict interlacing: `deg p = deg q + 1`, both have only real simple roots,
/// and exactly one root of `q` lies strictly between consecutive roots of `p`
/// with none outside the span of `p`'s roots. With both leading coefficients
/// made positive this holds exactly when the Cauchy index of `q / p` is `deg p`.
pub fn strict_interlace(p: &Poly, q: &Poly) -> bool {
    let (Some(dp), Some(dq)) = (p.degree(), q.degree()) else {
        return false;
    };
    if dp != dq + 1 {
        return false;
    }
    let positive = |f: &Poly| if f.leading().is_some_and(Signed::is_negative) { -f } else { f.clone() };
    cauchy_index(&positive(q), &positive(p)) == dp as i64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, rat};

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn isolation_examples() {
        let r = isolate_real_roots(&Poly::z());
        assert_eq!(r.roots, vec![IsolatedRoot { lo: int(0), hi: int(0), multiplicity: 1 }]);

        let r = isolate_real_roots(&p(&[-1, 1]).pow(2));
        assert_eq!(r.roots, vec![IsolatedRoot { lo: int(1), hi: int(1), multiplicity: 2 }]);

        let r = isolate_real_roots(&p(&[-2, 0, 1]));
        assert_eq!(r.distinct(), 2);
        assert!(r.roots[0].lo >= int(-2) && r.roots[0].hi <= int(-1));
        assert!(r.roots[1].lo >= int(1) && r.roots[1].hi <= int(2));
        for root in &r.roots {
            assert!(root.width() <= pow2(-32));
            let (a, b) = (p(&[-2, 0, 1]).eval(&root.lo), p(&[-2, 0, 1]).eval(&root.hi));
            assert!(a * b < int(0));
        }
    }

    #[test]
    fn isolation_skips_complex_roots() {
        assert_eq!(isolate_real_roots(&p(&[1, 0, 1])).distinct(), 0);
        // (z^2 + 1)(z - 3)
        let r = isolate_real_roots(&(&p(&[1, 0, 1]) * &p(&[-3, 1])));
        assert_eq!(r.distinct(), 1);
        assert_eq!(r.roots[0].lo, int(3));
    }

    #[test]
    fn sturm_counts() {
        let chain = SturmChain::new(&p(&[-2, 0, 1]));
        assert_eq!(chain.count_real(), 2);
        assert_eq!(chain.count(Some(&int(0)), None), 1);
        assert_eq!(chain.count(None, Some(&int(0))), 1);
        // roots at endpoints: z(z-1), count in (0, 1] is 1
        let c2 = SturmChain::new(&p(&[0, -1, 1]));
        assert_eq!(c2.count(Some(&int(0)), Some(&int(1))), 1);
        assert_eq!(c2.count(Some(&int(-1)), Some(&int(0))), 1);
        assert_eq!(count_roots_with_multiplicity(&(&Poly::z().pow(3) * &p(&[1, 1])), None, Some(&rat(1, 2))), 4);
    }

    #[test]
    fn interlacing_examples() {
        assert!(strict_interlace(&p(&[-2, 0, 1]), &Poly::z()));
        assert!(strict_interlace(&p(&[-1, 1]), &Poly::one()));
        assert!(!strict_interlace(&p(&[-1, 0, 1]), &p(&[-5, 1])));
        // shared root
        assert!(!strict_interlace(&p(&[0, -1, 1]), &Poly::z()));
        // degree mismatch
        assert!(!strict_interlace(&p(&[-2, 0, 1]), &p(&[-2, 0, 1])));
        // non-real roots
        assert!(!strict_interlace(&p(&[1, 0, 1]), &Poly::z()));
        // z^3 - 3z has roots -sqrt3, 0, sqrt3; (z-1)(z+1) interlaces
        assert!(strict_interlace(&p(&[0, -3, 0, 1]), &p(&[-1, 0, 1])));
        // (z-2)(z-1/2) does not: both roots in (0, sqrt3)
        assert!(!strict_interlace(&p(&[0, -3, 0, 1]), &Poly::from_roots(&[int(2), rat(1, 2)])));
    }

    #[test]
    fn interlacing_matches_root_order() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = rng.gen_range(1..=6);
            let mut a: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(-20..=20), rng.gen_range(1..=3))).collect();
            let mut b: Vec<Rational> = (0..n - 1).map(|_| rat(rng.gen_range(-20..=20), rng.gen_range(1..=3))).collect();
            a.sort();
            b.sort();
            let expected = a.windows(2).all(|w| w[0] < w[1]) && b.iter().enumerate().all(|(k, r)| a[k] < *r && *r < a[k + 1]);
            let (pa, pb) = (Poly::from_roots(&a), Poly::from_roots(&b));
            assert_eq!(strict_interlace(&pa, &pb), expected, "{a:?} {b:?}");
            assert_eq!(strict_interlace(&-&pa, &pb.scale(&int(-3))), expected);

            let mut all: Vec<Rational> = (0..2 * n - 1).map(|k| rat(7 * k as i64 + rng.gen_range(0..7), 3)).collect();
            all.sort();
            let odd: Vec<Rational> = all.iter().skip(1).step_by(2).cloned().collect();
            let even: Vec<Rational> = all.iter().step_by(2).cloned().collect();
            assert!(strict_interlace(&Poly::from_roots(&even), &Poly::from_roots(&odd)));
        }
    }
}

//! Small combinatorial helpers shared by the verifiers and constructors.

/// Iterator over the `t`-subsets of `0..k` in colexicographic order.
#[derive(Clone, Debug)]
pub struct Colex {
    k: usize,
    current: Option<Vec<usize>>,
}

impl Colex {
    pub fn new(k: usize, t: usize) -> Colex {
        Colex { k, current: (t <= k).then(|| (0..t).collect()) }
    }
}

impl Iterator for Colex {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.current.as_mut()?;
        let out = cur.clone();
        let t = cur.len();
        let mut i = 0;
        while i < t {
            let limit = if i + 1 < t { cur[i + 1] } else { self.k };
            if cur[i] + 1 < limit {
                cur[i] += 1;
                for (j, c) in cur.iter_mut().enumerate().take(i) {
                    *c = j;
                }
                break;
            }
            i += 1;
        }
        if i == t {
            self.current = None;
        }
        Some(out)
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Decodes `index` as a mixed-radix tuple, last position fastest.
pub fn mixed_radix_digits(mut index: u64, radices: &[u32]) -> Vec<u32> {
    let mut out = vec![0; radices.len()];
    for (slot, &r) in out.iter_mut().zip(radices).rev() {
        *slot = (index % r as u64) as u32;
        index /= r as u64;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colex_order() {
        let all: Vec<_> = Colex::new(4, 2).collect();
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 3], vec![1, 3], vec![2, 3]]);
        assert_eq!(Colex::new(3, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(Colex::new(2, 3).count(), 0);
        assert_eq!(Colex::new(10, 5).count() as u64, binomial(10, 5));
    }

    #[test]
    fn radix() {
        assert_eq!(mixed_radix_digits(5, &[2, 3]), vec![1, 2]);
        assert_eq!(binomial(29, 2), 406);
    }
}

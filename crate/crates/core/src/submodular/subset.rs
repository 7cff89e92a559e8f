use std::fmt;

/// A subset of a ground set `{0, .., n-1}` with `n < 32`, as a bitmask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subset(pub u32);

/// Largest ground set a [`Subset`] can index.
pub const MAX_GROUND_SET: usize = 31;

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(size: usize) -> Subset {
        assert!(size <= MAX_GROUND_SET, "ground set of {size} elements");
        Subset((1u32 << size) - 1)
    }

    pub fn from_elements(elements: impl IntoIterator<Item = usize>) -> Subset {
        elements.into_iter().fold(Subset::EMPTY, Subset::with)
    }

    pub fn contains(self, e: usize) -> bool {
        self.0 >> e & 1 == 1
    }

    pub fn with(self, e: usize) -> Subset {
        Subset(self.0 | 1 << e)
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn elements(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&e| self.contains(e))
    }

    /// All subsets of this set, including the empty set and itself.
    pub fn subsets(self) -> impl Iterator<Item = Subset> {
        let mask = self.0;
        let mut next = Some(mask);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == 0 { None } else { Some((cur - 1) & mask) };
            Some(Subset(cur))
        })
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, e) in self.elements().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::SearchError;

/// Color cap: cells are packed two to a byte.
pub const MAX_COLORS: u8 = 16;

/// A finite coloring of `[1..N]` with colors `0..r-1`, 4 bits per cell.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    n: u32,
    r: u8,
    cells: Vec<u8>,
}

impl Coloring {
    pub fn new(n: u32, r: u8) -> Result<Self, SearchError> {
        if r == 0 || r > MAX_COLORS {
            return Err(SearchError::InvalidColorCount(r));
        }
        Ok(Coloring { n, r, cells: vec![0; (n as usize + 1) / 2] })
    }

    pub fn from_colors(r: u8, colors: &[u8]) -> Result<Self, SearchError> {
        let mut coloring = Coloring::new(colors.len() as u32, r)?;
        for (i, &c) in colors.iter().enumerate() {
            if c >= r {
                return Err(SearchError::ColorOutOfRange { color: c, r });
            }
            coloring.set(i as u32 + 1, c);
        }
        Ok(coloring)
    }

    /// Parses the serialized digit string, one base-16 digit per cell.
    pub fn from_digits(r: u8, digits: &str) -> Result<Self, SearchError> {
        let colors: Vec<u8> = digits
            .chars()
            .map(|ch| {
                ch.to_digit(16)
                    .map(|d| d as u8)
                    .ok_or(SearchError::BadColoringDigit(ch))
            })
            .collect::<Result<_, _>>()?;
        Self::from_colors(r, &colors)
    }

    pub fn random(n: u32, r: u8, rng: &mut impl Rng) -> Result<Self, SearchError> {
        let mut coloring = Coloring::new(n, r)?;
        for i in 1..=n {
            coloring.set(i, rng.gen_range(0..r));
        }
        Ok(coloring)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> u8 {
        self.r
    }

    /// Color of element `i`, 1-based.
    #[inline]
    pub fn get(&self, i: u32) -> u8 {
        debug_assert!(1 <= i && i <= self.n);
        let idx = (i - 1) as usize;
        (self.cells[idx / 2] >> ((idx % 2) * 4)) & 0x0f
    }

    #[inline]
    pub fn set(&mut self, i: u32, color: u8) {
        debug_assert!(1 <= i && i <= self.n && color < self.r);
        let idx = (i - 1) as usize;
        let shift = (idx % 2) * 4;
        let cell = &mut self.cells[idx / 2];
        *cell = (*cell & !(0x0f << shift)) | (color << shift);
    }

    pub fn digits(&self) -> String {
        (1..=self.n)
            .map(|i| char::from_digit(u32::from(self.get(i)), 16).expect("color < 16"))
            .collect()
    }

    pub fn values(&self) -> impl Iterator<Item = u8> + '_ {
        (1..=self.n).map(move |i| self.get(i))
    }

    /// True when the coloring assigns one common color to every value in
    /// `values` (which must all be in range).
    pub fn monochromatic(&self, values: &[u32]) -> Option<u8> {
        let mut iter = values.iter();
        let first = self.get(*iter.next()?);
        for &v in iter {
            if self.get(v) != first {
                return None;
            }
        }
        Some(first)
    }
}

impl std::fmt::Debug for Coloring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Coloring(N={}, r={}, {})", self.n, self.r, self.digits())
    }
}

#[derive(Serialize, Deserialize)]
struct ColoringRepr {
    #[serde(rename = "N")]
    n: u32,
    r: u8,
    colors: String,
}

impl Serialize for Coloring {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ColoringRepr { n: self.n, r: self.r, colors: self.digits() }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Coloring {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let repr = ColoringRepr::deserialize(de)?;
        let coloring =
            Coloring::from_digits(repr.r, &repr.colors).map_err(serde::de::Error::custom)?;
        if coloring.n() != repr.n {
            return Err(serde::de::Error::custom(format!(
                "N={} does not match {} colors",
                repr.n,
                coloring.n()
            )));
        }
        Ok(coloring)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pack_round_trip() {
        let mut c = Coloring::new(9, 16).unwrap();
        for i in 1..=9 {
            c.set(i, (i * 3 % 16) as u8);
        }
        for i in 1..=9 {
            assert_eq!(c.get(i), (i * 3 % 16) as u8);
        }
    }

    #[test]
    fn digit_serialization() {
        let c = Coloring::from_colors(2, &[0, 1, 1, 0]).unwrap();
        assert_eq!(c.digits(), "0110");
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"{"N":4,"r":2,"colors":"0110"}"#);
        let back: Coloring = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(Coloring::from_colors(2, &[0, 2]).is_err());
        assert!(Coloring::new(5, 17).is_err());
        assert!(Coloring::from_digits(2, "01x0").is_err());
    }
}

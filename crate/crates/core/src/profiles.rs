//! Seeded random SNR profiles and CSV storage of weight matrices.

use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::allocation::WeightMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Generator behind every profile, reported alongside experiment output.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng (rand_chacha 0.3, seed_from_u64)";

/// Number of basestations that get the strong or shared SNR in the
/// sparse and correlated profiles.
pub const SELECTED_BASESTATIONS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProfileKind {
    /// Every SNR uniform on [0, 1].
    IidUnit,
    /// Every SNR uniform on [0, 10].
    IidTen,
    /// First ⌈n/2⌉ users uniform on [0, 10], the rest on [0, 5].
    MixedHalf,
    /// Per user, three random basestations uniform on [0, 10], others on [0, 1].
    SparseStrong,
    /// Per user, `v` uniform on [0, 10]; three random basestations get `v`,
    /// the others `v / 2`.
    Correlated,
}

impl ProfileKind {
    pub const ALL: [ProfileKind; 5] = [
        ProfileKind::IidUnit,
        ProfileKind::IidTen,
        ProfileKind::MixedHalf,
        ProfileKind::SparseStrong,
        ProfileKind::Correlated,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProfileKind::IidUnit => "iid-unit",
            ProfileKind::IidTen => "iid-ten",
            ProfileKind::MixedHalf => "mixed-half",
            ProfileKind::SparseStrong => "sparse-strong",
            ProfileKind::Correlated => "correlated",
        }
    }

    pub fn is_iid(self) -> bool {
        matches!(self, ProfileKind::IidUnit | ProfileKind::IidTen)
    }

    fn needs_selection(self) -> bool {
        matches!(self, ProfileKind::SparseStrong | ProfileKind::Correlated)
    }
}

impl fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for ProfileKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProfileKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown profile {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProfileSpec {
    pub kind: ProfileKind,
    pub users: usize,
    pub basestations: usize,
    pub seed: u64,
}

impl ProfileSpec {
    pub fn validate(&self) -> Result<()> {
        if self.users == 0 {
            return Err(Error::InvalidSpec("at least one user is required".into()));
        }
        if self.basestations == 0 {
            return Err(Error::InvalidSpec("at least one basestation is required".into()));
        }
        if self.kind.needs_selection() && self.basestations < SELECTED_BASESTATIONS {
            return Err(Error::InvalidSpec(format!(
                "profile {} selects {SELECTED_BASESTATIONS} basestations but only {} exist",
                self.kind, self.basestations
            )));
        }
        Ok(())
    }
}

/// Draw the weight matrix for `spec`; a pure function of its fields.
pub fn generate<T: Scalar>(spec: &ProfileSpec) -> Result<WeightMatrix<T>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (n, m) = (spec.users, spec.basestations);
    let strong_half = n.div_ceil(2);

    let mut rows = Vec::with_capacity(n);
    for user in 0..n {
        let row: Vec<f64> = match spec.kind {
            ProfileKind::IidUnit => (0..m).map(|_| rng.gen_range(0.0..=1.0)).collect(),
            ProfileKind::IidTen => (0..m).map(|_| rng.gen_range(0.0..=10.0)).collect(),
            ProfileKind::MixedHalf => {
                let top = if user < strong_half { 10.0 } else { 5.0 };
                (0..m).map(|_| rng.gen_range(0.0..=top)).collect()
            }
            ProfileKind::SparseStrong => {
                let chosen = sample(&mut rng, m, SELECTED_BASESTATIONS);
                let mut row: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..=1.0)).collect();
                for bs in chosen.iter() {
                    row[bs] = rng.gen_range(0.0..=10.0);
                }
                row
            }
            ProfileKind::Correlated => {
                let v: f64 = rng.gen_range(0.0..=10.0);
                let mut row = vec![v / 2.0; m];
                for bs in sample(&mut rng, m, SELECTED_BASESTATIONS).iter() {
                    row[bs] = v;
                }
                row
            }
        };
        rows.push(row.into_iter().map(T::of).collect());
    }
    WeightMatrix::new(rows, m)
}

/// Write `w` as CSV with header `user,bs_1,...,bs_m`; users are numbered
/// from 1 and reals use shortest round-trip formatting.
pub fn write_weight_csv<T: Scalar, W: Write>(w: &WeightMatrix<T>, writer: W) -> Result<()> {
    let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(writer);
    let mut header = vec!["user".to_string()];
    header.extend((1..=w.basestations()).map(|j| format!("bs_{j}")));
    out.write_record(&header)?;
    for (user, row) in w.rows().iter().enumerate() {
        let mut record = vec![(user + 1).to_string()];
        record.extend(row.iter().map(|x| x.to_string()));
        out.write_record(&record)?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Parse a weight matrix written by [`write_weight_csv`]. `origin` labels
/// error messages.
pub fn read_weight_csv<T: Scalar, R: Read>(reader: R, origin: &Path) -> Result<WeightMatrix<T>> {
    let parse_err = |line: u64, msg: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        msg,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut records = rdr.records();

    let header = match records.next() {
        None => return Err(Error::NoUsers),
        Some(h) => h?,
    };
    let m = header.len().saturating_sub(1);
    let header_ok = header.get(0) == Some("user")
        && m >= 1
        && header.iter().skip(1).enumerate().all(|(k, h)| h == format!("bs_{}", k + 1));
    if !header_ok {
        return Err(parse_err(1, "header must be user,bs_1,...,bs_m".into()));
    }

    let mut rows = Vec::new();
    for record in records {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != m + 1 {
            return Err(parse_err(
                line,
                format!("expected {} fields, found {}", m + 1, record.len()),
            ));
        }
        let mut row = Vec::with_capacity(m);
        for cell in record.iter().skip(1) {
            let x: T = cell
                .trim()
                .parse()
                .map_err(|_| parse_err(line, format!("not a number: {cell:?}")))?;
            if !(x.is_finite() && x >= T::zero()) {
                return Err(parse_err(line, format!("SNR must be nonnegative and finite: {cell}")));
            }
            row.push(x);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::NoUsers);
    }
    WeightMatrix::new(rows, m)
}

pub fn replay_from_csv<T: Scalar>(path: &Path) -> Result<WeightMatrix<T>> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_weight_csv(file, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(kind: ProfileKind, users: usize, basestations: usize, seed: u64) -> ProfileSpec {
        ProfileSpec {
            kind,
            users,
            basestations,
            seed,
        }
    }

    #[test]
    fn ranges_per_kind() {
        for seed in 0..20 {
            let w: WeightMatrix<f64> = generate(&spec(ProfileKind::IidUnit, 30, 4, seed)).unwrap();
            assert!(w.rows().iter().flatten().all(|&x| (0.0..=1.0).contains(&x)));

            let w: WeightMatrix<f64> = generate(&spec(ProfileKind::MixedHalf, 7, 4, seed)).unwrap();
            assert!(w.rows()[..4].iter().flatten().all(|&x| (0.0..=10.0).contains(&x)));
            assert!(w.rows()[4..].iter().flatten().all(|&x| (0.0..=5.0).contains(&x)));

            let w: WeightMatrix<f64> =
                generate(&spec(ProfileKind::SparseStrong, 30, 6, seed)).unwrap();
            for row in w.rows() {
                assert!(row.iter().all(|&x| (0.0..=10.0).contains(&x)));
            }
        }
    }

    #[test]
    fn correlated_rows_have_two_levels() {
        let w: WeightMatrix<f64> = generate(&spec(ProfileKind::Correlated, 50, 10, 3)).unwrap();
        for row in w.rows() {
            let hi = row.iter().copied().fold(0.0, f64::max);
            let strong = row.iter().filter(|&&x| x == hi).count();
            assert_eq!(strong, SELECTED_BASESTATIONS);
            assert!(row.iter().all(|&x| x == hi || x == hi / 2.0));
        }
    }

    #[test]
    fn selection_profiles_need_three_basestations() {
        for kind in [ProfileKind::SparseStrong, ProfileKind::Correlated] {
            assert!(matches!(
                generate::<f64>(&spec(kind, 4, 2, 0)),
                Err(Error::InvalidSpec(_))
            ));
        }
        assert!(generate::<f64>(&spec(ProfileKind::IidTen, 0, 2, 0)).is_err());
    }

    #[test]
    fn generation_is_deterministic() {
        for kind in ProfileKind::ALL {
            let s = spec(kind, 12, 5, 99);
            assert_eq!(generate::<f64>(&s).unwrap(), generate::<f64>(&s).unwrap());
        }
        let a: WeightMatrix<f64> = generate(&spec(ProfileKind::IidTen, 5, 5, 1)).unwrap();
        let b: WeightMatrix<f64> = generate(&spec(ProfileKind::IidTen, 5, 5, 2)).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn iid_ten_mean() {
        let w: WeightMatrix<f64> = generate(&spec(ProfileKind::IidTen, 2000, 10, 5)).unwrap();
        let entries: Vec<f64> = w.rows().iter().flatten().copied().collect();
        assert!(entries.len() >= 10_000);
        let mean = entries.iter().sum::<f64>() / entries.len() as f64;
        assert!((mean - 5.0).abs() < 0.1, "mean {mean}");
    }

    #[test]
    fn profile_names_parse() {
        for kind in ProfileKind::ALL {
            assert_eq!(kind.name().parse::<ProfileKind>().unwrap(), kind);
        }
        assert!("uniform".parse::<ProfileKind>().is_err());
    }

    #[test]
    fn csv_header_and_rows() {
        let w = WeightMatrix::from_rows(vec![vec![0.1, 2.5], vec![3.0, 0.0]]).unwrap();
        let mut buf = Vec::new();
        write_weight_csv(&w, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "user,bs_1,bs_2\n1,0.1,2.5\n2,3,0\n"
        );
        let back: WeightMatrix<f64> = read_weight_csv(&buf[..], Path::new("mem")).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn csv_errors() {
        let origin = Path::new("w.csv");
        assert!(matches!(read_weight_csv::<f64, _>(&b""[..], origin), Err(Error::NoUsers)));
        assert!(matches!(
            read_weight_csv::<f64, _>(&b"user,bs_1\n"[..], origin),
            Err(Error::NoUsers)
        ));
        let err = read_weight_csv::<f64, _>(&b"user,bs_1,bs_2\n1,1,2\n2,3\n"[..], origin).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        assert!(err.to_string().contains("line 3"));
        let err = read_weight_csv::<f64, _>(&b"user,bs_1\n1,abc\n"[..], origin).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(read_weight_csv::<f64, _>(&b"id,bs_1\n1,1\n"[..], origin).is_err());
        assert!(read_weight_csv::<f64, _>(&b"user,bs_1\n1,-1\n"[..], origin).is_err());
    }
}

//! `DKGF` binary container.
//!
//! Layout (little-endian, packed): magic `DKGF`, version `u32 = 1`, kind `u8`
//! (0 scalar, 1 spinor, 2 space-time), `n_x u32`, `n_t u32`, `period f64`,
//! `window f64`, representation `u8` (0 physical, 1 Fourier), then the values
//! as interleaved `(re, im)` f64 pairs in `(t, x1, x2)` order with the
//! components of each node adjacent. Space-time containers carry one or two
//! components; the count follows from the payload length.

use std::io::{Read, Write};

use num_complex::Complex64;

use super::field::{Field, Representation};
use super::grid::GridSpec;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"DKGF";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 4 + 4 + 1 + 4 + 4 + 8 + 8 + 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContainerKind {
    Scalar = 0,
    Spinor = 1,
    SpaceTime = 2,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Header {
    pub kind: ContainerKind,
    pub grid: GridSpec,
    pub rep: Representation,
}

fn kind_for<const C: usize>(grid: &GridSpec) -> ContainerKind {
    if grid.is_space_time() {
        ContainerKind::SpaceTime
    } else if C == 1 {
        ContainerKind::Scalar
    } else {
        ContainerKind::Spinor
    }
}

pub fn encode<const C: usize>(field: &Field<C>) -> Vec<u8> {
    let grid = field.grid();
    let mut out = Vec::with_capacity(HEADER_LEN + grid.len() * C * 16);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.push(kind_for::<C>(grid) as u8);
    out.extend_from_slice(&(grid.n_x as u32).to_le_bytes());
    out.extend_from_slice(&(grid.n_t as u32).to_le_bytes());
    out.extend_from_slice(&grid.period.to_le_bytes());
    out.extend_from_slice(&grid.window.to_le_bytes());
    out.push(match field.rep() {
        Representation::Physical => 0,
        Representation::Fourier => 1,
    });
    for idx in 0..grid.len() {
        for c in 0..C {
            let v = field.component(c)[idx];
            out.extend_from_slice(&v.re.to_le_bytes());
            out.extend_from_slice(&v.im.to_le_bytes());
        }
    }
    out
}

pub fn write<const C: usize>(field: &Field<C>, mut w: impl Write) -> Result<()> {
    w.write_all(&encode(field))?;
    Ok(())
}

fn take<'a>(bytes: &mut &'a [u8], n: usize) -> Result<&'a [u8]> {
    if bytes.len() < n {
        return Err(Error::Format("truncated container".into()));
    }
    let (head, tail) = bytes.split_at(n);
    *bytes = tail;
    Ok(head)
}

pub fn decode_header(bytes: &[u8]) -> Result<(Header, &[u8])> {
    let mut cur = bytes;
    if take(&mut cur, 4)? != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = u32::from_le_bytes(take(&mut cur, 4)?.try_into().unwrap());
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let kind = match take(&mut cur, 1)?[0] {
        0 => ContainerKind::Scalar,
        1 => ContainerKind::Spinor,
        2 => ContainerKind::SpaceTime,
        k => return Err(Error::Format(format!("unknown kind {k}"))),
    };
    let n_x = u32::from_le_bytes(take(&mut cur, 4)?.try_into().unwrap()) as usize;
    let n_t = u32::from_le_bytes(take(&mut cur, 4)?.try_into().unwrap()) as usize;
    let period = f64::from_le_bytes(take(&mut cur, 8)?.try_into().unwrap());
    let window = f64::from_le_bytes(take(&mut cur, 8)?.try_into().unwrap());
    let rep = match take(&mut cur, 1)?[0] {
        0 => Representation::Physical,
        1 => Representation::Fourier,
        r => return Err(Error::Format(format!("unknown representation {r}"))),
    };
    let grid = GridSpec {
        n_x,
        period,
        n_t,
        window,
    };
    grid.validate()?;
    if (kind == ContainerKind::SpaceTime) != grid.is_space_time() {
        return Err(Error::Format("kind does not match n_t".into()));
    }
    Ok((Header { kind, grid, rep }, cur))
}

/// Decodes a container holding `C` components per node.
pub fn decode<const C: usize>(bytes: &[u8]) -> Result<Field<C>> {
    let (header, payload) = decode_header(bytes)?;
    let expected_kind = kind_for::<C>(&header.grid);
    if header.kind != expected_kind {
        return Err(Error::Format(format!(
            "container kind {:?} cannot be read as {C}-component field",
            header.kind
        )));
    }
    let grid = header.grid;
    if payload.len() != grid.len() * C * 16 {
        return Err(Error::Format(format!(
            "payload has {} bytes, expected {} for {C} component(s)",
            payload.len(),
            grid.len() * C * 16
        )));
    }
    let mut comps: [Vec<Complex64>; C] = std::array::from_fn(|_| Vec::with_capacity(grid.len()));
    for node in payload.chunks_exact(16 * C) {
        for (c, pair) in node.chunks_exact(16).enumerate() {
            let re = f64::from_le_bytes(pair[..8].try_into().unwrap());
            let im = f64::from_le_bytes(pair[8..].try_into().unwrap());
            comps[c].push(Complex64::new(re, im));
        }
    }
    Field::from_components(grid, header.rep, comps)
}

/// Component count of a container, inferring it from the payload for
/// space-time containers.
pub fn component_count(bytes: &[u8]) -> Result<usize> {
    let (header, payload) = decode_header(bytes)?;
    match header.kind {
        ContainerKind::Scalar => Ok(1),
        ContainerKind::Spinor => Ok(2),
        ContainerKind::SpaceTime => {
            let per = header.grid.len() * 16;
            match payload.len() / per {
                c @ (1 | 2) if payload.len() % per == 0 => Ok(c),
                _ => Err(Error::Format("payload length matches neither 1 nor 2 components".into())),
            }
        }
    }
}

pub fn read<const C: usize>(mut r: impl Read) -> Result<Field<C>> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    decode(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral_grid::{ScalarField, SpinorField};
    use proptest::prelude::*;

    #[test]
    fn header_is_bit_exact() {
        let g = GridSpec::spatial(8, 2.5).unwrap();
        let f = ScalarField::zeros(g, Representation::Fourier);
        let bytes = encode(&f);
        assert_eq!(&bytes[..4], b"DKGF");
        assert_eq!(&bytes[4..8], &1u32.to_le_bytes());
        assert_eq!(bytes[8], 0);
        assert_eq!(&bytes[9..13], &8u32.to_le_bytes());
        assert_eq!(&bytes[13..17], &1u32.to_le_bytes());
        assert_eq!(&bytes[17..25], &2.5f64.to_le_bytes());
        assert_eq!(&bytes[25..33], &0.0f64.to_le_bytes());
        assert_eq!(bytes[33], 1);
        assert_eq!(bytes.len(), HEADER_LEN + 64 * 16);
    }

    #[test]
    fn rejects_corrupt_containers() {
        let g = GridSpec::spatial(8, 1.0).unwrap();
        let f = SpinorField::zeros(g, Representation::Physical);
        let mut bytes = encode(&f);
        assert!(decode::<1>(&bytes).is_err());
        bytes.pop();
        assert!(decode::<2>(&bytes).is_err());
        bytes[0] = b'X';
        assert!(decode::<2>(&bytes).is_err());
    }

    #[test]
    fn space_time_component_count_is_inferred() {
        let g = GridSpec::space_time(8, 1.0, 3, 1.0).unwrap();
        let s = SpinorField::zeros(g, Representation::Physical);
        let bytes = encode(&s);
        assert_eq!(bytes[8], 2);
        assert_eq!(component_count(&bytes).unwrap(), 2);
        let p = ScalarField::zeros(g, Representation::Physical);
        assert_eq!(component_count(&encode(&p)).unwrap(), 1);
    }

    proptest! {
        #[test]
        fn spinor_container_round_trips(vals in proptest::collection::vec(-1e6f64..1e6, 4 * 64)) {
            let g = GridSpec::spatial(8, 3.0).unwrap();
            let comps = [
                (0..64).map(|i| Complex64::new(vals[4 * i], vals[4 * i + 1])).collect(),
                (0..64).map(|i| Complex64::new(vals[4 * i + 2], vals[4 * i + 3])).collect(),
            ];
            let f = SpinorField::from_components(g, Representation::Physical, comps).unwrap();
            let back: SpinorField = decode(&encode(&f)).unwrap();
            prop_assert_eq!(back, f);
        }
    }
}

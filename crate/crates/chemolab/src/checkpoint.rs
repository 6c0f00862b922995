//! Binary field checkpoints: a small header (magic, geometry descriptor)
//! followed by the cell values as little-endian 64-bit floats, row-major on
//! the box (x fastest).

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::Path;

use chemolab_core::geometry::{BoxGrid, Field, Geometry, RadialMesh};

const MAGIC: [u8; 4] = *b"CLB1";
const KIND_BOX: u8 = 0;
const KIND_RADIAL: u8 = 1;

pub fn write(path: &Path, field: &Field) -> io::Result<()> {
    let mut f = File::create(path)?;
    f.write_all(&MAGIC)?;
    match &field.geometry {
        Geometry::Box(grid) => {
            f.write_all(&[KIND_BOX])?;
            f.write_all(&grid.n.to_le_bytes())?;
            f.write_all(&grid.extent.to_le_bytes())?;
            f.write_all(&(grid.points_per_axis as u64).to_le_bytes())?;
        }
        Geometry::Radial(mesh) => {
            f.write_all(&[KIND_RADIAL])?;
            f.write_all(&mesh.n.to_le_bytes())?;
            f.write_all(&mesh.r_max.to_le_bytes())?;
            f.write_all(&(mesh.cells as u64).to_le_bytes())?;
        }
    }
    f.write_all(&(field.values.len() as u64).to_le_bytes())?;
    for &v in &field.values {
        f.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn bad(msg: &str) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg)
}

pub fn read(path: &Path) -> io::Result<Field> {
    let mut f = File::open(path)?;
    let mut buf = Vec::new();
    f.read_to_end(&mut buf)?;
    let mut pos = 0usize;
    let take = |pos: &mut usize, len: usize| -> io::Result<&[u8]> {
        if *pos + len > buf.len() {
            return Err(bad("truncated checkpoint"));
        }
        let slice = &buf[*pos..*pos + len];
        *pos += len;
        Ok(slice)
    };
    if take(&mut pos, 4)? != MAGIC {
        return Err(bad("not a checkpoint file"));
    }
    let kind = take(&mut pos, 1)?[0];
    let n = u32::from_le_bytes(take(&mut pos, 4)?.try_into().unwrap());
    let size_param = f64::from_le_bytes(take(&mut pos, 8)?.try_into().unwrap());
    let count_param = u64::from_le_bytes(take(&mut pos, 8)?.try_into().unwrap()) as usize;
    let geometry = match kind {
        KIND_BOX => Geometry::Box(
            BoxGrid::new(size_param, count_param).map_err(|e| bad(&e.to_string()))?,
        ),
        KIND_RADIAL => Geometry::Radial(
            RadialMesh::new(n, size_param, count_param).map_err(|e| bad(&e.to_string()))?,
        ),
        _ => return Err(bad("unknown geometry kind")),
    };
    let len = u64::from_le_bytes(take(&mut pos, 8)?.try_into().unwrap()) as usize;
    if len != geometry.cell_count() {
        return Err(bad("value count does not match the geometry"));
    }
    let mut values = Vec::with_capacity(len);
    for _ in 0..len {
        values.push(f64::from_le_bytes(take(&mut pos, 8)?.try_into().unwrap()));
    }
    Ok(Field { geometry, values })
}

//! CSV export of matrices and eigenpairs. Metadata is written as leading
//! `#` comment lines.

use std::io::Write;

use super::{EigenPair, OperatorMatrix};
use crate::error::Result;
use crate::geometry::QuadratureMesh;

pub const CSV_FORMAT_VERSION: u32 = 1;

/// Long format: one `row,col,re,im` line per entry.
pub fn write_matrix_csv(matrix: &OperatorMatrix, mut out: impl Write) -> Result<()> {
    writeln!(out, "# format_version={CSV_FORMAT_VERSION}")?;
    writeln!(out, "# kind={}", matrix.label())?;
    if let Some((_, k)) = matrix.terms.first() {
        writeln!(out, "# mode={} dim={}", k.mode, k.dim)?;
    }
    writeln!(
        out,
        "# rows={} cols={} row_mesh={:016x} col_mesh={:016x} weights_included={}",
        matrix.nrows(),
        matrix.ncols(),
        matrix.row_fingerprint,
        matrix.col_fingerprint,
        matrix.includes_weights
    )?;
    if matrix.punctured_diagonal() {
        writeln!(out, "# diagonal=punctured-cell")?;
    }
    writeln!(out, "row,col,re,im")?;
    for i in 0..matrix.nrows() {
        for j in 0..matrix.ncols() {
            let z = matrix.get(i, j);
            writeln!(out, "{i},{j},{:.17e},{:.17e}", z.re, z.im)?;
        }
    }
    Ok(())
}

/// One `index,node,x,y,z,weight,eigenvalue,re,im` line per eigenvector entry.
pub fn write_eigenpairs_csv(
    pairs: &[EigenPair],
    mesh: &QuadratureMesh,
    label: &str,
    mut out: impl Write,
) -> Result<()> {
    writeln!(out, "# format_version={CSV_FORMAT_VERSION}")?;
    writeln!(out, "# {label}")?;
    writeln!(
        out,
        "# dim={} nodes={} h={:.17e} mesh={:016x}",
        mesh.dim,
        mesh.len(),
        mesh.h,
        mesh.fingerprint()
    )?;
    writeln!(out, "index,node,x,y,z,weight,eigenvalue,re,im")?;
    for p in pairs {
        for (k, (u, (x, w))) in p
            .vector
            .iter()
            .zip(mesh.nodes.iter().zip(&mesh.weights))
            .enumerate()
        {
            writeln!(
                out,
                "{},{k},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                p.index, x[0], x[1], x[2], w, p.value, u.re, u.im
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_mesh, Dim, DomainSpec};
    use crate::kernel::{Convention, KernelKind};
    use crate::spectral::{assemble, eig_sym};

    #[test]
    fn matrix_csv_has_header_and_entries() {
        let mesh = build_mesh(&DomainSpec::rectangle(1.0, 1.0), 2).unwrap();
        let a = assemble(
            &mesh,
            &mesh,
            KernelKind::series(Dim::Two, 2, Convention::PaperLiteral),
        )
        .unwrap();
        let mut buf = Vec::new();
        write_matrix_csv(&a, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# format_version=1\n"));
        assert!(text.contains("# diagonal=punctured-cell"));
        assert!(text.contains("mode=paper"));
        let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data.len(), 1 + 16);
    }

    #[test]
    fn eigenpair_csv_is_deterministic() {
        let mesh = build_mesh(&DomainSpec::disk(1.0), 6).unwrap();
        let a = assemble(
            &mesh,
            &mesh,
            KernelKind::series(Dim::Two, 0, Convention::Consistent),
        )
        .unwrap();
        let pairs = eig_sym(&a, &mesh).unwrap();
        let write = || {
            let mut buf = Vec::new();
            write_eigenpairs_csv(&pairs[..1], &mesh, "kind=K^(0)", &mut buf).unwrap();
            buf
        };
        assert_eq!(write(), write());
    }
}

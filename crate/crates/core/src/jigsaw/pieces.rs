use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::image::{split_blocks, BlockGeometry, Image};
use crate::permutation::Permutation;

/// Square tiles of one image, in raster order, plus the board they came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceSet {
    side: usize,
    cols: usize,
    rows: usize,
    pieces: Vec<Image>,
}

impl PieceSet {
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn pieces(&self) -> &[Image] {
        &self.pieces
    }

    pub fn get(&self, i: usize) -> &Image {
        &self.pieces[i]
    }
}

/// Cuts `img` into `M`×`M` pieces; `M` must divide both dimensions.
pub fn cut_pieces(img: &Image, side: usize) -> Result<PieceSet> {
    if side == 0 {
        return Err(Error::Geometry("piece side must be positive".into()));
    }
    // Pieces need not be even-sided, so the block geometry check is done by hand.
    if img.width() % side != 0 || img.height() % side != 0 {
        return Err(Error::Geometry(format!(
            "{}x{} image is not a multiple of piece side {side}",
            img.width(),
            img.height()
        )));
    }
    let (cols, rows) = (img.width() / side, img.height() / side);
    let pieces = if side % 2 == 0 {
        split_blocks(img, &BlockGeometry::exact(img, side)?)?
    } else {
        (0..cols * rows)
            .map(|i| img.crop((i % cols) * side, (i / cols) * side, side, side))
            .collect::<Result<_>>()?
    };
    Ok(PieceSet {
        side,
        cols,
        rows,
        pieces,
    })
}

/// Board cell `(col, row)` → piece index, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assembly {
    cols: usize,
    rows: usize,
    cells: Vec<usize>,
}

impl Assembly {
    /// Validates that `cells` is a bijection onto the `cols * rows` pieces.
    pub fn new(cols: usize, rows: usize, cells: Vec<usize>) -> Result<Self> {
        if cols == 0 || rows == 0 || cells.len() != cols * rows {
            return Err(Error::Incomplete(format!(
                "{cols}x{rows} board needs {} cells, got {}",
                cols * rows,
                cells.len()
            )));
        }
        // Reuse the bijection check.
        let cells = Permutation::new(cells)
            .map_err(|e| Error::Incomplete(format!("assembly is not a bijection: {e}")))?
            .into_vec();
        Ok(Assembly { cols, rows, cells })
    }

    pub fn identity(cols: usize, rows: usize) -> Self {
        Assembly {
            cols,
            rows,
            cells: (0..cols * rows).collect(),
        }
    }

    /// Assembly that undoes a block permutation: block `i` was moved to slot
    /// `perm[i]`, so cell `i` takes piece `perm[i]`.
    pub fn undoing(cols: usize, rows: usize, perm: &Permutation) -> Result<Self> {
        Self::new(cols, rows, perm.as_slice().to_vec())
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn at(&self, col: usize, row: usize) -> usize {
        self.cells[row * self.cols + col]
    }

    /// One `col,row -> piece` line per cell, 0-based, raster order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, p) in self.cells.iter().enumerate() {
            let _ = writeln!(out, "{},{} -> {}", i % self.cols, i / self.cols, p);
        }
        out
    }

    pub fn parse_text(cols: usize, rows: usize, text: &str) -> Result<Self> {
        let mut cells = vec![usize::MAX; cols * rows];
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || Error::Config {
                line: n + 1,
                message: format!("expected 'col,row -> piece', got {line:?}"),
            };
            let (coord, piece) = line.split_once("->").ok_or_else(bad)?;
            let (c, r) = coord.trim().split_once(',').ok_or_else(bad)?;
            let c: usize = c.trim().parse().map_err(|_| bad())?;
            let r: usize = r.trim().parse().map_err(|_| bad())?;
            let piece: usize = piece.trim().parse().map_err(|_| bad())?;
            if c >= cols || r >= rows || cells[r * cols + c] != usize::MAX {
                return Err(bad());
            }
            cells[r * cols + c] = piece;
        }
        Self::new(cols, rows, cells)
    }
}

/// Pastes every piece at its assigned cell.
pub fn assemble(pieces: &PieceSet, assembly: &Assembly) -> Result<Image> {
    if assembly.cols != pieces.cols || assembly.rows != pieces.rows {
        return Err(Error::Geometry(format!(
            "assembly board {}x{} does not match piece board {}x{}",
            assembly.cols, assembly.rows, pieces.cols, pieces.rows
        )));
    }
    let s = pieces.side;
    let mut out = Image::new(pieces.cols * s, pieces.rows * s)?;
    for (cell, &p) in assembly.cells.iter().enumerate() {
        out.paste(&pieces.pieces[p], (cell % pieces.cols) * s, (cell / pieces.cols) * s)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cipher::{scramble_blocks_only, Key};

    fn textured(w: usize, h: usize) -> Image {
        Image::from_fn(w, h, |x, y| [(x * 3 + y) as u8, (y * 5) as u8, (x ^ y) as u8]).unwrap()
    }

    #[test]
    fn cut_224_gives_14x14_board() {
        let p = cut_pieces(&textured(224, 224), 16).unwrap();
        assert_eq!((p.cols(), p.rows(), p.len()), (14, 14, 196));
    }

    #[test]
    fn cut_single_piece() {
        let img = textured(16, 16);
        let p = cut_pieces(&img, 16).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.get(0), &img);
    }

    #[test]
    fn identity_assembly_restores_input() {
        let img = textured(48, 32);
        let p = cut_pieces(&img, 16).unwrap();
        assert_eq!(assemble(&p, &Assembly::identity(3, 2)).unwrap(), img);
        let odd = textured(15, 10);
        let p = cut_pieces(&odd, 5).unwrap();
        assert_eq!(assemble(&p, &Assembly::identity(3, 2)).unwrap(), odd);
    }

    #[test]
    fn undoing_block_key_restores_layout() {
        let img = textured(64, 48);
        let scrambled = scramble_blocks_only(&img, 16, Key::Seed(31)).unwrap();
        let perm = Key::Seed(31).permutation(12).unwrap();
        let pieces = cut_pieces(&scrambled, 16).unwrap();
        let a = Assembly::undoing(4, 3, &perm).unwrap();
        assert_eq!(assemble(&pieces, &a).unwrap(), img);
    }

    #[test]
    fn incomplete_assemblies_are_rejected() {
        assert!(matches!(Assembly::new(2, 2, vec![0, 1, 2]), Err(Error::Incomplete(_))));
        assert!(matches!(Assembly::new(2, 2, vec![0, 1, 2, 2]), Err(Error::Incomplete(_))));
        assert!(cut_pieces(&textured(20, 16), 16).is_err());
    }

    #[test]
    fn text_round_trip() {
        let a = Assembly::new(3, 2, vec![5, 3, 1, 0, 2, 4]).unwrap();
        let text = a.to_text();
        assert!(text.starts_with("0,0 -> 5\n1,0 -> 3\n"));
        assert_eq!(Assembly::parse_text(3, 2, &text).unwrap(), a);
        assert!(Assembly::parse_text(3, 2, "0,0 -> 1\n").is_err());
    }
}

//! graph6 encoding: an `N(n)` order header followed by the upper triangle of
//! the adjacency matrix, column by column, packed six bits per printable byte
//! (value + 63), zero-padded at the end.

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("empty graph6 string")]
    Empty,
    #[error("malformed order header")]
    MalformedHeader,
    #[error("byte {byte:#04x} at offset {offset} is outside the graph6 range 63..=126")]
    InvalidByte { offset: usize, byte: u8 },
    #[error("truncated bit stream: expected {expected} data bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("{extra} trailing bytes after the bit stream")]
    TrailingGarbage { extra: usize },
    #[error("padding bits in the last data byte are not zero")]
    NonzeroPadding,
    #[error("order {0} is too large to encode")]
    OrderTooLarge(u64),
}

const BIAS: u8 = 63;
const OPTIONAL_PREFIX: &[u8] = b">>graph6<<";
const MAX_ORDER: u64 = (1 << 36) - 1;

fn encode_order(order: usize, out: &mut Vec<u8>) -> Result<(), Graph6Error> {
    let n = order as u64;
    if n <= 62 {
        out.push(n as u8 + BIAS);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + BIAS);
        }
    } else if n <= MAX_ORDER {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + BIAS);
        }
    } else {
        return Err(Graph6Error::OrderTooLarge(n));
    }
    Ok(())
}

/// Encodes `g` as graph6 bytes (no trailing newline).
pub fn emit_graph6(g: &Graph) -> Vec<u8> {
    let n = g.order();
    let mut out = Vec::with_capacity(1 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    encode_order(n, &mut out).expect("graph order fits in 36 bits");
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + BIAS);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + BIAS);
    }
    out
}

/// `emit_graph6` as a `String`; graph6 output is always ASCII.
pub fn emit_graph6_string(g: &Graph) -> String {
    String::from_utf8(emit_graph6(g)).expect("graph6 is ASCII")
}

fn sextet(bytes: &[u8], offset: usize) -> Result<usize, Graph6Error> {
    match bytes.get(offset) {
        Some(&b) if (BIAS..=126).contains(&b) => Ok((b - BIAS) as usize),
        Some(&b) => Err(Graph6Error::InvalidByte { offset, byte: b }),
        None => Err(Graph6Error::MalformedHeader),
    }
}

fn decode_order(bytes: &[u8]) -> Result<(usize, usize), Graph6Error> {
    let first = sextet(bytes, 0)?;
    if first < 63 {
        return Ok((first, 1));
    }
    let (start, digits) = if bytes.get(1) == Some(&126) { (2, 6) } else { (1, 3) };
    let mut n = 0u64;
    for i in 0..digits {
        n = n << 6 | sextet(bytes, start + i)? as u64;
    }
    // the long forms are only valid for orders the shorter forms cannot hold
    let canonical = if digits == 3 { n > 62 } else { n > 258_047 };
    if !canonical {
        return Err(Graph6Error::MalformedHeader);
    }
    let n = usize::try_from(n).map_err(|_| Graph6Error::OrderTooLarge(n))?;
    Ok((n, start + digits))
}

/// Parses a single graph6 record. An optional `>>graph6<<` prefix is accepted;
/// line terminators are not.
pub fn parse_graph6(text: &[u8]) -> Result<Graph, Graph6Error> {
    let text = text.strip_prefix(OPTIONAL_PREFIX).unwrap_or(text);
    if text.is_empty() {
        return Err(Graph6Error::Empty);
    }
    let (n, header_len) = decode_order(text)?;
    let bit_count = n * n.saturating_sub(1) / 2;
    let expected = bit_count.div_ceil(6);
    let data = &text[header_len..];
    if data.len() < expected {
        return Err(Graph6Error::Truncated { expected, found: data.len() });
    }
    if data.len() > expected {
        return Err(Graph6Error::TrailingGarbage { extra: data.len() - expected });
    }
    for (i, &b) in data.iter().enumerate() {
        if !(BIAS..=126).contains(&b) {
            return Err(Graph6Error::InvalidByte { offset: header_len + i, byte: b });
        }
    }
    let pad = expected * 6 - bit_count;
    if pad > 0 && (data[expected - 1] - BIAS) & ((1 << pad) - 1) != 0 {
        return Err(Graph6Error::NonzeroPadding);
    }
    let mut edges = Vec::new();
    let mut bit = 0usize;
    for j in 1..n {
        for i in 0..j {
            let byte = data[bit / 6] - BIAS;
            if byte >> (5 - bit % 6) & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    Ok(Graph::from_edges(n, edges).expect("decoded edges are simple and in range"))
}

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::AudioBuffer;

const FORMAT_PCM: u16 = 0x0001;
const FORMAT_IEEE_FLOAT: u16 = 0x0003;
const FORMAT_EXTENSIBLE: u16 = 0xFFFE;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Encoding {
    Pcm16,
    Float32,
}

#[derive(Debug, Clone, Copy)]
struct FormatChunk {
    encoding: Encoding,
    channels: u16,
    sample_rate: u32,
    block_align: u16,
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

fn parse_format(body: &[u8]) -> Result<FormatChunk> {
    if body.len() < 16 {
        return Err(Error::MalformedHeader(format!("fmt chunk of {} bytes", body.len())));
    }
    let mut tag = u16_at(body, 0);
    let channels = u16_at(body, 2);
    let sample_rate = u32_at(body, 4);
    let block_align = u16_at(body, 12);
    let bits = u16_at(body, 14);
    if tag == FORMAT_EXTENSIBLE {
        // cbSize, valid bits, channel mask, then the sub-format GUID whose
        // first two bytes carry the actual format tag.
        if body.len() < 26 {
            return Err(Error::MalformedHeader("truncated WAVE_FORMAT_EXTENSIBLE block".into()));
        }
        tag = u16_at(body, 24);
    }
    if channels == 0 {
        return Err(Error::MalformedHeader("zero channels".into()));
    }
    if sample_rate == 0 {
        return Err(Error::MalformedHeader("zero sample rate".into()));
    }
    let encoding = match (tag, bits) {
        (FORMAT_PCM, 16) => Encoding::Pcm16,
        (FORMAT_IEEE_FLOAT, 32) => Encoding::Float32,
        (FORMAT_PCM, b) => return Err(Error::UnsupportedEncoding(format!("{b}-bit PCM"))),
        (FORMAT_IEEE_FLOAT, b) => return Err(Error::UnsupportedEncoding(format!("{b}-bit float"))),
        (t, _) => return Err(Error::UnsupportedEncoding(format!("format tag 0x{t:04X}"))),
    };
    let bytes_per_sample = if encoding == Encoding::Pcm16 { 2 } else { 4 };
    if usize::from(block_align) != bytes_per_sample * usize::from(channels) {
        return Err(Error::MalformedHeader(format!("block align {block_align} inconsistent with format")));
    }
    Ok(FormatChunk { encoding, channels, sample_rate, block_align })
}

/// Decodes a RIFF/WAVE byte stream into a mono buffer.
///
/// Supports 16-bit PCM and 32-bit IEEE float (plain or extensible headers).
/// Channels are averaged; PCM is scaled by 1/32768 so that -32768 maps to
/// exactly -1. Float samples beyond full scale are clamped.
pub fn decode_wav<T: Real>(bytes: &[u8]) -> Result<AudioBuffer<T>> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(Error::MalformedHeader("missing RIFF/WAVE signature".into()));
    }
    let mut format = None;
    let mut pos = 12;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = u32_at(bytes, pos + 4) as usize;
        let body_start = pos + 8;
        if id == b"fmt " {
            let end = body_start.checked_add(size).filter(|&e| e <= bytes.len()).ok_or_else(|| {
                Error::MalformedHeader("fmt chunk runs past end of file".into())
            })?;
            format = Some(parse_format(&bytes[body_start..end])?);
        } else if id == b"data" {
            let fmt = format.ok_or_else(|| Error::MalformedHeader("data chunk before fmt chunk".into()))?;
            let available = bytes.len() - body_start;
            if size > available {
                return Err(Error::TruncatedData { declared: size, found: available });
            }
            return Ok(decode_samples(&bytes[body_start..body_start + size], fmt));
        }
        pos = body_start.saturating_add(size).saturating_add(size & 1);
    }
    Err(Error::MalformedHeader(if format.is_some() { "no data chunk" } else { "no fmt chunk" }.into()))
}

fn decode_samples<T: Real>(data: &[u8], fmt: FormatChunk) -> AudioBuffer<T> {
    let channels = usize::from(fmt.channels);
    let block = usize::from(fmt.block_align);
    let inv_channels = 1.0 / channels as f64;
    let samples = data
        .chunks_exact(block)
        .map(|frame| {
            let sum: f64 = match fmt.encoding {
                Encoding::Pcm16 => frame
                    .chunks_exact(2)
                    .map(|c| f64::from(i16::from_le_bytes([c[0], c[1]])) / 32768.0)
                    .sum(),
                Encoding::Float32 => frame
                    .chunks_exact(4)
                    .map(|c| {
                        let v = f64::from(f32::from_le_bytes([c[0], c[1], c[2], c[3]]));
                        if v.is_finite() { v.clamp(-1.0, 1.0) } else { 0.0 }
                    })
                    .sum(),
            };
            T::lit(sum * inv_channels)
        })
        .collect();
    AudioBuffer { samples, sample_rate_hz: fmt.sample_rate }
}

fn header(channels: u16, sample_rate: u32, tag: u16, bits: u16, data_len: usize) -> Vec<u8> {
    let block_align = channels * bits / 8;
    let mut out = Vec::with_capacity(44 + data_len);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&((36 + data_len) as u32).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&tag.to_le_bytes());
    out.extend_from_slice(&channels.to_le_bytes());
    out.extend_from_slice(&sample_rate.to_le_bytes());
    out.extend_from_slice(&(sample_rate * u32::from(block_align)).to_le_bytes());
    out.extend_from_slice(&block_align.to_le_bytes());
    out.extend_from_slice(&bits.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&(data_len as u32).to_le_bytes());
    out
}

/// Encodes interleaved samples as 16-bit PCM. Values are clamped to full scale.
pub fn encode_wav_pcm16<T: Real>(interleaved: &[T], channels: u16, sample_rate: u32) -> Vec<u8> {
    let mut out = header(channels, sample_rate, FORMAT_PCM, 16, interleaved.len() * 2);
    for &s in interleaved {
        let v = (s.to_f64_lossy() * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

/// Encodes interleaved samples as 32-bit IEEE float.
pub fn encode_wav_f32<T: Real>(interleaved: &[T], channels: u16, sample_rate: u32) -> Vec<u8> {
    let mut out = header(channels, sample_rate, FORMAT_IEEE_FLOAT, 32, interleaved.len() * 4);
    for &s in interleaved {
        out.extend_from_slice(&(s.to_f64_lossy() as f32).to_le_bytes());
    }
    out
}

/**
 * Wire protocol shared with the solver.
 *
 * Request:  "PNPD" + version 0x01 + height u32 LE + width u32 LE
 *           + strength f64 LE + height*width pixels f64 LE row-major.
 * Response: "PNPR" + version byte + same-shape pixel payload.
 */

export const MAGIC_REQUEST = Buffer.from('PNPD');
export const MAGIC_RESPONSE = Buffer.from('PNPR');
export const PROTOCOL_VERSION = 1;
export const HEADER_SIZE = 4 + 1 + 4 + 4 + 8;

export interface RequestHeader {
  height: number;
  width: number;
  strength: number;
}

export class ProtocolViolation extends Error {}

export function parseRequestHeader(buf: Buffer): RequestHeader {
  if (buf.length < HEADER_SIZE) {
    throw new ProtocolViolation(`header needs ${HEADER_SIZE} bytes, got ${buf.length}`);
  }
  const magic = buf.subarray(0, 4);
  if (!magic.equals(MAGIC_REQUEST)) {
    throw new ProtocolViolation(`bad request magic ${JSON.stringify(magic.toString('latin1'))}`);
  }
  const version = buf.readUInt8(4);
  if (version !== PROTOCOL_VERSION) {
    throw new ProtocolViolation(`unsupported protocol version ${version}`);
  }
  const height = buf.readUInt32LE(5);
  const width = buf.readUInt32LE(9);
  if (height === 0 || width === 0) {
    throw new ProtocolViolation(`degenerate grid ${height}x${width}`);
  }
  return { height, width, strength: buf.readDoubleLE(13) };
}

export function decodePixels(buf: Buffer, count: number): Float64Array {
  if (buf.length < count * 8) {
    throw new ProtocolViolation(`payload needs ${count * 8} bytes, got ${buf.length}`);
  }
  const out = new Float64Array(count);
  for (let i = 0; i < count; i++) {
    out[i] = buf.readDoubleLE(i * 8);
  }
  return out;
}

export function encodePixels(pixels: Float64Array): Buffer {
  const out = Buffer.allocUnsafe(pixels.length * 8);
  for (let i = 0; i < pixels.length; i++) {
    out.writeDoubleLE(pixels[i], i * 8);
  }
  return out;
}

export function encodeResponse(pixels: Float64Array): Buffer {
  const head = Buffer.allocUnsafe(5);
  MAGIC_RESPONSE.copy(head, 0);
  head.writeUInt8(PROTOCOL_VERSION, 4);
  return Buffer.concat([head, encodePixels(pixels)]);
}

/** Build a request frame (used by the tests to act as a client). */
export function encodeRequest(height: number, width: number, strength: number, pixels: Float64Array): Buffer {
  const head = Buffer.allocUnsafe(HEADER_SIZE);
  MAGIC_REQUEST.copy(head, 0);
  head.writeUInt8(PROTOCOL_VERSION, 4);
  head.writeUInt32LE(height, 5);
  head.writeUInt32LE(width, 9);
  head.writeDoubleLE(strength, 13);
  return Buffer.concat([head, encodePixels(pixels)]);
}

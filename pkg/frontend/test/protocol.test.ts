import { describe, expect, it } from 'vitest';

import {
  HEADER_SIZE,
  ProtocolViolation,
  decodePixels,
  encodePixels,
  encodeRequest,
  parseRequestHeader,
} from '../src/protocol.js';

describe('request header', () => {
  it('round-trips through encodeRequest', () => {
    const frame = encodeRequest(7, 11, 0.25, new Float64Array(77));
    const header = parseRequestHeader(frame);
    expect(header).toEqual({ height: 7, width: 11, strength: 0.25 });
    expect(frame.length).toBe(HEADER_SIZE + 77 * 8);
  });

  it('rejects a bad magic', () => {
    const frame = encodeRequest(2, 2, 0, new Float64Array(4));
    frame.write('XNPD', 0);
    expect(() => parseRequestHeader(frame)).toThrow(ProtocolViolation);
  });

  it('rejects an unknown version', () => {
    const frame = encodeRequest(2, 2, 0, new Float64Array(4));
    frame.writeUInt8(9, 4);
    expect(() => parseRequestHeader(frame)).toThrow(/version/);
  });

  it('rejects degenerate shapes', () => {
    const frame = encodeRequest(0, 4, 0, new Float64Array(0));
    expect(() => parseRequestHeader(frame)).toThrow(/degenerate/);
  });
});

describe('pixel payload', () => {
  it('encodes and decodes exactly', () => {
    const values = new Float64Array([0, -1.5, 3.25e-300, 1e300, Math.PI, -0]);
    const decoded = decodePixels(encodePixels(values), values.length);
    expect(Array.from(decoded)).toEqual(Array.from(values));
  });

  it('rejects a short payload', () => {
    expect(() => decodePixels(Buffer.alloc(15), 2)).toThrow(ProtocolViolation);
  });
});

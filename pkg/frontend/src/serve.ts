/**
 * The request/response loop: decode each frame, apply the model, reply,
 * flush. Runs until clean end-of-stream; malformed input or a non-finite
 * model output aborts without writing a response.
 */

import { Readable, Writable } from 'node:stream';

import { Model } from './models.js';
import {
  HEADER_SIZE,
  ProtocolViolation,
  decodePixels,
  encodeResponse,
  parseRequestHeader,
} from './protocol.js';

function writeAll(stream: Writable, buf: Buffer): Promise<void> {
  return new Promise((resolve, reject) => {
    stream.write(buf, (err) => (err ? reject(err) : resolve()));
  });
}

export async function serveLoop(model: Model, input: Readable, output: Writable): Promise<number> {
  let pending = Buffer.alloc(0);
  let served = 0;
  for await (const chunk of input) {
    pending = pending.length === 0 ? (chunk as Buffer) : Buffer.concat([pending, chunk as Buffer]);
    while (pending.length >= HEADER_SIZE) {
      const header = parseRequestHeader(pending);
      const frameSize = HEADER_SIZE + header.height * header.width * 8;
      if (pending.length < frameSize) break;

      const values = decodePixels(pending.subarray(HEADER_SIZE, frameSize), header.height * header.width);
      pending = pending.subarray(frameSize);

      const out = model(
        { height: header.height, width: header.width, values },
        header.strength,
      );
      if (out.length !== values.length) {
        throw new Error(`model changed size ${values.length} -> ${out.length}`);
      }
      for (let i = 0; i < out.length; i++) {
        if (!Number.isFinite(out[i])) {
          throw new Error(`model produced a non-finite value at pixel ${i}`);
        }
      }
      await writeAll(output, encodeResponse(out));
      served += 1;
    }
  }
  if (pending.length > 0) {
    throw new ProtocolViolation(`stream ended mid-frame with ${pending.length} trailing bytes`);
  }
  return served;
}

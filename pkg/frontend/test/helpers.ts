import { ChildProcess, spawn } from 'node:child_process';
import { fileURLToPath } from 'node:url';

export const BRIDGE_MAIN = fileURLToPath(new URL('../dist/main.js', import.meta.url));

/** Minimal protocol client around a spawned bridge process. */
export class BridgeClient {
  proc: ChildProcess;
  private chunks: Buffer[] = [];
  private length = 0;
  stderr = '';

  constructor(args: string[]) {
    this.proc = spawn(process.execPath, [BRIDGE_MAIN, ...args], {
      stdio: ['pipe', 'pipe', 'pipe'],
    });
    this.proc.stdout!.on('data', (chunk: Buffer) => {
      this.chunks.push(chunk);
      this.length += chunk.length;
    });
    this.proc.stderr!.on('data', (chunk: Buffer) => {
      this.stderr += chunk.toString();
    });
  }

  write(buf: Buffer): void {
    this.proc.stdin!.write(buf);
  }

  /** Wait until exactly n bytes of stdout are available and consume them. */
  async read(n: number, timeoutMs = 10_000): Promise<Buffer> {
    const deadline = Date.now() + timeoutMs;
    while (this.length < n) {
      if (this.proc.exitCode !== null && this.length < n) {
        throw new Error(`bridge exited (${this.proc.exitCode}) with ${this.length}/${n} bytes; stderr: ${this.stderr}`);
      }
      if (Date.now() > deadline) {
        throw new Error(`timeout waiting for ${n} bytes (have ${this.length})`);
      }
      await new Promise((r) => setTimeout(r, 2));
    }
    const all = Buffer.concat(this.chunks);
    this.chunks = [all.subarray(n)];
    this.length = all.length - n;
    return all.subarray(0, n);
  }

  async close(): Promise<{ code: number | null; stdout: Buffer; stderr: string }> {
    this.proc.stdin!.end();
    const code = await new Promise<number | null>((resolve) => {
      if (this.proc.exitCode !== null) resolve(this.proc.exitCode);
      else this.proc.on('exit', (c) => resolve(c));
    });
    return { code, stdout: Buffer.concat(this.chunks), stderr: this.stderr };
  }
}

export function randomValues(n: number, seed: number): Float64Array {
  // mulberry32, same flavor the selfcheck uses; good enough for test data
  let state = seed >>> 0;
  const rng = () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
  const out = new Float64Array(n);
  for (let i = 0; i < n; i++) {
    out[i] = 4 * rng() - 2;
  }
  return out;
}

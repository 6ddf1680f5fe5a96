#!/usr/bin/env node
/**
 * Bridge entry point.
 *
 *   pnpdeblur-bridge serve     [--model <spec>]            # default command
 *   pnpdeblur-bridge selfcheck [--model <spec>] [--pairs n] [--seed n]
 *
 * The model spec (identity | scale:<k> | blur:<sigma> | dct) comes from
 * --model or the BRIDGE_MODEL environment variable.
 */

import process from 'node:process';

import { createModel } from './models.js';
import { runSelfcheck } from './selfcheck.js';
import { serveLoop } from './serve.js';

interface Args {
  command: string;
  model: string;
  pairs: number;
  seed: number;
}

function parseArgs(argv: string[]): Args {
  const args: Args = {
    command: 'serve',
    model: process.env.BRIDGE_MODEL ?? 'identity',
    pairs: 200,
    seed: 0,
  };
  let i = 0;
  if (argv.length > 0 && !argv[0].startsWith('--')) {
    args.command = argv[0];
    i = 1;
  }
  for (; i < argv.length; i++) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (flag === '--model' && value !== undefined) {
      args.model = value;
      i++;
    } else if (flag === '--pairs' && value !== undefined) {
      args.pairs = Number(value);
      i++;
    } else if (flag === '--seed' && value !== undefined) {
      args.seed = Number(value);
      i++;
    } else {
      throw new Error(`unknown argument ${flag}`);
    }
  }
  return args;
}

async function main(): Promise<number> {
  const args = parseArgs(process.argv.slice(2));
  const model = createModel(args.model);

  if (args.command === 'serve') {
    await serveLoop(model, process.stdin, process.stdout);
    return 0;
  }
  if (args.command === 'selfcheck') {
    const report = runSelfcheck(model, args.pairs, args.seed);
    process.stdout.write(JSON.stringify(report) + '\n');
    return 0;
  }
  throw new Error(`unknown command ${args.command}`);
}

main()
  .then((code) => process.exit(code))
  .catch((err) => {
    process.stderr.write(`pnpdeblur-bridge: ${err.message ?? err}\n`);
    process.exit(2);
  });

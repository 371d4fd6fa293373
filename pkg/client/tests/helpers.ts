import path from "node:path";
import { fileURLToPath } from "node:url";

import { RemoteEnv } from "../src/client.js";

const HERE = path.dirname(fileURLToPath(import.meta.url));

export const REPO_ROOT = path.resolve(HERE, "..", "..");
export const GOLDEN_DIR = path.join(REPO_ROOT, "tests", "golden");
export const PYTHON = process.env.PYTHON ?? "python3";

export function spawnServer(): Promise<RemoteEnv> {
  return RemoteEnv.spawnStdio(PYTHON, ["-m", "cribworld.cli", "serve", "--stdio"],
                              { cwd: REPO_ROOT });
}

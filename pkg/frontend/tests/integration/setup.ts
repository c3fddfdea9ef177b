// Boots the real decision service with the small fixture catalog in a scratch
// directory, hands its base URL to the tests, and tears it down afterwards.

import { type ChildProcess, spawn } from "node:child_process";
import { cpSync, mkdirSync, mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import * as path from "node:path";

import type { GlobalSetupContext } from "vitest/node";

const REPO_ROOT = path.resolve(__dirname, "..", "..", "..");

declare module "vitest" {
  export interface ProvidedContext {
    baseUrl: string;
  }
}

async function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const probe = createServer();
    probe.once("error", reject);
    probe.listen(0, "127.0.0.1", () => {
      const address = probe.address();
      if (address === null || typeof address === "string") {
        reject(new Error("no port"));
        return;
      }
      probe.close(() => resolve(address.port));
    });
  });
}

async function waitForService(baseUrl: string, child: ChildProcess): Promise<void> {
  const deadline = Date.now() + 30_000;
  while (Date.now() < deadline) {
    if (child.exitCode !== null) {
      throw new Error(`service exited early with code ${child.exitCode}`);
    }
    try {
      const response = await fetch(`${baseUrl}/products`);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error(`service at ${baseUrl} never came up`);
}

export default async function setup({ provide }: GlobalSetupContext): Promise<() => void> {
  const workdir = mkdtempSync(path.join(tmpdir(), "relife-console-"));
  mkdirSync(path.join(workdir, "data"));
  mkdirSync(path.join(workdir, "config"));
  cpSync(
    path.join(REPO_ROOT, "fixtures", "catalog_small.json"),
    path.join(workdir, "data", "catalog.json"),
  );
  cpSync(
    path.join(REPO_ROOT, "config", "ruleset.default.json"),
    path.join(workdir, "config", "ruleset.default.json"),
  );
  const port = await freePort();
  writeFileSync(
    path.join(workdir, "config", "service.json"),
    JSON.stringify({
      host: "127.0.0.1",
      port,
      catalog_path: "data/catalog.json",
      cases_path: "data/cases.json",
      decision_log_path: "data/decision_log.jsonl",
      ruleset_path: "config/ruleset.default.json",
      cbr: { k: 3, tau: 0.6, dedup_threshold: 0.95, weights: {} },
      step_budget: 10000,
      clock: "logical",
    }),
  );

  const child = spawn("python3", ["-m", "relife.service"], {
    cwd: workdir,
    env: {
      ...process.env,
      RELIFE_CONFIG: path.join(workdir, "config", "service.json"),
      PYTHONPATH: path.join(REPO_ROOT, "src"),
    },
    stdio: "ignore",
  });

  const baseUrl = `http://127.0.0.1:${port}`;
  await waitForService(baseUrl, child);
  provide("baseUrl", baseUrl);

  return () => {
    child.kill("SIGTERM");
    rmSync(workdir, { recursive: true, force: true });
  };
}

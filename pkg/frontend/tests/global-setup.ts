/** Boots one real annotation service for the e2e run: 20 tasks, two
 * annotators, scripted backends. The service is the Python CLI, reached
 * only over HTTP. */

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";
import type { GlobalSetupContext } from "vitest/node";

const PYTHON = process.env.PYTHON ?? "python3";

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const server = createServer();
    server.listen(0, "127.0.0.1", () => {
      const address = server.address();
      if (address === null || typeof address === "string") {
        reject(new Error("no port assigned"));
        return;
      }
      const port = address.port;
      server.close(() => resolve(port));
    });
    server.on("error", reject);
  });
}

async function waitForHealth(baseUrl: string, timeoutMs = 30_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  let lastError: unknown = null;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${baseUrl}/healthz`);
      if (response.ok) return;
    } catch (error) {
      lastError = error;
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
  throw new Error(`service never became healthy: ${lastError}`);
}

export default async function setup({ provide }: GlobalSetupContext): Promise<() => void> {
  const workDir = mkdtempSync(join(tmpdir(), "annotation-e2e-"));

  const outputs = Array.from({ length: 20 }, (_, i) =>
    JSON.stringify({
      sample_id: `s${String(i).padStart(3, "0")}`,
      question: `Question ${i}: describe the scene and draw it?`,
      generator_id: "gen-e2e",
      answer_text: `Answer text ${i}.`,
      image_ref: null,
    }),
  ).join("\n");
  writeFileSync(join(workDir, "outputs.jsonl"), outputs + "\n");

  const port = await freePort();
  const manifest = [
    "run_id: e2e",
    "seed: 7",
    "backends:",
    "  lm: {kind: scripted, model_name: mock-lm, script: canned}",
    "annotation:",
    "  event_log: events.jsonl",
    "  outputs: outputs.jsonl",
    "  tokens: {tok-alice: alice, tok-bob: bob}",
    `  port: ${port}`,
    "  assignees_per_task: 2",
    "",
  ].join("\n");
  writeFileSync(join(workDir, "run.yaml"), manifest);

  const child: ChildProcess = spawn(
    PYTHON,
    ["-m", "interweave.cli", "serve-annotation", "--manifest", join(workDir, "run.yaml")],
    { stdio: "ignore" },
  );
  const baseUrl = `http://127.0.0.1:${port}`;
  await waitForHealth(baseUrl);

  provide("annotationBaseUrl", baseUrl);
  provide("workDir", workDir);

  return () => {
    child.kill("SIGTERM");
  };
}

declare module "vitest" {
  export interface ProvidedContext {
    annotationBaseUrl: string;
    workDir: string;
  }
}

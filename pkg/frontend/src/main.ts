import { ConsoleApi } from "./api.js";
import { ConsoleApp } from "./app.js";
import type { AppElements, } from "./app.js";
import type { ConsoleConfig } from "./types.js";

async function loadConfig(): Promise<ConsoleConfig> {
  try {
    const response = await fetch("./console.config.json");
    if (response.ok) {
      const data = await response.json();
      return {
        baseUrl: typeof data.baseUrl === "string" ? data.baseUrl : "",
        pollIntervalMs: typeof data.pollIntervalMs === "number" ? data.pollIntervalMs : 2000,
      };
    }
  } catch {
    // fall through to same-origin defaults
  }
  return { baseUrl: "", pollIntervalMs: 2000 };
}

async function bootstrap(): Promise<void> {
  const config = await loadConfig();
  const els: AppElements = {
    banner: document.getElementById("banner")!,
    intake: document.getElementById("intake")!,
    queue: document.getElementById("queue")!,
    inspection: document.getElementById("inspection")!,
    dashboard: document.getElementById("dashboard")!,
  };
  const app = new ConsoleApp(els, new ConsoleApi(config.baseUrl), config.pollIntervalMs);
  app.start();
}

void bootstrap();

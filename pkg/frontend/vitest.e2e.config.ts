import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/e2e.service.test.ts"],
    environment: "node",
    globalSetup: ["tests/global-setup.ts"],
    testTimeout: 60_000,
    hookTimeout: 60_000,
  },
});

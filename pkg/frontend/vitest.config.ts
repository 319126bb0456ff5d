import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["test/**/*.test.ts"],
    // the e2e test boots the Python service and solves real models
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});

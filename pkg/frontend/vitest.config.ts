import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    // Every test spawns the real CLI, and a Python process pays its
    // interpreter startup each time.
    testTimeout: 300_000,
    hookTimeout: 60_000,
  },
});

import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    // The end-to-end suite boots a real advisor service and the first
    // session solves a policy table, which takes a few seconds.
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});

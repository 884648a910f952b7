import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["test/**/*.test.ts"],
    environment: "node",
    // live-server tests spawn a real API process and play whole games
    testTimeout: 120_000,
    hookTimeout: 60_000,
  },
});

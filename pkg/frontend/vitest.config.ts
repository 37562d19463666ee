import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "happy-dom",
    // the UI is served from the same origin as the API; mirror that so
    // happy-dom's same-origin policy matches the deployment
    environmentOptions: {
      happyDOM: { url: "http://127.0.0.1:8931" },
    },
    include: ["test/**/*.test.ts"],
    testTimeout: 30000,
    hookTimeout: 30000,
  },
});

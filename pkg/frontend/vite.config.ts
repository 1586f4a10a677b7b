import { defineConfig } from "vite";

export default defineConfig({
  server: {
    // dev convenience: same-origin API calls proxy to the session service
    proxy: {
      "/sessions": "http://127.0.0.1:8000",
    },
  },
  test: {
    environment: "node",
    include: ["tests/**/*.test.ts"],
    testTimeout: 30_000,
    hookTimeout: 30_000,
  },
});

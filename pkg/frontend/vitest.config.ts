import { defineConfig } from "vitest/config";

export default defineConfig({
    test: {
        environment: "jsdom",
        globalSetup: "./tests/global-setup.ts",
        testTimeout: 30_000,
        hookTimeout: 120_000,
        fileParallelism: false,
    },
});

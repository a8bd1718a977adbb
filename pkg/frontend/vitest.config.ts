import { defineConfig } from "vitest/config";

export default defineConfig({
    test: {
        environment: "happy-dom",
        include: ["test/**/*.test.ts"],
        environmentOptions: {
            // live tests run same-origin, exactly like the bundle served at /ui
            happyDOM: { url: process.env.FUZZYGEO_BASE_URL || "http://localhost/" },
        },
    },
});

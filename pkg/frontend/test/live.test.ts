/** End-to-end flow against a real running service. Skipped unless
 * FUZZYGEO_BASE_URL points at one, e.g.:
 *
 *   fuzzygeo serve --port 8000 --gazetteer g.geojson --store ./store &
 *   FUZZYGEO_BASE_URL=http://127.0.0.1:8000 npm test
 */

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { AnnotatorApp } from "../src/app";

declare const process: { env: Record<string, string | undefined> };

const BASE = process.env.FUZZYGEO_BASE_URL ?? "";

async function until(fn: () => boolean, what: string): Promise<void> {
    for (let i = 0; i < 200; i++) {
        if (fn()) return;
        await new Promise((r) => setTimeout(r, 10));
    }
    throw new Error(`timeout waiting for ${what}`);
}

function click(root: HTMLElement, label: string): void {
    const button = [...root.querySelectorAll("button")]
        .find((b) => b.textContent === label);
    if (!button) throw new Error(`no button labeled ${label}`);
    button.dispatchEvent(new MouseEvent("click", { bubbles: true }));
}

function shown(root: HTMLElement): string {
    return root.querySelector(".annotator-expression")?.textContent ?? "";
}

async function startApp(sessionId: string, judge: string): Promise<HTMLElement> {
    const root = document.createElement("div");
    document.body.appendChild(root);
    const app = new AnnotatorApp(root, { baseUrl: BASE, sessionId, judgeId: judge });
    await app.start();
    return root;
}

describe.skipIf(!BASE)("live service flow", () => {
    it("runs the 2x2 fixture to a 0.5 score with a mid-session reload", async () => {
        const create = await fetch(`${BASE}/sessions`, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify({
                expressions: ["in Ohio", "near Asheville"],
                judges: ["judge-a", "judge-b"],
            }),
        });
        expect(create.status).toBe(201);
        const { session_id: sid } = await create.json();

        const rootA = await startApp(sid, "judge-a");
        await until(() => shown(rootA).includes("in Ohio"), "a task 0");
        click(rootA, "Strongly agree");
        await until(() => shown(rootA).includes("near Asheville"), "a task 1");
        click(rootA, "Agree");
        await until(() => rootA.querySelector(".annotator-done") !== null, "a done");

        const rootB = await startApp(sid, "judge-b");
        await until(() => shown(rootB).includes("in Ohio"), "b task 0");
        click(rootB, "Disagree");
        await until(() => shown(rootB).includes("near Asheville"), "b advanced");

        // reload: a fresh client must resume at the second expression
        const rootB2 = await startApp(sid, "judge-b");
        await until(() => shown(rootB2).includes("near Asheville"), "b resumed");
        click(rootB2, "Strongly agree");
        await until(() => rootB2.querySelector(".session-complete") !== null,
            "completion");
        expect(rootB2.querySelector(".session-complete")?.textContent)
            .toContain("Score: 0.500");

        const score = await new ApiClient(BASE).score(sid);
        expect(score.complete).toBe(true);
        expect(score.score).toBeCloseTo(0.5, 12);
    }, 30000);
});

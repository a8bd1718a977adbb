import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { AnnotatorApp } from "../src/app";
import { MockServer } from "./mockServer";

function mount(): HTMLElement {
    const root = document.createElement("div");
    document.body.appendChild(root);
    return root;
}

async function until(fn: () => boolean, what: string): Promise<void> {
    for (let i = 0; i < 100; i++) {
        if (fn()) return;
        await new Promise((r) => setTimeout(r, 2));
    }
    throw new Error(`timeout waiting for ${what}`);
}

function click(root: HTMLElement, label: string): void {
    const button = [...root.querySelectorAll("button")]
        .find((b) => b.textContent === label);
    if (!button) throw new Error(`no button labeled ${label}`);
    button.dispatchEvent(new MouseEvent("click", { bubbles: true }));
}

function shownExpression(root: HTMLElement): string {
    return root.querySelector(".annotator-expression")?.textContent ?? "";
}

async function startApp(server: MockServer, judge: string): Promise<HTMLElement> {
    const root = mount();
    const app = new AnnotatorApp(root, {
        baseUrl: "",
        sessionId: server.sessionId,
        judgeId: judge,
    }, server.fetch);
    await app.start();
    return root;
}

beforeEach(() => {
    document.body.replaceChildren();
    localStorage.clear();
});

describe("scripted 2x2 annotation session", () => {
    it("rates [SA, A; D, SA], resumes after a reload, and scores 0.5", async () => {
        const server = MockServer.withTexts(
            "s-fixture", ["in Ohio", "near Asheville"], ["judge-a", "judge-b"]);

        // judge a rates both expressions: SA then A
        const rootA = await startApp(server, "judge-a");
        await until(() => shownExpression(rootA).includes("in Ohio"), "task 0 for a");
        expect(rootA.querySelector(".annotator-progress")?.textContent)
            .toBe("task 1 of 2");
        click(rootA, "Strongly agree");
        await until(() => shownExpression(rootA).includes("near Asheville"),
            "advance to task 1");
        click(rootA, "Agree");
        await until(() => rootA.querySelector(".annotator-done") !== null,
            "judge a completion");
        // session is not complete yet, so no score is shown
        expect(rootA.querySelector(".annotator-done")?.textContent)
            .not.toContain("Score");

        // judge b rates the first expression, then "reloads" the page
        const rootB1 = await startApp(server, "judge-b");
        await until(() => shownExpression(rootB1).includes("in Ohio"), "task 0 for b");
        click(rootB1, "Disagree");
        await until(() => shownExpression(rootB1).includes("near Asheville"),
            "b advanced");

        // reload mid-session: a fresh app instance resumes at the correct task,
        // because the server is the only source of truth
        const rootB2 = await startApp(server, "judge-b");
        await until(() => shownExpression(rootB2).includes("near Asheville"),
            "resume at task 1");
        expect(rootB2.querySelector(".annotator-progress")?.textContent)
            .toBe("task 2 of 2");
        expect(localStorage.length).toBe(0);  // nothing persisted client-side

        click(rootB2, "Strongly agree");
        await until(() => rootB2.querySelector(".session-complete") !== null,
            "session completion screen");
        expect(rootB2.querySelector(".session-complete")?.textContent)
            .toContain("Score: 0.500");

        // the score endpoint agrees with the hand-computed mean
        const score = await new ApiClient("", server.fetch).score("s-fixture");
        expect(score.complete).toBe(true);
        expect(score.score).toBeCloseTo((1.0 + 0.5 - 0.5 + 1.0) / 4, 12);
        expect(score.score).toBeCloseTo(0.5, 12);
        expect(server.ratings.size).toBe(4);
    });
});

describe("task counts and neutral sessions", () => {
    it("a 3-expression session is exactly 3 tasks then completion", async () => {
        const server = MockServer.withTexts(
            "s-three", ["in Ohio", "near Asheville", "south of Ohio"], ["j"]);
        const root = await startApp(server, "j");
        for (let i = 0; i < 3; i++) {
            await until(() => root.querySelector(".annotator-progress")
                ?.textContent === `task ${i + 1} of 3`, `task ${i}`);
            click(root, "Neutral");
        }
        await until(() => root.querySelector(".annotator-done") !== null, "done");
        expect(server.ratings.size).toBe(3);
    });

    it("all-neutral ratings score 0.0", async () => {
        const server = MockServer.withTexts("s-neutral", ["in Ohio", "near Asheville"],
            ["j"]);
        const root = await startApp(server, "j");
        for (let i = 0; i < 2; i++) {
            await until(() => shownExpression(root) !== "Loading…", "task");
            click(root, "Neutral");
            await new Promise((r) => setTimeout(r, 5));
        }
        await until(() => root.querySelector(".session-complete") !== null, "done");
        const score = await new ApiClient("", server.fetch).score("s-neutral");
        expect(score.score).toBe(0.0);
    });
});

describe("network failure handling", () => {
    it("keeps the rating behind a retry prompt, never losing it silently", async () => {
        const server = MockServer.withTexts("s-retry", ["in Ohio"], ["j"]);
        const root = await startApp(server, "j");
        await until(() => shownExpression(root).includes("in Ohio"), "task 0");

        server.failures = 1;  // next request dies at the transport
        click(root, "Strongly agree");
        await until(() => root.querySelector(".annotator-banner:not(.hidden)") !== null,
            "error banner");
        expect(server.ratings.size).toBe(0);  // nothing recorded yet
        expect(root.querySelector(".banner-text")?.textContent)
            .toContain("was not lost");

        click(root, "Retry");
        await until(() => root.querySelector(".session-complete") !== null,
            "completion after retry");
        expect(server.ratings.get("0:j")).toBe("strongly_agree");
        expect(server.ratings.size).toBe(1);
    });

    it("recovers when the initial task load fails", async () => {
        const server = MockServer.withTexts("s-load", ["in Ohio"], ["j"]);
        server.failures = 1;
        const root = await startApp(server, "j");
        await until(() => root.querySelector(".annotator-banner:not(.hidden)") !== null,
            "load error banner");
        click(root, "Retry");
        await until(() => shownExpression(root).includes("in Ohio"), "task after retry");
    });
});

describe("completed sessions", () => {
    it("a stale client gets a read-only view on 409", async () => {
        const server = MockServer.withTexts("s-409", ["in Ohio"], ["j"]);
        const stale = await startApp(server, "j");
        await until(() => shownExpression(stale).includes("in Ohio"), "stale task");

        // a second window finishes the session first
        const fresh = await startApp(server, "j");
        await until(() => shownExpression(fresh).includes("in Ohio"), "fresh task");
        click(fresh, "Agree");
        await until(() => server.complete, "session completed elsewhere");

        click(stale, "Neutral");
        await until(() => stale.querySelector(".annotator-readonly") !== null,
            "read-only view");
        expect(stale.querySelector(".annotator-readonly")?.textContent)
            .toContain("read-only");
        expect(server.ratings.get("0:j")).toBe("agree");  // unchanged
    });
});

describe("map rendering", () => {
    it("draws core and support at distinct styles with a mu legend", async () => {
        const server = MockServer.withTexts("s-map", ["in Ohio"], ["j"]);
        const root = await startApp(server, "j");
        await until(() => root.querySelector("svg.region-map") !== null, "map");
        const svg = root.querySelector("svg.region-map")!;
        expect(svg.querySelector("path.region-core")).not.toBeNull();
        expect(svg.querySelector("path.region-support")).not.toBeNull();
        expect(svg.textContent).toContain("core: μ = 1");
        expect(svg.textContent).toContain("support: 0 < μ < 1");
        expect(svg.textContent).toContain("Anchor 0");
        expect(svg.querySelectorAll(".graticule line").length).toBeGreaterThan(0);
    });
});

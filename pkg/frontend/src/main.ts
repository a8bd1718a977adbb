import { AnnotatorApp } from "./app";

function boot(): void {
    const root = document.getElementById("app");
    if (!root) return;
    const params = new URLSearchParams(window.location.search);
    const sessionId = params.get("session");
    const judgeId = params.get("judge");
    if (!sessionId || !judgeId) {
        root.innerHTML =
            "<p class='boot-help'>Open this page with <code>?session=…&amp;judge=…</code> " +
            "query parameters (plus optional <code>base</code> for the API origin " +
            "and <code>tiles</code> for an XYZ tile URL).</p>";
        return;
    }
    const app = new AnnotatorApp(root, {
        baseUrl: params.get("base") ?? "",
        sessionId,
        judgeId,
        tileUrl: params.get("tiles"),
    });
    void app.start();
}

boot();

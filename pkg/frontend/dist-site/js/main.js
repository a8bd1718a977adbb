// src/api.ts
var ApiError = class extends Error {
  constructor(status, message) {
    super(message);
    this.status = status;
    this.name = "ApiError";
  }
};
var ApiClient = class {
  constructor(baseUrl, fetchFn = (input, init) => fetch(input, init)) {
    this.baseUrl = baseUrl;
    this.fetchFn = fetchFn;
  }
  async request(path, init) {
    const resp = await this.fetchFn(this.baseUrl + path, init);
    if (!resp.ok) {
      let detail = `HTTP ${resp.status}`;
      try {
        const body = await resp.json();
        detail = body?.detail?.error ?? JSON.stringify(body.detail ?? body);
      } catch {
      }
      throw new ApiError(resp.status, detail);
    }
    return await resp.json();
  }
  nextTask(sessionId, judgeId) {
    const q = new URLSearchParams({ judge: judgeId });
    return this.request(
      `/sessions/${encodeURIComponent(sessionId)}/tasks/next?${q}`
    );
  }
  submitRating(sessionId, judgeId, expressionId, label) {
    return this.request(
      `/sessions/${encodeURIComponent(sessionId)}/ratings`,
      {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({
          judge_id: judgeId,
          expression_id: expressionId,
          label
        })
      }
    );
  }
  score(sessionId) {
    return this.request(
      `/sessions/${encodeURIComponent(sessionId)}/score`
    );
  }
};

// src/types.ts
var LIKERT_CHOICES = [
  { value: "strongly_agree", label: "Strongly agree" },
  { value: "agree", label: "Agree" },
  { value: "neutral", label: "Neutral" },
  { value: "disagree", label: "Disagree" },
  { value: "strongly_disagree", label: "Strongly disagree" }
];

// src/likert.ts
var LikertBar = class {
  constructor() {
    this.onSelect = null;
    this.buttons = [];
    this.element = document.createElement("div");
    this.element.className = "likert-bar";
    const prompt = document.createElement("p");
    prompt.className = "likert-prompt";
    prompt.textContent = "Does the highlighted region match the expression?";
    this.element.appendChild(prompt);
    const row = document.createElement("div");
    row.className = "likert-buttons";
    for (const { value, label } of LIKERT_CHOICES) {
      const button = document.createElement("button");
      button.type = "button";
      button.className = `likert-button likert-${value}`;
      button.dataset.value = value;
      button.textContent = label;
      button.addEventListener("click", () => {
        if (this.onSelect) this.onSelect(value);
      });
      this.buttons.push(button);
      row.appendChild(button);
    }
    this.element.appendChild(row);
  }
  setEnabled(enabled) {
    for (const b of this.buttons) b.disabled = !enabled;
  }
};

// src/map.ts
var SVG_NS = "http://www.w3.org/2000/svg";
var WIDTH = 800;
var HEIGHT = 500;
function mercator(lon, lat) {
  const clamped = Math.max(-85.05, Math.min(85.05, lat));
  const r = clamped * Math.PI / 180;
  const x = (lon + 180) / 360;
  const y = (1 - Math.log(Math.tan(Math.PI / 4 + r / 2)) / Math.PI) / 2;
  return [x, y];
}
function* ringsOf(geometry) {
  const c = geometry.coordinates;
  if (geometry.type === "Polygon") {
    yield* c;
  } else if (geometry.type === "MultiPolygon") {
    for (const poly of c) yield* poly;
  } else if (geometry.type === "LineString") {
    yield c;
  } else if (geometry.type === "Point") {
    yield [c];
  }
}
var RegionMap = class {
  constructor(tileUrl = null) {
    this.tileUrl = tileUrl;
    this.element = document.createElementNS(SVG_NS, "svg");
    this.element.setAttribute("class", "region-map");
    this.element.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
  }
  render(task) {
    this.element.replaceChildren();
    const view = this.fitViewport(task);
    if (this.tileUrl) this.drawTiles(view);
    this.drawGraticule(view);
    for (const anchor of task.anchors) this.drawAnchor(anchor, view);
    const support = task.region.features.find((f) => f.id === "support");
    const core = task.region.features.find((f) => f.id === "core");
    if (support) this.drawRegion(support.geometry, "region-support", view);
    if (core) this.drawRegion(core.geometry, "region-core", view);
    this.drawLegend();
  }
  project(view, lon, lat) {
    const [mx, my] = mercator(lon, lat);
    return [(mx - view.x0) * view.scale, (my - view.y0) * view.scale];
  }
  fitViewport(task) {
    let minX = Infinity, minY = Infinity, maxX = -Infinity, maxY = -Infinity;
    const geometries = [
      ...task.region.features.map((f) => f.geometry),
      ...task.anchors.map((a) => a.geometry)
    ];
    for (const g of geometries) {
      for (const ring of ringsOf(g)) {
        for (const [lon, lat] of ring) {
          const [x, y] = mercator(lon, lat);
          minX = Math.min(minX, x);
          maxX = Math.max(maxX, x);
          minY = Math.min(minY, y);
          maxY = Math.max(maxY, y);
        }
      }
    }
    if (!isFinite(minX)) {
      minX = 0;
      minY = 0;
      maxX = 1;
      maxY = 1;
    }
    const padX = Math.max((maxX - minX) * 0.15, 1e-4);
    const padY = Math.max((maxY - minY) * 0.15, 1e-4);
    minX -= padX;
    maxX += padX;
    minY -= padY;
    maxY += padY;
    const scale = Math.min(WIDTH / (maxX - minX), HEIGHT / (maxY - minY));
    const x0 = minX - (WIDTH / scale - (maxX - minX)) / 2;
    const y0 = minY - (HEIGHT / scale - (maxY - minY)) / 2;
    return { scale, x0, y0 };
  }
  pathFor(geometry, view) {
    const parts = [];
    for (const ring of ringsOf(geometry)) {
      ring.forEach(([lon, lat], i) => {
        const [x, y] = this.project(view, lon, lat);
        parts.push(`${i === 0 ? "M" : "L"}${x.toFixed(2)},${y.toFixed(2)}`);
      });
      if (geometry.type !== "LineString" && geometry.type !== "Point") {
        parts.push("Z");
      }
    }
    return parts.join("");
  }
  drawRegion(geometry, cls, view) {
    const path = document.createElementNS(SVG_NS, "path");
    path.setAttribute("d", this.pathFor(geometry, view));
    path.setAttribute("class", cls);
    path.setAttribute("fill-rule", "evenodd");
    this.element.appendChild(path);
  }
  drawAnchor(anchor, view) {
    if (anchor.geometry.type === "Point") {
      const [lon, lat] = anchor.geometry.coordinates;
      const [x2, y2] = this.project(view, lon, lat);
      const dot = document.createElementNS(SVG_NS, "circle");
      dot.setAttribute("cx", x2.toFixed(2));
      dot.setAttribute("cy", y2.toFixed(2));
      dot.setAttribute("r", "4");
      dot.setAttribute("class", "anchor-point");
      this.element.appendChild(dot);
      this.labelAt(x2 + 6, y2 - 6, anchor.name);
      return;
    }
    const path = document.createElementNS(SVG_NS, "path");
    path.setAttribute("d", this.pathFor(anchor.geometry, view));
    path.setAttribute(
      "class",
      anchor.geometry.type === "LineString" ? "anchor-line" : "anchor-outline"
    );
    this.element.appendChild(path);
    const first = ringsOf(anchor.geometry).next().value;
    const [x, y] = this.project(view, first[0][0], first[0][1]);
    this.labelAt(x + 4, y - 4, anchor.name);
  }
  labelAt(x, y, text) {
    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", x.toFixed(2));
    label.setAttribute("y", y.toFixed(2));
    label.setAttribute("class", "anchor-label");
    label.textContent = text;
    this.element.appendChild(label);
  }
  drawGraticule(view) {
    const group = document.createElementNS(SVG_NS, "g");
    group.setAttribute("class", "graticule");
    const lonSpan = WIDTH / view.scale * 360;
    const step = niceStep(lonSpan / 6);
    const lonStart = Math.floor((view.x0 * 360 - 180) / step) * step;
    for (let lon = lonStart; lon <= lonStart + lonSpan + step; lon += step) {
      const [x] = this.project(view, lon, 0);
      if (x < 0 || x > WIDTH) continue;
      group.appendChild(this.gridLine(x, 0, x, HEIGHT, `${round2(lon)}\xB0`));
    }
    for (let lat = -80; lat <= 80; lat += step) {
      const [, y] = this.project(view, 0, lat);
      if (y < 0 || y > HEIGHT) continue;
      group.appendChild(this.gridLine(0, y, WIDTH, y, `${round2(lat)}\xB0`));
    }
    this.element.appendChild(group);
  }
  gridLine(x1, y1, x2, y2, label) {
    const g = document.createElementNS(SVG_NS, "g");
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(x1));
    line.setAttribute("y1", String(y1));
    line.setAttribute("x2", String(x2));
    line.setAttribute("y2", String(y2));
    g.appendChild(line);
    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("x", String(x1 === x2 ? x1 + 2 : 2));
    text.setAttribute("y", String(y1 === y2 ? y1 - 2 : 10));
    text.textContent = label;
    g.appendChild(text);
    return g;
  }
  drawTiles(view) {
    const zoom = Math.max(0, Math.min(
      19,
      Math.floor(Math.log2(view.scale / 256))
    ));
    const n = 2 ** zoom;
    const txMin = Math.max(0, Math.floor(view.x0 * n));
    const tyMin = Math.max(0, Math.floor(view.y0 * n));
    const txMax = Math.min(n - 1, Math.ceil((view.x0 + WIDTH / view.scale) * n));
    const tyMax = Math.min(n - 1, Math.ceil((view.y0 + HEIGHT / view.scale) * n));
    const size = view.scale / n;
    for (let tx = txMin; tx <= txMax; tx++) {
      for (let ty = tyMin; ty <= tyMax; ty++) {
        const img = document.createElementNS(SVG_NS, "image");
        const url = this.tileUrl.replace("{z}", String(zoom)).replace("{x}", String(tx)).replace("{y}", String(ty));
        img.setAttribute("href", url);
        img.setAttribute("x", ((tx / n - view.x0) * view.scale).toFixed(2));
        img.setAttribute("y", ((ty / n - view.y0) * view.scale).toFixed(2));
        img.setAttribute("width", size.toFixed(2));
        img.setAttribute("height", size.toFixed(2));
        this.element.appendChild(img);
      }
    }
  }
  drawLegend() {
    const g = document.createElementNS(SVG_NS, "g");
    g.setAttribute("class", "legend");
    const entries = [
      ["region-core", "core: \u03BC = 1"],
      ["region-support", "support: 0 < \u03BC < 1"],
      ["anchor-outline", "anchor"]
    ];
    entries.forEach(([cls, label], i) => {
      const y = HEIGHT - 20 * (entries.length - i);
      const swatch = document.createElementNS(SVG_NS, "rect");
      swatch.setAttribute("x", "10");
      swatch.setAttribute("y", String(y));
      swatch.setAttribute("width", "14");
      swatch.setAttribute("height", "14");
      swatch.setAttribute("class", cls);
      g.appendChild(swatch);
      const text = document.createElementNS(SVG_NS, "text");
      text.setAttribute("x", "30");
      text.setAttribute("y", String(y + 11));
      text.textContent = label;
      g.appendChild(text);
    });
    this.element.appendChild(g);
  }
};
function niceStep(raw) {
  const candidates = [0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1, 2, 5, 10, 20, 30];
  for (const c of candidates) if (c >= raw) return c;
  return 45;
}
function round2(v) {
  return Math.round(v * 100) / 100;
}

// src/app.ts
var AnnotatorApp = class {
  constructor(root, config, fetchFn) {
    this.root = root;
    this.config = config;
    this.current = null;
    this.retryAction = null;
    this.api = new ApiClient(config.baseUrl, fetchFn);
    this.map = new RegionMap(config.tileUrl ?? null);
    this.likert = new LikertBar();
    this.likert.onSelect = (choice) => this.submit(choice);
    this.root.replaceChildren();
    this.root.className = "annotator";
    this.header = el("header", "annotator-header");
    this.header.textContent = `Judge: ${config.judgeId}`;
    this.progress = el("span", "annotator-progress");
    this.header.appendChild(this.progress);
    this.banner = el("div", "annotator-banner hidden");
    this.retryButton = document.createElement("button");
    this.retryButton.type = "button";
    this.retryButton.className = "retry-button";
    this.retryButton.textContent = "Retry";
    this.retryButton.addEventListener("click", () => {
      const action = this.retryAction;
      this.hideBanner();
      if (action) action();
    });
    this.expression = el("h2", "annotator-expression");
    this.mapSlot = el("div", "annotator-map");
    this.panel = el("div", "annotator-panel");
    this.root.append(
      this.header,
      this.banner,
      this.expression,
      this.mapSlot,
      this.panel
    );
  }
  async start() {
    await this.loadNext();
  }
  async loadNext() {
    this.panel.replaceChildren();
    this.expression.textContent = "Loading\u2026";
    try {
      const task = await this.api.nextTask(
        this.config.sessionId,
        this.config.judgeId
      );
      if (task.done) {
        this.current = null;
        this.renderDone(task.session_complete, task.score ?? null);
        return;
      }
      this.current = task;
      this.renderTask(task);
    } catch (err) {
      this.showError(err, () => this.loadNext());
    }
  }
  renderTask(task) {
    this.expression.textContent = `"${task.expression}"`;
    this.progress.textContent = `task ${task.progress.completed + 1} of ${task.progress.total}`;
    this.mapSlot.replaceChildren(this.map.element);
    this.map.render(task);
    this.panel.replaceChildren(this.likert.element);
    this.likert.setEnabled(true);
  }
  async submit(choice) {
    const task = this.current;
    if (!task) return;
    this.likert.setEnabled(false);
    try {
      await this.api.submitRating(
        this.config.sessionId,
        this.config.judgeId,
        task.expression_id,
        choice
      );
      await this.loadNext();
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        this.renderReadOnly();
        return;
      }
      this.likert.setEnabled(true);
      this.showError(err, () => this.submit(choice));
    }
  }
  renderDone(sessionComplete, score) {
    this.expression.textContent = "All tasks complete";
    this.progress.textContent = "";
    this.mapSlot.replaceChildren();
    const note = el("div", "annotator-done");
    if (sessionComplete) {
      const shown = score?.score;
      note.textContent = shown === null || shown === void 0 ? "Session complete." : `Session complete. Score: ${shown.toFixed(3)}`;
      note.classList.add("session-complete");
    } else {
      note.textContent = "Thanks! Your ratings are in; other judges are still working.";
    }
    this.panel.replaceChildren(note);
  }
  renderReadOnly() {
    this.expression.textContent = "Session closed";
    this.mapSlot.replaceChildren();
    const note = el("div", "annotator-readonly");
    note.textContent = "This session is complete; ratings are read-only.";
    this.panel.replaceChildren(note);
  }
  showError(err, retry) {
    const message = err instanceof Error ? err.message : String(err);
    this.banner.replaceChildren();
    this.banner.className = "annotator-banner";
    const text = el("span", "banner-text");
    text.textContent = `Could not reach the server (${message}). Your rating was not lost.`;
    this.banner.append(text, this.retryButton);
    this.retryAction = retry;
  }
  hideBanner() {
    this.banner.className = "annotator-banner hidden";
    this.retryAction = null;
  }
};
function el(tag, className) {
  const node = document.createElement(tag);
  node.className = className;
  return node;
}

// src/main.ts
function boot() {
  const root = document.getElementById("app");
  if (!root) return;
  const params = new URLSearchParams(window.location.search);
  const sessionId = params.get("session");
  const judgeId = params.get("judge");
  if (!sessionId || !judgeId) {
    root.innerHTML = "<p class='boot-help'>Open this page with <code>?session=\u2026&amp;judge=\u2026</code> query parameters (plus optional <code>base</code> for the API origin and <code>tiles</code> for an XYZ tile URL).</p>";
    return;
  }
  const app = new AnnotatorApp(root, {
    baseUrl: params.get("base") ?? "",
    sessionId,
    judgeId,
    tileUrl: params.get("tiles")
  });
  void app.start();
}
boot();
//# sourceMappingURL=main.js.map

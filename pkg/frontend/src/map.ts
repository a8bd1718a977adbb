import { AnchorOutline, GeoJsonGeometry, TaskView } from "./types";

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 800;
const HEIGHT = 500;

/** Web-Mercator unit square: x, y in [0, 1]. */
function mercator(lon: number, lat: number): [number, number] {
    const clamped = Math.max(-85.05, Math.min(85.05, lat));
    const r = (clamped * Math.PI) / 180;
    const x = (lon + 180) / 360;
    const y = (1 - Math.log(Math.tan(Math.PI / 4 + r / 2)) / Math.PI) / 2;
    return [x, y];
}

interface Viewport {
    scale: number;  // screen px per mercator unit
    x0: number;     // mercator origin mapped to screen (0, 0)
    y0: number;
}

type Ring = [number, number][];

function* ringsOf(geometry: GeoJsonGeometry): Generator<Ring> {
    const c = geometry.coordinates as any;
    if (geometry.type === "Polygon") {
        yield* c as Ring[];
    } else if (geometry.type === "MultiPolygon") {
        for (const poly of c as Ring[][]) yield* poly;
    } else if (geometry.type === "LineString") {
        yield c as Ring;
    } else if (geometry.type === "Point") {
        yield [c as [number, number]];
    }
}

/** Renders one task's geometry: graticule, anchor outlines, then the support
 * and core polygons at distinct opacities. Geometry is drawn exactly as the
 * server sent it; the client never recomputes regions. Raster tiles are
 * optional (a configurable XYZ URL); without one the backdrop is a blank
 * graticule so the page works fully offline. */
export class RegionMap {
    readonly element: SVGSVGElement;
    private tileUrl: string | null;

    constructor(tileUrl: string | null = null) {
        this.tileUrl = tileUrl;
        this.element = document.createElementNS(SVG_NS, "svg") as SVGSVGElement;
        this.element.setAttribute("class", "region-map");
        this.element.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
    }

    render(task: TaskView): void {
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

    private project(view: Viewport, lon: number, lat: number): [number, number] {
        const [mx, my] = mercator(lon, lat);
        return [(mx - view.x0) * view.scale, (my - view.y0) * view.scale];
    }

    private fitViewport(task: TaskView): Viewport {
        let minX = Infinity, minY = Infinity, maxX = -Infinity, maxY = -Infinity;
        const geometries = [
            ...task.region.features.map((f) => f.geometry),
            ...task.anchors.map((a) => a.geometry),
        ];
        for (const g of geometries) {
            for (const ring of ringsOf(g)) {
                for (const [lon, lat] of ring) {
                    const [x, y] = mercator(lon, lat);
                    minX = Math.min(minX, x); maxX = Math.max(maxX, x);
                    minY = Math.min(minY, y); maxY = Math.max(maxY, y);
                }
            }
        }
        if (!isFinite(minX)) { minX = 0; minY = 0; maxX = 1; maxY = 1; }
        const padX = Math.max((maxX - minX) * 0.15, 1e-4);
        const padY = Math.max((maxY - minY) * 0.15, 1e-4);
        minX -= padX; maxX += padX; minY -= padY; maxY += padY;
        const scale = Math.min(WIDTH / (maxX - minX), HEIGHT / (maxY - minY));
        // center the fitted extent
        const x0 = minX - (WIDTH / scale - (maxX - minX)) / 2;
        const y0 = minY - (HEIGHT / scale - (maxY - minY)) / 2;
        return { scale, x0, y0 };
    }

    private pathFor(geometry: GeoJsonGeometry, view: Viewport): string {
        const parts: string[] = [];
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

    private drawRegion(geometry: GeoJsonGeometry, cls: string, view: Viewport): void {
        const path = document.createElementNS(SVG_NS, "path");
        path.setAttribute("d", this.pathFor(geometry, view));
        path.setAttribute("class", cls);
        path.setAttribute("fill-rule", "evenodd");
        this.element.appendChild(path);
    }

    private drawAnchor(anchor: AnchorOutline, view: Viewport): void {
        if (anchor.geometry.type === "Point") {
            const [lon, lat] = anchor.geometry.coordinates as [number, number];
            const [x, y] = this.project(view, lon, lat);
            const dot = document.createElementNS(SVG_NS, "circle");
            dot.setAttribute("cx", x.toFixed(2));
            dot.setAttribute("cy", y.toFixed(2));
            dot.setAttribute("r", "4");
            dot.setAttribute("class", "anchor-point");
            this.element.appendChild(dot);
            this.labelAt(x + 6, y - 6, anchor.name);
            return;
        }
        const path = document.createElementNS(SVG_NS, "path");
        path.setAttribute("d", this.pathFor(anchor.geometry, view));
        path.setAttribute("class",
            anchor.geometry.type === "LineString" ? "anchor-line" : "anchor-outline");
        this.element.appendChild(path);
        const first = ringsOf(anchor.geometry).next().value as Ring;
        const [x, y] = this.project(view, first[0][0], first[0][1]);
        this.labelAt(x + 4, y - 4, anchor.name);
    }

    private labelAt(x: number, y: number, text: string): void {
        const label = document.createElementNS(SVG_NS, "text");
        label.setAttribute("x", x.toFixed(2));
        label.setAttribute("y", y.toFixed(2));
        label.setAttribute("class", "anchor-label");
        label.textContent = text;
        this.element.appendChild(label);
    }

    private drawGraticule(view: Viewport): void {
        const group = document.createElementNS(SVG_NS, "g");
        group.setAttribute("class", "graticule");
        const lonSpan = (WIDTH / view.scale) * 360;
        const step = niceStep(lonSpan / 6);
        const lonStart = Math.floor((view.x0 * 360 - 180) / step) * step;
        for (let lon = lonStart; lon <= lonStart + lonSpan + step; lon += step) {
            const [x] = this.project(view, lon, 0);
            if (x < 0 || x > WIDTH) continue;
            group.appendChild(this.gridLine(x, 0, x, HEIGHT, `${round2(lon)}°`));
        }
        for (let lat = -80; lat <= 80; lat += step) {
            const [, y] = this.project(view, 0, lat);
            if (y < 0 || y > HEIGHT) continue;
            group.appendChild(this.gridLine(0, y, WIDTH, y, `${round2(lat)}°`));
        }
        this.element.appendChild(group);
    }

    private gridLine(x1: number, y1: number, x2: number, y2: number,
                     label: string): SVGGElement {
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

    private drawTiles(view: Viewport): void {
        const zoom = Math.max(0, Math.min(19,
            Math.floor(Math.log2(view.scale / 256))));
        const n = 2 ** zoom;
        const txMin = Math.max(0, Math.floor(view.x0 * n));
        const tyMin = Math.max(0, Math.floor(view.y0 * n));
        const txMax = Math.min(n - 1, Math.ceil((view.x0 + WIDTH / view.scale) * n));
        const tyMax = Math.min(n - 1, Math.ceil((view.y0 + HEIGHT / view.scale) * n));
        const size = view.scale / n;
        for (let tx = txMin; tx <= txMax; tx++) {
            for (let ty = tyMin; ty <= tyMax; ty++) {
                const img = document.createElementNS(SVG_NS, "image");
                const url = this.tileUrl!
                    .replace("{z}", String(zoom))
                    .replace("{x}", String(tx))
                    .replace("{y}", String(ty));
                img.setAttribute("href", url);
                img.setAttribute("x", ((tx / n - view.x0) * view.scale).toFixed(2));
                img.setAttribute("y", ((ty / n - view.y0) * view.scale).toFixed(2));
                img.setAttribute("width", size.toFixed(2));
                img.setAttribute("height", size.toFixed(2));
                this.element.appendChild(img);
            }
        }
    }

    private drawLegend(): void {
        const g = document.createElementNS(SVG_NS, "g");
        g.setAttribute("class", "legend");
        const entries: [string, string][] = [
            ["region-core", "core: μ = 1"],
            ["region-support", "support: 0 < μ < 1"],
            ["anchor-outline", "anchor"],
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
}

function niceStep(raw: number): number {
    const candidates = [0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1, 2, 5, 10, 20, 30];
    for (const c of candidates) if (c >= raw) return c;
    return 45;
}

function round2(v: number): number {
    return Math.round(v * 100) / 100;
}

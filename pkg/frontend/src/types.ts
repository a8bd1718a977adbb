/** Wire types for the fuzzygeo annotation API. */

export interface GeoJsonGeometry {
    type: "Polygon" | "MultiPolygon" | "LineString" | "Point";
    coordinates: unknown;
}

export interface RegionFeature {
    type: "Feature";
    id: "core" | "support";
    properties: Record<string, number>;
    geometry: GeoJsonGeometry;
}

export interface RegionCollection {
    type: "FeatureCollection";
    features: RegionFeature[];
    meta?: { expression?: unknown; params?: unknown; warnings?: string[] };
}

export interface AnchorOutline {
    name: string;
    kind: "area" | "line" | "point";
    geometry: GeoJsonGeometry;
}

export interface TaskView {
    done: false;
    expression_id: number;
    expression: string;
    region: RegionCollection;
    anchors: AnchorOutline[];
    progress: { completed: number; total: number };
}

export interface SessionScore {
    score: number | null;
    n: number;
    m: number;
    per_expression: (number | null)[];
    complete: boolean;
    rated: number;
}

export interface DoneView {
    done: true;
    session_complete: boolean;
    score?: SessionScore;
}

export type NextTask = TaskView | DoneView;

export interface RatingAck {
    recorded: boolean;
    changed: boolean;
    overwrote?: string | null;
    session_complete: boolean;
}

export type LikertChoice =
    | "strongly_agree"
    | "agree"
    | "neutral"
    | "disagree"
    | "strongly_disagree";

export const LIKERT_CHOICES: { value: LikertChoice; label: string }[] = [
    { value: "strongly_agree", label: "Strongly agree" },
    { value: "agree", label: "Agree" },
    { value: "neutral", label: "Neutral" },
    { value: "disagree", label: "Disagree" },
    { value: "strongly_disagree", label: "Strongly disagree" },
];

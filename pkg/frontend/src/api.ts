import { LikertChoice, NextTask, RatingAck, SessionScore } from "./types";

export class ApiError extends Error {
    constructor(public status: number, message: string) {
        super(message);
        this.name = "ApiError";
    }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client over the annotation endpoints. The fetch implementation
 * is injectable so tests can run against an in-memory server. */
export class ApiClient {
    constructor(
        private baseUrl: string,
        private fetchFn: FetchLike = (input, init) => fetch(input, init),
    ) {}

    private async request<T>(path: string, init?: RequestInit): Promise<T> {
        const resp = await this.fetchFn(this.baseUrl + path, init);
        if (!resp.ok) {
            let detail = `HTTP ${resp.status}`;
            try {
                const body = await resp.json();
                detail = body?.detail?.error ?? JSON.stringify(body.detail ?? body);
            } catch {
                // body was not JSON; keep the status text
            }
            throw new ApiError(resp.status, detail);
        }
        return (await resp.json()) as T;
    }

    nextTask(sessionId: string, judgeId: string): Promise<NextTask> {
        const q = new URLSearchParams({ judge: judgeId });
        return this.request<NextTask>(
            `/sessions/${encodeURIComponent(sessionId)}/tasks/next?${q}`);
    }

    submitRating(sessionId: string, judgeId: string, expressionId: number,
                 label: LikertChoice): Promise<RatingAck> {
        return this.request<RatingAck>(
            `/sessions/${encodeURIComponent(sessionId)}/ratings`, {
                method: "POST",
                headers: { "Content-Type": "application/json" },
                body: JSON.stringify({
                    judge_id: judgeId,
                    expression_id: expressionId,
                    label,
                }),
            });
    }

    score(sessionId: string): Promise<SessionScore> {
        return this.request<SessionScore>(
            `/sessions/${encodeURIComponent(sessionId)}/score`);
    }
}

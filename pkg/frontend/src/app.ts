import { ApiClient, ApiError, FetchLike } from "./api";
import { LikertBar } from "./likert";
import { RegionMap } from "./map";
import { LikertChoice, SessionScore, TaskView } from "./types";

export interface AppConfig {
    baseUrl: string;
    sessionId: string;
    judgeId: string;
    tileUrl?: string | null;
}

/** One-expression-at-a-time annotation flow.
 *
 * The server is the single source of truth: nothing is persisted client-side,
 * every advance happens only after the server acknowledges the rating, and a
 * reload simply asks the server for the next task again. Network failures
 * keep the pending rating on screen behind an explicit retry. */
export class AnnotatorApp {
    private api: ApiClient;
    private map: RegionMap;
    private likert: LikertBar;
    private current: TaskView | null = null;
    private retryAction: (() => void) | null = null;

    private header: HTMLElement;
    private expression: HTMLElement;
    private progress: HTMLElement;
    private banner: HTMLElement;
    private retryButton: HTMLButtonElement;
    private mapSlot: HTMLElement;
    private panel: HTMLElement;

    constructor(private root: HTMLElement, private config: AppConfig,
                fetchFn?: FetchLike) {
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
        this.root.append(this.header, this.banner, this.expression,
                         this.mapSlot, this.panel);
    }

    async start(): Promise<void> {
        await this.loadNext();
    }

    private async loadNext(): Promise<void> {
        this.panel.replaceChildren();
        this.expression.textContent = "Loading…";
        try {
            const task = await this.api.nextTask(this.config.sessionId,
                                                 this.config.judgeId);
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

    private renderTask(task: TaskView): void {
        this.expression.textContent = `"${task.expression}"`;
        this.progress.textContent =
            `task ${task.progress.completed + 1} of ${task.progress.total}`;
        this.mapSlot.replaceChildren(this.map.element);
        this.map.render(task);
        this.panel.replaceChildren(this.likert.element);
        this.likert.setEnabled(true);
    }

    private async submit(choice: LikertChoice): Promise<void> {
        const task = this.current;
        if (!task) return;
        this.likert.setEnabled(false);
        try {
            await this.api.submitRating(this.config.sessionId, this.config.judgeId,
                                        task.expression_id, choice);
            // advance only now that the server has acknowledged
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

    private renderDone(sessionComplete: boolean, score: SessionScore | null): void {
        this.expression.textContent = "All tasks complete";
        this.progress.textContent = "";
        this.mapSlot.replaceChildren();
        const note = el("div", "annotator-done");
        if (sessionComplete) {
            const shown = score?.score;
            note.textContent = shown === null || shown === undefined
                ? "Session complete."
                : `Session complete. Score: ${shown.toFixed(3)}`;
            note.classList.add("session-complete");
        } else {
            note.textContent =
                "Thanks! Your ratings are in; other judges are still working.";
        }
        this.panel.replaceChildren(note);
    }

    private renderReadOnly(): void {
        this.expression.textContent = "Session closed";
        this.mapSlot.replaceChildren();
        const note = el("div", "annotator-readonly");
        note.textContent = "This session is complete; ratings are read-only.";
        this.panel.replaceChildren(note);
    }

    private showError(err: unknown, retry: () => void): void {
        const message = err instanceof Error ? err.message : String(err);
        this.banner.replaceChildren();
        this.banner.className = "annotator-banner";
        const text = el("span", "banner-text");
        text.textContent = `Could not reach the server (${message}). ` +
            "Your rating was not lost.";
        this.banner.append(text, this.retryButton);
        this.retryAction = retry;
    }

    private hideBanner(): void {
        this.banner.className = "annotator-banner hidden";
        this.retryAction = null;
    }
}

function el(tag: string, className: string): HTMLElement {
    const node = document.createElement(tag);
    node.className = className;
    return node;
}

import { LIKERT_CHOICES, LikertChoice } from "./types";

/** Five-button agreement scale. One choice per task; buttons lock while a
 * submission is in flight so a rating can never be sent twice in parallel. */
export class LikertBar {
    readonly element: HTMLDivElement;
    onSelect: ((choice: LikertChoice) => void) | null = null;
    private buttons: HTMLButtonElement[] = [];

    constructor() {
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

    setEnabled(enabled: boolean): void {
        for (const b of this.buttons) b.disabled = !enabled;
    }
}

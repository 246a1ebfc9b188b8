// Compose form: level-1 and level-2 texts plus tag entry. Each committed tag
// asks the server where it routes and shows either the topic chip or a
// "will be reviewed" notice — unknown tags still submit fine. Blank fields
// produce inline errors without any request.

import { ApiClient, ApiError, Question, RoutePreview } from "../api";
import { clear, el } from "../dom";

interface CommittedTag {
    raw: string;
    preview: RoutePreview;
}

export interface ComposePage {
    root: HTMLElement;
}

export async function mountCompose(
    root: HTMLElement,
    client: ApiClient,
    onCreated: (question: Question) => void,
): Promise<ComposePage> {
    const tags: CommittedTag[] = [];

    const level1Input = el("input", {
        type: "text",
        "data-testid": "level1-input",
        placeholder: "Level 1: a yes/no question that finds your audience",
    });
    const level2Input = el("textarea", {
        "data-testid": "level2-input",
        rows: "3",
        placeholder: "Level 2: what detail should a \"yes\" person share?",
    });
    const tagInput = el("input", {
        type: "text",
        "data-testid": "tag-input",
        placeholder: "Add a tag and press Enter",
    });
    const chipList = el("span", { class: "chips", "data-testid": "tag-chips" });
    const errors = {
        level1: el("p", { class: "field-error", "data-error-for": "level1" }),
        level2: el("p", { class: "field-error", "data-error-for": "level2" }),
        tags: el("p", { class: "field-error", "data-error-for": "tags" }),
        submit: el("p", { class: "field-error", "data-error-for": "submit" }),
    };

    function renderChips(): void {
        clear(chipList);
        for (const tag of tags) {
            const preview = tag.preview;
            if (preview.matched && preview.topic_id) {
                chipList.append(
                    el("span", {
                        class: "chip topic-chip",
                        "data-testid": "tag-chip",
                        "data-topic": preview.topic_id,
                    }, `${preview.canonical_tag} → ${preview.topic_id}`),
                );
            } else {
                chipList.append(
                    el("span", {
                        class: "chip review-chip",
                        "data-testid": "tag-chip",
                        "data-review": "true",
                    }, `${preview.canonical_tag} — new tag, will be reviewed`),
                );
            }
        }
    }

    async function commitTag(): Promise<void> {
        const raw = tagInput.value.trim();
        if (!raw) return;
        tagInput.value = "";
        // Live preview comes from the router endpoint; the client never
        // classifies tags itself.
        const preview = await client.previewTag(raw, level1Input.value);
        tags.push({ raw, preview });
        renderChips();
    }

    async function submit(): Promise<void> {
        errors.level1.textContent = "";
        errors.level2.textContent = "";
        errors.tags.textContent = "";
        errors.submit.textContent = "";
        let valid = true;
        if (!level1Input.value.trim()) {
            errors.level1.textContent = "The level-1 question cannot be blank.";
            valid = false;
        }
        if (!level2Input.value.trim()) {
            errors.level2.textContent = "The level-2 prompt cannot be blank.";
            valid = false;
        }
        if (tags.length === 0) {
            errors.tags.textContent = "Add at least one tag.";
            valid = false;
        }
        if (!valid) return; // inline errors only, no request

        try {
            const question = await client.createQuestion({
                level1_text: level1Input.value.trim(),
                level2_text: level2Input.value.trim(),
                tags: tags.map((t) => t.raw),
            });
            onCreated(question);
        } catch (err) {
            if (err instanceof ApiError) {
                errors.submit.textContent = `${err.code}: ${err.message}`;
            } else {
                throw err;
            }
        }
    }

    tagInput.addEventListener("keydown", (event) => {
        if ((event as KeyboardEvent).key === "Enter") {
            event.preventDefault();
            void commitTag();
        }
    });

    const form = el("form", { class: "compose", "data-testid": "compose-form" });
    form.addEventListener("submit", (event) => {
        event.preventDefault();
        void submit();
    });
    form.append(
        el("h1", {}, "Ask a hypothesis question"),
        el("label", {}, "Level 1 — yes/no filter"),
        level1Input,
        errors.level1,
        el("label", {}, "Level 2 — invite detail"),
        level2Input,
        errors.level2,
        el("label", {}, "Tags"),
        el("span", { class: "tag-entry" },
            tagInput,
            el("button", {
                type: "button",
                "data-testid": "tag-add",
                onclick: () => void commitTag(),
            }, "Add tag"),
        ),
        chipList,
        errors.tags,
        el("button", { type: "submit", "data-testid": "compose-submit" }, "Post to the board"),
        errors.submit,
    );

    clear(root);
    root.append(form);
    return { root };
}

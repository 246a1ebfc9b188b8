// Question detail: progressive three-level disclosure.
//
// Step 1 shows the yes/no filter. A "yes" reveals the level-2 detail form;
// a "no" shows a polite filtered-out state. "See more" opens the threaded
// discussion either way. The server is authoritative: every answer
// re-fetches, and a NOT_QUALIFIED conflict renders as the filtered-out
// state, never as a raw error.

import { ApiClient, ApiError, Comment, QuestionDetail } from "../api";
import { clear, el } from "../dom";

export interface QuestionPage {
    refresh(): Promise<void>;
}

export async function mountQuestion(
    root: HTMLElement,
    client: ApiClient,
    questionId: string,
): Promise<QuestionPage> {
    let discussionOpen = false;
    let errorText: string | null = null;

    async function refresh(): Promise<void> {
        const detail = await client.getQuestion(questionId);
        clear(root);
        root.append(build(detail));
    }

    async function act(action: () => Promise<unknown>): Promise<void> {
        try {
            await action();
            errorText = null;
        } catch (err) {
            if (err instanceof ApiError && err.code === "NOT_QUALIFIED") {
                // The server gate decided; the refresh below renders the
                // filtered-out state instead of surfacing an error.
                errorText = null;
            } else if (err instanceof ApiError) {
                errorText = err.message;
            } else {
                throw err;
            }
        }
        await refresh();
    }

    function build(detail: QuestionDetail): HTMLElement {
        const card = el("article", { class: "question-detail" });

        const chips = el("div", { class: "chips" });
        for (const tag of detail.tags) {
            chips.append(el("span", { class: "chip tag-chip" }, tag.canonical));
        }
        if (detail.topic_id) {
            chips.append(
                el(
                    "a",
                    {
                        class: "chip topic-chip",
                        "data-topic": detail.topic_id,
                        href: `#/topics/${detail.topic_id}`,
                    },
                    detail.topic_id,
                ),
            );
        }

        const voteBox = el(
            "span",
            { class: "votes" },
            el("button", {
                class: "vote-up",
                "data-testid": "vote-up",
                onclick: () => void act(() => client.vote(detail.question_id, "up")),
            }, "▲"),
            el("span", { class: "score", "data-testid": "score" }, String(detail.score)),
            el("button", {
                class: "vote-down",
                "data-testid": "vote-down",
                onclick: () => void act(() => client.vote(detail.question_id, "down")),
            }, "▼"),
        );

        card.append(
            el("header", {},
                el("h2", {}, detail.level1_text),
                chips,
                voteBox,
            ),
        );

        if (errorText) {
            card.append(el("p", { class: "error-bar", "data-testid": "error-bar" }, errorText));
        }

        card.append(buildStep(detail));
        card.append(buildDiscussion(detail));
        return card;
    }

    function buildStep(detail: QuestionDetail): HTMLElement {
        if (detail.my_level1 === null) {
            return el(
                "section",
                { class: "level1-step", "data-testid": "level1-step" },
                el("p", {}, "Does this apply to you?"),
                el("button", {
                    "data-testid": "answer-yes",
                    onclick: () => void act(() => client.answerLevel1(detail.question_id, "yes")),
                }, "Yes"),
                el("button", {
                    "data-testid": "answer-no",
                    onclick: () => void act(() => client.answerLevel1(detail.question_id, "no")),
                }, "No"),
            );
        }
        if (detail.qualified) {
            return buildLevel2(detail);
        }
        return el(
            "section",
            { class: "filtered-note", "data-testid": "filtered-note" },
            el("p", {},
                "Thanks for answering — this question is aimed at a different group, " +
                "so there is nothing more to fill in. You are welcome to join the discussion below."),
        );
    }

    function buildLevel2(detail: QuestionDetail): HTMLElement {
        const section = el("section", { class: "level2-step" });
        section.append(el("p", { class: "level2-prompt" }, detail.level2_text));

        if (detail.level2_responses.length > 0) {
            const list = el("ul", { class: "level2-responses", "data-testid": "level2-responses" });
            for (const response of detail.level2_responses) {
                list.append(el("li", {}, response.body));
            }
            section.append(list);
        }

        const textarea = el("textarea", { "data-testid": "level2-body", rows: "3" });
        const form = el("form", { class: "level2-form", "data-testid": "level2-form" });
        form.addEventListener("submit", (event) => {
            event.preventDefault();
            const body = textarea.value.trim();
            if (!body) return;
            void act(() => client.answerLevel2(detail.question_id, body));
        });
        form.append(textarea, el("button", { type: "submit", "data-testid": "level2-submit" }, "Share detail"));
        section.append(form);
        return section;
    }

    function buildDiscussion(detail: QuestionDetail): HTMLElement {
        const section = el("section", { class: "discussion-block" });
        const toggle = el("button", {
            "data-testid": "see-more",
            class: "see-more",
            onclick: () => {
                discussionOpen = !discussionOpen;
                clear(root);
                root.append(build(detail));
            },
        }, discussionOpen ? "Hide discussion" : `See more (${detail.comments.length})`);
        section.append(toggle);

        if (!discussionOpen) return section;

        const thread = el("div", { class: "discussion", "data-testid": "discussion" });
        const byParent = new Map<string | null, Comment[]>();
        for (const comment of detail.comments) {
            const key = comment.parent_comment_id;
            const bucket = byParent.get(key) ?? [];
            bucket.push(comment);
            byParent.set(key, bucket);
        }

        const renderThread = (parentId: string | null, depth: number): HTMLElement[] =>
            (byParent.get(parentId) ?? []).flatMap((comment) => {
                const replyForm = buildCommentForm(detail, comment.comment_id, "Reply…");
                replyForm.hidden = true;
                const node = el(
                    "div",
                    { class: "comment", "data-depth": String(depth), "data-comment": comment.comment_id },
                    el("p", {}, comment.body),
                    el("button", {
                        class: "reply-toggle",
                        onclick: () => {
                            replyForm.hidden = !replyForm.hidden;
                        },
                    }, "Reply"),
                    replyForm,
                );
                node.style.marginLeft = `${depth * 1.5}rem`;
                return [node, ...renderThread(comment.comment_id, depth + 1)];
            });

        thread.append(...renderThread(null, 0));
        thread.append(buildCommentForm(detail, null, "Join the discussion…"));
        section.append(thread);
        return section;
    }

    function buildCommentForm(
        detail: QuestionDetail,
        parentId: string | null,
        placeholder: string,
    ): HTMLFormElement {
        const input = el("input", { type: "text", placeholder });
        const form = el("form", {
            class: "comment-form",
            "data-testid": parentId ? `reply-form-${parentId}` : "comment-form",
        });
        form.addEventListener("submit", (event) => {
            event.preventDefault();
            const body = input.value.trim();
            if (!body) return;
            void act(() => client.addComment(detail.question_id, body, parentId ?? undefined));
        });
        form.append(input, el("button", { type: "submit" }, "Post"));
        return form;
    }

    await refresh();
    return { refresh };
}

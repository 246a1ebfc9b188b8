// The open board: question cards with tags, topic chip, score, and comment
// count. The sort toggle re-queries the server; the client never re-sorts.

import { ApiClient, Question } from "../api";
import { clear, el } from "../dom";

export interface BoardPage {
    refresh(): Promise<void>;
}

export async function mountBoard(root: HTMLElement, client: ApiClient): Promise<BoardPage> {
    let sort: "newest" | "top" = "newest";

    async function refresh(): Promise<void> {
        const questions = await client.listQuestions({ sort });
        clear(root);
        root.append(build(questions));
    }

    function setSort(next: "newest" | "top"): void {
        if (sort === next) return;
        sort = next;
        void refresh();
    }

    function build(questions: Question[]): HTMLElement {
        const page = el("section", { class: "board" });
        page.append(
            el("div", { class: "board-toolbar" },
                el("h1", {}, "Question board"),
                el("span", { class: "sort-toggle" },
                    el("button", {
                        "data-testid": "sort-newest",
                        class: sort === "newest" ? "active" : "",
                        onclick: () => setSort("newest"),
                    }, "Newest"),
                    el("button", {
                        "data-testid": "sort-top",
                        class: sort === "top" ? "active" : "",
                        onclick: () => setSort("top"),
                    }, "Top"),
                ),
                el("a", { href: "#/compose", class: "compose-link" }, "Ask a question"),
            ),
        );

        if (questions.length === 0) {
            page.append(
                el("div", { class: "empty-board", "data-testid": "empty-board" },
                    el("p", {}, "Nothing here yet."),
                    el("a", { href: "#/compose" }, "Add the first hypothesis question"),
                ),
            );
            return page;
        }

        const list = el("div", { class: "question-cards" });
        for (const question of questions) {
            list.append(buildCard(question));
        }
        page.append(list);
        return page;
    }

    function buildCard(question: Question): HTMLElement {
        const chips = el("span", { class: "chips" });
        for (const tag of question.tags) {
            chips.append(el("span", { class: "chip tag-chip" }, tag.canonical));
        }
        if (question.topic_id) {
            chips.append(
                el("a", {
                    class: "chip topic-chip",
                    "data-topic": question.topic_id,
                    href: `#/topics/${question.topic_id}`,
                }, question.topic_id),
            );
        }
        return el(
            "article",
            { class: "question-card", "data-qid": question.question_id },
            el("a", { href: `#/q/${question.question_id}`, class: "card-title" }, question.level1_text),
            chips,
            el("span", { class: "card-meta" },
                el("span", { class: "score" }, `▲ ${question.score}`),
                el("span", { class: "comment-count" }, `💬 ${question.comment_count}`),
            ),
        );
    }

    await refresh();
    return { refresh };
}

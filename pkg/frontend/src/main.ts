// Entry point: session handling and hash routing. Every route mount
// re-fetches from the server; the window regaining focus re-fetches too, so
// concurrent tabs converge on server state.

import { ApiClient, ApiError } from "./api";
import { clear, el } from "./dom";
import { clearSession, loadSession, saveSession, Session } from "./state";
import { mountBoard } from "./views/board";
import { mountCompose } from "./views/compose";
import { mountLogin } from "./views/login";
import { mountQuestion } from "./views/question";
import { mountTopic } from "./views/topic";

const API_BASE = (window as { GUTBOARD_API?: string }).GUTBOARD_API ?? "";

function appRoot(): HTMLElement {
    const node = document.getElementById("app");
    if (!node) throw new Error("missing #app container");
    return node;
}

function navBar(session: Session): HTMLElement {
    return el("nav", { class: "topnav" },
        el("a", { href: "#/board" }, "Board"),
        el("a", { href: "#/topics" }, "Topics"),
        el("a", { href: "#/compose" }, "Ask"),
        el("span", { class: "spacer" }),
        el("span", { class: "whoami" }, session.user.display_name),
        el("button", {
            class: "logout",
            onclick: () => {
                clearSession();
                window.location.hash = "#/login";
            },
        }, "Sign out"),
    );
}

async function mountTopicsIndex(root: HTMLElement, client: ApiClient): Promise<void> {
    const topics = await client.listTopics();
    clear(root);
    const list = el("section", { class: "topics-index" }, el("h1", {}, "Topics"));
    for (const topic of topics) {
        list.append(
            el("p", {},
                el("a", { href: `#/topics/${topic.topic_id}`, class: "chip topic-chip" }, topic.title)),
        );
    }
    root.append(list);
}

async function route(): Promise<void> {
    const session = loadSession();
    const hash = window.location.hash || "#/board";
    const root = appRoot();

    if (!session || hash === "#/login") {
        mountLogin(root, API_BASE, (auth) => {
            saveSession({ token: auth.token, user: auth.user });
            window.location.hash = "#/board";
            void route();
        });
        return;
    }

    const client = new ApiClient(API_BASE, session.token);
    const page = el("div", { class: "page" });
    clear(root);
    root.append(navBar(session), page);

    try {
        if (hash.startsWith("#/q/")) {
            await mountQuestion(page, client, hash.slice(4));
        } else if (hash === "#/topics") {
            await mountTopicsIndex(page, client);
        } else if (hash.startsWith("#/topics/")) {
            await mountTopic(page, client, hash.slice(9));
        } else if (hash === "#/compose") {
            await mountCompose(page, client, (question) => {
                window.location.hash = `#/q/${question.question_id}`;
            });
        } else {
            await mountBoard(page, client);
        }
    } catch (err) {
        if (err instanceof ApiError && err.status === 401) {
            clearSession();
            window.location.hash = "#/login";
            void route();
            return;
        }
        clear(page);
        page.append(el("p", { class: "error-bar" }, err instanceof Error ? err.message : String(err)));
    }
}

window.addEventListener("hashchange", () => void route());
window.addEventListener("focus", () => void route());
void route();

// Login / register forms; hands the session to the caller on success.

import { ApiClient, ApiError, TokenResponse } from "../api";
import { clear, el } from "../dom";

export function mountLogin(
    root: HTMLElement,
    baseUrl: string,
    onAuthed: (auth: TokenResponse) => void,
): void {
    const client = new ApiClient(baseUrl);

    function buildForm(title: string, submitLabel: string, action: (name: string, password: string) => Promise<TokenResponse>): HTMLElement {
        const name = el("input", { type: "text", placeholder: "Display name", autocomplete: "username" });
        const password = el("input", { type: "password", placeholder: "Password", autocomplete: "current-password" });
        const error = el("p", { class: "field-error" });
        const form = el("form", { class: "auth-form" });
        form.addEventListener("submit", (event) => {
            event.preventDefault();
            error.textContent = "";
            action(name.value.trim(), password.value)
                .then(onAuthed)
                .catch((err) => {
                    error.textContent = err instanceof ApiError ? err.message : String(err);
                });
        });
        form.append(el("h2", {}, title), name, password, el("button", { type: "submit" }, submitLabel), error);
        return form;
    }

    clear(root);
    root.append(
        el("section", { class: "login-page" },
            el("h1", {}, "Gutboard"),
            el("p", {}, "Learn about the gut microbiome, then ask the questions science has not answered yet."),
            buildForm("Sign in", "Sign in", (n, p) => client.login(n, p)),
            buildForm("New here?", "Create account", (n, p) => client.register(n, p)),
        ),
    );
}

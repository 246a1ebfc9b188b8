import { inject } from "vitest";

import { ApiClient, User } from "../src/api";

declare module "vitest" {
    export interface ProvidedContext {
        gutboardUrl: string;
    }
}

export function baseUrl(): string {
    return inject("gutboardUrl");
}

export interface TestUser {
    client: ApiClient;
    user: User;
}

let counter = 0;

export async function freshUser(prefix: string): Promise<TestUser> {
    const name = `${prefix}-${Date.now()}-${counter++}-${Math.floor(Math.random() * 1e6)}`;
    const client = new ApiClient(baseUrl());
    const auth = await client.register(name, "test-password");
    client.token = auth.token;
    return { client, user: auth.user };
}

export async function waitFor(predicate: () => boolean, timeoutMs = 8000): Promise<void> {
    const deadline = Date.now() + timeoutMs;
    while (Date.now() < deadline) {
        if (predicate()) return;
        await new Promise((resolve) => setTimeout(resolve, 25));
    }
    throw new Error("waitFor timed out");
}

export function q(root: ParentNode, selector: string): HTMLElement {
    const node = root.querySelector(selector);
    if (!node) throw new Error(`expected element ${selector}`);
    return node as HTMLElement;
}

export function submit(form: Element): void {
    form.dispatchEvent(new Event("submit", { bubbles: true, cancelable: true }));
}

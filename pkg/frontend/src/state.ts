import type { User } from "./api";

// The experiment whose condition drives topic-page layout.
export const LAYOUT_EXPERIMENT = "h23_worklearn";

export interface Session {
    token: string;
    user: User;
}

const SESSION_KEY = "gutboard-session";

export function loadSession(): Session | null {
    try {
        const raw = window.localStorage.getItem(SESSION_KEY);
        return raw ? (JSON.parse(raw) as Session) : null;
    } catch {
        return null;
    }
}

export function saveSession(session: Session): void {
    window.localStorage.setItem(SESSION_KEY, JSON.stringify(session));
}

export function clearSession(): void {
    window.localStorage.removeItem(SESSION_KEY);
}

/**
 * Per-page-load dedup for section view logging: each section fires at most
 * one event per page load. `unsee` rolls back when the server call fails so
 * a later visibility can retry (no optimistic state survives a failure).
 */
export class SectionViewTracker {
    private seen = new Set<string>();

    first(sectionId: string): boolean {
        if (this.seen.has(sectionId)) return false;
        this.seen.add(sectionId);
        return true;
    }

    unsee(sectionId: string): void {
        this.seen.delete(sectionId);
    }
}

// Typed client for the board API. The UI talks to the server exclusively
// through this module and never classifies tags or derives conditions itself.

export class ApiError extends Error {
    readonly status: number;
    readonly code: string;

    constructor(status: number, code: string, message: string) {
        super(message);
        this.status = status;
        this.code = code;
    }
}

export interface User {
    user_id: string;
    display_name: string;
    role: "participant" | "moderator";
    created_at: number;
}

export interface TokenResponse {
    token: string;
    user: User;
}

export interface Tag {
    raw: string;
    canonical: string;
}

export interface Question {
    question_id: string;
    author_id: string;
    level1_text: string;
    level2_text: string;
    tags: Tag[];
    topic_id: string | null;
    score: number;
    created_at: number;
    edited_at: number;
    edit_count: number;
    comment_count: number;
}

export interface Comment {
    comment_id: string;
    question_id: string;
    user_id: string;
    body: string;
    parent_comment_id: string | null;
    at: number;
}

export interface Level2Response {
    question_id: string;
    user_id: string;
    body: string;
    at: number;
}

export interface QuestionDetail extends Question {
    comments: Comment[];
    level2_responses: Level2Response[];
    my_level1: "yes" | "no" | null;
    qualified: boolean;
}

export interface Section {
    section_id: string;
    heading: string;
    body: string;
    media_url: string | null;
}

export interface QuizItem {
    item_id: string;
    prompt: string;
    options: string[];
}

export interface Topic {
    topic_id: string;
    title: string;
    sections: Section[];
    quiz: QuizItem[];
}

export interface Feedback {
    correct: boolean;
    expert_insight: string;
}

export interface ViewResult {
    topic_id: string;
    section_id: string;
    viewed_sections: string[];
}

export interface Progress {
    topic_id: string;
    fraction_viewed: number;
    first_attempt_accuracy: number | null;
}

export interface Assignment {
    user_id: string;
    experiment_id: string;
    condition_id: string;
    at: number;
}

export interface RoutePreview {
    canonical_tag: string;
    matched: boolean;
    topic_id: string | null;
    score: number | null;
    method: string | null;
    diagnostic: string | null;
}

export interface ListOptions {
    topic?: string;
    tag?: string;
    author?: string;
    sort?: "newest" | "top";
}

export class ApiClient {
    baseUrl: string;
    token: string | null;

    constructor(baseUrl: string, token: string | null = null) {
        this.baseUrl = baseUrl;
        this.token = token;
    }

    private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
        const headers: Record<string, string> = {};
        if (body !== undefined) headers["Content-Type"] = "application/json";
        if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
        const response = await fetch(this.baseUrl + path, {
            method,
            headers,
            body: body === undefined ? undefined : JSON.stringify(body),
        });
        if (!response.ok) {
            let code = `HTTP_${response.status}`;
            let message = response.statusText;
            try {
                const data = (await response.json()) as { error?: { code: string; message: string } };
                if (data.error) {
                    code = data.error.code;
                    message = data.error.message;
                }
            } catch {
                // non-JSON error body; keep the defaults
            }
            throw new ApiError(response.status, code, message);
        }
        return (await response.json()) as T;
    }

    register(displayName: string, password: string, role = "participant"): Promise<TokenResponse> {
        return this.request("POST", "/api/register", {
            display_name: displayName,
            password,
            role,
        });
    }

    login(displayName: string, password: string): Promise<TokenResponse> {
        return this.request("POST", "/api/login", { display_name: displayName, password });
    }

    me(): Promise<User> {
        return this.request("GET", "/api/me");
    }

    listQuestions(options: ListOptions = {}): Promise<Question[]> {
        const params = new URLSearchParams();
        if (options.topic) params.set("topic", options.topic);
        if (options.tag) params.set("tag", options.tag);
        if (options.author) params.set("author", options.author);
        if (options.sort) params.set("sort", options.sort);
        const query = params.toString();
        return this.request("GET", `/api/questions${query ? "?" + query : ""}`);
    }

    getQuestion(questionId: string): Promise<QuestionDetail> {
        return this.request("GET", `/api/questions/${questionId}`);
    }

    createQuestion(draft: { level1_text: string; level2_text: string; tags: string[] }): Promise<Question> {
        return this.request("POST", "/api/questions", draft);
    }

    answerLevel1(questionId: string, answer: "yes" | "no"): Promise<unknown> {
        return this.request("POST", `/api/questions/${questionId}/level1`, { answer });
    }

    answerLevel2(questionId: string, body: string): Promise<Level2Response> {
        return this.request("POST", `/api/questions/${questionId}/level2`, { body });
    }

    addComment(questionId: string, body: string, parentCommentId?: string): Promise<Comment> {
        return this.request("POST", `/api/questions/${questionId}/comments`, {
            body,
            parent_comment_id: parentCommentId ?? null,
        });
    }

    vote(questionId: string, direction: "up" | "down"): Promise<{ question_id: string; score: number }> {
        return this.request("POST", `/api/questions/${questionId}/vote`, { direction });
    }

    listTopics(): Promise<Topic[]> {
        return this.request("GET", "/api/topics");
    }

    getTopic(topicId: string): Promise<Topic> {
        return this.request("GET", `/api/topics/${topicId}`);
    }

    recordView(topicId: string, sectionId: string): Promise<ViewResult> {
        return this.request("POST", `/api/topics/${topicId}/sections/${sectionId}/view`);
    }

    answerQuiz(topicId: string, itemId: string, chosenIndex: number): Promise<Feedback> {
        return this.request("POST", `/api/topics/${topicId}/quiz/${itemId}/answer`, {
            chosen_index: chosenIndex,
        });
    }

    progress(topicId: string): Promise<Progress> {
        return this.request("GET", `/api/me/progress/${topicId}`);
    }

    previewTag(tag: string, context: string): Promise<RoutePreview> {
        const params = new URLSearchParams({ tag, context });
        return this.request("GET", `/api/tags/preview?${params}`);
    }

    assignment(experimentId: string): Promise<Assignment> {
        return this.request("GET", `/api/me/assignment/${experimentId}`);
    }

    logEvent(kind: string, subjectId?: string, at?: number): Promise<unknown> {
        return this.request("POST", "/api/events", { kind, subject_id: subjectId ?? null, at: at ?? null });
    }
}

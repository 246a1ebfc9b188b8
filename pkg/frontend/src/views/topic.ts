// Topic page: curated sections in order, quiz items with immediate
// right/wrong feedback plus the expert insight, and a condition-aware
// layout: work_learn users get a compose shortcut and a related-questions
// rail, learn_only users get the lecture layout. The condition comes from
// the assignment endpoint, never from client-side logic.

import { ApiClient, Feedback, Question, QuizItem, Topic } from "../api";
import { clear, el } from "../dom";
import { LAYOUT_EXPERIMENT, SectionViewTracker } from "../state";

export interface TopicPage {
    /** Mark a section as scrolled into view; logs at most once per section
     * per page load. Wired to an IntersectionObserver in real browsers. */
    sectionSeen(sectionId: string): void;
    conditionId: string;
}

export async function mountTopic(
    root: HTMLElement,
    client: ApiClient,
    topicId: string,
): Promise<TopicPage> {
    const [topic, assignment] = await Promise.all([
        client.getTopic(topicId),
        client.assignment(LAYOUT_EXPERIMENT),
    ]);
    const workLearn = assignment.condition_id === "work_learn";
    const tracker = new SectionViewTracker();

    function sectionSeen(sectionId: string): void {
        if (!tracker.first(sectionId)) return;
        client.recordView(topicId, sectionId).catch(() => tracker.unsee(sectionId));
    }

    const page = el("section", { class: "topic-page", "data-condition": assignment.condition_id });
    page.append(el("h1", {}, topic.title));

    for (const section of topic.sections) {
        const block = el(
            "section",
            { class: "content-section", "data-section": section.section_id },
            el("h3", {}, section.heading),
            el("p", {}, section.body),
        );
        if (section.media_url) {
            block.append(el("img", { src: section.media_url, alt: section.heading }));
        }
        page.append(block);
    }

    if (topic.quiz.length > 0) {
        const quizBlock = el("section", { class: "quiz" }, el("h2", {}, "Check your understanding"));
        for (const item of topic.quiz) {
            quizBlock.append(buildQuizItem(topic, item));
        }
        page.append(quizBlock);
    }

    if (workLearn) {
        page.append(await buildWorkLearnRail(topic));
    }

    clear(root);
    root.append(page);

    if (typeof IntersectionObserver !== "undefined") {
        const observer = new IntersectionObserver((entries) => {
            for (const entry of entries) {
                if (entry.isIntersecting) {
                    const id = (entry.target as HTMLElement).dataset.section;
                    if (id) sectionSeen(id);
                }
            }
        });
        page.querySelectorAll("[data-section]").forEach((node) => observer.observe(node));
    }

    function buildQuizItem(topic: Topic, item: QuizItem): HTMLElement {
        const feedbackBadge = el("span", {
            class: "quiz-badge",
            "data-testid": `quiz-feedback-${item.item_id}`,
        });
        const insight = el("p", {
            class: "expert-insight",
            "data-testid": `quiz-insight-${item.item_id}`,
        });
        const options = el("div", { class: "quiz-options" });
        item.options.forEach((option, index) => {
            options.append(
                el("button", {
                    type: "button",
                    "data-option": String(index),
                    onclick: () => {
                        void client.answerQuiz(topic.topic_id, item.item_id, index).then(
                            (feedback: Feedback) => {
                                feedbackBadge.textContent = feedback.correct ? "Correct" : "Not quite";
                                feedbackBadge.className = feedback.correct
                                    ? "quiz-badge correct"
                                    : "quiz-badge incorrect";
                                insight.textContent = feedback.expert_insight;
                            },
                        );
                    },
                }, option),
            );
        });
        return el(
            "div",
            { class: "quiz-item", "data-item": item.item_id },
            el("p", { class: "quiz-prompt" }, item.prompt),
            options,
            feedbackBadge,
            insight,
        );
    }

    async function buildWorkLearnRail(topic: Topic): Promise<HTMLElement> {
        const rail = el("aside", { class: "related-rail", "data-testid": "related-rail" });
        rail.append(
            el("a", {
                class: "compose-shortcut",
                "data-testid": "compose-shortcut",
                href: "#/compose",
            }, "Have a hypothesis about this? Ask the board"),
            el("h3", {}, "Related questions"),
        );
        const related: Question[] = await client.listQuestions({ topic: topic.topic_id });
        const list = el("ul", { class: "related-list" });
        for (const question of related.slice(0, 5)) {
            list.append(
                el("li", {},
                    el("a", { href: `#/q/${question.question_id}` }, question.level1_text)),
            );
        }
        if (related.length === 0) {
            list.append(el("li", { class: "muted" }, "No questions routed here yet."));
        }
        rail.append(list);
        return rail;
    }

    return { sectionSeen, conditionId: assignment.condition_id };
}

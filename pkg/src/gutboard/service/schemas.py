"""Pydantic request/response models for the HTTP API.

Participant-facing topic models deliberately have no ``correct_index`` or
``expert_insight`` fields; the full quiz shape exists only for moderators.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field


class RegisterRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    display_name: str = Field(min_length=1)
    password: str = Field(min_length=1)
    role: Literal["participant", "moderator"] = "participant"


class LoginRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    display_name: str = Field(min_length=1)
    password: str = Field(min_length=1)


class UserOut(BaseModel):
    user_id: str
    display_name: str
    role: str
    created_at: float


class TokenResponse(BaseModel):
    token: str
    user: UserOut


class QuestionCreate(BaseModel):
    model_config = ConfigDict(extra="forbid")
    level1_text: str
    level2_text: str
    tags: list[str]


class QuestionPatch(BaseModel):
    model_config = ConfigDict(extra="forbid")
    level1_text: str | None = None
    level2_text: str | None = None
    tags: list[str] | None = None
    hidden: bool | None = None


class TagOut(BaseModel):
    raw: str
    canonical: str


class QuestionOut(BaseModel):
    question_id: str
    author_id: str
    level1_text: str
    level2_text: str
    tags: list[TagOut]
    topic_id: str | None
    score: int
    created_at: float
    edited_at: float
    edit_count: int
    comment_count: int


class Level1Request(BaseModel):
    model_config = ConfigDict(extra="forbid")
    answer: Literal["yes", "no"]


class Level1Out(BaseModel):
    question_id: str
    user_id: str
    answer: str
    at: float


class Level2Request(BaseModel):
    model_config = ConfigDict(extra="forbid")
    body: str


class Level2Out(BaseModel):
    question_id: str
    user_id: str
    body: str
    at: float


class CommentCreate(BaseModel):
    model_config = ConfigDict(extra="forbid")
    body: str
    parent_comment_id: str | None = None


class CommentOut(BaseModel):
    comment_id: str
    question_id: str
    user_id: str
    body: str
    parent_comment_id: str | None
    at: float


class QuestionDetailOut(QuestionOut):
    comments: list[CommentOut]
    level2_responses: list[Level2Out]
    my_level1: str | None
    qualified: bool


class VoteRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    direction: Literal["up", "down"]


class VoteOut(BaseModel):
    question_id: str
    score: int


class SectionOut(BaseModel):
    section_id: str
    heading: str
    body: str
    media_url: str | None


class QuizItemPublicOut(BaseModel):
    item_id: str
    prompt: str
    options: list[str]


class QuizItemFullOut(QuizItemPublicOut):
    correct_index: int
    expert_insight: str


class TopicPublicOut(BaseModel):
    topic_id: str
    title: str
    sections: list[SectionOut]
    quiz: list[QuizItemPublicOut]


class TopicFullOut(BaseModel):
    topic_id: str
    title: str
    sections: list[SectionOut]
    quiz: list[QuizItemFullOut]


class QuizAnswerRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    chosen_index: int


class FeedbackOut(BaseModel):
    correct: bool
    expert_insight: str


class ViewOut(BaseModel):
    topic_id: str
    section_id: str
    viewed_sections: list[str]


class ProgressOut(BaseModel):
    topic_id: str
    fraction_viewed: float
    first_attempt_accuracy: float | None


class EventCreate(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: str
    subject_id: str | None = None
    at: float | None = None


class EventOut(BaseModel):
    event_id: str
    user_id: str
    kind: str
    subject_id: str | None
    at: float


class AssignmentOut(BaseModel):
    user_id: str
    experiment_id: str
    condition_id: str
    at: float


class RoutePreviewOut(BaseModel):
    canonical_tag: str
    matched: bool
    topic_id: str | None = None
    score: float | None = None
    method: str | None = None
    diagnostic: str | None = None


class MappingCreate(BaseModel):
    model_config = ConfigDict(extra="forbid")
    tag: str = Field(min_length=1)
    topic_id: str = Field(min_length=1)


class MappingOut(BaseModel):
    canonical_tag: str
    topic_id: str
    rerouted_questions: int


class UnmappedEntryOut(BaseModel):
    canonical_tag: str
    example_question_id: str | None
    occurrence_count: int
    first_seen: float

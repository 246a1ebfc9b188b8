"""HTTP/JSON surface: FastAPI app factory wrapping a Platform instance.

Every domain error maps to exactly one status + machine-readable code via
the GutboardError handler; request-shape problems come back as 400/VALIDATION.
Handlers are sync functions, so FastAPI runs them on worker threads and the
store's single-writer lock serializes mutations.
"""

from __future__ import annotations

from typing import Literal

from fastapi import Depends, FastAPI, Header, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .. import tagrouting
from ..board import Comment, Level2Response, Question
from ..core import Platform
from ..errors import GutboardError, InvalidCredentials, NotAuthorized
from ..learning import Topic
from . import schemas
from .auth import AuthService


def _error_body(code: str, message: str) -> dict:
    return {"error": {"code": code, "message": message}}


def _question_out(question: Question, comment_count: int) -> schemas.QuestionOut:
    return schemas.QuestionOut(
        question_id=question.question_id,
        author_id=question.author_id,
        level1_text=question.level1_text,
        level2_text=question.level2_text,
        tags=[schemas.TagOut(raw=t.raw, canonical=t.canonical) for t in question.tags],
        topic_id=question.topic_id,
        score=question.score,
        created_at=question.created_at,
        edited_at=question.edited_at,
        edit_count=len(question.edit_history),
        comment_count=comment_count,
    )


def _comment_out(comment: Comment) -> schemas.CommentOut:
    return schemas.CommentOut(
        comment_id=comment.comment_id,
        question_id=comment.question_id,
        user_id=comment.user_id,
        body=comment.body,
        parent_comment_id=comment.parent_comment_id,
        at=comment.at,
    )


def _level2_out(response: Level2Response) -> schemas.Level2Out:
    return schemas.Level2Out(
        question_id=response.question_id,
        user_id=response.user_id,
        body=response.body,
        at=response.at,
    )


def _topic_public(topic: Topic) -> schemas.TopicPublicOut:
    return schemas.TopicPublicOut(
        topic_id=topic.topic_id,
        title=topic.title,
        sections=[
            schemas.SectionOut(
                section_id=s.section_id, heading=s.heading, body=s.body, media_url=s.media_url
            )
            for s in topic.sections
        ],
        quiz=[
            schemas.QuizItemPublicOut(item_id=i.item_id, prompt=i.prompt, options=list(i.options))
            for i in topic.quiz
        ],
    )


def _topic_full(topic: Topic) -> schemas.TopicFullOut:
    return schemas.TopicFullOut(
        topic_id=topic.topic_id,
        title=topic.title,
        sections=[
            schemas.SectionOut(
                section_id=s.section_id, heading=s.heading, body=s.body, media_url=s.media_url
            )
            for s in topic.sections
        ],
        quiz=[
            schemas.QuizItemFullOut(
                item_id=i.item_id,
                prompt=i.prompt,
                options=list(i.options),
                correct_index=i.correct_index,
                expert_insight=i.expert_insight,
            )
            for i in topic.quiz
        ],
    )


def create_app(platform: Platform) -> FastAPI:
    app = FastAPI(title="gutboard", docs_url="/api/docs", openapi_url="/api/openapi.json")
    config = platform.config
    auth = AuthService(
        platform.store,
        session_ttl=config.session_ttl,
        scrypt_n=config.scrypt_n,
        scrypt_r=config.scrypt_r,
        scrypt_p=config.scrypt_p,
        clock=platform.clock,
    )
    board = platform.board
    learning = platform.learning
    experiments = platform.experiments

    @app.exception_handler(GutboardError)
    def handle_domain_error(request: Request, exc: GutboardError):
        return JSONResponse(status_code=exc.http_status, content=_error_body(exc.code, exc.message))

    @app.exception_handler(RequestValidationError)
    def handle_validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content=_error_body("VALIDATION", str(exc.errors())))

    def current_user(authorization: str | None = Header(default=None)) -> dict:
        user_id = auth.resolve_token(authorization)
        user = board.get_user(user_id)
        return {"user_id": user.user_id, "display_name": user.display_name, "role": user.role}

    def current_moderator(user: dict = Depends(current_user)) -> dict:
        if user["role"] != "moderator":
            raise NotAuthorized("moderator role required")
        return user

    def _user_out(user_id: str) -> schemas.UserOut:
        user = board.get_user(user_id)
        return schemas.UserOut(
            user_id=user.user_id,
            display_name=user.display_name,
            role=user.role,
            created_at=user.created_at,
        )

    # -- accounts ----------------------------------------------------------

    @app.post("/api/register", response_model=schemas.TokenResponse, status_code=201)
    def register(body: schemas.RegisterRequest, authorization: str | None = Header(default=None)):
        if body.role == "moderator" and board.moderator_exists():
            # After bootstrap, only an existing moderator may mint another.
            caller_id = auth.resolve_token(authorization)
            if board.get_user(caller_id).role != "moderator":
                raise NotAuthorized("only moderators may create moderator accounts")
        user = board.create_user(body.display_name, role=body.role)
        auth.set_password(user.user_id, body.password)
        token = auth.issue_token(user.user_id)
        experiments.log_event(user.user_id, "login")
        return schemas.TokenResponse(token=token, user=_user_out(user.user_id))

    @app.post("/api/login", response_model=schemas.TokenResponse)
    def login(body: schemas.LoginRequest):
        user = board.find_user_by_name(body.display_name)
        if user is None:
            # Same code as a bad password so names can't be probed.
            raise InvalidCredentials("wrong name or password")
        token = auth.login(user.user_id, body.password)
        experiments.log_event(user.user_id, "login")
        return schemas.TokenResponse(token=token, user=_user_out(user.user_id))

    @app.get("/api/me", response_model=schemas.UserOut)
    def me(user: dict = Depends(current_user)):
        return _user_out(user["user_id"])

    # -- board ---------------------------------------------------------------

    @app.get("/api/questions", response_model=list[schemas.QuestionOut])
    def list_questions(
        topic: str | None = Query(default=None),
        tag: str | None = Query(default=None),
        author: str | None = Query(default=None),
        sort: Literal["newest", "top"] = Query(default="newest"),
        user: dict = Depends(current_user),
    ):
        questions = board.list_questions(topic_id=topic, tag=tag, author_id=author, sort=sort)
        counts = board.comment_counts()
        experiments.log_event(user["user_id"], "board_view")
        return [_question_out(q, counts.get(q.question_id, 0)) for q in questions]

    @app.post("/api/questions", response_model=schemas.QuestionOut, status_code=201)
    def create_question(body: schemas.QuestionCreate, user: dict = Depends(current_user)):
        question = board.create_question(
            user["user_id"], body.level1_text, body.level2_text, body.tags
        )
        experiments.log_event(user["user_id"], "question_created", question.question_id)
        return _question_out(question, 0)

    @app.get("/api/questions/{question_id}", response_model=schemas.QuestionDetailOut)
    def get_question(question_id: str, user: dict = Depends(current_user)):
        question = board.get_question(question_id)
        comments = board.comments_for(question_id)
        level2 = board.level2_for(question_id)
        mine = board.level1_of(user["user_id"], question_id)
        base = _question_out(question, len(comments))
        return schemas.QuestionDetailOut(
            **base.model_dump(),
            comments=[_comment_out(c) for c in comments],
            level2_responses=[_level2_out(r) for r in level2],
            my_level1=mine.answer if mine else None,
            qualified=bool(mine and mine.answer == "yes"),
        )

    @app.patch("/api/questions/{question_id}", response_model=schemas.QuestionOut)
    def edit_question(
        question_id: str, body: schemas.QuestionPatch, user: dict = Depends(current_user)
    ):
        question = board.edit_question(
            user["user_id"],
            question_id,
            new_level1=body.level1_text,
            new_level2=body.level2_text,
            new_tags=body.tags,
            hidden=body.hidden,
        )
        experiments.log_event(user["user_id"], "question_edited", question_id)
        counts = board.comment_counts()
        return _question_out(question, counts.get(question_id, 0))

    @app.post("/api/questions/{question_id}/level1", response_model=schemas.Level1Out)
    def answer_level1(
        question_id: str, body: schemas.Level1Request, user: dict = Depends(current_user)
    ):
        response = board.answer_level1(user["user_id"], question_id, body.answer)
        experiments.log_event(user["user_id"], "level1_answered", question_id)
        return schemas.Level1Out(
            question_id=response.question_id,
            user_id=response.user_id,
            answer=response.answer,
            at=response.at,
        )

    @app.post(
        "/api/questions/{question_id}/level2",
        response_model=schemas.Level2Out,
        status_code=201,
    )
    def answer_level2(
        question_id: str, body: schemas.Level2Request, user: dict = Depends(current_user)
    ):
        response = board.answer_level2(user["user_id"], question_id, body.body)
        experiments.log_event(user["user_id"], "level2_answered", question_id)
        return _level2_out(response)

    @app.post(
        "/api/questions/{question_id}/comments",
        response_model=schemas.CommentOut,
        status_code=201,
    )
    def add_comment(
        question_id: str, body: schemas.CommentCreate, user: dict = Depends(current_user)
    ):
        comment = board.add_comment(
            user["user_id"], question_id, body.body, parent_comment_id=body.parent_comment_id
        )
        experiments.log_event(user["user_id"], "comment_added", comment.comment_id)
        return _comment_out(comment)

    @app.post("/api/questions/{question_id}/vote", response_model=schemas.VoteOut)
    def cast_vote(question_id: str, body: schemas.VoteRequest, user: dict = Depends(current_user)):
        score = board.cast_vote(user["user_id"], question_id, body.direction)
        experiments.log_event(user["user_id"], "vote_cast", question_id)
        return schemas.VoteOut(question_id=question_id, score=score)

    # -- learning ---------------------------------------------------------------

    @app.get("/api/topics", response_model=None)
    def list_topics(user: dict = Depends(current_user)):
        topics = learning.list_topics()
        if user["role"] == "moderator":
            return [_topic_full(t) for t in topics]
        return [_topic_public(t) for t in topics]

    @app.get("/api/topics/{topic_id}", response_model=None)
    def get_topic(topic_id: str, user: dict = Depends(current_user)):
        topic = learning.get_topic(topic_id)
        return _topic_full(topic) if user["role"] == "moderator" else _topic_public(topic)

    @app.post("/api/topics/{topic_id}/sections/{section_id}/view", response_model=schemas.ViewOut)
    def record_view(topic_id: str, section_id: str, user: dict = Depends(current_user)):
        viewed = learning.record_view(user["user_id"], topic_id, section_id)
        return schemas.ViewOut(topic_id=topic_id, section_id=section_id, viewed_sections=viewed)

    @app.post(
        "/api/topics/{topic_id}/quiz/{item_id}/answer", response_model=schemas.FeedbackOut
    )
    def answer_quiz(
        topic_id: str,
        item_id: str,
        body: schemas.QuizAnswerRequest,
        user: dict = Depends(current_user),
    ):
        feedback = learning.answer_quiz(user["user_id"], topic_id, item_id, body.chosen_index)
        return schemas.FeedbackOut(correct=feedback.correct, expert_insight=feedback.expert_insight)

    @app.get("/api/me/progress/{topic_id}", response_model=schemas.ProgressOut)
    def my_progress(topic_id: str, user: dict = Depends(current_user)):
        summary = learning.progress_summary(user["user_id"], topic_id)
        return schemas.ProgressOut(
            topic_id=topic_id,
            fraction_viewed=summary.fraction_viewed,
            first_attempt_accuracy=summary.first_attempt_accuracy,
        )

    # -- experiments ---------------------------------------------------------------

    @app.post("/api/events", response_model=schemas.EventOut, status_code=201)
    def log_event(body: schemas.EventCreate, user: dict = Depends(current_user)):
        event = experiments.log_event(user["user_id"], body.kind, body.subject_id, body.at)
        return schemas.EventOut(
            event_id=event.event_id,
            user_id=event.user_id,
            kind=event.kind,
            subject_id=event.subject_id,
            at=event.at,
        )

    @app.get("/api/me/assignment/{experiment_id}", response_model=schemas.AssignmentOut)
    def my_assignment(experiment_id: str, user: dict = Depends(current_user)):
        assignment = experiments.assign(user["user_id"], experiment_id)
        return schemas.AssignmentOut(
            user_id=assignment.user_id,
            experiment_id=assignment.experiment_id,
            condition_id=assignment.condition_id,
            at=assignment.at,
        )

    # -- routing ---------------------------------------------------------------

    @app.get("/api/tags/preview", response_model=schemas.RoutePreviewOut)
    def preview_tag(
        tag: str = Query(min_length=1),
        context: str = Query(default=""),
        user: dict = Depends(current_user),
    ):
        result = platform.router.preview(tag, context)
        return schemas.RoutePreviewOut(
            canonical_tag=tagrouting.normalize(tag),
            matched=result.matched,
            topic_id=result.topic_id,
            score=result.score,
            method=result.method,
            diagnostic=result.diagnostic,
        )

    # -- admin ---------------------------------------------------------------

    @app.get("/api/admin/export/{experiment_id}")
    def export_dataset(experiment_id: str, user: dict = Depends(current_moderator)):
        csv_text = experiments.export_dataset(experiment_id)
        return Response(
            content=csv_text,
            media_type="text/csv",
            headers={"Content-Disposition": f'attachment; filename="{experiment_id}.csv"'},
        )

    @app.post("/api/admin/mappings", response_model=schemas.MappingOut, status_code=201)
    def approve_mapping(body: schemas.MappingCreate, user: dict = Depends(current_moderator)):
        result = platform.approve_mapping(user["user_id"], body.tag, body.topic_id)
        return schemas.MappingOut(**result)

    @app.get("/api/admin/unmapped", response_model=list[schemas.UnmappedEntryOut])
    def list_unmapped(user: dict = Depends(current_moderator)):
        return [
            schemas.UnmappedEntryOut(
                canonical_tag=e.canonical_tag,
                example_question_id=e.example_question_id,
                occurrence_count=e.occurrence_count,
                first_seen=e.first_seen,
            )
            for e in platform.router.queue_entries()
        ]

    return app

"""Accounts and bearer-token sessions.

Passwords are salted scrypt hashes (parameters from config); tokens are
128-bit values from the OS CSPRNG, URL-safe encoded, and expire after the
configured TTL. Sessions persist in the store alongside everything else.
"""

from __future__ import annotations

import hashlib
import secrets
import time

from ..errors import GutboardError, InvalidCredentials
from ..store import Store


class TokenMissing(GutboardError):
    code = "TOKEN_MISSING"
    http_status = 401


class TokenInvalid(GutboardError):
    code = "TOKEN_INVALID"
    http_status = 401


class TokenExpired(GutboardError):
    code = "TOKEN_EXPIRED"
    http_status = 401


class AuthService:
    def __init__(
        self,
        store: Store,
        session_ttl: float,
        scrypt_n: int = 16384,
        scrypt_r: int = 8,
        scrypt_p: int = 1,
        clock=time.time,
    ):
        self.store = store
        self.session_ttl = session_ttl
        self.scrypt_params = {"n": scrypt_n, "r": scrypt_r, "p": scrypt_p}
        self.clock = clock

    def _hash(self, password: str, salt: bytes, params: dict) -> str:
        return hashlib.scrypt(
            password.encode("utf-8"),
            salt=salt,
            n=params["n"],
            r=params["r"],
            p=params["p"],
            dklen=32,
        ).hex()

    def set_password(self, user_id: str, password: str) -> None:
        salt = secrets.token_bytes(16)
        with self.store.transaction() as state:
            state["credentials"][user_id] = {
                "salt": salt.hex(),
                "hash": self._hash(password, salt, self.scrypt_params),
                **self.scrypt_params,
            }

    def check_password(self, user_id: str, password: str) -> bool:
        with self.store.read() as state:
            cred = state["credentials"].get(user_id)
        if cred is None:
            return False
        params = {"n": cred["n"], "r": cred["r"], "p": cred["p"]}
        candidate = self._hash(password, bytes.fromhex(cred["salt"]), params)
        return secrets.compare_digest(candidate, cred["hash"])

    def issue_token(self, user_id: str) -> str:
        token = secrets.token_urlsafe(16)  # 128 bits
        with self.store.transaction() as state:
            state["sessions"][token] = {
                "user_id": user_id,
                "expires_at": self.clock() + self.session_ttl,
            }
        return token

    def resolve_token(self, authorization: str | None) -> str:
        """Map an Authorization header to a user_id or raise a 401 error."""
        if not authorization:
            raise TokenMissing("missing Authorization header")
        scheme, _, token = authorization.partition(" ")
        if scheme.lower() != "bearer" or not token:
            raise TokenInvalid("expected 'Bearer <token>'")
        with self.store.read() as state:
            session = state["sessions"].get(token)
            if session is None:
                raise TokenInvalid("unknown token")
            if session["expires_at"] < self.clock():
                raise TokenExpired("token expired")
            return session["user_id"]

    def login(self, user_id: str, password: str) -> str:
        if not self.check_password(user_id, password):
            raise InvalidCredentials("wrong name or password")
        return self.issue_token(user_id)

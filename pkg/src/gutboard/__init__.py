"""Gutboard: a citizen-science platform where learners study curated topics
with rapid expert feedback and collaborate on three-level hypothesis
questions, with tags routed to topics and activity instrumented under
experiment conditions."""

__version__ = "0.1.0"

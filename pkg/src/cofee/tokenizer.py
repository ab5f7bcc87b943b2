"""Deterministic Unicode tokenizer for headline-style text.

Segmentation rules:
  - runs of digits stay together, including digit-internal ',' and '.'
    ("8,500" and "3.14" are single tokens)
  - runs of word characters form one token; zero-width non-joiner
    (U+200C) is treated as intra-word so Persian compounds stay whole
  - every other non-space character is its own token
"""

from __future__ import annotations

import re
from dataclasses import dataclass


@dataclass(frozen=True)
class Token:
    index: int
    char_start: int
    char_end: int  # exclusive


@dataclass(frozen=True)
class LanguageProfile:
    """Named tokenization rule set; `pattern` alternatives are tried in order."""

    name: str
    pattern: str

    def regex(self) -> re.Pattern:
        return re.compile(self.pattern, re.UNICODE)


DEFAULT_PROFILE = LanguageProfile(
    name="unicode",
    pattern=r"\d+(?:[.,]\d+)*|[\w‌]+|\S",
)


def tokenize(text: str, profile: LanguageProfile = DEFAULT_PROFILE) -> list[Token]:
    """Segment `text` into offset-carrying tokens; empty text gives []."""
    return [
        Token(index=i, char_start=m.start(), char_end=m.end())
        for i, m in enumerate(profile.regex().finditer(text))
    ]


def token_text(text: str, token: Token) -> str:
    return text[token.char_start : token.char_end]


def token_texts(text: str, tokens: list[Token]) -> list[str]:
    return [token_text(text, t) for t in tokens]

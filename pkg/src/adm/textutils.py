"""Shared low-level tokenization.

Everything that looks at words (hash embedder, keyword pipeline, lexicon
scorers, class-based term weighting) goes through ``basic_tokens`` so the
stages agree on what a token is.
"""

import re

# word runs; '#' does not split a token so hashtags survive as one piece
_TOKEN_RE = re.compile(r"[#\w]+", re.UNICODE)


def basic_tokens(text: str) -> list[str]:
    """Lowercase word tokens with any leading '#' stripped.

    "#AI rocks" -> ["ai", "rocks"]. Tokens that are only '#' vanish.
    """
    out = []
    for tok in _TOKEN_RE.findall(text.lower()):
        tok = tok.lstrip("#")
        if tok:
            out.append(tok)
    return out

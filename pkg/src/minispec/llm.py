"""LLM clients.

The mock client answers planning prompts from a fixture table keyed by
(task substring, world, replan round) and probe questions from a small
deterministic policy over the structured scene. An OpenAI-compatible HTTP
client exists for live runs; nothing in the test suite depends on it.
"""

import json
import re

from .errors import MiniSpecError, NoFixture
from .tokens import HeuristicTokenizer

DEFAULT_RATE_TPS = 20.0

_STOPWORDS = {
    "the", "a", "an", "is", "are", "there", "here", "any", "what", "whats",
    "which", "target", "object", "you", "can", "see", "in", "room", "of",
    "to", "for", "s", "and", "or", "it", "this", "that", "do", "does",
    "will", "would", "could", "i", "we", "find", "me", "anything",
    "something",
}

_YESNO_LEADS = ("is", "are", "can", "could", "do", "does", "will", "would")

_NUMBER_WORDS = ["Zero", "One", "Two", "Three", "Four", "Five", "Six",
                 "Seven", "Eight", "Nine", "Ten"]


def _words(text):
    return re.findall(r"[a-z0-9_]+", text.lower())


def _content_keywords(question):
    return [w for w in _words(question) if w not in _STOPWORDS]


def _object_terms(obj):
    terms = {obj.base_name.lower(), obj.color.lower()}
    terms.update(a.lower() for a in obj.attributes)
    return terms


def _matches(obj, keywords):
    terms = _object_terms(obj)
    for kw in keywords:
        if kw in terms or kw.rstrip("s") in terms:
            continue
        return False
    return True


def answer_query(question, world):
    """Deterministic stand-in for the LLM's query-prompt behavior."""
    visible = {d.label for d in world.detect()}
    objs = sorted((o for o in world.objects if o.label in visible),
                  key=lambda o: o.label)
    words = _words(question)

    if words[:2] == ["how", "many"] and len(words) > 2:
        noun = words[2]
        base = noun.rstrip("s")
        n = sum(1 for o in objs if o.base_name.lower() in (noun, base))
        word = _NUMBER_WORDS[n] if n < len(_NUMBER_WORDS) else str(n)
        return f"{word} {noun}"

    keywords = _content_keywords(question)

    if words and words[0] in _YESNO_LEADS:
        return "True" if any(_matches(o, keywords) for o in objs) else "False"

    if any(w in ("any", "what", "whats", "which", "target") for w in words):
        for obj in objs:
            if keywords and _matches(obj, keywords):
                return obj.label
        return "False"

    return f"I cannot tell about {question.strip('?')} from here."


class MockLLM:
    """Plan fixtures + query policy, emitting tokens on the mission clock."""

    def __init__(self, fixtures, rate_tps=DEFAULT_RATE_TPS, tokenizer=None):
        self.fixtures = fixtures
        self.rate_tps = rate_tps
        self.tokenizer = tokenizer or HeuristicTokenizer()

    @classmethod
    def from_fixture_file(cls, text):
        data = json.loads(text)
        return cls(data["plans"], rate_tps=data.get("rate_tps", DEFAULT_RATE_TPS))

    def _match_fixture(self, task, world_id, round_no):
        normal = re.sub(r"[^a-z0-9 ]", "", task.lower())
        for fx in self.fixtures:
            if fx.get("round", 0) != round_no:
                continue
            if fx.get("world") and fx["world"] != world_id:
                continue
            pattern = re.sub(r"[^a-z0-9 ]", "", fx["match"].lower())
            if pattern in normal:
                return fx
        raise NoFixture(task, round_no)

    def stream_complete(self, prompt, meta):
        """Token stream for a planning prompt.

        Returns (tokens, np, no): tokens in generation order; emission
        timing is the caller's job via rate_tps (one token per 1/rate s).
        """
        fx = self._match_fixture(meta.get("task", ""), meta.get("world", ""),
                                 meta.get("round", 0))
        tokens = self.tokenizer.segment(fx["plan"])
        return tokens, self.tokenizer.count(prompt), len(tokens)

    def complete(self, prompt, meta):
        """Short non-streaming completion (probe queries)."""
        question = meta.get("question", "")
        world = meta.get("world_state")
        if question and world is not None:
            return answer_query(question, world)
        raise MiniSpecError("mock client can only answer probe queries here")


class HTTPLLM:
    """OpenAI-compatible chat-completions client (optional, live use only)."""

    def __init__(self, base_url, model="gpt-4", api_key="", timeout=60.0):
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.api_key = api_key
        self.timeout = timeout
        self.tokenizer = HeuristicTokenizer()

    def _headers(self):
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        return headers

    def stream_complete(self, prompt, meta):
        import httpx
        tokens = []
        with httpx.stream(
                "POST", f"{self.base_url}/chat/completions",
                headers=self._headers(), timeout=self.timeout,
                json={"model": self.model, "stream": True,
                      "messages": [{"role": "user", "content": prompt}]},
        ) as response:
            response.raise_for_status()
            for line in response.iter_lines():
                if not line.startswith("data: ") or line == "data: [DONE]":
                    continue
                delta = json.loads(line[6:])["choices"][0]["delta"]
                piece = delta.get("content", "")
                if piece:
                    tokens.append(piece)
        return tokens, self.tokenizer.count(prompt), len(tokens)

    def complete(self, prompt, meta):
        import httpx
        response = httpx.post(
            f"{self.base_url}/chat/completions", headers=self._headers(),
            timeout=self.timeout,
            json={"model": self.model,
                  "messages": [{"role": "user", "content": prompt}]},
        )
        response.raise_for_status()
        return response.json()["choices"][0]["message"]["content"].strip()

"""Token counting.

The bundled counter is a deterministic heuristic, not a real BPE encoder:
maximal alphanumeric runs cost ceil(len/4) tokens (runs of one or two
characters cost exactly 1), every punctuation character is its own token,
a newline is one token, and other whitespace runs cost ceil(len/4). Any
object with count(text) and segment(text) can be plugged in instead.
"""

import math
import re

_RUN = re.compile(r"[A-Za-z0-9_]+|\n|[^\S\n]+|.")


class HeuristicTokenizer:

    def segment(self, text):
        tokens = []
        for m in _RUN.finditer(text):
            run = m.group(0)
            if re.fullmatch(r"[A-Za-z0-9_]+", run):
                tokens.extend(self._split_run(run))
            elif run == "\n":
                tokens.append(run)
            elif run.strip() == "" and run:
                tokens.extend(self._split_run(run))
            else:
                tokens.append(run)
        return tokens

    @staticmethod
    def _split_run(run):
        if len(run) <= 2:
            return [run]
        n = math.ceil(len(run) / 4)
        size = math.ceil(len(run) / n)
        return [run[i:i + size] for i in range(0, len(run), size)]

    def count(self, text):
        return len(self.segment(text))


def count_tokens(counter, text):
    return counter.count(text)

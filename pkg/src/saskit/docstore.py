"""Keyword retrieval over model documentation.

Whole-document BM25 ranking (k1 = 1.2, b = 0.75) over an inverted index of
lowercase alphanumeric word tokens, no stemming or stopwords.  IDF follows
the standard form ln((N - n + 0.5)/(n + 0.5) + 1), which is non-negative for
every term.  The corpus is tiny (bundled model docs plus any user-imported
text files), so determinism and auditability beat recall tweaks here.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .errors import SaskitError

K1 = 1.2
B = 0.75
SNIPPET_LIMIT = 400

_TOKEN_RE = re.compile(r"[a-z0-9]+")


class DuplicateDocId(SaskitError):
    pass


class UnknownDoc(SaskitError):
    pass


class EmptyQuery(SaskitError):
    pass


@dataclass(frozen=True)
class DocEntry:
    doc_id: str
    title: str
    body: str

    def __post_init__(self):
        if not self.body.strip():
            raise SaskitError(f"doc {self.doc_id!r} has an empty body")


@dataclass(frozen=True)
class RetrievalHit:
    doc_id: str
    score: float
    snippet: str


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


class Bm25Index:
    """Immutable inverted index over a document corpus."""

    def __init__(self, corpus: list[DocEntry]):
        if not corpus:
            raise SaskitError("corpus is empty")
        seen = set()
        for entry in corpus:
            if entry.doc_id in seen:
                raise DuplicateDocId(entry.doc_id)
            seen.add(entry.doc_id)
        self._docs = {entry.doc_id: entry for entry in corpus}
        self._term_freqs: dict[str, Counter] = {}
        self._doc_lengths: dict[str, int] = {}
        doc_freq: Counter = Counter()
        for entry in corpus:
            tokens = tokenize(entry.title + "\n" + entry.body)
            self._term_freqs[entry.doc_id] = Counter(tokens)
            self._doc_lengths[entry.doc_id] = len(tokens)
            for term in set(tokens):
                doc_freq[term] += 1
        n_docs = len(corpus)
        self._avg_length = sum(self._doc_lengths.values()) / n_docs
        self._idf = {
            term: math.log((n_docs - df + 0.5) / (df + 0.5) + 1.0)
            for term, df in doc_freq.items()
        }

    def __len__(self) -> int:
        return len(self._docs)

    def stats(self) -> dict:
        return {
            "documents": len(self._docs),
            "avg_doc_length": self._avg_length,
            "vocabulary": len(self._idf),
        }

    def doc_ids(self) -> list[str]:
        return sorted(self._docs)

    def get_doc(self, doc_id: str) -> DocEntry:
        try:
            return self._docs[doc_id]
        except KeyError:
            raise UnknownDoc(f"no document {doc_id!r}") from None

    def score(self, doc_id: str, query_tokens: list[str]) -> float:
        tf = self._term_freqs[doc_id]
        length_norm = K1 * (1.0 - B + B * self._doc_lengths[doc_id] / self._avg_length)
        total = 0.0
        for term in query_tokens:
            f = tf.get(term, 0)
            if f == 0:
                continue
            total += self._idf.get(term, 0.0) * f * (K1 + 1.0) / (f + length_norm)
        return total

    def search(self, query: str, k: int = 3) -> list[RetrievalHit]:
        tokens = tokenize(query)
        if not tokens:
            raise EmptyQuery("query has no word tokens")
        scored = []
        for doc_id in self._docs:
            s = self.score(doc_id, tokens)
            if s > 0.0:
                scored.append((doc_id, s))
        scored.sort(key=lambda pair: (-pair[1], pair[0]))
        return [
            RetrievalHit(doc_id=doc_id, score=s,
                         snippet=self._snippet(doc_id, tokens))
            for doc_id, s in scored[:k]
        ]

    def _snippet(self, doc_id: str, query_tokens: list[str]) -> str:
        body = self._docs[doc_id].body
        lowered = body.lower()
        # anchor on the rarest matching term so the snippet shows the signal
        present = [t for t in query_tokens if self._term_freqs[doc_id].get(t)]
        anchor = 0
        if present:
            best = max(present, key=lambda t: self._idf.get(t, 0.0))
            found = lowered.find(best)
            anchor = found if found >= 0 else 0
        start = max(0, anchor - SNIPPET_LIMIT // 3)
        return body[start:start + SNIPPET_LIMIT]


def ingest(corpus: list[DocEntry]) -> Bm25Index:
    """Build a fresh index; replaces any previous one atomically by rebinding."""
    return Bm25Index(corpus)


def model_corpus(registry=None) -> list[DocEntry]:
    """Doc entries generated from the model registry's documentation text."""
    from . import models
    registry = registry if registry is not None else models._DEFAULT
    return [
        DocEntry(doc_id=info.name, title=info.title, body=info.doc_text())
        for info in registry.list_models()
    ]


def load_docs_dir(path: str | Path) -> list[DocEntry]:
    """User-imported plain-text/markdown docs; filename stem becomes doc_id."""
    entries = []
    for file in sorted(Path(path).iterdir()):
        if file.suffix.lower() in {".txt", ".md", ".rst"} and file.is_file():
            entries.append(DocEntry(doc_id=file.stem,
                                    title=file.stem.replace("_", " "),
                                    body=file.read_text()))
    return entries


def default_index(registry=None, docs_dir: str | Path | None = None) -> Bm25Index:
    corpus = model_corpus(registry)
    if docs_dir is not None:
        corpus = corpus + load_docs_dir(docs_dir)
    return ingest(corpus)

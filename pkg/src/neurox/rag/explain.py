"""Retrieval-augmented explanation generation."""

from __future__ import annotations

from dataclasses import dataclass

from ..providers.base import Providers, TransportError, check_generation_params
from .index import RetrievedContext, VectorIndex, search
from .query import ExplanationQuery

DEFAULT_K = 5
DEFAULT_TEMPERATURE = 0.7
DEFAULT_TOP_P = 0.9

PROMPT_INSTRUCTION = (
    "Use the cited literature passages to explain, in clinical language, "
    "why the measured speech profile supports the predicted class."
)


@dataclass
class Explanation:
    text: str
    query: ExplanationQuery
    context: RetrievedContext
    temperature: float
    top_p: float

    @property
    def context_ids(self) -> list[int]:
        return self.context.chunk_ids

    def to_json_dict(self) -> dict:
        return {
            "text": self.text,
            "predicted_class": self.query.predicted_class,
            "probability": self.query.probability,
            "context": [
                {
                    "id": chunk.id,
                    "doc_id": chunk.doc_id,
                    "distance": distance,
                    "text": chunk.text,
                }
                for chunk, distance in self.context.hits
            ],
            "params": {"temperature": self.temperature, "top_p": self.top_p,
                       "k": len(self.context.hits)},
        }


def assemble_prompt(query: ExplanationQuery, context: RetrievedContext) -> str:
    cited = "\n".join(
        f"[chunk {chunk.id}] ({chunk.doc_id}) {chunk.text}"
        for chunk, _ in context.hits
    )
    return f"{query.render()}\n\nrelevant literature:\n{cited}\n\n{PROMPT_INSTRUCTION}"


def explain(
    query: ExplanationQuery,
    index: VectorIndex,
    providers: Providers,
    temperature: float = DEFAULT_TEMPERATURE,
    top_p: float = DEFAULT_TOP_P,
    k: int = DEFAULT_K,
) -> Explanation:
    """Embed the rendered query, retrieve top-k, prompt the generator.

    Provider failures re-raise annotated with the stage that failed.
    """
    check_generation_params(temperature, top_p)
    rendered = query.render()
    try:
        query_vector = providers.embed_sentence(rendered)
    except TransportError as exc:
        raise TransportError("explain/embed", str(exc)) from exc

    context = search(index, query_vector, k)
    prompt = assemble_prompt(query, context)
    try:
        text = providers.generate(prompt, temperature, top_p)
    except TransportError as exc:
        raise TransportError("explain/generate", str(exc)) from exc

    return Explanation(
        text=text, query=query, context=context,
        temperature=temperature, top_p=top_p,
    )

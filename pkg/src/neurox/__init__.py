"""Speech-based cognitive screening toolkit.

Extracts acoustic and linguistic representations from recordings,
classifies them with a multimodal fusion transformer trained from
scratch, and generates literature-grounded explanations through an
exact-retrieval RAG stack.  Every pretrained-model boundary sits behind
a provider interface with a deterministic offline fixture implementation.
"""

__version__ = "0.1.0"

"""Feature-extraction sidecar: turns raw stories and images into the
precomputed bundles the scoring toolkit consumes."""

__version__ = "0.1.0"

from .chunker import annotate_story, chunk_sentence, extract_nps
from .concreteness import concreteness_weights, np_weight
from .config import ExtractorConfig
from .embeddings import HashEmbedder, make_embedder
from .errors import (EndpointError, ExtractorError, ImageDecodeError,
                     LexiconMissing, MalformedGeneration, ModelUnavailable,
                     SequenceTooLong)
from .generation import (GenerationClient, GenerationResult, generate_story,
                         render_prompt)
from .order_model import (LexicalCohesionOrderModel, coherence_probabilities,
                          make_order_model)
from .pipeline import Extractor, extract_corpus
from .preprocess import preprocess_text, replace_entities

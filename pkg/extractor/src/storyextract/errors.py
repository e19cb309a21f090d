"""Extractor-side exception types."""

from __future__ import annotations


class ExtractorError(Exception):
    """Base class for extraction failures."""


class ModelUnavailable(ExtractorError):
    """A configured model backend cannot be loaded in this environment."""


class ImageDecodeError(ExtractorError):
    """An image file could not be opened or cropped."""


class LexiconMissing(ExtractorError):
    """The concreteness lexicon could not be found or parsed."""


class SequenceTooLong(ExtractorError):
    """A sentence prefix exceeds the order model's context window."""


class EndpointError(ExtractorError):
    """The story-generation endpoint is unreachable or returned an error."""


class MalformedGeneration(ExtractorError):
    """A generated story violates the prompt's sentence-count contract.

    Recorded, not fatal: callers keep the (normalized) story and the flag.
    """

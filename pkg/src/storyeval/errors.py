"""Exception types shared across the toolkit."""

from __future__ import annotations


class StoryEvalError(Exception):
    """Base class for all storyeval errors."""


class EmptyText(StoryEvalError):
    """Input text contains no sentence content."""


class IdMismatch(StoryEvalError):
    """A story and a feature bundle refer to different story ids."""


class ArityMismatch(StoryEvalError):
    """A per-sentence value list disagrees with the sentence count."""


class NoBoxes(StoryEvalError):
    """An image sequence carries zero bounding boxes; grounding is undefined."""


class EmptyCorpus(StoryEvalError):
    """An aggregation was asked for on an empty collection."""


class ThresholdMissing(StoryEvalError):
    """No corpus threshold is bound to the current run."""


class ThresholdMismatch(StoryEvalError):
    """Grounding scores computed under different thresholds are not comparable."""


class DegenerateSample(StoryEvalError):
    """A statistical test received samples it cannot operate on."""


class SampleTooLarge(StoryEvalError):
    """Requested sample size exceeds the population."""


class UnknownOption(StoryEvalError):
    """A judgment carries an option outside the four-way set."""


class ParseError(StoryEvalError):
    """A data file could not be parsed."""


class SchemaVersionMismatch(StoryEvalError):
    """A data file declares an unsupported schema or violates it structurally."""


class MissingBundle(StoryEvalError):
    """One or more stories in scope have no (valid) feature bundle."""

    def __init__(self, story_ids: list[str], message: str | None = None):
        self.story_ids = list(story_ids)
        super().__init__(message or f"missing or invalid bundles for: {', '.join(self.story_ids)}")


class IncompleteRun(StoryEvalError):
    """A run directory lacks the artifacts needed for reporting."""


class DuplicateJudgment(StoryEvalError):
    """An annotator already judged this item; judgments are write-once."""


class UnknownAnnotator(StoryEvalError):
    """The annotator id is empty or not in the configured roster."""


class ExhaustedTasks(StoryEvalError):
    """All tasks for this annotator are judged (signals completion)."""

"""Zero-shot story generation client for the prompt-setting experiments.

Three settings: `visual_context` sends the whole sequence (images
horizontally concatenated) with one prompt; `prev_sentence` and
`all_sentences` iterate over the images, injecting the stated amount of
previously generated text into the prompt. Decoding is always greedy.
Prompt templates are stored verbatim in templates/ and rendered by simple
placeholder substitution, so golden-file tests can byte-compare them.
"""

from __future__ import annotations

import base64
import io
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import httpx

from storyeval import ImageSequence, Story, split_sentences

from .errors import EndpointError, ImageDecodeError
from .resources import prompt_template

SETTINGS = ("visual_context", "prev_sentence", "all_sentences")
VARIANTS = ("P1", "P2", "P3")
EXPECTED_SENTENCES = 5


def render_prompt(setting: str, variant: str, context: str = "") -> str:
    """Exact prompt string for one request."""
    if setting not in SETTINGS:
        raise ValueError(f"setting must be one of {SETTINGS}, got {setting!r}")
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    if setting == "visual_context":
        return prompt_template("visual", variant)
    return prompt_template("linguistic", variant).replace("{context}", context)


@dataclass
class GenerationResult:
    story: Story
    flags: tuple[str, ...] = ()
    prompts: tuple[str, ...] = ()


class GenerationClient:
    """Minimal JSON-over-HTTP client for a story-generation endpoint.

    Request: {"prompt": str, "images": [str|data-uri], "layout":
    "horizontal_concat"|"single", "greedy": true}. Response: {"text": str}.
    A custom transport can be injected for tests.
    """

    def __init__(self, endpoint: str, transport: httpx.BaseTransport | None = None,
                 timeout: float = 60.0, inline_images: bool = False):
        if not endpoint:
            raise EndpointError("no generation endpoint configured")
        self.endpoint = endpoint
        self.inline_images = inline_images
        self._client = httpx.Client(transport=transport, timeout=timeout)

    def close(self):
        self._client.close()

    def complete(self, prompt: str, images: Sequence[str], layout: str) -> str:
        payload = {"prompt": prompt, "images": list(images), "layout": layout,
                   "greedy": True}
        try:
            response = self._client.post(self.endpoint, json=payload)
        except httpx.HTTPError as exc:
            raise EndpointError(f"generation endpoint failed: {exc}") from exc
        if response.status_code != 200:
            raise EndpointError(
                f"generation endpoint returned {response.status_code}: "
                f"{response.text[:200]}")
        try:
            return response.json()["text"]
        except (ValueError, KeyError) as exc:
            raise EndpointError(f"malformed endpoint response: {exc}") from exc

    def _image_payload(self, uris: Sequence[str], concat: bool) -> tuple[list[str], str]:
        if concat and self.inline_images:
            return [concat_images_data_uri([Path(u) for u in uris])], "single"
        return list(uris), "horizontal_concat" if concat else "single"


def generate_story(sequence: ImageSequence, setting: str, variant: str,
                   client: GenerationClient, story_id: str | None = None,
                   system_name: str = "zeroshot") -> GenerationResult:
    """Run one prompt setting over one image sequence."""
    uris = [img.uri for img in sequence.images]
    flags: list[str] = []
    prompts: list[str] = []

    if setting == "visual_context":
        prompt = render_prompt(setting, variant)
        prompts.append(prompt)
        images, layout = client._image_payload(uris, concat=True)
        text = client.complete(prompt, images, layout)
        sentences = split_sentences(text)
        if len(sentences) != EXPECTED_SENTENCES:
            flags.append(f"sentence_count:{len(sentences)}")
            sentences = sentences[:EXPECTED_SENTENCES]
        text = " ".join(s.text for s in sentences)
    else:
        generated: list[str] = []
        for uri in uris:
            context = ""
            if generated:
                context = generated[-1] if setting == "prev_sentence" \
                    else " ".join(generated)
            prompt = render_prompt(setting, variant, context=context)
            prompts.append(prompt)
            images, layout = client._image_payload([uri], concat=False)
            reply = split_sentences(client.complete(prompt, images, layout))
            if len(reply) != 1:
                flags.append(f"step_{len(generated) + 1}_sentences:{len(reply)}")
            generated.append(reply[0].text)
        text = " ".join(generated)

    story = Story.from_text(
        story_id or f"{sequence.sequence_id}-{system_name}-{setting}-{variant}",
        sequence.sequence_id, f"system:{system_name}", text)
    return GenerationResult(story=story, flags=tuple(flags), prompts=tuple(prompts))


def concat_images_horizontal(paths: Sequence[Path]):
    """Paste the images side by side (height-normalized); needs Pillow."""
    try:
        from PIL import Image
    except ImportError as exc:
        raise ImageDecodeError("Pillow not installed; cannot concatenate images") from exc
    frames = []
    for path in paths:
        try:
            frames.append(Image.open(path).convert("RGB"))
        except OSError as exc:
            raise ImageDecodeError(f"cannot open {path}: {exc}") from exc
    height = min(f.height for f in frames)
    resized = [f.resize((max(1, round(f.width * height / f.height)), height))
               for f in frames]
    canvas = Image.new("RGB", (sum(f.width for f in resized), height))
    x = 0
    for frame in resized:
        canvas.paste(frame, (x, 0))
        x += frame.width
    return canvas


def concat_images_data_uri(paths: Sequence[Path]) -> str:
    image = concat_images_horizontal(paths)
    buffer = io.BytesIO()
    image.save(buffer, format="PNG")
    encoded = base64.b64encode(buffer.getvalue()).decode("ascii")
    return f"data:image/png;base64,{encoded}"

"""Extractor command line: preprocess, extract, generate."""

from __future__ import annotations

import json
from pathlib import Path

import click

from storyeval import load_manifest

from .config import ExtractorConfig
from .generation import GenerationClient, generate_story
from .pipeline import extract_corpus
from .preprocess import replace_entities


@click.group()
def main():
    """Feature extraction for the storytelling evaluation toolkit."""


@main.command()
@click.argument("text")
def preprocess(text):
    """Replace named entities in TEXT and print the result."""
    click.echo(replace_entities(text).lower())


@main.command()
@click.argument("manifest_path", type=click.Path(exists=True, path_type=Path))
@click.option("--bundles", "bundles_path", required=True, type=click.Path(path_type=Path))
@click.option("--enriched-manifest", type=click.Path(path_type=Path), default=None,
              help="Also write the manifest with chunker NP spans attached.")
@click.option("--embedding-model", default="hash", show_default=True)
@click.option("--order-model", default="lexical-cohesion", show_default=True)
@click.option("--dim", default=512, show_default=True)
def extract(manifest_path, bundles_path, enriched_manifest, embedding_model,
            order_model, dim):
    """Extract feature bundles for every story in a manifest."""
    manifest = load_manifest(manifest_path)
    config = ExtractorConfig(embedding_model_id=embedding_model,
                             sentence_order_model_id=order_model,
                             embedding_dim=dim)
    count = extract_corpus(manifest, config, bundles_path, enriched_manifest)
    click.echo(f"wrote {count} bundles -> {bundles_path}")


@main.command()
@click.argument("manifest_path", type=click.Path(exists=True, path_type=Path))
@click.option("--endpoint", required=True)
@click.option("--setting", type=click.Choice(["visual_context", "prev_sentence",
                                              "all_sentences"]), required=True)
@click.option("--variant", type=click.Choice(["P1", "P2", "P3"]), required=True)
@click.option("--system-name", default="zeroshot", show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(path_type=Path))
def generate(manifest_path, endpoint, setting, variant, system_name, out_path):
    """Generate stories for every sequence in a manifest via an endpoint."""
    manifest = load_manifest(manifest_path)
    client = GenerationClient(endpoint)
    results = []
    try:
        for item in manifest.items:
            result = generate_story(item.sequence, setting, variant, client,
                                    system_name=system_name)
            results.append({"sequence_id": item.sequence.sequence_id,
                            "story": result.story.to_dict(),
                            "flags": list(result.flags)})
            if result.flags:
                click.echo(f"{item.sequence.sequence_id}: {', '.join(result.flags)}")
    finally:
        client.close()
    out_path.write_text(json.dumps({"setting": setting, "variant": variant,
                                    "stories": results}, indent=2) + "\n",
                        encoding="utf-8")
    click.echo(f"generated {len(results)} stories -> {out_path}")


if __name__ == "__main__":
    main()

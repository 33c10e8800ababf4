"""Regenerate tests/golden from the bundled sample narrative and annotations.

Only run this after reviewing a diff of the new outputs against the committed
ones; the golden files are the reference for the end-to-end tests.
"""
import shutil
import sys
import tempfile
from pathlib import Path

from chararc.config import PipelineConfig
from chararc.pipeline import run_pipeline
from chararc.plotting import normalize_svg

ROOT = Path(__file__).resolve().parents[1]
SAMPLES = ROOT / "src" / "chararc" / "data" / "samples"
GOLDEN = ROOT / "tests" / "golden"


def main():
    with tempfile.TemporaryDirectory() as tmp:
        bundle = run_pipeline(SAMPLES / "greywater.txt", PipelineConfig(),
                              SAMPLES / "greywater.annotations.jsonl", Path(tmp))
        if GOLDEN.exists():
            shutil.rmtree(GOLDEN)
        for rel, text in sorted(bundle.files.items()):
            if rel.endswith(".svg"):
                rel, text = rel + ".norm", normalize_svg(text)
            path = GOLDEN / rel
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
            print(path.relative_to(ROOT))


if __name__ == "__main__":
    sys.exit(main())

"""Regenerate the catalogue JSON from the plain-text transcription."""

import argparse
from pathlib import Path

from privic.catalogue.transcription import transcription_to_json

DATA = Path(__file__).resolve().parents[1] / "src" / "privic" / "catalogue" / "data"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--source", type=Path, default=DATA / "tables.txt")
    ap.add_argument("--out", type=Path, default=DATA / "catalogue.json")
    ap.add_argument("--check", action="store_true", help="fail if the JSON on disk is stale")
    args = ap.parse_args()
    text = transcription_to_json(args.source.read_text())
    if args.check:
        if args.out.read_text() != text:
            raise SystemExit(f"{args.out} is out of date")
        print("up to date")
        return
    args.out.write_text(text)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()

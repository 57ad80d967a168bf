#!/usr/bin/env python3
"""
Download the three UCI benchmark files into a data directory.

Usage: python scripts/fetch_datasets.py [DATA_DIR]
DATA_DIR defaults to FLNN_ABC_DATA_DIR, then ./data.
"""
import os
import sys
from pathlib import Path

import httpx
from dotenv import load_dotenv

from flnn_abc.services.dataset_loader import DATASET_PRESETS

# Load environment variables
load_dotenv()


def fetch(name: str, preset: dict, data_dir: Path, client: httpx.Client) -> bool:
    target = data_dir / preset["file_name"]
    if target.exists():
        print(f"✓ {name}: {target} already present")
        return True
    try:
        response = client.get(preset["url"])
        response.raise_for_status()
    except httpx.HTTPError as e:
        print(f"✗ {name}: download failed: {e}")
        return False
    target.write_bytes(response.content)
    print(f"✓ {name}: {len(response.content)} bytes -> {target}")
    return True


def main() -> int:
    data_dir = Path(sys.argv[1] if len(sys.argv) > 1 else os.getenv("FLNN_ABC_DATA_DIR", "data"))
    data_dir.mkdir(parents=True, exist_ok=True)
    with httpx.Client(timeout=60.0, follow_redirects=True) as client:
        results = [fetch(name, preset, data_dir, client) for name, preset in DATASET_PRESETS.items()]
    if not all(results):
        print(f"\n❌ {results.count(False)} dataset(s) could not be downloaded")
        return 1
    print("\n✅ All datasets available")
    return 0


if __name__ == "__main__":
    sys.exit(main())

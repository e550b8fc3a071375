#!/usr/bin/env python3
# Copyright 2026 The Trackaudit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
"""Sentence-embedding backend for `audit analyze --embedder model`.

Reads JSON lines {"text": ...} on stdin, writes one JSON array of floats
per line on stdout. Set TRACKAUDIT_EMBEDDER_CMD="python3 tools/embed_mpnet.py".
TRACKAUDIT_MODEL picks the model (default all-mpnet-base-v2).
"""

import json
import os
import sys


def main() -> int:
    texts = [json.loads(line)["text"] for line in sys.stdin if line.strip()]
    if not texts:
        return 0
    from sentence_transformers import SentenceTransformer

    model = SentenceTransformer(
        os.environ.get("TRACKAUDIT_MODEL", "sentence-transformers/all-mpnet-base-v2"))
    vectors = model.encode(texts, batch_size=64, normalize_embeddings=True,
                           show_progress_bar=False)
    out = sys.stdout
    for v in vectors:
        out.write(json.dumps([float(x) for x in v]))
        out.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())

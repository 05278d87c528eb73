#!/usr/bin/env python3
# Copyright 2026 The AIQT Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Convert the digit JSON files of the `mnist` npm package to a gzipped IDX file.

Each input file <digit>.json holds {"data": [...]} with 784 floats per image,
pixel/255 rounded to three decimals; round(v * 255) recovers the byte. Images
are interleaved by class (image i of digit d lands at index 10 * i + d).

    npm pack mnist && tar xzf mnist-*.tgz
    python3 tools/prepare_mnist.py package/src/digits data/mnist/images-idx3-ubyte.gz
"""

import argparse
import gzip
import json
import pathlib
import struct


def load_digit(path: pathlib.Path) -> list[bytes]:
    flat = json.loads(path.read_text())["data"]
    if len(flat) % 784:
        raise SystemExit(f"{path}: length {len(flat)} is not a multiple of 784")
    out = []
    for start in range(0, len(flat), 784):
        pixels = [round(v * 255) for v in flat[start:start + 784]]
        if any(p < 0 or p > 255 for p in pixels):
            raise SystemExit(f"{path}: pixel outside [0, 255]")
        out.append(bytes(pixels))
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("digits_dir", type=pathlib.Path)
    ap.add_argument("output", type=pathlib.Path)
    args = ap.parse_args()

    per_class = [load_digit(args.digits_dir / f"{d}.json") for d in range(10)]
    images = []
    for i in range(max(len(c) for c in per_class)):
        for c in per_class:
            if i < len(c):
                images.append(c[i])

    args.output.parent.mkdir(parents=True, exist_ok=True)
    header = struct.pack(">IIII", 0x00000803, len(images), 28, 28)
    # mtime=0 keeps the archive byte-identical across runs.
    with open(args.output, "wb") as raw:
        with gzip.GzipFile(fileobj=raw, mode="wb", mtime=0) as gz:
            gz.write(header)
            for img in images:
                gz.write(img)
    print(f"wrote {len(images)} images to {args.output}")


if __name__ == "__main__":
    main()

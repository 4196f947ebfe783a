#!/usr/bin/env python3
# Copyright 2026 The stvqc Authors
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

"""Writes gzipped IDX files from the 5000-image MNIST sample bundled with mlxtend.

The full MNIST files work as-is with `stvqc train --mnist DIR`; this script
exists for machines without them. Rows are shuffled with a fixed seed and
split half/half into train-* and t10k-*.

usage: make_mnist_subset.py SOURCE OUT_DIR
  SOURCE  mlxtend wheel (.whl), or mnist_5k.csv[.gz] (784 pixels then label per row)
"""

import argparse
import gzip
import io
import os
import random
import struct
import zipfile

MEMBER = "mlxtend/data/data/mnist_5k.csv.gz"


def read_rows(source):
    if source.endswith(".whl"):
        with zipfile.ZipFile(source) as z:
            raw = gzip.decompress(z.read(MEMBER))
    elif source.endswith(".gz"):
        with gzip.open(source, "rb") as f:
            raw = f.read()
    else:
        with open(source, "rb") as f:
            raw = f.read()
    rows = []
    for line in io.StringIO(raw.decode("ascii")):
        vals = [int(float(v)) for v in line.strip().split(",") if v]
        if len(vals) != 785:
            raise SystemExit(f"expected 785 columns, got {len(vals)}")
        rows.append((bytes(vals[:784]), vals[784]))
    return rows


def write_idx(out_dir, prefix, rows):
    with gzip.GzipFile(os.path.join(out_dir, f"{prefix}-images-idx3-ubyte.gz"), "wb", mtime=0) as f:
        f.write(struct.pack(">IIII", 0x803, len(rows), 28, 28))
        for px, _ in rows:
            f.write(px)
    with gzip.GzipFile(os.path.join(out_dir, f"{prefix}-labels-idx1-ubyte.gz"), "wb", mtime=0) as f:
        f.write(struct.pack(">II", 0x801, len(rows)))
        f.write(bytes(lbl for _, lbl in rows))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("source")
    ap.add_argument("out_dir")
    ap.add_argument("--seed", type=int, default=2026)
    args = ap.parse_args()
    rows = read_rows(args.source)
    random.Random(args.seed).shuffle(rows)
    half = len(rows) // 2
    os.makedirs(args.out_dir, exist_ok=True)
    write_idx(args.out_dir, "train", rows[:half])
    write_idx(args.out_dir, "t10k", rows[half:])
    print(f"wrote {half} train / {len(rows) - half} test images to {args.out_dir}")


if __name__ == "__main__":
    main()

# Copyright 2026 The CloudAdapt Authors.
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

"""Writes the UDLT v1 golden vectors in this directory.

Built with struct only so the files do not depend on the C++ encoder.
Source model for all vectors: P floats, value i * 0.5 at index i.
"""

import pathlib
import struct

HERE = pathlib.Path(__file__).resolve().parent


def fnv1a64(data):
    h = 0xCBF29CE484222325
    for b in data:
        h ^= b
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


def source(p):
    return [i * 0.5 for i in range(p)]


def udlt(dtype, p, indices, values):
    fp = fnv1a64(struct.pack("<%df" % p, *source(p)))
    k = len(indices)
    out = b"UDLT" + struct.pack("<BBH", 1, dtype, 0)
    out += struct.pack("<QQQ", k, p, fp)
    out += struct.pack("<%dI" % k, *indices)
    out += struct.pack(("<%df" if dtype == 0 else "<%de") % k, *values)
    return out


VECTORS = {
    "golden_fp32.udlt": (0, 10, [1, 4, 9], [1.5, -0.25, 3.0e-5]),
    "golden_fp16.udlt": (1, 10, [0, 2, 3, 7], [1.5, -0.25, 65504.0, 0.1]),
    "golden_empty.udlt": (0, 5, [], []),
}

if __name__ == "__main__":
    for name, args in VECTORS.items():
        (HERE / name).write_bytes(udlt(*args))

"""Deterministic seed derivation for fan-out tasks.

Every stochastic draw in a benchmark descends from the CLI seed through
this function, so reruns are bit-identical regardless of execution order
or worker count.
"""

import hashlib


def derive_seed(*parts) -> int:
    text = "/".join(str(p) for p in parts)
    digest = hashlib.blake2b(text.encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")

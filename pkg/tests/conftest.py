from __future__ import annotations

import pytest


@pytest.fixture(scope="session")
def acceptance_cache_dir(tmp_path_factory):
    return tmp_path_factory.mktemp("enum-cache")


@pytest.fixture(scope="session")
def classified(acceptance_cache_dir):
    """Memoized per-degree classification of every primitive configuration.

    Returns a callable g -> list of dicts with keys config, data, cert,
    nocert (certificate or NoCertificate payload, exactly one non-None).
    """
    from cmrecip.cmtypes import enumerate_admissible
    from cmrecip.reciprocity import NoCertificate, classify, image_lattice

    memo: dict[int, list[dict]] = {}

    def get(g: int) -> list[dict]:
        if g not in memo:
            rows = []
            for config in enumerate_admissible(
                g, require_primitive=True, cache_dir=acceptance_cache_dir
            ):
                data = image_lattice(config)
                try:
                    cert, payload = classify(data), None
                except NoCertificate as exc:
                    cert, payload = None, exc.payload
                rows.append(
                    {"config": config, "data": data, "cert": cert, "nocert": payload}
                )
            memo[g] = rows
        return memo[g]

    return get

"""Synthetic best/worst annotators over latent sentiment scores.

Each simulated annotator perceives every tuple item as its latent score
plus Gaussian noise and picks the perceived maximum as best and the
perceived minimum (among the remaining items) as worst. Noise is drawn
from a single seeded PCG64 generator into an array indexed by
(annotator, tuple, item), so output is byte-identical for a fixed config
regardless of how generation is ordered.
"""

from dataclasses import dataclass

import numpy as np

from .design import Tuple4
from .errors import DataError
from .scoring import Response

# fixed epoch so repeated runs produce identical timestamps
_BASE_UNIX_MS = 1_500_000_000_000


@dataclass
class SimConfig:
    latent: dict[str, float]
    n_annotators: int
    noise_sigma: float
    seed: int

    def __post_init__(self):
        if self.n_annotators < 1:
            raise ValueError("n_annotators must be >= 1")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")


def simulate(tuples: list[Tuple4], config: SimConfig) -> list[Response]:
    """Generate one response per (annotator, tuple).

    Ties in perceived value break by presentation order: best is the first
    maximum, worst the first minimum among the other items. Timestamps are
    synthetic and strictly increasing in emission order (annotators outer,
    tuples inner).
    """
    for tup in tuples:
        for item in tup.items:
            if item not in config.latent:
                raise DataError(f"tuple {tup.tuple_id}: no latent score for {item!r}")

    n_annotators = config.n_annotators
    latents = np.array([[config.latent[item] for item in tup.items] for tup in tuples])
    if config.noise_sigma > 0:
        rng = np.random.default_rng(config.seed)
        noise = rng.normal(0.0, config.noise_sigma, size=(n_annotators, len(tuples), 4))
    else:
        noise = None

    width = max(2, len(str(n_annotators - 1)))
    responses: list[Response] = []
    counter = 0
    for a in range(n_annotators):
        annotator_id = f"sim{a:0{width}d}"
        for t, tup in enumerate(tuples):
            perceived = latents[t] + noise[a, t] if noise is not None else latents[t]
            best_idx = int(np.argmax(perceived))
            worst_idx = min(
                (i for i in range(4) if i != best_idx),
                key=lambda i: (perceived[i], i),
            )
            responses.append(Response(
                response_id=f"r{counter:08d}",
                annotator_id=annotator_id,
                tuple_id=tup.tuple_id,
                best=tup.items[best_idx],
                worst=tup.items[worst_idx],
                unix_ms=_BASE_UNIX_MS + counter,
            ))
            counter += 1
    return responses

"""cribworld: a deterministic nursery world for grounded first-word learning.

An immobile infant agent lies in a crib inside a 20x20 m room.  It senses the
world through a raycast retina, touch, audio (sparse binary speech frames) and
interoception (thirst, hunger), and acts through muscle channels and a vocal
channel.  A scripted caregiver investigates cries, delivers bottles, narrates
object names and answers learned words.  The environment never emits a reward.
"""

__version__ = "0.1.0"

from .codec import SdrCodebook, SdrStream, build_codebook, encode_utterance, decode_stream
from .session import Session, SessionConfig

__all__ = [
    "SdrCodebook",
    "SdrStream",
    "build_codebook",
    "encode_utterance",
    "decode_stream",
    "Session",
    "SessionConfig",
    "__version__",
]

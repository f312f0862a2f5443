from .encode import GROUPS, SYMBOLS, Encoding, EventSlot, encode

__all__ = ["Encoding", "EventSlot", "GROUPS", "SYMBOLS", "encode"]

"""Integer codes for the reserved values shared by every layer of the checker."""

BOT = -3
EMPTY = -2
NULL = -1
FALSE = 0
TRUE = 1

# row ids live well above any argument value (arguments are 1..k)
ROW_BASE = 1000

RESERVED = {"BOT": BOT, "EMPTY": EMPTY, "NULL": NULL, "TRUE": TRUE, "FALSE": FALSE}
_NAMES = {BOT: "BOT", EMPTY: "EMPTY", NULL: "NULL"}


def show(value: int) -> str:
    """Render a value the way witnesses print it (reserved codes by name)."""
    return _NAMES.get(value, str(value))

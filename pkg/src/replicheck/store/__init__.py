from .explore import (Config, Execution, History, Invocation, Machine, Step, StepError,
                      explore, replay)
from .interp import Program
from .state import INIT, Event, StoreState, check_invariants

__all__ = ["Config", "Event", "Execution", "History", "INIT", "Invocation", "Machine",
           "Program", "Step", "StepError", "StoreState", "check_invariants", "explore", "replay"]

"""Interactive bipartition stone-picking game.

2^n stones; each round Player 1 takes a stone, then Player 2 splits the
survivors into two groups; the next pick fixes a group and discards the
other.  Player 1 wins by completing n+1 picks, Player 2 by running the
board empty first.  States are immutable; every transition returns a new
state and appends to the transcript, so replaying a transcript reproduces
the state exactly.

The engine's Player 1 rule (minimum element of the larger pending group)
keeps at least half the survivors every round, which is enough to finish
from 2^n stones regardless of the splits.  Player 2 can be driven by the
stage predicates of a long-choice instance, which makes every completed
engine-vs-engine playout a feasible sequence for that instance.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .core import FiniteSet
from .problems import (
    ConstrainedLongChoiceInstance,
    LongChoiceInstance,
)

MIN_GAME_N = 2
MAX_GAME_N = 8

PHASE_PICK = "awaiting_pick"
PHASE_PARTITION = "awaiting_partition"
PHASE_FINISHED = "finished"

PLAYER1 = "player1"
PLAYER2 = "player2"
HUMAN = "human"
ENGINE = "engine"


class GameError(ValueError):
    """Illegal move or malformed game call; code is machine-readable."""

    def __init__(self, code: str, detail: str = ""):
        super().__init__(detail or code)
        self.code = code


@dataclass(frozen=True)
class Roles:
    player1: str = ENGINE
    player2: str = ENGINE

    def __post_init__(self):
        for seat in (self.player1, self.player2):
            if seat not in (HUMAN, ENGINE):
                raise GameError("bad_role", f"unknown role {seat!r}")


@dataclass(frozen=True)
class GameOutcome:
    winner: str
    transcript: tuple


@dataclass(frozen=True)
class GameState:
    n: int
    round: int
    alive: FiniteSet
    picks: tuple[int, ...]
    discarded: FiniteSet
    pending: tuple[FiniteSet, FiniteSet] | None
    phase: str
    roles: Roles
    winner: str | None = None
    transcript: tuple = ()

    @property
    def finished(self) -> bool:
        return self.phase == PHASE_FINISHED

    def outcome(self) -> GameOutcome | None:
        if self.winner is None:
            return None
        return GameOutcome(self.winner, self.transcript)

    def seat_to_move(self) -> str | None:
        if self.phase == PHASE_PICK:
            return PLAYER1
        if self.phase == PHASE_PARTITION:
            return PLAYER2
        return None


def new_game(n: int, roles: Roles = Roles()) -> GameState:
    if not MIN_GAME_N <= n <= MAX_GAME_N:
        raise GameError("bad_width", f"n={n} outside [{MIN_GAME_N}, {MAX_GAME_N}]")
    return GameState(
        n=n,
        round=0,
        alive=FiniteSet.full(n),
        picks=(),
        discarded=FiniteSet.of(n, ()),
        pending=None,
        phase=PHASE_PICK,
        roles=roles,
    )


def apply_pick(state: GameState, stone: int) -> GameState:
    """Player 1 takes a stone; with a split pending, the untouched group
    leaves the game immediately."""
    if state.phase != PHASE_PICK:
        raise GameError("wrong_phase", f"cannot pick during {state.phase}")
    if stone not in state.alive:
        raise GameError("stone_not_alive", f"stone {stone} is not on the board")
    discarded = state.discarded
    if state.pending is None:
        survivors = state.alive.without([stone])
    else:
        group0, group1 = state.pending
        kept = group0 if stone in group0 else group1
        dropped = group1 if stone in group0 else group0
        survivors = kept.without([stone])
        discarded = FiniteSet.of(state.n, (*discarded, *dropped))
    picks = state.picks + (stone,)
    done = len(picks) == state.n + 1
    return replace(
        state,
        round=state.round + 1,
        alive=survivors,
        picks=picks,
        discarded=discarded,
        pending=None,
        phase=PHASE_FINISHED if done else PHASE_PARTITION,
        winner=PLAYER1 if done else None,
        transcript=state.transcript + (("pick", stone),),
    )


def apply_partition(state: GameState, group0) -> GameState:
    """Player 2 splits the survivors; an empty board ends the game instead."""
    if state.phase != PHASE_PARTITION:
        raise GameError("wrong_phase", f"cannot partition during {state.phase}")
    members = tuple(group0)
    for stone in members:
        if stone not in state.alive:
            raise GameError("stone_not_alive",
                            f"stone {stone} is not on the board")
    zero = FiniteSet.of(state.n, members)
    one = state.alive.without(zero.members)
    entry = ("partition", zero.members)
    if len(state.alive) == 0:
        return replace(
            state,
            pending=None,
            phase=PHASE_FINISHED,
            winner=PLAYER2,
            transcript=state.transcript + (entry,),
        )
    return replace(
        state,
        pending=(zero, one),
        phase=PHASE_PICK,
        transcript=state.transcript + (entry,),
    )


def engine_pick(state: GameState) -> int:
    """Minimum stone of the larger pending group, group 0 on ties; before
    any split, simply the minimum survivor."""
    if state.phase != PHASE_PICK:
        raise GameError("wrong_phase", f"no pick expected during {state.phase}")
    if state.pending is None:
        return min(state.alive)
    group0, group1 = state.pending
    chosen = group0 if len(group0) >= len(group1) else group1
    if len(chosen) == 0:
        chosen = group1 if chosen is group0 else group0
    return min(chosen)


def partition_from_instance(state: GameState,
                            inst: LongChoiceInstance | ConstrainedLongChoiceInstance) -> FiniteSet:
    """Group 0 as dictated by the instance's stage predicate at this round:
    the survivors the predicate maps to 0.  Rounds past the last predicate
    split trivially (everything in group 0)."""
    if state.phase != PHASE_PARTITION:
        raise GameError("wrong_phase", f"no partition expected during {state.phase}")
    if inst.n != state.n:
        raise GameError("bad_width",
                        f"instance width {inst.n} does not match game width {state.n}")
    stage = len(state.picks) - 1
    if stage >= len(inst.predicates):
        return state.alive
    pred = inst.predicates[stage]
    zeros = [x for x in state.alive if pred(*state.picks, x) == 0]
    return FiniteSet.of(state.n, zeros)


def balanced_partition(state: GameState) -> FiniteSet:
    """Instance-free Player 2: the smaller half of the survivors by value.

    The adversarially best split sizes are the balanced ones, so this is
    the natural default opponent when no predicates are loaded.
    """
    if state.phase != PHASE_PARTITION:
        raise GameError("wrong_phase", f"no partition expected during {state.phase}")
    members = state.alive.members
    return FiniteSet.of(state.n, members[: len(members) // 2])


def playout(inst: LongChoiceInstance | ConstrainedLongChoiceInstance,
            roles: Roles = Roles()) -> GameState:
    """Engine vs predicate-driven Player 2, run to the end.

    With a constrained instance the opening pick honors the forced head;
    afterwards the engine rule takes over.
    """
    state = new_game(inst.n, roles)
    forced = getattr(inst, "a0", None)
    while not state.finished:
        if state.phase == PHASE_PICK:
            if forced is not None and not state.picks:
                stone = forced
            else:
                stone = engine_pick(state)
            state = apply_pick(state, stone)
        else:
            state = apply_partition(state, partition_from_instance(state, inst))
    return state


def replay(n: int, transcript, roles: Roles = Roles()) -> GameState:
    """Re-run a transcript move by move; raises GameError where it diverges
    from legality, so equal transcripts imply equal states."""
    state = new_game(n, roles)
    for entry in transcript:
        move, payload = entry
        if move == "pick":
            state = apply_pick(state, payload)
        elif move == "partition":
            state = apply_partition(state, payload)
        else:
            raise GameError("bad_move", f"unknown transcript entry {move!r}")
    return state


def conservation_holds(state: GameState) -> bool:
    return len(state.picks) + len(state.alive) + len(state.discarded) == 1 << state.n


def adversary_search(n: int, *, literal: bool) -> bool:
    """Exhaustive Player 2 search against the engine rule.

    literal=True tries every subset of the survivors as group 0.  The
    quotient mode tries every split size instead: the engine keeps the
    larger group whatever its members are, so whether the picks complete
    depends only on sizes, and one representative per size covers every
    subset of that size.  True when Player 1 completes n+1 picks against
    every line.
    """
    if literal:

        def beaten(state: GameState) -> bool:
            if state.finished:
                return state.winner != PLAYER1
            if state.phase == PHASE_PICK:
                return beaten(apply_pick(state, engine_pick(state)))
            members = state.alive.members
            for mask in range(1 << len(members)):
                group0 = [members[i] for i in range(len(members)) if mask >> i & 1]
                if beaten(apply_partition(state, group0)):
                    return True
            return False

        return not beaten(new_game(n))

    def survives(alive: int, picks_left: int) -> bool:
        if picks_left == 0:
            return True
        if alive == 0:
            return False
        for low in range(alive + 1):
            kept = max(low, alive - low)
            if not survives(kept - 1, picks_left - 1):
                return False
        return True

    total = 1 << n
    return survives(total - 1, n)

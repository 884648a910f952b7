// A view is a still photo of the last server payload plus transport-level
// banners.  Nothing here decides legality; the helpers only translate the
// payload into things a renderer can show.

import type {
  EngineMove,
  GameStatePayload,
  LegalMoves,
  Seat,
  TranscriptEntry,
} from "./protocol.js";

export interface Notice {
  code: string;
  detail: string;
}

export interface SessionView {
  id: string;
  state: GameStatePayload;
  /** Hints from the last GET; null means stale (a mutation landed since). */
  legalMoves: LegalMoves | null;
  lastEngineMove: EngineMove | null;
  /** Inline message from the last rejected move, cleared on success. */
  notice: Notice | null;
  /** Set once the server answers 404 for this session. */
  expired: boolean;
}

export function freshView(id: string, state: GameStatePayload): SessionView {
  return {
    id,
    state,
    legalMoves: null,
    lastEngineMove: null,
    notice: null,
    expired: false,
  };
}

/** Whose turn the phase implies; display only, the server still referees. */
export function seatToMove(state: GameStatePayload): Seat | null {
  if (state.phase === "awaiting_pick") return "player1";
  if (state.phase === "awaiting_partition") return "player2";
  return null;
}

export function humanToMove(state: GameStatePayload): boolean {
  const seat = seatToMove(state);
  return seat !== null && state.roles[seat] === "human";
}

export function engineToMove(state: GameStatePayload): boolean {
  const seat = seatToMove(state);
  return seat !== null && state.roles[seat] === "engine";
}

export function describeMove(entry: TranscriptEntry): string {
  if (entry[0] === "pick") return `Player 1 picked stone ${entry[1]}`;
  const group = (entry[1] as number[]).join(", ");
  return `Player 2 split off {${group}}`;
}

/** Move history straight off the payload's transcript. */
export function history(state: GameStatePayload): string[] {
  return state.transcript.map(describeMove);
}

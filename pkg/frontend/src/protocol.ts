// Wire types for the stone-picking session API.  These mirror the server's
// JSON payloads field for field; the client never reshapes or re-derives
// anything it receives.

export type Phase = "awaiting_pick" | "awaiting_partition" | "finished";
export type Seat = "player1" | "player2";
export type Occupant = "human" | "engine";

/** One recorded move: ["pick", stone] or ["partition", [stones...]]. */
export type TranscriptEntry = ["pick", number] | ["partition", number[]];

export interface GameStatePayload {
  n: number;
  round: number;
  phase: Phase;
  alive: number[];
  picks: number[];
  discarded: number[];
  pending: { group0: number[]; group1: number[] } | null;
  roles: Record<Seat, Occupant>;
  winner: Seat | null;
  transcript: TranscriptEntry[];
}

/** Hints from GET only; absent keys mean the move kind is off the table. */
export interface LegalMoves {
  pick?: number[];
  partition_of?: number[];
}

export interface CreateSessionRequest {
  n: number;
  /** 1 / "player1" seats the human as the picker, 2 / "player2" as the
      splitter; omit to watch engine vs engine. */
  human_seat?: number | Seat | null;
  /** Serialized long-choice instance driving the engine's Player 2. */
  instance?: unknown;
}

export interface CreateSessionResponse {
  id: string;
  state: GameStatePayload;
}

export interface SessionSnapshot {
  state: GameStatePayload;
  legal_moves: LegalMoves;
}

export interface MoveResponse {
  state: GameStatePayload;
}

export type EngineMove =
  | { type: "pick"; stone: number }
  | { type: "partition"; group0: number[] };

export interface EngineStepResponse {
  state: GameStatePayload;
  move: EngineMove;
}

export interface ErrorBody {
  error: { code: string; detail: string };
}

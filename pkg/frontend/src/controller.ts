// Drives one session at a time.  Optimistic updates are deliberately
// absent: every mutation waits for the server payload and the view is then
// replaced wholesale, so the screen can never disagree with the server.
//
// Rule rejections (409) become inline notices and the view stays put; a 404
// flips the expired banner.  Anything else is a real fault and propagates.

import { ApiError, SessionApi, type FetchLike } from "./api.js";
import { PartitionDraft } from "./draft.js";
import { freshView, type SessionView } from "./view.js";
import type {
  CreateSessionRequest,
  EngineMove,
  GameStatePayload,
  LegalMoves,
} from "./protocol.js";

export class DraftIncompleteError extends Error {
  constructor(readonly missing: number[]) {
    super(`stones still unassigned: ${missing.join(", ")}`);
    this.name = "DraftIncompleteError";
  }
}

export class Playground {
  readonly api: SessionApi;
  view: SessionView | null = null;
  draft: PartitionDraft | null = null;

  constructor(baseUrl: string, fetchFn?: FetchLike) {
    this.api = new SessionApi(baseUrl, fetchFn);
  }

  /** Start a session; creation rejections (bad seat, width, instance) throw. */
  async create(req: CreateSessionRequest): Promise<SessionView> {
    const res = await this.api.createSession(req);
    this.view = freshView(res.id, res.state);
    this.draft = new PartitionDraft(res.state.alive);
    return this.view;
  }

  /** Pull state plus legal-move hints; the only source of hints. */
  async refresh(): Promise<SessionView> {
    const view = this.required();
    try {
      const snap = await this.api.getSession(view.id);
      this.accept(snap.state, snap.legal_moves);
    } catch (err) {
      this.absorb(err);
    }
    return this.view!;
  }

  /** Human Player 1 move, sent exactly as given; true if the server took it. */
  async submitPick(stone: number): Promise<boolean> {
    const view = this.required();
    try {
      const res = await this.api.pick(view.id, stone);
      this.accept(res.state, null);
      return true;
    } catch (err) {
      this.absorb(err);
      return false;
    }
  }

  /** Human Player 2 move, sent exactly as given; true if the server took it. */
  async submitPartition(group0: number[]): Promise<boolean> {
    const view = this.required();
    try {
      const res = await this.api.partition(view.id, group0);
      this.accept(res.state, null);
      return true;
    } catch (err) {
      this.absorb(err);
      return false;
    }
  }

  /** Submit the staged split.  Incomplete drafts never reach the wire. */
  async submitDraft(): Promise<boolean> {
    const draft = this.draft;
    if (draft === null) throw new Error("no active session");
    if (!draft.complete) throw new DraftIncompleteError(draft.missing);
    return this.submitPartition(draft.group0());
  }

  /** Ask the engine for its move; null if the server refused. */
  async engineStep(): Promise<EngineMove | null> {
    const view = this.required();
    try {
      const res = await this.api.engineStep(view.id);
      this.accept(res.state, null);
      this.view!.lastEngineMove = res.move;
      return res.move;
    } catch (err) {
      this.absorb(err);
      return null;
    }
  }

  async close(): Promise<void> {
    const view = this.view;
    if (view === null) return;
    try {
      await this.api.deleteSession(view.id);
    } catch (err) {
      this.absorb(err);
    }
    this.view = null;
    this.draft = null;
  }

  private required(): SessionView {
    if (this.view === null) throw new Error("no active session");
    return this.view;
  }

  /** Wholesale replacement: the payload is the view, never a merge. */
  private accept(state: GameStatePayload, legalMoves: LegalMoves | null): void {
    const view = this.required();
    this.view = {
      ...view,
      state,
      legalMoves,
      notice: null,
    };
    this.draft = new PartitionDraft(state.alive);
  }

  private absorb(err: unknown): void {
    if (!(err instanceof ApiError)) throw err;
    const view = this.required();
    this.view = {
      ...view,
      notice: { code: err.code, detail: err.detail },
      expired: view.expired || err.status === 404,
    };
  }
}

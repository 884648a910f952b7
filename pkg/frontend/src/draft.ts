// Staged Player 2 move.  A draft tracks which side each alive stone goes to
// and nothing more; whether the finished split is any good is the server's
// call.  The one client-side gate is completeness: the submit affordance
// stays off until every alive stone has a side.

export type Group = 0 | 1;

export class PartitionDraft {
  private assignment = new Map<number, Group>();

  constructor(readonly alive: readonly number[]) {}

  assign(stone: number, group: Group): void {
    if (!this.alive.includes(stone)) {
      throw new Error(`stone ${stone} is not on the board`);
    }
    this.assignment.set(stone, group);
  }

  /** Cycle unassigned -> group 0 -> group 1 -> unassigned (click handler). */
  cycle(stone: number): void {
    const current = this.groupOf(stone);
    if (current === undefined) this.assign(stone, 0);
    else if (current === 0) this.assign(stone, 1);
    else this.assignment.delete(stone);
  }

  clear(stone: number): void {
    this.assignment.delete(stone);
  }

  groupOf(stone: number): Group | undefined {
    return this.assignment.get(stone);
  }

  get complete(): boolean {
    return this.alive.every((stone) => this.assignment.has(stone));
  }

  /** Alive stones still waiting for a side, in board order. */
  get missing(): number[] {
    return this.alive.filter((stone) => !this.assignment.has(stone));
  }

  /** The exact group-0 list a submission will carry, in board order. */
  group0(): number[] {
    return this.alive.filter((stone) => this.assignment.get(stone) === 0);
  }
}

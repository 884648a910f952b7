// Plain-DOM shell around the Playground controller.  Everything on screen
// is read back off view/draft after each awaited call; there is no local
// game state to drift.

import { DraftIncompleteError, Playground } from "./controller.js";
import { engineToMove, history, humanToMove, seatToMove } from "./view.js";
import type { CreateSessionRequest } from "./protocol.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text) node.textContent = text;
  return node;
}

export function mountPlayground(root: HTMLElement): void {
  let playground: Playground | null = null;

  const form = el("form", { class: "setup" });
  const baseUrl = el("input", { value: "http://127.0.0.1:8611", size: "28" });
  const nInput = el("input", { type: "number", min: "2", max: "8", value: "3" });
  const seatSelect = el("select");
  for (const [value, label] of [
    ["2", "play Player 2 (split)"],
    ["1", "play Player 1 (pick)"],
    ["", "watch engine vs engine"],
  ] as const) {
    const opt = el("option", { value }, label);
    seatSelect.appendChild(opt);
  }
  const fileInput = el("input", { type: "file", accept: ".json,application/json" });
  const startButton = el("button", { type: "submit" }, "start session");
  form.append("server ", baseUrl, " board bits ", nInput, " ", seatSelect,
              " Player 2 instance ", fileInput, " ", startButton);

  const banner = el("p", { class: "banner" });
  const board = el("div", { class: "board" });
  const controls = el("div", { class: "controls" });
  const log = el("ol", { class: "history" });
  root.append(form, banner, board, controls, log);

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void startSession();
  });

  async function startSession(): Promise<void> {
    const req: CreateSessionRequest = { n: Number(nInput.value) };
    if (seatSelect.value !== "") req.human_seat = Number(seatSelect.value);
    const file = fileInput.files?.[0];
    if (file) req.instance = JSON.parse(await file.text());
    playground = new Playground(baseUrl.value.replace(/\/$/, ""));
    try {
      await playground.create(req);
      await playground.refresh();
    } catch (err) {
      banner.textContent = String(err);
      playground = null;
      return;
    }
    render();
  }

  async function act(action: () => Promise<unknown>): Promise<void> {
    try {
      await action();
    } catch (err) {
      if (err instanceof DraftIncompleteError) banner.textContent = err.message;
      else throw err;
    }
    if (playground?.view && !playground.view.expired) await playground.refresh();
    render();
  }

  function render(): void {
    board.replaceChildren();
    controls.replaceChildren();
    log.replaceChildren();
    if (!playground?.view) return;
    const { state, notice, expired } = playground.view;
    const draft = playground.draft;

    banner.textContent = expired
      ? "session expired on the server"
      : notice
        ? `rejected: ${notice.detail}`
        : "";

    const pickTurn = humanToMove(state) && state.phase === "awaiting_pick";
    const splitTurn = humanToMove(state) && state.phase === "awaiting_partition";

    for (const stone of state.alive) {
      const side = draft?.groupOf(stone);
      const label = splitTurn && side !== undefined ? `${stone}:g${side}` : String(stone);
      const button = el("button", { type: "button", class: "stone" }, label);
      if (pickTurn) {
        button.addEventListener("click", () => void act(() => playground!.submitPick(stone)));
      } else if (splitTurn) {
        button.addEventListener("click", () => {
          draft?.cycle(stone);
          render();
        });
      } else {
        button.disabled = true;
      }
      board.appendChild(button);
    }
    board.appendChild(el("span", {}, ` picked: ${state.picks.join(", ") || "none"}`));
    board.appendChild(el("span", {}, ` out: ${state.discarded.join(", ") || "none"}`));

    if (splitTurn && draft) {
      const submit = el("button", { type: "button" }, "submit split");
      submit.disabled = !draft.complete;
      if (!draft.complete) {
        controls.appendChild(el("span", {}, `unassigned: ${draft.missing.join(", ")} `));
      }
      submit.addEventListener("click", () => void act(() => playground!.submitDraft()));
      controls.appendChild(submit);
    }
    if (engineToMove(state)) {
      const step = el("button", { type: "button" }, `engine moves (${seatToMove(state)})`);
      step.addEventListener("click", () => void act(() => playground!.engineStep()));
      controls.appendChild(step);
    }
    if (state.phase === "finished") {
      controls.appendChild(el("strong", {}, `${state.winner} wins`));
    }

    for (const line of history(state)) log.appendChild(el("li", {}, line));
  }
}

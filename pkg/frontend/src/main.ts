/** Browser entry point: wires the DOM shell in index.html to the API
 * client, the state reducers, and the renderer. All decision logic lives
 * in the imported modules; this file is glue only.
 */

import { HttpApiClient } from "./api.js";
import { renderConsole, type VNode } from "./render.js";
import {
  applyStreamMessage,
  discardDraft,
  newConsoleState,
  removeDraftItem,
  selectCasualty,
} from "./state.js";
import type { NetworkDoc, StreamMessage } from "./types.js";
import { commitDraft, refreshPreview, stageAndPreview } from "./whatif.js";

const state = newConsoleState();
let api: HttpApiClient | null = null;
let network: NetworkDoc | null = null;
let socket: WebSocket | null = null;

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

function toDom(node: VNode | string): Node {
  if (typeof node === "string") return document.createTextNode(node);
  const dom = document.createElement(node.tag);
  for (const [key, value] of Object.entries(node.attrs)) dom.setAttribute(key, value);
  for (const child of node.children) dom.appendChild(toDom(child));
  return dom;
}

function redraw(): void {
  const root = el<HTMLDivElement>("app");
  root.replaceChildren(toDom(renderConsole(state, network?.nodes ?? [])));
}

function note(text: string): void {
  state.notices.push(text);
  redraw();
}

function fillStates(): void {
  const vital = el<HTMLSelectElement>("vital").value;
  const stateSelect = el<HTMLSelectElement>("vstate");
  stateSelect.replaceChildren();
  const node = network?.nodes.find((n) => n.name === vital);
  for (const s of node?.states ?? []) {
    const option = document.createElement("option");
    option.value = s;
    option.textContent = s;
    stateSelect.appendChild(option);
  }
}

function fillVitals(): void {
  const vitalSelect = el<HTMLSelectElement>("vital");
  vitalSelect.replaceChildren();
  for (const node of network?.nodes ?? []) {
    const option = document.createElement("option");
    option.value = node.name;
    option.textContent = node.name;
    vitalSelect.appendChild(option);
  }
  fillStates();
}

function openStream(client: HttpApiClient): void {
  socket?.close();
  socket = new WebSocket(client.streamUrl());
  socket.onmessage = (event) => {
    const msg = JSON.parse(event.data) as StreamMessage;
    applyStreamMessage(state, msg);
    if (msg.type === "model") {
      // new vocabulary; the staging selects must match it
      client.getNetwork().then((doc) => {
        network = doc;
        fillVitals();
        redraw();
      });
    }
    redraw();
  };
  socket.onclose = () => {
    if (api === client) setTimeout(() => openStream(client), 2000);
  };
}

async function connect(): Promise<void> {
  const client = new HttpApiClient(el<HTMLInputElement>("url").value);
  try {
    network = await client.getNetwork();
    const session = await client.getSession();
    api = client;
    applyStreamMessage(state, { type: "hello", ...session });
    fillVitals();
    openStream(client);
    redraw();
  } catch (err) {
    note(`connect failed: ${err instanceof Error ? err.message : String(err)}`);
  }
}

async function guarded(action: () => Promise<void>): Promise<void> {
  try {
    await action();
  } catch (err) {
    note(err instanceof Error ? err.message : String(err));
  }
  redraw();
}

function init(): void {
  el<HTMLButtonElement>("connect").addEventListener("click", () => void connect());
  el<HTMLSelectElement>("vital").addEventListener("change", fillStates);

  el<HTMLButtonElement>("stage").addEventListener("click", () =>
    guarded(async () => {
      if (!api) throw new Error("not connected");
      const raw = el<HTMLInputElement>("ts").value.trim();
      const item = {
        vital: el<HTMLSelectElement>("vital").value,
        state: el<HTMLSelectElement>("vstate").value,
        ...(raw === "" ? {} : { timestamp_ms: Number(raw) }),
      };
      await stageAndPreview(api, state, item);
    }),
  );

  el<HTMLButtonElement>("discard").addEventListener("click", () => {
    discardDraft(state);
    redraw();
  });

  el<HTMLButtonElement>("commit").addEventListener("click", () =>
    guarded(async () => {
      if (!api) throw new Error("not connected");
      await commitDraft(api, state);
    }),
  );

  el<HTMLDivElement>("app").addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const remove = target.closest<HTMLElement>("[data-remove]");
    if (remove && api) {
      removeDraftItem(state, remove.dataset.remove ?? "");
      void guarded(() => refreshPreview(api!, state));
      return;
    }
    const row = target.closest<HTMLElement>("[data-casualty]");
    if (row) {
      selectCasualty(state, row.dataset.casualty ?? null);
      redraw();
    }
  });

  redraw();
}

init();

/** Thin typed client for the mission gateway's HTTP and WS endpoints. */

import type { GatewayEvent, MissionReport, WorldInfo } from "./types.js";

export class HttpError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

async function request(base: string, path: string, init?: RequestInit) {
  const res = await fetch(base + path, init);
  if (!res.ok) {
    let detail = res.statusText;
    try {
      detail = (await res.json()).detail ?? detail;
    } catch {
      // non-JSON error body
    }
    throw new HttpError(res.status, detail);
  }
  return res;
}

export async function listWorlds(base: string): Promise<WorldInfo[]> {
  const res = await request(base, "/worlds");
  return (await res.json()).worlds;
}

export async function submitMission(
  base: string,
  task: string,
  world: string,
  options?: Record<string, unknown>
): Promise<string> {
  const res = await request(base, "/missions", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ task, world, ...(options ? { options } : {}) }),
  });
  return (await res.json()).mission_id;
}

export async function abortMission(base: string, missionId: string) {
  await request(base, `/missions/${missionId}/abort`, { method: "POST" });
}

export async function fetchReport(
  base: string,
  missionId: string
): Promise<MissionReport> {
  const res = await request(base, `/missions/${missionId}/report`);
  return await res.json();
}

export function eventsUrl(base: string, missionId: string): string {
  return base.replace(/^http/, "ws") + `/missions/${missionId}/events`;
}

export interface SocketLike {
  onmessage: ((ev: any) => void) | null;
  onclose: ((ev?: any) => void) | null;
  onerror: ((err?: any) => void) | null;
  close(): void;
}

export type SocketFactory = (url: string) => SocketLike;

/** Stream mission events in seq order, reconnecting once on a gap.
 *
 * The gateway replays from seq 0 on every connect, so the handler must be
 * idempotent under rebuild: on reconnect we start a fresh pass and hand
 * the caller `reset` first.
 */
export function streamEvents(
  url: string,
  makeSocket: SocketFactory,
  handlers: {
    reset: () => void;
    event: (event: GatewayEvent) => boolean | void; // true = stop
    closed: () => void;
  }
): () => void {
  let socket: SocketLike | null = null;
  let stopped = false;
  let expected = 0;

  const open = () => {
    handlers.reset();
    expected = 0;
    socket = makeSocket(url);
    socket.onmessage = (msg) => {
      if (stopped) return;
      const event = JSON.parse(String(msg.data)) as GatewayEvent;
      if (event.seq !== expected) {
        socket?.close();
        open(); // gap: full replay from seq 0
        return;
      }
      expected++;
      if (handlers.event(event)) {
        stopped = true;
        socket?.close();
      }
    };
    socket.onclose = () => {
      if (!stopped) handlers.closed();
    };
    socket.onerror = () => socket?.close();
  };

  open();
  return () => {
    stopped = true;
    socket?.close();
  };
}

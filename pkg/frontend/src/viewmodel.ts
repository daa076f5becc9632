/** Pure event-sourced view state.
 *
 * Everything on screen derives from the gateway's event stream through
 * applyEvent; there is no client-side simulation. Replaying the same
 * events always rebuilds the identical view, which is what makes
 * reconnect-and-replay safe.
 */

import type { DronePose, GatewayEvent, ObjectMarker } from "./types.js";

export type ChipStatus = "pending" | "running" | "done";

export interface Chip {
  text: string;
  status: ChipStatus;
  result?: string;
}

export interface Round {
  divider?: string; // set on replan rounds, e.g. "replan (plan statement)"
  ribbon: string;   // raw streamed plan text for this round
  chips: Chip[];
}

export interface ProbeEntry {
  question: string;
  answer?: string;
}

export interface Banner {
  kind: "done" | "failed" | "aborted";
  text: string;
}

export interface ViewModel {
  connection: "idle" | "connecting" | "live" | "closed";
  phase: string;
  task: string;
  world: string;
  streamMode: boolean;
  hfov: number;
  drone: DronePose | null;
  track: DronePose[];
  objects: ObjectMarker[];
  rounds: Round[];
  probes: ProbeEntry[];
  logs: string[];
  tokenCount: number;
  rTimeMs: number | null;
  cTimeMs: number;
  answer: unknown;
  banner: Banner | null;
  lastSeq: number;
}

export class SeqGapError extends Error {
  constructor(expected: number, got: number) {
    super(`event gap: expected seq ${expected}, got ${got}`);
  }
}

const REPLAN_LABELS: Record<string, string> = {
  explicit_statement: "plan statement",
  syntax_error: "syntax error",
  skill_fault: "skill fault",
  policy_trigger: "policy trigger",
};

export function initialView(): ViewModel {
  return {
    connection: "idle",
    phase: "Idle",
    task: "",
    world: "",
    streamMode: true,
    hfov: 80,
    drone: null,
    track: [],
    objects: [],
    rounds: [],
    probes: [],
    logs: [],
    tokenCount: 0,
    rTimeMs: null,
    cTimeMs: 0,
    answer: null,
    banner: null,
    lastSeq: -1,
  };
}

function currentRound(view: ViewModel): Round {
  if (view.rounds.length === 0) view.rounds.push({ ribbon: "", chips: [] });
  return view.rounds[view.rounds.length - 1];
}

function runningChip(round: Round): Chip | undefined {
  for (let i = round.chips.length - 1; i >= 0; i--) {
    if (round.chips[i].status === "running") return round.chips[i];
  }
  return undefined;
}

export function applyEvent(view: ViewModel, event: GatewayEvent): ViewModel {
  if (event.seq !== view.lastSeq + 1) {
    throw new SeqGapError(view.lastSeq + 1, event.seq);
  }
  view.lastSeq = event.seq;
  view.cTimeMs = event.at_ms;
  const p = event.payload;

  switch (event.kind) {
    case "mission_started":
      view.task = p.task;
      view.world = p.world;
      view.streamMode = !!p.stream;
      view.hfov = p.hfov ?? view.hfov;
      view.drone = p.drone ?? null;
      if (view.drone) view.track = [view.drone];
      view.objects = p.objects ?? [];
      view.phase = "Planning";
      view.rounds = [{ ribbon: "", chips: [] }];
      break;

    case "token_received":
      currentRound(view).ribbon += p.text;
      view.tokenCount = p.upto;
      break;

    case "unit_parsed":
      currentRound(view).chips.push({ text: "", status: "pending" });
      break;

    case "statement_started": {
      const round = currentRound(view);
      view.phase = "Executing";
      if (view.rTimeMs === null) view.rTimeMs = event.at_ms;
      const active = runningChip(round);
      if (active) break; // nested statement inside a composite chip
      const pending = round.chips.find((c) => c.status === "pending");
      if (pending) {
        pending.text = p.text;
        pending.status = "running";
      } else {
        // batch mode publishes no unit_parsed events
        round.chips.push({ text: p.text, status: "running" });
      }
      break;
    }

    case "statement_finished": {
      const chip = runningChip(currentRound(view));
      if (chip && chip.text === p.text) {
        chip.status = "done";
        chip.result = String(p.result);
      }
      break;
    }

    case "drone_state":
      view.drone = { x: p.x, y: p.y, z: p.z, yaw: p.yaw };
      view.track.push(view.drone);
      break;

    case "scene_updated":
      break; // the structured scene only feeds the planner

    case "probe_issued":
      view.probes.push({ question: p.question });
      break;

    case "probe_answered": {
      const open = view.probes.find(
        (q) => q.answer === undefined && q.question === p.question
      );
      if (open) open.answer = String(p.answer);
      break;
    }

    case "log_emitted":
      view.logs.push(p.text);
      break;

    case "replan_triggered": {
      const label = REPLAN_LABELS[p.reason] ?? p.reason;
      view.phase = "Replanning";
      view.rounds.push({ divider: `replan (${label})`, ribbon: "", chips: [] });
      break;
    }

    case "aborted":
      view.banner = { kind: "aborted", text: "mission aborted" };
      break;

    case "mission_done":
      view.phase = "Done";
      view.answer = p.answer;
      view.banner = {
        kind: "done",
        text: p.answer != null ? `done: ${p.answer}` : "mission complete",
      };
      break;

    case "mission_failed":
      view.phase = "Failed";
      if (p.reason === "aborted") {
        view.banner = { kind: "aborted", text: "mission aborted" };
      } else {
        view.banner = { kind: "failed", text: `failed: ${p.reason}` };
      }
      break;
  }
  return view;
}

export function rebuild(events: GatewayEvent[]): ViewModel {
  const view = initialView();
  for (const event of events) applyEvent(view, event);
  return view;
}

export function abortEnabled(view: ViewModel): boolean {
  return ["Planning", "Executing", "Replanning"].includes(view.phase);
}

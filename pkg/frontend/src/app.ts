/** DOM wiring for the operator console. */

import { renderWorld } from "./canvas.js";
import {
  abortMission,
  eventsUrl,
  fetchReport,
  HttpError,
  listWorlds,
  streamEvents,
  submitMission,
} from "./gateway.js";
import type { GatewayEvent } from "./types.js";
import {
  abortEnabled,
  applyEvent,
  initialView,
  ViewModel,
} from "./viewmodel.js";

const base = location.origin;

const el = {
  task: document.getElementById("task") as HTMLInputElement,
  world: document.getElementById("world") as HTMLSelectElement,
  submit: document.getElementById("submit") as HTMLButtonElement,
  abort: document.getElementById("abort") as HTMLButtonElement,
  phase: document.getElementById("phase")!,
  banner: document.getElementById("banner")!,
  ribbon: document.getElementById("ribbon")!,
  timeline: document.getElementById("timeline")!,
  feed: document.getElementById("feed")!,
  metrics: document.getElementById("metrics")!,
  toast: document.getElementById("toast")!,
  canvas: document.getElementById("map") as HTMLCanvasElement,
};

let view: ViewModel = initialView();
let missionId: string | null = null;
let stopStream: (() => void) | null = null;

function toast(text: string) {
  el.toast.textContent = text;
  el.toast.classList.add("show");
  setTimeout(() => el.toast.classList.remove("show"), 4000);
}

function fmtSeconds(ms: number | null): string {
  return ms === null ? "-" : (ms / 1000).toFixed(2) + "s";
}

function render() {
  el.phase.textContent = view.phase;
  el.submit.disabled = abortEnabled(view);
  el.abort.disabled = !abortEnabled(view);

  if (view.banner) {
    el.banner.textContent = view.banner.text;
    el.banner.className = `banner ${view.banner.kind}`;
  } else {
    el.banner.textContent = "";
    el.banner.className = "banner hidden";
  }

  el.ribbon.innerHTML = "";
  el.timeline.innerHTML = "";
  view.rounds.forEach((round) => {
    if (round.divider) {
      const div = document.createElement("div");
      div.className = "divider";
      div.textContent = round.divider;
      el.ribbon.appendChild(div.cloneNode(true));
      el.timeline.appendChild(div);
    }
    const pre = document.createElement("pre");
    pre.textContent = round.ribbon;
    el.ribbon.appendChild(pre);
    for (const chip of round.chips) {
      const span = document.createElement("span");
      span.className = `chip ${chip.status}`;
      span.textContent = chip.text || "...";
      if (chip.result !== undefined) span.title = `=> ${chip.result}`;
      el.timeline.appendChild(span);
    }
  });

  el.feed.innerHTML = "";
  for (const probe of view.probes) {
    const card = document.createElement("div");
    card.className = "qa";
    card.textContent = `Q: ${probe.question}\nA: ${probe.answer ?? "..."}`;
    el.feed.appendChild(card);
  }
  for (const line of view.logs) {
    const log = document.createElement("div");
    log.className = "log";
    log.textContent = line;
    el.feed.appendChild(log);
  }

  el.metrics.textContent =
    `R-Time ${fmtSeconds(view.rTimeMs)} | ` +
    `C-Time ${fmtSeconds(view.cTimeMs)} | tokens ${view.tokenCount}`;

  const ctx = el.canvas.getContext("2d")!;
  renderWorld(ctx, view, el.canvas.width, el.canvas.height);
}

function follow(id: string) {
  stopStream?.();
  stopStream = streamEvents(eventsUrl(base, id), (url) => new WebSocket(url), {
    reset: () => {
      view = initialView();
      view.connection = "live";
      render();
    },
    event: (event: GatewayEvent) => {
      applyEvent(view, event);
      render();
      if (["mission_done", "mission_failed"].includes(event.kind)) {
        fetchReport(base, id)
          .then((r) =>
            toast(
              `report: ${r.mode}, success=${r.success}, ` +
                `tokens=${r.tokens}`
            )
          )
          .catch(() => undefined);
        return true;
      }
      return false;
    },
    closed: () => {
      view.connection = "closed";
      render();
    },
  });
}

async function submit() {
  try {
    missionId = await submitMission(base, el.task.value, el.world.value);
    follow(missionId);
  } catch (err) {
    toast(err instanceof HttpError ? err.message : String(err));
  }
}

async function abort() {
  if (!missionId) return;
  try {
    await abortMission(base, missionId);
  } catch (err) {
    if (err instanceof HttpError && err.status === 409) {
      render(); // already terminal; the stream has the final word
    } else {
      toast(String(err));
    }
  }
}

async function init() {
  try {
    const worlds = await listWorlds(base);
    for (const w of worlds) {
      const opt = document.createElement("option");
      opt.value = w.id;
      opt.textContent = `${w.id}`;
      el.world.appendChild(opt);
    }
    el.world.onchange = () => {
      const match = worlds.find((w) => w.id === el.world.value);
      if (match && !el.task.value) el.task.value = match.task;
    };
  } catch (err) {
    toast(`gateway unreachable: ${err}`);
  }
  el.submit.onclick = submit;
  el.abort.onclick = abort;
  render();
}

init();

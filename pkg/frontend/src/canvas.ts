/** Top-down world renderer.
 *
 * Draws object markers, obstacle rings, the drone with its FOV wedge, and
 * the flown track. Works against the minimal Draw2D surface so tests can
 * record draw calls without a real canvas.
 */

import type { ViewModel } from "./viewmodel.js";

export interface Draw2D {
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  globalAlpha: number;
  font: string;
  clearRect(x: number, y: number, w: number, h: number): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  closePath(): void;
  fill(): void;
  stroke(): void;
  fillText(text: string, x: number, y: number): void;
}

const MARGIN = 30;

interface Mapper {
  toPx(x: number, y: number): [number, number];
  scale: number;
}

function fitWorld(view: ViewModel, width: number, height: number): Mapper {
  const xs = [0];
  const ys = [0];
  for (const o of view.objects) {
    xs.push(o.x);
    ys.push(o.y);
  }
  for (const p of view.track) {
    xs.push(p.x);
    ys.push(p.y);
  }
  const minX = Math.min(...xs) - 60;
  const maxX = Math.max(...xs) + 60;
  const minY = Math.min(...ys) - 60;
  const maxY = Math.max(...ys) + 60;
  const scale = Math.min(
    (width - 2 * MARGIN) / (maxX - minX),
    (height - 2 * MARGIN) / (maxY - minY)
  );
  return {
    scale,
    // world +y is "forward" at yaw 0; screen y grows downward
    toPx: (x, y) => [
      MARGIN + (x - minX) * scale,
      height - MARGIN - (y - minY) * scale,
    ],
  };
}

export function renderWorld(
  ctx: Draw2D,
  view: ViewModel,
  width: number,
  height: number
) {
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#10141c";
  ctx.fillRect(0, 0, width, height);
  if (!view.drone) {
    ctx.fillStyle = "#667";
    ctx.font = "14px sans-serif";
    ctx.fillText("no mission", width / 2 - 34, height / 2);
    return;
  }
  const map = fitWorld(view, width, height);

  // flown track
  if (view.track.length > 1) {
    ctx.strokeStyle = "#3a7bd5";
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    const [sx, sy] = map.toPx(view.track[0].x, view.track[0].y);
    ctx.moveTo(sx, sy);
    for (const p of view.track.slice(1)) {
      const [px, py] = map.toPx(p.x, p.y);
      ctx.lineTo(px, py);
    }
    ctx.stroke();
  }

  // object markers with obstacle rings
  ctx.font = "11px sans-serif";
  for (const o of view.objects) {
    const [px, py] = map.toPx(o.x, o.y);
    if (o.radius > 0) {
      ctx.strokeStyle = "#a33";
      ctx.lineWidth = 1;
      ctx.beginPath();
      ctx.arc(px, py, o.radius * map.scale, 0, 2 * Math.PI);
      ctx.stroke();
    }
    ctx.fillStyle = o.color || "#ccc";
    ctx.beginPath();
    ctx.arc(px, py, 5, 0, 2 * Math.PI);
    ctx.fill();
    ctx.fillStyle = "#dde";
    ctx.fillText(o.label, px + 8, py - 6);
  }

  // FOV wedge then the drone itself
  const d = view.drone;
  const [dx, dy] = map.toPx(d.x, d.y);
  const heading = (d.yaw - 90) * (Math.PI / 180); // screen angle of +yaw
  const half = (view.hfov / 2) * (Math.PI / 180);
  const reach = 180 * map.scale;
  ctx.globalAlpha = 0.12;
  ctx.fillStyle = "#7fd57b";
  ctx.beginPath();
  ctx.moveTo(dx, dy);
  ctx.arc(dx, dy, reach, heading - half, heading + half);
  ctx.closePath();
  ctx.fill();
  ctx.globalAlpha = 1.0;

  ctx.fillStyle = "#7fd57b";
  ctx.beginPath();
  ctx.moveTo(dx + 9 * Math.cos(heading), dy + 9 * Math.sin(heading));
  ctx.lineTo(
    dx + 7 * Math.cos(heading + 2.5),
    dy + 7 * Math.sin(heading + 2.5)
  );
  ctx.lineTo(
    dx + 7 * Math.cos(heading - 2.5),
    dy + 7 * Math.sin(heading - 2.5)
  );
  ctx.closePath();
  ctx.fill();
}

// SPDX-License-Identifier: Apache-2.0
import init, { quasiMcpCurve, acyclicitySurface, simulateAndLearn } from "./pkg/mvbdag_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function drawCurve() {
  const c = $("curve"), g = c.getContext("2d");
  const tMax = 2, pts = 301;
  let v;
  try {
    v = quasiMcpCurve(num("lambda"), num("delta"), tMax, pts);
  } catch (e) {
    g.clearRect(0, 0, c.width, c.height);
    g.fillText(String(e), 10, 20);
    return;
  }
  const top = Math.max(...v) * 1.15 || 1;
  g.clearRect(0, 0, c.width, c.height);
  g.strokeStyle = "#bbb";
  g.beginPath();
  g.moveTo(c.width / 2, 0); g.lineTo(c.width / 2, c.height);
  g.moveTo(0, c.height - 1); g.lineTo(c.width, c.height - 1);
  g.stroke();
  g.strokeStyle = "#1b5e9f";
  g.lineWidth = 2;
  g.beginPath();
  v.forEach((y, i) => {
    const px = (i / (pts - 1)) * c.width;
    const py = c.height - (y / top) * c.height;
    i ? g.lineTo(px, py) : g.moveTo(px, py);
  });
  g.stroke();
  g.fillStyle = "#555";
  g.fillText(`t in [-${tMax}, ${tMax}], max ${Math.max(...v).toPrecision(3)}`, 8, 14);
}

function drawSurface() {
  const c = $("surface"), g = c.getContext("2d");
  const n = 60, wMax = num("wmax");
  const h = acyclicitySurface(wMax, n);
  const top = Math.max(...h) || 1;
  const cell = c.width / n;
  for (let b = 0; b < n; b++) {
    for (let a = 0; a < n; a++) {
      const s = Math.sqrt(h[b * n + a] / top);
      g.fillStyle = `rgb(${Math.round(255 * s)}, ${Math.round(80 * (1 - s))}, ${Math.round(255 * (1 - s))})`;
      g.fillRect(a * cell, b * cell, cell + 1, cell + 1);
    }
  }
  $("hmax").textContent = `max h = ${top.toPrecision(4)} at a = b = ${wMax}`;
}

function run() {
  $("status").textContent = "running...";
  setTimeout(() => {
    try {
      const t0 = performance.now();
      const r = simulateAndLearn(num("p"), num("k"), $("family").value, num("n"), BigInt(num("seed")));
      $("truth").textContent = "truth\n" + r.truth;
      $("estimate").textContent = "estimate\n" + r.estimate;
      $("status").textContent = `SHD ${r.shd}, ${((performance.now() - t0) / 1000).toFixed(1)} s`;
      r.free();
    } catch (e) {
      $("status").textContent = String(e);
    }
  }, 10);
}

await init();
["lambda", "delta"].forEach((id) => $(id).addEventListener("input", drawCurve));
$("wmax").addEventListener("input", drawSurface);
$("run").addEventListener("click", run);
drawCurve();
drawSurface();
